"""Hahn-echo signal of a spin coupled to a thermally driven mechanical mode.

Semiclassical model: the mode follows ``x(t) = x0 cos(omega_r t + phi0)``
during one echo sequence, and the spin picks up the phase difference between
the two free-evolution halves. Averaging over ``phi0`` gives a Bessel-J0
contrast for a coherent amplitude; averaging that over a Rayleigh amplitude
distribution gives the closed-form Gaussian contrast. All rates are angular
internally; ``lambda / 2 pi`` is what gets reported.
"""
from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import InputError, NoConvergence, RankDeficient, Underdetermined
from .fitting import levenberg_marquardt
from .parallel import make_rng, ordered_map

DEFAULT_CHUNK = 16384


@dataclass(frozen=True)
class Coupling:
    lam: float  # single-phonon coupling, rad/s
    z_p: float  # m
    omega_r: float  # rad/s

    def __post_init__(self):
        if not (self.lam >= 0 and self.z_p > 0 and self.omega_r > 0):
            raise InputError("coupling needs lam >= 0, z_p > 0, omega_r > 0")

    @classmethod
    def from_hz(cls, lambda_over_2pi, z_p, f_r):
        return cls(2.0 * np.pi * lambda_over_2pi, z_p, 2.0 * np.pi * f_r)

    @property
    def lambda_over_2pi(self):
        return self.lam / (2.0 * np.pi)

    @property
    def phase_scale(self):
        """lambda / (z_p omega_r): spin phase per meter of amplitude."""
        return self.lam / (self.z_p * self.omega_r)


@dataclass(frozen=True)
class DecoherenceModel:
    t2: float
    p: float = 3.0

    def __post_init__(self):
        if not (self.t2 > 0 and self.p > 0):
            raise InputError("t2 and p must be positive")

    def chi(self, tau):
        return (2.0 * np.asarray(tau, dtype=float) / self.t2) ** self.p


@dataclass
class EchoCurve:
    tau: np.ndarray
    contrast: np.ndarray

    def __post_init__(self):
        self.tau = np.asarray(self.tau, dtype=float)
        self.contrast = np.asarray(self.contrast, dtype=float)
        if self.tau.shape != self.contrast.shape or self.tau.ndim != 1:
            raise InputError("tau and contrast must be matching 1-D arrays")
        if np.any(self.tau <= 0) or np.any(np.diff(self.tau) <= 0):
            raise InputError("tau must be positive and strictly increasing")
        if np.any(np.abs(self.contrast) > 1.05):
            raise InputError("normalized contrast outside [-1.05, 1.05]")


def coupling_from_gradient(gamma_e, z_p, gradient):
    """Single-phonon coupling lambda = 2 pi gamma_e z_p G in rad/s."""
    return 2.0 * np.pi * gamma_e * z_p * gradient


def accumulated_phase(c, x0, phi0, tau):
    """Echo phase for mode amplitude ``x0`` (m) and phase ``phi0`` at half-time ``tau``."""
    wt = c.omega_r * np.asarray(tau, dtype=float)
    return c.phase_scale * x0 * (np.sin(2.0 * wt + phi0) - 2.0 * np.sin(wt + phi0) + np.sin(phi0))


def coherent_contrast(c, x0, tau):
    """Phase-averaged contrast for a coherent amplitude ``x0``: a J0 of the echo filter."""
    arg = 2.0 * c.phase_scale * np.asarray(x0, dtype=float) * (np.cos(c.omega_r * np.asarray(tau, dtype=float)) - 1.0)
    out = np.asarray(kernels.j0(np.atleast_1d(arg).ravel())).reshape(np.shape(arg))
    return float(out) if np.ndim(out) == 0 else out


def decay_exponent(c, delta_x, tau):
    """q(tau) = 8 dx^2 lambda^2 sin^4(omega_r tau / 2) / (omega_r z_p)^2."""
    s = np.sin(0.5 * c.omega_r * np.asarray(tau, dtype=float))
    return 8.0 * (delta_x * c.phase_scale) ** 2 * s ** 4


def thermal_contrast(c, delta_x, tau):
    """Contrast averaged over a thermal (Rayleigh) amplitude distribution."""
    if delta_x < 0:
        raise InputError("delta_x must be non-negative")
    out = np.exp(-decay_exponent(c, delta_x, tau))
    return float(out) if np.ndim(out) == 0 else out


def rayleigh_averaged_contrast(c, delta_x, tau, *, epsabs=1e-13):
    """Numerical Rayleigh average of :func:`coherent_contrast` at one ``tau``.

    Independent quadrature route to :func:`thermal_contrast`.
    """
    from scipy import integrate  # only needed here; keeps CLI start-up light

    if delta_x == 0:
        return 1.0

    def integrand(u):
        return u * np.exp(-0.5 * u * u) * coherent_contrast(c, u * delta_x, tau)

    val, _ = integrate.quad(integrand, 0.0, 40.0, epsabs=epsabs, epsrel=1e-12, limit=400)
    return float(val)


def _chunk_stats(args):
    c, delta_x, tau, seed, index, size = args
    rng = make_rng(seed, index)
    x0 = rng.rayleigh(delta_x, size=size)
    phi0 = rng.uniform(0.0, 2.0 * np.pi, size=size)
    mean, m2 = kernels.echo_cos_stats(x0, phi0, c.phase_scale, c.omega_r, float(tau))
    return size, mean, m2


def mc_contrast(c, delta_x, tau, n_samples=100_000, seed=0, *, chunk_size=DEFAULT_CHUNK, threads=1):
    """Monte Carlo thermal contrast and its standard error.

    Samples are drawn in chunks of ``chunk_size``; chunk ``i`` uses random
    stream ``(seed, i)`` and chunks are merged in index order, so the result
    depends on ``(seed, n_samples, chunk_size)`` only, not on ``threads``.
    """
    if n_samples < 100:
        raise InputError("n_samples must be at least 100")
    if delta_x < 0:
        raise InputError("delta_x must be non-negative")
    if delta_x == 0:
        return 1.0, 0.0
    sizes = [chunk_size] * (n_samples // chunk_size)
    if n_samples % chunk_size:
        sizes.append(n_samples % chunk_size)
    jobs = [(c, delta_x, tau, seed, i, s) for i, s in enumerate(sizes)]
    parts = ordered_map(_chunk_stats, jobs, threads)
    n, mean, m2 = 0, 0.0, 0.0
    for nb, mb, m2b in parts:
        # Chan et al. pairwise merge of (count, mean, M2)
        tot = n + nb
        delta = mb - mean
        mean = mean + delta * nb / tot
        m2 = m2 + m2b + delta * delta * n * nb / tot
        n = tot
    std = np.sqrt(m2 / (n - 1))
    return float(mean), float(std / np.sqrt(n))


def mc_curve(c, delta_x, taus, n_samples=100_000, seed=0, *, chunk_size=DEFAULT_CHUNK, threads=1):
    """:func:`mc_contrast` at each tau; point ``k`` uses seed stream ``seed + k``."""
    out = [mc_contrast(c, delta_x, t, n_samples, seed + k, chunk_size=chunk_size, threads=threads)
           for k, t in enumerate(np.asarray(taus, dtype=float))]
    return np.array([o[0] for o in out]), np.array([o[1] for o in out])


def signal_with_decoherence(c, delta_x, tau, dec, alpha=1.0):
    """alpha * thermal contrast * exp(-chi(tau))."""
    return alpha * thermal_contrast(c, delta_x, tau) * np.exp(-dec.chi(tau))


@dataclass
class CouplingFit:
    lam: float
    alpha: float
    covariance: np.ndarray  # over (lambda^2, [alpha]) in (rad/s)^4 units
    sigma_lam: float
    rms_residual: float
    iterations: int

    @property
    def lambda_over_2pi(self):
        return self.lam / (2.0 * np.pi)

    @property
    def sigma_hz(self):
        return self.sigma_lam / (2.0 * np.pi)

    def to_json(self):
        return {"lambda_over_2pi_hz": self.lambda_over_2pi, "sigma_hz": self.sigma_hz,
                "alpha": self.alpha, "rms_residual": self.rms_residual}


def fit_coupling(curve, delta_x, omega_r, z_p, fit_alpha=False, *, max_iter=200):
    """Least-squares coupling from a baseline-normalized echo curve.

    ``delta_x`` and ``omega_r`` are held fixed. The model is fitted in
    ``u = lambda^2`` (regular at zero coupling); lambda and its 1-sigma error
    follow from ``u`` by the delta method. With ``fit_alpha`` the overall
    contrast is a second free parameter, otherwise it is fixed to 1.
    """
    tau, y = curve.tau, curve.contrast
    n_par = 2 if fit_alpha else 1
    if tau.size < 3 or tau.size <= n_par:
        raise Underdetermined(f"underdetermined: {tau.size} points for the coupling fit")
    unit = Coupling(1.0, z_p, omega_r)
    s = decay_exponent(unit, delta_x, tau)  # q = lambda^2 * s
    if not np.any(s > 0):
        raise Underdetermined("underdetermined: no tau point is sensitive to the coupling")

    # seed from the linearised log model
    yc = np.clip(y, 1e-6, None)
    w = s > 0
    u0 = max(float(np.sum(s[w] * -np.log(yc[w])) / np.sum(s[w] * s[w])), 0.0)

    if fit_alpha:
        def residual(p):
            return p[1] * np.exp(-p[0] * s) - y

        def jac(p):
            e = np.exp(-p[0] * s)
            return np.column_stack([-p[1] * s * e, e])
        p0 = [u0, max(float(np.max(y)), 1e-3)]
    else:
        def residual(p):
            return np.exp(-p[0] * s) - y

        def jac(p):
            return (-s * np.exp(-p[0] * s))[:, None]
        p0 = [u0]

    try:
        res = levenberg_marquardt(residual, jac, p0, max_iter=max_iter, xtol=1e-15)
    except RankDeficient as exc:
        raise NoConvergence(f"coupling fit degenerate: {exc}") from None
    u = float(res.x[0])
    alpha = float(res.x[1]) if fit_alpha else 1.0
    cov = res.covariance()
    var_u = max(float(cov[0, 0]), 0.0)
    lam = np.sqrt(max(u, 0.0))
    sigma = np.sqrt(var_u) / (2.0 * lam) if lam > 0 else np.sqrt(np.sqrt(var_u))
    return CouplingFit(lam=float(lam), alpha=alpha, covariance=cov, sigma_lam=float(sigma),
                       rms_residual=float(np.sqrt(np.mean(res.residuals ** 2))),
                       iterations=res.iterations)

