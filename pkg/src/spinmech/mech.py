"""Mechanical mode: derived quantities, thermal sampling, PSD and ringdown fits."""
from dataclasses import dataclass

import numpy as np

from .constants import DEFAULT_M_EFF, HBAR, K_B
from .errors import (EmptyBand, InputError, NoConvergence, NoPeak, NotDecaying,
                     RankDeficient, Underdetermined)
from .fitting import levenberg_marquardt

MIN_FIT_POINTS = 8


@dataclass(frozen=True)
class Resonator:
    f_r: float
    q_factor: float
    m_eff: float = DEFAULT_M_EFF
    temperature: float = 300.0

    def __post_init__(self):
        if not (self.f_r > 0 and self.q_factor > 0 and self.m_eff > 0 and self.temperature > 0):
            raise InputError("resonator parameters must be positive")

    @property
    def omega_r(self):
        return 2.0 * np.pi * self.f_r

    @property
    def kappa_over_2pi(self):
        """Energy decay rate (FWHM linewidth) in Hz."""
        return self.f_r / self.q_factor

    @property
    def z_p(self):
        return zero_point_motion(self)

    @property
    def n_th(self):
        return thermal_occupation(self.temperature, self.f_r)


@dataclass(frozen=True)
class PhaseSpaceSample:
    x0: float
    phi0: float


@dataclass
class TimeSeries:
    """Sampled record; ``t`` is time (s) or frequency (Hz) depending on use."""
    t: np.ndarray
    value: np.ndarray

    def __post_init__(self):
        self.t = np.asarray(self.t, dtype=float)
        self.value = np.asarray(self.value, dtype=float)
        if self.t.ndim != 1 or self.t.shape != self.value.shape:
            raise InputError("time series needs matching 1-D abscissa and values")
        if self.t.size > 1 and not np.all(np.diff(self.t) > 0):
            raise InputError("abscissa must be strictly increasing")


def zero_point_motion(r):
    """Zero-point amplitude sqrt(hbar / (2 m_eff omega_r)) in meters."""
    return float(np.sqrt(HBAR / (2.0 * r.m_eff * r.omega_r)))


def thermal_occupation(temperature, f_r):
    """Bose-Einstein mean phonon number; 0 at zero temperature."""
    if temperature < 0:
        raise InputError("temperature must be non-negative")
    if temperature == 0:
        return 0.0
    x = HBAR * 2.0 * np.pi * f_r / (K_B * temperature)
    return float(1.0 / np.expm1(x))


def sample_thermal_states(delta_x, n, rng):
    """``n`` thermal phase-space points: Rayleigh amplitudes, uniform phases.

    Returns arrays ``(x0, phi0)``. The amplitude density is
    ``(x/dx^2) exp(-x^2 / 2 dx^2)``, i.e. Boltzmann-distributed energy.
    """
    if not delta_x > 0:
        raise InputError("delta_x must be positive")
    x0 = rng.rayleigh(delta_x, size=n)
    phi0 = rng.uniform(0.0, 2.0 * np.pi, size=n)
    return x0, phi0


def sample_thermal_state(delta_x, rng):
    x0, phi0 = sample_thermal_states(delta_x, 1, rng)
    return PhaseSpaceSample(float(x0[0]), float(phi0[0]))


# -- power spectral density --------------------------------------------------

def lorentzian(f, f_r, fwhm, area, offset=0.0):
    """Lorentzian peak with full width ``fwhm`` (Hz) integrating to ``area``."""
    half = 0.5 * fwhm
    return area * (half / np.pi) / ((f - f_r) ** 2 + half * half) + offset


@dataclass
class LorentzianFit:
    f_r: float
    kappa_over_2pi: float
    peak_area: float
    offset: float
    rms_residual: float
    iterations: int
    covariance: np.ndarray

    def to_json(self):
        return {"f_r_hz": self.f_r, "kappa_over_2pi_hz": self.kappa_over_2pi,
                "peak_area_m2": self.peak_area, "offset_m2_per_hz": self.offset,
                "rms_residual": self.rms_residual, "iterations": self.iterations}


def _fwhm_estimate(f, p, k, base):
    half = base + 0.5 * (p[k] - base)
    lo = k
    while lo > 0 and p[lo] > half:
        lo -= 1
    hi = k
    while hi < p.size - 1 and p[hi] > half:
        hi += 1

    def cross(i, j):
        # linear interpolation of the half-maximum crossing between i and j
        if p[j] == p[i]:
            return f[i]
        return f[i] + (half - p[i]) * (f[j] - f[i]) / (p[j] - p[i])

    left = cross(lo, lo + 1) if lo < k else f[k]
    right = cross(hi - 1, hi) if hi > k else f[k]
    width = right - left
    return width if width > 0 else float(np.min(np.diff(f)))


def fit_lorentzian(psd, *, max_iter=200):
    """Fit a single Lorentzian peak plus flat offset to a PSD record.

    Seeds come from the arg-max, a half-maximum width estimate and the
    median floor. The centre is fitted relative to the seed frequency to
    keep sub-Hz widths resolvable at MHz carrier frequencies.
    """
    f, p = psd.t, psd.value
    if f.size < MIN_FIT_POINTS:
        raise Underdetermined(f"{f.size} points; at least {MIN_FIT_POINTS} needed")
    k = int(np.argmax(p))
    median = float(np.median(p))
    if not (p[k] > 0 and (median <= 0 or p[k] / median >= 3.0)):
        raise NoPeak("no dominant peak (max/median power below 3)")
    base = max(median, 0.0)
    f_seed = f[k]
    width0 = _fwhm_estimate(f, p, k, base)
    area0 = (p[k] - base) * np.pi * width0 / 2.0
    df = f - f_seed
    scale = p[k]

    def model(q):
        return lorentzian(df, q[0], q[1], q[2], q[3])

    def residual(q):
        return (model(q) - p) / scale

    def jac(q):
        c, w, a, _ = q
        h = 0.5 * w
        den = (df - c) ** 2 + h * h
        dc = a * (h / np.pi) * 2.0 * (df - c) / den ** 2
        dw = a / (2.0 * np.pi) * ((df - c) ** 2 - h * h) / den ** 2
        da = (h / np.pi) / den
        do = np.ones_like(df)
        return np.column_stack([dc, dw, da, do]) / scale

    q0 = np.array([0.0, width0, area0, base])
    try:
        res = levenberg_marquardt(residual, jac, q0, max_iter=max_iter)
    except RankDeficient as exc:
        raise NoConvergence(f"Lorentzian fit degenerate: {exc}") from None
    c, w, a, off = res.x
    w = abs(w)
    return LorentzianFit(
        f_r=float(f_seed + c), kappa_over_2pi=float(w), peak_area=float(a),
        offset=float(off), rms_residual=float(np.sqrt(np.mean((res.residuals * scale) ** 2))),
        iterations=res.iterations, covariance=res.covariance(),
    )


def rms_from_psd(psd, band):
    """RMS amplitude sqrt(integral of PSD over ``band``), trapezoidal rule.

    Band edges falling between samples are handled by linear interpolation.
    """
    lo, hi = float(band[0]), float(band[1])
    f, p = psd.t, psd.value
    if not hi > lo or hi < f[0] or lo > f[-1]:
        raise EmptyBand(f"band [{lo}, {hi}] does not overlap the record")
    lo, hi = max(lo, f[0]), min(hi, f[-1])
    inside = (f > lo) & (f < hi)
    ff = np.concatenate([[lo], f[inside], [hi]])
    pp = np.concatenate([[np.interp(lo, f, p)], p[inside], [np.interp(hi, f, p)]])
    if ff.size < 2 or hi <= lo:
        raise EmptyBand("band contains no samples")
    area = float(np.trapezoid(pp, ff))
    return float(np.sqrt(max(area, 0.0)))


# -- ringdown ------------------------------------------------------------------

def ringdown(t, a0, q_factor, f_r):
    """Amplitude ringdown a0 exp(-t/tau) with tau = 2Q/omega_r."""
    tau = 2.0 * q_factor / (2.0 * np.pi * f_r)
    return a0 * np.exp(-np.asarray(t, dtype=float) / tau)


@dataclass
class RingdownFit:
    q_factor: float
    amplitude0: float
    tau_amplitude: float
    rms_residual: float
    iterations: int
    sigma_q: float

    def to_json(self):
        return {"q_factor": self.q_factor, "amplitude0_m": self.amplitude0,
                "tau_amplitude_s": self.tau_amplitude, "sigma_q": self.sigma_q,
                "rms_residual": self.rms_residual, "iterations": self.iterations}


def fit_ringdown(series, f_r, *, max_iter=200):
    """Quality factor from an amplitude ringdown at mode frequency ``f_r``.

    A straight-line fit to log amplitude seeds a least-squares fit of
    ``a0 exp(-g t)`` on linear amplitudes; Q = omega_r / (2 g).

    Raises
    ------
    NotDecaying
        If the fitted decay rate is not positive.
    """
    t, a = series.t, series.value
    if t.size < MIN_FIT_POINTS:
        raise Underdetermined(f"{t.size} points; at least {MIN_FIT_POINTS} needed")
    if np.any(a <= 0):
        raise InputError("ringdown amplitudes must be positive")
    t0 = t[0]
    tt = t - t0
    slope, intercept = np.polyfit(tt, np.log(a), 1)
    span = tt[-1]
    if not -slope * span > 1e-9:
        raise NotDecaying("amplitude does not decay")
    scale = float(np.max(a))

    def residual(q):
        return (q[0] * np.exp(-q[1] * tt) - a) / scale

    def jac(q):
        e = np.exp(-q[1] * tt)
        return np.column_stack([e, -q[0] * tt * e]) / scale

    try:
        res = levenberg_marquardt(residual, jac, [np.exp(intercept), -slope], max_iter=max_iter)
    except RankDeficient as exc:
        raise NoConvergence(str(exc)) from None
    a_start, g = res.x
    if not g * span > 1e-9:
        raise NotDecaying("best-fit decay time is not positive")
    omega = 2.0 * np.pi * f_r
    cov = res.covariance()
    q = omega / (2.0 * g)
    return RingdownFit(
        q_factor=float(q),
        amplitude0=float(a_start * np.exp(g * t0)),
        tau_amplitude=float(1.0 / g),
        rms_residual=float(np.sqrt(np.mean((res.residuals * scale) ** 2))),
        iterations=res.iterations,
        sigma_q=float(q * np.sqrt(max(cov[1, 1], 0.0)) / g),
    )
