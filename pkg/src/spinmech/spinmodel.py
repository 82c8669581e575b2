"""NV ground-state spin-1 model: ESR frequencies from fields and back.

Frequencies are ordinary (not angular) Hz throughout. Only the magnitude of
the transverse field is observable, and the spectrum is symmetric under
``bz -> -bz``, so inverted fields are reported with ``bz, bx >= 0``.
"""
from dataclasses import dataclass, field

import numpy as np

from .constants import GAMMA_E, ZERO_FIELD_SPLITTING
from .errors import AllInvalid, InputError, NoConvergence, OutOfRange
from .parallel import ordered_map

SZ = np.diag([1.0, 0.0, -1.0])
SX = np.array([[0.0, 1.0, 0.0], [1.0, 0.0, 1.0], [0.0, 1.0, 0.0]]) / np.sqrt(2.0)

MAX_NEWTON_ITER = 100
FREQ_TOL = 1e-3  # Hz
MAX_FIELD = 1.0  # T


@dataclass(frozen=True)
class SpinParams:
    D: float = ZERO_FIELD_SPLITTING
    gamma_e: float = GAMMA_E

    def __post_init__(self):
        if not (self.D > 0 and self.gamma_e > 0):
            raise InputError("D and gamma_e must be positive")


@dataclass(frozen=True)
class FieldComponents:
    bz: float
    bx: float


@dataclass(frozen=True)
class EsrPair:
    f_minus: float
    f_plus: float


def hamiltonian(params, bz, bx):
    """Spin Hamiltonian H/h in Hz for axial field ``bz`` and transverse ``bx`` (T)."""
    return params.D * (SZ @ SZ) + params.gamma_e * (bz * SZ + bx * SX)


def _levels(params, a, b):
    """Energy of the |m=0>-like level and of the other two levels.

    ``a``, ``b`` are the axial and transverse Zeeman terms in Hz.
    """
    H = params.D * (SZ @ SZ) + a * SZ + b * SX
    w, v = np.linalg.eigh(H)
    i0 = int(np.argmax(np.abs(v[1, :])))
    others = [k for k in range(3) if k != i0]
    return w[i0], w[others]


def esr_frequencies(params, fc):
    """Lower and upper ESR transition frequencies for ``fc``."""
    if np.hypot(fc.bz, fc.bx) >= MAX_FIELD:
        raise OutOfRange("field magnitude must stay below 1 T")
    e0, ek = _levels(params, params.gamma_e * fc.bz, params.gamma_e * fc.bx)
    f = np.sort(np.abs(ek - e0))
    return EsrPair(float(f[0]), float(f[1]))


def _transitions_and_jacobian(D, u, v):
    """Transitions (ascending) and d f / d(u, v) with u = a^2, v = b^2.

    The characteristic polynomial ``-E((D-E)^2 - u) - v(D-E)`` depends on the
    squared Zeeman terms only, so implicit differentiation stays regular at
    zero transverse field where d f / d b vanishes.
    """
    params = SpinParams(D=D, gamma_e=1.0)
    e0, ek = _levels(params, np.sqrt(u), np.sqrt(v))
    energies = np.array([e0, ek[0], ek[1]])
    pe = -((D - energies) ** 2 - u) + 2.0 * energies * (D - energies) + v
    if np.any(np.abs(pe) < 1e-9 * D * D):
        return None, None
    de_du = -energies / pe
    de_dv = (D - energies) / pe
    diff = ek - e0
    sign = np.sign(diff)
    f = np.abs(diff)
    jac = np.empty((2, 2))
    jac[:, 0] = sign * (de_du[1:] - de_du[0])
    jac[:, 1] = sign * (de_dv[1:] - de_dv[0])
    order = np.argsort(f)
    return f[order], jac[order]


def invert_field(params, esr, *, tol=FREQ_TOL, max_iter=MAX_NEWTON_ITER):
    """Axial and transverse field reproducing a measured ESR pair.

    Damped Newton iteration on the squared Zeeman terms, seeded from the
    pure-axial closed form; the step is halved while the residual grows.

    Raises
    ------
    OutOfRange
        If ``f_plus < f_minus`` or a frequency is not positive.
    NoConvergence
        If the pair is not reachable within ``max_iter`` iterations.
    """
    fm, fp = float(esr.f_minus), float(esr.f_plus)
    if not (fm > 0 and fp > 0):
        raise OutOfRange("ESR frequencies must be positive")
    if fp < fm:
        raise OutOfRange(f"f_plus ({fp}) below f_minus ({fm})")
    if fp - fm > 2.0 * params.gamma_e * MAX_FIELD:
        raise OutOfRange("splitting exceeds the 1 T model range")
    D, g = params.D, params.gamma_e
    target = np.array([fm, fp])

    p = np.array([(0.5 * (fp - fm)) ** 2, 0.0])
    if p[0] == 0.0 and fm == D:
        return FieldComponents(0.0, 0.0)
    f, jac = _transitions_and_jacobian(D, *p)
    if f is None:
        p[1] = (1e-6 * D) ** 2
        f, jac = _transitions_and_jacobian(D, *p)
    res = f - target
    norm = np.max(np.abs(res))
    for _ in range(max_iter):
        if norm < tol:
            return FieldComponents(float(np.sqrt(p[0]) / g), float(np.sqrt(p[1]) / g))
        try:
            step = np.linalg.solve(jac, -res)
        except np.linalg.LinAlgError:
            break
        t = 1.0
        for _ in range(60):
            trial = np.maximum(p + t * step, 0.0)
            f_new, jac_new = _transitions_and_jacobian(D, *trial)
            if f_new is not None:
                res_new = f_new - target
                norm_new = np.max(np.abs(res_new))
                if norm_new <= norm:
                    break
            t *= 0.5
        else:
            break
        p, res, norm, jac = trial, res_new, norm_new, jac_new
    if norm < tol:
        return FieldComponents(float(np.sqrt(p[0]) / g), float(np.sqrt(p[1]) / g))
    raise NoConvergence(
        f"ESR pair ({fm:.6g}, {fp:.6g}) Hz not reached; residual {norm:.3g} Hz")


@dataclass
class FieldMap:
    """Scan grid of per-pixel values with a validity mask.

    ``values`` has shape ``(ny, nx)`` for scalar maps (``kind`` "axial" in T
    or "gradient" in T/m) or ``(ny, nx, 2)`` holding ``(f_minus, f_plus)`` for
    ``kind`` "esr". ``x``/``y`` are pixel coordinates in meters.
    """
    x: np.ndarray
    y: np.ndarray
    values: np.ndarray
    mask: np.ndarray = None
    kind: str = "axial"

    def __post_init__(self):
        self.x = np.asarray(self.x, dtype=float)
        self.y = np.asarray(self.y, dtype=float)
        self.values = np.array(self.values, dtype=float)
        shape = (self.y.size, self.x.size)
        if self.mask is None:
            self.mask = np.ones(shape, dtype=bool)
        self.mask = np.array(self.mask, dtype=bool)
        if self.x.size < 2 or self.y.size < 2:
            raise InputError("field maps need at least 2 pixels per axis")
        if self.kind not in ("esr", "axial", "gradient"):
            raise InputError(f"unknown map kind {self.kind!r}")
        want = shape + ((2,) if self.kind == "esr" else ())
        if self.values.shape != want or self.mask.shape != shape:
            raise InputError(f"map values {self.values.shape} / mask {self.mask.shape} "
                             f"do not match grid {shape}")

    @property
    def shape(self):
        return self.mask.shape

    @property
    def pitch(self):
        return (float(np.mean(np.diff(self.x))), float(np.mean(np.diff(self.y))))

    @property
    def n_invalid(self):
        return int(self.mask.size - self.mask.sum())

    def points(self, z):
        """Pixel centers as an ``(ny*nx, 3)`` array at height ``z``, row-major."""
        X, Y = np.meshgrid(self.x, self.y)
        return np.column_stack([X.ravel(), Y.ravel(), np.full(X.size, float(z))])

    def replace(self, values, mask=None, kind=None):
        return FieldMap(self.x.copy(), self.y.copy(), values,
                        self.mask.copy() if mask is None else mask,
                        self.kind if kind is None else kind)


@dataclass
class InversionReport:
    n_failed: int = 0
    failed_pixels: list = field(default_factory=list)


def map_to_axial_field(params, fmap, threads=1):
    """Invert every valid pixel of an ESR map to its axial field.

    Pixels whose inversion fails are marked invalid and listed in the
    returned report as ``(row, col)`` pairs.
    """
    if fmap.kind != "esr":
        raise InputError("map_to_axial_field expects an ESR map")
    ny, nx = fmap.shape
    pixels = [(i, j) for i in range(ny) for j in range(nx) if fmap.mask[i, j]]

    def solve(ij):
        fm, fp = fmap.values[ij]
        try:
            return invert_field(params, EsrPair(fm, fp)).bz
        except (NoConvergence, OutOfRange):
            return None

    results = ordered_map(solve, pixels, threads)
    values = np.zeros((ny, nx))
    mask = fmap.mask.copy()
    report = InversionReport()
    for ij, bz in zip(pixels, results):
        if bz is None:
            mask[ij] = False
            report.n_failed += 1
            report.failed_pixels.append(ij)
        else:
            values[ij] = bz
    return fmap.replace(values, mask, kind="axial"), report


_NEIGHBORS = [(di, dj) for di in (-1, 0, 1) for dj in (-1, 0, 1) if (di, dj) != (0, 0)]


def interpolate_missing(fmap):
    """Fill invalid pixels with the mean of their valid 8-neighbours.

    Each pass uses only pixels valid at the start of the pass, and passes
    repeat until no invalid pixel remains.
    """
    mask = fmap.mask.copy()
    if not mask.any():
        raise AllInvalid("map has no valid pixels")
    values = fmap.values.copy()
    ny, nx = mask.shape
    while not mask.all():
        fill_vals, fill_idx = [], []
        for i, j in zip(*np.nonzero(~mask)):
            acc, count = 0.0, 0
            for di, dj in _NEIGHBORS:
                a, b = i + di, j + dj
                if 0 <= a < ny and 0 <= b < nx and mask[a, b]:
                    acc = acc + values[a, b]
                    count += 1
            if count:
                fill_idx.append((i, j))
                fill_vals.append(acc / count)
        for ij, v in zip(fill_idx, fill_vals):
            values[ij] = v
            mask[ij] = True
    return fmap.replace(values, mask)
