"""Point-dipole field model, NV-axis projection, gradients and map fitting."""
from dataclasses import dataclass

import numpy as np

from . import kernels
from .constants import MU0_OVER_4PI
from .errors import DegenerateMap, InputError, RankDeficient, SingularPoint, Underdetermined
from .fitting import levenberg_marquardt
from .spinmodel import FieldMap


@dataclass
class Dipole:
    moment: np.ndarray  # A m^2
    position: np.ndarray  # m

    def __post_init__(self):
        self.moment = np.array(self.moment, dtype=float).reshape(3)
        self.position = np.array(self.position, dtype=float).reshape(3)
        if not np.linalg.norm(self.moment) > 0:
            raise InputError("dipole moment must be nonzero")

    @property
    def params(self):
        return np.concatenate([self.moment, self.position])

    @classmethod
    def from_params(cls, p):
        return cls(p[:3], p[3:])

    def to_json(self):
        return {"moment_am2": [float(v) for v in self.moment],
                "position_m": [float(v) for v in self.position]}

    @classmethod
    def from_json(cls, obj):
        try:
            return cls(obj["moment_am2"], obj["position_m"])
        except (KeyError, TypeError, ValueError) as exc:
            raise InputError(f"bad dipole JSON: {exc}") from exc


@dataclass
class NvAxis:
    axis: np.ndarray

    def __post_init__(self):
        a = np.array(self.axis, dtype=float).reshape(3)
        n = np.linalg.norm(a)
        if not n > 0:
            raise InputError("NV axis must be a nonzero vector")
        self.axis = a / n


def _unit(v, what="axis"):
    v = np.array(v, dtype=float).reshape(3)
    n = np.linalg.norm(v)
    if not n > 0:
        raise InputError(f"{what} must be a nonzero vector")
    return v / n


def _separation(d, point):
    r = np.asarray(point, dtype=float) - d.position
    r2 = np.sum(r * r, axis=-1)
    if np.any(r2 == 0.0):
        raise SingularPoint("evaluation point coincides with the dipole position")
    return r, r2


def dipole_field(d, point):
    """Field vector (T) of dipole ``d`` at ``point`` (shape ``(..., 3)``)."""
    r, r2 = _separation(d, point)
    mr = r @ d.moment
    r3 = r2 * np.sqrt(r2)
    return MU0_OVER_4PI * (3.0 * (mr / r2)[..., None] * r - d.moment) / r3[..., None]


def axial_field(d, point, nv):
    """Field component along the NV axis at ``point``."""
    pts = np.asarray(point, dtype=float)
    flat = pts.reshape(-1, 3)
    try:
        out = kernels.axial_dipole_field(flat, d.moment, d.position, nv.axis)
    except ZeroDivisionError as exc:
        raise SingularPoint(str(exc)) from None
    out = np.asarray(out).reshape(pts.shape[:-1])
    return float(out) if out.ndim == 0 else out


def field_jacobian(d, point):
    """Spatial Jacobian ``dB_i/dr_j`` (T/m), shape ``(..., 3, 3)``."""
    r, r2 = _separation(d, point)
    m = d.moment
    mr = r @ m
    eye = np.eye(3)
    k = 3.0 * MU0_OVER_4PI / (r2 ** 2 * np.sqrt(r2))
    jac = (mr[..., None, None] * eye
           + m[:, None] * r[..., None, :]
           + r[..., :, None] * m[None, :]
           - 5.0 * (mr / r2)[..., None, None] * r[..., :, None] * r[..., None, :])
    return k[..., None, None] * jac


def axial_gradient(d, point, nv, motion_axis):
    """Derivative of the axial field along ``motion_axis`` of the evaluation point."""
    u = _unit(motion_axis, "motion axis")
    J = field_jacobian(d, point)
    out = np.einsum("i,...ij,j->...", nv.axis, J, u)
    return float(out) if np.ndim(out) == 0 else out


def axial_field_param_jacobian(d, points, nv):
    """d(axial field)/d(moment, position) at each point, shape ``(N, 6)``."""
    r, r2 = _separation(d, points)
    n = nv.axis
    nr = r @ n
    r3 = r2 * np.sqrt(r2)
    d_moment = MU0_OVER_4PI * (3.0 * (nr / r2)[:, None] * r - n) / r3[:, None]
    d_position = -np.einsum("i,nij->nj", n, field_jacobian(d, points))
    return np.hstack([d_moment, d_position])


@dataclass
class FitReport:
    rms_residual: float
    max_residual: float
    iterations: int
    converged: bool
    covariance: np.ndarray

    def to_json(self):
        return {"rms_residual_tesla": self.rms_residual,
                "max_residual_tesla": self.max_residual,
                "iterations": self.iterations,
                "converged": self.converged,
                "covariance": self.covariance.tolist()}


def _valid_data(fmap, scan_height):
    if fmap.kind != "axial":
        raise InputError("dipole fitting needs an axial-field map")
    pts = fmap.points(scan_height)
    keep = fmap.mask.ravel()
    return pts[keep], fmap.values.ravel()[keep]


def _moment_lstsq(position, pts, meas, nv):
    # axial field is linear in the moment for a fixed position
    probe = Dipole(np.ones(3), position)
    A = axial_field_param_jacobian(probe, pts, nv)[:, :3]
    m, *_ = np.linalg.lstsq(A, meas, rcond=None)
    resid = A @ m - meas
    return m, float(resid @ resid)


def grid_search_init(fmap, nv, scan_height):
    """Coarse 3x3x3 position search around the map centre.

    For each candidate position the moment is the linear least-squares
    optimum; the best candidate seeds the nonlinear fit.
    """
    pts, meas = _valid_data(fmap, scan_height)
    cx, cy = float(np.mean(fmap.x)), float(np.mean(fmap.y))
    qx = 0.25 * (fmap.x.max() - fmap.x.min())
    qy = 0.25 * (fmap.y.max() - fmap.y.min())
    h = float(scan_height)
    best = None
    for dz in (-0.5 * h, 0.0, 0.5 * h):
        for dy in (-qy, 0.0, qy):
            for dx in (-qx, 0.0, qx):
                pos = np.array([cx + dx, cy + dy, dz])
                if np.any(np.all(np.isclose(pts, pos, rtol=0, atol=1e-15), axis=1)):
                    continue
                m, ssr = _moment_lstsq(pos, pts, meas, nv)
                if not np.linalg.norm(m) > 0:
                    continue
                if best is None or ssr < best[0]:
                    best = (ssr, Dipole(m, pos))
    if best is None:
        raise DegenerateMap("no usable starting position found")
    return best[1]


def fit_dipole(fmap, nv, init=None, scan_height=1e-6, *, max_iter=200):
    """Fit a point dipole to the valid pixels of an axial-field map.

    Pixels sit at height ``scan_height`` above the ``z = 0`` plane; the six
    free parameters are the moment and position of the dipole.

    Returns
    -------
    (Dipole, FitReport)
    """
    pts, meas = _valid_data(fmap, scan_height)
    if meas.size < 6:
        raise Underdetermined(f"{meas.size} valid pixels for 6 parameters")
    spread = np.ptp(meas)
    if not spread > 1e-12 * max(np.max(np.abs(meas)), 1e-300):
        raise DegenerateMap("map has no field structure to fit")
    if init is None:
        init = grid_search_init(fmap, nv, scan_height)

    def residual(p):
        try:
            return axial_field(Dipole.from_params(p), pts, nv) - meas
        except (SingularPoint, InputError):
            return np.full(meas.shape, np.inf)

    def jac(p):
        return axial_field_param_jacobian(Dipole.from_params(p), pts, nv)

    try:
        res = levenberg_marquardt(residual, jac, init.params, max_iter=max_iter)
    except RankDeficient as exc:
        raise DegenerateMap(str(exc)) from None
    r = res.residuals
    report = FitReport(
        rms_residual=float(np.sqrt(np.mean(r ** 2))),
        max_residual=float(np.max(np.abs(r))),
        iterations=res.iterations,
        converged=res.converged,
        covariance=res.covariance(),
    )
    return Dipole.from_params(res.x), report


def gradient_map(d, fmap, nv, motion_axis, scan_height=1e-6):
    """Axial-field gradient along ``motion_axis`` over the grid of ``fmap``.

    Returns the gradient map (T/m, all pixels valid) and the grid maximum of
    its absolute value.
    """
    pts = fmap.points(scan_height)
    g = axial_gradient(d, pts, nv, motion_axis).reshape(fmap.shape)
    out = FieldMap(fmap.x.copy(), fmap.y.copy(), g, np.ones(fmap.shape, bool), "gradient")
    return out, float(np.max(np.abs(g)))
