"""Synthetic fixtures with planted parameters, for tests and demos."""
import numpy as np

from . import io as sio
from .constants import GAMMA_E, GAMMA_N15, ZERO_FIELD_SPLITTING
from .dipole import Dipole, NvAxis, axial_field, dipole_field
from .echo import Coupling, thermal_contrast
from .errors import InputError, UnknownKind
from .mech import lorentzian, ringdown
from .parallel import make_rng
from .register import DetuningProfile
from .spinmodel import FieldComponents, FieldMap, SpinParams, esr_frequencies

DEFAULTS = {
    "dipole-map": dict(moment_am2=[2e-15, -1e-15, 1e-14], position_m=[2e-7, -1e-7, -5e-7],
                       nv_axis=[0.0, 0.0, 1.0], scan_height_m=1e-6, half_width_m=3e-6, n=15,
                       noise_tesla=0.0),
    "esr-map": dict(moment_am2=[2e-15, -1e-15, 1e-14], position_m=[2e-7, -1e-7, -5e-7],
                    nv_axis=[0.0, 0.0, 1.0], scan_height_m=1e-6, half_width_m=3e-6, n=15,
                    noise_hz=0.0, d_hz=ZERO_FIELD_SPLITTING, gamma_e_hz_per_t=GAMMA_E),
    "psd": dict(f_r_hz=1.4e6, kappa_over_2pi_hz=1.5, delta_x_m=1.86e-9, span_hz=1000.0,
                n=4001, offset_m2_per_hz=0.0, noise_rel=0.0),
    "ringdown": dict(f_r_hz=1.4e6, q_factor=8.25e5, amplitude0_m=1e-8, n=200, duration_s=None,
                     noise_rel=0.0),
    "echo": dict(lambda_over_2pi_hz=7.7, delta_x_m=1.86e-9, f_r_hz=1.4e6, z_p_m=1.146e-14,
                 n=50, periods=2.0, noise=0.0),
    "profile": dict(peak_hz=9.8e6, t_move_s=1.7e-3, n=1024, ramp=0.0),
}
KINDS = tuple(DEFAULTS)


def _params(kind, params):
    if kind not in DEFAULTS:
        raise UnknownKind(f"unknown synthetic kind {kind!r}; choose from {', '.join(KINDS)}")
    p = dict(DEFAULTS[kind])
    for k, v in (params or {}).items():
        if k not in p:
            raise InputError(f"unknown parameter {k!r} for kind {kind!r}")
        p[k] = v
    return p


def _grid(p):
    n = int(p["n"])
    x = np.linspace(-p["half_width_m"], p["half_width_m"], n)
    return FieldMap(x, x.copy(), np.zeros((n, n)))


def _dipole_map(p, rng):
    d = Dipole(p["moment_am2"], p["position_m"])
    nv = NvAxis(p["nv_axis"])
    grid = _grid(p)
    b = axial_field(d, grid.points(p["scan_height_m"]), nv).reshape(grid.shape)
    if p["noise_tesla"] > 0:
        b = b + rng.normal(0.0, p["noise_tesla"], size=b.shape)
    return sio.write_field_map(grid.replace(b))


def _esr_map(p, rng):
    d = Dipole(p["moment_am2"], p["position_m"])
    nv = NvAxis(p["nv_axis"])
    grid = _grid(p)
    B = dipole_field(d, grid.points(p["scan_height_m"]))
    bz = B @ nv.axis
    bx = np.linalg.norm(B - bz[:, None] * nv.axis, axis=1)
    sp = SpinParams(p["d_hz"], p["gamma_e_hz_per_t"])
    pairs = [esr_frequencies(sp, FieldComponents(float(z), float(x))) for z, x in zip(bz, bx)]
    vals = np.array([[e.f_minus, e.f_plus] for e in pairs])
    if p["noise_hz"] > 0:
        vals = vals + rng.normal(0.0, p["noise_hz"], size=vals.shape)
    return sio.write_field_map(grid.replace(vals.reshape(grid.shape + (2,)), kind="esr"))


def _psd(p, rng):
    f = p["f_r_hz"] + np.linspace(-0.5 * p["span_hz"], 0.5 * p["span_hz"], int(p["n"]))
    psd = lorentzian(f, p["f_r_hz"], p["kappa_over_2pi_hz"], p["delta_x_m"] ** 2,
                     p["offset_m2_per_hz"])
    if p["noise_rel"] > 0:
        psd = psd * (1.0 + rng.normal(0.0, p["noise_rel"], size=f.size))
    return sio.write_csv(["freq_hz", "psd_m2_per_hz"], zip(map(float, f), map(float, psd)))


def _ringdown(p, rng):
    tau = 2.0 * p["q_factor"] / (2.0 * np.pi * p["f_r_hz"])
    dur = 3.0 * tau if p["duration_s"] is None else p["duration_s"]
    t = np.linspace(0.0, dur, int(p["n"]))
    a = ringdown(t, p["amplitude0_m"], p["q_factor"], p["f_r_hz"])
    if p["noise_rel"] > 0:
        a = a * (1.0 + rng.normal(0.0, p["noise_rel"], size=t.size))
    return sio.write_csv(["t_s", "amplitude_m"], zip(map(float, t), map(float, a)))


def _echo(p, rng):
    c = Coupling.from_hz(p["lambda_over_2pi_hz"], p["z_p_m"], p["f_r_hz"])
    n = int(p["n"])
    span = p["periods"] / p["f_r_hz"]
    tau = np.linspace(span / n, span, n)
    y = np.asarray(thermal_contrast(c, p["delta_x_m"], tau))
    if p["noise"] > 0:
        y = y + rng.normal(0.0, p["noise"], size=n)
    return sio.write_csv(["tau_s", "contrast"], zip(map(float, tau), map(float, y)))


def _profile(p, rng):
    n, T = int(p["n"]), p["t_move_s"]
    t = np.linspace(0.0, T, n)
    d = p["peak_hz"] * (0.5 * (1.0 - np.cos(2.0 * np.pi * t / T)) + p["ramp"] * t / T)
    DetuningProfile(t, d, GAMMA_N15 / GAMMA_E)  # validates
    return sio.write_csv(["t_s", "delta_e_hz"], zip(map(float, t), map(float, d)))


_MAKERS = {"dipole-map": _dipole_map, "esr-map": _esr_map, "psd": _psd,
           "ringdown": _ringdown, "echo": _echo, "profile": _profile}


def generate_synthetic(kind, params=None, seed=0):
    """CSV text for a planted fixture of ``kind``; identical for identical inputs.

    Raises
    ------
    UnknownKind
        If ``kind`` is not one of :data:`KINDS`.
    """
    p = _params(kind, params)
    return _MAKERS[kind](p, make_rng(seed))

