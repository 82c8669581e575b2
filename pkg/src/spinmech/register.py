"""Electron / 15N two-qubit memory under mechanical transport.

Basis order is ``|0 dn>, |0 up>, |-1 dn>, |-1 up>`` (electron, nucleus); the
state is handled as a 2x2 array ``psi[e, n]``. Gates are instantaneous and
ideal. Nuclear transport phase is computed from a detuning profile and
refocused with a nuclear pi pulse at ``t_pi``.
"""
import warnings
from dataclasses import dataclass

import numpy as np

from .constants import GAMMA_E, GAMMA_N15
from .dipole import axial_field
from .errors import InputError, InvalidProbability, NoRoot

MIN_PROFILE_POINTS = 64
CLOSURE_TOL = 1e3  # Hz
PHASE_TOL = 1e-6  # rad


@dataclass
class DetuningProfile:
    """Electron ESR detuning (Hz) on a uniform time grid starting at 0.

    ``gamma_ratio`` = gamma_n / gamma_e converts to the nuclear detuning.
    """
    t: np.ndarray
    delta_e: np.ndarray
    gamma_ratio: float = GAMMA_N15 / GAMMA_E

    def __post_init__(self):
        self.t = np.asarray(self.t, dtype=float)
        self.delta_e = np.asarray(self.delta_e, dtype=float)
        if self.t.shape != self.delta_e.shape or self.t.ndim != 1:
            raise InputError("profile needs matching 1-D time and detuning arrays")
        if self.t.size < MIN_PROFILE_POINTS:
            raise InputError(f"profile needs at least {MIN_PROFILE_POINTS} points")
        dt = np.diff(self.t)
        if self.t[0] != 0.0 or np.any(dt <= 0):
            raise InputError("profile time must start at 0 and increase strictly")
        if np.max(np.abs(dt - dt.mean())) > 1e-6 * dt.mean():
            raise InputError("profile time grid must be uniform")
        self._cum = np.concatenate(
            [[0.0], np.cumsum(0.5 * (self.delta_n[1:] + self.delta_n[:-1]) * dt)])

    @property
    def t_move(self):
        return float(self.t[-1])

    @property
    def delta_n(self):
        return self.delta_e * self.gamma_ratio

    @property
    def is_closed(self):
        """Whether the detuning returns to zero at both ends."""
        return bool(abs(self.delta_e[0]) <= CLOSURE_TOL and abs(self.delta_e[-1]) <= CLOSURE_TOL)

    def integral_to(self, t):
        """Trapezoidal integral of the nuclear detuning from 0 to ``t`` (cycles)."""
        t = np.clip(np.asarray(t, dtype=float), 0.0, self.t_move)
        k = np.clip(np.searchsorted(self.t, t, side="right") - 1, 0, self.t.size - 2)
        dn = self.delta_n
        h = t - self.t[k]
        d_at = dn[k] + (dn[k + 1] - dn[k]) * h / (self.t[k + 1] - self.t[k])
        out = self._cum[k] + 0.5 * (dn[k] + d_at) * h
        return float(out) if out.ndim == 0 else out


def sinusoidal_profile(peak_hz, t_move, n_points=1024, gamma_ratio=GAMMA_N15 / GAMMA_E):
    """Away-and-back detuning ``peak * (1 - cos(2 pi t / t_move)) / 2``."""
    t = np.linspace(0.0, t_move, n_points)
    return DetuningProfile(t, peak_hz * 0.5 * (1.0 - np.cos(2.0 * np.pi * t / t_move)), gamma_ratio)


def build_movement_profile(dipole, nv, start_point, displacement, t_move, n_points=1024,
                           gamma_e=GAMMA_E, gamma_n=GAMMA_N15):
    """Detuning seen while the NV moves away along ``displacement`` and back.

    Position follows ``start + displacement * (1 - cos(2 pi t / t_move)) / 2``
    and the detuning is ``gamma_e`` times the change of the axial field.
    """
    t = np.linspace(0.0, t_move, n_points)
    s = 0.5 * (1.0 - np.cos(2.0 * np.pi * t / t_move))
    pts = np.asarray(start_point, float)[None, :] + s[:, None] * np.asarray(displacement, float)[None, :]
    b = axial_field(dipole, pts, nv)
    return DetuningProfile(t, gamma_e * (b - b[0]), gamma_n / gamma_e)


def nuclear_phase(profile, t_pi):
    """Net nuclear transport phase (rad) with a refocusing pi pulse at ``t_pi``.

    2 pi (integral before the pulse - integral after it).
    """
    if np.any(np.asarray(t_pi) < 0) or np.any(np.asarray(t_pi) > profile.t_move):
        raise InputError("t_pi must lie within the movement")
    before = profile.integral_to(t_pi)
    total = profile.integral_to(profile.t_move)
    return 2.0 * np.pi * (2.0 * before - total)


def solve_pi_time(profile, *, tol=PHASE_TOL, max_iter=200):
    """Pi-pulse time cancelling the nuclear transport phase, by bisection.

    Raises
    ------
    NoRoot
        If the phase has the same sign with the pulse at either end.
    """
    lo, hi = 0.0, profile.t_move
    f_lo, f_hi = nuclear_phase(profile, lo), nuclear_phase(profile, hi)
    if abs(f_lo) < tol:
        return lo
    if f_lo * f_hi > 0:
        raise NoRoot("nuclear phase does not change sign over the movement")
    for _ in range(max_iter):
        mid = 0.5 * (lo + hi)
        f_mid = nuclear_phase(profile, mid)
        if abs(f_mid) < tol:
            return mid
        if (f_mid < 0) == (f_lo < 0):
            lo, f_lo = mid, f_mid
        else:
            hi = mid
    for t, f in ((lo, f_lo), (hi, f_hi)):
        if abs(f) < tol:
            return t
    raise NoRoot(f"bisection did not reach |phase| < {tol} rad")


def fringe_scan(profile, t_pi_grid):
    """Readout contrast cos(nuclear phase) versus pi-pulse time."""
    return np.cos(nuclear_phase(profile, np.asarray(t_pi_grid, dtype=float)))


# -- two-qubit sequence -----------------------------------------------------------

@dataclass
class SequenceConfig:
    tau: float = 0.9e-6  # entangled phase-accumulation interval, s
    theta: float = 0.0  # axis angle of the final nuclear pi/2 pulse, rad
    f_acc: float = 0.9e6  # Hz
    nuclear_polarization: float = 0.78
    t_pi: float = None  # None: solve from the profile
    t_move: float = 1.7e-3
    t_pulse: float = 20e-6  # nuclear pi-pulse length, timing budget only

    def __post_init__(self):
        if not 0.0 <= self.nuclear_polarization <= 1.0:
            raise InputError("nuclear_polarization must lie in [0, 1]")
        if self.tau < 0 or self.t_move <= 0:
            raise InputError("tau must be >= 0 and t_move > 0")
        if self.t_pi is not None and not 0.0 <= self.t_pi <= self.t_move:
            raise InputError("t_pi must lie in [0, t_move]")

    def branches(self):
        """Default 13C mixture: detuning +-f_acc with equal weight."""
        return [(self.f_acc, 0.5), (-self.f_acc, 0.5)]


def nuclear_rotation(axis_angle, angle):
    """SU(2) rotation of the nucleus about an equatorial axis (``dn`` = Bloch +z)."""
    c, s = np.cos(0.5 * angle), np.sin(0.5 * angle)
    e = np.exp(-1j * axis_angle)
    return np.array([[c, -1j * s * e], [-1j * s * np.conj(e), c]])


def _rotate_nucleus(psi, U):
    return psi @ U.T


def _cnot(psi):
    # flip the electron when the nucleus is up
    out = psi.copy()
    out[:, 1] = psi[::-1, 1]
    return out


def _electron_phase(psi, phi):
    out = psi.copy()
    out[1, :] *= np.exp(1j * phi)
    return out


def _nuclear_phase(psi, phi):
    out = psi.copy()
    out[:, 1] *= np.exp(-1j * phi)
    return out


def _check_branches(branches):
    probs = np.array([p for _, p in branches], dtype=float)
    if probs.size == 0 or np.any(probs < 0) or abs(probs.sum() - 1.0) > 1e-9:
        raise InvalidProbability("13C branch probabilities must be >= 0 and sum to 1")


def _pi_time(cfg, profile):
    if cfg.t_pi is not None:
        return cfg.t_pi
    if not np.any(profile.delta_e):
        return 0.5 * profile.t_move
    return solve_pi_time(profile)


def final_state(cfg, profile, detuning, nucleus_up, t_pi=None):
    """Register state after the full sequence for one pure starting state.

    ``detuning`` (Hz) sets the electron phase ``2 pi detuning tau`` gathered
    by the ``|-1>`` component while entangled.
    """
    t_pi = _pi_time(cfg, profile) if t_pi is None else t_pi
    psi = np.zeros((2, 2), dtype=complex)
    psi[1, 1 if nucleus_up else 0] = 1.0
    psi = _rotate_nucleus(psi, nuclear_rotation(0.0, np.pi / 2))
    psi = _cnot(psi)
    psi = _electron_phase(psi, 2.0 * np.pi * detuning * cfg.tau)
    psi = _cnot(psi)
    before = profile.integral_to(t_pi)
    after = profile.integral_to(profile.t_move) - before
    psi = _nuclear_phase(psi, 2.0 * np.pi * before)
    psi = _rotate_nucleus(psi, nuclear_rotation(0.0, np.pi))
    psi = _nuclear_phase(psi, 2.0 * np.pi * after)
    psi = _rotate_nucleus(psi, nuclear_rotation(cfg.theta, np.pi / 2))
    return psi.reshape(4)


def _readout(state):
    p = np.abs(state) ** 2
    return float(p[0] + p[2] - p[1] - p[3])


def simulate_memory_sequence(cfg, profile, c13_detunings=None):
    """Nuclear readout contrast P(dn) - P(up) after the memory sequence.

    Averages over the 13C detuning branches ``[(Hz, probability), ...]`` and
    over the nuclear initial-state mixture. For ideal gates this equals
    ``(2p - 1) * sum_k w_k cos(2 pi f_k tau - theta + phase_residual)``.
    """
    branches = cfg.branches() if c13_detunings is None else list(c13_detunings)
    _check_branches(branches)
    if abs(profile.t_move - cfg.t_move) > 1e-9 * cfg.t_move:
        raise InputError("profile duration does not match t_move")
    if 2.0 * cfg.t_pulse > 0.05 * cfg.t_move:
        warnings.warn("nuclear pulse durations exceed 5% of the movement time; "
                      "instantaneous-gate results may be optimistic", RuntimeWarning)
    t_pi = _pi_time(cfg, profile)
    p = cfg.nuclear_polarization
    total = 0.0
    for f, w in branches:
        if w == 0:
            continue
        down = _readout(final_state(cfg, profile, f, False, t_pi))
        up = _readout(final_state(cfg, profile, f, True, t_pi))
        total += w * (p * down + (1.0 - p) * up)
    return total


def theta_scan(cfg, profile, thetas, c13_detunings=None):
    out = []
    for th in np.asarray(thetas, dtype=float):
        out.append(simulate_memory_sequence(_with(cfg, theta=float(th)), profile, c13_detunings))
    return np.array(out)


def ramsey_vs_tau(cfg, profile, tau_grid, c13_detunings=None):
    """Contrast versus accumulation interval at fixed readout angle."""
    out = []
    for tau in np.asarray(tau_grid, dtype=float):
        out.append(simulate_memory_sequence(_with(cfg, tau=float(tau)), profile, c13_detunings))
    return np.array(out)


def _with(cfg, **changes):
    values = dict(cfg.__dict__)
    values.update(changes)
    return SequenceConfig(**values)
