"""Spin-mechanical cooperativity bookkeeping.

Convention: C = (lambda/2pi)^2 * T2 / (n_th kappa / 2pi), i.e. the spin
dephasing rate is 1/T2 in ordinary Hz and both mechanical quantities are
quoted divided by 2 pi.
"""
from dataclasses import dataclass

import numpy as np

from .constants import GAMMA_E, HBAR
from .errors import InputError
from .mech import thermal_occupation

COLUMNS = ("label", "lambda_over_2pi_hz", "t2_s", "n_kappa_over_2pi_hz")


@dataclass(frozen=True)
class CoopInputs:
    lambda_over_2pi: float
    t2: float
    n_kappa_over_2pi: float
    label: str = ""

    def __post_init__(self):
        if not (self.lambda_over_2pi >= 0 and self.t2 > 0 and self.n_kappa_over_2pi > 0):
            raise InputError(f"invalid cooperativity inputs for {self.label!r}")


# Published NV spin-mechanics platforms, for comparison tables.
EXAMPLE_ROWS = (
    CoopInputs(7.7, 8.8e-4, 5e5, "nanobeam, magnet-functionalized (20 K)"),
    CoopInputs(4.8e-2, 1.0e-2, 8e4, "levitated micromagnet (4 K)"),
    CoopInputs(1.4e2, 4.0e-4, 4e10, "SiC nanowire (300 K)"),
    CoopInputs(7.7, 1.2e-6, 2e5, "cantilever (5 K)"),
)


def cooperativity(inputs):
    return inputs.lambda_over_2pi ** 2 * inputs.t2 / inputs.n_kappa_over_2pi


def n_kappa(temperature, f_r, q_factor):
    """Thermal decoherence rate n_th * kappa / 2pi in Hz."""
    if not (f_r > 0 and q_factor > 0):
        raise InputError("f_r and q_factor must be positive")
    return thermal_occupation(temperature, f_r) * f_r / q_factor


@dataclass(frozen=True)
class Scenario:
    """Improvement scenario. Give ``lambda_over_2pi`` directly, or a
    ``gradient`` together with ``z_p`` or ``m_eff``."""
    q_factor: float
    f_r: float
    temperature: float
    t2: float
    gradient: float = None
    z_p: float = None
    m_eff: float = None
    lambda_over_2pi: float = None

    def __post_init__(self):
        if not (self.q_factor > 0 and self.f_r > 0 and self.temperature > 0 and self.t2 > 0):
            raise InputError("scenario parameters must be positive")
        if self.lambda_over_2pi is None:
            if self.gradient is None or (self.z_p is None and self.m_eff is None):
                raise InputError("scenario needs lambda_over_2pi, or gradient with z_p or m_eff")


@dataclass(frozen=True)
class Projection:
    lambda_over_2pi: float
    n_kappa_over_2pi: float
    cooperativity: float

    def to_json(self):
        return {"lambda_over_2pi_hz": self.lambda_over_2pi,
                "n_kappa_over_2pi_hz": self.n_kappa_over_2pi,
                "cooperativity": self.cooperativity}


def project_scenario(s, gamma_e=GAMMA_E):
    if s.lambda_over_2pi is not None:
        lam = s.lambda_over_2pi
    else:
        z_p = s.z_p
        if z_p is None:
            z_p = np.sqrt(HBAR / (2.0 * s.m_eff * 2.0 * np.pi * s.f_r))
        lam = gamma_e * z_p * s.gradient
    nk = n_kappa(s.temperature, s.f_r, s.q_factor)
    c = cooperativity(CoopInputs(lam, s.t2, nk))
    return Projection(float(lam), float(nk), float(c))


def table(rows):
    """Rows as dicts with the input columns plus ``cooperativity``."""
    return [{"label": r.label, "lambda_over_2pi_hz": r.lambda_over_2pi, "t2_s": r.t2,
             "n_kappa_over_2pi_hz": r.n_kappa_over_2pi, "cooperativity": cooperativity(r)}
            for r in rows]
