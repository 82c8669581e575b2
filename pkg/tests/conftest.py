import numpy as np
import pytest

from spinmech import io as sio
from spinmech.dipole import NvAxis
from spinmech.echo import Coupling
from spinmech.spinmodel import SpinParams
from spinmech.synth import generate_synthetic

# Reference experiment scale used across tests.
LAMBDA_HZ = 7.7
DELTA_X = 1.86e-9
F_R = 1.4e6
Z_P = 1.146e-14


@pytest.fixture
def spin():
    return SpinParams(2.8707e9, 2.8e10)


@pytest.fixture
def coupling():
    return Coupling.from_hz(LAMBDA_HZ, Z_P, F_R)


@pytest.fixture
def z_axis():
    return NvAxis([0.0, 0.0, 1.0])


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def synth_map(kind="dipole-map", seed=0, **params):
    return sio.read_field_map(generate_synthetic(kind, params, seed))
