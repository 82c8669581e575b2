import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from spinmech.coop import (EXAMPLE_ROWS, CoopInputs, Scenario, cooperativity, n_kappa,
                           project_scenario, table)
from spinmech.errors import InputError

pos = st.floats(1e-3, 1e3)


def test_reference_rows():
    c = [cooperativity(r) for r in EXAMPLE_ROWS]
    assert c[0] == pytest.approx(7.7 ** 2 * 8.8e-4 / 5e5, rel=1e-15)
    assert c[0] == pytest.approx(1.04e-7, rel=0.01)
    assert c[1] == pytest.approx(2.88e-10, rel=1e-12)


def test_quadratic_in_lambda():
    a = CoopInputs(3.0, 1e-3, 1e4)
    assert cooperativity(CoopInputs(6.0, 1e-3, 1e4)) == 4 * cooperativity(a)


@settings(max_examples=100)
@given(pos, pos, pos)
def test_homogeneity(a, b, c):
    base = CoopInputs(7.7, 1e-3, 5e5)
    scaled = CoopInputs(7.7 * a, 1e-3 * b, 5e5 * c)
    assert cooperativity(scaled) == pytest.approx(cooperativity(base) * a * a * b / c, rel=1e-12)


def test_n_kappa():
    assert n_kappa(0.0, 1.4e6, 1e5) == 0.0
    assert n_kappa(20.0, 1.4e6, 1.4e6 / 1.5) == pytest.approx(4.5e5, rel=0.01)
    assert n_kappa(4.0, 1.4e6, 2e9) == pytest.approx(n_kappa(4.0, 1.4e6, 1e9) / 2, rel=1e-15)


@settings(max_examples=50)
@given(st.floats(1.0, 1e12))
def test_n_kappa_times_q_constant(q):
    assert n_kappa(4.0, 1.4e6, q) * q == pytest.approx(n_kappa(4.0, 1.4e6, 1.0), rel=1e-12)


def test_projection_reference():
    p = project_scenario(Scenario(1e9, 1.4e6, 4.0, 1e-2, lambda_over_2pi=800.0))
    assert p.n_kappa_over_2pi == pytest.approx(84, rel=0.02)
    assert 67 <= p.cooperativity <= 83


def test_projection_paths_agree():
    m, f = 6e-14, 1.4e6
    z_p = np.sqrt(1.054571817e-34 / (2 * m * 2 * np.pi * f))
    a = project_scenario(Scenario(1e9, f, 4.0, 1e-2, gradient=1.4e6, z_p=z_p))
    b = project_scenario(Scenario(1e9, f, 4.0, 1e-2, gradient=1.4e6, m_eff=m))
    assert a.cooperativity == pytest.approx(b.cooperativity, rel=1e-12)
    assert project_scenario(Scenario(1e9, f, 4.0, 1e-2, gradient=0.0, z_p=z_p)).cooperativity == 0.0


def test_room_temperature_scenario_reported():
    p = project_scenario(Scenario(1e9, 1.4e6, 300.0, 2e-3, gradient=1.4e6, z_p=2.04e-14))
    assert p.cooperativity > 0 and np.isfinite(p.cooperativity)


def test_table():
    assert table([]) == []
    rows = table([EXAMPLE_ROWS[0], EXAMPLE_ROWS[0]])
    assert rows[0]["cooperativity"] == rows[1]["cooperativity"]
    assert set(rows[0]) == {"label", "lambda_over_2pi_hz", "t2_s", "n_kappa_over_2pi_hz", "cooperativity"}


def test_validation():
    with pytest.raises(InputError):
        CoopInputs(1.0, 0.0, 1.0)
    with pytest.raises(InputError):
        Scenario(1e9, 1.4e6, 4.0, 1e-2)
