import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import optimize

from spinmech.errors import AllInvalid, InputError, OutOfRange
from spinmech.spinmodel import (EsrPair, FieldComponents, FieldMap, SpinParams, esr_frequencies,
                                hamiltonian, interpolate_missing, invert_field, map_to_axial_field)

from conftest import synth_map

D, G = 2.8707e9, 2.8e10


def oracle_pair(bz, bx):
    # dense eigensolver on an independently written matrix
    s = 1 / np.sqrt(2)
    H = np.array([[D + G * bz, G * bx * s, 0], [G * bx * s, 0, G * bx * s], [0, G * bx * s, D - G * bz]])
    w, v = np.linalg.eigh(H)
    k0 = np.argmax(np.abs(v[1]))
    e = sorted(abs(w[i] - w[k0]) for i in range(3) if i != k0)
    return e


def test_zero_field(spin):
    e = esr_frequencies(spin, FieldComponents(0.0, 0.0))
    assert (e.f_minus, e.f_plus) == pytest.approx((D, D), abs=1e-3)


def test_axial_zeeman(spin):
    e = esr_frequencies(spin, FieldComponents(0.01, 0.0))
    assert e.f_minus == pytest.approx(2.5907e9, abs=1e-3)
    assert e.f_plus == pytest.approx(3.1507e9, abs=1e-3)


def test_transverse_vs_eigensolver(spin):
    e = esr_frequencies(spin, FieldComponents(0.01, 0.002))
    np.testing.assert_allclose([e.f_minus, e.f_plus], oracle_pair(0.01, 0.002), rtol=0, atol=1e-3)


@settings(max_examples=60, deadline=None)
@given(st.floats(-0.05, 0.05), st.floats(0, 0.005))
def test_trace_and_oracle(bz, bx):
    sp = SpinParams(D, G)
    w = np.linalg.eigvalsh(hamiltonian(sp, bz, bx))
    assert abs(w.sum() - 2 * D) < 1e-6
    e = esr_frequencies(sp, FieldComponents(bz, bx))
    np.testing.assert_allclose([e.f_minus, e.f_plus], oracle_pair(bz, bx), atol=1e-3)


def test_monotone_in_bz(spin):
    bz = np.linspace(0, 0.05, 30)
    pairs = [esr_frequencies(spin, FieldComponents(b, 0.0)) for b in bz]
    assert np.all(np.diff([p.f_plus for p in pairs]) > 0)
    assert np.all(np.diff([p.f_minus for p in pairs]) < 0)
    for b, p in zip(bz, pairs):
        assert p.f_plus - p.f_minus == pytest.approx(2 * G * b, abs=1e-3)


def test_field_limit(spin):
    with pytest.raises(OutOfRange):
        esr_frequencies(spin, FieldComponents(0.9, 0.5))


def test_invert_zero(spin):
    fc = invert_field(spin, EsrPair(D, D))
    assert fc.bz == 0 and fc.bx == 0


def test_invert_axial(spin):
    fc = invert_field(spin, EsrPair(2.5907e9, 3.1507e9))
    assert fc.bz == pytest.approx(0.01, abs=1e-12)
    assert fc.bx == pytest.approx(0.0, abs=1e-7)


def test_invert_against_generic_root_finder(spin):
    target = esr_frequencies(spin, FieldComponents(0.0213, 0.0031))
    fc = invert_field(spin, target)

    def resid(b):
        e = esr_frequencies(spin, FieldComponents(b[0], abs(b[1])))
        return [(e.f_minus - target.f_minus) / 1e6, (e.f_plus - target.f_plus) / 1e6]
    ref = optimize.fsolve(resid, [0.02, 0.002], xtol=1e-14)
    assert fc.bz == pytest.approx(ref[0], abs=1e-9)
    assert fc.bx == pytest.approx(abs(ref[1]), abs=1e-8)


def test_invert_roundtrip_random(spin):
    rng = np.random.default_rng(7)
    bz = rng.uniform(0, 0.05, 300)
    bx = rng.uniform(0, 0.005, 300)
    for z, x in zip(bz, bx):
        e = esr_frequencies(spin, FieldComponents(z, x))
        fc = invert_field(spin, e)
        assert abs(fc.bz - z) < 1e-7 and abs(fc.bx - x) < 1e-7
        back = esr_frequencies(spin, fc)
        assert abs(back.f_minus - e.f_minus) < 1e-3 and abs(back.f_plus - e.f_plus) < 1e-3


def test_invert_rejects_bad_pairs(spin):
    with pytest.raises(OutOfRange):
        invert_field(spin, EsrPair(3.0e9, 2.9e9))
    with pytest.raises(OutOfRange):
        invert_field(spin, EsrPair(-1.0, 2.9e9))


def test_spin_params_validate():
    with pytest.raises(InputError):
        SpinParams(-1.0, G)


def _esr_uniform(fm, fp, n=4, mask=None):
    x = np.arange(n) * 1e-7
    vals = np.empty((n, n, 2))
    vals[..., 0], vals[..., 1] = fm, fp
    return FieldMap(x, x, vals, mask, "esr")


def test_map_uniform(spin):
    out, rep = map_to_axial_field(spin, _esr_uniform(2.5907e9, 3.1507e9))
    np.testing.assert_allclose(out.values, 0.01, atol=1e-12)
    assert rep.n_failed == 0 and out.kind == "axial"


def test_map_mask_and_failures(spin):
    mask = np.ones((4, 4), bool)
    mask[0, 1] = mask[2, 3] = False
    fmap = _esr_uniform(2.5907e9, 3.1507e9, mask=mask)
    fmap.values[1, 1] = (3.2e9, 3.1e9)  # f_plus < f_minus: fails
    out, rep = map_to_axial_field(spin, fmap)
    assert rep.n_failed == 1 and rep.failed_pixels == [(1, 1)]
    assert not out.mask[0, 1] and not out.mask[2, 3] and not out.mask[1, 1]
    assert out.n_invalid == 3


def test_map_planted_dipole(spin):
    esr = synth_map("esr-map")
    axial = synth_map("dipole-map")
    out, rep = map_to_axial_field(spin, esr, threads=4)
    assert rep.n_failed == 0
    # the spectrum is even in bz, so inversion returns |bz|
    assert np.max(np.abs(out.values - np.abs(axial.values))) < 1e-7


def test_interp_identity_and_constant():
    x = np.arange(5) * 1.0
    full = FieldMap(x, x, np.arange(25.0).reshape(5, 5))
    np.testing.assert_array_equal(interpolate_missing(full).values, full.values)
    mask = np.ones((5, 5), bool)
    mask[2, 2] = False
    const = FieldMap(x, x, np.where(mask, 3.5, 0.0), mask)
    out = interpolate_missing(const)
    assert out.values[2, 2] == 3.5 and out.mask.all()


def test_interp_linear_ramp():
    x = np.arange(6) * 1e-6
    X, Y = np.meshgrid(x, x)
    ramp = 2.0 + 3e5 * X - 1e5 * Y
    mask = np.ones_like(ramp, bool)
    mask[3, 2] = False
    out = interpolate_missing(FieldMap(x, x, np.where(mask, ramp, -9.0), mask))
    assert out.values[3, 2] == pytest.approx(ramp[3, 2], rel=1e-12)


def test_interp_large_hole_idempotent(rng):
    x = np.arange(8) * 1.0
    vals = rng.normal(size=(8, 8))
    mask = np.ones((8, 8), bool)
    mask[2:6, 2:6] = False
    fmap = FieldMap(x, x, vals, mask)
    out = interpolate_missing(fmap)
    assert out.mask.all()
    np.testing.assert_array_equal(out.values[mask], vals[mask])
    np.testing.assert_array_equal(interpolate_missing(out).values, out.values)


def test_interp_all_invalid():
    x = np.arange(3) * 1.0
    with pytest.raises(AllInvalid):
        interpolate_missing(FieldMap(x, x, np.zeros((3, 3)), np.zeros((3, 3), bool)))


def test_fieldmap_validation():
    with pytest.raises(InputError):
        FieldMap([0.0], [0.0, 1.0], np.zeros((2, 1)))
    with pytest.raises(InputError):
        FieldMap([0.0, 1.0], [0.0, 1.0], np.zeros((2, 3)))
