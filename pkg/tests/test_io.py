import numpy as np
import pytest

from spinmech import io as sio
from spinmech.errors import InputError
from spinmech.spinmodel import FieldMap

from conftest import synth_map


def test_parse_comments_and_header():
    text = "# comment\nfreq_hz,psd_m2_per_hz\n\n1.0,2.0\n# mid\n3.0,4.0\n"
    f, p = sio.read_columns(text, ["freq_hz", "psd_m2_per_hz"])
    np.testing.assert_array_equal(f, [1, 3])
    np.testing.assert_array_equal(p, [2, 4])


@pytest.mark.parametrize("text", ["", "# only comment\n", "a,b\n1,2,3\n", "a,b\n1,x\n", "a,b\n1,nan\n"])
def test_parse_errors(text):
    with pytest.raises(InputError):
        sio.read_columns(text, ["a", "b"])


def test_missing_column():
    with pytest.raises(InputError, match="lacks"):
        sio.read_columns("t_s,x\n1,2\n", ["t_s", "contrast"])


def test_field_map_roundtrip_exact():
    fmap = synth_map()
    mask = fmap.mask.copy()
    mask[1, 2] = False
    fmap = fmap.replace(fmap.values, mask)
    back = sio.read_field_map(sio.write_field_map(fmap))
    np.testing.assert_array_equal(back.values, fmap.values)
    np.testing.assert_array_equal(back.mask, fmap.mask)
    np.testing.assert_allclose(back.x, fmap.x, rtol=1e-15)
    esr = synth_map("esr-map")
    back = sio.read_field_map(sio.write_field_map(esr))
    assert back.kind == "esr"
    np.testing.assert_array_equal(back.values, esr.values)


def test_gauss_column():
    text = "x_um,y_um,bz_gauss,valid\n0,0,10,1\n1,0,20,1\n0,1,30,0\n1,1,40,1\n"
    fmap = sio.read_field_map(text)
    np.testing.assert_allclose(fmap.values, [[1e-3, 2e-3], [3e-3, 4e-3]])
    assert fmap.n_invalid == 1


def test_map_grid_errors():
    with pytest.raises(InputError):
        sio.read_field_map("x_um,y_um,bz_tesla,valid\n0,0,1,1\n1,0,1,1\n0,1,1,1\n")
    with pytest.raises(InputError):
        sio.read_field_map("x_um,y_um,bz_tesla,valid\n1,0,1,1\n0,0,1,1\n0,1,1,1\n1,1,1,1\n")
    with pytest.raises(InputError):
        sio.read_field_map("x_um,y_um,bz_tesla,valid\n0,0,1,2\n1,0,1,1\n0,1,1,1\n1,1,1,1\n")
    with pytest.raises(InputError):
        sio.read_field_map("x_um,y_um,foo\n0,0,1\n")


def test_gradient_map_csv():
    x = np.array([0.0, 1e-6])
    text = sio.write_field_map(FieldMap(x, x, np.ones((2, 2)), kind="gradient"))
    assert text.splitlines()[0] == "x_um,y_um,grad_t_per_m"


def test_coop_rows():
    rows = sio.read_coop_rows('label,lambda_over_2pi_hz,t2_s,n_kappa_over_2pi_hz\n"a, b",7.7,8.8e-4,5e5\n')
    assert rows[0].label == "a, b" and rows[0].t2 == 8.8e-4


def test_json_numpy_types():
    out = sio.write_json({"a": np.float64(1.5), "b": np.arange(2), "c": np.bool_(True)})
    assert sio.read_json(out) == {"a": 1.5, "b": [0, 1], "c": True}
    with pytest.raises(InputError):
        sio.read_json("{bad")


def test_float_format_roundtrip(rng):
    v = rng.normal(size=100) * 10.0 ** rng.integers(-30, 30, 100)
    text = sio.write_csv(["v"], [[float(a)] for a in v])
    (back,) = sio.read_columns(text, ["v"])
    np.testing.assert_array_equal(back, v)
