"""CSV and JSON readers and writers.

CSV files are comma-separated with a mandatory header row; lines starting
with ``#`` are ignored. Floats are written with ``repr`` so that output is
exact and reproducible.
"""
import csv
import io
import json

import numpy as np

from .constants import GAUSS
from .coop import CoopInputs
from .errors import InputError
from .spinmodel import FieldMap

UM = 1e-6


def _lines(text):
    return [ln for ln in text.splitlines() if ln.strip() and not ln.lstrip().startswith("#")]


def parse_csv(text):
    """Header and rows of a CSV document as ``(list of names, list of lists of str)``."""
    lines = _lines(text)
    if not lines:
        raise InputError("CSV input is empty (header row required)")
    reader = csv.reader(lines)
    header = [h.strip() for h in next(reader)]
    rows = [[c.strip() for c in r] for r in reader]
    for k, r in enumerate(rows, start=1):
        if len(r) != len(header):
            raise InputError(f"CSV row {k} has {len(r)} fields, header has {len(header)}")
    return header, rows


def _numeric(header, rows, required):
    missing = [c for c in required if c not in header]
    if missing:
        raise InputError(f"CSV header {','.join(header)} lacks column(s) {','.join(missing)}")
    idx = [header.index(c) for c in required]
    try:
        data = np.array([[float(r[i]) for i in idx] for r in rows], dtype=float).reshape(-1, len(idx))
    except ValueError as exc:
        raise InputError(f"non-numeric CSV value: {exc}") from None
    if not np.all(np.isfinite(data)):
        raise InputError("CSV contains non-finite values")
    return data


def read_columns(text, columns):
    """Named numeric columns as a tuple of arrays."""
    header, rows = parse_csv(text)
    data = _numeric(header, rows, columns)
    return tuple(data[:, k] for k in range(len(columns)))


def format_float(v):
    return repr(float(v))


def write_csv(header, rows):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow([format_float(v) if isinstance(v, (float, np.floating)) else v for v in r])
    return buf.getvalue()


def write_json(obj):
    return json.dumps(_plain(obj), indent=2, sort_keys=True) + "\n"


def _plain(obj):
    if isinstance(obj, dict):
        return {k: _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _plain(obj.tolist())
    if isinstance(obj, (np.floating,)):
        return float(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    return obj


def read_json(text):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"invalid JSON: {exc}") from None


# -- field maps ------------------------------------------------------------------

def _grid(xs, ys):
    ux, uy = np.unique(xs), np.unique(ys)
    if ux.size * uy.size != xs.size:
        raise InputError("map rows do not form a complete rectangular grid")
    # row-major: y outer, x inner
    want_x = np.tile(ux, uy.size)
    want_y = np.repeat(uy, ux.size)
    if not (np.array_equal(xs, want_x) and np.array_equal(ys, want_y)):
        raise InputError("map rows must be row-major (x fastest) over a sorted grid")
    return ux, uy


def read_field_map(text):
    """FieldMap from CSV. ESR maps carry ``f_minus_hz,f_plus_hz``; axial maps
    carry ``bz_tesla`` or ``bz_gauss``. Coordinates are in micrometers."""
    header, rows = parse_csv(text)
    if "f_minus_hz" in header:
        cols, kind = ["f_minus_hz", "f_plus_hz"], "esr"
    elif "bz_tesla" in header:
        cols, kind = ["bz_tesla"], "axial"
    elif "bz_gauss" in header:
        cols, kind = ["bz_gauss"], "axial"
    else:
        raise InputError("map CSV needs f_minus_hz,f_plus_hz or bz_tesla or bz_gauss columns")
    data = _numeric(header, rows, ["x_um", "y_um"] + cols)
    valid = (_numeric(header, rows, ["valid"])[:, 0] if "valid" in header
             else np.ones(data.shape[0]))
    if not np.all(np.isin(valid, (0.0, 1.0))):
        raise InputError("valid column must hold 0 or 1")
    ux, uy = _grid(data[:, 0], data[:, 1])
    shape = (uy.size, ux.size)
    vals = data[:, 2:]
    if cols == ["bz_gauss"]:
        vals = vals * GAUSS
    vals = vals.reshape(shape + ((2,) if kind == "esr" else ()))
    return FieldMap(ux * UM, uy * UM, vals, valid.reshape(shape).astype(bool), kind)


def write_field_map(fmap):
    X, Y = np.meshgrid(fmap.x / UM, fmap.y / UM)
    valid = fmap.mask.ravel().astype(int)
    if fmap.kind == "esr":
        header = ["x_um", "y_um", "f_minus_hz", "f_plus_hz", "valid"]
        v = fmap.values.reshape(-1, 2)
        rows = [[X.flat[k], Y.flat[k], v[k, 0], v[k, 1], int(valid[k])] for k in range(v.shape[0])]
    elif fmap.kind == "axial":
        header = ["x_um", "y_um", "bz_tesla", "valid"]
        v = fmap.values.ravel()
        rows = [[X.flat[k], Y.flat[k], v[k], int(valid[k])] for k in range(v.size)]
    else:
        header = ["x_um", "y_um", "grad_t_per_m"]
        v = fmap.values.ravel()
        rows = [[X.flat[k], Y.flat[k], v[k]] for k in range(v.size)]
    return write_csv(header, [[float(a) if isinstance(a, np.floating) else a for a in r] for r in rows])


# -- cooperativity rows ------------------------------------------------------------

def read_coop_rows(text):
    header, rows = parse_csv(text)
    need = ["label", "lambda_over_2pi_hz", "t2_s", "n_kappa_over_2pi_hz"]
    missing = [c for c in need if c not in header]
    if missing:
        raise InputError(f"coop CSV lacks column(s) {','.join(missing)}")
    li = header.index("label")
    nums = _numeric(header, rows, need[1:])
    return [CoopInputs(float(n[0]), float(n[1]), float(n[2]), r[li]) for r, n in zip(rows, nums)]
