"""JSON documents for grid functions, exponents, representations, symbols and reports.

Conventions
-----------
* complex numbers are ``[re, im]`` pairs;
* an infinite exponent (or any infinite float) is the string ``"inf"``;
* grid functions and exponents are lists of per-atom records
  ``{"x": [...], "w": weight, "v": [re, im]}`` (``"p"`` instead of ``"v"``
  for exponents);
* symbol tables are row-major lists of ``[re, im]`` (atoms outer, lattice
  points inner).
"""
import json
import math
import os
import tempfile

import numpy as np

from .exponents import VariableExponent
from .measure import GridFunction, GridMeasureSpace
from .nuclear import NuclearRepresentation

__all__ = [
    "to_pair", "from_pair", "clean", "dumps", "write_atomic", "load",
    "space_to_doc", "grid_function_to_doc", "grid_function_from_doc",
    "exponent_to_doc", "exponent_from_doc", "representation_to_doc",
    "representation_from_doc", "symbol_to_doc", "symbol_from_doc", "report_to_doc",
]


def to_pair(z):
    z = complex(z)
    return [clean(z.real), clean(z.imag)]


def from_pair(value):
    if isinstance(value, (list, tuple)):
        if len(value) != 2:
            raise ValueError(f"complex value must be [re, im], got {value!r}")
        return complex(_real(value[0]), _real(value[1]))
    return complex(_real(value))


def _real(value):
    if isinstance(value, str):
        if value.strip().lower() in ("inf", "+inf", "infinity"):
            return math.inf
        raise ValueError(f"not a number: {value!r}")
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ValueError(f"not a number: {value!r}")
    return float(value)


def clean(value):
    """Recursively convert NumPy scalars and arrays to JSON-safe values."""
    if isinstance(value, dict):
        return {str(k): clean(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [clean(v) for v in value]
    if isinstance(value, np.ndarray):
        return clean(value.tolist())
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (complex, np.complexfloating)):
        return to_pair(value)
    if isinstance(value, (float, np.floating)):
        value = float(value)
        if math.isinf(value):
            return "inf" if value > 0 else "-inf"
        if math.isnan(value):
            return "nan"
        return value
    return value


def dumps(doc):
    return json.dumps(clean(doc), indent=2, sort_keys=True, allow_nan=False) + "\n"


def write_atomic(path, text):
    """Write ``text`` to ``path`` through a temporary file, so failures leave no partial file."""
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".varlp-", suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def load(path):
    with open(path) as fh:
        return json.load(fh)


def space_to_doc(space):
    return [{"x": clean(x), "w": float(w)} for x, w in zip(space.points, space.weights)]


def grid_function_to_doc(f):
    return {"atoms": [{"x": clean(x), "w": float(w), "v": to_pair(v)}
                      for x, w, v in zip(f.space.points, f.space.weights, f.values)]}


def _space_from_records(records):
    points = [[_real(c) for c in r["x"]] for r in records]
    weights = [_real(r["w"]) for r in records]
    return GridMeasureSpace(points, weights)


def grid_function_from_doc(doc, space=None):
    records = doc["atoms"]
    if space is None:
        space = _space_from_records(records)
    elif len(records) != space.size:
        raise ValueError(f"document has {len(records)} atoms, space has {space.size}")
    return GridFunction(space, [from_pair(r["v"]) for r in records])


def exponent_to_doc(p):
    return {"atoms": [{"x": clean(x), "w": float(w), "p": clean(v)}
                      for x, w, v in zip(p.space.points, p.space.weights, p.values)]}


def exponent_from_doc(doc, space=None):
    records = doc["atoms"]
    if space is None:
        space = _space_from_records(records)
    return VariableExponent(space, [_real(r["p"]) for r in records])


def representation_to_doc(rep):
    return {"terms": [{"g": grid_function_to_doc(g), "h": grid_function_to_doc(h)}
                      for g, h in rep.terms]}


def representation_from_doc(doc, out_space=None, in_space=None):
    terms = doc["terms"]
    if not terms:
        raise ValueError("representation has no terms")
    out_space = out_space or _space_from_records(terms[0]["g"]["atoms"])
    in_space = in_space or _space_from_records(terms[0]["h"]["atoms"])
    pairs = [(grid_function_from_doc(t["g"], out_space), grid_function_from_doc(t["h"], in_space))
             for t in terms]
    return NuclearRepresentation(pairs, out_space, in_space)


def symbol_to_doc(symbol):
    return {
        "grid": {"dim": symbol.grid.dim, "points": symbol.grid.n_points},
        "box": {"dim": symbol.box.dim, "radius": symbol.box.radius},
        "multiplier": symbol.multiplier,
        "tag": clean(symbol.tag),
        "table": [to_pair(v) for v in symbol.values.ravel()],
    }


def symbol_from_doc(doc):
    from .torus import FrequencyBox, ToroidalSymbol, TorusGrid

    grid = TorusGrid(int(doc["grid"]["dim"]), int(doc["grid"]["points"]))
    box = FrequencyBox(int(doc["box"]["dim"]), int(doc["box"]["radius"]))
    table = np.array([from_pair(v) for v in doc["table"]], dtype=complex)
    if table.size != grid.size * len(box):
        raise ValueError(f"symbol table has {table.size} entries, expected {grid.size * len(box)}")
    return ToroidalSymbol(grid, box, table.reshape(grid.size, len(box)),
                          multiplier=bool(doc.get("multiplier", False)), tag=doc.get("tag"))


def report_to_doc(report, top_k=16):
    return {
        "eigenvalue_count": int(report.eigenvalues.size),
        "top_eigenvalues": [to_pair(v) for v in report.eigenvalues[:top_k]],
        "eigen_sum": to_pair(report.eigen_sum),
        "matrix_trace": to_pair(report.matrix_trace),
        "symbol_trace": to_pair(report.symbol_trace),
        "discrepancies": clean(report.discrepancies),
        "r": report.r,
        "tau": report.tau,
        "radius": report.radius,
        "n_points": report.n_points,
        "grothendieck_regime": report.grothendieck_regime,
        "summable": report.summable,
    }
