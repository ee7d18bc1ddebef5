import json
import math

import numpy as np
import pytest

from varlp import textio
from varlp.exponents import VariableExponent
from varlp.measure import GridMeasureSpace
from varlp.nuclear import NuclearRepresentation, rep_trace
from varlp.torus import FrequencyBox, TorusGrid, bessel_symbol, lidskii_report, symbol_trace


def test_pairs_and_infinity():
    assert textio.to_pair(1 - 2j) == [1.0, -2.0]
    assert textio.from_pair([1, -2]) == 1 - 2j
    assert textio.from_pair(3) == 3
    assert math.isinf(textio.from_pair("inf").real)
    for bad in ([1, 2, 3], "x", True, None):
        with pytest.raises(ValueError):
            textio.from_pair(bad)
    assert textio.clean({"a": np.float64(np.inf), "b": np.arange(2), "c": np.complex128(1j)}) == \
        {"a": "inf", "b": [0, 1], "c": [0.0, 1.0]}


def test_dumps_is_strict_json():
    text = textio.dumps({"x": np.inf, "y": [np.nan]})
    assert json.loads(text) == {"x": "inf", "y": ["nan"]}


def test_grid_function_round_trip(rng):
    sp = GridMeasureSpace(rng.uniform(size=(5, 2)), rng.uniform(0.1, 1, 5))
    f = sp.function(rng.normal(size=5) + 1j * rng.normal(size=5))
    doc = json.loads(textio.dumps(textio.grid_function_to_doc(f)))
    back = textio.grid_function_from_doc(doc)
    assert back.space.same_as(sp)
    assert np.array_equal(back.values, f.values)


def test_exponent_round_trip(unit4):
    p = VariableExponent(unit4, [1, 2.5, np.inf, 7])
    doc = json.loads(textio.dumps(textio.exponent_to_doc(p)))
    assert doc["atoms"][2]["p"] == "inf"
    assert np.array_equal(textio.exponent_from_doc(doc).values, p.values)


def test_representation_round_trip(rng, unit4):
    rep = NuclearRepresentation.from_arrays(rng.normal(size=(3, 4)) + 1j, rng.normal(size=(3, 4)), unit4)
    doc = json.loads(textio.dumps(textio.representation_to_doc(rep)))
    back = textio.representation_from_doc(doc)
    assert len(back) == 3
    assert rep_trace(back) == rep_trace(rep)


def test_symbol_round_trip():
    sym = bessel_symbol(2, TorusGrid(1, 9), FrequencyBox(1, 4))
    back = textio.symbol_from_doc(json.loads(textio.dumps(textio.symbol_to_doc(sym))))
    assert back.multiplier and back.tag == sym.tag
    assert np.array_equal(back.values, sym.values)
    assert symbol_trace(back) == symbol_trace(sym)
    doc = textio.symbol_to_doc(sym)
    doc["table"] = doc["table"][:-1]
    with pytest.raises(ValueError):
        textio.symbol_from_doc(doc)


def test_report_doc():
    rep = lidskii_report(bessel_symbol(2, TorusGrid(1, 9), FrequencyBox(1, 4)), 2 / 3)
    doc = json.loads(textio.dumps(textio.report_to_doc(rep, top_k=3)))
    assert doc["eigenvalue_count"] == 9 and len(doc["top_eigenvalues"]) == 3
    assert doc["grothendieck_regime"] is True and doc["summable"] is True
    assert set(doc["discrepancies"]) == {"eigen_vs_matrix", "eigen_vs_symbol", "matrix_vs_symbol"}


def test_write_atomic(tmp_path):
    path = tmp_path / "out.json"
    textio.write_atomic(str(path), "hello\n")
    assert path.read_text() == "hello\n"
    assert [p.name for p in tmp_path.iterdir()] == ["out.json"]
