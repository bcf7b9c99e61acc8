import dataclasses

import pytest

from lcscohom import Form, builtin, full_table, golden_diff, load_golden
from lcscohom.catalog import NAMES, GridMismatch, InvalidParameters, UnknownEntry, entry_from_document, ot21_minus_omega
from lcscohom.lcs import lee_form, triple_defects
from lcscohom.linalg import scalar


def table_for(entry):
    g = entry.golden
    return full_table(entry.structure, g.weights, g.theories)


def test_names():
    assert NAMES == ("rh3", "d4", "ot21")


@pytest.mark.parametrize("name,theta", [("rh3", "e4"), ("d4", "-e4"), ("ot21", "e1+e2")])
def test_builtin_lee_forms(name, theta):
    e = builtin(name)
    assert e.structure.theta == Form.parse(theta, e.structure.dim)
    assert lee_form(e.algebra, e.structure.omega) == e.structure.theta


def test_unknown_entry():
    with pytest.raises(UnknownEntry):
        builtin("nope")


def test_invalid_parameters():
    with pytest.raises(InvalidParameters):
        builtin("rh3", {"c1": 1})
    with pytest.raises(InvalidParameters):
        builtin("ot21", {"c3": 1})
    with pytest.raises(InvalidParameters):
        builtin("ot21", {"c1": 2, "c2": 2}, variant="minus")
    with pytest.raises(InvalidParameters):
        builtin("ot21", variant="sideways")


def test_ot21_minus_variant():
    e = builtin("ot21", {"c1": 3, "c2": "1/2"}, variant="minus")
    assert e.structure.theta == Form.parse("-e1-e2", 6)
    assert e.golden is None


def test_minus_omega_default():
    assert ot21_minus_omega(1, 0) == Form.parse("e15+2/3e16+e25+e34", 6)


@pytest.mark.parametrize("c1,c2", [(1, 0), (2, -1), ("1/2", 3), (0, 5)])
def test_minus_family_is_lcs(c1, c2):
    e = builtin("ot21", {"c1": c1, "c2": c2}, variant="minus")
    s = e.structure
    assert not triple_defects(s.omega, s.J, s.metric)
    assert lee_form(s.algebra, s.omega) == Form.parse("-e1-e2", 6)


@pytest.mark.parametrize("name", NAMES)
def test_golden_tables_reproduced(name):
    e = builtin(name)
    d = golden_diff(table_for(e), e.golden)
    assert d.empty, d.as_dict()
    assert d.cells_compared == len(e.golden.cells)


def test_perturbed_golden_is_reported():
    e = builtin("rh3")
    g = e.golden
    key = ("deRham", 2, scalar(0))
    dim, reps = g.cells[key]
    cells = dict(g.cells)
    cells[key] = (dim + 1, reps)
    d = golden_diff(table_for(e), dataclasses.replace(g, cells=cells))
    assert d.dim_diffs == [{"theory": "deRham", "h": 2, "k": "0", "computed": 4, "golden": 5}]


def test_foreign_span_is_reported():
    e = builtin("rh3")
    g = e.golden
    key = ("deRham", 2, scalar(0))
    dim, reps = g.cells[key]
    cells = dict(g.cells)
    cells[key] = (dim, [Form.parse("e12", 4)] + list(reps[1:]))  # e12 is exact here
    d = golden_diff(table_for(e), dataclasses.replace(g, cells=cells))
    assert [(x["theory"], x["h"], x["k"]) for x in d.span_diffs] == [("deRham", 2, "0")]
    assert not d.dim_diffs


def test_missing_cell_is_grid_mismatch():
    e = builtin("rh3")
    t = full_table(e.structure, [0], ["deRham"])
    with pytest.raises(GridMismatch):
        golden_diff(t, e.golden)


@pytest.mark.parametrize("name", NAMES)
def test_golden_euler_characteristic_vanishes(name):
    g = load_golden(name)
    for k in g.weights:
        assert sum((-1) ** h * g.dim_of("deRham", h, k) for h in range(g.dim + 1)) == 0


def test_entry_summary_and_document_roundtrip():
    e = builtin("d4")
    s = e.summary()
    assert s["structure"] == "(14,-24,-12,0)" and s["theta"] == "-e4"
    doc = {"name": "mine", "dim": 4, "structure": "(0,0,12,0)", "omega": [[1, 2, "1"], [3, 4, "1"]]}
    mine = entry_from_document(doc)
    assert mine.structure.theta == Form.parse("e4", 4)
