import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from lcscohom.catalog import ot21_algebra
from lcscohom.exterior import Form, basis, wedge
from lcscohom.liealg import (IndexOutOfRange, JacobiFailure, LieAlgebra, ParseError, SchemaError,
                             ce_differential, check_jacobi, dump_algebra, is_unimodular, jacobi_defects,
                             load_algebra, parse_salamon, to_salamon)

RH3 = "(0,0,12,0)"
D4 = "(14,-24,-12,0)"


def test_parse_rh3():
    g = parse_salamon(RH3)
    assert g.de[2] == Form.parse("e12", 4)
    assert all(g.de[i].is_zero() for i in (0, 1, 3))


def test_parse_d4():
    g = parse_salamon(D4, 4)
    assert g.de[0] == Form.parse("e14", 4)
    assert g.de[1] == Form.parse("-e24", 4)
    assert g.de[2] == Form.parse("-e12", 4)


def test_parse_abelian_and_coefficients():
    g = parse_salamon("(0,0,0,0)")
    assert all(f.is_zero() for f in g.de)
    h = parse_salamon("(0,0,1/2*12-13,0)")
    assert h.de[2] == Form.parse("1/2*e12-e13", 4)


@pytest.mark.parametrize("bad,exc", [("0,0,12,0", ParseError), ("(0,0,15,0)", IndexOutOfRange),
                                     ("(0,0,1x,0)", ParseError), ("(0,0,11,0)", ParseError),
                                     ("(0,0,12)", ParseError), ("(0,,12,0)", ParseError)])
def test_parse_errors(bad, exc):
    with pytest.raises(exc):
        parse_salamon(bad, 4)


def test_parse_error_has_position():
    with pytest.raises(IndexOutOfRange) as info:
        parse_salamon("(0,0,15,0)", 4)
    assert info.value.position == 5


def test_ce_differential_examples():
    g = parse_salamon(RH3)
    assert g.d(Form.parse("e34", 4)) == Form.parse("e124", 4)
    assert ce_differential(parse_salamon("(0,0,0,0)")).is_zero()
    d4 = parse_salamon(D4)
    assert d4.d(Form.parse("e12", 4)).is_zero()


def test_jacobi():
    assert check_jacobi(parse_salamon(RH3))
    assert check_jacobi(parse_salamon(D4))
    bad = LieAlgebra(4, (Form.zero(4, 2), Form.zero(4, 2), Form.parse("e12", 4), Form.parse("e34", 4)))
    assert not check_jacobi(bad)
    assert jacobi_defects(bad) == [4]


def test_unimodular():
    assert is_unimodular(parse_salamon(RH3))
    assert is_unimodular(parse_salamon(D4))
    assert not is_unimodular(parse_salamon("(12,0)"))


@pytest.mark.parametrize("sal", [RH3, D4])
def test_differential_matches_bracket_oracle(sal):
    g = parse_salamon(sal)
    de = [dict(f.coeffs) for f in g.de]
    for h in range(4):
        ref = oracles.ce_matrix(de, 4, h)
        ours = g.d[h]
        assert [[ours[i, j] for j in range(ours.ncols)] for i in range(ours.nrows)] == ref.tolist()


rationals = st.fractions(min_value=-3, max_value=3, max_denominator=4).map(str)


@settings(max_examples=25, deadline=None)
@given(rationals, rationals)
def test_ot_family_is_a_lie_algebra(c1, c2):
    g = ot21_algebra(c1, c2)
    assert check_jacobi(g)
    assert is_unimodular(g)
    d = g.d
    for h in range(6):
        assert (d[h + 1] @ d[h]).is_zero()


def forms(m, h):
    n = len(basis(m, h))
    return st.lists(st.integers(-2, 2), min_size=n, max_size=n).map(lambda v: Form.from_vector(m, h, v))


@settings(max_examples=40, deadline=None)
@given(st.sampled_from([RH3, D4]), st.integers(0, 3), st.integers(0, 3), st.data())
def test_leibniz(sal, p, q, data):
    g = parse_salamon(sal)
    a, b = data.draw(forms(4, p)), data.draw(forms(4, q))
    assert g.d(wedge(a, b)) == wedge(g.d(a), b) + wedge(a, g.d(b)) * ((-1) ** p)


pair = st.sampled_from([(i, j) for i in range(1, 6) for j in range(i + 1, 6)])
coef = st.sampled_from(["1", "-1", "2", "-1/2", "3/4"])


@settings(max_examples=60, deadline=None)
@given(st.lists(st.lists(st.tuples(coef, pair), max_size=3, unique_by=lambda t: t[1]), min_size=5, max_size=5))
def test_salamon_round_trip(slots):
    entries = [(k + 1, i, j, c) for k, slot in enumerate(slots) for c, (i, j) in slot]
    from lcscohom.linalg import scalar
    g = LieAlgebra.from_constants(5, [(k, i, j, -scalar(c)) for k, i, j, c in entries])
    text = to_salamon(g)
    back = parse_salamon(text, 5)
    assert back.de == g.de
    assert to_salamon(back) == text


def _rh3_doc(**over):
    doc = {"name": "rh3", "dim": 4, "structure": RH3, "omega": [[1, 2, "1"], [3, 4, "1"]],
           "theta": [[4, "1"]], "J": [[0, -1, 0, 0], [1, 0, 0, 0], [0, 0, 0, -1], [0, 0, 1, 0]],
           "metric": [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]]}
    doc.update(over)
    return doc


def test_load_algebra_roundtrip():
    b = load_algebra(json.dumps(_rh3_doc()))
    assert b.omega == Form.parse("e12+e34", 4)
    assert b.theta == Form.parse("e4", 4)
    again = load_algebra(dump_algebra(b))
    assert again.algebra.de == b.algebra.de and again.omega == b.omega
    assert again.J.matrix == b.J.matrix


def test_load_algebra_optional_fields():
    doc = _rh3_doc()
    del doc["J"], doc["metric"]
    b = load_algebra(doc)
    assert b.J is None and b.metric is None


def test_load_algebra_matrix_omega():
    b = load_algebra(_rh3_doc(omega=[[0, 1, 0, 0], [-1, 0, 0, 0], [0, 0, 0, 1], [0, 0, -1, 0]]))
    assert b.omega == Form.parse("e12+e34", 4)


@pytest.mark.parametrize("over,exc", [
    ({"omega": [[0, 1, 0, 0], [1, 0, 0, 0], [0, 0, 0, 1], [0, 0, -1, 0]]}, SchemaError),
    ({"dim": "four"}, SchemaError),
    ({"theta": [[3, "1"]]}, SchemaError),
    ({"structure": [[3, 1, 2, "1"], [4, 3, 4, "1"]]}, JacobiFailure),
    ({"J": [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]]}, SchemaError),
    ({"structure": "(0,0,19,0)"}, SchemaError),
])
def test_load_algebra_errors(over, exc):
    with pytest.raises(exc):
        load_algebra(_rh3_doc(**over))
