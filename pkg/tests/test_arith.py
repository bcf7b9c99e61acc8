import time

import pytest
import sympy as sp
from hypothesis import assume, given, settings
from hypothesis import strategies as st

import oracles
from lcscohom.arith import (CertificateNotApplicable, DeterminantNotOne, LeadingCoefficientVanishes,
                            NotSquarefree, Poly, WrongRootPattern, char_poly_3, classify_cubic_roots,
                            discriminant_cubic, factor_pattern, first_irreducible_mod, galois_s4_certificate,
                            generalized_reality_test, gorbatsevich_s0_check, inoue_reality_test,
                            isolate_real_roots, parse_poly, power_basis_recurrence, resolvent_cubic,
                            sturm_chain, sturm_count, vdw_patterns_ok, vdw_polynomial)
from lcscohom.linalg import scalar

X = Poly.x()
int_polys = st.lists(st.integers(-6, 6), min_size=2, max_size=7).map(Poly).filter(lambda p: p.degree >= 1)


def elementary_products():
    step = st.tuples(st.integers(0, 2), st.integers(0, 2), st.integers(-2, 2)).filter(lambda t: t[0] != t[1])
    return st.lists(step, min_size=1, max_size=8)


def sl3(steps):
    M = [[1, 0, 0], [0, 1, 0], [0, 0, 1]]
    for i, j, c in steps:
        M = [[M[r][s] + (c * M[j][s] if r == i else 0) for s in range(3)] for r in range(3)]
    return M


# -- polynomials ------------------------------------------------------------------


def test_parse_and_format():
    p = parse_poly("x^4-x-1")
    assert list(p.c) == [-1, -1, 0, 0, 1]
    assert str(p) == "x^4-x-1"
    assert parse_poly("2x^2 + 1/2") == Poly([scalar("1/2"), 0, 2])
    with pytest.raises(ValueError):
        parse_poly("x^2+y")


@settings(max_examples=60, deadline=None)
@given(int_polys, int_polys)
def test_division_identity(a, b):
    q, r = divmod(a, b)
    assert q * b + r == a
    assert r.degree < b.degree


@settings(max_examples=60, deadline=None)
@given(st.lists(st.integers(-5, 5), min_size=1, max_size=4))
def test_rational_roots_from_roots(roots):
    p = Poly.from_roots(roots)
    assert set(p.rational_roots()) == set(scalar(r) for r in roots)


# -- Sturm ---------------------------------------------------------------------


def test_sturm_examples():
    assert sturm_count(parse_poly("x^4-x-1")) == 2
    assert sturm_count(parse_poly("x^3-x-1"), 1, 2) == 1
    assert sturm_count(parse_poly("x^2+1")) == 0
    with pytest.raises(NotSquarefree):
        sturm_count(parse_poly("x^2-2x+1"))


@settings(max_examples=60, deadline=None)
@given(int_polys)
def test_sturm_matches_sympy(p):
    p = p.squarefree_part()
    assume(p.degree >= 1)
    assert sturm_count(p) == oracles.real_root_count([int(c) if c.denominator == 1 else sp.Rational(str(c)) for c in p.c])


@settings(max_examples=40, deadline=None)
@given(int_polys, st.integers(-4, 4), st.integers(1, 5))
def test_sturm_interval_matches_sympy(p, lo, width):
    p = p.squarefree_part()
    assume(p.degree >= 1)
    hi = lo + width
    coeffs = [sp.Rational(str(c)) for c in p.c]
    assert sturm_count(p, lo, hi) == oracles.real_root_count(coeffs, lo, hi)


@settings(max_examples=30, deadline=None)
@given(int_polys)
def test_isolating_intervals_bracket_sign_changes(p):
    p = p.squarefree_part()
    assume(p.degree >= 1)
    ivs = isolate_real_roots(p)
    assert len(ivs) == sturm_count(p)
    for a, b in ivs:
        assert a <= b
        if a != b:
            assert p(a) * p(b) <= 0


def test_sturm_chain_shape():
    ch = sturm_chain(parse_poly("x^3-2x^2+3x-5"))
    assert ch[0] == parse_poly("x^3-2x^2+3x-5")
    assert ch[1] == parse_poly("3x^2-4x+3")


# -- cubics and the recurrence ---------------------------------------------------


def test_char_poly_examples():
    assert char_poly_3([[0, 0, 1], [1, 0, 1], [0, 1, 0]]) == parse_poly("x^3-x-1")
    with pytest.raises(DeterminantNotOne):
        char_poly_3([[2, 0, 0], [0, 1, 0], [0, 0, 1]])


@settings(max_examples=60, deadline=None)
@given(elementary_products())
def test_char_poly_matches_cofactor_oracle(steps):
    A = sl3(steps)
    assert list(char_poly_3(A).c) == oracles.char_poly_cofactor(A)


def test_classify_cubic():
    c = classify_cubic_roots(parse_poly("x^3-x-1"))
    assert c.pattern == "one_real_pair_complex" and c.discriminant == -23 and c.real_root_gt_one
    assert classify_cubic_roots(parse_poly("x^3-3x")).pattern == "three_real"
    with pytest.raises(NotSquarefree):
        classify_cubic_roots(char_poly_3([[1, 0, 0], [0, 1, 0], [0, 0, 1]]))


def test_discriminants():
    assert discriminant_cubic(parse_poly("x^3+4x+1")) == -283
    assert discriminant_cubic(parse_poly("x^3-3x")) == 108
    assert discriminant_cubic(parse_poly("x^3")) == 0


@settings(max_examples=40, deadline=None)
@given(st.integers(-9, 9), st.integers(-9, 9), st.integers(-9, 9))
def test_discriminant_matches_sympy(a, b, c):
    x = sp.Symbol("x")
    assert discriminant_cubic(Poly([c, b, a, 1])) == sp.discriminant(x ** 3 + a * x ** 2 + b * x + c, x)


@settings(max_examples=40, deadline=None)
@given(st.integers(-6, 6), st.integers(-6, 6))
def test_recurrence_matches_companion_powers(a, b):
    ours = [(t.x, t.y, t.z) for t in power_basis_recurrence(a, b, 25)]
    assert ours == oracles.companion_power_coords(a, b, 25)


def test_inoue_reality_test():
    t0 = time.perf_counter()
    assert inoue_reality_test(0, -1, 500) is None
    assert time.perf_counter() - t0 < 0.1
    assert inoue_reality_test(0, 0, 10, check=False) == 3  # x^3 - 1: β^3 = 1
    with pytest.raises(WrongRootPattern):
        inoue_reality_test(0, -3, 10)  # x^3 - 3x - 1 has three real roots


@pytest.mark.parametrize("a,b", [(0, -1), (1, -1), (2, 1), (3, 2)])
def test_valid_s0_inputs_have_no_real_power(a, b):
    assert inoue_reality_test(a, b, 200) is None
    assert generalized_reality_test(Poly([-1, b, -a, 1]), 200) is None


@pytest.mark.parametrize("a,b", [(-1, -2), (1, 2), (0, 1)])
def test_non_s0_inputs_rejected(a, b):
    with pytest.raises(WrongRootPattern):
        inoue_reality_test(a, b, 10)


def test_generalized_reality_test():
    assert generalized_reality_test(parse_poly("x^4+1"), 20) == 4
    assert generalized_reality_test(parse_poly("x^3-1"), 20) == 3
    assert generalized_reality_test(parse_poly("x^4-x-1"), 300) is None


def test_gorbatsevich():
    r = gorbatsevich_s0_check([[0, 0, 1], [1, 0, 1], [0, 1, 0]], 500)
    assert r.verdict == "MostowHolds_UpToBound"
    assert r.eigenvalues["alpha"].startswith("1.3247179572")
    assert len(r.eigenvalues["Z_eigenvalues"]) == 2
    fixture = gorbatsevich_s0_check([[0, 0, 1], [1, 0, 0], [0, 1, 0]], 50, validate=False)
    assert fixture.verdict == "RationalAngleFound" and fixture.m == 3


# -- finite fields ------------------------------------------------------------------


def test_factor_pattern_examples():
    assert factor_pattern(parse_poly("x^4+x+1"), 2).degrees == (4,)
    assert factor_pattern(parse_poly("x^4-x-1"), 2).degrees == (4,)
    assert factor_pattern(parse_poly("x^2-1"), 3).degrees == (1, 1)
    assert not factor_pattern(parse_poly("x^2+2x+1"), 5).squarefree
    with pytest.raises(LeadingCoefficientVanishes):
        factor_pattern(parse_poly("3x^2+1"), 3)
    with pytest.raises(ValueError):
        factor_pattern(parse_poly("x^2+1"), 4)


def test_x4_x_1_irreducible_mod2_exhaustive():
    irreducible_low = [p for d in (1, 2) for p in oracles.monic_irreducibles(2, d)]
    f = parse_poly("x^4+x+1")
    from lcscohom.arith import _pdivmod, reduce_mod

    for g in irreducible_low:
        assert any(_pdivmod(reduce_mod(f, 2), list(g), 2)[1])


@settings(max_examples=60, deadline=None)
@given(st.lists(st.integers(-9, 9), min_size=2, max_size=8), st.sampled_from([2, 3, 5, 7]))
def test_factor_pattern_matches_sympy(coeffs, p):
    coeffs = coeffs[:-1] + [1]
    assert factor_pattern(Poly(coeffs), p).degrees == oracles.factor_degrees_mod(coeffs, p)


@pytest.mark.parametrize("p,d", [(2, 3), (3, 2), (5, 2), (3, 4)])
def test_first_irreducible_is_first(p, d):
    # candidates run through coefficient tuples (low to high) in lexicographic order
    first = tuple(first_irreducible_mod(p, d))
    assert first == min(oracles.monic_irreducibles(p, d))


# -- quartics and van der Waerden -------------------------------------------------------


def test_resolvent_examples():
    assert resolvent_cubic(parse_poly("x^4-x-1")) == parse_poly("x^3+4x+1")
    assert resolvent_cubic(parse_poly("x^4-1")) == parse_poly("x^3+4x")
    assert resolvent_cubic(parse_poly("x^4+3x^2+2")) == parse_poly("x^3-6x^2+x")


@settings(max_examples=30, deadline=None)
@given(st.integers(-5, 5), st.integers(-5, 5), st.integers(-5, 5))
def test_resolvent_matches_root_oracle(p, q, r):
    coeffs = [r, q, p, 0, 1]
    assert list(resolvent_cubic(Poly(coeffs)).c) == oracles.resolvent_by_roots(coeffs)


def test_s4_certificate():
    cert = galois_s4_certificate("x^4-x-1")
    assert cert["galois"] == "S4" and cert["discriminant"] == -283
    assert cert["resolvent"] == "x^3+4*x+1" and cert["irreducible_mod"] == 2
    with pytest.raises(CertificateNotApplicable):
        galois_s4_certificate("x^4-1")
    with pytest.raises(CertificateNotApplicable):
        galois_s4_certificate("x^4+1")


def test_vdw_known_quartic_legs():
    f = parse_poly("x^4-x-1")
    assert factor_pattern(f, 2).degrees == (4,)
    assert sturm_count(f) == 2


@pytest.mark.parametrize("n", [3, 4, 5])
def test_vdw_small(n):
    res = vdw_polynomial(n, n - 2)
    f = res.f
    assert f.degree == n and f.lc == 1 and f.is_integral()
    assert res.certificate["ok"]
    pats = vdw_patterns_ok(f)
    assert all(v["ok"] for v in pats.values())
    ints = [int(c) for c in f.c]
    assert oracles.factor_degrees_mod(ints, 2) == (n,)
    assert oracles.factor_degrees_mod(ints, 3) == tuple(sorted((1, n - 1)))
    assert oracles.real_root_count(ints) == n - 2
    if n == 4:
        assert oracles.factor_degrees_mod(ints, 5) == (1, 1, 2)


def test_vdw_seed_is_deterministic():
    assert vdw_polynomial(5, 3, seed=7).f == vdw_polynomial(5, 3, seed=7).f


def test_vdw_rejects_bad_shape():
    with pytest.raises(ValueError):
        vdw_polynomial(5, 2)
