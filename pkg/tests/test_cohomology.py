from math import comb

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from lcscohom.catalog import builtin
from lcscohom.cohomology import (THEORIES, ClassNotClosed, NotUnimodular, cohomology, critical_weights,
                                 determinantal_divisor, duality_bc_aeppli, euler_characteristic, full_table,
                                 has_delta_closed_representative, hlc_bc_aeppli, laplacian_kernels,
                                 lcs_hlc_check, natural_maps, parse_theories, poincare_hodge,
                                 poincare_symplectic, satisfies_lemma, verify_image_equalities)
from lcscohom.arith import Poly
from lcscohom.exterior import Form
from lcscohom.lcs import LcsStructure
from lcscohom.liealg import parse_salamon
from lcscohom.linalg import Subspace, induced_rank, scalar

OMEGA4 = Form.parse("e12+e34", 4)


@pytest.fixture(scope="module")
def flat():
    return LcsStructure(parse_salamon("(0,0,0,0)"), OMEGA4, name="torus")


def same_class_span(group, forms):
    vecs = [f.to_vector() for f in forms]
    return all(group.numerator.contains(v) for v in vecs) and \
        induced_rank(vecs, group.denominator) == group.dim == len(forms)


def test_theory_names():
    assert parse_theories("all") == THEORIES
    assert parse_theories("d,bc") == ("deRham", "bottChern")
    with pytest.raises(ValueError):
        parse_theories("x")


def test_rh3_cells(rh3):
    s = rh3.structure
    g = cohomology(s, "deRham", 1, 0)
    assert g.dim == 3
    assert same_class_span(g, [Form.parse(x, 4) for x in ("e1", "e2", "e4")])
    bc = cohomology(s, "bottChern", 2, 1)
    assert bc.dim == 1
    assert same_class_span(bc, [OMEGA4])


def test_d4_cell(d4):
    assert cohomology(d4.structure, "deRham", 2, 0).dim == 0


def test_flat_model_everything_survives(flat):
    for t in THEORIES:
        for h in range(5):
            assert cohomology(flat, t, h, 0).dim == comb(4, h)


@settings(max_examples=12, deadline=None)
@given(st.sampled_from(["rh3", "d4", "ot21"]),
       st.fractions(min_value=-3, max_value=3, max_denominator=2))
def test_morse_novikov_matches_oracle(name, k):
    s = builtin(name).structure
    de = [dict(f.coeffs) for f in s.algebra.de]
    ref = oracles.dims_deRham(de, s.dim, dict(s.theta.coeffs), str(k))
    assert [cohomology(s, "deRham", h, scalar(str(k))).dim for h in range(s.dim + 1)] == ref


@pytest.mark.parametrize("name", ["rh3", "d4", "ot21"])
def test_euler_characteristic_vanishes(name):
    s = builtin(name).structure
    for k in (-2, scalar("-1/2"), 0, 1, scalar("5/3")):
        assert euler_characteristic(s, k) == 0


def test_representatives_are_closed(entries):
    for e in entries:
        table = full_table(e.structure, e.weights[:3], THEORIES)
        for g in table.cells():
            assert len(g.representatives) == g.dim
            for f in g.representatives:
                assert g.numerator.contains(f.to_vector())
            if g.dim:
                assert induced_rank([f.to_vector() for f in g.representatives], g.denominator) == g.dim


def test_table_outputs_are_deterministic(rh3):
    a = full_table(rh3.structure, range(-2, 3))
    b = full_table(builtin("rh3").structure, range(-2, 3))
    assert a.to_csv() == b.to_csv()
    assert a.to_json() == b.to_json()
    assert a.to_csv().splitlines()[0] == "theory,h,k,dim"


def test_natural_maps(rh3, flat):
    r = natural_maps(rh3.structure, 2, 0)
    assert r.dims["bottChern"] == r.dims["deRham"] == 4
    assert r.injective("bottChern", "deRham") and r.surjective("bottChern", "deRham")
    r = natural_maps(rh3.structure, 1, 1)
    assert r.dims["bottChern"] == 0 and r.dims["aeppli"] == 1
    assert r.ranks[("bottChern", "aeppli")] == 0
    for h in range(5):
        f = natural_maps(flat, h, 0)
        for a, b in f.ranks:
            assert f.injective(a, b) and f.surjective(a, b)


def test_lemma(rh3, flat):
    s = rh3.structure
    per = satisfies_lemma(s, 0).per_degree
    assert per[2] is True and natural_maps(s, 2, 0).ranks[("bottChern", "aeppli")] == 4
    assert per[0] is False and per[1] is False
    assert not any(satisfies_lemma(s, k).holds for k in range(-2, 3))
    assert satisfies_lemma(flat, 0).holds


def test_laplacian_kernels(rh3, d4, flat):
    k = laplacian_kernels(rh3.structure, 1, 0)
    assert k["deRham"] == 3 and k["bottChern"] == 3
    assert laplacian_kernels(d4.structure, 2, -1) == {"deRham": 2, "delta": 2, "bottChern": 3, "aeppli": 3}
    assert all(v == comb(4, 2) for v in laplacian_kernels(flat, 2, 0).values())


def test_laplacian_kernels_match_quotients(entries):
    for e in entries:
        s = e.structure
        for k in e.weights:
            for h in range(s.dim + 1):
                ker = laplacian_kernels(s, h, k)
                for t in THEORIES:
                    assert ker[t] == cohomology(s, t, h, k).dim, (e.name, t, h, k)


def test_symplectic_poincare_examples(rh3, d4):
    v = poincare_symplectic(rh3.structure, 1, 0)
    assert (v.source_dim, v.target_dim) == (3, 3) and v.ok
    v = poincare_symplectic(d4.structure, 1, -1)
    assert (v.source_dim, v.target_dim) == (1, 1) and v.ok
    v = poincare_symplectic(rh3.structure, 0, 0)
    assert (v.source_dim, v.target_dim) == (4, 4) and v.ok


def test_hodge_poincare_examples(rh3, d4, flat):
    v = poincare_hodge(rh3.structure, 1, 0)
    assert all(x.ok for x in v) and v[0].source_dim == 3
    v = poincare_hodge(d4.structure, -1, 1)
    assert v[0].source_dim == 1 and v[0].target_dim == 1 and v[0].ok
    assert all(x.ok for x in poincare_hodge(flat, 0, 0))


def test_bc_aeppli_duality_examples(rh3, d4):
    v = duality_bc_aeppli(rh3.structure, 1, -2)
    assert (v.source_dim, v.target_dim, v.ok) == (1, 1, True)
    v = duality_bc_aeppli(rh3.structure, 1, -1)
    assert (v.source_dim, v.target_dim, v.ok) == (0, 0, True)
    v = duality_bc_aeppli(d4.structure, 0, 0)
    assert (v.source_dim, v.target_dim, v.ok) == (1, 1, True)


def test_hlc_bc_aeppli_examples(rh3, d4):
    bc, a = hlc_bc_aeppli(rh3.structure, 1, -2)
    assert (bc.source_dim, bc.target_dim, bc.ok) == (1, 1, True)
    bc, a = hlc_bc_aeppli(rh3.structure, 1, 0)
    assert (bc.source_dim, bc.target_dim, bc.ok) == (3, 3, True)
    bc, a = hlc_bc_aeppli(d4.structure, 2, -1)
    assert (bc.source_dim, bc.target_dim, bc.ok) == (0, 0, True)


def test_dualities_need_unimodular():
    g = parse_salamon("(0,0,0,14)")
    s = LcsStructure(g, Form.parse("e12+e34", 4), validate=True)
    with pytest.raises(NotUnimodular):
        poincare_symplectic(s, 0, 0)


def test_lcs_hlc_witness(rh3, d4, flat):
    for e in (rh3, d4):
        r = lcs_hlc_check(e.structure, range(-2, 3))
        assert not r.holds
        assert (r.witness["h"], r.witness["k"]) == (2, -2)
        assert (r.witness["source_dim"], r.witness["target_dim"]) == (0, 1)
    r = lcs_hlc_check(flat, [0])
    assert r.holds and r.witness is None


def test_delta_closed_representatives(rh3):
    s = rh3.structure
    assert has_delta_closed_representative(s, Form.parse("e4", 4), 0)
    g = cohomology(s, "deRham", 2, 0)
    assert [has_delta_closed_representative(s, f, 0) for f in g.representatives] == [True] * 4
    with pytest.raises(ClassNotClosed):
        has_delta_closed_representative(s, Form.parse("e3", 4), 0)


def test_primitive_closed_needs_no_correction(rh3):
    s = rh3.structure
    a = Form.parse("e13", 4)
    assert s.d(0)(a).is_zero() and s.Lam(a).is_zero()
    assert s.delta(0)(a).is_zero()
    assert has_delta_closed_representative(s, a, 0)


def test_image_equalities(rh3, flat):
    for h in range(5):
        r = verify_image_equalities(flat, h, 0)
        assert r["first"] and r["second"]
    r = verify_image_equalities(rh3.structure, 2, 0)
    assert r["dims"] == {"im_delta_cap_ker_d": 0, "im_d_cap_im_delta": 0, "im_d_cap_ker_delta": 0}


def test_zero_dimensional_algebra():
    z = LcsStructure(parse_salamon("()"), Form(0, 2, {}))
    assert verify_image_equalities(z, 0, 0)["first"]
    assert full_table(z, [0]).dim_of("aeppli", 0, 0) == 1


def test_determinantal_divisor():
    x = Poly.x()
    P = [[x - 1, Poly([0])], [Poly([0]), (x - 1) * (x + 2)]]
    r, D = determinantal_divisor(P)
    assert r == 2 and D == ((x - 1) * (x - 1) * (x + 2)).monic()
    r, D = determinantal_divisor([[Poly([0]), Poly([0])]])
    assert r == 0


def test_critical_weights(rh3, d4, flat):
    assert critical_weights(rh3.structure).weights == tuple(scalar(k) for k in range(-2, 3))
    assert set(scalar(k) for k in (-1, 0, 1)) <= set(critical_weights(d4.structure).weights)
    cw = critical_weights(flat)
    assert cw.weights == () and cw.unresolved == ()


@pytest.mark.parametrize("name", ["rh3", "d4"])
def test_critical_weights_sound(name):
    s = builtin(name).structure
    cw = critical_weights(s)
    generic = full_table(s, [scalar("7/13")])
    grid = [scalar(i) / 4 for i in range(-16, 17)]
    table = full_table(s, grid)
    for k in grid:
        jumps = any(table.dim_of(t, h, k) != generic.dim_of(t, h, scalar("7/13"))
                    for t in THEORIES for h in range(s.dim + 1))
        if jumps:
            assert k in cw.weights
    for (t, h), d in cw.generic_dims.items():
        assert generic.dim_of(t, h, scalar("7/13")) == d
