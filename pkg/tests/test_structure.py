from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from conftest import nonzero_fractions, small_fractions
from oracles import (
    central_charges, c2_quotient_generic, discrete_series_brute, vacuum_hv1_dims, verma_degree1_gram,
    virasoro_vacuum_det_degree4, virasoro_vacuum_gram_degree4,
)
from twisthv.errors import AsymmetricGram, ModuleError, ParameterError
from twisthv.liealg import Sym
from twisthv.linalg import definiteness, determinant
from twisthv.pbwmod import ModuleSpec, PBWVector, act, enumerate_basis, graded_dim, monomial_vector
from twisthv.scalar import S
from twisthv.structure import (
    ZhuPoly, c2_quotient_dim, central_charge, closed_form_central_charge, commutant_defect, conformal_vector,
    cpq, cpq_degree, discrete_series_index, gram_matrix, gram_rank, phi_involution, positivity_scan,
    scan_is_positive, singular_crosscheck, singular_vector_search, tensor_dim_check, unitarity_by_scan,
    unitarity_classify, virasoro_basis, virasoro_defect, virasoro_spec, zhu_product, zhu_reduce,
)
from twisthv.vertexops import mode_action, truncated_module

SPEC = ModuleSpec.vacuum_hv1(Fraction(3, 7), Fraction(-2, 5), Fraction(5, 3))


def mv(spec, *word, c=1):
    return monomial_vector(spec, [Sym(n, (i,)) for n, i in word], c)


def as_lists(rows):
    return [list(r) for r in rows]


def as_scalars(rows):
    return [[S(x) for x in r] for r in rows]


X = ZhuPoly({(1, 0): 1})
Y = ZhuPoly({(0, 1): 1})


# -- Zhu algebra ----------------------------------------------------------------

def test_zhu_reduce_examples():
    assert zhu_reduce(mv(SPEC, ("L", -2))) == X
    assert zhu_reduce(mv(SPEC, ("I", -1))) == Y
    assert zhu_reduce(mv(SPEC, ("I", -1), ("I", -1))) == Y * Y
    assert zhu_reduce(mv(SPEC, ("I", -2))) == Y.scale(-1)
    assert zhu_reduce(act(Sym("L", (-1,)), mv(SPEC, ("I", -1)))) == Y.scale(-1)
    assert str(zhu_reduce(mv(SPEC, ("I", -1), ("L", -2)))) == "x*y"


def test_zhu_product_examples():
    one = PBWVector.vacuum(SPEC)
    I, om = mv(SPEC, ("I", -1)), mv(SPEC, ("L", -2))
    assert zhu_product(I, I) == mv(SPEC, ("I", -1), ("I", -1))
    assert zhu_product(one, om) == om
    want = (act(Sym("L", (-2,)), I) + act(Sym("L", (-1,)), I).scale(2) + act(Sym("L", (0,)), I))
    assert zhu_product(om, I) == want


def test_zhu_rejects_bad_input():
    verma = ModuleSpec.verma_hv1(1, 0, 1, 0, 0)
    with pytest.raises(ModuleError):
        zhu_reduce(PBWVector.vacuum(verma))
    with pytest.raises(ModuleError):
        zhu_product(mv(SPEC, ("I", -1)) + mv(SPEC, ("L", -2)), PBWVector.vacuum(SPEC))


@pytest.mark.parametrize("du", range(0, 5))
def test_zhu_morphism(du):
    # the full degree <= 5 sweep is part of the acceptance suite
    left = [PBWVector(SPEC, {m: 1}) for m in enumerate_basis(SPEC, du)]
    right = [PBWVector(SPEC, {m: 1}) for d in range(0, 4) for m in enumerate_basis(SPEC, d)]
    for u in left:
        for v in right:
            assert zhu_reduce(zhu_product(u, v)) == zhu_reduce(u) * zhu_reduce(v)


def test_zhu_surjective_on_low_degree():
    # every x^a y^b with a + b <= 3 is hit by I(-1)^b L(-2)^a
    for a in range(4):
        for b in range(4 - a):
            v = mv(SPEC, *([("I", -1)] * b + [("L", -2)] * a))
            lead = zhu_reduce(v).terms
            assert lead[(a, b)] == 1 and all(i + j <= a + b for i, j in lead)


# -- contravariant form --------------------------------------------------------

def test_gram_examples():
    v = ModuleSpec.verma_hv1(3, 0, 2, Fraction(5, 7), Fraction(1, 3))
    g = gram_matrix(v, 1)
    assert [format(m) for m in g.to_json()["basis"]] == ["I(-1)1", "L(-1)1"]
    assert as_lists(g.entries) == as_scalars(verma_degree1_gram(0, 2, Fraction(5, 7), Fraction(1, 3)))
    assert as_lists(gram_matrix(v, 0).entries) == [[S(1)]]
    g2 = gram_matrix(SPEC, 2)
    idx = {b: i for i, b in enumerate(g2.to_json()["basis"])}
    l3 = SPEC.l3
    a, b = idx["I(-1)I(-1)1"], idx["I(-2)1"]
    assert g2.entries[a][a] == 2 * l3 * l3 and g2.entries[b][b] == 2 * l3
    assert g2.entries[a][b] == 0 == g2.entries[b][a]


@given(small_fractions, nonzero_fractions, small_fractions, small_fractions)
def test_verma_degree1_gram_matches_oracle(l2, l3, h1, h2):
    g = gram_matrix(ModuleSpec.verma_hv1(1, l2, l3, h1, h2), 1)
    assert as_lists(g.entries) == as_scalars(verma_degree1_gram(l2, l3, h1, h2))
    if l2 == 0:
        assert g.is_symmetric() and g.determinant() == 2 * h1 * l3 - h2 * h2


@pytest.mark.parametrize("c", [Fraction(1, 2), Fraction(-22, 5), 3, Fraction(7, 9)])
def test_virasoro_degree4_block(c):
    spec = ModuleSpec.vacuum_hv1(c, 0, 1)
    g = gram_matrix(spec, 4)
    basis = g.to_json()["basis"]
    pick = [basis.index("L(-4)1"), basis.index("L(-2)L(-2)1")]
    block = [[g.entries[i][j] for j in pick] for i in pick]
    assert block == as_scalars(virasoro_vacuum_gram_degree4(Fraction(c)))
    assert determinant(block) == virasoro_vacuum_det_degree4(Fraction(c))


@pytest.mark.parametrize("deg", range(0, 5))
def test_gram_symmetric_when_mixed_level_vanishes(deg):
    assert gram_matrix(ModuleSpec.verma_hv1(Fraction(5, 2), 0, Fraction(3, 4), Fraction(1, 3), 2), deg).is_symmetric()
    assert gram_matrix(ModuleSpec.vacuum_hv1(Fraction(2, 3), 0, -2), deg).is_symmetric()


def test_gram_asymmetric_with_mixed_level():
    verma = ModuleSpec.verma_hv1(2, Fraction(1, 3), 1, 1, 0)
    assert not gram_matrix(verma, 1).is_symmetric()
    with pytest.raises(AsymmetricGram):
        positivity_scan(verma, 1)
    assert unitarity_by_scan(verma) is False


def test_gram_rank_examples():
    assert gram_rank(ModuleSpec.vacuum_hv1(5, 0, 1), 2) == 3
    assert gram_rank(ModuleSpec.vacuum_hv1(1, 0, 1), 2) == 2
    assert gram_rank(SPEC, 0) == 1


@pytest.mark.parametrize("p,q", [(2, 3), (2, 5)])
def test_rank_drop_at_singular_degree(p, q):
    spec = ModuleSpec.vacuum_hv1(1 + cpq(p, q), 0, 1)
    drop = [d for d in range(0, cpq_degree(p, q) + 1) if gram_rank(spec, d) < graded_dim(spec, d)]
    assert drop and drop[0] == (p - 1) * (q - 1)


# -- positivity and unitarity ----------------------------------------------------------

def test_positivity_examples():
    scan = positivity_scan(ModuleSpec.verma_hv1(2, 0, 1, 1, 0), 3)
    assert scan_is_positive(scan)
    assert [r["form"] for r in scan[:3]] == ["positive-definite"] * 3
    # degree 3 carries a genuine null vector: the quotient is positive, the Verma form only semidefinite
    assert scan[3]["form"] == "positive-semidefinite" and scan[3]["rank"] == scan[3]["dim"] - 1
    assert not scan_is_positive(positivity_scan(ModuleSpec.verma_hv1(2, 0, -1, 1, 0), 1))
    bad = positivity_scan(ModuleSpec.verma_hv1(2, 0, 1, 0, 1), 1)
    assert bad[1]["form"] == "indefinite" and not scan_is_positive(bad)


def test_definiteness_helper():
    assert definiteness([[S(2), S(1)], [S(1), S(2)]])[0] == "positive-definite"
    assert definiteness([[S(1), S(1)], [S(1), S(1)]]) == ("positive-semidefinite", 1)
    assert definiteness([[S(0), S(1)], [S(1), S(0)]])[0] == "indefinite"


@pytest.mark.parametrize("args,unitary,case,m", [
    ((Fraction(1, 2), 0, 0), True, "c_m", 3),
    ((Fraction(7, 10), 0, 0), True, "c_m", 4),
    ((2, 0, 1), True, "continuum", None),
    ((Fraction(3, 2), 0, 1), True, "1+c_m", 3),
    ((2, 1, 1), False, None, None),
    ((2, 0, -1), False, None, None),
    ((Fraction(2, 3), 0, 0), False, None, None),
    ((2, 0, 1, Fraction(1, 2), 1), True, "continuum", None),
    ((2, 0, 1, 0, 1), False, None, None),
])
def test_unitarity_examples(args, unitary, case, m):
    v = unitarity_classify(*args)
    assert v.unitary is unitary
    if unitary:
        assert v.case == case and v.m == m


@given(st.fractions(min_value=-3, max_value=1, max_denominator=200))
def test_discrete_series_matches_brute_force(c):
    assert discrete_series_index(c) == discrete_series_brute(c)


def test_discrete_series_members():
    for m in range(2, 40):
        assert discrete_series_index(1 - Fraction(6, m * (m + 1))) == m


@pytest.mark.parametrize("l1,l3,h", [(Fraction(1, 2), 0, None), (1, 0, None), (2, 1, None),
                                     (Fraction(3, 2), 1, None), (-1, 0, None), (2, -1, None)])
def test_classifier_agrees_with_scan(l1, l3, h):
    spec = ModuleSpec.vacuum_hv1(l1, 0, l3)
    assert unitarity_classify(l1, 0, l3).unitary == unitarity_by_scan(spec, 4)


# -- involution -----------------------------------------------------------------------

def test_phi_examples():
    assert phi_involution(mv(SPEC, ("I", -1))) == mv(SPEC, ("I", -1), c=-1)
    assert phi_involution(mv(SPEC, ("L", -2))) == mv(SPEC, ("L", -2))
    v = mv(SPEC, ("I", -1), ("I", -2), c=S("i"))
    assert phi_involution(v) == v.scale(-1)


def test_phi_is_automorphism():
    spec = ModuleSpec.vacuum_hv1(Fraction(3, 2), 0, 2)
    W = truncated_module(spec, 9)
    gens = [mv(spec, ("L", -2)), mv(spec, ("I", -1))]
    for u in gens:
        for d in range(0, 4):
            for mono in enumerate_basis(spec, d):
                v = PBWVector(spec, {mono: S("1+i")})
                assert phi_involution(phi_involution(v)) == v
                for n in range(-3, 4):
                    lhs = phi_involution(mode_action(u, n, v, W))
                    assert lhs == mode_action(phi_involution(u), n, phi_involution(v), W)


# -- conformal vectors ------------------------------------------------------------

@pytest.mark.parametrize("name", ["omega", "omega_prime", "omega_H", "omega_tilde"])
def test_central_charges_match_closed_forms(name):
    for levels in [(3, 1, 2), (1, 0, 1), (Fraction(-5, 3), Fraction(2, 7), Fraction(-3, 4))]:
        spec = ModuleSpec.vacuum_hv1(*levels)
        got = central_charge(conformal_vector(name, spec))
        assert got == closed_form_central_charge(name, *levels) == central_charges(*levels)[name]


def test_central_charge_examples():
    assert central_charge(conformal_vector("omega_H", ModuleSpec.vacuum_hv1(5, 1, 2))) == -5
    assert central_charge(conformal_vector("omega_tilde", ModuleSpec.vacuum_hv1(1, 0, 1))) == 0
    with pytest.raises(ParameterError):
        conformal_vector("omega_H", ModuleSpec.vacuum_hv1(1, 0, 0))


@pytest.mark.parametrize("name", ["omega", "omega_H", "omega_tilde"])
def test_virasoro_relations(name):
    rep = virasoro_defect(conformal_vector(name, ModuleSpec.vacuum_hv1(3, 1, 2)), (-2, 2), 4)
    assert rep["defects"] == [] and rep["checked"] > 0


def test_virasoro_defect_detects_wrong_vector():
    spec = ModuleSpec.vacuum_hv1(3, 1, 2)
    cv = conformal_vector("omega_H", spec)
    # adding a multiple of I(-2) would only move the background charge; scaling breaks the relations
    wrong = cv.__class__(cv.name, cv.value.scale(2))
    assert virasoro_defect(wrong, (-2, 2), 3)["defects"]


def test_commutant():
    spec = ModuleSpec.vacuum_hv1(3, 1, 2)
    rep = commutant_defect(spec)
    assert rep["defects"] == [] and rep["checked"] > 0


# -- singular vectors ----------------------------------------------------------------

def test_singular_vector_examples():
    (v,) = singular_vector_search(0, 2)
    assert v == mv(virasoro_spec(0), ("L", -2))
    (w,) = singular_vector_search(Fraction(-22, 5), 4)
    assert w == mv(w.spec, ("L", -2), ("L", -2)) + mv(w.spec, ("L", -4), c=Fraction(-3, 5))
    assert singular_crosscheck(w)
    assert singular_vector_search(7, 2) == []


def test_virasoro_basis_is_l_only():
    assert len(virasoro_basis(1, 4)) == 2
    assert all(s.name == "L" for m in virasoro_basis(1, 6) for s in m)


@pytest.mark.parametrize("p,q,c,deg", [(2, 3, 0, 2), (2, 5, Fraction(-22, 5), 4), (3, 4, Fraction(1, 2), 6)])
def test_cpq(p, q, c, deg):
    assert cpq(p, q) == c and cpq_degree(p, q) == deg


@pytest.mark.parametrize("p,q", [(2, 4), (1, 3), (3, 3)])
def test_cpq_rejects(p, q):
    with pytest.raises(ParameterError):
        cpq(p, q)


# -- dimension counts ----------------------------------------------------------------

def test_tensor_dim_check():
    rows = tensor_dim_check(1, 2, 3, 12)
    assert [r["defect"] for r in rows] == [0] * 13
    assert [r["graded_dim"] for r in rows] == vacuum_hv1_dims(12)
    assert rows[2]["product"] == 3 and rows[4]["graded_dim"] == 10


def test_c2_quotient():
    assert [c2_quotient_dim(n) for n in range(8)] == [c2_quotient_generic(n) for n in range(8)]
    assert c2_quotient_dim(0) == 1 and c2_quotient_dim(2) >= 1
