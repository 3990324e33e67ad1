from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from twisthv.errors import LocalityError, ModuleError, UntrustedWindow, ZOrderError
from twisthv.liealg import Sym
from twisthv.pbwmod import ModuleSpec, PBWVector, enumerate_basis, monomial_vector
from twisthv.vertexops import (
    ZSeries, borcherds_defect, e_product, field_defects, field_nth_product, gbinom, generator_field,
    identity_field, inverse_p_series, mode_action, mode_action_words, rank_two_test_vectors, truncated_module,
    vertex_field,
)

LEVELS = (Fraction(3, 7), Fraction(-2, 5), Fraction(5, 3))
VERMA = ModuleSpec.verma_hv1(*LEVELS, Fraction(1, 4), Fraction(2, 9))
VAC = ModuleSpec.vacuum_hv1(*LEVELS)


def state(spec, *word):
    return monomial_vector(spec, [Sym(n, (i,)) for n, i in word])


OMEGA = state(VAC, ("L", -2))
I1 = state(VAC, ("I", -1))


# -- helpers ----------------------------------------------------------------------

@pytest.mark.parametrize("n,i,want", [(5, 2, 10), (-1, 3, -1), (-2, 2, 3), (3, 4, 0), (0, 0, 1)])
def test_generalized_binomial(n, i, want):
    assert gbinom(n, i) == want


def test_zseries_power_of_exp_minus_one():
    e = ZSeries.exp_minus_one(10)
    for k in range(1, 5):
        p = e.power(k)
        assert p.coefficient(k) == 1
        assert p.coefficient(k - 1) == 0 if k > 1 else True
    inv = inverse_p_series(2, 10)
    assert inv.coefficient(-2) == 1 and inv.coefficient(-1) == -1 and inv.coefficient(0) == Fraction(5, 12)
    prod = inv * e.power(2)
    assert [prod.coefficient(j) for j in range(0, 6)] == [1, 0, 0, 0, 0, 0]


def test_zseries_order_guard():
    with pytest.raises(ZOrderError):
        inverse_p_series(2, 3).coefficient(40)


# -- vertex operators ---------------------------------------------------------------

def test_zero_mode_of_omega_on_current():
    W = truncated_module(VAC, 10)
    assert mode_action(OMEGA, 0, I1, W) == state(VAC, ("I", -2))


def test_omega_three_omega():
    W = truncated_module(VAC, 10)
    assert mode_action(OMEGA, 3, OMEGA, W) == PBWVector.vacuum(VAC).scale(LEVELS[0] / 2)
    assert mode_action(OMEGA, 1, OMEGA, W) == OMEGA.scale(2)


def test_vacuum_acts_as_identity_and_creation():
    W = truncated_module(VAC, 8)
    one = PBWVector.vacuum(VAC)
    v = state(VAC, ("I", -2), ("L", -3))
    assert mode_action(one, -1, v, W) == v
    assert mode_action(v, -1, one, W) == v


@pytest.mark.parametrize("st_word", [(("I", -1), ("I", -1)), (("L", -2),), (("I", -2), ("L", -2)), (("L", -3),)])
def test_two_evaluation_paths_agree(st_word):
    W = truncated_module(VAC, 10)
    s = state(VAC, *st_word)
    for j in range(-3, 4):
        for d in range(0, 5):
            for mono in enumerate_basis(VAC, d):
                v = PBWVector(VAC, {mono: 1})
                assert mode_action(s, j, v, W) == mode_action_words(s, j, v)


def test_untrusted_window_is_reported():
    W = truncated_module(VAC, 3)
    with pytest.raises(UntrustedWindow):
        mode_action(OMEGA, -3, OMEGA, W)


def test_nth_product_locality_guard():
    W = truncated_module(VAC, 8)
    L = generator_field("L", W)
    # L_3 L is a nonzero constant, so declaring order 3 must be refused
    f = field_nth_product(L, L, 3, k=3)
    with pytest.raises(LocalityError):
        f.va(-1, PBWVector.vacuum(VAC))


def test_vertex_field_rejects_verma_state():
    W = truncated_module(VERMA, 6)
    with pytest.raises(ModuleError):
        vertex_field(PBWVector.vacuum(VERMA), W)


# -- Borcherds --------------------------------------------------------------------------

@pytest.mark.parametrize("u,v", [(OMEGA, OMEGA), (OMEGA, I1), (I1, I1), (I1, OMEGA)],
                         ids=["omega-omega", "omega-I", "I-I", "I-omega"])
def test_borcherds_commutator(u, v):
    W = truncated_module(VERMA, 8)
    rep = borcherds_defect(u, v, W, (-3, 3))
    assert rep["defects"] == []
    assert rep["checked"] > 500


def test_borcherds_needs_the_central_term():
    # dropping the omega_(2) I contribution (a multiple of the vacuum) must leave defects
    W = truncated_module(VERMA, 6)
    Yu, Yv = vertex_field(OMEGA, W), vertex_field(I1, W)
    V = truncated_module(VAC, 8)
    prods = {i: vertex_field(vertex_field(OMEGA, V).va(i, I1), W) for i in (0, 1)}
    assert vertex_field(OMEGA, V).va(2, I1) == PBWVector.vacuum(VAC).scale(-2 * LEVELS[1])
    bad = 0
    for m in range(0, 4):
        for n in range(-2, 3):
            w = {(): 1}
            lhs = Yu.res(m, Yv.res(n, w))
            rhs_full = Yv.res(n, Yu.res(m, w))
            for i, f in prods.items():
                for key, c in f.res(m + n - i, w).items():
                    rhs_full[key] = rhs_full.get(key, 0) + gbinom(m, i) * c
            bad += any(lhs.get(k, 0) != rhs_full.get(k, 0) for k in set(lhs) | set(rhs_full))
    assert bad > 0


# -- e-products ----------------------------------------------------------------------

def _rank_one_cases(W):
    l1, l2, l3 = W.spec.levels
    Lh, Ih = generator_field("Lhat", W), generator_field("Ihat", W)
    unit = lambda c: identity_field(W, c)  # noqa: E731
    return [
        (Lh, Lh, 0, 4, Lh.euler()), (Lh, Lh, 1, 4, Lh.scale(2)), (Lh, Lh, 2, 4, unit(0)),
        (Lh, Lh, 3, 4, unit(l1 / 2)),
        (Lh, Ih, 0, 3, Ih.euler()), (Lh, Ih, 1, 3, Ih), (Lh, Ih, 2, 3, unit(-2 * l2)),
        (Ih, Ih, 0, 2, unit(0)), (Ih, Ih, 1, 2, unit(l3)),
    ]


def test_rank_one_e_products():
    W = truncated_module(VERMA, 8)
    vecs = W.basis_up_to(3)
    for a, b, n, k, want in _rank_one_cases(W):
        rep = field_defects(e_product(a, b, n, k), want, range(-3, 4), vecs)
        assert rep["defects"] == [], (a.label, b.label, n)
        assert rep["checked"] > 0


def test_e_products_vanish_past_locality():
    W = truncated_module(VERMA, 6)
    Lh = generator_field("Lhat", W)
    vecs = W.basis_up_to(2)
    for n in (4, 5, 7):
        assert field_defects(e_product(Lh, Lh, n, 4), identity_field(W, 0), range(-2, 3), vecs)["defects"] == []


def test_e_product_independent_of_larger_k():
    W = truncated_module(VERMA, 6)
    Ih = generator_field("Ihat", W)
    vecs = W.basis_up_to(2)
    assert field_defects(e_product(Ih, Ih, 1, 3), e_product(Ih, Ih, 1, 2), range(-2, 3), vecs)["defects"] == []


def test_e_product_guards():
    W = truncated_module(VERMA, 6)
    Lh, Ih = generator_field("Lhat", W), generator_field("Ihat", W)
    with pytest.raises(ZOrderError):
        e_product(Lh, Lh, 0, 4, z_order=2)
    with pytest.raises(LocalityError):
        e_product(Lh, Lh, 0, 2).res(-1, PBWVector.vacuum(VERMA))
    with pytest.raises(ModuleError):
        e_product(generator_field("L", W), Ih, 0, 3)


def test_rank_two_e_products():
    spec = ModuleSpec.induced_hv2(*LEVELS, Fraction(1, 2))
    W = truncated_module(spec, 4)
    vecs = rank_two_test_vectors(spec, 2, 1)
    l1, l2, l3, l4 = spec.levels
    for m, r in [(1, -1), (2, -1), (-1, 0), (0, 2)]:
        d = 1 if m + r == 0 else 0
        for first, lo, hi in (("T", l1, l2), ("E", l3, l4)):
            a, b = generator_field(first, W, m), generator_field("E", W, r)
            tgt = generator_field(first, W, m + r)
            want = {0: tgt.euler().scale(m) + identity_field(W, m * d * lo),
                    1: tgt.scale(m + r) + identity_field(W, d * hi),
                    2: identity_field(W, 0)}
            for n, g in want.items():
                rep = field_defects(e_product(a, b, n, 2), g, range(-2, 3), vecs)
                assert rep["defects"] == [], (first, m, r, n)


def test_rank_two_vectors_skip_excluded_index():
    spec = ModuleSpec.induced_hv2(*LEVELS, 1)
    vecs = rank_two_test_vectors(spec, 1, 1)
    assert all(s.idx != (0, 0) for mono in vecs for s in mono)
    # T(m,0), E(m,0) for m = -1, 1 plus the vacuum; both (0,0) symbols are dropped
    assert len(vecs) == 1 + 4
    with pytest.raises(ModuleError):
        rank_two_test_vectors(VAC, 1, 1)


# -- properties ---------------------------------------------------------------------

_VERMA_W = truncated_module(VERMA, 6)


@given(st.sampled_from(_VERMA_W.basis_up_to(4)))
def test_weight_and_charge_modes_are_diagonal(mono):
    v = PBWVector(VERMA, {mono: 1})
    d = VERMA.degree(mono)
    assert mode_action(OMEGA, 1, v, _VERMA_W) == v.scale(VERMA.h1 + d)
    assert mode_action(I1, 0, v, _VERMA_W) == v.scale(VERMA.h2)
