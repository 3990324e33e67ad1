import pytest
from hypothesis import given, strategies as st

from conftest import small_fractions
from oracles import hv1_bracket_closed
from twisthv.errors import AlgebraMismatch, ParseError, SymbolError
from twisthv.liealg import (
    Algebra, LieElt, bracket, generators, iso_frak_to_hv, jacobi_defect, make_sym, parse_element, sigma,
)
from twisthv.scalar import S


def E(alg, text):
    return parse_element(alg, text)


H = lambda t: E(Algebra.HV1, t)  # noqa: E731


# -- examples -------------------------------------------------------------------

@pytest.mark.parametrize("a,b,expected", [
    ("L(2)", "L(-2)", "4*L(0) + 1/2*C1"),
    ("L(1)", "I(-1)", "I(0) - 2*C2"),
    ("I(0)", "I(0)", "0"),
])
def test_bracket_examples(a, b, expected):
    assert bracket(H(a), H(b)) == (H(expected) if expected != "0" else LieElt.zero(Algebra.HV1))


def test_rank_two_bracket_example():
    alg = Algebra.HV2
    assert bracket(E(alg, "T(1,1)"), E(alg, "E(-1,-1)")) == E(alg, "K1 + K2")


@pytest.mark.parametrize("alg,triple", [
    (Algebra.HV1, ("L(1)", "L(-1)", "L(0)")),
    (Algebra.HV1, ("L(2)", "I(-1)", "I(-1)")),
    (Algebra.HV2, ("E(1,0)", "E(-1,1)", "T(0,-1)")),
])
def test_jacobi_examples(alg, triple):
    assert jacobi_defect(*(E(alg, t) for t in triple)).is_zero()


def test_iso_examples():
    F = Algebra.FRAK1
    assert iso_frak_to_hv(E(F, "Lbar(2)")) == H("L(1)")
    assert iso_frak_to_hv(E(F, "Ibar(0)")) == H("I(0)")
    x, y = E(F, "Lbar(2)"), E(F, "Lbar(-1)")
    assert iso_frak_to_hv(bracket(x, y)) == bracket(iso_frak_to_hv(x), iso_frak_to_hv(y)) == H("3*L(-1)")


def test_sigma_examples():
    assert sigma(H("I(0)")) == H("I(0) - 2*C2")
    assert sigma(H("L(5)")) == H("L(-5)")
    assert sigma(H("i*L(1)")) == H("-i*L(-1)")


# -- errors -----------------------------------------------------------------------

def test_hv2_excluded_index():
    with pytest.raises(SymbolError):
        make_sym(Algebra.HV2, "T", 0, 0)
    with pytest.raises(ParseError):
        E(Algebra.HV2, "E(0,0)")


def test_mixed_algebras_rejected():
    with pytest.raises(AlgebraMismatch):
        bracket(H("L(1)"), E(Algebra.FRAK1, "Lbar(1)"))


@pytest.mark.parametrize("bad", ["L(1", "Q(2)", "L(1,2)", "2*", "L(1) L(2)"])
def test_parse_errors_have_positions(bad):
    with pytest.raises(ParseError) as info:
        H(bad)
    assert "column" in str(info.value)


def test_json_round_trip_and_zero_terms():
    x = H("2*L(1) - 1/2*C1 + (1+i)*I(0) + 0*I(3)")
    assert all(c for _, c in x.items())
    assert LieElt.from_json(x.to_json()) == x


# -- closed-form cross-check ------------------------------------------------------------

def test_brackets_match_hand_formulas():
    for m in range(-5, 6):
        for n in range(-5, 6):
            for x in "LI":
                for y in "LI":
                    got = bracket(H(f"{x}({m})"), H(f"{y}({n})"))
                    want = {}
                    for (name, idx), c in hv1_bracket_closed((x, m), (y, n)).items():
                        key = make_sym(Algebra.HV1, name) if idx is None else make_sym(Algebra.HV1, name, idx)
                        want[key] = S(c)
                    assert dict(got.items()) == want, (x, m, y, n)


# -- properties -------------------------------------------------------------------

def _elements(alg):
    gens = generators(alg, -3, 3)
    return st.lists(st.tuples(st.sampled_from(gens), small_fractions), min_size=1, max_size=3).map(
        lambda ts: sum((g.scale(c) for g, c in ts[1:]), ts[0][0].scale(ts[0][1])))


@pytest.mark.parametrize("alg", list(Algebra))
@given(data=st.data())
def test_antisymmetry_and_jacobi(alg, data):
    a, b, c = (data.draw(_elements(alg)) for _ in range(3))
    assert (bracket(a, b) + bracket(b, a)).is_zero()
    assert jacobi_defect(a, b, c).is_zero()


@given(_elements(Algebra.HV1), _elements(Algebra.HV1), small_fractions)
def test_bilinearity(a, b, k):
    assert bracket(a.scale(k), b) == bracket(a, b).scale(k)


@given(_elements(Algebra.HV1), _elements(Algebra.HV1))
def test_sigma_is_anti_involution(a, b):
    assert sigma(sigma(a)) == a
    assert sigma(bracket(a, b)) == bracket(sigma(b), sigma(a))


@given(_elements(Algebra.FRAK1), _elements(Algebra.FRAK1))
def test_iso_is_homomorphism(a, b):
    assert iso_frak_to_hv(bracket(a, b)) == bracket(iso_frak_to_hv(a), iso_frak_to_hv(b))


def test_central_elements_are_central():
    for alg in Algebra:
        gens = generators(alg, -2, 2)
        names = ("K1", "K2", "K3", "K4") if alg in (Algebra.HV2, Algebra.FRAK2HAT) else ("C1", "C2", "C3")
        central = [LieElt.gen(alg, n) for n in names]
        assert all(s.central for z in central for s, _ in z.items())
        for z in central:
            for g in gens:
                assert bracket(z, g).is_zero()
