"""Acceptance suite: one check per criterion, each with its wall-clock budget.

Run through pytest (``pytest tests/test_acceptance.py -s``) or directly
(``python3 tests/test_acceptance.py``); either way one PASS/FAIL line is
printed per criterion.
"""

from __future__ import annotations

import itertools
import os
import random
import subprocess
import sys
import time
from fractions import Fraction
from typing import Callable

import pytest

sys.path.insert(0, os.path.dirname(__file__))

from oracles import central_charges, vacuum_hv1_dims  # noqa: E402
from twisthv.formaldist import RANK_ONE, RANK_TWO, IdentityId, Window, locality_order, verify_identity  # noqa: E402
from twisthv.liealg import Algebra, LieElt, Sym, generators, jacobi_defect  # noqa: E402
from twisthv.pbwmod import ModuleSpec, PBWVector, enumerate_basis, graded_dim, monomial_vector  # noqa: E402
from twisthv.structure import (  # noqa: E402
    ZhuPoly, central_charge, commutant_defect, conformal_vector, cpq, cpq_degree, gram_rank, singular_vector_search,
    tensor_dim_check, unitarity_by_scan, unitarity_classify, virasoro_defect, zhu_product, zhu_reduce,
)
from twisthv.vertexops import (  # noqa: E402
    borcherds_defect, e_product, field_defects, generator_field, identity_field, rank_two_test_vectors,
    truncated_module,
)

Result = tuple[bool, str]


def _rational(rng: random.Random, nonzero: bool = False) -> Fraction:
    while True:
        x = Fraction(rng.randint(-9, 9), rng.randint(1, 9))
        if x or not nonzero:
            return x


# -- criteria ---------------------------------------------------------------------

def jacobi_suite() -> Result:
    bad, count = 0, 0
    for alg in (Algebra.HV1, Algebra.FRAK1):
        gens = generators(alg, -4, 4) + [LieElt.gen(alg, c) for c in ("C1", "C2", "C3")]
        for a, b, c in itertools.product(gens, repeat=3):
            count += 1
            bad += not jacobi_defect(a, b, c).is_zero()
    rng = random.Random(1)
    for alg in (Algebra.HV2, Algebra.FRAK2HAT):
        gens = generators(alg, -4, 4) + [LieElt.gen(alg, c) for c in ("K1", "K2", "K3", "K4")]
        for _ in range(10_000):
            count += 1
            bad += not jacobi_defect(*(rng.choice(gens) for _ in range(3))).is_zero()
    return bad == 0, f"{count} triples, {bad} nonzero defects"


def identity_suite() -> Result:
    w = Window.square(6)
    idents = [IdentityId.parse(n) for n in RANK_ONE]
    idents += [IdentityId.parse(n, m, r) for n in RANK_TWO for m in range(-3, 4) for r in range(-3, 4)]
    failed = [str(i) for i in idents if verify_identity(i, w)]
    return not failed, f"{len(idents)} identity instances, failing: {failed or 'none'}"


def locality_orders() -> Result:
    w = Window.square(6)
    got = {p: locality_order(p, w) for p in ("L,L", "L,I", "I,I")}
    rank_two = {locality_order(p, w, m, r) for p in ("T,E", "E,E")
                for m in range(-3, 4) for r in range(-3, 4) if (m, r) != (0, 0)}
    ok = got == {"L,L": 4, "L,I": 3, "I,I": 2} and rank_two == {2}
    return ok, f"rank one {got}, rank two orders {sorted(rank_two)}"


def e_product_tables() -> Result:
    rng = random.Random(2026)
    bad, checked = [], 0
    for t in range(5):
        levels = [_rational(rng) for _ in range(4)]
        h = [_rational(rng), _rational(rng)]
        spec = ModuleSpec.verma_hv1(*levels[:3], *h)
        W = truncated_module(spec, 8)
        vecs = W.basis_up_to(3)
        l1, l2, l3 = spec.levels
        Lh, Ih = generator_field("Lhat", W), generator_field("Ihat", W)
        unit = lambda c, W=W: identity_field(W, c)  # noqa: E731
        table = [
            (Lh, Lh, 0, 4, Lh.euler()), (Lh, Lh, 1, 4, Lh.scale(2)), (Lh, Lh, 2, 4, unit(0)),
            (Lh, Lh, 3, 4, unit(l1 / 2)), (Lh, Lh, 4, 4, unit(0)),
            (Lh, Ih, 0, 3, Ih.euler()), (Lh, Ih, 1, 3, Ih), (Lh, Ih, 2, 3, unit(-2 * l2)), (Lh, Ih, 3, 3, unit(0)),
            (Ih, Ih, 0, 2, unit(0)), (Ih, Ih, 1, 2, unit(l3)), (Ih, Ih, 2, 2, unit(0)),
        ]
        for a, b, n, k, want in table:
            rep = field_defects(e_product(a, b, n, k), want, range(-3, 4), vecs)
            checked += rep["checked"]
            if rep["defects"]:
                bad.append((t, a.label, b.label, n))

        spec2 = ModuleSpec.induced_hv2(*levels)
        W2 = truncated_module(spec2, 4)
        vecs2 = rank_two_test_vectors(spec2, 2, 2)
        k1, k2, k3, k4 = spec2.levels
        for m in range(-2, 3):
            for r in range(-2, 3):
                d = 1 if m + r == 0 else 0
                for first, lo, hi in (("T", k1, k2), ("E", k3, k4)):
                    a, b = generator_field(first, W2, m), generator_field("E", W2, r)
                    tgt = generator_field(first, W2, m + r)
                    want = {0: tgt.euler().scale(m) + identity_field(W2, m * d * lo),
                            1: tgt.scale(m + r) + identity_field(W2, d * hi),
                            2: identity_field(W2, 0)}
                    for n, g in want.items():
                        rep = field_defects(e_product(a, b, n, 2), g, range(-2, 3), vecs2)
                        checked += rep["checked"]
                        if rep["defects"]:
                            bad.append((t, first, m, r, n))
    return not bad and checked > 0, f"5 parameter tuples, {checked} trusted entries, failing: {bad or 'none'}"


def borcherds_suite() -> Result:
    spec = ModuleSpec.verma_hv1(Fraction(3, 7), Fraction(-2, 5), Fraction(5, 3), Fraction(1, 4), Fraction(2, 9))
    W = truncated_module(spec, 8)
    vac = ModuleSpec.vacuum_hv1(*spec.levels)
    om = monomial_vector(vac, [Sym("L", (-2,))])
    cur = monomial_vector(vac, [Sym("I", (-1,))])
    parts, ok = [], True
    for name, (u, v) in {"(w,w)": (om, om), "(w,I)": (om, cur), "(I,I)": (cur, cur)}.items():
        rep = borcherds_defect(u, v, W, (-3, 3))
        ok &= not rep["defects"] and rep["checked"] > 0
        parts.append(f"{name} {len(rep['defects'])}/{rep['checked']}")
    return ok, "defects/checked " + ", ".join(parts)


def central_charge_suite() -> Result:
    rng = random.Random(7)
    bad = 0
    for _ in range(20):
        levels = (_rational(rng), _rational(rng), _rational(rng, nonzero=True))
        spec = ModuleSpec.vacuum_hv1(*levels)
        want = central_charges(*levels)
        for name in ("omega", "omega_H", "omega_tilde"):
            bad += central_charge(conformal_vector(name, spec)) != want[name]
    spec = ModuleSpec.vacuum_hv1(3, 1, 2)
    vir = [virasoro_defect(conformal_vector(n, spec), (-2, 2), 6) for n in ("omega_H", "omega_tilde")]
    com = commutant_defect(spec)
    ok = bad == 0 and all(not r["defects"] for r in vir) and not com["defects"]
    return ok, (f"20 tuples, {bad} central-charge mismatches; Virasoro defects "
                f"{[len(r['defects']) for r in vir]}; commutant defects {len(com['defects'])}")


def zhu_suite() -> Result:
    spec = ModuleSpec.vacuum_hv1(Fraction(3, 7), Fraction(-2, 5), Fraction(5, 3))
    basis = [PBWVector(spec, {m: 1}) for d in range(6) for m in enumerate_basis(spec, d)]
    images = [zhu_reduce(u) for u in basis]
    bad = 0
    for u, iu in zip(basis, images):
        for v, iv in zip(basis, images):
            bad += zhu_reduce(zhu_product(u, v)) != iu * iv
    x = zhu_reduce(monomial_vector(spec, [Sym("L", (-2,))])) == ZhuPoly({(1, 0): 1})
    y = zhu_reduce(monomial_vector(spec, [Sym("I", (-1,))])) == ZhuPoly({(0, 1): 1})
    return bad == 0 and x and y, f"{len(basis) ** 2} pairs up to degree 5, {bad} failures; generators hit: {x and y}"


def graded_dimensions() -> Result:
    spec = ModuleSpec.vacuum_hv1(1, 2, 3)
    dims = [graded_dim(spec, n) for n in range(13)]
    oracle = vacuum_hv1_dims(12)
    tensor = tensor_dim_check(1, 2, 3, 12)
    ok = dims == oracle and oracle[:7] == [1, 1, 3, 5, 10, 16, 29] and all(r["defect"] == 0 for r in tensor)
    return ok, f"dims {dims}; tensor defects {[r['defect'] for r in tensor]}"


def singular_suite() -> Result:
    k0 = len(singular_vector_search(0, 2))
    k1 = len(singular_vector_search(Fraction(-22, 5), 4))
    kg = len(singular_vector_search(7, 2))
    drops = {}
    for p, q in ((2, 3), (2, 5)):
        spec = ModuleSpec.vacuum_hv1(1 + cpq(p, q), 0, 1)
        drops[(p, q)] = next(d for d in range(0, 8) if gram_rank(spec, d) < graded_dim(spec, d))
    ok = (k0, k1, kg) == (1, 1, 0) and all(d == cpq_degree(p, q) for (p, q), d in drops.items())
    return ok, f"kernels (c=0,deg2)={k0} (c=-22/5,deg4)={k1} (c=7,deg2)={kg}; first rank drop {drops}"


UNITARITY_GRID = [
    # vacuum points: (l1, l2, l3)
    (Fraction(1), 0, 0), (Fraction(1, 2), 0, 0), (Fraction(7, 10), 0, 0), (Fraction(3), 0, 0),
    (Fraction(2), 0, 1), (Fraction(3, 2), 0, 1), (Fraction(5, 2), 0, 2),
    (Fraction(2), 1, 1), (Fraction(2), 0, -1), (Fraction(-1), 0, 0),
    # module points: (l1, l2, l3, h1, h2)
    (Fraction(2), 0, 1, Fraction(1, 2), 1), (Fraction(2), 0, 1, 0, 1),
]


def unitarity_suite() -> Result:
    rows, ok = [], True
    for pt in UNITARITY_GRID:
        spec = ModuleSpec.vacuum_hv1(*pt) if len(pt) == 3 else ModuleSpec.verma_hv1(*pt)
        closed = unitarity_classify(*pt).unitary
        scanned = unitarity_by_scan(spec, 4)
        ok &= closed == scanned
        rows.append(f"{tuple(str(x) for x in pt)}:{'U' if closed else 'N'}{'=' if closed == scanned else '!'}")
    unitary = sum(unitarity_classify(*pt).unitary for pt in UNITARITY_GRID)
    return ok and 0 < unitary < len(UNITARITY_GRID), " ".join(rows)


DETERMINISM_COMMANDS = [
    "jacobi --algebra hv1 --range 4",
    "jacobi --algebra hv2 --a E(1,0) --b E(-1,1) --c T(0,-1)",
    "verify --identity eq3.7 --window 6",
    "verify --identity eq4.6 --m 2 --r=-2 --window 6",
    "locality --pair L,L --window 6",
    "locality --pair T,E --m 2 --r=-3 --window 6",
    "eproduct --l1 3/7 --l2=-2/5 --l3 5/3 --h1 1/4 --h2 2/9 --pair Lhat,Lhat --n 3",
    "eproduct --l1 3/7 --l2=-2/5 --l3 5/3 --l4 1/2 --pair T,E --n 1 --m 1 --r=-1",
    "borcherds --module verma-hv1 --l1 3/7 --l2=-2/5 --l3 5/3 --h1 1/4 --h2 2/9 --u omega --v I --window 1 --truncation 5",
    "central-charge --l1 3 --l2 1 --l3 2 --vector omega_H",
    "commutant --l1 3 --l2 1 --l3 2 --n 1 --m=-2",
    "zhu --l1 3/7 --l2=-2/5 --l3 5/3 --check-degree 3",
    "basis --module vacuum-hv1 --l1 1 --l2 0 --l3 1 --degree 12 --dims",
    "tensor-check --l1 1 --l2 2 --l3 3 --max-degree 12",
    "singular --c=-22/5 --degree 4",
    "gram --l1 1 --l2 0 --l3 1 --degree 2",
    "positivity --module verma-hv1 --l1 2 --l2 0 --l3 1 --h1 1 --h2 0 --max-degree 3",
    "unitary --l1 2 --l2 0 --l3 1 --h1 1/2 --h2 1",
]


def determinism() -> Result:
    import shlex

    def batch(seed: str) -> list[bytes]:
        env = dict(os.environ, PYTHONHASHSEED=seed)
        return [subprocess.run([sys.executable, "-m", "twisthv.cli", *shlex.split(c)], env=env,
                               capture_output=True).stdout for c in DETERMINISM_COMMANDS]

    first, second = batch("1"), batch("4242")
    diff = [c.split()[0] for c, a, b in zip(DETERMINISM_COMMANDS, first, second) if a != b or not a]
    return not diff, f"{len(DETERMINISM_COMMANDS)} commands run twice, differing or empty: {diff or 'none'}"


CRITERIA: list[tuple[int, str, float, Callable[[], Result]]] = [
    (1, "Jacobi suite", 30, jacobi_suite),
    (2, "identity suite", 60, identity_suite),
    (3, "locality orders", 10, locality_orders),
    (4, "e-product tables", 120, e_product_tables),
    (5, "Borcherds commutator", 60, borcherds_suite),
    (6, "central charges and commutant", 60, central_charge_suite),
    (7, "Zhu algebra morphism", 60, zhu_suite),
    (8, "graded dimensions", 5, graded_dimensions),
    (9, "singular vectors and simple quotient", 30, singular_suite),
    (10, "unitarity classifier vs positivity", 60, unitarity_suite),
    (11, "determinism", 10, determinism),
]


def evaluate(fn: Callable[[], Result], budget: float) -> tuple[bool, str]:
    start = time.perf_counter()
    try:
        ok, detail = fn()
    except Exception as exc:  # reported as a failure line, not a crash
        ok, detail = False, f"{type(exc).__name__}: {exc}"
    elapsed = time.perf_counter() - start
    within = elapsed < budget
    return ok and within, f"{detail} [{elapsed:.1f}s, budget {budget:.0f}s{'' if within else ' EXCEEDED'}]"


def _line(num: int, title: str, passed: bool, detail: str) -> str:
    return f"{'PASS' if passed else 'FAIL'} criterion {num:>2} {title}: {detail}"


@pytest.mark.parametrize("num,title,budget,fn", CRITERIA, ids=[f"criterion-{c[0]}" for c in CRITERIA])
def test_criterion(num, title, budget, fn, capsys):
    passed, detail = evaluate(fn, budget)
    with capsys.disabled():
        print("\n" + _line(num, title, passed, detail))
    assert passed, detail


if __name__ == "__main__":
    failures = 0
    for num, title, budget, fn in CRITERIA:
        passed, detail = evaluate(fn, budget)
        failures += not passed
        print(_line(num, title, passed, detail), flush=True)
    sys.exit(1 if failures else 0)
