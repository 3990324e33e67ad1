"""Structural computations on the vacuum vertex algebra and its highest-weight modules."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import gcd, isqrt
from typing import Iterable, Sequence

from . import linalg
from .errors import AsymmetricGram, ModuleError, ParameterError, UntrustedWindow
from .liealg import Sym, sigma_sym
from .pbwmod import (
    Monomial,
    ModuleKind,
    ModuleSpec,
    PBWVector,
    _act,
    act,
    enumerate_basis,
    format_monomial,
    graded_dim,
    monomial_vector,
)
from .scalar import Number, S, Scalar
from .vertexops import gbinom, truncated_module, vertex_field

OMEGA = (Sym("L", (-2,)),)
I_STATE = (Sym("I", (-1,)),)


def _require_vacuum(v: PBWVector) -> None:
    if v.spec.kind is not ModuleKind.VACUUM_HV1:
        raise ModuleError("expected a vector of the hv1 vacuum module")


# ---------------------------------------------------------------------------
# polynomials in x = [omega], y = [I]


class ZhuPoly:
    __slots__ = ("terms",)

    def __init__(self, terms: dict[tuple[int, int], Scalar] | None = None):
        self.terms = {k: S(c) for k, c in (terms or {}).items() if c}

    @classmethod
    def const(cls, c: Number) -> "ZhuPoly":
        return cls({(0, 0): S(c)})

    def __add__(self, other: "ZhuPoly") -> "ZhuPoly":
        out = dict(self.terms)
        for k, c in other.terms.items():
            out[k] = out[k] + c if k in out else c
        return ZhuPoly(out)

    def __sub__(self, other: "ZhuPoly") -> "ZhuPoly":
        return self + other.scale(-1)

    def scale(self, k: Number) -> "ZhuPoly":
        k = S(k)
        return ZhuPoly({e: c * k for e, c in self.terms.items()})

    def __mul__(self, other: "ZhuPoly") -> "ZhuPoly":
        out: dict[tuple[int, int], Scalar] = {}
        for (a, b), c in self.terms.items():
            for (a2, b2), c2 in other.terms.items():
                e = (a + a2, b + b2)
                out[e] = out[e] + c * c2 if e in out else c * c2
        return ZhuPoly(out)

    def times_x(self, shift: int = 0) -> "ZhuPoly":
        """``(x + shift)`` times this polynomial."""
        return ZhuPoly({(a + 1, b): c for (a, b), c in self.terms.items()}) + self.scale(shift)

    def times_y(self) -> "ZhuPoly":
        return ZhuPoly({(a, b + 1): c for (a, b), c in self.terms.items()})

    def __eq__(self, other) -> bool:
        return isinstance(other, ZhuPoly) and self.terms == other.terms

    def __hash__(self) -> int:
        return hash(frozenset(self.terms.items()))

    def is_zero(self) -> bool:
        return not self.terms

    def to_json(self) -> list:
        return [{"x": a, "y": b, "coef": str(c)} for (a, b), c in sorted(self.terms.items(), reverse=True)]

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for (a, b), c in sorted(self.terms.items(), reverse=True):
            mono = "*".join(p for p in (_pow("x", a), _pow("y", b)) if p)
            if not mono:
                parts.append(str(c))
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append("-" + mono)
            else:
                cs = str(c)
                parts.append(f"({cs})*{mono}" if ("+" in cs[1:] or "-" in cs[1:]) else f"{cs}*{mono}")
        return " + ".join(parts).replace("+ -", "- ")

    __repr__ = __str__


def _pow(v: str, k: int) -> str:
    return "" if k == 0 else v if k == 1 else f"{v}^{k}"


@lru_cache(maxsize=None)
def _zhu_mono(spec: ModuleSpec, mono: Monomial) -> ZhuPoly:
    if not mono:
        return ZhuPoly.const(1)
    head, rest = mono[0], mono[1:]
    wt_rest = spec.degree(rest)
    k = -head.idx[0]
    if head.name == "I":
        if k == 1:
            return _zhu_mono(spec, rest).times_y()
        return _zhu_vec(spec, _act(spec, Sym("I", (1 - k,)), rest)).scale(-1)
    if k == 1:
        return _zhu_mono(spec, rest).scale(-wt_rest)
    if k == 2:
        return _zhu_mono(spec, rest).times_x(wt_rest)
    a = _zhu_vec(spec, _act(spec, Sym("L", (1 - k,)), rest)).scale(-2)
    b = _zhu_vec(spec, _act(spec, Sym("L", (2 - k,)), rest)).scale(-1)
    return a + b


def _zhu_vec(spec: ModuleSpec, terms: Iterable[tuple[Monomial, Scalar]]) -> ZhuPoly:
    out = ZhuPoly()
    for m, c in terms:
        out = out + _zhu_mono(spec, m).scale(c)
    return out


def zhu_reduce(v: PBWVector) -> ZhuPoly:
    """Image of ``[v]`` in the polynomial ring, with ``x = [omega]`` and ``y = [I]``."""
    _require_vacuum(v)
    return _zhu_vec(v.spec, v.terms.items())


def _workspace(spec: ModuleSpec, need: int):
    return truncated_module(spec, max(12, need))


def zhu_product(u: PBWVector, v: PBWVector) -> PBWVector:
    """``u * v = sum_i C(wt u, i) u_(i-1) v``."""
    _require_vacuum(u)
    if not u.is_homogeneous():
        raise ModuleError("the left factor of a Zhu product must be homogeneous")
    if u.is_zero():
        return PBWVector.zero(u.spec)
    wt = u.degree()
    W = _workspace(u.spec, wt + (v.max_degree() if v else 0) + 2)
    Y = vertex_field(u, W)
    out = PBWVector.zero(u.spec)
    for i in range(wt + 1):
        out = out + Y.va(i - 1, v).scale(gbinom(wt, i))
    return out


# ---------------------------------------------------------------------------
# contravariant form


@dataclass(frozen=True)
class GramMatrix:
    spec: ModuleSpec
    degree: int
    basis: tuple[Monomial, ...]
    entries: tuple[tuple[Scalar, ...], ...]

    def is_symmetric(self) -> bool:
        return linalg.is_symmetric(self.entries)

    def rank(self) -> int:
        return linalg.rank(self.entries)

    def determinant(self) -> Scalar:
        return linalg.determinant(self.entries) if self.entries else S(1)

    def to_json(self) -> dict:
        return {
            "degree": self.degree,
            "basis": [format_monomial(m) for m in self.basis],
            "entries": [[str(x) for x in row] for row in self.entries],
        }


def _transfer(spec: ModuleSpec, word: Monomial, vec: dict) -> Scalar:
    """Coefficient of the highest-weight vector in sigma(a_k)...sigma(a_1) vec."""
    terms = vec
    for s in word:
        nxt: dict = {}
        for t, tc in sigma_sym(s):
            if t.central:
                k = tc * spec.central_value(t)
                for m, c in terms.items():
                    nxt[m] = nxt[m] + k * c if m in nxt else k * c
                continue
            for m, c in terms.items():
                for m2, c2 in _act(spec, t, m):
                    val = tc * c * c2
                    nxt[m2] = nxt[m2] + val if m2 in nxt else val
        terms = {m: c for m, c in nxt.items() if c}
        if not terms:
            return S(0)
    return terms.get((), S(0))


def gram_matrix(spec: ModuleSpec, degree: int) -> GramMatrix:
    """Contravariant form on one graded piece, normalized so the highest-weight vector has norm 1.

    Entry ``(i, j)`` is obtained by moving basis word ``i`` across the form
    with the anti-involution and reading off the highest-weight component;
    no symmetry is assumed.
    """
    if spec.kind not in (ModuleKind.VACUUM_HV1, ModuleKind.VERMA_HV1):
        raise ModuleError("gram matrices are defined for hv1 vacuum and Verma modules")
    if degree < 0:
        raise ParameterError("degree must be non-negative")
    basis = enumerate_basis(spec, degree)
    rows = []
    for wi in basis:
        rows.append(tuple(_transfer(spec, wi, {wj: S(1)}).conj() for wj in basis))
    return GramMatrix(spec, degree, basis, tuple(rows))


def gram_rank(spec: ModuleSpec, degree: int) -> int:
    return gram_matrix(spec, degree).rank()


def positivity_scan(spec: ModuleSpec, max_degree: int) -> list[dict]:
    """Per-degree definiteness of the contravariant form up to ``max_degree``.

    ``form`` describes the form on the induced module; the simple quotient
    is positive in a degree exactly when that form is positive semidefinite
    there (its radical is the maximal proper submodule).  The form is only
    Hermitian when the mixed level vanishes; an asymmetric Gram matrix raises
    :class:`AsymmetricGram`.
    """
    if any(not x.is_real() for x in spec.levels + (spec.h1, spec.h2)):
        raise ParameterError("positivity needs real parameters")
    out = []
    for d in range(max_degree + 1):
        g = gram_matrix(spec, d)
        if not g.is_symmetric():
            raise AsymmetricGram(
                f"Gram matrix at degree {d} is not symmetric; the form is Hermitian only when l2 = 0"
            )
        verdict, r = linalg.definiteness(g.entries)
        out.append({"degree": d, "dim": len(g.basis), "rank": r, "form": verdict,
                    "quotient_positive": verdict != "indefinite"})
    return out


def scan_is_positive(scan: Sequence[dict]) -> bool:
    return all(row["quotient_positive"] for row in scan)


# ---------------------------------------------------------------------------
# unitarity classification


def discrete_series_index(c: Number) -> int | None:
    """The integer ``m >= 2`` with ``c = 1 - 6/(m(m+1))``, if any."""
    c = S(c).real_value()
    if c >= 1:
        return None
    n = 6 / (1 - c)
    if n.denominator != 1:
        return None
    disc = 1 + 4 * n.numerator
    root = isqrt(disc)
    if root * root != disc or (root - 1) % 2:
        return None
    m = (root - 1) // 2
    return m if m >= 2 else None


def c_m(m: int) -> Fraction:
    return 1 - Fraction(6, m * (m + 1))


def h_rsm(r: int, s: int, m: int) -> Fraction:
    return Fraction((r * (m + 1) - s * m) ** 2 - 1, 4 * m * (m + 1))


def _h_triple(h: Fraction, m: int) -> tuple[int, int, int] | None:
    for r in range(1, m):
        for s in range(1, r + 1):
            if h_rsm(r, s, m) == h:
                return (r, s, m)
    return None


@dataclass
class UnitarityVerdict:
    unitary: bool
    case: str | None = None
    m: int | None = None
    triple: tuple[int, int, int] | None = None
    reason: str = ""

    def to_json(self) -> dict:
        out: dict = {"unitary": self.unitary, "reason": self.reason}
        if self.case is not None:
            out["case"] = self.case
        if self.m is not None:
            out["m"] = self.m
        if self.triple is not None:
            out["rsm"] = list(self.triple)
        return out


def unitarity_classify(l1: Number, l2: Number, l3: Number, h1: Number | None = None,
                       h2: Number | None = None) -> UnitarityVerdict:
    """Closed-form unitarity test for the simple vacuum algebra, or for a module when weights are given."""
    vals = [S(x) for x in (l1, l2, l3)] + [S(x) for x in (h1, h2) if x is not None]
    if any(not x.is_real() for x in vals):
        raise ParameterError("unitarity is decided for real rational parameters only")
    if (h1 is None) != (h2 is None):
        raise ParameterError("give both h1 and h2 or neither")
    a, b, c = (S(x).re for x in (l1, l2, l3))
    module = h1 is not None
    if b != 0:
        return UnitarityVerdict(False, reason="mixed level l2 must vanish")
    if c < 0:
        return UnitarityVerdict(False, reason="Heisenberg level l3 must be non-negative")
    if c == 0:
        hv1 = S(h1).re if module else Fraction(0)
        if module and S(h2).re != 0:
            return UnitarityVerdict(False, reason="h2 must vanish when l3 = 0")
        if a >= 1:
            if hv1 >= 0:
                return UnitarityVerdict(True, "continuum", reason="l3 = 0 and l1 >= 1")
            return UnitarityVerdict(False, reason="h1 must be non-negative")
        m = discrete_series_index(a)
        if m is None:
            return UnitarityVerdict(False, reason="l1 < 1 is not in the discrete series")
        if not module:
            return UnitarityVerdict(True, "c_m", m, reason="l3 = 0 and l1 = c_m")
        t = _h_triple(hv1, m)
        if t is None:
            return UnitarityVerdict(False, "c_m", m, reason="h1 is not an allowed weight h_{r,s}^m")
        return UnitarityVerdict(True, "c_m", m, t, reason="l3 = 0, l1 = c_m, h1 = h_{r,s}^m")
    shifted = S(h1).re - S(h2).re ** 2 / (2 * c) if module else Fraction(0)
    if a >= 2:
        if shifted >= 0:
            return UnitarityVerdict(True, "continuum", reason="l3 > 0 and l1 >= 2")
        return UnitarityVerdict(False, reason="h1 - h2^2/(2 l3) must be non-negative")
    m = discrete_series_index(a - 1)
    if m is None:
        return UnitarityVerdict(False, reason="l1 < 2 is not of the form 1 + c_m")
    if not module:
        return UnitarityVerdict(True, "1+c_m", m, reason="l3 > 0 and l1 = 1 + c_m")
    t = _h_triple(shifted, m)
    if t is None:
        return UnitarityVerdict(False, "1+c_m", m, reason="h1 - h2^2/(2 l3) is not an allowed weight h_{r,s}^m")
    return UnitarityVerdict(True, "1+c_m", m, t, reason="l3 > 0, l1 = 1 + c_m, shifted weight h_{r,s}^m")


def unitarity_by_scan(spec: ModuleSpec, max_degree: int = 4) -> bool:
    """Positivity of the form up to ``max_degree``; an asymmetric form counts as not unitary."""
    try:
        return scan_is_positive(positivity_scan(spec, max_degree))
    except AsymmetricGram:
        return False


# ---------------------------------------------------------------------------
# involution and conformal vectors


def phi_involution(v: PBWVector) -> PBWVector:
    """Sign ``(-1)^(number of I factors)`` on each monomial, coefficients conjugated."""
    _require_vacuum(v)
    out = {}
    for mono, c in v.terms.items():
        sign = -1 if sum(1 for s in mono if s.name == "I") % 2 else 1
        out[mono] = c.conj() * sign
    return PBWVector._raw(v.spec, out)


CONFORMAL_NAMES = ("omega", "omega_prime", "omega_H", "omega_tilde")


@dataclass(frozen=True)
class ConformalVector:
    name: str
    value: PBWVector = field(compare=False)

    @property
    def spec(self) -> ModuleSpec:
        return self.value.spec


def conformal_vector(name: str, spec: ModuleSpec) -> ConformalVector:
    if spec.kind is not ModuleKind.VACUUM_HV1:
        raise ModuleError("conformal vectors live in the hv1 vacuum module")
    if name not in CONFORMAL_NAMES:
        raise ParameterError(f"unknown conformal vector {name!r}; expected one of {', '.join(CONFORMAL_NAMES)}")
    omega = monomial_vector(spec, OMEGA)
    if name == "omega":
        return ConformalVector(name, omega)
    l2, l3 = spec.l2, spec.l3
    if not l3:
        raise ParameterError(f"{name} needs l3 != 0")
    prime = monomial_vector(spec, (Sym("I", (-1,)), Sym("I", (-1,))), S(1) / (2 * l3))
    if name == "omega_prime":
        return ConformalVector(name, prime)
    heis = prime + monomial_vector(spec, (Sym("I", (-2,)),), l2 / l3)
    if name == "omega_H":
        return ConformalVector(name, heis)
    return ConformalVector(name, omega - heis)


def closed_form_central_charge(name: str, l1: Number, l2: Number, l3: Number) -> Scalar:
    l1, l2, l3 = S(l1), S(l2), S(l3)
    if name == "omega":
        return l1
    if name == "omega_prime":
        return S(1)
    if name == "omega_H":
        return 1 - 12 * l2 * l2 / l3
    return l1 - 1 + 12 * l2 * l2 / l3


def central_charge(cv: ConformalVector) -> Scalar:
    """Twice the vacuum coefficient of ``v_(3) v``."""
    v = cv.value
    W = _workspace(v.spec, 8)
    return 2 * vertex_field(v, W).va(3, v).coeff(())


def virasoro_defect(cv: ConformalVector, window: tuple[int, int] = (-2, 2), max_input_degree: int = 4) -> dict:
    """``[L_m, L_n] w - (m-n) L_{m+n} w - (m^3-m)/12 c delta_{m+n,0} w`` with ``L_n = v_(n+1)``."""
    v = cv.value
    c = central_charge(cv)
    lo, hi = window
    W = _workspace(v.spec, max_input_degree + 2 * max(abs(lo), abs(hi)) + 2)
    Y = vertex_field(v, W)
    defects, checked, skipped = [], 0, 0
    for m in range(lo, hi + 1):
        for n in range(lo, hi + 1):
            for mono in W.basis_up_to(max_input_degree):
                w = {mono: S(1)}
                try:
                    lhs = _sub(Y.res(m + 1, Y.res(n + 1, w)), Y.res(n + 1, Y.res(m + 1, w)))
                    rhs = {k: x * (m - n) for k, x in Y.res(m + n + 1, w).items()}
                except UntrustedWindow:
                    skipped += 1
                    continue
                if m + n == 0:
                    k = c * Fraction(m ** 3 - m, 12)
                    rhs[mono] = rhs.get(mono, S(0)) + k
                checked += 1
                diff = _sub(lhs, rhs)
                if diff:
                    defects.append({"m": m, "n": n, "vector": format_monomial(mono),
                                    "defect": str(PBWVector._raw(v.spec, diff))})
    return {"central_charge": str(c), "defects": defects, "checked": checked, "skipped": skipped}


def _sub(a: dict, b: dict) -> dict:
    out = dict(a)
    for k, x in b.items():
        out[k] = out[k] - x if k in out else -x
    return {k: x for k, x in out.items() if x}


def commutant_defect(spec: ModuleSpec, window: tuple[int, int] = (-3, 3),
                     vectors: Sequence[Monomial] = ((),)) -> dict:
    """``omega~_(n) I_m w - I_m omega~_(n) w`` for ``n, m`` in the window."""
    cv = conformal_vector("omega_tilde", spec)
    lo, hi = window
    top = max((spec.degree(m) for m in vectors), default=0)
    W = _workspace(spec, top + 3 * max(abs(lo), abs(hi)) + 4)
    Y = vertex_field(cv.value, W)
    defects, checked, skipped = [], 0, 0
    for n in range(lo, hi + 1):
        for m in range(lo, hi + 1):
            I_m = Sym("I", (m,))
            for mono in vectors:
                w = PBWVector._raw(spec, {mono: S(1)})
                try:
                    a = act(I_m, Y.va(n, w))
                    b = Y.va(n, act(I_m, w))
                except UntrustedWindow:
                    skipped += 1
                    continue
                checked += 1
                d = b - a
                if d:
                    defects.append({"n": n, "m": m, "vector": format_monomial(mono), "defect": str(d)})
    return {"defects": defects, "checked": checked, "skipped": skipped}


# ---------------------------------------------------------------------------
# Virasoro singular vectors


def virasoro_spec(c: Number) -> ModuleSpec:
    """Vacuum module whose L-only sector is the Virasoro vacuum module of central charge ``c``."""
    return ModuleSpec.vacuum_hv1(c, 0, 0)


def virasoro_basis(c: Number, degree: int) -> tuple[Monomial, ...]:
    return tuple(m for m in enumerate_basis(virasoro_spec(c), degree) if all(s.name == "L" for s in m))


def singular_vector_search(c: Number, degree: int) -> list[PBWVector]:
    """Kernel of ``(L_1, L_2)`` on the degree-``degree`` Virasoro vacuum space."""
    if degree < 1:
        raise ParameterError("degree must be at least 1")
    spec = virasoro_spec(c)
    basis = virasoro_basis(c, degree)
    rows: dict[Monomial, list[Scalar]] = {}
    for col, mono in enumerate(basis):
        for k in (1, 2):
            for m2, c2 in _act(spec, Sym("L", (k,)), mono):
                row = rows.setdefault((k,) + m2, [S(0)] * len(basis))
                row[col] = row[col] + c2
    kernel = linalg.nullspace(list(rows.values()), len(basis))
    return [PBWVector._raw(spec, {m: x for m, x in zip(basis, vec) if x}) for vec in kernel]


def embed_via_omega_tilde(v: PBWVector, l2: Number = 0, l3: Number = 1) -> PBWVector:
    """Image of a Virasoro vacuum vector inside the hv1 vacuum module, built from omega~ modes."""
    c = v.spec.l1
    l2, l3 = S(l2), S(l3)
    spec = ModuleSpec.vacuum_hv1(c + 1 - 12 * l2 * l2 / l3, l2, l3)
    cv = conformal_vector("omega_tilde", spec)
    W = _workspace(spec, v.max_degree() + 4)
    Y = vertex_field(cv.value, W)
    out = PBWVector.zero(spec)
    for mono, coef in v.terms.items():
        w = PBWVector.vacuum(spec)
        for s in reversed(mono):
            w = Y.va(s.idx[0] + 1, w)
        out = out + w.scale(coef)
    return out


def singular_crosscheck(v: PBWVector, l2: Number = 0, l3: Number = 1) -> bool:
    """The omega~ image is nonzero and killed by the positive modes L~_1, L~_2."""
    img = embed_via_omega_tilde(v, l2, l3)
    if not img:
        return False
    cv = conformal_vector("omega_tilde", img.spec)
    Y = vertex_field(cv.value, _workspace(img.spec, img.max_degree() + 4))
    return not Y.va(2, img) and not Y.va(3, img)


def cpq(p: int, q: int) -> Fraction:
    _check_pq(p, q)
    return 1 - Fraction(6 * (p - q) ** 2, p * q)


def cpq_degree(p: int, q: int) -> int:
    _check_pq(p, q)
    return (p - 1) * (q - 1)


def _check_pq(p: int, q: int) -> None:
    if p < 2 or q < 2 or gcd(p, q) != 1:
        raise ParameterError(f"p, q must be coprime integers >= 2, got ({p}, {q})")


# ---------------------------------------------------------------------------
# dimension checks


@lru_cache(maxsize=None)
def _partition_counts(n: int, smallest: int) -> tuple[int, ...]:
    counts = [1] + [0] * n
    for part in range(smallest, n + 1):
        for t in range(part, n + 1):
            counts[t] += counts[t - part]
    return tuple(counts)


def tensor_dim_check(l1: Number, l2: Number, l3: Number, max_degree: int) -> list[dict]:
    """Compare graded dimensions with the product of Heisenberg and Virasoro vacuum characters."""
    if not S(l3):
        raise ParameterError("the tensor decomposition needs l3 != 0")
    spec = ModuleSpec.vacuum_hv1(l1, l2, l3)
    heis = _partition_counts(max_degree, 1)
    vir = _partition_counts(max_degree, 2)
    rows = []
    for n in range(max_degree + 1):
        prod = sum(heis[k] * vir[n - k] for k in range(n + 1))
        dim = graded_dim(spec, n)
        rows.append({"degree": n, "graded_dim": dim, "product": prod, "defect": dim - prod})
    return rows


def c2_quotient_dim(degree: int, l1: Number = 2, l2: Number = 0, l3: Number = 1) -> int:
    """Dimension of the degree-``degree`` piece of ``V / span{u_(-2) v}``."""
    if degree < 0:
        raise ParameterError("degree must be non-negative")
    spec = ModuleSpec.vacuum_hv1(l1, l2, l3)
    target = enumerate_basis(spec, degree)
    if degree < 2:
        return len(target)
    index = {m: i for i, m in enumerate(target)}
    W = _workspace(spec, degree + 2)
    rows = []
    for wu in range(1, degree):
        for mu in enumerate_basis(spec, wu):
            Y = vertex_field(PBWVector._raw(spec, {mu: S(1)}), W)
            for mv in enumerate_basis(spec, degree - 1 - wu):
                vec = Y.va(-2, PBWVector._raw(spec, {mv: S(1)}))
                row = [S(0)] * len(target)
                for m, c in vec.terms.items():
                    row[index[m]] = c
                rows.append(row)
    return len(target) - linalg.rank(rows)
