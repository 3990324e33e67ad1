"""Highest-weight and vacuum modules with PBW bases.

Vectors are sparse combinations of canonically ordered monomials of
creation symbols applied to the generating vector.  Acting by a basis
symbol straightens the product back into canonical order using the
bracket of the underlying Lie algebra.

Module kinds
------------
``vacuum-hv1``       creators ``L(-m)`` (m >= 2) and ``I(-k)`` (k >= 1)
``verma-hv1``        creators ``L(-m)``, ``I(-k)`` (m, k >= 1); ``L(0) -> h1``, ``I(0) -> h2``
``vacuum-frak1``     creators ``Lbar(-m)`` (degree m+1) and ``Ibar(-k)``
``vacuum-frak2hat``  creators ``That(m,-n)``, ``Ehat(m,-n)`` with n >= 1
``induced-hv2``      creators ``T(m,n)``, ``E(m,n)`` with n <= 0; modes with n >= 1
                     kill the generating vector (used as a restricted module of
                     the rank-two algebra)
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from functools import lru_cache
from typing import Iterable, Mapping, Sequence

from .errors import AlgebraMismatch, ModuleError
from .liealg import Algebra, LieElt, Sym, bracket_syms, format_combination, make_sym, sym_algebra_ok
from .scalar import Number, S, Scalar

Monomial = tuple[Sym, ...]


class ModuleKind(str, Enum):
    VACUUM_HV1 = "vacuum-hv1"
    VERMA_HV1 = "verma-hv1"
    VACUUM_FRAK1 = "vacuum-frak1"
    VACUUM_FRAK2HAT = "vacuum-frak2hat"
    INDUCED_HV2 = "induced-hv2"


_ALGEBRA = {
    ModuleKind.VACUUM_HV1: Algebra.HV1,
    ModuleKind.VERMA_HV1: Algebra.HV1,
    ModuleKind.VACUUM_FRAK1: Algebra.FRAK1,
    ModuleKind.VACUUM_FRAK2HAT: Algebra.FRAK2HAT,
    ModuleKind.INDUCED_HV2: Algebra.HV2,
}

_CENTRAL_SLOT = {"C1": 0, "C2": 1, "C3": 2, "K1": 0, "K2": 1, "K3": 2, "K4": 3}

CREATE, KILL, CARTAN, CENTRAL = "create", "kill", "cartan", "central"


@dataclass(frozen=True)
class ModuleSpec:
    kind: ModuleKind
    levels: tuple[Scalar, ...]
    h1: Scalar = field(default_factory=lambda: S(0))
    h2: Scalar = field(default_factory=lambda: S(0))
    m_bound: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "kind", ModuleKind(self.kind))
        levels = tuple(S(x) for x in self.levels)
        want = 4 if self.algebra in (Algebra.HV2, Algebra.FRAK2HAT) else 3
        if len(levels) != want:
            raise ModuleError(f"{self.kind.value} needs {want} central levels, got {len(levels)}")
        object.__setattr__(self, "levels", levels)
        object.__setattr__(self, "h1", S(self.h1))
        object.__setattr__(self, "h2", S(self.h2))
        if self.kind is not ModuleKind.VERMA_HV1 and (self.h1 or self.h2):
            raise ModuleError("highest weights h1, h2 only apply to verma-hv1")
        if self.m_bound is not None and self.m_bound < 0:
            raise ModuleError("m_bound must be non-negative")

    # constructors
    @classmethod
    def vacuum_hv1(cls, l1: Number, l2: Number, l3: Number) -> "ModuleSpec":
        return cls(ModuleKind.VACUUM_HV1, (l1, l2, l3))

    @classmethod
    def verma_hv1(cls, l1: Number, l2: Number, l3: Number, h1: Number, h2: Number) -> "ModuleSpec":
        return cls(ModuleKind.VERMA_HV1, (l1, l2, l3), S(h1), S(h2))

    @classmethod
    def vacuum_frak1(cls, l1: Number, l2: Number, l3: Number) -> "ModuleSpec":
        return cls(ModuleKind.VACUUM_FRAK1, (l1, l2, l3))

    @classmethod
    def vacuum_frak2hat(cls, l1, l2, l3, l4, m_bound: int | None = None) -> "ModuleSpec":
        return cls(ModuleKind.VACUUM_FRAK2HAT, (l1, l2, l3, l4), m_bound=m_bound)

    @classmethod
    def induced_hv2(cls, l1, l2, l3, l4, m_bound: int | None = None) -> "ModuleSpec":
        return cls(ModuleKind.INDUCED_HV2, (l1, l2, l3, l4), m_bound=m_bound)

    @property
    def algebra(self) -> Algebra:
        return _ALGEBRA[ModuleKind(self.kind)]

    @property
    def l1(self) -> Scalar:
        return self.levels[0]

    @property
    def l2(self) -> Scalar:
        return self.levels[1]

    @property
    def l3(self) -> Scalar:
        return self.levels[2]

    @property
    def is_vacuum(self) -> bool:
        return self.kind is not ModuleKind.VERMA_HV1

    def central_value(self, s: Sym) -> Scalar:
        return self.levels[_CENTRAL_SLOT[s.name]]

    def to_json(self) -> dict:
        out = {"kind": self.kind.value, "levels": [str(x) for x in self.levels]}
        if self.kind is ModuleKind.VERMA_HV1:
            out["h1"], out["h2"] = str(self.h1), str(self.h2)
        if self.m_bound is not None:
            out["m_bound"] = self.m_bound
        return out

    # symbol classification -------------------------------------------------

    def role(self, s: Sym) -> str:
        if s.central:
            return CENTRAL
        kind = self.kind
        n = s.idx[-1]
        if kind is ModuleKind.VACUUM_HV1:
            if s.name == "L":
                return CREATE if n <= -2 else KILL
            return CREATE if n <= -1 else KILL
        if kind is ModuleKind.VERMA_HV1:
            return CREATE if n < 0 else (CARTAN if n == 0 else KILL)
        if kind is ModuleKind.INDUCED_HV2:
            return CREATE if n <= 0 else KILL
        return CREATE if n <= -1 else KILL

    def cartan_value(self, s: Sym) -> Scalar:
        return self.h1 if s.name == "L" else self.h2

    def shift(self, s: Sym) -> int:
        """Change of degree produced by acting with ``s``."""
        if s.central:
            return 0
        if s.name == "Lbar":
            return 1 - s.idx[0]
        return -s.idx[-1]

    def key(self, s: Sym) -> tuple:
        """Canonical position of a creator; monomials are sorted ascending."""
        block = 0 if s.name in ("I", "Ibar", "T", "That") else 1
        if len(s.idx) == 1:
            return (block, s.idx[0])
        return (block, s.idx[1], s.idx[0])

    def degree(self, mono: Monomial) -> int:
        return sum(self.shift(s) for s in mono)

    def is_canonical(self, mono: Monomial) -> bool:
        if any(not sym_algebra_ok(self.algebra, s) or self.role(s) != CREATE for s in mono):
            return False
        keys = [self.key(s) for s in mono]
        return keys == sorted(keys)

    def in_m_window(self, mono: Monomial) -> bool:
        if self.m_bound is None or self.algebra not in (Algebra.HV2, Algebra.FRAK2HAT):
            return True
        return all(abs(s.idx[0]) <= self.m_bound for s in mono)

    def creators_up_to(self, degree: int) -> list[Sym]:
        """All creators of degree between 1 and ``degree`` in canonical order."""
        kind = self.kind
        out: list[Sym] = []
        if kind is ModuleKind.VACUUM_HV1:
            out += [Sym("I", (-k,)) for k in range(1, degree + 1)]
            out += [Sym("L", (-m,)) for m in range(2, degree + 1)]
        elif kind is ModuleKind.VERMA_HV1:
            out += [Sym("I", (-k,)) for k in range(1, degree + 1)]
            out += [Sym("L", (-m,)) for m in range(1, degree + 1)]
        elif kind is ModuleKind.VACUUM_FRAK1:
            out += [Sym("Ibar", (-k,)) for k in range(1, degree + 1)]
            out += [Sym("Lbar", (-m,)) for m in range(1, degree)]
        elif kind is ModuleKind.VACUUM_FRAK2HAT:
            if self.m_bound is None:
                raise ModuleError("vacuum-frak2hat enumeration needs m_bound")
            ms = range(-self.m_bound, self.m_bound + 1)
            for name in ("That", "Ehat"):
                out += [Sym(name, (m, -n)) for n in range(1, degree + 1) for m in ms]
        else:
            raise ModuleError("induced-hv2 has infinite-dimensional graded pieces; no basis enumeration")
        return sorted(out, key=self.key)


# ---------------------------------------------------------------------------
# straightening


def _inversions(spec: ModuleSpec, g: Sym, mono: Monomial) -> int:
    if spec.role(g) != CREATE:
        return len(mono) + 1
    kg = spec.key(g)
    return sum(1 for s in mono if spec.key(s) < kg)


@lru_cache(maxsize=1 << 20)
def _act(spec: ModuleSpec, g: Sym, mono: Monomial) -> tuple[tuple[Monomial, Scalar], ...]:
    role = spec.role(g)
    if role == CENTRAL:
        v = spec.central_value(g)
        return ((mono, v),) if v else ()
    if not mono:
        if role == KILL:
            return ()
        if role == CARTAN:
            v = spec.cartan_value(g)
            return (((), v),) if v else ()
        return (((g,), S(1)),)
    a1, rest = mono[0], mono[1:]
    if role == CREATE and spec.key(g) <= spec.key(a1):
        return (((g,) + mono, S(1)),)

    measure = (len(mono) + 1, _inversions(spec, g, mono))
    acc: dict[Monomial, Scalar] = {}

    def add(m: Monomial, c: Scalar) -> None:
        if m in acc:
            acc[m] = acc[m] + c
        else:
            acc[m] = c

    # g a1 rest = a1 (g rest) + [g, a1] rest
    assert (len(rest) + 1, _inversions(spec, g, rest)) < measure
    for m2, c2 in _act(spec, g, rest):
        assert (len(m2) + 1, _inversions(spec, a1, m2)) < measure, "straightening measure must decrease"
        for m3, c3 in _act(spec, a1, m2):
            add(m3, c2 * c3)
    for s, cs in bracket_syms(spec.algebra, g, a1):
        if s.central:
            add(rest, cs * spec.central_value(s))
        else:
            for m3, c3 in _act(spec, s, rest):
                add(m3, cs * c3)
    return tuple((m, c) for m, c in acc.items() if c)


# ---------------------------------------------------------------------------
# vectors


class PBWVector:
    """Sparse combination of canonical monomials in a module."""

    __slots__ = ("spec", "terms")

    def __init__(self, spec: ModuleSpec, terms: Mapping[Monomial, Number] | None = None, *, check: bool = True):
        self.spec = spec
        clean: dict[Monomial, Scalar] = {}
        for m, c in (terms or {}).items():
            c = S(c)
            if not c:
                continue
            m = tuple(m)
            if check and not spec.is_canonical(m):
                raise ModuleError(f"{format_monomial(m)} is not a canonical monomial of {spec.kind.value}")
            clean[m] = clean[m] + c if m in clean else c
        self.terms = {m: c for m, c in clean.items() if c}

    @classmethod
    def vacuum(cls, spec: ModuleSpec) -> "PBWVector":
        return cls(spec, {(): S(1)})

    @classmethod
    def zero(cls, spec: ModuleSpec) -> "PBWVector":
        return cls(spec)

    @classmethod
    def _raw(cls, spec: ModuleSpec, acc: dict[Monomial, Scalar]) -> "PBWVector":
        out = object.__new__(cls)
        out.spec = spec
        out.terms = {m: c for m, c in acc.items() if c}
        return out

    @classmethod
    def from_word(cls, spec: ModuleSpec, word: Sequence[Sym], coef: Number = 1) -> "PBWVector":
        """``coef * word . hw`` straightened into canonical form."""
        return apply_word(word, cls.vacuum(spec)).scale(coef)

    # algebra
    def _check(self, other: "PBWVector") -> None:
        if other.spec != self.spec:
            raise ModuleError("vectors live in different modules")

    def __add__(self, other: "PBWVector") -> "PBWVector":
        self._check(other)
        acc = dict(self.terms)
        for m, c in other.terms.items():
            acc[m] = acc[m] + c if m in acc else c
        return PBWVector._raw(self.spec, acc)

    def __sub__(self, other: "PBWVector") -> "PBWVector":
        return self + other.scale(-1)

    def __neg__(self) -> "PBWVector":
        return self.scale(-1)

    def scale(self, k: Number) -> "PBWVector":
        k = S(k)
        if not k:
            return PBWVector._raw(self.spec, {})
        return PBWVector._raw(self.spec, {m: k * c for m, c in self.terms.items()})

    def __mul__(self, k: Number) -> "PBWVector":
        return self.scale(k)

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        if isinstance(other, PBWVector):
            return self.spec == other.spec and self.terms == other.terms
        if other == 0:
            return not self.terms
        return NotImplemented

    __hash__ = None  # mutable-looking container; compare by value only

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def coeff(self, mono: Iterable[Sym]) -> Scalar:
        return self.terms.get(tuple(mono), S(0))

    def degrees(self) -> set[int]:
        return {self.spec.degree(m) for m in self.terms}

    def max_degree(self) -> int:
        return max(self.degrees(), default=0)

    def is_homogeneous(self) -> bool:
        return len(self.degrees()) <= 1

    def degree(self) -> int:
        ds = self.degrees()
        if len(ds) > 1:
            raise ModuleError("vector is not homogeneous")
        return ds.pop() if ds else 0

    def component(self, degree: int) -> "PBWVector":
        return PBWVector._raw(self.spec, {m: c for m, c in self.terms.items() if self.spec.degree(m) == degree})

    def sorted_terms(self) -> list[tuple[Monomial, Scalar]]:
        spec = self.spec
        return sorted(self.terms.items(), key=lambda t: (spec.degree(t[0]), [spec.key(s) for s in t[0]]))

    def to_json(self) -> dict:
        return {
            "module": self.spec.to_json(),
            "terms": [{"monomial": [s.to_json() for s in m], "coef": c.to_json()} for m, c in self.sorted_terms()],
        }

    def __str__(self) -> str:
        return format_combination((_MonoLabel(m), c) for m, c in self.sorted_terms())

    def __repr__(self) -> str:
        return f"PBWVector({self})"


class _MonoLabel:
    def __init__(self, mono: Monomial):
        self.mono = mono

    def __str__(self) -> str:
        return format_monomial(self.mono)


def format_monomial(mono: Monomial) -> str:
    if not mono:
        return "1"
    return "".join(str(s) for s in mono) + "1"


# ---------------------------------------------------------------------------
# operations


def act(g: Sym | LieElt, v: PBWVector) -> PBWVector:
    """Left action of a basis symbol (or a Lie algebra element) on ``v``."""
    spec = v.spec
    if isinstance(g, LieElt):
        if g.algebra is not spec.algebra:
            raise AlgebraMismatch(f"{g.algebra.value} element acting on a {spec.algebra.value} module")
        out = PBWVector.zero(spec)
        for s, c in g:
            out = out + act(s, v).scale(c)
        return out
    if not sym_algebra_ok(spec.algebra, g):
        raise AlgebraMismatch(f"{g} does not belong to {spec.algebra.value}")
    acc: dict[Monomial, Scalar] = {}
    for m, c in v.terms.items():
        for m2, c2 in _act(spec, g, m):
            val = c * c2
            acc[m2] = acc[m2] + val if m2 in acc else val
    return PBWVector._raw(spec, acc)


def apply_word(word: Sequence[Sym | LieElt], v: PBWVector) -> PBWVector:
    """Apply ``word[0] word[1] ... word[-1]`` to ``v`` (rightmost first)."""
    for g in reversed(list(word)):
        v = act(g, v)
    return v


def monomial_vector(spec: ModuleSpec, syms: Sequence[Sym], coef: Number = 1) -> PBWVector:
    """Vector ``coef * syms . hw``; the word need not be canonical."""
    return apply_word(syms, PBWVector.vacuum(spec)).scale(coef)


def _d_symbol(s: Sym) -> tuple[Sym, int]:
    n = s.idx[0]
    if s.name == "L":
        return Sym("L", (n - 1,)), -(n + 1)
    return Sym(s.name, (n - 1,)), -n


def d_action(v: PBWVector) -> PBWVector:
    """Translation derivation on a vacuum module of HV1 or FRAK1."""
    spec = v.spec
    if spec.kind not in (ModuleKind.VACUUM_HV1, ModuleKind.VACUUM_FRAK1):
        raise ModuleError(f"d is defined on the vacuum modules of hv1 and frak1, not {spec.kind.value}")
    out = PBWVector.zero(spec)
    for mono, c in v.terms.items():
        for i, s in enumerate(mono):
            ds, k = _d_symbol(s)
            if not k:
                continue
            tail = PBWVector._raw(spec, {mono[i + 1:]: S(1)})
            w = apply_word(mono[:i] + (ds,), tail)
            out = out + w.scale(c * k)
    return out


@lru_cache(maxsize=None)
def enumerate_basis(spec: ModuleSpec, degree: int) -> tuple[Monomial, ...]:
    """Canonical monomials of the given degree (within the m-window for rank two)."""
    if degree < 0:
        raise ValueError("degree must be non-negative")
    letters = spec.creators_up_to(degree)
    degs = [spec.shift(s) for s in letters]
    out: list[Monomial] = []

    def rec(start: int, remaining: int, prefix: list[Sym]) -> None:
        if remaining == 0:
            out.append(tuple(prefix))
            return
        for j in range(start, len(letters)):
            if degs[j] <= remaining:
                prefix.append(letters[j])
                rec(j, remaining - degs[j], prefix)
                prefix.pop()

    rec(0, degree, [])
    return tuple(out)


def graded_dim(spec: ModuleSpec, degree: int) -> int:
    return len(enumerate_basis(spec, degree))


def basis_vectors(spec: ModuleSpec, degree: int) -> list[PBWVector]:
    return [PBWVector._raw(spec, {m: S(1)}) for m in enumerate_basis(spec, degree)]


def parse_sym(spec_or_alg: ModuleSpec | Algebra, name: str, *idx: int) -> Sym:
    alg = spec_or_alg.algebra if isinstance(spec_or_alg, ModuleSpec) else spec_or_alg
    return make_sym(alg, name, *idx)


__all__ = [
    "ModuleKind", "ModuleSpec", "Monomial", "PBWVector", "act", "apply_word", "basis_vectors",
    "d_action", "enumerate_basis", "format_monomial", "graded_dim", "monomial_vector",
]
