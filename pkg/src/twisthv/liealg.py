"""Structure constants and brackets for the four Lie algebras.

``HV1``
    rank-one twisted Heisenberg-Virasoro algebra with basis ``L(n)``,
    ``I(n)`` and central ``C1, C2, C3``.
``FRAK1``
    the shifted presentation with basis ``Lbar(n)``, ``Ibar(n)`` and the
    same central elements; isomorphic to ``HV1`` via :func:`iso_frak_to_hv`.
``HV2``
    rank-two algebra with ``T(m,n)``, ``E(m,n)`` for ``(m,n) != (0,0)``
    and central ``K1..K4``.
``FRAK2HAT``
    companion rank-two algebra with ``That(m,n)``, ``Ehat(m,n)`` over all
    of Z^2 and central ``K1..K4``.
"""

from __future__ import annotations

from enum import Enum
from functools import lru_cache
from typing import Iterable, Iterator, Mapping, NamedTuple

from .errors import AlgebraMismatch, ParseError, SymbolError
from .scalar import ONE, Number, S, Scalar


class Algebra(str, Enum):
    HV1 = "hv1"
    FRAK1 = "frak1"
    HV2 = "hv2"
    FRAK2HAT = "frak2hat"

    @classmethod
    def parse(cls, text: str) -> "Algebra":
        try:
            return cls(text.strip().lower())
        except ValueError:
            raise ParseError(f"unknown algebra {text!r}; expected one of {[a.value for a in cls]}") from None


# name -> number of integer indices, in canonical variant order
_ALPHABET: dict[Algebra, dict[str, int]] = {
    Algebra.HV1: {"L": 1, "I": 1, "C1": 0, "C2": 0, "C3": 0},
    Algebra.FRAK1: {"Lbar": 1, "Ibar": 1, "C1": 0, "C2": 0, "C3": 0},
    Algebra.HV2: {"T": 2, "E": 2, "K1": 0, "K2": 0, "K3": 0, "K4": 0},
    Algebra.FRAK2HAT: {"That": 2, "Ehat": 2, "K1": 0, "K2": 0, "K3": 0, "K4": 0},
}

CENTRAL_NAMES = frozenset({"C1", "C2", "C3", "K1", "K2", "K3", "K4"})


class Sym(NamedTuple):
    """A basis symbol: a variant name and its integer indices."""

    name: str
    idx: tuple[int, ...] = ()

    def __str__(self) -> str:
        if not self.idx:
            return self.name
        return f"{self.name}({','.join(str(i) for i in self.idx)})"

    @property
    def central(self) -> bool:
        return self.name in CENTRAL_NAMES

    def to_json(self) -> dict:
        return {"sym": self.name, "idx": list(self.idx)}


def make_sym(algebra: Algebra, name: str, *idx: int) -> Sym:
    """Build a validated basis symbol of ``algebra``."""
    arity = _ALPHABET[algebra].get(name)
    if arity is None:
        raise SymbolError(f"{name} is not a basis symbol of {algebra.value}")
    if len(idx) != arity:
        raise SymbolError(f"{name} takes {arity} indices, got {len(idx)}")
    if any(not isinstance(i, int) or isinstance(i, bool) for i in idx):
        raise SymbolError(f"indices of {name} must be integers")
    if algebra is Algebra.HV2 and arity == 2 and idx == (0, 0):
        raise SymbolError(f"{name}(0,0) is not a basis element of hv2")
    return Sym(name, tuple(idx))


def sym_algebra_ok(algebra: Algebra, s: Sym) -> bool:
    arity = _ALPHABET[algebra].get(s.name)
    if arity is None or len(s.idx) != arity:
        return False
    return not (algebra is Algebra.HV2 and arity == 2 and s.idx == (0, 0))


_RANK = {alg: {name: k for k, name in enumerate(names)} for alg, names in _ALPHABET.items()}


def sym_key(algebra: Algebra, s: Sym) -> tuple:
    """Canonical ordering key: variant position, then indices."""
    return (_RANK[algebra][s.name], s.idx)


class LieElt:
    """Immutable sparse linear combination of basis symbols of one algebra."""

    __slots__ = ("algebra", "_terms", "_hash")

    def __init__(self, algebra: Algebra, terms: Mapping[Sym, Number] | Iterable[tuple[Sym, Number]] = ()):
        self.algebra = Algebra(algebra)
        acc: dict[Sym, Scalar] = {}
        items = terms.items() if isinstance(terms, Mapping) else terms
        for s, c in items:
            if not sym_algebra_ok(self.algebra, s):
                raise SymbolError(f"{s} is not a basis symbol of {self.algebra.value}")
            acc[s] = acc.get(s, Scalar(0)) + S(c)
        self._terms: tuple[tuple[Sym, Scalar], ...] = tuple(
            sorted(((s, c) for s, c in acc.items() if c), key=lambda t: sym_key(self.algebra, t[0]))
        )
        self._hash = None

    @classmethod
    def _raw(cls, algebra: Algebra, acc: dict[Sym, Scalar]) -> "LieElt":
        out = object.__new__(cls)
        out.algebra = algebra
        out._terms = tuple(sorted(((s, c) for s, c in acc.items() if c), key=lambda t: sym_key(algebra, t[0])))
        out._hash = None
        return out

    @classmethod
    def zero(cls, algebra: Algebra) -> "LieElt":
        return cls(algebra)

    @classmethod
    def gen(cls, algebra: Algebra, name: str, *idx: int, coef: Number = 1) -> "LieElt":
        return cls(algebra, {make_sym(algebra, name, *idx): coef})

    # container protocol
    def terms(self) -> dict[Sym, Scalar]:
        return dict(self._terms)

    def items(self) -> Iterator[tuple[Sym, Scalar]]:
        return iter(self._terms)

    def __iter__(self) -> Iterator[tuple[Sym, Scalar]]:
        return iter(self._terms)

    def __len__(self) -> int:
        return len(self._terms)

    def coeff(self, s: Sym) -> Scalar:
        for t, c in self._terms:
            if t == s:
                return c
        return Scalar(0)

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self) -> bool:
        return bool(self._terms)

    # arithmetic
    def _check(self, other: "LieElt") -> None:
        if not isinstance(other, LieElt):
            raise TypeError("expected a LieElt")
        if other.algebra is not self.algebra:
            raise AlgebraMismatch(f"cannot combine {self.algebra.value} with {other.algebra.value}")

    def __add__(self, other: "LieElt") -> "LieElt":
        self._check(other)
        acc = dict(self._terms)
        for s, c in other._terms:
            acc[s] = acc[s] + c if s in acc else c
        return LieElt._raw(self.algebra, acc)

    def __sub__(self, other: "LieElt") -> "LieElt":
        return self + (-other)

    def __neg__(self) -> "LieElt":
        return LieElt._raw(self.algebra, {s: -c for s, c in self._terms})

    def scale(self, k: Number) -> "LieElt":
        k = S(k)
        if not k:
            return LieElt.zero(self.algebra)
        return LieElt._raw(self.algebra, {s: k * c for s, c in self._terms})

    def __mul__(self, k: Number) -> "LieElt":
        return self.scale(k)

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        if isinstance(other, LieElt):
            return self.algebra is other.algebra and self._terms == other._terms
        if other == 0:
            return not self._terms
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.algebra, self._terms))
        return self._hash

    # serialization
    def to_json(self) -> dict:
        return {
            "algebra": self.algebra.value,
            "terms": [{"sym": s.name, "idx": list(s.idx), "coef": c.to_json()} for s, c in self._terms],
        }

    @classmethod
    def from_json(cls, obj: dict) -> "LieElt":
        alg = Algebra.parse(obj["algebra"])
        terms = []
        for t in obj["terms"]:
            terms.append((make_sym(alg, t["sym"], *t.get("idx", [])), Scalar.from_json(t["coef"])))
        return cls(alg, terms)

    def __str__(self) -> str:
        return format_combination(self._terms)

    def __repr__(self) -> str:
        return f"LieElt({self.algebra.value}: {self})"


def format_combination(terms: Iterable[tuple[object, Scalar]]) -> str:
    parts = []
    for s, c in terms:
        if c == 1:
            body = str(s)
        elif c == -1:
            body = f"-{s}"
        elif c.is_real():
            body = f"{c}*{s}"
        else:
            body = f"({c})*{s}"
        parts.append(body)
    if not parts:
        return "0"
    out = parts[0]
    for p in parts[1:]:
        out += f" - {p[1:]}" if p.startswith("-") else f" + {p}"
    return out


# ---------------------------------------------------------------------------
# structure constants


def _delta(a: int) -> int:
    return 1 if a == 0 else 0


@lru_cache(maxsize=1 << 18)
def bracket_syms(algebra: Algebra, a: Sym, b: Sym) -> tuple[tuple[Sym, Scalar], ...]:
    """Bracket of two basis symbols as a tuple of (symbol, coefficient)."""
    if a.central or b.central:
        return ()
    out: dict[Sym, Scalar] = {}

    def put(s: Sym, c) -> None:
        if c:
            out[s] = out.get(s, Scalar(0)) + S(c)

    if algebra is Algebra.HV1:
        (m,), (n,) = a.idx, b.idx
        if a.name == "L" and b.name == "L":
            put(Sym("L", (m + n,)), m - n)
            put(Sym("C1"), _delta(m + n) * S(m**3 - m) / 12)
        elif a.name == "L" and b.name == "I":
            put(Sym("I", (m + n,)), -n)
            put(Sym("C2"), -_delta(m + n) * (m * m + m))
        elif a.name == "I" and b.name == "L":
            put(Sym("I", (m + n,)), m)
            put(Sym("C2"), _delta(m + n) * (n * n + n))
        else:
            put(Sym("C3"), m * _delta(m + n))
    elif algebra is Algebra.FRAK1:
        (m,), (n,) = a.idx, b.idx
        if a.name == "Lbar" and b.name == "Lbar":
            put(Sym("Lbar", (m + n - 1,)), m - n)
            put(Sym("C1"), _delta(m + n - 2) * S(m * (m - 1) * (m - 2)) / 12)
        elif a.name == "Lbar" and b.name == "Ibar":
            put(Sym("Ibar", (m + n - 1,)), -n)
            put(Sym("C2"), -_delta(m + n - 1) * (m * m - m))
        elif a.name == "Ibar" and b.name == "Lbar":
            put(Sym("Ibar", (m + n - 1,)), m)
            put(Sym("C2"), _delta(m + n - 1) * (n * n - n))
        else:
            put(Sym("C3"), m * _delta(m + n))
    elif algebra is Algebra.HV2:
        _rank_two(a, b, put, shift=0)
    else:
        _rank_two(a, b, put, shift=1)
    return tuple(sorted(((s, c) for s, c in out.items() if c), key=lambda t: sym_key(algebra, t[0])))


def _rank_two(a: Sym, b: Sym, put, shift: int) -> None:
    """Shared rank-two rule.  ``shift`` is 0 for HV2 and 1 for FRAK2HAT."""
    t_name, e_name = ("T", "E") if shift == 0 else ("That", "Ehat")
    if a.name == t_name and b.name == t_name:
        return
    if a.name == e_name and b.name == t_name:
        _rank_two(b, a, lambda s, c: put(s, -S(c)), shift)
        return
    (m, n), (r, s) = a.idx, b.idx
    target = t_name if a.name == t_name else e_name
    k_lo, k_hi = ("K1", "K2") if a.name == t_name else ("K3", "K4")
    coef = n * r - m * s
    idx = (m + r, n + s - shift)
    if shift == 0 and idx == (0, 0):
        # the coefficient vanishes identically on the excluded index
        assert coef == 0, "structure constant on excluded index must vanish"
    elif coef:
        put(Sym(target, idx), coef)
    if m + r == 0:
        if shift == 0:
            if n + s == 0:
                put(Sym(k_lo), m)
                put(Sym(k_hi), n)
        else:
            if n + s + 1 == 0:
                put(Sym(k_lo), m)
            if n + s == 0:
                put(Sym(k_hi), n)


def bracket(a: LieElt, b: LieElt) -> LieElt:
    """Bilinear bracket ``[a, b]``."""
    if not isinstance(a, LieElt) or not isinstance(b, LieElt):
        raise TypeError("bracket expects LieElt operands")
    if a.algebra is not b.algebra:
        raise AlgebraMismatch(f"bracket of {a.algebra.value} with {b.algebra.value}")
    alg = a.algebra
    acc: dict[Sym, Scalar] = {}
    for sa, ca in a:
        if sa.central:
            continue
        for sb, cb in b:
            if sb.central:
                continue
            k = ca * cb
            for s, c in bracket_syms(alg, sa, sb):
                v = k * c
                acc[s] = acc[s] + v if s in acc else v
    return LieElt._raw(alg, acc)


def jacobi_defect(a: LieElt, b: LieElt, c: LieElt) -> LieElt:
    """``[a,[b,c]] + [b,[c,a]] + [c,[a,b]]``."""
    return bracket(a, bracket(b, c)) + bracket(b, bracket(c, a)) + bracket(c, bracket(a, b))


def iso_frak_to_hv(x: LieElt) -> LieElt:
    """Send ``Lbar(m) -> L(m-1)``, ``Ibar(m) -> I(m)``, central to central."""
    if x.algebra is not Algebra.FRAK1:
        raise AlgebraMismatch(f"iso_frak_to_hv expects frak1, got {x.algebra.value}")
    out = []
    for s, c in x:
        if s.name == "Lbar":
            out.append((Sym("L", (s.idx[0] - 1,)), c))
        elif s.name == "Ibar":
            out.append((Sym("I", s.idx), c))
        else:
            out.append((s, c))
    return LieElt(Algebra.HV1, out)


def sigma(x: LieElt) -> LieElt:
    """Anti-linear anti-involution of HV1."""
    if x.algebra is not Algebra.HV1:
        raise AlgebraMismatch(f"sigma is defined on hv1 only, got {x.algebra.value}")
    acc: dict[Sym, Scalar] = {}

    def put(s: Sym, c: Scalar) -> None:
        acc[s] = acc.get(s, Scalar(0)) + c

    for s, c in x:
        cc = c.conj()
        if s.name == "L":
            put(Sym("L", (-s.idx[0],)), cc)
        elif s.name == "I":
            put(Sym("I", (-s.idx[0],)), cc)
            if s.idx[0] == 0:
                put(Sym("C2"), -2 * cc)
        elif s.name == "C2":
            put(s, -cc)
        else:
            put(s, cc)
    return LieElt._raw(Algebra.HV1, acc)


def sigma_sym(s: Sym) -> tuple[tuple[Sym, Scalar], ...]:
    """sigma applied to a single basis symbol (coefficient one)."""
    return sigma(LieElt._raw(Algebra.HV1, {s: ONE}))._terms


def generators(algebra: Algebra, lo: int, hi: int) -> list[LieElt]:
    """All non-central basis elements with every index in ``[lo, hi]``."""
    out = []
    for name, arity in _ALPHABET[algebra].items():
        if arity == 0:
            continue
        if arity == 1:
            out.extend(LieElt.gen(algebra, name, n) for n in range(lo, hi + 1))
        else:
            for m in range(lo, hi + 1):
                for n in range(lo, hi + 1):
                    if algebra is Algebra.HV2 and (m, n) == (0, 0):
                        continue
                    out.append(LieElt.gen(algebra, name, m, n))
    return out


# ---------------------------------------------------------------------------
# text form: "2*L(1) - 1/2*C1 + (1+i)*I(0)", words like "I(-1)L(-2)"


class _Scanner:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def peek(self) -> str:
        self.skip()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def skip(self) -> None:
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def error(self, msg: str) -> ParseError:
        return ParseError(msg, column=self.pos + 1)

    def take_while(self, pred) -> str:
        start = self.pos
        while self.pos < len(self.text) and pred(self.text[self.pos]):
            self.pos += 1
        return self.text[start:self.pos]

    def unit_ahead(self) -> bool:
        """True when the next token is the imaginary unit ``i`` on its own."""
        self.skip()
        t = self.text
        p = self.pos
        return p < len(t) and t[p] == "i" and (p + 1 == len(t) or not (t[p + 1].isalnum() or t[p + 1] == "("))


def parse_linear_words(text: str) -> list[tuple[Scalar, list[tuple[str, tuple[int, ...], int]]]]:
    """Parse a linear combination of words of symbols.

    Returns ``(coefficient, [(name, idx, column), ...])`` per term.  A word
    is empty when a bare coefficient stands alone (e.g. ``"3"``).
    """
    sc = _Scanner(text)
    out = []
    if not sc.peek():
        raise sc.error("empty expression")
    while sc.peek():
        sign = 1
        while sc.peek() in ("+", "-"):
            if sc.text[sc.pos] == "-":
                sign = -sign
            sc.pos += 1
        coef: Scalar | None = None
        ch = sc.peek()
        if ch == "(":
            close = sc.text.find(")", sc.pos)
            if close < 0:
                raise sc.error("unclosed parenthesis")
            try:
                coef = Scalar.parse(sc.text[sc.pos + 1:close])
            except ValueError as exc:
                raise sc.error(str(exc)) from None
            sc.pos = close + 1
        elif ch.isdigit():
            num = sc.take_while(lambda c: c.isdigit() or c == "/")
            try:
                coef = S(Scalar.parse(num))
            except ValueError as exc:
                raise sc.error(str(exc)) from None
            if sc.peek() == "*":
                save = sc.pos
                sc.pos += 1
                if not sc.unit_ahead():
                    sc.pos = save
            if sc.unit_ahead():
                sc.pos += 1
                coef = coef * Scalar(0, 1)
        elif sc.unit_ahead():
            sc.pos += 1
            coef = Scalar(0, 1)
        if coef is not None and sc.peek() == "*":
            sc.pos += 1
        word = []
        while sc.peek().isalpha():
            col = sc.pos + 1
            name = sc.take_while(lambda c: c.isalnum() or c == "_")
            idx: tuple[int, ...] = ()
            if sc.pos < len(sc.text) and sc.text[sc.pos] == "(":
                close = sc.text.find(")", sc.pos)
                if close < 0:
                    raise sc.error("unclosed parenthesis")
                body = sc.text[sc.pos + 1:close]
                try:
                    idx = tuple(int(a) for a in body.split(",")) if body.strip() else ()
                except ValueError:
                    raise sc.error(f"bad index list {body!r}") from None
                sc.pos = close + 1
            word.append((name, idx, col))
            if sc.peek() == "*":
                sc.pos += 1
        if coef is None and not word:
            raise sc.error("expected a coefficient or a symbol")
        out.append((S(sign) * (coef if coef is not None else S(1)), word))
        if sc.peek() not in ("", "+", "-"):
            raise sc.error(f"unexpected character {sc.peek()!r}")
    return out


def parse_element(algebra: Algebra, text: str) -> LieElt:
    """Parse a linear combination such as ``"2*L(1) + 1/2*C1"``."""
    acc: list[tuple[Sym, Scalar]] = []
    for coef, word in parse_linear_words(text):
        if len(word) != 1:
            col = word[1][2] if len(word) > 1 else 1
            raise ParseError("each term of a Lie algebra element needs exactly one symbol", column=col)
        name, idx, col = word[0]
        try:
            acc.append((make_sym(algebra, name, *idx), coef))
        except SymbolError as exc:
            raise ParseError(str(exc), column=col) from None
    return LieElt(algebra, acc)
