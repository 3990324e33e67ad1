"""Finite-window calculus of two-variable formal distributions.

A generating series ``A(x) = sum_a A[a] x^a`` is represented by a
:class:`Series`, i.e. a rule producing the coefficient of ``x^a``.  Products
of a series in ``x2`` with a delta-type distribution are exact coefficient
by coefficient because, for fixed ``p``, each delta table has a single
nonzero ``x2`` exponent.  Bracket tables of two series are built from
:func:`twisthv.liealg.bracket`.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from math import comb
from typing import Callable, Iterator, NamedTuple, Union

from .errors import Inconclusive, ParseError
from .liealg import Algebra, LieElt, Sym, bracket
from .scalar import S, Scalar

Coef = Union[LieElt, Scalar]


@dataclass(frozen=True)
class Window:
    pmin: int
    pmax: int
    qmin: int
    qmax: int

    @classmethod
    def square(cls, w: int) -> "Window":
        return cls(-w, w, -w, w)

    def contains(self, p: int, q: int) -> bool:
        return self.pmin <= p <= self.pmax and self.qmin <= q <= self.qmax

    def cells(self) -> Iterator[tuple[int, int]]:
        for p in range(self.pmin, self.pmax + 1):
            for q in range(self.qmin, self.qmax + 1):
                yield p, q

    def empty(self) -> bool:
        return self.pmin > self.pmax or self.qmin > self.qmax

    def interior(self, k: int) -> "Window":
        """Sub-window where multiplication by (x1-x2)^k only reads stored cells."""
        return Window(self.pmin + k, self.pmax, self.qmin + k, self.qmax)


class BiLaurentWindow:
    """Sparse table of coefficients of ``x1^p x2^q`` restricted to a window."""

    def __init__(self, window: Window, entries: dict[tuple[int, int], Coef] | None = None):
        self.window = window
        self.entries: dict[tuple[int, int], Coef] = {}
        for (p, q), v in (entries or {}).items():
            if not window.contains(p, q):
                raise ValueError(f"cell {(p, q)} outside window")
            if v:
                self.entries[(p, q)] = v

    def __getitem__(self, pq: tuple[int, int]) -> Coef | int:
        return self.entries.get(pq, 0)

    def nonzero(self) -> list[tuple[int, int]]:
        return sorted(self.entries)

    def __sub__(self, other: "BiLaurentWindow") -> "BiLaurentWindow":
        out = dict(self.entries)
        for pq, v in other.entries.items():
            out[pq] = out[pq] - v if pq in out else -v
        return BiLaurentWindow(self.window, {pq: v for pq, v in out.items() if v})


# ---------------------------------------------------------------------------
# delta distributions


class Delta(NamedTuple):
    """``(d/dx2)^order x1^{-1} delta(x2/x1)`` or, if weighted, ``(x2 d/dx2)^order delta(x2/x1)``."""

    order: int
    weighted: bool

    def at(self, p: int) -> tuple[int, Scalar]:
        """The unique ``x2`` exponent paired with ``x1^p`` and its coefficient."""
        if self.weighted:
            n = -p
            return n, S(n ** self.order)
        n = -p - 1
        val = 1
        for j in range(self.order):
            val *= n - j
        return n - self.order, S(val)


def delta_derivative_window(order: int, weighted: bool, window: Window) -> BiLaurentWindow:
    if order < 0:
        raise ValueError("order must be non-negative")
    d = Delta(order, weighted)
    entries = {}
    for p in range(window.pmin, window.pmax + 1):
        q, v = d.at(p)
        if window.qmin <= q <= window.qmax and v:
            entries[(p, q)] = v
    return BiLaurentWindow(window, entries)


# ---------------------------------------------------------------------------
# generating series


class Series:
    """A formal series ``sum_a coeff(a) x^a`` with LieElt coefficients."""

    def __init__(self, algebra: Algebra, rule: Callable[[int], LieElt], label: str = ""):
        self.algebra = algebra
        self.rule = rule
        self.label = label

    def coeff(self, a: int) -> LieElt:
        return self.rule(a)

    def derivative(self) -> "Series":
        """d/dx."""
        return Series(self.algebra, lambda a: self.rule(a + 1).scale(a + 1), f"d({self.label})")

    def euler(self) -> "Series":
        """x d/dx."""
        return Series(self.algebra, lambda a: self.rule(a).scale(a), f"xd({self.label})")


def _mode_series(algebra: Algebra, name: str, w: int, outer: tuple[int, ...] = (),
                 const: LieElt | None = None) -> Series:
    """Series with coefficient ``name(*outer, -a-w)`` at ``x^a`` (``const`` added at ``x^0``)."""

    def rule(a: int) -> LieElt:
        idx = outer + (-a - w,)
        if algebra is Algebra.HV2 and idx == (0, 0):
            out = LieElt.zero(algebra)
        else:
            out = LieElt.gen(algebra, name, *idx)
        if const is not None and a == 0:
            out = out + const
        return out

    label = f"{name}{list(outer) if outer else ''}"
    return Series(algebra, rule, label)


def series(name: str, m: int | None = None) -> Series:
    """Named generating series.

    ``L, I``: mode conventions x^{-n-2}, x^{-n-1} of HV1.
    ``Ltilde, Itilde``: x^{-n}.  ``Lhat, Ihat``: with the central shifts.
    ``Lbar, Ibar``: FRAK1, x^{-n-1}.
    ``T, E``: HV2 series in x^{-n} indexed by ``m``.
    ``That, Ehat``: FRAK2HAT series in x^{-n-1} indexed by ``m``.
    """
    H, F = Algebra.HV1, Algebra.FRAK1
    if name == "L":
        return _mode_series(H, "L", 2)
    if name == "I":
        return _mode_series(H, "I", 1)
    if name == "Ltilde":
        return _mode_series(H, "L", 0)
    if name == "Itilde":
        return _mode_series(H, "I", 0)
    if name == "Lhat":
        return _mode_series(H, "L", 0, const=LieElt(H, {Sym("C1"): S(-1) / 24}))
    if name == "Ihat":
        return _mode_series(H, "I", 0, const=LieElt(H, {Sym("C2"): -1}))
    if name == "Lbar":
        return _mode_series(F, "Lbar", 1)
    if name == "Ibar":
        return _mode_series(F, "Ibar", 1)
    if m is None:
        raise ValueError(f"series {name} needs an outer index")
    if name in ("T", "E"):
        return _mode_series(Algebra.HV2, name, 0, (m,))
    if name in ("That", "Ehat"):
        return _mode_series(Algebra.FRAK2HAT, name, 1, (m,))
    raise ValueError(f"unknown series {name}")


# ---------------------------------------------------------------------------
# identities


class RhsTerm(NamedTuple):
    """``series(x2) * delta`` when ``series`` is set, else ``central * delta``."""

    delta: Delta
    coef: Scalar
    series: Series | None = None
    central: LieElt | None = None


class IdentityId(NamedTuple):
    name: str
    m: int | None = None
    r: int | None = None

    def __str__(self) -> str:
        if self.m is None:
            return self.name
        return f"{self.name}({self.m},{self.r})"

    @classmethod
    def parse(cls, text: str, m: int | None = None, r: int | None = None) -> "IdentityId":
        t = text.strip().upper()
        mt = re.fullmatch(r"(EQ\d\.\d+)(?:\((-?\d+),(-?\d+)\))?", t.replace(" ", ""))
        if mt is None:
            raise ParseError(f"unknown identity {text!r}")
        name = mt.group(1)
        if mt.group(2) is not None:
            m, r = int(mt.group(2)), int(mt.group(3))
        if name not in IDENTITY_NAMES:
            raise ParseError(f"unknown identity {text!r}")
        if name in RANK_TWO and (m is None or r is None):
            raise ParseError(f"{name} needs outer indices m and r")
        if name not in RANK_TWO:
            m = r = None
        return cls(name, m, r)


RANK_ONE = ("EQ2.7", "EQ2.8", "EQ2.9", "EQ3.2", "EQ3.3", "EQ3.4", "EQ3.5", "EQ3.6", "EQ3.7",
            "EQ3.11", "EQ3.12", "EQ3.13")
RANK_TWO = ("EQ4.2", "EQ4.3", "EQ4.5", "EQ4.6")
IDENTITY_NAMES = RANK_ONE + RANK_TWO


def _c(alg: Algebra, name: str) -> LieElt:
    return LieElt(alg, {Sym(name): 1})


def identity_definition(ident: IdentityId) -> tuple[Series, Series, list[RhsTerm]]:
    """Left factors ``A, B`` of ``[A(x1), B(x2)]`` and the right-hand side terms."""
    H, F = Algebra.HV1, Algebra.FRAK1
    one = S(1)
    D = lambda k: Delta(k, False)  # noqa: E731
    W = lambda k: Delta(k, True)  # noqa: E731
    name = ident.name

    if name in ("EQ2.7", "EQ2.8", "EQ2.9", "EQ3.11", "EQ3.12", "EQ3.13"):
        alg, lname, iname = (H, "L", "I") if name.startswith("EQ2") else (F, "Lbar", "Ibar")
        Ls, Is = series(lname), series(iname)
        if name in ("EQ2.7", "EQ3.11"):
            return Ls, Ls, [RhsTerm(D(0), one, Ls.derivative()), RhsTerm(D(1), S(2), Ls),
                             RhsTerm(D(3), S(1) / 12, central=_c(alg, "C1"))]
        if name in ("EQ2.8", "EQ3.12"):
            return Ls, Is, [RhsTerm(D(0), one, Is.derivative()), RhsTerm(D(1), one, Is),
                            RhsTerm(D(2), S(-1), central=_c(alg, "C2"))]
        return Is, Is, [RhsTerm(D(1), one, central=_c(alg, "C3"))]

    if name in ("EQ3.2", "EQ3.3", "EQ3.4", "EQ3.5", "EQ3.6", "EQ3.7"):
        hat = name in ("EQ3.5", "EQ3.6", "EQ3.7")
        Ls = series("Lhat" if hat else "Ltilde")
        Is = series("Ihat" if hat else "Itilde")
        c1, c2, c3 = _c(H, "C1"), _c(H, "C2"), _c(H, "C3")
        if name in ("EQ3.2", "EQ3.5"):
            terms = [RhsTerm(W(0), one, Ls.euler()), RhsTerm(W(1), S(2), Ls),
                     RhsTerm(W(3), S(1) / 12, central=c1)]
            if not hat:
                terms.append(RhsTerm(W(1), S(-1) / 12, central=c1))
            return Ls, Ls, terms
        if name in ("EQ3.3", "EQ3.6"):
            terms = [RhsTerm(W(0), one, Is.euler()), RhsTerm(W(1), one, Is),
                     RhsTerm(W(2), S(-1), central=c2)]
            if not hat:
                terms.append(RhsTerm(W(1), S(-1), central=c2))
            return Ls, Is, terms
        return Is, Is, [RhsTerm(W(1), one, central=c3)]

    m, r = ident.m, ident.r
    if name in ("EQ4.2", "EQ4.3"):
        alg = Algebra.HV2
        first = "T" if name == "EQ4.2" else "E"
        A, B, target = series(first, m), series("E", r), series(first, m + r)
        k_lo, k_hi = ("K1", "K2") if first == "T" else ("K3", "K4")
        terms = [RhsTerm(W(1), S(m + r), target), RhsTerm(W(0), S(m), target.euler())]
        if m + r == 0:
            terms += [RhsTerm(W(0), S(m), central=_c(alg, k_lo)), RhsTerm(W(1), one, central=_c(alg, k_hi))]
        return A, B, terms
    if name in ("EQ4.5", "EQ4.6"):
        alg = Algebra.FRAK2HAT
        first = "That" if name == "EQ4.5" else "Ehat"
        A, B, target = series(first, m), series("Ehat", r), series(first, m + r)
        k_lo, k_hi = ("K1", "K2") if first == "That" else ("K3", "K4")
        terms = [RhsTerm(D(1), S(m + r), target), RhsTerm(D(0), S(m), target.derivative())]
        if m + r == 0:
            terms += [RhsTerm(D(0), S(m), central=_c(alg, k_lo)), RhsTerm(D(1), one, central=_c(alg, k_hi))]
        return A, B, terms
    raise ParseError(f"unknown identity {ident}")


def commutator_table(A: Series, B: Series, window: Window) -> BiLaurentWindow:
    """Coefficients of ``[A(x1), B(x2)]``."""
    entries = {}
    for p in range(window.pmin, window.pmax + 1):
        a = A.coeff(p)
        for q in range(window.qmin, window.qmax + 1):
            v = bracket(a, B.coeff(q))
            if v:
                entries[(p, q)] = v
    return BiLaurentWindow(window, entries)


def rhs_table(algebra: Algebra, terms: list[RhsTerm], window: Window) -> BiLaurentWindow:
    acc: dict[tuple[int, int], LieElt] = {}
    for p in range(window.pmin, window.pmax + 1):
        for t in terms:
            q0, dv = t.delta.at(p)
            k = t.coef * dv
            if not k:
                continue
            if t.series is None:
                if window.qmin <= q0 <= window.qmax:
                    acc[(p, q0)] = acc.get((p, q0), LieElt.zero(algebra)) + t.central.scale(k)
                continue
            for q in range(window.qmin, window.qmax + 1):
                v = t.series.coeff(q - q0)
                if v:
                    acc[(p, q)] = acc.get((p, q), LieElt.zero(algebra)) + v.scale(k)
    return BiLaurentWindow(window, {pq: v for pq, v in acc.items() if v})


def expand_identity_sides(ident: IdentityId, window: Window) -> tuple[BiLaurentWindow, BiLaurentWindow]:
    A, B, terms = identity_definition(ident)
    return commutator_table(A, B, window), rhs_table(A.algebra, terms, window)


def verify_identity(ident: IdentityId, window: Window) -> list[tuple[int, int, LieElt]]:
    """Cells where the two sides differ; empty on success."""
    lhs, rhs = expand_identity_sides(ident, window)
    diff = lhs - rhs
    return [(p, q, diff.entries[(p, q)]) for p, q in diff.nonzero()]


# ---------------------------------------------------------------------------
# locality


def times_x1_minus_x2(table: BiLaurentWindow, k: int) -> BiLaurentWindow:
    """``(x1 - x2)^k * table`` on the interior where every needed cell is stored."""
    inner = table.window.interior(k)
    out = {}
    if inner.empty():
        return BiLaurentWindow(inner, {})
    for p, q in inner.cells():
        acc = None
        for j in range(k + 1):
            v = table[(p - (k - j), q - j)]
            if not v:
                continue
            term = v * ((-1) ** j * comb(k, j))
            acc = term if acc is None else acc + term
        if acc:
            out[(p, q)] = acc
    return BiLaurentWindow(inner, out)


FIELD_PAIRS = ("L,L", "L,I", "I,I", "Lhat,Lhat", "Lhat,Ihat", "Ihat,Ihat", "T,E", "E,E")


def pair_series(pair: str, m: int = 1, r: int = -1) -> tuple[Series, Series]:
    key = pair.replace(" ", "")
    if key not in FIELD_PAIRS:
        raise ParseError(f"unknown field pair {pair!r}; expected one of {list(FIELD_PAIRS)}")
    a, b = key.split(",")
    if a in ("T", "E"):
        return series(a, m), series(b, r)
    return series(a), series(b)


def _antidiagonal_cells(window: Window, s: int) -> int:
    lo = max(window.pmin, s - window.qmax)
    hi = min(window.pmax, s - window.qmin)
    return max(0, hi - lo + 1)


def _sees_delta_band(window: Window) -> bool:
    return _antidiagonal_cells(window, -1) >= 1 and _antidiagonal_cells(window, -2) >= 2


def locality_order(pair: str, window: Window, m: int = 1, r: int = -1, kmax: int = 12) -> int:
    """Least ``k`` with ``(x1-x2)^k [A(x1), B(x2)]`` vanishing on the safe interior.

    A value is only certified when the interior for ``k`` is at least
    ``(k+1) x (k+1)``, the commutator is not identically zero on the
    window, and the interior meets the anti-diagonals ``p+q = -1`` and
    ``p+q = -2`` in at least one and two cells.  A leftover
    ``c * delta`` or ``c * d/dx2 delta`` term (one or two orders short) lives
    on exactly those lines, so a window missing them could report vanishing
    too early.  Otherwise :class:`Inconclusive` is raised.
    """
    A, B = pair_series(pair, m, r)
    table = commutator_table(A, B, window)
    if not table.entries:
        raise Inconclusive(f"commutator of {pair} vanishes on the whole window; nothing to certify")
    for k in range(kmax + 1):
        inner = window.interior(k)
        if inner.pmax - inner.pmin < k or inner.qmax - inner.qmin < k or not _sees_delta_band(inner):
            raise Inconclusive(f"window too small to certify locality order of {pair} (reached k={k})")
        if not times_x1_minus_x2(table, k).entries:
            return k
    raise Inconclusive(f"no vanishing up to k={kmax}")
