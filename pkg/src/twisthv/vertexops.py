"""Fields on truncated modules, normal-ordered products and e-products.

Index conventions
-----------------
A field ``a(x)`` is stored through its *residue modes* ``a_(j)``, the
coefficient of ``x^{-j-1}``.  A field of weight ``wt`` sends degree ``d`` to
degree ``d + wt - j - 1`` under ``a_(j)``.  The user-facing index of a field
with series convention ``w`` (coefficient of ``x^{-n-w}`` is mode ``n``) is
``n = j + 1 - w``; so ``L(x)`` has ``w = 2`` and ``L_n = a_(n+1)``, while the
shifted fields ``Lhat(x), Ihat(x)`` and the rank-two series ``T_m(x)``,
``E_m(x)`` have ``w = 0`` and weight 0.

Truncation
----------
Every vector that a computation produces is checked against
``TruncatedModule.max_degree``; leaving that range raises
:class:`~twisthv.errors.UntrustedWindow`.  Because every individual mode is
computed exactly by straightening, the only source of error would be an
implicit truncation, and that is exactly what the check rules out.  The
trusted set of a field is therefore the set of ``(mode, input degree)``
pairs whose evaluation never leaves the range; a composite field is trusted
exactly where all the parent evaluations it needs are trusted.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import factorial
from typing import Callable, Iterable, Sequence

from .errors import LocalityError, ModuleError, UntrustedWindow, ZOrderError
from .liealg import Algebra, Sym
from .pbwmod import (
    Monomial, ModuleKind, ModuleSpec, PBWVector, _act, apply_word, enumerate_basis, format_monomial,
)
from .scalar import Number, S, Scalar

DEFAULT_DEGREE = 8
DEFAULT_MODE_WINDOW = (-6, 6)
DEFAULT_Z_ORDER = 10


def gbinom(n: int, i: int) -> int:
    """Generalized binomial coefficient ``n choose i`` for any integer ``n``."""
    if i < 0:
        return 0
    num = 1
    for t in range(i):
        num *= n - t
    return num // factorial(i)


# ---------------------------------------------------------------------------
# modules


class TruncatedModule:
    """A module together with the degree bound inside which results are trusted."""

    def __init__(self, spec: ModuleSpec, max_degree: int = DEFAULT_DEGREE):
        self.spec = spec
        self.max_degree = max_degree
        self._fields: dict = {}

    def basis(self, degree: int) -> tuple[Monomial, ...]:
        if degree < 0 or degree > self.max_degree:
            return ()
        return enumerate_basis(self.spec, degree)

    def basis_up_to(self, degree: int | None = None) -> list[Monomial]:
        top = self.max_degree if degree is None else min(degree, self.max_degree)
        return [m for d in range(top + 1) for m in self.basis(d)]

    def check(self, mono: Monomial) -> None:
        if self.spec.degree(mono) > self.max_degree:
            raise UntrustedWindow(
                f"intermediate vector of degree {self.spec.degree(mono)} exceeds truncation {self.max_degree}"
            )

    def vector(self, terms: dict[Monomial, Scalar]) -> PBWVector:
        return PBWVector._raw(self.spec, terms)

    def __repr__(self) -> str:
        return f"TruncatedModule({self.spec.kind.value}, max_degree={self.max_degree})"


@lru_cache(maxsize=64)
def truncated_module(spec: ModuleSpec, max_degree: int = DEFAULT_DEGREE) -> TruncatedModule:
    """Shared instance so that field caches are reused across calls."""
    return TruncatedModule(spec, max_degree)


# ---------------------------------------------------------------------------
# fields

Rule = Callable[[int, Monomial], dict]


class TruncatedField:
    """A field on a truncated module, evaluated lazily and cached per basis monomial.

    ``rule(j, mono)`` returns the residue mode ``a_(j)`` applied to the basis
    vector ``mono`` as a ``{monomial: coefficient}`` dict.  ``wt`` is ``None``
    for inhomogeneous sums.
    """

    def __init__(self, module: TruncatedModule, wt: int | None, w: int, rule: Rule, label: str = "",
                 mode_window: tuple[int, int] = DEFAULT_MODE_WINDOW):
        self.module = module
        self.wt = wt
        self.weight_shift = w
        self.rule = rule
        self.label = label
        self.mode_window = mode_window
        self._cache: dict[tuple[int, Monomial], dict] = {}

    # residue-mode evaluation -------------------------------------------

    def _on_mono(self, j: int, mono: Monomial) -> dict:
        key = (j, mono)
        hit = self._cache.get(key)
        if hit is not None:
            return hit
        if self.wt is not None:
            target = self.module.spec.degree(mono) + self.wt - j - 1
            if target < 0:
                self._cache[key] = {}
                return {}
            if target > self.module.max_degree:
                raise UntrustedWindow(f"{self.label}: mode ({j}) leaves degree range")
        out = self.rule(j, mono)
        for m in out:
            self.module.check(m)
        self._cache[key] = out
        return out

    def res(self, j: int, v: PBWVector | dict) -> dict:
        """Residue mode ``a_(j)`` on a vector given as PBWVector or raw dict."""
        terms = v.terms if isinstance(v, PBWVector) else v
        acc: dict[Monomial, Scalar] = {}
        for mono, c in terms.items():
            for m2, c2 in self._on_mono(j, mono).items():
                val = c * c2
                if m2 in acc:
                    acc[m2] = acc[m2] + val
                else:
                    acc[m2] = val
        return {m: c for m, c in acc.items() if c}

    def va(self, j: int, v: PBWVector) -> PBWVector:
        return PBWVector._raw(self.module.spec, self.res(j, v))

    def mode(self, n: int, v: PBWVector) -> PBWVector:
        """Mode ``n`` in the field's own series convention."""
        return self.va(n + self.weight_shift - 1, v)

    # derived fields ---------------------------------------------------------

    def scale(self, k: Number) -> "TruncatedField":
        k = S(k)
        return TruncatedField(self.module, self.wt, self.weight_shift,
                              lambda j, m: {a: k * c for a, c in self._on_mono(j, m).items() if k * c},
                              f"{k}*{self.label}", self.mode_window)

    def __add__(self, other: "TruncatedField") -> "TruncatedField":
        if other.module is not self.module:
            raise ModuleError("fields on different modules")
        if other.weight_shift != self.weight_shift:
            raise ModuleError("cannot add fields with different series conventions")
        wt = self.wt if self.wt == other.wt else None

        def rule(j: int, m: Monomial) -> dict:
            return _add_dicts(_safe(self, j, m), _safe(other, j, m))

        return TruncatedField(self.module, wt, self.weight_shift, rule, f"{self.label}+{other.label}",
                              self.mode_window)

    def euler(self) -> "TruncatedField":
        """``x d/dx`` applied to the series: mode ``n`` picks up ``-n-w``."""
        w = self.weight_shift

        def rule(j: int, m: Monomial) -> dict:
            n = j + 1 - w
            k = -n - w
            return {a: c * k for a, c in self._on_mono(j, m).items()} if k else {}

        return TruncatedField(self.module, self.wt, w, rule, f"xd({self.label})", self.mode_window)

    # tables -------------------------------------------------------------------

    def trusted(self, n: int, degree: int) -> bool:
        try:
            for mono in self.module.basis(degree):
                self._on_mono(n + self.weight_shift - 1, mono)
        except UntrustedWindow:
            return False
        return True

    def table(self, modes: Iterable[int] | None = None, max_input_degree: int | None = None):
        """Finite mode table ``{n: {monomial: vector}}`` over trusted entries only."""
        lo, hi = self.mode_window
        modes = range(lo, hi + 1) if modes is None else modes
        out: dict[int, dict[Monomial, PBWVector]] = {}
        for n in modes:
            row = {}
            for mono in self.module.basis_up_to(max_input_degree):
                try:
                    row[mono] = self.va(n + self.weight_shift - 1, self.module.vector({mono: S(1)}))
                except UntrustedWindow:
                    continue
            out[n] = row
        return out

    def __repr__(self) -> str:
        return f"TruncatedField({self.label}, wt={self.wt}, w={self.weight_shift})"


def _add_dicts(a: dict, b: dict, kb: Scalar | int = 1) -> dict:
    out = dict(a)
    for m, c in b.items():
        v = c * kb if kb != 1 else c
        out[m] = out[m] + v if m in out else v
    return {m: c for m, c in out.items() if c}


def _safe(f: TruncatedField, j: int, m: Monomial) -> dict:
    return f._on_mono(j, m)


# ---------------------------------------------------------------------------
# generator fields

_FIELD_NAMES = {
    Algebra.HV1: ("L", "I", "Lhat", "Ihat", "Ltilde", "Itilde"),
    Algebra.FRAK1: ("Lbar", "Ibar"),
    Algebra.FRAK2HAT: ("T", "E"),
    Algebra.HV2: ("T", "E"),
}


def _sym_rule(spec: ModuleSpec, sym_of: Callable[[int], Sym | None], const: Callable[[int], Scalar] | None = None):
    def rule(j: int, mono: Monomial) -> dict:
        s = sym_of(j)
        out = {} if s is None else dict(_act(spec, s, mono))
        if const is not None:
            k = const(j)
            if k:
                out[mono] = out[mono] + k if mono in out else k
        return {m: c for m, c in out.items() if c}

    return rule


def generator_field(which: str, W: TruncatedModule, m: int | None = None,
                    mode_window: tuple[int, int] = DEFAULT_MODE_WINDOW) -> TruncatedField:
    """Generating field of the module's algebra.

    ``L, I`` (weights 2, 1), ``Ltilde, Itilde`` and the shifted ``Lhat, Ihat``
    (weight 0, series in ``x^{-n}``) on HV1 modules; ``Lbar, Ibar`` on the
    FRAK1 vacuum module; ``T, E`` with outer index ``m`` on the rank-two
    modules, where the FRAK2HAT vacuum uses the ``x^{-n-1}`` series and the
    induced HV2 module the ``x^{-n}`` series.
    """
    key = ("gen", which, m, mode_window)
    hit = W._fields.get(key)
    if hit is not None:
        return hit
    spec = W.spec
    alg = spec.algebra
    if which not in _FIELD_NAMES[alg]:
        raise ModuleError(f"field {which} is not available on a {spec.kind.value} module")
    if which in ("T", "E") and m is None:
        raise ModuleError(f"field {which} needs an outer index m")
    l1, l2 = spec.levels[0], spec.levels[1]

    if which == "L":
        f = TruncatedField(W, 2, 2, _sym_rule(spec, lambda j: Sym("L", (j - 1,))), "L", mode_window)
    elif which == "I":
        f = TruncatedField(W, 1, 1, _sym_rule(spec, lambda j: Sym("I", (j,))), "I", mode_window)
    elif which in ("Ltilde", "Lhat"):
        shift = (lambda j: -l1 / 24 if j == -1 else S(0)) if which == "Lhat" else None
        f = TruncatedField(W, 0, 0, _sym_rule(spec, lambda j: Sym("L", (j + 1,)), shift), which, mode_window)
    elif which in ("Itilde", "Ihat"):
        shift = (lambda j: -l2 if j == -1 else S(0)) if which == "Ihat" else None
        f = TruncatedField(W, 0, 0, _sym_rule(spec, lambda j: Sym("I", (j + 1,)), shift), which, mode_window)
    elif which == "Lbar":
        f = TruncatedField(W, 2, 1, _sym_rule(spec, lambda j: Sym("Lbar", (j,))), "Lbar", mode_window)
    elif which == "Ibar":
        f = TruncatedField(W, 1, 1, _sym_rule(spec, lambda j: Sym("Ibar", (j,))), "Ibar", mode_window)
    elif alg is Algebra.FRAK2HAT:
        name = "That" if which == "T" else "Ehat"
        f = TruncatedField(W, 1, 1, _sym_rule(spec, lambda j: Sym(name, (m, j))), f"{which}^{m}", mode_window)
    else:
        def sym_of(j: int, which=which) -> Sym | None:
            idx = (m, j + 1)
            return None if idx == (0, 0) else Sym(which, idx)

        f = TruncatedField(W, 0, 0, _sym_rule(spec, sym_of), f"{which}_{m}", mode_window)
    W._fields[key] = f
    return f


def identity_field(W: TruncatedModule, coef: Number = 1, w: int = 0) -> TruncatedField:
    """``coef`` times the identity operator viewed as a constant series."""
    k = S(coef)
    j0 = -w  # the constant term is x^0 = x^{-j-1} with j = -1; in convention w it is mode 1-w

    def rule(j: int, mono: Monomial) -> dict:
        return {mono: k} if j == -1 and k else {}

    del j0
    return TruncatedField(W, 0, w, rule, f"{k}*1", DEFAULT_MODE_WINDOW)


# ---------------------------------------------------------------------------
# n-th products


def field_nth_product(a: TruncatedField, b: TruncatedField, n: int, k: int | None = None) -> TruncatedField:
    """The field ``a(x)_n b(x)``.

    Residue modes follow the binomial expansion of
    ``Res_{x1} [(x1-x)^n a(x1) b(x) - (-x+x1)^n b(x) a(x1)]``:
    ``(a_n b)_(m) = sum_i (-1)^i C(n,i) [a_(n-i) b_(m+i) - (-1)^n b_(n+m-i) a_(i)]``.
    Both sums terminate on every vector because modes of high index kill
    vectors of bounded degree.  ``k`` is the declared locality order; a
    product with ``n >= k`` must vanish and raises :class:`LocalityError`
    otherwise.
    """
    if a.module is not b.module:
        raise ModuleError("fields on different modules")
    if a.wt is None or b.wt is None:
        raise ModuleError("n-th products need homogeneous fields")
    W = a.module
    spec = W.spec
    sign_n = -1 if n % 2 else 1

    def rule(m: int, mono: Monomial) -> dict:
        d = spec.degree(mono)
        acc: dict = {}
        # a_(n-i) b_(m+i) w ; b_(m+i) w vanishes once d + wt_b - m - i - 1 < 0
        top1 = d + b.wt - m - 1
        for i in range(0, max(top1, -1) + 1):
            c = gbinom(n, i)
            if not c:
                continue
            inner = b.res(m + i, {mono: S(1)})
            if inner:
                acc = _add_dicts(acc, a.res(n - i, inner), S((-1) ** i * c))
        # b_(n+m-i) a_(i) w ; a_(i) w vanishes once i > d + wt_a - 1
        top2 = d + a.wt - 1
        for i in range(0, max(top2, -1) + 1):
            c = gbinom(n, i)
            if not c:
                continue
            inner = a.res(i, {mono: S(1)})
            if inner:
                acc = _add_dicts(acc, b.res(n + m - i, inner), S(-sign_n * (-1) ** i * c))
        if k is not None and n >= k and acc:
            raise LocalityError(f"{a.label}_{n}{b.label} is nonzero although the declared locality order is {k}")
        return acc

    return TruncatedField(W, a.wt + b.wt - n - 1, a.wt + b.wt - n - 1, rule, f"({a.label})_{n}({b.label})",
                          a.mode_window)


def _state_key(state: PBWVector) -> tuple:
    return tuple(sorted(((m, c.re, c.im) for m, c in state.terms.items()), key=repr))


def _generator_of(s: Sym) -> tuple[str, int]:
    """Generator field name and residue index for a creation symbol of the vacuum algebra."""
    if s.name == "L":
        return "L", s.idx[0] + 1
    return "I", s.idx[0]


def vertex_field(state: PBWVector, W: TruncatedModule) -> TruncatedField:
    """``Y_W(state, x)`` built by iterated n-th products of generator fields."""
    if state.spec.kind is not ModuleKind.VACUUM_HV1:
        raise ModuleError("states must live in the vacuum module of hv1")
    if W.spec.algebra is not Algebra.HV1 or W.spec.levels != state.spec.levels:
        raise ModuleError("module must be an hv1 module at the same central levels as the state")
    key = ("state", _state_key(state))
    hit = W._fields.get(key)
    if hit is not None:
        return hit
    total: TruncatedField | None = None
    by_weight: dict[int, TruncatedField] = {}
    for mono, c in state.sorted_terms():
        f = _monomial_field(mono, W).scale(c) if c != 1 else _monomial_field(mono, W)
        wt = state.spec.degree(mono)
        by_weight[wt] = f if wt not in by_weight else by_weight[wt] + f
    for wt in sorted(by_weight):
        f = by_weight[wt]
        f = TruncatedField(W, wt, wt, f.rule, f.label, f.mode_window)
        total = f if total is None else _sum_any(total, f)
    if total is None:
        total = TruncatedField(W, 0, 0, lambda j, m: {}, "0")
    W._fields[key] = total
    return total


def _sum_any(f: TruncatedField, g: TruncatedField) -> TruncatedField:
    def rule(j: int, m: Monomial) -> dict:
        return _add_dicts(f._on_mono(j, m), g._on_mono(j, m))

    return TruncatedField(f.module, None, 0, rule, f"{f.label}+{g.label}", f.mode_window)


def _monomial_field(mono: Monomial, W: TruncatedModule) -> TruncatedField:
    key = ("mono", mono)
    hit = W._fields.get(key)
    if hit is not None:
        return hit
    if not mono:
        f = identity_field(W, 1, w=0)
    elif len(mono) == 1 and mono[0] in (Sym("L", (-2,)), Sym("I", (-1,))):
        f = generator_field(mono[0].name, W)
    else:
        name, j = _generator_of(mono[0])
        f = field_nth_product(generator_field(name, W), _monomial_field(mono[1:], W), j)
    f = TruncatedField(W, f.wt, f.wt, f.rule, format_monomial(mono), f.mode_window)
    W._fields[key] = f
    return f


def mode_action(state: PBWVector, n: int, w: PBWVector, W: TruncatedModule | None = None) -> PBWVector:
    """Residue mode ``state_(n)`` of ``Y_W(state, x)`` applied to ``w``."""
    if W is None:
        W = truncated_module(w.spec, max(DEFAULT_DEGREE, w.max_degree() + state.max_degree() + abs(n) + 2))
    if w.spec != W.spec:
        raise ModuleError("vector does not belong to the module")
    return vertex_field(state, W).va(n, w)


# ---------------------------------------------------------------------------
# direct word expansion (independent path for u_(j) on HV1 modules)

_WEIGHT = {"L": 2, "I": 1}


def _gen_sym(name: str, j: int) -> Sym:
    return Sym("L", (j - 1,)) if name == "L" else Sym("I", (j,))


@lru_cache(maxsize=None)
def mode_words(mono: Monomial, j: int, degree: int) -> tuple[tuple[Fraction, tuple[Sym, ...]], ...]:
    """Expand ``u_(j)`` for ``u = mono.1`` into words of Lie algebra modes.

    The expansion is valid on homogeneous inputs of the given degree; the
    result is a tuple of ``(coefficient, word)`` pairs whose words are
    applied with :func:`twisthv.pbwmod.apply_word`.
    """
    if not mono:
        return ((Fraction(1), ()),) if j == -1 else ()
    wt_rest = sum(-s.idx[0] for s in mono[1:])
    name, p = _generator_of(mono[0])
    wt_g = _WEIGHT[name]
    acc: dict[tuple[Sym, ...], Fraction] = {}

    def add(c: Fraction, word: tuple[Sym, ...]) -> None:
        acc[word] = acc.get(word, Fraction(0)) + c

    rest = mono[1:]
    sign_p = -1 if p % 2 else 1
    top1 = degree + wt_rest - j - 1
    for i in range(0, max(top1, -1) + 1):
        c = gbinom(p, i)
        if not c:
            continue
        for c2, word in mode_words(rest, j + i, degree):
            add(Fraction((-1) ** i * c) * c2, (_gen_sym(name, p - i),) + word)
    top2 = degree + wt_g - 1
    for i in range(0, max(top2, -1) + 1):
        c = gbinom(p, i)
        if not c:
            continue
        mid = degree + wt_g - i - 1
        for c2, word in mode_words(rest, p + j - i, mid):
            add(Fraction(-sign_p * (-1) ** i * c) * c2, word + (_gen_sym(name, i),))
    return tuple((c, w) for w, c in sorted(acc.items(), key=lambda t: repr(t[0])) if c)


def mode_action_words(state: PBWVector, j: int, w: PBWVector) -> PBWVector:
    """``state_(j) w`` through :func:`mode_words` and plain straightening."""
    out = PBWVector.zero(w.spec)
    for d in sorted(w.degrees()):
        part = w.component(d)
        for mono, c in state.terms.items():
            for cw, word in mode_words(mono, j, d):
                out = out + apply_word(word, part).scale(c * cw)
    return out


# ---------------------------------------------------------------------------
# Borcherds commutator formula


def borcherds_defect(u: PBWVector, v: PBWVector, W: TruncatedModule, window: tuple[int, int] = (-3, 3),
                     vectors: Sequence[Monomial] | None = None) -> dict:
    """``[u_(m), v_(n)] w - sum_i C(m,i) (u_(i) v)_(m+n-i) w`` over a window.

    Returns ``{"defects": [...], "checked": int, "skipped": int}``; entries
    whose evaluation would leave the truncation range are skipped and counted.
    """
    lo, hi = window
    V = truncated_module(u.spec, max(u.max_degree() + v.max_degree() + 2, DEFAULT_DEGREE))
    Yu, Yv = vertex_field(u, W), vertex_field(v, W)
    top = u.max_degree() + v.max_degree()
    products = {}
    for i in range(0, top + 1):
        s = vertex_field(u, V).va(i, v)
        if s:
            products[i] = vertex_field(s, W)
    vectors = list(W.basis_up_to()) if vectors is None else list(vectors)
    defects, checked, skipped = [], 0, 0
    for m in range(lo, hi + 1):
        for n in range(lo, hi + 1):
            for mono in vectors:
                w = {mono: S(1)}
                try:
                    lhs = _add_dicts(Yu.res(m, Yv.res(n, w)), Yv.res(n, Yu.res(m, w)), -1)
                    rhs: dict = {}
                    for i, f in products.items():
                        c = gbinom(m, i)
                        if c:
                            rhs = _add_dicts(rhs, f.res(m + n - i, w), c)
                except UntrustedWindow:
                    skipped += 1
                    continue
                checked += 1
                diff = _add_dicts(lhs, rhs, -1)
                if diff:
                    defects.append({"m": m, "n": n, "vector": format_monomial(mono),
                                    "defect": str(PBWVector._raw(W.spec, diff))})
    return {"defects": defects, "checked": checked, "skipped": skipped}


# ---------------------------------------------------------------------------
# z-series and e-products


class ZSeries:
    """Truncated Laurent series ``sum_{j >= val} c_j z^j`` with exact coefficients."""

    def __init__(self, valuation: int, coeffs: Sequence[Fraction]):
        self.valuation = valuation
        self.coeffs = [Fraction(c) for c in coeffs]

    @property
    def order(self) -> int:
        """Last exponent that is represented exactly."""
        return self.valuation + len(self.coeffs) - 1

    def coefficient(self, j: int) -> Fraction:
        if j < self.valuation:
            return Fraction(0)
        if j > self.order:
            raise ZOrderError(f"coefficient of z^{j} requested beyond represented order {self.order}")
        return self.coeffs[j - self.valuation]

    def __mul__(self, other: "ZSeries") -> "ZSeries":
        n = min(len(self.coeffs), len(other.coeffs))
        out = [Fraction(0)] * n
        for i in range(n):
            for k in range(n - i):
                out[i + k] += self.coeffs[i] * other.coeffs[k]
        return ZSeries(self.valuation + other.valuation, out)

    def inverse(self) -> "ZSeries":
        c0 = self.coeffs[0]
        if not c0:
            raise ZeroDivisionError("leading coefficient must be nonzero")
        n = len(self.coeffs)
        inv = [Fraction(0)] * n
        inv[0] = 1 / c0
        for i in range(1, n):
            s = sum(self.coeffs[k] * inv[i - k] for k in range(1, i + 1))
            inv[i] = -s / c0
        return ZSeries(-self.valuation, inv)

    def power(self, k: int) -> "ZSeries":
        if k < 0:
            return self.inverse().power(-k)
        out = ZSeries(0, [Fraction(1)] + [Fraction(0)] * (len(self.coeffs) - 1))
        for _ in range(k):
            out = out * self
        return out

    @classmethod
    def exp_minus_one(cls, terms: int) -> "ZSeries":
        """``e^z - 1`` with ``terms`` coefficients starting at ``z^1``."""
        return cls(1, [Fraction(1, factorial(i + 1)) for i in range(terms)])


@lru_cache(maxsize=None)
def inverse_p_series(k: int, z_order: int) -> ZSeries:
    """``(e^z - 1)^{-k}`` represented through ``z^{z_order - k}``."""
    return ZSeries.exp_minus_one(z_order + 1).power(-k)


def e_product(a: TruncatedField, b: TruncatedField, n: int, k: int, z_order: int = DEFAULT_Z_ORDER,
              check_locality: bool = True) -> TruncatedField:
    """The e-product ``a(x)_n^e b(x)`` for weight-0 fields in ``x^{-n}`` convention.

    With ``p(x1, x) = (x1 - x)^k`` and ``F = p(x1,x) a(x1) b(x)``, the series
    ``p(xe^z, x)^{-1} F(xe^z, x)`` equals
    ``x^{-k} (e^z-1)^{-k} sum F_{p,q} x^{p+q} e^{pz}``; its ``z^{-n-1}``
    coefficient is ``x^{-k} sum F_{p,q} gamma_n(p) x^{p+q}`` with
    ``gamma_n(p) = sum_i beta_{-n-1-i} p^i / i!``.  On a vector of degree
    ``d`` only ``p, q >= -d`` contribute, so every mode is a finite sum.
    With ``check_locality`` each ``F_{p,q}`` is computed in both operator
    orders and a mismatch raises :class:`LocalityError`.
    """
    if a.module is not b.module:
        raise ModuleError("fields on different modules")
    if (a.wt, a.weight_shift, b.wt, b.weight_shift) != (0, 0, 0, 0):
        raise ModuleError("e-products are defined here for weight-0 fields in the x^{-n} convention")
    W = a.module
    spec = W.spec
    zero = TruncatedField(W, 0, 0, lambda j, m: {}, f"({a.label})_{n}^e({b.label})", a.mode_window)
    if n >= k:
        return zero
    need = k - n - 1
    if need > z_order:
        raise ZOrderError(f"z-order {z_order} too small for n={n}, k={k}; need {need}")
    series = inverse_p_series(k, z_order)
    beta = [Fraction(series.coefficient(-n - 1 - i)) for i in range(need + 1)]

    def gamma(p: int) -> Fraction:
        return sum((beta[i] * Fraction(p) ** i / factorial(i) for i in range(need + 1)), Fraction(0))

    def am(t: int, v: dict) -> dict:  # mode t of a weight-0 field, x^{-t}
        return a.res(t - 1, v)

    def bm(t: int, v: dict) -> dict:
        return b.res(t - 1, v)

    def F(p: int, q: int, w: dict) -> dict:
        acc: dict = {}
        for j in range(k + 1):
            c = S((-1) ** j * gbinom(k, j))
            inner = am(-(p - k + j), w)
            if inner:
                acc = _add_dicts(acc, bm(-(q - j), inner), c)
        if check_locality:
            other: dict = {}
            for j in range(k + 1):
                c = S((-1) ** j * gbinom(k, j))
                inner = bm(-(q - j), w)
                if inner:
                    other = _add_dicts(other, am(-(p - k + j), inner), c)
            if other != acc:
                raise LocalityError(f"(x1-x)^{k} does not make {a.label} and {b.label} commute")
        return acc

    def rule(j: int, mono: Monomial) -> dict:
        t = j + 1  # coefficient of x^{-t}
        d = spec.degree(mono)
        w = {mono: S(1)}
        acc: dict = {}
        for p in range(-d, k - t + d + 1):
            g = gamma(p)
            if not g:
                continue
            f = F(p, k - t - p, w)
            if f:
                acc = _add_dicts(acc, f, S(g))
        return acc

    return TruncatedField(W, 0, 0, rule, f"({a.label})_{n}^e({b.label})", a.mode_window)


def field_defects(f: TruncatedField, g: TruncatedField, modes: Iterable[int], vectors: Iterable[Monomial]) -> dict:
    """Compare two fields mode by mode on the given basis vectors (user mode index)."""
    defects, checked, skipped = [], 0, 0
    for n in modes:
        for mono in vectors:
            w = {mono: S(1)}
            try:
                x = f.res(n + f.weight_shift - 1, w)
                y = g.res(n + g.weight_shift - 1, w)
            except UntrustedWindow:
                skipped += 1
                continue
            checked += 1
            diff = _add_dicts(x, y, -1)
            if diff:
                defects.append({"mode": n, "vector": format_monomial(mono),
                                "defect": str(PBWVector._raw(f.module.spec, diff))})
    return {"defects": defects, "checked": checked, "skipped": skipped}


def rank_two_test_vectors(spec: ModuleSpec, max_depth: int, m_bound: int) -> list[Monomial]:
    """Test vectors of the induced HV2 module, transported from the FRAK2HAT vacuum basis.

    A FRAK2HAT vacuum monomial in ``That(m,-n)``, ``Ehat(m,-n)`` (n >= 1)
    corresponds to the monomial in ``T(m,1-n)``, ``E(m,1-n)``: both are the
    coefficient of ``x^{n-1}`` in the respective generating series.  The
    index ``(0,0)`` has no counterpart in HV2 and monomials containing it are
    dropped.
    """
    if spec.kind is not ModuleKind.INDUCED_HV2:
        raise ModuleError("test vectors are transported into the induced hv2 module")
    src = ModuleSpec.vacuum_frak2hat(*spec.levels, m_bound=m_bound)
    out = []
    for depth in range(max_depth + 1):
        for mono in enumerate_basis(src, depth):
            moved = [Sym("T" if s.name == "That" else "E", (s.idx[0], s.idx[1] + 1)) for s in mono]
            if any(s.idx == (0, 0) for s in moved):
                continue
            vec = PBWVector.vacuum(spec)
            vec = apply_word(moved, vec)
            out.extend(m for m in vec.terms if m not in out)
    return out
