"""Command-line front end (``hv``).

Every subcommand prints one JSON object on stdout, serialized with sorted
keys so that identical invocations produce identical bytes.  Exit status:
0 success, 2 defect found, 3 inconclusive window, 4 input error.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import random
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from datetime import datetime, timezone
from typing import Any, Callable, Sequence

from . import __version__
from . import formaldist as fd
from . import liealg as la
from . import structure as st
from . import vertexops as vo
from .errors import HVError, Inconclusive, ParseError
from .pbwmod import (
    ModuleKind,
    ModuleSpec,
    PBWVector,
    apply_word,
    d_action,
    enumerate_basis,
    format_monomial,
    graded_dim,
    parse_sym,
)
from .scalar import S, Scalar

EXIT_OK, EXIT_DEFECT, EXIT_INCONCLUSIVE, EXIT_INPUT = 0, 2, 3, 4

DEFAULT_WINDOWS = {"verify": 6, "locality": 12, "borcherds": 3, "eproduct": 3, "virasoro": 2, "commutant": 3,
                   "delta": 6, "mode": 3}


class InputError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # argparse would exit with status 2, which means "defect" here
        raise InputError(message)


# ---------------------------------------------------------------------------
# configuration and records


@dataclass(frozen=True)
class RunConfig:
    subcommand: str
    argv: tuple[str, ...]

    def canonical(self) -> str:
        return json.dumps({"subcommand": self.subcommand, "argv": list(self.argv)}, sort_keys=True)

    def config_hash(self) -> str:
        return hashlib.sha256(self.canonical().encode()).hexdigest()


@dataclass
class ResultRecord:
    config: RunConfig
    payload: Any
    exit_code: int
    version: str = __version__
    timestamp: str = field(default_factory=lambda: datetime.now(timezone.utc).isoformat())

    def to_json(self) -> dict:
        return {
            "config": {"subcommand": self.config.subcommand, "argv": list(self.config.argv)},
            "config_hash": self.config.config_hash(),
            "exit_code": self.exit_code,
            "result": self.payload,
            "version": self.version,
            "timestamp": self.timestamp,
        }


def dumps(payload: Any) -> str:
    return json.dumps(payload, sort_keys=True, ensure_ascii=False)


# ---------------------------------------------------------------------------
# argument helpers


def rational(text: str) -> Scalar:
    try:
        return Scalar.parse(text)
    except ValueError as exc:
        raise InputError(str(exc)) from None


def _window(args, name: str) -> int:
    if getattr(args, "window", None) is not None:
        return args.window
    env = os.environ.get("HV_DEFAULT_WINDOW")
    if env:
        try:
            return int(env)
        except ValueError:
            raise InputError(f"HV_DEFAULT_WINDOW must be an integer, got {env!r}") from None
    return DEFAULT_WINDOWS[name]


def _levels(args, count: int = 3) -> tuple[Scalar, ...]:
    return tuple(getattr(args, f"l{i}") for i in range(1, count + 1))


def _spec(args, kind: str | None = None) -> ModuleSpec:
    kind = ModuleKind(kind or args.module)
    if kind is ModuleKind.VERMA_HV1:
        return ModuleSpec.verma_hv1(*_levels(args), args.h1, args.h2)
    if kind is ModuleKind.VACUUM_HV1:
        return ModuleSpec.vacuum_hv1(*_levels(args))
    if kind is ModuleKind.VACUUM_FRAK1:
        return ModuleSpec.vacuum_frak1(*_levels(args))
    if kind is ModuleKind.VACUUM_FRAK2HAT:
        return ModuleSpec.vacuum_frak2hat(*_levels(args, 4), m_bound=args.m_bound)
    return ModuleSpec.induced_hv2(*_levels(args, 4), m_bound=args.m_bound)


STATE_ALIASES = {"omega": "L(-2)", "I": "I(-1)", "vacuum": "1"}


def parse_vector(spec: ModuleSpec, text: str) -> PBWVector:
    """A combination of words applied to the highest-weight vector, e.g. ``"2*I(-1)L(-2) - L(-4)"``."""
    text = STATE_ALIASES.get(text.strip(), text)
    if spec.kind is ModuleKind.VACUUM_HV1 and text.strip() in st.CONFORMAL_NAMES:
        return st.conformal_vector(text.strip(), spec).value
    out = PBWVector.zero(spec)
    for coef, word in la.parse_linear_words(text):
        syms = []
        for name, idx, col in word:
            try:
                syms.append(parse_sym(spec, name, *idx))
            except HVError as exc:
                raise ParseError(str(exc), column=col) from None
        out = out + apply_word(syms, PBWVector.vacuum(spec)).scale(coef)
    return out


def parse_operator(spec: ModuleSpec, text: str) -> list[tuple[Scalar, list]]:
    """A combination of words of Lie algebra symbols (no vector attached)."""
    out = []
    for coef, word in la.parse_linear_words(text):
        syms = []
        for name, idx, col in word:
            try:
                syms.append(parse_sym(spec, name, *idx))
            except HVError as exc:
                raise ParseError(str(exc), column=col) from None
        out.append((coef, syms))
    return out


def vec_json(v: PBWVector) -> dict:
    return {"text": str(v), "terms": v.to_json()["terms"]}


def lie_json(x) -> Any:
    if isinstance(x, la.LieElt):
        return {"text": str(x), "terms": x.to_json()["terms"]}
    return {"text": str(x), "terms": []}


def _pairs(text: str) -> tuple[int, int]:
    try:
        a, b = (int(t) for t in text.split(","))
    except ValueError:
        raise InputError(f"expected two comma-separated integers, got {text!r}") from None
    return a, b


# ---------------------------------------------------------------------------
# liealg


def cmd_bracket(args) -> tuple[dict, int]:
    alg = la.Algebra.parse(args.algebra)
    res = la.bracket(la.parse_element(alg, args.a), la.parse_element(alg, args.b))
    return {"algebra": alg.value, "result": lie_json(res)}, EXIT_OK


def cmd_jacobi(args) -> tuple[dict, int]:
    alg = la.Algebra.parse(args.algebra)
    if args.a is not None:
        if args.b is None or args.c is None:
            raise InputError("give all of --a, --b, --c or none of them")
        d = la.jacobi_defect(*(la.parse_element(alg, t) for t in (args.a, args.b, args.c)))
        defects = [] if d.is_zero() else [{"defect": lie_json(d)}]
        return {"triples": 1, "defects": defects}, EXIT_DEFECT if defects else EXIT_OK
    gens = la.generators(alg, -args.range, args.range)
    if args.samples:
        rng = random.Random(args.seed)
        triples = [tuple(rng.choice(gens) for _ in range(3)) for _ in range(args.samples)]
    else:
        triples = [(a, b, c) for a in gens for b in gens for c in gens]
    defects = []
    for a, b, c in triples:
        d = la.jacobi_defect(a, b, c)
        if not d.is_zero():
            defects.append({"a": str(a), "b": str(b), "c": str(c), "defect": lie_json(d)})
    return {"triples": len(triples), "defects": defects}, EXIT_DEFECT if defects else EXIT_OK


def cmd_iso(args) -> tuple[dict, int]:
    x = la.parse_element(la.Algebra.FRAK1, args.x)
    out: dict = {"image": lie_json(la.iso_frak_to_hv(x))}
    if args.y is not None:
        y = la.parse_element(la.Algebra.FRAK1, args.y)
        lhs = la.iso_frak_to_hv(la.bracket(x, y))
        rhs = la.bracket(la.iso_frak_to_hv(x), la.iso_frak_to_hv(y))
        out.update({"image_of_bracket": lie_json(lhs), "bracket_of_images": lie_json(rhs),
                    "defects": [] if lhs == rhs else [lie_json(lhs - rhs)]})
        return out, EXIT_OK if lhs == rhs else EXIT_DEFECT
    return out, EXIT_OK


def cmd_sigma(args) -> tuple[dict, int]:
    return {"result": lie_json(la.sigma(la.parse_element(la.Algebra.HV1, args.x)))}, EXIT_OK


# ---------------------------------------------------------------------------
# formaldist


def cmd_delta(args) -> tuple[dict, int]:
    w = _window(args, "delta")
    table = fd.delta_derivative_window(args.order, args.weighted, fd.Window.square(w))
    if args.at is not None:
        p, q = _pairs(args.at)
        return {"p": p, "q": q, "coefficient": str(table[(p, q)])}, EXIT_OK
    cells = [{"p": p, "q": q, "coefficient": str(table[(p, q)])} for p, q in table.nonzero()]
    return {"order": args.order, "weighted": args.weighted, "window": w, "cells": cells}, EXIT_OK


def _identity(args) -> list[fd.IdentityId]:
    base = args.identity.strip().upper()
    if base in fd.RANK_TWO and args.m is None:
        return [fd.IdentityId(base, m, r) for m in range(-3, 4) for r in range(-3, 4)]
    return [fd.IdentityId.parse(args.identity, args.m, args.r)]


def cmd_expand(args) -> tuple[dict, int]:
    p, q = _pairs(args.at)
    ident = fd.IdentityId.parse(args.identity, args.m, args.r)
    lhs, rhs = fd.expand_identity_sides(ident, fd.Window(p, p, q, q))
    return {"identity": str(ident), "p": p, "q": q, "lhs": lie_json(lhs[(p, q)]),
            "rhs": lie_json(rhs[(p, q)])}, EXIT_OK


def cmd_verify(args) -> tuple[dict, int]:
    w = fd.Window.square(_window(args, "verify"))
    defects = []
    for ident in _identity(args):
        for p, q, d in fd.verify_identity(ident, w):
            defects.append({"identity": str(ident), "p": p, "q": q, "defect": lie_json(d)})
    return {"defects": defects}, EXIT_DEFECT if defects else EXIT_OK


def cmd_locality(args) -> tuple[dict, int]:
    w = _window(args, "locality")
    pair = args.pair.replace(" ", "")
    if pair in ("T,E", "E,E") and args.m is None:
        orders = {}
        for m in range(-3, 4):
            for r in range(-3, 4):
                orders[f"{m},{r}"] = fd.locality_order(pair, fd.Window.square(w), m, r)
        return {"pair": pair, "orders": orders, "window": w}, EXIT_OK
    k = fd.locality_order(pair, fd.Window.square(w), args.m if args.m is not None else 1,
                          args.r if args.r is not None else -1)
    return {"pair": pair, "order": k, "window": w}, EXIT_OK


# ---------------------------------------------------------------------------
# pbwmod


def cmd_basis(args) -> tuple[dict, int]:
    spec = _spec(args)
    if args.dims:
        return {"module": spec.to_json(), "dims": [graded_dim(spec, d) for d in range(args.degree + 1)]}, EXIT_OK
    basis = enumerate_basis(spec, args.degree)
    return {"module": spec.to_json(), "degree": args.degree, "dim": len(basis),
            "basis": [[s.to_json() for s in m] for m in basis]}, EXIT_OK


def cmd_act(args) -> tuple[dict, int]:
    spec = _spec(args)
    v = parse_vector(spec, args.v)
    out = PBWVector.zero(spec)
    for coef, word in parse_operator(spec, args.g):
        out = out + apply_word(word, v).scale(coef)
    return {"input": vec_json(v), "result": vec_json(out)}, EXIT_OK


def cmd_derivation(args) -> tuple[dict, int]:
    spec = _spec(args)
    v = parse_vector(spec, args.v)
    return {"input": vec_json(v), "result": vec_json(d_action(v))}, EXIT_OK


# ---------------------------------------------------------------------------
# vertexops


def cmd_field(args) -> tuple[dict, int]:
    spec = _spec(args)
    W = vo.truncated_module(spec, args.truncation)
    f = vo.generator_field(args.field, W, args.m)
    v = parse_vector(spec, args.v)
    return {"field": f.label, "mode": args.mode, "input": vec_json(v), "result": vec_json(f.mode(args.mode, v))}, EXIT_OK


def cmd_mode(args) -> tuple[dict, int]:
    """``state_(n) w`` by iterated n-th products, cross-checked against the direct word expansion."""
    spec = _spec(args)
    vac = ModuleSpec.vacuum_hv1(*spec.levels)
    u = parse_vector(vac, args.state)
    W = vo.truncated_module(spec, args.truncation)
    if args.table:
        lo = -_window(args, "mode")
        hi = -lo
        defects, checked, skipped = [], 0, 0
        for n in range(lo, hi + 1):
            for mono in W.basis_up_to(args.max_input_degree):
                w = PBWVector._raw(spec, {mono: S(1)})
                try:
                    a = vo.mode_action(u, n, w, W)
                except HVError:
                    skipped += 1
                    continue
                b = vo.mode_action_words(u, n, w)
                checked += 1
                if a != b:
                    defects.append({"n": n, "vector": format_monomial(mono), "defect": str(a - b)})
        return {"state": str(u), "checked": checked, "skipped": skipped, "defects": defects}, \
            EXIT_DEFECT if defects else EXIT_OK
    w = parse_vector(spec, args.v)
    a = vo.mode_action(u, args.n, w, W)
    b = vo.mode_action_words(u, args.n, w)
    defects = [] if a == b else [{"defect": str(a - b)}]
    return {"state": str(u), "n": args.n, "input": vec_json(w), "result": vec_json(a),
            "defects": defects}, EXIT_DEFECT if defects else EXIT_OK


def cmd_borcherds(args) -> tuple[dict, int]:
    spec = _spec(args)
    vac = ModuleSpec.vacuum_hv1(*spec.levels)
    u, v = parse_vector(vac, args.u), parse_vector(vac, args.v)
    w = _window(args, "borcherds")
    W = vo.truncated_module(spec, args.truncation)
    res = vo.borcherds_defect(u, v, W, (-w, w))
    if not res["checked"]:
        raise Inconclusive("no entry of the window could be evaluated inside the truncation")
    res.update({"u": str(u), "v": str(v), "window": w, "truncation": args.truncation})
    return res, EXIT_DEFECT if res["defects"] else EXIT_OK


_E_ORDERS = {"Lhat,Lhat": 4, "Lhat,Ihat": 3, "Ihat,Ihat": 2, "T,E": 2, "E,E": 2}


def expected_e_product(pair: str, n: int, W: vo.TruncatedModule, m: int = 0, r: int = 0):
    """Closed-form value of the e-product for ``n >= 0``; ``None`` when no closed form is tabulated."""
    if n < 0:
        return None
    unit = lambda c: vo.identity_field(W, c)  # noqa: E731
    if pair in ("T,E", "E,E"):
        l1, l2, l3, l4 = W.spec.levels
        first, second = (l1, l2) if pair == "T,E" else (l3, l4)
        name = pair[0]
        d = 1 if m + r == 0 else 0
        tgt = vo.generator_field(name, W, m + r)
        if n == 0:
            return tgt.euler().scale(m) + unit(m * d * first)
        if n == 1:
            return tgt.scale(m + r) + unit(d * second)
        return unit(0)
    l1, l2, l3 = W.spec.levels
    Lh, Ih = vo.generator_field("Lhat", W), vo.generator_field("Ihat", W)
    table = {
        "Lhat,Lhat": {0: Lh.euler(), 1: Lh.scale(2), 3: unit(l1 / 2)},
        "Lhat,Ihat": {0: Ih.euler(), 1: Ih, 2: unit(-2 * l2)},
        "Ihat,Ihat": {1: unit(l3)},
    }[pair]
    return table.get(n, unit(0))


def cmd_eproduct(args) -> tuple[dict, int]:
    pair = args.pair.replace(" ", "")
    if pair not in _E_ORDERS:
        raise InputError(f"unknown pair {pair!r}; expected one of {sorted(_E_ORDERS)}")
    k = args.k if args.k is not None else _E_ORDERS[pair]
    w = _window(args, "eproduct")
    if pair in ("T,E", "E,E"):
        spec = ModuleSpec.induced_hv2(*_levels(args, 4), m_bound=args.m_bound)
        W = vo.truncated_module(spec, args.truncation if args.truncation is not None else 4)
        m = args.m if args.m is not None else 1
        r = args.r if args.r is not None else -1
        a = vo.generator_field(pair[0], W, m)
        b = vo.generator_field("E", W, r)
        vectors = vo.rank_two_test_vectors(spec, args.max_input_degree, args.m_bound if args.m_bound is not None else 2)
    else:
        spec = _spec(args, args.module or "verma-hv1")
        W = vo.truncated_module(spec, args.truncation if args.truncation is not None else 8)
        a, b = (vo.generator_field(x, W) for x in pair.split(","))
        m = r = 0
        vectors = W.basis_up_to(args.max_input_degree)
    f = vo.e_product(a, b, args.n, k, args.z_order)
    rows, skipped = [], 0
    for mode in range(-w, w + 1):
        for mono in vectors:
            try:
                val = f.mode(mode, PBWVector._raw(spec, {mono: S(1)}))
            except HVError as exc:
                if isinstance(exc, vo.UntrustedWindow):
                    skipped += 1
                    continue
                raise
            if val:
                rows.append({"mode": mode, "vector": format_monomial(mono), "value": str(val)})
    out: dict = {"pair": pair, "n": args.n, "k": k, "window": w, "table": rows, "skipped": skipped}
    if pair in ("T,E", "E,E"):
        out.update({"m": m, "r": r})
    exp = expected_e_product(pair, args.n, W, m, r)
    if exp is None:
        out["defects"] = None
        return out, EXIT_OK
    res = vo.field_defects(f, exp, range(-w, w + 1), vectors)
    out["defects"] = res["defects"]
    out["checked"] = res["checked"]
    if not res["checked"]:
        raise Inconclusive("no trusted entry in the window")
    return out, EXIT_DEFECT if res["defects"] else EXIT_OK


# ---------------------------------------------------------------------------
# structure


def _vacuum(args) -> ModuleSpec:
    return ModuleSpec.vacuum_hv1(*_levels(args))


def cmd_zhu(args) -> tuple[dict, int]:
    spec = _vacuum(args)
    if args.check_degree is not None:
        basis = [PBWVector._raw(spec, {m: S(1)}) for d in range(args.check_degree + 1) for m in enumerate_basis(spec, d)]
        defects = []
        for u in basis:
            for v in basis:
                lhs = st.zhu_reduce(st.zhu_product(u, v))
                rhs = st.zhu_reduce(u) * st.zhu_reduce(v)
                if lhs != rhs:
                    defects.append({"u": str(u), "v": str(v), "defect": str(lhs - rhs)})
        return {"pairs": len(basis) ** 2, "defects": defects}, EXIT_DEFECT if defects else EXIT_OK
    if args.v is None:
        raise InputError("zhu needs --v (and optionally --u) or --check-degree")
    v = parse_vector(spec, args.v)
    if args.u is None:
        return {"input": vec_json(v), "image": str(st.zhu_reduce(v))}, EXIT_OK
    u = parse_vector(spec, args.u)
    prod = st.zhu_product(u, v)
    return {"u": str(u), "v": str(v), "product": vec_json(prod), "image": str(st.zhu_reduce(prod))}, EXIT_OK


def cmd_gram(args) -> tuple[dict, int]:
    spec = _spec(args)
    g = st.gram_matrix(spec, args.degree)
    out = g.to_json()
    out.update({"rank": g.rank(), "determinant": str(g.determinant()), "symmetric": g.is_symmetric()})
    return out, EXIT_OK


def cmd_positivity(args) -> tuple[dict, int]:
    scan = st.positivity_scan(_spec(args), args.max_degree)
    return {"degrees": scan, "positive": st.scan_is_positive(scan)}, EXIT_OK


def cmd_unitary(args) -> tuple[dict, int]:
    weights = (args.h1, args.h2) if args.h1 is not None or args.h2 is not None else (None, None)
    verdict = st.unitarity_classify(args.l1, args.l2, args.l3, *weights)
    out = verdict.to_json()
    if not args.explain:
        out.pop("reason", None)
    if args.scan is not None:
        if weights[0] is None:
            spec = ModuleSpec.vacuum_hv1(args.l1, args.l2, args.l3)
        else:
            spec = ModuleSpec.verma_hv1(args.l1, args.l2, args.l3, *weights)
        scanned = st.unitarity_by_scan(spec, args.scan)
        out["scan"] = {"max_degree": args.scan, "positive": scanned, "agrees": scanned == verdict.unitary}
        return out, EXIT_OK if scanned == verdict.unitary else EXIT_DEFECT
    return out, EXIT_OK


def cmd_phi(args) -> tuple[dict, int]:
    v = parse_vector(_vacuum(args), args.v)
    return {"input": vec_json(v), "result": vec_json(st.phi_involution(v))}, EXIT_OK


def cmd_central_charge(args) -> tuple[dict, int]:
    cv = st.conformal_vector(args.vector, _vacuum(args))
    c = st.central_charge(cv)
    closed = st.closed_form_central_charge(args.vector, args.l1, args.l2, args.l3)
    defects = [] if c == closed else [{"computed": str(c), "closed_form": str(closed)}]
    return {"vector": args.vector, "central_charge": str(c), "closed_form": str(closed),
            "defects": defects}, EXIT_DEFECT if defects else EXIT_OK


def cmd_virasoro(args) -> tuple[dict, int]:
    w = _window(args, "virasoro")
    res = st.virasoro_defect(st.conformal_vector(args.vector, _vacuum(args)), (-w, w), args.max_input_degree)
    res.update({"vector": args.vector, "window": w})
    return res, EXIT_DEFECT if res["defects"] else EXIT_OK


def cmd_commutant(args) -> tuple[dict, int]:
    spec = _vacuum(args)
    w = _window(args, "commutant")
    if args.n is not None or args.m is not None:
        if args.n is None or args.m is None:
            raise InputError("give both --n and --m")
        cv = st.conformal_vector("omega_tilde", spec)
        W = vo.truncated_module(spec, 12)
        Y = vo.vertex_field(cv.value, W)
        one = PBWVector.vacuum(spec)
        I_m = la.Sym("I", (args.m,))
        from .pbwmod import act
        left = Y.va(args.n, act(I_m, one))
        right = act(I_m, Y.va(args.n, one))
        defects = [] if left == right else [{"defect": str(left - right)}]
        return {"n": args.n, "m": args.m, "left": vec_json(left), "right": vec_json(right),
                "defects": defects}, EXIT_DEFECT if defects else EXIT_OK
    vectors = [m for d in range(args.max_input_degree + 1) for m in enumerate_basis(spec, d)]
    res = st.commutant_defect(spec, (-w, w), vectors)
    res["window"] = w
    return res, EXIT_DEFECT if res["defects"] else EXIT_OK


def cmd_singular(args) -> tuple[dict, int]:
    vecs = st.singular_vector_search(args.c, args.degree)
    checks = [st.singular_crosscheck(v) for v in vecs]
    defects = [str(v) for v, ok in zip(vecs, checks) if not ok]
    return {"c": str(args.c), "degree": args.degree, "kernel_dim": len(vecs),
            "vectors": [str(v) for v in vecs], "crosscheck": all(checks),
            "defects": defects}, EXIT_DEFECT if defects else EXIT_OK


def cmd_cpq(args) -> tuple[dict, int]:
    return {"p": args.p, "q": args.q, "c": str(S(st.cpq(args.p, args.q))),
            "degree": st.cpq_degree(args.p, args.q)}, EXIT_OK


def cmd_tensor_check(args) -> tuple[dict, int]:
    rows = st.tensor_dim_check(args.l1, args.l2, args.l3, args.max_degree)
    defects = [r for r in rows if r["defect"]]
    return {"rows": rows, "defects": defects}, EXIT_DEFECT if defects else EXIT_OK


def cmd_c2dim(args) -> tuple[dict, int]:
    return {"degree": args.degree, "dim": st.c2_quotient_dim(args.degree, args.l1, args.l2, args.l3)}, EXIT_OK


# ---------------------------------------------------------------------------
# sweep


def _run_argv(argv: Sequence[str]) -> tuple[Any, int]:
    return execute(list(argv))


def cmd_sweep(args) -> tuple[dict, int]:
    try:
        with open(args.grid, encoding="utf-8") as fh:
            grid = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read grid file {args.grid}: {exc}") from None
    base = list(grid.get("command", []))
    points = grid.get("points", [])
    if not base and points:
        raise InputError("grid file needs a 'command' list")
    done: set[str] = set()
    if os.path.exists(args.out):
        with open(args.out, encoding="utf-8") as fh:
            for line in fh:
                if line.strip():
                    done.add(json.loads(line)["config_hash"])
    configs = []
    for pt in points:
        argv = list(base)
        for key in sorted(pt):
            argv.append(f"--{key.replace('_', '-')}={pt[key]}")  # '=' keeps negative values from reading as flags
        cfg = RunConfig(base[0], tuple(argv))
        if cfg.config_hash() not in done:
            configs.append(cfg)
            done.add(cfg.config_hash())
    if args.workers > 1 and len(configs) > 1:
        with ProcessPoolExecutor(max_workers=args.workers) as pool:
            results = list(pool.map(_run_argv, [c.argv for c in configs]))
    else:
        results = [_run_argv(c.argv) for c in configs]
    with open(args.out, "a", encoding="utf-8") as fh:
        for cfg, (payload, code) in zip(configs, results):
            fh.write(dumps(ResultRecord(cfg, payload, code).to_json()) + "\n")
    worst = max((code for _, code in results), default=EXIT_OK)
    return {"new_records": len(configs), "points": len(points), "out": args.out}, worst


# ---------------------------------------------------------------------------
# parser


def _add_levels(p: argparse.ArgumentParser, four: bool = False, weights: bool = False, module: str | None = None):
    for i in range(1, 5 if four else 4):
        p.add_argument(f"--l{i}", type=rational, default=S(0), help=f"central level l{i} (exact rational, default 0)")
    if weights:
        p.add_argument("--h1", type=rational, default=S(0))
        p.add_argument("--h2", type=rational, default=S(0))
    if module is not None:
        p.add_argument("--module", default=module, choices=[k.value for k in ModuleKind])
        p.add_argument("--m-bound", type=int, default=None, dest="m_bound")
        if not four:
            p.add_argument("--l4", type=rational, default=S(0))


COMMANDS: dict[str, Callable] = {}


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="hv", description="Exact computations for twisted Heisenberg-Virasoro algebras.")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name: str, fn: Callable, help_text: str) -> argparse.ArgumentParser:
        COMMANDS[name] = fn
        return sub.add_parser(name, help=help_text)

    p = add("bracket", cmd_bracket, "Lie bracket of two elements")
    p.add_argument("--algebra", required=True)
    p.add_argument("--a", required=True)
    p.add_argument("--b", required=True)

    p = add("jacobi", cmd_jacobi, "Jacobi defect of a triple, or of all generator triples")
    p.add_argument("--algebra", required=True)
    p.add_argument("--a")
    p.add_argument("--b")
    p.add_argument("--c")
    p.add_argument("--range", type=int, default=4)
    p.add_argument("--samples", type=int, default=0)
    p.add_argument("--seed", type=int, default=0)

    p = add("iso", cmd_iso, "isomorphism from the frak1 algebra onto hv1")
    p.add_argument("--x", required=True)
    p.add_argument("--y")

    p = add("sigma", cmd_sigma, "anti-linear anti-involution of hv1")
    p.add_argument("--x", required=True)

    p = add("delta", cmd_delta, "coefficients of derivatives of the delta distribution")
    p.add_argument("--order", type=int, required=True)
    p.add_argument("--weighted", action="store_true")
    p.add_argument("--window", type=int)
    p.add_argument("--at")

    for name, fn, text in (("expand", cmd_expand, "both sides of an identity at one cell"),
                           ("verify", cmd_verify, "verify a generating-function identity on a window")):
        p = add(name, fn, text)
        p.add_argument("--identity", required=True)
        p.add_argument("--m", type=int)
        p.add_argument("--r", type=int)
        if name == "expand":
            p.add_argument("--at", required=True)
        else:
            p.add_argument("--window", type=int)

    p = add("locality", cmd_locality, "locality order of a pair of generating fields")
    p.add_argument("--pair", required=True)
    p.add_argument("--window", type=int)
    p.add_argument("--m", type=int)
    p.add_argument("--r", type=int)

    p = add("basis", cmd_basis, "PBW basis of one graded piece")
    _add_levels(p, weights=True, module="vacuum-hv1")
    p.add_argument("--degree", type=int, required=True)
    p.add_argument("--dims", action="store_true", help="list graded dimensions 0..degree instead")

    p = add("act", cmd_act, "apply a combination of words of generators to a vector")
    _add_levels(p, weights=True, module="vacuum-hv1")
    p.add_argument("--g", required=True)
    p.add_argument("--v", default="1")

    p = add("derivation", cmd_derivation, "translation derivation on a vacuum module")
    _add_levels(p, module="vacuum-hv1")
    p.add_argument("--v", required=True)

    p = add("field", cmd_field, "one mode of a generating field applied to a vector")
    _add_levels(p, weights=True, module="vacuum-hv1")
    p.add_argument("--field", required=True)
    p.add_argument("--m", type=int, help="outer index for rank-two fields")
    p.add_argument("--mode", type=int, required=True)
    p.add_argument("--v", default="1")
    p.add_argument("--truncation", type=int, default=vo.DEFAULT_DEGREE)

    p = add("mode", cmd_mode, "mode of the vertex operator of a vacuum state")
    _add_levels(p, weights=True, module="vacuum-hv1")
    p.add_argument("--state", required=True)
    p.add_argument("--n", type=int)
    p.add_argument("--v", default="1")
    p.add_argument("--table", action="store_true", help="compare both computation paths on a window")
    p.add_argument("--window", type=int)
    p.add_argument("--max-input-degree", type=int, default=3, dest="max_input_degree")
    p.add_argument("--truncation", type=int, default=vo.DEFAULT_DEGREE)

    p = add("borcherds", cmd_borcherds, "Borcherds commutator defect table")
    _add_levels(p, weights=True, module="verma-hv1")
    p.add_argument("--u", required=True)
    p.add_argument("--v", required=True)
    p.add_argument("--window", type=int)
    p.add_argument("--truncation", type=int, default=vo.DEFAULT_DEGREE)

    p = add("eproduct", cmd_eproduct, "e-product of two weight-zero fields, with its closed form")
    for i in range(1, 5):
        p.add_argument(f"--l{i}", type=rational, default=S(0))
    p.add_argument("--h1", type=rational, default=S(0))
    p.add_argument("--h2", type=rational, default=S(0))
    p.add_argument("--module", choices=["verma-hv1", "vacuum-hv1"])
    p.add_argument("--m-bound", type=int, default=None, dest="m_bound")
    p.add_argument("--pair", required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int)
    p.add_argument("--m", type=int)
    p.add_argument("--r", type=int)
    p.add_argument("--window", type=int)
    p.add_argument("--z-order", type=int, default=vo.DEFAULT_Z_ORDER, dest="z_order")
    p.add_argument("--truncation", type=int)
    p.add_argument("--max-input-degree", type=int, default=2, dest="max_input_degree")

    p = add("zhu", cmd_zhu, "Zhu algebra image, product, or morphism check")
    _add_levels(p)
    p.add_argument("--u")
    p.add_argument("--v")
    p.add_argument("--check-degree", type=int, dest="check_degree")

    p = add("gram", cmd_gram, "Gram matrix of the contravariant form")
    _add_levels(p, weights=True, module="vacuum-hv1")
    p.add_argument("--degree", type=int, required=True)

    p = add("positivity", cmd_positivity, "per-degree positivity of the contravariant form")
    _add_levels(p, weights=True, module="vacuum-hv1")
    p.add_argument("--max-degree", type=int, default=4, dest="max_degree")

    p = add("unitary", cmd_unitary, "closed-form unitarity classification")
    p.add_argument("--l1", type=rational, required=True)
    p.add_argument("--l2", type=rational, required=True)
    p.add_argument("--l3", type=rational, required=True)
    p.add_argument("--h1", type=rational)
    p.add_argument("--h2", type=rational)
    p.add_argument("--scan", type=int, help="also run the positivity scan up to this degree")
    p.add_argument("--explain", action="store_true")

    p = add("phi", cmd_phi, "anti-linear involution of the vacuum algebra")
    _add_levels(p)
    p.add_argument("--v", required=True)

    p = add("central-charge", cmd_central_charge, "central charge of a conformal vector")
    _add_levels(p)
    p.add_argument("--vector", required=True, choices=st.CONFORMAL_NAMES)

    p = add("virasoro", cmd_virasoro, "Virasoro relations for a conformal vector")
    _add_levels(p)
    p.add_argument("--vector", required=True, choices=st.CONFORMAL_NAMES)
    p.add_argument("--window", type=int)
    p.add_argument("--max-input-degree", type=int, default=4, dest="max_input_degree")

    p = add("commutant", cmd_commutant, "commutation of omega-tilde modes with I modes")
    _add_levels(p)
    p.add_argument("--window", type=int)
    p.add_argument("--n", type=int)
    p.add_argument("--m", type=int)
    p.add_argument("--max-input-degree", type=int, default=0, dest="max_input_degree")

    p = add("singular", cmd_singular, "singular vectors of the Virasoro vacuum module")
    p.add_argument("--c", type=rational, required=True)
    p.add_argument("--degree", type=int, required=True)

    p = add("cpq", cmd_cpq, "minimal-model central charge and singular degree")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--q", type=int, required=True)

    p = add("tensor-check", cmd_tensor_check, "graded dimensions against the tensor-product character")
    _add_levels(p)
    p.add_argument("--max-degree", type=int, default=12, dest="max_degree")

    p = add("c2dim", cmd_c2dim, "dimension of a graded piece of V / C2(V)")
    p.add_argument("--degree", type=int, required=True)
    p.add_argument("--l1", type=rational, default=S(2))
    p.add_argument("--l2", type=rational, default=S(0))
    p.add_argument("--l3", type=rational, default=S(1))

    p = add("sweep", cmd_sweep, "run a command over a parameter grid into a JSON-lines file")
    p.add_argument("--grid", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--workers", type=int, default=1)

    return parser


def execute(argv: Sequence[str]) -> tuple[Any, int]:
    """Run one command line and return ``(payload, exit code)`` without printing."""
    parser = build_parser()
    try:
        args = parser.parse_args(list(argv))
        return COMMANDS[args.command](args)
    except Inconclusive as exc:
        return {"verdict": "inconclusive", "error": str(exc)}, EXIT_INCONCLUSIVE
    except (InputError, HVError, ValueError, ZeroDivisionError) as exc:
        return {"error": f"{type(exc).__name__}: {exc}"}, EXIT_INPUT


def run(config: RunConfig) -> ResultRecord:
    payload, code = execute(config.argv)
    return ResultRecord(config, payload, code)


def main(argv: Sequence[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    if not argv or argv[0] in ("-h", "--help") or argv[-1] in ("-h", "--help"):
        try:
            build_parser().parse_args(argv or ["--help"])
        except SystemExit as exc:
            return int(exc.code or 0)
        except InputError as exc:
            print(dumps({"error": str(exc)}))
            return EXIT_INPUT
    if argv == ["--version"]:
        print(__version__)
        return EXIT_OK
    payload, code = execute(argv)
    print(dumps(payload))
    if code == EXIT_INPUT:
        print(payload["error"], file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
