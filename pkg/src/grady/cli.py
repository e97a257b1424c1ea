"""Command-line front end.

    grady gda LABEL
    grady build -f params.json
    grady fine -f params.json
    grady universal-group --gda L --q Q --s S --d t1,...,tq [--signs e1,...,eq]
    grady equiv A.json B.json
    grady enumerate --family F --size N [--signature K]
    grady table m8|d4 [--format json|text]
    grady selftest

Exit status: 0 on success, 1 on domain errors (one line on stderr),
2 on usage errors.
"""
from __future__ import annotations

import argparse
import json
import random
import sys
from importlib import resources
from typing import Optional, Sequence

from .abelian import FinAbGroup, parse_word, universal_group_M, universal_group_formula
from .classify import FAMILY_ORDER, KINDS, enumerate_fine, equivalent
from .gdivalg import build_gda
from .gf2forms import CapacityError, hyperbolic_quad, isometry_group, standard_symplectic
from .gradedmat import (GradingParams, build, check_closed_forms, is_fine, params_from_dict,
                        validate, verify_grading)
from .lietransfer import (enumerate_lie, lie_dimension, make_lie_grading,
                          real_forms, table_d4, table_json, table_m8, table_text)

_EXCHANGE_FAMILIES = ("M(I)(2m;R;k)", "M(I)(2m;H;k)", "M(II)(2m+1;R)", "M(II)(2m+1;H)")


class DomainError(Exception):
    pass


def _dump(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True, ensure_ascii=False)


def _load_params(path: str):
    try:
        with open(path, encoding="utf-8") as fh:
            obj = json.load(fh)
    except OSError as exc:
        raise DomainError(f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise DomainError(f"{path} is not valid JSON (line {exc.lineno})") from None
    if not isinstance(obj, dict):
        raise DomainError(f"{path} must hold a JSON object")
    try:
        return params_from_dict(obj)
    except (KeyError, TypeError, ValueError) as exc:
        raise DomainError(f"{path}: malformed params ({exc})") from None


# ---------------------------------------------------------------- subcommands

def cmd_gda(args) -> str:
    D = build_gda(args.label)
    T = D.T
    info = {"label": D.label, "family": D.family, "Delta": D.Delta, "center": D.center,
            "support": T.iso_type(), "support_size": T.size(), "real_dimension": D.real_dim(),
            "matrix_degree": D.ell, "phi0": D.involution_type()}
    return _dump(info)


def cmd_build(args) -> str:
    p = _load_params(args.file)
    alg = build(p)
    rep = verify_grading(alg)
    closed = check_closed_forms(alg)
    out = {"params": p.to_dict(), "universal": alg.U.iso_type(), "dimension": alg.dim(),
           "real_dimension": alg.real_dim(),
           "census": {str(d): c for d, c in sorted(alg.census().items())},
           "verified": bool(rep), "closed_forms": bool(closed)}
    if not rep:
        out["failure"] = rep.failure
    try:
        g = make_lie_grading(p)
    except ValueError:
        g = None
    if g is not None:
        out["lie"] = {"label": g.label, "form": g.form, "dimension": g.total(),
                      "census": {str(d): c for d, c in sorted(g.dims.items())},
                      "flags": g.flags}
    if not rep or not closed:
        print(_dump(out))
        raise DomainError("grading verification failed: " + (rep.failure or closed.failure))
    return _dump(out)


def cmd_fine(args) -> str:
    p = _load_params(args.file)
    fine, cert = is_fine(p)
    out = {"fine": fine, "reason": cert["reason"]}
    ref = cert.get("refinement")
    if ref is not None:
        out["refinement"] = {"group": ref.group.iso_type(), "description": ref.description,
                             "components": len(ref.components)}
    return _dump(out)


def _split(text: Optional[str]) -> list:
    if text is None or not text.strip():
        return []
    return [w.strip() for w in text.split(",")]


def cmd_universal_group(args) -> str:
    D = build_gda(args.gda)
    words = _split(args.d)
    if len(words) != args.q:
        raise DomainError(f"--d lists {len(words)} degrees but --q is {args.q}")
    degs = [parse_word(D.T, w) for w in words]
    signs = [int(x) for x in _split(args.signs)] if args.signs else [1] * args.q
    if len(signs) != args.q:
        raise DomainError(f"--signs lists {len(signs)} signs but --q is {args.q}")
    if args.q + 2 * args.s < 1:
        raise DomainError("need q + 2s >= 1")
    if args.signs is not None:
        # explicit signs: the entries must be admissible for one of delta = +1, -1
        errors = []
        for delta in (1, -1):
            try:
                validate(GradingParams(D.label, args.q, args.s, tuple(zip(degs, signs)), delta))
                break
            except ValueError as exc:
                errors.append(str(exc))
        else:
            raise DomainError(errors[0])
    U, _, _ = universal_group_M(D.T, args.q, args.s, degs)
    return U.iso_type()


def cmd_equiv(args) -> str:
    p1 = _load_params(args.a)
    p2 = _load_params(args.b)
    return "equivalent" if equivalent(p1, p2) else "not equivalent"


def cmd_enumerate(args) -> str:
    fam = args.family
    sig = None if args.signature is None else [args.signature]
    if fam in KINDS:
        classes = enumerate_fine(args.size, fam, None, sig)
    elif fam in FAMILY_ORDER:
        kinds = ("exchange",) if fam in _EXCHANGE_FAMILIES else \
            ("orthogonal", "symplectic", "second-kind")
        classes = []
        for kind in kinds:
            classes += enumerate_fine(args.size, kind, [fam], sig)
    else:
        raise DomainError(f"unknown family {fam!r}; use one of {', '.join(KINDS)} "
                          f"or a family id ({', '.join(FAMILY_ORDER)})")
    return _dump([c.to_dict() for c in classes])


def cmd_table(args) -> str:
    t8 = table_m8()
    table = t8 if args.which == "m8" else table_d4(t8)
    return table_json(table).rstrip("\n") if args.format == "json" else table_text(table).rstrip("\n")


# ---------------------------------------------------------------- selftest

def golden(name: str) -> str:
    return resources.files("grady").joinpath("golden", name).read_text(encoding="utf-8")


def _check_orders() -> bool:
    want = {("sp", 1): 6, ("+", 1): 2, ("-", 1): 6, ("sp", 2): 720, ("+", 2): 72, ("-", 2): 120}
    for (kind, m), n in want.items():
        if kind == "sp":
            got = isometry_group(standard_symplectic(m), "pairing").order()
        else:
            got = isometry_group(hyperbolic_quad(m, 1 if kind == "+" else -1), "quad").order()
        if got != n:
            return False
    return True


def _check_universal(rng: random.Random, trials: int = 60) -> bool:
    shapes = [(2, 2), (4, 4), (2, 2, 4, 4), (3, 3), (8, 8), (2, 2, 2, 2)]
    for _ in range(trials):
        T = FinAbGroup(rng.choice(shapes))
        q = rng.randint(1, 5)
        tb = [tuple(rng.randrange(n) for n in T.orders) for _ in range(q)]
        U, _, _ = universal_group_M(T, q, 0, tb)
        if U.iso_type() != universal_group_formula(T, q, tb):
            return False
    return True


def _check_gradings() -> bool:
    for n, kind in ((4, "orthogonal"), (4, "symplectic"), (3, "second-kind"), (4, "exchange")):
        for inv in enumerate_fine(n, kind):
            alg = build(inv.representative)
            if not verify_grading(alg) or not check_closed_forms(alg):
                return False
    return True


def _check_lie() -> bool:
    for series, r in (("A-inner-sl", 3), ("A-outer-su", 3), ("B", 2), ("C", 2), ("D", 3)):
        for spec in real_forms(series, r):
            for g in enumerate_lie(spec):
                if g.flags or g.total() != lie_dimension(spec):
                    return False
    return True


def cmd_selftest(args) -> str:
    rng = random.Random(20240601)
    t8 = table_m8()
    checks = [
        ("classical group orders", _check_orders),
        ("universal group formula vs Smith form", lambda: _check_universal(rng)),
        ("grading axioms and closed forms", _check_gradings),
        ("Lie census totals", _check_lie),
        ("table m8 matches golden file", lambda: table_text(t8) == golden("table_m8.txt")),
        ("table d4 matches golden file", lambda: table_text(table_d4(t8)) == golden("table_d4.txt")),
    ]
    lines = []
    failed = 0
    for name, fn in checks:
        ok = bool(fn())
        failed += not ok
        lines.append(f"{'ok  ' if ok else 'FAIL'}  {name}")
    lines.append(f"{len(checks) - failed}/{len(checks)} checks passed")
    text = "\n".join(lines)
    if failed:
        print(text)
        raise DomainError(f"{failed} selftest check(s) failed")
    return text


# ---------------------------------------------------------------- parser

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="grady", description="Fine gradings on real matrix "
                                 "algebras with involution and on real classical Lie algebras.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gda", help="describe a graded-division algebra, e.g. 'D(2;+1)'")
    p.add_argument("label")
    p.set_defaults(func=cmd_gda)

    for name, fn, text in (("build", cmd_build, "build and verify a graded algebra"),
                           ("fine", cmd_fine, "decide fineness with a certificate")):
        p = sub.add_parser(name, help=text)
        p.add_argument("-f", "--file", required=True, help="params JSON file")
        p.set_defaults(func=fn)

    p = sub.add_parser("universal-group", help="universal group of M(D,q,s,dbar)")
    p.add_argument("--gda", required=True)
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--s", type=int, required=True)
    p.add_argument("--d", default="", help="comma-separated degrees, e.g. a,b")
    p.add_argument("--signs", default=None, help="comma-separated signs, e.g. 1,-1")
    p.set_defaults(func=cmd_universal_group)

    p = sub.add_parser("equiv", help="decide equivalence of two params files")
    p.add_argument("a")
    p.add_argument("b")
    p.set_defaults(func=cmd_equiv)

    p = sub.add_parser("enumerate", help="list the fine gradings up to equivalence")
    p.add_argument("--family", required=True,
                   help="involution kind (orthogonal, symplectic, second-kind, exchange) "
                        "or a family id")
    p.add_argument("--size", type=int, required=True, help="complex matrix size n")
    p.add_argument("--signature", type=int, default=None, help="matrix signature filter")
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("table", help="regenerate a summary table")
    p.add_argument("which", choices=("m8", "d4"))
    p.add_argument("--format", choices=("json", "text"), default="text")
    p.set_defaults(func=cmd_table)

    p = sub.add_parser("selftest", help="run the built-in checks")
    p.set_defaults(func=cmd_selftest)
    return ap


def run(argv: Optional[Sequence[str]] = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        text = args.func(args)
    except CapacityError as exc:
        print(f"error: capacity exceeded: {exc}", file=err)
        return 1
    except DomainError as exc:
        print(f"error: {exc}", file=err)
        return 1
    except ValueError as exc:
        print(f"error: {exc}", file=err)
        return 1
    print(text, file=out)
    return 0


def main(argv: Optional[Sequence[str]] = None) -> int:
    return run(argv)


if __name__ == "__main__":
    raise SystemExit(main())
