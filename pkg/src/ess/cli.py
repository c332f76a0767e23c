"""Command-line surface: parse space descriptions, dispatch computations,
emit aligned-text and JSON reports.

Exit codes: 0 success; 2 input/validation error; 3 hypothesis-not-met verdict
under --strict; 4 internal cross-check failure (pipeline disagreement, always
an implementation bug).
"""

from __future__ import annotations

import argparse
import json
import sys

from . import builtins as corpus
from .aomoto import aomoto_betti, aomoto_specialize, universal_aomoto
from .coeffs import FieldDescriptor
from .complexes import (EquivariantComplex, GroupHom, base_change,
                        betti_numbers, change_field, parse_document)
from .errors import CrossCheckError, EssError, InputError
from .groupring import GroupDescriptor
from .modz import homology_decomposition, monodromy_report
from .pages import PageComputation, reznikov_collapse, window_collapse_page
from .twisted import alexander_polynomial, bounds_report, twisted_betti

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_STRICT = 3
EXIT_CROSSCHECK = 4


def emit_json(doc) -> str:
    return json.dumps(doc, sort_keys=True, separators=(",", ":")) + "\n"


def _parse_nu(text: str, group: GroupDescriptor, target: GroupDescriptor):
    """Inline images: either "a=2,b=1,c=1" (by position of '=' names being
    decorative) or plain "2,1,1"."""
    parts = [p.strip() for p in text.split(",") if p.strip()]
    values = []
    for p in parts:
        if "=" in p:
            p = p.split("=", 1)[1]
        values.append(int(p))
    if len(values) != group.num_generators:
        raise InputError(
            f"--nu needs {group.num_generators} images for {group}, got {len(values)}"
        )
    if target.kind == "cyclic":
        return values
    if target.n == 1:
        return [[v] for v in values]
    raise InputError("--nu with inline integers only targets Z or Zmod")


def load_complex(args) -> EquivariantComplex:
    if args.builtin and args.input:
        raise InputError("give exactly one input source (--builtin or a path)")
    if args.builtin:
        doc = corpus.load_builtin_document(args.builtin)
    elif args.input:
        with open(args.input) as fh:
            doc = json.load(fh)
    else:
        raise InputError("an input path or --builtin is required")
    C = parse_document(doc)
    if args.group_quotient:
        target = GroupDescriptor.parse(args.group_quotient)
        if args.nu:
            images = _parse_nu(args.nu, C.group, target)
        elif target.kind == "cyclic":
            images = [1] * C.group.num_generators
        else:
            images = corpus.diagonal_quotient_images(C.group)
        C = base_change(C, GroupHom(C.group, target, images))
    if args.field:
        C = change_field(C, FieldDescriptor.parse(args.field))
    return C


def require_field(C: EquivariantComplex) -> EquivariantComplex:
    if not C.field.is_field:
        raise InputError(
            "this command needs field coefficients; pass --field Q or --field Fp:<p>"
        )
    return C


def _q_range(args, C):
    if args.q_range:
        lo, _, hi = args.q_range.partition(":")
        return range(int(lo), int(hi or lo) + 1)
    return range(C.top + 1)


def cmd_validate(args):
    C = load_complex(args)
    doc = {
        "group": str(C.group),
        "field": str(C.field),
        "dims": C.dims,
        "provenance": C.provenance,
        "minimal": C.is_minimal(),
        "integral_shadow": C.integral_boundaries is not None,
        "valid": True,
    }
    if args.json:
        sys.stdout.write(emit_json(doc))
    else:
        print("valid complex:", ", ".join(f"{k}={v}" for k, v in doc.items()))
    return EXIT_OK


def cmd_betti(args):
    C = require_field(load_complex(args))
    b = betti_numbers(C)
    if args.json:
        sys.stdout.write(emit_json({"betti": b, "field": str(C.field)}))
    else:
        print(f"b_q(X, {C.field}) = {tuple(b)}")
    return EXIT_OK


def cmd_pages(args):
    C = require_field(load_complex(args))
    if C.group.kind == "cyclic" and C.group.prime_power and \
            C.field.characteristic == C.group.prime_power[0]:
        tables, hom = reznikov_collapse(C, S_max=args.S)
        collapse = window_collapse_page(tables)
        extra = {"homology_dims": hom}
    else:
        comp = PageComputation(C, R_max=args.R, S_max=args.S)
        tables = comp.pages()
        collapse = window_collapse_page(tables)
        extra = {}
    if args.json:
        doc = {"pages": [t.to_json() for t in tables], "window_collapse_page": collapse}
        doc.update(extra)
        sys.stdout.write(emit_json(doc))
    else:
        for t in tables:
            print(t.to_text())
            print()
        print(f"window collapse at page: {collapse}")
        if extra:
            print(f"homology dims (independent rank computation): {extra['homology_dims']}")
    return EXIT_OK


def cmd_decompose(args):
    C = require_field(load_complex(args))
    rows = []
    for q in _q_range(args, C):
        dec = homology_decomposition(C, q)
        rows.append(dec.to_json(q=q))
    if args.json:
        sys.stdout.write(emit_json({"decompositions": rows}))
    else:
        for row in rows:
            blocks = row["t_minus_1_blocks"]
            others = ", ".join(
                f"{o['poly']} (mult {o['mult']})" for o in row["other_primary"]
            ) or "none"
            print(
                f"H_{row['q']}: free rank {row['free_rank']}, (t-1)-blocks {blocks}, "
                f"other primary: {others}, filtration "
                f"{'separated' if row['separated'] else 'not separated'}"
            )
    return EXIT_OK


def cmd_monodromy(args):
    C = require_field(load_complex(args))
    rep = monodromy_report(C, args.k_max if args.k_max is not None else C.top)
    if args.json:
        sys.stdout.write(emit_json(rep.to_json()))
    else:
        for row in rep.rows:
            print(
                f"q={row['q']}: free={row['free_rank']} blocks={row['t_minus_1_blocks']} "
                f"beta={row['beta']} trivial-action={row['condition_trivial_action']}"
            )
        for k, v in enumerate(rep.verdicts):
            print(f"monodromy trivial through degree {k}: {v}")
    return EXIT_OK


def cmd_aomoto(args):
    C = require_field(load_complex(args))
    data = aomoto_betti(C)
    if args.json:
        sys.stdout.write(emit_json(data.to_json()))
    else:
        print(f"beta_q(X, nu_{C.field}) = {tuple(data.beta)}  (E^2 route)")
    return EXIT_OK


def cmd_universal_aomoto(args):
    C = require_field(load_complex(args))
    U = universal_aomoto(C)
    doc = U.to_json()
    if args.spec_at:
        z = [int(x) for x in args.spec_at.split(",")]
        doc["specialization"] = {"z": z, "beta": aomoto_specialize(U, z).beta}
    if args.json:
        sys.stdout.write(emit_json(doc))
    else:
        for q, mat in enumerate(doc["differentials"]):
            print(f"D^{q} =", mat)
        if "specialization" in doc:
            s = doc["specialization"]
            print(f"beta at z={s['z']}: {tuple(s['beta'])}")
    return EXIT_OK


def cmd_twisted(args):
    C = load_complex(args)  # twisted_betti validates coefficients itself
    if args.d is None:
        raise InputError("--d <order> is required")
    b = twisted_betti(C, args.d)
    if args.json:
        sys.stdout.write(emit_json({"d": args.d, "twisted_betti": b}))
    else:
        print(f"b_q(X, nu/{args.d}) = {tuple(b)}")
    return EXIT_OK


def cmd_alexander(args):
    C = load_complex(args)
    res = alexander_polynomial(C)
    if args.json:
        doc = {"alexander_polynomial": str(res.polynomial)}
        if res.notice:
            doc["notice"] = res.notice
        sys.stdout.write(emit_json(doc))
    else:
        print(f"Delta = {res.polynomial}")
        if res.notice:
            print(f"note: {res.notice}")
    return EXIT_OK


def cmd_bounds(args):
    C = load_complex(args)
    if args.p is None:
        raise InputError("--p <prime> is required")
    if args.nu:
        images = [int(p.split("=", 1)[-1]) for p in args.nu.split(",") if p.strip()]
    else:
        images = [1] * C.group.num_generators
    rep = bounds_report(C, images, args.p, args.r)
    if args.json:
        sys.stdout.write(emit_json(rep.to_json()))
    else:
        print(rep.to_text())
    if args.strict and rep.verdicts["cohobound"] != "holds":
        return EXIT_STRICT
    return EXIT_OK


def cmd_selftest(args):
    from . import selftest

    failures = selftest.run_all(verbose=not args.json)
    if args.json:
        sys.stdout.write(emit_json({"failures": failures}))
    return EXIT_OK if not failures else EXIT_CROSSCHECK


_VERBS = {
    "validate": cmd_validate,
    "betti": cmd_betti,
    "pages": cmd_pages,
    "decompose": cmd_decompose,
    "monodromy": cmd_monodromy,
    "aomoto": cmd_aomoto,
    "universal-aomoto": cmd_universal_aomoto,
    "twisted": cmd_twisted,
    "alexander": cmd_alexander,
    "bounds": cmd_bounds,
    "selftest": cmd_selftest,
}


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="ess",
        description="Equivariant spectral sequences of finite complexes, "
        "exactly: pages, module decompositions, Aomoto and twisted Betti "
        "numbers, and the modular bound reports.",
    )
    sub = ap.add_subparsers(dest="verb", required=True)
    for verb in _VERBS:
        p = sub.add_parser(verb)
        p.add_argument("input", nargs="?", help="path to a JSON space description")
        p.add_argument("--builtin", help="named built-in input (see README)")
        p.add_argument("--field", help="coefficients: Q, Fp:<p>, cyclotomic:<d>, Z")
        p.add_argument(
            "--group-quotient",
            help="base change the deck group along a surjection onto Z or Zmod:<m>",
        )
        p.add_argument("--nu", help="images for the quotient, e.g. 'a=2,b=1,c=1' or '2,1,1'")
        p.add_argument("--json", action="store_true", help="emit canonical JSON")
        p.add_argument("--strict", action="store_true",
                       help="exit 3 when a requested hypothesis is not met")
        if verb == "pages":
            p.add_argument("--R", type=int, default=3, help="last page (default 3)")
            p.add_argument("--S", type=int, default=3, help="max filtration degree (default 3)")
        if verb in ("decompose",):
            p.add_argument("--q-range", help="degree range lo:hi (default all)")
        if verb == "monodromy":
            p.add_argument("--k-max", type=int, help="report through this degree")
        if verb == "twisted":
            p.add_argument("--d", type=int, help="character order")
        if verb == "bounds":
            p.add_argument("--p", type=int, help="prime")
            p.add_argument("--r", type=int, default=1, help="exponent (default 1)")
        if verb == "universal-aomoto":
            p.add_argument("--spec-at", help="also specialize at z, e.g. '1,1'")
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return _VERBS[args.verb](args)
    except CrossCheckError as exc:
        print(f"FATAL cross-check failure (implementation bug): {exc}", file=sys.stderr)
        return EXIT_CROSSCHECK
    except EssError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
