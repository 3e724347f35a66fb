"""Command-line front end.

Exit codes: 0 success / all checks pass, 1 verification failure (with a
machine-readable JSON report on stdout), 2 usage error.  JSON output is the
stable machine contract; plain text is one line per fact.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

from .catalog import UnknownEntryError, load_catalog
from .degen import DegenerationFamily, UnstableFitError, d_invariant, verify_family
from .diagram import check_diagram, count_classes, diagram_dot
from .exact import QQ, Matrix
from .modules import fingerprint, submodules_of_degree
from .pencils import Pencil, classify_pencil
from .tensor import e_space, genericity_pattern, stabilizer_dimension, strassen_and_end_closed
from .triplealg import coordinate_modules, one_one_one_algebra


def _emit(args, payload, plain_lines):
    if args.json:
        json.dump(payload, sys.stdout, indent=1, default=str)
        sys.stdout.write("\n")
    else:
        for line in plain_lines:
            print(line)


def cmd_catalog(args):
    cat = load_catalog()
    if args.action == "list":
        entries = cat.list_entries(args.m, args.filter)
        payload = [e.name for e in entries]
        _emit(args, payload, payload)
        return 0
    entry = cat.get_entry(args.name)
    payload = {
        "name": entry.name,
        "m": entry.m,
        "form": entry.form.to_json(),
        "generic": entry.generic,
        "end_closed": entry.end_closed,
        "minimal_border_rank": entry.minimal_border_rank,
        "self_dual_module": entry.self_dual_module,
    }
    lines = [f"{k}: {v}" for k, v in payload.items() if k != "form"]
    _emit(args, payload, lines)
    return 0


def cmd_invariants(args):
    cat = load_catalog()
    entry = cat.get_entry(args.name)
    t = entry.tensor
    pat = genericity_pattern(t)
    stab = stabilizer_dimension(t)
    alg = one_one_one_algebra(t)
    payload = {
        "name": entry.name,
        "concise": pat.concise,
        "one_generic": {"A": pat.one_generic_A, "B": pat.one_generic_B, "C": pat.one_generic_C},
        "stabilizer_dim": stab,
        "one_one_one_dim": alg.dim,
        "seed": args.seed,
    }
    if entry.generic[0]:
        es = e_space(t)
        commutes, end_closed = strassen_and_end_closed(es)
        payload["commuting"] = commutes
        payload["end_closed"] = end_closed
        payload["fingerprint"] = cat.fingerprint_of(entry.name).as_tuple()
    lines = [f"{k}: {v}" for k, v in payload.items() if k != "fingerprint"]
    _emit(args, payload, lines)
    return 0


def cmd_espace(args):
    cat = load_catalog()
    es = e_space(cat.tensor_of(args.name))
    payload = {
        "name": args.name,
        "alpha": [str(a) for a in es.alpha_used],
        "basis": [[[str(x) for x in row] for row in b.data] for b in es.basis],
    }
    lines = [f"alpha: {payload['alpha']}"] + [f"e_{i}: {b}" for i, b in enumerate(payload["basis"])]
    _emit(args, payload, lines)
    return 0


def cmd_one11(args):
    cat = load_catalog()
    alg = one_one_one_algebra(cat.tensor_of(args.name))
    payload = {
        "name": args.name,
        "dim": alg.dim,
        "contains_unit": alg.contains_unit,
        "closed": alg.is_closed(),
        "sharp": alg.dim == cat.get_entry(args.name).m,
    }
    _emit(args, payload, [f"{k}: {v}" for k, v in payload.items()])
    return 0


def cmd_coord_modules(args):
    cat = load_catalog()
    mods = coordinate_modules(cat.tensor_of(args.name))
    from .certify import _class_of

    payload = {"name": args.name, "factors": {}}
    for label, mod in zip("ABC", mods):
        cls = _class_of(cat, fingerprint(mod))
        payload["factors"][label] = {"module": mod.to_json(), "class": cls}
    lines = [f"{label}: {payload['factors'][label]['class']}" for label in "ABC"]
    _emit(args, payload, lines)
    return 0


def cmd_dinv(args):
    cat = load_catalog()
    t = cat.tensor_of(args.name)
    dirs = [args.dir] if args.dir else list("ABC")
    payload = {"name": args.name, "r": args.r, "reports": {}}
    lines = []
    code = 0
    for d in dirs:
        try:
            rep = d_invariant(t, d, args.r)
            payload["reports"][d] = rep.to_json()
            lines.append(f"{d}: dimension {rep.dimension} (residual {rep.residual:.3f})")
        except UnstableFitError as exc:
            payload["reports"][d] = {"error": str(exc)}
            lines.append(f"{d}: unstable fit ({exc})")
            code = 1
    _emit(args, payload, lines)
    return code


def cmd_submodules(args):
    cat = load_catalog()
    mod = cat.module_of(args.name).reduce_mod_p(args.p)
    subs = submodules_of_degree(mod, args.deg, jobs=args.jobs)
    payload = {
        "name": args.name,
        "p": args.p,
        "degree": args.deg,
        "count": len(subs),
        "submodules": [
            {
                "pivots": s.pivots,
                "basis": [list(r) for r in s.basis],
                "cyclic": s.cyclic,
                "min_generators": s.min_generators,
                "ann_linear": s.ann_linear,
            }
            for s in subs
        ],
    }
    lines = [f"count: {len(subs)}"] + [
        f"pivots {s.pivots}: cyclic={s.cyclic} min_generators={s.min_generators} ann={s.ann_linear}"
        for s in subs
    ]
    _emit(args, payload, lines)
    return 0


def cmd_verify_family(args):
    path = Path(args.file)
    if not path.exists():
        print(f"error: no such file {path}", file=sys.stderr)
        return 2
    fam = DegenerationFamily.from_json(json.loads(path.read_text()))
    rep = verify_family(fam)
    _emit(
        args,
        rep.to_json(),
        [f"{fam.source} -> {fam.target}: {'PASS' if rep.ok else 'FAIL'}"]
        + [f"  {c}: {d}" for c, d in rep.failures],
    )
    return 0 if rep.ok else 1


def cmd_check_diagram(args):
    cat = load_catalog()
    fixtures = Path(args.fixtures) if args.fixtures else None
    rep = check_diagram(fixtures, cat, certify=not args.skip_certificates, all_pairs_audit=args.audit)
    if args.dot:
        Path(args.dot).write_text(diagram_dot(rep, cat))
    lines = [
        f"verified edges: {len(rep.verified_edges)}",
        f"fixture-pending edges: {len(rep.pending_edges)}",
        f"failed families: {len(rep.failed_families)}",
        f"certified non-edges: {len(rep.certified)}",
        f"figure-kind mismatches: {sum(1 for c in rep.certified if not c[4])}",
        f"monotonicity failures: {len(rep.monotonicity_failures)}",
        f"acyclic: {rep.acyclic}",
        f"m4 restriction ok: {rep.m4_restriction_ok}",
        f"overall: {'PASS' if rep.ok else 'FAIL'}",
    ]
    _emit(args, rep.to_json(), lines)
    return 0 if rep.ok else 1


def cmd_count(args):
    counts = count_classes(args.m)
    payload = {
        "m": args.m,
        "up_to_permutation": counts.up_to_permutation,
        "up_to_isomorphism": counts.up_to_isomorphism,
        "subspaces": counts.subspaces,
    }
    _emit(
        args,
        payload,
        [
            f"up to permutation: {counts.up_to_permutation}",
            f"up to isomorphism: {counts.up_to_isomorphism}",
            f"subspaces: {counts.subspaces}",
        ],
    )
    return 0


def cmd_classify_pencil(args):
    path = Path(args.file)
    if not path.exists():
        print(f"error: no such file {path}", file=sys.stderr)
        return 2
    obj = json.loads(path.read_text())
    basis = [Matrix(QQ, [[Fraction(x) for x in row] for row in mat]) for mat in obj["basis"]]
    if obj.get("shape") == "2x2" or (len(basis) == 1):
        pen = Pencil.line(basis[0])
    else:
        pen = Pencil.of(*basis)
    cls = classify_pencil(pen)
    payload = {
        "label": cls.label,
        "generic_rank": cls.generic_rank,
        "rank_one_divisor_degree": cls.rank_one_divisor_degree,
        "discriminant_zero": cls.discriminant_zero,
        "common_kernel_dim": cls.common_kernel_dim,
        "image_span_dim": cls.image_span_dim,
    }
    _emit(args, payload, [f"{k}: {v}" for k, v in payload.items()])
    return 0


def cmd_self_check(args):
    cat = load_catalog()
    failures = cat.self_check()
    payload = {"failures": failures, "entries": len(cat.entries)}
    _emit(
        args,
        payload,
        [f"checked {len(cat.entries)} entries"]
        + (failures if failures else ["all stored expectations hold"]),
    )
    return 0 if not failures else 1


def build_parser():
    ap = argparse.ArgumentParser(prog="mbrank", description=__doc__)
    ap.add_argument("--json", action="store_true", help="machine-readable output")
    ap.add_argument("--seed", type=int, default=0, help="seed for randomized subroutines")
    ap.add_argument("--jobs", type=int, default=1, help="worker cap for parallel enumeration")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("catalog", help="list entries or show one")
    p.add_argument("action", choices=["list", "show"])
    p.add_argument("name", nargs="?")
    p.add_argument("--m", type=int)
    p.add_argument("--filter", choices=["minimal-border-rank", "one-generic", "one-degenerate"])
    p.set_defaults(func=cmd_catalog)

    p = sub.add_parser("invariants", help="recompute the invariants of an entry")
    p.add_argument("name")
    p.set_defaults(func=cmd_invariants)

    p = sub.add_parser("espace", help="E-space basis of a 1_A-generic entry")
    p.add_argument("name")
    p.set_defaults(func=cmd_espace)

    p = sub.add_parser("one11", help="111-algebra dimension and closure")
    p.add_argument("name")
    p.set_defaults(func=cmd_one11)

    p = sub.add_parser("coord-modules", help="factor modules over the 111-algebra")
    p.add_argument("name")
    p.set_defaults(func=cmd_coord_modules)

    p = sub.add_parser("dinv", help="finite-field intersection dimensions")
    p.add_argument("name")
    p.add_argument("--dir", choices=["A", "B", "C"])
    p.add_argument("--r", type=int, required=True)
    p.set_defaults(func=cmd_dinv)

    p = sub.add_parser("submodules", help="invariant subspaces over F_p")
    p.add_argument("name")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--deg", type=int, required=True)
    p.set_defaults(func=cmd_submodules)

    p = sub.add_parser("verify-family", help="verify a degeneration family file")
    p.add_argument("file")
    p.set_defaults(func=cmd_verify_family)

    p = sub.add_parser("check-diagram", help="verify families and certify non-edges")
    p.add_argument("--fixtures", help="directory of family JSON files")
    p.add_argument("--dot", help="write DOT output here")
    p.add_argument("--skip-certificates", action="store_true")
    p.add_argument("--audit", action="store_true", help="all-pairs coverage audit")
    p.set_defaults(func=cmd_check_diagram)

    p = sub.add_parser("count", help="classification counts")
    p.add_argument("--m", type=int, required=True)
    p.set_defaults(func=cmd_count)

    p = sub.add_parser("classify-pencil", help="classify a pencil JSON file")
    p.add_argument("file")
    p.set_defaults(func=cmd_classify_pencil)

    p = sub.add_parser("self-check", help="recompute every stored catalog expectation")
    p.set_defaults(func=cmd_self_check)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    try:
        return args.func(args)
    except UnknownEntryError as exc:
        print(f"error: unknown entry {exc}", file=sys.stderr)
        return 2
    except (ValueError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
