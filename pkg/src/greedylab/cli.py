"""Command-line driver: ``list``, ``estimate``, ``verify`` and ``curves``.

Exit codes: 0 success (every check passed or was hypothesis-gated),
1 a theorem check failed, 2 usage error, 3 I/O or catalog error.
"""
from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from . import __version__
from .catalog import CatalogError, ResultStore, emit_curves, full_catalog, run_estimate
from .theorems import SUITE_NAMES, run_suite

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_IO = 0, 1, 2, 3

QUANTITY_CHOICES = ("phi", "theta", "lambda", "rho", "gamma", "Lambda", "succ", "qglc-v", "one-sign")


class UsageError(Exception):
    pass


def _levels(text):
    if not text:
        return None
    try:
        return [Fraction(t.strip()) for t in text.split(",") if t.strip()]
    except ValueError:
        raise UsageError(f"bad level list {text!r}") from None


def _entry(cat, ident):
    if ident not in cat:
        raise UsageError(f"unknown basis id {ident!r} (see 'greedylab list')")
    return cat[ident]


def _dump(obj, out_path=None):
    text = json.dumps(obj, sort_keys=True, indent=2) + "\n"
    if out_path:
        with open(out_path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def cmd_list(args, cat):
    for ident in sorted(cat):
        e = cat[ident]
        norm = e.space.norm.describe()
        params = ",".join(f"{k}={v}" for k, v in sorted(norm.items()) if k not in ("family", "T"))
        fam = norm["family"] + (f"({params})" if params else "")
        print(f"{ident}\tdim={e.dim}\tp={e.space.p:g}\t{fam}\t{e.constructor}")
    return EXIT_OK


def cmd_estimate(args, cat):
    entry = _entry(cat, args.basis)
    store = None if args.no_cache else ResultStore()
    try:
        recs = run_estimate(entry, args.quantity, _levels(args.levels), args.grid,
                            budget=args.budget, seed=args.seed, store=store, workers=args.workers)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    _dump([dict(r.to_dict(), cache_hit=hit) for r, hit in recs], args.out)
    return EXIT_OK


def cmd_verify(args, cat):
    entry = _entry(cat, args.basis)
    reports = run_suite(entry.basis(), args.suite, args.grid, budget=args.budget, seed=args.seed,
                        workers=args.workers)
    failed = [r for r in reports if not r.passed]
    doc = {
        "basis": entry.id,
        "suite": args.suite,
        "m": args.grid,
        "version": __version__,
        "summary": {
            v: sum(r.verdict == v for r in reports)
            for v in ("pass", "fail", "hypothesis-fail", "out-of-scope")
        },
        "reports": [r.to_dict() for r in reports],
    }
    _dump(doc, args.out)
    for r in reports:
        print(f"{r.verdict:16s} {r.check_id}", file=sys.stderr)
    return EXIT_FAIL if failed else EXIT_OK


def cmd_curves(args, cat):
    ids = [s for s in (args.bases or "").split(",") if s]
    entries = [_entry(cat, i) for i in ids]
    store = None if args.no_cache else ResultStore()
    try:
        text = emit_curves(entries, args.quantity, args.grid, out=args.out, levels=_levels(args.levels),
                           envelope=args.envelope, budget=args.budget, seed=args.seed, store=store)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    if not args.out:
        sys.stdout.write(text)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="greedylab", description=__doc__.splitlines()[0])
    ap.add_argument("--catalog", help="extra catalog file (JSON) merged with the built-ins")
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="verb", required=True)

    def search_opts(p):
        p.add_argument("--grid", type=int, required=True, help="grid denominator m")
        p.add_argument("--budget", type=int, default=None, help="exhaustive budget (default 10^7)")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--workers", type=int, default=1)

    sub.add_parser("list", help="list catalog entries")

    p = sub.add_parser("estimate", help="estimate a threshold quantity")
    p.add_argument("--basis", required=True)
    p.add_argument("--quantity", required=True, choices=QUANTITY_CHOICES)
    p.add_argument("--levels", help="comma-separated levels such as 1/4,1/2,1")
    p.add_argument("--out")
    p.add_argument("--no-cache", action="store_true")
    search_opts(p)

    p = sub.add_parser("verify", help="run theorem checks")
    p.add_argument("--basis", required=True)
    p.add_argument("--suite", required=True, choices=SUITE_NAMES)
    p.add_argument("--out")
    search_opts(p)

    p = sub.add_parser("curves", help="write threshold curves as CSV")
    p.add_argument("--quantity", required=True, choices=QUANTITY_CHOICES)
    p.add_argument("--bases", default="")
    p.add_argument("--levels")
    p.add_argument("--out")
    p.add_argument("--envelope", action="store_true", help="add the (G+1)/a^G - 1 column")
    p.add_argument("--no-cache", action="store_true")
    search_opts(p)
    return ap


COMMANDS = {"list": cmd_list, "estimate": cmd_estimate, "verify": cmd_verify, "curves": cmd_curves}


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if getattr(args, "grid", 1) is not None and getattr(args, "grid", 1) < 1:
        print("greedylab: error: --grid must be positive", file=sys.stderr)
        return EXIT_USAGE
    try:
        cat = full_catalog(args.catalog)
        return COMMANDS[args.verb](args, cat)
    except UsageError as exc:
        print(f"greedylab: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (CatalogError, OSError) as exc:
        print(f"greedylab: error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
