"""Command-line front end: cohomology tables, spectral pages, verification.

Exit codes are a stable contract for CI: 0 success / all checks pass,
1 verification failure, 2 usage or bounds error.  Identical invocations
produce byte-identical stdout; timing goes to stderr so the payload stays
deterministic.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
import time
from pathlib import Path

from . import __version__
from .abgroups import FgAbGroup
from .bockstein import pages, verify_page_identification
from .cohomology import integral_cohomology
from .derham import basis
from .modp import is_prime, valuation
from .theorems import STATEMENTS, sweep

SCHEMA_VERSION = "1"
DEFAULT_RMAX = 4
DEFAULT_NMAX = 16


class BoundsError(Exception):
    pass


def _check_bounds(args, r=None, n=None) -> None:
    if getattr(args, "unsafe_bounds", False):
        return
    if r is not None and not 1 <= r <= DEFAULT_RMAX:
        raise BoundsError(
            f"rank {r} outside safe bounds 1..{DEFAULT_RMAX} "
            "(use --unsafe-bounds to override)")
    if n is not None and not 0 <= n <= DEFAULT_NMAX:
        raise BoundsError(
            f"degree {n} outside safe bounds 0..{DEFAULT_NMAX} "
            "(use --unsafe-bounds to override)")


def _document(command: str, parameters: dict, results) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "command": command,
        "parameters": parameters,
        "results": results,
    }


def _group_json(G: FgAbGroup) -> dict:
    return {"free_rank": G.free_rank,
            "invariant_factors": list(G.invariant_factors)}


def _group_latex(G: FgAbGroup) -> str:
    from collections import Counter

    parts = []
    if G.free_rank == 1:
        parts.append(r"\mathbb{Z}")
    elif G.free_rank > 1:
        parts.append(r"\mathbb{Z}^{%d}" % G.free_rank)
    for d, count in sorted(Counter(G.invariant_factors).items()):
        base = r"\mathbb{Z}/%d" % d
        parts.append(base if count == 1 else r"(%s)^{%d}" % (base, count))
    return r" \oplus ".join(parts) if parts else "0"


def _emit(args, doc: dict, csv_rows=None, latex_lines=None) -> None:
    if getattr(args, "format", "json") == "json":
        payload = json.dumps(doc, indent=2, sort_keys=False) + "\n"
    elif args.format == "csv":
        if csv_rows is None:
            raise BoundsError("this command has no flat csv form")
        payload = "\n".join(",".join(str(v) for v in row)
                            for row in csv_rows) + "\n"
    else:
        if latex_lines is None:
            raise BoundsError("this command has no latex form")
        payload = "\n".join(latex_lines) + "\n"
    cache_dir = getattr(args, "cache", None)
    if cache_dir:
        path = Path(cache_dir) / _cache_name(doc, args.format)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(payload)
    sys.stdout.write(payload)


def _cache_name(doc: dict, fmt: str) -> str:
    key = json.dumps({"command": doc["command"],
                      "parameters": doc["parameters"], "format": fmt},
                     sort_keys=True)
    digest = hashlib.sha256(key.encode()).hexdigest()[:16]
    ext = {"json": "json", "csv": "csv", "latex": "tex"}[fmt]
    return f"v{SCHEMA_VERSION}_{doc['command']}_{digest}.{ext}"


def _cache_lookup(args, command: str, parameters: dict) -> bool:
    cache_dir = getattr(args, "cache", None)
    if not cache_dir:
        return False
    doc = {"command": command, "parameters": parameters}
    path = Path(cache_dir) / _cache_name(doc, getattr(args, "format", "json"))
    if path.exists():
        sys.stdout.write(path.read_text())
        return True
    return False


def cmd_cohomology(args) -> int:
    _check_bounds(args, r=args.rank, n=args.degree)
    params = {"r": args.rank, "n": args.degree}
    if _cache_lookup(args, "cohomology", params):
        return 0
    H = integral_cohomology(args.rank, args.degree)
    results = [{"i": d.i, **_group_json(d.group)} for d in H.degrees]
    doc = _document("cohomology", params, results)
    csv_rows = [("i", "free_rank", "invariant_factors")]
    csv_rows += [(row["i"], row["free_rank"],
                  ";".join(str(d) for d in row["invariant_factors"]))
                 for row in results]
    latex = [r"\begin{tabular}{ll}", r"$i$ & $H^i$ \\ \hline"]
    latex += [r"$%d$ & $%s$ \\" % (d.i, _group_latex(d.group))
              for d in H.degrees]
    latex.append(r"\end{tabular}")
    _emit(args, doc, csv_rows, latex)
    return 0


def cmd_pages(args) -> int:
    _check_bounds(args, r=args.rank, n=args.degree)
    if not is_prime(args.prime):
        raise BoundsError(f"{args.prime} is not prime")
    params = {"r": args.rank, "n": args.degree, "p": args.prime}
    if args.kmax is not None:
        params["kmax"] = args.kmax
    if _cache_lookup(args, "pages", params):
        return 0
    if args.degree == 0:
        doc = _document("pages", params,
                        {"note": "degenerate: total degree 0 carries the "
                                 "constant Z in degree 0; no pages computed",
                         "pages": []})
        _emit(args, doc, [("k", "i", "dim")], None)
        return 0
    nu = valuation(args.degree, args.prime)
    kmax = args.kmax if args.kmax is not None else nu + 1
    page_list = pages(args.rank, args.degree, args.prime, kmax)
    rows = []
    out_pages = []
    for page in page_list:
        entry = {"k": page.k, "dims": list(page.dims)}
        if 1 <= page.k <= nu:
            ident = verify_page_identification(
                args.rank, args.degree, args.prime, page.k)
            entry["identified_with"] = {
                "n": args.degree // args.prime ** page.k,
                "status": "pass" if ident.ok else "fail"}
        else:
            entry["expected_zero"] = page.is_zero
        out_pages.append(entry)
        rows += [(page.k, i, dim) for i, dim in enumerate(page.dims)]
    doc = _document("pages", params, {"nu": nu, "pages": out_pages})
    _emit(args, doc, [("k", "i", "dim")] + rows, None)
    return 0


def cmd_basis(args) -> int:
    _check_bounds(args, r=args.rank, n=args.degree)
    params = {"r": args.rank, "n": args.degree, "i": args.form_degree}
    if _cache_lookup(args, "basis", params):
        return 0
    piece = basis(args.rank, args.degree, args.form_degree)
    results = {"dim": piece.dim,
               "elements": [{"alpha": list(e.alpha), "T": list(e.T)}
                            for e in piece.elements]}
    doc = _document("basis", params, results)
    csv_rows = [("index", "alpha", "T")]
    csv_rows += [(k, " ".join(map(str, e.alpha)), " ".join(map(str, e.T)))
                 for k, e in enumerate(piece.elements)]
    _emit(args, doc, csv_rows, None)
    return 0


def cmd_verify(args) -> int:
    rmax, nmax = args.rank, args.degree
    _check_bounds(args, r=rmax, n=nmax)
    statement = "all" if args.all else args.statement
    params = {"statement": statement, "rmax": rmax, "nmax": nmax}
    reports = [rep for rep in sweep(rmax, nmax)
               if statement == "all" or rep.statement == statement]
    results = [rep.to_json_dict() for rep in reports]
    failed = sum(1 for rep in reports if not rep.ok)
    doc = _document("verify", params,
                    {"total": len(reports), "failed": failed,
                     "reports": results})
    csv_rows = [("statement", "params", "status")]
    csv_rows += [(rep.statement,
                  " ".join(f"{k}={v}" for k, v in rep.params), rep.status)
                 for rep in reports]
    _emit(args, doc, csv_rows, None)
    return 1 if failed else 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="derhamz",
        description="Exact de Rham cohomology of integer polynomial rings, "
                    "Bockstein pages, and machine-checked theorems.")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, prime=False, form_degree=False):
        p.add_argument("-r", "--rank", type=int, required=True,
                       help="number of variables")
        p.add_argument("-n", "--degree", type=int, required=True,
                       help="total degree")
        if prime:
            p.add_argument("-p", "--prime", type=int, required=True)
        if form_degree:
            p.add_argument("-i", "--form-degree", type=int, required=True)
        fmt = p.add_mutually_exclusive_group()
        fmt.add_argument("--json", dest="format", action="store_const",
                         const="json", default="json")
        fmt.add_argument("--csv", dest="format", action="store_const",
                         const="csv")
        fmt.add_argument("--latex", dest="format", action="store_const",
                         const="latex")
        p.add_argument("--unsafe-bounds", action="store_true",
                       help="disable the desk-scale guard rails")
        p.add_argument("--cache", metavar="DIR",
                       help="memoize serialized documents in DIR")

    p_coh = sub.add_parser("cohomology", help="integral cohomology table")
    common(p_coh)
    p_coh.set_defaults(func=cmd_cohomology)

    p_pages = sub.add_parser("pages", help="Bockstein spectral pages")
    common(p_pages, prime=True)
    p_pages.add_argument("-k", "--kmax", type=int, default=None)
    p_pages.set_defaults(func=cmd_pages)

    p_basis = sub.add_parser("basis", help="monomial basis of one piece")
    common(p_basis, form_degree=True)
    p_basis.set_defaults(func=cmd_basis)

    p_verify = sub.add_parser("verify", help="run theorem verifications")
    which = p_verify.add_mutually_exclusive_group(required=True)
    which.add_argument("--all", action="store_true")
    which.add_argument("--statement", choices=STATEMENTS)
    common(p_verify)
    p_verify.set_defaults(func=cmd_verify)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 2
    start = time.monotonic()
    try:
        code = args.func(args)
    except BoundsError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    print(f"elapsed: {time.monotonic() - start:.3f}s", file=sys.stderr)
    return code


def entrypoint() -> None:
    raise SystemExit(main())


if __name__ == "__main__":
    raise SystemExit(main())
