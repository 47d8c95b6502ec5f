"""Command-line front end: derive operators, solve characters, scan, run oracles.

Every exact number is written as a string ("-22/5").  Output rows are sorted by
c, then h.  Exit codes: 0 success, 1 bad arguments, 2 degenerate operator,
3 inconsistency (an oracle or cross-check disagreed).
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from fractions import Fraction

from .errors import Degenerate, ExvoaError, Inconsistent, ResonantObstruction

SCHEMA_VERSION = 1
EXIT_OK, EXIT_PARSE, EXIT_DEGENERATE, EXIT_INCONSISTENT = 0, 1, 2, 3


class ParseError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ParseError(message)


def rational(text: str) -> Fraction:
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"not an exact rational: {text!r}") from exc


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="exvoa", description="Exceptional VOA/VOSA characters from modular differential equations")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, need_c=False):
        p.add_argument("--l", type=rational, required=True, help="lowest primary weight (integer or half-integer)")
        p.add_argument("--format", choices=("json", "csv", "pretty"), default="pretty")
        p.add_argument("--cache-dir", default=None, help="operator cache directory (overrides EXVOA_CACHE_DIR)")
        if need_c:
            p.add_argument("--c", type=rational, required=True)

    common(sub.add_parser("derive", help="assemble the (twisted) MLDE"))
    p = sub.add_parser("solve", help="q-series solutions at a given central charge")
    common(p, need_c=True)
    p.add_argument("--h", type=rational, default=None, help="only the solution with this h")
    p.add_argument("--terms", type=int, default=20)
    p = sub.add_parser("scan", help="rational (c, h) scan")
    common(p)
    p.add_argument("--max-dim", type=int, default=1000)
    p.add_argument("--depth", type=int, default=None)
    p.add_argument("--exact", action="store_true", help="rational root theorem per N instead of the numeric route")
    p = sub.add_parser("oracle", help="compare solutions with closed-form characters")
    common(p)
    p.add_argument("--c", type=rational, default=None)
    p.add_argument("--terms", type=int, default=20)
    common(sub.add_parser("genus0", help="p_l from the genus-zero correlator, cross-checked"))
    return parser


# ---------------------------------------------------------------------------
# commands; each returns (document, rows for csv/pretty, exit code)
# ---------------------------------------------------------------------------
def _check_l(l: Fraction) -> None:
    if l <= 0 or (2 * l).denominator != 1:
        raise ParseError(f"l must be a positive integer or half-integer, got {l}")


def cmd_derive(args):
    from .frobenius import p_function
    from .zhu import assemble, ef_str

    op = assemble(args.l)
    try:
        p = str(p_function(args.l))
    except ExvoaError:
        p = None
    doc = {"command": "derive", "l": str(args.l), "operator": op.to_json(), "text": op.to_str(), "p_l": p}
    rows = []
    for m in range(op.order, -1, -1):
        rows.append({"D_power": m, "coefficient": ef_str(op.coeffs[m]) if op.coeffs[m] else "0"})
    return doc, rows, EXIT_OK


def _solutions(l, c, h, terms):
    from .frobenius import check_solution, indicial, solve_at, vacuum_forcing
    from .zhu import assemble

    op = assemble(l)
    spec = op.specialize(c)
    if not spec.g0:
        raise Degenerate(f"g_0 vanishes at c = {c}")
    roots = indicial(spec).roots()
    if h is not None:
        x = h - c / 24
        if x not in roots:
            raise Inconsistent(f"h = {h} is not a rational indicial root at c = {c}")
        roots = [x]
    out = []
    for x in sorted(roots):
        forced = vacuum_forcing(op, l) if x == -c / 24 else None
        try:
            sol = solve_at(spec, x, terms, forced)
        except ResonantObstruction as exc:
            out.append({"h": x + c / 24, "x": x, "error": str(exc)})
            continue
        out.append({"h": sol.h, "x": x, "solution": sol, "residual_zero": check_solution(spec, sol)})
    return out


def cmd_solve(args):
    sols = _solutions(args.l, args.c, args.h, args.terms)
    doc_sols, rows = [], []
    for s in sorted(sols, key=lambda r: r["h"]):
        entry = {"h": str(s["h"]), "x": str(s["x"])}
        if "solution" in s:
            sol = s["solution"]
            entry.update({
                "offset": str(sol.coeffs.offset),
                "step": str(sol.coeffs.step),
                "coefficients": [str(a) for a in sol.coeffs.coeffs],
                "resonant_steps": list(sol.resonant_steps),
                "residual_zero": s["residual_zero"],
            })
        else:
            entry["error"] = s["error"]
        doc_sols.append(entry)
        rows.append({"c": str(args.c), "h": entry["h"], "coefficients": " ".join(entry.get("coefficients", [])) or entry.get("error", "")})
    doc = {"command": "solve", "l": str(args.l), "c": str(args.c), "solutions": doc_sols}
    code = EXIT_OK if all(s.get("residual_zero", True) for s in sols) else EXIT_INCONSISTENT
    return doc, rows, code


def cmd_scan(args):
    from .scan import scan

    cands = scan(args.l, args.max_dim, args.depth, exact=args.exact)
    rows = []
    for cand in cands:
        row = cand.as_row()
        rows.append(row)
    doc = {"command": "scan", "l": str(args.l), "max_dim": args.max_dim, "candidates": rows}
    flat = [{"c": r["c"], "p_l": r["p_l"], "h_list": " ".join(r["h_list"]),
             "ad_type": "" if r["flags"]["ad_type_match"] is None else ",".join(r["flags"]["ad_type_match"]),
             "w3k": "" if r["flags"]["w3k_match"] is None else r["flags"]["w3k_match"],
             "all_roots_rational": r["flags"]["all_roots_rational"]} for r in rows]
    return doc, flat, EXIT_OK


def oracle_checks(l: Fraction, c: Fraction | None, terms: int) -> list[dict]:
    """Closed-form characters that apply at weight l, compared with the Frobenius vacuum solution."""
    from .qseries import eta_quotient_fermion
    from .scan import w3k_catalog, w3k_partition

    checks = []
    if l == Fraction(1, 2):
        ms = [int(2 * c)] if c is not None else list(range(1, 9))
        for m in ms:
            cc = Fraction(m, 2)
            sol = _vacuum_solution(l, cc, terms)
            ref = eta_quotient_fermion(m, terms)
            checks.append({"oracle": f"free fermion m={m}", "c": cc, "ok": sol.agrees_with(ref, terms)})
    for entry in w3k_catalog(l):
        k = entry.params[0]
        if c is not None and c != entry.c:
            continue
        sol = _vacuum_solution(l, entry.c, terms)
        ref = w3k_partition(k, terms, signed=l.denominator == 2)
        checks.append({"oracle": f"W(3k) k={k}", "c": entry.c, "ok": sol.agrees_with(ref, terms)})
    return checks


def _vacuum_solution(l, c, terms):
    from .frobenius import solve_at, vacuum_forcing
    from .zhu import assemble

    op = assemble(l)
    spec = op.specialize(c)
    if not spec.g0:
        raise Degenerate(f"g_0 vanishes at c = {c}")
    return solve_at(spec, -c / 24, terms, vacuum_forcing(op, l)).coeffs


def cmd_oracle(args):
    checks = oracle_checks(args.l, args.c, args.terms)
    rows = [{"oracle": ch["oracle"], "c": str(ch["c"]), "ok": ch["ok"]} for ch in sorted(checks, key=lambda r: r["c"])]
    doc = {"command": "oracle", "l": str(args.l), "checks": rows}
    code = EXIT_OK if all(r["ok"] for r in rows) else EXIT_INCONSISTENT
    return doc, rows, code


def cmd_genus0(args):
    from .frobenius import p_function
    from .genus0 import derive_pl

    if args.l.denominator != 1:
        raise ParseError("the genus-zero derivation is implemented for integer l only")
    p = derive_pl(args.l)
    q = p_function(args.l)
    agree = p == q
    doc = {"command": "genus0", "l": str(args.l), "p_l": str(p), "mlde_p_l": str(q), "agree": agree}
    return doc, [{"l": str(args.l), "p_l": str(p), "agree": agree}], EXIT_OK if agree else EXIT_INCONSISTENT


COMMANDS = {"derive": cmd_derive, "solve": cmd_solve, "scan": cmd_scan, "oracle": cmd_oracle, "genus0": cmd_genus0}


# ---------------------------------------------------------------------------
# emitters
# ---------------------------------------------------------------------------
def emit(fmt: str, doc: dict, rows: list[dict]) -> str:
    if fmt == "json":
        return json.dumps({"schema_version": SCHEMA_VERSION, **doc}, indent=2, default=str)
    if fmt == "csv":
        buf = io.StringIO()
        if rows:
            writer = csv.DictWriter(buf, fieldnames=list(rows[0]), lineterminator="\n")
            writer.writeheader()
            writer.writerows(rows)
        return buf.getvalue().rstrip("\n")
    lines = []
    if "text" in doc:
        lines.append(doc["text"])
        if doc.get("p_l"):
            lines.append(f"p_l(c) = {doc['p_l']}")
        return "\n".join(lines)
    if not rows:
        return "(no rows)"
    cols = list(rows[0])
    widths = {k: max(len(k), *(len(str(r[k])) for r in rows)) for k in cols}
    lines.append("  ".join(k.ljust(widths[k]) for k in cols))
    for r in rows:
        lines.append("  ".join(str(r[k]).ljust(widths[k]) for k in cols))
    return "\n".join(lines)


def run(argv=None, out=None) -> int:
    out = out or sys.stdout
    try:
        args = build_parser().parse_args(argv)
        _check_l(args.l)
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    if args.cache_dir:
        os.environ["EXVOA_CACHE_DIR"] = args.cache_dir
    try:
        doc, rows, code = COMMANDS[args.command](args)
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except Degenerate as exc:
        print(f"degenerate: {exc}", file=sys.stderr)
        return EXIT_DEGENERATE
    except (Inconsistent, ResonantObstruction) as exc:
        print(f"inconsistent: {exc}", file=sys.stderr)
        return EXIT_INCONSISTENT
    print(emit(args.format, doc, rows), file=out)
    return code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
