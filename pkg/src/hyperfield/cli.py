"""Command-line front end.

Exit status: 0 on success, 1 when a checked property fails, 2 on usage,
input or format errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Optional, Sequence

from hyperfield import io
from hyperfield.constructions import (
    MassourosField,
    build_FG,
    build_krasner,
    build_massouros_original,
    build_nakassis,
    build_quotient,
    build_sign,
    check_iso,
    iso_search,
    quotient_scan,
    verify_large_sums,
    verify_massouros,
)
from hyperfield.core import Report, verify_axioms
from hyperfield.linsolve import (
    InvariantError,
    ReductionTrace,
    brute_solve,
    check_solution,
    fetvins_sweep,
    format_assignment,
    solve,
)
from hyperfield.ordered import dyadic_class, dyadic_sum_check, overify_window

OK, FAIL, USAGE = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _group(text: Optional[str]) -> tuple:
    if not text:
        raise UsageError("--group is required for this family")
    try:
        return tuple(int(v) for v in text.split(","))
    except ValueError:
        raise UsageError(f"bad --group {text!r}") from None


def _window(text: str) -> tuple:
    lo, sep, hi = text.partition("..")
    try:
        lo, hi = int(lo), int(hi)
    except ValueError:
        raise UsageError(f"bad window {text!r}; expected LO..HI") from None
    if not sep or lo >= hi:
        raise UsageError(f"bad window {text!r}; expected LO..HI with LO < HI")
    return lo, hi


class Output:
    def __init__(self):
        self.lines = []
        self.reports = []

    def say(self, *lines):
        self.lines.extend(lines)

    def report(self, rep: Report):
        self.reports.append(rep.to_dict())
        self.say(*rep.lines())
        return rep.passed


# -- commands ------------------------------------------------------------------


def cmd_build(args, out: Output) -> int:
    kind = args.kind
    phi = None
    if kind == "krasner":
        F = build_krasner()
    elif kind == "sign":
        F = build_sign()
    elif kind in ("fg", "massouros"):
        M = (build_FG if kind == "fg" else build_massouros_original)(_group(args.group))
        F, phi = M.field, M.phi
    elif kind == "nakassis":
        F = build_nakassis(_group(args.group))
    else:
        if args.q is None or args.subgroup_order is None:
            raise UsageError("quotient needs --q and --subgroup-order")
        F = build_quotient(args.q, args.subgroup_order)
    io.save_field(F, args.output)
    out.say(f"wrote {args.output} ({F.name}, {F.size} elements)")
    if args.phi:
        if phi is None:
            raise UsageError(f"{kind} has no phi map to export")
        io.save_phi(F, phi, args.phi)
        out.say(f"wrote {args.phi}")
    return OK


def cmd_verify(args, out: Output) -> int:
    F, _ = io.resolve_field(args.table, strict=False)
    return OK if out.report(verify_axioms(F)) else FAIL


def _massouros(ref: str, phi_path: Optional[str]) -> MassourosField:
    F, phi = io.resolve_field(ref)
    if phi_path:
        phi = io.load_phi(phi_path, F)
    if phi is None:
        raise UsageError("a phi map is required (--phi)")
    return MassourosField(F, phi)


def cmd_massouros_check(args, out: Output) -> int:
    M = _massouros(args.table, args.phi)
    ok = out.report(verify_massouros(M.field, M.phi))
    if ok:
        ok = out.report(verify_large_sums(M))
    return OK if ok else FAIL


def cmd_solve(args, out: Output) -> int:
    sf = io.load_sys(args.system)
    S, F = sf.system, sf.system.field
    M = MassourosField(F, sf.phi) if sf.phi is not None else None
    structured = not args.brute and M is not None and S.k < S.n and M.verified()
    if structured:
        trace = ReductionTrace()
        A = solve(M, S, trace=trace)
        if args.trace:
            out.say(*(f"trace: {line}" for line in trace.lines(F, S.variables)))
    else:
        if not args.brute:
            out.say("note: not a verified Massouros field with k < n; using brute force")
        A = brute_solve(S)
        if A is None:
            out.say("NO nontrivial solution")
            return FAIL
    out.say(*format_assignment(S, A))
    result = check_solution(F, S, A)
    if not result:
        out.say(f"FAILED verification: {result}")
        return FAIL
    out.say("VERIFIED nontrivial")
    return OK


def cmd_sweep(args, out: Output) -> int:
    F, phi = io.resolve_field(args.field)
    if args.phi:
        phi = io.load_phi(args.phi, F)
    rep = fetvins_sweep(F, phi, args.eqs, args.vars, args.max_terms)
    passed = out.report(rep)
    out.say(
        f"  systems: {rep.data['systems']}",
        f"  counterexamples: {len(rep.data['counterexamples'])}",
        f"  disagreements: {len(rep.data['disagreements'])}",
    )
    return OK if passed else FAIL


def cmd_quotient_scan(args, out: Output) -> int:
    H, _ = io.resolve_field(args.table)
    rep = quotient_scan(H, args.qmax)
    out.report(rep)
    hits = rep.data["hits"]
    out.say(f"  candidates: {len(rep.data['candidates'])}")
    out.say("  hits: " + (", ".join(f"(q={q}, d={d})" for q, d in hits) if hits else "none"))
    if not hits:
        out.say("  note: no isomorphic quotient with q <= qmax (bounded evidence, not a proof)")
    return OK


def cmd_iso(args, out: Output) -> int:
    A, _ = io.resolve_field(args.a)
    B, _ = io.resolve_field(args.b)
    w = iso_search(A, B)
    if w is None:
        out.say("no isomorphism")
        return FAIL
    assert check_iso(A, B, w)
    out.say("isomorphic")
    out.say(*(f"  {A.names[i]} -> {B.names[j]}" for i, j in enumerate(w.mapping)))
    return OK


def cmd_ordered(args, out: Output) -> int:
    lo, hi = _window(args.window)
    ok = out.report(overify_window(args.mode, lo, hi))
    if args.dyadic:
        c7 = dyadic_class(7)
        out.say(f"dyadic class of 7: {c7}")
        ok &= c7.valuation == 0
        mlo, mhi = (lo + 1) // 2, hi // 2
        bad, note = [], None
        for m in range(mlo, mhi + 1):
            for n in range(mlo, mhi + 1):
                rep = dyadic_sum_check(m, n, (lo, hi), args.samples)
                out.reports.append(rep.to_dict())
                if not rep.passed:
                    bad.append((m, n, rep.failures))
                note = note or (rep.notes[0] if rep.notes else None)
        out.say(
            f"dyadic sums for m, n in [{mlo},{mhi}], window [{lo},{hi}], "
            f"sample bound {args.samples}: {'PASS' if not bad else 'FAIL'}"
        )
        out.say(*(f"  FAIL m={m} n={n}: {f}" for m, n, f in bad))
        if note:
            out.say(f"  note: {note}")
        ok &= not bad
    return OK if ok else FAIL


# -- parser --------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--json", metavar="PATH", help="also write a structured report")

    p = _Parser(prog="hyperfield", description="Exact computation over finite hyperfields.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    b = sub.add_parser("build", parents=[common], help="write a builtin family to a .hf table")
    b.add_argument("kind", choices=["krasner", "sign", "fg", "massouros", "nakassis", "quotient"])
    b.add_argument("--group", help="cyclic factor orders, e.g. 3 or 2,2")
    b.add_argument("--q", type=int)
    b.add_argument("--subgroup-order", type=int)
    b.add_argument("-o", "--output", required=True)
    b.add_argument("--phi", help="also write the phi map here")
    b.set_defaults(func=cmd_build)

    v = sub.add_parser("verify", parents=[common], help="check all hyperfield axioms")
    v.add_argument("table")
    v.set_defaults(func=cmd_verify)

    m = sub.add_parser("massouros-check", parents=[common], help="Massouros conditions and large sums")
    m.add_argument("table")
    m.add_argument("--phi")
    m.set_defaults(func=cmd_massouros_check)

    s = sub.add_parser("solve", parents=[common], help="solve a .sys system")
    s.add_argument("system")
    s.add_argument("--brute", action="store_true")
    s.add_argument("--trace", action="store_true")
    s.set_defaults(func=cmd_solve)

    w = sub.add_parser("sweep", parents=[common], help="exhaustive FETVINS sweep")
    w.add_argument("--field", required=True)
    w.add_argument("--phi")
    w.add_argument("--eqs", type=int, required=True)
    w.add_argument("--vars", type=int, required=True)
    w.add_argument("--max-terms", type=int, default=3)
    w.set_defaults(func=cmd_sweep)

    q = sub.add_parser("quotient-scan", parents=[common], help="search for an isomorphic GF(q)/G")
    q.add_argument("table")
    q.add_argument("--qmax", type=int, default=64)
    q.set_defaults(func=cmd_quotient_scan)

    i = sub.add_parser("iso", parents=[common], help="isomorphism search between two tables")
    i.add_argument("a")
    i.add_argument("b")
    i.set_defaults(func=cmd_iso)

    o = sub.add_parser("ordered", parents=[common], help="ordered hyperfields and the dyadic quotient")
    o.add_argument("--mode", choices=["open", "closed"], required=True)
    o.add_argument("--window", required=True, help="LO..HI")
    o.add_argument("--dyadic", action="store_true")
    o.add_argument("--samples", type=int, default=9)
    o.set_defaults(func=cmd_ordered)
    return p


def _glue_negative_values(argv: list) -> list:
    """Let ``--window -8..8`` through argparse, which would read ``-8..8`` as a flag."""
    out = []
    it = iter(argv)
    for tok in it:
        if tok == "--window":
            nxt = next(it, None)
            out.append(tok if nxt is None else f"--window={nxt}")
        else:
            out.append(tok)
    return out


def run(argv: Optional[Sequence[str]] = None) -> tuple:
    """Run one command; returns ``(status, stdout_text)``."""
    argv = _glue_negative_values(list(sys.argv[1:] if argv is None else argv))
    out = Output()
    try:
        args = build_parser().parse_args(argv)
        status = args.func(args, out)
        if getattr(args, "json", None):
            payload = {"command": args.command, "status": status, "reports": out.reports, "output": out.lines}
            Path(args.json).write_text(json.dumps(payload, indent=1, ensure_ascii=False) + "\n")
    except UsageError as exc:
        out.say(f"usage error: {exc}")
        status = USAGE
    except (OSError, ValueError) as exc:
        out.say(f"error: {exc}")
        status = USAGE
    except InvariantError as exc:
        out.say(f"FAILED: {exc}")
        status = FAIL
    return status, "\n".join(out.lines) + ("\n" if out.lines else "")


def main(argv: Optional[Sequence[str]] = None) -> int:
    status, text = run(argv)
    stream = sys.stdout if status != USAGE else sys.stderr
    stream.write(text)
    return status


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
