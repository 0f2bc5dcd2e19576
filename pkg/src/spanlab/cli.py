"""Batch command line: ``spanlab <command> [options]``.

Exit status is 0 on success, 1 when a validation fails (the report is still
printed) and 2 for malformed input, unknown names or exceeded bounds.
"""

from __future__ import annotations

import argparse
import sys

from . import selftest
from .ambidex import adjoint_norm, constant_family, double_bc_check, identity_norm
from .errors import BoundExceeded, ParseError, SpanlabError, UnknownName, UnsupportedLevel
from .grp import DEFAULT_BOUND, trivial_group
from .gset import GMap, trivial_gset
from .linalg import CoeffRing
from .mackey import burnside_mackey, fixed_point_mackey, table_of_marks, validate_mackey
from .qfin import (QFinZSet, burnside_profunctor, fixed_point_profunctor,
                   permutation_profunctor, qfin_fixed_points)
from .span import NAMED_CLASSES, compose, default_universe, mark_matrix, normal_form, validate_class
from .workspace import Workspace, dump_mackey, load_files

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


class InputError(Exception):
    pass


def _table(rows, fmt: str, header=None) -> list:
    rows = [[str(v) for v in r] for r in rows]
    if fmt == "tsv":
        out = ["\t".join(header)] if header else []
        return out + ["\t".join(r) for r in rows]
    allrows = ([header] if header else []) + rows
    if not allrows:
        return []
    width = max(len(v) for r in allrows for v in r) if any(allrows) else 1
    return ["  " + " ".join(v.rjust(width) for v in r) for r in allrows]


def _subgroup_text(H) -> str:
    return "{" + ",".join(str(x) for x in H.elements) + "}"


def _group(ws: Workspace, args):
    if not args.group:
        raise InputError("--group is required")
    G = ws.group(args.group)
    if G.order > args.bound:
        raise BoundExceeded(f"group order {G.order} exceeds bound {args.bound}")
    return G


# --- commands -------------------------------------------------------------

def cmd_marks(ws, args, out):
    G = _group(ws, args)
    tom = table_of_marks(G, bound=args.bound)
    reps = G.lattice.reps()
    out.append(f"== table of marks: {G.name} ==")
    out.append("classes:")
    for i, H in enumerate(reps):
        out.append(f"  [{i}] order {H.order} {_subgroup_text(H)}")
    out.append("rows G/K, columns H, entry |(G/K)^H|:")
    out += _table(tom.tolist(), args.format)
    return EXIT_OK


def cmd_burnside(ws, args, out):
    G = _group(ws, args)
    M = burnside_mackey(G, CoeffRing.parse(args.ring), bound=args.bound)
    out.append(f"== Burnside Mackey functor: {G.name} ==")
    out += dump_mackey(M).rstrip("\n").split("\n")
    rep = validate_mackey(M)
    out.append(f"validation: {'pass' if rep.ok else 'FAIL'} ({rep.checked} identities)")
    return EXIT_OK if rep.ok else EXIT_FAIL


def cmd_span_compose(ws, args, out):
    if not args.names:
        raise InputError("span-compose needs at least one span name")
    spans = [ws.lookup("spans", n) for n in args.names]
    total = spans[0]
    for s in spans[1:]:
        if total.tgt != s.src:
            raise InputError(f"spans do not compose at {s!r}")
        total = compose(total, s)
    nf = normal_form(total)
    out.append(f"== composite: {' then '.join(args.names)} ==")
    out.append(f"apex orbits: {len(nf.pieces)} (sizes {nf.orbit_sizes()})")
    for a, b, S in nf.pieces:
        out.append(f"  piece {a} <- G/{{{','.join(map(str, S))}}} -> {b}")
    G = total.group
    for i, H in enumerate(G.lattice.reps()):
        out.append(f"marks at [{i}] {_subgroup_text(H)}:")
        out += _table(mark_matrix(total, H).tolist(), args.format)
    return EXIT_OK


def cmd_mackey_check(ws, args, out):
    targets = []
    if args.group:
        G = _group(ws, args)
        ring = CoeffRing.parse(args.ring)
        targets += [burnside_mackey(G, ring, bound=args.bound), fixed_point_mackey(G, ring)]
    names = args.names or sorted(ws.mackey)
    targets += [ws.lookup("mackey", n) for n in names]
    if not targets:
        raise InputError("nothing to check: give --group or a workspace with Mackey functors")
    status = EXIT_OK
    for M in targets:
        rep = validate_mackey(M)
        out.append(f"== mackey check: {M.name} over {M.group.name} ({M.ring}) ==")
        out += rep.format().split("\n")
        if not rep.ok:
            status = EXIT_FAIL
    return status


def cmd_norm_demo(ws, args, out):
    ring = CoeffRing.parse(args.ring)
    if args.map:
        q = ws.lookup("maps", args.map)
    else:
        n = args.fold
        if n < 0 or n > args.bound:
            raise BoundExceeded(f"fold size {n} outside 0..{args.bound}")
        G = trivial_group()
        q = GMap(trivial_gset(G, n), trivial_gset(G, 1), [0] * n)
    if max(q.source.size, q.target.size) > args.bound:
        raise BoundExceeded(f"carriers exceed bound {args.bound}")
    X = constant_family(q.source, args.rank, ring)
    cert = adjoint_norm(q, X)
    out.append(f"== norm demo: {q.source.size} -> {q.target.size}, rank {args.rank}, {ring} ==")
    out += cert.format().split("\n")
    dbc = double_bc_check(q, X, bound=args.bound)
    out.append(f"double Beck-Chevalley: {'invertible' if dbc.invertible else 'NOT invertible'}")
    out.append(f"factorization through BC: {'ok' if dbc.factorization_ok else 'FAIL'}")
    ok = cert.map is not None and cert.map == identity_norm(q, X) and bool(dbc)
    return EXIT_OK if ok else EXIT_FAIL


def cmd_class_check(ws, args, out):
    G = _group(ws, args) if args.group else trivial_group()
    names = args.names or ["all", "isos"]
    size = args.size
    if size > args.bound:
        raise BoundExceeded(f"universe size {size} exceeds bound {args.bound}")
    universe = default_universe(G, size)
    status = EXIT_OK
    for n in names:
        if n not in NAMED_CLASSES:
            raise UnknownName(f"unknown class {n!r}; known: {', '.join(sorted(NAMED_CLASSES))}")
        rep = validate_class(NAMED_CLASSES[n], universe, name=f"{n} over {G.name}")
        out += rep.format().split("\n")
        if not rep.consistent:
            status = EXIT_FAIL
    return status


def cmd_qfin_eval(ws, args, out):
    sets = [(n, ws.qfin[n]) for n in sorted(ws.qfin)]
    for i, lit in enumerate(args.names):
        sets.append((f"arg{i}", QFinZSet.parse(lit)))
    if not sets:
        raise InputError("qfin-eval needs a literal like '{1:2, 3:1}' or qfin entries")
    makers = {"burnside": burnside_profunctor, "fixed": fixed_point_profunctor,
              "perm": permutation_profunctor}
    level = args.level
    M = makers[args.profunctor](level, CoeffRing.parse(args.ring)) if args.profunctor else None
    for name, S in sets:
        out.append(f"== quasi-finite set {name} = {S} ==")
        out.append(f"orbits: {' '.join('Z/' + str(n) for n in S.orbits) or '(none)'}")
        rows = [[d, qfin_fixed_points(S, d)] for d in range(1, level + 1)]
        out.append("fixed points by dZ:")
        out += _table(rows, args.format, header=["d", "count"])
        if M is not None:
            out.append(f"rank of {M.name}: {M.value_rank(S)}")
    return EXIT_OK


def cmd_selftest(ws, args, out):
    results = selftest.run(seed=args.seed)
    out.append("== selftest ==")
    for name, ok, detail in results:
        out.append(f"{name}: {'ok' if ok else 'FAIL'}  {detail}")
    passed = sum(ok for _, ok, _ in results)
    out.append(f"summary: {passed}/{len(results)} passed")
    return EXIT_OK if passed == len(results) else EXIT_FAIL


COMMANDS = {
    "marks": cmd_marks,
    "burnside": cmd_burnside,
    "span-compose": cmd_span_compose,
    "mackey-check": cmd_mackey_check,
    "norm-demo": cmd_norm_demo,
    "class-check": cmd_class_check,
    "qfin-eval": cmd_qfin_eval,
    "selftest": cmd_selftest,
}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="spanlab", description="Spans, Mackey functors and norms.")
    p.add_argument("command", choices=sorted(COMMANDS))
    p.add_argument("names", nargs="*", help="workspace names or literals, per command")
    p.add_argument("--in", dest="inputs", action="append", default=[], metavar="FILE")
    p.add_argument("--bound", type=int, default=DEFAULT_BOUND)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--ring", default="Z", help="Z, Q or Zmod:<n>")
    p.add_argument("--format", choices=("text", "tsv"), default="text")
    p.add_argument("--group")
    p.add_argument("--fold", type=int, default=2, help="norm-demo: size n of the fold n -> 1")
    p.add_argument("--map", help="norm-demo: a map from the workspace instead of a fold")
    p.add_argument("--rank", type=int, default=1)
    p.add_argument("--size", type=int, default=3, help="class-check: largest G-set tested")
    p.add_argument("--level", type=int, default=12, help="qfin-eval: support bound")
    p.add_argument("--profunctor", choices=("burnside", "fixed", "perm"))
    return p


def run(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_intermixed_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    out: list = []
    try:
        CoeffRing.parse(args.ring)
        if args.bound < 0:
            raise BoundExceeded("bound must be non-negative")
        ws = load_files(args.inputs)
        status = COMMANDS[args.command](ws, args, out)
    except (ParseError, UnknownName, BoundExceeded, UnsupportedLevel, InputError, ValueError,
            OSError) as exc:
        stderr.write(f"error: {exc}\n")
        return EXIT_INPUT
    except SpanlabError as exc:
        stderr.write(f"error: {type(exc).__name__}: {exc}\n")
        return EXIT_FAIL
    stdout.write("\n".join(out) + "\n")
    return status


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
