"""Line-oriented input files.

::

    # comments run to end of line
    group G 2              # name, order, then |G| rows of the table
    0 1
    1 0
    gset X C2 2            # name, group, size, then |G| rows of the action
    0 1
    1 0
    gmap X P f             # source, target, optional name, then one row of values
    0 0
    span X P X s           # source, target, apex, optional name, then left and right rows
    0 1
    0 0
    span X P X s2          # or the long form with a gmap header per leg
    gmap X X
    0 1
    gmap X P
    0 0
    mackey M C2 Z          # name, group, ring
    ranks 1 2
    res 0,1 0              # res <H> <K>, then one row per basis vector of M(K)
    2 1
    tr 0,1 0
    1
    0
    conj 0,1 0
    1 0
    0 1
    qfin S {1:2, 3:1}

Groups may also be referred to by built-in names (C1, Cn, Sn, D2n, V4).
A matrix row with no entries is written as ``-``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .errors import ParseError, SpanlabError, UnknownName
from .grp import FiniteGroup, Subgroup, make_group, named_group
from .gset import GMap, GSet
from .linalg import CoeffRing, ModuleMap
from .mackey import MackeyFunctor, restriction_targets, weyl_reps
from .qfin import QFinZSet
from .span import Span

KINDS = ("group", "gset", "gmap", "span", "mackey", "qfin")


@dataclass
class Workspace:
    groups: dict = field(default_factory=dict)
    gsets: dict = field(default_factory=dict)
    maps: dict = field(default_factory=dict)
    spans: dict = field(default_factory=dict)
    mackey: dict = field(default_factory=dict)
    qfin: dict = field(default_factory=dict)

    def group(self, name: str) -> FiniteGroup:
        if name in self.groups:
            return self.groups[name]
        try:
            return named_group(name)
        except (ValueError, KeyError, SpanlabError):
            raise UnknownName(f"unknown group {name!r}") from None

    def lookup(self, kind: str, name: str):
        reg = getattr(self, kind)
        if name not in reg:
            raise UnknownName(f"unknown {kind.rstrip('s')} {name!r}")
        return reg[name]


class _Lines:
    def __init__(self, text: str, source: str):
        self.rows = []
        for no, raw in enumerate(text.splitlines(), 1):
            line = raw.split("#", 1)[0].rstrip()
            if line.strip():
                self.rows.append((no, line))
        self.pos = 0
        self.source = source

    def peek(self):
        return self.rows[self.pos] if self.pos < len(self.rows) else None

    def next(self, what: str):
        if self.pos >= len(self.rows):
            last = self.rows[-1][0] if self.rows else 0
            raise ParseError(f"unexpected end of input, expected {what}", last + 1, 1)
        row = self.rows[self.pos]
        self.pos += 1
        return row


def _ints(no: int, line: str, count: int | None = None) -> list:
    if line.strip() == "-":
        toks = []
    else:
        toks = line.split()
    out = []
    col = 1
    for tok in toks:
        col = line.index(tok, col - 1) + 1
        try:
            out.append(int(tok))
        except ValueError:
            raise ParseError(f"expected an integer, got {tok!r}", no, col) from None
    if count is not None and len(out) != count:
        raise ParseError(f"expected {count} entries, got {len(out)}", no, 1)
    return out


def _scalars(no: int, line: str, count: int) -> list:
    toks = [] if line.strip() == "-" else line.split()
    if len(toks) != count:
        raise ParseError(f"expected {count} entries, got {len(toks)}", no, 1)
    out = []
    for tok in toks:
        try:
            out.append(Fraction(tok))
        except ValueError:
            raise ParseError(f"bad number {tok!r}", no, line.index(tok) + 1) from None
    return out


def _subgroup(ws_group: FiniteGroup, no: int, tok: str, line: str) -> Subgroup:
    try:
        elems = sorted(int(t) for t in tok.split(","))
    except ValueError:
        raise ParseError(f"bad subgroup {tok!r}", no, line.index(tok) + 1) from None
    try:
        return Subgroup(ws_group, tuple(elems))
    except SpanlabError as exc:
        raise ParseError(f"{tok} is not a subgroup: {exc}", no, line.index(tok) + 1) from None


def parse_workspace(text: str, ws: Workspace | None = None, source: str = "<input>") -> Workspace:
    ws = ws or Workspace()
    lines = _Lines(text, source)
    while lines.peek() is not None:
        no, line = lines.next("a declaration")
        head, *args = line.split()
        if head not in KINDS:
            raise ParseError(f"unknown declaration {head!r}", no, line.index(head) + 1)
        try:
            globals()["_parse_" + head](ws, lines, no, line, args)
        except ParseError:
            raise
        except UnknownName:
            raise
        except (SpanlabError, ValueError) as exc:
            raise ParseError(str(exc), no, 1) from None
    return ws


def _claim(reg: dict, name: str, no: int, line: str):
    if name in reg:
        raise ParseError(f"duplicate name {name!r}", no, line.index(name) + 1)


def _need(args, n, no, what):
    if len(args) < n:
        raise ParseError(f"{what} needs {n} arguments", no, 1)


def _parse_group(ws, lines, no, line, args):
    _need(args, 2, no, "group")
    name, order = args[0], _ints(no, args[1], 1)[0]
    _claim(ws.groups, name, no, line)
    rows = [_ints(*lines.next("a table row"), order) for _ in range(order)]
    ws.groups[name] = make_group(rows, name)


def _parse_gset(ws, lines, no, line, args):
    _need(args, 3, no, "gset")
    name, G, size = args[0], ws.group(args[1]), _ints(no, args[2], 1)[0]
    _claim(ws.gsets, name, no, line)
    rows = [_ints(*lines.next("an action row"), size) for _ in range(G.order)]
    ws.gsets[name] = GSet(G, rows, name=name)


def _parse_gmap(ws, lines, no, line, args):
    _need(args, 2, no, "gmap")
    src, tgt = ws.lookup("gsets", args[0]), ws.lookup("gsets", args[1])
    name = args[2] if len(args) > 2 else f"map{len(ws.maps)}"
    _claim(ws.maps, name, no, line)
    vals = _ints(*lines.next("map values"), src.size)
    ws.maps[name] = GMap(src, tgt, vals)


def _parse_span(ws, lines, no, line, args):
    _need(args, 3, no, "span")
    src, tgt, apex = (ws.lookup("gsets", a) for a in args[:3])
    name = args[3] if len(args) > 3 else f"span{len(ws.spans)}"
    _claim(ws.spans, name, no, line)
    legs = []
    for end, what in ((src, "left leg"), (tgt, "right leg")):
        lno, lline = lines.next(what)
        if lline.split()[0] == "gmap":
            # long form: a full gmap header naming the apex and the end
            toks = lline.split()
            if len(toks) < 3 or ws.lookup("gsets", toks[1]) != apex \
                    or ws.lookup("gsets", toks[2]) != end:
                raise ParseError(f"{what} must be a gmap from the apex to {end.name}", lno, 1)
            lno, lline = lines.next(what + " values")
        legs.append(GMap(apex, end, _ints(lno, lline, apex.size)))
    ws.spans[name] = Span(src, tgt, apex, *legs)


def _parse_qfin(ws, lines, no, line, args):
    if args and not args[0].startswith("{"):
        name, lit = args[0], line.split(None, 2)[2] if len(args) > 1 else ""
    else:
        name, lit = f"qfin{len(ws.qfin)}", line.split(None, 1)[1] if args else ""
    _claim(ws.qfin, name, no, line)
    try:
        ws.qfin[name] = QFinZSet.parse(lit)
    except ParseError as exc:
        raise ParseError(exc.message, no, line.find(lit) + exc.column) from None


def _parse_mackey(ws, lines, no, line, args):
    _need(args, 3, no, "mackey")
    name, G = args[0], ws.group(args[1])
    try:
        ring = CoeffRing.parse(args[2])
    except ValueError as exc:
        raise ParseError(str(exc), no, line.index(args[2]) + 1) from None
    _claim(ws.mackey, name, no, line)
    lat = G.lattice
    rno, rline = lines.next("ranks")
    if not rline.split() or rline.split()[0] != "ranks":
        raise ParseError("expected 'ranks'", rno, 1)
    ranks = _ints(rno, rline.split(None, 1)[1] if len(rline.split()) > 1 else "",
                  len(lat.classes))
    res, tr, conj = {}, {}, {}
    while lines.peek() is not None and lines.peek()[1].split()[0] in ("res", "tr", "conj"):
        bno, bline = lines.next("a block")
        toks = bline.split()
        if len(toks) != 3:
            raise ParseError("expected '<kind> <H> <K|g>'", bno, 1)
        kind = toks[0]
        H = _subgroup(G, bno, toks[1], bline)
        c = lat.class_of(H)
        if lat.rep(c) != H:
            raise ParseError(f"{toks[1]} is not the chosen class representative", bno,
                             bline.index(toks[1]) + 1)
        if kind == "conj":
            g = _ints(bno, toks[2])[0]
            if g not in weyl_reps(H):
                raise ParseError(f"{g} is not a Weyl coset representative", bno,
                                 bline.index(toks[2], len(toks[0]) + len(toks[1])) + 1)
            key, store, shape = (c, g), conj, (ranks[c], ranks[c])
        else:
            K = _subgroup(G, bno, toks[2], bline)
            if K not in restriction_targets(H):
                raise ParseError(f"{toks[2]} is not a chosen subgroup of {toks[1]}", bno,
                                 bline.rindex(toks[2]) + 1)
            rk = ranks[lat.class_of(K)]
            key = (c, K.elements)
            store, shape = (res, (rk, ranks[c])) if kind == "res" else (tr, (ranks[c], rk))
        if key in store:
            raise ParseError(f"duplicate {kind} block", bno, 1)
        rows = [_scalars(*lines.next("a matrix row"), shape[1]) for _ in range(shape[0])]
        m = ring.zeros(*shape)
        for i, row in enumerate(rows):
            for j, v in enumerate(row):
                m[i, j] = ring.coerce(v)
        store[key] = ModuleMap(ring, m)
    _fill_defaults(G, ring, ranks, res, tr, conj)
    ws.mackey[name] = MackeyFunctor(G, ring, ranks, res, tr, conj, name=name)


def _fill_defaults(G, ring, ranks, res, tr, conj):
    """Omitted blocks: identities on the diagonal (K = H), zero maps at
    zero-rank levels, and the identity for every omitted conjugation."""
    lat = G.lattice
    for c in range(len(lat.classes)):
        R = lat.rep(c)
        for K in restriction_targets(R):
            rk = ranks[lat.class_of(K)]
            key = (c, K.elements)
            if K == R:
                res.setdefault(key, ModuleMap.identity(ring, rk))
                tr.setdefault(key, ModuleMap.identity(ring, rk))
            elif rk == 0 or ranks[c] == 0:
                res.setdefault(key, ModuleMap.zero(ring, rk, ranks[c]))
                tr.setdefault(key, ModuleMap.zero(ring, ranks[c], rk))
        for w in weyl_reps(R):
            conj.setdefault((c, w), ModuleMap.identity(ring, ranks[c]))


def load_files(paths) -> Workspace:
    ws = Workspace()
    for p in paths:
        with open(p, encoding="utf-8") as fh:
            parse_workspace(fh.read(), ws, source=str(p))
    return ws


# --- writers --------------------------------------------------------------

def _row(values) -> str:
    return " ".join(str(v) for v in values) if len(values) else "-"


def _sub(H: Subgroup) -> str:
    return ",".join(str(x) for x in H.elements)


def dump_mackey(M: MackeyFunctor) -> str:
    lat = M.group.lattice
    out = [f"mackey {M.name} {M.group.name} {M.ring}",
           "ranks " + " ".join(str(r) for r in M.ranks)]
    for c in range(len(lat.classes)):
        R = lat.rep(c)
        for K in restriction_targets(R):
            for kind, store in (("res", M.res), ("tr", M.tr)):
                out.append(f"{kind} {_sub(R)} {_sub(K)}")
                out += [_row(r) for r in store[(c, K.elements)].tolist()]
        for w in weyl_reps(R):
            out.append(f"conj {_sub(R)} {w}")
            out += [_row(r) for r in M.conj[(c, w)].tolist()]
    return "\n".join(out) + "\n"


def dump_group(G: FiniteGroup) -> str:
    return "\n".join([f"group {G.name} {G.order}"] + [_row(r) for r in G.mul.tolist()]) + "\n"


def dump_gset(X: GSet, name: str) -> str:
    return "\n".join([f"gset {name} {X.group.name} {X.size}"]
                     + [_row(r) for r in X.action.tolist()]) + "\n"
