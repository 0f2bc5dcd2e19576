"""Spans of finite G-sets up to isomorphism.

A span ``A <- C -> B`` is a morphism A -> B; composition is by pullback over
the middle object.  Morphisms are compared through :class:`SpanClass`, an
exact canonical form: every apex orbit is recorded by the lexicographically
least triple (left image, right image, stabilizer) over its points.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .errors import BoundExceeded, ForeignSubgroup, GroupMismatch, ObjectMismatch
from .grp import Subgroup, classes_within
from .gset import (GMap, GSet, coset_space, diagonal, disjoint_union, empty, equivariant_maps,
                   fixed_points, gsets_up_to, identity, product_gset, pullback,
                   random_gset, random_map, truncation_level)


class Span:
    def __init__(self, src: GSet, tgt: GSet, apex: GSet, left: GMap, right: GMap):
        if left.source != apex or right.source != apex:
            raise ObjectMismatch("both legs must start at the apex")
        if left.target != src or right.target != tgt:
            raise ObjectMismatch("legs must end at src and tgt")
        if not (src.group == tgt.group == apex.group):
            raise GroupMismatch("span objects live over different groups")
        self.src, self.tgt, self.apex = src, tgt, apex
        self.left, self.right = left, right

    @classmethod
    def of(cls, left: GMap, right: GMap) -> "Span":
        return cls(left.target, right.target, left.source, left, right)

    @property
    def group(self):
        return self.apex.group

    def __repr__(self):
        return (f"Span({self.src.size} <- {self.apex.size} -> {self.tgt.size}: "
                f"{list(self.left.values)}, {list(self.right.values)})")

    def normal_form(self) -> "SpanClass":
        return normal_form(self)

    def __matmul__(self, other: "Span") -> "Span":
        """self o other (other first)."""
        return compose(other, self)


def identity_span(X: GSet) -> Span:
    i = identity(X)
    return Span(X, X, X, i, i)


def forward(f: GMap) -> Span:
    """The span X = X -> Y."""
    return Span(f.source, f.target, f.source, identity(f.source), f)


def backward(f: GMap) -> Span:
    """The span Y <- X = X."""
    return Span(f.target, f.source, f.source, f, identity(f.source))


def compose(s: Span, t: Span) -> Span:
    """t o s for s: A -> B and t: B -> C, apex = pullback over B."""
    if s.tgt != t.src:
        raise ObjectMismatch("spans are not composable")
    pb = pullback(s.right, t.left)
    return Span(s.src, t.tgt, pb.apex, pb.pr1.then(s.left), pb.pr2.then(t.right))


def dualize(s: Span) -> Span:
    return Span(s.tgt, s.src, s.apex, s.right, s.left)


def factorize(s: Span) -> tuple:
    """Split s into its backward part A <- C = C and forward part C = C -> B."""
    return backward(s.left), forward(s.right)


# --- canonical forms ------------------------------------------------------

@dataclass(frozen=True)
class SpanClass:
    """Isomorphism class of a span with fixed ends.

    ``pieces`` is the sorted multiset of transitive pieces; a piece
    ``(a, b, S)`` is the orbit G/S mapping to (a, b) at its base coset.
    """

    src: GSet
    tgt: GSet
    pieces: tuple

    def realize(self) -> Span:
        G = self.src.group
        orbits, lvals, rvals = [], [], []
        for a, b, S in self.pieces:
            O = coset_space(G, Subgroup._trusted(G, S))
            reps = [_coset_rep(O, i) for i in range(O.size)]
            lvals += [self.src.act(g, a) for g in reps]
            rvals += [self.tgt.act(g, b) for g in reps]
            orbits.append(O)
        C = disjoint_union(*orbits) if orbits else empty(G)
        return Span(self.src, self.tgt, C, GMap(C, self.src, lvals, check=False),
                    GMap(C, self.tgt, rvals, check=False))

    def orbit_sizes(self) -> list:
        G = self.src.group
        return [G.order // len(S) for _, _, S in self.pieces]

    def apex_size(self) -> int:
        return sum(self.orbit_sizes())

    def is_transitive(self) -> bool:
        return len(self.pieces) == 1

    def transitive_parts(self) -> list:
        return [SpanClass(self.src, self.tgt, (p,)) for p in self.pieces]

    def coefficients(self, basis) -> list:
        """Multiplicities of the transitive basis classes in this class."""
        counts = Counter(self.pieces)
        index = {b.pieces[0]: i for i, b in enumerate(basis)}
        out = [0] * len(basis)
        for p, k in counts.items():
            if p not in index:
                raise ValueError(f"piece {p} is not in the basis")
            out[index[p]] += k
        return out


def _coset_rep(O: GSet, i: int) -> int:
    """Least g with g.0 = i in a coset space."""
    return int(np.nonzero(O.action[:, 0] == i)[0][0])


def normal_form(s: Span) -> SpanClass:
    pieces = []
    C = s.apex
    for orb in C.orbits:
        best = None
        for c in orb.points:
            key = (s.left(c), s.right(c), C.stabilizer(c).elements)
            if best is None or key < best:
                best = key
        pieces.append(best)
    return SpanClass(s.src, s.tgt, tuple(sorted(pieces)))


def isomorphic(s: Span, t: Span) -> bool:
    """Slow path: search for an apex iso commuting with both legs."""
    from .gset import find_iso
    if s.src != t.src or s.tgt != t.tgt:
        return False
    return find_iso(s.apex, t.apex, [(s.left, t.left), (s.right, t.right)]) is not None


def hom_basis(A: GSet, B: GSet, bound: int = 4096) -> list:
    """Transitive span classes A -> B: an orbit of A x B together with a
    subgroup of its base-point stabilizer, up to conjugacy in that stabilizer."""
    if A.group != B.group:
        raise GroupMismatch("A and B live over different groups")
    if A.size * B.size > bound:
        raise BoundExceeded(f"|A||B| = {A.size * B.size} exceeds bound {bound}")
    P = product_gset(A, B)
    out = []
    for orb in P.orbits:
        a, b = divmod(orb.base, B.size)
        for cls in classes_within(orb.stabilizer):
            out.append(SpanClass(A, B, ((a, b, cls[0].elements),)))
    return out


# --- marks ----------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class MarkMatrix:
    rows: tuple
    cols: tuple
    entries: np.ndarray

    def __matmul__(self, other: "MarkMatrix") -> "MarkMatrix":
        if self.cols != other.rows:
            raise ValueError("index sets do not match")
        if len(self.cols) == 0:
            ent = np.zeros((len(self.rows), len(other.cols)), dtype=object)
        else:
            ent = self.entries @ other.entries
        return MarkMatrix(self.rows, other.cols, ent)

    def __eq__(self, other):
        return (isinstance(other, MarkMatrix) and self.rows == other.rows
                and self.cols == other.cols
                and all(int(x) == int(y) for x, y in zip(self.entries.flat, other.entries.flat)))

    __hash__ = None

    def tolist(self):
        return [[int(v) for v in row] for row in self.entries]

    def __repr__(self):
        return f"MarkMatrix({self.tolist()})"


def mark_matrix(s: Span, H: Subgroup) -> MarkMatrix:
    """Entry (b, a) counts H-fixed apex points over (a, b)."""
    if H.parent != s.group:
        raise ForeignSubgroup("H is not a subgroup of the span's group")
    cols = tuple(fixed_points(s.src, H))
    rows = tuple(fixed_points(s.tgt, H))
    ci = {a: j for j, a in enumerate(cols)}
    ri = {b: i for i, b in enumerate(rows)}
    ent = np.zeros((len(rows), len(cols)), dtype=object)
    for c in fixed_points(s.apex, H):
        ent[ri[s.right(c)], ci[s.left(c)]] += 1
    return MarkMatrix(rows, cols, ent)


# --- adjunction q_! -| q^* on slices --------------------------------------

def push_object(q: GMap, p: GMap) -> GMap:
    return p.then(q)


def pull_object(q: GMap, p: GMap) -> GMap:
    """q^*(p) for p: X -> B, as the projection X x_B A -> A."""
    return pullback(p, q).pr2


def pull_span(q: GMap, s: Span, src_obj: GMap, tgt_obj: GMap) -> Span:
    """Base change of a span over B along q: A -> B."""
    apex_obj = s.left.then(src_obj)
    P_src, P_apex, P_tgt = pullback(src_obj, q), pullback(apex_obj, q), pullback(tgt_obj, q)
    left = P_src.lift(P_apex.pr1.then(s.left), P_apex.pr2)
    right = P_tgt.lift(P_apex.pr1.then(s.right), P_apex.pr2)
    return Span.of(left, right)


def unit_span(q: GMap, f: GMap) -> Span:
    """X <-id- X -(id,f)-> q^*q_!X for X = (f: A' -> A)."""
    pb = pullback(f.then(q), q)
    eta = pb.lift(identity(f.source), f)
    return Span.of(identity(f.source), eta)


def counit_span(q: GMap, g: GMap) -> Span:
    """q_!q^*Y <-id- q_!q^*Y -pr-> Y for Y = (g: B' -> B)."""
    pb = pullback(g, q)
    return Span.of(identity(pb.apex), pb.pr1)


@dataclass
class AdjunctionCheck:
    unit: Span
    counit: Span
    triangles_ok: bool
    checked: int = 0
    failures: list = field(default_factory=list)

    def __bool__(self):
        return self.triangles_ok


def slice_objects(A: GSet, bound: int) -> list:
    """Objects over A: every map from a transitive G-set into A, plus id_A."""
    G = A.group
    out = [identity(A)]
    for H in G.lattice.reps():
        O = coset_space(G, H)
        if O.size > bound:
            continue
        out.extend(equivariant_maps(O, A))
    return out


def adjunction_spans(q: GMap, bound: int = 6) -> AdjunctionCheck:
    """Unit and counit spans for q_! -| q^* and both triangle identities."""
    A, B = q.source, q.target
    if max(A.size, B.size) > bound:
        raise BoundExceeded(f"carriers exceed bound {bound}")
    failures, checked = [], 0
    for f in slice_objects(A, bound):
        # counit_{q_! X} o q_!(unit_X) = id
        comp = compose(unit_span(q, f), counit_span(q, f.then(q)))
        checked += 1
        if normal_form(comp) != normal_form(identity_span(f.source)):
            failures.append(("counit.q_!unit", f))
    for g in slice_objects(B, bound):
        # q^*(counit_Y) o unit_{q^*Y} = id
        y = pull_object(q, g)
        pulled = pull_span(q, counit_span(q, g), y.then(q), g)
        comp = compose(unit_span(q, y), pulled)
        checked += 1
        if normal_form(comp) != normal_form(identity_span(y.source)):
            failures.append(("q^*counit.unit", g))
    return AdjunctionCheck(unit_span(q, identity(A)), counit_span(q, identity(B)),
                           not failures, checked, failures)


# --- class validators -----------------------------------------------------

@dataclass
class ClassReport:
    """Evidence about a class of maps on a finite universe (not a proof)."""

    name: str
    universe_size: int
    maps_tested: int
    closed_under_base_change: bool
    closed_under_diagonals: bool
    left_cancelable: bool
    truncated: bool
    adequate: bool
    wide: bool
    level_counts: dict
    witness: dict

    HEADER = "# class report: checks run on a finite universe, evidence only"

    @property
    def lemma_applicable(self) -> bool:
        """Diagonal closure and left-cancelability agree for wide, base-change closed classes."""
        return self.wide and self.closed_under_base_change

    @property
    def consistent(self) -> bool:
        return (not self.lemma_applicable
                or self.closed_under_diagonals == self.left_cancelable)

    def format(self) -> str:
        lines = [self.HEADER, f"class: {self.name}",
                 f"universe: {self.universe_size} objects, {self.maps_tested} maps in class"]
        for key in ("wide", "closed_under_base_change", "closed_under_diagonals",
                    "left_cancelable", "truncated", "adequate"):
            val = getattr(self, key)
            line = f"{key}: {'pass' if val else 'FAIL'}"
            if key in self.witness:
                line += f"  witness: {self.witness[key]}"
            lines.append(line)
        lev = ", ".join(f"{k}:{self.level_counts.get(k, 0)}" for k in (-2, -1, 0))
        lines.append(f"truncation levels: {lev}")
        lines.append(f"lemma applicable: {'yes' if self.lemma_applicable else 'no'}")
        lines.append(f"diagonal/left-cancel agreement: {'yes' if self.consistent else 'NO'}")
        return "\n".join(lines)


def _maps(universe):
    for X in universe:
        for Y in universe:
            yield from equivariant_maps(X, Y)


def validate_class(Q: Callable[[GMap], bool], universe, name: str = "Q",
                   bound: int | None = None) -> ClassReport:
    """Check inductibility conditions for the class Q on all maps between
    objects of ``universe`` (pullbacks are formed as needed)."""
    universe = list(universe)
    if bound is not None and any(X.size > bound for X in universe):
        raise BoundExceeded(f"universe object exceeds bound {bound}")
    maps = list(_maps(universe))
    by_target = {}
    for m in maps:
        by_target.setdefault(m.target, []).append(m)
    inQ = [m for m in maps if Q(m)]
    witness = {}

    wide = True
    for X in universe:
        if not Q(identity(X)):
            wide = False
            witness.setdefault("wide", f"identity on {X} not in class")
            break
    if wide:
        for q in inQ:
            for p in inQ:
                if p.target == q.source and not Q(p.then(q)):
                    wide = False
                    witness.setdefault("wide", f"composite of {p} and {q} not in class")
                    break
            if not wide:
                break

    base_change = True
    for q in inQ:
        for f in by_target.get(q.target, []):
            pb = pullback(q, f)
            if not Q(pb.pr2):
                base_change = False
                witness.setdefault("closed_under_base_change", f"q={q} along f={f}")
                break
        if not base_change:
            break

    diagonals = True
    levels = Counter()
    for q in inQ:
        levels[truncation_level(q)] += 1
        if not Q(diagonal(q)):
            diagonals = False
            witness.setdefault("closed_under_diagonals", f"q={q}")

    left_cancel = True
    for q in inQ:
        for p in by_target.get(q.source, []):
            if Q(p.then(q)) and not Q(p):
                left_cancel = False
                witness.setdefault("left_cancelable", f"p={p}, q={q}")
                break
        if not left_cancel:
            break

    return ClassReport(name, len(universe), len(inQ), base_change, diagonals, left_cancel,
                       True, wide and base_change, wide, dict(levels), witness)


def default_universe(G, bound: int = 4) -> list:
    return gsets_up_to(G, bound)


# --- random generation ----------------------------------------------------

def random_span(src: GSet, tgt: GSet, rng, max_apex: int = 6) -> Span:
    """A random span between fixed ends, built orbit by orbit."""
    G = src.group
    for _ in range(100):
        C = random_gset(G, rng, max_apex)
        left = random_map(C, src, rng)
        right = random_map(C, tgt, rng) if left is not None else None
        if left is not None and right is not None:
            return Span(src, tgt, C, left, right)
    return Span(src, tgt, empty(G), GMap(empty(G), src, []), GMap(empty(G), tgt, []))


# --- named classes of maps ------------------------------------------------

def _isovariant(f: GMap) -> bool:
    X, Y = f.source, f.target
    if X.size == 0:
        return True
    vals = np.asarray(f.values)
    fixed_x = X.action == np.arange(X.size)[None, :]
    fixed_y = Y.action[:, vals] == vals[None, :]
    return bool((fixed_x == fixed_y).all())


def _odd_fibers(f: GMap) -> bool:
    return all(len(f.fiber(y)) % 2 == 1 for y in range(f.target.size))


def _fibers_at_most_one_orbit(f: GMap) -> bool:
    return all(len({f.source.orbit_index[x] for x in f.fiber(y)}) <= 1
               for y in range(f.target.size))


NAMED_CLASSES = {
    "all": lambda f: True,
    "isos": lambda f: f.is_iso(),
    "injective": lambda f: f.is_injective(),
    "surjective": lambda f: f.is_surjective(),
    "isovariant": _isovariant,
    "odd-fibers": _odd_fibers,
    "orbitwise": _fibers_at_most_one_orbit,
}
