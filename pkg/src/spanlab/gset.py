"""Finite G-sets, equivariant maps, and the limits the span machinery needs."""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from itertools import product
from typing import NamedTuple

import numpy as np

from .errors import (AxiomViolation, ForeignSubgroup, GroupMismatch, NotEquivariant,
                     TargetMismatch)
from .grp import FiniteGroup, Subgroup, classes_within, trivial_group


class GSet:
    """A finite set ``0..size-1`` with a left action; ``action[g, x]`` is g.x."""

    def __init__(self, group: FiniteGroup, action, name: str | None = None, check: bool = True):
        act = np.array(action, dtype=np.int64)
        if act.ndim != 2 or act.shape[0] != group.order:
            act = act.reshape(group.order, -1)
        self.group = group
        self.action = act
        self.action.setflags(write=False)
        self.size = act.shape[1]
        self.name = name
        if check:
            self._check()
        self._key = (group, act.tobytes(), self.size)

    def _check(self):
        G, act, n = self.group, self.action, self.size
        if n and (act.min() < 0 or act.max() >= n):
            raise AxiomViolation("action entries out of range")
        if not np.array_equal(act[0], np.arange(n)):
            raise AxiomViolation("identity does not act trivially")
        for g in range(G.order):
            for h in range(G.order):
                if not np.array_equal(act[g][act[h]], act[G.m(g, h)]):
                    raise AxiomViolation(f"action not compatible with product ({g}, {h})",
                                         witness=(g, h))

    def __eq__(self, other):
        return isinstance(other, GSet) and self._key == other._key

    def __hash__(self):
        return hash(self._key)

    def __len__(self):
        return self.size

    def __repr__(self):
        label = f"{self.name}, " if self.name else ""
        return f"GSet({label}{self.group.name}, size={self.size})"

    def act(self, g: int, x: int) -> int:
        return int(self.action[g, x])

    def stabilizer(self, x: int) -> Subgroup:
        return self._stabilizers[x]

    @cached_property
    def _stabilizers(self) -> list:
        fixed = self.action == np.arange(self.size)[None, :]
        return [Subgroup._trusted(self.group, np.flatnonzero(fixed[:, x]).tolist())
                for x in range(self.size)]

    @cached_property
    def orbits(self) -> "OrbitDecomposition":
        return orbit_decomposition(self)

    @cached_property
    def orbit_index(self) -> list:
        """orbit_index[x] = index of the orbit containing x."""
        idx = [0] * self.size
        for i, orb in enumerate(self.orbits.orbits):
            for x in orb.points:
                idx[x] = i
        return idx


@dataclass(frozen=True)
class Orbit:
    points: tuple
    stabilizer: Subgroup

    @property
    def base(self) -> int:
        return self.points[0]


@dataclass(frozen=True)
class OrbitDecomposition:
    orbits: tuple

    def __len__(self):
        return len(self.orbits)

    def __iter__(self):
        return iter(self.orbits)


def orbit_decomposition(X: GSet) -> OrbitDecomposition:
    """Orbits ordered by minimal point; stabilizers taken at that point."""
    seen = [False] * X.size
    out = []
    for x in range(X.size):
        if seen[x]:
            continue
        pts = sorted(set(int(p) for p in X.action[:, x]))
        for p in pts:
            seen[p] = True
        out.append(Orbit(tuple(pts), X.stabilizer(x)))
    return OrbitDecomposition(tuple(out))


class GMap:
    """An equivariant map between G-sets."""

    def __init__(self, source: GSet, target: GSet, values, check: bool = True):
        if source.group != target.group:
            raise GroupMismatch("source and target live over different groups")
        self.source = source
        self.target = target
        self.values = tuple(int(v) for v in values)
        if len(self.values) != source.size:
            raise ValueError("map needs one value per source point")
        if check:
            if any(not 0 <= v < target.size for v in self.values):
                raise ValueError("map value out of range")
            vals = np.array(self.values, dtype=np.int64)
            if source.size and not np.array_equal(vals[source.action],
                                                  target.action[:, vals]):
                raise NotEquivariant("map is not equivariant")

    def __call__(self, x: int) -> int:
        return self.values[x]

    def __eq__(self, other):
        return (isinstance(other, GMap) and self.source == other.source
                and self.target == other.target and self.values == other.values)

    def __hash__(self):
        return hash((self.source, self.target, self.values))

    def __repr__(self):
        return f"GMap({list(self.values)})"

    @property
    def group(self):
        return self.source.group

    def then(self, other: "GMap") -> "GMap":
        """other o self"""
        if self.target != other.source:
            raise TargetMismatch("maps are not composable")
        return GMap(self.source, other.target, [other.values[v] for v in self.values],
                    check=False)

    def fiber(self, y: int) -> list:
        return [x for x, v in enumerate(self.values) if v == y]

    @cached_property
    def fibers(self) -> list:
        out = [[] for _ in range(self.target.size)]
        for x, v in enumerate(self.values):
            out[v].append(x)
        return out

    def is_injective(self) -> bool:
        return len(set(self.values)) == len(self.values)

    def is_surjective(self) -> bool:
        return len(set(self.values)) == self.target.size

    def is_iso(self) -> bool:
        return self.is_injective() and self.is_surjective()

    def inverse(self) -> "GMap":
        if not self.is_iso():
            raise ValueError("map is not invertible")
        inv = [0] * self.target.size
        for x, v in enumerate(self.values):
            inv[v] = x
        return GMap(self.target, self.source, inv, check=False)


def identity(X: GSet) -> GMap:
    return GMap(X, X, range(X.size), check=False)


# --- constructors ---------------------------------------------------------

def coset_space(G: FiniteGroup, H: Subgroup) -> GSet:
    """G/H with cosets ordered by minimal element, so eH is point 0."""
    if H.parent != G:
        raise ForeignSubgroup("H is not a subgroup of G")
    cosets = H.left_cosets()
    where = {}
    for i, c in enumerate(cosets):
        for g in c:
            where[g] = i
    act = [[where[G.m(g, c[0])] for c in cosets] for g in range(G.order)]
    return GSet(G, act, name=f"{G.name}/{list(H.elements)}", check=False)


def point(G: FiniteGroup) -> GSet:
    return GSet(G, [[0]] * G.order, name="pt", check=False)


def empty(G: FiniteGroup) -> GSet:
    return GSet(G, np.zeros((G.order, 0), dtype=np.int64), name="empty", check=False)


def trivial_gset(G: FiniteGroup, n: int) -> GSet:
    return GSet(G, [list(range(n))] * G.order, check=False)


def disjoint_union(*parts: GSet) -> GSet:
    G = parts[0].group
    cols, off = [], 0
    for X in parts:
        if X.group != G:
            raise GroupMismatch("cannot join G-sets over different groups")
        cols.append(X.action + off)
        off += X.size
    act = np.concatenate(cols, axis=1) if cols else np.zeros((G.order, 0), dtype=np.int64)
    return GSet(G, act, check=False)


def coproduct_injections(*parts: GSet):
    U = disjoint_union(*parts)
    maps, off = [], 0
    for X in parts:
        maps.append(GMap(X, U, range(off, off + X.size), check=False))
        off += X.size
    return U, maps


def product_gset(X: GSet, Y: GSet) -> GSet:
    """X x Y with the diagonal action; (x, y) is point x * |Y| + y."""
    act = X.action[:, :, None] * Y.size + Y.action[:, None, :]
    return GSet(X.group, act.reshape(X.group.order, -1), check=False)


def terminal_map(X: GSet) -> GMap:
    return GMap(X, point(X.group), [0] * X.size, check=False)


# --- limits ---------------------------------------------------------------

class Pullback(NamedTuple):
    apex: GSet
    pr1: GMap
    pr2: GMap

    def lift(self, u: GMap, v: GMap) -> GMap:
        """The mediating map T -> apex for a cone u: T -> A, v: T -> B."""
        if u.source != v.source:
            raise TargetMismatch("cone legs must share a source")
        pos = {(a, b): i for i, (a, b) in enumerate(zip(self.pr1.values, self.pr2.values))}
        try:
            vals = [pos[(u(t), v(t))] for t in range(u.source.size)]
        except KeyError:
            raise TargetMismatch("cone does not commute") from None
        return GMap(u.source, self.apex, vals, check=False)


def pullback(f: GMap, g: GMap) -> Pullback:
    """Fiber product A x_C B, points ordered lexicographically in (a, b)."""
    if f.target != g.target:
        raise TargetMismatch("pullback needs a common target")
    A, B = f.source, g.source
    pairs = [(a, b) for a in range(A.size) for b in g.fibers[f.values[a]]]
    pos = {p: i for i, p in enumerate(pairs)}
    G = A.group
    act = np.zeros((G.order, len(pairs)), dtype=np.int64)
    for i, (a, b) in enumerate(pairs):
        for h in range(G.order):
            act[h, i] = pos[(int(A.action[h, a]), int(B.action[h, b]))]
    P = GSet(G, act, check=False)
    return Pullback(P, GMap(P, A, [a for a, _ in pairs], check=False),
                    GMap(P, B, [b for _, b in pairs], check=False))


def diagonal(f: GMap) -> GMap:
    """A -> A x_B A, a |-> (a, a)."""
    pb = pullback(f, f)
    return pb.lift(identity(f.source), identity(f.source))


def truncation_level(f: GMap) -> int:
    """-2 for isomorphisms, otherwise one more than the level of the diagonal."""
    if f.is_iso():
        return -2
    return truncation_level(diagonal(f)) + 1


def underlying_map(f: GMap) -> GMap:
    """The same function between plain finite sets (trivial group)."""
    T = trivial_group()
    return GMap(trivial_gset(T, f.source.size), trivial_gset(T, f.target.size), f.values,
                check=False)


def fixed_points(X: GSet, H: Subgroup) -> list:
    if H.parent != X.group:
        raise ForeignSubgroup("H is not a subgroup of the acting group")
    rows = X.action[list(H.elements)]
    return [x for x in range(X.size) if np.all(rows[:, x] == x)]


# --- isomorphism search ---------------------------------------------------

def find_iso(X: GSet, Y: GSet, constraints=()) -> GMap | None:
    """An equivariant bijection phi: X -> Y with g o phi = f for every (f, g).

    Works orbit by orbit: phi is fixed on an X-orbit once the image of its base
    point is chosen, and that image must have the same stabilizer and the same
    constraint values.  Backtracks over orbit assignments in lexicographic
    order, so the result is deterministic.
    """
    if X.group != Y.group or X.size != Y.size:
        return None
    for f, g in constraints:
        if f.source != X or g.source != Y or f.target != g.target:
            raise TargetMismatch("constraint legs must go from X and Y to a common target")
    xo, yo = X.orbits.orbits, Y.orbits.orbits
    if len(xo) != len(yo):
        return None

    def sig_x(x):
        return tuple(f(x) for f, _ in constraints)

    def sig_y(y):
        return tuple(g(y) for _, g in constraints)

    # candidates for each X-orbit: (Y-orbit index, image of base point)
    cands = []
    for orb in xo:
        x0, S, sx = orb.base, orb.stabilizer, sig_x(orb.base)
        opts = []
        for j, yorb in enumerate(yo):
            if len(yorb.points) != len(orb.points):
                continue
            for y in yorb.points:
                if sig_y(y) == sx and Y.stabilizer(y) == S:
                    opts.append((j, y))
        if not opts:
            return None
        cands.append(opts)
    order = sorted(range(len(xo)), key=lambda i: (len(cands[i]), i))
    used = set()
    choice = {}

    def search(k):
        if k == len(order):
            return True
        i = order[k]
        for j, y in cands[i]:
            if j in used:
                continue
            used.add(j)
            choice[i] = y
            if search(k + 1):
                return True
            used.discard(j)
        return False

    if not search(0):
        return None
    vals = [0] * X.size
    for i, orb in enumerate(xo):
        x0, y0 = orb.base, choice[i]
        for gidx in range(X.group.order):
            vals[int(X.action[gidx, x0])] = int(Y.action[gidx, y0])
    return GMap(X, Y, vals, check=False)


# --- enumeration helpers used by validators and tests -----------------------

def equivariant_maps(X: GSet, Y: GSet):
    """Every equivariant map X -> Y (choose an image for each orbit base point)."""
    opts = []
    for orb in X.orbits:
        fix = fixed_points(Y, orb.stabilizer) if Y.size else []
        if not fix:
            return
        opts.append(fix)
    for imgs in product(*opts):
        vals = [0] * X.size
        for orb, y0 in zip(X.orbits, imgs):
            for g in range(X.group.order):
                vals[int(X.action[g, orb.base])] = int(Y.action[g, y0])
        yield GMap(X, Y, vals, check=False)


def gsets_up_to(G: FiniteGroup, bound: int) -> list:
    """One representative of every iso class of G-sets with at most ``bound`` points."""
    orbit_types = [coset_space(G, H) for H in G.lattice.reps()]
    orbit_types = [O for O in orbit_types if O.size <= bound]
    out = []

    def rec(start, size, parts):
        out.append(disjoint_union(*parts) if parts else empty(G))
        for i in range(start, len(orbit_types)):
            O = orbit_types[i]
            if size + O.size <= bound:
                rec(i, size + O.size, parts + [O])

    rec(0, 0, [])
    return out


def maps_up_to_iso(G: FiniteGroup, bound: int) -> list:
    """One map per iso class of arrows A -> B with |A|, |B| <= ``bound``.

    Over an orbit G/H of B the map is G x_H F for an H-set F, so a class is a
    choice of H-set (a multiset of H-classes of subgroups L) for each orbit of B.
    """
    reps = G.lattice.reps()
    index = [G.order // H.order for H in reps]
    spaces = [coset_space(G, H) for H in reps]
    within = [[c[0] for c in classes_within(H)] for H in reps]

    def fiber_options(t):
        """Multisets of subgroup classes of reps[t], as sorted index tuples, by size."""
        H, cap = reps[t], bound // index[t]
        out = []

        def rec(start, size, chosen):
            out.append((size, tuple(chosen)))
            for k in range(start, len(within[t])):
                n = H.order // within[t][k].order
                if size + n <= cap:
                    rec(k, size + n, chosen + [k])

        rec(0, 0, [])
        return out

    options = [fiber_options(t) for t in range(len(reps))]
    out = []

    def build(types, fibers):
        B = disjoint_union(*[spaces[t] for t in types]) if types else empty(G)
        parts, vals, off = [], [], 0
        for t, fib in zip(types, fibers):
            for k in fib:
                O = coset_space(G, within[t][k])
                first = {}
                for g in range(G.order):
                    first.setdefault(int(O.action[g, 0]), g)
                vals += [off + spaces[t].act(first[p], 0) for p in range(O.size)]
                parts.append(O)
            off += index[t]
        A = disjoint_union(*parts) if parts else empty(G)
        return GMap(A, B, vals, check=False)

    def rec(start, bsize, asize, types, fibers):
        # orbits of B come in nondecreasing type order, and equal types take
        # nondecreasing fibers, so each class is produced once
        out.append(build(types, fibers))
        for t in range(start, len(reps)):
            if bsize + index[t] > bound:
                continue
            for j, (fs, fib) in enumerate(options[t]):
                if asize + index[t] * fs > bound:
                    continue
                if types and types[-1] == t and (fs, fib) < fibkey[-1]:
                    continue
                fibkey.append((fs, fib))
                rec(t, bsize + index[t], asize + index[t] * fs, types + [t], fibers + [fib])
                fibkey.pop()

    fibkey = []
    rec(0, 0, 0, [], [])
    return out


def random_gset(G: FiniteGroup, rng, max_size: int, min_size: int = 0) -> GSet:
    orbit_types = [coset_space(G, H) for H in G.lattice.reps()]
    while True:
        parts, size = [], 0
        target = rng.integers(min_size, max_size + 1)
        while size < target:
            fits = [O for O in orbit_types if size + O.size <= max_size]
            if not fits:
                break
            O = fits[rng.integers(len(fits))]
            parts.append(O)
            size += O.size
        if size >= min_size:
            X = disjoint_union(*parts) if parts else empty(G)
            # scramble point labels so tests do not rely on the tidy layout
            perm = rng.permutation(X.size)
            return relabel(X, perm)


def relabel(X: GSet, perm) -> GSet:
    """Rename point x to perm[x]."""
    perm = np.asarray(perm, dtype=np.int64)
    inv = np.argsort(perm)
    act = perm[X.action[:, inv]] if X.size else X.action
    return GSet(X.group, act, check=False)


def random_map(X: GSet, Y: GSet, rng) -> GMap | None:
    vals = [0] * X.size
    for orb in X.orbits:
        fix = fixed_points(Y, orb.stabilizer)
        if not fix:
            return None
        y0 = fix[rng.integers(len(fix))]
        for g in range(X.group.order):
            vals[int(X.action[g, orb.base])] = int(Y.action[g, y0])
    return GMap(X, Y, vals, check=False)
