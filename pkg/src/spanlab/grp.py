"""Finite groups given by multiplication tables, their subgroups and double cosets."""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from itertools import permutations

import numpy as np

from .errors import AxiomViolation, BoundExceeded, ForeignSubgroup

DEFAULT_BOUND = 48


class FiniteGroup:
    """A finite group on the elements ``0..order-1``; element 0 is the identity.

    ``mul[g, h]`` is the index of ``g*h``.  Construct through :func:`make_group`
    (or the named constructors below) so that the axioms are checked.
    """

    def __init__(self, mul: np.ndarray, name: str | None = None):
        self.mul = mul
        self.mul.setflags(write=False)
        self.order = mul.shape[0]
        self.name = name or f"G{self.order}"
        inv = np.zeros(self.order, dtype=np.int64)
        for g in range(self.order):
            inv[g] = int(np.nonzero(mul[g] == 0)[0][0])
        self.inv = inv
        self.inv.setflags(write=False)
        self._key = mul.tobytes()

    def __eq__(self, other):
        return isinstance(other, FiniteGroup) and self._key == other._key

    def __hash__(self):
        return hash(self._key)

    def __repr__(self):
        return f"FiniteGroup({self.name}, order={self.order})"

    def __len__(self):
        return self.order

    @property
    def elements(self):
        return range(self.order)

    def m(self, g: int, h: int) -> int:
        return int(self.mul[g, h])

    def conj(self, g: int, x: int) -> int:
        """g x g^-1"""
        return int(self.mul[self.mul[g, x], self.inv[g]])

    def whole(self) -> "Subgroup":
        return Subgroup._trusted(self, range(self.order))

    def trivial_subgroup(self) -> "Subgroup":
        return Subgroup._trusted(self, (0,))

    def generate(self, gens) -> "Subgroup":
        return Subgroup._trusted(self, _closure(self, {0, *gens}))

    @cached_property
    def lattice(self) -> "SubgroupLattice":
        return subgroup_lattice(self, bound=max(DEFAULT_BOUND, self.order))


def make_group(table, name: str | None = None) -> FiniteGroup:
    """Validate a multiplication table and wrap it as a FiniteGroup."""
    mul = np.array(table, dtype=np.int64)
    if mul.ndim != 2 or mul.shape[0] != mul.shape[1] or mul.shape[0] == 0:
        raise AxiomViolation("table must be a non-empty square array")
    n = mul.shape[0]
    if mul.min() < 0 or mul.max() >= n:
        raise AxiomViolation("table entries out of range")
    ar = np.arange(n)
    if not (np.array_equal(mul[0], ar) and np.array_equal(mul[:, 0], ar)):
        raise AxiomViolation("element 0 is not a two-sided identity", witness=(0,))
    for g in range(n):
        row = mul[g]
        if 0 not in row:
            raise AxiomViolation(f"element {g} has no inverse", witness=(g,))
        h = int(np.nonzero(row == 0)[0][0])
        if mul[h, g] != 0:
            raise AxiomViolation(f"element {g} has no two-sided inverse", witness=(g,))
    # (gh)k == g(hk) for all triples, vectorised over h, k
    for g in range(n):
        lhs = mul[mul[g][:, None], ar[None, :]]
        rhs = mul[g][mul]
        bad = np.argwhere(lhs != rhs)
        if len(bad):
            h, k = (int(x) for x in bad[0])
            raise AxiomViolation(f"not associative at ({g}, {h}, {k})", witness=(g, h, k))
    return FiniteGroup(mul, name)


def _closure(G: FiniteGroup, elems) -> tuple:
    found = set(elems)
    frontier = list(found)
    while frontier:
        new = []
        for a in frontier:
            for b in list(found):
                for c in (G.m(a, b), G.m(b, a)):
                    if c not in found:
                        found.add(c)
                        new.append(c)
        frontier = new
    return tuple(sorted(found))


@dataclass(frozen=True)
class Subgroup:
    parent: FiniteGroup
    elements: tuple

    def __post_init__(self):
        els = tuple(sorted(set(int(e) for e in self.elements)))
        if els != tuple(self.elements):
            object.__setattr__(self, "elements", els)
        if not els or els[0] != 0:
            raise AxiomViolation("subgroup must contain the identity")
        s = set(els)
        for a in els:
            if int(self.parent.inv[a]) not in s:
                raise AxiomViolation(f"subgroup not closed under inverse at {a}", witness=(a,))
            for b in els:
                if self.parent.m(a, b) not in s:
                    raise AxiomViolation(f"subgroup not closed at ({a}, {b})", witness=(a, b))
        if self.parent.order % len(els):
            raise AxiomViolation("subgroup order does not divide group order")

    @classmethod
    def _trusted(cls, parent, elements) -> "Subgroup":
        obj = object.__new__(cls)
        object.__setattr__(obj, "parent", parent)
        object.__setattr__(obj, "elements", tuple(elements))
        return obj

    @property
    def order(self) -> int:
        return len(self.elements)

    def __len__(self):
        return len(self.elements)

    def __contains__(self, g):
        return g in self._set

    @cached_property
    def _set(self):
        return frozenset(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __le__(self, other: "Subgroup") -> bool:
        return self._set <= other._set

    def __repr__(self):
        return f"Subgroup({list(self.elements)})"

    def conjugate(self, g: int) -> "Subgroup":
        """g H g^-1"""
        G = self.parent
        return Subgroup._trusted(G, sorted(G.conj(g, h) for h in self.elements))

    def intersect(self, other: "Subgroup") -> "Subgroup":
        _check_same(self.parent, other)
        return Subgroup._trusted(self.parent, sorted(self._set & other._set))

    def index(self, other: "Subgroup | None" = None) -> int:
        big = self.parent.order if other is None else other.order
        return big // self.order

    def sort_key(self):
        return (self.order, self.elements)

    def left_cosets(self) -> list[tuple]:
        """Cosets gH of the parent group, ordered by their minimal element."""
        G = self.parent
        seen, out = set(), []
        for g in range(G.order):
            if g in seen:
                continue
            coset = tuple(sorted(G.m(g, h) for h in self.elements))
            seen.update(coset)
            out.append(coset)
        return out

    def normalizer(self) -> "Subgroup":
        G = self.parent
        return Subgroup._trusted(G, [g for g in range(G.order) if self.conjugate(g) == self])


def _check_same(G, H):
    if H.parent != G:
        raise ForeignSubgroup(f"{H} is not a subgroup of {G}")


class SubgroupLattice:
    """All subgroups (sorted by order, then elements) and their conjugacy classes.

    ``classes[i]`` lists indices into ``subgroups``; the first index of each
    class is its distinguished representative.  Unpacks as
    ``(subgroups, classes)``.
    """

    def __init__(self, subgroups, classes):
        self.subgroups = subgroups
        self.classes = classes
        self._pos = {H.elements: i for i, H in enumerate(subgroups)}
        self._cls = [0] * len(subgroups)
        for c, members in enumerate(classes):
            for j in members:
                self._cls[j] = c

    def __iter__(self):
        return iter((self.subgroups, self.classes))

    def index_of(self, H: Subgroup) -> int:
        return self._pos[H.elements]

    def class_of(self, H: Subgroup) -> int:
        return self._cls[self._pos[H.elements]]

    def rep(self, c: int) -> Subgroup:
        return self.subgroups[self.classes[c][0]]

    def reps(self) -> list:
        return [self.rep(c) for c in range(len(self.classes))]

    def rep_of(self, H: Subgroup) -> Subgroup:
        return self.rep(self.class_of(H))


def subgroup_lattice(G: FiniteGroup, bound: int = DEFAULT_BOUND) -> SubgroupLattice:
    """Enumerate every subgroup of G and group them into conjugacy classes.

    Subgroups are found by closing the set of cyclic subgroups under joins
    (subgroup generated by two subgroups) until nothing new appears.
    """
    if G.order > bound:
        raise BoundExceeded(f"group order {G.order} exceeds bound {bound}")
    cyclic = {_closure(G, {g}) for g in range(G.order)}
    found = set(cyclic)
    frontier = set(cyclic)
    while frontier:
        new = set()
        for a in frontier:
            sa = set(a)
            for b in cyclic:
                if set(b) <= sa:
                    continue
                j = _closure(G, sa | set(b))
                if j not in found:
                    new.add(j)
        found |= new
        frontier = new
    subs = [Subgroup._trusted(G, e) for e in sorted(found, key=lambda e: (len(e), e))]
    pos = {H.elements: i for i, H in enumerate(subs)}
    seen = [False] * len(subs)
    classes = []
    for i, H in enumerate(subs):
        if seen[i]:
            continue
        members = sorted({pos[H.conjugate(g).elements] for g in range(G.order)})
        for j in members:
            seen[j] = True
        classes.append(members)
    # members are sorted by (order, elements) so the first is the distinguished
    # rep, and classes come out ordered by (order, rep elements)
    return SubgroupLattice(subs, classes)


@dataclass(frozen=True)
class DoubleCosetDecomposition:
    reps: tuple
    coset_sizes: tuple
    cosets: tuple = ()


def double_cosets(G: FiniteGroup, K: Subgroup, H: Subgroup) -> DoubleCosetDecomposition:
    """Decompose G into double cosets K g H, each listed by its minimal element."""
    _check_same(G, K)
    _check_same(G, H)
    return _double_cosets_in(G, range(G.order), K, H)


def _double_cosets_in(G, ambient, K, H) -> DoubleCosetDecomposition:
    seen, reps, sizes, cosets = set(), [], [], []
    for g in sorted(ambient):
        if g in seen:
            continue
        dc = tuple(sorted({G.m(G.m(k, g), h) for k in K.elements for h in H.elements}))
        seen.update(dc)
        reps.append(g)
        sizes.append(len(dc))
        cosets.append(dc)
    return DoubleCosetDecomposition(tuple(reps), tuple(sizes), tuple(cosets))


def double_cosets_within(L: Subgroup, K: Subgroup, H: Subgroup) -> DoubleCosetDecomposition:
    """K \\ L / H for subgroups K, H of L."""
    if not (K <= L and H <= L):
        raise ForeignSubgroup("K and H must lie in L")
    return _double_cosets_in(L.parent, L.elements, K, H)


def subgroups_of(L: Subgroup) -> list:
    """Subgroups of L, in the global lattice order."""
    return [S for S in L.parent.lattice.subgroups if S <= L]


def classes_within(L: Subgroup) -> list:
    """Subgroups of L up to L-conjugacy; each class is a list, first entry minimal."""
    subs = subgroups_of(L)
    done, out = set(), []
    for S in subs:
        if S.elements in done:
            continue
        cls = sorted({S.conjugate(h) for h in L.elements}, key=Subgroup.sort_key)
        done.update(C.elements for C in cls)
        out.append(cls)
    return out


def transporter(L: Subgroup, A: Subgroup, B: Subgroup):
    """Minimal l in L with l A l^-1 = B, or None."""
    for g in L.elements:
        if A.conjugate(g) == B:
            return g
    return None


# --- named groups -------------------------------------------------------

def group_from_permutations(perms, name=None) -> FiniteGroup:
    """Close a set of permutations (tuples) under composition; identity gets index 0.

    Elements are listed in order of discovery from the identity, composing on
    the left with each generator, which keeps small tables readable.
    """
    perms = [tuple(p) for p in perms]
    n = len(perms[0])
    ident = tuple(range(n))
    elems = [ident]
    index = {ident: 0}
    i = 0
    while i < len(elems):
        for p in perms:
            q = tuple(p[x] for x in elems[i])  # p after elems[i]
            if q not in index:
                index[q] = len(elems)
                elems.append(q)
        i += 1
    table = [[index[tuple(a[x] for x in b)] for b in elems] for a in elems]
    return make_group(table, name)


def cyclic_group(n: int) -> FiniteGroup:
    return make_group([[(i + j) % n for j in range(n)] for i in range(n)], f"C{n}")


def trivial_group() -> FiniteGroup:
    return make_group([[0]], "C1")


def symmetric_group(n: int) -> FiniteGroup:
    perms = sorted(permutations(range(n)))
    index = {p: i for i, p in enumerate(perms)}
    table = [[index[tuple(a[x] for x in b)] for b in perms] for a in perms]
    return make_group(table, f"S{n}")


def dihedral_group(n: int) -> FiniteGroup:
    """Symmetries of the n-gon, order 2n."""
    rot = tuple((i + 1) % n for i in range(n))
    ref = tuple((-i) % n for i in range(n))
    return group_from_permutations([rot, ref], f"D{2 * n}")


def klein_four() -> FiniteGroup:
    return make_group([[i ^ j for j in range(4)] for i in range(4)], "V4")


def named_group(name: str) -> FiniteGroup:
    """Parse names like C1, C4, S3, D8, V4."""
    if name in ("1", "C1", "trivial"):
        return trivial_group()
    if name == "V4":
        return klein_four()
    kind, num = name[0], name[1:]
    if num.isdigit():
        k = int(num)
        if kind == "C" and k >= 1:
            return cyclic_group(k)
        if kind == "S" and k >= 1:
            return symmetric_group(k)
        if kind == "D" and k >= 4 and k % 2 == 0:
            return dihedral_group(k // 2)
    raise KeyError(f"unknown group name {name!r}")
