"""Mackey functors for a finite group with values in free modules.

Stored data lives on conjugacy-class representatives R (the first subgroup of
each class in the lattice order):

* ``ranks[c]``          rank of M(R_c)
* ``res[c, K]``         M(R_c) -> M(K) for K <= R_c minimal in its R_c-class
* ``tr[c, K]``          M(K) -> M(R_c)
* ``conj[c, w]``        the Weyl action c_w on M(R_c), w the least element of wR_c

M(L) for an arbitrary subgroup L is identified with M(rep) through the least
g with g rep g^-1 = L; every other restriction, transfer and conjugation is
rebuilt from the stored data by conjugating.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .errors import BoundExceeded, GroupMismatch
from .grp import (DEFAULT_BOUND, FiniteGroup, Subgroup, classes_within, double_cosets_within,
                  subgroups_of)
from .gset import GMap, GSet, coset_space, fixed_points, identity, point
from .linalg import CoeffRing, ModuleMap
from .span import MarkMatrix, Span, compose, hom_basis, normal_form


def weyl_reps(R: Subgroup) -> list:
    """Least element of each coset nR, n in N(R)."""
    N = R.normalizer()
    G = R.parent
    return sorted({min(G.m(n, r) for r in R.elements) for n in N.elements})


def restriction_targets(R: Subgroup) -> list:
    """Subgroups of R that are least in their R-conjugacy class."""
    return [cls[0] for cls in classes_within(R)]


class MackeyFunctor:
    def __init__(self, group: FiniteGroup, ring: CoeffRing, ranks, res, tr, conj, name="M"):
        self.group = group
        self.ring = ring
        self.ranks = list(ranks)
        self.res = dict(res)
        self.tr = dict(tr)
        self.conj = dict(conj)
        self.name = name
        lat = group.lattice
        if len(self.ranks) != len(lat.classes):
            raise ValueError("need one rank per conjugacy class")

    def __repr__(self):
        return f"MackeyFunctor({self.name}, {self.group.name}, {self.ring}, ranks={self.ranks})"

    def replace(self, kind: str, key, new: ModuleMap) -> "MackeyFunctor":
        """Copy with one stored structure map swapped out (used for mutation tests)."""
        parts = {"res": dict(self.res), "tr": dict(self.tr), "conj": dict(self.conj)}
        parts[kind][key] = new
        return MackeyFunctor(self.group, self.ring, self.ranks, parts["res"], parts["tr"],
                             parts["conj"], self.name + "*")

    # -- structure on arbitrary subgroups ----------------------------------

    @cached_property
    def _lat(self):
        return self.group.lattice

    def cls(self, L: Subgroup) -> int:
        return self._lat.class_of(L)

    def rank(self, L: Subgroup) -> int:
        return self.ranks[self.cls(L)]

    @cached_property
    def _transporters(self):
        G, lat = self.group, self._lat
        out = {}
        for c, members in enumerate(lat.classes):
            R = lat.rep(c)
            for j in members:
                L = lat.subgroups[j]
                out[L.elements] = next(g for g in range(G.order) if R.conjugate(g) == L)
        return out

    def transporter(self, L: Subgroup) -> int:
        return self._transporters[L.elements]

    def _weyl_key(self, R: Subgroup, n: int) -> int:
        return min(self.group.m(n, r) for r in R.elements)

    def conj_map(self, g: int, L: Subgroup) -> ModuleMap:
        """c_g: M(L) -> M(gLg^-1)."""
        G = self.group
        L2 = L.conjugate(g)
        c = self.cls(L)
        R = self._lat.rep(c)
        n = G.m(G.m(int(G.inv[self.transporter(L2)]), g), self.transporter(L))
        return self.conj[(c, self._weyl_key(R, n))]

    def _locate(self, L: Subgroup, J: Subgroup):
        """For J <= L: (stored key, t_L, h) with J = (t_L h) K (t_L h)^-1."""
        G = self.group
        c = self.cls(L)
        R = self._lat.rep(c)
        t = self.transporter(L)
        J0 = J.conjugate(int(G.inv[t]))
        for K in restriction_targets(R):
            if K.order != J0.order:
                continue
            for h in R.elements:
                if K.conjugate(h) == J0:
                    return (c, K.elements), K, G.m(t, h)
        raise ValueError(f"{J} is not a subgroup of {L}")

    def res_map(self, L: Subgroup, J: Subgroup) -> ModuleMap:
        """res^L_J: M(L) -> M(J)."""
        G = self.group
        key, K, th = self._locate(L, J)
        t = self.transporter(L)
        return self.conj_map(th, K) @ self.res[key] @ self.conj_map(int(G.inv[t]), L)

    def tr_map(self, L: Subgroup, J: Subgroup) -> ModuleMap:
        """tr^L_J: M(J) -> M(L)."""
        G = self.group
        key, K, th = self._locate(L, J)
        R = self._lat.rep(key[0])
        t = self.transporter(L)
        return self.conj_map(t, R) @ self.tr[key] @ self.conj_map(int(G.inv[th]), J)

    # -- values on G-sets ---------------------------------------------------

    def block_ranks(self, X: GSet) -> list:
        return [self.rank(orb.stabilizer) for orb in X.orbits]

    def module_rank(self, X: GSet) -> int:
        return sum(self.block_ranks(X))


def evaluate_span(M: MackeyFunctor, s: Span) -> ModuleMap:
    """M(s): M(A) -> M(B), summing tr o res contributions over apex orbits.

    M(A) is the direct sum over orbits of A (ordered by least point) of
    M(stabilizer of the least point).
    """
    if s.group != M.group:
        raise GroupMismatch("span and Mackey functor use different groups")
    G = M.group
    A, B, C = s.src, s.tgt, s.apex
    ra, rb = M.block_ranks(A), M.block_ranks(B)
    offa = [sum(ra[:i]) for i in range(len(ra))]
    offb = [sum(rb[:i]) for i in range(len(rb))]
    out = M.ring.zeros(sum(rb), sum(ra))
    for orb in C.orbits:
        c, L = orb.base, orb.stabilizer
        a, b = s.left(c), s.right(c)
        ia, ib = A.orbit_index[a], B.orbit_index[b]
        a0, b0 = A.orbits.orbits[ia].base, B.orbits.orbits[ib].base
        xa = _carrier(A, a0, a)
        xb = _carrier(B, b0, b)
        Sa, Sb = A.orbits.orbits[ia].stabilizer, B.orbits.orbits[ib].stabilizer
        Ta, Tb = A.stabilizer(a), B.stabilizer(b)
        piece = (M.conj_map(int(G.inv[xb]), Tb) @ M.tr_map(Tb, L) @ M.res_map(Ta, L)
                 @ M.conj_map(xa, Sa))
        rs = slice(offb[ib], offb[ib] + rb[ib])
        cs = slice(offa[ia], offa[ia] + ra[ia])
        out[rs, cs] = M.ring.reduce(out[rs, cs] + piece.matrix)
    return ModuleMap(M.ring, out)


def _carrier(X: GSet, x0: int, x: int) -> int:
    """Least g with g.x0 = x."""
    for g in range(X.group.order):
        if X.action[g, x0] == x:
            return g
    raise ValueError("points lie in different orbits")


# --- validation -----------------------------------------------------------

@dataclass
class Failure:
    identity: str
    where: tuple
    lhs: object = None
    rhs: object = None

    def __str__(self):
        s = f"{self.identity} at {self.where}"
        if self.lhs is not None:
            s += f": lhs={self.lhs.tolist()} rhs={self.rhs.tolist()}"
        return s


@dataclass
class MackeyReport:
    failures: list = field(default_factory=list)
    checked: int = 0

    @property
    def ok(self) -> bool:
        return not self.failures

    def __bool__(self):
        return self.ok

    def format(self) -> str:
        lines = [f"identities checked: {self.checked}",
                 f"failures: {len(self.failures)}"]
        lines += [f"  FAIL {f}" for f in self.failures]
        lines.append("result: " + ("pass" if self.ok else "FAIL"))
        return "\n".join(lines)


def validate_mackey(M: MackeyFunctor) -> MackeyReport:
    """Check Weyl actions, transitivity, conjugation equivariance and the
    double coset formula on every subgroup, recording failures as data."""
    G, lat, ring = M.group, M.group.lattice, M.ring
    rep = MackeyReport()

    def check(name, where, lhs, rhs):
        rep.checked += 1
        if lhs != rhs:
            rep.failures.append(Failure(name, where, lhs, rhs))

    # shapes and presence of stored data
    for c in range(len(lat.classes)):
        R = lat.rep(c)
        n = M.ranks[c]
        for K in restriction_targets(R):
            m = M.rank(K)
            for kind, store, shape in (("res", M.res, (m, n)), ("tr", M.tr, (n, m))):
                f = store.get((c, K.elements))
                rep.checked += 1
                if f is None or f.matrix.shape != shape:
                    rep.failures.append(Failure(f"{kind} shape", (R.elements, K.elements)))
                    return rep
        for w in weyl_reps(R):
            f = M.conj.get((c, w))
            rep.checked += 1
            if f is None or f.matrix.shape != (n, n):
                rep.failures.append(Failure("conj shape", (R.elements, w)))
                return rep

    # Weyl group acts
    for c in range(len(lat.classes)):
        R = lat.rep(c)
        ws = weyl_reps(R)
        check("conj identity", (R.elements, 0), M.conj[(c, 0)], ModuleMap.identity(ring, M.ranks[c]))
        for u in ws:
            for v in ws:
                uv = M._weyl_key(R, G.m(u, v))
                check("conj product", (R.elements, u, v), M.conj[(c, u)] @ M.conj[(c, v)],
                      M.conj[(c, uv)])

    subs = lat.subgroups
    below = {L.elements: subgroups_of(L) for L in subs}
    for L in subs:
        n = M.rank(L)
        check("res identity", (L.elements,), M.res_map(L, L), ModuleMap.identity(ring, n))
        check("tr identity", (L.elements,), M.tr_map(L, L), ModuleMap.identity(ring, n))
    for L in subs:
        for J in below[L.elements]:
            for I in below[J.elements]:
                check("res transitivity", (L.elements, J.elements, I.elements),
                      M.res_map(J, I) @ M.res_map(L, J), M.res_map(L, I))
                check("tr transitivity", (L.elements, J.elements, I.elements),
                      M.tr_map(L, J) @ M.tr_map(J, I), M.tr_map(L, I))
    for L in subs:
        for J in below[L.elements]:
            for g in range(G.order):
                gL, gJ = L.conjugate(g), J.conjugate(g)
                check("res equivariance", (L.elements, J.elements, g),
                      M.conj_map(g, J) @ M.res_map(L, J), M.res_map(gL, gJ) @ M.conj_map(g, L))
                check("tr equivariance", (L.elements, J.elements, g),
                      M.conj_map(g, L) @ M.tr_map(L, J), M.tr_map(gL, gJ) @ M.conj_map(g, J))
    # double coset formula:
    # res^L_K tr^L_H = sum_g tr^K_{K n gHg^-1} c_g res^H_{g^-1Kg n H}
    for L in subs:
        for K in below[L.elements]:
            for H in below[L.elements]:
                lhs = M.res_map(L, K) @ M.tr_map(L, H)
                rhs = ModuleMap.zero(ring, M.rank(K), M.rank(H))
                for g in double_cosets_within(L, K, H).reps:
                    ginv = int(G.inv[g])
                    inner = K.conjugate(ginv).intersect(H)
                    outer = K.intersect(H.conjugate(g))
                    rhs = rhs + (M.tr_map(K, outer) @ M.conj_map(g, inner)
                                 @ M.res_map(H, inner))
                check("double coset", (L.elements, K.elements, H.elements), lhs, rhs)
    return rep


# --- standard examples ----------------------------------------------------

def _coset_map(G: FiniteGroup, K: Subgroup, H: Subgroup, g: int) -> GMap:
    """G/K -> G/H, xK |-> xgH (needs K <= gHg^-1)."""
    src, tgt = coset_space(G, K), coset_space(G, H)
    vals = []
    for coset in K.left_cosets():
        x = coset[0]
        y = G.m(x, g)
        vals.append(next(i for i, c in enumerate(H.left_cosets()) if y in c))
    return GMap(src, tgt, vals)


def burnside_postcompose(s: Span, ring: CoeffRing | None = None) -> ModuleMap:
    """A(s): A(X) -> A(Y) by postcomposition on the bases hom_basis(pt, -)."""
    ring = ring or CoeffRing("Z")
    pt = point(s.group)
    src_basis, tgt_basis = hom_basis(pt, s.src), hom_basis(pt, s.tgt)
    cols = []
    for b in src_basis:
        cols.append(normal_form(compose(b.realize(), s)).coefficients(tgt_basis))
    rows = [[cols[j][i] for j in range(len(cols))] for i in range(len(tgt_basis))]
    return ModuleMap.from_rows(ring, rows, src_rank=len(src_basis)) if rows else \
        ModuleMap.zero(ring, 0, len(src_basis))


def burnside_mackey(G: FiniteGroup, ring: CoeffRing | None = None,
                    bound: int = DEFAULT_BOUND) -> MackeyFunctor:
    """The Burnside Mackey functor, computed entirely by span composition."""
    if G.order > bound:
        raise BoundExceeded(f"group order {G.order} exceeds bound {bound}")
    ring = ring or CoeffRing("Z")
    lat = G.lattice
    ranks, res, tr, conj = [], {}, {}, {}
    for c in range(len(lat.classes)):
        ranks.append(len(classes_within(lat.rep(c))))
    for c in range(len(lat.classes)):
        R = lat.rep(c)
        for K in restriction_targets(R):
            rep = lat.rep_of(K)
            t = next(g for g in range(G.order) if rep.conjugate(g) == K)
            proj = _coset_map(G, K, R, 0)
            phi = _coset_map(G, K, rep, t)
            res[(c, K.elements)] = burnside_postcompose(Span.of(proj, phi), ring)
            tr[(c, K.elements)] = burnside_postcompose(Span.of(phi, proj), ring)
        for w in weyl_reps(R):
            phi = _coset_map(G, R, R, w)
            conj[(c, w)] = burnside_postcompose(Span.of(phi, identity(phi.source)), ring)
    return MackeyFunctor(G, ring, ranks, res, tr, conj, name=f"A_{G.name}")


def fixed_point_mackey(G: FiniteGroup, ring: CoeffRing | None = None) -> MackeyFunctor:
    """Constant value R, restriction the identity, transfer multiplication by the index."""
    ring = ring or CoeffRing("Z")
    lat = G.lattice
    one = ModuleMap.identity(ring, 1)
    res, tr, conj = {}, {}, {}
    for c in range(len(lat.classes)):
        R = lat.rep(c)
        for K in restriction_targets(R):
            res[(c, K.elements)] = one
            tr[(c, K.elements)] = one.scale(R.order // K.order)
        for w in weyl_reps(R):
            conj[(c, w)] = one
    return MackeyFunctor(G, ring, [1] * len(lat.classes), res, tr, conj,
                         name=f"FP_{G.name}")


def zero_mackey(G: FiniteGroup, ring: CoeffRing | None = None) -> MackeyFunctor:
    ring = ring or CoeffRing("Z")
    lat = G.lattice
    z = ModuleMap.zero(ring, 0, 0)
    res = {(c, K.elements): z for c in range(len(lat.classes))
           for K in restriction_targets(lat.rep(c))}
    conj = {(c, w): z for c in range(len(lat.classes)) for w in weyl_reps(lat.rep(c))}
    return MackeyFunctor(G, ring, [0] * len(lat.classes), res, dict(res), conj,
                         name=f"0_{G.name}")


def table_of_marks(G: FiniteGroup, bound: int = DEFAULT_BOUND) -> MarkMatrix:
    """Row [K], column [H]: the number of H-fixed points of G/K."""
    if G.order > bound:
        raise BoundExceeded(f"group order {G.order} exceeds bound {bound}")
    reps = G.lattice.reps()
    idx = tuple(range(len(reps)))
    ent = [[len(fixed_points(coset_space(G, K), H)) for H in reps] for K in reps]
    return MarkMatrix(idx, idx, np.array(ent, dtype=object).reshape(len(reps), len(reps)))
