"""Indexed sums and products of module families, Beck-Chevalley maps and norms.

A family over a (G-)set A assigns a free module to every point. Each basis
vector carries a label recording where it came from, so canonical
identifications like pr1_! D_! D^* pr2^* X = X are built by matching labels
rather than by hand. The equivariant structure of a family is not tracked;
only the underlying families of modules and maps between them are.

q_! and q_* have the same carrier (direct sums of fibers). They differ in
their units and counits, and the norm recursion only consumes those.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, NamedTuple

import numpy as np

from .errors import BaseMismatch, BoundExceeded, NotInvertible
from .grp import trivial_group
from .gset import (GMap, GSet, coset_space, identity, product_gset, pullback, trivial_gset,
                   truncation_level, underlying_map)
from .linalg import CoeffRing, ModuleMap, block_diag
from .mackey import evaluate_span
from .span import Span, SpanClass, mark_matrix


@dataclass(frozen=True)
class ModuleFamily:
    base: GSet
    ring: CoeffRing
    labels: tuple  # labels[x] is a tuple of hashable labels, one per basis vector

    @property
    def fiber_rank(self) -> tuple:
        return tuple(len(l) for l in self.labels)

    @property
    def total_rank(self) -> int:
        return sum(self.fiber_rank)

    def __repr__(self):
        return f"ModuleFamily(base={self.base.size}, ranks={list(self.fiber_rank)}, {self.ring})"


def constant_family(base: GSet, rank: int, ring: CoeffRing) -> ModuleFamily:
    return ModuleFamily(base, ring, tuple(tuple((x, i) for i in range(rank))
                                          for x in range(base.size)))


def family_from_ranks(base: GSet, ranks, ring: CoeffRing) -> ModuleFamily:
    ranks = list(ranks)
    for orb in base.orbits:
        if len({ranks[x] for x in orb.points}) > 1:
            raise ValueError("fiber ranks must be constant on orbits")
    return ModuleFamily(base, ring, tuple(tuple((x, i) for i in range(r))
                                          for x, r in enumerate(ranks)))


@dataclass(frozen=True, eq=False)
class FamilyMap:
    src: ModuleFamily
    tgt: ModuleFamily
    blocks: tuple  # ModuleMap per base point

    def __post_init__(self):
        if self.src.base != self.tgt.base:
            raise BaseMismatch("family map between families over different bases")
        for x, b in enumerate(self.blocks):
            if b.matrix.shape != (len(self.tgt.labels[x]), len(self.src.labels[x])):
                raise ValueError(f"block {x} has shape {b.matrix.shape}")

    @property
    def ring(self):
        return self.src.ring

    def __matmul__(self, other: "FamilyMap") -> "FamilyMap":
        return FamilyMap(other.src, self.tgt,
                         tuple(a @ b for a, b in zip(self.blocks, other.blocks)))

    def __eq__(self, other):
        if not isinstance(other, FamilyMap):
            return NotImplemented
        return all(a == b for a, b in zip(self.blocks, other.blocks)) \
            and len(self.blocks) == len(other.blocks)

    __hash__ = None

    def inverse(self) -> "FamilyMap":
        return FamilyMap(self.tgt, self.src, tuple(b.inverse() for b in self.blocks))

    def is_invertible(self) -> bool:
        return all(b.is_invertible() for b in self.blocks)

    def is_identity(self) -> bool:
        return all(b.is_identity() for b in self.blocks)

    def total(self) -> ModuleMap:
        """The whole map as one block-diagonal matrix."""
        return ModuleMap(self.ring, block_diag(self.ring, [b.matrix for b in self.blocks]))

    def replace_block(self, x: int, block: ModuleMap) -> "FamilyMap":
        bl = list(self.blocks)
        bl[x] = block
        return FamilyMap(self.src, self.tgt, tuple(bl))


def identity_map(X: ModuleFamily) -> FamilyMap:
    return FamilyMap(X, X, tuple(ModuleMap.identity(X.ring, r) for r in X.fiber_rank))


def label_iso(src: ModuleFamily, tgt: ModuleFamily) -> FamilyMap:
    """The permutation isomorphism matching equal labels pointwise."""
    if src.base != tgt.base:
        raise BaseMismatch("label iso between different bases")
    blocks = []
    for x, (ls, lt) in enumerate(zip(src.labels, tgt.labels)):
        if sorted(ls, key=repr) != sorted(lt, key=repr) or len(set(ls)) != len(ls):
            raise ValueError(f"labels at point {x} do not match uniquely")
        m = src.ring.zeros(len(lt), len(ls))
        pos = {l: i for i, l in enumerate(lt)}
        for j, l in enumerate(ls):
            m[pos[l], j] = src.ring.coerce(1)
        blocks.append(ModuleMap(src.ring, m))
    return FamilyMap(src, tgt, tuple(blocks))


# --- the three functors ---------------------------------------------------

def _check_base(q: GMap, X: ModuleFamily, end="source"):
    want = q.source if end == "source" else q.target
    if X.base != want:
        raise BaseMismatch(f"family is not over the {end} of the map")


def restrict(f: GMap, X: ModuleFamily) -> ModuleFamily:
    """f^* X."""
    _check_base(f, X, "target")
    return ModuleFamily(f.source, X.ring, tuple(X.labels[f(a)] for a in range(f.source.size)))


def restrict_map(f: GMap, phi: FamilyMap) -> FamilyMap:
    return FamilyMap(restrict(f, phi.src), restrict(f, phi.tgt),
                     tuple(phi.blocks[f(a)] for a in range(f.source.size)))


def pushforward_sum(q: GMap, X: ModuleFamily) -> ModuleFamily:
    """q_! X: the fiber at b is the direct sum over q^-1(b), in increasing order."""
    _check_base(q, X)
    return ModuleFamily(q.target, X.ring, tuple(sum((X.labels[a] for a in q.fiber(b)), ())
                                                for b in range(q.target.size)))


def pushforward_prod(q: GMap, X: ModuleFamily) -> ModuleFamily:
    """q_* X; same carrier as q_! X."""
    return pushforward_sum(q, X)


def push_map(q: GMap, phi: FamilyMap) -> FamilyMap:
    """q_!(phi) = q_*(phi): block sum over each fiber."""
    ring = phi.ring
    blocks = tuple(ModuleMap(ring, block_diag(ring, [phi.blocks[a].matrix for a in q.fiber(b)]))
                   for b in range(q.target.size))
    return FamilyMap(pushforward_sum(q, phi.src), pushforward_sum(q, phi.tgt), blocks)


def _fiber_offsets(q: GMap, X: ModuleFamily, a: int):
    b = q(a)
    off = 0
    for a2 in q.fiber(b):
        if a2 == a:
            return off
        off += len(X.labels[a2])
    raise AssertionError


def unit_sum(q: GMap, X: ModuleFamily) -> FamilyMap:
    """X -> q^* q_! X, the inclusion of each summand."""
    ring = X.ring
    tgt = restrict(q, pushforward_sum(q, X))
    blocks = []
    for a in range(q.source.size):
        r = len(X.labels[a])
        m = ring.zeros(len(tgt.labels[a]), r)
        off = _fiber_offsets(q, X, a)
        for i in range(r):
            m[off + i, i] = ring.coerce(1)
        blocks.append(ModuleMap(ring, m))
    return FamilyMap(X, tgt, tuple(blocks))


def counit_sum(q: GMap, Y: ModuleFamily) -> FamilyMap:
    """q_! q^* Y -> Y, the fold [I ... I]."""
    ring = Y.ring
    src = pushforward_sum(q, restrict(q, Y))
    blocks = []
    for b in range(q.target.size):
        r = len(Y.labels[b])
        n = len(q.fiber(b))
        blocks.append(ModuleMap(ring, np.hstack([ring.eye(r)] * n) if n else ring.zeros(r, 0)))
    return FamilyMap(src, Y, tuple(blocks))


def unit_prod(q: GMap, Y: ModuleFamily) -> FamilyMap:
    """Y -> q_* q^* Y, the diagonal."""
    c = counit_sum(q, Y)
    blocks = tuple(ModuleMap(b.ring, b.matrix.T.copy()) for b in c.blocks)
    return FamilyMap(Y, c.src, blocks)


def counit_prod(q: GMap, X: ModuleFamily) -> FamilyMap:
    """q^* q_* X -> X, the projection onto each factor."""
    u = unit_sum(q, X)
    blocks = tuple(ModuleMap(b.ring, b.matrix.T.copy()) for b in u.blocks)
    return FamilyMap(u.tgt, X, blocks)


# --- Beck-Chevalley -------------------------------------------------------

class Square(NamedTuple):
    """A commutative square  P --gp--> A
                              |qp        |q
                              B' --g---> B
    """
    gp: GMap
    qp: GMap
    g: GMap
    q: GMap

    def check(self):
        if self.gp.then(self.q) != self.qp.then(self.g):
            raise ValueError("square does not commute")
        return self


def base_change_square(q: GMap, g: GMap) -> Square:
    """The pullback square of q along g, with the lexicographic model of B' x_B A."""
    pb = pullback(g, q)
    return Square(pb.pr2, pb.pr1, g, q)


BCHook = Callable[[str, FamilyMap], FamilyMap]


def bc_sum(sq: Square, X: ModuleFamily, hook: BCHook | None = None) -> FamilyMap:
    """BC_!: qp_! gp^* X -> g^* q_! X."""
    gp, qp, g, q = sq
    inner = restrict_map(gp, unit_sum(q, X))
    Y = restrict(g, pushforward_sum(q, X))
    pushed = push_map(qp, inner)
    out = counit_sum(qp, Y) @ FamilyMap(pushed.src, pushforward_sum(qp, restrict(qp, Y)),
                                        pushed.blocks)
    return hook("bc_sum", out) if hook else out


def bc_prod(sq: Square, X: ModuleFamily, hook: BCHook | None = None) -> FamilyMap:
    """BC_*: g^* q_* X -> qp_* gp^* X."""
    gp, qp, g, q = sq
    Y = restrict(g, pushforward_prod(q, X))
    first = unit_prod(qp, Y)
    second = push_map(qp, restrict_map(gp, counit_prod(q, X)))
    out = second @ FamilyMap(first.src, second.src, first.blocks)
    return hook("bc_prod", out) if hook else out


def _recast(phi: FamilyMap, src: ModuleFamily | None = None, tgt: ModuleFamily | None = None):
    """Same matrices, families swapped for ones with identical carriers."""
    return FamilyMap(src or phi.src, tgt or phi.tgt, phi.blocks)


# --- the inductive norm ---------------------------------------------------

@dataclass
class TraceNode:
    level: int
    source_size: int
    target_size: int
    pullback_size: int = 0
    bc_inverse: FamilyMap | None = None
    mu_insert: FamilyMap | None = None
    child: "TraceNode | None" = None

    def depth(self) -> int:
        return 0 if self.child is None else 1 + self.child.depth()

    def lines(self, indent=0):
        pad = "  " * indent
        out = [f"{pad}level {self.level}: {self.source_size} -> {self.target_size}"]
        if self.level == -2:
            out.append(f"{pad}  base case: inverse of the unit of q_! -| q^*")
        else:
            out.append(f"{pad}  pullback A x_B A: {self.pullback_size} points")
            out.append(f"{pad}  BC_! inverse: {_fmt(self.bc_inverse)}")
            out.append(f"{pad}  mu_diagonal: {_fmt(self.mu_insert)}")
        if self.child is not None:
            out.append(f"{pad}  diagonal:")
            out += self.child.lines(indent + 2)
        return out


def _fmt(phi):
    if phi is None:
        return "-"
    return phi.total().tolist()


@dataclass
class NormCertificate:
    q: GMap
    family: ModuleFamily
    adjoint: FamilyMap | None
    map: FamilyMap | None
    trace: TraceNode
    error: str | None = None

    @property
    def depth(self) -> int:
        return self.trace.depth()

    @property
    def invertible(self) -> bool:
        return self.map is not None and self.map.is_invertible()

    @property
    def is_identity(self) -> bool:
        return self.map is not None and self.map.is_identity()

    def matrix(self) -> ModuleMap:
        return self.map.total()

    def format(self) -> str:
        lines = ["norm certificate", f"recursion depth: {self.depth}"]
        lines += self.trace.lines(1)
        if self.map is None:
            lines.append(f"norm: not constructed ({self.error})")
        else:
            lines.append("norm matrix:")
            for row in self.matrix().tolist():
                lines.append("  " + " ".join(str(v) for v in row))
            lines.append("identity: " + ("yes" if self.is_identity else "no"))
        return "\n".join(lines)


def _adjoint(q: GMap, X: ModuleFamily, hook, level=None):
    """Nm^adj_q: q^* q_! X -> X together with its trace."""
    level = truncation_level(q) if level is None else level
    node = TraceNode(level, q.source.size, q.target.size)
    if level == -2:
        return unit_sum(q, X).inverse(), node
    pb = pullback(q, q)
    P, pr1, pr2 = pb
    node.pullback_size = P.size
    d = pb.lift(identity(q.source), identity(q.source))
    sq = Square(pr2, pr1, q, q)
    bc = bc_sum(sq, X, hook)
    bc_inv = bc.inverse()
    Y = restrict(pr2, X)
    mu, node.child = _mu(d, Y, hook, level - 1)
    node.bc_inverse, node.mu_insert = bc_inv, mu
    pushed_mu = push_map(pr1, mu)
    back = label_iso(pushed_mu.tgt, X)
    adj = back @ pushed_mu @ _recast(bc_inv, tgt=pushed_mu.src)
    return adj, node


def _norm_from_adjoint(q: GMap, X: ModuleFamily, adj: FamilyMap) -> FamilyMap:
    """Nm_q = q_*(Nm^adj) o unit_prod(q, q_! X)."""
    S = pushforward_sum(q, X)
    u = unit_prod(q, S)
    pushed = push_map(q, adj)
    return pushed @ _recast(u, tgt=pushed.src)


def _mu(q: GMap, Y: ModuleFamily, hook, level):
    """mu_q: Y -> q_! q^* Y."""
    if level == -2:
        return counit_sum(q, Y).inverse(), TraceNode(-2, q.source.size, q.target.size)
    Xr = restrict(q, Y)
    adj, node = _adjoint(q, Xr, hook, level)
    nm = _norm_from_adjoint(q, Xr, adj)
    u = unit_prod(q, Y)
    mu = nm.inverse() @ _recast(u, tgt=nm.tgt)
    return mu, node


def adjoint_norm(q: GMap, X: ModuleFamily, bc_hook: BCHook | None = None) -> NormCertificate:
    """Build Nm_q: q_! X -> q_* X through the diagonal recursion.

    Non-invertible intermediate maps (only possible with a bc_hook) leave
    the certificate without a map instead of raising.
    """
    _check_base(q, X)
    level = truncation_level(q)
    try:
        adj, trace = _adjoint(q, X, bc_hook, level)
    except NotInvertible as exc:
        return NormCertificate(q, X, None, None, TraceNode(level, q.source.size, q.target.size),
                               str(exc))
    return NormCertificate(q, X, adj, _norm_from_adjoint(q, X, adj), trace)


def identity_norm(q: GMap, X: ModuleFamily) -> FamilyMap:
    """The fiber-matching map q_! X -> q_* X (the oracle for adjoint_norm)."""
    S = pushforward_sum(q, X)
    return FamilyMap(S, pushforward_prod(q, X),
                     tuple(ModuleMap.identity(X.ring, r) for r in S.fiber_rank))


# --- double Beck-Chevalley ------------------------------------------------

def double_bc(q: GMap, Z: ModuleFamily, hook: BCHook | None = None) -> FamilyMap:
    """BC_{!,*}: q_! pr1_* Z -> q_* pr2_! Z for Z over A x_B A."""
    pb = pullback(q, q)
    P, pr1, pr2 = pb
    if Z.base != P:
        raise BaseMismatch("family must live over A x_B A")
    Y = pushforward_sum(q, pushforward_prod(pr1, Z))
    u = unit_prod(q, Y)
    sq = Square(pr1, pr2, q, q)
    bc_inv = bc_sum(sq, pushforward_prod(pr1, Z), hook).inverse()
    step2 = push_map(q, bc_inv)
    cp = counit_prod(pr1, Z)
    step3 = push_map(q, push_map(pr2, cp))
    return step3 @ _recast(step2, tgt=step3.src) @ _recast(u, tgt=step2.src)


@dataclass
class DoubleBCResult:
    invertible: bool
    factorization_ok: bool
    checked: int
    failures: list = field(default_factory=list)

    def __bool__(self):
        return self.invertible and self.factorization_ok


def double_bc_check(q: GMap, X: ModuleFamily, bound: int = 64,
                    bc_hook: BCHook | None = None) -> DoubleBCResult:
    """Invertibility of BC_{!,*} at Delta_! X, pr1^* X, pr2^* X, and the
    factorization Nm_q = BC_{!,*}(Delta_! X) o q_! pr1_*(Nm_Delta^-1)."""
    if max(q.source.size, q.target.size) > bound:
        raise BoundExceeded(f"carriers exceed bound {bound}")
    _check_base(q, X)
    pb = pullback(q, q)
    P, pr1, pr2 = pb
    if P.size > bound * bound:
        raise BoundExceeded("pullback too large")
    d = pb.lift(identity(q.source), identity(q.source))
    res = DoubleBCResult(True, True, 0)
    for name, Z in (("diagonal", pushforward_sum(d, X)), ("pr1", restrict(pr1, X)),
                    ("pr2", restrict(pr2, X))):
        res.checked += 1
        try:
            ok = double_bc(q, Z, bc_hook).is_invertible()
        except NotInvertible:
            ok = False
        if not ok:
            res.invertible = False
            res.failures.append(f"BC_!* not invertible at {name}")
    res.checked += 1
    try:
        cert = adjoint_norm(q, X, bc_hook)
        dcert = adjoint_norm(d, X, bc_hook)
        if cert.map is None or dcert.map is None:
            raise NotInvertible(cert.error or dcert.error)
        Z = pushforward_sum(d, X)
        dbc = double_bc(q, Z, bc_hook)
        inner = push_map(q, push_map(pr1, dcert.map.inverse()))
        start = label_iso(pushforward_sum(q, X), inner.src)
        end = label_iso(dbc.tgt, pushforward_prod(q, X))
        fact = end @ dbc @ _recast(inner, tgt=dbc.src) @ start
        if not fact == cert.map:
            res.factorization_ok = False
            res.failures.append("norm does not factor through BC_!*")
    except NotInvertible as exc:
        res.factorization_ok = False
        res.failures.append(f"factorization: {exc}")
    return res


def norm_naturality_check(q: GMap, g: GMap, X: ModuleFamily) -> bool:
    """BC_* o g^*(Nm_q) o BC_! = Nm_{q'} for the base change q' of q along g."""
    sq = base_change_square(q, g)
    nm = adjoint_norm(q, X).map
    nm2 = adjoint_norm(sq.qp, restrict(sq.gp, X)).map
    lhs = bc_prod(sq, X) @ _recast(restrict_map(g, nm), tgt=restrict(g, pushforward_prod(q, X))) \
        @ bc_sum(sq, X)
    return lhs == nm2


def zero_entry_hook(point: int = None, row: int = 0, col: int = 0, kind="bc_sum") -> BCHook:
    """A mutation hook that zeroes one entry of every BC matrix of the given kind.

    point=None picks the first point with a nonempty block.
    """
    def hook(name, phi):
        if name != kind:
            return phi
        x = point
        if x is None:
            x = next((i for i, b in enumerate(phi.blocks) if b.matrix.size), None)
            if x is None:
                return phi
        m = phi.blocks[x].matrix.copy()
        m[row, col] = phi.ring.coerce(0)
        return phi.replace_block(x, ModuleMap(phi.ring, m))
    return hook


# --- semiadditive functors on finite sets ---------------------------------

class SpanEvaluator:
    """A functor from spans of finite sets to free modules.

    Subclasses supply value(n) (rank on an n-element set) and evaluate(span).
    """

    ring: CoeffRing

    def value(self, n: int) -> int:
        raise NotImplementedError

    def evaluate(self, s: Span) -> ModuleMap:
        raise NotImplementedError

    def __call__(self, s) -> ModuleMap:
        if isinstance(s, SpanClass):
            s = s.realize()
        return self.evaluate(s)


class FreeFunctor(SpanEvaluator):
    """F(S) = X^{+|S|}, F(span) = incidence matrix of the apex tensored with id_X."""

    def __init__(self, rank: int, ring: CoeffRing):
        self.rank, self.ring = rank, ring

    def value(self, n):
        return n * self.rank

    def evaluate(self, s: Span) -> ModuleMap:
        if s.group.order != 1:
            raise ValueError("the free functor lives on spans of plain finite sets")
        inc = mark_matrix(s, s.group.whole()).entries
        return ModuleMap(self.ring, self.ring.reduce(np.kron(inc, self.ring.eye(self.rank))))


def free_semiadditive_functor(rank: int = 1, ring: CoeffRing | None = None) -> FreeFunctor:
    return FreeFunctor(rank, ring or CoeffRing("Z"))


class UnderlyingEvaluator(SpanEvaluator):
    """S |-> M(G x S) for a Mackey functor M, spans acted on by G x -."""

    def __init__(self, M):
        self.M, self.ring = M, M.ring
        self._free = coset_space(M.group, M.group.trivial_subgroup())

    def value(self, n):
        return n * self.M.ranks[0]

    def _lift_set(self, X: GSet) -> GSet:
        return product_gset(self._free, trivial_gset(self.M.group, X.size))

    def _lift_map(self, f: GMap, src: GSet, tgt: GSet) -> GMap:
        n, m = f.source.size, f.target.size
        vals = [(i // n) * m + f(i % n) for i in range(src.size)]
        return GMap(src, tgt, vals)

    def evaluate(self, s: Span) -> ModuleMap:
        A, B, C = (self._lift_set(X) for X in (s.src, s.tgt, s.apex))
        lifted = Span(A, B, C, self._lift_map(s.left, C, A), self._lift_map(s.right, C, B))
        return evaluate_span(self.M, lifted)


def burnside_evaluator(M) -> UnderlyingEvaluator:
    return UnderlyingEvaluator(M)


def _plain(n: int) -> GSet:
    return trivial_gset(trivial_group(), n)


def functor_family(F: SpanEvaluator, p: GMap) -> ModuleFamily:
    """F(p) over the target of p: the value of F on each fiber."""
    return ModuleFamily(p.target, F.ring,
                        tuple(tuple((b, i) for i in range(F.value(len(p.fiber(b)))))
                              for b in range(p.target.size)))


def _fiber_span(F: SpanEvaluator, p1: GMap, p2: GMap, u: GMap, backward: bool) -> FamilyMap:
    """F of the forward (or backward) span along u: P1 -> P2 over a common base."""
    blocks = []
    for b in range(p1.target.size):
        f1, f2 = p1.fiber(b), p2.fiber(b)
        pos = {y: j for j, y in enumerate(f2)}
        S1, S2 = _plain(len(f1)), _plain(len(f2))
        fm = GMap(S1, S2, [pos[u(x)] for x in f1])
        s = Span.of(fm, identity(S1)) if backward else Span.of(identity(S1), fm)
        blocks.append(F(s))
    src, tgt = functor_family(F, p1), functor_family(F, p2)
    if backward:
        src, tgt = tgt, src
    return FamilyMap(src, tgt, tuple(blocks))


@dataclass
class SegalResult:
    cosegal: FamilyMap
    segal: FamilyMap
    norm: FamilyMap
    composite_equals_norm: bool

    def __bool__(self):
        return self.composite_equals_norm


def cosegal_and_segal(F: SpanEvaluator, q: GMap) -> SegalResult:
    """coSegal q_! F(id) -> F(q), Segal F(q) -> q_* F(id) and their comparison with Nm_q.

    Both maps are built as adjuncts: coSegal from F(Delta_q) along the unit of
    q_! -| q^*, Segal from F of the backward span along Delta_q.
    """
    if q.group.order != 1:
        # F lives on plain finite sets; an equivariant q is read through its underlying map
        q = underlying_map(q)
    A = q.source
    pb = pullback(q, q)
    P, pr1, pr2 = pb
    d = pb.lift(identity(A), identity(A))
    Fid = functor_family(F, identity(A))
    Fq = functor_family(F, q)
    Fpr1 = functor_family(F, pr1)
    # F(pr1) = q^* F(q): the fibers of pr1 and of q correspond through pr2
    ri_blocks = []
    for a in range(A.size):
        f1, f2 = pr1.fiber(a), q.fiber(q(a))
        pos = {y: j for j, y in enumerate(f2)}
        S1, S2 = _plain(len(f1)), _plain(len(f2))
        ri_blocks.append(F(Span.of(identity(S1), GMap(S1, S2, [pos[pr2(x)] for x in f1]))))
    qFq = restrict(q, Fq)
    riso = FamilyMap(Fpr1, qFq, tuple(ri_blocks))
    fwd = _fiber_span(F, identity(A), pr1, d, backward=False)
    bwd = _fiber_span(F, identity(A), pr1, d, backward=True)
    adj1 = riso @ fwd
    pushed = push_map(q, adj1)
    cosegal = counit_sum(q, Fq) @ _recast(pushed, tgt=pushforward_sum(q, qFq))
    adj2 = bwd @ riso.inverse()
    pushed2 = push_map(q, adj2)
    segal = pushed2 @ _recast(unit_prod(q, Fq), tgt=pushed2.src)
    nm = adjoint_norm(q, Fid).map
    comp = segal @ _recast(cosegal, tgt=segal.src)
    return SegalResult(cosegal, segal, nm, comp == nm)
