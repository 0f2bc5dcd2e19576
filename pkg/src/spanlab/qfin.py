"""Quasi-finite Z-sets and very additive Mackey profunctors on them.

Orbits of Z with cofinite stabilizer are the Z/n. Every equivariant map
Z/e -> Z/a (a | e) is the reduction followed by a rotation, so a transitive
span Z/a <- Z/e -> Z/b is the triple (e, s, t) of apex size and leg shifts.
Rotating the apex changes (s, t) simultaneously, so the isomorphism class of
a piece only remembers (t - s) mod gcd(a, b).
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from math import gcd

from .errors import NotDivisible, ParseError, UnsupportedLevel, VeryAdditivityViolation
from .linalg import CoeffRing, ModuleMap


def lcm(a: int, b: int) -> int:
    return a * b // gcd(a, b)


def divisors(n: int) -> list:
    return [d for d in range(1, n + 1) if n % d == 0]


@dataclass(frozen=True)
class QFinZSet:
    """Finitely many orbits: m_n copies of Z/n."""

    multiplicities: tuple  # sorted ((n, m_n), ...) with m_n > 0

    def __post_init__(self):
        for n, m in self.multiplicities:
            if n < 1 or m < 0:
                raise ValueError(f"bad orbit data {n}:{m}")

    @classmethod
    def of(cls, mult) -> "QFinZSet":
        mult = dict(mult)
        return cls(tuple(sorted((int(n), int(m)) for n, m in mult.items() if m)))

    @classmethod
    def orbit(cls, n: int) -> "QFinZSet":
        return cls.of({n: 1})

    @classmethod
    def parse(cls, text: str) -> "QFinZSet":
        """Literal syntax ``{1:2, 3:1}``, optionally prefixed by ``qfin``."""
        body = text.strip()
        if body.startswith("qfin"):
            body = body[4:].strip()
        if not (body.startswith("{") and body.endswith("}")):
            raise ParseError("expected {n:m, ...}", 1, 1)
        mult = {}
        inner = body[1:-1].strip()
        if inner:
            for part in inner.split(","):
                mt = re.fullmatch(r"\s*(\d+)\s*:\s*(\d+)\s*", part)
                if not mt:
                    raise ParseError(f"bad entry {part.strip()!r}", 1, text.find(part) + 1)
                n, m = int(mt.group(1)), int(mt.group(2))
                if n < 1:
                    raise ParseError("orbit sizes start at 1", 1, text.find(part) + 1)
                mult[n] = mult.get(n, 0) + m
        return cls.of(mult)

    def __str__(self):
        return "{" + ", ".join(f"{n}:{m}" for n, m in self.multiplicities) + "}"

    def as_dict(self) -> dict:
        return dict(self.multiplicities)

    @property
    def orbits(self) -> list:
        """Orbit sizes with repetition, in increasing order."""
        return [n for n, m in self.multiplicities for _ in range(m)]

    @property
    def support(self) -> list:
        return [n for n, _ in self.multiplicities]

    def __add__(self, other: "QFinZSet") -> "QFinZSet":
        d = self.as_dict()
        for n, m in other.multiplicities:
            d[n] = d.get(n, 0) + m
        return QFinZSet.of(d)

    def size(self) -> int:
        return sum(n * m for n, m in self.multiplicities)


def qfin_fixed_points(S: QFinZSet, d: int) -> int:
    """Points fixed by dZ: the orbits Z/n with n | d contribute n each."""
    if d < 1:
        raise ValueError("d must be positive")
    return sum(n * m for n, m in S.multiplicities if d % n == 0)


def _pullback_shifts(e1: int, t1: int, e2: int, s2: int, b: int) -> list:
    """Orbits of {(x, y) in Z/e1 x Z/e2 : x + t1 = y + s2 mod b}.

    Returns the offsets delta with base point (0, delta); each orbit is a
    copy of Z/lcm(e1, e2) via n |-> (n, n + delta).
    """
    g = gcd(e1, e2)
    d0 = (t1 - s2) % b
    return [d0 + k * b for k in range(g // b)]


def qfin_pullback(a: int, b: int, c: int) -> QFinZSet:
    """Z/a x_{Z/c} Z/b along the reductions: gcd(a, b)/c copies of Z/lcm(a, b)."""
    if a % c or b % c:
        raise NotDivisible(f"{c} must divide both {a} and {b}")
    return QFinZSet.of({lcm(a, b): len(_pullback_shifts(a, 0, b, 0, c))})


@dataclass(frozen=True, order=True)
class Piece:
    """Z/a <- Z/e -> Z/b, x |-> x + s mod a and x |-> x + t mod b.

    i and j index orbits of the source and target sets.
    """

    i: int
    j: int
    e: int
    s: int
    t: int


class QSpan:
    def __init__(self, src: QFinZSet, tgt: QFinZSet, pieces):
        self.src, self.tgt = src, tgt
        so, to = src.orbits, tgt.orbits
        norm = []
        for p in pieces:
            a, b = so[p.i], to[p.j]
            if p.e % a or p.e % b:
                raise NotDivisible(f"apex Z/{p.e} does not map onto Z/{a} and Z/{b}")
            norm.append(Piece(p.i, p.j, p.e, 0, (p.t - p.s) % gcd(a, b)))
        self.pieces = tuple(sorted(norm))

    def __eq__(self, other):
        return isinstance(other, QSpan) and (self.src, self.tgt, self.pieces) == \
            (other.src, other.tgt, other.pieces)

    def __hash__(self):
        return hash((self.src, self.tgt, self.pieces))

    def __repr__(self):
        ps = ", ".join(f"{p.i}->{p.j}:Z/{p.e}[{p.t}]" for p in self.pieces)
        return f"QSpan({self.src} -> {self.tgt}: {ps})"

    def __matmul__(self, other: "QSpan") -> "QSpan":
        """self @ other = self o other (other first)."""
        return compose_qspans(other, self)

    @property
    def levels(self) -> set:
        return set(self.src.support) | set(self.tgt.support) | {p.e for p in self.pieces}


def identity_qspan(S: QFinZSet) -> QSpan:
    return QSpan(S, S, [Piece(i, i, n, 0, 0) for i, n in enumerate(S.orbits)])


def compose_qspans(s1: QSpan, s2: QSpan) -> QSpan:
    """s2 o s1 by pullback of apexes."""
    if s1.tgt != s2.src:
        raise ValueError("spans are not composable")
    mid = s1.tgt.orbits
    out = []
    for p in s1.pieces:
        for r in s2.pieces:
            if p.j != r.i:
                continue
            L = lcm(p.e, r.e)
            for delta in _pullback_shifts(p.e, p.t, r.e, r.s, mid[p.j]):
                out.append(Piece(p.i, r.j, L, p.s, delta + r.t))
    return QSpan(s1.src, s2.tgt, out)


def random_qspan(src: QFinZSet, tgt: QFinZSet, rng, bound: int = 12, max_pieces: int = 3) -> QSpan:
    """A random span whose apex orbits all divide ``bound``."""
    so, to = src.orbits, tgt.orbits
    pieces = []
    if not so or not to:
        return QSpan(src, tgt, [])
    for _ in range(int(rng.integers(0, max_pieces + 1))):
        i, j = int(rng.integers(len(so))), int(rng.integers(len(to)))
        base = lcm(so[i], to[j])
        choices = [e for e in divisors(bound) if e % base == 0]
        if not choices:
            continue
        e = choices[int(rng.integers(len(choices)))]
        pieces.append(Piece(i, j, e, int(rng.integers(e)), int(rng.integers(e))))
    return QSpan(src, tgt, pieces)


def random_qfin(rng, bound: int = 12, max_orbits: int = 3) -> QFinZSet:
    ds = divisors(bound)
    mult = {}
    for _ in range(int(rng.integers(1, max_orbits + 1))):
        n = ds[int(rng.integers(len(ds)))]
        mult[n] = mult.get(n, 0) + 1
    return QFinZSet.of(mult)


# --- profunctors ----------------------------------------------------------

@dataclass
class MackeyProfunctorData:
    """Orbit data of a very additive Mackey profunctor for Z.

    res[(a, e)]: M(Z/a) -> M(Z/e) and tr[(e, a)]: M(Z/e) -> M(Z/a) for a | e;
    rot[n] is the action of 1 on M(Z/n) (identity when absent).
    """

    ring: CoeffRing
    support: tuple
    ranks: dict
    res: dict
    tr: dict
    rot: dict = field(default_factory=dict)
    name: str = "M"

    def __post_init__(self):
        self.support = tuple(sorted(self.support))
        for n in self.support:
            for d in divisors(n):
                if d not in self.support:
                    raise ValueError(f"support is not divisor-closed: {d} | {n}")

    def rank(self, n: int) -> int:
        if n not in self.ranks:
            raise UnsupportedLevel(f"Z/{n} is outside the support {list(self.support)}")
        return self.ranks[n]

    def value_rank(self, S: QFinZSet) -> int:
        return sum(self.rank(n) for n in S.orbits)

    def rotation(self, n: int, k: int) -> ModuleMap:
        r = self.rot.get(n)
        out = ModuleMap.identity(self.ring, self.rank(n))
        if r is None:
            return out
        k %= n
        for _ in range(k):
            out = r @ out
        return out

    def res_map(self, a: int, e: int) -> ModuleMap:
        if a == e:
            return ModuleMap.identity(self.ring, self.rank(a))
        self.rank(e)
        return self.res[(a, e)]

    def tr_map(self, e: int, b: int) -> ModuleMap:
        if e == b:
            return ModuleMap.identity(self.ring, self.rank(b))
        self.rank(e)
        return self.tr[(e, b)]


def profunctor_eval(M: MackeyProfunctorData, s: QSpan) -> ModuleMap:
    """M(s): M(src) -> M(tgt), block (j, i) summing rot^-t tr res rot^s per piece."""
    so, to = s.src.orbits, s.tgt.orbits
    for n in s.levels:
        M.rank(n)
    ra, rb = [M.rank(n) for n in so], [M.rank(n) for n in to]
    offa = [sum(ra[:k]) for k in range(len(ra))]
    offb = [sum(rb[:k]) for k in range(len(rb))]
    out = M.ring.zeros(sum(rb), sum(ra))
    for p in s.pieces:
        a, b = so[p.i], to[p.j]
        m = (M.rotation(b, -p.t) @ M.tr_map(p.e, b) @ M.res_map(a, p.e)
             @ M.rotation(a, p.s))
        rs = slice(offb[p.j], offb[p.j] + rb[p.j])
        cs = slice(offa[p.i], offa[p.i] + ra[p.i])
        out[rs, cs] = M.ring.reduce(out[rs, cs] + m.matrix)
    return ModuleMap(M.ring, out)


def _point_basis(n: int, bound: int) -> list:
    """Transitive Z-sets over Z/n inside the support: Z/k with n | k | bound."""
    return [k for k in divisors(bound) if k % n == 0]


def _postcompose(s: QSpan, bound: int, ring: CoeffRing) -> ModuleMap:
    """Burnside value of a span between single orbits, by composing with the
    basis spans Z/1 <- Z/k -> Z/a and reading off the result."""
    (a,), (b,) = s.src.orbits, s.tgt.orbits
    pt = QFinZSet.orbit(1)
    src_basis, tgt_basis = _point_basis(a, bound), _point_basis(b, bound)
    index = {k: r for r, k in enumerate(tgt_basis)}
    out = ring.zeros(len(tgt_basis), len(src_basis))
    for col, k in enumerate(src_basis):
        comp = compose_qspans(QSpan(pt, s.src, [Piece(0, 0, k, 0, 0)]), s)
        for p in comp.pieces:
            if p.e not in index:
                raise UnsupportedLevel(f"Z/{p.e} leaves the support")
            out[index[p.e], col] += 1
    return ModuleMap(ring, ring.reduce(out))


def burnside_profunctor(bound: int, ring: CoeffRing | None = None) -> MackeyProfunctorData:
    """The Burnside profunctor truncated to levels dividing ``bound``."""
    ring = ring or CoeffRing("Z")
    sup = divisors(bound)
    ranks = {n: len(_point_basis(n, bound)) for n in sup}
    res, tr = {}, {}
    for a in sup:
        for e in sup:
            if e % a or e == a:
                continue
            A, E = QFinZSet.orbit(a), QFinZSet.orbit(e)
            res[(a, e)] = _postcompose(QSpan(A, E, [Piece(0, 0, e, 0, 0)]), bound, ring)
            tr[(e, a)] = _postcompose(QSpan(E, A, [Piece(0, 0, e, 0, 0)]), bound, ring)
    return MackeyProfunctorData(ring, tuple(sup), ranks, res, tr, {}, f"A_Z<={bound}")


def fixed_point_profunctor(bound: int, ring: CoeffRing | None = None) -> MackeyProfunctorData:
    """Rank one everywhere, res the identity and tr multiplication by the index."""
    ring = ring or CoeffRing("Z")
    sup = divisors(bound)
    one = ModuleMap.identity(ring, 1)
    res = {(a, e): one for a in sup for e in sup if e % a == 0 and e != a}
    tr = {(e, a): one.scale(e // a) for (a, e) in res}
    return MackeyProfunctorData(ring, tuple(sup), {n: 1 for n in sup}, res, tr, {},
                                f"FP_Z<={bound}")


def profunctor_normalize(raw: dict) -> MackeyProfunctorData:
    """Build orbit-only data from raw values, checking very additivity.

    ``raw`` has keys ring, values ({QFinZSet: rank}), res, tr and optionally
    rot. Values on single orbits become the ranks; every other value must be
    the sum of the ranks of its orbits or VeryAdditivityViolation is raised.
    """
    ring = raw.get("ring") or CoeffRing("Z")
    values = raw["values"]
    ranks = {}
    for S, r in values.items():
        S = S if isinstance(S, QFinZSet) else QFinZSet.parse(S)
        if len(S.orbits) == 1:
            ranks[S.orbits[0]] = r
    for S, r in sorted(values.items(), key=lambda kv: str(kv[0])):
        S = S if isinstance(S, QFinZSet) else QFinZSet.parse(S)
        if len(S.orbits) == 1:
            continue
        missing = [n for n in S.orbits if n not in ranks]
        if missing:
            raise UnsupportedLevel(f"no orbit value for Z/{missing[0]}")
        expect = sum(ranks[n] for n in S.orbits)
        if r != expect:
            raise VeryAdditivityViolation(
                f"M({S}) has rank {r} but its orbits give {expect}", S)
    return MackeyProfunctorData(ring, tuple(sorted(ranks)), ranks, dict(raw.get("res", {})),
                                dict(raw.get("tr", {})), dict(raw.get("rot", {})),
                                raw.get("name", "M"))


@dataclass
class ProfunctorReport:
    failures: list = field(default_factory=list)
    checked: int = 0

    @property
    def ok(self):
        return not self.failures

    def __bool__(self):
        return self.ok


def validate_profunctor(M: MackeyProfunctorData) -> ProfunctorReport:
    """Rotation order, equivariance, transitivity and the double coset law."""
    rep = ProfunctorReport()
    sup = M.support

    def check(name, where, lhs, rhs):
        rep.checked += 1
        if lhs != rhs:
            rep.failures.append((name, where, lhs.tolist(), rhs.tolist()))

    for n in sup:
        check("rotation order", (n,), M.rotation(n, n - 1) @ M.rotation(n, 1),
              ModuleMap.identity(M.ring, M.rank(n)))
    for a in sup:
        for e in sup:
            if e % a:
                continue
            check("res equivariance", (a, e), M.res_map(a, e) @ M.rotation(a, 1),
                  M.rotation(e, 1) @ M.res_map(a, e))
            check("tr equivariance", (e, a), M.tr_map(e, a) @ M.rotation(e, 1),
                  M.rotation(a, 1) @ M.tr_map(e, a))
            for f in sup:
                if f % e:
                    continue
                check("res transitivity", (a, e, f), M.res_map(e, f) @ M.res_map(a, e),
                      M.res_map(a, f))
                check("tr transitivity", (f, e, a), M.tr_map(e, a) @ M.tr_map(f, e),
                      M.tr_map(f, a))
    # res from Z/c to Z/b after tr from Z/a to Z/c
    for c in sup:
        for a in sup:
            for b in sup:
                if a % c or b % c or lcm(a, b) not in M.ranks:
                    continue
                lhs = M.res_map(c, b) @ M.tr_map(a, c)
                rhs = ModuleMap.zero(M.ring, M.rank(b), M.rank(a))
                L = lcm(a, b)
                for delta in _pullback_shifts(a, 0, b, 0, c):
                    rhs = rhs + (M.rotation(b, -delta) @ M.tr_map(L, b) @ M.res_map(a, L))
                check("double coset", (a, c, b), lhs, rhs)
    return rep


def permutation_profunctor(bound: int, ring: CoeffRing | None = None) -> MackeyProfunctorData:
    """Functions on points: M(Z/n) = R^n, res by pullback, tr by summing fibers.

    The generator acts by a cyclic shift, so this exercises the rotations.
    """
    ring = ring or CoeffRing("Z")
    sup = divisors(bound)
    res, tr, rot = {}, {}, {}
    for a in sup:
        rot[a] = ModuleMap.from_rows(ring, [[int((x + 1) % a == y) for y in range(a)]
                                            for x in range(a)])
        for e in sup:
            if e % a or e == a:
                continue
            m = ModuleMap.from_rows(ring, [[int(x % a == y) for y in range(a)] for x in range(e)])
            res[(a, e)] = m
            tr[(e, a)] = ModuleMap(ring, m.matrix.T.copy())
    return MackeyProfunctorData(ring, tuple(sup), {n: n for n in sup}, res, tr, rot,
                                f"Perm_Z<={bound}")
