"""Brute-force references that share no code with the library.

Groups are built from explicit permutations, subgroups and cosets are plain
frozensets, and everything is counted by enumeration.
"""

from itertools import combinations, permutations, product
from math import gcd


def perm_group(gens, n):
    """Closure of permutation tuples under composition (p*q)(i) = p[q[i]]."""
    e = tuple(range(n))
    elems = {e}
    frontier = [e]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = tuple(g[x[i]] for i in range(n))
                if y not in elems:
                    elems.add(y)
                    nxt.append(y)
        frontier = nxt
    return sorted(elems)


def mul(p, q):
    return tuple(p[q[i]] for i in range(len(p)))


def inv(p):
    out = [0] * len(p)
    for i, v in enumerate(p):
        out[v] = i
    return tuple(out)


def closure(elems, gens):
    n = len(elems[0])
    H = {tuple(range(n))}
    frontier = list(H)
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = mul(g, x)
                if y not in H:
                    H.add(y)
                    nxt.append(y)
        frontier = nxt
    return frozenset(H)


def all_subgroups(elems):
    """Every subgroup generated by at most two elements (enough for order <= 24)."""
    subs = set()
    for a in elems:
        for b in elems:
            subs.add(closure(elems, [a, b]))
    return subs


def subsets_subgroups(elems):
    """Every subset closed under multiplication (exhaustive, tiny groups only)."""
    out = []
    e = tuple(range(len(elems[0])))
    rest = [x for x in elems if x != e]
    for r in range(len(rest) + 1):
        for comb in combinations(rest, r):
            S = frozenset((e,) + comb)
            if all(mul(a, b) in S for a in S for b in S):
                out.append(S)
    return out


def conj_set(g, H):
    return frozenset(mul(mul(g, h), inv(g)) for h in H)


def conjugacy_classes(elems, subs):
    seen, classes = set(), []
    for H in sorted(subs, key=lambda S: (len(S), sorted(S))):
        if H in seen:
            continue
        cls = {conj_set(g, H) for g in elems}
        seen |= cls
        classes.append(cls)
    return classes


def left_cosets(elems, K):
    return {frozenset(mul(g, k) for k in K) for g in elems}


def marks(elems, K, H):
    """|(G/K)^H| by direct action on left cosets."""
    return sum(1 for C in left_cosets(elems, K)
               if all(frozenset(mul(h, c) for c in C) == C for h in H))


def normalizer_index(elems, K):
    N = [g for g in elems if conj_set(g, K) == K]
    return len(N) // len(K)


def double_coset_sizes(elems, K, H):
    seen, sizes = set(), []
    for g in elems:
        if g in seen:
            continue
        D = {mul(mul(k, g), h) for k in K for h in H}
        seen |= D
        sizes.append(len(D))
    return sorted(sizes)


def product_orbits(elems, K, H):
    """Orbits of G acting diagonally on G/K x G/H."""
    pts = {(A, B) for A in left_cosets(elems, K) for B in left_cosets(elems, H)}
    count = 0
    while pts:
        A, B = next(iter(pts))
        orb = {(frozenset(mul(g, a) for a in A), frozenset(mul(g, b) for b in B)) for g in elems}
        pts -= orb
        count += 1
    return count


def burnside_product_free_c2():
    """[C2/e] * [C2/e]: orbit sizes of C2 acting on C2 x C2."""
    pts = set(product(range(2), repeat=2))
    sizes = []
    while pts:
        x, y = min(pts)
        orb = {(x, y), ((x + 1) % 2, (y + 1) % 2)}
        pts -= orb
        sizes.append(len(orb))
    return sorted(sizes)


def zmod_pullback_orbits(a, b, c):
    """Orbit sizes of Z on {(x, y) in Z/a x Z/b : x = y mod c}."""
    pts = {(x, y) for x in range(a) for y in range(b) if (x - y) % c == 0}
    sizes = []
    while pts:
        x, y = min(pts)
        orb, p = set(), (x, y)
        while p not in orb:
            orb.add(p)
            p = ((p[0] + 1) % a, (p[1] + 1) % b)
        pts -= orb
        sizes.append(len(orb))
    return sorted(sizes)


def sigma_fixed(orbit_sizes, d):
    return sum(n for n in orbit_sizes if d % n == 0)


S3_GENS = [(1, 0, 2), (1, 2, 0)]
S4_GENS = [(1, 0, 2, 3), (1, 2, 3, 0)]


def cyclic_perm(n):
    return [tuple((i + 1) % n for i in range(n))]


def fixed_point_count(perm_elems):
    return {p: sum(1 for i, v in enumerate(p) if i == v) for p in perm_elems}


def lcm(a, b):
    return a * b // gcd(a, b)


def all_perms(n):
    return sorted(permutations(range(n)))
