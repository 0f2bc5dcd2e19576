"""Small seeded property sweeps, one per module, for ``spanlab selftest``."""

from __future__ import annotations

import itertools
from math import gcd

import numpy as np

from .ambidex import (adjoint_norm, constant_family, cosegal_and_segal, double_bc_check,
                      free_semiadditive_functor, identity_norm)
from .grp import named_group, trivial_group
from .gset import GMap, pullback, random_gset, random_map, trivial_gset
from .linalg import CoeffRing
from .mackey import burnside_mackey, evaluate_span, fixed_point_mackey, validate_mackey
from .qfin import (QFinZSet, burnside_profunctor, compose_qspans, divisors, profunctor_eval,
                   qfin_pullback, random_qfin, random_qspan)
from .span import compose, normal_form, random_span


def _grp(rng):
    counts = {}
    for name in ("C1", "C2", "C4", "S3", "V4", "D8"):
        lat = named_group(name).lattice
        counts[name] = (len(lat.subgroups), len(lat.classes))
    want = {"C1": (1, 1), "C2": (2, 2), "C4": (3, 3), "S3": (6, 4), "V4": (5, 5), "D8": (10, 8)}
    return counts == want, "subgroup and class counts"


def _gset(rng):
    G = named_group("S3")
    n = 0
    for _ in range(30):
        A, B, C = (random_gset(G, rng, 6, 1) for _ in range(3))
        f, g = random_map(A, C, rng), random_map(B, C, rng)
        if f is None or g is None:
            continue
        pb = pullback(f, g)
        want = sum(len(f.fiber(c)) * len(g.fiber(c)) for c in range(C.size))
        if pb.apex.size != want:
            return False, "pullback cardinality"
        n += 1
    return True, f"{n} pullbacks"


def _span(rng):
    n = 0
    for name in ("C2", "S3"):
        G = named_group(name)
        for _ in range(15):
            X = [random_gset(G, rng, 4, 1) for _ in range(4)]
            s, t, u = (random_span(X[i], X[i + 1], rng, 4) for i in range(3))
            if normal_form(compose(compose(s, t), u)) != normal_form(compose(s, compose(t, u))):
                return False, f"associativity over {name}"
            n += 1
    return True, f"{n} triples"


def _mackey(rng):
    for name in ("C2", "C3", "S3"):
        G = named_group(name)
        for M in (burnside_mackey(G), fixed_point_mackey(G)):
            if not validate_mackey(M).ok:
                return False, f"{M.name} invalid"
    G = named_group("C2")
    M = burnside_mackey(G)
    for _ in range(20):
        X = [random_gset(G, rng, 4, 1) for _ in range(3)]
        s, t = random_span(X[0], X[1], rng, 4), random_span(X[1], X[2], rng, 4)
        if evaluate_span(M, compose(s, t)) != evaluate_span(M, t) @ evaluate_span(M, s):
            return False, "evaluate_span not functorial"
    return True, "Burnside and fixed-point functors"


def _ambidex(rng):
    G = trivial_group()
    n = 0
    for na, nb in itertools.product(range(4), repeat=2):
        A, B = trivial_gset(G, na), trivial_gset(G, nb)
        for vals in itertools.product(range(nb), repeat=na):
            q = GMap(A, B, list(vals))
            X = constant_family(A, 1, CoeffRing("Z"))
            if adjoint_norm(q, X).map != identity_norm(q, X) or not double_bc_check(q, X):
                return False, f"norm at {vals}"
            n += 1
    F = free_semiadditive_functor(1)
    for k in range(1, 5):
        q = GMap(trivial_gset(G, k), trivial_gset(G, 1), [0] * k)
        if not cosegal_and_segal(F, q):
            return False, f"Segal/coSegal at fold {k}"
    return True, f"{n} maps"


def _qfin(rng):
    for a, b in itertools.product(range(1, 9), repeat=2):
        for c in divisors(gcd(a, b)):
            count = sum(1 for x in range(a) for y in range(b) if (x - y) % c == 0)
            S = qfin_pullback(a, b, c)
            if S.size() != count:
                return False, f"pullback size at {a},{b},{c}"
    M = burnside_profunctor(12)
    for _ in range(20):
        A, B, C = (random_qfin(rng, 12) for _ in range(3))
        s, t = random_qspan(A, B, rng, 12), random_qspan(B, C, rng, 12)
        if profunctor_eval(M, compose_qspans(s, t)) != profunctor_eval(M, t) @ profunctor_eval(M, s):
            return False, "profunctor composition"
    return True, "pullbacks and composition"


CHECKS = [("grp", _grp), ("gset", _gset), ("span", _span), ("mackey", _mackey),
          ("ambidex", _ambidex), ("qfin", _qfin)]


def run(seed: int = 0) -> list:
    out = []
    for name, fn in CHECKS:
        rng = np.random.default_rng(seed)
        try:
            ok, detail = fn(rng)
        except Exception as exc:  # a crash is a failed check, reported like one
            ok, detail = False, f"{type(exc).__name__}: {exc}"
        out.append((name, ok, detail))
    return out
