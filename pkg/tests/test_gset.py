import itertools

import numpy as np
import pytest
from hypothesis import given, strategies as st

from spanlab import NotEquivariant, TargetMismatch
from spanlab.grp import Subgroup, cyclic_group, double_cosets, named_group, symmetric_group, trivial_group
from spanlab.gset import (GMap, GSet, coset_space, diagonal, disjoint_union, equivariant_maps,
                          find_iso, fixed_points, gsets_up_to, identity, maps_up_to_iso, point,
                          product_gset,
                          pullback, random_gset, random_map, relabel, terminal_map,
                          trivial_gset, truncation_level)

import oracles


def test_gset_rejects_non_action():
    G = cyclic_group(2)
    with pytest.raises(Exception):
        GSet(G, np.array([[0, 1], [0, 0]]))


def test_gmap_rejects_non_equivariant():
    G = cyclic_group(2)
    free = coset_space(G, G.trivial_subgroup())
    with pytest.raises(NotEquivariant):
        GMap(free, trivial_gset(G, 2), [0, 1])


def test_c2_pullback_of_free_orbits():
    G = cyclic_group(2)
    free = coset_space(G, G.trivial_subgroup())
    pb = pullback(terminal_map(free), terminal_map(free))
    sizes = sorted(len(o.points) for o in pb.apex.orbits)
    assert sizes == [2, 2] == oracles.burnside_product_free_c2()
    assert all(o.stabilizer.order == 1 for o in pb.apex.orbits)


def test_fixed_points_s3_mod_c2():
    G = symmetric_group(3)
    K = Subgroup(G, (0, 1))
    X = coset_space(G, K)
    assert len(fixed_points(X, K)) == 1
    assert len(fixed_points(X, G.trivial_subgroup())) == 3
    assert fixed_points(X, G.whole()) == []


def test_fixed_points_match_marks_oracle():
    elems = oracles.perm_group(oracles.S3_GENS, 3)
    G = symmetric_group(3)
    # same order of subgroups on both sides: compare the multiset of mark rows
    ours = sorted(tuple(sorted(len(fixed_points(coset_space(G, K), H))
                               for H in G.lattice.subgroups))
                  for K in G.lattice.subgroups)
    subs = oracles.subsets_subgroups(elems)
    ref = sorted(tuple(sorted(oracles.marks(elems, K, H) for H in subs)) for K in subs)
    assert ours == ref


def test_find_iso_examples():
    G = cyclic_group(2)
    free = coset_space(G, G.trivial_subgroup())
    pt = point(G)
    X = disjoint_union(free, pt)
    Y = disjoint_union(pt, free)
    phi = find_iso(X, Y)
    assert phi is not None and phi.is_iso()
    assert find_iso(free, trivial_gset(G, 2)) is None
    # constraints: isos over a common target must commute with the legs
    f = terminal_map(X)
    assert find_iso(X, Y, [(f, terminal_map(Y))]) is not None


def test_find_iso_under_relabel(rng):
    G = symmetric_group(3)
    for _ in range(20):
        X = random_gset(G, rng, 9, 1)
        Y = relabel(X, rng.permutation(X.size))
        phi = find_iso(X, Y)
        assert phi is not None and phi.is_iso()


@pytest.mark.parametrize("name", ["C2", "C3", "S3"])
def test_pullback_cardinality(name, rng):
    G = named_group(name)
    for _ in range(25):
        A, B, C = (random_gset(G, rng, 6, 1) for _ in range(3))
        f, g = random_map(A, C, rng), random_map(B, C, rng)
        if f is None or g is None:
            continue
        pb = pullback(f, g)
        assert pb.apex.size == sum(len(f.fiber(c)) * len(g.fiber(c)) for c in range(C.size))
        assert pb.pr1.then(f) == pb.pr2.then(g)


def test_pullback_lift():
    G = cyclic_group(2)
    free = coset_space(G, G.trivial_subgroup())
    f = terminal_map(free)
    pb = pullback(f, f)
    d = pb.lift(identity(free), identity(free))
    assert d.then(pb.pr1) == identity(free)
    with pytest.raises(TargetMismatch):
        pullback(f, identity(free))


def test_truncation_levels():
    G = trivial_group()
    assert truncation_level(identity(trivial_gset(G, 3))) == -2
    inc = GMap(trivial_gset(G, 1), trivial_gset(G, 2), [0])
    assert truncation_level(inc) == -1
    fold = GMap(trivial_gset(G, 2), trivial_gset(G, 1), [0, 0])
    assert truncation_level(fold) == 0
    C2 = cyclic_group(2)
    assert truncation_level(terminal_map(coset_space(C2, C2.trivial_subgroup()))) == 0


def test_truncation_recursion_small(rng):
    for name in ("C1", "C2", "C3"):
        G = named_group(name)
        for _ in range(20):
            A, B = random_gset(G, rng, 8, 1), random_gset(G, rng, 4, 1)
            f = random_map(A, B, rng)
            if f is None:
                continue
            lvl = truncation_level(f)
            assert lvl in (-2, -1, 0)
            if f.is_iso():
                assert lvl == -2
            else:
                assert lvl == truncation_level(diagonal(f)) + 1
            assert (lvl <= -1) == f.is_injective()


@pytest.mark.parametrize("name", ["C4", "S3", "D8"])
def test_product_orbits_match_double_cosets(name):
    G = named_group(name)
    for K in G.lattice.reps():
        for H in G.lattice.reps():
            P = product_gset(coset_space(G, K), coset_space(G, H))
            assert len(P.orbits) == len(double_cosets(G, K, H).reps)


def test_equivariant_maps_count_is_fixed_points():
    G = symmetric_group(3)
    K = Subgroup(G, (0, 1))
    X, Y = coset_space(G, G.trivial_subgroup()), coset_space(G, K)
    assert len(list(equivariant_maps(X, Y))) == 3
    assert len(list(equivariant_maps(Y, X))) == 0
    assert len(list(equivariant_maps(Y, Y))) == 1


def test_gsets_up_to_counts():
    # partitions of n into orbits of sizes 1 and 2 for C2
    C2 = cyclic_group(2)
    counts = {}
    for X in gsets_up_to(C2, 4):
        counts[X.size] = counts.get(X.size, 0) + 1
    assert counts == {0: 1, 1: 1, 2: 2, 3: 2, 4: 3}


@given(st.lists(st.integers(0, 2), min_size=0, max_size=6))
def test_trivial_group_pullback_sizes(vals):
    G = trivial_group()
    f = GMap(trivial_gset(G, len(vals)), trivial_gset(G, 3), vals)
    pb = pullback(f, f)
    assert pb.apex.size == sum(vals.count(c) ** 2 for c in range(3))


def _arrow_classes_brute(G, bound):
    """Iso classes of maps between representative G-sets, by explicit search."""
    objs = gsets_up_to(G, bound)
    reps = []
    for A in objs:
        for B in objs:
            autos = [b for b in equivariant_maps(B, B) if b.is_iso()]
            found = []
            for q in equivariant_maps(A, B):
                if not any(find_iso(A, A, [(q.then(b), r)]) is not None
                           for r in found for b in autos):
                    found.append(q)
            reps += found
    return reps


@pytest.mark.parametrize("name,bound", [("C1", 4), ("C2", 4), ("C3", 4), ("S3", 3)])
def test_maps_up_to_iso_matches_brute_force(name, bound):
    G = named_group(name)
    ours = maps_up_to_iso(G, bound)
    brute = _arrow_classes_brute(G, bound)
    assert len(ours) == len(brute)
    # every brute-force class is hit by exactly one of ours
    for q in brute:
        hits = 0
        for r in ours:
            if r.source.size != q.source.size or r.target.size != q.target.size:
                continue
            beta = find_iso(q.target, r.target)
            if beta is None:
                continue
            autos = [b for b in equivariant_maps(r.target, r.target) if b.is_iso()]
            if any(find_iso(q.source, r.source, [(q.then(beta).then(b), r)]) is not None
                   for b in autos):
                hits += 1
        assert hits == 1, q
