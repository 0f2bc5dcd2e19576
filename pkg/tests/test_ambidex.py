import itertools

import pytest

from spanlab import BaseMismatch, BoundExceeded
from spanlab.ambidex import (FamilyMap, adjoint_norm, base_change_square, bc_prod, bc_sum,
                             burnside_evaluator, constant_family, cosegal_and_segal,
                             counit_prod, counit_sum, double_bc_check, family_from_ranks,
                             free_semiadditive_functor, identity_map, identity_norm, label_iso,
                             norm_naturality_check, push_map, pushforward_prod, pushforward_sum,
                             restrict, restrict_map, unit_prod, unit_sum, zero_entry_hook)
from spanlab.grp import cyclic_group, trivial_group
from spanlab.gset import GMap, coset_space, terminal_map, trivial_gset
from spanlab.linalg import CoeffRing
from spanlab.mackey import burnside_mackey

Z = CoeffRing("Z")
RINGS = [CoeffRing("Z"), CoeffRing("Q"), CoeffRing("Zmod", 4)]


def plain_map(vals, n):
    G = trivial_group()
    return GMap(trivial_gset(G, len(vals)), trivial_gset(G, n), list(vals))


def all_maps(max_size):
    for na, nb in itertools.product(range(max_size + 1), repeat=2):
        for vals in itertools.product(range(nb), repeat=na):
            yield plain_map(vals, nb)


def test_fold_norm_is_identity_with_depth_two():
    q = plain_map([0, 0], 1)
    cert = adjoint_norm(q, constant_family(q.source, 1, Z))
    assert cert.is_identity and cert.invertible
    assert cert.matrix().tolist() == [[1, 0], [0, 1]]
    assert cert.depth == 2
    text = cert.format()
    assert "level 0" in text and "level -2" in text


def test_inclusion_norm_depth_one():
    q = plain_map([1], 2)
    cert = adjoint_norm(q, constant_family(q.source, 2, Z))
    assert cert.depth == 1 and cert.is_identity


def test_iso_norm_depth_zero():
    q = plain_map([1, 0], 2)
    cert = adjoint_norm(q, constant_family(q.source, 1, Z))
    assert cert.depth == 0 and cert.is_identity


@pytest.mark.parametrize("ring", RINGS, ids=str)
def test_norm_matches_oracle_all_small_maps(ring):
    for q in all_maps(3):
        X = constant_family(q.source, 2, ring)
        assert adjoint_norm(q, X).map == identity_norm(q, X)


def test_norm_with_varying_ranks():
    q = plain_map([0, 0, 1], 2)
    X = family_from_ranks(q.source, [1, 2, 0], Z)
    assert adjoint_norm(q, X).map == identity_norm(q, X)


def test_triangle_identities():
    for q in all_maps(3):
        X = constant_family(q.source, 1, Z)
        Y = constant_family(q.target, 2, Z)
        # counit_! q_! o q_!(unit_!) = id and the * analogue
        lhs = counit_sum(q, pushforward_sum(q, X)) @ FamilyMap(
            pushforward_sum(q, X), pushforward_sum(q, restrict(q, pushforward_sum(q, X))),
            push_map(q, unit_sum(q, X)).blocks)
        assert lhs.is_identity()
        rhs = push_map(q, counit_prod(q, X))
        rhs = FamilyMap(pushforward_prod(q, restrict(q, pushforward_prod(q, X))),
                        pushforward_prod(q, X), rhs.blocks)
        assert (rhs @ unit_prod(q, pushforward_prod(q, X))).is_identity()
        # q^* counit o unit q^* = id
        r = restrict_map(q, counit_sum(q, Y))
        u = unit_sum(q, restrict(q, Y))
        assert (FamilyMap(u.tgt, r.tgt, r.blocks) @ u).is_identity()


def test_bc_maps_invertible_on_pullback_squares():
    for q in all_maps(3):
        for g in all_maps(3):
            if g.target != q.target:
                continue
            sq = base_change_square(q, g).check()
            X = constant_family(q.source, 1, Z)
            assert bc_sum(sq, X).is_invertible()
            assert bc_prod(sq, X).is_invertible()
            assert norm_naturality_check(q, g, X)


def test_double_bc_holds_on_small_maps():
    for q in all_maps(3):
        res = double_bc_check(q, constant_family(q.source, 1, Z))
        assert res and res.checked == 4


def test_zero_entry_mutation_detected():
    q = plain_map([0, 0], 1)
    X = constant_family(q.source, 1, Z)
    hook = zero_entry_hook()
    res = double_bc_check(q, X, bc_hook=hook)
    assert not res
    cert = adjoint_norm(q, X, bc_hook=hook)
    assert not cert.is_identity


def test_double_bc_bound():
    q = plain_map([0, 0, 0], 1)
    with pytest.raises(BoundExceeded):
        double_bc_check(q, constant_family(q.source, 1, Z), bound=2)


def test_family_base_mismatch():
    q = plain_map([0, 0], 1)
    with pytest.raises(BaseMismatch):
        adjoint_norm(q, constant_family(q.target, 1, Z))


def test_label_iso_is_permutation():
    G = trivial_group()
    X = constant_family(trivial_gset(G, 2), 2, Z)
    assert label_iso(X, X).is_identity()
    assert identity_map(X) == label_iso(X, X)


@pytest.mark.parametrize("n", [0, 1, 2, 3, 4])
def test_segal_free_functor(n):
    F = free_semiadditive_functor(2)
    res = cosegal_and_segal(F, plain_map([0] * n, 1))
    assert res and res.cosegal.is_invertible() and res.segal.is_invertible()


def test_segal_burnside_c2():
    F = burnside_evaluator(burnside_mackey(cyclic_group(2)))
    # C2 x S is free, one copy of M(C2/e) per point
    assert [F.value(n) for n in range(4)] == [0, 1, 2, 3]
    for vals, nb in [([0, 0], 1), ([0, 1, 1], 2), ([0, 0, 0], 1)]:
        assert cosegal_and_segal(F, plain_map(vals, nb))


def test_segal_reads_equivariant_map_through_underlying_set():
    G = cyclic_group(2)
    q = terminal_map(coset_space(G, G.trivial_subgroup()))
    F = burnside_evaluator(burnside_mackey(G))
    res = cosegal_and_segal(F, q)
    assert res and res.norm.total().tolist() == [[1, 0], [0, 1]]
