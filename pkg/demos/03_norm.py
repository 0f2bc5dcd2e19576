"""
Norm maps through the diagonal
==============================

Build Nm_q for maps of finite sets by recursion on the diagonal, then break it.
"""

from spanlab import CoeffRing, GMap, adjoint_norm, constant_family, double_bc_check
from spanlab.ambidex import cosegal_and_segal, free_semiadditive_functor, zero_entry_hook
from spanlab.grp import trivial_group
from spanlab.gset import trivial_gset

T = trivial_group()


def fold(n):
    return GMap(trivial_gset(T, n), trivial_gset(T, 1), [0] * n)


q = fold(3)
X = constant_family(q.source, 1, CoeffRing("Z"))
cert = adjoint_norm(q, X)
print(cert.format())

# the same over Z/4 with rank 2 fibers
q = GMap(trivial_gset(T, 4), trivial_gset(T, 2), [0, 0, 1, 1])
X = constant_family(q.source, 2, CoeffRing.parse("Zmod:4"))
print("Z/4, rank 2, identity:", adjoint_norm(q, X).is_identity)

# semiadditivity test via the double Beck-Chevalley map
print("double BC:", bool(double_bc_check(q, X)))

# zero out one entry of every BC_! matrix: both checks notice
hook = zero_entry_hook()
print("mutated double BC:", bool(double_bc_check(fold(2), constant_family(fold(2).source, 1,
                                                                             CoeffRing("Z")),
                                                 bc_hook=hook)))
bad = adjoint_norm(fold(2), constant_family(fold(2).source, 1, CoeffRing("Z")), bc_hook=hook)
print("mutated norm identity:", bad.is_identity)

# Segal after coSegal recovers the norm
F = free_semiadditive_functor(1)
for n in range(1, 5):
    print(n, "->1 Segal o coSegal = Nm:", bool(cosegal_and_segal(F, fold(n))))
