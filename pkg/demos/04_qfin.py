"""
Quasi-finite Z-sets
===================

Orbits Z/n, pullbacks over Z/c, and a Mackey profunctor evaluated on spans.
"""

import numpy as np

from spanlab import QFinZSet, burnside_profunctor, profunctor_eval, qfin_fixed_points, qfin_pullback
from spanlab.qfin import compose_qspans, random_qfin, random_qspan

S = QFinZSet.parse("{1:1, 2:1, 3:1, 4:1, 5:1, 6:1}")
print(S, "has", S.size(), "points")
print("fixed by dZ:", [qfin_fixed_points(S, d) for d in range(1, 13)])

# Z/a x_{Z/c} Z/b is gcd(a, b)/c copies of Z/lcm(a, b)
for a, b, c in [(4, 6, 2), (6, 6, 1), (6, 6, 3), (12, 8, 4)]:
    print(f"Z/{a} x_Z/{c} Z/{b} =", qfin_pullback(a, b, c))

M = burnside_profunctor(12)
print("ranks:", M.ranks)

rng = np.random.default_rng(4)
A, B, C = (random_qfin(rng, 12) for _ in range(3))
s, t = random_qspan(A, B, rng), random_qspan(B, C, rng)
print(s)
print(t)
lhs = profunctor_eval(M, compose_qspans(s, t))
rhs = profunctor_eval(M, t) @ profunctor_eval(M, s)
print("M(t o s) == M(t) M(s):", lhs == rhs)
