"""
The Burnside Mackey functor
===========================

Everything here comes from composing spans of finite G-sets.
"""

from spanlab import (Span, burnside_mackey, compose, coset_space, evaluate_span,
                     hom_basis, named_group, normal_form, point, validate_mackey)
from spanlab.gset import terminal_map

G = named_group("C2")
pt = point(G)
free = coset_space(G, G.trivial_subgroup())

# the span pt <- C2/e -> pt is the element [C2/e] of the Burnside ring
t = terminal_map(free)
x = Span.of(t, t)
basis = hom_basis(pt, pt)
print("basis of End(pt):", [b.pieces for b in basis])
print("[C2/e]   ->", normal_form(x).coefficients(basis))
print("[C2/e]^2 ->", normal_form(compose(x, x)).coefficients(basis))

# restriction, transfer and conjugation, all read off span composition
S3 = named_group("S3")
M = burnside_mackey(S3)
print(M)
e, W = S3.trivial_subgroup(), S3.whole()
print("res S3 -> e:", M.res_map(W, e).tolist())
print("tr  e -> S3:", M.tr_map(W, e).tolist())

report = validate_mackey(M)
print(report.format())

# the same functor acting on a span between non-transitive sets
X = coset_space(S3, S3.lattice.reps()[1])
print("M(pt <- S3/C2 -> pt):")
print(evaluate_span(M, Span.of(terminal_map(X), terminal_map(X))).tolist())
