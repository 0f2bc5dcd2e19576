"""Exact computations with spans of finite G-sets, Mackey functors and norm maps."""

from .errors import (AxiomViolation, BaseMismatch, BoundExceeded, ForeignSubgroup, GroupMismatch,
                     NotDivisible, NotEquivariant, NotInvertible, ObjectMismatch, ParseError,
                     SpanlabError, TargetMismatch, UnknownName, UnsupportedLevel,
                     VeryAdditivityViolation)
from .linalg import CoeffRing, ModuleMap
from .grp import (FiniteGroup, Subgroup, cyclic_group, dihedral_group, double_cosets,
                  klein_four, make_group, named_group, subgroup_lattice, symmetric_group,
                  trivial_group)
from .gset import (GMap, GSet, coset_space, diagonal, orbit_decomposition, point, pullback,
                   truncation_level)
from .span import (MarkMatrix, Span, SpanClass, adjunction_spans, backward, compose, forward,
                   hom_basis, identity_span, mark_matrix, normal_form, validate_class)
from .mackey import (MackeyFunctor, burnside_mackey, evaluate_span, fixed_point_mackey,
                     table_of_marks, validate_mackey)
from .ambidex import (FamilyMap, ModuleFamily, NormCertificate, adjoint_norm, constant_family,
                      cosegal_and_segal, double_bc_check, free_semiadditive_functor,
                      pushforward_prod, pushforward_sum)
from .qfin import (MackeyProfunctorData, QFinZSet, QSpan, burnside_profunctor,
                   profunctor_eval, profunctor_normalize, qfin_fixed_points, qfin_pullback)

__version__ = "0.1.0"
