"""
Tables of marks
===============

Fixed points of G/K under H, and what they say about the Burnside ring.
"""

import numpy as np

from spanlab import named_group, table_of_marks

# rows are the transitive sets G/K, columns the subgroups H (one per class)
for name in ["C2", "C4", "S3"]:
    G = named_group(name)
    tom = np.array(table_of_marks(G).tolist())
    print(name, "classes:", [H.elements for H in G.lattice.reps()])
    print(tom)

# lower triangular, so the mark map is injective on the Burnside ring
G = named_group("S4")
tom = np.array(table_of_marks(G).tolist())
print("S4 is lower triangular:", np.all(np.triu(tom, 1) == 0))

# diagonal entries are |N(K)/K|
diag = [K.normalizer().order // K.order for K in G.lattice.reps()]
print("diagonal:", np.diag(tom).tolist())
print("N(K)/K:  ", diag)
