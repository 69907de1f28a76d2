# %% [markdown]
# # Good and generic sets in F_2^r
#
# Take a set A of nonzero vectors and any full-rank r x s matrix M.  A is
# *good* for s when the syndromes a.M (a in A) hit every nonzero pattern of
# F_2^s, and *generic* when at least one syndrome is a unit vector.
# This script builds both kinds greedily and by exact search, then checks them.

# %%
import time

import numpy as np

from genset import construct, gf2, verify

# %% exact minima for small r: the searches start from the standard basis
for kind in ("good", "generic"):
    for r, s in [(3, 2), (4, 2), (4, 3), (5, 2)]:
        t = time.perf_counter()
        out = construct.exact_minimum(r, s, kind)
        print(f"{kind:8s} r={r} s={s}  min size {out.size:3d}  nodes {out.nodes_explored:8d}  "
              f"{time.perf_counter() - t:.2f}s")

# %% a minimum good (3,2)-set: every nonzero vector but one
A = construct.exact_minimum(3, 2, "good").set
print([gf2.to_string(a, 3) for a in A])
print(verify.is_good_set(A, 2))

# %% greedy sets grow slowly with r
sizes = np.zeros((8, 3), dtype=int)
for i, r in enumerate(range(3, 11)):
    for j, s in enumerate((1, 2, 3)):
        sizes[i, j] = construct.greedy_good_set(r, s).size
print("r   s=1 s=2 s=3")
for r, row in zip(range(3, 11), sizes):
    print(f"{r:2d}", *(f"{x:4d}" for x in row))

# %% removing any vector of the all-nonzero set breaks the good property at s=r
full = verify.VectorSet(3, tuple(range(1, 8)))
print(verify.is_good_set(full, 3).ok)
print(verify.is_good_set(verify.VectorSet(3, tuple(range(1, 7))), 3).ok)

# %% the certificate names a flat (coset of a subspace) that A misses
bad = verify.is_good_set(verify.VectorSet(3, (1, 2, 4)), 2)
print(bad.ok, bad.certificate)
