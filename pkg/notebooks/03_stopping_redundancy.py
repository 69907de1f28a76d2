# %% [markdown]
# # Redundant parity checks for iterative erasure decoding
#
# Peeling on a parity-check matrix H stalls on stopping sets.  Adding rows of
# the dual code removes small stopping sets; with enough rows the stopping
# distance reaches the minimum distance, and every erasure pattern of fewer
# than d positions peels.

# %%
import numpy as np

from genset import bounds, codes, construct, erasure, gf2

# %% the [8,4,4] extended Hamming code
C = codes.make_code("extended-hamming", m=3)
print(C.parity_check)
print("stopping distance of the textbook H:", erasure.stopping_distance(C.parity_check))

# %% greedy rows until every set of at most d-1 coordinates is covered once
out = construct.greedy_parity_check(C)
H = out.set
print(H)
print("rows", out.size, "bound", round(bounds.row_greedy_bound(C.n, C.k, 4), 2),
      "stopping distance", erasure.stopping_distance(H))

# %% a generic set A turns H into the rows aH
A = construct.exact_minimum(4, 3, "generic").set
AH = erasure.apply_generic_set(A.matrix(), C.parity_check)
print(AH.shape, erasure.stopping_distance(AH))

# %% Monte Carlo on the erasure channel: failures per strategy and ML baseline
report = erasure.bec_simulate([C.parity_check, H, AH], C, p=0.3, trials=20000, seed=7,
                              names=["textbook", "greedy", "generic"])
print(report.to_csv())

# %% the failure counts along p
ps = np.linspace(0.05, 0.5, 10)
for p in ps:
    r = erasure.bec_simulate([C.parity_check, H], C, p=float(p), trials=5000, seed=1)
    print(f"{p:.2f}", [s["peel_failures"] for s in r.per_strategy], r.ml_failures)
