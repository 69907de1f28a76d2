# %% [markdown]
# # Bounds on minimum good and generic sets
#
# Every bound is reported with an identifier, its direction and its range of
# validity.  The table below puts the best lower and upper bounds next to the
# exact values that branch and bound can reach.

# %%
from genset import bounds, construct

# %% all bounds at one cell
rep = bounds.bounds_G1(4, 2, exact=construct.exact_minimum(4, 2).size)
for b in rep.values:
    print(f"{b.kind:6s} {b.name:38s} {b.value!s:>22s}  {b.status}")

# %% the probabilistic threshold is decided in log space with exact re-checks
for k in range(2, 9):
    t = bounds.threshold_details("good", k, 2)
    print(k, t.N, t.holds_at_N, t.fails_at_N_minus_1, t.rechecked)

# %% at (3,3) the product is exactly 1 one step before the threshold
print(bounds.threshold_product_exact("good", 3, 3, 6), bounds.threshold_N("good", 3, 3))

# %% consistency table: exact values sit between the bounds
for row in bounds.consistency_table(5, 3, exact_k_max=4):
    print(row.k, row.s, row.exact_F, row.exact_G1, row.recurrence_lower, row.flags)

# %% blocking sets: the nonzero points of a 3-subspace of F_2^4 meet every plane
print(bounds.blocking_lower(2, 4, 2), construct.exact_blocking_minimum(4, 2).size)
