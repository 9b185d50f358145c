"""
Subsets with distinct distances
===============================

A subset U is good when no two disjoint pairs of its points share a
Q-distance.  A greedy scan builds maximal good subsets.  The deletion method
samples points at random and then removes one point from every bad 4-subset
that survives.
"""

from ffincidence import DiagonalForm, field_make
from ffincidence.experiments import deletion_ddsubset, full_plane, greedy_ddsubset, size_envelope

for q in (7, 11, 13):
    F = field_make(q)
    Q = DiagonalForm.sum_of_squares(F, 2)
    E = full_plane(F)
    lo, hi = size_envelope(q)
    greedy = [greedy_ddsubset(E, Q, order="shuffle", seed=s).size for s in range(5)]
    deletion = [deletion_ddsubset(E, Q, seed=s) for s in range(5)]
    print(f"q={q:2d} envelope=[{lo}, {hi}]  greedy sizes={greedy}  "
          f"deletion sizes={[r.size for r in deletion]} from samples of {deletion[0].sample_size}")

# Greedy in lexicographic order on F_3^2 stops after one column.
F3 = field_make(3)
rep = greedy_ddsubset(full_plane(F3), DiagonalForm.sum_of_squares(F3, 2))
print(rep.subset, "maximal:", rep.maximal)
