"""
Isosceles triangles and distance energy
=======================================

For the whole plane F_7^2 we count ordered isosceles triples, the quantity
T_1 (the same count with y = z allowed) and T_2, the number of quadruples
with Q(x - y) = Q(z - t).  Both sit close to their random-model values.
"""

from ffincidence import DiagonalForm, field_make
from ffincidence.experiments import full_plane, isosceles_report, pinned_distance_report, t2_report

F7 = field_make(7)
Q = DiagonalForm.sum_of_squares(F7, 2)
E = full_plane(F7)
n = len(E)

iso = isosceles_report(E, Q)
print(f"iso={iso.iso} zero-distance pairs={iso.z} T1={iso.t1}")
print(f"T1 - (n^2 + iso + 2z) = {iso.t1 - (n * n + iso.iso + 2 * iso.z)}")
print(f"T1 - n^3/q = {iso.t1 - n**3 / 7:.1f}, allowed {7**2 * n**1.5:.1f}")

t2 = t2_report(E, Q)
print("N_r:", t2.counts)
print(f"T2={t2.t2}, |T2 - n^4/q|={t2.deviation:.1f} <= {t2.bound}")

pins = pinned_distance_report(E, Q, 0.5)
print(f"pins seeing more than half the distances: {pins.good_pins} of {pins.size}")
