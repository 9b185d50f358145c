"""
Counting point-sphere incidences
================================

An incidence is a pair (p, (b, r)) with Q(p - b) = r.  The count is close to
|P||S|/q, and the deviation is controlled by the spectral gap.  We draw a few
random configurations and also recount them as arcs of the Cayley graph.
"""

import numpy as np

from ffincidence import DiagonalForm, field_make
from ffincidence.experiments import incidence_bound_report, incidences_via_cayley
from ffincidence.geometry import SphereSet, all_points, all_spheres

F7 = field_make(7)
Q = DiagonalForm.sum_of_squares(F7, 2)
rng = np.random.default_rng(2024)
spheres = all_spheres(7, 2)

for size in (5, 20, 49):
    P = all_points(7, 2)[rng.choice(49, size, replace=False)]
    idx = rng.choice(len(spheres), 3 * size, replace=False)
    S = SphereSet(spheres.centers[idx], spheres.radii[idx])
    rep = incidence_bound_report(P, S, Q)
    print(f"|P|={size:2d} |S|={3 * size:3d}  I={rep.count:4d}  main={float(rep.main):7.2f}  "
          f"slack={rep.slack:7.2f}  graph count={incidences_via_cayley(P, S, Q)}")
