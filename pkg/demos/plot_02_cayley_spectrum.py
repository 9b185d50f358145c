"""
Character sums as a Cayley spectrum
===================================

The digraph C_Q on F_q^(d+1) has an arc X -> Y when x0 - y0 + Q(x - y) = 0.
Its eigenvectors are the additive characters, so its spectrum is a table of
Gauss-type sums.  Here we compare that table with a dense eigensolver and
look at what happens when one exponent is odd.
"""

import numpy as np

from ffincidence import DiagonalForm, field_make
from ffincidence.spectral import CAYLEY_Q, adjacency_matrix, build_graph, cayley_spectrum, certify

F5 = field_make(5)

# Sum of squares in two variables.  Apart from the trivial eigenvalue 25,
# every modulus is 0 or exactly q = 5.
g = build_graph(CAYLEY_Q, F5, 2)
spec = cayley_spectrum(g)
print("distinct moduli:", np.unique(np.round(np.abs(spec), 6)))
dense = np.linalg.eigvals(adjacency_matrix(g))
print("dense check:", np.allclose(np.sort(np.abs(spec)), np.sort(np.abs(dense))))
print(certify(g).to_dict() | {"spectrum": "..."})

# x^2 + y^3.  The cubic factor is a Weyl sum of modulus up to
# (1 + sqrt 5)/2 * sqrt 5, so lambda overshoots q^(d/2) = 5.
g3 = build_graph(CAYLEY_Q, F5, 2, DiagonalForm(F5, (1, 1), (2, 3)))
cert = certify(g3)
print(f"lambda = {cert.lambda_:.4f}, claimed bound = {cert.bound}, verdict = {cert.verdict}")
print(f"(c1 - 1)(c2 - 1) q^(d/2) = {2 * 5}")
