"""
Arithmetic in F_{p^k}
=====================

Elements are integers 0..q-1 read as base-p coefficient vectors, lowest
degree first.  The context carries full lookup tables, so field operations
on numpy arrays are plain fancy indexing.
"""

import numpy as np

from ffincidence.algebra import additive_character, fe_mul, fe_pow, field_make, trace

# F_9 = F_3[t]/(t^2 + 1).  The element t has code 3 (coefficients (0, 1)).
F9 = field_make(3, 2)
print("modulus, low degree first:", F9.modulus)
t = F9.elem((0, 1))
print("t^2 =", F9.coeffs(fe_pow(F9, t, 2)), "which is -1")

# The multiplicative group is cyclic of order 8; t has order 4.
print("orders:", {x: min(e for e in range(1, 9) if fe_pow(F9, x, e) == 1) for x in range(1, 9)})

# Whole-array arithmetic goes through the cached tables.
x = np.arange(9)
print("x * t for every x:", F9.mul_table[x, t])
assert all(F9.mul_table[a, t] == fe_mul(F9, a, t) for a in x)

# The absolute trace lands in F_3, and the additive characters sum to zero.
print("traces:", [trace(F9, a) for a in x])
print("|sum psi_t(x)| =", abs(sum(additive_character(F9, t, a) for a in x)))
