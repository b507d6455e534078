"""
Measuring how far bases are from being mutually unbiased
========================================================

Two orthonormal bases, stored as the columns of unitaries, are mutually
unbiased when every overlap has modulus ``1/sqrt(d)``.  The objective sums
the squared deviations of ``|overlap|**2`` from ``1/d`` over all pairs of
bases, the standard basis included.
"""

import numpy as np

from mubsearch import (BasisSet, fourier_matrix, gram_moduli_sq, is_mub_set,
                       objective_value, prime_mub_construction, residuals)

# %%
# The Fourier basis is unbiased with respect to the standard basis: every
# squared overlap equals 1/d.
d = 4
print(np.round(gram_moduli_sq(np.eye(d), fourier_matrix(d)), 3))
print("objective:", objective_value(BasisSet(fourier_matrix(d))))

# %%
# Pairing the standard basis with itself is as biased as it gets.  The
# objective is then d - 1.
for d in range(2, 7):
    print(d, objective_value(BasisSet(np.eye(d))))

# %%
# The residual vector behind the objective.  For two copies of the qubit
# standard basis it is (1/2, -1/2, -1/2, 1/2).
print(residuals(BasisSet(np.eye(2))))

# %%
# In prime dimensions a complete set of d + 1 mutually unbiased bases is
# known in closed form.
for p in (2, 3, 5, 7, 11):
    check = is_mub_set(prime_mub_construction(p))
    print(f"d={p:2d}  objective={check.objective:.1e}  "
          f"max deviation={check.max_deviation:.1e}  mub={check.is_mub}")
