"""
Random starting points
======================

Each search starts from Haar-random unitaries.  Their Hermitian logarithms
are packed into the real parameter vector the optimizer works on.
"""

import numpy as np

from mubsearch import (Rng, exp_i, haar_unitary, hermitian_to_params,
                       log_unitary, params_to_hermitian)

rng = Rng(2024)
u = haar_unitary(3, rng)
print("unitarity defect:", np.abs(u.conj().T @ u - np.eye(3)).max())

# %%
# Principal logarithm and back.  The generator has eigenvalues in (-pi, pi].
h = log_unitary(u)
print("eigenvalues of H:", np.round(np.linalg.eigvalsh(h), 4))
print("round trip error:", np.abs(exp_i(h) - u).max())

# %%
# d*d reals per generator: diagonal first, then Re/Im of the upper triangle.
x = hermitian_to_params(h)
print(x.shape, np.array_equal(params_to_hermitian(x, 3), h))

# %%
# Haar samples spread their weight evenly: the average of |U_mn|^2 is 1/d.
samples = np.stack([haar_unitary(4, rng) for _ in range(5000)])
print(np.round((np.abs(samples) ** 2).mean(axis=0), 3))
