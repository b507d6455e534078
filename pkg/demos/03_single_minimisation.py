"""
One Levenberg-Marquardt run
===========================

Minimise the objective for three qutrit bases plus the standard basis from
one random start, then check the result independently.
"""

import numpy as np

from mubsearch import LmOptions, MubResiduals, Rng, is_mub_set, lm_minimize
from mubsearch.search import starting_point

d, n = 3, 3
fun = MubResiduals(d, n)
x0 = starting_point(d, n, Rng(7))
print(f"{fun.n_params} parameters, {fun.n_residuals} residuals")

res = lm_minimize(fun, x0, LmOptions(), vectorized=True)
print(res.termination, "after", res.iterations, "iterations")
for k, value in enumerate(res.objective_trace):
    print(f"{k:3d}  {value:.3e}")

# %%
# The optimum as explicit bases; every cross-basis overlap is 1/sqrt(3).
bases = fun.basis_set(res.x_final)
print(is_mub_set(bases))
g = bases.bases[0].conj().T @ bases.bases[1]
print(np.round(np.abs(g) * np.sqrt(d), 6))
