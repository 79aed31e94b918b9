# %% [markdown]
# # One anisotropic sub-grid problem
#
# On the tensor grid of index l the kernel is stretched by A_l = diag(2**l).
# In the scaled coordinates every sub-grid looks like a unit-spaced grid, so one
# shape parameter means the same thing on all of them.
#
# Below, the same elongated grids are fitted with three scalings: the
# anisotropic one, an isotropic one matched to the fine axis (2**max(l)) and an
# isotropic one matched to the coarse axis (2**min(l)).

# %%
import numpy as np

from mlski import (KernelSpec, assemble, condition_2norm, get_function, halton_points,
                   scaling_diagonal, tensor_grid)
from mlski.solver import cross_matrix, factor_solve

f = get_function("franke2d")
spec = KernelSpec("gaussian", 0.45)
x = halton_points(25_600, 2)

# %%
for index in [(1, 1), (4, 1), (3, 2), (5, 1)]:
    g = tensor_grid(index)
    y = f(g.points)
    for label, a in [("anisotropic", scaling_diagonal(index)),
                     ("iso, fine axis", np.full(2, 2.0 ** max(index))),
                     ("iso, coarse axis", np.full(2, 2.0 ** min(index)))]:
        mat = assemble(g.points, spec, a)
        kappa, _ = condition_2norm(mat)
        coef, _ = factor_solve(mat, y)
        err = cross_matrix(x, g.points, spec, a) @ coef - f(x)
        print(f"l={index} {label:17s} kappa={kappa:9.2e}  rms={np.sqrt(np.mean(err ** 2)):.3e}")
    print()

# %% [markdown]
# The narrow isotropic kernel keeps the matrix well conditioned but is too
# narrow along the coarse axis, and its error is about twice as large on the
# (4, 1) and (5, 1) grids.  The wide isotropic kernel is numerically singular
# along the fine axis.  The anisotropic kernel keeps the accuracy of the wide
# one at a condition number that grows only slowly with the level.
