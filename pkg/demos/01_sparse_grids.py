# %% [markdown]
# # Sparse grids from anisotropic tensor grids
#
# A tensor grid with multi-index l has 2**l_j + 1 equispaced points along axis j.
# The sparse grid of level n is the union of all tensor grids with |l|_1 = n + d - 1.

# %%
import numpy as np

from mlski import combination_index_sets, sparse_grid, sparse_grid_size, tensor_grid

g = tensor_grid((3, 1))
print(g.shape, g.count)
print(g.points[:6])

# %% [markdown]
# The combination formula adds the finest layer of sub-grids and subtracts the
# coarser layers with binomial weights.  In 2D at level 4 that is four grids in
# and three grids out.

# %%
for layer in combination_index_sets(4, 2):
    print(f"q={layer.q} coefficient={layer.coefficient:+d} indices={layer.indices}")

# %% [markdown]
# Node counts grow like 2**n * n**(d-1) instead of 2**(n d).

# %%
for d in (2, 3, 4):
    counts = [sparse_grid_size(n, d) for n in range(1, 8)]
    full = [(2 ** n + 1) ** d for n in range(1, 8)]
    print(f"d={d}: sparse {counts}")
    print(f"      full   {full}")

# %% [markdown]
# Grids of consecutive levels are nested, which is what the multilevel
# residual correction relies on.

# %%
coarse = {tuple(p) for p in sparse_grid(3, 2).points}
fine = {tuple(p) for p in sparse_grid(4, 2).points}
print(coarse <= fine, len(coarse), len(fine))

# %%
try:
    import matplotlib.pyplot as plt

    pts = sparse_grid(5, 2).points
    plt.figure(figsize=(4, 4))
    plt.scatter(pts[:, 0], pts[:, 1], s=6)
    plt.gca().set_aspect("equal")
    plt.title(f"sparse grid, level 5, {len(pts)} nodes")
    plt.savefig("sparse_grid_level5.svg")
except ImportError:
    pass
