# %% [markdown]
# # Transfer matrices of the two models
#
# Each model advances the pair (u, u') of a two-component wave function across
# one unit cell. The result is a 4x4 real symplectic matrix.

# %%
import numpy as np

from coupled_strings import (ModelSpec, expm, is_symplectic, transfer_anderson,
                             transfer_point, wedge2)
from coupled_strings.exterior import OMEGA_J
from coupled_strings.models import anderson_generator

np.set_printoptions(precision=5, suppress=True)

# %% [markdown]
# Point interactions at energy 5 with couplings (0, 1). The closed form splits
# into a trigonometric block per channel.

# %%
m = transfer_point(5.0, (0.0, 1.0))
print(m)
print("symplectic:", is_symplectic(m))

# %% [markdown]
# The Anderson cell is checked against a brute-force matrix exponential of
# its first-order generator. The check covers each energy regime.

# %%
for E in (-3.0, 0.7, 1.5, 6.0):
    closed = transfer_anderson(E, (1.0, 0.0))
    brute = expm(anderson_generator(E, (1.0, 0.0)))
    print(f"E={E:5.1f}  max deviation {np.abs(closed - brute).max():.1e}")

# %% [markdown]
# The second exterior power of a symplectic matrix fixes the symplectic
# 2-form, written here in the lexicographic basis of pairs.

# %%
w = wedge2(m)
print("form residual:", np.abs(w @ OMEGA_J - OMEGA_J).max())

# %% [markdown]
# A model bundles a distribution over couplings. `atom_matrices` lists one
# transfer matrix per atom.

# %%
spec = ModelSpec("point")
print(spec.distribution)
print(len(spec.atom_matrices(5.0)), "atoms")
