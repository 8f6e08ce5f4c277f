# %% [markdown]
# # Density certificates and exceptional energies
#
# Derivatives of one-parameter families in the generated group give Lie algebra
# elements. Closing them under brackets and reaching dimension 10 certifies
# that the group is dense in the symplectic group. Closed-form determinants
# locate the energies where the argument breaks down.

# %%
import numpy as np

from coupled_strings import ModelSpec, certify, exceptional_roots, lie_closure, model1_seeds

for E in (5.0, 1 + np.pi**2, 0.3, -4.0):
    c = certify(ModelSpec("point"), E)
    print(f"E={E:8.4f} dim={c.lie_dim} exceptional={c.is_candidate_exceptional} {c.det_values}")

# %% [markdown]
# Roots of the det11 certificate on (1.5, 12). Two are forced zeros at
# pi^2 - 1 and 1 + pi^2. At a double root the sign does not change, so it is
# reported separately.

# %%
rep = exceptional_roots("det11", (1.5, 12))
print("simple:", rep.roots)
print("double:", rep.suspected_double_roots)

# %% [markdown]
# At the forced zero the closure stalls below full dimension.

# %%
print(lie_closure(model1_seeds(1 + np.pi**2)).dim)

# %% [markdown]
# For the Anderson model, closure alone decides density. Its tracked-entry
# determinant vanishes for every energy.

# %%
from coupled_strings.zariski import tracked_report

print(certify(ModelSpec("anderson"), 3.0))
print(tracked_report(3.0)["direct_relative"])
