# %% [markdown]
# # Energy sweep from a JSON config
#
# The command-line driver runs the same code shown below. It is invoked as
# `coupled-strings sweep config.json` or `coupled-strings certify config.json`.

# %%
import io
import tempfile
from pathlib import Path

import numpy as np

from coupled_strings.cli import SweepConfig, run_certify, run_sweep

cfg = SweepConfig.from_dict({
    "model": "point",
    "distribution": {"atoms": [[0, 0], [0, 1], [1, 0], [1, 1]]},
    "energy_grid": [-3, 12, 6],
    "n_steps": 50_000,
    "seed": 4,
})
text = run_sweep(cfg, workers=2)
print(text)

# %% [markdown]
# Columns load directly with numpy. Lines starting with `#` are footers.

# %%
data = np.genfromtxt(io.StringIO(text), delimiter=",", names=True, dtype=None,
                     encoding="utf-8", comments="#")
print(data["E"], data["gamma2"])

# %% [markdown]
# A certificate-only pass skips the Monte Carlo. It appends the roots found in
# the grid's span.

# %%
with tempfile.TemporaryDirectory() as d:
    cfg = SweepConfig.from_dict({
        "model": "point",
        "distribution": {"atoms": [[0, 0], [0, 1], [1, 0], [1, 1]]},
        "energy_grid": [1.5, 12, 8],
        "outputs": {"csv": f"{d}/cert.csv", "summary": f"{d}/cert.txt"},
    })
    run_certify(cfg)
    print(Path(d, "cert.txt").read_text())
