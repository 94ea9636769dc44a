"""Single-qubit gates from slowly reshaping a spin-1 chain.

Takes under a minute.  Uses N = 3 or 4 spin-1 sites plus one spin-1/2.
"""
# %%
import numpy as np

from spaqt.chainsim import (elementary_gate_schedule, gap_profile, single_qubit_holonomy_schedule,
                            transistor_schedule, transport_holonomy)
from spaqt.projrep import PAULI

np.set_printoptions(precision=4, suppress=True)

# %% [markdown]
# Freezing the first spin-1 site in a field along z, while cutting it from
# the chain, moves the logical qubit by one site and applies sigma^z.  The
# result does not depend on where in the Haldane phase the chain sits.

# %%
for beta in (-1 / 3, 0.0, 0.5):
    r = transport_holonomy(elementary_gate_schedule(4, 0, beta, "z"), steps=256)
    print(f"beta={beta:+.3f}  fidelity vs sigma^z = {r.fidelity(PAULI['z']):.12f}  min gap {r.min_gap:.3f}")

# %%
# A field along (x+z)/sqrt(2) gives a Hadamard.
r = transport_holonomy(elementary_gate_schedule(3, 0, 0.0, "mu"), steps=128)
print("mu-axis gate:\n", r.logical_unitary)

# %% [markdown]
# Decouple with a z field, rotate the field to x, then recouple: the net
# effect on the qubit is a pi-rotation about z cross x = y.

# %%
r = transport_holonomy(single_qubit_holonomy_schedule(4, -1 / 3, "z", "x"), steps=512)
print("holonomy:\n", r.logical_unitary, "\nfidelity vs sigma^y:", r.fidelity(PAULI["y"]))

# %% [markdown]
# Switching the field on everywhere at once hands the qubit straight to the
# edge spin.  Each frozen site contributes one sigma^z, so the gate is
# (sigma^z)^N and the minimum gap shrinks as the chain grows.

# %%
for N in (3, 4, 5):
    r = transport_holonomy(transistor_schedule(N), steps=128)
    gap = min(g for _, g in gap_profile(transistor_schedule(N), samples=21))
    print(f"N={N}: fidelity vs (sigma^z)^N = {r.fidelity(np.linalg.matrix_power(PAULI['z'], N)):.10f}, "
          f"min gap {gap:.4f}")
