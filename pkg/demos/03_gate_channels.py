"""Character-twisted group averages and the gates they fix."""
# %%
import numpy as np

from spaqt.gatechan import check_projector_algebra, gate_table
from spaqt.symmetry import g2_half_half_rep, klein_pauli_rep

np.set_printoptions(precision=3, suppress=True)

# %% [markdown]
# For each character chi, Gamma_chi(M) averages chi(g) V_g M V_g^dag over
# the group.  For an irreducible projective rep its fixed space is at most
# one-dimensional, and the fixed point is unitary.

# %%
pauli = klein_pauli_rep()
t = gate_table(pauli)
for k, W in t.entries.items():
    print(t.characters[k].label)
    print(W)

# %%
print("projector algebra:", check_projector_algebra(pauli))
print("group law residual:", t.group_law_residual(), " faithful:", t.faithful())

# %%
# The two-chain group has eight characters and eight distinct two-qubit gates.
half = g2_half_half_rep()
th = gate_table(half)
print(len(th.entries), "gates, group-law residual", th.group_law_residual())
print("alpha phases:", sorted({complex(np.round(a, 6)) for a in th.alpha.values()}, key=np.angle))
