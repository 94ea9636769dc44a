"""Factor systems and how to tell a nontrivial one from a coboundary."""
# %%
import numpy as np

from spaqt.groups import center
from spaqt.projrep import (GaugeFunction, are_equivalent, commutant_dimension, direct_sum,
                           factor_system_of, format_factor_table, gauge_transform,
                           nontriviality_certificate, phi, trivial_factor_system)
from spaqt.symmetry import g2_half_half_rep, klein_pauli_rep

pauli = klein_pauli_rep()
omega, resid = factor_system_of(pauli)
print("Pauli matrices on Z2 x Z2, closure residual", resid)
print(format_factor_table(omega))

# %% [markdown]
# phi(a) sums omega(a,b)/omega(b,a) over b.  It equals |G| for every a when
# omega is a coboundary, so any element with phi(a) != |G| certifies that
# the class is nontrivial.

# %%
K = pauli.group
print({K.labels[a]: round(abs(phi(omega, a)), 12) for a in K.elements})
print("certificate:", K.labels[nontriviality_certificate(omega)])
print("equivalent to trivial?", are_equivalent(omega, trivial_factor_system(K)))

# %%
# A random gauge transformation leaves the class unchanged.
rng = np.random.default_rng(1)
beta = GaugeFunction.random(K.order, rng, lattice=2 * K.order)
print("equivalent after regauging?", are_equivalent(omega, gauge_transform(omega, beta)))

# %%
half = g2_half_half_rep()
w_h, _ = factor_system_of(half)
G = half.group
print("1/2 x 1/2 rep of G2, phi on the center:",
      {G.labels[a]: abs(phi(w_h, a)) for a in sorted(center(G).members)})

# %%
print("commutant dimensions:",
      commutant_dimension(pauli), commutant_dimension(half),
      commutant_dimension(direct_sum(pauli, pauli)), "(last one is reducible)")
