"""The order-16 symmetry group of two coupled spin-1 boundaries.

Run with ``python3 demos/01_symmetry_groups.py``.
"""
# %%
import numpy as np

from spaqt.groups import (abelianization, build_named_group, center, characters, derived_subgroup,
                          find_isomorphism)
from spaqt.symmetry import g2_group

G = g2_group()
print(f"{G.name}: order {G.order}")
print("elements:", ", ".join(G.labels))

# %% [markdown]
# The group is closed from two spin-1 x spin-1 generators.  Its center and
# commutator subgroup are small, so the abelian quotient is large.

# %%
Z, D = center(G), derived_subgroup(G)
A, quotient = abelianization(G)
print("center:", Z.labels())
print("derived subgroup:", D.labels())
print("abelianization order:", A.order)

# %%
# An explicit isomorphism onto the semidirect product of Klein's group by Z4.
H = build_named_group("D2_semidirect_Z4")
iso = find_isomorphism(G, H)
print("isomorphic to", H.name, ":", iso is not None)

# %%
# Every character factors through the abelianization: eight in total.
# Values are fourth roots of unity, shown as the exponent k in i^k.
for chi in characters(G):
    ks = np.rint(np.angle(chi.values) / (np.pi / 2)).astype(int) % 4
    print(f"{chi.label:>6}: " + " ".join(map(str, ks)))
