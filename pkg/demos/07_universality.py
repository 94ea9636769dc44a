"""Which gates can several tilted copies of the Klein group reach?"""
# %%
import numpy as np

from spaqt.universality import (compose_pi_rotations, embedding_gate_set, predict_chain_gate,
                                reference_embeddings, standard_embedding)

embs = reference_embeddings()
for E in embs:
    print(E.label, np.round(E.axes, 3).tolist())

# %% [markdown]
# Two pi-rotations compose to a rotation by twice the angle between their
# axes.  Axes pi/8 apart therefore give a pi/4 rotation, which is T.

# %%
c = compose_pi_rotations([1, 0, 0], [np.cos(np.pi / 8), np.sin(np.pi / 8), 0])
print("angle / pi =", c.angle / np.pi, "axis", np.round(c.axis, 6))

# %%
for name, group in (("standard only", [standard_embedding()]),
                    ("all four", embs),
                    ("three (no -pi/4)", [embs[0], embs[2], embs[3]])):
    rep = embedding_gate_set(group)
    print(f"{name:>17}: {rep.reached}")
    for g, w in rep.witnesses.items():
        print(f"{'':>19}{g}: {w}")

# %%
print("chain prediction for a mu field:", np.round(predict_chain_gate(embs[3], 0).matrix, 3))
