"""
The CM lattice splitting for d = -11
====================================

Fix the CM extension ``k = F(sqrt(-11))``. The lattice ``L`` of trace-zero
integral matrices splits rationally into the CM line ``P`` and its
orthogonal complement ``N``; ``L`` is glued from the two.
"""

# %%
from cmnorms.cmext import CMExtension
from cmnorms.lattice import build_quaternion_model, enumerate_bounded
from cmnorms.numfield import zeta7_field

F = zeta7_field()
ext = CMExtension(F, F(-11))
model = build_quaternion_model(F, ext)

# %%
# Discriminant groups
# -------------------
for name, G in (("L", model.L_disc), ("P", model.P_disc), ("N", model.N_disc)):
    print(f"{name}'/{name}: orders {G.orders}, size {G.order}")
print("glue group H:", model.glue.H_order)

# %%
# The index identity behind the glue: |H|^2 |L'/L| = |P'/P| |N'/N|.
H = model.glue.H_order
print(H * H * model.L_disc.order == model.P_disc.order * model.N_disc.order)

# %%
# Vectors of the CM line below a bound
# ------------------------------------
# For ``m = 1/delta`` list the ``x`` in ``P'`` with ``m - Q(x)`` totally
# positive, together with the coset of ``N'/N`` each one is glued to.
m = 1 / F.delta
pts = enumerate_bounded(model, m)
print(len(pts), "vectors")
for pt in pts[:5]:
    nu = model.glue.match_coords(model.L_disc.zero(), pt.coords)
    print(pt.coords, "Q(x) =", pt.q_value, "coset", nu)
