"""
Norms of CM values
==================

Evaluate the Borcherds lift with principal part
``2 q^(-1/delta) - 7 q^(-(2-a)/(4 delta)) phi_mu`` at the half CM cycles and
print each norm as an exact factorization.
"""

# %%
import time

from cmnorms.engine import elkies_principal_part, golden, cm_table

rows = cm_table()
for label, d, value in rows:
    mark = "ok" if value.agrees(golden(label)) else "MISMATCH"
    print(f"{label:>8}  {value.render():<60} {mark}")

# %%
# Where the terms come from
# -------------------------
# Each contribution is an exact multiple of ``log N(p)`` at a single prime.
# The sums below are before the cycle weight 1/2 is applied.
from cmnorms.engine import ct_pairing
from cmnorms.lattice import build_quaternion_model
from cmnorms.cmext import CMExtension
from cmnorms.numfield import zeta7_field

F = zeta7_field()
model = build_quaternion_model(F, CMExtension(F, F(-11)))
t0 = time.perf_counter()
res = ct_pairing(model, elkies_principal_part(F))
print(f"{len(res.contributions)} nonzero terms in {time.perf_counter() - t0:.2f}s")
by_prime = {}
for c in res.contributions:
    by_prime[c.prime.p] = by_prime.get(c.prime.p, 0) + c.c * c.coefficient * c.prime.f_deg
print(dict(sorted(by_prime.items())))
