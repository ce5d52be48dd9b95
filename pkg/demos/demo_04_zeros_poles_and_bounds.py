"""
Zeros, poles and the prime bound
================================

When a CM point lies on the divisor of the lift the value is 0 or
infinity. We provoke this with an extra principal-part term at a value
``Q(x)`` that the CM lattice realizes, then look at which primes can occur.
"""

# %%
from fractions import Fraction

from cmnorms.engine import (Calibration, PrincipalPart, cm_value_norm, ct_pairing,
                            elkies_principal_part, small_prime_bound)
from cmnorms.cmext import CMExtension
from cmnorms.lattice import build_quaternion_model, quad_form
from cmnorms.numfield import zeta7_field

F = zeta7_field()
model = build_quaternion_model(F, CMExtension(F, F(-3)))
pp = elkies_principal_part(F)
print("d = -3:", cm_value_norm(F, pp, F(-3), model=model).render())

# %%
m = quad_form(F, model.w0)
for c in (1, -1):
    extra = PrincipalPart(pp.terms + PrincipalPart.from_pairs(F, [(m, c)]).terms)
    print(f"adding {c:+d} q^-{m}:", cm_value_norm(F, extra, F(-3), model=model).render())

# %%
# Rescaling the cycle
# -------------------
# The cycle Z(O_-3) is two thirds of a single CM point.
cal = Calibration.for_point_multiple(Fraction(2, 3), h_k=1, w_k=6)
print("full cycle:", cm_value_norm(F, pp, F(-3), cal, model=model).render())

# %%
# Primes in a synthetic principal part
# ------------------------------------
single = PrincipalPart.from_pairs(F, [(2 / F.delta, 1)])
primes = sorted({c.prime.p for c in ct_pairing(model, single).contributions})
print("primes:", primes, " bound:", small_prime_bound(model, single))
