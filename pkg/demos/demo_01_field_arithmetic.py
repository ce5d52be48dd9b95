"""
The real cubic field Q(zeta_7)^+
================================

A tour of exact arithmetic in ``F = Q(a)``, ``a^3 + a^2 - 2a - 1 = 0``:
prime splitting, valuations and local symbols.
"""

# %%
# The field and its different
# ---------------------------
from cmnorms.ideals import factor_element, factor_prime, hilbert_symbol, quad_character
from cmnorms.numfield import zeta7_field

F = zeta7_field()
a = F.alpha
print("minimal polynomial (ascending):", F.min_poly)
print("discriminant:", F.disc)
print("delta =", F.delta, " norm", F.delta.norm())

# %%
# Every element has three real embeddings, isolated exactly and refined to
# any precision as rational intervals.
for iv in (a * a - 2).embed(40):
    print(float(iv.lo), "<= sigma <=", float(iv.hi))

# %%
# Splitting of small rational primes
# ----------------------------------
# 2 stays inert, 7 is totally ramified, 13 splits completely.
for p in (2, 3, 7, 13, 29):
    print(p, [(P.e, P.f_deg) for P in factor_prime(F, p)])

# %%
# The different is the square of the prime above 7.
print(factor_element(F.delta))

# %%
# Local symbols at a split prime
# ------------------------------
P = factor_prime(F, 13)[0]
for u in (2, 3, 5, a + 3):
    print(f"({u} / P13) =", quad_character(F(u), P), " (u, 13)_P =", hilbert_symbol(F(u), F(13), P))
