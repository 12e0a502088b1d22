"""
L-factors, epsilon factors and zeta values
==========================================

Satake parameters are given as half-integers sigma, with u = q^(2 sigma),
or as the token "sym" for a free parameter.  Everything is in X = q^-s.
"""

from fractions import Fraction

from uhecke import doubling as dbl
from uhecke.cli import factored_text
from uhecke.exactalg import shift_s

ctx = dbl.DoublingContext(1, "-")
sigma = dbl.satake_params(["1/2"])
print("L(s)    =", dbl.l_factor(ctx, sigma).to_text())
print("zeta    =", dbl.zeta_value(ctx, sigma).to_text())

# a free parameter next to the 1/2 slot
ctx3 = dbl.DoublingContext(3, "-")
sigma3 = dbl.satake_params(["sym", "sym", "1/2"])
# expanded this is long; the factored form is easier to read
print("L(s)    =", factored_text(dbl.l_factor(ctx3, sigma3)))
eps = dbl.epsilon_factor(ctx3, sigma3)
print("eps(s)  =", eps.to_text(), " at s=1/2:", shift_s(eps.to_rfunc(), 0, Fraction(1, 2)).to_text())

# the zeta value comes out the same whether we multiply the intertwining
# constants along the chain or use the closed form
for r in (1, 2, 3):
    c = dbl.DoublingContext(r, "-")
    s = dbl.satake_params(["sym"] * r)
    print(r, dbl.zeta_value_via_chain(c, s) == dbl.zeta_value(c, s))

# Gindikin-Karpelevich constants for the two signs, and their ratio
for r in (1, 2):
    m = dbl.gk_constant(dbl.DoublingContext(r, "-"), "closed")
    p = dbl.gk_constant(dbl.DoublingContext(r, "+"), "closed")
    print(f"r={r}  C-/C+ =", (m / p).to_text())

# where the normalized section vanishes
print([dbl.vanishing_order_at(3, "+", s0) for s0 in range(-3, 3)])
