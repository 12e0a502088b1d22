"""
Characters of the finite Hecke algebra
======================================

The finite Iwahori-Hecke algebra of type C_r with parameters (q, q^2) has two
characters kappa^+ and kappa^-.  We find their eigenvectors and idempotents.
"""

from uhecke import hecke, weyl
from uhecke.hecke import HeckeElement

# The rank-one algebra: T_w satisfies (T_w - q)(T_w + 1) = 0
w = weyl.generator(1, "C")
print("T_w * T_w =", hecke.t_mul(w, w).to_text())

# kappa^- sends T_C to -1 and each T_Ai to q^2
for r in (1, 2, 3):
    f = hecke.eigenvector(r, "-")
    weights = [f.coeff(weyl.block_representative(r, i)).to_text() for i in range(r + 1)]
    print(f"r={r}: dimension {len(hecke.eigenspace(r, '-'))}, block weights {weights}")

# the right action really is by kappa^-
f = hecke.eigenvector(2, "-")
for s in weyl.generators(2):
    g = HeckeElement.basis(weyl.generator(2, s))
    print(s, (f * g == f.scale(hecke.kappa_generator("-", s))))

# idempotents
e = hecke.idempotent(1, "-")
print("e =", e.to_text())
print("e*e == e:", e * e == e)
