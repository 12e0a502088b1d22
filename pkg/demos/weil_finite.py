"""
A small Weil representation
===========================

We build the Weil representation of U_2(F_3) on functions on F_9, search the
finite set of normalizations for one that is a homomorphism, and look at the
vectors fixed by the Borel subgroup.
"""

from uhecke import weilrep

model = weilrep.calibrate_finite_weil(3)
cal = model.calibration
print("group order:", cal["group_order"])
for c in cal["candidates"]:
    print(f"  chi={c['chi']:9s} gamma={c['gamma']:>2s}  homomorphism={c['ok']}")
print("chosen:", cal["chi"], cal["gamma"])

inv = weilrep.borel_invariants(model)
print("Borel-fixed dimension:", inv["dimension"])
print("spanned by delta_0:", inv["spanned_by_delta0"])
print("eigenvalue of the big cell:", inv["eigenvalue"])

# the lattice side: Fourier transform on the window p^-1 L / p L
lemma = weilrep.verify_generator_lemma(3, 1, "-")
print("window size:", lemma["window_size"], "subchecks:", lemma["subchecks"])
