#!/usr/bin/env python3
# Exact Jordan data of a unipotent Gram isometry: g = e^{2 pi i (S + N)},
# the nilpotent logarithm as a derivation, and the conjugation identity
# x0^N Y(u,x)v = Y(x0^N u, x) x0^N v with its log x0 and 1/PI bookkeeping.

from vertextwist.automorphism import (check_conjugation, check_derivation,
                                      check_homomorphism, jordan_decompose,
                                      nilpotent_power_coeffs)
from vertextwist.models import GRAM3, UNIPOTENT3, build_heisenberg
from vertextwist.automorphism import orthogonal_automorphism

heis3 = build_heisenberg(GRAM3)
unip = orthogonal_automorphism(heis3, UNIPOTENT3, name="unipotent")

a, b, c = (heis3.gen_vector(n) for n in "abc")
print("g a =", unip.apply(a))
print("g b =", unip.apply(b))
print("g c =", unip.apply(c))

# K = 2 pi i N_g is the stored primitive; N itself only ever multiplies logs
print("K b =", unip.K_apply(b))
print("K c =", unip.K_apply(c))

jd = jordan_decompose(unip, 2)
print("spectrum P_V =", jd.spectrum)
for w, blk in sorted(jd.blocks.items()):
    print("weight %s block: dim %d, nilpotency index %d"
          % (w, len(blk.basis), blk.nilpotency_index))

# x^N b expands into finitely many (log x)^k terms with PI^(-k) coefficients
for k, part in enumerate(nilpotent_power_coeffs(unip, b)):
    print("(log x)^%d coefficient of x^N b:" % k, part)

print("e^{2 pi i N} is an automorphism:",
      check_homomorphism(heis3, unip.unipotent_exp, 2, 3).ok)
print("derivation  [K, Y(u,x)]v = Y(Ku,x)v :",
      check_derivation(heis3, unip, 2, halfwidth=4).ok)
print("conjugation x0^N Y(u,x)v = Y(x0^N u,x) x0^N v :",
      check_conjugation(heis3, unip, 2, halfwidth=4).ok)
