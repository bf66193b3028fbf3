"""A tour of the trace formula: its four pieces, and two independent checks.

Run: python3 demos/01_trace_tour.py
"""

from heckesign import a2, dimension, trace
from heckesign.oracles import delta_coefficients, level_one_a2

# The trace of T_m splits into identity, elliptic, hyperbolic and parabolic parts.
# Only their signed sum has to be an integer.
b = trace(3, 7, 4)
print(f"Tr T_3 on S_4(Gamma0(7)) = {b.total}")
for name, value in (("identity", b.a1), ("elliptic", b.a2), ("hyperbolic", b.a3), ("parabolic", b.a4)):
    print(f"  {name:<10} {value}")

# Level 1, weight 12 is spanned by Delta, so Tr T_m must equal tau(m).
tau = delta_coefficients(10)
print("\nm   Tr T_m(1,12)   tau(m)")
for m in range(1, 11):
    print(f"{m:<3} {trace(m, 1, 12).total:>12}   {tau[m]:>8}")

# Tr T_1 is the dimension of the cusp space.
print("\ndim S_k(Gamma0(N)) for N = 11, 23, 37 and k = 2, 4, 6:")
for N in (11, 23, 37):
    print(f"  N={N:<3}", [dimension(N, k) for k in (2, 4, 6)])

# The second coefficient of the Hecke polynomial, checked against an
# explicit Hecke matrix built from q-expansions at level 1.
print("\nm  k   a2 (trace formula)   a2 (Hecke matrix)")
for m, k in ((2, 24), (3, 24), (2, 36)):
    print(f"{m}  {k}  {a2(m, 1, k):>20}   {level_one_a2(m, k):>18}")
