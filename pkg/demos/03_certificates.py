"""Explicit sign certificates and the staircase of weight thresholds.

Run: python3 demos/03_certificates.py
"""

from heckesign import certify_point, first_certified_weight, staircase, theta_profile
from heckesign.certify import P9

# theta ratios shrink as N gains prime factors, which drives the certificates.
for N in (1, 43, 571, P9):
    p = theta_profile(N)
    print(f"N={N:<11} theta1^2={float(p.theta1_sq):.6g} theta2={float(p.theta2):.6g} "
          f"theta3={float(p.theta3):.6g}")

# A certificate compares the main term (k-1)/c with a rigorous error envelope.
print()
for m, N, k in ((3, 43, 346), (3, 43, 2), (2, 101, 40), (4, 2_700_001, 2)):
    c = certify_point(m, N, k)
    print(f"m={m} N={N} k={k}: {c.decision.value} "
          f"(main {float(c.main_term):.4g}, envelope {float(c.error_bound):.4g})")

# For each level the certificate kicks in at some weight and stays on.
print("\nfirst certified weight for m=3:")
for N in (1, 2, 5, 43, 1000, 10**6):
    print(f"  N={N:<8} k>={first_certified_weight(3, N)}")

print("\nstaircase for m=3 (N >= threshold and k >= weight are certified):")
for row in staircase(3):
    print(f"  N >= {row.n_threshold:>10,}  k >= {row.k_threshold}")
