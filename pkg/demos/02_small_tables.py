"""Exhaustive exact search in small regions for m = 2 and m = 3.

Every (N, k) listed has a2 >= 0 (for m = 2, 3 the expected sign is negative).
Run: python3 demos/02_small_tables.py
"""

import sys

from heckesign import SearchRegion, classify_region
from heckesign.search import write_csv

for m, n_hi, k_hi in ((2, 57, 26), (3, 300, 30)):
    result = classify_region(SearchRegion(m, 1, n_hi, 2, k_hi), "exact")
    s = result.summary()
    print(f"\nm={m}, N<={n_hi}, k<={k_hi}: {s['exceptional']} exceptional pairs, "
          f"{s['trivial']} with dim <= 1, {s['scanned']} points examined")
    nontrivial = [r for r in result.exceptional if r.dim >= 2]
    print("pairs with dim >= 2:")
    write_csv(nontrivial, sys.stdout)
