"""Hybrid search with a time budget and a resumable checkpoint.

Hybrid mode skips every point a certificate settles and evaluates the rest
exactly. Interrupting (or running out of budget) leaves a JSONL checkpoint;
rerunning with the same region picks up where it stopped.
Run: python3 demos/04_search_with_checkpoint.py
"""

import tempfile
from pathlib import Path

from heckesign import SearchRegion, classify_region

region = SearchRegion(3, 1, 20_000, 2, 120, frontier=None)
with tempfile.TemporaryDirectory() as tmp:
    ck = Path(tmp) / "m3.jsonl"
    first = classify_region(region, "hybrid", chunk_size=500, checkpoint=ck, max_seconds=0.5)
    print(f"first pass complete={first.complete}, checkpoint has "
          f"{len(ck.read_text().splitlines()) - 1} chunks")
    second = classify_region(region, "hybrid", chunk_size=500, checkpoint=ck)
    print(f"resumed pass complete={second.complete}")
    s = second.summary()
    print(f"{s['exceptional']} exceptional pairs; {s['scanned']} exact evaluations, "
          f"{s['certified_skips']} points settled by certificates")
    exact = classify_region(SearchRegion(3, 1, 2_000, 2, 60), "exact")
    hybrid = classify_region(SearchRegion(3, 1, 2_000, 2, 60), "hybrid")
    print(f"exact and hybrid agree on N<=2000, k<=60: {exact.exceptional == hybrid.exceptional}")
