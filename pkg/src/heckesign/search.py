"""Region sweeps for pairs (N, k) where a2(m, N, k) misses its generic sign."""

from __future__ import annotations

import csv
import io
import json
import os
import time
from collections import deque
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Iterable, Optional, TextIO

import numpy as np

from .certify import SUPPORTED_M, StaircaseRow, first_certified_weight, staircase, weight_floor_estimate
from .checkpoint import Checkpoint
from .coeffs import Sign, SignReport, a2_sweep, is_exceptional
from .ntheory import as_factored, factor_range, omega_psi_range

__all__ = [
    "SearchRegion",
    "SearchResult",
    "classify_region",
    "residual_region",
    "write_csv",
    "read_csv",
    "write_jsonl",
    "CSV_HEADER",
]

CSV_HEADER = ("N", "k", "dim", "a2", "sign")


@dataclass(frozen=True)
class SearchRegion:
    """Levels n_lo..n_hi coprime to m, even weights k_lo..k_hi.

    With a frontier, (N, k) is dropped once some row has
    n_threshold <= N and k_threshold <= k.
    """

    m: int
    n_lo: int
    n_hi: int
    k_lo: int
    k_hi: int
    frontier: Optional[tuple[StaircaseRow, ...]] = None

    def __post_init__(self) -> None:
        if self.m < 1:
            raise ValueError("m must be positive")
        if not 1 <= self.n_lo <= self.n_hi:
            raise ValueError(f"empty level range [{self.n_lo}, {self.n_hi}]")
        if self.k_lo % 2 or self.k_hi % 2 or not 2 <= self.k_lo <= self.k_hi:
            raise ValueError(f"weight range must be even and nonempty, got [{self.k_lo}, {self.k_hi}]")

    def k_limit(self, N: int) -> int:
        """Largest weight scanned at level N (may fall below k_lo)."""
        top = self.k_hi
        if self.frontier:
            for row in self.frontier:
                if row.n_threshold <= N:
                    top = min(top, row.k_threshold - 2)
        return top

    def params(self) -> dict:
        return {
            "m": self.m,
            "n": [self.n_lo, self.n_hi],
            "k": [self.k_lo, self.k_hi],
            "frontier": [[r.n_threshold, r.k_threshold] for r in self.frontier] if self.frontier else None,
        }


def residual_region(m: int) -> SearchRegion:
    """The finite region left uncertified by the staircase for m."""
    rows = tuple(staircase(m))
    return SearchRegion(
        m,
        1,
        max(r.n_threshold for r in rows) - 1,
        2,
        max(r.k_threshold for r in rows) - 2,
        frontier=rows,
    )


@dataclass
class SearchResult:
    region: SearchRegion
    mode: str
    exceptional: list[SignReport] = field(default_factory=list)
    scanned_count: int = 0
    certified_skips: int = 0
    elapsed: float = 0.0
    complete: bool = True

    def summary(self) -> dict:
        trivial = sum(1 for r in self.exceptional if r.dim < 2)
        signs = {s.value: 0 for s in Sign}
        for r in self.exceptional:
            if r.dim >= 2:
                signs[r.sign.value] += 1
        return {
            "region": self.region.params(),
            "mode": self.mode,
            "exceptional": len(self.exceptional),
            "trivial": trivial,
            "nontrivial_by_sign": signs,
            "scanned": self.scanned_count,
            "certified_skips": self.certified_skips,
            "elapsed_seconds": round(self.elapsed, 3),
            "complete": self.complete,
        }


def _process_chunk(params: dict, mode: str, lo: int, hi: int) -> dict:
    """Classify levels lo..hi-1; the unit of work and of checkpointing."""
    frontier = params["frontier"]
    region = SearchRegion(
        params["m"], *params["n"], *params["k"],
        frontier=tuple(StaircaseRow(*r) for r in frontier) if frontier else None,
    )
    m = region.m
    levels = np.arange(lo, hi, dtype=np.int64)
    tops = np.full(hi - lo, region.k_hi, dtype=np.int64)
    for row in region.frontier or ():
        tops[levels >= row.n_threshold] = np.minimum(tops[levels >= row.n_threshold], row.k_threshold - 2)
    keep = (np.gcd(levels, m) == 1) & (tops >= region.k_lo)
    found, scanned, skipped = [], 0, 0
    if mode == "hybrid":
        # levels whose every weight is certified, decided in floats with a safety margin
        om, ps = omega_psi_range(lo, hi)
        est = weight_floor_estimate(m, levels, om, ps)
        clear = keep & (region.k_lo - 1 > est)
        skipped += int(((tops[clear] - region.k_lo) // 2 + 1).sum())
        keep &= ~clear
    idx = np.flatnonzero(keep)
    if len(idx) * 8 > hi - lo:
        facs = factor_range(lo, hi)
        todo = [(facs[i], int(tops[i])) for i in idx.tolist()]
    else:
        todo = [(as_factored(lo + i), int(tops[i])) for i in idx.tolist()]
    for f, top in todo:
        ks = range(region.k_lo, top + 1, 2)
        if mode == "hybrid":
            kc = first_certified_weight(m, f)
            evaluated = range(region.k_lo, min(top, kc - 2) + 1, 2)
            skipped += len(ks) - len(evaluated)
            ks = evaluated
        if not ks:
            continue
        scanned += len(ks)
        for rep in a2_sweep(m, f, ks):
            if is_exceptional(m, rep.a2):
                found.append([rep.N, rep.k, rep.dim, str(rep.a2)])
    return {"lo": lo, "hi": hi, "exceptional": found, "scanned": scanned, "skipped": skipped}


def _chunks(region: SearchRegion, chunk_size: int) -> list[tuple[int, int]]:
    return [
        (lo, min(lo + chunk_size, region.n_hi + 1))
        for lo in range(region.n_lo, region.n_hi + 1, chunk_size)
    ]


def _default_chunk(region: SearchRegion) -> int:
    span = region.n_hi - region.n_lo + 1
    return max(16, min(200_000, span // 64 or 1))


def classify_region(
    region: SearchRegion,
    mode: str = "exact",
    *,
    workers: int = 1,
    chunk_size: Optional[int] = None,
    checkpoint: Optional[str | os.PathLike] = None,
    max_seconds: Optional[float] = None,
    progress: Optional[Callable[[int, int], None]] = None,
) -> SearchResult:
    """Find every exceptional (N, k) in ``region``.

    ``exact`` evaluates a2 at each grid point; ``hybrid`` first skips the
    weights certify_point proves generic (m in {2, 3, 4} only).  Both give
    the same exceptional set, ordered by (N, k), for any worker count.
    """
    if mode not in ("exact", "hybrid"):
        raise ValueError(f"unknown mode {mode!r}")
    if mode == "hybrid" and region.m not in SUPPORTED_M:
        raise ValueError(f"hybrid mode needs m in {SUPPORTED_M}")
    chunk_size = chunk_size or _default_chunk(region)
    params = region.params()
    start = time.perf_counter()
    result = SearchResult(region, mode)
    todo = _chunks(region, chunk_size)
    results: dict[tuple[int, int], dict] = {}

    ckpt = None
    if checkpoint is not None:
        ckpt = Checkpoint(checkpoint, "search", {**params, "mode": mode, "chunk": chunk_size})
        for rec in ckpt:
            results[(rec["lo"], rec["hi"])] = rec
    pending = [c for c in todo if c not in results]

    def record(res: dict) -> None:
        results[(res["lo"], res["hi"])] = res
        if ckpt is not None:
            ckpt.append(res)
        if progress is not None:
            progress(len(results), len(todo))

    def out_of_time() -> bool:
        return max_seconds is not None and time.perf_counter() - start > max_seconds

    if workers > 1 and len(pending) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            queue: deque = deque()
            it = iter(pending)
            for c in it:
                queue.append(pool.submit(_process_chunk, params, mode, *c))
                if len(queue) >= 2 * workers:
                    break
            while queue:
                record(queue.popleft().result())
                if out_of_time():
                    result.complete = False
                    for fut in queue:
                        fut.cancel()
                    break
                nxt = next(it, None)
                if nxt is not None:
                    queue.append(pool.submit(_process_chunk, params, mode, *nxt))
    else:
        for c in pending:
            if out_of_time():
                result.complete = False
                break
            record(_process_chunk(params, mode, *c))

    m = region.m
    for c in todo:
        res = results.get(c)
        if res is None:
            result.complete = False
            continue
        result.scanned_count += res["scanned"]
        result.certified_skips += res["skipped"]
        for N, k, dim, val in res["exceptional"]:
            v = int(val)
            result.exceptional.append(SignReport(m, N, k, dim, v, Sign.of(v)))
    result.elapsed = time.perf_counter() - start
    return result


def _rows(reports: Iterable[SignReport]):
    for r in reports:
        yield (str(r.N), str(r.k), str(r.dim), str(r.a2), r.sign.value)


def write_csv(reports: Iterable[SignReport], fh: TextIO) -> None:
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(CSV_HEADER)
    w.writerows(_rows(reports))


def read_csv(fh: TextIO | str, m: int) -> list[SignReport]:
    """Parse a search CSV back into SignReports for operator index ``m``."""
    if isinstance(fh, str):
        fh = io.StringIO(fh)
    reader = csv.reader(fh)
    header = next(reader)
    if tuple(header) != CSV_HEADER:
        raise ValueError(f"unexpected CSV header {header}")
    out = []
    for row in reader:
        N, k, dim, a2v, sign = row
        out.append(SignReport(m, int(N), int(k), int(dim), int(a2v), Sign(sign)))
    return out


def write_jsonl(reports: Iterable[SignReport], fh: TextIO) -> None:
    for r in reports:
        d = r.as_dict()
        d["a2"] = str(d["a2"])
        fh.write(json.dumps(d) + "\n")
