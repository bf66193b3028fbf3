"""Explicit sign certificates for a2(m, N, k), m in {2, 3, 4}.

Everything reduces to the decay functions

    theta1(N) = 2^w sqrt(N) / psi(N),  theta2(N) = 4^w / psi(N),  theta3(N) = 2^w / psi(N)

with w = omega(N).  For m = 2, 3,

    a2 = psi(N) m^k / 2 * (-(k-1)/c + E(N, k)),   c = 16, 27,

and for m = 4,

    a2 >= (k-1) 4^k psi(N)^2 / 2 * ((k-1)/2304 - E(N, k)),

where |E| (respectively E) is bounded by a k-independent envelope in the
thetas.  All comparisons are done on Fractions; every irrational quantity
is replaced by a rational upper bound so the envelope never shrinks.
"""

from __future__ import annotations

import enum
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd, isqrt
from typing import Optional, Sequence

import numpy as np

from .checkpoint import Checkpoint
from .ntheory import IntLike, as_factored, omega_psi_range, psi

__all__ = [
    "ThetaProfile",
    "theta_profile",
    "sqrt_upper",
    "le_plus_sqrt",
    "SQRT2_UPPER",
    "SQRT3_UPPER",
    "THETA_TABLE",
    "ThetaRow",
    "ThetaScanReport",
    "theta_table_verify",
    "verify_theta_table",
    "analytic_tail_check",
    "P9",
    "error_envelope",
    "Decision",
    "Certificate",
    "certify_point",
    "first_certified_weight",
    "weight_floor_estimate",
    "StaircaseRow",
    "staircase",
    "verify_staircase",
    "SUPPORTED_M",
]

SUPPORTED_M = (2, 3, 4)
_DIGITS = 15


def sqrt_upper(x: Fraction | int, digits: int = 20) -> Fraction:
    """A rational r >= sqrt(x) with r - sqrt(x) <= 10^-digits / denominator(x)."""
    x = Fraction(x)
    if x < 0:
        raise ValueError("negative radicand")
    p, q = x.numerator, x.denominator
    scale = 10**digits
    root = isqrt(p * q * scale * scale)
    if root * root != p * q * scale * scale:
        root += 1
    return Fraction(root, q * scale)


SQRT2_UPPER = sqrt_upper(2, 30)
SQRT3_UPPER = sqrt_upper(3, 30)


def le_plus_sqrt(lhs: Fraction, const: Fraction, coef: Fraction, radicand: Fraction) -> bool:
    """Exactly decide lhs <= const + coef * sqrt(radicand), for coef >= 0."""
    if coef < 0 or radicand < 0:
        raise ValueError("need coef >= 0 and radicand >= 0")
    gap = Fraction(lhs) - Fraction(const)
    if gap <= 0:
        return True
    return gap * gap <= Fraction(coef) ** 2 * Fraction(radicand)


@dataclass(frozen=True)
class ThetaProfile:
    N: object  # FactoredInteger
    theta1_sq: Fraction
    theta2: Fraction
    theta3: Fraction

    def theta1_upper(self, digits: int = _DIGITS) -> Fraction:
        """Rational r with r >= theta1 and r - theta1 < 10^-digits."""
        n = self.N.value
        w = len(self.N.factors)
        scale = 10**digits
        root = isqrt(n * scale * scale)
        if root * root != n * scale * scale:
            root += 1
        return Fraction((1 << w) * root, scale * psi(self.N))

    def as_dict(self) -> dict:
        return {
            "N": self.N.value,
            "theta1_sq": str(self.theta1_sq),
            "theta2": str(self.theta2),
            "theta3": str(self.theta3),
            "theta1_approx": float(self.theta1_sq) ** 0.5,
            "theta2_approx": float(self.theta2),
            "theta3_approx": float(self.theta3),
        }


def theta_profile(N: IntLike) -> ThetaProfile:
    f = as_factored(N)
    w = len(f.factors)
    ps = psi(f)
    return ThetaProfile(
        f,
        Fraction(4**w * f.value, ps * ps),
        Fraction(4**w, ps),
        Fraction(2**w, ps),
    )


@dataclass(frozen=True)
class ThetaRow:
    threshold: int
    theta1: Fraction
    theta2: Fraction
    theta3: Fraction

    @property
    def bounds(self) -> tuple[Fraction, Fraction, Fraction]:
        return (self.theta1, self.theta2, self.theta3)


def _row(threshold: int, b1: str, b2: str, b3: str) -> ThetaRow:
    return ThetaRow(threshold, Fraction(b1), Fraction(b2), Fraction(b3))


# upper bounds on theta_i(N) valid for all N >= threshold
THETA_TABLE: tuple[ThetaRow, ...] = (
    _row(1, "1.00", "1.34", "1.00"),
    _row(43, "0.465", "0.445", "0.0556"),
    _row(571, "0.257", "0.149", "0.00926"),
    _row(8_800, "0.133", "0.0424", "0.00133"),
    _row(150_000, "0.0607", "0.00941", "0.000147"),
    _row(2_700_000, "0.0265", "0.00189", "0.000015"),
    _row(63_000_000, "0.0106", "0.000314", "0.000015"),
)

# product of the first nine primes; the extremal level once omega(N) >= 9
P9 = 2 * 3 * 5 * 7 * 11 * 13 * 17 * 19 * 23
TAIL_START = 584_000_000
TAIL_BOUNDS = (Fraction("0.0106"), Fraction("0.000314"), Fraction("0.000015"))


def _row_for(threshold: int) -> ThetaRow:
    for row in THETA_TABLE:
        if row.threshold == threshold:
            return row
    raise KeyError(f"no theta table row at N >= {threshold}")


@dataclass
class ThetaScanReport:
    threshold: int
    cap: int
    claimed: tuple[Fraction, Fraction, Fraction]
    passed: bool = True
    complete: bool = True
    scanned_to: int = 0
    max_theta1_sq: Fraction = Fraction(0)
    max_theta2: Fraction = Fraction(0)
    max_theta3: Fraction = Fraction(0)
    argmax: tuple[int, int, int] = (0, 0, 0)
    violations: list[tuple[int, int]] = field(default_factory=list)  # (theta index, N)
    elapsed_seconds: float = 0.0

    def as_dict(self) -> dict:
        return {
            "threshold": self.threshold,
            "cap": self.cap,
            "claimed": [str(c) for c in self.claimed],
            "passed": self.passed,
            "complete": self.complete,
            "scanned_to": self.scanned_to,
            "max_theta1": float(self.max_theta1_sq) ** 0.5,
            "max_theta2": float(self.max_theta2),
            "max_theta3": float(self.max_theta3),
            "argmax": list(self.argmax),
            "violations": [list(v) for v in self.violations[:20]],
            "elapsed_seconds": round(self.elapsed_seconds, 3),
        }


def _scan_chunk(lo: int, hi: int, claimed: tuple[Fraction, Fraction, Fraction]) -> dict:
    om, ps = omega_psi_range(lo, hi)
    n = np.arange(lo, hi, dtype=np.float64)
    two_w = np.ldexp(1.0, om.astype(np.int32))
    psf = ps.astype(np.float64)
    values = (two_w * two_w * n / (psf * psf), two_w * two_w / psf, two_w / psf)
    targets = (claimed[0] ** 2, claimed[1], claimed[2])

    def exact(i: int, idx: int) -> Fraction:
        w, p, N = int(om[idx]), int(ps[idx]), lo + idx
        if i == 0:
            return Fraction(4**w * N, p * p)
        if i == 1:
            return Fraction(4**w, p)
        return Fraction(2**w, p)

    out = {"lo": lo, "hi": hi, "max": [], "argmax": [], "violations": []}
    for i in range(3):
        vals = values[i]
        # float error is ~1e-15 relative; anything within 1e-9 is re-checked exactly
        suspects = np.flatnonzero(vals >= float(targets[i]) * (1 - 1e-9))
        for idx in suspects.tolist():
            if exact(i, idx) > targets[i]:
                out["violations"].append([i, lo + idx])
        j = int(np.argmax(vals))
        best = exact(i, j)
        near = np.flatnonzero(vals >= vals[j] * (1 - 1e-12))
        for idx in near.tolist():
            cand = exact(i, idx)
            if cand > best:
                best, j = cand, idx
        out["max"].append([best.numerator, best.denominator])
        out["argmax"].append(lo + j)
    return out


def _merge(report: ThetaScanReport, chunk: dict) -> None:
    maxes = [Fraction(a, b) for a, b in chunk["max"]]
    current = [report.max_theta1_sq, report.max_theta2, report.max_theta3]
    argmax = list(report.argmax)
    for i in range(3):
        if maxes[i] > current[i]:
            current[i], argmax[i] = maxes[i], chunk["argmax"][i]
    report.max_theta1_sq, report.max_theta2, report.max_theta3 = current
    report.argmax = tuple(argmax)
    report.violations.extend(tuple(v) for v in chunk["violations"])
    report.scanned_to = max(report.scanned_to, chunk["hi"] - 1)


def theta_table_verify(
    threshold: int,
    cap: int,
    claimed: Sequence[Fraction | str | float],
    *,
    chunk_size: int = 1 << 20,
    workers: int = 1,
    max_seconds: Optional[float] = None,
    checkpoint: Optional[str] = None,
) -> ThetaScanReport:
    """Scan N in [threshold, cap] and check each theta_i(N) <= claimed[i] exactly.

    Decimal bounds should be passed as strings so they convert exactly.
    theta1 is compared through squares.  A run cut short by ``max_seconds``
    comes back with ``complete=False``; with ``checkpoint`` set, finished
    chunks are recorded and skipped on the next call.
    """
    if cap > TAIL_START:
        raise ValueError(f"scan cap {cap} beyond {TAIL_START}; the analytic tail covers the rest")
    claimed_f = tuple(Fraction(str(c)) if isinstance(c, float) else Fraction(c) for c in claimed)
    if len(claimed_f) != 3:
        raise ValueError("need three claimed bounds")
    report = ThetaScanReport(threshold, cap, claimed_f)
    start = time.perf_counter()
    chunks = [(lo, min(lo + chunk_size, cap + 1)) for lo in range(threshold, cap + 1, chunk_size)]
    ckpt = None
    if checkpoint:
        ckpt = Checkpoint(
            checkpoint,
            "theta-scan",
            {"threshold": threshold, "cap": cap, "claimed": [str(c) for c in claimed_f],
             "chunk": chunk_size},
        )
        for rec in ckpt:
            _merge(report, rec)
        finished = ckpt.done()
        chunks = [c for c in chunks if c not in finished]

    def consume(result: dict) -> None:
        _merge(report, result)
        if ckpt is not None:
            ckpt.append(result)

    if workers > 1 and len(chunks) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            futures = [pool.submit(_scan_chunk, lo, hi, claimed_f) for lo, hi in chunks]
            for fut in futures:
                if max_seconds is not None and time.perf_counter() - start > max_seconds:
                    report.complete = False
                    for f in futures:
                        f.cancel()
                    break
                consume(fut.result())
    else:
        for lo, hi in chunks:
            if max_seconds is not None and time.perf_counter() - start > max_seconds:
                report.complete = False
                break
            consume(_scan_chunk(lo, hi, claimed_f))
    report.violations.sort()
    report.passed = not report.violations
    report.elapsed_seconds = time.perf_counter() - start
    return report


def analytic_tail_check() -> dict:
    """Bounds covering every N >= 584,000,000 without scanning.

    omega(N) >= 9: theta_i(N) <= theta_i(P9).  omega(N) <= 8: theta1 <= 2^8/sqrt(N),
    theta2 <= 2^16/N, theta3 <= 2^8/N, evaluated at N = 584,000,000.
    """
    prof = theta_profile(P9)
    b1, b2, b3 = TAIL_BOUNDS
    small_omega_theta1_sq = Fraction(2**16, TAIL_START)
    checks = {
        "theta1(P9)": prof.theta1_sq <= b1 * b1,
        "theta2(P9)": prof.theta2 <= b2,
        "theta3(P9)": prof.theta3 <= b3,
        "theta1(omega<=8)": small_omega_theta1_sq <= b1 * b1,
        "theta2(omega<=8)": Fraction(2**16, TAIL_START) <= b2,
        "theta3(omega<=8)": Fraction(2**8, TAIL_START) <= b3,
    }
    return {
        "passed": all(checks.values()),
        "checks": checks,
        "theta_P9": (float(prof.theta1_sq) ** 0.5, float(prof.theta2), float(prof.theta3)),
        "omega_le_8_at_tail": (
            float(small_omega_theta1_sq) ** 0.5,
            2**16 / TAIL_START,
            2**8 / TAIL_START,
        ),
    }


def verify_theta_table(cap: int = 10**6, *, window: Optional[int] = None, **kwargs) -> list[ThetaScanReport]:
    """Prefix-scan every table row over [threshold, cap].

    Rows whose threshold exceeds ``cap`` are scanned over
    [threshold, threshold + window) instead when ``window`` is given.
    """
    reports = []
    for row in THETA_TABLE:
        hi = cap
        if row.threshold > cap:
            if not window:
                reports.append(ThetaScanReport(row.threshold, cap, row.bounds, scanned_to=0))
                continue
            hi = min(row.threshold + window - 1, TAIL_START)
        reports.append(theta_table_verify(row.threshold, hi, row.bounds, **kwargs))
    return reports


def _envelope_from_thetas(m: int, t1: Fraction, t2: Fraction, t3: Fraction, N: int) -> Fraction:
    if m == 3:
        return (448 + 160 * SQRT3_UPPER) / 27 * t2 + Fraction(205, 18) * t3 + t1 / 3
    if m == 2:
        return (41 + 24 * SQRT2_UPPER) / 4 * t2 + Fraction(28, 3) * t3 + t1 / 2
    if m == 4:
        return Fraction(7, 24) * t3 + t1 / 96 + Fraction(1729, 64 * N)
    raise ValueError(f"certificates exist only for m in {SUPPORTED_M}, got m={m}")


def _check_m_n(m: int, f) -> None:
    if m not in SUPPORTED_M:
        raise ValueError(f"certificates exist only for m in {SUPPORTED_M}, got m={m}")
    if gcd(f.value, m) != 1:
        raise ValueError(f"certificates need gcd(N, m) = 1; got N={f.value}, m={m}")


def error_envelope(m: int, N: IntLike) -> Fraction:
    """Rational upper bound on the k-independent error term E(N, k)."""
    f = as_factored(N)
    _check_m_n(m, f)
    prof = theta_profile(f)
    return _envelope_from_thetas(m, prof.theta1_upper(), prof.theta2, prof.theta3, f.value)


class Decision(enum.Enum):
    CERTIFIED_NEGATIVE = "CertifiedNegative"
    CERTIFIED_POSITIVE = "CertifiedPositive"
    UNDECIDED = "Undecided"

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class Certificate:
    m: int
    N: int
    k: int
    decision: Decision
    main_term: Fraction
    error_bound: Fraction

    @property
    def certified(self) -> bool:
        return self.decision is not Decision.UNDECIDED

    def as_dict(self) -> dict:
        return {
            "m": self.m,
            "N": self.N,
            "k": self.k,
            "decision": self.decision.value,
            "main_term": str(self.main_term),
            "error_bound": str(self.error_bound),
        }


_MAIN_DENOM = {2: 16, 3: 27, 4: 2304}


def _side_condition(k: int, prof: ThetaProfile, t1_up: Fraction) -> bool:
    # (k-1)/48 >= 7 theta3 + theta1/4, needed before squaring Tr T_4
    return Fraction(k - 1, 48) >= 7 * prof.theta3 + t1_up / 4


def certify_point(m: int, N: IntLike, k: int) -> Certificate:
    """Certify the generic sign of a2(m, N, k) from the theta profile of N, or give up."""
    f = as_factored(N)
    _check_m_n(m, f)
    if k < 2 or k % 2:
        raise ValueError(f"weight must be an even integer >= 2, got {k}")
    prof = theta_profile(f)
    t1_up = prof.theta1_upper()
    env = _envelope_from_thetas(m, t1_up, prof.theta2, prof.theta3, f.value)
    main = Fraction(k - 1, _MAIN_DENOM[m])
    decision = Decision.UNDECIDED
    if m == 4:
        if _side_condition(k, prof, t1_up) and main > env:
            decision = Decision.CERTIFIED_POSITIVE
    elif main > env:
        decision = Decision.CERTIFIED_NEGATIVE
    return Certificate(m, f.value, k, decision, main, env)


def first_certified_weight(m: int, N: IntLike) -> int:
    """Smallest even k >= 2 that certify_point certifies at level N.

    The envelope does not depend on k and the main term and side condition
    grow with k, so every larger even weight is certified as well.
    """
    f = as_factored(N)
    _check_m_n(m, f)
    prof = theta_profile(f)
    t1_up = prof.theta1_upper()
    env = _envelope_from_thetas(m, t1_up, prof.theta2, prof.theta3, f.value)
    # smallest integer k - 1 strictly above denom * env
    scaled = env * _MAIN_DENOM[m]
    k = scaled.numerator // scaled.denominator + 2
    if m == 4:
        side = 48 * (7 * prof.theta3 + t1_up / 4)
        k = max(k, -(-side.numerator // side.denominator) + 1)
    k = max(k, 2)
    return k + (k % 2)


def weight_floor_estimate(m: int, N: np.ndarray, omega: np.ndarray, psi_values: np.ndarray) -> np.ndarray:
    """Float upper estimates of the k - 1 that first_certified_weight must exceed.

    Inflated by a relative 1e-9 so that ``k - 1 > estimate`` implies an exact
    certificate at k; callers use it only to skip exact work.
    """
    if m not in SUPPORTED_M:
        raise ValueError(f"certificates exist only for m in {SUPPORTED_M}, got m={m}")
    n = N.astype(np.float64)
    ps = psi_values.astype(np.float64)
    two = np.ldexp(1.0, omega.astype(np.int64))
    t1 = two * np.sqrt(n) / ps
    t2 = two * two / ps
    t3 = two / ps
    if m == 3:
        env = float((448 + 160 * SQRT3_UPPER) / 27) * t2 + 205 / 18 * t3 + t1 / 3
    elif m == 2:
        env = float((41 + 24 * SQRT2_UPPER) / 4) * t2 + 28 / 3 * t3 + t1 / 2
    else:
        env = 7 / 24 * t3 + t1 / 96 + 1729 / 64 / n
    bound = float(_MAIN_DENOM[m]) * env
    if m == 4:
        bound = np.maximum(bound, 48.0 * (7 * t3 + t1 / 4))
    return bound * (1 + 1e-9) + 1e-12


@dataclass(frozen=True)
class StaircaseRow:
    n_threshold: int
    k_threshold: int


_STAIRCASES: dict[int, tuple[tuple[int, int], ...]] = {
    3: ((63_000_000, 2), (2_700_000, 4), (150_000, 10), (8_800, 34), (571, 116), (43, 346), (1, 1290)),
    2: ((2_700_000, 2), (150_000, 6), (8_800, 16), (571, 50), (43, 148), (1, 562)),
    4: ((2_700_000, 2), (150_000, 4), (8_800, 14), (571, 124), (43, 1498), (1, 62942)),
}


def staircase(m: int) -> list[StaircaseRow]:
    """Region certificates: a2 has its generic sign for N >= n_threshold and k >= k_threshold."""
    if m not in _STAIRCASES:
        raise ValueError(f"no staircase for m={m}")
    return [StaircaseRow(n, k) for n, k in _STAIRCASES[m]]


def _row_certifies(m: int, row: ThetaRow, k: int) -> bool:
    env = _envelope_from_thetas(m, row.theta1, row.theta2, row.theta3, row.threshold)
    main = Fraction(k - 1, _MAIN_DENOM[m])
    if m == 4 and Fraction(k - 1, 48) < 7 * row.theta3 + row.theta1 / 4:
        return False
    return main > env


def verify_staircase(m: int, scan_cap: Optional[int] = None, **scan_kwargs) -> dict:
    """Re-derive each staircase row from the theta table.

    Status per row: "tight" when the row's k threshold is the least even
    weight the table bounds certify, "certified" when it is merely
    sufficient, "fails" otherwise.  With ``scan_cap``, the theta-table row
    is also prefix-scanned up to the cap and "+scan-failed" is appended
    when that scan finds a violation.
    """
    start = time.perf_counter()
    rows = []
    for st in staircase(m):
        trow = _row_for(st.n_threshold)
        ok = _row_certifies(m, trow, st.k_threshold)
        tight = st.k_threshold == 2 or not _row_certifies(m, trow, st.k_threshold - 2)
        status = "fails" if not ok else ("tight" if tight else "certified")
        if scan_cap is not None and st.n_threshold <= scan_cap:
            rep = theta_table_verify(st.n_threshold, scan_cap, trow.bounds, **scan_kwargs)
            if not rep.passed:
                status += "+scan-failed"
        rows.append({"n_threshold": st.n_threshold, "k_threshold": st.k_threshold, "status": status})
    return {
        "m": m,
        "rows": rows,
        "scan_cap": scan_cap,
        "elapsed_seconds": round(time.perf_counter() - start, 3),
    }
