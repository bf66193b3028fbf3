"""Eichler-Selberg trace of T_m on S_k(Gamma0(N)), trivial character.

Tr T_m = A1 - A2 - A3 + A4, with

* A1 the identity term (nonzero only for square m),
* A2 the elliptic sum over t^2 < 4m and the orders of discriminant (t^2-4m)/n^2,
* A3 the hyperbolic sum over divisors d of m and tau of N,
* A4 the weight-2 correction.

Every term is a rational with denominator dividing 12, so internally each
term is carried as an exact integer multiple of 1/12.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd, isqrt
from typing import Iterable, Iterator

from .classnum import weighted_class_number
from .congruence import mu
from .ntheory import (
    FactoredInteger,
    IntLike,
    LucasSequence,
    as_factored,
    crt,
    divisors,
    euler_phi,
    psi,
)

__all__ = [
    "TraceIntegralityError",
    "EllipticClass",
    "TraceBreakdown",
    "TraceKernel",
    "elliptic_table",
    "sigma_term",
    "term_a1",
    "term_a2",
    "term_a3",
    "term_a4",
    "trace",
    "trace_kernel",
    "check_weight",
]


class TraceIntegralityError(AssertionError):
    """The assembled trace came out non-integral: an implementation fault."""


def check_weight(k: int) -> int:
    if k < 2 or k % 2:
        raise ValueError(f"weight must be an even integer >= 2, got {k}")
    return k


@dataclass(frozen=True)
class EllipticClass:
    t: int
    n: int
    disc: int
    hw: Fraction


@lru_cache(maxsize=None)
def elliptic_table(m: int, two_sided: bool = False) -> tuple[EllipticClass, ...]:
    """The (t, n) pairs entering A2, with t >= 0 unless ``two_sided``."""
    if m < 1:
        raise ValueError("m must be positive")
    rows = []
    bound = isqrt(4 * m - 1)
    for t in range(-bound if two_sided else 0, bound + 1):
        d0 = t * t - 4 * m
        n = 1
        while n * n <= -d0:
            if d0 % (n * n) == 0 and (d0 // (n * n)) % 4 in (0, 1):
                D = d0 // (n * n)
                rows.append(EllipticClass(t, n, D, weighted_class_number(D)))
            n += 1
    return tuple(rows)


def sigma_term(level: IntLike, m: int, d: int) -> int:
    """Inner hyperbolic sum for the trivial character.

    Sum of phi(gcd(tau, N/tau)) over tau | N with gcd(tau, N/tau) dividing
    gcd(N, d - m/d) and y_tau a unit mod N, where y_tau = d (mod tau) and
    y_tau = m/d (mod N/tau).
    """
    f = as_factored(level)
    N = f.value
    if m % d:
        raise ValueError(f"{d} does not divide {m}")
    e = m // d
    h = gcd(N, d - e)
    total = 0
    for tau in divisors(f):
        rest = N // tau
        g = gcd(tau, rest)
        if h % g:
            continue
        y = crt(d % tau, tau, e % rest, rest)
        if gcd(y, N) == 1:
            total += euler_phi(g)
    return total


@dataclass(frozen=True)
class TraceBreakdown:
    m: int
    N: int
    k: int
    a1: Fraction
    a2: Fraction
    a3: Fraction
    a4: Fraction
    total: int


class _RunningPower:
    __slots__ = ("base", "exp", "value")

    def __init__(self, base: int) -> None:
        self.base, self.exp, self.value = base, 0, 1

    def at(self, exp: int) -> int:
        if exp < self.exp:
            self.exp, self.value = 0, 1
        if exp > self.exp:
            self.value *= self.base ** (exp - self.exp)
            self.exp = exp
        return self.value


class TraceKernel:
    """The k-independent part of Tr T_m(N, k), reusable across a weight sweep.

    Term values are stored scaled by 12 so that the k-dependence reduces to
    integer Lucas values and integer powers.
    """

    def __init__(self, m: int, level: IntLike) -> None:
        if m < 1:
            raise ValueError("m must be positive")
        f = as_factored(level)
        self.m = m
        self.level = f
        self.N = f.value
        self.psi = psi(f)
        r = isqrt(m)
        self.root = r if r * r == m and gcd(r, self.N) == 1 else None

        # t >= 0 only; the t and -t terms agree for even k, so t > 0 doubles
        sums: dict[int, Fraction] = {}
        for row in elliptic_table(m):
            sums[row.t] = sums.get(row.t, Fraction(0)) + row.hw * mu(row.t, row.n, m, f)
        self.elliptic: list[tuple[int, int]] = []
        for t, s in sums.items():
            w = s * (6 if t == 0 else 12)
            assert w.denominator == 1, (m, self.N, t, s)
            if w:
                self.elliptic.append((t, int(w)))

        hyper: dict[int, int] = {}
        for d in divisors(m):
            s = sigma_term(f, m, d)
            if s:
                base = min(d, m // d)
                hyper[base] = hyper.get(base, 0) + 6 * s
        self.hyperbolic = sorted(hyper.items())

        self.parabolic = 12 * sum(c for c in divisors(m) if gcd(self.N, m // c) == 1)

    def _scaled_terms(self, k, lucas, powers) -> tuple[int, int, int, int]:
        a1 = 0
        if self.root is not None:
            a1 = (k - 1) * self.psi * powers[self.root].at(k - 2)
        a2 = sum(w * lucas[t].advance_to(k - 1) for t, w in self.elliptic)
        a3 = sum(w * powers[b].at(k - 1) for b, w in self.hyperbolic)
        a4 = self.parabolic if k == 2 else 0
        return a1, a2, a3, a4

    def _state(self):
        lucas = {t: LucasSequence(t, self.m) for t, _ in self.elliptic}
        bases = {b for b, _ in self.hyperbolic}
        if self.root is not None:
            bases.add(self.root)
        return lucas, {b: _RunningPower(b) for b in bases}

    def _total(self, terms, k) -> int:
        a1, a2, a3, a4 = terms
        t12 = a1 - a2 - a3 + a4
        if t12 % 12:
            raise TraceIntegralityError(
                f"Tr T_{self.m}(N={self.N}, k={k}) = {Fraction(t12, 12)} is not an integer"
            )
        return t12 // 12

    def breakdown(self, k: int) -> TraceBreakdown:
        check_weight(k)
        terms = self._scaled_terms(k, *self._state())
        a1, a2, a3, a4 = (Fraction(x, 12) for x in terms)
        return TraceBreakdown(self.m, self.N, k, a1, a2, a3, a4, self._total(terms, k))

    def total(self, k: int) -> int:
        check_weight(k)
        return self._total(self._scaled_terms(k, *self._state()), k)

    def sweep(self, ks: Iterable[int]) -> Iterator[tuple[int, int]]:
        """Yield (k, Tr T_m(N, k)) for ascending even weights ``ks``."""
        lucas, powers = self._state()
        last = 0
        for k in ks:
            check_weight(k)
            if k < last:
                lucas, powers = self._state()
            last = k
            yield k, self._total(self._scaled_terms(k, lucas, powers), k)


@lru_cache(maxsize=4096)
def _cached_kernel(m: int, level: FactoredInteger) -> TraceKernel:
    return TraceKernel(m, level)


def trace_kernel(m: int, level: IntLike) -> TraceKernel:
    return _cached_kernel(m, as_factored(level))


def term_a1(m: int, level: IntLike, k: int) -> Fraction:
    return trace_kernel(m, level).breakdown(k).a1


def term_a2(m: int, level: IntLike, k: int, two_sided: bool = False) -> Fraction:
    """Elliptic term; ``two_sided`` sums t and -t separately with mu at both."""
    if not two_sided:
        return trace_kernel(m, level).breakdown(k).a2
    check_weight(k)
    f = as_factored(level)
    total = Fraction(0)
    for row in elliptic_table(m, two_sided=True):
        u = LucasSequence(row.t, m).advance_to(k - 1)
        total += u * row.hw * mu(row.t, row.n, m, f)
    return total / 2


def term_a3(m: int, level: IntLike, k: int) -> Fraction:
    return trace_kernel(m, level).breakdown(k).a3


def term_a4(m: int, level: IntLike, k: int) -> Fraction:
    return trace_kernel(m, level).breakdown(k).a4


def trace(m: int, level: IntLike, k: int) -> TraceBreakdown:
    """Full breakdown of Tr T_m on S_k(Gamma0(N)); gcd(N, m) > 1 is allowed."""
    return trace_kernel(m, level).breakdown(k)
