"""Factored integers and the multiplicative functions used by the trace formula."""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd, isqrt
from typing import Iterator, Union

import numpy as np

__all__ = [
    "FactoredInteger",
    "IntLike",
    "as_factored",
    "factorize",
    "factor_range",
    "omega_psi_range",
    "psi",
    "omega",
    "euler_phi",
    "sigma1",
    "divisors",
    "crt",
    "lucas_u",
    "LucasSequence",
    "primes_up_to",
    "is_square",
]

# Trial division by this table fully factors every n < _PRIME_LIMIT**2.
_PRIME_LIMIT = 1 << 16


def primes_up_to(limit: int) -> np.ndarray:
    """All primes p <= limit, ascending, as an int64 array."""
    if limit < 2:
        return np.zeros(0, dtype=np.int64)
    sieve = np.ones(limit + 1, dtype=bool)
    sieve[:2] = False
    for p in range(2, isqrt(limit) + 1):
        if sieve[p]:
            sieve[p * p :: p] = False
    return np.flatnonzero(sieve).astype(np.int64)


_PRIMES: tuple[int, ...] = tuple(primes_up_to(_PRIME_LIMIT).tolist())


@dataclass(frozen=True)
class FactoredInteger:
    """A positive integer together with its prime factorization.

    ``factors`` holds ``(prime, exponent)`` pairs with strictly increasing
    primes.
    """

    value: int
    factors: tuple[tuple[int, int], ...]

    def __post_init__(self) -> None:
        if self.value < 1:
            raise ValueError(f"FactoredInteger needs a positive value, got {self.value}")
        prod = 1
        last = 1
        for p, e in self.factors:
            if p <= last or e < 1:
                raise ValueError(f"malformed factorization {self.factors!r}")
            last = p
            prod *= p**e
        if prod != self.value:
            raise ValueError(f"factors {self.factors!r} do not multiply to {self.value}")

    def __int__(self) -> int:
        return self.value

    @property
    def primes(self) -> tuple[int, ...]:
        return tuple(p for p, _ in self.factors)

    def valuation(self, p: int) -> int:
        for q, e in self.factors:
            if q == p:
                return e
        return 0

    def __str__(self) -> str:
        if not self.factors:
            return "1"
        return " * ".join(f"{p}^{e}" if e > 1 else str(p) for p, e in self.factors)


IntLike = Union[int, FactoredInteger]


def factorize(n: int) -> FactoredInteger:
    """Factor ``n`` by trial division against the precomputed prime table."""
    n = int(n)
    if n < 1:
        raise ValueError(f"cannot factor {n}; need n >= 1")
    factors = []
    rest = n
    for p in _PRIMES:
        if p * p > rest:
            break
        if rest % p == 0:
            e = 0
            while rest % p == 0:
                rest //= p
                e += 1
            factors.append((p, e))
    else:
        if rest > 1 and _PRIMES[-1] ** 2 < rest:
            raise ValueError(f"{n} is beyond the trial-division range")
    if rest > 1:
        factors.append((rest, 1))
    return FactoredInteger(n, tuple(factors))


def as_factored(n: IntLike) -> FactoredInteger:
    if isinstance(n, FactoredInteger):
        return n
    return factorize(n)


def factor_range(lo: int, hi: int) -> list[FactoredInteger]:
    """Factor every integer in ``[lo, hi)`` with one segmented sieve pass."""
    if lo < 1 or hi < lo:
        raise ValueError(f"bad range [{lo}, {hi})")
    size = hi - lo
    if size == 0:
        return []
    rem = np.arange(lo, hi, dtype=np.int64)
    facs: list[list[tuple[int, int]]] = [[] for _ in range(size)]
    for p in primes_up_to(isqrt(hi - 1)).tolist():
        start = (-lo) % p
        if start >= size:
            continue
        idx = np.arange(start, size, p)
        sub = rem[idx]
        exps = np.zeros(len(idx), dtype=np.int64)
        mask = np.ones(len(idx), dtype=bool)
        while mask.any():
            mask = sub % p == 0
            exps += mask
            sub = np.where(mask, sub // p, sub)
        rem[idx] = sub
        for i, e in zip(idx.tolist(), exps.tolist()):
            facs[i].append((p, e))
    for i in np.flatnonzero(rem > 1).tolist():
        facs[i].append((int(rem[i]), 1))
    return [FactoredInteger(lo + i, tuple(f)) for i, f in enumerate(facs)]


def omega_psi_range(lo: int, hi: int) -> tuple[np.ndarray, np.ndarray]:
    """Vectorized ``omega(n)`` and ``psi(n)`` for n in ``[lo, hi)``.

    Both arrays are int64; psi(n) < 2**63 holds comfortably for n < 10**12.
    """
    if lo < 1 or hi < lo:
        raise ValueError(f"bad range [{lo}, {hi})")
    size = hi - lo
    rem = np.arange(lo, hi, dtype=np.int64)
    psi_arr = rem.copy()
    om = np.zeros(size, dtype=np.int64)
    for p in primes_up_to(isqrt(max(hi - 1, 1))).tolist():
        start = (-lo) % p
        if start >= size:
            continue
        sl = slice(start, None, p)
        om[sl] += 1
        psi_arr[sl] = psi_arr[sl] // p * (p + 1)
        pk = p
        while pk < hi:
            s = (-lo) % pk
            if s >= size:
                break
            rem[s::pk] //= p
            pk *= p
    big = rem > 1
    om[big] += 1
    psi_arr[big] = psi_arr[big] // rem[big] * (rem[big] + 1)
    return om, psi_arr


def psi(n: IntLike) -> int:
    """Index of Gamma0(n) in SL2(Z): n * prod_{p | n} (1 + 1/p)."""
    f = as_factored(n)
    out = f.value
    for p, _ in f.factors:
        out = out // p * (p + 1)
    return out


def omega(n: IntLike) -> int:
    return len(as_factored(n).factors)


def euler_phi(n: IntLike) -> int:
    f = as_factored(n)
    out = f.value
    for p, _ in f.factors:
        out = out // p * (p - 1)
    return out


def sigma1(n: IntLike) -> int:
    out = 1
    for p, e in as_factored(n).factors:
        out *= (p ** (e + 1) - 1) // (p - 1)
    return out


def divisors(n: IntLike) -> list[int]:
    """Ascending list of the positive divisors of n."""
    divs = [1]
    for p, e in as_factored(n).factors:
        divs = [d * p**i for d in divs for i in range(e + 1)]
    return sorted(divs)


def crt(residue_a: int, modulus_a: int, residue_b: int, modulus_b: int) -> int:
    """The residue modulo lcm(modulus_a, modulus_b) meeting both congruences.

    Raises ValueError when the congruences are incompatible.
    """
    if modulus_a < 1 or modulus_b < 1:
        raise ValueError("moduli must be positive")
    g = gcd(modulus_a, modulus_b)
    diff = residue_b - residue_a
    if diff % g:
        raise ValueError(
            f"incompatible congruences {residue_a} mod {modulus_a}, {residue_b} mod {modulus_b}"
        )
    ma, mb = modulus_a // g, modulus_b // g
    lcm = modulus_a * mb
    # x = residue_a + modulus_a * s with modulus_a * s = diff (mod modulus_b)
    s = (diff // g) * pow(ma, -1, mb) % mb if mb > 1 else 0
    return (residue_a + modulus_a * s) % lcm


def is_square(n: int) -> bool:
    return n >= 0 and isqrt(n) ** 2 == n


def lucas_u(index: int, t: int, m: int) -> int:
    """U_index(t, m) with U_0 = 0, U_1 = 1, U_j = t U_{j-1} - m U_{j-2}."""
    if index < 0:
        raise ValueError("index must be nonnegative")
    prev, cur = 0, 1
    if index == 0:
        return 0
    for _ in range(index - 1):
        prev, cur = cur, t * cur - m * prev
    return cur


class LucasSequence:
    """Incremental U_j(t, m); ``advance_to`` only ever steps forward."""

    __slots__ = ("t", "m", "index", "prev", "value")

    def __init__(self, t: int, m: int) -> None:
        self.t = t
        self.m = m
        self.index = 1
        self.prev = 0
        self.value = 1

    def step(self) -> int:
        self.prev, self.value = self.value, self.t * self.value - self.m * self.prev
        self.index += 1
        return self.value

    def advance_to(self, index: int) -> int:
        if index < self.index:
            if index == 0:
                return 0
            raise ValueError(f"cannot rewind from U_{self.index} to U_{index}")
        while self.index < index:
            self.step()
        return self.value

    def __iter__(self) -> Iterator[int]:
        yield self.value
        while True:
            yield self.step()
