"""Roots of x^2 - t x + m modulo arbitrary moduli, and the elliptic weight mu."""

from __future__ import annotations

from functools import lru_cache
from math import gcd
from typing import Optional

from .ntheory import IntLike, as_factored, crt

__all__ = [
    "sqrt_mod_prime",
    "roots_mod_prime_power",
    "roots",
    "unit_lift_count",
    "mu",
]


def sqrt_mod_prime(a: int, p: int) -> Optional[tuple[int, ...]]:
    """Square roots of ``a`` modulo an odd prime ``p`` (Tonelli-Shanks).

    Returns the sorted roots, ``(0,)`` for a = 0, or None for a non-residue.
    """
    a %= p
    if a == 0:
        return (0,)
    if pow(a, (p - 1) // 2, p) != 1:
        return None
    q, s = p - 1, 0
    while q % 2 == 0:
        q //= 2
        s += 1
    if s == 1:
        r = pow(a, (p + 1) // 4, p)
    else:
        z = 2
        while pow(z, (p - 1) // 2, p) != p - 1:
            z += 1
        c = pow(z, q, p)
        r = pow(a, (q + 1) // 2, p)
        t = pow(a, q, p)
        while t != 1:
            i, sq = 0, t
            while sq != 1:
                sq = sq * sq % p
                i += 1
            b = pow(c, 1 << (s - i - 1), p)
            r = r * b % p
            c = b * b % p
            t = t * c % p
            s = i
    return tuple(sorted({r, p - r}))


def _roots_mod_p(t: int, m: int, p: int) -> list[int]:
    if p == 2:
        return [x for x in (0, 1) if (x * x - t * x + m) % 2 == 0]
    # completing the square: (2x - t)^2 = t^2 - 4m
    ys = sqrt_mod_prime(t * t - 4 * m, p)
    if ys is None:
        return []
    half = (p + 1) // 2
    return sorted({(t + y) * half % p for y in ys})


@lru_cache(maxsize=1 << 16)
def roots_mod_prime_power(t: int, m: int, p: int, e: int) -> tuple[int, ...]:
    """All x mod p^e with x^2 - t x + m = 0 (mod p^e), ascending.

    Nonsingular roots lift uniquely by Newton's step; a root where
    2x - t = 0 (mod p) is lifted by testing all p successors.
    """
    if e < 1:
        raise ValueError("exponent must be >= 1")
    disc = t * t - 4 * m
    level = _roots_mod_p(t, m, p)
    pj = p
    for _ in range(e - 1):
        nxt = pj * p
        lifted = []
        for r in level:
            deriv = (2 * r - t) % p
            if deriv:
                fr = r * r - t * r + m
                lifted.append((r - fr * pow(2 * r - t, -1, nxt)) % nxt)
            else:
                # a singular root mod p forces p | disc
                assert disc % p == 0, (t, m, p)
                lifted.extend(
                    x for x in range(r, nxt, pj) if (x * x - t * x + m) % nxt == 0
                )
        level = lifted
        pj = nxt
        if not level:
            break
    return tuple(sorted(set(level)))


def roots(t: int, m: int, modulus: IntLike) -> tuple[int, ...]:
    """All residues x mod ``modulus`` with x^2 - t x + m = 0, ascending."""
    f = as_factored(modulus)
    acc, mod = [0], 1
    for p, e in f.factors:
        local = roots_mod_prime_power(t, m, p, e)
        pe = p**e
        acc = [crt(a, mod, b, pe) for a in acc for b in local]
        mod *= pe
        if not acc:
            break
    return tuple(sorted(acc))


@lru_cache(maxsize=1 << 16)
def unit_lift_count(t: int, m: int, p: int, e: int, f: int) -> int:
    """#{c mod p^e : p does not divide c, c lifts to a root mod p^(e+f)}."""
    lifted = {r % p**e for r in roots_mod_prime_power(t, m, p, e + f)}
    return sum(1 for c in lifted if c % p)


def mu(t: int, n: int, m: int, level: IntLike) -> int:
    """Weight of the (t, n) elliptic term for the trivial character.

    psi(N)/psi(N/N_n) times the number of units c mod N that lift to
    solutions of c^2 - t c + m = 0 (mod N N_n), where N_n = gcd(N, n).
    """
    f = as_factored(level)
    Nn = gcd(f.value, n)
    count = 1
    ratio = 1  # psi(N) / psi(N / N_n), assembled prime by prime
    for p, e in f.factors:
        extra = 0
        q = Nn
        while q % p == 0:
            q //= p
            extra += 1
        count *= unit_lift_count(t, m, p, e, extra)
        if not count:
            return 0
        if extra == e:
            ratio *= p ** (e - 1) * (p + 1)
        else:
            ratio *= p**extra
    return ratio * count
