"""Class numbers of imaginary quadratic orders by reduced-form census."""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import gcd

__all__ = ["check_discriminant", "class_number", "weighted_class_number", "reduced_forms"]


def check_discriminant(d: int) -> int:
    d = int(d)
    if d >= 0 or d % 4 not in (0, 1):
        raise ValueError(f"{d} is not a negative discriminant (need d < 0, d = 0 or 1 mod 4)")
    return d


def reduced_forms(d: int) -> list[tuple[int, int, int]]:
    """Reduced primitive positive-definite forms (a, b, c) of discriminant d."""
    d = check_discriminant(d)
    forms = []
    a = 1
    while 3 * a * a <= -d:
        # b = d (mod 2); b = -a is excluded by the boundary rule
        for b in range(-a + 1, a + 1):
            if (b - d) & 1:
                continue
            num = b * b - d
            if num % (4 * a):
                continue
            c = num // (4 * a)
            if c < a or (b < 0 and a == c):
                continue
            if gcd(gcd(a, b), c) == 1:
                forms.append((a, b, c))
        a += 1
    return forms


@lru_cache(maxsize=None)
def class_number(d: int) -> int:
    return len(reduced_forms(d))


@lru_cache(maxsize=None)
def weighted_class_number(d: int) -> Fraction:
    """h(d), divided by 2 at d = -4 and by 3 at d = -3."""
    h = Fraction(class_number(d))
    if d == -3:
        return h / 3
    if d == -4:
        return h / 2
    return h
