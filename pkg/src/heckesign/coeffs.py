"""First and second coefficients of the Hecke polynomial of T_m(N, k).

With eigenvalues l_1..l_n the polynomial is x^n - a1 x^(n-1) + a2 x^(n-2) - ...,
so a1 is the trace and a2 = sum_{i<j} l_i l_j = ((Tr T_m)^2 - Tr T_m^2) / 2.
For the trivial character T_m^2 = sum_{d | m} d^(k-1) T_{m^2/d^2}.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from math import gcd
from typing import Iterable, Iterator

from .ntheory import IntLike, as_factored, divisors, is_square
from .trace import TraceIntegralityError, TraceKernel, check_weight, trace_kernel

__all__ = [
    "Sign",
    "SignReport",
    "a1",
    "a2",
    "a2_sweep",
    "dimension",
    "sign_report",
    "is_exceptional",
]


class Sign(enum.Enum):
    POSITIVE = "+"
    ZERO = "0"
    NEGATIVE = "-"

    @classmethod
    def of(cls, value: int) -> "Sign":
        if value > 0:
            return cls.POSITIVE
        if value < 0:
            return cls.NEGATIVE
        return cls.ZERO

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class SignReport:
    m: int
    N: int
    k: int
    dim: int
    a2: int
    sign: Sign

    def __post_init__(self) -> None:
        if self.sign is not Sign.of(self.a2):
            raise ValueError(f"sign {self.sign} does not match a2 = {self.a2}")
        if self.dim < 2 and self.a2:
            raise ValueError("a2 must vanish when dim < 2")

    def as_dict(self) -> dict:
        return {"m": self.m, "N": self.N, "k": self.k, "dim": self.dim,
                "a2": self.a2, "sign": self.sign.value}


def is_exceptional(m: int, a2_value: int) -> bool:
    """True when a2 fails the generic sign: >= 0 for non-square m, <= 0 for square m."""
    return a2_value <= 0 if is_square(m) else a2_value >= 0


def a1(m: int, N: IntLike, k: int) -> int:
    return trace_kernel(m, N).total(k)


def dimension(N: IntLike, k: int) -> int:
    """dim S_k(Gamma0(N)) as the trace of T_1."""
    return trace_kernel(1, N).total(k)


def _check(m: int, level, k: int) -> None:
    if m < 1:
        raise ValueError("m must be positive")
    check_weight(k)
    if gcd(level.value, m) != 1:
        raise ValueError(f"a2 needs gcd(N, m) = 1; got N={level.value}, m={m}")


def a2_sweep(m: int, N: IntLike, ks: Iterable[int]) -> Iterator[SignReport]:
    """SignReports for ascending even weights at one level, sharing all k-independent work."""
    level = as_factored(N)
    ks = list(ks)
    for k in ks:
        _check(m, level, k)
    if any(b <= a for a, b in zip(ks, ks[1:])):
        raise ValueError("weights must be strictly ascending")
    divs = divisors(m)
    needed = {m, 1} | {(m // d) ** 2 for d in divs}
    sweeps = {j: TraceKernel(j, level).sweep(ks) for j in needed}
    powers = {d: (1, 0) for d in divs}  # d -> (d^exp, exp)
    for k in ks:
        tr = {j: next(s)[1] for j, s in sweeps.items()}
        dim = tr[1]
        bracket = tr[m] ** 2
        for d in divs:
            val, exp = powers[d]
            val *= d ** (k - 1 - exp)
            powers[d] = (val, k - 1)
            bracket -= val * tr[(m // d) ** 2]
        if bracket % 2:
            raise TraceIntegralityError(f"odd a2 bracket at m={m}, N={level.value}, k={k}")
        value = bracket // 2
        if dim < 2:
            # a polynomial of degree < 2 has no x^(n-2) coefficient
            assert value == 0, (m, level.value, k, dim, value)
            value = 0
        yield SignReport(m, level.value, k, dim, value, Sign.of(value))


def sign_report(m: int, N: IntLike, k: int) -> SignReport:
    return next(a2_sweep(m, N, [k]))


def a2(m: int, N: IntLike, k: int) -> int:
    """Second Hecke-polynomial coefficient of T_m on S_k(Gamma0(N)), gcd(N, m) = 1."""
    return sign_report(m, N, k).a2
