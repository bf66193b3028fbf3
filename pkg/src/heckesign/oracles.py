"""Brute-force references, kept independent of the trace-formula code paths."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, isqrt

__all__ = [
    "PowerSeries",
    "delta_coefficients",
    "ramanujan_tau",
    "dimension_formula",
    "brute_mu",
    "brute_sigma",
    "brute_class_number",
    "level_one_hecke_matrix",
    "level_one_a2",
]


@dataclass(frozen=True)
class PowerSeries:
    coefficients: tuple[int, ...]

    def __post_init__(self) -> None:
        if not self.coefficients:
            raise ValueError("a power series needs at least one coefficient")

    @property
    def length(self) -> int:
        return len(self.coefficients)

    def __getitem__(self, i: int) -> int:
        return self.coefficients[i]


def delta_coefficients(order: int) -> PowerSeries:
    """q prod_{n>=1} (1 - q^n)^24 truncated after q^order."""
    if order < 1:
        raise ValueError("order must be positive")
    # prod (1 - q^n)^24 up to q^(order-1), then shift by q
    series = [0] * order
    series[0] = 1
    for n in range(1, order):
        for _ in range(24):
            for i in range(order - 1, n - 1, -1):
                series[i] -= series[i - n]
    return PowerSeries(tuple([0] + series))


def ramanujan_tau(n: int) -> int:
    return delta_coefficients(n)[n]


def _naive_factor(n: int) -> dict[int, int]:
    out: dict[int, int] = {}
    p = 2
    while p * p <= n:
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
        p += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def _kronecker_minus4(p: int) -> int:
    if p == 2:
        return 0
    return 1 if p % 4 == 1 else -1


def _kronecker_minus3(p: int) -> int:
    if p == 3:
        return 0
    return 1 if p % 3 == 1 else -1


def _phi(n: int) -> int:
    return sum(1 for a in range(1, n + 1) if gcd(a, n) == 1)


def dimension_formula(N: int, k: int) -> int:
    """dim S_k(Gamma0(N)) from the index, elliptic points and cusps.

    Weight 2 is the genus of X0(N); k >= 4 uses the standard closed form.
    """
    if N < 1:
        raise ValueError("level must be positive")
    if k < 2 or k % 2:
        raise ValueError("weight must be even and >= 2")
    fac = _naive_factor(N)
    index = N
    for p in fac:
        index = index * (p + 1) // p
    nu2 = 0 if N % 4 == 0 else _prod(1 + _kronecker_minus4(p) for p in fac)
    nu3 = 0 if N % 9 == 0 else _prod(1 + _kronecker_minus3(p) for p in fac)
    cusps = sum(_phi(gcd(d, N // d)) for d in range(1, N + 1) if N % d == 0)
    if k == 2:
        # 12 g = 12 + index - 3 nu2 - 4 nu3 - 6 cusps
        twelve_g = 12 + index - 3 * nu2 - 4 * nu3 - 6 * cusps
        assert twelve_g % 12 == 0
        return twelve_g // 12
    # 12 dim = (k-1) index + 12 (k//4 - (k-1)/4) nu2 + 12 (k//3 - (k-1)/3) nu3 - 6 cusps
    twelve_dim = (
        (k - 1) * index
        + (12 * (k // 4) - 3 * (k - 1)) * nu2
        + (12 * (k // 3) - 4 * (k - 1)) * nu3
        - 6 * cusps
    )
    assert twelve_dim % 12 == 0
    return twelve_dim // 12


def _prod(values) -> int:
    out = 1
    for v in values:
        out *= v
    return out


def brute_mu(t: int, n: int, m: int, N: int) -> int:
    """mu(t, n, m) at level N by scanning every residue modulo N * gcd(N, n)."""
    Nn = gcd(N, n)
    big = N * Nn
    hits = {c % N for c in range(big) if (c * c - t * c + m) % big == 0}
    units = sum(1 for c in hits if gcd(c, N) == 1)

    def index(x: int) -> int:
        out = x
        for p in _naive_factor(x):
            out = out * (p + 1) // p
        return out

    num, den = index(N), index(N // Nn)
    assert num % den == 0
    return num // den * units


def brute_sigma(N: int, m: int, d: int) -> int:
    """Hyperbolic inner sum by literal scan for y_tau over [0, lcm)."""
    e = m // d
    h = gcd(N, d - e)
    total = 0
    for tau in range(1, N + 1):
        if N % tau:
            continue
        rest = N // tau
        g = gcd(tau, rest)
        if h % g:
            continue
        lcm = tau * rest // g
        y = next(y for y in range(lcm) if (y - d) % tau == 0 and (y - e) % rest == 0)
        if gcd(y, N) == 1:
            total += _phi(g)
    return total


def brute_class_number(d: int) -> int:
    """Count primitive reduced forms by scanning the box a <= c, |b| <= a.

    c is capped at (|d| + a^2) / 4a, which b^2 <= a^2 forces anyway.
    """
    if d >= 0 or d % 4 not in (0, 1):
        raise ValueError(f"{d} is not a negative discriminant")
    count = 0
    D = -d
    for a in range(1, isqrt(D) + 1):
        for c in range(a, (D + a * a) // (4 * a) + 1):
            for b in range(-a, a + 1):
                if b * b - 4 * a * c != d:
                    continue
                if b < 0 and (-b == a or a == c):
                    continue
                if gcd(gcd(a, b), c) == 1:
                    count += 1
    return count


def _mul(a: list[int], b: list[int], order: int) -> list[int]:
    out = [0] * order
    for i, x in enumerate(a[:order]):
        if x:
            for j, y in enumerate(b[: order - i]):
                out[i + j] += x * y
    return out


def _eisenstein(weight: int, order: int) -> list[int]:
    # E4 = 1 + 240 sum sigma_3(n) q^n, E6 = 1 - 504 sum sigma_5(n) q^n
    scale = {4: 240, 6: -504}[weight]
    out = [1] + [0] * (order - 1)
    for n in range(1, order):
        out[n] = scale * sum(d ** (weight - 1) for d in range(1, n + 1) if n % d == 0)
    return out


def _level_one_basis(k: int, order: int) -> list[list[int]]:
    """Delta^j E4^a E6^b with 4a + 6b = k - 12j; the j-th form starts at q^j."""
    delta = list(delta_coefficients(order - 1).coefficients)
    e4, e6 = _eisenstein(4, order), _eisenstein(6, order)
    basis = []
    j = 1
    while 12 * j <= k:
        rest = k - 12 * j
        if rest != 2:
            b = next(b for b in range(0, rest // 6 + 1) if (rest - 6 * b) % 4 == 0)
            a = (rest - 6 * b) // 4
            f = [1] + [0] * (order - 1)
            for _ in range(j):
                f = _mul(f, delta, order)
            for _ in range(a):
                f = _mul(f, e4, order)
            for _ in range(b):
                f = _mul(f, e6, order)
            basis.append(f)
        j += 1
    return basis


def level_one_hecke_matrix(m: int, k: int) -> list[list[Fraction]]:
    """Matrix of T_m on S_k(SL2(Z)) from q-expansions, in an echelon basis.

    Uses a(T_m f, n) = sum_{d | gcd(m, n)} d^(k-1) a(f, mn/d^2); entirely
    independent of the trace formula.
    """
    if k < 2 or k % 2:
        raise ValueError("weight must be even and >= 2")
    probe = _level_one_basis(k, 2 + k // 12)
    dim = len(probe)
    if dim == 0:
        return []
    order = m * dim + 1
    basis = _level_one_basis(k, order)
    # echelon: basis[i] has leading term q^(i+1)
    rows = [[Fraction(f[n]) for n in range(1, dim + 1)] for f in basis]
    matrix = []
    for f in basis:
        image = []
        for n in range(1, dim + 1):
            g = gcd(m, n)
            image.append(Fraction(sum(d ** (k - 1) * f[m * n // (d * d)]
                                      for d in range(1, g + 1) if g % d == 0)))
        # back-substitute image = sum c_i rows[i]
        coeffs = [Fraction(0)] * dim
        residual = image[:]
        for i in range(dim):
            c = residual[i] / rows[i][i]
            coeffs[i] = c
            for n in range(dim):
                residual[n] -= c * rows[i][n]
        assert not any(residual)
        matrix.append(coeffs)
    # columns are images; transpose so matrix[i][j] is row i, column j
    return [[matrix[j][i] for j in range(dim)] for i in range(dim)]


def level_one_a2(m: int, k: int) -> int:
    """Second elementary symmetric function of the T_m eigenvalues at level 1."""
    mat = level_one_hecke_matrix(m, k)
    n = len(mat)
    total = Fraction(0)
    for i in range(n):
        for j in range(i + 1, n):
            total += mat[i][i] * mat[j][j] - mat[i][j] * mat[j][i]
    assert total.denominator == 1
    return int(total)
