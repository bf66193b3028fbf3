from math import gcd, isqrt

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from heckesign.congruence import mu, roots, roots_mod_prime_power, sqrt_mod_prime
from heckesign.ntheory import omega
from heckesign.oracles import brute_mu


def scan(t, m, modulus):
    return tuple(x for x in range(modulus) if (x * x - t * x + m) % modulus == 0)


def valid_n(t, m):
    d0 = t * t - 4 * m
    return [n for n in range(1, isqrt(-d0) + 1) if d0 % (n * n) == 0 and (d0 // (n * n)) % 4 in (0, 1)]


class TestSqrtModPrime:
    def test_examples(self):
        assert sqrt_mod_prime(2, 7) == (3, 4)
        assert sqrt_mod_prime(0, 5) == (0,)
        assert sqrt_mod_prime(3, 7) is None

    @pytest.mark.parametrize("p", [3, 5, 7, 13, 17, 41, 97, 257])
    def test_all_residues(self, p):
        for a in range(p):
            found = tuple(x for x in range(p) if x * x % p == a)
            assert sqrt_mod_prime(a, p) == (found or None)

    def test_large_prime(self):
        p = 65537  # p - 1 = 2^16 exercises the full Tonelli-Shanks loop
        for a in (3, 5, 10, 12345):
            got = sqrt_mod_prime(a, p)
            assert got is None or all(r * r % p == a for r in got)
            assert (got is None) == (pow(a, (p - 1) // 2, p) == p - 1)


class TestRoots:
    def test_examples(self):
        assert roots_mod_prime_power(0, 3, 7, 1) == (2, 5)
        assert roots_mod_prime_power(1, 3, 7, 1) == ()
        assert roots_mod_prime_power(4, 4, 3, 2) == (2, 5, 8)
        assert roots(0, 3, 1) == (0,)
        assert roots(0, 3, 21) == (9, 12)
        assert roots(2, 4, 11) == scan(2, 4, 11)

    def test_against_scan(self):
        for m in (1, 2, 3, 4, 9, 16):
            for t in range(-8, 9):
                for modulus in list(range(1, 400)) + [512, 729, 1024, 2187, 2401, 4096, 4913]:
                    assert roots(t, m, modulus) == scan(t, m, modulus), (t, m, modulus)

    @given(st.integers(-8, 8), st.sampled_from([1, 2, 3, 4, 9, 16]), st.integers(1, 5000))
    @settings(max_examples=300, deadline=None)
    def test_against_scan_random(self, t, m, modulus):
        assert roots(t, m, modulus) == scan(t, m, modulus)

    def test_unit_root_count_bound(self):
        for m in (1, 2, 3, 4, 9, 16):
            for t in range(0, isqrt(4 * m - 1) + 1):
                for N in range(1, 1500):
                    units = sum(1 for r in roots(t, m, N) if gcd(r, N) == 1)
                    # units <= 2^w sqrt(4m - t^2), squared
                    assert units * units <= 4 ** omega(N) * (4 * m - t * t)


class TestMu:
    def test_examples(self):
        assert mu(0, 1, 3, 1) == 1
        assert mu(0, 1, 3, 7) == 2
        assert mu(1, 1, 3, 7) == 0
        assert brute_mu(0, 1, 3, 7) == 2

    def test_against_brute_force(self):
        for m in (1, 2, 3, 4, 9, 16):
            for t in range(0, isqrt(4 * m - 1) + 1):
                for n in valid_n(t, m):
                    for N in range(1, 301):
                        assert mu(t, n, m, N) == brute_mu(t, n, m, N), (t, n, m, N)

    @given(st.sampled_from([1, 2, 3, 4, 9, 16]), st.integers(1, 2000), st.data())
    @settings(max_examples=150, deadline=None)
    def test_against_brute_force_random(self, m, N, data):
        t = data.draw(st.integers(-isqrt(4 * m - 1), isqrt(4 * m - 1)))
        n = data.draw(st.sampled_from(valid_n(t, m)))
        assert mu(t, n, m, N) == brute_mu(t, n, m, N)
