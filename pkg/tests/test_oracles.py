from math import gcd

import pytest

from heckesign.oracles import (
    PowerSeries,
    brute_class_number,
    brute_mu,
    brute_sigma,
    delta_coefficients,
    dimension_formula,
    level_one_a2,
    level_one_hecke_matrix,
    ramanujan_tau,
)
from heckesign.trace import trace

# frozen from delta_coefficients(20)
TAU = [1, -24, 252, -1472, 4830, -6048, -16744, 84480, -113643, -115920, 534612,
       -370944, -577738, 401856, 1217160, 987136, -6905934, 2727432, 10661420, -7109760]


def test_tau_values():
    series = delta_coefficients(20)
    assert series[0] == 0
    assert [series[n] for n in range(1, 21)] == TAU
    assert ramanujan_tau(6) == -6048


def test_tau_multiplicative():
    series = delta_coefficients(30)
    for a in range(1, 31):
        for b in range(1, 31 // a + 1):
            if a * b <= 30 and gcd(a, b) == 1:
                assert series[a * b] == series[a] * series[b]
    for p in (2, 3, 5):
        assert series[p * p] == series[p] ** 2 - p**11


def test_trace_at_level_one_is_tau():
    for m in range(1, 21):
        assert trace(m, 1, 12).total == TAU[m - 1]


def test_power_series_needs_terms():
    with pytest.raises(ValueError):
        PowerSeries(())


@pytest.mark.parametrize("N,k,d", [(1, 12, 1), (11, 2, 1), (22, 2, 2), (1, 2, 0), (11, 4, 2), (1, 24, 2)])
def test_dimension_formula(N, k, d):
    assert dimension_formula(N, k) == d


def test_dimension_rejects_odd_weight():
    with pytest.raises(ValueError):
        dimension_formula(5, 3)


def test_brute_examples():
    assert brute_mu(0, 1, 3, 7) == 2
    assert brute_class_number(-23) == 3
    assert brute_sigma(1, 3, 1) == 1


def test_level_one_matrix():
    assert level_one_hecke_matrix(2, 12) == [[-24]]
    assert level_one_hecke_matrix(2, 10) == []
    mat = level_one_hecke_matrix(2, 24)
    assert mat[0][0] + mat[1][1] == trace(2, 1, 24).total
    # T_2 on S_24: eigenvalues 540 +- 12 sqrt(144169), so a2 = 540^2 - 144 * 144169
    assert level_one_a2(2, 24) == 540**2 - 144 * 144169
