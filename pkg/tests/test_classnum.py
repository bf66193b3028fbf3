from fractions import Fraction

import pytest

from heckesign.classnum import class_number, reduced_forms, weighted_class_number
from heckesign.oracles import brute_class_number

# weighted class numbers for -3 .. -67, the standard table
WEIGHTED = {
    -3: Fraction(1, 3), -4: Fraction(1, 2), -7: 1, -8: 1, -11: 1, -12: 1, -15: 2, -16: 1,
    -19: 1, -20: 2, -23: 3, -24: 2, -27: 1, -28: 1, -31: 3, -32: 2, -35: 2, -36: 2,
    -39: 4, -40: 2, -43: 1, -44: 3, -47: 5, -48: 2, -51: 2, -52: 2, -55: 4, -56: 4,
    -59: 3, -60: 2, -63: 4, -64: 2, -67: 1,
}


@pytest.mark.parametrize("d,expected", [(-3, 1), (-23, 3), (-47, 5)])
def test_class_number(d, expected):
    assert class_number(d) == expected


@pytest.mark.parametrize("d,expected", [(-3, Fraction(1, 3)), (-4, Fraction(1, 2)), (-36, 2)])
def test_weighted(d, expected):
    assert weighted_class_number(d) == expected


def test_weighted_table():
    assert len(WEIGHTED) == 33
    for d, h in WEIGHTED.items():
        assert weighted_class_number(d) == h, d


@pytest.mark.parametrize("bad", [0, 5, -1, -2, -5, -6])
def test_rejects_invalid(bad):
    with pytest.raises(ValueError):
        class_number(bad)


def test_reduced_forms_are_reduced():
    for a, b, c in reduced_forms(-260):
        assert b * b - 4 * a * c == -260
        assert abs(b) <= a <= c
        if abs(b) == a or a == c:
            assert b >= 0


def test_brute_force_agreement():
    for d in range(-3, -401, -1):
        if d % 4 in (0, 1):
            assert class_number(d) == brute_class_number(d), d


def test_weighted_denominators():
    for d in range(-3, -401, -1):
        if d % 4 in (0, 1):
            h = weighted_class_number(d)
            assert h > 0 and h.denominator in (1, 2, 3)
