import pytest
from hypothesis import given, strategies as st

from dtcalc.errors import BoundExceeded, NotInvertible
from dtcalc.series import (
    ORACLE_BOUND,
    TruncatedSeries,
    macmahon_series,
    mnop_series,
    plane_partition_oracle,
    series_power,
)

KNOWN = [1, 1, 3, 6, 13, 24, 48, 86, 160, 282, 500, 859, 1479]


def test_first_coefficients():
    assert list(macmahon_series(4).coeffs) == [1, 1, 3, 6, 13]
    assert list(macmahon_series(12).coeffs) == KNOWN


@pytest.mark.parametrize("n", range(ORACLE_BOUND + 1))
def test_plane_partition_oracle(n):
    assert plane_partition_oracle(n) == KNOWN[n]


def test_oracle_bound():
    with pytest.raises(BoundExceeded):
        plane_partition_oracle(ORACLE_BOUND + 1)


def test_inverse_and_powers():
    m = macmahon_series(15)
    assert m * m.inverse() == TruncatedSeries.one(15)
    assert series_power(m, -1) == m.inverse()
    assert series_power(m, 0) == TruncatedSeries.one(15)
    assert mnop_series(2, 15) == m * m
    assert mnop_series(-3, 15) * mnop_series(3, 15) == TruncatedSeries.one(15)


def test_not_invertible():
    with pytest.raises(NotInvertible):
        TruncatedSeries([2, 1]).inverse()


def test_truncation_is_the_minimum():
    assert (macmahon_series(3) * macmahon_series(8)).order == 3


@given(st.integers(-4, 4), st.integers(-4, 4), st.integers(0, 12))
def test_power_laws(a, b, order):
    m = macmahon_series(order)
    assert series_power(m, a) * series_power(m, b) == series_power(m, a + b)
    assert series_power(series_power(m, a), b) == series_power(m, a * b)


@given(st.lists(st.integers(-5, 5), min_size=1, max_size=8), st.lists(st.integers(-5, 5), min_size=1, max_size=8))
def test_product_matches_naive_convolution(xs, ys):
    n = min(len(xs), len(ys)) - 1
    naive = [sum(xs[i] * ys[k - i] for i in range(k + 1)) for k in range(n + 1)]
    assert list((TruncatedSeries(xs) * TruncatedSeries(ys)).coeffs) == naive
