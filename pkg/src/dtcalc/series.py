"""Truncated integer power series, the MacMahon function and plane partitions."""

from __future__ import annotations

from typing import Sequence

from .errors import BoundExceeded, NotInvertible

ORACLE_BOUND = 12


class TruncatedSeries:
    """Coefficients ``c_0 .. c_N`` of a series known modulo ``q**(N+1)``."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Sequence[int], order: int | None = None):
        cs = [int(c) for c in coeffs]
        if order is None:
            order = len(cs) - 1
        if order < 0:
            raise ValueError("truncation order must be non-negative")
        cs = (cs + [0] * (order + 1))[: order + 1]
        self.coeffs = tuple(cs)

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    @classmethod
    def one(cls, order: int) -> TruncatedSeries:
        return cls([1], order)

    def __getitem__(self, n: int) -> int:
        return self.coeffs[n]

    def truncate(self, order: int) -> TruncatedSeries:
        return TruncatedSeries(self.coeffs, min(order, self.order))

    def _common(self, other):
        n = min(self.order, other.order)
        return self.coeffs[: n + 1], other.coeffs[: n + 1], n

    def __add__(self, other):
        a, b, n = self._common(other)
        return TruncatedSeries([x + y for x, y in zip(a, b)], n)

    def __mul__(self, other):
        if isinstance(other, int):
            return TruncatedSeries([c * other for c in self.coeffs], self.order)
        a, b, n = self._common(other)
        out = [0] * (n + 1)
        for i, x in enumerate(a):
            if x:
                for j in range(n + 1 - i):
                    out[i + j] += x * b[j]
        return TruncatedSeries(out, n)

    __rmul__ = __mul__

    def inverse(self) -> TruncatedSeries:
        c0 = self.coeffs[0]
        if c0 not in (1, -1):
            raise NotInvertible(f"constant term {c0} is not a unit in the integers")
        n = self.order
        inv = [0] * (n + 1)
        inv[0] = c0
        for k in range(1, n + 1):
            acc = sum(self.coeffs[i] * inv[k - i] for i in range(1, k + 1))
            inv[k] = -acc * c0
        return TruncatedSeries(inv, n)

    def __pow__(self, n: int) -> TruncatedSeries:
        return series_power(self, n)

    def __eq__(self, other):
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        return f"TruncatedSeries({list(self.coeffs)})"


def _divide_by_one_minus(coeffs: list, n: int) -> None:
    """In place: multiply by ``1/(1 - q**n)``, i.e. a strided running sum."""
    for k in range(n, len(coeffs)):
        coeffs[k] += coeffs[k - n]


def macmahon_series(order: int) -> TruncatedSeries:
    """``prod_{n >= 1} (1 - q**n)**(-n)`` modulo ``q**(order+1)``."""
    if order < 0:
        raise ValueError("truncation order must be non-negative")
    coeffs = [1] + [0] * order
    for n in range(1, order + 1):
        for _ in range(n):
            _divide_by_one_minus(coeffs, n)
    return TruncatedSeries(coeffs, order)


def series_power(s: TruncatedSeries, n: int, order: int | None = None) -> TruncatedSeries:
    """``s**n`` by repeated squaring; negative ``n`` needs a unit constant term."""
    if order is not None:
        s = s.truncate(order)
    if n < 0:
        s, n = s.inverse(), -n
    result = TruncatedSeries.one(s.order)
    base = s
    while n:
        if n & 1:
            result = result * base
        n >>= 1
        if n:
            base = base * base
    return result


def mnop_series(chern_number: int, order: int) -> TruncatedSeries:
    """``M(q)`` raised to a caller-supplied integral Chern number."""
    return series_power(macmahon_series(order), chern_number)


def _rows_below(row: tuple, total: int):
    """Non-increasing rows bounded entrywise by ``row`` with sum exactly ``total``."""

    def rec(i, remaining, cap):
        if remaining == 0:
            yield ()
            return
        if i == len(row):
            return
        for v in range(min(cap, row[i], remaining), 0, -1):
            for rest in rec(i + 1, remaining - v, v):
                yield (v,) + rest

    yield from rec(0, total, total)


def plane_partition_oracle(n: int) -> int:
    """Count plane partitions of ``n`` by exhaustive row-by-row enumeration."""
    if n < 0:
        raise ValueError("size must be non-negative")
    if n > ORACLE_BOUND:
        raise BoundExceeded(f"brute force limited to n <= {ORACLE_BOUND}")

    def count(prev: tuple, remaining: int) -> int:
        if remaining == 0:
            return 1
        total = 0
        for size in range(1, remaining + 1):
            for row in _rows_below(prev, size):
                total += count(row, remaining - size)
        return total

    # first row is bounded only by n itself
    return count((n,) * n, n) if n else 1
