"""Constructible functions on cell models: algebra, pullback, pushforward, Euler integrals."""

from __future__ import annotations

from types import MappingProxyType
from typing import Mapping

from .cellspace import CellMap, CellSpace, Mode, as_members, euler_cc, fiber_weight, subspace
from .errors import ModeUnsupported, SpaceMismatch, UnknownCell
from .poly import IntPoly, neg_y_power


class ConstructibleFunction:
    """Integer value per cell. Missing cells default to zero."""

    __slots__ = ("space", "_values")

    def __init__(self, space: CellSpace, values: Mapping[str, int] | None = None):
        values = dict(values or {})
        for c in values:
            if c not in space:
                raise UnknownCell(f"function value for unknown cell {c!r}")
        self.space = space
        self._values = MappingProxyType({c: int(values.get(c, 0)) for c in space})

    def __getitem__(self, cell: str) -> int:
        return self._values[cell]

    @property
    def values(self) -> Mapping[str, int]:
        return self._values

    def items(self):
        return self._values.items()

    def support(self) -> frozenset:
        return frozenset(c for c, v in self._values.items() if v)

    def _check(self, other):
        if other.space != self.space:
            raise SpaceMismatch(f"functions on {self.space.name} and {other.space.name}")

    def __add__(self, other):
        self._check(other)
        return ConstructibleFunction(self.space, {c: v + other[c] for c, v in self.items()})

    def __sub__(self, other):
        self._check(other)
        return ConstructibleFunction(self.space, {c: v - other[c] for c, v in self.items()})

    def __neg__(self):
        return ConstructibleFunction(self.space, {c: -v for c, v in self.items()})

    def __mul__(self, other):
        if isinstance(other, int):
            return ConstructibleFunction(self.space, {c: v * other for c, v in self.items()})
        self._check(other)
        return ConstructibleFunction(self.space, {c: v * other[c] for c, v in self.items()})

    def __rmul__(self, other):
        return self * other

    def __pow__(self, n: int):
        return ConstructibleFunction(self.space, {c: v**n for c, v in self.items()})

    def __eq__(self, other):
        if not isinstance(other, ConstructibleFunction):
            return NotImplemented
        return self.space == other.space and dict(self._values) == dict(other._values)

    def __hash__(self):
        return hash((self.space, frozenset(self._values.items())))

    def __repr__(self):
        body = ", ".join(f"{c}:{v}" for c, v in self.items())
        return f"CF[{self.space.name}]({body})"


def zero(space: CellSpace) -> ConstructibleFunction:
    return ConstructibleFunction(space)


def constant(space: CellSpace, value: int = 1) -> ConstructibleFunction:
    return ConstructibleFunction(space, {c: value for c in space})


def indicator(space: CellSpace, subset=None) -> ConstructibleFunction:
    members = as_members(space, subset)
    return ConstructibleFunction(space, {c: 1 for c in members})


def closure_indicator(space: CellSpace, cell: str) -> ConstructibleFunction:
    return indicator(space, space.closure(cell))


def cf_algebra(op: str, *args) -> ConstructibleFunction:
    """Dispatch for ``indicator``, ``add``, ``scale`` and ``pointwise_product``."""
    if op == "indicator":
        return indicator(*args)
    if op == "add":
        a, b = args
        return a + b
    if op == "scale":
        k, a = args
        return a * k
    if op == "pointwise_product":
        a, b = args
        return a * b
    raise ValueError(f"unknown operation {op!r}")


def pullback_cf(f: CellMap, beta: ConstructibleFunction) -> ConstructibleFunction:
    if beta.space != f.target:
        raise SpaceMismatch(f"function lives on {beta.space.name}, map targets {f.target.name}")
    return ConstructibleFunction(f.source, {e: beta[f(e)] for e in f.source})


def pushforward_cf(f: CellMap, alpha: ConstructibleFunction) -> ConstructibleFunction:
    """Fiberwise Euler integration along a cellwise fibration."""
    if alpha.space != f.source:
        raise SpaceMismatch(f"function lives on {alpha.space.name}, map starts at {f.source.name}")
    mode = f.source.mode
    out = dict.fromkeys(f.target.cells, 0)
    for e, v in alpha.items():
        if v:
            out[f(e)] += v * fiber_weight(mode, f.fiber_dim(e))
    return ConstructibleFunction(f.target, out)


def euler_integral(alpha: ConstructibleFunction) -> int:
    space = alpha.space
    return sum(v * space.weight(c) for c, v in alpha.items())


def weighted_euler_oracle(alpha: ConstructibleFunction) -> int:
    """Level-set formula: sum over values ``m`` of ``m * chi(alpha^-1(m))``."""
    levels: dict[int, set] = {}
    for c, v in alpha.items():
        levels.setdefault(v, set()).add(c)
    return sum(m * euler_cc(alpha.space, cells) for m, cells in levels.items())


def genus_integral(alpha: ConstructibleFunction) -> IntPoly:
    """Integral against the chi_y weight ``(-y)**dim`` of each algebraic cell."""
    space = alpha.space
    if space.mode is not Mode.ALGEBRAIC:
        raise ModeUnsupported("chi_y genus needs an algebraic model")
    total = IntPoly()
    for c, v in alpha.items():
        if v:
            total = total + neg_y_power(space.dim(c)) * v
    return total


def restrict(alpha: ConstructibleFunction, members) -> ConstructibleFunction:
    """Restriction to the subspace on ``members``."""
    sub = subspace(alpha.space, members)
    return ConstructibleFunction(sub, {c: alpha[c] for c in sub})
