"""Behrend-type data, DT-type invariants of spaces and morphisms, and the Eu / indicator transforms.

Behrend values are supplied data, never derived from geometry; the
constructors here only enforce the smooth, product and smooth-pullback rules.
"""

from __future__ import annotations

from enum import Enum
from types import MappingProxyType
from typing import Mapping

from .cellspace import CellMap, CellSpace, product_space, pair_id
from .constructible import (
    ConstructibleFunction,
    constant,
    euler_integral,
    pullback_cf,
    pushforward_cf,
)
from .errors import DtcalcError, NotUnitriangular, SmoothFlagRequired, SpaceMismatch, UnknownCell


class Provenance(str, Enum):
    SMOOTH = "smooth"
    PRODUCT = "product"
    SMOOTH_PULLBACK = "smooth-pullback"
    USER = "user"


class BehrendData:
    """Per-cell Behrend values with their provenance.

    ``twisted`` marks values already multiplied by ``(-1)**dim X``.
    """

    __slots__ = ("function", "provenance", "twisted")

    def __init__(self, function: ConstructibleFunction, provenance=Provenance.USER, twisted: bool = False):
        self.function = function
        self.provenance = Provenance(provenance)
        self.twisted = bool(twisted)
        if self.provenance is Provenance.SMOOTH:
            sign = 1 if twisted else (-1) ** function.space.variety_dim
            if any(v != sign for _, v in function.items()):
                raise DtcalcError(f"smooth Behrend data on {function.space.name} must be constant {sign}")

    @property
    def space(self) -> CellSpace:
        return self.function.space

    def __getitem__(self, cell):
        return self.function[cell]

    def __eq__(self, other):
        if not isinstance(other, BehrendData):
            return NotImplemented
        return (self.function, self.provenance, self.twisted) == (other.function, other.provenance, other.twisted)

    def __hash__(self):
        return hash((self.function, self.provenance, self.twisted))

    def __repr__(self):
        tw = ", twisted" if self.twisted else ""
        return f"BehrendData({self.function!r}, {self.provenance.value}{tw})"


def smooth_behrend(space: CellSpace) -> BehrendData:
    return BehrendData(constant(space, (-1) ** space.variety_dim), Provenance.SMOOTH)


def product_behrend(b1: BehrendData, b2: BehrendData) -> BehrendData:
    b1, b2 = untwisted(b1), untwisted(b2)
    p, _, _ = product_space(b1.space, b2.space)
    vals = {pair_id(a, b): b1[a] * b2[b] for a in b1.space for b in b2.space}
    return BehrendData(ConstructibleFunction(p, vals), Provenance.PRODUCT)


def smooth_pullback_behrend(f: CellMap, b_target: BehrendData) -> BehrendData:
    """``(-1)**n * f^* nu_Y`` for ``f`` smooth of relative dimension ``n``."""
    if not f.smooth:
        raise SmoothFlagRequired(f"{f!r} is not flagged smooth")
    if b_target.space != f.target:
        raise SpaceMismatch("Behrend data does not live on the map's target")
    b_target = untwisted(b_target)
    return BehrendData(pullback_cf(f, b_target.function) * (-1) ** f.rel_dim, Provenance.SMOOTH_PULLBACK)


def user_behrend(space: CellSpace, values: Mapping[str, int]) -> BehrendData:
    return BehrendData(ConstructibleFunction(space, values), Provenance.USER)


def make_behrend(kind: str, *args) -> BehrendData:
    builders = {
        "smooth": smooth_behrend,
        "product": product_behrend,
        "smooth_pullback": smooth_pullback_behrend,
        "user": user_behrend,
    }
    try:
        return builders[kind](*args)
    except KeyError:
        raise ValueError(f"unknown Behrend constructor {kind!r}") from None


def twist_behrend(b: BehrendData) -> BehrendData:
    """Multiply by ``(-1)**dim X``; equals the indicator of ``X`` on smooth data."""
    return BehrendData(b.function * (-1) ** b.space.variety_dim, b.provenance, not b.twisted)


def untwisted(b: BehrendData) -> BehrendData:
    return twist_behrend(b) if b.twisted else b


def twisted_function(b: BehrendData) -> ConstructibleFunction:
    """The twisted values, whichever form ``b`` is stored in."""
    return b.function if b.twisted else twist_behrend(b).function


def dt_space(b: BehrendData) -> int:
    return euler_integral(untwisted(b).function)


def dt_morphism(f: CellMap, b_target: BehrendData) -> int:
    """Virtual count ``chi(X, f^* nu_Y)`` of ``f: X -> Y``."""
    if b_target.space != f.target:
        raise SpaceMismatch("Behrend data does not live on the map's target")
    return euler_integral(pullback_cf(f, untwisted(b_target).function))


def dt_generalized(f: CellMap, delta: ConstructibleFunction) -> tuple[int, int]:
    """Source-side ``chi(X, f^* delta)`` and target-side ``chi(Y, f_* f^* delta)``."""
    pulled = pullback_cf(f, delta)
    return euler_integral(pulled), euler_integral(pushforward_cf(f, pulled))


def dt_invariant(target: str, *args):
    if target == "space":
        return dt_space(*args)
    if target == "morphism":
        return dt_morphism(*args)
    if target == "generalized":
        return dt_generalized(*args)
    raise ValueError(f"unknown DT invariant kind {target!r}")


def is_behrend_morphism(f: CellMap, b_source: BehrendData, b_target: BehrendData, twisted: bool = False) -> bool:
    if b_source.space != f.source or b_target.space != f.target:
        raise SpaceMismatch("Behrend data does not match the map's spaces")
    if twisted:
        return twisted_function(b_source) == pullback_cf(f, twisted_function(b_target))
    return untwisted(b_source).function == pullback_cf(f, untwisted(b_target).function)


def behrend_residual(f: CellMap, b_source: BehrendData, b_target: BehrendData) -> ConstructibleFunction:
    """``f^* nu_Y - (-1)**(dim X - dim Y) nu_X``, the part supported on singular loci."""
    sign = (-1) ** (f.source.variety_dim - f.target.variety_dim)
    return pullback_cf(f, untwisted(b_target).function) - untwisted(b_source).function * sign


class Cycle:
    """Integer combination of the irreducible closed sets ``cl(c)``."""

    __slots__ = ("space", "_mult")

    def __init__(self, space: CellSpace, multiplicities: Mapping[str, int] | None = None):
        multiplicities = dict(multiplicities or {})
        for c in multiplicities:
            if c not in space:
                raise UnknownCell(f"cycle mentions unknown cell {c!r}")
        self.space = space
        self._mult = MappingProxyType({c: int(multiplicities.get(c, 0)) for c in space})

    def __getitem__(self, cell):
        return self._mult[cell]

    @property
    def multiplicities(self) -> Mapping[str, int]:
        return self._mult

    def items(self):
        return self._mult.items()

    def __add__(self, other):
        if other.space != self.space:
            raise SpaceMismatch("cycles on different spaces")
        return Cycle(self.space, {c: m + other[c] for c, m in self.items()})

    def __mul__(self, k: int):
        return Cycle(self.space, {c: m * k for c, m in self.items()})

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, Cycle):
            return NotImplemented
        return self.space == other.space and dict(self._mult) == dict(other._mult)

    def __hash__(self):
        return hash((self.space, frozenset(self._mult.items())))

    def __repr__(self):
        body = " + ".join(f"{m}[{c}]" for c, m in self.items() if m) or "0"
        return f"Cycle[{self.space.name}]({body})"


class EuMatrix:
    """Unitriangular matrix ``E[sub][super]`` over the closure order.

    Column ``c`` is the constructible function attached to the closed set
    ``cl(c)``; the diagonal is fixed to one.
    """

    __slots__ = ("space", "_entries")

    def __init__(self, space: CellSpace, entries: Mapping[tuple, int] | None = None):
        clean = {}
        for (sub, sup), value in dict(entries or {}).items():
            if sub not in space or sup not in space:
                raise UnknownCell(f"matrix entry ({sub!r}, {sup!r}) mentions an unknown cell")
            if sub == sup:
                if value != 1:
                    raise NotUnitriangular(f"diagonal entry at {sub!r} is {value}, expected 1")
                continue
            if not space.le(sub, sup):
                if value:
                    raise NotUnitriangular(f"entry ({sub!r}, {sup!r}) lies outside the closure order")
                continue
            if value:
                clean[(sub, sup)] = int(value)
        self.space = space
        self._entries = MappingProxyType(clean)

    def __call__(self, sub: str, sup: str) -> int:
        if sub == sup:
            return 1
        return self._entries.get((sub, sup), 0)

    @property
    def entries(self) -> Mapping[tuple, int]:
        """Off-diagonal nonzero entries."""
        return self._entries

    def __eq__(self, other):
        if not isinstance(other, EuMatrix):
            return NotImplemented
        return self.space == other.space and dict(self._entries) == dict(other._entries)

    def __hash__(self):
        return hash((self.space, frozenset(self._entries.items())))

    def __repr__(self):
        return f"EuMatrix[{self.space.name}]({dict(self._entries)})"


def identity_matrix(space: CellSpace) -> EuMatrix:
    return EuMatrix(space)


def closure_matrix(space: CellSpace) -> EuMatrix:
    """Matrix of the indicator isomorphism ``[cl(c)] -> 1_{cl(c)}``."""
    return EuMatrix(space, {(sub, c): 1 for c in space for sub in space.lower(c)})


def eu_apply(E: EuMatrix, z: Cycle) -> ConstructibleFunction:
    if z.space != E.space:
        raise SpaceMismatch("cycle and matrix live on different spaces")
    space = E.space
    out = dict.fromkeys(space.cells, 0)
    for c, m in z.items():
        if m:
            for sub in space.closure(c):
                out[sub] += m * E(sub, c)
    return ConstructibleFunction(space, out)


def eu_invert(E: EuMatrix, alpha: ConstructibleFunction) -> Cycle:
    """Back-substitution from the top-dimensional cells down."""
    if alpha.space != E.space:
        raise SpaceMismatch("function and matrix live on different spaces")
    space = E.space
    mult: dict[str, int] = {}
    for c in reversed(space.sorted_cells()):
        mult[c] = alpha[c] - sum(mult[sup] * E(c, sup) for sup in space.upper(c))
    return Cycle(space, mult)


def cf_to_cycle(alpha: ConstructibleFunction) -> Cycle:
    return eu_invert(closure_matrix(alpha.space), alpha)


def cycle_to_cf(z: Cycle) -> ConstructibleFunction:
    return eu_apply(closure_matrix(z.space), z)


def nu_from_cycle(E: EuMatrix, z: Cycle) -> BehrendData:
    return BehrendData(eu_apply(E, z), Provenance.USER)


def distinguished_integral_cycle(b: BehrendData) -> Cycle:
    """The cycle whose indicator image is the Behrend function."""
    return cf_to_cycle(b.function)


def eu_transform(direction: str, E: EuMatrix | None, arg):
    if direction == "apply":
        return eu_apply(E, arg)
    if direction == "invert":
        return eu_invert(E, arg)
    if direction == "cf_to_cycle":
        return cf_to_cycle(arg)
    if direction == "nu_from_cycle":
        return nu_from_cycle(E, arg)
    raise ValueError(f"unknown direction {direction!r}")
