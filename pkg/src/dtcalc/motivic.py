"""Relative Grothendieck group of a cell model in scissor normal form.

A class is a finitely supported table over ``(cell, fiber dimension)``: the
pair ``(c, d)`` is the trivial ``d``-dimensional cell fibration over the
stratum ``c``. Cutting any ``[V -> X]`` into the cells of ``V`` lands there.
"""

from __future__ import annotations

from types import MappingProxyType
from typing import Iterable, Mapping, Sequence

from .behrend import BehrendData, twist_behrend, untwisted
from .cellspace import CellMap, CellSpace, Mode, fiber_weight, identity_map, inclusion
from .constructible import ConstructibleFunction, euler_integral
from .errors import ModeUnsupported, SpaceMismatch, TargetMismatch, UnknownCell
from .poly import IntPoly, neg_y_power


class MotivicClass:
    __slots__ = ("space", "_table")

    def __init__(self, space: CellSpace, table: Mapping[tuple, int] | None = None):
        clean: dict[tuple, int] = {}
        for (c, d), m in dict(table or {}).items():
            if c not in space:
                raise UnknownCell(f"class entry over unknown cell {c!r}")
            if isinstance(d, bool) or not isinstance(d, int) or d < 0:
                raise ValueError(f"fiber dimension must be a non-negative integer, got {d!r}")
            if m:
                clean[(c, d)] = clean.get((c, d), 0) + int(m)
        self.space = space
        self._table = MappingProxyType({k: v for k, v in clean.items() if v})

    @property
    def table(self) -> Mapping[tuple, int]:
        return self._table

    def items(self):
        return self._table.items()

    def __getitem__(self, key: tuple) -> int:
        return self._table.get(key, 0)

    def __bool__(self):
        return bool(self._table)

    def _check(self, other):
        if other.space != self.space:
            raise SpaceMismatch(f"classes over {self.space.name} and {other.space.name}")

    def __add__(self, other):
        self._check(other)
        out = dict(self._table)
        for k, v in other.items():
            out[k] = out.get(k, 0) + v
        return MotivicClass(self.space, out)

    def __neg__(self):
        return MotivicClass(self.space, {k: -v for k, v in self.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, int):
            return MotivicClass(self.space, {k: v * other for k, v in self.items()})
        return psi_product(self, other)

    def __rmul__(self, other):
        return self * other

    def __eq__(self, other):
        if not isinstance(other, MotivicClass):
            return NotImplemented
        return self.space == other.space and dict(self._table) == dict(other._table)

    def __hash__(self):
        return hash((self.space, frozenset(self._table.items())))

    def __repr__(self):
        body = " + ".join(f"{m}({c},{d})" for (c, d), m in sorted(self.items())) or "0"
        return f"K0[{self.space.name}]({body})"


ClassPresentation = Sequence[tuple]
"""Formal sum: a sequence of ``(coefficient, CellMap)`` terms sharing one target."""


def scissor_nf(presentation: Iterable[tuple], target: CellSpace | None = None) -> MotivicClass:
    """Normal form of ``sum n_i [V_i -> X]``: every cell ``e`` of ``V_i`` adds ``n_i`` at ``(h(e), dim fiber)``."""
    terms = list(presentation)
    if target is None:
        if not terms:
            raise TargetMismatch("an empty presentation needs an explicit target")
        target = terms[0][1].target
    out: dict[tuple, int] = {}
    for coef, h in terms:
        if h.target != target:
            raise TargetMismatch(f"term {h!r} does not map to {target.name}")
        for e in h.source:
            key = (h(e), h.fiber_dim(e))
            out[key] = out.get(key, 0) + coef
    return MotivicClass(target, out)


def class_of(h: CellMap) -> MotivicClass:
    return scissor_nf([(1, h)])


def unit_class(space: CellSpace) -> MotivicClass:
    """``[X -> X]``, the unit of the fiber-product ring."""
    return class_of(identity_map(space))


def k0_pushforward(g: CellMap, xi: MotivicClass) -> MotivicClass:
    if xi.space != g.source:
        raise SpaceMismatch(f"class lives over {xi.space.name}, map starts at {g.source.name}")
    out: dict[tuple, int] = {}
    for (c, d), m in xi.items():
        key = (g(c), d + g.fiber_dim(c))
        out[key] = out.get(key, 0) + m
    return MotivicClass(g.target, out)


def k0_pullback(g: CellMap, xi: MotivicClass) -> MotivicClass:
    """Fiber product with ``g``: the extra fiber of ``c'`` over ``c`` is absorbed into ``c'``."""
    if xi.space != g.target:
        raise SpaceMismatch(f"class lives over {xi.space.name}, map targets {g.target.name}")
    out: dict[tuple, int] = {}
    for c2 in g.source:
        c = g(c2)
        for (cc, d), m in xi.items():
            if cc == c:
                out[(c2, d)] = out.get((c2, d), 0) + m
    return MotivicClass(g.source, out)


def psi_product(xi: MotivicClass, eta: MotivicClass) -> MotivicClass:
    """Fiber product over ``X``: fibers over a common stratum multiply, distinct strata are disjoint."""
    xi._check(eta)
    out: dict[tuple, int] = {}
    for (c1, d1), m1 in xi.items():
        for (c2, d2), m2 in eta.items():
            if c1 == c2:
                key = (c1, d1 + d2)
                out[key] = out.get(key, 0) + m1 * m2
    return MotivicClass(xi.space, out)


def one_star(xi: MotivicClass) -> ConstructibleFunction:
    """``[V -> X] |-> h_* 1_V``."""
    mode = xi.space.mode
    out = dict.fromkeys(xi.space.cells, 0)
    for (c, d), m in xi.items():
        out[c] += m * fiber_weight(mode, d)
    return ConstructibleFunction(xi.space, out)


def bracket_delta(delta: ConstructibleFunction, xi: MotivicClass) -> ConstructibleFunction:
    """``[V -> X] |-> h_* h^* delta``; this is also the module action of the class on ``delta``."""
    if delta.space != xi.space:
        raise SpaceMismatch("function and class live over different spaces")
    mode = xi.space.mode
    out = dict.fromkeys(xi.space.cells, 0)
    for (c, d), m in xi.items():
        out[c] += m * fiber_weight(mode, d) * delta[c]
    return ConstructibleFunction(xi.space, out)


module_action = bracket_delta


def section(alpha: ConstructibleFunction) -> MotivicClass:
    """``sum_n n [alpha^-1(n) -> X]`` over the level sets of ``alpha``."""
    space = alpha.space
    levels: dict[int, list] = {}
    for c, v in alpha.items():
        if v:
            levels.setdefault(v, []).append(c)
    terms = [(n, inclusion(space, cells)) for n, cells in sorted(levels.items())]
    return scissor_nf(terms, target=space)


def nu_mot(b: BehrendData) -> MotivicClass:
    """Level-set motivic lift of Behrend data (twisted or not, as stored)."""
    return section(b.function)


def section_and_numot(kind: str, arg) -> MotivicClass:
    if kind == "section":
        return section(arg)
    if kind == "nu_mot":
        return nu_mot(arg)
    raise ValueError(f"unknown kind {kind!r}")


def psi_power(xi: MotivicClass, copies: int) -> MotivicClass:
    """Fiber product of ``copies`` copies of ``xi``; zero copies give the unit."""
    if copies < 0:
        raise ValueError("number of copies must be non-negative")
    out = unit_class(xi.space)
    for _ in range(copies):
        out = psi_product(out, xi)
    return out


def psi_poly(coeffs: Sequence[int], xi: MotivicClass) -> MotivicClass:
    """``sum a_i * (i-fold fiber product of xi)`` for ``P(t) = sum a_i t^i``."""
    out = MotivicClass(xi.space)
    power = unit_class(xi.space)
    for i, a in enumerate(coeffs):
        if i:
            power = psi_product(power, xi)
        if a:
            out = out + power * a
    return out


def cf_poly(coeffs: Sequence[int], beta: ConstructibleFunction) -> ConstructibleFunction:
    return ConstructibleFunction(
        beta.space, {c: sum(a * v**i for i, a in enumerate(coeffs)) for c, v in beta.items()}
    )


def poly_transforms(kind: str, coeffs: Sequence[int], arg):
    if kind == "psi_poly":
        return psi_poly(coeffs, arg)
    if kind == "cf_poly":
        return cf_poly(coeffs, arg)
    raise ValueError(f"unknown kind {kind!r}")


def genus_eval(xi: MotivicClass) -> IntPoly:
    """chi_y genus: ``(c, d)`` contributes ``(-y)**(dim c + d)``."""
    if xi.space.mode is not Mode.ALGEBRAIC:
        raise ModeUnsupported("chi_y genus needs an algebraic model")
    total = IntPoly()
    for (c, d), m in xi.items():
        total = total + neg_y_power(xi.space.dim(c) + d) * m
    return total


def chi_y_dt(b: BehrendData) -> IntPoly:
    """Naive motivic DT-type chi_y genus from the twisted level-set lift."""
    tw = b if b.twisted else twist_behrend(b)
    return genus_eval(nu_mot(tw))


def dt_k0(xi: MotivicClass, b: BehrendData) -> int:
    """DT-type invariant on classes: ``[V -> X] |-> chi(V, h^* nu_X)``."""
    return euler_integral(bracket_delta(untwisted(b).function, xi))


def chi_k0(xi: MotivicClass) -> int:
    """Euler characteristic of the total space, ``chi(V)``."""
    return euler_integral(one_star(xi))
