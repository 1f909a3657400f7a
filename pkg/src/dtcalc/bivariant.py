"""The simple bivariant theory of constructible functions and its Behrend subgroup.

An element over ``f: X -> Y`` is just a constructible function on ``X``.
Product is ``a . f^*b``, pushforward is ``f_*`` and pullback along a fiber
square is ``(g')^*``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping

from .behrend import BehrendData, Cycle, EuMatrix, eu_apply, eu_invert, twisted_function
from .cellspace import CellMap, CellSpace, FiberSquare, compose_maps
from .constructible import ConstructibleFunction, closure_indicator, indicator, pullback_cf, pushforward_cf
from .errors import ChainMismatch, SmoothRequired, SpaceMismatch
from .lattice import combine, hermite_normal_form, reduce_vector


@dataclass(frozen=True)
class BivariantElement:
    morphism: CellMap
    value: ConstructibleFunction

    def __post_init__(self):
        if self.value.space != self.morphism.source:
            raise SpaceMismatch("bivariant value must live on the source of its morphism")


def same_assign(f: CellMap, g: CellMap) -> bool:
    return f.source == g.source and f.target == g.target and dict(f.assign) == dict(g.assign)


def biv_product(a: BivariantElement, b: BivariantElement) -> BivariantElement:
    f, g = a.morphism, b.morphism
    if f.target != g.source:
        raise ChainMismatch(f"{f!r} and {g!r} do not chain")
    return BivariantElement(compose_maps(f, g), a.value * pullback_cf(f, b.value))


def biv_pushforward(f: CellMap, a: BivariantElement, g: CellMap) -> BivariantElement:
    """Push ``a`` over ``g . f`` to an element over ``g`` (every map here is proper)."""
    if f.target != g.source or not same_assign(a.morphism, compose_maps(f, g)):
        raise ChainMismatch("element does not live over g . f")
    return BivariantElement(g, pushforward_cf(f, a.value))


def biv_pullback(square: FiberSquare, a: BivariantElement, track_behrend: bool = False) -> BivariantElement:
    """Pull ``a`` over ``square.f`` back to an element over ``square.f_prime``.

    With ``track_behrend`` the pullback must stay inside the Behrend subgroup,
    which needs ``square.g`` smooth.
    """
    if not same_assign(a.morphism, square.f):
        raise ChainMismatch("element does not live over the square's right edge")
    if track_behrend and not square.g.smooth:
        raise SmoothRequired("Behrend subgroup is only stable under pullback along smooth maps")
    return BivariantElement(square.f_prime, pullback_cf(square.g_prime, a.value))


@dataclass(frozen=True)
class Membership:
    """Result of an integer membership query.

    ``coefficients`` (cell -> a_S) recombine the generators into the query on
    success. On failure ``combination`` leaves ``residual`` behind and
    ``column`` is a cell where the residual cannot be cleared by the lattice,
    whose Hermite pivot there is ``pivot`` (0: no lattice vector starts there).
    """

    member: bool
    coefficients: Mapping[str, int] | None
    combination: Mapping[str, int]
    residual: ConstructibleFunction
    column: str | None = None
    pivot: int = 0


@dataclass(frozen=True)
class GeneratorLattice:
    morphism: CellMap
    delta: ConstructibleFunction
    generators: Mapping[str, ConstructibleFunction]
    columns: tuple
    hermite_basis: list = field(repr=False)
    transform: list = field(repr=False)
    pivots: list = field(repr=False)

    def contains(self, alpha: ConstructibleFunction) -> bool:
        return membership(self, alpha).member

    def recombine(self, coefficients: Mapping[str, int]) -> ConstructibleFunction:
        out = ConstructibleFunction(self.morphism.source)
        for c, a in coefficients.items():
            if a:
                out = out + self.generators[c] * a
        return out


def delta_subgroup(f: CellMap, delta: ConstructibleFunction, locally_closed: bool = False) -> GeneratorLattice:
    """Integer span of ``1_S . f^*delta`` over single-cell closures ``S`` (or single cells)."""
    if delta.space != f.target:
        raise SpaceMismatch("delta must live on the target of the morphism")
    x = f.source
    pulled = pullback_cf(f, delta)
    columns = tuple(x.sorted_cells())
    gens = {}
    for c in columns:
        piece = indicator(x, [c]) if locally_closed else closure_indicator(x, c)
        gens[c] = piece * pulled
    rows = [[gens[c][col] for col in columns] for c in columns]
    basis, transform, pivots = hermite_normal_form(rows)
    return GeneratorLattice(f, delta, gens, columns, basis, transform, pivots)


def beh_subgroup(f: CellMap, b_target: BehrendData, locally_closed: bool = False) -> GeneratorLattice:
    """The Behrend subgroup: generators built from the twisted Behrend values of the target."""
    if b_target.space != f.target:
        raise SpaceMismatch("Behrend data must live on the target of the morphism")
    return delta_subgroup(f, twisted_function(b_target), locally_closed)


def membership(lattice: GeneratorLattice, alpha: ConstructibleFunction) -> Membership:
    x = lattice.morphism.source
    if alpha.space != x:
        raise SpaceMismatch("query must live on the source of the morphism")
    cols = lattice.columns
    target = [alpha[c] for c in cols]
    red = reduce_vector(lattice.hermite_basis, lattice.pivots, target)
    coeffs = combine(red.x, lattice.transform, len(cols))
    combination = {c: a for c, a in zip(cols, coeffs) if a}
    residual = ConstructibleFunction(x, dict(zip(cols, red.residual)))
    if red.member:
        return Membership(True, combination, combination, residual)
    return Membership(False, None, combination, residual, cols[red.column], red.pivot)


def verify_certificate(lattice: GeneratorLattice, alpha: ConstructibleFunction, result: Membership) -> bool:
    """Check a membership answer without trusting the reduction that produced it."""
    if lattice.recombine(result.combination) + result.residual != alpha:
        return False
    if result.member:
        return not result.residual.support()
    cols = list(lattice.columns)
    j = cols.index(result.column)
    if any(result.residual[c] for c in cols[:j]):
        return False
    # the Hermite row with this pivot is itself a lattice vector
    if result.pivot:
        row = lattice.hermite_basis[lattice.pivots.index(j)]
        if any(row[:j]) or row[j] != result.pivot:
            return False
        return result.residual[cols[j]] % result.pivot != 0
    return j not in lattice.pivots and result.residual[cols[j]] != 0


def divisibility_oracle(lattice: GeneratorLattice, alpha: ConstructibleFunction) -> bool:
    """Cellwise test: ``alpha`` is a member iff ``f^*delta`` divides it on every cell."""
    pulled = pullback_cf(lattice.morphism, lattice.delta)
    for c, v in alpha.items():
        d = pulled[c]
        if (d == 0 and v != 0) or (d and v % d):
            return False
    return True


class TransportedTheory:
    """Simple bivariant theory moved along isomorphisms ``Theta_X: F(X) -> Z(X)``.

    ``Theta_X`` inverts the unitriangular matrix supplied for ``X``; the
    transported operations conjugate the constructible-function ones.
    """

    def __init__(self, matrices: Mapping[CellSpace, EuMatrix]):
        self.matrices = dict(matrices)

    def matrix(self, space: CellSpace) -> EuMatrix:
        try:
            return self.matrices[space]
        except KeyError:
            raise SpaceMismatch(f"no transport matrix for {space.name}") from None

    def theta(self, alpha: ConstructibleFunction) -> Cycle:
        return eu_invert(self.matrix(alpha.space), alpha)

    def theta_inv(self, z: Cycle) -> ConstructibleFunction:
        return eu_apply(self.matrix(z.space), z)

    def product(self, f: CellMap, a: Cycle, b: Cycle) -> Cycle:
        fa = self.theta_inv(a)
        return self.theta(fa * pullback_cf(f, self.theta_inv(b)))

    def pushforward(self, f: CellMap, z: Cycle) -> Cycle:
        return self.theta(pushforward_cf(f, self.theta_inv(z)))

    def pullback(self, g: CellMap, z: Cycle) -> Cycle:
        return self.theta(pullback_cf(g, self.theta_inv(z)))


def transport_theory(matrices: Mapping[CellSpace, EuMatrix], op: str | None = None, *args):
    """Build the transported theory, or run one transported operation on it."""
    theory = TransportedTheory(matrices)
    if op is None:
        return theory
    return getattr(theory, op)(*args)
