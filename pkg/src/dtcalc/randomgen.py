"""Random cell models, maps, squares and functions for the property harnesses.

Every generator draws only from the supplied :class:`Lcg64`, so a seed fixes
the instance completely.
"""

from __future__ import annotations

from .behrend import BehrendData, Provenance
from .cellspace import CellMap, CellSpace, Mode, inclusion, product_space, validate_map, validate_space
from .constructible import ConstructibleFunction
from .rng import Lcg64


def random_space(rng: Lcg64, name: str = "X", mode=Mode.ALGEBRAIC, max_cells: int = 4, max_dim: int = 2,
                 min_cells: int = 1) -> CellSpace:
    """Random poset: each pair of cells of different dimension is related with probability one half."""
    n = rng.integer(min_cells, max_cells)
    dims = [rng.integer(0, max_dim) for _ in range(n)]
    cells = [(f"c{i}", d) for i, d in enumerate(dims)]
    closure = [
        (f"c{i}", f"c{j}")
        for i in range(n) for j in range(n)
        if dims[i] < dims[j] and rng.chance(1, 2)
    ]
    return validate_space(name, mode, cells, closure)


def make_pure(space: CellSpace, name: str | None = None) -> CellSpace:
    """Add one top cell over every maximal cell below the top dimension."""
    top = space.variety_dim
    loose = [c for c in space if not space.upper(c) and space.dim(c) < top]
    cells = [(c, space.dim(c)) for c in space.cells]
    closure = [(lo, c) for c in space for lo in space.lower(c)]
    if loose:
        cells.append(("top", top))
        closure += [(c, "top") for c in loose]
    return validate_space(name or space.name, space.mode, cells, closure)


def random_pure_space(rng: Lcg64, name: str = "F", mode=Mode.ALGEBRAIC, max_cells: int = 2, max_dim: int = 1):
    return make_pure(random_space(rng, name, mode, max_cells, max_dim), name)


def random_space_over(rng: Lcg64, base: CellSpace, name: str = "X", max_cells: int = 4, max_fiber: int = 1,
                      surjective: bool = False) -> CellMap:
    """Random ``f: X -> base``; order relations are drawn only where monotonicity allows."""
    if not len(base):
        return validate_map(validate_space(name, base.mode, []), base, {})
    targets = list(base.cells) if surjective else []
    extra = rng.integer(0 if targets else 1, max_cells)
    targets += [rng.choice(base.cells) for _ in range(extra)]
    cells, assign = [], {}
    for i, c in enumerate(targets):
        e = f"c{i}"
        cells.append((e, base.dim(c) + rng.integer(0, max_fiber)))
        assign[e] = c
    closure = []
    for e1, d1 in cells:
        for e2, d2 in cells:
            if d1 < d2 and base.le(assign[e1], assign[e2]) and rng.chance(1, 2):
                closure.append((e1, e2))
    x = validate_space(name, base.mode, cells, closure)
    return validate_map(x, base, assign)


def random_smooth_over(rng: Lcg64, base: CellSpace, name: str = "S") -> CellMap:
    """Projection ``base x F -> base`` with ``F`` a small random pure space."""
    fiber = random_pure_space(rng, f"{name}F", base.mode)
    _, pr1, _ = product_space(base, fiber, name)
    return pr1


def random_inclusion(rng: Lcg64, base: CellSpace, name: str = "S") -> CellMap:
    members = [c for c in base.cells if rng.chance(2, 3)]
    return inclusion(base, members, name)


def random_base_change(rng: Lcg64, base: CellSpace, name: str, kind: str | None = None) -> CellMap:
    """A map into ``base`` inside the supported fiber-square fragment."""
    kind = kind or rng.choice(["inclusion", "smooth"])
    if kind == "inclusion":
        return random_inclusion(rng, base, name)
    return random_smooth_over(rng, base, name)


def random_chain(rng: Lcg64, length: int, mode=Mode.ALGEBRAIC, names="WXYZUV", max_cells: int = 4) -> list:
    """Composable maps ``f_1: X_1 -> X_2, ..., f_length``, built from the far end backwards."""
    base = random_space(rng, names[length], mode, max_cells)
    maps = []
    for i in range(length - 1, -1, -1):
        f = random_space_over(rng, base, names[i], max_cells)
        maps.append(f)
        base = f.source
    return maps[::-1]


def random_cf(rng: Lcg64, space: CellSpace, lo: int = -3, hi: int = 3) -> ConstructibleFunction:
    return ConstructibleFunction(space, {c: rng.integer(lo, hi) for c in space.cells})


def random_behrend(rng: Lcg64, space: CellSpace, lo: int = -5, hi: int = 5) -> BehrendData:
    return BehrendData(random_cf(rng, space, lo, hi), Provenance.USER)


def random_unitriangular(rng: Lcg64, space: CellSpace, lo: int = -3, hi: int = 3) -> dict:
    """Entries of a random unitriangular matrix over the closure order."""
    return {(sub, c): rng.integer(lo, hi) for c in space for sub in space.lower(c)}
