"""Finite cell models of stratified spaces and cellular maps between them.

A space is a finite poset of cells with dimensions; ``c' < c`` means ``c'`` lies
in the closure of ``c``, and dimensions strictly increase along the order.
Every map is read as a trivial fibration over each target cell whose fiber is
an open cell (topological mode) or an affine stratum (algebraic mode) of
dimension ``dim e - dim f(e)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from graphlib import CycleError, TopologicalSorter
from types import MappingProxyType
from typing import Iterable, Mapping

from .errors import (
    CellError,
    CycleInOrder,
    DuplicateCellId,
    FrontierViolation,
    ModeMismatch,
    NegativeFiberDim,
    NotMonotone,
    SmoothFlagRejected,
    SpaceMismatch,
    UnknownCell,
    UnsupportedFragment,
)


class Mode(str, Enum):
    TOPOLOGICAL = "topological"
    ALGEBRAIC = "algebraic"


def cell_weight(mode: Mode, dim: int) -> int:
    """Compactly supported Euler characteristic of one open cell."""
    return (-1) ** dim if mode is Mode.TOPOLOGICAL else 1


# a fiber of a cellwise fibration is itself one open cell / affine stratum
fiber_weight = cell_weight


def pair_id(a: str, b: str) -> str:
    return f"({a},{b})"


class CellSpace:
    """Validated, immutable cell model. Build with :func:`validate_space`."""

    __slots__ = ("name", "mode", "_dims", "_lower", "_upper", "_hash")

    def __init__(self, name: str, mode: Mode, dims: Mapping[str, int], lower: Mapping[str, frozenset]):
        self.name = name
        self.mode = Mode(mode)
        self._dims = MappingProxyType(dict(dims))
        self._lower = MappingProxyType({c: frozenset(lower.get(c, ())) for c in self._dims})
        upper = {c: set() for c in self._dims}
        for c, below in self._lower.items():
            for b in below:
                upper[b].add(c)
        self._upper = MappingProxyType({c: frozenset(s) for c, s in upper.items()})
        self._hash = None

    @property
    def cells(self) -> tuple:
        return tuple(self._dims)

    @property
    def dims(self) -> Mapping[str, int]:
        return self._dims

    def __len__(self):
        return len(self._dims)

    def __contains__(self, cell):
        return cell in self._dims

    def __iter__(self):
        return iter(self._dims)

    def dim(self, cell: str) -> int:
        try:
            return self._dims[cell]
        except KeyError:
            raise UnknownCell(f"no cell {cell!r} in space {self.name!r}") from None

    def lower(self, cell: str) -> frozenset:
        """Cells strictly below ``cell``."""
        return self._lower[cell]

    def upper(self, cell: str) -> frozenset:
        """Cells strictly above ``cell``."""
        return self._upper[cell]

    def le(self, a: str, b: str) -> bool:
        return a == b or a in self._lower[b]

    def closure(self, cell: str) -> frozenset:
        return self._lower[cell] | {cell}

    def star(self, cell: str) -> frozenset:
        return self._upper[cell] | {cell}

    def down_closure(self, cells: Iterable[str]) -> frozenset:
        out = set()
        for c in cells:
            out |= self.closure(c)
        return frozenset(out)

    def up_closure(self, cells: Iterable[str]) -> frozenset:
        out = set()
        for c in cells:
            out |= self.star(c)
        return frozenset(out)

    @property
    def variety_dim(self) -> int:
        return max(self._dims.values(), default=0)

    def weight(self, cell: str) -> int:
        return cell_weight(self.mode, self._dims[cell])

    def is_pure(self) -> bool:
        """Every maximal cell has top dimension."""
        top = self.variety_dim
        return all(self._dims[c] == top for c in self._dims if not self._upper[c])

    def covers(self) -> list:
        """Hasse diagram as sorted ``(lower, upper)`` pairs."""
        out = []
        for c, below in self._lower.items():
            for b in below:
                if not any(b in self._lower[m] for m in below if m != b):
                    out.append((b, c))
        return sorted(out)

    def sorted_cells(self) -> list:
        """Cells by increasing dimension, ties by id; a linear extension of the order."""
        return sorted(self._dims, key=lambda c: (self._dims[c], c))

    def _key(self):
        return (self.name, self.mode, dict(self._dims), dict(self._lower))

    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, CellSpace):
            return NotImplemented
        return self._key() == other._key()

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.name, self.mode, frozenset(self._dims.items())))
        return self._hash

    def __repr__(self):
        return f"CellSpace({self.name!r}, {self.mode.value}, {len(self)} cells)"


def validate_space(name: str, mode, cells: Iterable, closure: Iterable = ()) -> CellSpace:
    """Check a raw description and return the space with its order transitively closed.

    ``cells`` is an iterable of ``(id, dim)`` pairs and ``closure`` of
    ``(lower, upper)`` pairs.
    """
    try:
        mode = Mode(mode)
    except ValueError:
        raise CellError(f"unknown mode {mode!r}") from None
    dims: dict[str, int] = {}
    for cid, dim in cells:
        if cid in dims:
            raise DuplicateCellId(f"cell id {cid!r} appears twice")
        if isinstance(dim, bool) or not isinstance(dim, int) or dim < 0:
            raise CellError(f"cell {cid!r} has invalid dimension {dim!r}")
        dims[cid] = dim

    direct: dict[str, set] = {c: set() for c in dims}
    pairs = []
    for lo, hi in closure:
        for c in (lo, hi):
            if c not in dims:
                raise UnknownCell(f"closure relation mentions unknown cell {c!r}")
        if lo == hi:
            raise CycleInOrder(f"cell {lo!r} is below itself")
        direct[hi].add(lo)
        pairs.append((lo, hi))

    try:
        order = list(TopologicalSorter(direct).static_order())
    except CycleError as exc:
        raise CycleInOrder(f"closure relation has a cycle through {exc.args[1]}") from None
    for lo, hi in pairs:
        if dims[lo] >= dims[hi]:
            raise FrontierViolation(f"{lo!r} < {hi!r} but dim {dims[lo]} >= {dims[hi]}")

    lower: dict[str, frozenset] = {}
    for c in order:
        acc = set()
        for d in direct[c]:
            acc.add(d)
            acc |= lower[d]
        lower[c] = frozenset(acc)
    return CellSpace(name, mode, dims, lower)


@dataclass(frozen=True)
class CellSubset:
    space: CellSpace
    members: frozenset

    def __post_init__(self):
        object.__setattr__(self, "members", frozenset(self.members))
        for c in self.members:
            if c not in self.space:
                raise UnknownCell(f"subset mentions unknown cell {c!r}")

    def is_closed(self) -> bool:
        return all(self.space.lower(c) <= self.members for c in self.members)

    def is_open(self) -> bool:
        return all(self.space.upper(c) <= self.members for c in self.members)

    def is_locally_closed(self) -> bool:
        # order-convex: a <= b <= c with a, c inside forces b inside
        sp = self.space
        for c in self.members:
            for a in sp.lower(c) & self.members:
                between = sp.upper(a) & sp.lower(c)
                if not between <= self.members:
                    return False
        return True

    @property
    def kind(self) -> str:
        if self.is_closed():
            return "closed"
        if self.is_open():
            return "open"
        if self.is_locally_closed():
            return "locally-closed"
        return "general"

    def complement(self) -> CellSubset:
        return CellSubset(self.space, frozenset(self.space.cells) - self.members)

    def __len__(self):
        return len(self.members)

    def __iter__(self):
        return iter(sorted(self.members))


def as_members(space: CellSpace, subset) -> frozenset:
    if subset is None:
        return frozenset(space.cells)
    if isinstance(subset, CellSubset):
        if subset.space != space:
            raise SpaceMismatch("subset belongs to a different space")
        return subset.members
    members = frozenset(subset)
    for c in members:
        space.dim(c)
    return members


def euler_cc(space: CellSpace, subset=None) -> int:
    """Compactly supported Euler characteristic of a union of cells."""
    return sum(space.weight(c) for c in as_members(space, subset))


class CellMap:
    """Validated cellular map. Build with :func:`validate_map`."""

    __slots__ = ("source", "target", "_assign", "smooth", "_fiber")

    def __init__(self, source: CellSpace, target: CellSpace, assign: Mapping[str, str], smooth: bool = False):
        self.source = source
        self.target = target
        self._assign = MappingProxyType(dict(assign))
        self.smooth = bool(smooth)
        self._fiber = MappingProxyType({e: source.dim(e) - target.dim(c) for e, c in self._assign.items()})

    @property
    def assign(self) -> Mapping[str, str]:
        return self._assign

    def __call__(self, cell: str) -> str:
        return self._assign[cell]

    def fiber_dim(self, cell: str) -> int:
        return self._fiber[cell]

    @property
    def fiber_dims(self) -> Mapping[str, int]:
        return self._fiber

    @property
    def rel_dim(self) -> int:
        return max(self._fiber.values(), default=0)

    def preimage(self, cell: str) -> list:
        return [e for e, c in self._assign.items() if c == cell]

    def is_surjective(self) -> bool:
        return set(self._assign.values()) == set(self.target.cells)

    def is_smooth_eligible(self) -> bool:
        """Surjective with every fiber pure of dimension ``rel_dim``.

        Each source cell must lie in the closure of a cell over the same target
        cell whose fiber dimension is the maximal one.
        """
        if not self.is_surjective():
            return False
        n = self.rel_dim
        src = self.source
        for e, c in self._assign.items():
            if self._fiber[e] == n:
                continue
            if not any(self._assign[u] == c and self._fiber[u] == n for u in src.upper(e)):
                return False
        return True

    def is_inclusion(self) -> bool:
        """Injective, fiber-dimension zero, and an order embedding."""
        if any(self._fiber.values()):
            return False
        if len(set(self._assign.values())) != len(self._assign):
            return False
        tgt = self.target
        for a in self.source:
            for b in self.source:
                if self.source.le(a, b) != tgt.le(self._assign[a], self._assign[b]):
                    return False
        return True

    def image(self) -> frozenset:
        return frozenset(self._assign.values())

    def __eq__(self, other):
        if not isinstance(other, CellMap):
            return NotImplemented
        return (
            self.source == other.source
            and self.target == other.target
            and dict(self._assign) == dict(other._assign)
            and self.smooth == other.smooth
        )

    def __hash__(self):
        return hash((self.source, self.target, frozenset(self._assign.items())))

    def __repr__(self):
        flag = ", smooth" if self.smooth else ""
        return f"CellMap({self.source.name} -> {self.target.name}{flag})"


def validate_map(source: CellSpace, target: CellSpace, assign: Mapping[str, str], smooth: bool = False) -> CellMap:
    if source.mode is not target.mode:
        raise ModeMismatch(f"{source.name} is {source.mode.value}, {target.name} is {target.mode.value}")
    assign = dict(assign)
    for e in assign:
        if e not in source:
            raise UnknownCell(f"assignment for unknown source cell {e!r}")
    for e in source:
        if e not in assign:
            raise CellError(f"source cell {e!r} has no image")
        if assign[e] not in target:
            raise UnknownCell(f"cell {e!r} maps to unknown target cell {assign[e]!r}")
    for e in source:
        if source.dim(e) < target.dim(assign[e]):
            raise NegativeFiberDim(f"{e!r} (dim {source.dim(e)}) maps onto {assign[e]!r} (dim {target.dim(assign[e])})")
    for e in source:
        for lo in source.lower(e):
            if not target.le(assign[lo], assign[e]):
                raise NotMonotone(f"{lo!r} <= {e!r} but {assign[lo]!r} is not <= {assign[e]!r}")
    f = CellMap(source, target, assign, smooth)
    if smooth and not f.is_smooth_eligible():
        raise SmoothFlagRejected(f"map {source.name} -> {target.name} does not have pure equidimensional fibers")
    return f


def identity_map(space: CellSpace) -> CellMap:
    return CellMap(space, space, {c: c for c in space}, smooth=True)


def point(mode=Mode.ALGEBRAIC, name: str = "PT") -> CellSpace:
    return validate_space(name, mode, [("pt", 0)])


def to_point(space: CellSpace, pt: CellSpace | None = None) -> CellMap:
    """The constant map to a one-cell space of the same mode."""
    if pt is None:
        pt = point(space.mode)
    if len(pt) != 1 or pt.variety_dim != 0:
        raise CellError(f"{pt.name} is not a point")
    (p,) = pt.cells
    f = validate_map(space, pt, {c: p for c in space})
    return CellMap(space, pt, f.assign, smooth=f.is_smooth_eligible())


def subspace(space: CellSpace, members, name: str | None = None) -> CellSpace:
    """Union of cells with the induced order."""
    members = as_members(space, members)
    cells = [(c, space.dim(c)) for c in space.cells if c in members]
    lower = {c: space.lower(c) & members for c, _ in cells}
    return CellSpace(name or f"{space.name}|sub", space.mode, dict(cells), lower)


def inclusion(space: CellSpace, members, name: str | None = None) -> CellMap:
    sub = subspace(space, members, name)
    return CellMap(sub, space, {c: c for c in sub})


def compose_maps(f: CellMap, g: CellMap) -> CellMap:
    """``g after f``."""
    if f.target != g.source:
        raise SpaceMismatch(f"cannot compose {f!r} with {g!r}")
    assign = {e: g(f(e)) for e in f.source}
    h = CellMap(f.source, g.target, assign)
    if f.smooth and g.smooth and h.is_smooth_eligible():
        h = CellMap(f.source, g.target, assign, smooth=True)
    return h


def restrict_map(f: CellMap, members, name: str | None = None) -> CellMap:
    return compose_maps(inclusion(f.source, members, name), f)


def product_space(x: CellSpace, y: CellSpace, name: str | None = None):
    """Cartesian product with componentwise order; returns ``(P, pr1, pr2)``."""
    if x.mode is not y.mode:
        raise ModeMismatch(f"{x.name} and {y.name} have different modes")
    dims = {}
    lower = {}
    for a in x:
        for b in y:
            dims[pair_id(a, b)] = x.dim(a) + y.dim(b)
    for a in x:
        for b in y:
            lower[pair_id(a, b)] = frozenset(
                pair_id(a2, b2) for a2 in x.closure(a) for b2 in y.closure(b) if (a2, b2) != (a, b)
            )
    p = CellSpace(name or f"{x.name}x{y.name}", x.mode, dims, lower)
    pr1 = CellMap(p, x, {pair_id(a, b): a for a in x for b in y})
    pr2 = CellMap(p, y, {pair_id(a, b): b for a in x for b in y})
    if pr1.is_smooth_eligible() and y.is_pure():
        pr1 = CellMap(p, x, pr1.assign, smooth=True)
    if pr2.is_smooth_eligible() and x.is_pure():
        pr2 = CellMap(p, y, pr2.assign, smooth=True)
    return p, pr1, pr2


@dataclass(frozen=True)
class FiberSquare:
    """Pullback of ``f: X -> Y`` along ``g: Y' -> Y``.

    ``g_prime: X' -> X`` and ``f_prime: X' -> Y'`` are the projections from the
    corner ``X'``; ``pairing`` sends each corner cell to its ``(e, z)`` pair.
    """

    f: CellMap
    g: CellMap
    corner: CellSpace
    g_prime: CellMap
    f_prime: CellMap
    pairing: Mapping

    def cell_of(self, e: str, z: str) -> str:
        inverse = {pz: w for w, pz in self.pairing.items()}
        return inverse[(e, z)]


def _compatible_pairs(f: CellMap, g: CellMap) -> list:
    by_target: dict[str, list] = {}
    for z in g.source.sorted_cells():
        by_target.setdefault(g(z), []).append(z)
    return [(e, z) for e in f.source.sorted_cells() for z in by_target.get(f(e), [])]


def fiber_product(f: CellMap, g: CellMap, corner: CellSpace | None = None, pairing: Mapping | None = None,
                  name: str | None = None) -> FiberSquare:
    """Fiber square of ``f: X -> Y`` and ``g: Z -> Y``.

    Supported when either map is an inclusion or smooth-flagged; otherwise the
    caller must supply the corner space and its pairing, which are then checked.
    """
    if f.target != g.target:
        raise SpaceMismatch(f"{f!r} and {g!r} have different targets")
    x, z_space, y = f.source, g.source, f.target
    pairs = _compatible_pairs(f, g)

    if corner is None:
        if not (g.is_inclusion() or f.is_inclusion() or f.smooth or g.smooth):
            raise UnsupportedFragment("general fiber product needs a caller-supplied pairing")
        dims = {}
        pairing = {}
        for e, z in pairs:
            w = pair_id(e, z)
            dims[w] = x.dim(e) + z_space.dim(z) - y.dim(f(e))
            pairing[w] = (e, z)
        lower = {}
        for w, (e, z) in pairing.items():
            below = set()
            for w2, (e2, z2) in pairing.items():
                if w2 != w and x.le(e2, e) and z_space.le(z2, z):
                    if dims[w2] >= dims[w]:
                        raise FrontierViolation(f"corner cells {w2!r} < {w!r} have dims {dims[w2]} >= {dims[w]}")
                    below.add(w2)
            lower[w] = frozenset(below)
        corner = CellSpace(name or f"{x.name}x[{y.name}]{z_space.name}", x.mode, dims, lower)
    else:
        if pairing is None:
            raise UnsupportedFragment("a supplied corner needs its pairing")
        pairing = dict(pairing)
        if set(pairing) != set(corner.cells):
            raise CellError("pairing must cover exactly the corner cells")
        images = [tuple(p) for p in pairing.values()]
        if len(set(images)) != len(images) or set(images) != set(pairs):
            raise CellError("pairing is not a bijection onto compatible pairs")
        pairing = {w: tuple(p) for w, p in pairing.items()}
        for w, (e, z) in pairing.items():
            if corner.dim(w) != x.dim(e) + z_space.dim(z) - y.dim(f(e)):
                raise CellError(f"corner cell {w!r} has the wrong dimension")

    g_prime = validate_map(corner, x, {w: e for w, (e, _) in pairing.items()})
    f_prime = validate_map(corner, z_space, {w: z for w, (_, z) in pairing.items()})
    if g.smooth and g_prime.is_smooth_eligible():
        g_prime = CellMap(corner, x, g_prime.assign, smooth=True)
    if f.smooth and f_prime.is_smooth_eligible():
        f_prime = CellMap(corner, z_space, f_prime.assign, smooth=True)
    return FiberSquare(f, g, corner, g_prime, f_prime, MappingProxyType(pairing))
