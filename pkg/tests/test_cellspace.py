import pytest
from hypothesis import given

from dtcalc import fixtures
from dtcalc import randomgen as rg
from dtcalc.cellspace import (
    CellSubset,
    Mode,
    compose_maps,
    euler_cc,
    fiber_product,
    identity_map,
    inclusion,
    point,
    product_space,
    to_point,
    validate_map,
    validate_space,
)
from dtcalc.errors import (
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

from conftest import rng_for, seeds


class TestValidateSpace:
    def test_p2_is_a_chain(self, p2):
        assert p2.lower("a2") == {"a0", "a1"}
        assert p2.variety_dim == 2
        assert p2.is_pure()

    def test_seg(self):
        s = fixtures.seg()
        assert s.closure("i") == {"p", "q", "i"}
        assert s.mode is Mode.TOPOLOGICAL

    def test_transitive_completion(self):
        x = validate_space("X", "algebraic", [("a", 0), ("b", 1), ("c", 2)], [("a", "b"), ("b", "c")])
        assert x.le("a", "c")

    def test_frontier_violation(self):
        with pytest.raises(FrontierViolation):
            validate_space("X", "algebraic", [("a", 1), ("b", 1)], [("a", "b")])

    def test_cycle(self):
        with pytest.raises(CycleInOrder):
            validate_space("X", "algebraic", [("a", 0), ("b", 1)], [("a", "b"), ("b", "a")])
        with pytest.raises(CycleInOrder):
            validate_space("X", "algebraic", [("a", 0)], [("a", "a")])

    def test_duplicate_and_unknown(self):
        with pytest.raises(DuplicateCellId):
            validate_space("X", "algebraic", [("a", 0), ("a", 1)])
        with pytest.raises(UnknownCell):
            validate_space("X", "algebraic", [("a", 0)], [("a", "zz")])

    def test_empty_space(self):
        x = validate_space("E", "topological", [])
        assert euler_cc(x) == 0 and x.variety_dim == 0


class TestSubsets:
    def test_kinds(self, p2):
        assert CellSubset(p2, {"a0"}).kind == "closed"
        assert CellSubset(p2, {"a2"}).kind == "open"
        assert CellSubset(p2, {"a1"}).kind == "locally-closed"
        assert CellSubset(p2, {"a0", "a2"}).kind == "general"

    def test_complement_of_closed_is_open(self, p2):
        z = CellSubset(p2, {"a0", "a1"})
        assert z.complement().is_open()


class TestMaps:
    def test_identity_smooth(self, p2):
        f = validate_map(p2, p2, {c: c for c in p2}, smooth=True)
        assert f.smooth and all(d == 0 for d in f.fiber_dims.values())

    def test_dbl_cover(self):
        f = fixtures.dbl_cover()
        assert set(f.fiber_dims.values()) == {0}
        assert f.preimage("v") == ["v1", "v2"]

    def test_negative_fiber_dim(self):
        with pytest.raises(NegativeFiberDim):
            validate_map(fixtures.pt(), fixtures.a1(), {"pt": "a1"})

    def test_not_monotone(self):
        z = validate_space("Z", "algebraic", [("u", 0), ("v", 1)], [("u", "v")])
        two = validate_space("T", "algebraic", [("s", 0), ("t", 1)])
        with pytest.raises(NotMonotone):
            validate_map(z, two, {"u": "s", "v": "t"})

    def test_mode_mismatch(self):
        with pytest.raises(ModeMismatch):
            validate_map(fixtures.r1(), fixtures.a1(), {"r": "a1"})

    def test_smooth_flag_rejected(self):
        # not surjective
        with pytest.raises(SmoothFlagRejected):
            validate_map(fixtures.pt(), fixtures.projective(1), {"pt": "a0"}, smooth=True)
        # the fiber over the point has a stray 0-cell, so it is not pure
        x = validate_space("X", "algebraic", [("u", 0), ("v", 1)])
        with pytest.raises(SmoothFlagRejected):
            validate_map(x, point(), {"u": "pt", "v": "pt"}, smooth=True)

    def test_pure_fibers_of_mixed_dimension_are_smooth(self):
        # P1 x P1 -> P1 has fiber dimensions 0 and 1 yet is a product projection
        _, pr1, _ = product_space(fixtures.projective(1), fixtures.projective(1))
        assert set(pr1.fiber_dims.values()) == {0, 1}
        assert validate_map(pr1.source, pr1.target, pr1.assign, smooth=True).rel_dim == 1

    def test_compose_with_dbl(self):
        f = fixtures.dbl_cover()
        g = to_point(fixtures.circ())
        h = compose_maps(f, g)
        assert h.fiber_dims == {"v1": 0, "v2": 0, "e1": 1, "e2": 1}

    def test_compose_mismatch(self):
        with pytest.raises(SpaceMismatch):
            compose_maps(fixtures.dbl_cover(), fixtures.dbl_cover())

    @given(seeds)
    def test_compose_associative_and_unital(self, seed):
        f, g, h = rg.random_chain(rng_for(seed), 3)
        left = compose_maps(compose_maps(f, g), h)
        right = compose_maps(f, compose_maps(g, h))
        assert dict(left.assign) == dict(right.assign)
        assert compose_maps(identity_map(f.source), f) == f
        assert dict(compose_maps(f, identity_map(f.target)).assign) == dict(f.assign)

    @given(seeds)
    def test_fiber_dims_add_under_composition(self, seed):
        f, g = rg.random_chain(rng_for(seed), 2)
        h = compose_maps(f, g)
        assert all(h.fiber_dim(e) == f.fiber_dim(e) + g.fiber_dim(f(e)) for e in f.source)


class TestProducts:
    def test_p1_times_p1(self):
        p, pr1, pr2 = product_space(fixtures.projective(1), fixtures.projective(1))
        assert len(p) == 4 and euler_cc(p) == 4
        assert pr1.smooth and pr1.rel_dim == 1

    def test_r1_squared(self):
        p, _, _ = product_space(fixtures.r1(), fixtures.r1())
        assert len(p) == 1 and euler_cc(p) == 1

    def test_point_is_unit(self, p2):
        p, _, pr2 = product_space(point(), p2)
        assert sorted(p.dims.values()) == sorted(p2.dims.values())
        assert pr2.smooth

    def test_mode_mismatch(self):
        with pytest.raises(ModeMismatch):
            product_space(fixtures.r1(), fixtures.a1())

    @given(seeds)
    def test_multiplicative(self, seed):
        r = rng_for(seed)
        mode = r.choice([Mode.ALGEBRAIC, Mode.TOPOLOGICAL])
        x, y = rg.random_space(r, "X", mode), rg.random_space(r, "Y", mode)
        p, _, _ = product_space(x, y)
        assert euler_cc(p) == euler_cc(x) * euler_cc(y)


class TestFiberProducts:
    def test_identity_pullback(self, p2):
        sq = fiber_product(to_point(p2), identity_map(point()))
        assert sorted(sq.corner.dims.values()) == [0, 1, 2]

    def test_dbl_square(self):
        f = fixtures.dbl_cover()
        sq = fiber_product(f, f)
        dims = sorted(sq.corner.dims.values())
        assert dims == [0, 0, 0, 0, 1, 1, 1, 1]
        assert euler_cc(sq.corner) == 0

    def test_point_of_node(self, node):
        sq = fiber_product(identity_map(node), inclusion(node, {"x0"}))
        assert len(sq.corner) == 1 and sq.corner.dims == {"(x0,x0)": 0}

    def test_unsupported(self):
        x = validate_space("X", "algebraic", [("a", 0), ("b", 0)])
        f = validate_map(x, point(), {"a": "pt", "b": "pt"})
        with pytest.raises(UnsupportedFragment):
            fiber_product(f, f)

    def test_supplied_pairing_is_checked(self):
        x = validate_space("X", "algebraic", [("a", 0), ("b", 0)])
        f = validate_map(x, point(), {"a": "pt", "b": "pt"})
        cells = [(f"w{i}", 0) for i in range(4)]
        corner = validate_space("C", "algebraic", cells)
        pairs = [("a", "a"), ("a", "b"), ("b", "a"), ("b", "b")]
        sq = fiber_product(f, f, corner=corner, pairing={f"w{i}": p for i, p in enumerate(pairs)})
        assert len(sq.corner) == 4
        with pytest.raises(Exception):
            fiber_product(f, f, corner=corner, pairing={f"w{i}": pairs[0] for i in range(4)})

    @given(seeds)
    def test_pullback_along_identity_is_isomorphic(self, seed):
        f = rg.random_space_over(rng_for(seed), rg.random_space(rng_for(seed ^ 1), "Y"), "X")
        sq = fiber_product(f, identity_map(f.target))
        assert len(sq.corner) == len(f.source)
        for w, (e, _) in sq.pairing.items():
            assert sq.corner.dim(w) == f.source.dim(e)
            assert {sq.pairing[v][0] for v in sq.corner.lower(w)} == set(f.source.lower(e))


class TestEuler:
    def test_projective_spaces(self):
        for m in range(6):
            assert euler_cc(fixtures.projective(m)) == m + 1

    def test_r1(self):
        assert euler_cc(fixtures.r1()) == -1

    def test_empty_subset(self, p2):
        assert euler_cc(p2, set()) == 0

    @given(seeds)
    def test_additive_over_closed_subsets(self, seed):
        r = rng_for(seed)
        x = rg.random_space(r, "X", r.choice([Mode.ALGEBRAIC, Mode.TOPOLOGICAL]), max_cells=6)
        z = x.down_closure(c for c in x.cells if r.chance(1, 2))
        assert CellSubset(x, z).is_closed()
        assert euler_cc(x) == euler_cc(x, z) + euler_cc(x, set(x.cells) - z)
