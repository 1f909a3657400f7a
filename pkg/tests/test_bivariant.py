import pytest
from hypothesis import given

from dtcalc import fixtures
from dtcalc import randomgen as rg
from dtcalc.behrend import (
    Cycle,
    EuMatrix,
    closure_matrix,
    identity_matrix,
    smooth_behrend,
    smooth_pullback_behrend,
    twist_behrend,
    user_behrend,
)
from dtcalc.bivariant import (
    BivariantElement,
    beh_subgroup,
    biv_product,
    biv_pullback,
    biv_pushforward,
    delta_subgroup,
    divisibility_oracle,
    membership,
    transport_theory,
    verify_certificate,
)
from dtcalc.cellspace import (
    Mode,
    compose_maps,
    fiber_product,
    identity_map,
    inclusion,
    product_space,
    to_point,
)
from dtcalc.constructible import (
    ConstructibleFunction,
    closure_indicator,
    constant,
    indicator,
    pullback_cf,
    pushforward_cf,
    zero,
)
from dtcalc.errors import ChainMismatch, SmoothRequired, SpaceMismatch

from conftest import rng_for, seeds


def dbl_chain():
    f = fixtures.dbl_cover()
    return f, to_point(f.target)


class TestOperations:
    def test_units(self):
        f, g = dbl_chain()
        out = biv_product(BivariantElement(f, constant(f.source)), BivariantElement(g, constant(g.source)))
        assert out.value == constant(f.source)
        assert dict(out.morphism.assign) == dict(compose_maps(f, g).assign)

    def test_dbl_product_vanishes(self):
        f, g = dbl_chain()
        a = BivariantElement(f, indicator(f.source, {"v1"}))
        b = BivariantElement(g, indicator(g.source, {"e"}))
        assert not biv_product(a, b).value.support()

    def test_chain_mismatch(self):
        f, g = dbl_chain()
        a = BivariantElement(f, constant(f.source))
        with pytest.raises(ChainMismatch):
            biv_product(a, a)
        with pytest.raises(SpaceMismatch):
            BivariantElement(f, constant(f.target))

    def test_pushforward_examples(self):
        f, g = dbl_chain()
        a = BivariantElement(compose_maps(f, g), constant(f.source))
        assert biv_pushforward(f, a, g).value == constant(f.target, 2)
        b = BivariantElement(g, constant(g.source))
        assert biv_pushforward(identity_map(g.source), b, g).value == b.value
        with pytest.raises(ChainMismatch):
            biv_pushforward(f, b, g)

    def test_pullback_along_identity(self):
        f, _ = dbl_chain()
        sq = fiber_product(f, identity_map(f.target))
        a = BivariantElement(f, indicator(f.source, {"e2"}))
        out = biv_pullback(sq, a)
        assert {sq.pairing[w][0]: v for w, v in out.value.items()} == dict(a.value.items())

    def test_pullback_tracking_needs_smooth(self, node):
        f = identity_map(node)
        sq = fiber_product(f, inclusion(node, {"x0"}))
        a = BivariantElement(f, constant(node))
        biv_pullback(sq, a)
        with pytest.raises(SmoothRequired):
            biv_pullback(sq, a, track_behrend=True)

    def test_b7_on_dbl(self):
        f, h = dbl_chain()
        g = inclusion(f.target, {"v"})
        sq = fiber_product(f, g)
        a = BivariantElement(f, indicator(f.source, {"v1", "e1"}))
        b = BivariantElement(compose_maps(g, h), constant(g.source, 5))
        lhs = biv_pushforward(sq.g_prime, biv_product(biv_pullback(sq, a), b), compose_maps(f, h))
        rhs = biv_product(a, biv_pushforward(g, b, h))
        assert lhs.value == rhs.value


class TestMembership:
    def test_smooth_target_everything_is_member(self, p2):
        f = identity_map(p2)
        lat = beh_subgroup(f, smooth_behrend(p2))
        for alpha in (constant(p2), indicator(p2, {"a1"}) * 7, closure_indicator(p2, "a2") * -2):
            res = membership(lat, alpha)
            assert res.member and verify_certificate(lat, alpha, res)
            assert lat.recombine(res.coefficients) == alpha

    def test_node_dichotomy(self, node):
        lat = beh_subgroup(identity_map(node), user_behrend(node, fixtures.NODE_BEHREND))
        assert lat.generators["e"].values == {"e": 1, "x0": 3}
        assert lat.generators["x0"].values == {"e": 0, "x0": 3}
        res = membership(lat, constant(node))
        assert not res.member and res.column == "x0" and res.pivot == 3
        assert verify_certificate(lat, constant(node), res)

    def test_zero_is_member(self, node):
        lat = beh_subgroup(identity_map(node), user_behrend(node, fixtures.NODE_BEHREND))
        res = membership(lat, zero(node))
        assert res.member and not any(res.coefficients.values())

    def test_smooth_pullback_membership(self):
        p1 = fixtures.projective(1)
        _, pr1, _ = product_space(p1, p1)
        f = identity_map(p1)
        lat = beh_subgroup(f, smooth_behrend(p1))
        alpha = closure_indicator(p1, "a1")
        assert lat.contains(alpha)
        sq = fiber_product(f, pr1)
        pulled = biv_pullback(sq, BivariantElement(f, alpha), track_behrend=True)
        lat2 = beh_subgroup(sq.f_prime, smooth_pullback_behrend(pr1, smooth_behrend(p1)))
        assert lat2.contains(pulled.value)

    def test_forged_certificate_rejected(self, node):
        lat = beh_subgroup(identity_map(node), user_behrend(node, fixtures.NODE_BEHREND))
        res = membership(lat, constant(node))
        forged = type(res)(True, {"e": 1}, {"e": 1}, res.residual)
        assert not verify_certificate(lat, constant(node), forged)

    @given(seeds)
    def test_agrees_with_divisibility(self, seed):
        r = rng_for(seed)
        f = rg.random_space_over(r, rg.random_space(r, "Y"), "X", max_cells=5)
        b = rg.random_behrend(r, f.target, -4, 4)
        lat = beh_subgroup(f, b)
        alpha = rg.random_cf(r, f.source, -6, 6)
        if r.chance(1, 2):
            alpha = lat.recombine({c: r.integer(-3, 3) for c in lat.columns})
        res = membership(lat, alpha)
        assert verify_certificate(lat, alpha, res)
        assert res.member == divisibility_oracle(lat, alpha)

    @given(seeds)
    def test_locally_closed_variant_spans_the_same_lattice(self, seed):
        r = rng_for(seed)
        f = rg.random_space_over(r, rg.random_space(r, "Y"), "X", max_cells=5)
        delta = rg.random_cf(r, f.target)
        closed, local = delta_subgroup(f, delta), delta_subgroup(f, delta, locally_closed=True)
        assert closed.hermite_basis == local.hermite_basis


class TestTransport:
    def _matrices(self, r, spaces, kind):
        out = {}
        for s in spaces:
            if kind == "identity":
                out[s] = identity_matrix(s)
            elif kind == "closure":
                out[s] = closure_matrix(s)
            else:
                out[s] = EuMatrix(s, rg.random_unitriangular(r, s))
        return out

    def test_identity_leaves_operations(self, p2):
        theory = transport_theory({p2: identity_matrix(p2)})
        alpha = ConstructibleFunction(p2, {"a0": 2, "a1": -1, "a2": 4})
        assert dict(theory.theta(alpha).items()) == dict(alpha.items())

    def test_closure_matrices_give_cycles(self, node):
        sub = inclusion(node, {"x0"})
        theory = transport_theory({node: closure_matrix(node), sub.source: closure_matrix(sub.source)})
        z = Cycle(sub.source, {"x0": 1})
        assert theory.pushforward(sub, z) == Cycle(node, {"x0": 1})
        assert theory.theta(closure_indicator(node, "e")) == Cycle(node, {"e": 1})

    def test_eu_on_node_matches_conjugation(self, node):
        E = EuMatrix(node, {("x0", "e"): 2})
        f = identity_map(node)
        theory = transport_theory({node: E})
        a, b = Cycle(node, {"e": 1}), Cycle(node, {"x0": 1, "e": -1})
        direct = theory.theta(theory.theta_inv(a) * theory.theta_inv(b))
        assert transport_theory({node: E}, "product", f, a, b) == direct

    @given(seeds)
    def test_grothendieck_transformation_laws(self, seed):
        r = rng_for(seed)
        kind = r.choice(["identity", "closure", "random"])
        f, g = rg.random_chain(r, 2)
        theory = transport_theory(self._matrices(r, [f.source, f.target, g.target], kind))
        a, b = rg.random_cf(r, f.source), rg.random_cf(r, f.target)
        th = theory.theta
        assert th(a * pullback_cf(f, b)) == theory.product(f, th(a), th(b))
        assert th(pushforward_cf(f, a)) == theory.pushforward(f, th(a))
        assert th(pullback_cf(f, b)) == theory.pullback(f, th(b))
        assert theory.theta_inv(th(a)) == a
