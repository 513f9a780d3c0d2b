import random

import pytest
from hypothesis import given, strategies as st

from motzeta.errors import DualityUndefined, InputError, MissingTag
from motzeta.grothring import GrothClass, StratumSymbol, dualize
from motzeta.laurent import L
from motzeta.ratfunc import TRational
from motzeta.resolution import (
    Component,
    ResolutionData,
    ResolvedGenerator,
    apply_nearby_morphism,
    check_functional_naive,
    check_functional_sprime,
    check_morphism_duality,
    check_power_rule,
    check_self_duality,
    check_smooth_pullback,
    equivariant_zeta,
    exhaustive_grid,
    naive_zeta,
    nearby_fiber,
    nearby_fiber_direct,
    power_transform,
    quotient_relabel,
    random_resolution,
    smooth_pullback,
)

pairs = st.tuples(st.integers(1, 6), st.integers(1, 6))
resolutions = st.builds(
    ResolutionData.from_pairs, st.integers(1, 4), st.lists(pairs, min_size=0, max_size=3)
)


def smooth_point_x():
    return ResolutionData.from_pairs(1, [(1, 1)])


def test_validation():
    with pytest.raises(InputError):
        Component("a", 0)
    with pytest.raises(InputError):
        ResolutionData(0)
    with pytest.raises(InputError):
        ResolutionData(2, (Component("a", 1), Component("a", 2)))


def test_naive_zeta_of_coordinate():
    # f = x on A^1: E_empty^o = A^1 - 0, E_1^o = point
    data = smooth_point_x()
    z = naive_zeta(data)
    ctx = data.naive_basis
    expected = TRational.term(GrothClass.of(ctx.open(()))) + TRational.term(
        GrothClass.of(ctx.open({0}), L - 1), 0, [(1, 1)]
    )
    assert z == expected
    # ord_t x(t) = n for n >= 1 has measure (L-1) L^-n over the point
    for n in range(1, 5):
        assert z.series_coefficient(n) == GrothClass.of(ctx.open({0}), (L - 1) * L**-n)


def test_nearby_fiber_of_power():
    # f = x^m: psi is the mu_m-cover of the origin
    for m in range(1, 5):
        data = ResolutionData.from_pairs(1, [(m, 1)])
        psi = nearby_fiber(data)
        (sym,) = psi.symbols()
        assert sym.mu_order == m and psi.coeff(sym) == L**0


def test_nearby_fiber_normal_crossing():
    # xy: psi = [~E_1^o] + [~E_2^o] + (1-L)[~E_12^o]
    data = ResolutionData.from_pairs(2, [(1, 1), (1, 1)])
    ctx = data.equivariant_basis
    psi = nearby_fiber(data)
    assert psi == GrothClass.of(ctx.open({0})) + GrothClass.of(ctx.open({1})) + GrothClass.of(ctx.open({0, 1}), 1 - L)


@given(resolutions)
def test_nearby_limit_agrees_with_formula(data):
    assert -equivariant_zeta(data).eval_at_infinity() == nearby_fiber_direct(data)


@given(resolutions)
def test_identities_hold(data):
    assert check_self_duality(data)
    assert check_functional_naive(data)
    assert check_functional_sprime(data)


@given(resolutions, st.integers(1, 4))
def test_power_and_pullback(data, m):
    assert check_power_rule(data, m)
    assert check_smooth_pullback(data, m)


def test_power_transform_scales_multiplicities():
    data = ResolutionData.from_pairs(2, [(2, 1), (3, 4)])
    assert power_transform(data, 3).multiplicities == (6, 9)
    with pytest.raises(InputError):
        power_transform(data, 0)


def test_broken_identity_is_reported():
    # duality of a class that is not self-dual fails visibly
    sym = StratumSymbol("Y", base="X0", dim=1, proper_smooth=True)
    a = GrothClass.of(sym, L)
    assert dualize(a) != a.scale(L**0)


def test_report_render_and_dict():
    rep = check_self_duality(smooth_point_x())
    assert rep.render().startswith("selfdual: PASS\n  lhs = ")
    assert rep.to_dict()["passed"] is True


def test_grid_size():
    grid = list(exhaustive_grid())
    # d in 1..3 times (1 + 9 + 81 + 729) combinations
    assert len(grid) == 3 * (1 + 9 + 81 + 729)


def test_random_resolution_bounds():
    rng = random.Random(5)
    for _ in range(50):
        r = random_resolution(rng)
        assert 1 <= len(r.components) <= 5 and 1 <= r.d <= 5
        assert all(1 <= c.m <= 9 and 1 <= c.n <= 9 for c in r.components)


def test_nearby_morphism():
    a = ResolvedGenerator("Y", ResolutionData.from_pairs(2, [(1, 1)]))
    b = ResolvedGenerator("Z", ResolutionData.from_pairs(2, [(2, 1), (1, 2)]))
    inputs = [(L, a), (1 - L, b)]
    out = apply_nearby_morphism(inputs)
    assert {s.id for s in out.symbols()} >= {"Y:Et_1_o"}
    assert check_morphism_duality(inputs)
    tagged = ResolvedGenerator("W", ResolutionData.from_pairs(2, [(1, 1)], group_tags=("H",)))
    with pytest.raises(DualityUndefined):
        check_morphism_duality([(1, tagged)])


def test_pushforward_naming():
    gen = ResolvedGenerator("Y", ResolutionData.from_pairs(1, [(1, 1)]), pushforward=(("Et_1_o", "origin"),))
    (sym,) = apply_nearby_morphism([(1, gen)]).symbols()
    assert sym.id == "origin" and sym.base == "X0"


def test_quotient_relabel():
    data = ResolutionData.from_pairs(2, [(2, 1)], group_tags=("H",))
    psi = nearby_fiber(data)
    q = quotient_relabel(psi, "H")
    assert all(s.base == "H\\X0" and s.group_tags == () for s in q.symbols())
    z = quotient_relabel(equivariant_zeta(data), "H")
    assert all(s.base == "H\\X0" for c, _, _ in z.terms() for s in c.symbols())
    with pytest.raises(MissingTag):
        quotient_relabel(nearby_fiber(smooth_point_x()), "H")


@given(resolutions, st.integers(1, 3))
def test_identities_survive_pullback(data, k):
    pulled = smooth_pullback(data, k)
    assert check_self_duality(pulled)
    assert check_functional_naive(pulled)
    assert check_functional_sprime(pulled)


def test_pullback_keeps_disjoint_components_disjoint():
    data = ResolutionData.from_pairs(1, [(1, 1), (2, 1)])
    pulled = smooth_pullback(data, 2)
    assert len(pulled.equivariant_basis.subsets()) == 2
