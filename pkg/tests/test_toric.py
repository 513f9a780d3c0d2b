import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from motzeta.errors import InputError, NotARefinement, NotASimplex
from motzeta.laurent import LaurentPoly
from motzeta.toric import (
    SimplicialFan,
    Triangulation,
    check_g_palindromy,
    check_h_palindromy,
    check_p_palindromy,
    check_toric_duality,
    cross_polytope_faces,
    dehn_sommerville,
    face_vector,
    orbit_count,
    p_poly,
    parallelepiped_points,
    poly_text,
    quotient_cone,
    random_cone,
    random_subdivision,
    refinement_triangulation,
    simplex_boundary_faces,
    stellar_refine,
    stellar_subdivide,
    t,
    toric_class,
    verify_aux_binomial,
)
from motzeta.laurent import L

MIDPOINT = Triangulation(1, [(1, 0), (0, 1), (Fraction(1, 2), Fraction(1, 2))], [{0, 2}, {2, 1}])


def test_midpoint_polynomials():
    # terms: two old vertices (+1 each), the new vertex -(t-1), two edges -1 each
    assert MIDPOINT.h_poly() == -t
    assert MIDPOINT.g_poly({2}) == -t - 1
    assert poly_text(MIDPOINT.g_poly({2})) == "-1 - t"


def test_standard_simplex_h_is_zero():
    for n in range(4):
        assert Triangulation.standard(n).h_poly() == LaurentPoly()


def test_carrier_and_star():
    assert MIDPOINT.carrier({2}) == {0, 1}
    assert MIDPOINT.carrier({0}) == {0}
    assert [sorted(s) for s in MIDPOINT.star({2})] == [[2], [0, 2], [1, 2]]
    with pytest.raises(NotASimplex):
        MIDPOINT.star({0, 1})


def test_invalid_triangulations():
    with pytest.raises(InputError):
        Triangulation(1, [(1, 0), (0, 2)], [{0, 1}])
    overlap = Triangulation(1, [(1, 0), (0, 1), (Fraction(1, 2), Fraction(1, 2))], [{0, 1}, {0, 2}])
    with pytest.raises(InputError):
        overlap.validate()


@settings(max_examples=25)
@given(st.integers(1, 3), st.integers(0, 6), st.integers(0, 10**6))
def test_random_subdivisions_are_palindromic(n, steps, seed):
    rng = random.Random(seed)
    S = random_subdivision(n, steps, rng)
    S.validate(rng)
    assert check_h_palindromy(S)
    for tau in S.simplices:
        assert check_g_palindromy(S, tau)


def test_stellar_subdivision_counts():
    S = stellar_subdivide(Triangulation.standard(2), {0, 1, 2})
    assert len(S.maximal) == 3 and len(S.vertices) == 4
    S.validate()


def test_aux_binomial():
    assert all(verify_aux_binomial(n) for n in range(21))


def test_dehn_sommerville():
    # boundary of the octahedron: 6 vertices, 12 edges, 8 triangles
    h, sym = dehn_sommerville([1, 6, 12, 8])
    assert h == [1, 3, 3, 1] and sym
    for m in range(1, 6):
        h, sym = dehn_sommerville(face_vector(simplex_boundary_faces(m), m))
        assert h == [1] * (m + 1) and sym
    for m in range(1, 5):
        assert dehn_sommerville(face_vector(cross_polytope_faces(m), m))[1]
    # a non-sphere (a single edge with its vertices, m = 2) is not symmetric
    assert not dehn_sommerville([1, 2, 1])[1]


def test_fan_basics():
    F = SimplicialFan.cone([(1, 0), (1, 2)])
    assert F.multiplicity(frozenset({0, 1})) == 2 and not F.is_smooth()
    # affine plane: (L-1)^2 + 2(L-1) + 1
    assert orbit_count(SimplicialFan.cone([(1, 0), (0, 1)])) == L**2
    assert len(toric_class(F).symbols()) == 4
    with pytest.raises(InputError):
        SimplicialFan(2, ((2, 0), (0, 1)), ({0, 1},))


def test_a1_cone():
    rays = [(1, 0), (1, 2)]
    R = stellar_refine(SimplicialFan.cone(rays))
    assert R.is_smooth() and (1, 1) in R.rays
    # zero cone 1, two old rays -1 each, new ray (t-1), two 2-cones +1 each
    assert p_poly(R, rays, {0, 1}) == t
    assert p_poly(R, rays, {0}) == LaurentPoly()
    # the refinement adds an exceptional line: orbit count grows by L
    assert orbit_count(R) - orbit_count(SimplicialFan.cone(rays)) == L


def test_not_a_refinement():
    R = SimplicialFan.cone([(1, 0), (0, 1)])
    with pytest.raises(NotARefinement):
        refinement_triangulation(R, [(1, 0), (1, 2)])


def test_parallelepiped_points():
    pts = parallelepiped_points([(1, 0), (1, 3)])
    # index 3: two nonzero points
    assert sorted(p for p, _ in pts) == [(1, 1), (1, 2)]


def test_quotient_cone():
    (q,) = quotient_cone([(1, 0), (1, 2)], frozenset({0}))
    assert abs(q[0]) == 1


@settings(max_examples=20)
@given(st.integers(1, 3), st.integers(0, 10**6))
def test_refinements_are_smooth_and_distinct(rank, seed):
    cone = random_cone(random.Random(seed), rank, max_entry=3)
    a, b = stellar_refine(cone, "first"), stellar_refine(cone, "last")
    assert a.is_smooth() and b.is_smooth()
    refinement_triangulation(a, cone.rays)
    refinement_triangulation(b, cone.rays)
    if rank >= 2:
        assert set(a.rays) != set(b.rays)
    for R in (a, b):
        for r in range(1, rank + 1):
            face = frozenset(range(r))
            assert check_p_palindromy(p_poly(R, cone.rays, face), r)


def test_toric_duality_report():
    rep = check_toric_duality([(1, 0), (1, 2)])
    assert rep.passed and rep.lhs == "p = t"
    assert check_toric_duality([(1, 0), (1, 2)], "last").lhs == "p = 2*t"
    with pytest.raises(InputError):
        stellar_refine(SimplicialFan.cone([(1, 0), (1, 2)]), "middle")


def test_toric_duality_small_sample():
    rng = random.Random(3)
    for rank in (1, 2, 3):
        for _ in range(4):
            cone = random_cone(rng, rank)
            assert check_toric_duality(cone, "first").passed == check_toric_duality(cone, "last").passed is True
