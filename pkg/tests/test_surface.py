from math import gcd

import numpy as np
import pytest

from utility.curves import (
    closed_curve,
    geometric_intersection,
    is_trivial,
    reduce,
    self_intersection,
    signed_intersection,
)
from utility.doubling import boundary_pushoffs, double
from utility.errors import DanglingSide, Disconnected, DifferentSurfaces, NonOrientable
from utility.homology import algebraic_intersection, homology_basis, homology_class
from utility.surface import (
    annulus_surface,
    build_surface,
    disk_surface,
    fiber_preset,
    fiber_surface,
    surface_stats,
)


def test_preset_stats(torus, genus2):
    assert surface_stats(torus) == (0, 1, 0)
    assert surface_stats(genus2) == (-2, 2, 0)
    assert surface_stats(annulus_surface()) == (0, 0, 2)
    assert surface_stats(disk_surface()) == (1, 0, 1)


@pytest.mark.parametrize("g,b", [(0, 2), (0, 3), (0, 4), (1, 1), (1, 2), (2, 1)])
def test_fiber_surface(g, b):
    F = fiber_surface(g, b)
    assert F.genus == g
    assert F.n_boundary == b


def test_build_surface_errors():
    with pytest.raises(NonOrientable):
        build_surface({"polygons": [4], "pairs": [[0, 0, 0, 2, "same"]]})
    with pytest.raises(DanglingSide):
        build_surface({"polygons": [4], "pairs": [[0, 0, 0, 4]]})
    with pytest.raises(DanglingSide):
        build_surface({"polygons": [4], "pairs": [[0, 0, 0, 2], [0, 2, 0, 1]]})
    with pytest.raises(Disconnected):
        build_surface({"polygons": [4, 4], "pairs": []})


@pytest.mark.parametrize("g,b", [(0, 2), (0, 3), (1, 1), (1, 2)])
def test_double_genus_and_divides(g, b):
    D = double(fiber_surface(g, b))
    assert D.surface.genus == 2 * g + b - 1
    assert D.surface.n_boundary == 0
    assert len(D.divides) == b


def test_boundary_pushoffs_one_per_circle():
    F = fiber_preset("pants")
    pushoffs = boundary_pushoffs(F)
    assert len(pushoffs) == 3
    assert all(c.is_closed and not is_trivial(reduce(c)) for c in pushoffs)


def test_reduce_removes_backtrack(torus):
    c = closed_curve(torus, [(0, 1), (0, 3)])
    assert is_trivial(reduce(c))


TORUS_SLOPES = [(1, 0), (0, 1), (1, 1), (1, -1), (2, 1), (1, 2), (3, 1), (1, 3), (3, 2), (2, 3), (3, -1)]

SMALL_SLOPES = [
    (p, q) for p in range(-5, 6) for q in range(0, 6)
    if (q > 0 or p > 0) and gcd(abs(p), q) == 1
]


@pytest.mark.parametrize("a", TORUS_SLOPES)
@pytest.mark.parametrize("b", TORUS_SLOPES)
def test_torus_intersection_oracle(slope, a, b):
    (p, q), (r, s) = a, b
    x, y = slope(p, q), slope(r, s)
    assert geometric_intersection(x, y) == abs(p * s - q * r)
    assert abs(algebraic_intersection(homology_class(x), homology_class(y))) <= geometric_intersection(x, y)


def test_algebraic_orientation_anchor(slope):
    assert algebraic_intersection(homology_class(slope(1, 0)), homology_class(slope(0, 1))) == 1
    assert algebraic_intersection(homology_class(slope(0, 1)), homology_class(slope(1, 0))) == -1


def test_signed_intersection_matches_homology(slope):
    x, y = slope(2, 1), slope(1, 3)
    assert abs(signed_intersection(x, y)) == abs(algebraic_intersection(homology_class(x), homology_class(y)))


def test_torus_curves_are_simple(slope):
    for p, q in TORUS_SLOPES:
        assert self_intersection(slope(p, q)) == 0


def test_different_surfaces(slope):
    y = reduce(closed_curve(annulus_surface(), [(0, 1)]))
    with pytest.raises(DifferentSurfaces):
        geometric_intersection(slope(1, 0), y)


def test_non_primitive_slope_rejected(slope):
    with pytest.raises(ValueError):
        slope(2, 2)


@pytest.mark.slow
def test_torus_intersection_all_small_slopes(slope):
    curves = {ab: slope(*ab) for ab in SMALL_SLOPES}
    for (p, q), x in curves.items():
        for (r, s), y in curves.items():
            assert geometric_intersection(x, y) == abs(p * s - q * r), ((p, q), (r, s))


def test_reduce_is_idempotent(slope):
    for p, q in SMALL_SLOPES:
        c = reduce(slope(p, q))
        assert reduce(c).path == c.path


def test_reduce_drops_detour(torus, slope):
    c = slope(2, 1)
    detoured = closed_curve(torus, c.path[:1] + ((0, 2), (0, 0)) + c.path[1:])
    assert len(detoured) == len(c) + 2
    assert reduce(detoured).same_class(c)


def test_torus_vertex_link_is_trivial(torus):
    (link,) = torus.interior_vertex_links
    assert len(link) == 4
    assert is_trivial(reduce(closed_curve(torus, link)))
    assert is_trivial(reduce(closed_curve(torus, link + link)))


def test_reduce_unwinds_turn_around_torus_vertex(torus, slope):
    pushed = closed_curve(torus, [(0, 1), (0, 0), (0, 3), (0, 2), (0, 1)])
    assert reduce(pushed).same_class(slope(1, 0))


def _pushed_across_vertex(c):
    """c with a full turn around an interior vertex spliced in, None if no clean splice exists."""
    S = c.surface
    for j, h in enumerate(c.path):
        prev = c.path[j - 1]
        for link in S.interior_vertex_links:
            for t, first in enumerate(link):
                loop = link[t:] + link[:t]
                if first[0] == h[0] and S.partner(prev) != loop[0] and S.partner(loop[-1]) != h:
                    return closed_curve(S, c.path[:j] + loop + c.path[j:])
    return None


@pytest.mark.parametrize("g,b", [(0, 3), (1, 1), (1, 2)])
def test_vertex_links_trivial_on_doubles(g, b):
    S = double(fiber_surface(g, b)).surface
    assert S.interior_vertex_links
    for link in S.interior_vertex_links:
        assert is_trivial(reduce(closed_curve(S, link)))


@pytest.mark.parametrize("g,b", [(0, 3), (1, 2)])
def test_point_pushed_curve_on_double(g, b):
    D = double(fiber_surface(g, b))
    c = reduce(D.divides[0])
    other = reduce(D.divides[-1]) if b > 1 else c
    pushed = _pushed_across_vertex(c)
    assert pushed is not None
    assert len(pushed) > len(c)
    assert reduce(pushed).same_class(c)
    assert reduce(reduce(pushed)).path == reduce(pushed).path
    assert geometric_intersection(pushed, other) == geometric_intersection(c, other)


def test_torus_symplectic_coordinates(slope):
    for p, q in SMALL_SLOPES:
        assert homology_class(slope(p, q)).coordinates == (p, q)


def _standard_form(g):
    return np.block([
        [np.zeros((g, g), dtype=np.int64), np.eye(g, dtype=np.int64)],
        [-np.eye(g, dtype=np.int64), np.zeros((g, g), dtype=np.int64)],
    ])


@pytest.mark.parametrize("g,b", [(0, 3), (1, 1), (1, 2), (0, 4)])
def test_symplectic_basis_on_doubles(g, b):
    D = double(fiber_surface(g, b))
    S = D.surface
    basis = homology_basis(S)
    B = basis.symplectic_basis
    assert basis.genus == S.genus
    assert np.array_equal(B @ basis.pairing @ B.T, _standard_form(S.genus))
    classes = [homology_class(reduce(c)) for c in D.divides]
    assert all(len(x.coordinates) == 2 * S.genus for x in classes)


def test_symplectic_coordinates_carry_the_pairing(genus2):
    basis = homology_basis(genus2)
    assert np.array_equal(basis.symplectic_basis @ basis.pairing @ basis.symplectic_basis.T, _standard_form(2))
    curves = [reduce(basis.fundamental_cycle(e)) for e in basis.nontree]
    for x in curves:
        for y in curves:
            cx, cy = homology_class(x).coordinates, homology_class(y).coordinates
            expected = sum(cx[i] * cy[i + 2] - cx[i + 2] * cy[i] for i in range(2))
            assert algebraic_intersection(homology_class(x), homology_class(y)) == expected


def test_fiber_boundary_classes_have_zero_coordinates():
    F = fiber_preset("pants")
    x = homology_class(reduce(boundary_pushoffs(F)[0]))
    assert homology_basis(F).genus == 0
    assert x.coordinates == ()
    assert not x.is_zero()
