import random

import pytest

from utility.doubling import boundary_pushoffs
from utility.errors import EmptyFiberBoundary, NotEmbeddable, NullHomologousCycle
from utility.homology import quotient_by_curves
from utility.invariants import euler_char, h1_manifold
from utility.mcg import TwistWord, acts_identically
from utility.palf import (
    Factorization,
    band_cycle,
    compile_palf,
    double_factorization,
    factorize,
    make_palf,
    palf_from_preset,
    replay_factorization,
    stabilize_palf,
    validate_palf,
)
from utility.surface import fiber_surface, torus_surface


def _band_cycles(F, n, rng):
    bands = len(F.sides) - 1
    return [band_cycle(F, rng.randrange(bands)) for _ in range(n)]


@pytest.mark.parametrize("g,b", [(0, 2), (0, 3), (1, 1), (0, 4), (1, 2)])
@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_genus_formula(g, b, n):
    rng = random.Random(100 * g + 10 * b + n)
    F = fiber_surface(g, b)
    D = compile_palf(make_palf(F, _band_cycles(F, n, rng)))
    assert D.genus == 2 * g + b - 1
    assert len(D.cut_systems) == n + 1
    for system in D.cut_systems:
        assert len(system) == D.genus
        for c in system:
            assert D.meets_divides(c) == 2


@pytest.mark.slow
def test_genus_formula_genus2_fiber():
    rng = random.Random(214)
    F = fiber_surface(2, 1)
    D = compile_palf(make_palf(F, _band_cycles(F, 4, rng)))
    assert D.genus == 4
    assert len(D.cut_systems) == 5
    for system in D.cut_systems:
        assert len(system) == 4
        for c in system:
            assert D.meets_divides(c) == 2


def test_validate_palf_errors():
    F = fiber_surface(1, 1)
    with pytest.raises(NullHomologousCycle) as info:
        validate_palf(make_palf(F, [band_cycle(F, 0), boundary_pushoffs(F)[0]]))
    assert info.value.index == 1
    T = torus_surface()
    with pytest.raises(EmptyFiberBoundary):
        validate_palf(make_palf(T, []))
    A = fiber_surface(0, 2)
    with pytest.raises(NotEmbeddable):
        validate_palf(make_palf(A, [band_cycle(A, 0)], arc_system=[]))


def test_unknown_preset_cycle():
    with pytest.raises(ValueError):
        palf_from_preset("annulus", ["nope"])


def test_compiled_first_system_is_doubled_arcs():
    D = compile_palf(palf_from_preset("annulus", ["core"]))
    assert D.provenance.kind == "palf-compiled"
    assert D.doubled is not None
    assert len(D.provenance.witness.steps) == 1


def test_double_factorization_letters():
    palf = palf_from_preset("holed-torus", ["a", "b", "a"])
    fac = double_factorization(palf)
    assert len(fac.letters) == 3
    assert fac.sectors == ((0, 1), (1, 2), (2, 3))
    assert all(fac.positive)


def test_factorize_genus1():
    D = compile_palf(palf_from_preset("annulus", ["core", "core"]))
    fac = factorize(D)
    assert isinstance(fac, Factorization)
    assert len(fac.letters) == 2
    assert replay_factorization(D, fac)


@pytest.mark.parametrize("seed", range(20))
def test_homology_matches_fiber_quotient(seed):
    rng = random.Random(seed)
    g, b = rng.choice([(0, 2), (0, 3), (1, 1)])
    F = fiber_surface(g, b)
    cycles = _band_cycles(F, rng.randint(1, 4), rng)
    D = compile_palf(make_palf(F, cycles))
    assert h1_manifold(D) == quotient_by_curves(F, cycles)
    if g == 0 and b == 2:
        assert euler_char(D) == F.chi + len(cycles)


def test_stabilize_palf_adds_a_handle():
    palf = palf_from_preset("annulus", ["core"])
    bigger = stabilize_palf(palf)
    assert len(bigger.cycles) == 2
    assert bigger.fiber.chi == palf.fiber.chi - 1
    assert bigger.names == ("core", "stab")


def test_factorize_acts_like_the_monodromy():
    palf = palf_from_preset("annulus", ["core", "core"])
    D = compile_palf(palf)
    fac = factorize(D)
    assert isinstance(fac, Factorization)
    expected = double_factorization(palf)
    assert acts_identically(fac.word, expected.word, D.surface)
    for i in range(D.n_sectors):
        assert acts_identically(fac.block(i), expected.block(i), D.surface)
    assert not acts_identically(fac.word, TwistWord(expected.letters[:1], D.surface), D.surface)


@pytest.mark.slow
@pytest.mark.parametrize("g,b,n", [(0, 3, 1), (0, 3, 2), (1, 1, 2)])
def test_euler_char_is_fiber_chi_plus_cycles(g, b, n):
    rng = random.Random(10 * g + b + n)
    F = fiber_surface(g, b)
    D = compile_palf(make_palf(F, _band_cycles(F, n, rng)))
    assert euler_char(D) == F.chi + n
