import random

import pytest

from utility.curves import arc, closed_curve, geometric_intersection
from utility.errors import ArcAboutCurve
from utility.mcg import (
    LEFT,
    RIGHT,
    Letter,
    TwistWord,
    acts_identically,
    apply_word,
    dehn_twist,
    lantern,
    right_word,
)
from utility.surface import annulus_surface, genus2_surface


def test_right_twist_anchor(slope):
    assert dehn_twist(slope(0, 1), slope(1, 0), RIGHT).same_class(slope(1, 1))


@pytest.mark.parametrize("n", range(1, 7))
def test_twist_powers(slope, n):
    c = slope(0, 1)
    for _ in range(n):
        c = dehn_twist(c, slope(1, 0), RIGHT)
    assert c.same_class(slope(n, 1))


def test_disjoint_twist_is_identity(slope):
    assert dehn_twist(slope(1, 0), slope(1, 0), RIGHT).same_class(slope(1, 0))


def test_left_undoes_right_on_sample(slope):
    rng = random.Random(7)
    slopes = [(1, 0), (0, 1), (1, 1), (1, -1), (2, 1), (1, 2), (3, 2)]
    for _ in range(20):
        a, c = rng.sample(slopes, 2)
        x, about = slope(*a), slope(*c)
        back = dehn_twist(dehn_twist(x, about, RIGHT), about, LEFT)
        assert back.same_class(x)


TWIST_TRIPLES = [
    ((1, 1), (2, 1), (0, 1)),
    ((1, 0), (0, 1), (1, 1)),
    ((0, 1), (1, 0), (2, 1)),
    ((2, 1), (1, 0), (1, 2)),
    ((1, -1), (1, 1), (3, 2)),
    ((3, 2), (1, 0), (0, 1)),
    ((1, 2), (1, 1), (1, -1)),
    ((2, 3), (3, -1), (1, 0)),
]


@pytest.mark.parametrize("handedness", [RIGHT, LEFT])
@pytest.mark.parametrize("c,a,b", TWIST_TRIPLES)
def test_twists_preserve_intersection(slope, c, a, b, handedness):
    about, x, y = slope(*c), slope(*a), slope(*b)
    before = geometric_intersection(x, y)
    assert geometric_intersection(dehn_twist(x, about, handedness), dehn_twist(y, about, handedness)) == before


def _genus2_pool():
    S = genus2_surface()
    base = [closed_curve(S, [h]) for h in [(0, 0), (0, 1), (0, 4), (0, 5)]]
    pool = list(base)
    for x, about in zip(base, base[1:] + base[:1]):
        pool.append(dehn_twist(x, about, RIGHT))
        pool.append(dehn_twist(x, about, LEFT))
    return pool


@pytest.mark.slow
def test_left_undoes_right_up_to_genus2(slope):
    rng = random.Random(2024)
    torus_pool = [slope(p, q) for p, q in [(1, 0), (0, 1), (1, 1), (1, -1), (2, 1), (1, 2), (3, 2), (2, 3), (3, -1)]]
    pools = [torus_pool, _genus2_pool()]
    for _ in range(200):
        x, about = rng.sample(rng.choice(pools), 2)
        back = dehn_twist(dehn_twist(x, about, RIGHT), about, LEFT)
        assert back.same_class(x)
        forth = dehn_twist(dehn_twist(x, about, LEFT), about, RIGHT)
        assert forth.same_class(x)


def test_twist_about_arc_rejected(slope):
    A = annulus_surface()
    a = arc(A, (0, 0), [(0, 2)])
    with pytest.raises(ArcAboutCurve):
        dehn_twist(a, a, RIGHT)


def test_apply_word(slope):
    T = slope(1, 0).surface
    assert apply_word(TwistWord((), T), slope(2, 1)).same_class(slope(2, 1))
    word = right_word([slope(1, 0)])
    assert apply_word(word, slope(0, 1)).same_class(dehn_twist(slope(0, 1), slope(1, 0), RIGHT))
    w = right_word([slope(1, 0), slope(0, 1)])
    assert apply_word(w.inverse(), apply_word(w, slope(1, 1))).same_class(slope(1, 1))


def test_acts_identically_on_torus(slope):
    T = slope(1, 0).surface
    a, b = slope(1, 0), slope(0, 1)
    once = TwistWord((Letter(a, RIGHT),), T)
    twice = TwistWord((Letter(a, RIGHT), Letter(a, RIGHT)), T)
    assert acts_identically(once, once, T)
    assert not acts_identically(once, twice, T)
    assert not acts_identically(right_word([a, b]), TwistWord((), T), T)


def test_lantern_relation():
    rel = lantern()
    assert len(rel.lhs) == 4
    assert len(rel.rhs) == 3
    assert rel.verify()
    assert acts_identically(rel.lhs, rel.rhs, rel.subsurface)


@pytest.mark.parametrize("i", range(3))
def test_lantern_fails_after_dropping_a_letter(i):
    rel = lantern()
    assert not acts_identically(rel.lhs, rel.rhs.without(i), rel.subsurface)
