"""
Dehn twists, twist words and mapping-class comparisons.

Right twists turn right when they meet the twisting curve; on the torus preset
the right twist about (1, 0) sends (0, 1) to (1, 1).
"""

import logging
from dataclasses import dataclass, field
from functools import lru_cache
from typing import List, Optional, Sequence, Tuple

from utility.curves import CombCurve, closed_curve, is_trivial, loop_from, reduce
from utility.doubling import boundary_pushoffs, default_arc_system
from utility.drawing import Drawing
from utility.errors import ArcAboutCurve, CurveTooLong, PipelineDefect
from utility.homology import homology_basis
from utility.surface import SurfaceComplex, fiber_surface
from config.msd_config import MAX_CURVE_LENGTH

logger = logging.getLogger(__name__)

RIGHT = "right"
LEFT = "left"


def dehn_twist(target: CombCurve, about: CombCurve, handedness: str = RIGHT) -> CombCurve:
    """
    Twist target about a closed curve.

    Args:
        target: closed curve or arc
        about: closed curve to twist about
        handedness: "right" or "left"

    Returns:
        The reduced image of target
    """
    if not about.is_closed:
        raise ArcAboutCurve("twisting about an arc is undefined")
    if handedness not in (RIGHT, LEFT):
        raise ValueError(f"handedness must be '{RIGHT}' or '{LEFT}', got {handedness!r}")
    target, about = reduce(target), reduce(about)
    if is_trivial(about) or is_trivial(target):
        return target

    drawing = Drawing([target, about])
    inserts = {}
    for x in drawing.crossings(0, 1):
        # sign -1: the twisting curve heads to the right of target
        forward = (x.sign < 0) == (handedness == RIGHT)
        inserts.setdefault(x.first.visit, []).append(loop_from(about, x.second.visit, forward))

    path = []
    for v, h in enumerate(target.path):
        for loop in inserts.get(v, ()):
            path.extend(loop)
        path.append(h)
    if len(path) > MAX_CURVE_LENGTH:
        raise CurveTooLong(f"twisted curve has {len(path)} crossings")
    return reduce(CombCurve(target.surface, target.kind, tuple(path), target.start))


@dataclass(frozen=True)
class Letter:
    curve: CombCurve
    handedness: str = RIGHT

    def inverse(self) -> "Letter":
        return Letter(self.curve, LEFT if self.handedness == RIGHT else RIGHT)


@dataclass(frozen=True)
class TwistWord:
    """Twists applied left to right."""

    letters: Tuple[Letter, ...] = ()
    surface: Optional[SurfaceComplex] = field(default=None, compare=False)

    def __len__(self) -> int:
        return len(self.letters)

    def inverse(self) -> "TwistWord":
        return TwistWord(tuple(l.inverse() for l in reversed(self.letters)), self.surface)

    def without(self, index: int) -> "TwistWord":
        return TwistWord(self.letters[:index] + self.letters[index + 1:], self.surface)

    def __add__(self, other: "TwistWord") -> "TwistWord":
        return TwistWord(self.letters + other.letters, self.surface or other.surface)


def right_word(curves: Sequence[CombCurve]) -> TwistWord:
    surface = curves[0].surface if curves else None
    return TwistWord(tuple(Letter(c, RIGHT) for c in curves), surface)


def apply_word(word: TwistWord, c: CombCurve) -> CombCurve:
    for letter in word.letters:
        c = dehn_twist(c, letter.curve, letter.handedness)
    return c


def filling_system(surface: SurfaceComplex) -> List[CombCurve]:
    """
    Test curves whose images pin down a mapping class.

    With boundary: the default arc system (arcs are compared rel boundary) and
    the boundary-parallel curves. Closed: the fundamental cycles of the
    homology basis and the products of consecutive pairs of them.
    """
    if surface.n_boundary:
        return default_arc_system(surface) + [c for c in boundary_pushoffs(surface) if not is_trivial(c)]
    basis = homology_basis(surface)
    based = []
    for e in basis.nontree:
        a, b = surface.pairs[e]
        down = basis.path_from_root(a[0])
        up = [surface.partner(h) for h in reversed(basis.path_from_root(b[0]))]
        based.append(down + [a] + up)
    curves = [reduce(closed_curve(surface, w, check=False)) for w in based]
    for w1, w2 in zip(based, based[1:]):
        curves.append(reduce(closed_curve(surface, w1 + w2, check=False)))
    return [c for c in curves if not is_trivial(c)]


def _same_oriented(a: CombCurve, b: CombCurve) -> bool:
    if a.is_closed:
        return a.oriented_like(b)
    return a.start == b.start and a.path == b.path


def acts_identically(w1: TwistWord, w2: TwistWord, surface: SurfaceComplex) -> bool:
    """Compare two twist words on the filling system of the surface."""
    for test in filling_system(surface):
        if not _same_oriented(apply_word(w1, test), apply_word(w2, test)):
            return False
    return True


# ---- relations ----------------------------------------------------------------

@dataclass(frozen=True)
class Relation:
    name: str
    subsurface: SurfaceComplex
    lhs: TwistWord
    rhs: TwistWord
    curve_names: Tuple[Tuple[str, CombCurve], ...] = field(default=(), compare=False)

    def verify(self) -> bool:
        return acts_identically(self.lhs, self.rhs, self.subsurface)

    def named(self, name: str) -> CombCurve:
        return dict(self.curve_names)[name]


def four_holed_sphere_curves() -> dict:
    """
    Named curves on the 4-holed sphere preset (one vertex, three loops).

    a, b, c surround the holes inside the loops, d the outer boundary;
    x, y surround the holes of loops (0, 1) and (1, 2).
    """
    F = fiber_surface(0, 4)
    pushoffs = boundary_pushoffs(F)
    cores = [closed_curve(F, [(0, 4 * e), (1 + e, 2)]) for e in range(3)]
    inner, outer = [], []
    for c in pushoffs:
        (inner if any(_same_class(c, core) for core in cores) else outer).append(c)
    named = {"a": cores[0], "b": cores[1], "c": cores[2]}
    named["d"] = outer[0] if outer else pushoffs[-1]
    named["x"] = closed_curve(F, [(0, 0), (1, 2), (0, 4), (2, 2)])
    named["y"] = closed_curve(F, [(0, 4), (2, 2), (0, 8), (3, 2)])
    named["z"] = closed_curve(F, [(0, 0), (1, 2), (0, 8), (3, 2)])
    return named


def _same_class(a: CombCurve, b: CombCurve) -> bool:
    return reduce(a).same_class(reduce(b))


@lru_cache(maxsize=1)
def lantern() -> Relation:
    """
    The lantern relation: twists about the four boundary curves equal the twists
    about three interior curves, each pair of which meets twice.
    """
    named = four_holed_sphere_curves()
    F = named["a"].surface
    lhs = right_word([named[k] for k in "abcd"])
    x, y, z0 = named["x"], named["y"], named["z"]
    candidates = [z0]
    for about in (x, y):
        for hand in (RIGHT, LEFT):
            candidates.append(dehn_twist(z0, about, hand))
    for z in candidates:
        for order in ((x, y, z), (x, z, y)):
            rhs = right_word(list(order))
            if acts_identically(lhs, rhs, F):
                curve_names = tuple(sorted({**named, "z": z}.items()))
                logger.info("✅ lantern relation verified on the 4-holed sphere")
                return Relation("lantern", F, lhs, rhs, curve_names)
    raise PipelineDefect("no lantern arrangement verified on the 4-holed sphere")
