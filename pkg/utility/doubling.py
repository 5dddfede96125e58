"""
Doubling a surface with boundary, and the arc systems used to build cut systems.

The double is F1 (the original polygons, the positive half) glued along the
boundary to F0 (mirrored polygons). The dividing set is the boundary, drawn as
its pushoff into F1.
"""

import logging
from dataclasses import dataclass
from typing import List, Sequence, Tuple

from utility.curves import ARC, CLOSED, CombCurve, arc, closed_curve, reduce
from utility.errors import ClosedInput
from utility.homology import homology_basis
from utility.surface import Half, SurfaceComplex

logger = logging.getLogger(__name__)


def boundary_pushoffs(surface: SurfaceComplex) -> List[CombCurve]:
    """One boundary-parallel closed curve per boundary circle."""
    curves = []
    for circle in surface.boundary_circles:
        word: List[Half] = []
        for p, s in circle:
            cur = (p, (s + 1) % surface.sides[p])
            while surface.is_glued(cur):
                word.append(cur)
                q, t = surface.partner(cur)
                cur = (q, (t + 1) % surface.sides[q])
        curves.append(CombCurve(surface, CLOSED, tuple(word)))
    return curves


def default_arc_system(surface: SurfaceComplex) -> List[CombCurve]:
    """
    Arcs crossing each edge outside a spanning tree of the dual graph once.

    Cutting along them leaves the tree of polygons, a disk. Each end runs to the
    first boundary side counterclockwise from the crossed side.
    """
    if not surface.boundary_sides:
        raise ClosedInput("arc systems need boundary")
    arcs = []
    for e in homology_basis(surface).nontree:
        a, b = surface.pairs[e]
        start = _next_boundary_side(surface, a)
        end = _next_boundary_side(surface, b)
        arcs.append(arc(surface, start, [a, end]))
    return arcs


def _next_boundary_side(surface: SurfaceComplex, h: Half) -> Half:
    p, s = h
    k = surface.sides[p]
    for step in range(1, k):
        cand = (p, (s + step) % k)
        if not surface.is_glued(cand):
            return cand
    raise ClosedInput(f"polygon {p} has no boundary side")


@dataclass(frozen=True)
class DoubledSurface:
    fiber: SurfaceComplex
    surface: SurfaceComplex
    divides: Tuple[CombCurve, ...]

    @property
    def offset(self) -> int:
        return len(self.fiber.sides)

    def lift_half(self, h: Half, copy: int = 1) -> Half:
        p, s = h
        if copy == 1:
            return h
        return (p + self.offset, self.fiber.sides[p] - 1 - s)

    def embed1(self, c: CombCurve) -> CombCurve:
        """Image of a fiber curve in the positive half."""
        if c.is_closed:
            return CombCurve(self.surface, CLOSED, c.path)
        return CombCurve(self.surface, ARC, c.path, start=c.start)

    def embed0(self, c: CombCurve) -> CombCurve:
        """Image of a fiber curve in the mirrored half (orientation reversing)."""
        path = tuple(self.lift_half(h, 0) for h in c.path)
        if c.is_closed:
            return CombCurve(self.surface, CLOSED, path)
        return CombCurve(self.surface, ARC, path, start=self.lift_half(c.start, 0))

    def double_arc(self, a: CombCurve) -> CombCurve:
        """The closed curve made of an arc in F1 and its mirror in F0."""
        back = a.inverse()
        word = list(a.path) + [self.lift_half(h, 0) for h in back.path]
        return reduce(closed_curve(self.surface, word))

    def polygon_half(self, polygon: int) -> int:
        """+1 for polygons of the positive half, -1 for the mirrored half."""
        return 1 if polygon < self.offset else -1


def double(fiber: SurfaceComplex) -> DoubledSurface:
    """
    Double a surface with boundary.

    Returns:
        DoubledSurface with genus 2g + b - 1 and one dividing curve per
        boundary circle
    """
    if fiber.n_boundary == 0:
        raise ClosedInput("cannot double a closed surface")
    n = len(fiber.sides)

    def mirror(h: Half) -> Half:
        p, s = h
        return (p + n, fiber.sides[p] - 1 - s)

    pairs = list(fiber.pairs)
    pairs += [(mirror(a), mirror(b)) for a, b in fiber.pairs]
    pairs += [(u, mirror(u)) for u in fiber.boundary_sides]
    surface = SurfaceComplex(
        tuple(fiber.sides) + tuple(fiber.sides),
        tuple(pairs),
        name=f"double({fiber.name})" if fiber.name else "double",
    )
    divides = tuple(
        CombCurve(surface, CLOSED, c.path) for c in boundary_pushoffs(fiber)
    )
    logger.info(f"🔧 doubled {fiber!r} -> genus {surface.genus} with {len(divides)} dividing curves")
    return DoubledSurface(fiber, surface, divides)


def lift_curves(doubled: DoubledSurface, curves: Sequence[CombCurve]) -> List[CombCurve]:
    return [doubled.embed1(c) for c in curves]
