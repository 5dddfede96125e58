"""
Concrete drawings of several curves at once.

Strands crossing a side are ordered by comparing where they go next, so that
parallel strands stay parallel; inside each polygon every visit becomes a
straight chord between points placed on a convex arc. Crossings are then
exact rational geometry.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from functools import cmp_to_key
from typing import Dict, List, Optional, Sequence, Tuple

from utility.curves import CombCurve, reduce
from utility.surface import Half

logger = logging.getLogger(__name__)

Point = Tuple[Fraction, Fraction]
PointId = Tuple[int, int]  # (curve, crossing index); index -1 is an arc's start


@dataclass(frozen=True)
class Chord:
    curve: int
    visit: int
    polygon: int
    start: Point
    end: Point
    start_param: Fraction
    end_param: Fraction
    start_mark: Tuple[int, int] = (0, 0)  # (side, ccw ordinal)
    end_mark: Tuple[int, int] = (0, 0)


@dataclass(frozen=True)
class Crossing:
    """Chord `first` (of the first curve) meets chord `second` at parameter t along first."""
    first: Chord
    second: Chord
    t: Fraction
    sign: int  # +1 when the second chord passes from right to left of the first


def _ray_values(c: CombCurve, index: int, cap: int) -> List[int]:
    """Turn values (exit - entry mod k) for the visits after crossing `index`."""
    visits = c.visits()
    n = len(visits)
    sides = c.surface.sides
    values = []
    v = index
    for _ in range(cap):
        v += 1
        if v >= n:
            if not c.is_closed:
                break
            v %= n
        p, entry, out = visits[v]
        values.append((out - entry) % sides[p])
    return values


def _cmp_rays(x: Tuple, y: Tuple) -> int:
    for a, b in zip(x[0], y[0]):
        if a != b:
            return -1 if a < b else 1
    # parallel strands: a fixed side relative to each curve's own direction
    for a, b in ((x[1], y[1]), (x[2], y[2])):
        if a != b:
            return -1 if a < b else 1
    return 0


class Drawing:
    """Positions of all strands of `curves` on the sides of the complex."""

    def __init__(self, curves: Sequence[CombCurve]):
        if not curves:
            raise ValueError("nothing to draw")
        self.curves = list(curves)
        self.surface = curves[0].surface
        S = self.surface
        cap = 2 * max(len(c.path) for c in curves) + 2
        inverses = [c.inverse() for c in curves]

        on_side: Dict[Half, List[Tuple[List[int], int, PointId]]] = {}
        for ci, c in enumerate(curves):
            n = len(c.path)
            for j, h in enumerate(c.path):
                if S.is_glued(h):
                    base = S.canonical(h)
                    agrees = h == base
                    if agrees:
                        ray = _ray_values(c, j, cap)
                    else:
                        ray = _ray_values(inverses[ci], (n - 2 - j) % n, cap)
                else:
                    # an arc's last point, seen from inside the polygon
                    base = h
                    agrees = False
                    ray = _ray_values(inverses[ci], -1, cap)
                tie = (ci + 1) if agrees else -(ci + 1)
                on_side.setdefault(base, []).append((ray, tie, (ci, j)))
            if not c.is_closed:
                on_side.setdefault(c.start, []).append((_ray_values(c, -1, cap), ci + 1, (ci, -1)))

        # ordinal in the polygon's counterclockwise direction along each side
        self.slot: Dict[Tuple[Half, PointId], Tuple[int, int]] = {}
        for base, entries in on_side.items():
            ordered = sorted(entries, key=cmp_to_key(_cmp_rays))
            if not S.is_glued(base):
                ordered.reverse()
            m = len(ordered)
            for r, (_, _, pid) in enumerate(ordered):
                self.slot[(base, pid)] = (r, m)
                if S.is_glued(base):
                    self.slot[(S.partner(base), pid)] = (m - 1 - r, m)
        self._chords: Dict[int, List[Chord]] = {}
        for ci, c in enumerate(curves):
            for chord in self._curve_chords(ci, c):
                self._chords.setdefault(chord.polygon, []).append(chord)
        logger.debug(f"🔧 drawing of {len(curves)} curves with {sum(len(v) for v in self._chords.values())} chords")

    def param(self, half: Half, pid: PointId) -> Fraction:
        p, s = half
        r, m = self.slot[(half, pid)]
        k = self.surface.sides[p]
        return (s + Fraction(r + 1, m + 1)) / k

    def _curve_chords(self, ci: int, c: CombCurve) -> List[Chord]:
        chords = []
        n = len(c.path)
        for v in range(n):
            if c.is_closed:
                entry_pid = (ci, (v - 1) % n)
            else:
                entry_pid = (ci, v - 1)
            entry = c.entry_half(v)
            a = self.param(entry, entry_pid)
            b = self.param(c.path[v], (ci, v))
            chords.append(Chord(
                ci, v, c.path[v][0], (a, a * a), (b, b * b), a, b,
                (entry[1], self.slot[(entry, entry_pid)][0]),
                (c.path[v][1], self.slot[(c.path[v], (ci, v))][0]),
            ))
        return chords

    def chords(self, polygon: int) -> List[Chord]:
        return self._chords.get(polygon, [])

    def crossings(self, first: int, second: int) -> List[Crossing]:
        """All crossings of curve `first` with curve `second`, in order along `first`."""
        found = []
        for polygon, chords in self._chords.items():
            mine = [ch for ch in chords if ch.curve == first]
            theirs = [ch for ch in chords if ch.curve == second]
            for a in mine:
                for b in theirs:
                    if a is b:
                        continue
                    x = _intersect(a, b)
                    if x is not None:
                        found.append(x)
        found.sort(key=lambda x: (x.first.visit, x.t))
        return found


def _cross(u: Point, w: Point) -> Fraction:
    return u[0] * w[1] - u[1] * w[0]


def _intersect(a: Chord, b: Chord) -> Optional[Crossing]:
    lo, hi = sorted((a.start_param, a.end_param))
    inside = [lo < x < hi for x in (b.start_param, b.end_param)]
    if inside[0] == inside[1]:
        return None
    u = (a.end[0] - a.start[0], a.end[1] - a.start[1])
    w = (b.end[0] - b.start[0], b.end[1] - b.start[1])
    denom = _cross(u, w)
    ca = (b.start[0] - a.start[0], b.start[1] - a.start[1])
    t = _cross(ca, w) / denom
    return Crossing(a, b, t, 1 if denom > 0 else -1)


def tighten(curves: Sequence[CombCurve]) -> List[CombCurve]:
    """
    Copies of the curves ready to be drawn in minimal position.

    Every curve is reduced, so no strand backtracks or makes a full turn around
    an interior vertex; curves of one class share a single word, so
    their strands run side by side instead of crossing twice. Two strands of
    reduced words that run parallel are ordered by where they part, hence a
    drawing of tightened curves has no bigons and two curves cross as often as
    geometric_intersection says.
    """
    out: List[CombCurve] = []
    for c in curves:
        r = reduce(c)
        if r.is_closed:
            for prev in out:
                if prev.is_closed and r.same_class(prev):
                    r = prev if r.oriented_like(prev) else prev.inverse()
                    break
        out.append(r)
    return out
