"""
Closed curves and arcs as side-crossing words.

A closed curve is a cyclic word of halves (P, s), each meaning "leave polygon P
through side s"; the partner of one half lies in the polygon of the next. An
arc additionally records the boundary side it starts on, and its last half is
a boundary side. Vertices on the boundary are punctures, interior vertices
are points of the surface (see reduce).
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import gcd
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

from config.msd_config import MAX_CURVE_LENGTH
from utility.errors import CurveTooLong, DifferentSurfaces, NotEmbeddable
from utility.surface import Half, SurfaceComplex

logger = logging.getLogger(__name__)

CLOSED = "closed"
ARC = "arc"


@dataclass(frozen=True)
class CombCurve:
    surface: SurfaceComplex = field(compare=False, repr=False)
    kind: str
    path: Tuple[Half, ...]
    start: Optional[Half] = None

    @property
    def is_closed(self) -> bool:
        return self.kind == CLOSED

    def __len__(self) -> int:
        return len(self.path)

    def visits(self) -> List[Tuple[int, int, int]]:
        """(polygon, entry side, exit side) per visit."""
        out = []
        S = self.surface
        for j, (p, s) in enumerate(self.path):
            if j == 0 and not self.is_closed:
                entry = self.start[1]
            else:
                entry = S.partner(self.path[j - 1])[1]
            out.append((p, entry, s))
        return out

    def entry_half(self, j: int) -> Half:
        """The side crossed when entering visit j, as a half of the visited polygon."""
        if j == 0 and not self.is_closed:
            return self.start
        return self.surface.partner(self.path[j - 1])

    def inverse(self) -> "CombCurve":
        S = self.surface
        if self.is_closed:
            # visit i is left backwards through the side it was entered by
            n = len(self.path)
            word = tuple(S.partner(self.path[(n - 2 - i) % n]) for i in range(n))
            return CombCurve(S, CLOSED, word)
        rev = tuple(S.partner(h) for h in reversed(self.path[:-1]))
        return CombCurve(S, ARC, rev + (self.start,), start=self.path[-1])

    def key(self) -> Tuple:
        """Canonical form up to rotation and reversal."""
        if not self.is_closed:
            inv = self.inverse()
            return (ARC,) + min((self.start,) + self.path, (inv.start,) + inv.path)
        return (CLOSED,) + min(_min_rotation(self.path), _min_rotation(self.inverse().path))

    def same_class(self, other: "CombCurve") -> bool:
        return self.key() == other.key()

    def oriented_like(self, other: "CombCurve") -> bool:
        """True when self equals other as an oriented curve."""
        return _min_rotation(self.path) == _min_rotation(other.path)


def _min_rotation(word: Sequence[Half]) -> Tuple[Half, ...]:
    if not word:
        return ()
    n = len(word)
    doubled = tuple(word) + tuple(word)
    return min(doubled[i:i + n] for i in range(n))


def closed_curve(surface: SurfaceComplex, path: Sequence[Half], check: bool = True) -> CombCurve:
    path = tuple((int(p), int(s)) for p, s in path)
    if check:
        n = len(path)
        for j, h in enumerate(path):
            if not surface.is_glued(h):
                raise NotEmbeddable(f"closed curve leaves through boundary side {h}")
            if surface.partner(h)[0] != path[(j + 1) % n][0]:
                raise NotEmbeddable(f"crossing {j} does not continue in polygon {surface.partner(h)[0]}")
    return CombCurve(surface, CLOSED, path)


def arc(surface: SurfaceComplex, start: Half, path: Sequence[Half], check: bool = True) -> CombCurve:
    start = (int(start[0]), int(start[1]))
    path = tuple((int(p), int(s)) for p, s in path)
    if check:
        if surface.is_glued(start) or not path or surface.is_glued(path[-1]):
            raise NotEmbeddable("arcs start and end on boundary sides")
        if path[0][0] != start[0]:
            raise NotEmbeddable("arc must leave the polygon it starts in")
        for j, h in enumerate(path[:-1]):
            if not surface.is_glued(h) or surface.partner(h)[0] != path[j + 1][0]:
                raise NotEmbeddable(f"arc crossing {j} is not continued")
    return CombCurve(surface, ARC, path, start=start)


@lru_cache(maxsize=64)
def _turn_tables(surface: SurfaceComplex) -> Tuple[Dict[Half, Tuple[Half, int]], ...]:
    """Per turning direction: exit half -> (next exit around the same interior vertex, link length)."""
    forward: Dict[Half, Tuple[Half, int]] = {}
    backward: Dict[Half, Tuple[Half, int]] = {}
    for link in surface.interior_vertex_links:
        n = len(link)
        for j, h in enumerate(link):
            forward[h] = (link[(j + 1) % n], n)
            backward[surface.partner(h)] = (surface.partner(link[j - 1]), n)
    return forward, backward


def _cancel_closed(S: SurfaceComplex, path: Sequence[Half]) -> List[Half]:
    stack: List[Half] = []
    for h in path:
        if stack and S.partner(stack[-1]) == h:
            stack.pop()
        else:
            stack.append(h)
    lo, hi = 0, len(stack)
    while hi - lo >= 2 and S.partner(stack[hi - 1]) == stack[lo]:
        lo += 1
        hi -= 1
    return stack[lo:hi]


def _unwind_vertex(S: SurfaceComplex, word: List[Half]) -> Optional[List[Half]]:
    """
    Drop one full turn around an interior vertex, None when the word makes none.

    Shorter runs around a vertex are kept, so a curve stays on the side of each
    vertex it was built on.
    """
    n = len(word)
    for table in _turn_tables(S):
        follows = [table.get(word[i - 1], (None, 0))[0] == word[i] for i in range(n)]
        if n and all(follows):
            return []
        for s in (i for i in range(n) if not follows[i]):
            m = 1
            while m < n and follows[(s + m) % n]:
                m += 1
            _, turn = table.get(word[s], (None, 0))
            if turn and m >= turn:
                run = [word[(s + t) % n] for t in range(m)]
                rest = [word[(s + m + t) % n] for t in range(n - m)]
                return run[turn:] + rest
    return None


def reduce(c: CombCurve, check_embedded: bool = False) -> CombCurve:
    """
    Remove every backtrack (leaving a polygon through the side just entered).

    Closed curves also lose every full turn around an interior vertex, so a
    loop around one reduces to the trivial curve and a curve pushed across an
    interior vertex reduces to the curve itself. Boundary vertices stay
    punctures.

    Args:
        c: closed curve or arc
        check_embedded: raise NotEmbeddable when the reduced curve must self-cross
    """
    S = c.surface
    if len(c.path) > MAX_CURVE_LENGTH:
        raise CurveTooLong(f"curve has {len(c.path)} crossings (limit {MAX_CURVE_LENGTH})")
    if c.is_closed:
        word = _cancel_closed(S, c.path)
        while True:
            unwound = _unwind_vertex(S, word)
            if unwound is None:
                break
            word = _cancel_closed(S, unwound)
        out = CombCurve(S, CLOSED, tuple(word))
    else:
        stack: List[Half] = []
        for h in c.path:
            if stack and S.partner(stack[-1]) == h:
                stack.pop()
            else:
                stack.append(h)
        out = CombCurve(S, ARC, tuple(stack), start=c.start)
    if check_embedded and self_intersection(out) > 0:
        raise NotEmbeddable("curve is not simple in its isotopy class")
    return out


def is_trivial(c: CombCurve) -> bool:
    return c.is_closed and len(c.path) == 0


# ---- linked pairs ---------------------------------------------------------

def _left(z: int, a_in: int, a_out: int, k: int) -> bool:
    """Side z lies left of the chord a_in -> a_out of a k-gon."""
    return 0 < (z - a_out) % k < (a_in - a_out) % k


def _visit_table(c: CombCurve) -> List[Tuple[int, int, int]]:
    return c.visits()


def _crossings(a: CombCurve, b: CombCurve, same: bool) -> Iterator[Tuple[int, int, int, int]]:
    """
    Yield (i, j, sign, pass) for each essential crossing of a with b.

    pass 0 compares a with b, pass 1 with the inverse of b; the sign is +1 when
    b crosses a from right to left.
    """
    S = a.surface
    va = _visit_table(a)
    na = len(va)
    for rev, bb in ((0, b), (1, b.inverse())):
        vb = _visit_table(bb)
        nb = len(vb)
        by_poly = {}
        for j, (p, _, _) in enumerate(vb):
            by_poly.setdefault(p, []).append(j)
        cap = na + nb
        for i, (p, a_in, a_out) in enumerate(va):
            k = S.sides[p]
            for j in by_poly.get(p, ()):
                if same and ((rev == 0 and i == j) or (rev == 1 and j == nb - 1 - i)):
                    continue
                _, b_in, b_out = vb[j]
                if a_out == b_out and a_in != b_in:
                    start_left = _left(b_in, a_in, a_out, k)
                    ii, jj = i, j
                    ended = False
                    for _ in range(cap):
                        ii += 1
                        jj += 1
                        if (ii >= na and not a.is_closed) or (jj >= nb and not bb.is_closed):
                            break
                        ii %= na
                        jj %= nb
                        q, c_in, c_out = va[ii]
                        _, d_in, d_out = vb[jj]
                        if c_out != d_out:
                            ended = True
                            break
                    if not ended:
                        continue
                    end_left = _left(d_out, c_in, c_out, S.sides[q])
                    if start_left != end_left:
                        sign = 1 if end_left else -1
                        yield i, j, sign if rev == 0 else -sign, rev
                elif rev == 0 and len({a_in, a_out, b_in, b_out}) == 4:
                    lin, lout = _left(b_in, a_in, a_out, k), _left(b_out, a_in, a_out, k)
                    if lin != lout:
                        yield i, j, 1 if lout else -1, rev


def _check_same_surface(a: CombCurve, b: CombCurve) -> None:
    if a.surface != b.surface:
        raise DifferentSurfaces("curves live on different surfaces")


def geometric_intersection(a: CombCurve, b: CombCurve) -> int:
    """Minimal number of transverse crossings of two reduced curves."""
    _check_same_surface(a, b)
    a, b = reduce(a), reduce(b)
    if is_trivial(a) or is_trivial(b):
        return 0
    if a.is_closed and b.is_closed and a.same_class(b):
        return 0
    return sum(1 for _ in _crossings(a, b, same=False))


def signed_intersection(a: CombCurve, b: CombCurve) -> int:
    """Algebraic intersection of two closed curves, +1 when b crosses a leftwards."""
    _check_same_surface(a, b)
    a, b = reduce(a), reduce(b)
    if is_trivial(a) or is_trivial(b):
        return 0
    return sum(sign for _, _, sign, _ in _crossings(a, b, same=False))


def self_intersection(c: CombCurve) -> int:
    if len(c.path) < 2:
        return 0
    total = sum(1 for _ in _crossings(c, c, same=True))
    return total // 2


def is_simple(c: CombCurve) -> bool:
    return self_intersection(reduce(c)) == 0


def disjoint(curves: Sequence[CombCurve]) -> bool:
    return all(
        geometric_intersection(curves[i], curves[j]) == 0
        for i in range(len(curves)) for j in range(i + 1, len(curves))
    )


# ---- constructors ------------------------------------------------------------

def torus_curve(surface: SurfaceComplex, p: int, q: int) -> CombCurve:
    """
    The (p, q) curve on the torus preset, drawn as a straight line.

    Exits through the right side (1) count +p, through the top (2) count +q.
    """
    if (p, q) == (0, 0) or gcd(abs(p), abs(q)) != 1:
        raise ValueError(f"({p}, {q}) is not a primitive slope")
    # start off the lattice so the line never meets a corner
    y0 = Fraction(1, 2) + Fraction(1, 10 ** 6)  # x starts at 1/2
    events = []
    for n in range(1, abs(p) + 1):
        events.append((Fraction(n) - Fraction(1, 2), 0))
    for m in range(1, abs(q) + 1):
        events.append((Fraction(m) - (y0 if q > 0 else 1 - y0), 1))
    # times are distances travelled along each axis, rescale to a common clock
    timed = []
    for dist, axis in events:
        timed.append((dist / abs(p) if axis == 0 else dist / abs(q), axis))
    timed.sort()
    path = [
        ((0, 1) if p > 0 else (0, 3)) if axis == 0 else ((0, 2) if q > 0 else (0, 0))
        for _, axis in timed
    ]
    return reduce(closed_curve(surface, path))


def loop_from(c: CombCurve, visit: int, forward: bool = True) -> List[Half]:
    """The halves of one full turn around a closed curve, starting inside visit `visit`."""
    n = len(c.path)
    if forward:
        return [c.path[(visit + i) % n] for i in range(n)]
    inv = c.inverse()
    start = n - 1 - visit
    return [inv.path[(start + i) % n] for i in range(n)]
