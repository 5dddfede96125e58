"""
Cutting a surface complex along disjoint simple curves and arcs.

Every polygon is split by the chords of the drawing into regions; regions are
glued back along side segments but never along chords.
"""

import logging
from dataclasses import dataclass
from typing import Dict, List, Sequence, Tuple

import networkx as nx

from utility.curves import CombCurve, is_trivial, reduce
from utility.drawing import Drawing
from utility.errors import NotEmbeddable
from utility.surface import SurfaceComplex

logger = logging.getLogger(__name__)

Segment = Tuple[int, int, int]  # (polygon, side, index of the gap between marks)


@dataclass(frozen=True)
class Piece:
    surface: SurfaceComplex

    @property
    def signature(self) -> Tuple[int, int]:
        return self.surface.genus, self.surface.n_boundary


def cut_along(surface: SurfaceComplex, curves: Sequence[CombCurve]) -> List[Piece]:
    """
    Cut along pairwise disjoint simple curves.

    Returns:
        One Piece per connected component of the cut surface
    """
    curves = [reduce(c) for c in curves if not is_trivial(reduce(c))]
    if not curves:
        return [Piece(surface)]
    drawing = Drawing(curves)
    for i in range(len(curves)):
        for j in range(i, len(curves)):
            if drawing.crossings(i, j):
                raise NotEmbeddable(f"curves {i} and {j} cross in the drawing")

    # marks per half: ordinals of strand points in ccw order
    marks: Dict[Tuple[int, int], int] = {}
    endpoint: Dict[Tuple[int, int, int], Tuple[int, int, int]] = {}
    for polygon in range(len(surface.sides)):
        for ch in drawing.chords(polygon):
            a, b = ch.start_mark, ch.end_mark
            endpoint[(polygon,) + a] = (polygon,) + b
            endpoint[(polygon,) + b] = (polygon,) + a
    for (polygon, side, r) in endpoint:
        marks[(polygon, side)] = marks.get((polygon, side), 0) + 1

    regions: List[List[Tuple]] = []
    region_of: Dict[Segment, Tuple[int, int]] = {}
    for polygon, k in enumerate(surface.sides):
        for side in range(k):
            for gap in range(marks.get((polygon, side), 0) + 1):
                if (polygon, side, gap) in region_of:
                    continue
                items = []
                seg = (polygon, side, gap)
                while seg not in region_of:
                    region_of[seg] = (len(regions), len(items))
                    items.append(("seg",) + seg)
                    p, s, g = seg
                    if g < marks.get((p, s), 0):
                        _, s2, r2 = endpoint[(p, s, g)]
                        items.append(("chord", p, s, g))
                        seg = (p, s2, r2 + 1)
                    else:
                        seg = (p, (s + 1) % k, 0)
                regions.append(items)

    sides = [len(items) for items in regions]
    pairs = []
    for (p, s), (q, t) in surface.pairs:
        m = marks.get((p, s), 0)
        for gap in range(m + 1):
            a = region_of[(p, s, gap)]
            b = region_of[(q, t, m - gap)]
            pairs.append((a, b))

    graph = nx.Graph()
    graph.add_nodes_from(range(len(regions)))
    graph.add_edges_from((a[0], b[0]) for a, b in pairs)
    pieces = []
    for component in nx.connected_components(graph):
        order = sorted(component)
        index = {r: i for i, r in enumerate(order)}
        sub_pairs = tuple(
            ((index[a[0]], a[1]), (index[b[0]], b[1]))
            for a, b in pairs if a[0] in index
        )
        sub = SurfaceComplex(tuple(sides[r] for r in order), sub_pairs, name="piece")
        pieces.append(Piece(sub))
    logger.debug(f"🔍 cut {surface!r} along {len(curves)} curves into {len(pieces)} pieces")
    return pieces

