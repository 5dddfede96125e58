"""
Polygonal surface complexes.

A surface is a list of polygons (side counts, sides numbered counterclockwise)
together with a pairing of sides. Paired sides are glued with reversed
direction, unpaired sides form the boundary circles.
"""

import logging
from dataclasses import dataclass, field
from functools import cached_property
from typing import Dict, List, Optional, Sequence, Tuple

import networkx as nx

from utility.errors import DanglingSide, Disconnected, NonOrientable

logger = logging.getLogger(__name__)

Half = Tuple[int, int]  # (polygon, side)


@dataclass(frozen=True)
class SurfaceComplex:
    """Oriented surface given by polygons and side identifications."""

    sides: Tuple[int, ...]
    pairs: Tuple[Tuple[Half, Half], ...]
    name: str = ""
    labels: Tuple[Tuple[str, Tuple[Half, ...]], ...] = field(default=(), compare=False)

    # ---- gluing -------------------------------------------------------
    @cached_property
    def glue(self) -> Dict[Half, Half]:
        table: Dict[Half, Half] = {}
        for a, b in self.pairs:
            table[a] = b
            table[b] = a
        return table

    @cached_property
    def edge_index(self) -> Dict[Half, Tuple[int, int]]:
        """Half -> (edge number, +1 for the first half of the pair, -1 otherwise)."""
        table: Dict[Half, Tuple[int, int]] = {}
        for e, (a, b) in enumerate(self.pairs):
            table[a] = (e, 1)
            table[b] = (e, -1)
        return table

    def partner(self, h: Half) -> Half:
        return self.glue[h]

    def is_glued(self, h: Half) -> bool:
        return h in self.glue

    def canonical(self, h: Half) -> Half:
        """The first half of the pair containing h (h itself on the boundary)."""
        if h not in self.glue:
            return h
        e, sign = self.edge_index[h]
        return self.pairs[e][0]

    def halves(self) -> List[Half]:
        return [(p, s) for p, k in enumerate(self.sides) for s in range(k)]

    @cached_property
    def boundary_sides(self) -> List[Half]:
        return [h for h in self.halves() if h not in self.glue]

    # ---- vertices -----------------------------------------------------
    @cached_property
    def vertex_of_corner(self) -> Dict[Half, int]:
        """Corner (P, i) is the start of side i of polygon P."""
        parent: Dict[Half, Half] = {c: c for c in self.halves()}

        def find(c: Half) -> Half:
            while parent[c] != c:
                parent[c] = parent[parent[c]]
                c = parent[c]
            return c

        def union(a: Half, b: Half) -> None:
            ra, rb = find(a), find(b)
            if ra != rb:
                parent[ra] = rb

        for (p, s), (q, t) in self.pairs:
            kp, kq = self.sides[p], self.sides[q]
            union((p, s), (q, (t + 1) % kq))
            union((p, (s + 1) % kp), (q, t))

        roots: Dict[Half, int] = {}
        table: Dict[Half, int] = {}
        for c in self.halves():
            r = find(c)
            if r not in roots:
                roots[r] = len(roots)
            table[c] = roots[r]
        return table

    @property
    def n_vertices(self) -> int:
        return len(set(self.vertex_of_corner.values()))

    def next_around(self, h: Half) -> Half:
        """Side starting at the end corner of h, rotating past glued sides."""
        p, s = h
        cur = (p, (s + 1) % self.sides[p])
        while cur in self.glue:
            q, t = self.glue[cur]
            cur = (q, (t + 1) % self.sides[q])
        return cur

    @cached_property
    def boundary_circles(self) -> List[Tuple[Half, ...]]:
        seen = set()
        circles = []
        for h in self.boundary_sides:
            if h in seen:
                continue
            circle = []
            cur = h
            while cur not in seen:
                seen.add(cur)
                circle.append(cur)
                cur = self.next_around(cur)
            circles.append(tuple(circle))
        return circles

    def vertex_link(self, corner: Half) -> Optional[Tuple[Half, ...]]:
        """Exit halves of a small loop around an interior vertex, None on the boundary."""
        word = []
        cur = corner
        for _ in range(len(self.halves()) + 1):
            if cur not in self.glue:
                return None
            word.append(cur)
            q, t = self.glue[cur]
            cur = (q, (t + 1) % self.sides[q])
            if cur == corner:
                return tuple(word)
        return None

    @cached_property
    def interior_vertex_links(self) -> List[Tuple[Half, ...]]:
        links = []
        seen_vertices = set()
        for c, v in self.vertex_of_corner.items():
            if v in seen_vertices:
                continue
            link = self.vertex_link(c)
            if link is not None:
                seen_vertices.add(v)
                links.append(link)
        return links

    # ---- topology -----------------------------------------------------
    @property
    def n_edges(self) -> int:
        return len(self.pairs) + len(self.boundary_sides)

    @property
    def chi(self) -> int:
        return self.n_vertices - self.n_edges + len(self.sides)

    @property
    def n_boundary(self) -> int:
        return len(self.boundary_circles)

    @property
    def genus(self) -> int:
        return (2 - self.chi - self.n_boundary) // 2

    @cached_property
    def dual_graph(self) -> nx.MultiGraph:
        g = nx.MultiGraph()
        g.add_nodes_from(range(len(self.sides)))
        for e, ((p, _), (q, _)) in enumerate(self.pairs):
            g.add_edge(p, q, key=e)
        return g

    def label(self, name: str) -> Tuple[Half, ...]:
        return dict(self.labels)[name]

    def __repr__(self) -> str:
        return f"SurfaceComplex({self.name or 'anonymous'}: g={self.genus}, b={self.n_boundary}, {len(self.sides)} polygons)"


def build_surface(data: Dict) -> SurfaceComplex:
    """
    Build a surface from a polygon/identification description.

    Args:
        data: {"polygons": [k0, k1, ...], "pairs": [[P, s, Q, t], ...]} where an
              optional fifth entry "same" marks a pairing that keeps the side
              direction (the polygons on both sides must then be flipped
              relative to each other). "name" and "labels" are optional.

    Returns:
        A connected oriented SurfaceComplex
    """
    sides = [int(k) for k in data["polygons"]]
    if not sides or any(k < 1 for k in sides):
        raise DanglingSide("every polygon needs at least one side")

    raw_pairs = []
    used = set()
    for entry in data.get("pairs", []):
        p, s, q, t = (int(x) for x in entry[:4])
        keeps_direction = len(entry) > 4 and entry[4] == "same"
        for poly, side in ((p, s), (q, t)):
            if not (0 <= poly < len(sides) and 0 <= side < sides[poly]):
                raise DanglingSide(f"side ({poly}, {side}) does not exist")
            if (poly, side) in used:
                raise DanglingSide(f"side ({poly}, {side}) appears in two identifications")
            used.add((poly, side))
        raw_pairs.append(((p, s), (q, t), keeps_direction))

    graph = nx.Graph()
    graph.add_nodes_from(range(len(sides)))
    for (p, _), (q, _), keeps in raw_pairs:
        graph.add_edge(p, q)
    if not nx.is_connected(graph):
        raise Disconnected(f"complex has {nx.number_connected_components(graph)} components")

    # Two-colour polygons by orientation; a direction-keeping pair flips the colour.
    flip = {0: False}
    queue = [0]
    adjacency: Dict[int, List[Tuple[int, bool]]] = {i: [] for i in range(len(sides))}
    for (p, _), (q, _), keeps in raw_pairs:
        adjacency[p].append((q, keeps))
        adjacency[q].append((p, keeps))
    while queue:
        p = queue.pop()
        for q, keeps in adjacency[p]:
            want = flip[p] ^ keeps
            if q not in flip:
                flip[q] = want
                queue.append(q)
            elif flip[q] != want:
                raise NonOrientable("side identifications are not orientation-consistent")

    def oriented(h: Half) -> Half:
        p, s = h
        return (p, sides[p] - 1 - s) if flip[p] else h

    pairs = tuple((oriented(a), oriented(b)) for a, b, _ in raw_pairs)
    labels = tuple(
        (name, tuple(oriented((int(p), int(s))) for p, s in halves))
        for name, halves in data.get("labels", {}).items()
    )
    surface = SurfaceComplex(tuple(sides), pairs, data.get("name", ""), labels)
    if (2 - surface.chi - surface.n_boundary) % 2:
        raise NonOrientable("Euler characteristic parity is inconsistent with an orientable surface")
    logger.debug(f"🔧 built {surface!r}")
    return surface


def surface_stats(surface: SurfaceComplex) -> Tuple[int, int, int]:
    """(chi, genus, boundary count)"""
    return surface.chi, surface.genus, surface.n_boundary


# ---- presets ------------------------------------------------------------

def torus_surface() -> SurfaceComplex:
    """Square with sides bottom, right, top, left; (p, q) counts right and top exits."""
    return build_surface({"polygons": [4], "pairs": [[0, 1, 0, 3], [0, 2, 0, 0]], "name": "torus"})


def annulus_surface() -> SurfaceComplex:
    """Square with only the left and right sides identified."""
    return build_surface({"polygons": [4], "pairs": [[0, 1, 0, 3]], "name": "annulus"})


def disk_surface() -> SurfaceComplex:
    return build_surface({"polygons": [4], "pairs": [], "name": "disk"})


def genus2_surface() -> SurfaceComplex:
    """Octagon a b a^-1 b^-1 c d c^-1 d^-1."""
    return build_surface({
        "polygons": [8],
        "pairs": [[0, 0, 0, 2], [0, 1, 0, 3], [0, 4, 0, 6], [0, 5, 0, 7]],
        "name": "genus2",
    })


def ribbon_graph_surface(rotations: Sequence[Sequence[int]], name: str = "") -> SurfaceComplex:
    """
    Thicken a ribbon graph into a surface with boundary.

    Args:
        rotations: per vertex, the half-edge ids in counterclockwise order;
                   half-edges 2e and 2e+1 form edge e

    Returns:
        SurfaceComplex with one 2m-gon per vertex of degree m (attaching sides
        at even positions, boundary seams at odd positions) followed by one
        rectangle per edge [attach 2e, seam, attach 2e+1, seam]
    """
    n_vertices = len(rotations)
    half_edges = [h for rot in rotations for h in rot]
    if sorted(half_edges) != list(range(len(half_edges))) or len(half_edges) % 2:
        raise DanglingSide("half-edges must be 0..2E-1, each used once")
    attach = {}
    polygons = []
    for v, rot in enumerate(rotations):
        polygons.append(2 * len(rot))
        for j, h in enumerate(rot):
            attach[h] = (v, 2 * j)
    pairs = []
    for e in range(len(half_edges) // 2):
        band = n_vertices + e
        polygons.append(4)
        for h, side in ((2 * e, 0), (2 * e + 1, 2)):
            v, vs = attach[h]
            pairs.append([v, vs, band, side])
    return build_surface({"polygons": polygons, "pairs": pairs, "name": name})


def fiber_surface(genus: int, boundary: int) -> SurfaceComplex:
    """One-vertex ribbon graph: g interleaved loop pairs, then b-1 nested loops."""
    if genus < 0 or boundary < 1:
        raise ValueError("fiber needs genus >= 0 and at least one boundary circle")
    if genus == 0 and boundary == 1:
        return build_surface({"polygons": [4], "pairs": [], "name": "disk"})
    rotation: List[int] = []
    e = 0
    for _ in range(genus):
        rotation += [2 * e, 2 * e + 2, 2 * e + 1, 2 * e + 3]
        e += 2
    for _ in range(boundary - 1):
        rotation += [2 * e, 2 * e + 1]
        e += 1
    return ribbon_graph_surface([rotation], name=f"fiber({genus},{boundary})")


def pants_surface() -> SurfaceComplex:
    return fiber_surface(0, 3)


FIBER_PRESETS = {
    "annulus": lambda: fiber_surface(0, 2),
    "holed-torus": lambda: fiber_surface(1, 1),
    "4-holed-sphere": lambda: fiber_surface(0, 4),
    "pants": pants_surface,
    "disk": disk_surface,
}


def fiber_preset(name: str) -> SurfaceComplex:
    if name not in FIBER_PRESETS:
        raise ValueError(f"unknown fiber preset '{name}', expected one of {sorted(FIBER_PRESETS)}")
    return FIBER_PRESETS[name]()
