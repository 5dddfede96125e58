"""
Kirby diagrams with Legendrian 2-handles compiled into bisection diagrams with divides.

A front is a level diagram read from a .kw file: 1-handle balls on the left and
right edges, then left cusps, right cusps and crossings listed left to right.
The compiler adds a tunnel at every crossing (plus splitting arcs where a region
needs them), takes the contact ribbon of the resulting Legendrian graph, doubles
it, and reads the three cut systems off the regions, the ribbon edges and the
knots.

.kw format, one statement per line, '#' starts a comment:

    version 1
    name trefoil            (optional)
    handle h1 2             (1-handle with 2 passages, before any event)
    L 1                     (left cusp opening levels 1 and 2)
    X 2                     (crossing of levels 2 and 3)
    R 1                     (right cusp closing levels 1 and 2)

Levels are numbered from the top. The passages of the handles occupy the top
levels at both ends, in handle order.
"""

import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import networkx as nx

from config.msd_config import FRONT_FORMAT_VERSION
from utility.curves import CombCurve, arc, closed_curve, reduce
from utility.divides import KIRBY_COMPILED, DividedDiagram, GsWcWitness, Provenance, WitnessStep
from utility.doubling import DoubledSurface, double
from utility.errors import FrontSyntaxError, FrontValidityError, NotEmbeddable, PipelineDefect
from utility.heegaard import cut_system, h1_of_splitting, meet, validate_cut_system
from utility.mcg import RIGHT, dehn_twist
from utility.surface import Half, SurfaceComplex, ribbon_graph_surface

logger = logging.getLogger(__name__)

# front vertex kinds
LEFT_CUSP = "left-cusp"
RIGHT_CUSP = "right-cusp"
CROSSING = "crossing"
CHAIN_START = "chain-start"
CHAIN_END = "chain-end"
PASSAGE = "passage"
MARKER = "marker"

# front edge kinds
STRAND = "strand"
CHAIN = "chain"
SPLIT = "split"

# counterclockwise port order in the front plane
FRONT_ROTATION = {
    LEFT_CUSP: ("D", "AI", "U", "AO"),
    RIGHT_CUSP: ("AO", "U", "AI", "D"),
    CROSSING: ("NE", "NW", "SW", "SE"),
    CHAIN_START: ("C", "E", "W"),
    CHAIN_END: ("E", "C", "W"),
    PASSAGE: ("E", "W"),
    MARKER: ("E", "W"),
}

EAST_PORTS = {
    LEFT_CUSP: {"D", "AI", "U"},
    RIGHT_CUSP: {"AO"},
    CROSSING: {"NE", "SE"},
    CHAIN_START: {"C", "E"},
    CHAIN_END: {"E"},
    PASSAGE: {"E"},
    MARKER: {"E"},
}

# counterclockwise port order in the contact ribbon
RIBBON_ROTATION = {
    LEFT_CUSP: ("D", "AI", "U", "AO"),
    RIGHT_CUSP: ("AO", "D", "AI", "U"),
    CHAIN_START: ("C", "E", "W"),
    CHAIN_END: ("E", "W", "C"),
    MARKER: ("E", "W"),
    "over": ("SE", "T", "NW"),
    "under": ("NE", "SW", "T"),
}

# the knot runs straight through these port pairs
THROUGH = {"U": "D", "D": "U", "NW": "SE", "SE": "NW", "NE": "SW", "SW": "NE", "E": "W", "W": "E"}

UNKNOT_FRONT = """\
# Legendrian unknot, tb = -1
version 1
name unknot
L 1
R 1
"""

TREFOIL_FRONT = """\
# right-handed trefoil with tb = 1, as the closure of a 2-braid
version 1
name trefoil
L 1
L 2
X 3
X 3
X 3
R 2
R 1
"""

TSTAR_RP2_FRONT = """\
# a knot running twice over a 1-handle with one crossing
version 1
name tstar-rp2
handle h1 2
X 1
"""


# ---- parsing ------------------------------------------------------------------

@dataclass(frozen=True)
class Handle:
    name: str
    passages: int


@dataclass(frozen=True)
class FrontEvent:
    kind: str  # "L", "R" or "X"
    level: int
    line_no: int = 0


@dataclass(frozen=True)
class FrontDiagram:
    name: str
    handles: Tuple[Handle, ...]
    events: Tuple[FrontEvent, ...]

    @property
    def n_passages(self) -> int:
        return sum(h.passages for h in self.handles)

    @property
    def n_crossings(self) -> int:
        return sum(1 for e in self.events if e.kind == "X")

    @property
    def n_cusps(self) -> int:
        return sum(1 for e in self.events if e.kind in ("L", "R"))


def _int(token: str, line_no: int, what: str) -> int:
    try:
        return int(token)
    except ValueError:
        raise FrontSyntaxError(line_no, f"{what} must be an integer, got {token!r}")


def parse_front(text: str, name: str = "") -> FrontDiagram:
    """
    Read a front from .kw text.

    Raises:
        FrontSyntaxError: malformed statement (carries the line number)
        FrontValidityError: a level out of range or passages left unmatched
    """
    version = None
    handles: List[Handle] = []
    events: List[FrontEvent] = []
    for line_no, raw in enumerate(text.splitlines(), start=1):
        tokens = raw.split("#", 1)[0].split()
        if not tokens:
            continue
        key, args = tokens[0], tokens[1:]
        if key == "version":
            if len(args) != 1:
                raise FrontSyntaxError(line_no, "usage: version <n>")
            version = _int(args[0], line_no, "version")
            if version != FRONT_FORMAT_VERSION:
                raise FrontSyntaxError(line_no, f"unsupported front version {version}")
        elif key == "name":
            if not args:
                raise FrontSyntaxError(line_no, "usage: name <text>")
            name = name or " ".join(args)
        elif key == "handle":
            if len(args) != 2:
                raise FrontSyntaxError(line_no, "usage: handle <name> <passages>")
            if events:
                raise FrontSyntaxError(line_no, "handles must be declared before the first cusp or crossing")
            m = _int(args[1], line_no, "passage count")
            if m < 0:
                raise FrontSyntaxError(line_no, "passage count must be non-negative")
            handles.append(Handle(args[0], m))
        elif key in ("L", "R", "X"):
            if len(args) != 1:
                raise FrontSyntaxError(line_no, f"usage: {key} <level>")
            events.append(FrontEvent(key, _int(args[0], line_no, "level"), line_no))
        else:
            raise FrontSyntaxError(line_no, f"unknown statement {key!r}")
    if version is None:
        raise FrontSyntaxError(1, "missing 'version' line")

    front = FrontDiagram(name or "front", tuple(handles), tuple(events))
    n = front.n_passages
    for e in events:
        top = n + 1 if e.kind == "L" else n - 1
        if not 1 <= e.level <= top:
            raise FrontValidityError(f"line {e.line_no}: {e.kind} {e.level} with {n} levels present")
        n += 2 if e.kind == "L" else -2 if e.kind == "R" else 0
    if n != front.n_passages:
        raise FrontValidityError(f"{n} strands reach the right edge, expected {front.n_passages} passages")
    if not events and not handles:
        raise FrontValidityError("the front is empty")
    logger.info(
        f"🔍 parsed front '{front.name}': {len(handles)} handles, "
        f"{front.n_cusps} cusps, {front.n_crossings} crossings"
    )
    return front


# ---- front graph ----------------------------------------------------------------

Port = Tuple[int, str]


@dataclass
class FrontVertex:
    kind: str
    column: int
    level: int = 0  # event level, or the strand slot for passages and chain vertices
    event: int = -1
    ports: Dict[str, int] = field(default_factory=dict)

    def is_east(self, port: str) -> bool:
        return port in EAST_PORTS[self.kind]

    @property
    def rotation(self) -> Tuple[str, ...]:
        return tuple(p for p in FRONT_ROTATION[self.kind] if p in self.ports)


@dataclass
class FrontEdge:
    west: Port
    east: Port
    kind: str = STRAND
    outer_above: bool = False
    outer_below: bool = False

    def end(self, at_east: bool) -> Port:
        return self.east if at_east else self.west


@dataclass
class FrontGraph:
    front: FrontDiagram
    vertices: List[FrontVertex] = field(default_factory=list)
    edges: List[FrontEdge] = field(default_factory=list)
    passages: List[List[int]] = field(default_factory=list)  # per handle, its passage vertices

    def add_vertex(self, kind: str, column: int, level: int = 0, event: int = -1) -> int:
        self.vertices.append(FrontVertex(kind, column, level, event))
        return len(self.vertices) - 1

    def add_edge(self, west: Port, east: Port, kind: str = STRAND, above: bool = False, below: bool = False) -> int:
        f = len(self.edges)
        self.edges.append(FrontEdge(west, east, kind, above, below))
        for v, p in (west, east):
            if p in self.vertices[v].ports:
                raise FrontValidityError(f"port {p} of vertex {v} is already in use")
            self.vertices[v].ports[p] = f
        return f

    def edge_at(self, port: Port) -> int:
        v, p = port
        return self.vertices[v].ports[p]

    def other_end(self, f: int, port: Port) -> Port:
        e = self.edges[f]
        return e.east if e.west == port else e.west


class _Open:
    """A strand waiting for its east end during the sweep."""

    def __init__(self, west: Port):
        self.west = west
        self.above = False
        self.below = False


def _mark_outer(levels: Sequence[_Open]) -> None:
    if levels:
        levels[0].above = True
        levels[-1].below = True


def _mark_between_handles(levels: Sequence[_Open], sizes: Sequence[int]) -> None:
    pos = 0
    groups = [m for m in sizes if m > 0]
    for m in groups[:-1]:
        pos += m
        levels[pos - 1].below = True
        levels[pos].above = True


def build_front_graph(front: FrontDiagram) -> FrontGraph:
    """
    Sweep the level diagram into a planar graph of cusps, crossings, passages
    and the chain vertices that join the passages of each handle.
    """
    G = FrontGraph(front)
    levels: List[_Open] = []
    sizes = [h.passages for h in front.handles]
    for h in front.handles:
        slots = []
        if h.passages == 0:
            # an empty handle carries one circle through it
            v = G.add_vertex(PASSAGE, 0, -1)
            G.add_edge((v, "E"), (v, "W"), STRAND, True, True)
            slots.append(v)
        for _ in range(h.passages):
            v = G.add_vertex(PASSAGE, 0, len(levels))
            levels.append(_Open((v, "E")))
            slots.append(v)
        G.passages.append(slots)
    _mark_outer(levels)
    _mark_between_handles(levels, sizes)

    def close(rec: _Open, port: Port) -> int:
        return G.add_edge(rec.west, port, STRAND, rec.above, rec.below)

    for k, ev in enumerate(front.events):
        col, i = k + 1, ev.level - 1
        if ev.kind == "L":
            v = G.add_vertex(LEFT_CUSP, col, ev.level, k)
            levels[i:i] = [_Open((v, "U")), _Open((v, "D"))]
        elif ev.kind == "R":
            v = G.add_vertex(RIGHT_CUSP, col, ev.level, k)
            close(levels[i], (v, "U"))
            close(levels[i + 1], (v, "D"))
            del levels[i:i + 2]
        else:
            v = G.add_vertex(CROSSING, col, ev.level, k)
            close(levels[i], (v, "NW"))
            close(levels[i + 1], (v, "SW"))
            levels[i], levels[i + 1] = _Open((v, "NE")), _Open((v, "SE"))
        _mark_outer(levels)

    # chains: w'_j on passage j, then w_{j+1} on passage j+1, handle by handle
    end = len(front.events) + 1
    starts: Dict[int, int] = {}
    pos = 0
    for m in sizes:
        for j in range(m - 1):
            v = G.add_vertex(CHAIN_START, end, pos + j)
            close(levels[pos + j], (v, "W"))
            levels[pos + j] = _Open((v, "E"))
            starts[pos + j] = v
        pos += m
    _mark_outer(levels)
    pos = 0
    for m in sizes:
        for j in range(1, m):
            v = G.add_vertex(CHAIN_END, end + 1, pos + j)
            close(levels[pos + j], (v, "W"))
            levels[pos + j] = _Open((v, "E"))
            G.add_edge((starts[pos + j - 1], "C"), (v, "C"), CHAIN)
        pos += m
    _mark_outer(levels)
    _mark_between_handles(levels, sizes)

    slots = [v for group in G.passages for v in group if G.vertices[v].level >= 0]
    for rec, v in zip(levels, slots):
        close(rec, (v, "W"))
    logger.debug(f"🔧 front graph: {len(G.vertices)} vertices, {len(G.edges)} edges")
    return G


# ---- knots ------------------------------------------------------------------------

Dart = Tuple[int, bool]  # front edge, heading east


@dataclass(frozen=True)
class Component:
    darts: Tuple[Dart, ...]
    circle: bool = False  # the circle drawn through an empty 1-handle

    @property
    def edges(self) -> Tuple[int, ...]:
        return tuple(f for f, _ in self.darts)


def _arrival(G: FrontGraph, dart: Dart) -> Port:
    f, east = dart
    return G.edges[f].end(east)


def _leave(G: FrontGraph, port: Port) -> Dart:
    f = G.edge_at(port)
    return f, G.edges[f].west == port


def components(G: FrontGraph) -> List[Component]:
    """The knots of the front (and handle circles), each traversed from its first edge eastward."""
    seen = set()
    out = []
    for f0, e in enumerate(G.edges):
        if e.kind != STRAND or f0 in seen:
            continue
        darts = []
        dart = (f0, True)
        while True:
            darts.append(dart)
            seen.add(dart[0])
            v, p = _arrival(G, dart)
            dart = _leave(G, (v, THROUGH[p]))
            if dart == (f0, True):
                break
        circle = all(G.vertices[_arrival(G, d)[0]].level < 0 for d in darts)
        out.append(Component(tuple(darts), circle))
    return out


def _component(front: FrontDiagram, index: int) -> Tuple[FrontGraph, Component]:
    G = build_front_graph(front)
    knots = components(G)
    if not 0 <= index < len(knots):
        raise IndexError(f"front has {len(knots)} components, no component {index}")
    return G, knots[index]


def _cusp_passes(G: FrontGraph, K: Component) -> Tuple[int, int]:
    down = up = 0
    for dart in K.darts:
        v, p = _arrival(G, dart)
        if G.vertices[v].kind in (LEFT_CUSP, RIGHT_CUSP):
            if p == "U":
                down += 1
            else:
                up += 1
    return down, up


def writhe(G: FrontGraph, K: Component) -> int:
    heading = dict(K.darts)
    total = 0
    for x in G.vertices:
        if x.kind != CROSSING:
            continue
        over, under = x.ports["NW"], x.ports["SW"]
        if over in heading and under in heading:
            total += 1 if heading[over] == heading[under] else -1
    return total


def thurston_bennequin(front: FrontDiagram, component: int = 0) -> int:
    """tb = writhe - cusps / 2 of one component of the front."""
    G, K = _component(front, component)
    down, up = _cusp_passes(G, K)
    return writhe(G, K) - (down + up) // 2


def rotation_number(front: FrontDiagram, component: int = 0, orientation: int = 1) -> int:
    """rot = (down cusps - up cusps) / 2, for the component oriented eastward on its first edge (+1) or reversed (-1)."""
    if orientation not in (1, -1):
        raise ValueError("orientation must be +1 or -1")
    G, K = _component(front, component)
    down, up = _cusp_passes(G, K)
    return orientation * (down - up) // 2


# ---- regions --------------------------------------------------------------------

@dataclass(frozen=True)
class Turn:
    dart: Dart
    vertex: int
    port_in: str
    port_out: str


@dataclass(frozen=True)
class Region:
    turns: Tuple[Turn, ...]
    outer: bool
    lefts: Tuple[int, ...]  # turn indices of left-type corners
    rights: Tuple[int, ...]
    reflex: Tuple[int, ...]

    @property
    def good(self) -> bool:
        return len(self.lefts) == 1 and len(self.rights) == 1


def _is_reflex(vx: FrontVertex, port_in: str) -> bool:
    if len(vx.ports) != 2:
        return False
    return (vx.kind == LEFT_CUSP and port_in == "D") or (vx.kind == RIGHT_CUSP and port_in == "U")


def trace_regions(G: FrontGraph) -> List[Region]:
    """
    Faces of the front graph, each walked with the face on the left; bounded
    faces run counterclockwise.
    """
    seen = set()
    regions = []
    for f in range(len(G.edges)):
        for east in (True, False):
            if (f, east) in seen:
                continue
            turns = []
            dart = (f, east)
            while dart not in seen:
                seen.add(dart)
                v, p_in = _arrival(G, dart)
                rot = G.vertices[v].rotation
                p_out = rot[(rot.index(p_in) - 1) % len(rot)]
                turns.append(Turn(dart, v, p_in, p_out))
                dart = _leave(G, (v, p_out))
            outer = any(
                (t.dart[1] and G.edges[t.dart[0]].outer_above) or (not t.dart[1] and G.edges[t.dart[0]].outer_below)
                for t in turns
            )
            lefts, rights, reflex = [], [], []
            for j, t in enumerate(turns):
                vx = G.vertices[t.vertex]
                if vx.is_east(t.port_in) != vx.is_east(t.port_out):
                    continue
                (lefts if vx.is_east(t.port_in) else rights).append(j)
                if _is_reflex(vx, t.port_in):
                    reflex.append(j)
            regions.append(Region(tuple(turns), outer, tuple(lefts), tuple(rights), tuple(reflex)))
    return regions


def _event_vertex(G: FrontGraph, k: int) -> int:
    return next(i for i, v in enumerate(G.vertices) if v.event == k)


def _shoot(G: FrontGraph, cusp: int) -> Optional[Tuple[Port, Port]]:
    """
    The horizontal arc leaving an outer cusp tip into the region around it,
    as (west end, east end); None when it would end on a crossing or a ball.
    """
    events = G.front.events
    vx = G.vertices[cusp]
    k = vx.event
    if vx.kind == LEFT_CUSP:
        g = vx.level - 1
        for j in range(k - 1, -1, -1):
            kind, i = events[j].kind, events[j].level
            if kind == "L":
                if g == i:
                    return (_event_vertex(G, j), "AI"), (cusp, "AO")
                g = i - 1 if g in (i - 1, i + 1) else g - 2 if g > i + 1 else g
            elif kind == "R":
                if g == i - 1:
                    return (_event_vertex(G, j), "AO"), (cusp, "AO")
                g = g + 2 if g > i - 1 else g
            elif g == i:
                return None
        return None
    g = vx.level - 1
    for j in range(k + 1, len(events)):
        kind, i = events[j].kind, events[j].level
        if kind == "L":
            if g == i - 1:
                return (cusp, "AO"), (_event_vertex(G, j), "AO")
            g = g + 2 if g > i - 1 else g
        elif kind == "R":
            if g == i:
                return (cusp, "AO"), (_event_vertex(G, j), "AI")
            g = i - 1 if g in (i - 1, i + 1) else g - 2 if g > i + 1 else g
        elif g == i:
            return None
    return None


def _split_bad_regions(G: FrontGraph) -> int:
    """Split regions with extra cusps by arcs from their leftmost outer cusp; returns the number of arcs."""
    added = 0
    for _ in range(len(G.vertices) + len(G.edges)):
        bad = [r for r in trace_regions(G) if not r.outer and not r.good]
        if not bad:
            return added
        region = bad[0]
        if not region.reflex:
            raise FrontValidityError(
                f"region with {len(region.lefts)} left and {len(region.rights)} right corners has no cusp to split at"
            )
        turn = min((region.turns[j] for j in region.reflex), key=lambda t: (G.vertices[t.vertex].column, t.vertex))
        ends = _shoot(G, turn.vertex)
        if ends is None:
            raise FrontValidityError(
                f"region at cusp {turn.vertex} (column {G.vertices[turn.vertex].column}) needs a splitting arc "
                "that would end on a crossing or a handle"
            )
        G.add_edge(ends[0], ends[1], SPLIT)
        added += 1
        logger.debug(f"🔧 splitting arc {ends[0]} -> {ends[1]}")
    raise PipelineDefect("region splitting did not terminate")


# ---- Legendrian graph -------------------------------------------------------------

def _is_ribbon_vertex(vx: FrontVertex) -> bool:
    if vx.kind in (LEFT_CUSP, RIGHT_CUSP):
        return len(vx.ports) > 2
    return vx.kind != PASSAGE


def _insert_markers(G: FrontGraph) -> int:
    added = 0
    for K in components(G):
        if any(_is_ribbon_vertex(G.vertices[_arrival(G, d)[0]]) for d in K.darts):
            continue
        f = K.darts[0][0]
        old = G.edges[f]
        west_vx = G.vertices[old.west[0]]
        m = G.add_vertex(MARKER, west_vx.column, west_vx.level)
        east = old.east
        del G.vertices[east[0]].ports[east[1]]
        G.vertices[m].ports["W"] = f
        old.east = (m, "W")
        G.add_edge((m, "E"), east, STRAND, old.outer_above, old.outer_below)
        added += 1
    return added


@dataclass
class LegendrianGraph:
    """The tunneled Legendrian graph: front graph, its regions and its knots."""
    graph: FrontGraph
    regions: List[Region]
    knots: List[Component]
    n_tunnels: int
    n_splits: int
    n_markers: int

    @property
    def bounded(self) -> List[Region]:
        return [r for r in self.regions if not r.outer]

    @property
    def n_handles(self) -> int:
        return len(self.graph.front.handles)


def add_tunnels(front: FrontDiagram) -> LegendrianGraph:
    """
    Tunnel every crossing, split regions with extra cusps, and check that every
    bounded region has one left and one right cusp.

    Raises:
        FrontValidityError: the graph is disconnected, or a region cannot be split
    """
    G = build_front_graph(front)
    links = nx.Graph()
    links.add_nodes_from(range(len(G.vertices)))
    links.add_edges_from((e.west[0], e.east[0]) for e in G.edges)
    if not nx.is_connected(links):
        parts = nx.number_connected_components(links)
        raise FrontValidityError(f"the front and its handles form {parts} separate pieces; join them first")

    n_splits = _split_bad_regions(G)
    n_markers = _insert_markers(G)
    regions = trace_regions(G)
    for r in regions:
        if not r.outer and not r.good:
            raise FrontValidityError(f"region has {len(r.lefts)} left and {len(r.rights)} right corners")
    knots = components(G)
    n_tunnels = sum(1 for v in G.vertices if v.kind == CROSSING)
    logger.info(
        f"🔧 Legendrian graph: {n_tunnels} tunnels, {n_splits} splitting arcs, "
        f"{sum(1 for r in regions if not r.outer)} bounded regions"
    )
    return LegendrianGraph(G, regions, knots, n_tunnels, n_splits, n_markers)


# ---- contact ribbon ----------------------------------------------------------------

RibbonPort = Tuple[Tuple[int, str], str]  # ((front vertex, role), port)
TUNNEL = "tunnel"


@dataclass(frozen=True)
class RibbonEdge:
    start: RibbonPort
    end: RibbonPort
    kind: str = STRAND
    darts: Tuple[Dart, ...] = ()  # front edges in the edge's own direction
    cusps: Tuple[Tuple[int, bool], ...] = ()  # (cusp, passed from U to D)


@dataclass
class RibbonSurface:
    """The contact ribbon of a Legendrian graph and its double."""
    legendrian: LegendrianGraph
    keys: List[Tuple[int, str]]
    rotations: List[Tuple[str, ...]]
    edges: List[RibbonEdge]
    surface: SurfaceComplex
    doubled: DoubledSurface
    port_edge: Dict[RibbonPort, int] = field(default_factory=dict)
    dart_edge: Dict[int, int] = field(default_factory=dict)
    cusp_edge: Dict[int, Tuple[int, bool]] = field(default_factory=dict)

    @property
    def divides(self) -> Tuple[CombCurve, ...]:
        return self.doubled.divides

    def band(self, e: int) -> int:
        return len(self.keys) + e

    def attach(self, port: RibbonPort) -> Half:
        key, p = port
        v = self.keys.index(key)
        return v, 2 * self.rotations[v].index(p)

    def band_end(self, e: int, port: RibbonPort) -> Half:
        return self.band(e), 0 if self.edges[e].start == port else 2

    def seam_between(self, key: Tuple[int, str], p: str, q: str) -> Half:
        v = self.keys.index(key)
        rot = self.rotations[v]
        i, j, m = rot.index(p), rot.index(q), len(rot)
        if j == (i + 1) % m:
            return v, 2 * i + 1
        if i == (j + 1) % m:
            return v, 2 * j + 1
        raise PipelineDefect(f"ports {p} and {q} are not adjacent at ribbon vertex {key}")

    def lift(self, h: Half, copy: int) -> Half:
        return self.doubled.lift_half(h, copy)

    def cocore(self, e: int) -> CombCurve:
        b = self.band(e)
        return arc(self.surface, (b, 1), [(b, 3)])


def _ribbon_key(vx: FrontVertex, v: int, port: str) -> Tuple[int, str]:
    if vx.kind == CROSSING:
        return v, "over" if port in ("NW", "SE", "T") else "under"
    return v, vx.kind


def ribbon_surface(lg: LegendrianGraph) -> RibbonSurface:
    """
    Thicken the Legendrian graph along the contact planes and double it.

    Crossing tunnels run from the over strand to the under strand; the divides
    are the ribbon boundary and the positive half is the copy facing the Reeb
    direction.
    """
    G = lg.graph
    keys, rotations = [], []
    for v, vx in enumerate(G.vertices):
        if not _is_ribbon_vertex(vx):
            continue
        if vx.kind == CROSSING:
            for role in ("over", "under"):
                keys.append((v, role))
                rotations.append(RIBBON_ROTATION[role])
        else:
            keys.append((v, vx.kind))
            rotations.append(tuple(p for p in RIBBON_ROTATION[vx.kind] if p in vx.ports))

    edges: List[RibbonEdge] = []
    used = set()
    dart_edge, cusp_edge = {}, {}
    for key, rot in zip(keys, rotations):
        for p in rot:
            if p == "T" or (key, p) in used:
                continue
            darts, cusps = [], []
            dart = _leave(G, (key[0], p))
            while True:
                darts.append(dart)
                w, q = _arrival(G, dart)
                wx = G.vertices[w]
                if _is_ribbon_vertex(wx):
                    break
                if wx.kind in (LEFT_CUSP, RIGHT_CUSP):
                    cusps.append((w, q == "U"))
                dart = _leave(G, (w, THROUGH[q]))
            end = (_ribbon_key(wx, w, q), q)
            e = len(edges)
            edges.append(RibbonEdge((key, p), end, G.edges[darts[0][0]].kind, tuple(darts), tuple(cusps)))
            used.update({(key, p), end})
            for f, _ in darts:
                dart_edge[f] = e
            for c, u_to_d in cusps:
                cusp_edge[c] = (e, u_to_d)
    for v, vx in enumerate(G.vertices):
        if vx.kind == CROSSING:
            edges.append(RibbonEdge(((v, "over"), "T"), ((v, "under"), "T"), TUNNEL))

    port_edge = {}
    for e, edge in enumerate(edges):
        port_edge[edge.start] = e
        port_edge[edge.end] = e
    halves = [
        [2 * port_edge[(key, p)] + (0 if edges[port_edge[(key, p)]].start == (key, p) else 1) for p in rot]
        for key, rot in zip(keys, rotations)
    ]
    R = ribbon_graph_surface(halves, name=f"ribbon({G.front.name})")
    D = double(R)
    genus = len(edges) - len(keys) + 1
    expected = len(lg.bounded) + lg.n_handles
    if D.surface.genus != genus or genus != expected:
        raise PipelineDefect(
            f"ribbon double has genus {D.surface.genus}; graph rank {genus}, regions plus handles {expected}"
        )
    logger.info(f"🔧 contact ribbon: {len(keys)} vertices, {len(edges)} edges, double of genus {genus}")
    return RibbonSurface(lg, keys, rotations, edges, R, D, port_edge, dart_edge, cusp_edge)


# ---- cut systems ---------------------------------------------------------------------

def _ribbon_port(G: FrontGraph, v: int, port: str) -> RibbonPort:
    return _ribbon_key(G.vertices[v], v, port), port


def _crossing_exits(rs: RibbonSurface, v: int, e_in: int, p_in: str, p_out: str) -> Tuple[List[Half], int]:
    """Exits through one quadrant of a tunneled crossing, and the copy reached."""
    over, under = (v, "over"), (v, "under")
    tb = rs.band(rs.port_edge[(over, "T")])
    quadrant = {("NE", "SE"): "E", ("NW", "NE"): "N", ("SW", "NW"): "W", ("SE", "SW"): "S"}[(p_in, p_out)]
    here = over if p_in in ("NW", "SE") else under
    copy = 1 if quadrant in ("N", "W") else 0
    exits = [rs.lift(rs.band_end(e_in, (here, p_in)), copy)]
    exits.append(rs.lift(rs.attach((here, "T")), copy))
    if quadrant == "E":
        exits += [rs.lift((tb, 1), 0), rs.lift((tb, 0), 1), rs.lift(rs.attach((over, "SE")), 1)]
        return exits, 1
    if quadrant == "W":
        exits += [rs.lift((tb, 3), 1), rs.lift((tb, 0), 0), rs.lift(rs.attach((over, "NW")), 0)]
        return exits, 0
    # N and S run over the tunnel from the over strand to the under strand
    exits += [rs.lift((tb, 2), copy), rs.lift(rs.attach((under, p_out)), copy)]
    return exits, copy


def region_curve(rs: RibbonSurface, region: Region) -> CombCurve:
    """
    The boundary of a region disk pushed onto the doubled ribbon: positive
    half along edges the region lies above, negative half along the others,
    crossing the divides once at each of its two cusps.
    """
    G = rs.legendrian.graph
    word: List[Half] = []
    n = len(region.turns)
    for j, t in enumerate(region.turns):
        f, east = t.dart
        copy = 1 if east else 0
        e = rs.dart_edge[f]
        vx = G.vertices[t.vertex]
        corner = vx.is_east(t.port_in) == vx.is_east(t.port_out)
        if vx.kind == CROSSING:
            exits, copy = _crossing_exits(rs, t.vertex, e, t.port_in, t.port_out)
            word += exits
        elif _is_ribbon_vertex(vx):
            port = _ribbon_port(G, t.vertex, t.port_in)
            word.append(rs.lift(rs.band_end(e, port), copy))
            if corner:
                word.append(rs.lift(rs.seam_between(port[0], t.port_in, t.port_out), copy))
                copy = 1 - copy
            word.append(rs.lift(rs.attach(_ribbon_port(G, t.vertex, t.port_out)), copy))
        elif vx.kind in (LEFT_CUSP, RIGHT_CUSP):
            inner = (vx.kind == LEFT_CUSP) == (t.port_in == "U")
            ce, u_to_d = rs.cusp_edge[t.vertex]
            side = 3 if u_to_d else 1
            word.append(rs.lift((rs.band(ce), side if inner else 4 - side), copy))
            copy = 1 - copy
        nxt = region.turns[(j + 1) % n].dart
        if copy != (1 if nxt[1] else 0):
            raise PipelineDefect(f"region walk reaches the wrong half at vertex {t.vertex}")
    try:
        return reduce(closed_curve(rs.doubled.surface, word))
    except NotEmbeddable as err:
        raise PipelineDefect(f"region curve does not close up: {err}")


def handle_curve(rs: RibbonSurface, handle: int) -> CombCurve:
    """
    Boundary of the compressing disk of a 1-handle.

    One passage: the doubled co-core of the strand through the handle. More
    passages: the doubled arc along the chain, leaving the first chain vertex
    through its seam between C and E and reaching the last one through its
    seam between W and C. The arc never enters a strand band, so the regions
    on both sides of the chain stay off it.
    """
    G = rs.legendrian.graph
    slots = G.passages[handle]
    P = slots[0]
    if len(slots) == 1:
        return rs.doubled.double_arc(rs.cocore(rs.dart_edge[G.vertices[P].ports["E"]]))

    level = {G.vertices[s].level: s for s in slots}
    starts = {vx.level: v for v, vx in enumerate(G.vertices) if vx.kind == CHAIN_START}
    ends = {vx.level: v for v, vx in enumerate(G.vertices) if vx.kind == CHAIN_END}
    first, last = min(level), max(level)

    key = (starts[first], CHAIN_START)
    start = rs.seam_between(key, "C", "E")
    path = [rs.attach((key, "C"))]
    for j in range(first, last):
        chain = rs.port_edge[(key, "C")]
        into = ((ends[j + 1], CHAIN_END), "C")
        path.append(rs.band_end(chain, into))
        if j + 1 < last:
            west = (into[0], "W")
            path.append(rs.attach(west))
            key = (starts[j + 1], CHAIN_START)
            path.append(rs.band_end(rs.port_edge[west], (key, "E")))
            path.append(rs.attach((key, "C")))
        else:
            path.append(rs.seam_between(into[0], "W", "C"))
    return rs.doubled.double_arc(arc(rs.surface, start, path))


def knot_core(rs: RibbonSurface, knot: Component) -> Tuple[CombCurve, List[int]]:
    """The knot pushed into the positive half of the ribbon, and the ribbon edges it runs over."""
    f0, east0 = knot.darts[0]
    e = rs.dart_edge[f0]
    fwd = (f0, east0) in rs.edges[e].darts
    start = (e, fwd)
    word, visited = [], []
    while True:
        visited.append(e)
        edge = rs.edges[e]
        key, p = edge.end if fwd else edge.start
        word.append((rs.band(e), 2 if fwd else 0))
        q = THROUGH[p]
        word.append(rs.attach((key, q)))
        e = rs.port_edge[(key, q)]
        fwd = rs.edges[e].start == (key, q)
        if (e, fwd) == start:
            break
    return reduce(closed_curve(rs.doubled.surface, word)), visited


@dataclass
class KirbyCompilation:
    """Everything the front compiler builds, with the diagram last."""
    front: FrontDiagram
    legendrian: LegendrianGraph
    ribbon: RibbonSurface
    region_curves: List[CombCurve]
    handle_curves: List[CombCurve]
    knot_cores: List[CombCurve]
    meridians: List[int]  # index in C_2 of each knot meridian
    swc_step: WitnessStep
    diagram: DividedDiagram


def compile_front(front: FrontDiagram) -> KirbyCompilation:
    """
    Bisection with divides of the 4-manifold given by a front.

    C_1 bounds disks in the complement of the ribbon neighborhood, C_2 is the
    co-cores of the ribbon edges outside a spanning tree that contains every
    knot except one edge of it, and C_3 twists each knot meridian right about
    the knot core.

    Raises:
        FrontValidityError: the front cannot be tunneled into a good graph
        PipelineDefect: a constructed system fails its own checks
    """
    lg = add_tunnels(front)
    rs = ribbon_surface(lg)
    S = rs.doubled.surface
    knots = [K for K in lg.knots if not K.circle]

    regions = [region_curve(rs, r) for r in lg.bounded]
    handles = [handle_curve(rs, h) for h in range(lg.n_handles)]
    c1 = regions + handles

    cores, knot_edges, first_edges = [], [], []
    for K in knots:
        core, visited = knot_core(rs, K)
        cores.append(core)
        knot_edges.append(visited)
        first_edges.append(visited[0])
    graph = nx.MultiGraph()
    graph.add_nodes_from(range(len(rs.keys)))
    on_knot = {e for visited in knot_edges for e in visited}
    for e, edge in enumerate(rs.edges):
        if e in first_edges:
            continue
        u, v = rs.keys.index(edge.start[0]), rs.keys.index(edge.end[0])
        graph.add_edge(u, v, key=e, weight=0 if e in on_knot else 1)
    tree = {k for _, _, k in nx.minimum_spanning_edges(graph, keys=True, data=False)}
    nontree = [e for e in range(len(rs.edges)) if e not in tree]
    c2 = [rs.doubled.double_arc(rs.cocore(e)) for e in nontree]
    meridians = [nontree.index(e) for e in first_edges]

    c3 = list(c2)
    for i, core in zip(meridians, cores):
        if meet(core, c2[i]) != 1:
            raise PipelineDefect("knot core does not meet its meridian once")
        c3[i] = dehn_twist(c2[i], core, RIGHT)

    for label, system in (("C_1", c1), ("C_2", c2), ("C_3", c3)):
        report = validate_cut_system(S, system)
        if not report.ok:
            raise PipelineDefect(f"{label} of front '{front.name}': " + "; ".join(report.defects))
    k = lg.n_handles
    h1 = h1_of_splitting(S, c1, c2)
    if h1.free_rank != k or not h1.is_free:
        raise PipelineDefect(f"first pair has H1 = {h1}, expected rank {k}")

    special = (meridians[0], cores[0]) if len(cores) == 1 else None
    step = WitnessStep(tuple(cores), tuple(range(len(c2))), special)
    provenance = Provenance(
        KIRBY_COMPILED,
        GsWcWitness((WitnessStep(by_construction=True), step)),
        (
            ("front", front.name),
            ("tunnels", str(lg.n_tunnels)),
            ("splitting_arcs", str(lg.n_splits)),
            ("handles", str(k)),
            ("knots", str(len(knots))),
        ),
    )
    diagram = DividedDiagram(
        S, rs.divides, (cut_system(c1), cut_system(c2), cut_system(c3)),
        provenance, frozenset(range(rs.doubled.offset)), rs.doubled,
    )
    logger.info(f"✅ compiled front '{front.name}' into a genus-{S.genus} bisection with divides")
    return KirbyCompilation(front, lg, rs, regions, handles, cores, meridians, step, diagram)


def bisection_from_front(front: FrontDiagram) -> DividedDiagram:
    return compile_front(front).diagram


def sector_diagram(compiled: KirbyCompilation) -> DividedDiagram:
    """The (C_2, C_3) pair alone, carrying its Weinstein cobordance witness."""
    d = compiled.diagram
    provenance = Provenance(KIRBY_COMPILED, GsWcWitness((compiled.swc_step,)), d.provenance.details)
    return DividedDiagram(d.surface, d.divides, d.cut_systems[1:], provenance, d.positive_polygons, d.doubled)
