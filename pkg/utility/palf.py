"""
Positive allowable Lefschetz fibrations over the disk and their multisection
diagrams with divides.
"""

import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple, Union

import networkx as nx

from config.msd_config import MSD_BUDGET
from utility.curves import CombCurve, arc, closed_curve, is_trivial, reduce
from utility.cutting import cut_along
from utility.divides import (
    PALF_COMPILED, DividedDiagram, GsWcWitness, Provenance, WitnessStep,
)
from utility.doubling import default_arc_system, double
from utility.errors import EmptyFiberBoundary, NotEmbeddable, NullHomologousCycle
from utility.heegaard import StandardForm, cut_system, standardize_pair
from utility.homology import homology_class
from utility.mcg import LEFT, RIGHT, Letter, TwistWord, dehn_twist, lantern
from utility.surface import Half, SurfaceComplex, build_surface, fiber_preset

logger = logging.getLogger(__name__)

UNKNOWN = "Unknown"


@dataclass(frozen=True)
class Palf:
    fiber: SurfaceComplex
    cycles: Tuple[CombCurve, ...]
    arc_system: Optional[Tuple[CombCurve, ...]] = None
    names: Tuple[str, ...] = field(default=(), compare=False)

    @property
    def arcs(self) -> List[CombCurve]:
        if self.arc_system is not None:
            return list(self.arc_system)
        return default_arc_system(self.fiber)


def make_palf(fiber: SurfaceComplex, cycles: Sequence[CombCurve], arc_system: Optional[Sequence[CombCurve]] = None,
              names: Sequence[str] = ()) -> Palf:
    arcs = tuple(arc_system) if arc_system is not None else None
    return Palf(fiber, tuple(reduce(c) for c in cycles), arcs, tuple(names))


# ---- presets ----------------------------------------------------------------

def band_cycle(fiber: SurfaceComplex, e: int) -> CombCurve:
    """The loop through band e of a one-vertex fiber."""
    band = 1 + e
    if band >= len(fiber.sides):
        raise ValueError(f"fiber {fiber.name!r} has no band {e}")
    return closed_curve(fiber, [fiber.partner((band, 0)), (band, 2)])


def cycle_presets(fiber_name: str) -> Dict[str, CombCurve]:
    """Named vanishing cycles on the fiber presets."""
    F = fiber_preset(fiber_name)
    if fiber_name == "annulus":
        return {"core": band_cycle(F, 0)}
    if fiber_name == "holed-torus":
        return {"a": band_cycle(F, 0), "b": band_cycle(F, 1)}
    if fiber_name == "4-holed-sphere":
        return dict(lantern().curve_names)
    if fiber_name == "pants":
        return {"a": band_cycle(F, 0), "b": band_cycle(F, 1)}
    return {}


def palf_from_preset(fiber_name: str, cycle_names: Sequence[str]) -> Palf:
    presets = cycle_presets(fiber_name)
    missing = [n for n in cycle_names if n not in presets]
    if missing:
        raise ValueError(f"unknown cycles {missing} on fiber '{fiber_name}', expected {sorted(presets)}")
    F = fiber_preset(fiber_name)
    return make_palf(F, [presets[n] for n in cycle_names], names=cycle_names)


# ---- validity -------------------------------------------------------------------

def validate_palf(palf: Palf) -> None:
    """
    Raises:
        EmptyFiberBoundary: the fiber is closed
        NullHomologousCycle: a vanishing cycle is zero in H_1 of the fiber
        NotEmbeddable: the arc system does not cut the fiber into one disk
    """
    F = palf.fiber
    if F.n_boundary == 0:
        raise EmptyFiberBoundary("the fiber of a PALF needs boundary")
    for i, c in enumerate(palf.cycles):
        if not c.is_closed or c.surface != F:
            raise NullHomologousCycle(i, f"cycle {i} is not a closed curve on the fiber")
        if is_trivial(reduce(c)) or homology_class(c).is_zero():
            raise NullHomologousCycle(i, f"cycle {i} is null-homologous in the fiber")
    arcs = palf.arcs
    expected = 2 * F.genus + F.n_boundary - 1
    if len(arcs) != expected:
        raise NotEmbeddable(f"arc system has {len(arcs)} arcs, expected {expected}")
    pieces = cut_along(F, arcs)
    if len(pieces) != 1 or pieces[0].signature != (0, 1):
        raise NotEmbeddable(f"arc system cuts the fiber into {[p.signature for p in pieces]}")
    logger.debug(f"✅ PALF on {F!r} with {len(palf.cycles)} cycles is allowable")


# ---- compiler -----------------------------------------------------------------

def compile_palf(palf: Palf) -> DividedDiagram:
    """
    Multisection diagram with divides of a PALF.

    The surface is the double of the fiber, the divides its boundary. The
    first cut system is the doubled arc system; each next one is the previous
    system twisted right about the next vanishing cycle in the positive half.
    """
    validate_palf(palf)
    if not palf.cycles:
        raise ValueError("a PALF needs at least one vanishing cycle")
    D = double(palf.fiber)
    systems = [cut_system([D.double_arc(a) for a in palf.arcs])]
    steps = []
    for c in palf.cycles:
        v = reduce(D.embed1(c))
        systems.append(cut_system([dehn_twist(x, v, RIGHT) for x in systems[-1]]))
        steps.append(WitnessStep((v,), tuple(range(len(systems[-1])))))
    provenance = Provenance(
        PALF_COMPILED,
        GsWcWitness(tuple(steps)),
        (("fiber", palf.fiber.name), ("cycles", ",".join(palf.names) or str(len(palf.cycles)))),
    )
    positive = frozenset(range(D.offset))
    diagram = DividedDiagram(D.surface, D.divides, tuple(systems), provenance, positive, D)
    logger.info(f"🔧 compiled PALF into a genus-{D.surface.genus} diagram with {len(palf.cycles)} sectors")
    return diagram


# ---- factorizations ---------------------------------------------------------------

@dataclass(frozen=True)
class Factorization:
    surface: SurfaceComplex
    word: TwistWord
    sectors: Tuple[Tuple[int, int], ...]  # letter ranges [start, stop) per sector
    positive: Tuple[bool, ...] = ()

    def block(self, i: int) -> TwistWord:
        start, stop = self.sectors[i]
        return TwistWord(self.word.letters[start:stop], self.surface)

    @property
    def letters(self) -> Tuple[Letter, ...]:
        return self.word.letters

    def to_dict(self) -> Dict:
        return {
            "letters": [
                {"path": [list(h) for h in l.curve.path], "handedness": l.handedness}
                for l in self.word.letters
            ],
            "sectors": [list(s) for s in self.sectors],
            "positive": list(self.positive),
        }


def double_factorization(palf: Palf) -> Factorization:
    """The PALF monodromy carried into the positive half of the double."""
    validate_palf(palf)
    D = double(palf.fiber)
    curves = [reduce(D.embed1(c)) for c in palf.cycles]
    word = TwistWord(tuple(Letter(c, RIGHT) for c in curves), D.surface)
    sectors = tuple((i, i + 1) for i in range(len(curves)))
    return Factorization(D.surface, word, sectors, tuple(True for _ in curves))


def _dual_letter(form: StandardForm) -> Optional[CombCurve]:
    duals = [(i, j) for i, j, kind in form.pairing if kind == "dual"]
    if len(duals) != 1:
        return None
    i, j = duals[0]
    a, b = form.first[i], form.second[j]
    candidates = [
        dehn_twist(b, a, RIGHT),
        dehn_twist(a, b, LEFT),
        dehn_twist(a, b, RIGHT),
        dehn_twist(b, a, LEFT),
    ]
    for c in candidates:
        if dehn_twist(a, c, RIGHT).same_class(b):
            return c
    return None


def factorize(diagram: DividedDiagram, budget: int = MSD_BUDGET) -> Union[Factorization, str]:
    """
    Read one right twist per sector off standard positions of consecutive
    cut systems; identical consecutive systems give an empty block.

    Returns:
        Factorization, or UNKNOWN when a pair cannot be standardized with
        exactly one dual pair within budget
    """
    letters: List[Letter] = []
    sectors = []
    witness = diagram.provenance.witness
    systems = diagram.cut_systems
    for i in range(diagram.n_sectors):
        start = len(letters)
        if not systems[i].same_as(systems[i + 1]):
            hints = witness.steps[i].twists if witness is not None and i < len(witness.steps) else ()
            form = standardize_pair(diagram.surface, systems[i], systems[i + 1], budget, hints)
            if not isinstance(form, StandardForm):
                logger.warning(f"⚠️ sector {i + 1} not standardized within budget")
                return UNKNOWN
            c = _dual_letter(form)
            if c is None:
                logger.warning(f"⚠️ sector {i + 1} has k = {form.k}, not one dual pair")
                return UNKNOWN
            letters.append(Letter(c, RIGHT))
        sectors.append((start, len(letters)))
    word = TwistWord(tuple(letters), diagram.surface)
    positive = tuple(diagram.in_positive(l.curve) for l in letters)
    logger.info(f"✅ factorization with {len(letters)} letters over {len(sectors)} sectors")
    return Factorization(diagram.surface, word, tuple(sectors), positive)


def replay_factorization(diagram: DividedDiagram, factorization: Factorization, budget: int = MSD_BUDGET) -> bool:
    """Check that each block carries C_i to C_{i+1} up to handle slides."""
    if len(factorization.sectors) != diagram.n_sectors:
        return False
    systems = diagram.cut_systems
    for i in range(diagram.n_sectors):
        block = factorization.block(i)
        image = [c for c in systems[i]]
        for letter in block.letters:
            image = [dehn_twist(x, letter.curve, letter.handedness) for x in image]
        image_system = cut_system(image)
        if image_system.same_as(systems[i + 1]):
            continue
        form = standardize_pair(diagram.surface, image_system, systems[i + 1], budget)
        if not isinstance(form, StandardForm) or form.k != diagram.genus:
            return False
    return True


# ---- PALF stabilization ---------------------------------------------------------

def handle_route(fiber: SurfaceComplex, first: Half, second: Half) -> CombCurve:
    """An arc in the fiber from boundary side `second` to boundary side `first` along the dual graph."""
    route = nx.shortest_path(fiber.dual_graph, second[0], first[0])
    path = []
    for p, q in zip(route, route[1:]):
        e = min(fiber.dual_graph.get_edge_data(p, q))
        a, b = fiber.pairs[e]
        path.append(a if a[0] == p else b)
    path.append(first)
    return arc(fiber, second, path)


def attach_handle(fiber: SurfaceComplex, route: CombCurve) -> Tuple[SurfaceComplex, CombCurve]:
    """
    Attach a band to the two boundary sides joined by `route` (from route.start
    to its last side).

    Returns:
        (new fiber, the closed curve running along the route and back over the
        band). The band is the last polygon with sides [end, seam, start, seam].
    """
    w, u = route.start, route.path[-1]
    band = len(fiber.sides)
    pairs = [[a[0], a[1], b[0], b[1]] for a, b in fiber.pairs]
    pairs += [[u[0], u[1], band, 0], [w[0], w[1], band, 2]]
    G = build_surface({"polygons": list(fiber.sides) + [4], "pairs": pairs, "name": f"stab({fiber.name})"})
    cycle = reduce(closed_curve(G, [(band, 2)] + list(route.path)))
    return G, cycle


def stabilize_palf(palf: Palf) -> Palf:
    """
    Attach a 1-handle to the fiber along its first two boundary sides and
    append the vanishing cycle running once over it.
    """
    F = palf.fiber
    if len(F.boundary_sides) < 2:
        raise EmptyFiberBoundary("the fiber needs two boundary sides to attach a 1-handle")
    G, cycle = attach_handle(F, handle_route(F, F.boundary_sides[0], F.boundary_sides[1]))
    moved = [CombCurve(G, c.kind, c.path, c.start) for c in palf.cycles]
    names = palf.names + ("stab",) if palf.names else ()
    stabilized = make_palf(G, moved + [cycle], None, names)
    logger.info(f"🔧 stabilized PALF: fiber genus {G.genus}, {G.n_boundary} boundary circles")
    return stabilized


def enumerate_genus1(n: int) -> DividedDiagram:
    """The genus-1 n-section with divides: the annulus PALF with n core cycles."""
    if n < 2:
        raise ValueError("genus-1 multisections with divides need n >= 2")
    diagram = compile_palf(palf_from_preset("annulus", ["core"] * n))
    logger.info(f"🔧 genus-1 {n}-section with divides")
    return diagram
