"""
Multisection diagrams with divides: data model, verifier, Weinstein
cobordance witnesses and the genus-1 classification.

A diagram stores n + 1 cut systems for n sectors. Genus-1 slopes are reported
in the figure chart: coordinates in the basis (alpha_1, alpha_2) with the
second coordinate negated, so the tight dividing curves read as (1, -1).
"""

import logging
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, List, Optional, Sequence, Tuple, Union

from config.msd_config import MSD_BUDGET, STATUS_MESSAGES
from utility.curves import CombCurve, is_trivial, reduce, torus_curve
from utility.cutting import Piece, cut_along
from utility.doubling import DoubledSurface, boundary_pushoffs
from utility.errors import NotEmbeddable, NotSeparating, PiecesNotHomeomorphic
from utility.heegaard import (
    CutSystem, Recognition, SlideCertificate, cut_system, meet, recognize_by_certificate, recognize_s1s2,
    twist_certificate, validate_cut_system,
)
from utility.homology import HomologyClass, algebraic_intersection, homology_basis, homology_class
from utility.mcg import RIGHT, dehn_twist
from utility.surface import SurfaceComplex, torus_surface

logger = logging.getLogger(__name__)

GENUS1_TIGHT = "Genus1Tight"
GENUS1_OVERTWISTED = "Genus1Overtwisted"
BY_CONSTRUCTION = "ByConstruction"
UNKNOWN = "Unknown"
NOT_FOUND = "NotFound"

PALF_COMPILED = "palf-compiled"
KIRBY_COMPILED = "kirby-compiled"
MANUAL = "manual"


# ---- witnesses --------------------------------------------------------------

@dataclass(frozen=True)
class WitnessStep:
    """Right twists taking one cut system to the next."""
    twists: Tuple[CombCurve, ...] = ()
    matching: Tuple[int, ...] = ()  # curve j goes to curve matching[j] of the next system
    special: Optional[Tuple[int, CombCurve]] = None  # (index of beta, V) with gamma = tau_V(beta)
    by_construction: bool = False  # contact splitting of a Legendrian graph ribbon, no twists

    def apply(self, c: CombCurve) -> CombCurve:
        for t in self.twists:
            c = dehn_twist(c, t, RIGHT)
        return c


@dataclass(frozen=True)
class GsWcWitness:
    steps: Tuple[WitnessStep, ...]

    @property
    def is_standard(self) -> bool:
        """True when every step is a single twist of the special form."""
        return all(s.special is not None or not s.twists for s in self.steps)


@dataclass(frozen=True)
class Provenance:
    kind: str = MANUAL
    witness: Optional[GsWcWitness] = None
    details: Tuple[Tuple[str, str], ...] = ()

    def to_dict(self) -> Dict:
        return {"kind": self.kind, "details": dict(self.details), "has_witness": self.witness is not None}


@dataclass
class DividedDiagram:
    surface: SurfaceComplex
    divides: Tuple[CombCurve, ...]
    cut_systems: Tuple[CutSystem, ...]
    provenance: Provenance = field(default_factory=Provenance)
    positive_polygons: Optional[FrozenSet[int]] = None
    doubled: Optional[DoubledSurface] = field(default=None, compare=False, repr=False)
    # per sector, the standard-position certificate found while building the diagram
    certificates: Tuple[Optional[SlideCertificate], ...] = field(default=(), compare=False, repr=False)

    @property
    def genus(self) -> int:
        return self.surface.genus

    @property
    def n_sectors(self) -> int:
        return len(self.cut_systems) - 1

    def in_positive(self, c: CombCurve) -> bool:
        """Whether a closed curve lies in the positive side of the divides."""
        c = reduce(c)
        if any(c.same_class(d) for d in self.divides):
            return True
        if self.positive_polygons is None:
            return False
        if any(p not in self.positive_polygons for p, _ in c.path):
            return False
        return all(meet(c, d) == 0 for d in self.divides)

    def meets_divides(self, c: CombCurve) -> int:
        return sum(meet(c, d) for d in self.divides)


# ---- axioms -------------------------------------------------------------------

def validate_divides(surface: SurfaceComplex, divides: Sequence[CombCurve]) -> Tuple[Piece, Piece]:
    """
    Cut along the dividing multicurve.

    Returns:
        The two sides, in cut-complex order

    Raises:
        NotSeparating: the complement is not exactly two pieces
        PiecesNotHomeomorphic: the sides differ in genus or boundary count
    """
    try:
        pieces = cut_along(surface, divides)
    except NotEmbeddable as e:
        raise NotSeparating(f"dividing curves are not disjoint: {e}")
    if len(pieces) != 2:
        raise NotSeparating(f"dividing set leaves {len(pieces)} pieces")
    plus, minus = pieces
    if plus.signature != minus.signature:
        raise PiecesNotHomeomorphic(f"sides have (genus, boundary) {plus.signature} and {minus.signature}")
    return plus, minus


# ---- genus one -------------------------------------------------------------------

def _pair(x: CombCurve, y: CombCurve) -> int:
    return algebraic_intersection(homology_class(x), homology_class(y))


def _same_up_to_sign(x, y) -> bool:
    basis = homology_basis(x.surface)
    return basis.is_zero(x.vector - y.vector) or basis.is_zero(x.vector + y.vector)


def _twisted(x: CombCurve, about: CombCurve, handedness: str) -> HomologyClass:
    """Homology class of the twist of x about a curve."""
    n = _pair(about, x) * (1 if handedness == RIGHT else -1)
    return HomologyClass(x.surface, tuple(int(t) for t in homology_class(x).vector + n * homology_class(about).vector))


def _genus1_pair_status(a: CombCurve, b: CombCurve, divides: Sequence[CombCurve]) -> str:
    if _same_up_to_sign(homology_class(a), homology_class(b)):
        return GENUS1_TIGHT
    if abs(_pair(a, b)) == 1 and _same_up_to_sign(homology_class(b), _twisted(a, divides[0], RIGHT)):
        return GENUS1_TIGHT
    return GENUS1_OVERTWISTED


@dataclass(frozen=True)
class Genus1Classification:
    euler_numbers: Tuple[int, ...]
    slopes: Tuple[Tuple[int, int], ...]  # figure chart
    divides_slope: Tuple[int, int]

    def to_dict(self) -> Dict:
        return {
            "euler_numbers": list(self.euler_numbers),
            "slopes": [list(s) for s in self.slopes],
            "divides_slope": list(self.divides_slope),
        }


@dataclass(frozen=True)
class NotGenus1WithDivides:
    diagnosis: str

    def to_dict(self) -> Dict:
        return {"status": "NotGenus1WithDivides", "diagnosis": self.diagnosis}


def _figure_slope(p: int, q: int) -> Tuple[int, int]:
    p, q = p, -q
    if p < 0 or (p == 0 and q < 0):
        p, q = -p, -q
    return p, q


def classify_genus1(diagram: DividedDiagram) -> Union[Genus1Classification, NotGenus1WithDivides]:
    """
    Slopes and Euler numbers of a genus-1 diagram.

    The chart is fixed by alpha_1 = (1, 0) and alpha_2 = (0, 1). Each Euler
    number pairs alpha_{i-2} with alpha_i, curves oriented along the chain so
    consecutive pairings are +1; bundles are indexed by i = 3 .. n + 1.
    """
    if diagram.genus != 1:
        return NotGenus1WithDivides(f"surface has genus {diagram.genus}")
    alphas = [s[0] for s in diagram.cut_systems]
    if len(alphas) < 2:
        return NotGenus1WithDivides("need at least two cut systems")
    divides = [d for d in diagram.divides if not is_trivial(reduce(d))]
    if not divides:
        return NotGenus1WithDivides("no dividing curves")
    if not all(_same_up_to_sign(homology_class(divides[0]), homology_class(d)) for d in divides):
        return NotGenus1WithDivides("dividing curves are not parallel")
    for i, a in enumerate(alphas):
        if any(meet(a, d) != 1 for d in divides) or diagram.meets_divides(a) != 2:
            return NotGenus1WithDivides(f"alpha_{i + 1} does not meet the divides in two points")

    a1, a2 = alphas[0], alphas[1]
    base = _pair(a1, a2)
    if abs(base) != 1:
        return NotGenus1WithDivides(f"alpha_1 and alpha_2 meet algebraically {base} times")

    def chart(c: CombCurve) -> Tuple[int, int]:
        return _pair(c, a2) * base, _pair(a1, c)

    d_true = chart(divides[0])
    if d_true not in ((1, 1), (-1, -1)):
        return NotGenus1WithDivides(f"dividing slope {_figure_slope(*d_true)} is not (1, -1)")

    for i in range(len(alphas) - 1):
        status = _genus1_pair_status(alphas[i], alphas[i + 1], divides)
        if status != GENUS1_TIGHT:
            return NotGenus1WithDivides(f"alpha_{i + 2} is not a right twist of alpha_{i + 1} about the divides")

    # chained orientation: +1 = <alpha_{i-1}, alpha_i>
    signs = [1, base]
    for i in range(2, len(alphas)):
        p = _pair(alphas[i - 1], alphas[i]) * signs[i - 1]
        signs.append(p if p != 0 else signs[i - 1])
    euler = tuple(
        _pair(alphas[i - 2], alphas[i]) * signs[i - 2] * signs[i]
        for i in range(2, len(alphas))
    )
    slopes = tuple(_figure_slope(*chart(a)) for a in alphas)
    result = Genus1Classification(euler, slopes, _figure_slope(*d_true))
    logger.info(f"✅ genus-1 plumbing with Euler numbers {list(euler)}")
    return result


def genus1_chain(n: int, handedness: str = RIGHT) -> DividedDiagram:
    """
    Genus-1 diagram on the torus preset with n + 1 slopes, each one the twist
    of the previous about the dividing curve.
    """
    if n < 1:
        raise ValueError("need at least one sector")
    S = torus_surface()
    d = torus_curve(S, 1, 1)
    alphas = [torus_curve(S, 1, 0)]
    for _ in range(n):
        alphas.append(dehn_twist(alphas[-1], d, handedness))
    systems = tuple(cut_system([a]) for a in alphas)
    witness = None
    if handedness == RIGHT:
        witness = GsWcWitness(tuple(WitnessStep((d,), (0,), (0, d)) for _ in range(n)))
    provenance = Provenance(MANUAL, witness, (("construction", f"genus-1 chain, {handedness} twists"),))
    return DividedDiagram(S, (d, d), systems, provenance)


def genus1_diagram(slopes: Sequence[Tuple[int, int]], divides_slope: Tuple[int, int] = (1, -1)) -> DividedDiagram:
    """Genus-1 diagram on the torus preset from figure-chart slopes."""
    S = torus_surface()
    d = torus_curve(S, divides_slope[0], -divides_slope[1])
    systems = tuple(cut_system([torus_curve(S, p, -q)]) for p, q in slopes)
    return DividedDiagram(S, (d, d), systems)


# ---- Weinstein cobordance ------------------------------------------------------

def _candidate_twist_curves(diagram: DividedDiagram) -> List[CombCurve]:
    pool: List[CombCurve] = []
    witness = diagram.provenance.witness
    if witness is not None:
        for step in witness.steps:
            pool.extend(step.twists)
    pool.extend(diagram.divides)
    if diagram.doubled is not None:
        F = diagram.doubled.fiber
        basis = homology_basis(F)
        cycles = [basis.fundamental_cycle(e) for e in basis.nontree]
        products = []
        for i in range(len(cycles)):
            for j in range(i + 1, len(cycles)):
                products.append(reduce(CombCurve(F, cycles[i].kind, cycles[i].path + cycles[j].path)))
        for c in cycles + products + boundary_pushoffs(F):
            if not is_trivial(reduce(c)):
                pool.append(diagram.doubled.embed1(c))
    unique: Dict[Tuple, CombCurve] = {}
    for c in pool:
        c = reduce(c)
        if not is_trivial(c):
            unique.setdefault(c.key(), c)
    return [c for c in unique.values() if diagram.in_positive(c)]


def _match(images: Sequence[CombCurve], target: CutSystem) -> Optional[Tuple[int, ...]]:
    matching = []
    for c in images:
        hits = [j for j, t in enumerate(target) if c.same_class(t) and j not in matching]
        if not hits:
            return None
        matching.append(hits[0])
    return tuple(matching)


def replay_witness(diagram: DividedDiagram, witness: GsWcWitness) -> bool:
    """Check every witness step: right twists in the positive side mapping C_i onto C_{i+1}."""
    if len(witness.steps) != diagram.n_sectors:
        return False
    for i, step in enumerate(witness.steps):
        if step.by_construction:
            if i != 0 or diagram.provenance.kind != KIRBY_COMPILED:
                return False
            continue
        if not all(diagram.in_positive(t) for t in step.twists):
            return False
        images = [step.apply(c) for c in diagram.cut_systems[i]]
        if _match(images, diagram.cut_systems[i + 1]) is None:
            return False
    return True


def _step_for(diagram: DividedDiagram, i: int, pool: Sequence[CombCurve]) -> Optional[WitnessStep]:
    here, there = diagram.cut_systems[i], diagram.cut_systems[i + 1]
    if here.same_as(there):
        return WitnessStep((), _match(list(here), there))
    changed = [j for j, c in enumerate(here) if not any(c.same_class(t) for t in there)]
    for v in pool:
        images = [dehn_twist(c, v, RIGHT) for c in here]
        matching = _match(images, there)
        if matching is None:
            continue
        special = None
        if len(changed) == 1 and meet(v, here[changed[0]]) == 1:
            special = (changed[0], v)
        return WitnessStep((v,), matching, special)
    return None


def detect_gswc(diagram: DividedDiagram) -> Union[GsWcWitness, str]:
    """
    Search, sector by sector, for a right twist about a curve in the positive
    side that carries each cut system to the next.

    Returns:
        A replay-verified GsWcWitness, or NOT_FOUND
    """
    own = diagram.provenance.witness
    if own is not None and replay_witness(diagram, own):
        return own
    pool = _candidate_twist_curves(diagram)
    steps = []
    for i in range(diagram.n_sectors):
        step = _step_for(diagram, i, pool)
        if step is None:
            logger.info(f"🔍 no positive right twist found for sector {i + 1}")
            return NOT_FOUND
        steps.append(step)
    witness = GsWcWitness(tuple(steps))
    if not replay_witness(diagram, witness):
        logger.warning("⚠️ witness failed replay")
        return NOT_FOUND
    logger.info(f"✅ Weinstein cobordance witness with {len(steps)} steps")
    return witness


# ---- verifier ---------------------------------------------------------------------

@dataclass
class PairReport:
    first: int
    second: int
    recognition: Recognition
    tightness: Optional[str] = None
    boundary: bool = False

    def to_dict(self) -> Dict:
        out = {
            "pair": [self.first + 1, self.second + 1],
            "boundary": self.boundary,
            "recognition": self.recognition.to_dict(),
            "tightness": self.tightness,
        }
        if self.tightness:
            out["message"] = STATUS_MESSAGES.get(self.tightness, "")
        return out


@dataclass
class VerificationReport:
    defects: List[str] = field(default_factory=list)
    pairs: List[PairReport] = field(default_factory=list)

    @property
    def axioms_ok(self) -> bool:
        return not self.defects

    @property
    def ok(self) -> bool:
        """
        Axioms hold, every consecutive pair is Certified and none is
        overtwisted. The boundary pair (C_1, C_{n+1}) presents the boundary
        3-manifold, which need not be a connected sum of S1 x S2's, so it is
        reported on its own in boundary_ok.
        """
        inner = [p for p in self.pairs if not p.boundary]
        return (
            self.axioms_ok
            and all(p.recognition.certified for p in inner)
            and all(p.tightness != GENUS1_OVERTWISTED for p in inner)
        )

    @property
    def boundary_ok(self) -> Optional[bool]:
        """Whether the boundary pair was Certified; None when it was not examined."""
        outer = [p for p in self.pairs if p.boundary]
        if not outer:
            return None
        return all(p.recognition.certified for p in outer)

    def to_dict(self) -> Dict:
        return {
            "ok": self.ok,
            "boundary_ok": self.boundary_ok,
            "axioms_ok": self.axioms_ok,
            "defects": self.defects,
            "pairs": [p.to_dict() for p in self.pairs],
        }


def check_axioms(diagram: DividedDiagram) -> List[str]:
    defects = []
    try:
        validate_divides(diagram.surface, diagram.divides)
    except (NotSeparating, PiecesNotHomeomorphic) as e:
        defects.append(str(e))
    for i, system in enumerate(diagram.cut_systems):
        report = validate_cut_system(diagram.surface, system)
        if not report.ok:
            defects.append(f"C_{i + 1}: " + "; ".join(report.defects))
        for j, c in enumerate(system):
            hits = diagram.meets_divides(c)
            if hits != 2:
                defects.append(f"C_{i + 1} curve {j + 1} meets the divides {hits} times")
    return defects


def recognize_sector(
    diagram: DividedDiagram, i: int, hints: Tuple[CombCurve, ...], budget: int
) -> Recognition:
    """
    Carried certificate first, then slides along a single witness twist,
    then the general search.
    """
    first, second = diagram.cut_systems[i], diagram.cut_systems[i + 1]
    carried = diagram.certificates[i] if i < len(diagram.certificates) else None
    if carried is not None:
        found = recognize_by_certificate(diagram.surface, first, second, carried)
        if found is not None:
            return found
    if len(hints) == 1:
        certificate = twist_certificate(first, hints[0], RIGHT, budget)
        if certificate is not None:
            found = recognize_by_certificate(diagram.surface, first, second, certificate)
            if found is not None:
                return found
    return recognize_s1s2(diagram.surface, first, second, budget, hints)


def verify_diagram(diagram: DividedDiagram, budget: int = MSD_BUDGET) -> VerificationReport:
    """
    Check the axioms, recognize every consecutive pair and the boundary pair,
    and settle tightness where a certificate exists.
    """
    report = VerificationReport(defects=check_axioms(diagram))
    if report.defects:
        for d in report.defects:
            logger.warning(f"⚠️ {d}")

    witness = None
    if diagram.genus != 1:
        found = detect_gswc(diagram)
        witness = found if isinstance(found, GsWcWitness) else None

    systems = diagram.cut_systems
    for i in range(diagram.n_sectors):
        hints = witness.steps[i].twists if witness is not None else ()
        recognition = recognize_sector(diagram, i, hints, budget)
        if diagram.genus == 1:
            tightness = _genus1_pair_status(systems[i][0], systems[i + 1][0], diagram.divides)
        elif witness is not None:
            tightness = BY_CONSTRUCTION
        else:
            tightness = UNKNOWN
        report.pairs.append(PairReport(i, i + 1, recognition, tightness))

    last = len(systems) - 1
    recognition = recognize_s1s2(diagram.surface, systems[0], systems[last], budget)
    report.pairs.append(PairReport(0, last, recognition, None, boundary=True))

    status = "✅ verified" if report.ok else "❌ not verified"
    logger.info(f"{status}: {len(report.defects)} defects over {diagram.n_sectors} sectors")
    return report
