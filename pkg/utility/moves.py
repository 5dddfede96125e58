"""
Stabilization and monodromy substitution of multisection diagrams with divides.
"""

import logging
from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple, Union

from config.msd_config import MSD_BUDGET
from utility.curves import ARC, CombCurve, arc, reduce, self_intersection
from utility.divides import DividedDiagram, GsWcWitness, Provenance, WitnessStep
from utility.doubling import DoubledSurface, double
from utility.errors import DualityFailure, InvalidSite, RangeMismatch, RelationNotVerified
from utility.heegaard import (
    CutSystem, SlideCertificate, certificate_from_form, cut_system, meet, recognize_s1s2, twist_certificate,
)
from utility.mcg import RIGHT, Letter, Relation, TwistWord, acts_identically, dehn_twist, lantern
from utility.palf import Factorization, attach_handle, factorize, handle_route
from utility.surface import Half

logger = logging.getLogger(__name__)


# ---- stabilization ----------------------------------------------------------

@dataclass(frozen=True)
class StabilizationSite:
    """
    Two points of the divides and an arc between them in the positive side.

    The points are boundary sides of the fiber (the divides are its boundary
    pushed into the positive half); the arc runs inside the fiber from the
    second point to the first.
    """
    first: Half
    second: Half
    route: CombCurve


def canonical_site(diagram: DividedDiagram) -> StabilizationSite:
    if diagram.doubled is None:
        raise InvalidSite("stabilization needs a diagram built as a double")
    F = diagram.doubled.fiber
    if len(F.boundary_sides) < 2:
        raise InvalidSite("the fiber has fewer than two boundary sides")
    u, w = F.boundary_sides[0], F.boundary_sides[1]
    return StabilizationSite(u, w, handle_route(F, u, w))


def _check_site(diagram: DividedDiagram, site: StabilizationSite) -> None:
    if diagram.doubled is None:
        raise InvalidSite("stabilization needs a diagram built as a double")
    F = diagram.doubled.fiber
    for h in (site.first, site.second):
        if h not in F.boundary_sides:
            raise InvalidSite(f"{h} is not a point of the divides")
    if site.first == site.second:
        raise InvalidSite("the two points coincide")
    r = site.route
    if r.kind != ARC or r.surface != F or r.start != site.second or r.path[-1] != site.first:
        raise InvalidSite("the arc does not join the two points inside the positive side")
    if self_intersection(reduce(r)) > 0:
        raise InvalidSite("the arc is not embedded")


class _Reembedding:
    """Carries curves of the old double into the double of the stabilized fiber."""

    def __init__(self, old: DoubledSurface, new: DoubledSurface, site: StabilizationSite):
        self.old, self.new = old, new
        n = old.offset
        band, mirror_band = n, 2 * n + 1
        u, w = site.first, site.second
        self.replace: Dict[Half, List[Half]] = {
            u: [u, (band, 1), (mirror_band, 3)],
            old.lift_half(u, 0): [new.lift_half(u, 0), (mirror_band, 2), (band, 0)],
            w: [w, (band, 3), (mirror_band, 1)],
            old.lift_half(w, 0): [new.lift_half(w, 0), (mirror_band, 0), (band, 2)],
        }

    def half(self, h: Half) -> List[Half]:
        if h in self.replace:
            return self.replace[h]
        p, s = h
        if p < self.old.offset:
            return [h]
        return [(p + 1, s)]

    def curve(self, c: CombCurve) -> CombCurve:
        path = tuple(x for h in c.path for x in self.half(h))
        return reduce(CombCurve(self.new.surface, c.kind, path, c.start))


def stabilize(diagram: DividedDiagram, site: Optional[StabilizationSite] = None) -> DividedDiagram:
    """
    Add a 1-handle to the fiber at the site.

    Every cut system gains the doubled co-core of the new band (appended last);
    one more cut system follows, the last one twisted right about the curve
    running along the site arc and over the band.
    """
    site = site or canonical_site(diagram)
    _check_site(diagram, site)
    old = diagram.doubled
    G, cycle = attach_handle(old.fiber, site.route)
    new = double(G)
    move = _Reembedding(old, new, site)

    band = len(old.fiber.sides)
    cocore = arc(G, (band, 1), [(band, 3)])
    extra = new.double_arc(cocore)
    systems = [cut_system([move.curve(c) for c in s] + [extra]) for s in diagram.cut_systems]
    c = reduce(new.embed1(cycle))
    systems.append(cut_system([dehn_twist(x, c, RIGHT) for x in systems[-1]]))

    witness = None
    if diagram.provenance.witness is not None:
        steps = [
            WitnessStep(
                tuple(move.curve(t) for t in s.twists),
                s.matching + (len(s.matching),),
                None,
                s.by_construction,
            )
            for s in diagram.provenance.witness.steps
        ]
        steps.append(WitnessStep((c,), tuple(range(len(systems[-1])))))
        witness = GsWcWitness(tuple(steps))
    provenance = Provenance(
        diagram.provenance.kind, witness, diagram.provenance.details + (("stabilized", "yes"),)
    )
    result = DividedDiagram(
        new.surface, new.divides, tuple(systems), provenance, frozenset(range(new.offset)), new
    )
    logger.info(f"🔧 stabilized: genus {diagram.genus} -> {result.genus}, {result.n_sectors} sectors")
    return result


# ---- substitution -------------------------------------------------------------

@dataclass(frozen=True)
class Embedding:
    """Images in the diagram surface of the named curves of a relation."""
    images: Tuple[Tuple[str, CombCurve], ...]

    def image(self, c: CombCurve, rel: Relation) -> CombCurve:
        for name, curve in rel.curve_names:
            if curve.same_class(c):
                return dict(self.images)[name]
        raise RangeMismatch("relation curve has no image under the embedding")

    def word(self, word: TwistWord, rel: Relation, surface) -> TwistWord:
        return TwistWord(tuple(Letter(self.image(l.curve, rel), l.handedness) for l in word.letters), surface)


def positive_embedding(diagram: DividedDiagram, rel: Relation) -> Embedding:
    """The relation surface as the fiber of a doubled diagram, placed in the positive half."""
    if diagram.doubled is None or diagram.doubled.fiber != rel.subsurface:
        raise RangeMismatch("the diagram's fiber is not the relation surface")
    return Embedding(tuple((n, reduce(diagram.doubled.embed1(c))) for n, c in rel.curve_names))


def diagram_factorization(diagram: DividedDiagram, budget: int = MSD_BUDGET) -> Union[Factorization, str]:
    """The witness twists when the diagram carries them, else a factorization read off the systems."""
    witness = diagram.provenance.witness
    if witness is not None and not any(s.by_construction for s in witness.steps):
        letters, sectors = [], []
        for s in witness.steps:
            start = len(letters)
            letters.extend(Letter(t, RIGHT) for t in s.twists)
            sectors.append((start, len(letters)))
        word = TwistWord(tuple(letters), diagram.surface)
        return Factorization(diagram.surface, word, tuple(sectors), tuple(True for _ in letters))
    return factorize(diagram, budget)


def _certify_twist(system: CutSystem, letter: Letter, budget: int) -> Optional[SlideCertificate]:
    """
    Certificate that the twist takes the running handlebody to one forming
    #^(g-1) S1 x S2 with it.

    Raises:
        DualityFailure: no certificate and no system curve meets the twist curve once
    """
    g = len(system)
    twisted = [dehn_twist(x, letter.curve, letter.handedness) for x in system]
    certificate = twist_certificate(system, letter.curve, letter.handedness, budget)
    if certificate is None:
        found = recognize_s1s2(system.surface, system, twisted, budget, hints=(letter.curve,))
        if found.certified:
            certificate = certificate_from_form(system, twisted, found.standard_form)
    if certificate is not None:
        form = certificate.check(system, twisted)
        if form is not None and form.k == g - 1:
            return certificate
        raise DualityFailure(f"twist pair is standard with k = {form.k if form else None}, expected {g - 1}")
    if any(meet(x, letter.curve) == 1 for x in system):
        logger.warning("⚠️ twist curve meets the running system once but no certificate was found")
        return None
    raise DualityFailure("twist curve is not dual to a compressing disk of the running handlebody")


def rebuild(diagram: DividedDiagram, factorization: Factorization, budget: int = MSD_BUDGET) -> DividedDiagram:
    """
    Diagram with the same first cut system and one sector per block of the
    factorization. Single-letter sectors carry the certificate found for
    their twist.
    """
    systems = [diagram.cut_systems[0]]
    steps = []
    certificates: List[Optional[SlideCertificate]] = []
    for i in range(len(factorization.sectors)):
        block = factorization.block(i)
        current = systems[-1]
        found = []
        for letter in block.letters:
            found.append(_certify_twist(current, letter, budget))
            current = cut_system([dehn_twist(x, letter.curve, letter.handedness) for x in current])
        systems.append(current)
        certificates.append(found[0] if len(found) == 1 else None)
        steps.append(WitnessStep(tuple(l.curve for l in block.letters), tuple(range(len(current)))))
    witness = None
    if all(l.handedness == RIGHT and diagram.in_positive(l.curve) for l in factorization.letters):
        witness = GsWcWitness(tuple(steps))
    provenance = Provenance(diagram.provenance.kind, witness, diagram.provenance.details + (("substituted", "yes"),))
    return DividedDiagram(
        diagram.surface, diagram.divides, tuple(systems), provenance, diagram.positive_polygons, diagram.doubled,
        tuple(certificates),
    )


def substitute(
    diagram: DividedDiagram,
    at: Tuple[int, int],
    rel: Relation,
    embedding: Optional[Embedding] = None,
    factorization: Optional[Factorization] = None,
    budget: int = MSD_BUDGET,
) -> Tuple[Factorization, DividedDiagram]:
    """
    Replace the letters at[0]..at[1]-1 of the diagram's factorization by the
    other side of a relation; each replaced letter becomes its own sector.

    Raises:
        RelationNotVerified: the relation (or its image) fails acts_identically
        RangeMismatch: the letters in range are not the image of the left side
        DualityFailure: a new twist curve is not dual to the running handlebody
    """
    if not rel.verify():
        raise RelationNotVerified(f"relation '{rel.name}' does not hold on its surface")
    embedding = embedding or positive_embedding(diagram, rel)
    if factorization is None:
        factorization = diagram_factorization(diagram, budget)
        if not isinstance(factorization, Factorization):
            raise RangeMismatch("no factorization of the diagram within budget")

    start, stop = at
    letters = factorization.letters
    lhs = embedding.word(rel.lhs, rel, diagram.surface)
    rhs = embedding.word(rel.rhs, rel, diagram.surface)
    if not 0 <= start <= stop <= len(letters) or stop - start != len(lhs):
        raise RangeMismatch(f"range {at} does not cover {len(lhs)} letters")
    for mine, theirs in zip(letters[start:stop], lhs.letters):
        if mine.handedness != theirs.handedness or not reduce(mine.curve).same_class(reduce(theirs.curve)):
            raise RangeMismatch("letters in range are not the image of the relation's left side")
    if not acts_identically(lhs, rhs, diagram.surface):
        raise RelationNotVerified(f"image of relation '{rel.name}' does not hold on the diagram surface")

    # letters outside the range keep their sectors; each new letter is a sector
    blocks: List[List[Letter]] = []
    placed = False
    for s0, s1 in factorization.sectors:
        if s0 == s1:
            blocks.append([])
            continue
        before = list(letters[s0:min(s1, start)])
        after = list(letters[max(s0, stop):s1])
        if before:
            blocks.append(before)
        if not placed and s0 <= start < s1:
            blocks.extend([l] for l in rhs.letters)
            placed = True
        if after:
            blocks.append(after)
    flat = [l for b in blocks for l in b]
    sectors, pos = [], 0
    for b in blocks:
        sectors.append((pos, pos + len(b)))
        pos += len(b)
    new_factorization = Factorization(
        diagram.surface,
        TwistWord(tuple(flat), diagram.surface),
        tuple(sectors),
        tuple(diagram.in_positive(l.curve) for l in flat),
    )
    rebuilt = rebuild(diagram, new_factorization, budget)
    logger.info(
        f"🔧 substituted '{rel.name}' at {at}: {diagram.n_sectors} -> {rebuilt.n_sectors} sectors"
    )
    return new_factorization, rebuilt


def rational_blowdown_c2(
    diagram: DividedDiagram, at: Tuple[int, int], embedding: Optional[Embedding] = None, budget: int = MSD_BUDGET
) -> DividedDiagram:
    """Lantern substitution: four boundary twists become three interior ones."""
    _, rebuilt = substitute(diagram, at, lantern(), embedding, None, budget)
    return rebuilt
