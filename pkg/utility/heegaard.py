"""
Cut systems, handle slides and standard position of pairs of cut systems.

A pair of cut systems on a genus-g surface is in standard position when k
curves of the first system are parallel to curves of the second and the other
g - k curves pair off with |a_n ∩ b_m| = 1 if n = m and 0 otherwise. Such a
pair is a Heegaard diagram of the connected sum of k copies of S1 x S2.
"""

import heapq
import itertools
import logging
import sys
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterator, List, Optional, Sequence, Tuple, Union

from tqdm import tqdm

from config.msd_config import MSD_BUDGET
from utility.curves import (
    CombCurve, geometric_intersection, is_trivial, loop_from, reduce, self_intersection,
)
from utility.cutting import cut_along
from utility.drawing import Drawing
from utility.errors import BandCrossesSystem, NotEmbeddable
from utility.homology import AbelianGroup, quotient_by_curves
from utility.mcg import RIGHT, dehn_twist
from utility.surface import Half, SurfaceComplex

logger = logging.getLogger(__name__)

CERTIFIED = "Certified"
REFUTED = "RefutedByHomology"
UNKNOWN = "Unknown"


@dataclass(frozen=True)
class CutSystem:
    curves: Tuple[CombCurve, ...]

    def __len__(self) -> int:
        return len(self.curves)

    def __iter__(self) -> Iterator[CombCurve]:
        return iter(self.curves)

    def __getitem__(self, i: int) -> CombCurve:
        return self.curves[i]

    @property
    def surface(self) -> SurfaceComplex:
        return self.curves[0].surface

    def replace(self, i: int, c: CombCurve) -> "CutSystem":
        return CutSystem(self.curves[:i] + (c,) + self.curves[i + 1:])

    def key(self) -> Tuple:
        return tuple(c.key() for c in self.curves)

    def same_as(self, other: "CutSystem") -> bool:
        """Equal as unordered sets of isotopy classes."""
        return sorted(self.key()) == sorted(other.key())


def cut_system(curves: Sequence[CombCurve]) -> CutSystem:
    return CutSystem(tuple(reduce(c) for c in curves))


@lru_cache(maxsize=200000)
def _meet(surface: SurfaceComplex, a: CombCurve, b: CombCurve) -> int:
    return geometric_intersection(a, b)


def meet(a: CombCurve, b: CombCurve) -> int:
    """Cached geometric intersection number."""
    return _meet(a.surface, a, b)


# ---- validity -----------------------------------------------------------------

@dataclass
class CutSystemReport:
    ok: bool
    defects: List[str] = field(default_factory=list)
    crossing_pairs: List[Tuple[int, int]] = field(default_factory=list)
    pieces: List[Tuple[int, int]] = field(default_factory=list)

    def __bool__(self) -> bool:
        return self.ok

    def to_dict(self) -> dict:
        return {
            "ok": self.ok,
            "defects": self.defects,
            "crossing_pairs": [list(p) for p in self.crossing_pairs],
            "pieces": [list(p) for p in self.pieces],
        }


def validate_cut_system(surface: SurfaceComplex, system: Union[CutSystem, Sequence[CombCurve]]) -> CutSystemReport:
    """
    Check that the curves are disjoint and cut the surface into one planar piece.

    Args:
        surface: closed surface of genus g
        system: g closed curves

    Returns:
        CutSystemReport listing crossing pairs and the signatures of the pieces
    """
    curves = [reduce(c) for c in system]
    report = CutSystemReport(ok=True)
    if len(curves) != surface.genus:
        report.defects.append(f"expected {surface.genus} curves, got {len(curves)}")
    for i, c in enumerate(curves):
        if c.surface != surface:
            report.defects.append(f"curve {i} lives on another surface")
        elif is_trivial(c):
            report.defects.append(f"curve {i} is null-homotopic")
        elif self_intersection(c) > 0:
            report.defects.append(f"curve {i} is not simple")
    if report.defects:
        report.ok = False
        return report

    for i, j in itertools.combinations(range(len(curves)), 2):
        if meet(curves[i], curves[j]) > 0:
            report.crossing_pairs.append((i, j))
    if report.crossing_pairs:
        report.defects.append(f"crossing pairs: {report.crossing_pairs}")
        report.ok = False
        return report

    try:
        pieces = cut_along(surface, curves)
    except NotEmbeddable as e:
        report.defects.append(str(e))
        report.ok = False
        return report
    report.pieces = [p.signature for p in pieces]
    if len(pieces) != 1:
        report.defects.append(f"complement has {len(pieces)} components")
    elif pieces[0].surface.genus != 0:
        report.defects.append(f"complement has genus {pieces[0].surface.genus}")
    report.ok = not report.defects
    return report


# ---- handle slides ---------------------------------------------------------------

@dataclass(frozen=True)
class Band:
    """
    A band from the mover to the curve it slides over.

    segment holds the exits of the guide from its crossing with the mover to its
    crossing with the other curve; the visits locate those crossings on the two
    curves. over_forward picks the orientation of the second curve in the sum.
    """
    segment: Tuple[Half, ...]
    mover_visit: int
    over_visit: int
    over_forward: bool = True


def band_sum(mover: CombCurve, over: CombCurve, band: Band) -> CombCurve:
    S = mover.surface
    back = [S.partner(h) for h in reversed(band.segment)]
    word = (
        loop_from(mover, band.mover_visit, True)
        + list(band.segment)
        + loop_from(over, band.over_visit, band.over_forward)
        + back
    )
    return reduce(CombCurve(S, mover.kind, tuple(word)))


def _slide_result(system: CutSystem, mover: int, over: int, band: Band) -> Optional[CombCurve]:
    new = band_sum(system[mover], system[over], band)
    if is_trivial(new) or self_intersection(new) > 0:
        return None
    for i, c in enumerate(system):
        if i == mover:
            continue
        if new.same_class(c) or meet(new, c) > 0:
            return None
    return new


def _spans_half(surface: SurfaceComplex, curves: Sequence[CombCurve]) -> bool:
    group = quotient_by_curves(surface, curves)
    return group.is_free and group.free_rank == surface.genus


def handle_slide(system: CutSystem, mover: int, over: int, band: Band) -> CutSystem:
    """
    Replace curve `mover` by its band sum with curve `over`.

    Raises:
        BandCrossesSystem: the band sum is not a simple curve disjoint from the
            rest of the system
    """
    if mover == over:
        raise ValueError("a curve cannot slide over itself")
    new = _slide_result(system, mover, over, band)
    if new is None:
        raise BandCrossesSystem(f"band from curve {mover} to curve {over} crosses the system")
    result = system.replace(mover, new)
    if not _spans_half(system.surface, list(result)):
        raise BandCrossesSystem(f"sliding curve {mover} over {over} does not give a cut system")
    return result


def bands_along(system: CutSystem, guide: CombCurve) -> Iterator[Tuple[int, int, Band]]:
    """
    Bands running along pieces of the guide between consecutive crossings
    with two different curves of the system, as (mover, over, band).
    """
    drawing = Drawing(list(system) + [guide])
    g = len(system)
    hits = []
    for ci in range(g):
        for x in drawing.crossings(g, ci):
            hits.append((x.first.visit, x.t, ci, x.second.visit))
    hits.sort()
    n = len(guide.path)
    pairs = [(a, b, False) for a, b in zip(hits, hits[1:])]
    if guide.is_closed and len(hits) > 1:
        pairs.append((hits[-1], hits[0], True))
    S = guide.surface
    for a, b, wraps in pairs:
        if a[2] == b[2]:
            continue
        count = (b[0] - a[0]) % n if guide.is_closed else b[0] - a[0]
        if wraps and count == 0:
            count = n
        segment = tuple(guide.path[(a[0] + i) % n] for i in range(count))
        back = tuple(S.partner(h) for h in reversed(segment))
        for forward in (True, False):
            yield a[2], b[2], Band(segment, a[3], b[3], forward)
            yield b[2], a[2], Band(back, b[3], a[3], forward)


# ---- standard position --------------------------------------------------------

@dataclass(frozen=True)
class SlideStep:
    side: int  # 0 slides the first system, 1 the second
    mover: int
    over: int
    band: Band


@dataclass
class StandardForm:
    k: int
    pairing: List[Tuple[int, int, str]]  # (first index, second index, "parallel" | "dual")
    slide_log: List[SlideStep]
    first: CutSystem
    second: CutSystem

    def to_dict(self) -> dict:
        return {
            "k": self.k,
            "pairing": [list(p) for p in self.pairing],
            "slides": [[s.side, s.mover, s.over] for s in self.slide_log],
        }


def standard_position(first: CutSystem, second: CutSystem) -> Optional[Tuple[int, List[Tuple[int, int, str]]]]:
    """(k, pairing) when the pair is already standard, else None."""
    g = len(first)
    if len(second) != g:
        return None
    pairing = []
    used = set()
    for i, a in enumerate(first):
        partners = [j for j, b in enumerate(second) if j not in used and a.same_class(b)]
        if partners:
            used.add(partners[0])
            pairing.append((i, partners[0], "parallel"))
    k = len(pairing)
    parallel = {i for i, _, _ in pairing}
    rest_a = [i for i in range(g) if i not in parallel]
    rest_b = [j for j in range(g) if j not in used]
    for i in rest_a:
        ones = []
        for j in rest_b:
            m = meet(first[i], second[j])
            if m > 1:
                return None
            if m == 1:
                ones.append(j)
        if len(ones) != 1:
            return None
        pairing.append((i, ones[0], "dual"))
    if len({j for _, j, _ in pairing}) != g:
        return None
    return k, sorted(pairing)


def _score(first: CutSystem, second: CutSystem) -> int:
    return sum(meet(a, b) for a in first for b in second)


def _moves(first: CutSystem, second: CutSystem, hints: Sequence[CombCurve]) -> Iterator[Tuple[SlideStep, CutSystem]]:
    for side, (moving, other) in enumerate(((first, second), (second, first))):
        seen = set()
        for guide in list(other) + list(hints):
            for mover, over, band in bands_along(moving, guide):
                new = _slide_result(moving, mover, over, band)
                if new is None or (mover, new.key()) in seen:
                    continue
                seen.add((mover, new.key()))
                result = moving.replace(mover, new)
                if _spans_half(moving.surface, list(result)):
                    yield SlideStep(side, mover, over, band), result


def standardize_pair(
    surface: SurfaceComplex,
    first: CutSystem,
    second: CutSystem,
    budget: int = MSD_BUDGET,
    hints: Sequence[CombCurve] = (),
) -> Union[StandardForm, str]:
    """
    Search handle slides for standard position.

    States are expanded lowest total intersection first, shortest slide log
    second; budget bounds the number of states expanded. Extra guide curves in
    hints (for example a twist curve) widen the choice of bands.

    Returns:
        StandardForm, or UNKNOWN when the budget runs out
    """
    first, second = cut_system(first), cut_system(second)
    hints = [reduce(h) for h in hints if not is_trivial(reduce(h))]
    counter = itertools.count()
    start = (first, second, [])
    heap = [(_score(first, second), 0, next(counter), start)]
    seen = {(first.key(), second.key())}
    expanded = 0
    with tqdm(total=budget, desc="Handle slides", disable=not sys.stderr.isatty(), leave=False) as bar:
        while heap:
            score, depth, _, (a, b, log) = heapq.heappop(heap)
            found = standard_position(a, b)
            if found is not None:
                k, pairing = found
                logger.info(f"✅ standard position with k = {k} after {len(log)} slides")
                return StandardForm(k, pairing, log, a, b)
            if expanded >= budget:
                break
            expanded += 1
            bar.update(1)
            for step, result in _moves(a, b, hints):
                na, nb = (result, b) if step.side == 0 else (a, result)
                state_key = (na.key(), nb.key())
                if state_key in seen:
                    continue
                seen.add(state_key)
                heapq.heappush(heap, (_score(na, nb), depth + 1, next(counter), (na, nb, log + [step])))
    logger.warning(f"⚠️ no standard position after expanding {expanded} states on {surface!r}")
    return UNKNOWN


def replay_slides(first: CutSystem, second: CutSystem, log: Sequence[SlideStep]) -> Tuple[CutSystem, CutSystem]:
    """Apply a slide log to a pair of systems."""
    first, second = cut_system(first), cut_system(second)
    for step in log:
        if step.side == 0:
            first = handle_slide(first, step.mover, step.over, step.band)
        else:
            second = handle_slide(second, step.mover, step.over, step.band)
    return first, second


# ---- certificates ---------------------------------------------------------------

def disjoint_replacement(before: CutSystem, after: CutSystem) -> bool:
    """
    Whether `after` trades at most one curve of `before` for a simple curve
    missing every curve of `before`, and is again a cut system.

    The new curve lies in the planar complement of `before`, so both systems
    bound the same handlebody. Every handle slide is such a trade.
    """
    if len(before) != len(after):
        return False
    changed = [i for i in range(len(before)) if not before[i].same_class(after[i])]
    if not changed:
        return True
    if len(changed) > 1:
        return False
    new = after[changed[0]]
    if is_trivial(new) or self_intersection(new) > 0:
        return False
    if any(meet(new, c) > 0 for c in before):
        return False
    return _spans_half(before.surface, list(after))


@dataclass(frozen=True)
class SlideCertificate:
    """
    The cut systems passed through on each side on the way to standard
    position. Consecutive systems in a chain differ by a disjoint replacement.
    """
    first_chain: Tuple[CutSystem, ...]
    second_chain: Tuple[CutSystem, ...]

    def check(self, first: Sequence[CombCurve], second: Sequence[CombCurve]) -> Optional[StandardForm]:
        """The standard form the chains end in, or None when any step fails."""
        if not self.first_chain or not self.second_chain:
            return None
        if not self.first_chain[0].same_as(cut_system(first)):
            return None
        if not self.second_chain[0].same_as(cut_system(second)):
            return None
        for chain in (self.first_chain, self.second_chain):
            for before, after in zip(chain, chain[1:]):
                if not disjoint_replacement(before, after):
                    return None
        a, b = self.first_chain[-1], self.second_chain[-1]
        found = standard_position(a, b)
        if found is None:
            return None
        k, pairing = found
        return StandardForm(k, pairing, [], a, b)

    def to_dict(self) -> dict:
        return {"first_steps": len(self.first_chain) - 1, "second_steps": len(self.second_chain) - 1}


def certificate_from_form(first: Sequence[CombCurve], second: Sequence[CombCurve], form: StandardForm) -> SlideCertificate:
    """Replay a slide log, keeping every intermediate system."""
    chains = ([cut_system(first)], [cut_system(second)])
    for step in form.slide_log:
        chain = chains[step.side]
        chain.append(handle_slide(chain[-1], step.mover, step.over, step.band))
    return SlideCertificate(tuple(chains[0]), tuple(chains[1]))


def _twist_counts(system: CutSystem, about: CombCurve) -> Tuple[int, ...]:
    return tuple(meet(c, about) for c in system)


def _dual_to(counts: Tuple[int, ...]) -> bool:
    return sorted(counts) == [0] * (len(counts) - 1) + [1]


def twist_certificate(
    system: Sequence[CombCurve],
    about: CombCurve,
    handedness: str = RIGHT,
    budget: int = MSD_BUDGET,
) -> Optional[SlideCertificate]:
    """
    Certificate for the pair (system, system twisted about `about`).

    Only the first system moves, by slides along the twist curve, until the
    curve meets one system curve once and misses the others. The twist fixes
    the curves it misses and sends the remaining one to a dual curve, so the
    final pair is standard with k = g - 1. The second chain is the twist
    applied to every system of the first chain.

    Returns:
        SlideCertificate, or None when the budget runs out
    """
    system = cut_system(system)
    about = reduce(about)
    if is_trivial(about):
        return None
    counter = itertools.count()
    heap = [(sum(_twist_counts(system, about)), 0, next(counter), (system,))]
    seen = {system.key()}
    expanded = 0
    while heap:
        score, depth, _, chain = heapq.heappop(heap)
        current = chain[-1]
        counts = _twist_counts(current, about)
        if _dual_to(counts) or not any(counts):
            twisted = tuple(cut_system([dehn_twist(x, about, handedness) for x in s]) for s in chain)
            if standard_position(current, twisted[-1]) is None:
                logger.warning(f"⚠️ twist curve dual to the slid system but the pair is not standard on {system.surface!r}")
                return None
            logger.info(f"✅ twist pair standard after {depth} slides along the twist curve")
            return SlideCertificate(chain, twisted)
        if expanded >= budget:
            break
        expanded += 1
        for mover, over, band in bands_along(current, about):
            new = _slide_result(current, mover, over, band)
            if new is None:
                continue
            result = current.replace(mover, new)
            if result.key() in seen or not _spans_half(current.surface, list(result)):
                continue
            seen.add(result.key())
            heapq.heappush(heap, (sum(_twist_counts(result, about)), depth + 1, next(counter), chain + (result,)))
    logger.warning(f"⚠️ no slides along the twist curve within {budget} states on {system.surface!r}")
    return None


# ---- recognition ----------------------------------------------------------------

def h1_of_splitting(surface: SurfaceComplex, first: Sequence[CombCurve], second: Sequence[CombCurve]) -> AbelianGroup:
    """H_1 of the 3-manifold presented by the two systems."""
    return quotient_by_curves(surface, list(first) + list(second))


@dataclass
class Recognition:
    status: str
    h1: AbelianGroup
    k: Optional[int] = None
    standard_form: Optional[StandardForm] = None

    @property
    def certified(self) -> bool:
        return self.status == CERTIFIED

    def to_dict(self) -> dict:
        out = {"status": self.status, "h1": self.h1.to_dict(), "k": self.k}
        if self.standard_form is not None:
            out["standard_form"] = self.standard_form.to_dict()
        return out


def recognize_s1s2(
    surface: SurfaceComplex,
    first: Sequence[CombCurve],
    second: Sequence[CombCurve],
    budget: int = MSD_BUDGET,
    hints: Sequence[CombCurve] = (),
) -> Recognition:
    """
    Decide whether two cut systems present a connected sum of S1 x S2's.

    Torsion in H_1 refutes; a standard position certifies; anything else is
    Unknown.
    """
    h1 = h1_of_splitting(surface, first, second)
    if not h1.is_free:
        logger.info(f"❌ splitting has H1 = {h1}")
        return Recognition(REFUTED, h1)
    result = standardize_pair(surface, cut_system(first), cut_system(second), budget, hints)
    if isinstance(result, StandardForm):
        if result.k != h1.free_rank:
            logger.error(f"❌ standard form with k = {result.k} but H1 = {h1}")
            return Recognition(UNKNOWN, h1)
        return Recognition(CERTIFIED, h1, result.k, result)
    return Recognition(UNKNOWN, h1)


def recognize_by_certificate(
    surface: SurfaceComplex,
    first: Sequence[CombCurve],
    second: Sequence[CombCurve],
    certificate: SlideCertificate,
) -> Optional[Recognition]:
    """A Certified recognition when the certificate checks out, else None."""
    form = certificate.check(first, second)
    if form is None:
        logger.warning("⚠️ carried certificate does not check out")
        return None
    h1 = h1_of_splitting(surface, first, second)
    if not h1.is_free or form.k != h1.free_rank:
        logger.error(f"❌ certificate gives k = {form.k} but H1 = {h1}")
        return None
    return Recognition(CERTIFIED, h1, form.k, form)
