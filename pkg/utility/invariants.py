"""
Algebraic invariants of the 4-manifold of a multisection diagram with divides
and of its contact boundary.
"""

import logging
from dataclasses import dataclass
from typing import Dict, List, Optional

from config.msd_config import MSD_BUDGET
from utility.divides import DividedDiagram, Genus1Classification, classify_genus1, recognize_sector
from utility.errors import KiUnknown
from utility.heegaard import h1_of_splitting
from utility.homology import AbelianGroup, quotient_by_curves

logger = logging.getLogger(__name__)


def h1_manifold(diagram: DividedDiagram) -> AbelianGroup:
    """H_1 of the surface modulo every curve of every cut system."""
    curves = [c for system in diagram.cut_systems for c in system]
    return quotient_by_curves(diagram.surface, curves)


def boundary_h1(diagram: DividedDiagram) -> AbelianGroup:
    """H_1 of the boundary 3-manifold, split by the first and last cut systems."""
    systems = diagram.cut_systems
    return h1_of_splitting(diagram.surface, systems[0], systems[-1])


def sector_ranks(diagram: DividedDiagram, budget: int = MSD_BUDGET) -> List[int]:
    """
    k_i for every consecutive pair, from standard-position certificates. A
    carried certificate or the twist recorded for the sector is tried before
    the general search.

    Raises:
        KiUnknown: some pair is not certified within the budget
    """
    ks = []
    witness = diagram.provenance.witness
    for i in range(diagram.n_sectors):
        hints = witness.steps[i].twists if witness is not None and i < len(witness.steps) else ()
        found = recognize_sector(diagram, i, hints, budget)
        if not found.certified:
            raise KiUnknown(f"pair ({i + 1}, {i + 2}) is {found.status} (H1 = {found.h1})")
        ks.append(found.k)
    return ks


def euler_char(diagram: DividedDiagram, budget: int = MSD_BUDGET) -> int:
    """chi = (2 - 2g) + (n + 1)(g - 1) + sum(1 - k_i) over the n sectors."""
    g, n = diagram.genus, diagram.n_sectors
    ks = sector_ranks(diagram, budget)
    return (2 - 2 * g) + (n + 1) * (g - 1) + sum(1 - k for k in ks)


@dataclass
class InvariantBundle:
    h1_manifold: AbelianGroup
    h1_boundary: AbelianGroup
    euler_char: Optional[int]
    genus1_form: Optional[List[int]] = None
    note: str = ""

    def to_dict(self) -> Dict:
        return {
            "h1_manifold": self.h1_manifold.to_dict(),
            "h1_boundary": self.h1_boundary.to_dict(),
            "euler_char": self.euler_char,
            "genus1_form": self.genus1_form,
            "note": self.note,
        }


def invariant_bundle(diagram: DividedDiagram, budget: int = MSD_BUDGET) -> InvariantBundle:
    """All invariants; an uncertified sector leaves euler_char empty with a note."""
    note = ""
    try:
        chi = euler_char(diagram, budget)
    except KiUnknown as e:
        logger.warning(f"⚠️ Euler characteristic withheld: {e}")
        chi, note = None, str(e)
    form = None
    if diagram.genus == 1:
        found = classify_genus1(diagram)
        if isinstance(found, Genus1Classification):
            form = list(found.euler_numbers)
    bundle = InvariantBundle(h1_manifold(diagram), boundary_h1(diagram), chi, form, note)
    logger.info(f"✅ invariants: H1 = {bundle.h1_manifold}, boundary H1 = {bundle.h1_boundary}, chi = {chi}")
    return bundle
