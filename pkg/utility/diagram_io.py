"""
File formats: diagram JSON (.msd), PALF JSON (.palf) and relation libraries.

Curves are written as crossing sequences, one record per crossing with the
polygon, the side left through and its ordinal along the curve.
"""

import json
import logging
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence

from config.msd_config import DIAGRAM_FORMAT_VERSION, PALF_FORMAT_VERSION
from utility.curves import CombCurve, arc, closed_curve
from utility.divides import DividedDiagram, GsWcWitness, Provenance, WitnessStep
from utility.doubling import double
from utility.errors import DiagramFormatError, MsdError
from utility.heegaard import CutSystem
from utility.mcg import Letter, Relation, TwistWord
from utility.palf import Palf, make_palf, palf_from_preset
from utility.surface import SurfaceComplex, build_surface, fiber_preset

logger = logging.getLogger(__name__)

DIAGRAM_FORMAT = "msd-diagram"
PALF_FORMAT = "msd-palf"
RELATION_FORMAT = "msd-relations"


# ---- surfaces and curves -------------------------------------------------------

def surface_to_dict(surface: SurfaceComplex) -> Dict:
    out = {
        "name": surface.name,
        "polygons": list(surface.sides),
        "pairs": [[a[0], a[1], b[0], b[1]] for a, b in surface.pairs],
    }
    if surface.labels:
        out["labels"] = {name: [list(h) for h in halves] for name, halves in surface.labels}
    return out


def surface_from_dict(data: Dict) -> SurfaceComplex:
    try:
        return build_surface(data)
    except (KeyError, TypeError) as e:
        raise DiagramFormatError(f"malformed surface: {e}") from e
    except MsdError as e:
        raise DiagramFormatError(f"invalid surface: {e}") from e


def curve_to_dict(c: CombCurve) -> Dict:
    out: Dict[str, Any] = {
        "kind": c.kind,
        "crossings": [{"polygon": p, "side": s, "ordinal": j} for j, (p, s) in enumerate(c.path)],
    }
    if not c.is_closed:
        out["start"] = {"polygon": c.start[0], "side": c.start[1]}
    return out


def curve_from_dict(surface: SurfaceComplex, data: Dict) -> CombCurve:
    try:
        crossings = sorted(data["crossings"], key=lambda x: x["ordinal"])
        if [x["ordinal"] for x in crossings] != list(range(len(crossings))):
            raise DiagramFormatError("crossing ordinals must be 0, 1, ... without gaps")
        path = [(int(x["polygon"]), int(x["side"])) for x in crossings]
        if data.get("kind", "closed") == "closed":
            return closed_curve(surface, path)
        start = data["start"]
        return arc(surface, (int(start["polygon"]), int(start["side"])), path)
    except (KeyError, TypeError) as e:
        raise DiagramFormatError(f"malformed curve: {e}") from e
    except DiagramFormatError:
        raise
    except MsdError as e:
        raise DiagramFormatError(f"curve does not run on the surface: {e}") from e


# ---- provenance ---------------------------------------------------------------

def _step_to_dict(step: WitnessStep) -> Dict:
    out: Dict[str, Any] = {
        "twists": [curve_to_dict(t) for t in step.twists],
        "matching": list(step.matching),
    }
    if step.special is not None:
        out["special"] = {"index": step.special[0], "curve": curve_to_dict(step.special[1])}
    if step.by_construction:
        out["by_construction"] = True
    return out


def _step_from_dict(surface: SurfaceComplex, data: Dict) -> WitnessStep:
    special = None
    if data.get("special") is not None:
        special = (int(data["special"]["index"]), curve_from_dict(surface, data["special"]["curve"]))
    return WitnessStep(
        tuple(curve_from_dict(surface, t) for t in data.get("twists", [])),
        tuple(int(j) for j in data.get("matching", [])),
        special,
        bool(data.get("by_construction", False)),
    )


def provenance_to_dict(provenance: Provenance) -> Dict:
    out: Dict[str, Any] = {
        "kind": provenance.kind,
        "details": [[k, v] for k, v in provenance.details],
        "witness": None,
    }
    if provenance.witness is not None:
        out["witness"] = [_step_to_dict(s) for s in provenance.witness.steps]
    return out


def provenance_from_dict(surface: SurfaceComplex, data: Dict) -> Provenance:
    witness = None
    if data.get("witness") is not None:
        witness = GsWcWitness(tuple(_step_from_dict(surface, s) for s in data["witness"]))
    details = tuple((str(k), str(v)) for k, v in data.get("details", []))
    return Provenance(data.get("kind", "manual"), witness, details)


# ---- diagram files ----------------------------------------------------------------

@dataclass
class DiagramFile:
    diagram: DividedDiagram
    metadata: Dict[str, Any] = field(default_factory=dict)
    version: int = DIAGRAM_FORMAT_VERSION


def diagram_to_dict(diagram: DividedDiagram, metadata: Optional[Dict] = None) -> Dict:
    out: Dict[str, Any] = {
        "format": DIAGRAM_FORMAT,
        "version": DIAGRAM_FORMAT_VERSION,
        "surface": surface_to_dict(diagram.surface),
        "divides": [curve_to_dict(d) for d in diagram.divides],
        "cut_systems": [[curve_to_dict(c) for c in system] for system in diagram.cut_systems],
        "provenance": provenance_to_dict(diagram.provenance),
        "positive_polygons": None,
        "fiber": None,
        "metadata": {"genus": diagram.genus, "sectors": diagram.n_sectors, **(metadata or {})},
    }
    if diagram.positive_polygons is not None:
        out["positive_polygons"] = sorted(diagram.positive_polygons)
    if diagram.doubled is not None:
        out["fiber"] = surface_to_dict(diagram.doubled.fiber)
    return out


def serialize_diagram(diagram: DividedDiagram, metadata: Optional[Dict] = None) -> str:
    return json.dumps(diagram_to_dict(diagram, metadata), indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def diagram_from_dict(data: Dict) -> DiagramFile:
    if not isinstance(data, dict) or data.get("format") != DIAGRAM_FORMAT:
        raise DiagramFormatError(f"not an {DIAGRAM_FORMAT} document")
    version = data.get("version")
    if version != DIAGRAM_FORMAT_VERSION:
        raise DiagramFormatError(f"unsupported diagram format version {version}")
    try:
        surface = surface_from_dict(data["surface"])
        divides = tuple(curve_from_dict(surface, d) for d in data["divides"])
        systems = tuple(
            CutSystem(tuple(curve_from_dict(surface, c) for c in system)) for system in data["cut_systems"]
        )
        provenance = provenance_from_dict(surface, data.get("provenance") or {})
    except KeyError as e:
        raise DiagramFormatError(f"missing field {e}") from e
    if not systems:
        raise DiagramFormatError("a diagram needs at least one cut system")

    positive = data.get("positive_polygons")
    positive = frozenset(int(p) for p in positive) if positive is not None else None

    doubled = None
    if data.get("fiber") is not None:
        try:
            doubled = double(surface_from_dict(data["fiber"]))
        except MsdError as e:
            raise DiagramFormatError(f"fiber cannot be doubled: {e}") from e
        if doubled.surface.sides != surface.sides or doubled.surface.pairs != surface.pairs:
            raise DiagramFormatError("the surface is not the double of the recorded fiber")

    diagram = DividedDiagram(surface, divides, systems, provenance, positive, doubled)
    metadata = dict(data.get("metadata") or {})
    logger.debug(f"✅ parsed genus-{diagram.genus} diagram with {len(systems)} cut systems")
    return DiagramFile(diagram, metadata, version)


def parse_diagram(text: str) -> DiagramFile:
    """
    Raises:
        DiagramFormatError: the text is not a valid diagram document
    """
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise DiagramFormatError(f"invalid JSON: {e}") from e
    return diagram_from_dict(data)


def read_diagram(path: str) -> DiagramFile:
    with open(path, "r", encoding="utf-8") as f:
        return parse_diagram(f.read())


def write_diagram(path: str, diagram: DividedDiagram, metadata: Optional[Dict] = None) -> None:
    with open(path, "w", encoding="utf-8") as f:
        f.write(serialize_diagram(diagram, metadata))
    logger.info(f"✅ wrote diagram to {path}")


# ---- PALF files ----------------------------------------------------------------------

def palf_to_dict(palf: Palf, preset: Optional[str] = None) -> Dict:
    out: Dict[str, Any] = {"format": PALF_FORMAT, "version": PALF_FORMAT_VERSION}
    if preset is not None and palf.names:
        out["fiber"] = preset
        out["cycles"] = list(palf.names)
        return out
    out["fiber"] = surface_to_dict(palf.fiber)
    names = list(palf.names) or [f"c{i}" for i in range(len(palf.cycles))]
    out["cycles"] = [{"name": n, **curve_to_dict(c)} for n, c in zip(names, palf.cycles)]
    if palf.arc_system is not None:
        out["arcs"] = [curve_to_dict(a) for a in palf.arc_system]
    return out


def palf_from_dict(data: Dict) -> Palf:
    """
    A PALF document names a fiber preset with preset cycle names, or gives
    the fiber surface with explicit cycles (and optionally an arc system).
    """
    if not isinstance(data, dict) or data.get("format") != PALF_FORMAT:
        raise DiagramFormatError(f"not an {PALF_FORMAT} document")
    if data.get("version") != PALF_FORMAT_VERSION:
        raise DiagramFormatError(f"unsupported PALF format version {data.get('version')}")
    fiber = data.get("fiber")
    cycles = data.get("cycles", [])
    if isinstance(fiber, str):
        if not all(isinstance(c, str) for c in cycles):
            raise DiagramFormatError("cycles on a fiber preset are given by name")
        try:
            fiber_preset(fiber)
            return palf_from_preset(fiber, cycles)
        except ValueError as e:
            raise DiagramFormatError(str(e)) from e
    if not isinstance(fiber, dict):
        raise DiagramFormatError("fiber must be a preset name or a surface")
    F = surface_from_dict(fiber)
    curves = [curve_from_dict(F, c) for c in cycles]
    names = [str(c.get("name", f"c{i}")) for i, c in enumerate(cycles)]
    arcs = None
    if data.get("arcs") is not None:
        arcs = [curve_from_dict(F, a) for a in data["arcs"]]
    return make_palf(F, curves, arcs, names)


def parse_palf(text: str) -> Palf:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise DiagramFormatError(f"invalid JSON: {e}") from e
    return palf_from_dict(data)


# ---- relation libraries -----------------------------------------------------------------

def _exact(c: CombCurve) -> tuple:
    return c.kind, c.path, c.start


def _word_to_list(word: TwistWord, names: Dict[tuple, str]) -> List[Dict]:
    return [{"curve": names[_exact(l.curve)], "handedness": l.handedness} for l in word.letters]


def relation_to_dict(rel: Relation) -> Dict:
    names = {_exact(c): n for n, c in rel.curve_names}
    return {
        "name": rel.name,
        "surface": surface_to_dict(rel.subsurface),
        "curves": {n: curve_to_dict(c) for n, c in rel.curve_names},
        "lhs": _word_to_list(rel.lhs, names),
        "rhs": _word_to_list(rel.rhs, names),
    }


def relation_from_dict(data: Dict) -> Relation:
    try:
        F = surface_from_dict(data["surface"])
        curves = {n: curve_from_dict(F, c) for n, c in data["curves"].items()}

        def word(letters: Sequence[Dict]) -> TwistWord:
            return TwistWord(tuple(Letter(curves[l["curve"]], l.get("handedness", "right")) for l in letters), F)

        return Relation(data["name"], F, word(data["lhs"]), word(data["rhs"]), tuple(sorted(curves.items())))
    except KeyError as e:
        raise DiagramFormatError(f"relation refers to a missing field or curve {e}") from e


def serialize_relations(relations: Sequence[Relation]) -> str:
    doc = {"format": RELATION_FORMAT, "version": 1, "relations": [relation_to_dict(r) for r in relations]}
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def parse_relations(text: str) -> Dict[str, Relation]:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise DiagramFormatError(f"invalid JSON: {e}") from e
    if not isinstance(data, dict) or data.get("format") != RELATION_FORMAT:
        raise DiagramFormatError(f"not an {RELATION_FORMAT} document")
    relations = [relation_from_dict(r) for r in data.get("relations", [])]
    return {r.name: r for r in relations}
