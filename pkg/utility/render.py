"""
SVG pictures of divided diagrams.

Each polygon of the complex is drawn as a disk with its sides as arcs of the
circle; curves are straight chords between the strand positions of a common
Drawing, so two strands cross in the picture exactly when they cross in the
drawing. Curves are tightened first, so two curves cross in the picture as
often as their geometric intersection number.
"""

import logging
import math
from typing import Dict, List, Sequence, Tuple

import drawsvg as draw

from config.msd_config import (
    SVG_DIVIDES_COLOR,
    SVG_DIVIDES_DASH,
    SVG_HEIGHT,
    SVG_MARGIN,
    SVG_PALETTE,
    SVG_SURFACE_STROKE,
    SVG_WIDTH,
)
from utility.curves import CombCurve, is_trivial
from utility.divides import DividedDiagram
from utility.drawing import Chord, Drawing, tighten

logger = logging.getLogger(__name__)


def _edge_names(diagram: DividedDiagram) -> Dict[Tuple[int, int], str]:
    names = {}
    for e, (a, b) in enumerate(diagram.surface.pairs):
        names[a] = names[b] = str(e + 1)
    return names


class DiagramLayout:
    """Polygon disks on a grid filling the canvas."""

    def __init__(self, sides: Sequence[int], width: int = SVG_WIDTH, height: int = SVG_HEIGHT):
        self.sides = list(sides)
        n = len(self.sides)
        self.cols = max(1, math.ceil(math.sqrt(n * width / height)))
        self.rows = max(1, math.ceil(n / self.cols))
        self.cell_w = (width - 2 * SVG_MARGIN) / self.cols
        self.cell_h = (height - 2 * SVG_MARGIN) / self.rows
        self.radius = 0.4 * min(self.cell_w, self.cell_h)

    def center(self, polygon: int) -> Tuple[float, float]:
        r, c = divmod(polygon, self.cols)
        return SVG_MARGIN + (c + 0.5) * self.cell_w, SVG_MARGIN + (r + 0.5) * self.cell_h

    def point(self, polygon: int, t: float, scale: float = 1.0) -> Tuple[float, float]:
        """Point at perimeter parameter t (side s covers [s/k, (s+1)/k]), counterclockwise."""
        cx, cy = self.center(polygon)
        angle = 2 * math.pi * t + math.pi / 2
        return round(cx + scale * self.radius * math.cos(angle), 2), round(cy - scale * self.radius * math.sin(angle), 2)


def _draw_surface(d: draw.Drawing, diagram: DividedDiagram, layout: DiagramLayout) -> None:
    S = diagram.surface
    names = _edge_names(diagram)
    group = draw.Group(class_="surface", fill="none", stroke=SVG_SURFACE_STROKE)
    for p, k in enumerate(S.sides):
        cx, cy = layout.center(p)
        group.append(draw.Circle(round(cx, 2), round(cy, 2), round(layout.radius, 2), stroke_width=1))
        for s in range(k):
            x, y = layout.point(p, s / k, 1.06)
            group.append(draw.Line(*layout.point(p, s / k, 0.94), x, y, stroke_width=1))
            label = names.get((p, s), "∂")
            lx, ly = layout.point(p, (s + 0.5) / k, 1.14)
            group.append(draw.Text(label, 10, lx, ly, fill=SVG_SURFACE_STROKE, stroke="none",
                                   text_anchor="middle", dominant_baseline="middle"))
        group.append(draw.Text(str(p), 12, round(cx, 2), round(cy, 2), fill=SVG_SURFACE_STROKE, stroke="none",
                               text_anchor="middle", dominant_baseline="middle"))
    d.append(group)


def _meeting_point(layout: DiagramLayout, first: Chord, second: Chord) -> Tuple[float, float]:
    (x1, y1), (x2, y2) = (layout.point(first.polygon, float(t)) for t in (first.start_param, first.end_param))
    (x3, y3), (x4, y4) = (layout.point(second.polygon, float(t)) for t in (second.start_param, second.end_param))
    denom = (x2 - x1) * (y4 - y3) - (y2 - y1) * (x4 - x3)
    if denom == 0:
        return x1, y1
    t = ((x3 - x1) * (y4 - y3) - (y3 - y1) * (x4 - x3)) / denom
    return round(x1 + t * (x2 - x1), 2), round(y1 + t * (y2 - y1), 2)


def drawn_curves(diagram: DividedDiagram) -> List[Tuple[int, CombCurve]]:
    """
    (group, curve) in drawing order, tightened to minimal position; group -1
    holds the divides, group i the i-th cut system. Trivial curves are left out.
    """
    groups = [-1] * len(diagram.divides)
    curves = list(diagram.divides)
    for i, system in enumerate(diagram.cut_systems):
        groups += [i] * len(system)
        curves += list(system)
    if not curves:
        return []
    return [(g, c) for g, c in zip(groups, tighten(curves)) if not is_trivial(c)]


def render(diagram: DividedDiagram, mark_crossings: bool = False,
           width: int = SVG_WIDTH, height: int = SVG_HEIGHT) -> str:
    """
    Deterministic SVG of a diagram: the polygons, one color per cut system and
    the divides dashed.

    Args:
        mark_crossings: also draw a dot at every crossing of two curves of
            different groups (divides count as one group)
    """
    layout = DiagramLayout(diagram.surface.sides, width, height)
    d = draw.Drawing(width, height)
    d.append(draw.Rectangle(0, 0, width, height, fill="#ffffff"))
    _draw_surface(d, diagram, layout)

    entries = drawn_curves(diagram)
    if entries:
        drawing = Drawing([c for _, c in entries])
        groups: Dict[int, draw.Group] = {}
        for gi in sorted({g for g, _ in entries}):
            if gi < 0:
                groups[gi] = draw.Group(class_="divides", stroke=SVG_DIVIDES_COLOR, stroke_width=1.5,
                                        stroke_dasharray=SVG_DIVIDES_DASH, fill="none")
            else:
                groups[gi] = draw.Group(class_=f"system-{gi + 1}", stroke=SVG_PALETTE[gi % len(SVG_PALETTE)],
                                        stroke_width=2, fill="none")
        for p in range(len(diagram.surface.sides)):
            for chord in drawing.chords(p):
                gi = entries[chord.curve][0]
                x1, y1 = layout.point(p, float(chord.start_param))
                x2, y2 = layout.point(p, float(chord.end_param))
                groups[gi].append(draw.Line(x1, y1, x2, y2, data_curve=str(chord.curve)))
        for gi in sorted(groups):
            d.append(groups[gi])

        if mark_crossings:
            dots = draw.Group(class_="crossings", fill="#000000", stroke="none")
            for a in range(len(entries)):
                for b in range(a + 1, len(entries)):
                    if entries[a][0] == entries[b][0]:
                        continue
                    for x in drawing.crossings(a, b):
                        cx, cy = _meeting_point(layout, x.first, x.second)
                        dots.append(draw.Circle(cx, cy, 3,
                                                class_="crossing", data_first=str(a), data_second=str(b)))
            d.append(dots)

    svg = d.as_svg()
    logger.debug(f"🔧 rendered {len(entries)} curves on {len(diagram.surface.sides)} polygons")
    return svg


def write_svg(path: str, diagram: DividedDiagram, mark_crossings: bool = False) -> None:
    with open(path, "w", encoding="utf-8") as f:
        f.write(render(diagram, mark_crossings))
    logger.info(f"✅ wrote SVG to {path}")
