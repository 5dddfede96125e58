import xml.etree.ElementTree as ET

import pytest

from utility.curves import closed_curve, geometric_intersection
from utility.divides import DividedDiagram, genus1_chain
from utility.drawing import Drawing, tighten
from utility.render import drawn_curves, render, write_svg
from utility.surface import torus_surface


def _groups(svg):
    root = ET.fromstring(svg.encode("utf-8"))
    return {el.get("class"): el for el in root.iter() if el.tag.endswith("}g") or el.tag == "g"}


def test_render_is_deterministic():
    D = genus1_chain(2)
    assert render(D) == render(D)
    assert render(D, mark_crossings=True) == render(genus1_chain(2), mark_crossings=True)


def test_one_group_per_system():
    groups = _groups(render(genus1_chain(2)))
    for name in ("surface", "divides", "system-1", "system-2", "system-3"):
        assert name in groups
    assert "system-4" not in groups
    assert "crossings" not in groups
    lines = [el for el in groups["divides"] if el.tag.endswith("line")]
    assert {el.get("data-curve") for el in lines} == {"0", "1"}


def test_crossing_markers():
    groups = _groups(render(genus1_chain(2), mark_crossings=True))
    dots = [el for el in groups["crossings"] if el.get("class") == "crossing"]
    # the first slope meets each copy of the divides
    with_divides = [el for el in dots if el.get("data-first") in ("0", "1") and el.get("data-second") == "2"]
    assert len(with_divides) >= 2
    assert all(el.get("data-first") != el.get("data-second") for el in dots)


def test_surface_without_systems_curves():
    D = DividedDiagram(torus_surface(), (), ())
    groups = _groups(render(D))
    assert "surface" in groups
    assert "divides" not in groups


def test_write_svg(tmp_path):
    path = tmp_path / "chain.svg"
    write_svg(str(path), genus1_chain(1))
    assert path.read_text(encoding="utf-8").lstrip().startswith("<")


def test_drawn_crossings_equal_intersection_numbers():
    D = genus1_chain(2)
    entries = drawn_curves(D)
    drawing = Drawing([c for _, c in entries])
    for a in range(len(entries)):
        for b in range(a + 1, len(entries)):
            assert len(drawing.crossings(a, b)) == geometric_intersection(entries[a][1], entries[b][1])


def test_marked_crossings_match_intersection_numbers():
    D = genus1_chain(2)
    entries = drawn_curves(D)
    groups = _groups(render(D, mark_crossings=True))
    dots = [el for el in groups["crossings"] if el.get("class") == "crossing"]
    for a in range(len(entries)):
        for b in range(a + 1, len(entries)):
            if entries[a][0] == entries[b][0]:
                continue
            drawn = [el for el in dots if el.get("data-first") == str(a) and el.get("data-second") == str(b)]
            assert len(drawn) == geometric_intersection(entries[a][1], entries[b][1])


@pytest.mark.parametrize("a", [(1, 0), (1, 1), (2, 1), (3, 2), (1, -2), (4, 1)])
@pytest.mark.parametrize("b", [(0, 1), (1, 2), (3, 1), (2, -3)])
def test_tightened_torus_slopes_cross_minimally(slope, a, b):
    (p, q), (r, s) = a, b
    drawing = Drawing(tighten([slope(p, q), slope(r, s)]))
    assert len(drawing.crossings(0, 1)) == abs(p * s - q * r)


def test_tighten_removes_detour_bigons(torus, slope):
    detoured = closed_curve(torus, [(0, 2), (0, 0), (0, 1)])
    curves = tighten([detoured, slope(0, 1)])
    assert curves[0].path == ((0, 1),)
    assert len(Drawing(curves).crossings(0, 1)) == 1


def test_tighten_lays_one_class_side_by_side(slope):
    x = slope(2, 1)
    curves = tighten([x, x.inverse(), slope(1, 0)])
    drawing = Drawing(curves)
    assert drawing.crossings(0, 1) == []
    assert len(drawing.crossings(0, 2)) == 1
    assert len(drawing.crossings(1, 2)) == 1
