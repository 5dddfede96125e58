import pytest

from utility.divides import GsWcWitness, classify_genus1, detect_gswc
from utility.errors import FrontSyntaxError, FrontValidityError
from utility.heegaard import meet, validate_cut_system
from utility.homology import AbelianGroup
from utility.invariants import boundary_h1, h1_manifold
from utility.kirby import (
    TREFOIL_FRONT,
    TSTAR_RP2_FRONT,
    UNKNOT_FRONT,
    add_tunnels,
    bisection_from_front,
    parse_front,
    rotation_number,
    sector_diagram,
    thurston_bennequin,
)


def test_parse_fixture_fronts():
    unknot = parse_front(UNKNOT_FRONT)
    assert unknot.name == "unknot"
    assert unknot.n_cusps == 2 and unknot.n_crossings == 0
    trefoil = parse_front(TREFOIL_FRONT)
    assert trefoil.n_cusps == 4 and trefoil.n_crossings == 3
    rp2 = parse_front(TSTAR_RP2_FRONT)
    assert rp2.n_passages == 2 and rp2.handles[0].name == "h1"


@pytest.mark.parametrize("text,line", [
    ("L 1\nR 1\n", 1),
    ("version 1\nL one\n", 2),
    ("version 1\nQ 1\n", 2),
    ("version 1\nL 1\nhandle h 2\nR 1\n", 3),
    ("version 2\n", 1),
    ("version 1\n\n# comment\nX\n", 4),
])
def test_front_syntax_errors(text, line):
    with pytest.raises(FrontSyntaxError) as info:
        parse_front(text)
    assert info.value.line_no == line


@pytest.mark.parametrize("text", [
    "version 1\nL 1\n",
    "version 1\nL 3\nR 1\n",
    "version 1\nX 1\n",
    "version 1\n",
])
def test_front_validity_errors(text):
    with pytest.raises(FrontValidityError):
        parse_front(text)


def test_disconnected_front_rejected():
    front = parse_front("version 1\nhandle h 0\nL 1\nR 1\n")
    with pytest.raises(FrontValidityError):
        add_tunnels(front)


def test_thurston_bennequin():
    assert thurston_bennequin(parse_front(UNKNOT_FRONT)) == -1
    assert thurston_bennequin(parse_front(TREFOIL_FRONT)) == 1


def test_rotation_number():
    for text in (UNKNOT_FRONT, TREFOIL_FRONT):
        front = parse_front(text)
        assert rotation_number(front) == 0
        assert rotation_number(front, orientation=-1) == 0
    with pytest.raises(ValueError):
        rotation_number(parse_front(UNKNOT_FRONT), orientation=2)


def test_tunnels_and_splitting_arcs(trefoil_compiled, unknot_compiled):
    assert trefoil_compiled.legendrian.n_tunnels == 3
    assert trefoil_compiled.legendrian.n_splits == 2
    assert unknot_compiled.legendrian.n_tunnels == 0
    assert all(r.good for r in trefoil_compiled.legendrian.bounded)


def test_compiled_genus(unknot_compiled, rp2_compiled, trefoil_compiled):
    assert unknot_compiled.diagram.genus == 1
    assert rp2_compiled.diagram.genus == 3
    assert trefoil_compiled.diagram.genus == 6


def test_compiled_systems_are_cut_systems(trefoil_compiled):
    D = trefoil_compiled.diagram
    assert len(D.cut_systems) == 3
    for system in D.cut_systems:
        assert validate_cut_system(D.surface, system).ok
        assert all(D.meets_divides(c) == 2 for c in system)


def test_unknot_is_the_minus_two_disk_bundle(unknot_compiled):
    found = classify_genus1(unknot_compiled.diagram)
    assert list(found.euler_numbers) == [-2]
    assert boundary_h1(unknot_compiled.diagram) == AbelianGroup(0, (2,))
    assert h1_manifold(unknot_compiled.diagram).is_trivial


def test_trefoil_trace_homology(trefoil_compiled):
    D = trefoil_compiled.diagram
    assert h1_manifold(D).is_trivial
    assert boundary_h1(D) == AbelianGroup(1)


def test_tstar_rp2_homology(rp2_compiled):
    assert h1_manifold(rp2_compiled.diagram) == AbelianGroup(0, (2,))


def test_first_sector_certified_by_construction(unknot_compiled):
    witness = detect_gswc(unknot_compiled.diagram)
    assert isinstance(witness, GsWcWitness)
    assert witness.steps[0].by_construction
    assert isinstance(detect_gswc(sector_diagram(unknot_compiled)), GsWcWitness)


def test_bisection_from_front_matches_compilation(unknot_compiled):
    D = bisection_from_front(parse_front(UNKNOT_FRONT))
    assert [s.key() for s in D.cut_systems] == [s.key() for s in unknot_compiled.diagram.cut_systems]


def test_rp2_handle_curve_misses_regions(rp2_compiled):
    assert len(rp2_compiled.region_curves) == 2
    (handle,) = rp2_compiled.handle_curves
    D = rp2_compiled.diagram
    assert all(meet(handle, r) == 0 for r in rp2_compiled.region_curves)
    assert D.meets_divides(handle) == 2
    assert validate_cut_system(D.surface, rp2_compiled.region_curves + [handle]).ok
