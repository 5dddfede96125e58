import pytest

from utility.diagram_io import parse_diagram, serialize_diagram
from utility.divides import genus1_chain, verify_diagram
from utility.errors import InvalidSite, RangeMismatch
from utility.heegaard import CERTIFIED
from utility.homology import AbelianGroup, quotient_by_curves
from utility.invariants import boundary_h1, euler_char, h1_manifold
from utility.mcg import lantern
from utility.moves import (
    StabilizationSite,
    canonical_site,
    diagram_factorization,
    rational_blowdown_c2,
    stabilize,
    substitute,
)
from utility.palf import Factorization


def test_canonical_site_needs_a_double():
    with pytest.raises(InvalidSite):
        canonical_site(genus1_chain(2))


def test_site_points_must_be_on_the_divides(tstar_s2):
    F = tstar_s2.doubled.fiber
    glued = F.pairs[0][0]
    bogus = StabilizationSite(glued, F.boundary_sides[0], canonical_site(tstar_s2).route)
    with pytest.raises(InvalidSite):
        stabilize(tstar_s2, bogus)


def test_stabilize_shape(tstar_s2):
    S = stabilize(tstar_s2)
    assert S.genus == tstar_s2.genus + 1
    assert S.n_sectors == tstar_s2.n_sectors + 1
    assert all(len(system) == S.genus for system in S.cut_systems)
    assert all(S.meets_divides(c) == 2 for system in S.cut_systems for c in system)


@pytest.mark.slow
def test_stabilize_keeps_invariants(tstar_s2):
    S = stabilize(tstar_s2)
    assert verify_diagram(S).ok
    assert h1_manifold(S).is_trivial
    assert boundary_h1(S) == AbelianGroup(0, (2,))
    assert euler_char(S) == euler_char(tstar_s2) == 2


def test_witness_factorization_of_compiled_palf(lantern_diagram):
    fac = diagram_factorization(lantern_diagram)
    assert isinstance(fac, Factorization)
    assert len(fac.letters) == 4
    assert fac.sectors == ((0, 1), (1, 2), (2, 3), (3, 4))


def test_substitute_range_checks(lantern_diagram):
    with pytest.raises(RangeMismatch):
        substitute(lantern_diagram, (1, 5), lantern())
    with pytest.raises(RangeMismatch):
        substitute(lantern_diagram, (0, 3), lantern())


@pytest.mark.slow
def test_lantern_substitution(lantern_diagram):
    rel = lantern()
    fac, D = substitute(lantern_diagram, (0, 4), rel)
    assert D.n_sectors == lantern_diagram.n_sectors - 1
    assert len(fac.letters) == 3
    assert len(D.certificates) == D.n_sectors
    report = verify_diagram(D)
    inner = [p for p in report.pairs if not p.boundary]
    assert [p.recognition.status for p in inner] == [CERTIFIED] * D.n_sectors
    assert all(p.recognition.k == D.genus - 1 for p in inner)
    assert report.ok
    F = lantern_diagram.doubled.fiber
    assert h1_manifold(lantern_diagram) == quotient_by_curves(F, [l.curve for l in rel.lhs.letters])
    assert h1_manifold(D) == quotient_by_curves(F, [l.curve for l in rel.rhs.letters])


@pytest.mark.slow
def test_substituted_sectors_certified_after_reload(lantern_diagram):
    _, D = substitute(lantern_diagram, (0, 4), lantern())
    loaded = parse_diagram(serialize_diagram(D)).diagram
    assert loaded.certificates == ()
    report = verify_diagram(loaded)
    assert all(p.recognition.certified for p in report.pairs if not p.boundary)


@pytest.mark.slow
def test_carried_certificates_check_out(lantern_diagram):
    _, D = substitute(lantern_diagram, (0, 4), lantern())
    for i, certificate in enumerate(D.certificates):
        assert certificate is not None
        form = certificate.check(D.cut_systems[i], D.cut_systems[i + 1])
        assert form is not None and form.k == D.genus - 1
        # a certificate only vouches for its own sector
        if i + 2 < len(D.cut_systems):
            assert certificate.check(D.cut_systems[i + 1], D.cut_systems[i + 2]) is None


@pytest.mark.slow
def test_rational_blowdown_matches_substitute(lantern_diagram):
    D = rational_blowdown_c2(lantern_diagram, (0, 4))
    _, expected = substitute(lantern_diagram, (0, 4), lantern())
    assert [s.key() for s in D.cut_systems] == [s.key() for s in expected.cut_systems]
