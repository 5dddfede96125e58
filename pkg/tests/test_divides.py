import pytest

from utility.divides import (
    BY_CONSTRUCTION,
    GENUS1_OVERTWISTED,
    GENUS1_TIGHT,
    Genus1Classification,
    GsWcWitness,
    NotGenus1WithDivides,
    VerificationReport,
    classify_genus1,
    detect_gswc,
    genus1_chain,
    genus1_diagram,
    validate_divides,
    verify_diagram,
)
from utility.errors import NotSeparating
from utility.heegaard import CERTIFIED
from utility.mcg import LEFT
from utility.palf import compile_palf, enumerate_genus1, palf_from_preset


def test_validate_divides_on_torus(torus, slope):
    plus, minus = validate_divides(torus, [slope(1, 1), slope(1, 1)])
    assert plus.signature == minus.signature == (0, 2)
    with pytest.raises(NotSeparating):
        validate_divides(torus, [slope(1, 0)])


@pytest.mark.parametrize("n", range(2, 7))
def test_enumerate_genus1_is_a_minus_two_chain(n):
    D = enumerate_genus1(n)
    assert D.genus == 1
    assert D.n_sectors == n
    found = classify_genus1(D)
    assert isinstance(found, Genus1Classification)
    assert list(found.euler_numbers) == [-2] * (n - 1)
    assert found.divides_slope == (1, -1)


def test_enumeration_is_unique_under_normalization():
    chain = classify_genus1(genus1_chain(3))
    palf = classify_genus1(enumerate_genus1(3))
    assert chain.slopes == palf.slopes
    assert chain.euler_numbers == palf.euler_numbers


def test_tight_genus1_chain_verifies():
    report = verify_diagram(genus1_chain(2))
    assert report.ok
    inner = [p for p in report.pairs if not p.boundary]
    assert all(p.recognition.status == CERTIFIED for p in inner)
    assert all(p.tightness == GENUS1_TIGHT for p in inner)


def test_left_twists_are_overtwisted():
    report = verify_diagram(genus1_chain(1, LEFT))
    assert not report.ok
    assert report.pairs[0].tightness == GENUS1_OVERTWISTED


def test_wrong_dividing_slope_is_not_classified():
    D = genus1_diagram([(1, 0), (0, 1)], divides_slope=(1, 1))
    found = classify_genus1(D)
    assert isinstance(found, NotGenus1WithDivides)


def test_classify_rejects_higher_genus():
    D = compile_palf(palf_from_preset("pants", ["a"]))
    found = classify_genus1(D)
    assert isinstance(found, NotGenus1WithDivides)
    assert "genus 2" in found.diagnosis


@pytest.mark.slow
def test_compiled_palf_verifies_by_construction():
    D = compile_palf(palf_from_preset("pants", ["a", "b"]))
    witness = detect_gswc(D)
    assert isinstance(witness, GsWcWitness)
    report = verify_diagram(D)
    assert report.ok
    assert all(p.tightness == BY_CONSTRUCTION for p in report.pairs if not p.boundary)


def test_boundary_pair_is_reported_apart(tstar_s2):
    report = verify_diagram(tstar_s2)
    assert report.ok
    assert report.boundary_ok is False
    payload = report.to_dict()
    assert payload["ok"] is True
    assert payload["boundary_ok"] is False


def test_boundary_ok_single_sector():
    report = verify_diagram(genus1_chain(1))
    assert report.ok
    assert report.boundary_ok is True
    assert VerificationReport().boundary_ok is None
