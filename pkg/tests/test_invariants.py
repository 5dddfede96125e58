from utility.divides import genus1_chain
from utility.homology import AbelianGroup
from utility.invariants import (
    InvariantBundle,
    boundary_h1,
    euler_char,
    h1_manifold,
    invariant_bundle,
    sector_ranks,
)


def test_tstar_s2_invariants(tstar_s2):
    assert h1_manifold(tstar_s2).is_trivial
    assert boundary_h1(tstar_s2) == AbelianGroup(0, (2,))
    assert sector_ranks(tstar_s2) == [0, 0]
    assert euler_char(tstar_s2) == 2


def test_bundle(tstar_s2):
    bundle = invariant_bundle(tstar_s2)
    assert isinstance(bundle, InvariantBundle)
    assert bundle.euler_char == 2
    assert bundle.genus1_form == [-2]
    assert bundle.note == ""
    out = bundle.to_dict()
    assert out["euler_char"] == 2
    assert out["genus1_form"] == [-2]


def test_longer_chain_euler_characteristic():
    D = genus1_chain(4)
    # one extra 2-handle per extra sector
    assert euler_char(D) == 1 + (D.n_sectors - 1)
    assert invariant_bundle(D).genus1_form == [-2] * (D.n_sectors - 1)
