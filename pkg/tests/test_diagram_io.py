import json

import pytest

from utility.diagram_io import (
    diagram_to_dict,
    palf_to_dict,
    parse_diagram,
    parse_palf,
    parse_relations,
    read_diagram,
    serialize_diagram,
    serialize_relations,
    write_diagram,
)
from utility.divides import GsWcWitness, detect_gswc, genus1_chain
from utility.errors import DiagramFormatError
from utility.mcg import lantern
from utility.palf import palf_from_preset


def _keys(D):
    return [s.key() for s in D.cut_systems]


@pytest.mark.parametrize("name", ["tstar_s2", "lantern_diagram", "unknot_compiled"])
def test_diagram_text_is_a_fixed_point(name, request):
    D = request.getfixturevalue(name)
    D = getattr(D, "diagram", D)
    text = serialize_diagram(D)
    loaded = parse_diagram(text).diagram
    assert serialize_diagram(loaded) == text
    assert _keys(loaded) == _keys(D)
    assert loaded.provenance.kind == D.provenance.kind
    assert (loaded.doubled is None) == (D.doubled is None)


def test_loaded_witness_still_replays(unknot_compiled, tmp_path):
    path = tmp_path / "unknot.msd"
    write_diagram(str(path), unknot_compiled.diagram, {"tb": -1})
    loaded = read_diagram(str(path))
    assert loaded.metadata["tb"] == -1
    assert loaded.metadata["genus"] == 1
    assert isinstance(detect_gswc(loaded.diagram), GsWcWitness)


def test_manual_chain_round_trip():
    D = genus1_chain(3)
    loaded = parse_diagram(serialize_diagram(D)).diagram
    assert _keys(loaded) == _keys(D)
    assert loaded.positive_polygons is None
    assert loaded.doubled is None


@pytest.mark.parametrize("change", [
    lambda doc: doc.update(format="something-else"),
    lambda doc: doc.update(version=99),
    lambda doc: doc.pop("surface"),
    lambda doc: doc.update(cut_systems=[]),
    lambda doc: doc["cut_systems"][0][0]["crossings"][0].update(ordinal=5),
    lambda doc: doc["cut_systems"][0][0]["crossings"][0].update(polygon=9),
])
def test_bad_diagram_documents(change):
    doc = diagram_to_dict(genus1_chain(1))
    change(doc)
    with pytest.raises(DiagramFormatError):
        parse_diagram(json.dumps(doc))


def test_invalid_json():
    with pytest.raises(DiagramFormatError):
        parse_diagram("{not json")
    with pytest.raises(DiagramFormatError):
        parse_palf("[")


def test_palf_preset_document():
    palf = parse_palf(json.dumps({"format": "msd-palf", "version": 1, "fiber": "annulus", "cycles": ["core", "core"]}))
    assert len(palf.cycles) == 2
    assert palf.names == ("core", "core")
    with pytest.raises(DiagramFormatError):
        parse_palf(json.dumps({"format": "msd-palf", "version": 1, "fiber": "annulus", "cycles": ["nope"]}))
    with pytest.raises(DiagramFormatError):
        parse_palf(json.dumps({"format": "msd-palf", "version": 1, "fiber": "klein", "cycles": []}))


def test_palf_explicit_document():
    palf = palf_from_preset("holed-torus", ["a", "b"])
    loaded = parse_palf(json.dumps(palf_to_dict(palf)))
    assert [c.key() for c in loaded.cycles] == [c.key() for c in palf.cycles]
    assert loaded.names == ("a", "b")
    again = parse_palf(json.dumps(palf_to_dict(palf, preset="holed-torus")))
    assert [c.key() for c in again.cycles] == [c.key() for c in palf.cycles]


def test_relation_library_round_trip():
    rel = parse_relations(serialize_relations([lantern()]))["lantern"]
    assert len(rel.lhs.letters) == 4
    assert len(rel.rhs.letters) == 3
    assert rel.verify()


def test_relation_library_rejects_other_documents():
    with pytest.raises(DiagramFormatError):
        parse_relations(json.dumps({"format": "msd-diagram"}))
