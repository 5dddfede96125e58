import json

import pytest
from click.testing import CliRunner

from app import app, cli
from utility.diagram_io import diagram_to_dict, write_diagram
from utility.divides import GENUS1_OVERTWISTED, genus1_chain
from utility.kirby import UNKNOT_FRONT
from utility.mcg import LEFT


@pytest.fixture
def runner():
    return CliRunner()


@pytest.fixture
def client():
    app.config["TESTING"] = True
    with app.test_client() as client:
        yield client


@pytest.fixture
def annulus_palf(tmp_path):
    path = tmp_path / "annulus.palf"
    path.write_text(json.dumps({"format": "msd-palf", "version": 1, "fiber": "annulus", "cycles": ["core", "core"]}))
    return path


def test_enumerate_genus1_json(runner):
    result = runner.invoke(cli, ["enumerate-genus1", "-n", "2", "--report", "json"])
    assert result.exit_code == 0, result.output
    payload = json.loads(result.output)
    assert payload["ok"] is True
    assert payload["classification"]["euler_numbers"] == [-2]


def test_compile_then_verify(runner, annulus_palf, tmp_path):
    out = tmp_path / "tstar.msd"
    result = runner.invoke(cli, ["compile-palf", str(annulus_palf), "-o", str(out)])
    assert result.exit_code == 0, result.output
    assert out.exists()
    result = runner.invoke(cli, ["verify", str(out), "--report", "json"])
    assert result.exit_code == 0, result.output
    assert json.loads(result.output)["ok"] is True


def test_verify_overtwisted_exits_one(runner, tmp_path):
    path = tmp_path / "left.msd"
    write_diagram(str(path), genus1_chain(1, LEFT))
    result = runner.invoke(cli, ["verify", str(path), "--report", "json"])
    assert result.exit_code == 1
    payload = json.loads(result.output)
    assert payload["ok"] is False
    assert payload["pairs"][0]["tightness"] == GENUS1_OVERTWISTED


def test_invariants_and_classify(runner, tmp_path):
    path = tmp_path / "tstar.msd"
    result = runner.invoke(cli, ["enumerate-genus1", "-n", "2", "-o", str(path)])
    assert result.exit_code == 0, result.output
    result = runner.invoke(cli, ["invariants", str(path), "--report", "json"])
    assert result.exit_code == 0, result.output
    payload = json.loads(result.output)
    assert payload["euler_char"] == 2
    assert payload["genus1_form"] == [-2]
    result = runner.invoke(cli, ["classify-genus1", str(path)])
    assert result.exit_code == 0
    assert "[-2]" in result.output


def test_classify_rejects_wrong_divides(runner, tmp_path, lantern_diagram):
    path = tmp_path / "lantern.msd"
    write_diagram(str(path), lantern_diagram)
    result = runner.invoke(cli, ["classify-genus1", str(path), "--report", "json"])
    assert result.exit_code == 1
    assert json.loads(result.output)["status"] == "NotGenus1WithDivides"


def test_kirby_compile(runner, tmp_path):
    front = tmp_path / "unknot.kw"
    front.write_text(UNKNOT_FRONT)
    out = tmp_path / "unknot.msd"
    result = runner.invoke(cli, ["kirby", "compile", str(front), "-o", str(out), "--report", "json"])
    assert result.exit_code == 0, result.output
    payload = json.loads(result.output)
    assert payload["genus"] == 1
    assert payload["tb"] == [-1]
    assert payload["rot"] == [0]
    assert json.loads(out.read_text())["metadata"]["tb"] == [-1]


def test_kirby_syntax_error_exits_two(runner, tmp_path):
    front = tmp_path / "broken.kw"
    front.write_text("version 1\nQ 1\n")
    result = runner.invoke(cli, ["kirby", "compile", str(front), "-o", str(tmp_path / "x.msd"), "--report", "json"])
    assert result.exit_code == 2
    assert json.loads(result.output)["error"] == "FrontSyntaxError"


def test_render_svg(runner, tmp_path):
    path = tmp_path / "chain.msd"
    write_diagram(str(path), genus1_chain(2))
    out = tmp_path / "chain.svg"
    result = runner.invoke(cli, ["render", str(path), "-o", str(out), "--mark-crossings"])
    assert result.exit_code == 0, result.output
    assert "system-3" in out.read_text(encoding="utf-8")


def test_bad_diagram_file_exits_two(runner, tmp_path):
    path = tmp_path / "bad.msd"
    path.write_text("{not json")
    result = runner.invoke(cli, ["verify", str(path), "--report", "json"])
    assert result.exit_code == 2
    payload = json.loads(result.output)
    assert payload["ok"] is False
    assert payload["error"] == "DiagramFormatError"


def test_export_relations(runner, tmp_path):
    out = tmp_path / "relations.json"
    result = runner.invoke(cli, ["export-relations", "-o", str(out)])
    assert result.exit_code == 0, result.output
    assert json.loads(out.read_text())["relations"][0]["name"] == "lantern"


def test_api_enumerate(client):
    response = client.get("/api/enumerate-genus1/2")
    assert response.status_code == 200
    body = response.get_json()
    assert body["status"] == "success"
    assert body["classification"]["euler_numbers"] == [-2]


def test_api_compile_palf(client):
    response = client.post("/api/compile-palf", json={
        "format": "msd-palf", "version": 1, "fiber": "annulus", "cycles": ["core"],
    })
    assert response.status_code == 200
    assert response.get_json()["diagram"]["metadata"]["sectors"] == 1


def test_api_verify(client):
    response = client.post("/api/verify", json={"diagram": diagram_to_dict(genus1_chain(2)), "budget": 10})
    assert response.status_code == 200
    assert response.get_json()["report"]["ok"] is True


def test_api_rejects_bad_documents(client):
    response = client.post("/api/verify", json={"format": "nope"})
    assert response.status_code == 400
    body = response.get_json()
    assert body["status"] == "error"
    assert body["error"] == "DiagramFormatError"
    response = client.get("/api/enumerate-genus1/1")
    assert response.status_code == 400
