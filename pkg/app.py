import functools
import json
import logging
import os
import sys
from typing import Callable, Dict, Optional, Tuple

import click
from flask import Flask, jsonify, request
from tqdm import tqdm

from config.msd_config import MSD_BUDGET, MSD_LOG_FILE, MSD_LOG_LEVEL, STATUS_MESSAGES
from utility.diagram_io import (
    diagram_from_dict,
    diagram_to_dict,
    palf_from_dict,
    parse_relations,
    read_diagram,
    serialize_relations,
    write_diagram,
)
from utility.divides import Genus1Classification, classify_genus1, verify_diagram
from utility.errors import MsdError
from utility.invariants import invariant_bundle
from utility.kirby import compile_front, parse_front, rotation_number, thurston_bennequin
from utility.mcg import lantern
from utility.moves import StabilizationSite, canonical_site, stabilize, substitute
from utility.palf import compile_palf, enumerate_genus1, handle_route
from utility.render import write_svg


# ✅ Logging
def setup_logging(level: Optional[str] = None):
    """Root logging to msd.log and the console; returns the application logger."""
    log_format = '%(asctime)s - %(name)s - %(levelname)s - %(message)s'
    level = getattr(logging, (level or MSD_LOG_LEVEL).upper(), logging.WARNING)

    logging.basicConfig(
        level=level,
        format=log_format,
        handlers=[
            logging.FileHandler(MSD_LOG_FILE, encoding='utf-8'),
            logging.StreamHandler()
        ],
        force=True,
    )

    # quiet third-party loggers
    logging.getLogger('werkzeug').setLevel(logging.ERROR)

    logger = logging.getLogger('msd')
    logger.setLevel(level)
    return logger


app_logger = setup_logging()


# ✅ Flask Configuration
app = Flask(__name__)


@app.after_request
def log_response_info(response):
    if response.status_code >= 400:
        app_logger.error(f"❌ {response.status_code} - {request.url}")
    return response


def _request_diagram():
    data = request.get_json(silent=True)
    if data is None:
        raise MsdError("request body must be a JSON diagram document")
    if "diagram" in data:
        return diagram_from_dict(data["diagram"]).diagram, int(data.get("budget", MSD_BUDGET))
    return diagram_from_dict(data).diagram, MSD_BUDGET


def _api(view: Callable) -> Callable:
    @functools.wraps(view)
    def wrapper(*args, **kwargs):
        try:
            return view(*args, **kwargs)
        except (MsdError, ValueError) as e:
            app_logger.error(f"❌ {request.path}: {e}", exc_info=True)
            return jsonify({"status": "error", "error": type(e).__name__, "message": str(e)}), 400
    return wrapper


@app.route("/api/verify", methods=["POST"])
@_api
def api_verify():
    diagram, budget = _request_diagram()
    report = verify_diagram(diagram, budget)
    return jsonify({"status": "success", "report": report.to_dict()})


@app.route("/api/invariants", methods=["POST"])
@_api
def api_invariants():
    diagram, budget = _request_diagram()
    return jsonify({"status": "success", "invariants": invariant_bundle(diagram, budget).to_dict()})


@app.route("/api/compile-palf", methods=["POST"])
@_api
def api_compile_palf():
    data = request.get_json(silent=True)
    if data is None:
        raise MsdError("request body must be a JSON PALF document")
    diagram = compile_palf(palf_from_dict(data))
    return jsonify({"status": "success", "diagram": diagram_to_dict(diagram)})


@app.route("/api/enumerate-genus1/<int:n>")
@_api
def api_enumerate_genus1(n: int):
    diagram = enumerate_genus1(n)
    found = classify_genus1(diagram)
    return jsonify({"status": "success", "diagram": diagram_to_dict(diagram), "classification": found.to_dict()})


# ✅ Command line
def _emit(payload: Dict, report: str) -> None:
    if report == "json":
        click.echo(json.dumps(payload, indent=2, ensure_ascii=False))


def _command(func: Callable) -> Callable:
    """Shared --report/--budget options; library failures exit with status 2."""
    @click.option("--report", type=click.Choice(["text", "json"]), default="text", show_default=True)
    @click.option("--budget", type=int, default=MSD_BUDGET, show_default=True, help="handle-slide budget per pair")
    @functools.wraps(func)
    def wrapper(*args, **kwargs):
        try:
            return func(*args, **kwargs)
        except (MsdError, ValueError, OSError) as e:
            app_logger.error(f"❌ {func.__name__}: {e}", exc_info=True)
            if kwargs.get("report") == "json":
                _emit({"ok": False, "error": type(e).__name__, "message": str(e)}, "json")
            else:
                click.echo(f"❌ {type(e).__name__}: {e}", err=True)
            sys.exit(2)
    return wrapper


def _stem(path: str) -> str:
    return os.path.splitext(os.path.basename(path))[0]


@click.group(name="msd")
@click.option("-v", "--verbose", count=True, help="-v for INFO, -vv for DEBUG")
def cli(verbose: int):
    """Multisection diagrams with divides."""
    if verbose:
        setup_logging("DEBUG" if verbose > 1 else "INFO")


@cli.command("compile-palf")
@click.argument("palf_file", type=click.Path(exists=True, dir_okay=False))
@click.option("-o", "--output", required=True, type=click.Path(dir_okay=False))
@_command
def compile_palf_command(palf_file: str, output: str, report: str, budget: int):
    """Compile a PALF into a multisection diagram with divides."""
    with open(palf_file, "r", encoding="utf-8") as f:
        palf = palf_from_dict(json.load(f))
    diagram = compile_palf(palf)
    write_diagram(output, diagram, {"source": os.path.basename(palf_file)})
    _emit({"ok": True, "genus": diagram.genus, "sectors": diagram.n_sectors, "output": output}, report)
    if report == "text":
        click.echo(f"✅ genus-{diagram.genus} {diagram.n_sectors}-section written to {output}")


@cli.group("kirby")
def kirby_group():
    """Weinstein Kirby diagrams given as Legendrian fronts."""


@kirby_group.command("compile")
@click.argument("front_file", type=click.Path(exists=True, dir_okay=False))
@click.option("-o", "--output", required=True, type=click.Path(dir_okay=False))
@_command
def kirby_compile_command(front_file: str, output: str, report: str, budget: int):
    """Compile a front into a bisection with divides."""
    with open(front_file, "r", encoding="utf-8") as f:
        front = parse_front(f.read(), name=_stem(front_file))
    compiled = compile_front(front)
    knots = len(compiled.legendrian.knots)
    tb = [thurston_bennequin(front, i) for i in range(knots)]
    rot = [rotation_number(front, i) for i in range(knots)]
    diagram = compiled.diagram
    write_diagram(output, diagram, {"source": os.path.basename(front_file), "tb": tb, "rot": rot})
    _emit({"ok": True, "genus": diagram.genus, "tb": tb, "rot": rot, "output": output}, report)
    if report == "text":
        click.echo(f"✅ genus-{diagram.genus} bisection written to {output} (tb = {tb}, rot = {rot})")


@cli.command("verify")
@click.argument("diagram_files", nargs=-1, required=True, type=click.Path(exists=True, dir_okay=False))
@_command
def verify_command(diagram_files: Tuple[str, ...], report: str, budget: int):
    """Verify diagrams; exits 1 when any fails."""
    results = {}
    for path in tqdm(diagram_files, desc="Verifying", disable=len(diagram_files) < 2 or not sys.stderr.isatty()):
        found = verify_diagram(read_diagram(path).diagram, budget)
        results[path] = found
        if report == "text":
            click.echo(f"{'✅' if found.ok else '❌'} {path}")
            for d in found.defects:
                click.echo(f"   defect: {d}")
            for p in found.pairs:
                status = p.recognition.status
                line = f"   C{p.first + 1}-C{p.second + 1}: {STATUS_MESSAGES.get(status, status)}"
                if p.tightness:
                    line += f"; {STATUS_MESSAGES.get(p.tightness, p.tightness)}"
                click.echo(line)
    ok = all(r.ok for r in results.values())
    if len(results) == 1:
        _emit(next(iter(results.values())).to_dict(), report)
    else:
        _emit({"ok": ok, "files": {k: v.to_dict() for k, v in results.items()}}, report)
    if not ok:
        sys.exit(1)


@cli.command("invariants")
@click.argument("diagram_file", type=click.Path(exists=True, dir_okay=False))
@_command
def invariants_command(diagram_file: str, report: str, budget: int):
    """H1 of the 4-manifold and its boundary, Euler characteristic."""
    bundle = invariant_bundle(read_diagram(diagram_file).diagram, budget)
    if report == "json":
        _emit(bundle.to_dict(), report)
        return
    click.echo(f"H1(X)      = {bundle.h1_manifold}")
    click.echo(f"H1(dX)     = {bundle.h1_boundary}")
    click.echo(f"chi(X)     = {bundle.euler_char if bundle.euler_char is not None else 'unknown'}")
    if bundle.genus1_form is not None:
        click.echo(f"plumbing   = {bundle.genus1_form}")
    if bundle.note:
        click.echo(f"⚠️ {bundle.note}")


def _parse_site(diagram, site: str) -> StabilizationSite:
    """'canonical' or 'P:S,Q:T', two boundary sides of the fiber."""
    if site == "canonical":
        return canonical_site(diagram)
    try:
        first, second = (tuple(int(x) for x in part.split(":")) for part in site.split(","))
    except ValueError as e:
        raise click.BadParameter(f"site must be 'canonical' or 'P:S,Q:T', got {site!r}") from e
    if diagram.doubled is None:
        return StabilizationSite(first, second, None)
    return StabilizationSite(first, second, handle_route(diagram.doubled.fiber, first, second))


@cli.command("stabilize")
@click.argument("diagram_file", type=click.Path(exists=True, dir_okay=False))
@click.option("--site", default="canonical", show_default=True, help="'canonical' or 'P:S,Q:T'")
@click.option("-o", "--output", required=True, type=click.Path(dir_okay=False))
@_command
def stabilize_command(diagram_file: str, site: str, output: str, report: str, budget: int):
    """Stabilize along an arc in the positive side between two points of the divides."""
    diagram = read_diagram(diagram_file).diagram
    result = stabilize(diagram, _parse_site(diagram, site))
    write_diagram(output, result, {"source": os.path.basename(diagram_file), "site": site})
    _emit({"ok": True, "genus": result.genus, "sectors": result.n_sectors, "output": output}, report)
    if report == "text":
        click.echo(f"✅ genus-{result.genus} {result.n_sectors}-section written to {output}")


@cli.command("substitute")
@click.argument("diagram_file", type=click.Path(exists=True, dir_okay=False))
@click.option("--relation", "relation_name", default="lantern", show_default=True)
@click.option("--relations", "library", type=click.Path(exists=True, dir_okay=False), help="relation library JSON")
@click.option("--at", "at", type=int, required=True, help="index of the first letter replaced")
@click.option("-o", "--output", required=True, type=click.Path(dir_okay=False))
@_command
def substitute_command(diagram_file: str, relation_name: str, library: Optional[str], at: int, output: str,
                       report: str, budget: int):
    """Substitute a relation into the diagram's monodromy factorization."""
    relations = {"lantern": lantern()}
    if library:
        with open(library, "r", encoding="utf-8") as f:
            relations.update(parse_relations(f.read()))
    if relation_name not in relations:
        raise click.BadParameter(f"unknown relation {relation_name!r}, expected one of {sorted(relations)}")
    rel = relations[relation_name]
    diagram = read_diagram(diagram_file).diagram
    _, result = substitute(diagram, (at, at + len(rel.lhs)), rel, budget=budget)
    write_diagram(output, result, {"source": os.path.basename(diagram_file), "relation": rel.name, "at": at})
    _emit({"ok": True, "sectors": result.n_sectors, "output": output}, report)
    if report == "text":
        click.echo(f"✅ {diagram.n_sectors} -> {result.n_sectors} sectors, written to {output}")


@cli.command("export-relations")
@click.option("-o", "--output", required=True, type=click.Path(dir_okay=False))
@_command
def export_relations_command(output: str, report: str, budget: int):
    """Write the built-in relations as a relation library."""
    with open(output, "w", encoding="utf-8") as f:
        f.write(serialize_relations([lantern()]))
    _emit({"ok": True, "output": output}, report)


@cli.command("classify-genus1")
@click.argument("diagram_file", type=click.Path(exists=True, dir_okay=False))
@_command
def classify_genus1_command(diagram_file: str, report: str, budget: int):
    """Euler numbers of the plumbing a genus-1 diagram describes."""
    found = classify_genus1(read_diagram(diagram_file).diagram)
    if report == "json":
        _emit(found.to_dict(), report)
    elif isinstance(found, Genus1Classification):
        click.echo(f"✅ Euler numbers {list(found.euler_numbers)}, slopes {list(found.slopes)}")
    else:
        click.echo(f"❌ not a genus-1 diagram with divides: {found.diagnosis}")
    if not isinstance(found, Genus1Classification):
        sys.exit(1)


@cli.command("enumerate-genus1")
@click.option("-n", "n", type=int, required=True, help="number of sectors")
@click.option("-o", "--output", type=click.Path(dir_okay=False))
@_command
def enumerate_genus1_command(n: int, output: Optional[str], report: str, budget: int):
    """The genus-1 n-section with divides."""
    diagram = enumerate_genus1(n)
    found = classify_genus1(diagram)
    if output:
        write_diagram(output, diagram, {"construction": f"genus-1 {n}-section"})
    if report == "json":
        _emit({"ok": True, "classification": found.to_dict(), "output": output}, report)
    else:
        click.echo(f"✅ genus-1 {n}-section: Euler numbers {list(found.euler_numbers)}")


@cli.command("render")
@click.argument("diagram_file", type=click.Path(exists=True, dir_okay=False))
@click.option("-o", "--output", required=True, type=click.Path(dir_okay=False))
@click.option("--mark-crossings", is_flag=True, help="dot every crossing between different systems")
@_command
def render_command(diagram_file: str, output: str, mark_crossings: bool, report: str, budget: int):
    """Draw a diagram as SVG."""
    write_svg(output, read_diagram(diagram_file).diagram, mark_crossings)
    _emit({"ok": True, "output": output}, report)


@cli.command("serve")
@click.option("--host", default="0.0.0.0", show_default=True)
@click.option("--port", default=5001, show_default=True)
def serve_command(host: str, port: int):
    """Run the JSON API."""
    app_logger.info(f"🌍 msd API on {host}:{port}")
    app.run(host=host, port=port, debug=False, threaded=True)


if __name__ == "__main__":
    cli()
