import json
from pathlib import Path

import pytest

from pgl3q2.cli import (
    Report,
    emit_quotient_graph,
    main,
    run_suite,
)

SCHEMA_PATH = Path(__file__).resolve().parents[1] / "docs" / "report_schema.json"


def test_covolume_suite_passes():
    report = run_suite("covolume")
    assert report.passed
    assert [c.id for c in report.checks] == ["two-orbit", "one-orbit",
                                             "mass-one"]


def test_lattice_counts_known_discrepancy():
    # the norm-6 expectation of 112 is refuted by exact enumeration (280);
    # the suite must report that single failure honestly
    report = run_suite("lattice-counts")
    failing = [c for c in report.checks if not c.passed]
    assert [c.id for c in failing] == ["L-norm-6"]
    assert failing[0].computed == "280"
    assert not report.passed


def test_unknown_suite():
    with pytest.raises(ValueError):
        run_suite("no-such-suite")


def test_reports_are_deterministic():
    a = run_suite("superlattices").to_dict()
    b = run_suite("superlattices").to_dict()
    a.pop("wall_time")
    b.pop("wall_time")
    assert a == b


def test_main_exit_codes(tmp_path, capsys):
    assert main(["covolume"]) == 0
    assert main(["lattice-counts"]) == 1
    capsys.readouterr()
    with pytest.raises(SystemExit):
        main(["no-such-suite"])


def test_json_report_matches_schema(tmp_path):
    jsonschema = pytest.importorskip("jsonschema")
    out = tmp_path / "report.json"
    code = main(["elimination", "--json", "--out", str(out)])
    assert code == 0
    payload = json.loads(out.read_text())
    schema = json.loads(SCHEMA_PATH.read_text())
    jsonschema.validate(payload, schema)
    assert payload["pass"] is True
    assert payload["reports"][0]["suite"] == "elimination"


def test_quotient_graphs(tmp_path):
    dot_gm = emit_quotient_graph("gm", radius=2, fmt="dot")
    assert dot_gm.count("[label=\"orbit") == 1
    assert "o0 -- o0" in dot_gm  # self loops on the single orbit
    dot_gl = emit_quotient_graph("gl", radius=2, fmt="dot")
    assert dot_gl.count("[label=\"orbit") == 2
    graph = json.loads(emit_quotient_graph("gm", radius=2, fmt="json"))
    assert len(graph["vertices"]) == 1
    assert graph["edges"][0][:2] == [0, 0]


def test_quotient_graph_radius_precondition():
    with pytest.raises(ValueError):
        emit_quotient_graph("gm", radius=1)
    with pytest.raises(ValueError):
        emit_quotient_graph("nope", radius=3)
    with pytest.raises(ValueError):
        emit_quotient_graph("gm", radius=3, fmt="svg")


def test_quotient_graph_via_main(tmp_path):
    out = tmp_path / "q.dot"
    assert main(["quotient-gm", "--radius", "2", "--out", str(out)]) == 0
    assert out.read_text().startswith("graph quotient_gm")
    with pytest.raises(SystemExit):
        main(["quotient-gm", "--radius", "1"])


def test_text_report_shape(capsys):
    report = run_suite("covolume")
    text = report.text()
    assert text.splitlines()[0] == "suite covolume"
    assert all(line.startswith("  [PASS]") for line in text.splitlines()[1:-1])
