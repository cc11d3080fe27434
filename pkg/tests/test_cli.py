"""Command-line interface: exit codes, outputs, counterexample bundles."""

import json

import numpy as np
import pytest

from kissgeo import io
from kissgeo.cli import EXIT_INVALID, EXIT_IO, EXIT_OK, main
from kissgeo.pipeline import hex_packing


@pytest.fixture()
def hex3_file(tmp_path):
    path = tmp_path / "hex3.json"
    io.save_json(io.packing_to_doc(hex_packing(3)), path)
    return str(path)


def test_verify_text(hex3_file, capsys):
    assert main(["verify", hex3_file, "--n", "3"]) == EXIT_OK
    out = capsys.readouterr().out
    assert "disks: 37" in out
    assert out.strip().endswith("OK")


def test_verify_json(hex3_file, capsys):
    assert main(["verify", hex3_file, "--n", "3", "--json"]) == EXIT_OK
    doc = json.loads(capsys.readouterr().out)
    assert doc["count"] == 37 and doc["bound_ok"]


def test_verify_missing_file(tmp_path, capsys):
    assert main(["verify", str(tmp_path / "absent.json")]) == EXIT_IO
    assert "error:" in capsys.readouterr().err


def test_verify_invalid_packing(tmp_path, capsys):
    path = tmp_path / "bad.json"
    io.save_json(
        io.packing_to_doc(
            io.doc_to_packing({"disks": [[0.0, 0.0], [0.3, 0.0]], "source": 0})
        ),
        path,
    )
    assert main(["verify", str(path)]) == EXIT_INVALID
    assert "invalid input:" in capsys.readouterr().err


def test_curve_outputs(hex3_file, tmp_path, capsys):
    out = tmp_path / "curve.json"
    svg = tmp_path / "fig.svg"
    code = main(
        ["curve", hex3_file, "--n", "3", "--out", str(out), "--svg", str(svg)]
    )
    assert code == EXIT_OK
    curve = io.doc_to_curve(io.load_json(out))
    assert curve.closed
    assert svg.read_text().startswith("<svg")


def test_curve_stdout_json(hex3_file, capsys):
    assert main(["curve", hex3_file, "--n", "3"]) == EXIT_OK
    doc = json.loads(capsys.readouterr().out)
    assert doc["closed"] and len(doc["arcs"]) > 0


def test_search_writes_best(tmp_path, capsys):
    out = tmp_path / "best.json"
    code = main(
        ["search", "--n", "1", "--budget", "400", "--seed", "2", "--out", str(out)]
    )
    assert code == EXIT_OK
    doc = io.load_json(out)
    p = io.doc_to_packing(doc)
    assert len(p.centers) >= 2
    assert int(doc["metadata"]["best_count"]) == len(p.centers)


def test_mincurve(tmp_path, capsys):
    centers = tmp_path / "centers.json"
    io.save_json({"disks": [[0.0, 0.0]], "format_version": "1"}, centers)
    witness = tmp_path / "w.json"
    code = main(
        ["mincurve", "--centers", str(centers), "--gap", "1.0", "--out", str(witness)]
    )
    assert code == EXIT_OK
    assert "minimal length:" in capsys.readouterr().out
    curve = io.doc_to_curve(io.load_json(witness))
    assert len(curve.arcs) >= 1


def test_mincurve_invalid_gap(tmp_path, capsys):
    centers = tmp_path / "centers.json"
    io.save_json({"disks": [[0.0, 0.0]]}, centers)
    assert main(["mincurve", "--centers", str(centers), "--gap", "3.0"]) == EXIT_INVALID
