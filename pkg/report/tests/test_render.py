import json
import shutil
from pathlib import Path

import pytest

from normreport.cli import main
from normreport.render import ReportBundle, render
from normreport.schemas import SchemaError, load_results

FIXTURES = Path(__file__).parent / "fixtures" / "reference"


@pytest.fixture()
def reference(tmp_path):
    dest = tmp_path / "suite"
    shutil.copytree(FIXTURES, dest)
    return dest


def render_reference(reference, tmp_path):
    out = tmp_path / "html"
    bundle = ReportBundle(
        results_path=reference / "results.jsonl",
        report_dir=reference / "report",
        out_dir=out,
    )
    figures = render(bundle)
    return out, figures


def test_renders_reference_run(reference, tmp_path):
    out, figures = render_reference(reference, tmp_path)
    assert len(figures) >= 4
    for fig in figures:
        assert (out / fig["svg"]).exists()
        assert (out / fig["data"]).exists()
    index = (out / "index.html").read_text()
    for fig in figures:
        assert fig["svg"] in index
    assert "verdicts" in index


def test_plotted_case_series_match_input_records(reference, tmp_path):
    out, figures = render_reference(reference, tmp_path)
    data = json.loads((out / "case_ratios.data.json").read_text())
    records = load_results(reference / "results.jsonl")
    want = {}
    for rec in records:
        want.setdefault(rec["case_id"], []).append(
            [rec["function_label"], rec["ratio"]]
        )
    assert data == want  # exact value equality, nothing re-rounded


def test_plotted_study_series_match_inputs(reference, tmp_path):
    out, figures = render_reference(reference, tmp_path)
    for name in ("scaling", "blowup"):
        doc = json.loads((reference / "report" / f"{name}.json").read_text())
        plotted = json.loads((out / f"{name}.data.json").read_text())
        plotted_series = sorted(map(tuple, (tuple(map(tuple, v)) for v in plotted.values())))
        input_series = sorted(
            tuple(map(tuple, rep["series"]))
            for rep in doc["reports"]
            if rep["study_kind"] in (name,)
        )
        assert plotted_series == input_series


def test_idempotent_sidecars(reference, tmp_path):
    out1, _ = render_reference(reference, tmp_path / "a")
    out2, _ = render_reference(reference, tmp_path / "b")
    for sidecar in sorted(out1.glob("*.data.json")):
        assert sidecar.read_bytes() == (out2 / sidecar.name).read_bytes()
    assert (out1 / "index.html").read_bytes() == (out2 / "index.html").read_bytes()


def test_empty_results_still_builds_index(tmp_path):
    src = tmp_path / "suite"
    src.mkdir()
    (src / "results.jsonl").write_text("")
    out = tmp_path / "html"
    bundle = ReportBundle(results_path=src / "results.jsonl", report_dir=None, out_dir=out)
    figures = render(bundle)
    assert figures == []
    assert "no results" in (out / "index.html").read_text()


def test_schema_error_names_file(reference, tmp_path):
    bad = reference / "results.jsonl"
    lines = bad.read_text().splitlines()
    doc = json.loads(lines[0])
    doc["schema_version"] = 99
    lines[0] = json.dumps(doc)
    bad.write_text("\n".join(lines) + "\n")
    with pytest.raises(SchemaError) as err:
        render_reference(reference, tmp_path)
    assert "results.jsonl" in str(err.value)


def test_cli_end_to_end(reference, tmp_path, capsys):
    out = tmp_path / "html"
    code = main(["--input", str(reference), "--out", str(out)])
    assert code == 0
    assert (out / "index.html").exists()
    assert len(list(out.glob("*.svg"))) >= 4


def test_cli_schema_error_exit(reference, tmp_path, capsys):
    (reference / "report" / "scaling.json").write_text("{\"schema_version\": 2}")
    code = main(["--input", str(reference), "--out", str(tmp_path / "html")])
    assert code == 1
    assert "scaling.json" in capsys.readouterr().err


def test_acceptance_criterion_12(reference, tmp_path):
    """Reference render: >= 4 figures, an index, zero schema errors, and the
    plotted series byte-match the input records."""
    out, figures = render_reference(reference, tmp_path)
    ok = len(figures) >= 4 and (out / "index.html").exists()
    # byte-match: re-serialize the input values exactly as the sidecar does
    records = load_results(reference / "results.jsonl")
    want = {}
    for rec in records:
        want.setdefault(rec["case_id"], []).append([rec["function_label"], rec["ratio"]])
    sidecar_bytes = (out / "case_ratios.data.json").read_bytes()
    want_bytes = (json.dumps(want, indent=2, sort_keys=True) + "\n").encode()
    ok = ok and sidecar_bytes == want_bytes
    tag = "PASS" if ok else "FAIL"
    print(f"criterion 12 [{tag}] report renders reference run :: {len(figures)} figures")
    assert ok
