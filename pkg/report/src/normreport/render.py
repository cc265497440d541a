"""Figure rendering and the index page.

Each figure gets a sidecar ``<name>.data.json`` holding exactly the plotted
series, so downstream checks can match the rendered data against the input
records value-for-value without parsing SVG.
"""

from __future__ import annotations

import html
import json
from dataclasses import dataclass, field
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

from .schemas import load_results, load_study_file, load_verdicts


@dataclass
class ReportBundle:
    results_path: Path
    report_dir: Path | None
    out_dir: Path
    figures: list = field(default_factory=list)


def _save(fig, out_dir: Path, name: str, data) -> dict:
    svg = out_dir / f"{name}.svg"
    fig.savefig(svg, format="svg", metadata={"Date": None})
    plt.close(fig)
    sidecar = out_dir / f"{name}.data.json"
    with open(sidecar, "w") as fh:
        json.dump(data, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return {"name": name, "svg": svg.name, "data": sidecar.name}


def _figure_case_ratios(records, out_dir) -> dict | None:
    if not records:
        return None
    by_case = {}
    for rec in records:
        by_case.setdefault(rec["case_id"], []).append(
            [rec["function_label"], rec["ratio"]]
        )
    cases = sorted(by_case)
    fig, ax = plt.subplots(figsize=(10, 4.5))
    for i, cid in enumerate(cases):
        ratios = [r for _, r in by_case[cid]]
        ax.plot([i] * len(ratios), ratios, "o", ms=4, alpha=0.6)
        ax.plot([i - 0.25, i + 0.25], [max(ratios)] * 2, "-", lw=1, color="0.3")
        ax.plot([i - 0.25, i + 0.25], [min(ratios)] * 2, "-", lw=1, color="0.3")
    ax.set_xticks(range(len(cases)))
    ax.set_xticklabels(cases, rotation=45, ha="right", fontsize=8)
    ax.set_ylabel("lhs / rhs")
    ax.set_title("inequality ratios per case across the corpus")
    ax.grid(True, axis="y", alpha=0.3)
    fig.tight_layout()
    return _save(fig, out_dir, "case_ratios", {cid: by_case[cid] for cid in cases})


def _figure_scaling(doc, out_dir) -> dict | None:
    reports = doc.get("reports", [])
    reports = [r for r in reports if r.get("study_kind") == "scaling"]
    if not reports:
        return None
    fig, ax = plt.subplots(figsize=(7, 5))
    data = {}
    for rep in reports:
        label = rep["inputs"].get("recipe", {}).get("kind", "norm")
        params = rep["inputs"].get("recipe", {}).get("params", {})
        name = label + "(" + ",".join(f"{k}={v}" for k, v in sorted(params.items())) + ")"
        xs = [s[0] for s in rep["series"]]
        ys = [s[1] for s in rep["series"]]
        ax.loglog(xs, ys, "o-", ms=4, lw=1, label=f"{name} slope {rep['fit']['slope']:.2f}")
        data[name] = rep["series"]
    ax.set_xlabel("dilation factor")
    ax.set_ylabel("norm value")
    ax.set_title("dilation scaling fits")
    ax.legend(fontsize=6, loc="best")
    ax.grid(True, which="both", alpha=0.3)
    fig.tight_layout()
    return _save(fig, out_dir, "scaling", data)


def _figure_blowup(doc, out_dir) -> dict | None:
    reports = doc.get("reports", [])
    reports = [r for r in reports if r.get("study_kind") == "blowup"]
    if not reports:
        return None
    fig, ax = plt.subplots(figsize=(7, 5))
    data = {}
    for rep in reports:
        cid = rep["inputs"].get("case_id", "case")
        xs = [s[0] for s in rep["series"]]
        ys = [s[1] for s in rep["series"]]
        ax.loglog(xs, ys, "o-", label=f"{cid} ({rep['verdict']})")
        data[cid] = rep["series"]
    ax.invert_xaxis()
    ax.set_xlabel("transition width")
    ax.set_ylabel("lhs / rhs")
    ax.set_title("sharpening-family ratio trajectories")
    ax.legend(fontsize=8)
    ax.grid(True, which="both", alpha=0.3)
    fig.tight_layout()
    return _save(fig, out_dir, "blowup", data)


def _figure_equivalence(doc, out_dir) -> dict | None:
    bands = doc.get("bands", [])
    if not bands:
        return None
    fig, ax = plt.subplots(figsize=(8, 4.5))
    data = {}
    for i, band in enumerate(bands):
        key = f"s={band['s']:g} p={band['p']:g}"
        gag = band.get("gagliardo", [])
        ax.plot([i] * len(gag), gag, "o", ms=4, alpha=0.6)
        if gag:
            ax.plot([i - 0.2, i + 0.2], [max(gag)] * 2, "-", lw=1, color="0.3")
            ax.plot([i - 0.2, i + 0.2], [min(gag)] * 2, "-", lw=1, color="0.3")
        data[key] = {
            "functions": band.get("functions", []),
            "gagliardo": gag,
            "directional": band.get("directional", []),
        }
    ax.set_xticks(range(len(bands)))
    ax.set_xticklabels(list(data), rotation=30, ha="right", fontsize=8)
    ax.set_ylabel("difference form / band form")
    ax.set_title("seminorm equivalence bands")
    ax.grid(True, axis="y", alpha=0.3)
    fig.tight_layout()
    return _save(fig, out_dir, "equivalence", data)


def _figure_scans(doc, out_dir) -> dict | None:
    reports = [r for r in doc.get("reports", []) if r.get("study_kind") == "constant_scan"]
    if not reports:
        return None
    fig, ax = plt.subplots(figsize=(9, 4.5))
    data = {}
    for i, rep in enumerate(reports):
        cid = rep["inputs"].get("case_id", f"scan{i}")
        ys = [v for _, v in rep["series"] if v > 0]
        ax.plot([i] * len(ys), ys, "o", ms=3, alpha=0.6)
        data[cid] = rep["series"]
    ax.set_xticks(range(len(reports)))
    ax.set_xticklabels(list(data), rotation=45, ha="right", fontsize=7)
    ax.set_ylabel("ratio")
    ax.set_title("constant scans")
    ax.grid(True, axis="y", alpha=0.3)
    fig.tight_layout()
    return _save(fig, out_dir, "scans", data)


_STUDY_RENDERERS = {
    "scaling": _figure_scaling,
    "blowup": _figure_blowup,
    "equivalence": _figure_equivalence,
    "scans": _figure_scans,
}


def render(bundle: ReportBundle) -> list:
    """Render every figure the inputs support plus index.html; idempotent."""
    out_dir = Path(bundle.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    records = load_results(bundle.results_path)
    figures = []
    fig = _figure_case_ratios(records, out_dir)
    if fig:
        figures.append(fig)
    verdicts = None
    if bundle.report_dir is not None:
        report_dir = Path(bundle.report_dir)
        for name, renderer in _STUDY_RENDERERS.items():
            path = report_dir / f"{name}.json"
            if not path.exists():
                continue
            doc = load_study_file(path)
            fig = renderer(doc, out_dir)
            if fig:
                figures.append(fig)
        verdicts = load_verdicts(report_dir.parent / "verdicts.json")
    _write_index(out_dir, figures, records, verdicts)
    bundle.figures = figures
    return figures


def _write_index(out_dir: Path, figures, records, verdicts) -> None:
    parts = ["<!DOCTYPE html>", "<html><head><meta charset='utf-8'>",
             "<title>norm verification report</title></head><body>",
             "<h1>norm verification report</h1>"]
    if not records:
        parts.append("<p><strong>no results</strong></p>")
    else:
        cases = sorted({r["case_id"] for r in records})
        parts.append(
            f"<p>{len(records)} ratio records across {len(cases)} cases.</p>"
        )
    if verdicts is not None:
        n_fail = verdicts.get("n_fail", 0)
        parts.append(f"<h2>verdicts ({n_fail} failing)</h2><table border='1'>")
        parts.append("<tr><th>check</th><th>verdict</th></tr>")
        for name, check in sorted(verdicts.get("checks", {}).items()):
            v = html.escape(str(check.get("verdict", "?")))
            parts.append(f"<tr><td>{html.escape(name)}</td><td>{v}</td></tr>")
        parts.append("</table>")
    parts.append("<h2>figures</h2>")
    if not figures:
        parts.append("<p>no figures</p>")
    for fig in figures:
        parts.append("<figure>")
        parts.append(f"<img src='{fig['svg']}' alt='{fig['name']}'>")
        parts.append(
            f"<figcaption>{fig['name']} (data: <a href='{fig['data']}'>{fig['data']}</a>)"
            "</figcaption></figure>"
        )
    parts.append("</body></html>")
    (out_dir / "index.html").write_text("\n".join(parts) + "\n")
