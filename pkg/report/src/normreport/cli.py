"""Render a suite output directory into SVG figures plus index.html."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .render import ReportBundle, render
from .schemas import SchemaError


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="normreport",
        description="render results.jsonl and study reports into static figures",
    )
    ap.add_argument(
        "--input",
        required=True,
        help="suite output directory (holds results.jsonl and report/)",
    )
    ap.add_argument("--out", default="report-html", help="output directory")
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    root = Path(args.input)
    results = root / "results.jsonl"
    report_dir = root / "report"
    bundle = ReportBundle(
        results_path=results,
        report_dir=report_dir if report_dir.is_dir() else None,
        out_dir=Path(args.out),
    )
    try:
        figures = render(bundle)
    except SchemaError as exc:
        print(f"schema error: {exc}", file=sys.stderr)
        return 1
    print(f"{len(figures)} figures -> {Path(args.out) / 'index.html'}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
