"""Command-line front end: norm evaluation, the default verification suite,
calibration management, and the study commands.

Exit codes: 0 success, 1 suite-check failure, 2 usage or precondition error,
3 missing/stale calibration.  All output files carry schema_version 1 and no
timestamps, so runs with equal seeds are byte-identical.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import math
import sys
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path


from .corpus import (
    GeneratorSpec,
    Grid,
    SampledFunction,
    generate,
    load_corpus,
    lp_norm,
    make_grid,
)
from .errors import ToolkitError
from .inequalities import (
    EvalContext,
    NormSpec,
    band_holder_check,
    blowup_reference_case,
    embedding_chain_check,
    equivalence_check,
    evaluate,
    lifting_check,
    make_case,
    reference_cases,
    two_scale_bound_check,
)
from .norms import (
    NormResult,
    besov_norm,
    besov_sup_mollifier,
    bmo_norm,
    directional_difference_seminorm,
    holder_seminorm,
    sobolev_norm_general,
    sobolev_seminorm,
)
from .pointwise import g_functional, maximal_function, pointwise_bound_check
from .studies import (
    FROZEN_SLACK,
    blowup_probe,
    constant_scan,
    scaling_sweep,
)

SCHEMA_VERSION = 1

# the per-band interpolation grid of criterion checks: alpha1*p1 = alpha2*p2
BAND_HOLDER_GRID = (
    ("3/10", 2, "3/5", 1),
    ("1/2", 2, 1, 1),
    ("3/20", 4, "3/5", 1),
    ("3/10", 4, "3/5", 2),
    ("1/4", 4, 1, 1),
    ("1/2", 4, 1, 2),
)

EQUIVALENCE_GRID = tuple((s, p) for s in (0.3, 0.5, 0.7) for p in (1, 2))
PEETRE_SMOOTHNESS = (-0.5, 0.0, 0.5)
POINTWISE_BOUNDS = (
    ("eq1.1", {"s": 1, "alpha": 0.5, "p": 2}),
    ("eq1.1b", {"s": 1}),
    ("eq1.13", {"alpha1": 0.25, "alpha2": 0.75, "p1": 2, "p": 1}),
    ("eq1.23", {"alpha1": 0.5, "p1": 2}),
)

# (name, recipe, corpus label, dilation factors); band-norm rows ride the
# wavepacket, whose spectrum stays inside the covered annuli at every scale
SCALING_TABLE = (
    ("l2", NormSpec.make("lp", p=2), "gaussian_a", (1, 2, 4)),
    ("l1", NormSpec.make("lp", p=1), "gaussian_a", (1, 2, 4)),
    ("sup", NormSpec.make("lp", p="inf"), "gaussian_a", (1, 2, 4)),
    ("sobolev_0.5_2", NormSpec.make("sobolev", alpha="1/2", p=2), "gaussian_a", (1, 2, 4)),
    ("sobolev_0.7_2", NormSpec.make("sobolev", alpha="7/10", p=2), "gaussian_a", (1, 2, 4)),
    ("holder_0.3", NormSpec.make("sobolev", alpha="3/10", p="inf"), "gaussian_a", (1, 2, 4)),
    ("holder_0.7", NormSpec.make("sobolev", alpha="7/10", p="inf"), "gaussian_a", (1, 2, 4)),
    ("grad_l2", NormSpec.make("sobolev", alpha=1, p=2), "gaussian_a", (1, 2, 4)),
    ("sobolev_1.5_2", NormSpec.make("sobolev", alpha="3/2", p=2), "gaussian_a", (1, 2, 4)),
    # the summed band norm needs the packet fully inside the covered annuli
    # at every scale, which caps this row at one dilation octave
    ("besov_0.5_2_2", NormSpec.make("besov", s="1/2", p=2, q=2), "wavepacket_a", (1, 2)),
    ("besov_m1", NormSpec.make("besov", s=-1, p="inf", q="inf"), "wavepacket_a", (1, 2, 4)),
    ("besov_0", NormSpec.make("besov", s=0, p="inf", q="inf"), "wavepacket_a", (1, 2, 4)),
)

BLOWUP_GRID_N = 2048


def default_blowup_widths(grid: Grid) -> list:
    w = grid.box_length / 16.0
    return [w / 2 ** i for i in range(4)]


# ---------------------------------------------------------------------------
# calibration store


def grid_fingerprint(grid: Grid, specs) -> str:
    doc = {
        "grid": grid.to_json(),
        "functions": [s.to_json() for s in specs],
    }
    blob = json.dumps(doc, sort_keys=True).encode()
    return hashlib.sha256(blob).hexdigest()[:16]


def load_constants(path) -> dict:
    with open(path) as fh:
        doc = json.load(fh)
    if doc.get("schema_version") != SCHEMA_VERSION:
        raise ToolkitError(f"constants file {path} has unsupported schema")
    if "cases" not in doc or "checks" not in doc or "grid_fingerprint" not in doc:
        raise ToolkitError(f"constants file {path} is incomplete")
    return doc


def save_constants(doc: dict, path) -> None:
    with open(path, "w") as fh:
        json.dump(doc, fh, indent=2, sort_keys=True)
        fh.write("\n")


# ---------------------------------------------------------------------------
# the default suite


@dataclass
class SuiteOutcome:
    records: list = field(default_factory=list)
    checks: dict = field(default_factory=dict)
    studies: dict = field(default_factory=dict)
    extra_documents: dict = field(default_factory=dict)
    constants: dict = field(default_factory=dict)

    @property
    def n_fail(self) -> int:
        return sum(1 for c in self.checks.values() if c["verdict"] == "fail")

    @property
    def exit_code(self) -> int:
        return 0 if self.n_fail == 0 else 1


def _interval_ok(value, interval, slack=FROZEN_SLACK):
    lo, hi = interval
    return lo / slack <= value <= hi * slack


def run_default_suite(
    grid: Grid,
    specs,
    constants: dict | None = None,
    calibrate: bool = False,
    seed: int = 0,
) -> SuiteOutcome:
    """The whole catalog on the whole corpus plus every structural check.

    In calibration mode the measured ratio ranges become the new constants;
    otherwise every measured quantity must sit inside its frozen interval
    with 1.25x slack.
    """
    ctx = EvalContext.build(grid)
    funcs = [generate(s, grid) for s in specs]
    by_label = {f.label: f for f in funcs}
    required = {label for _, _, label, _ in SCALING_TABLE}
    required.update(("gaussian_a", "gaussian_b", "bump_a", "wavepacket_a", "step_a"))
    missing = sorted(required - set(by_label))
    if missing:
        raise ToolkitError(
            f"default suite needs the reference corpus labels; missing {missing}"
        )
    out = SuiteOutcome()
    new_consts = {
        "schema_version": SCHEMA_VERSION,
        "grid_fingerprint": grid_fingerprint(grid, specs),
        "cases": {},
        "checks": {},
    }
    frozen_cases = (constants or {}).get("cases", {})
    frozen_checks = (constants or {}).get("checks", {})

    # 1. catalog scans ------------------------------------------------------
    for cid, case in reference_cases().items():
        frozen = frozen_cases.get(cid, {}).get("max_ratio") if not calibrate else None
        rep = constant_scan(case, funcs, ctx, frozen_bound=frozen)
        ratios = [r for _, r in rep.series if r > 0]
        for f in funcs:
            rec = evaluate(case, f, ctx)
            out.records.append(rec)
        out.checks[f"case:{cid}"] = {
            "verdict": rep.verdict,
            "max_ratio": max(ratios) if ratios else 0.0,
            "min_ratio": min(ratios) if ratios else 0.0,
            "spread": rep.fit["spread"] if rep.fit else None,
        }
        new_consts["cases"][cid] = {
            "min_ratio": min(ratios) if ratios else 0.0,
            "max_ratio": max(ratios) if ratios else 0.0,
            "grid_fingerprint": new_consts["grid_fingerprint"],
        }
        out.studies.setdefault("scans", []).append(rep)

    # 2. exact band interpolation ------------------------------------------
    worst = -math.inf
    for a1, p1, a2, p2 in BAND_HOLDER_GRID:
        for f in funcs:
            rep = band_holder_check(f, a1, p1, a2, p2, ctx.bank)
            worst = max(worst, rep.max_violation)
    out.checks["band_holder"] = {
        "verdict": "pass" if worst <= 1e-12 else "fail",
        "max_violation": worst,
        "grid_size": len(BAND_HOLDER_GRID),
    }

    # 3. equivalence bands ---------------------------------------------------
    eq_verdict = "pass"
    eq_bands = []
    for s, p in EQUIVALENCE_GRID:
        key = f"equivalence:{s:g}:{p:g}"
        gag, dirc = [], []
        labels = []
        for f in funcs:
            rep = equivalence_check(f, s, p, ctx)
            if rep.degenerate:
                continue
            labels.append(f.label)
            gag.append(rep.gagliardo_over_band)
            dirc.append(rep.directional_over_band)
        interval = [min(gag), max(gag)]
        d_interval = [min(dirc), max(dirc)]
        eq_bands.append(
            {"s": s, "p": p, "functions": labels, "gagliardo": gag, "directional": dirc}
        )
        new_consts["checks"][key] = {"gagliardo": interval, "directional": d_interval}
        ok = interval[1] / interval[0] <= 10.0
        if not calibrate and key in frozen_checks:
            ok = ok and all(
                _interval_ok(v, frozen_checks[key]["gagliardo"]) for v in gag
            )
            ok = ok and all(
                _interval_ok(v, frozen_checks[key]["directional"]) for v in dirc
            )
        if not ok:
            eq_verdict = "fail"
        out.checks[key] = {
            "verdict": "pass" if ok else "fail",
            "gagliardo": interval,
            "directional": d_interval,
        }
    out.checks["equivalence"] = {"verdict": eq_verdict}
    out.extra_documents["equivalence"] = {
        "schema_version": SCHEMA_VERSION,
        "bands": eq_bands,
    }

    # 4. sup-characterization agreement --------------------------------------
    pe_verdict = "pass"
    for s in PEETRE_SMOOTHNESS:
        key = f"peetre:{s:g}"
        ratios = []
        for f in funcs:
            den = besov_norm(f, s, math.inf, math.inf, ctx.bank).value
            if den == 0.0:
                continue
            num = besov_sup_mollifier(f, s, ctx.family).value
            ratios.append(num / den)
        interval = [min(ratios), max(ratios)]
        ok = interval[1] / interval[0] <= 100.0
        if not calibrate and key in frozen_checks:
            ok = ok and all(_interval_ok(v, frozen_checks[key]) for v in ratios)
        new_consts["checks"][key] = interval
        if not ok:
            pe_verdict = "fail"
        out.checks[key] = {"verdict": "pass" if ok else "fail", "interval": interval}
    out.checks["peetre"] = {"verdict": pe_verdict}

    # 5. band lifting ---------------------------------------------------------
    lift_max = 0.0
    for f in funcs:
        try:
            rep = lifting_check(f, 1.0, 1, ctx)
        except ToolkitError:
            continue
        if not rep.degenerate:
            lift_max = max(lift_max, rep.max_ratio)
    ok = True
    if not calibrate and "lifting_max" in frozen_checks:
        ok = lift_max <= frozen_checks["lifting_max"] * FROZEN_SLACK
    new_consts["checks"]["lifting_max"] = lift_max
    out.checks["lifting"] = {"verdict": "pass" if ok else "fail", "max_ratio": lift_max}

    # 6. two-scale bound ------------------------------------------------------
    ts_max = 0.0
    for f in funcs:
        rep = two_scale_bound_check(f, 0.3, 0.8, 0.5, ctx)
        ts_max = max(ts_max, rep.max_ratio)
    ok = True
    if not calibrate and "two_scale_max" in frozen_checks:
        ok = ts_max <= frozen_checks["two_scale_max"] * FROZEN_SLACK
    new_consts["checks"]["two_scale_max"] = ts_max
    out.checks["two_scale"] = {"verdict": "pass" if ok else "fail", "max_ratio": ts_max}

    # 7. embedding chain ------------------------------------------------------
    r1_max, r2_max = 0.0, 0.0
    for f in funcs:
        rep = embedding_chain_check(f, ctx)
        if rep.degenerate:
            continue
        r1_max = max(r1_max, rep.band0_over_bmo)
        r2_max = max(r2_max, rep.bmo_over_sup)
    ok = r2_max <= 2.0
    if not calibrate and "embedding_b0_bmo_max" in frozen_checks:
        ok = ok and r1_max <= frozen_checks["embedding_b0_bmo_max"] * FROZEN_SLACK
        ok = ok and r2_max <= frozen_checks["embedding_bmo_sup_max"] * FROZEN_SLACK
    new_consts["checks"]["embedding_b0_bmo_max"] = r1_max
    new_consts["checks"]["embedding_bmo_sup_max"] = r2_max
    out.checks["embedding"] = {
        "verdict": "pass" if ok else "fail",
        "band0_over_bmo_max": r1_max,
        "bmo_over_sup_max": r2_max,
    }

    # 8. maximal / difference-functional operator bounds ----------------------
    cm = 0.0
    cg = 0.0
    for f in funcs:
        m = maximal_function(f)
        mf = SampledFunction(grid=grid, values=m.values, label=f"M({f.label})")
        cm = max(cm, lp_norm(mf, 2) / lp_norm(f, 2))
        gfield = g_functional(f, 0.5, 2)
        gf = SampledFunction(grid=grid, values=gfield.values, label=f"G({f.label})")
        denom = sobolev_seminorm(f, 0.5, 2).value
        if denom > 0:
            cg = max(cg, lp_norm(gf, 2) / denom)
    ok = cm <= 10.0 and cg <= 10.0
    if not calibrate:
        if "maximal_l2_max" in frozen_checks:
            ok = ok and cm <= frozen_checks["maximal_l2_max"] * FROZEN_SLACK
        if "g_l2_max" in frozen_checks:
            ok = ok and cg <= frozen_checks["g_l2_max"] * FROZEN_SLACK
    new_consts["checks"]["maximal_l2_max"] = cm
    new_consts["checks"]["g_l2_max"] = cg
    out.checks["operator_bounds"] = {
        "verdict": "pass" if ok else "fail",
        "maximal_l2": cm,
        "g_l2": cg,
    }

    # 9. pointwise bounds ------------------------------------------------------
    pw_functions = ("gaussian_a", "gaussian_b", "bump_a", "wavepacket_a")
    pw_verdict = "pass"
    for bound_id, params in POINTWISE_BOUNDS:
        key = f"pointwise:{bound_id}"
        worst_c = 0.0
        for label in pw_functions:
            rep = pointwise_bound_check(by_label[label], bound_id, params, ctx)
            worst_c = max(worst_c, rep.empirical_c)
        ok = math.isfinite(worst_c) and worst_c > 0.0
        if not calibrate and key in frozen_checks:
            ok = ok and worst_c <= frozen_checks[key] * FROZEN_SLACK
        new_consts["checks"][key] = worst_c
        if not ok:
            pw_verdict = "fail"
        out.checks[key] = {"verdict": "pass" if ok else "fail", "max_empirical_c": worst_c}
    out.checks["pointwise"] = {"verdict": pw_verdict}

    # 10. scaling sweeps --------------------------------------------------------
    sc_verdict = "pass"
    scaling_reports = []
    for name, recipe, label, lams in SCALING_TABLE:
        rep = scaling_sweep(by_label[label], recipe, lams, ctx)
        scaling_reports.append(rep)
        if rep.verdict != "pass":
            sc_verdict = "fail"
        out.checks[f"scaling:{name}"] = {
            "verdict": rep.verdict,
            "slope": rep.fit["slope"],
            "expected": rep.thresholds["expected_slope"],
        }
    out.checks["scaling"] = {"verdict": sc_verdict}
    out.studies["scaling"] = scaling_reports

    # 11. blow-up probe ----------------------------------------------------------
    # probes keep the spec-default growth threshold in their own verdicts;
    # the suite-level verdict is the calibrated regression comparison
    fine_grid = make_grid(1, BLOWUP_GRID_N, grid.box_length)
    fine_ctx = EvalContext.build(fine_grid)
    widths = default_blowup_widths(fine_grid)
    forbidden = blowup_probe(blowup_reference_case(), fine_ctx, widths)
    control = blowup_probe(
        reference_cases()["thm1_3"], fine_ctx, widths, require_forbidden=False
    )
    growth = forbidden.fit["total_growth"]
    ctrl_growth = control.fit["total_growth"]
    ok = forbidden.fit["monotone"] and growth > ctrl_growth
    if not calibrate and "blowup_growth" in frozen_checks:
        ok = ok and growth >= frozen_checks["blowup_growth"] / FROZEN_SLACK
        ok = ok and ctrl_growth <= frozen_checks["blowup_control_growth"] * FROZEN_SLACK
    new_consts["checks"]["blowup_growth"] = growth
    new_consts["checks"]["blowup_control_growth"] = ctrl_growth
    out.checks["blowup"] = {
        "verdict": "pass" if ok else "fail",
        "growth": growth,
        "control_growth": ctrl_growth,
        "monotone": forbidden.fit["monotone"],
    }
    out.studies["blowup"] = [forbidden, control]

    # 12. oscillation of the sharp step -----------------------------------------
    step = by_label["step_a"]
    ok = bmo_norm(step).value > 0.5 * lp_norm(step, math.inf)
    out.checks["bmo_step"] = {"verdict": "pass" if ok else "fail"}

    out.constants = new_consts
    return out


# ---------------------------------------------------------------------------
# output files


def write_outputs(outcome: SuiteOutcome, out_dir, seed: int = 0) -> None:
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    with open(out_dir / "results.jsonl", "w") as fh:
        for rec in outcome.records:
            fh.write(json.dumps(rec.to_json(), sort_keys=True) + "\n")
    verdicts = {
        "schema_version": SCHEMA_VERSION,
        "seed": seed,
        "checks": outcome.checks,
        "n_fail": outcome.n_fail,
    }
    with open(out_dir / "verdicts.json", "w") as fh:
        json.dump(verdicts, fh, indent=2, sort_keys=True)
        fh.write("\n")
    report_dir = out_dir / "report"
    report_dir.mkdir(exist_ok=True)
    for name, reports in outcome.studies.items():
        doc = {
            "schema_version": SCHEMA_VERSION,
            "reports": [r.to_json() for r in reports],
        }
        with open(report_dir / f"{name}.json", "w") as fh:
            json.dump(doc, fh, indent=2, sort_keys=True)
            fh.write("\n")
    for name, doc in outcome.extra_documents.items():
        with open(report_dir / f"{name}.json", "w") as fh:
            json.dump(doc, fh, indent=2, sort_keys=True)
            fh.write("\n")


# ---------------------------------------------------------------------------
# command implementations


def _packaged(name: str):
    return resources.files("sobesov").joinpath(f"data/{name}")


def _load_corpus_arg(path: str | None):
    if path is None:
        with resources.as_file(_packaged("corpus.json")) as p:
            return load_corpus(p)
    return load_corpus(path)


def _corpus_specs(path: str | None):
    if path is None:
        with resources.as_file(_packaged("corpus.json")) as p:
            doc = json.loads(Path(p).read_text())
    else:
        doc = json.loads(Path(path).read_text())
    grid = Grid.from_json(doc["grid"])
    return grid, [GeneratorSpec.from_json(o) for o in doc["functions"]]


def cmd_compute_norm(args) -> int:
    grid, funcs = _load_corpus_arg(args.corpus)
    by_label = {f.label: f for f in funcs}
    if args.function not in by_label:
        print(f"unknown function label {args.function!r}", file=sys.stderr)
        return 2
    f = by_label[args.function]
    kind = args.kind
    try:
        if kind == "lp":
            _need_flags(args, "p")
            res = NormResult(value=lp_norm(f, _pval(args.p)), kind="lp", params={"p": _pval(args.p)})
        elif kind == "sobolev":
            _need_flags(args, "alpha", "p")
            res = sobolev_norm_general(f, args.alpha, _pval(args.p))
        elif kind == "holder":
            _need_flags(args, "alpha")
            res = holder_seminorm(f, args.alpha)
        elif kind == "besov":
            _need_flags(args, "s", "p", "q")
            ctx = EvalContext.build(grid)
            res = besov_norm(f, args.s, _pval(args.p), _pval(args.q), ctx.bank)
        elif kind == "besov-sup":
            _need_flags(args, "s")
            ctx = EvalContext.build(grid)
            res = besov_sup_mollifier(f, args.s, ctx.family)
        elif kind == "bmo":
            res = bmo_norm(f)
        elif kind == "directional":
            _need_flags(args, "s", "p")
            res = directional_difference_seminorm(f, args.s, _pval(args.p))
        else:
            print(f"unknown norm kind {kind!r}", file=sys.stderr)
            return 2
    except (ToolkitError, ValueError) as exc:
        print(str(exc), file=sys.stderr)
        return 2
    print(json.dumps(res.to_json(), sort_keys=True))
    return 0


def _need_flags(args, *names):
    for n in names:
        if getattr(args, n, None) is None:
            raise ToolkitError(f"--{n} is required for this norm kind")


def _pval(text):
    if isinstance(text, (int, float)):
        return float(text)
    if str(text).lower() in ("inf", "infinity"):
        return math.inf
    return float(text)


def cmd_verify(args) -> int:
    grid, specs = _corpus_specs(args.corpus)
    constants = None
    if not args.calibrate:
        path = args.constants
        if path is None:
            with resources.as_file(_packaged("constants.json")) as p:
                path = Path(p)
                try:
                    constants = load_constants(path)
                except (OSError, json.JSONDecodeError, ToolkitError) as exc:
                    print(f"calibration unavailable: {exc}; run verify --calibrate", file=sys.stderr)
                    return 3
        else:
            try:
                constants = load_constants(path)
            except (OSError, json.JSONDecodeError, ToolkitError) as exc:
                print(f"calibration unavailable: {exc}; run verify --calibrate", file=sys.stderr)
                return 3
        if constants["grid_fingerprint"] != grid_fingerprint(grid, specs):
            print(
                "calibration fingerprint does not match this corpus; run verify --calibrate",
                file=sys.stderr,
            )
            return 3
    try:
        outcome = run_default_suite(
            grid, specs, constants=constants, calibrate=args.calibrate, seed=args.seed
        )
    except ToolkitError as exc:
        print(str(exc), file=sys.stderr)
        return 2
    write_outputs(outcome, args.out, seed=args.seed)
    if args.calibrate:
        save_constants(outcome.constants, Path(args.out) / "constants.json")
        print(f"calibration written to {Path(args.out) / 'constants.json'}")
        return 0
    for name, check in sorted(outcome.checks.items()):
        print(f"{check['verdict']:12s} {name}")
    print(f"{outcome.n_fail} failing checks")
    return outcome.exit_code


def _parse_sets(pairs):
    out = {}
    for item in pairs or ():
        if "=" not in item:
            raise ToolkitError(f"--set expects name=value, got {item!r}")
        k, v = item.split("=", 1)
        out[k.strip()] = v.strip()
    return out


def _case_from_args(args):
    overrides = _parse_sets(args.set)
    if overrides:
        return make_case(args.case, overrides)
    if args.case == "blowup-reference":
        return blowup_reference_case()
    cases = reference_cases()
    if args.case not in cases:
        raise ToolkitError(f"unknown case id {args.case!r}")
    return cases[args.case]


def _write_report(report, out_dir, stem) -> Path:
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    path = out_dir / f"{stem}.json"
    with open(path, "w") as fh:
        json.dump(report.to_json(), fh, indent=2, sort_keys=True)
        fh.write("\n")
    return path


def cmd_scan(args) -> int:
    try:
        grid, funcs = _load_corpus_arg(args.corpus)
        case = _case_from_args(args)
        ctx = EvalContext.build(grid)
        rep = constant_scan(case, funcs, ctx)
    except (ToolkitError, ValueError) as exc:
        print(str(exc), file=sys.stderr)
        return 2
    path = _write_report(rep, args.out, f"scan_{args.case}")
    print(f"{rep.verdict}: {path}")
    return 0


def cmd_scaling(args) -> int:
    try:
        grid, funcs = _load_corpus_arg(args.corpus)
        by_label = {f.label: f for f in funcs}
        if args.function not in by_label:
            raise ToolkitError(f"unknown function label {args.function!r}")
        if args.kind == "lp":
            _need_flags(args, "p")
            recipe = NormSpec.make("lp", p=_pval(args.p))
        elif args.kind == "sobolev":
            _need_flags(args, "alpha", "p")
            recipe = NormSpec.make("sobolev", alpha=str(args.alpha), p=_pval(args.p))
        elif args.kind == "holder":
            _need_flags(args, "alpha")
            recipe = NormSpec.make("sobolev", alpha=str(args.alpha), p="inf")
        elif args.kind == "besov":
            _need_flags(args, "s", "p", "q")
            recipe = NormSpec.make("besov", s=str(args.s), p=_pval(args.p), q=_pval(args.q))
        else:
            raise ToolkitError(f"unknown norm kind {args.kind!r}")
        lams = [float(x) for x in args.lambdas.split(",")]
        ctx = EvalContext.build(grid)
        rep = scaling_sweep(by_label[args.function], recipe, lams, ctx)
    except (ToolkitError, ValueError) as exc:
        print(str(exc), file=sys.stderr)
        return 2
    path = _write_report(rep, args.out, f"scaling_{args.kind}_{args.function}")
    print(f"{rep.verdict}: slope {rep.fit['slope']:.4f} -> {path}")
    return 0


def cmd_blowup(args) -> int:
    try:
        if args.corpus is None:
            grid = make_grid(1, BLOWUP_GRID_N, 16.0)
        else:
            grid, _ = _corpus_specs(args.corpus)
            grid = make_grid(1, BLOWUP_GRID_N, grid.box_length)
        case = _case_from_args(args)
        ctx = EvalContext.build(grid)
        widths = (
            [float(w) for w in args.widths.split(",")]
            if args.widths
            else default_blowup_widths(grid)
        )
        rep = blowup_probe(case, ctx, widths)
    except (ToolkitError, ValueError) as exc:
        print(str(exc), file=sys.stderr)
        return 2
    path = _write_report(rep, args.out, f"blowup_{args.case}")
    print(f"{rep.verdict}: growth {rep.fit['total_growth']:.3f} -> {path}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="sobesov",
        description="norms of sampled periodic functions and verification of "
        "interpolation-inequality ratios",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("compute-norm", help="evaluate one norm of a corpus function")
    p.add_argument("--corpus", default=None, help="corpus JSON (default: packaged reference)")
    p.add_argument("--function", required=True, help="function label in the corpus")
    p.add_argument("--kind", required=True,
                   choices=["lp", "sobolev", "holder", "besov", "besov-sup", "bmo", "directional"])
    p.add_argument("--alpha", type=float)
    p.add_argument("--s", type=float)
    p.add_argument("--p")
    p.add_argument("--q")
    p.set_defaults(func=cmd_compute_norm)

    p = sub.add_parser("verify", help="run the default suite against frozen calibration")
    p.add_argument("--corpus", default=None)
    p.add_argument("--constants", default=None, help="constants JSON (default: packaged)")
    p.add_argument("--out", default="suite-output")
    p.add_argument("--calibrate", action="store_true")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("calibrate", help="alias for verify --calibrate")
    p.add_argument("--corpus", default=None)
    p.add_argument("--out", default="suite-output")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_verify, calibrate=True, constants=None)

    p = sub.add_parser("scan", help="ratio scan of one case over the corpus")
    p.add_argument("--case", required=True)
    p.add_argument("--corpus", default=None)
    p.add_argument("--out", default="suite-output/report")
    p.add_argument("--set", action="append", help="exponent override name=value")
    p.set_defaults(func=cmd_scan)

    p = sub.add_parser("scaling", help="dilation-slope study of one norm")
    p.add_argument("--kind", required=True, choices=["lp", "sobolev", "holder", "besov"])
    p.add_argument("--function", default="gaussian_a")
    p.add_argument("--alpha", type=float)
    p.add_argument("--s", type=float)
    p.add_argument("--p")
    p.add_argument("--q")
    p.add_argument("--lambdas", default="1,2,4")
    p.add_argument("--corpus", default=None)
    p.add_argument("--out", default="suite-output/report")
    p.set_defaults(func=cmd_scaling)

    p = sub.add_parser("blowup", help="sharpening-family probe of a borderline case")
    p.add_argument("--case", default="blowup-reference")
    p.add_argument("--set", action="append")
    p.add_argument("--widths", default=None, help="comma-separated transition widths")
    p.add_argument("--corpus", default=None)
    p.add_argument("--out", default="suite-output/report")
    p.set_defaults(func=cmd_blowup)

    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
