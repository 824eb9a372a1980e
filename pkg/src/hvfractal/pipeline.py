"""End-to-end pipeline: build -> verify -> solve -> attractor -> analyze.

Each stage takes the declarative RunConfig, writes its artifacts into the
output directory and returns a report fragment; run_all chains the stages
and aggregates the full run report. All randomness is seeded through the
config, so repeated runs write byte-identical CSVs.
"""

from __future__ import annotations

import json
import time
from pathlib import Path

import numpy as np

from . import analysis as ana
from . import attractor as att
from .config import RunConfig, build_components
from .errors import MissingArtifactError, ValidationFailure
from .plotio import (
    read_csv_columns,
    write_csv,
    write_curve_svg,
    write_loglog_svg,
    write_scatter_svg,
)
from .solver import SolverConfig, iterate_to_fixed_point
from .system import (
    HiddenIFS,
    assemble_ifs,
    validate_norm_conditions,
    verify_edelstein,
)

SAMPLES_CSV = "samples.csv"
TRACE_CSV = "trace.csv"
CLOUD_DET_CSV = "attractor_deterministic.csv"
CLOUD_CHAOS_CSV = "attractor_chaos.csv"
BOXCOUNT_CSV = "boxcount.csv"
REPORT_JSON = "report.json"


def with_seed(cfg: RunConfig, seed: int | None) -> RunConfig:
    """Override every seed in the config with one value (CLI --seed)."""
    if seed is None:
        return cfg
    cfg = cfg.model_copy(deep=True)
    cfg.verify.seed = seed
    cfg.attractor.seed = seed
    cfg.analysis.audit_seed = seed
    return cfg


def build_system(cfg: RunConfig) -> HiddenIFS:
    data, coeffs, contractions = build_components(cfg)
    return assemble_ifs(data, coeffs, contractions, cfg.verify.margin_growth)


def run_verify(cfg: RunConfig) -> dict:
    """Norm conditions, invariant rectangle and sampled strict contraction.

    Raises ValidationFailure (with the partial report attached) on any
    violation.
    """
    data, coeffs, contractions = build_components(cfg)
    norm = validate_norm_conditions(coeffs, data.t0, data.tN)
    report: dict = {"norm_conditions": norm.as_dict()}
    if not norm.passed:
        raise ValidationFailure(
            "norm conditions violated: " + "; ".join(norm.violations), report=report
        )
    ifs = assemble_ifs(data, coeffs, contractions, cfg.verify.margin_growth)
    report["invariant_rect"] = ifs.rect.as_dict()
    report["rect_attempts"] = ifs.rect_attempts
    ed = verify_edelstein(ifs, cfg.verify.edelstein_pairs, cfg.verify.seed)
    report["edelstein"] = ed.as_dict()
    if not ed.passed:
        raise ValidationFailure(
            f"Edelstein violation: max sampled contraction ratio "
            f"{ed.max_ratio:.6g} >= 1 (witness map {ed.witness.get('j')})",
            report=report,
        )
    report["passed"] = True
    return report


def run_solve(cfg: RunConfig, out_dir: str | Path) -> dict:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    ifs = build_system(cfg)
    scfg = SolverConfig(
        grid_points_per_interval=cfg.solver.grid_points_per_interval,
        tol=cfg.solver.tol,
        max_iter=cfg.solver.max_iter,
    )
    t_start = time.perf_counter()
    f, diag = iterate_to_fixed_point(ifs, scfg)
    elapsed = time.perf_counter() - t_start
    write_csv(
        out / SAMPLES_CSV,
        ["t", "f1", "f2"],
        zip(f.grid.tolist(), f.values[:, 0].tolist(), f.values[:, 1].tolist()),
    )
    write_csv(
        out / TRACE_CSV,
        ["iteration", "step_distance"],
        enumerate(diag.step_distances, start=1),
    )
    if "svg" in cfg.output.formats:
        write_curve_svg(out / "f1.svg", f.grid, f.values[:, 0], "visible component f1")
        write_curve_svg(out / "f2.svg", f.grid, f.values[:, 1], "hidden component f2")
    d = diag.as_dict()
    d.pop("step_distances")
    d["rows"] = len(f.grid)
    d["grid_spacing"] = float(np.diff(f.grid).max())
    d["elapsed_s"] = elapsed
    return d


def _load_samples(out: Path) -> np.ndarray:
    path = out / SAMPLES_CSV
    if not path.exists():
        raise MissingArtifactError(
            f"solver output {path} not found; run the solve stage first"
        )
    _, rows = read_csv_columns(path)
    return rows


def run_attractor(cfg: RunConfig, out_dir: str | Path) -> dict:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    ifs = build_system(cfg)
    ab = cfg.attractor
    cloud, trace = att.iterate_set_map(ifs, ab.depth, ab.cap)
    chaos = att.chaos_game(ifs, ab.chaos_points, ab.burn_in, ab.seed)
    write_csv(out / CLOUD_DET_CSV, ["t", "v", "w"], (map(float, p) for p in cloud))
    write_csv(out / CLOUD_CHAOS_CSV, ["t", "v", "w"], (map(float, p) for p in chaos))
    if "svg" in cfg.output.formats:
        proj_v = att.project_graph(cloud, 1)
        proj_w = att.project_graph(cloud, 2)
        write_scatter_svg(out / "attractor_v.svg", proj_v[:, 0], proj_v[:, 1],
                          "attractor projection (t, v)")
        write_scatter_svg(out / "attractor_w.svg", proj_w[:, 0], proj_w[:, 1],
                          "attractor projection (t, w)")
    report = {
        "deterministic_points": len(cloud),
        "chaos_points": len(chaos),
        "displacement_trace": trace,
        "final_displacement": trace[-1] if trace else 0.0,
        "chaos_vs_deterministic": att.hausdorff_distance(chaos, cloud),
    }
    samples_path = out / SAMPLES_CSV
    if samples_path.exists():
        samples = _load_samples(out)
        d_graph = att.hausdorff_distance(samples, cloud)
        spacing = float(np.diff(samples[:, 0]).max())
        report["graph_vs_attractor"] = d_graph
        report["graph_threshold"] = 5.0 * max(spacing, report["final_displacement"])
    else:
        report["graph_vs_attractor"] = None
        report["notice"] = "solver output missing; graph comparison skipped"
    return report


def default_eps(span: float) -> list[float]:
    return [span * 2.0**-k for k in range(3, 10)]


def run_analyze(cfg: RunConfig, out_dir: str | Path) -> dict:
    out = Path(out_dir)
    samples = _load_samples(out)
    t, f1 = samples[:, 0], samples[:, 1]
    span = float(t[-1] - t[0])
    eps = cfg.analysis.eps or default_eps(span)
    table = ana.box_count(np.column_stack([t, f1]), eps, connect=True)
    fit = ana.estimate_box_dimension(table)
    scales = cfg.analysis.scales or ana.default_dyadic_scales(span)
    hold = ana.estimate_holder(t, f1, scales)
    audit = ana.audit_holder(
        t, f1, hold, cfg.analysis.audit_pairs, cfg.analysis.audit_seed
    )
    hold = ana.HolderEstimate(
        alpha=hold.alpha,
        constant=hold.constant,
        scales=hold.scales,
        oscillations=hold.oscillations,
        fit_residual=hold.fit_residual,
        monotone_warning=hold.monotone_warning,
        audit_fraction=audit,
    )
    verdict = ana.check_dimension_bound(fit.dim, hold.alpha, cfg.analysis.slack)
    write_csv(out / BOXCOUNT_CSV, ["eps", "count"], table.rows())
    if "svg" in cfg.output.formats:
        write_loglog_svg(out / "boxcount.svg", table.eps, table.counts, fit.dim,
                         "box counts")
    return {
        "box_dimension": fit.as_dict(),
        "holder": hold.as_dict(),
        "bound_check": verdict.as_dict(),
        "eps": list(map(float, eps)),
    }


def run_all(cfg: RunConfig, out_dir: str | Path) -> dict:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    report: dict = {}
    timings = {}
    for name, stage in (
        ("verify", lambda: run_verify(cfg)),
        ("solve", lambda: run_solve(cfg, out)),
        ("attractor", lambda: run_attractor(cfg, out)),
        ("analysis", lambda: run_analyze(cfg, out)),
    ):
        t0 = time.perf_counter()
        report[name] = stage()
        timings[name] = time.perf_counter() - t0
    report["timings_s"] = timings
    (out / REPORT_JSON).write_text(json.dumps(report, indent=2, default=float))
    return report
