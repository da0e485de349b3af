"""Command-line front end: ingestion, optimization and the study protocols.

Every run is pinned by an explicit scenario file plus a seed, and every
output (JSON/CSV/SVG) is a pure function of those inputs, so repeated
invocations are byte-identical.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .energy_economics import (
    Boundary,
    CostParams,
    EvaluationReport,
    FarmLayout,
    evaluate,
    layout_from_json,
    layout_to_json,
)
from .layout_optimizer import (
    FarmContext,
    GAConfig,
    InfeasibleError,
    genome_to_layout,
    result_to_json,
    run,
)
from .svg_render import render_layout_svg, render_line_chart
from .turbine_model import TurbineCatalog, default_catalog
from .wake_engine import TURBULENCE_OFFSHORE, TURBULENCE_ONSHORE, WakeParams
from .wind_resource import (
    ROUGHNESS_OFFSHORE,
    ROUGHNESS_ONSHORE,
    EmptyDatasetError,
    ParseError,
    WindDistribution,
    build_distribution,
    mean_speed,
    parse_observations,
)

EXIT_OK = 0
EXIT_DATA_ERROR = 2
EXIT_INFEASIBLE = 3
EXIT_INTERNAL = 4

FAST_PROFILE = {"population_size": 40, "generations": 120}

SITE_KIND_DEFAULTS = {
    "offshore": {"z0": ROUGHNESS_OFFSHORE, "turbulence_intensity": TURBULENCE_OFFSHORE},
    "onshore": {"z0": ROUGHNESS_ONSHORE, "turbulence_intensity": TURBULENCE_ONSHORE},
}


@dataclass
class Scenario:
    """One pinned study setup, loaded from JSON with defaults filled in."""

    site: str
    resource: str
    site_kind: str = "offshore"
    turbine_count: int = 15
    hub_height_case: str = "case1"
    boundary_mode: str = "free"  # free: generous search box; fixed: hard area cap
    boundary_width_m: float | None = None
    boundary_height_m: float | None = None
    area_cap_km2: float | None = None
    min_spacing_factor: float = 2.0
    z0: float | None = None
    turbulence_intensity: float | None = None
    cost_overrides: dict = field(default_factory=dict)
    ga_overrides: dict = field(default_factory=dict)
    rng_seed: int = 0

    def __post_init__(self):
        if self.site_kind not in SITE_KIND_DEFAULTS:
            raise ValueError(f"site_kind must be one of {sorted(SITE_KIND_DEFAULTS)}")
        if self.boundary_mode not in ("free", "fixed"):
            raise ValueError("boundary_mode must be 'free' or 'fixed'")
        defaults = SITE_KIND_DEFAULTS[self.site_kind]
        if self.z0 is None:
            self.z0 = defaults["z0"]
        if self.turbulence_intensity is None:
            self.turbulence_intensity = defaults["turbulence_intensity"]
        if self.area_cap_km2 is not None:
            side = math.sqrt(self.area_cap_km2 * 1e6)
            self.boundary_width_m = side
            self.boundary_height_m = side
        if self.boundary_width_m is None:
            self.boundary_width_m = 20000.0
        if self.boundary_height_m is None:
            self.boundary_height_m = self.boundary_width_m

    def boundary(self) -> Boundary:
        w, h = self.boundary_width_m, self.boundary_height_m
        return Boundary(-w / 2.0, w / 2.0, -h / 2.0, h / 2.0)

    def to_dict(self) -> dict:
        return dict(vars(self))


@dataclass
class ComparisonReport:
    """Two-stage benchmark outcome: the wake-aware design, the wake-ignorant
    design as it believes itself to be, and the same ignorant layout after
    wakes are applied in post-analysis."""

    wake_aware: EvaluationReport
    ignorant_no_wake: EvaluationReport
    ignorant_post_wake: EvaluationReport

    def __post_init__(self):
        if self.ignorant_post_wake.aep_gwh > self.ignorant_no_wake.aep_gwh + 1e-9:
            raise AssertionError("wake post-analysis must not raise AEP")

    def deltas(self) -> dict:
        no_wake, post = self.ignorant_no_wake, self.ignorant_post_wake
        return {
            "aep_gwh": no_wake.aep_gwh - post.aep_gwh,
            "apb_musd": no_wake.apb_musd - post.apb_musd,
            "aeb_musd": no_wake.aeb_musd - post.aeb_musd,
        }

    def to_csv(self) -> str:
        a, b, c = self.wake_aware, self.ignorant_no_wake, self.ignorant_post_wake
        rows = [
            ("aep_gwh", a.aep_gwh, b.aep_gwh, c.aep_gwh),
            ("apb_musd", a.apb_musd, b.apb_musd, c.apb_musd),
            ("capacity_mw", a.farm_capacity_mw, b.farm_capacity_mw, c.farm_capacity_mw),
            ("capacity_factor_pct", a.capacity_factor * 100, b.capacity_factor * 100,
             c.capacity_factor * 100),
            ("footprint_km2", a.footprint_km2, b.footprint_km2, c.footprint_km2),
            ("cable_km", a.cable_length_km, b.cable_length_km, c.cable_length_km),
            ("land_cost_musd", a.land_cost_musd, b.land_cost_musd, c.land_cost_musd),
            ("cable_cost_musd", a.cable_cost_musd, b.cable_cost_musd, c.cable_cost_musd),
            ("turbine_cost_musd", a.turbine_cost_musd, b.turbine_cost_musd,
             c.turbine_cost_musd),
            ("aeb_musd", a.aeb_musd, b.aeb_musd, c.aeb_musd),
        ]
        text = "parameter,wake_aware,ignorant_no_wake,ignorant_post_wake\n"
        return text + "\n".join(f"{n},{x!r},{y!r},{z!r}" for n, x, y, z in rows) + "\n"


def load_scenario(path: str | Path, seed_override: int | None = None) -> Scenario:
    path = Path(path)
    doc = json.loads(path.read_text())
    known = set(Scenario.__dataclass_fields__)
    unknown = set(doc) - known
    if unknown:
        raise ValueError(f"unknown scenario keys: {sorted(unknown)}")
    scenario = Scenario(**doc)
    resource = Path(scenario.resource)
    if not resource.is_absolute():
        scenario.resource = str(path.parent / resource)
    if seed_override is not None:
        scenario.rng_seed = seed_override
    return scenario


def build_context(scenario: Scenario, catalog: TurbineCatalog | None = None) -> FarmContext:
    dist = WindDistribution.from_json(Path(scenario.resource).read_text())
    return FarmContext(
        dist=dist,
        catalog=catalog or default_catalog(scenario.hub_height_case),
        costs=CostParams(**scenario.cost_overrides),
        wake=WakeParams(turbulence_intensity=scenario.turbulence_intensity),
        z0=scenario.z0,
    )


def build_ga_config(scenario: Scenario, fast: bool = False, wake_mode: str = "aware") -> GAConfig:
    overrides = dict(scenario.ga_overrides)
    if fast:
        for key, value in FAST_PROFILE.items():
            overrides.setdefault(key, value)
    overrides.setdefault("min_spacing_factor", scenario.min_spacing_factor)
    overrides["wake_mode"] = wake_mode
    return GAConfig(
        bounds=scenario.boundary(),
        turbine_count=scenario.turbine_count,
        rng_seed=scenario.rng_seed,
        **overrides,
    )


def _dominant_thetas(dist: WindDistribution, count: int = 2) -> list[float]:
    order = np.argsort(-np.asarray(dist.p_theta), kind="stable")
    centers = dist.sector_centers()
    return [float(centers[i]) for i in order[:count]]


def _write(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text)


def _write_run_outputs(
    out_dir: Path, stem: str, result, context: FarmContext, scenario: Scenario
) -> FarmLayout:
    layout = genome_to_layout(result.best_genome, context.catalog, result.config.bounds)
    doc = json.loads(result_to_json(result, context))
    doc["scenario"] = scenario.to_dict()  # defaults echoed for provenance
    _write(out_dir / f"{stem}_result.json", json.dumps(doc, indent=2))
    _write(out_dir / f"{stem}_layout.json", layout_to_json(layout, context.catalog))
    _write(out_dir / f"{stem}_report.csv", result.best_report.to_csv(site=scenario.site))
    _write(out_dir / f"{stem}_trace.csv", result.trace_csv())
    svg = render_layout_svg(
        layout,
        context.wake,
        dominant_thetas=_dominant_thetas(context.dist),
        title=f"{scenario.site} ({result.config.wake_mode}, seed {result.rng_seed})",
    )
    _write(out_dir / f"{stem}_layout.svg", svg)
    return layout


def cmd_ingest(args) -> int:
    raw = Path(args.input).read_text()
    samples = parse_observations(raw, args.format, args.height)
    candidate_rows = _count_candidate_rows(raw, args.format)
    dropped = candidate_rows - len(samples)

    kind = SITE_KIND_DEFAULTS[args.site_kind]
    z0 = args.z0 if args.z0 is not None else kind["z0"]
    dist = build_distribution(
        samples,
        sector_count=args.sectors,
        speed_bin_width=args.bin_width,
        reference_height=args.ref_height,
        z0=z0,
        joint=args.joint,
    )
    out = Path(args.out)
    _write(out, dist.to_json())
    _write(out.with_suffix(".rose16.csv"), _rose_csv(samples, sectors=16))
    print(
        f"ingested {len(samples)} samples ({dropped} dropped); "
        f"mean speed at {args.ref_height:g} m: {mean_speed(dist):.2f} m/s"
    )
    print(f"wrote {out}")
    return EXIT_OK


def _count_candidate_rows(raw: str, format: str) -> int:
    lines = [ln for ln in raw.splitlines() if ln.strip()]
    if format == "ndbc":
        body = [ln for ln in lines if not ln.lstrip().startswith("#")]
        # the header itself may be uncommented in old files
        return len(body) - (1 if body and not lines[0].lstrip().startswith("#") else 0)
    return len(lines) - 1  # minus the CSV header


def _rose_csv(samples, sectors: int = 16) -> str:
    """Display-resolution directional frequencies (finer than the model's 12)."""
    width = 360.0 / sectors
    counts = np.zeros(sectors, dtype=np.int64)
    for s in samples:
        counts[int(math.floor((s.direction + width / 2.0) / width)) % sectors] += 1
    lines = ["sector_center_deg,frequency"]
    lines += [
        f"{i * width:g},{float(counts[i]) / len(samples)!r}" for i in range(sectors)
    ]
    return "\n".join(lines) + "\n"


def cmd_optimize(args) -> int:
    scenario = load_scenario(args.scenario, args.seed)
    context = build_context(scenario)
    config = build_ga_config(scenario, fast=args.fast)
    result = run(config, context, threads=args.threads)
    out_dir = Path(args.out_dir)
    _write_run_outputs(out_dir, "optimize", result, context, scenario)
    print(
        f"best AEB {result.best_report.aeb_musd:.2f} M$/yr | "
        f"AEP {result.best_report.aep_gwh:.1f} GWh | "
        f"capacity {result.best_report.farm_capacity_mw:g} MW"
    )
    print(f"outputs in {out_dir}")
    return EXIT_OK


def cmd_evaluate(args) -> int:
    layout = layout_from_json(Path(args.layout).read_text())
    if args.scenario:
        scenario = load_scenario(args.scenario)
        context = build_context(scenario)
        site = scenario.site
    elif args.dist is None:
        raise ValueError("evaluate needs either --scenario or --dist")
    else:
        kind = SITE_KIND_DEFAULTS[args.site_kind]
        context = FarmContext(
            dist=WindDistribution.from_json(Path(args.dist).read_text()),
            catalog=default_catalog(),
            costs=CostParams(),
            wake=WakeParams(turbulence_intensity=kind["turbulence_intensity"]),
            z0=kind["z0"],
        )
        site = Path(args.layout).stem
    report = evaluate(
        layout, context.dist, context.costs, context.wake, context.z0, args.wake_mode
    )
    out_dir = Path(args.out_dir)
    _write(out_dir / "evaluate_report.csv", report.to_csv(site=site))
    _write(out_dir / "evaluate_report.json", json.dumps(report.to_json_dict(), indent=2))
    print(report.to_csv(site=site), end="")
    return EXIT_OK


def cmd_compare(args) -> int:
    scenario = load_scenario(args.scenario, args.seed)
    if scenario.boundary_mode != "fixed":
        raise ValueError("compare requires a scenario with boundary_mode 'fixed'")
    context = build_context(scenario)
    out_dir = Path(args.out_dir)

    aware = run(build_ga_config(scenario, args.fast, "aware"), context, threads=args.threads)
    ignorant = run(build_ga_config(scenario, args.fast, "ignorant"), context, threads=args.threads)
    _write_run_outputs(out_dir, "aware", aware, context, scenario)
    ignorant_layout = _write_run_outputs(out_dir, "ignorant", ignorant, context, scenario)

    post = evaluate(
        ignorant_layout, context.dist, context.costs, context.wake, context.z0, "aware"
    )
    comparison = ComparisonReport(
        wake_aware=aware.best_report,
        ignorant_no_wake=ignorant.best_report,
        ignorant_post_wake=post,
    )
    _write(out_dir / "comparison.csv", comparison.to_csv())
    doc = {
        "scenario": scenario.to_dict(),
        "wake_aware": comparison.wake_aware.to_json_dict(),
        "ignorant_no_wake": comparison.ignorant_no_wake.to_json_dict(),
        "ignorant_post_wake": comparison.ignorant_post_wake.to_json_dict(),
        "deltas": comparison.deltas(),
    }
    _write(out_dir / "comparison.json", json.dumps(doc, indent=2))
    print(
        f"aware AEB {comparison.wake_aware.aeb_musd:.2f} | "
        f"ignorant (no wake) {comparison.ignorant_no_wake.aeb_musd:.2f} | "
        f"ignorant post-wake {post.aeb_musd:.2f} M$/yr"
    )
    print(
        "ignorant AEP loss after wake post-analysis: "
        f"{comparison.deltas()['aep_gwh']:.2f} GWh/yr"
    )
    return EXIT_OK


def cmd_sweep(args) -> int:
    scenario = load_scenario(args.scenario, args.seed)
    context = build_context(scenario)
    t_values = [int(v) for v in args.turbines.split(",") if v.strip()]
    if not t_values:
        raise ValueError("empty turbine range")
    out_dir = Path(args.out_dir)

    rows = []
    for t in t_values:
        scenario.turbine_count = t
        config = build_ga_config(scenario, fast=args.fast)
        result = run(config, context, threads=args.threads)
        rep = result.best_report
        rows.append((t, rep.capacity_factor, rep.aeb_musd, rep.aeb_musd / t, rep.footprint_km2))
        print(
            f"T={t}: CF {rep.capacity_factor * 100:.2f}% | AEB {rep.aeb_musd:.2f} M$/yr | "
            f"footprint {rep.footprint_km2:.2f} km2"
        )

    csv_text = "turbine_count,capacity_factor,aeb_musd,aeb_per_turbine_musd,footprint_km2\n"
    csv_text += "".join(
        f"{t},{cf!r},{aeb!r},{per!r},{fp!r}\n" for t, cf, aeb, per, fp in rows
    )
    _write(out_dir / "sweep.csv", csv_text)
    ts = [r[0] for r in rows]
    _write(
        out_dir / "sweep_capacity_factor.svg",
        render_line_chart(ts, [r[1] * 100 for r in rows], "Capacity factor vs turbine count",
                          "turbines", "capacity factor (%)"),
    )
    _write(
        out_dir / "sweep_aeb.svg",
        render_line_chart(ts, [r[2] for r in rows], "Annual economic benefit vs turbine count",
                          "turbines", "AEB (M$/yr)"),
    )
    print(f"outputs in {out_dir}")
    return EXIT_OK


def cmd_hub_case(args) -> int:
    scenario = load_scenario(args.scenario, args.seed)
    case = f"case{args.case}"
    scenario.hub_height_case = case
    context = build_context(scenario)
    config = build_ga_config(scenario, fast=args.fast)
    result = run(config, context, threads=args.threads)
    out_dir = Path(args.out_dir)
    _write_run_outputs(out_dir, case, result, context, scenario)
    print(
        f"{case}: AEB {result.best_report.aeb_musd:.2f} M$/yr | "
        f"AEP {result.best_report.aep_gwh:.1f} GWh"
    )
    return EXIT_OK


def cmd_catalog(args) -> int:
    catalog = default_catalog(args.case)
    text = catalog.to_json()
    if args.out:
        _write(Path(args.out), text)
        print(f"wrote {args.out}")
    else:
        print(text)
    return EXIT_OK


def cmd_render(args) -> int:
    layout = layout_from_json(Path(args.layout).read_text())
    kind = SITE_KIND_DEFAULTS[args.site_kind]
    thetas: list[float] = []
    if args.dist:
        dist = WindDistribution.from_json(Path(args.dist).read_text())
        thetas = _dominant_thetas(dist)
    svg = render_layout_svg(
        layout,
        WakeParams(turbulence_intensity=kind["turbulence_intensity"]),
        dominant_thetas=thetas,
        title=Path(args.layout).stem,
    )
    _write(Path(args.out), svg)
    print(f"wrote {args.out}")
    return EXIT_OK


def _add_common(parser: argparse.ArgumentParser, ga: bool = True) -> None:
    parser.add_argument("--out-dir", default="out", help="output directory")
    if ga:
        parser.add_argument("--seed", type=int, default=None, help="override the scenario seed")
        parser.add_argument("--fast", action="store_true", help="desk-scale GA budget (pop 40, 120 gens)")
        parser.add_argument("--threads", type=int, default=1, help="parallel fitness evaluations")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="wakefarm",
        description="Wake-aware wind farm layout, capacity and cabling design toolkit",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ingest", help="observations -> wind distribution JSON")
    p.add_argument("input")
    p.add_argument("--format", choices=["ndbc", "ncei", "generic_csv"], required=True)
    p.add_argument("--height", type=float, default=None, help="anemometer height (m)")
    p.add_argument("--out", required=True)
    p.add_argument("--sectors", type=int, default=12)
    p.add_argument("--bin-width", type=float, default=1.0)
    p.add_argument("--ref-height", type=float, default=80.0)
    p.add_argument("--site-kind", choices=["offshore", "onshore"], default="offshore")
    p.add_argument("--z0", type=float, default=None)
    p.add_argument("--joint", action="store_true", help="store the joint table, not marginals")
    p.set_defaults(func=cmd_ingest)

    p = sub.add_parser("optimize", help="GA layout optimization for a scenario")
    p.add_argument("scenario")
    _add_common(p)
    p.set_defaults(func=cmd_optimize)

    p = sub.add_parser("evaluate", help="evaluate a stored layout")
    p.add_argument("layout")
    p.add_argument("--scenario", default=None)
    p.add_argument("--dist", default=None)
    p.add_argument("--site-kind", choices=["offshore", "onshore"], default="offshore")
    p.add_argument("--wake-mode", choices=["aware", "ignorant"], default="aware")
    _add_common(p, ga=False)
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("compare", help="wake-aware vs wake-ignorant two-stage study")
    p.add_argument("scenario")
    _add_common(p)
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("sweep", help="turbine-count sensitivity sweep")
    p.add_argument("scenario")
    p.add_argument("--turbines", default="5,10,15,20,25,30", help="comma-separated counts")
    _add_common(p)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("hub-case", help="run one hub-height profile case")
    p.add_argument("scenario")
    p.add_argument("--case", type=int, choices=[1, 2, 3], required=True)
    _add_common(p)
    p.set_defaults(func=cmd_hub_case)

    p = sub.add_parser("catalog", help="dump the built-in turbine catalog")
    p.add_argument("--case", choices=["case1", "case2", "case3"], default="case1")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_catalog)

    p = sub.add_parser("render", help="layout JSON -> SVG map")
    p.add_argument("layout")
    p.add_argument("--dist", default=None, help="distribution JSON for wake cones")
    p.add_argument("--site-kind", choices=["offshore", "onshore"], default="offshore")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_render)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except InfeasibleError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except (ParseError, EmptyDatasetError, FileNotFoundError, IsADirectoryError,
            json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA_ERROR
    except AssertionError as exc:
        print(f"internal invariant violated: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
