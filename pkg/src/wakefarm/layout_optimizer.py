"""Genetic search over turbine positions, capacity mix and substation siting.

Standard generational GA: tournament selection, uniform crossover over the
per-turbine gene list, Gaussian position mutation with a decaying step size,
categorical spec re-draws, constraint repair and elitism.  All randomness
flows through one generator on the control thread, so a fixed seed yields
bit-identical runs regardless of evaluation parallelism.
"""

from __future__ import annotations

import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .energy_economics import (
    Boundary,
    CostParams,
    EvaluationReport,
    FarmLayout,
    Placement,
    evaluate,
    layout_to_json,
)
from .turbine_model import TurbineCatalog
from .wake_engine import WakeParams
from .wind_resource import WindDistribution

_REPAIR_MARGIN = 1e-3  # m pushed beyond the exact spacing requirement
_RESAMPLE_BUDGET = 500  # attempts per turbine before declaring infeasibility


class InfeasibleError(RuntimeError):
    """Raised when the constraints cannot be satisfied within budget."""


@dataclass
class Genome:
    """GA phenotype: per-turbine (x, y, spec index) plus the substation."""

    positions: np.ndarray  # (T, 2) m
    spec_idx: np.ndarray  # (T,) into the catalog
    substation: np.ndarray  # (2,) m

    def copy(self) -> "Genome":
        return Genome(self.positions.copy(), self.spec_idx.copy(), self.substation.copy())


@dataclass(frozen=True)
class GAConfig:
    bounds: Boundary
    turbine_count: int
    population_size: int = 80
    generations: int = 300
    crossover_rate: float = 0.9
    mutation_rate: float = 0.15  # per gene
    position_mutation_sigma: float | None = None  # m; None = 5% -> 1% of diagonal
    tournament_size: int = 3
    elite_count: int = 2
    rng_seed: int = 0
    min_spacing_factor: float = 2.0  # x the larger rotor diameter of the pair
    wake_mode: str = "aware"

    def __post_init__(self):
        if self.population_size < 2:
            raise ValueError("population size must be >= 2")
        if not (0.0 <= self.crossover_rate <= 1.0 and 0.0 <= self.mutation_rate <= 1.0):
            raise ValueError("rates must lie in [0, 1]")
        if self.elite_count > self.population_size:
            raise ValueError("elite count cannot exceed the population size")
        if self.turbine_count < 1:
            raise ValueError("need at least one turbine")

    def sigma_at(self, generation: int) -> float:
        if self.position_mutation_sigma is not None:
            return self.position_mutation_sigma
        start, end = 0.05 * self.bounds.diagonal, 0.01 * self.bounds.diagonal
        if self.generations <= 1:
            return start
        frac = min(generation / (self.generations - 1), 1.0) if self.generations > 1 else 0.0
        return start + (end - start) * frac


@dataclass(frozen=True)
class FarmContext:
    """Everything a fitness evaluation needs besides the genome itself."""

    dist: WindDistribution
    catalog: TurbineCatalog
    costs: CostParams
    wake: WakeParams
    z0: float


@dataclass
class GenerationRecord:
    generation: int
    best: float
    mean: float


@dataclass
class OptimizationResult:
    best_genome: Genome
    best_report: EvaluationReport
    trace: list[GenerationRecord]
    rng_seed: int
    config: GAConfig

    def trace_csv(self) -> str:
        lines = ["generation,best_aeb_musd,mean_aeb_musd"]
        lines += [f"{r.generation},{r.best!r},{r.mean!r}" for r in self.trace]
        return "\n".join(lines) + "\n"


def genome_to_layout(genome: Genome, catalog: TurbineCatalog, bounds: Boundary) -> FarmLayout:
    turbines = tuple(
        Placement(float(x), float(y), catalog[int(s)])
        for (x, y), s in zip(genome.positions, genome.spec_idx)
    )
    return FarmLayout(
        turbines=turbines,
        substation=(float(genome.substation[0]), float(genome.substation[1])),
        boundary=bounds,
    )


def _required_gaps(spec_idx: np.ndarray, catalog: TurbineCatalog, factor: float) -> np.ndarray:
    diam = catalog.rotor_diameters()[spec_idx]
    return factor * np.maximum(diam[:, None], diam[None, :])


def _first_violation(positions: np.ndarray, gaps: np.ndarray) -> tuple[int, int] | None:
    delta = positions[:, None, :] - positions[None, :, :]
    dist = np.hypot(delta[..., 0], delta[..., 1])
    n = len(positions)
    for i in range(n):
        for j in range(i + 1, n):
            if dist[i, j] < gaps[i, j]:
                return i, j
    return None


def _clamp(points: np.ndarray, bounds: Boundary) -> np.ndarray:
    points[..., 0] = np.clip(points[..., 0], bounds.x_min, bounds.x_max)
    points[..., 1] = np.clip(points[..., 1], bounds.y_min, bounds.y_max)
    return points


def _sample_position(rng: np.random.Generator, bounds: Boundary) -> np.ndarray:
    return np.array(
        [rng.uniform(bounds.x_min, bounds.x_max), rng.uniform(bounds.y_min, bounds.y_max)]
    )


def _resample_turbine(
    genome: Genome, idx: int, gaps: np.ndarray, config: GAConfig, rng: np.random.Generator
) -> None:
    others = [t for t in range(len(genome.positions)) if t != idx]
    for _ in range(_RESAMPLE_BUDGET):
        candidate = _sample_position(rng, config.bounds)
        d = np.hypot(*(genome.positions[others] - candidate).T)
        if np.all(d >= gaps[idx, others]):
            genome.positions[idx] = candidate
            return
    raise InfeasibleError(
        f"minimum spacing (factor {config.min_spacing_factor} x rotor diameter) cannot be "
        f"satisfied for {config.turbine_count} turbines inside the boundary"
    )


def repair(genome: Genome, config: GAConfig, catalog: TurbineCatalog, rng: np.random.Generator) -> Genome:
    """Clamp to bounds, then separate overlapping pairs.

    The higher-index turbine of each violating pair is pushed outward along
    the pair's axis; if a bounded number of pushes cannot restore feasibility
    the offender is re-sampled uniformly.
    """
    _clamp(genome.positions, config.bounds)
    _clamp(genome.substation, config.bounds)
    gaps = _required_gaps(genome.spec_idx, catalog, config.min_spacing_factor)

    max_pushes = 20 * len(genome.positions)
    for _ in range(max_pushes):
        pair = _first_violation(genome.positions, gaps)
        if pair is None:
            return genome
        i, j = pair
        axis = genome.positions[j] - genome.positions[i]
        norm = float(np.hypot(*axis))
        direction = axis / norm if norm > 0 else np.array([1.0, 0.0])
        genome.positions[j] = genome.positions[i] + direction * (gaps[i, j] + _REPAIR_MARGIN)
        _clamp(genome.positions[j : j + 1], config.bounds)

    while True:
        pair = _first_violation(genome.positions, gaps)
        if pair is None:
            return genome
        _resample_turbine(genome, pair[1], gaps, config, rng)


def initialize_population(
    config: GAConfig, catalog: TurbineCatalog, rng: np.random.Generator
) -> list[Genome]:
    """Rejection-sample a feasible starting population (deterministic per seed)."""
    population = []
    for _ in range(config.population_size):
        spec_idx = rng.integers(0, len(catalog), size=config.turbine_count)
        gaps = _required_gaps(spec_idx, catalog, config.min_spacing_factor)
        positions = np.empty((config.turbine_count, 2))
        for t in range(config.turbine_count):
            for attempt in range(_RESAMPLE_BUDGET + 1):
                if attempt == _RESAMPLE_BUDGET:
                    raise InfeasibleError(
                        f"minimum spacing (factor {config.min_spacing_factor} x rotor "
                        f"diameter) cannot place {config.turbine_count} turbines inside "
                        f"the {config.bounds.width:.0f} x {config.bounds.height:.0f} m boundary"
                    )
                candidate = _sample_position(rng, config.bounds)
                if t == 0:
                    positions[0] = candidate
                    break
                d = np.hypot(*(positions[:t] - candidate).T)
                if np.all(d >= gaps[t, :t]):
                    positions[t] = candidate
                    break
        population.append(
            Genome(positions=positions, spec_idx=spec_idx, substation=_sample_position(rng, config.bounds))
        )
    return population


def fitness(genome: Genome, context: FarmContext, config: GAConfig) -> float:
    """Annual economic benefit (M$/yr) of the genome's layout."""
    layout = genome_to_layout(genome, context.catalog, config.bounds)
    report = evaluate(
        layout, context.dist, context.costs, context.wake, context.z0, config.wake_mode
    )
    return report.aeb_musd


def _evaluate_population(
    population: Sequence[Genome], context: FarmContext, config: GAConfig, threads: int
) -> np.ndarray:
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            fits = list(pool.map(lambda g: fitness(g, context, config), population))
    else:
        fits = [fitness(g, context, config) for g in population]
    return np.asarray(fits)


def _tournament(fits: np.ndarray, config: GAConfig, rng: np.random.Generator) -> int:
    candidates = rng.integers(0, len(fits), size=config.tournament_size)
    return int(candidates[np.argmax(fits[candidates])])


def _crossover(a: Genome, b: Genome, rng: np.random.Generator) -> Genome:
    child = a.copy()
    take_b = rng.random(len(a.positions)) < 0.5
    child.positions[take_b] = b.positions[take_b]
    child.spec_idx[take_b] = b.spec_idx[take_b]
    if rng.random() < 0.5:
        child.substation = b.substation.copy()
    return child


def _mutate(genome: Genome, sigma: float, config: GAConfig, n_specs: int, rng: np.random.Generator) -> None:
    for t in range(len(genome.positions)):
        if rng.random() < config.mutation_rate:
            genome.positions[t] += rng.normal(0.0, sigma, size=2)
        if rng.random() < config.mutation_rate:
            genome.spec_idx[t] = rng.integers(0, n_specs)
    if rng.random() < config.mutation_rate:
        genome.substation += rng.normal(0.0, sigma, size=2)


def step_generation(
    population: Sequence[Genome],
    fits: np.ndarray,
    config: GAConfig,
    context: FarmContext,
    rng: np.random.Generator,
    generation: int = 0,
) -> list[Genome]:
    """Produce the next generation from an evaluated population."""
    order = np.argsort(-fits, kind="stable")
    next_pop = [population[int(i)].copy() for i in order[: config.elite_count]]
    sigma = config.sigma_at(generation)
    n_specs = len(context.catalog)
    while len(next_pop) < config.population_size:
        pa = population[_tournament(fits, config, rng)]
        if rng.random() < config.crossover_rate:
            child = _crossover(pa, population[_tournament(fits, config, rng)], rng)
        else:
            child = pa.copy()
        _mutate(child, sigma, config, n_specs, rng)
        repair(child, config, context.catalog, rng)
        next_pop.append(child)
    return next_pop


def run(config: GAConfig, context: FarmContext, threads: int = 1) -> OptimizationResult:
    """Full GA run; returns the best-ever genome, its report and the trace."""
    rng = np.random.default_rng(config.rng_seed)
    population = initialize_population(config, context.catalog, rng)
    fits = _evaluate_population(population, context, config, threads)

    best_idx = int(np.argmax(fits))
    best_genome = population[best_idx].copy()
    best_fit = float(fits[best_idx])
    trace = [GenerationRecord(0, best_fit, float(fits.mean()))]

    for gen in range(1, config.generations + 1):
        population = step_generation(population, fits, config, context, rng, gen)
        fits = _evaluate_population(population, context, config, threads)
        idx = int(np.argmax(fits))
        if float(fits[idx]) > best_fit:
            best_fit = float(fits[idx])
            best_genome = population[idx].copy()
        trace.append(GenerationRecord(gen, best_fit, float(fits.mean())))

    layout = genome_to_layout(best_genome, context.catalog, config.bounds)
    report = evaluate(
        layout, context.dist, context.costs, context.wake, context.z0, config.wake_mode
    )
    return OptimizationResult(
        best_genome=best_genome,
        best_report=report,
        trace=trace,
        rng_seed=config.rng_seed,
        config=config,
    )


def result_to_json(result: OptimizationResult, context: FarmContext) -> str:
    """Result document with the config echoed for reproducibility."""
    cfg = {k: v for k, v in vars(result.config).items() if k != "bounds"}
    cfg["bounds"] = vars(result.config.bounds)
    layout = genome_to_layout(result.best_genome, context.catalog, result.config.bounds)
    doc = {
        "rng_seed": result.rng_seed,
        "config": cfg,
        "best_layout": json.loads(layout_to_json(layout, context.catalog)),
        "best_report": result.best_report.to_json_dict(),
        "trace": [vars(r) for r in result.trace],
    }
    return json.dumps(doc, indent=2)
