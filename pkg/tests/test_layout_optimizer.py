import numpy as np
import pytest

from wakefarm.energy_economics import Boundary, CostParams
from wakefarm.layout_optimizer import (
    FarmContext,
    GAConfig,
    InfeasibleError,
    fitness,
    genome_to_layout,
    initialize_population,
    repair,
    result_to_json,
    run,
    step_generation,
    _evaluate_population,
    _required_gaps,
)
from wakefarm.turbine_model import default_catalog
from wakefarm.wake_engine import WakeParams
from wakefarm.wind_resource import WindDistribution, default_speed_bin_edges

CAT = default_catalog()


def make_dist(calm=False):
    p_u = [0.0] * 40
    p_u[0 if calm else 8] = 1.0
    p_t = [0.0] * 12
    p_t[9] = 1.0
    return WindDistribution(80.0, 12, tuple(default_speed_bin_edges()), tuple(p_t), tuple(p_u))


def make_context(calm=False):
    return FarmContext(
        dist=make_dist(calm), catalog=CAT, costs=CostParams(), wake=WakeParams(0.075), z0=0.0002
    )


def make_config(**kw):
    base = dict(
        bounds=Boundary(-5000.0, 5000.0, -5000.0, 5000.0),
        turbine_count=6,
        population_size=10,
        generations=5,
        rng_seed=42,
    )
    base.update(kw)
    return GAConfig(**base)


def spacing_ok(genome, config):
    gaps = _required_gaps(genome.spec_idx, CAT, config.min_spacing_factor)
    pos = genome.positions
    for i in range(len(pos)):
        for j in range(i + 1, len(pos)):
            if np.hypot(*(pos[i] - pos[j])) < gaps[i, j] - 1e-9:
                return False
    return True


def in_bounds(genome, config):
    b = config.bounds
    pts = np.vstack([genome.positions, genome.substation])
    return bool(
        np.all((pts[:, 0] >= b.x_min) & (pts[:, 0] <= b.x_max)
               & (pts[:, 1] >= b.y_min) & (pts[:, 1] <= b.y_max))
    )


class TestInitialization:
    def test_single_turbine_always_feasible(self):
        config = make_config(turbine_count=1, population_size=4)
        rng = np.random.default_rng(config.rng_seed)
        pop = initialize_population(config, CAT, rng)
        assert len(pop) == 4
        assert all(in_bounds(g, config) for g in pop)

    def test_seed_reproducibility(self):
        config = make_config()
        pop_a = initialize_population(config, CAT, np.random.default_rng(config.rng_seed))
        pop_b = initialize_population(config, CAT, np.random.default_rng(config.rng_seed))
        for a, b in zip(pop_a, pop_b):
            np.testing.assert_array_equal(a.positions, b.positions)
            np.testing.assert_array_equal(a.spec_idx, b.spec_idx)
            np.testing.assert_array_equal(a.substation, b.substation)

    def test_fifteen_turbines_in_ten_km_box(self):
        config = make_config(
            bounds=Boundary(-5000.0, 5000.0, -5000.0, 5000.0),
            turbine_count=15,
            population_size=6,
        )
        pop = initialize_population(config, CAT, np.random.default_rng(1))
        assert all(spacing_ok(g, config) for g in pop)
        assert all(in_bounds(g, config) for g in pop)

    def test_infeasible_names_constraint(self):
        config = make_config(
            bounds=Boundary(0.0, 900.0, 0.0, 900.0), turbine_count=12,
            population_size=2, elite_count=1,
        )
        with pytest.raises(InfeasibleError, match="spacing"):
            initialize_population(config, CAT, np.random.default_rng(0))


class TestRepair:
    def test_separates_coincident_turbines(self):
        config = make_config(turbine_count=3)
        rng = np.random.default_rng(0)
        pop = initialize_population(config, CAT, rng)
        genome = pop[0]
        genome.positions[1] = genome.positions[0]  # force a violation
        repair(genome, config, CAT, rng)
        assert spacing_ok(genome, config)
        assert in_bounds(genome, config)

    def test_clamps_out_of_bounds(self):
        config = make_config(turbine_count=2)
        rng = np.random.default_rng(0)
        genome = initialize_population(config, CAT, rng)[0]
        genome.positions[0] = np.array([99_999.0, -99_999.0])
        repair(genome, config, CAT, rng)
        assert in_bounds(genome, config)
        assert spacing_ok(genome, config)


class TestFitness:
    def test_calm_site_is_minus_investment(self):
        context = make_context(calm=True)
        config = make_config(turbine_count=2)
        genome = initialize_population(config, CAT, np.random.default_rng(0))[0]
        layout = genome_to_layout(genome, CAT, config.bounds)
        from wakefarm.energy_economics import evaluate

        report = evaluate(layout, context.dist, context.costs, context.wake, context.z0)
        assert report.aep_gwh == 0.0
        assert fitness(genome, context, config) == pytest.approx(
            -(report.land_cost_musd + report.cable_cost_musd + report.turbine_cost_musd)
        )

    def test_single_turbine_hand_pipeline(self):
        # one 22 MW machine at rated output: AEB follows by hand composition
        from wakefarm.energy_economics import (
            cable_cost,
            production_benefit,
            turbine_cost,
        )

        context = make_context()
        p_u = [0.0] * 40
        p_u[17] = 1.0
        p_t = [0.0] * 12
        p_t[9] = 1.0
        dist = WindDistribution(80.0, 12, tuple(default_speed_bin_edges()), tuple(p_t), tuple(p_u))
        context = FarmContext(dist=dist, catalog=CAT, costs=CostParams(),
                              wake=context.wake, z0=context.z0)
        config = make_config(turbine_count=1)
        genome = initialize_population(config, CAT, np.random.default_rng(3))[0]
        genome.spec_idx[0] = 5  # 22 MW
        got = fitness(genome, context, config)

        apb = production_benefit(22 * 8760 / 1e3, 0.41)
        layout = genome_to_layout(genome, CAT, config.bounds)
        bbox_area = layout.bounding_box_area()
        from wakefarm.cable_routing import minimum_spanning_tree

        tree = minimum_spanning_tree(
            [(layout.turbines[0].x, layout.turbines[0].y), layout.substation]
        )
        expected = (
            apb
            - 5.0 * bbox_area / 1e6
            - cable_cost(tree.total_length, context.costs)
            - turbine_cost(layout, context.costs)
        )
        assert got == pytest.approx(expected, rel=1e-12)

    def test_spreading_coaxial_pair_never_hurts(self):
        # same bounding box, pure point-mass westerly wind: more separation
        # along the flow cannot lower fitness
        context = make_context()
        config = make_config(turbine_count=2, bounds=Boundary(-6000, 6000, -3000, 3000))
        genome = initialize_population(config, CAT, np.random.default_rng(5))[0]
        genome.spec_idx[:] = 5
        genome.substation = np.array([0.0, 2000.0])
        prev = None
        for half_gap in (400.0, 1200.0, 2500.0, 4000.0):
            genome.positions[0] = np.array([-4500.0, 0.0])
            genome.positions[1] = np.array([-4500.0 + half_gap, 0.0])
            fit = fitness(genome, context, config)
            if prev is not None:
                assert fit >= prev - 1e-9
            prev = fit


class TestGenerationStep:
    def test_identity_generation(self):
        context = make_context()
        config = make_config(
            population_size=6, turbine_count=3, crossover_rate=0.0, mutation_rate=0.0,
            elite_count=6,
        )
        rng = np.random.default_rng(config.rng_seed)
        pop = initialize_population(config, CAT, rng)
        fits = _evaluate_population(pop, context, config, threads=1)
        nxt = step_generation(pop, fits, config, context, rng)

        def key(g):
            return (g.positions.tobytes(), g.spec_idx.tobytes(), g.substation.tobytes())

        assert sorted(key(g) for g in nxt) == sorted(key(g) for g in pop)

    def test_children_remain_feasible(self):
        context = make_context()
        config = make_config(population_size=8, turbine_count=5, mutation_rate=0.6)
        rng = np.random.default_rng(9)
        pop = initialize_population(config, CAT, rng)
        fits = _evaluate_population(pop, context, config, threads=1)
        for _ in range(3):
            pop = step_generation(pop, fits, config, context, rng)
            assert all(spacing_ok(g, config) for g in pop)
            assert all(in_bounds(g, config) for g in pop)
            fits = _evaluate_population(pop, context, config, threads=1)


class TestRun:
    def test_zero_generations_returns_initial_best(self):
        context = make_context()
        config = make_config(generations=0)
        result = run(config, context)
        assert len(result.trace) == 1
        assert result.best_report.aeb_musd == pytest.approx(result.trace[0].best)

    def test_trace_monotone_and_deterministic(self):
        context = make_context()
        config = make_config(generations=8, elite_count=2)
        res_a = run(config, context)
        res_b = run(config, context)
        bests = [r.best for r in res_a.trace]
        assert bests == sorted(bests)
        assert result_to_json(res_a, context) == result_to_json(res_b, context)

    def test_thread_count_does_not_change_results(self):
        context = make_context()
        config = make_config(generations=6)
        serial = run(config, context, threads=1)
        threaded = run(config, context, threads=4)
        assert result_to_json(serial, context) == result_to_json(threaded, context)

    def test_optimizer_separates_coaxial_pair(self):
        # two turbines start waked under a point-mass westerly; the search
        # must find a layout with a smaller pair deficit than the worst case
        from wakefarm.energy_economics import evaluate
        from wakefarm.wake_engine import effective_speeds

        context = make_context()
        config = make_config(
            turbine_count=2, population_size=16, generations=25,
            bounds=Boundary(-3000, 3000, -3000, 3000), rng_seed=2,
        )
        result = run(config, context)
        layout = genome_to_layout(result.best_genome, CAT, config.bounds)
        ambient = [9.0, 9.0]
        _, dm = effective_speeds(layout, 270.0, ambient, context.wake)
        coaxial = genome_to_layout(result.best_genome, CAT, config.bounds)
        # worst-case reference: same specs rammed coaxially at min spacing
        from wakefarm.energy_economics import FarmLayout, Placement

        specs = [t.spec for t in coaxial.turbines]
        gap = 2.0 * max(s.rotor_diameter for s in specs)
        worst = FarmLayout(
            turbines=(Placement(0.0, 0.0, specs[0]), Placement(gap, 0.0, specs[1])),
            substation=coaxial.substation, boundary=config.bounds,
        )
        _, dm_worst = effective_speeds(worst, 270.0, ambient, context.wake)
        assert dm.combined.max() < dm_worst.combined.max()

    def test_trace_csv_shape(self):
        context = make_context()
        config = make_config(generations=3)
        result = run(config, context)
        lines = result.trace_csv().strip().splitlines()
        assert lines[0] == "generation,best_aeb_musd,mean_aeb_musd"
        assert len(lines) == 5  # header + initial + 3 generations
