"""
Dither plans and the minimax solver
"""
import numpy as np
import pytest

from src.core import (
    FrequencyBlock, ParameterError, build_legal_set, idft, make_config, make_qam, modulate_block,
)
from src.core.model import ConsistencyError
from src.dither import (
    DitherPlan, UnsafeRadiusError, build_plan, build_single_level_plan, criterion_radii,
    derive_mu, optimizer, project, solve,
)
from src.link import realized_nu
from src.utils import SolverOptions


def _blocks(link, draw_bits, count):
    cfg, cons, legal = link
    return [modulate_block(draw_bits(cfg.m), cfg, cons, legal) for _ in range(count)]


def test_criterion_radii():
    cons = make_qam(16)
    np.testing.assert_allclose(criterion_radii(cons, 0.0),
                               [0.0, np.sqrt(10) - np.sqrt(2), np.sqrt(18) - np.sqrt(2)])
    radii = criterion_radii(cons, 0.5)
    assert radii == pytest.approx((0.5, 2.2481, 3.3284), abs=1e-4)


def test_derive_mu_levels():
    cfg, cons = make_config(8, 4, 2, 16), make_qam(16)
    values = np.array([1 + 1j, 3 + 3j, 0, 0, 3 + 1j, 1 + 3j, 0, 0])
    X = FrequencyBlock(values=values, activation=values != 0)
    np.testing.assert_array_equal(derive_mu(X, cfg, cons), [0, 1])


def test_derive_mu_qpsk(small_link, draw_bits):
    cfg = make_config(16, 4, 2, 4)
    cons = make_qam(4)
    X = modulate_block(draw_bits(cfg.m), cfg, cons, small_link[2])
    assert np.all(derive_mu(X, cfg, cons) == 0)


def test_derive_mu_rejects_off_grid_symbol():
    cfg, cons = make_config(8, 4, 2, 16), make_qam(16)
    values = np.array([1.2 + 1j, 3 + 3j, 0, 0, 3 + 1j, 1 + 3j, 0, 0])
    with pytest.raises(ConsistencyError):
        derive_mu(FrequencyBlock(values=values, activation=values != 0), cfg, cons)


def test_build_plan_groups():
    cfg, cons = make_config(8, 4, 2, 16), make_qam(16)
    values = np.array([1 + 1j, 3 + 3j, 0, 0, 3 + 1j, 1 + 3j, 0, 0])
    X = FrequencyBlock(values=values, activation=values != 0)
    plan = build_plan(X, cfg, cons, 0.0)
    assert plan.L == 3
    np.testing.assert_array_equal(plan.groups[0], [2, 3])
    np.testing.assert_array_equal(plan.groups[1], [6, 7])
    assert plan.groups[2].size == 0
    assert sum(plan.group_sizes) == cfg.N - cfg.K
    assert plan.radii[1] - plan.radii[0] == pytest.approx(cons.levels[1] - cons.levels[0])


def test_build_plan_rejects_unsafe_r1(reference_link, draw_bits):
    cfg, cons, _ = reference_link
    X = _blocks(reference_link, draw_bits, 1)[0]
    with pytest.raises(UnsafeRadiusError):
        build_plan(X, cfg, cons, float(np.sqrt(2)))
    plan = build_plan(X, cfg, cons, 1.5, allow_unsafe=True)
    assert plan.radii[0] == 1.5


def test_build_plan_radii_override(reference_link, draw_bits):
    cfg, cons, _ = reference_link
    X = _blocks(reference_link, draw_bits, 1)[0]
    plan = build_plan(X, cfg, cons, 0.0, radii=(0.1, 0.2, 0.3))
    assert plan.radii == (0.1, 0.2, 0.3)
    with pytest.raises(ParameterError):
        build_plan(X, cfg, cons, 0.0, radii=(0.1, 0.2))


def test_qpsk_plan_is_single_level(draw_bits):
    cfg, cons = make_config(16, 4, 2, 4), make_qam(4)
    X = modulate_block(draw_bits(cfg.m), cfg, cons, build_legal_set(4, 2))
    plan = build_plan(X, cfg, cons, 0.3)
    assert plan.radii == (0.3,)
    np.testing.assert_array_equal(plan.idle_indices, X.idle_indices)


def test_single_level_plan(reference_link, draw_bits):
    cfg, _, _ = reference_link
    X = _blocks(reference_link, draw_bits, 1)[0]
    plan = build_single_level_plan(X, cfg, 0.5)
    assert plan.group_sizes == (64,)
    assert plan.radii == (0.5,)
    with pytest.raises(ParameterError):
        build_single_level_plan(X, cfg, -0.1)


def test_project_clips_radially():
    z = np.array([3 + 4j, 0.1j, 0])
    out = project(z, np.array([1.0, 1.0, 1.0]))
    np.testing.assert_allclose(out, [0.6 + 0.8j, 0.1j, 0])


def test_zero_radius_means_no_dither(reference_link, draw_bits):
    cfg, _, _ = reference_link
    X = _blocks(reference_link, draw_bits, 1)[0]
    x = idft(X)
    solution = solve(x, build_single_level_plan(X, cfg, 0.0))
    assert np.all(solution.coefficients == 0)
    assert solution.objective == x.peak_power
    assert solution.converged


def test_solutions_are_feasible_and_useful(reference_link, draw_bits, fast_solver):
    cfg, cons, _ = reference_link
    for X in _blocks(reference_link, draw_bits, 5):
        x = idft(X)
        for plan in (build_single_level_plan(X, cfg, 0.5), build_plan(X, cfg, cons, 0.0)):
            solution = solve(x, plan, fast_solver)
            assert np.all(np.abs(solution.coefficients) <= plan.index_radii + 1e-9)
            assert solution.objective <= x.peak_power + 1e-9
            assert solution.objective == pytest.approx(solution.signal.peak_power, rel=1e-12)

            dithered = solution.apply(X)
            np.testing.assert_array_equal(dithered.values[X.activation], X.values[X.activation])
            assert idft(dithered).peak_power == pytest.approx(solution.objective, rel=1e-9)


def test_dither_reduces_peak(reference_link, draw_bits, fast_solver):
    cfg, _, _ = reference_link
    reductions = []
    for X in _blocks(reference_link, draw_bits, 5):
        x = idft(X)
        solution = solve(x, build_single_level_plan(X, cfg, 0.5), fast_solver)
        reductions.append(x.peak_power - solution.objective)
    assert np.mean(reductions) > 0


def test_nu_guarantees(reference_link, draw_bits, fast_solver):
    cfg, cons, _ = reference_link
    A1 = cons.levels[0]
    for X in _blocks(reference_link, draw_bits, 5):
        x = idft(X)
        multilevel = solve(x, build_plan(X, cfg, cons, 0.0), fast_solver)
        assert realized_nu(multilevel.apply(X), cfg, cons) >= A1 - 1e-9
        single = solve(x, build_single_level_plan(X, cfg, 0.5), fast_solver)
        assert realized_nu(single.apply(X), cfg, cons) >= A1 - 0.5 - 1e-9


def test_lambda_per_subblock(reference_link, draw_bits, fast_solver):
    cfg, cons, _ = reference_link
    X = _blocks(reference_link, draw_bits, 1)[0]
    plan = build_plan(X, cfg, cons, 0.0)
    solution = solve(idft(X), plan, fast_solver)
    dithered = solution.apply(X)
    idle = np.where(dithered.activation, 0, np.abs(dithered.values)).reshape(cfg.g, cfg.n)
    np.testing.assert_allclose(solution.lambda_per_subblock, idle.max(axis=1))
    for level, group in zip(range(plan.L), solution.grouped()):
        assert np.all(np.abs(group) <= plan.radii[level] + 1e-9)


def test_single_group_equals_equal_radius_multilevel(reference_link, draw_bits, fast_solver):
    cfg, cons, _ = reference_link
    for X in _blocks(reference_link, draw_bits, 3):
        x = idft(X)
        single = solve(x, build_single_level_plan(X, cfg, 0.5), fast_solver)
        multi = solve(x, build_plan(X, cfg, cons, 0.0, radii=(0.5, 0.5, 0.5)), fast_solver)
        assert multi.objective == pytest.approx(single.objective, abs=1e-9)


def test_doubling_radii_lowers_mean_peak(reference_link, draw_bits, fast_solver):
    cfg, _, _ = reference_link
    base, doubled = [], []
    for X in _blocks(reference_link, draw_bits, 5):
        x = idft(X)
        plan = build_single_level_plan(X, cfg, 0.5)
        base.append(solve(x, plan, fast_solver).objective)
        doubled.append(solve(x, plan.scaled(2.0), fast_solver).objective)
    assert np.mean(doubled) < np.mean(base)


def test_default_solves_converge(reference_link, draw_bits):
    cfg, cons, _ = reference_link
    options = SolverOptions()
    for X in _blocks(reference_link, draw_bits, 3):
        x = idft(X)
        for plan in (build_single_level_plan(X, cfg, 0.5), build_plan(X, cfg, cons, 0.0)):
            solution = solve(x, plan, options)
            assert solution.converged
            assert solution.iterations < options.max_iterations // 2


def test_infeasible_start_is_projected(reference_link, draw_bits, fast_solver):
    cfg, _, _ = reference_link
    X = _blocks(reference_link, draw_bits, 1)[0]
    plan = build_single_level_plan(X, cfg, 0.5)
    far = np.full(plan.idle_indices.size, 10.0 + 10.0j)
    solution = solve(idft(X), plan, fast_solver, initial=far)
    assert np.all(np.abs(solution.coefficients) <= 0.5 + 1e-9)


def test_infeasible_dither_is_a_hard_error(reference_link, draw_bits, monkeypatch):
    cfg, _, _ = reference_link
    X = _blocks(reference_link, draw_bits, 1)[0]
    monkeypatch.setattr(optimizer, "project", lambda z, radius: 2.0 * radius + 0j)
    with pytest.raises(ConsistencyError):
        solve(idft(X), build_single_level_plan(X, cfg, 0.5), SolverOptions(max_iterations=2))


def test_iteration_budget_is_not_fatal(reference_link, draw_bits):
    cfg, _, _ = reference_link
    X = _blocks(reference_link, draw_bits, 1)[0]
    x = idft(X)
    solution = solve(x, build_single_level_plan(X, cfg, 0.5), SolverOptions(max_iterations=3))
    assert not solution.converged
    assert solution.iterations == 3
    assert solution.objective <= x.peak_power + 1e-9


def _one_tone_instance(rng):
    N = 8
    X = np.zeros(N, dtype=complex)
    X[[0, 1, 4, 6]] = rng.choice([-3, -1, 1, 3], 4) + 1j * rng.choice([-3, -1, 1, 3], 4)
    free = 2
    plan = DitherPlan(groups=(np.array([free]),), radii=(1e3,),
                      subblock_levels=np.zeros(2, dtype=int), subblock_size=4, N=N)
    return X, free, plan


def _grid_peaks(x, column, candidates):
    return np.max(np.abs(x[None, :] + candidates[:, None] * column[None, :]) ** 2, axis=1)


def _grid_oracle(x, free, N, max_modulus):
    """Coarse magnitude/phase grid, then a finer grid around the best cell"""
    column = np.exp(2j * np.pi * free * np.arange(N) / N) / np.sqrt(N)
    magnitudes = np.linspace(0.0, max_modulus, 201)
    phases = np.linspace(0.0, 2 * np.pi, 361)[:-1]
    c = (magnitudes[:, None] * np.exp(1j * phases[None, :])).ravel()
    peaks = _grid_peaks(x, column, c)
    best = c[peaks.argmin()]

    dm, dp = magnitudes[1], phases[1]
    fine_m = np.clip(np.linspace(abs(best) - dm, abs(best) + dm, 201), 0.0, None)
    fine_p = np.angle(best) + np.linspace(-dp, dp, 201)
    fine = (fine_m[:, None] * np.exp(1j * fine_p[None, :])).ravel()
    return float(min(peaks.min(), _grid_peaks(x, column, fine).min()))


def test_single_tone_grid_oracle(rng):
    for _ in range(5):
        X, free, plan = _one_tone_instance(rng)
        x = idft(X)
        solution = solve(x, plan)
        oracle = _grid_oracle(x.samples, free, 8, 2.0 * np.sqrt(8) * np.sqrt(x.peak_power))
        assert solution.objective <= oracle * 1.02
