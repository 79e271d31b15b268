import math

import numpy as np
import pytest

from retrobohm.const import MAX_KICK_PHASE_PER_CELL
from retrobohm.exceptions import IncompleteBasis, PacketsNotSeparated
from retrobohm.physics import (
    Grid,
    MeasurementSetup,
    appendix_average_check,
    born_experiment,
    complete_basis_from,
    completeness_residual,
    current_standard,
    equivariance_check,
    evolve_history,
    ks_against_density,
    make_gaussian,
    plane_wave_basis,
    sample_positions,
)

KS_COEFFICIENT = 1.63


@pytest.fixture
def packet(grid):
    return make_gaussian(grid, x0=0.5, sigma=1.0, k=1.0)


def test_sampling_is_reproducible(packet):
    first = sample_positions(packet, 1000, 7)
    assert np.array_equal(first, sample_positions(packet, 1000, 7))
    assert not np.array_equal(first, sample_positions(packet, 1000, 8))


def test_samples_follow_the_density(packet):
    samples = sample_positions(packet, 10_000, 11)
    # |psi|^2 is a normal density with variance sigma^2 / 2.
    assert samples.mean() == pytest.approx(0.5, abs=0.03)
    assert samples.var() == pytest.approx(0.5, abs=0.03)
    statistic = ks_against_density(samples, packet.density, packet.grid)
    assert statistic < KS_COEFFICIENT / math.sqrt(samples.size)


def test_plane_waves_are_complete(grid):
    assert completeness_residual(plane_wave_basis(grid)) < 1e-10


def test_missing_basis_functions_are_refused(packet):
    basis = plane_wave_basis(packet.grid)[:-1]
    assert completeness_residual(basis) > 1e-4
    with pytest.raises(IncompleteBasis):
        appendix_average_check(packet, basis)


def test_weighted_current_over_plane_waves_is_the_standard_current(packet):
    deviation = appendix_average_check(packet, plane_wave_basis(packet.grid))
    scale = np.max(np.abs(current_standard(packet).current))
    assert deviation / scale < 1e-8


def test_weighted_current_over_a_basis_containing_the_state(packet):
    basis = complete_basis_from(packet)
    assert len(basis) == packet.grid.n_points
    assert completeness_residual(basis) < 1e-10
    deviation = appendix_average_check(packet, basis)
    scale = np.max(np.abs(current_standard(packet).current))
    assert deviation / scale < 1e-8


@pytest.mark.parametrize(
    "changes",
    [
        {"coefficients": [1.0]},
        {"coefficients": [0.5, 0.5]},
        {"t_split": 2.0},
    ],
)
def test_setup_validation(changes):
    arguments = {"coefficients": [math.sqrt(0.5), math.sqrt(0.5)]} | changes
    with pytest.raises(ValueError):
        MeasurementSetup(**arguments)


def test_born_frequencies_for_two_outcomes():
    setup = MeasurementSetup(np.sqrt([0.3, 0.7]))
    run = born_experiment(setup, 10_000, 12345)
    assert sum(run.outcome_counts.values()) == 10_000
    assert run.expected == pytest.approx({1: 0.3, 2: 0.7})
    assert run.sigma[1] == pytest.approx(math.sqrt(0.21 / 10_000))
    assert run.deviations[1] <= 3 * run.sigma[1]
    assert run.passed
    assert run.max_ks_statistic < KS_COEFFICIENT / math.sqrt(10_000)


@pytest.mark.parametrize("seed", [0, 1, 2])
def test_default_setup_transports_the_ensemble_with_the_packets(seed):
    setup = MeasurementSetup(np.sqrt([0.3, 0.7]))
    assert setup.kick_phase_per_cell <= MAX_KICK_PHASE_PER_CELL
    run = born_experiment(setup, 10_000, seed)
    assert run.passed
    assert run.max_ks_statistic < KS_COEFFICIENT / math.sqrt(10_000)


def test_coarse_grid_for_the_kick_is_reported(caplog):
    setup = MeasurementSetup(np.sqrt([0.3, 0.7]), grid=Grid(-32.0, 32.0, 2048))
    assert setup.kick_phase_per_cell > MAX_KICK_PHASE_PER_CELL
    born_experiment(setup, 100, 1)
    assert "Use more grid points" in caplog.text


def test_born_frequencies_for_three_outcomes():
    setup = MeasurementSetup(
        np.sqrt([0.2, 0.3, 0.5]),
        grid=Grid(-64.0, 64.0, 4096),
        sigma=2.0,
        k_sep=6.0,
        duration=4.0,
    )
    run = born_experiment(setup, 4000, 2024, n_sigma=4.0)
    assert list(run.outcome_counts) == [1, 2, 3]
    assert sum(run.outcome_counts.values()) == 4000
    assert run.passed


def test_born_split_after_free_evolution():
    setup = MeasurementSetup(
        np.sqrt([0.5, 0.5]), grid=Grid(-48.0, 48.0, 4096), t_split=0.5, duration=3.0
    )
    run = born_experiment(setup, 2000, 99, n_sigma=4.0)
    assert run.passed


def test_zero_sigma_budget_fails():
    setup = MeasurementSetup(np.sqrt([0.3, 0.7]))
    assert not born_experiment(setup, 500, 1, n_sigma=0.0).passed


def test_unseparated_packets_are_refused():
    setup = MeasurementSetup(np.sqrt([0.5, 0.5]), k_sep=0.5, duration=0.5)
    with pytest.raises(PacketsNotSeparated):
        born_experiment(setup, 100, 3)


@pytest.mark.slow
def test_born_frequencies_over_random_setups():
    rng = np.random.default_rng(424242)
    passes = 0
    for _ in range(20):
        probability = rng.uniform(0.1, 0.9)
        setup = MeasurementSetup(np.sqrt([probability, 1 - probability]))
        passes += born_experiment(setup, 10_000, int(rng.integers(2**63)), n_sigma=4.0).passed
    assert passes >= 19


def test_transported_ensemble_stays_distributed_as_the_density(packet):
    history = evolve_history(packet, 0.01, 100)
    samples = sample_positions(packet, 10_000, 5)
    statistic = equivariance_check(history, samples, 1.0)
    assert statistic < KS_COEFFICIENT / math.sqrt(samples.size)


def test_uniform_ensemble_is_not_equivariant(packet):
    history = evolve_history(packet, 0.01, 100)
    samples = np.random.default_rng(5).uniform(-2.5, 3.5, 10_000)
    statistic = equivariance_check(history, samples, 1.0)
    assert statistic > KS_COEFFICIENT / math.sqrt(samples.size)
