import math

import numpy as np
import pytest

from retrobohm.exceptions import GridExit, GridMismatch, NodeEncounter, ZeroCurrent
from retrobohm.physics import (
    Classification,
    FieldHistory,
    Grid,
    bohm_ensemble,
    bohm_trajectory,
    cs_worldline,
    doubling_back_witness,
    evolve_final_backward,
    evolve_history,
    four_velocity,
    make_gaussian,
    worldline,
)


@pytest.fixture
def spreading(grid):
    """A free packet at rest, evolved to t = 1."""
    return evolve_history(make_gaussian(grid, 0.0, 1.0), 0.01, 100)


def reversals_on_zero_crossings(fields: FieldHistory, line) -> bool:
    grid = fields.grid
    for event in line.reversal_events:
        density = fields.at(event.t).density
        index = int(round((event.x - grid.x_min) / grid.dx))
        window = density[index - 1 : index + 2]
        if not window.min() <= 0 <= window.max():
            return False
    return True


def test_timelike_current_is_normalized():
    velocity = four_velocity(2.0, 1.0)
    assert velocity.classification is Classification.TIMELIKE
    assert velocity.normalized
    assert velocity.rest_density == pytest.approx(math.sqrt(3.0))
    assert velocity.u0**2 - velocity.u1**2 == pytest.approx(1.0)


def test_backward_timelike_current_keeps_its_sign():
    velocity = four_velocity(-2.0, 1.0)
    assert velocity.classification is Classification.TIMELIKE
    assert velocity.u0 < 0


@pytest.mark.parametrize(
    ("j0", "j1", "expected"),
    [(1.0, 1.0, Classification.LIGHTLIKE), (1.0, -2.0, Classification.SPACELIKE)],
)
def test_other_currents_are_left_unnormalized(j0, j1, expected):
    velocity = four_velocity(j0, j1)
    assert velocity.classification is expected
    assert not velocity.normalized
    assert (velocity.u0, velocity.u1) == (j0, j1)


def test_zero_current_has_no_direction():
    with pytest.raises(ZeroCurrent):
        four_velocity(0.0, 0.0)


def test_fields_interpolate_linearly_in_time():
    grid = Grid(0.0, 1.0, 16)
    fields = FieldHistory(
        grid, np.array([0.0, 1.0]), np.stack([np.zeros(16), np.full(16, 2.0)]), np.zeros((2, 16))
    )
    assert fields.at(0.25).density == pytest.approx(np.full(16, 0.5))
    density, current = fields.sample(0.5, 0.3)
    assert density == pytest.approx(1.0)
    assert current == pytest.approx(0.0)


def test_fields_need_equal_spacing():
    grid = Grid(0.0, 1.0, 16)
    with pytest.raises(ValueError, match="equally spaced"):
        FieldHistory(grid, np.array([0.0, 1.0, 3.0]), np.zeros((3, 16)), np.zeros((3, 16)))


def test_branches_add_their_densities(spreading):
    moved = evolve_history(make_gaussian(spreading.grid, 3.0, 1.0), 0.01, 100)
    fields = FieldHistory.from_branches([spreading, moved], [0.25, 0.75])
    expected = 0.25 * spreading.final.density + 0.75 * moved.final.density
    assert fields.density[-1] == pytest.approx(expected)
    assert spreading.grid.integrate(fields.density[-1]) == pytest.approx(1.0)


def test_misaligned_histories_are_rejected(spreading):
    shorter = evolve_history(spreading.initial, 0.01, 50)
    with pytest.raises(GridMismatch):
        FieldHistory.causally_symmetric(spreading, shorter)


def test_centre_trajectory_stays_put(spreading):
    trajectory = bohm_trajectory(spreading, 0.0)
    assert np.max(np.abs(trajectory.positions)) < 1e-8


def test_trajectories_follow_the_spreading(spreading):
    trajectory = bohm_trajectory(spreading, 1.0)
    assert trajectory.times[-1] == pytest.approx(1.0)
    assert trajectory.position_at(1.0) == pytest.approx(math.sqrt(2.0), abs=1e-3)


def test_trajectory_refuses_nodes_and_the_outside(spreading):
    with pytest.raises(NodeEncounter):
        bohm_trajectory(spreading, 15.0)
    with pytest.raises(GridExit):
        bohm_trajectory(spreading, 25.0)


def test_trajectories_never_cross(grid):
    history = evolve_history(make_gaussian(grid, 0.5, 1.0, k=1.0), 0.01, 100)
    times = np.linspace(0.0, 1.0, 101)
    paths = np.array(
        [bohm_trajectory(history, x0).position_at(times) for x0 in np.linspace(-2.0, 3.0, 11)]
    )
    assert np.all(np.diff(paths, axis=0) > 0)


def test_ensemble_matches_single_trajectories(spreading):
    starts = [-1.0, 0.0, 0.5, 1.0]
    finals = bohm_ensemble(spreading, starts, rtol=1e-9, atol=1e-11)
    for x0, final in zip(starts, finals, strict=True):
        assert final == pytest.approx(bohm_trajectory(spreading, x0).positions[-1], abs=1e-6)


def test_worldline_reduces_to_the_bohm_trajectory(grid):
    hist_i = evolve_history(make_gaussian(grid, 0.5, 1.0, k=1.0), 0.01, 100)
    hist_f = evolve_final_backward(hist_i.final, 0.01, 100)
    line = cs_worldline(hist_i, hist_f, 0.5, 0.0)
    trajectory = bohm_trajectory(hist_i, 0.5)
    assert line.completed
    assert line.reversal_count == 0
    assert line.times[-1] == pytest.approx(1.0, abs=1e-9)
    assert np.max(np.abs(line.positions - trajectory.position_at(line.times))) < 1e-6


def test_worldline_histogram_counts_every_sample(grid):
    hist_i = evolve_history(make_gaussian(grid, 0.0, 1.0, k=2.0), 0.01, 50)
    hist_f = evolve_final_backward(hist_i.final, 0.01, 50)
    line = cs_worldline(hist_i, hist_f, 0.3, 0.0)
    histogram = line.classification_histogram()
    assert set(histogram) == {"timelike", "lightlike", "spacelike"}
    assert sum(histogram.values()) == len(line.times)


def test_worldline_refuses_starts_outside_the_history(spreading):
    fields = FieldHistory.standard(spreading)
    with pytest.raises(GridExit):
        worldline(fields, 0.0, 2.0)


def test_witness_doubles_back():
    witness = doubling_back_witness()
    fields = FieldHistory.causally_symmetric(witness.hist_i, witness.hist_f)
    j0, _ = fields.sample(witness.t0, witness.x0)
    assert witness.t0 == pytest.approx(2.0)
    assert j0 < 0
    assert fields.density.min() < 0
    line = worldline(fields, witness.x0, witness.t0)
    assert line.reversal_count >= 1
    assert reversals_on_zero_crossings(fields, line)
    for event in line.reversal_events:
        assert event.offset_to_end == pytest.approx(4.0 - event.t)


def test_control_never_doubles_back():
    witness = doubling_back_witness(weight=0.0)
    fields = FieldHistory.causally_symmetric(witness.hist_i, witness.hist_f)
    assert fields.density.min() >= -1e-12
    line = worldline(fields, witness.x0, witness.t0)
    assert line.completed
    assert line.reversal_count == 0
