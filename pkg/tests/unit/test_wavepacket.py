import math

import numpy as np
import pytest

from retrobohm.exceptions import (
    GridMismatch,
    MissingSpin,
    PacketTooWide,
    UnstableStep,
    ZeroOverlap,
)
from retrobohm.physics import (
    X_AXIS,
    Y_AXIS,
    Z_AXIS,
    FieldPair,
    Grid,
    GridWavefunction,
    Propagator,
    TwoStateContext,
    continuity_residual,
    current_cs,
    current_standard,
    eigenspinor,
    evolve,
    evolve_final_backward,
    evolve_history,
    kick,
    make_gaussian,
    spin_density,
    weak_spin_value,
)


@pytest.mark.parametrize(("x_min", "x_max", "n_points"), [(0, 1, 8), (1, 1, 64), (2, 1, 64)])
def test_grid_rejects_bad_layouts(x_min, x_max, n_points):
    with pytest.raises(ValueError):
        Grid(x_min, x_max, n_points)


def test_grid_is_periodic_without_the_right_edge():
    grid = Grid(-1.0, 1.0, 16)
    assert grid.x[0] == -1.0
    assert grid.x[-1] == pytest.approx(1.0 - grid.dx)
    assert grid.integrate(np.ones(16)) == pytest.approx(2.0)


def test_gaussian_moments(grid):
    psi = make_gaussian(grid, x0=1.5, sigma=1.2, k=3.0)
    assert psi.norm == pytest.approx(1.0, abs=1e-12)
    assert psi.mean_position() == pytest.approx(1.5, abs=1e-10)
    assert psi.width() == pytest.approx(1.2, abs=1e-8)
    assert psi.mean_momentum() == pytest.approx(3.0, abs=1e-8)


def test_gaussian_must_fit_the_grid():
    with pytest.raises(PacketTooWide):
        make_gaussian(Grid(-5.0, 5.0, 256), x0=0.0, sigma=3.0)


def test_amplitudes_must_match_the_grid(grid):
    with pytest.raises(GridMismatch):
        GridWavefunction(grid, np.ones(grid.n_points + 1))


def test_snapshot_restores_the_wavefunction(grid):
    psi = make_gaussian(grid, -2.0, 1.0, 0.5, eigenspinor(X_AXIS, "+"), time=0.25)
    restored = GridWavefunction.from_snapshot(psi.to_snapshot())
    assert restored.grid == psi.grid
    assert restored.time == psi.time
    assert np.array_equal(restored.amplitudes, psi.amplitudes)
    assert np.array_equal(restored.spin.amplitudes, psi.spin.amplitudes)


def test_free_packet_spreads_and_moves(grid):
    psi = make_gaussian(grid, x0=0.0, sigma=1.0, k=1.0)
    final = evolve(psi, 0.01, 200)
    assert final.time == pytest.approx(2.0)
    assert final.width() == pytest.approx(math.sqrt(5.0), abs=1e-6)
    assert final.mean_position() == pytest.approx(2.0, abs=1e-6)
    assert final.mean_momentum() == pytest.approx(1.0, abs=1e-8)


def test_norm_is_conserved_over_many_steps():
    grid = Grid(-20.0, 20.0, 512)
    psi = make_gaussian(grid, x0=2.0, sigma=1.0)
    final = evolve(psi, 0.001, 10_000, 0.5 * grid.x**2)
    assert abs(final.norm - psi.norm) < 1e-8
    # A displaced ground state oscillates with period 2 pi.
    assert final.mean_position() == pytest.approx(2.0 * math.cos(10.0), abs=1e-4)


def test_forward_then_backward_returns_the_initial_state(grid):
    psi = make_gaussian(grid, x0=-1.0, sigma=1.0, k=1.0)
    history = evolve_history(psi, 0.01, 200, stride=20)
    back = evolve_final_backward(history.final, 0.01, 200, stride=20)
    assert back.times == pytest.approx(history.times)
    assert np.max(np.abs(back.initial.amplitudes - psi.amplitudes)) < 1e-10


def test_history_keeps_every_stride(grid):
    psi = make_gaussian(grid, 0.0, 1.0)
    history = evolve_history(psi, 0.01, 30, stride=10)
    assert len(history) == 4
    assert history.times == pytest.approx([0.0, 0.1, 0.2, 0.3])
    assert history.initial is history[0]
    with pytest.raises(ValueError, match="divide"):
        evolve_history(psi, 0.01, 30, stride=7)


def test_propagator_refuses_unstable_steps(grid):
    with pytest.raises(UnstableStep):
        Propagator(grid, 0.0)
    with pytest.raises(UnstableStep):
        Propagator(grid, 0.01, np.full(grid.n_points, 1e4))


def test_reaching_the_edge_is_refused():
    grid = Grid(-10.0, 10.0, 256)
    psi = make_gaussian(grid, x0=0.0, sigma=1.0, k=8.0)
    with pytest.raises(UnstableStep, match="edges"):
        evolve(psi, 0.01, 100)


def test_wrapping_around_the_periodic_grid_is_refused():
    # Crosses the edge near t = 1 and is back in the middle, tails clean, at t = 2.
    grid = Grid(-20.0, 20.0, 2048)
    psi = make_gaussian(grid, x0=0.0, sigma=1.0, k=20.0)
    with pytest.raises(UnstableStep, match="edges") as error:
        evolve(psi, 0.001, 2000)
    assert "t=2" not in str(error.value)
    with pytest.raises(UnstableStep, match="edges"):
        evolve_final_backward(psi.with_amplitudes(psi.amplitudes, time=2.0), 0.001, 2000)


def test_standard_current_of_a_moving_packet():
    grid = Grid(-10.0, 10.0, 4096)
    psi = make_gaussian(grid, x0=0.0, sigma=1.0, k=5.0)
    fields = current_standard(psi)
    expected = 5.0 * psi.density
    assert np.max(np.abs(fields.current - expected)) < 1e-3 * np.max(expected)


def test_causally_symmetric_fields_reduce_to_standard(grid):
    psi = make_gaussian(grid, x0=0.5, sigma=1.0, k=2.0)
    symmetric = current_cs(psi, psi)
    standard = current_standard(psi)
    assert np.max(np.abs(symmetric.density - standard.density)) < 1e-12
    assert np.max(np.abs(symmetric.current - standard.current)) < 1e-12


def test_causally_symmetric_density_integrates_to_one(grid):
    psi_i = make_gaussian(grid, x0=-1.0, sigma=1.0, k=1.0)
    psi_f = make_gaussian(grid, x0=1.0, sigma=1.5, k=-2.0)
    fields = current_cs(psi_i, psi_f)
    assert grid.integrate(fields.density) == pytest.approx(1.0, abs=1e-12)


def test_causally_symmetric_fields_need_overlap(grid):
    psi_i = make_gaussian(grid, x0=-10.0, sigma=1.0)
    psi_f = make_gaussian(grid, x0=10.0, sigma=1.0)
    with pytest.raises(ZeroOverlap):
        current_cs(psi_i, psi_f)


def test_causally_symmetric_fields_need_one_time(grid):
    psi_i = make_gaussian(grid, 0.0, 1.0)
    psi_f = make_gaussian(grid, 0.0, 1.0, time=0.5)
    with pytest.raises(GridMismatch):
        current_cs(psi_i, psi_f)


def _max_residual(n_points: int, dt: float, *, symmetric: bool) -> float:
    grid = Grid(-20.0, 20.0, n_points)
    psi_i = make_gaussian(grid, x0=-1.0, sigma=1.0, k=2.0)
    hist_i = evolve_history(psi_i, dt, 2)
    if symmetric:
        psi_f = make_gaussian(grid, x0=0.5, sigma=1.2, k=-0.5, time=2 * dt)
        hist_f = evolve_final_backward(psi_f, dt, 2)
        pairs = [current_cs(a, b) for a, b in zip(hist_i, hist_f, strict=True)]
    else:
        pairs = [current_standard(psi) for psi in hist_i]
    return float(np.max(np.abs(continuity_residual(*pairs))))


@pytest.mark.parametrize("symmetric", [False, True])
def test_continuity_residual_converges(symmetric):
    coarse = _max_residual(512, 0.01, symmetric=symmetric)
    fine = _max_residual(1024, 0.005, symmetric=symmetric)
    assert coarse / fine >= 3.0


def test_continuity_residual_needs_equal_spacing(grid):
    zeros = np.zeros(grid.n_points)
    pairs = [FieldPair(grid, zeros, zeros, t) for t in (0.0, 0.1, 0.3)]
    with pytest.raises(GridMismatch, match="equally"):
        continuity_residual(*pairs)


def test_kick_shifts_the_momentum(grid):
    psi = make_gaussian(grid, 0.0, 1.0, k=0.5)
    assert kick(psi, 2.0).mean_momentum() == pytest.approx(2.5, abs=1e-8)


def test_spin_density_integrates_to_the_weak_value(grid):
    pre = eigenspinor(Z_AXIS, "+")
    post = eigenspinor(X_AXIS, "+")
    psi_i = make_gaussian(grid, 0.0, 1.0, k=1.0, spin=pre)
    psi_f = make_gaussian(grid, 0.5, 1.0, spin=post)
    ctx = TwoStateContext(pre, post)
    for h in (X_AXIS, Y_AXIS, Z_AXIS):
        total = grid.integrate(spin_density(psi_i, psi_f, h))
        assert total == pytest.approx(weak_spin_value(ctx, h), abs=1e-10)


def test_spin_density_needs_spin(grid):
    psi = make_gaussian(grid, 0.0, 1.0)
    with pytest.raises(MissingSpin):
        spin_density(psi, psi, Z_AXIS)
