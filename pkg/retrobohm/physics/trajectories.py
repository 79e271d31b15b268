"""Provide particle paths: Bohm trajectories and causally symmetric worldlines.

A Bohm trajectory follows ``dx/dt = j / |psi|^2``. A causally symmetric worldline is
an integral curve of the 4-current ``(j0, j1)`` in the ``(t, x)`` plane, parameterized
by ``dt/dl = j0, dx/dl = j1``; where ``j0`` turns negative the path runs backward in
``t``. Fields between stored slices are interpolated linearly in time and space.

"""
from __future__ import annotations

import logging
import math
from collections import Counter
from collections.abc import Callable, Sequence
from dataclasses import dataclass, field
from enum import Enum

import numpy as np
from scipy.integrate import solve_ivp

from ..const import (
    ATOL,
    ENSEMBLE_ATOL,
    ENSEMBLE_RTOL,
    EPS_DENSITY,
    EPS_OVERLAP,
    LAMBDA_CAP_FACTOR,
    LIGHTLIKE_TOLERANCE,
    RTOL,
)
from ..exceptions import GridExit, GridMismatch, NodeEncounter, UnstableStep, ZeroCurrent
from .wavepacket import (
    TIME_TOLERANCE,
    FieldPair,
    Grid,
    WavefunctionHistory,
    current_cs,
    current_standard,
    evolve_final_backward,
    evolve_history,
    make_gaussian,
)

log = logging.getLogger(__name__)


class Classification(Enum):
    """The causal character of a 4-current."""

    TIMELIKE = "timelike"
    LIGHTLIKE = "lightlike"
    SPACELIKE = "spacelike"


@dataclass(frozen=True, eq=False)
class FieldHistory:
    """Density and current slices at equally spaced, ascending times on one grid.

    :ivar grid Grid: The grid every slice lives on.
    :ivar times numpy.ndarray: The slice times.
    :ivar density numpy.ndarray: Densities, one row per time.
    :ivar current numpy.ndarray: Currents, one row per time.

    """

    grid: Grid
    times: np.ndarray
    density: np.ndarray
    current: np.ndarray

    @classmethod
    def causally_symmetric(
        cls,
        hist_i: WavefunctionHistory,
        hist_f: WavefunctionHistory,
        eps_overlap: float = EPS_OVERLAP,
    ) -> FieldHistory:
        """Build ``(j0, j1)`` from a forward initial and a backward final history."""
        if len(hist_i) != len(hist_f) or not np.allclose(
            hist_i.times, hist_f.times, rtol=0, atol=TIME_TOLERANCE
        ):
            msg = (
                f"Forward history ({len(hist_i)} slices over [{hist_i.times[0]:g},"
                f" {hist_i.times[-1]:g}]) and backward history ({len(hist_f)} slices"
                f" over [{hist_f.times[0]:g}, {hist_f.times[-1]:g}]) are not aligned"
            )
            raise GridMismatch(msg)
        return cls.from_pairs(
            [
                current_cs(psi_i, psi_f, eps_overlap)
                for psi_i, psi_f in zip(hist_i, hist_f, strict=True)
            ]
        )

    @classmethod
    def from_branches(
        cls, histories: Sequence[WavefunctionHistory], weights: Sequence[float]
    ) -> FieldHistory:
        """Build standard fields of a state whose branches have orthogonal spin parts.

        Orthogonal internal states remove every cross term, so the density and current
        are the weighted sums of the branch densities and currents.

        :param histories: One spatial history per branch, all on the same times.
        :param weights: The branch weights ``|c_m|^2``.

        """
        if len(histories) != len(weights) or not histories:
            msg = f"Got {len(histories)} branch histories and {len(weights)} weights"
            raise ValueError(msg)
        branches = [cls.standard(history) for history in histories]
        first = branches[0]
        for branch in branches[1:]:
            if branch.grid != first.grid or not np.allclose(
                branch.times, first.times, rtol=0, atol=TIME_TOLERANCE
            ):
                msg = "Branch histories do not share a grid and time axis"
                raise GridMismatch(msg)
        weights = np.asarray(weights, dtype=float)
        return cls(
            first.grid,
            first.times,
            np.tensordot(weights, np.stack([branch.density for branch in branches]), 1),
            np.tensordot(weights, np.stack([branch.current for branch in branches]), 1),
        )

    @classmethod
    def from_pairs(cls, pairs: Sequence[FieldPair]) -> FieldHistory:
        """Stack field pairs that share a grid."""
        grid = pairs[0].grid
        if any(pair.grid != grid for pair in pairs):
            msg = "Field pairs do not share a grid"
            raise GridMismatch(msg)
        return cls(
            grid,
            np.array([pair.time for pair in pairs]),
            np.stack([pair.density for pair in pairs]),
            np.stack([pair.current for pair in pairs]),
        )

    @classmethod
    def standard(cls, history: WavefunctionHistory) -> FieldHistory:
        """Build ``(|psi|^2, j)`` from a forward history."""
        return cls.from_pairs([current_standard(psi) for psi in history])

    def __post_init__(self):
        """Validate shapes and time spacing."""
        times = np.array(self.times, dtype=float)
        density = np.array(self.density, dtype=float)
        current = np.array(self.current, dtype=float)
        shape = (len(times), self.grid.n_points)
        if density.shape != shape or current.shape != shape:
            msg = (
                f"Expected fields of shape {shape}, got {density.shape} and"
                f" {current.shape}"
            )
            raise GridMismatch(msg)
        if len(times) > 1:
            steps = np.diff(times)
            if np.any(steps <= 0) or not np.allclose(steps, steps[0], rtol=1e-6):
                msg = "Field slices must be equally spaced in ascending time"
                raise ValueError(msg)
        for name, values in (("times", times), ("density", density), ("current", current)):
            values.flags.writeable = False
            object.__setattr__(self, name, values)

    @property
    def density_scale(self) -> float:
        """Return the largest ``|density|`` over the whole history."""
        return float(np.max(np.abs(self.density)))

    @property
    def dt(self) -> float:
        """Return the spacing between slices."""
        if len(self.times) < 2:
            return 0.0
        return float(self.times[1] - self.times[0])

    @property
    def magnitude_scale(self) -> float:
        """Return the largest ``sqrt(density^2 + current^2)`` over the whole history."""
        return float(np.max(np.hypot(self.density, self.current)))

    @property
    def t_end(self) -> float:
        """Return the time of the last slice."""
        return float(self.times[-1])

    @property
    def t_start(self) -> float:
        """Return the time of the first slice."""
        return float(self.times[0])

    def at(self, t: float) -> FieldPair:
        """Return the fields at time ``t``, interpolated linearly between slices."""
        if len(self.times) == 1:
            return FieldPair(self.grid, self.density[0], self.current[0], t)
        position = (t - self.times[0]) / self.dt
        index = int(np.clip(math.floor(position), 0, len(self.times) - 2))
        weight = float(np.clip(position - index, 0.0, 1.0))
        density = (1 - weight) * self.density[index] + weight * self.density[index + 1]
        current = (1 - weight) * self.current[index] + weight * self.current[index + 1]
        return FieldPair(self.grid, density, current, t)

    def sample(self, t: float, x: float | np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """Return ``(density, current)`` at time ``t`` and positions ``x``."""
        fields = self.at(t)
        grid_x = self.grid.x
        return np.interp(x, grid_x, fields.density), np.interp(x, grid_x, fields.current)


@dataclass(frozen=True)
class FourVelocity:
    """The direction of a 4-current.

    :ivar u0 float: Time component; normalized only when ``normalized`` is set.
    :ivar u1 float: Space component.
    :ivar classification Classification: The causal character of the current.
    :ivar rest_density float | None: ``sqrt(j0^2 - j1^2)`` for timelike currents.
    :ivar normalized bool: Whether ``u0^2 - u1^2 = 1``.

    """

    u0: float
    u1: float
    classification: Classification
    rest_density: float | None
    normalized: bool


@dataclass(frozen=True)
class ReversalEvent:
    """A point on a worldline where ``j0`` changes sign.

    :ivar parameter float: The curve parameter at the event.
    :ivar t float: The coordinate time.
    :ivar x float: The position.
    :ivar offset_to_end float: ``t_f - t``, how long before the final boundary it
        happens.

    """

    parameter: float
    t: float
    x: float
    offset_to_end: float


@dataclass(frozen=True, eq=False)
class Trajectory:
    """A Bohm trajectory ``x(t)``."""

    x0: float
    t0: float
    times: np.ndarray
    positions: np.ndarray
    interpolant: Callable | None = field(default=None, repr=False)

    @property
    def samples(self) -> list[tuple[float, float]]:
        """Return the samples as ``(t, x)`` pairs."""
        return list(zip(self.times.tolist(), self.positions.tolist(), strict=True))

    def position_at(self, t: float | np.ndarray) -> float | np.ndarray:
        """Return the position at time ``t`` inside the integrated range."""
        if self.interpolant is not None:
            return self.interpolant(t)[0]
        return np.interp(t, self.times, self.positions)


@dataclass(frozen=True, eq=False)
class WorldLine:
    """A causally symmetric worldline in ``(t, x)``.

    Time need not be monotone along the curve; ``reversal_events`` records every
    change of direction.

    """

    parameters: np.ndarray
    times: np.ndarray
    positions: np.ndarray
    j0: np.ndarray
    j1: np.ndarray
    reversal_events: list[ReversalEvent]
    completed: bool

    @property
    def reversal_count(self) -> int:
        """Return the number of ``j0`` sign changes."""
        return len(self.reversal_events)

    @property
    def samples(self) -> list[tuple[float, float, float]]:
        """Return the samples as ``(parameter, t, x)`` triples."""
        return list(
            zip(
                self.parameters.tolist(),
                self.times.tolist(),
                self.positions.tolist(),
                strict=True,
            )
        )

    def classification_histogram(
        self, tolerance: float = LIGHTLIKE_TOLERANCE
    ) -> dict[str, int]:
        """Count samples by the causal character of the current there."""
        counts = Counter({kind.value: 0 for kind in Classification})
        for j0, j1 in zip(self.j0, self.j1, strict=True):
            if j0 == 0 and j1 == 0:
                continue
            counts[four_velocity(j0, j1, tolerance).classification.value] += 1
        return dict(counts)


@dataclass(frozen=True, eq=False)
class DoublingBackWitness:
    """A boundary pair whose causally symmetric density goes negative, and a start point.

    :ivar hist_i WavefunctionHistory: The initial packet evolved forward.
    :ivar hist_f WavefunctionHistory: The final state evolved backward.
    :ivar x0 float: The start position, at the most negative ``j0`` near the crossing.
    :ivar t0 float: The start time, when the two packets cross.

    """

    hist_i: WavefunctionHistory
    hist_f: WavefunctionHistory
    x0: float
    t0: float


def _as_fields(history: FieldHistory | WavefunctionHistory) -> FieldHistory:
    if isinstance(history, FieldHistory):
        return history
    return FieldHistory.standard(history)


def _event(function: Callable, *, terminal: bool, direction: float = 0) -> Callable:
    function.terminal = terminal
    function.direction = direction
    return function


def bohm_ensemble(
    history: FieldHistory | WavefunctionHistory,
    x0s: Sequence[float] | np.ndarray,
    *,
    t_end: float | None = None,
    eps_density: float = EPS_DENSITY,
    rtol: float = ENSEMBLE_RTOL,
    atol: float = ENSEMBLE_ATOL,
) -> np.ndarray:
    """Transport many starting positions along the Bohm velocity field at once.

    All seeds are integrated as one vectorized system. Seeds whose density drops below
    the threshold stop moving rather than aborting the whole ensemble.

    :param history: The forward fields, or a wavefunction history to derive them from.
    :param x0s: The starting positions at the history's first time.
    :param t_end: Where to stop; the history's last time by default.

    :returns: The positions at ``t_end``, in input order.

    """
    fields = _as_fields(history)
    x0s = np.asarray(x0s, dtype=float)
    t_end = fields.t_end if t_end is None else t_end
    if x0s.size == 0 or t_end == fields.t_start:
        return x0s.copy()
    threshold = eps_density * fields.density_scale
    left, right = fields.grid.x[0], fields.grid.x[-1]

    def velocity(t: float, x: np.ndarray) -> np.ndarray:
        density, current = fields.sample(t, x)
        moving = density > threshold
        return np.where(moving, current / np.where(moving, density, 1.0), 0.0)

    solution = solve_ivp(
        velocity,
        (fields.t_start, t_end),
        x0s,
        rtol=rtol,
        atol=atol,
        max_step=fields.dt or np.inf,
    )
    if not solution.success:
        msg = f"Ensemble integration failed: {solution.message}"
        raise UnstableStep(msg)
    final = solution.y[:, -1]
    outside = np.count_nonzero((final < left) | (final > right))
    if outside:
        msg = f"{outside} of {final.size} ensemble members left the grid"
        raise GridExit(msg)
    log.debug(f"Transported {final.size} seeds to t={t_end:g} in {solution.nfev} evaluations")
    return final


def bohm_trajectory(
    history: FieldHistory | WavefunctionHistory,
    x0: float,
    *,
    t0: float | None = None,
    t_end: float | None = None,
    eps_density: float = EPS_DENSITY,
    rtol: float = RTOL,
    atol: float = ATOL,
) -> Trajectory:
    """Integrate ``dx/dt = j / |psi|^2`` from ``(t0, x0)``.

    :param history: The forward fields, or a wavefunction history to derive them from.
    :param x0: The starting position.
    :param t0: The start time; the history's first time by default.
    :param t_end: The end time; the history's last time by default.
    :param eps_density: Densities at or below this fraction of the history's largest
        density count as nodes.
    :param rtol: Relative tolerance of the adaptive integrator.
    :param atol: Absolute tolerance of the adaptive integrator.

    :returns: The trajectory, with a dense interpolant.

    """
    fields = _as_fields(history)
    t0 = fields.t_start if t0 is None else t0
    t_end = fields.t_end if t_end is None else t_end
    threshold = eps_density * fields.density_scale
    left, right = fields.grid.x[0], fields.grid.x[-1]
    if not fields.t_start <= t0 <= t_end <= fields.t_end:
        msg = f"[{t0:g}, {t_end:g}] is not inside [{fields.t_start:g}, {fields.t_end:g}]"
        raise GridExit(msg)
    if not left <= x0 <= right:
        msg = f"x0={x0:g} is outside the grid [{left:g}, {right:g}]"
        raise GridExit(msg)
    density, _ = fields.sample(t0, x0)
    if density <= threshold:
        msg = f"Density {float(density):.3e} at x0={x0:g} is below {threshold:.3e}"
        raise NodeEncounter(msg)
    if t_end == t0:
        return Trajectory(x0, t0, np.array([t0]), np.array([x0]))

    def velocity(t: float, y: np.ndarray) -> list[float]:
        density, current = fields.sample(t, y[0])
        return [current / max(density, threshold)]

    def node(t: float, y: np.ndarray) -> float:
        return fields.sample(t, y[0])[0] - threshold

    def exit_left(_: float, y: np.ndarray) -> float:
        return y[0] - left

    def exit_right(_: float, y: np.ndarray) -> float:
        return right - y[0]

    solution = solve_ivp(
        velocity,
        (t0, t_end),
        [x0],
        rtol=rtol,
        atol=atol,
        max_step=fields.dt or np.inf,
        dense_output=True,
        events=[
            _event(node, terminal=True, direction=-1),
            _event(exit_left, terminal=True, direction=-1),
            _event(exit_right, terminal=True, direction=-1),
        ],
    )
    if solution.status == 1:
        t_hit = solution.t[-1]
        if solution.t_events[0].size:
            msg = f"Trajectory from x0={x0:g} reached a node at t={t_hit:.6g}"
            raise NodeEncounter(msg)
        msg = f"Trajectory from x0={x0:g} left the grid at t={t_hit:.6g}"
        raise GridExit(msg)
    if not solution.success:
        msg = f"Trajectory integration from x0={x0:g} failed: {solution.message}"
        raise UnstableStep(msg)
    return Trajectory(x0, t0, solution.t, solution.y[0], solution.sol)


def cs_worldline(
    hist_i: WavefunctionHistory,
    hist_f: WavefunctionHistory,
    x0: float,
    t0: float,
    *,
    eps_overlap: float = EPS_OVERLAP,
    **kwargs: float,
) -> WorldLine:
    """Integrate the causally symmetric worldline through ``(t0, x0)``.

    :param hist_i: The initial wavefunction evolved forward.
    :param hist_f: The final wavefunction evolved backward over the same times.
    :param x0: The start position.
    :param t0: The start time.
    :param eps_overlap: The overlap guard for the 4-current normalization.
    :param kwargs: Passed on to :func:`worldline`.

    :returns: The worldline.

    """
    fields = FieldHistory.causally_symmetric(hist_i, hist_f, eps_overlap)
    return worldline(fields, x0, t0, **kwargs)


def doubling_back_witness(
    grid: Grid | None = None,
    *,
    dt: float = 0.01,
    duration: float = 4.0,
    offset: float = 4.0,
    sigma: float = 2.0,
    k: float = 2.0,
    weight: float = 2.0,
    search_half_width: float = 1.5,
    stride: int = 1,
) -> DoublingBackWitness:
    """Build a boundary pair with a region of negative ``j0`` and a start point in it.

    The initial packet starts at ``-offset`` moving right with momentum ``k``. A second
    packet starts at ``+offset`` moving left, so the two cross at ``x = 0`` halfway
    through the run. The final state is the normalized sum of the evolved initial
    packet and ``weight`` times the evolved second packet. Where the two overlap, the
    interference term outweighs ``|psi_i|^2`` and ``j0`` goes negative in bands. The
    start point is the most negative ``j0`` within ``search_half_width`` of the crossing
    at the crossing time.

    :param grid: The grid; ``Grid(-30, 30, 2048)`` by default.
    :param dt: The evolution step.
    :param duration: The time between the two boundaries.

    :returns: The histories and start point.

    """
    grid = grid or Grid(-30.0, 30.0, 2048)
    steps = round(duration / dt)
    if steps % (2 * stride):
        msg = f"{steps} steps must split into two equal halves of whole strides of {stride}"
        raise ValueError(msg)
    psi_i = make_gaussian(grid, -offset, sigma, k)
    partner = make_gaussian(grid, offset, sigma, -k)
    hist_i = evolve_history(psi_i, dt, steps, stride=stride)
    partner_final = evolve_history(partner, dt, steps, stride=steps).final
    final = hist_i.final.with_amplitudes(
        hist_i.final.amplitudes + weight * partner_final.amplitudes
    ).normalized()
    hist_f = evolve_final_backward(final, dt, steps, stride=stride)
    middle = len(hist_i) // 2
    t0 = float(hist_i.times[middle])
    j0 = current_cs(hist_i[middle], hist_f[middle]).density
    window = np.abs(grid.x) <= search_half_width
    candidates = np.where(window, j0, np.inf)
    index = int(np.argmin(candidates))
    log.debug(f"Witness start x0={grid.x[index]:.6g} t0={t0:g} j0={j0[index]:.6g}")
    return DoublingBackWitness(hist_i, hist_f, float(grid.x[index]), t0)


def four_velocity(
    j0: float, j1: float, tolerance: float = LIGHTLIKE_TOLERANCE
) -> FourVelocity:
    """Return the direction of the 4-current ``(j0, j1)`` with ``c = 1``.

    Timelike currents are normalized to ``u0^2 - u1^2 = 1`` with rest density
    ``sqrt(j0^2 - j1^2)``. Lightlike and spacelike currents are returned as given and
    flagged unnormalized. ``|j0^2 - j1^2| <= tolerance (j0^2 + j1^2)`` counts as
    lightlike.

    """
    j0 = float(j0)
    j1 = float(j1)
    if j0 == 0 and j1 == 0:
        msg = "The zero 4-current has no direction"
        raise ZeroCurrent(msg)
    interval = j0 * j0 - j1 * j1
    if abs(interval) <= tolerance * (j0 * j0 + j1 * j1):
        return FourVelocity(j0, j1, Classification.LIGHTLIKE, None, normalized=False)
    if interval < 0:
        return FourVelocity(j0, j1, Classification.SPACELIKE, None, normalized=False)
    rest_density = math.sqrt(interval)
    return FourVelocity(
        j0 / rest_density,
        j1 / rest_density,
        Classification.TIMELIKE,
        rest_density,
        normalized=True,
    )


def worldline(
    fields: FieldHistory,
    x0: float,
    t0: float,
    *,
    eps_density: float = EPS_DENSITY,
    rtol: float = RTOL,
    atol: float = ATOL,
    lambda_cap_factor: float = LAMBDA_CAP_FACTOR,
) -> WorldLine:
    """Integrate ``dt/dl = j0, dx/dl = j1`` through causally symmetric fields.

    The curve runs until ``t`` reaches the last slice. Every zero of ``j0`` along the
    way is recorded as a reversal. The parameter is capped at ``lambda_cap_factor``
    times the naive parameter span; a capped curve is returned with ``completed``
    unset.

    :param fields: The ``(j0, j1)`` history.
    :param x0: The start position.
    :param t0: The start time.
    :param eps_density: Currents with magnitude at or below this fraction of the
        largest ``|j0|`` count as nodes.

    :returns: The worldline.

    """
    t_start, t_end = fields.t_start, fields.t_end
    left, right = fields.grid.x[0], fields.grid.x[-1]
    threshold = eps_density * fields.density_scale
    if not t_start <= t0 <= t_end or not left <= x0 <= right:
        msg = f"({t0:g}, {x0:g}) is outside the field history"
        raise GridExit(msg)
    j0_start, j1_start = (float(value) for value in fields.sample(t0, x0))
    if abs(j0_start) <= threshold:
        msg = f"|j0| = {abs(j0_start):.3e} at ({t0:g}, {x0:g}) is below {threshold:.3e}"
        raise NodeEncounter(msg)
    span = lambda_cap_factor * max(t_end - t0, fields.dt) / abs(j0_start)
    max_step = (fields.dt or (t_end - t_start) or 1.0) / fields.magnitude_scale

    def flow(_: float, y: np.ndarray) -> list[float]:
        j0, j1 = fields.sample(y[0], y[1])
        return [float(j0), float(j1)]

    def reversal(_: float, y: np.ndarray) -> float:
        return float(fields.sample(y[0], y[1])[0])

    def node(_: float, y: np.ndarray) -> float:
        j0, j1 = fields.sample(y[0], y[1])
        return math.hypot(j0, j1) - threshold

    def reached_end(_: float, y: np.ndarray) -> float:
        return y[0] - t_end

    def before_start(_: float, y: np.ndarray) -> float:
        return y[0] - t_start

    def exit_left(_: float, y: np.ndarray) -> float:
        return y[1] - left

    def exit_right(_: float, y: np.ndarray) -> float:
        return right - y[1]

    events = [
        _event(reversal, terminal=False),
        _event(node, terminal=True, direction=-1),
        _event(reached_end, terminal=True, direction=1),
        _event(before_start, terminal=True, direction=-1),
        _event(exit_left, terminal=True, direction=-1),
        _event(exit_right, terminal=True, direction=-1),
    ]
    if t0 == t_end and j0_start > 0:
        return WorldLine(
            np.array([0.0]),
            np.array([t0]),
            np.array([x0]),
            np.array([j0_start]),
            np.array([j1_start]),
            [],
            completed=True,
        )
    solution = solve_ivp(
        flow,
        (0.0, span),
        [t0, x0],
        rtol=rtol,
        atol=atol,
        max_step=max_step,
        events=events,
    )
    t_hit = solution.y[0, -1]
    if solution.t_events[1].size:
        msg = f"Worldline from ({t0:g}, {x0:g}) reached a node at t={t_hit:.6g}"
        raise NodeEncounter(msg)
    if solution.t_events[3].size or solution.t_events[4].size or solution.t_events[5].size:
        msg = f"Worldline from ({t0:g}, {x0:g}) left the field history at t={t_hit:.6g}"
        raise GridExit(msg)
    if not solution.success:
        msg = f"Worldline integration from ({t0:g}, {x0:g}) failed: {solution.message}"
        raise UnstableStep(msg)
    completed = bool(solution.t_events[2].size)
    if not completed:
        log.warning(
            f"Worldline from ({t0:g}, {x0:g}) stopped at the parameter cap {span:.4g}"
            f" with t={t_hit:.6g}"
        )
    reversal_events = [
        ReversalEvent(float(parameter), float(point[0]), float(point[1]), t_end - float(point[0]))
        for parameter, point in zip(
            solution.t_events[0], solution.y_events[0], strict=True
        )
    ]
    j0_samples = np.empty(solution.t.size)
    j1_samples = np.empty(solution.t.size)
    for index, (t, x) in enumerate(solution.y.T):
        j0_samples[index], j1_samples[index] = fields.sample(t, x)
    log.debug(
        f"Worldline from ({t0:g}, {x0:g}): {solution.t.size} samples,"
        f" {len(reversal_events)} reversals"
    )
    return WorldLine(
        solution.t,
        solution.y[0],
        solution.y[1],
        j0_samples,
        j1_samples,
        reversal_events,
        completed,
    )
