"""Provide 1D grid wavefunctions, their split-step evolution and their currents.

Units are natural (hbar = m = 1). The grid is periodic for the FFT, so every
wavefunction that is evolved must decay to nothing well inside its edges; packets are
checked for this on construction and at every evolution step.

"""
from __future__ import annotations

import logging
import math
from collections.abc import Iterator, Sequence
from dataclasses import dataclass, field

import numpy as np
from scipy import fft

from ..const import (
    EPS_OVERLAP,
    NORM_DRIFT_TOLERANCE,
    TAIL_FRACTION,
    TAIL_TOLERANCE,
)
from ..exceptions import (
    GridMismatch,
    MissingSpin,
    PacketTooWide,
    UnstableStep,
    ZeroOverlap,
)
from .spin_algebra import Direction, Spinor, inner, spin_operator

log = logging.getLogger(__name__)

TIME_TOLERANCE = 1e-9


@dataclass(frozen=True)
class Grid:
    """A uniform periodic grid on ``[x_min, x_max)``.

    :ivar x_min float: The left edge, included.
    :ivar x_max float: The right edge, excluded.
    :ivar n_points int: The number of points; at least 16, a power of two is fastest.

    """

    x_min: float
    x_max: float
    n_points: int

    def __post_init__(self):
        """Validate the extent and resolution."""
        if self.n_points < 16:
            msg = f"A grid needs at least 16 points, not {self.n_points}"
            raise ValueError(msg)
        if not self.x_max > self.x_min:
            msg = f"x_max ({self.x_max}) must be greater than x_min ({self.x_min})"
            raise ValueError(msg)

    @property
    def dx(self) -> float:
        """Return the spacing between points."""
        return (self.x_max - self.x_min) / self.n_points

    @property
    def k(self) -> np.ndarray:
        """Return the angular wavenumbers in FFT order."""
        return 2 * math.pi * fft.fftfreq(self.n_points, d=self.dx)

    @property
    def x(self) -> np.ndarray:
        """Return the grid points."""
        return np.linspace(self.x_min, self.x_max, self.n_points, endpoint=False)

    def derivative(self, values: np.ndarray) -> np.ndarray:
        """Return the centred second order derivative, one-sided at the edges."""
        return np.gradient(values, self.dx, edge_order=2)

    def integrate(self, values: np.ndarray) -> complex | float:
        """Integrate grid values with the periodic trapezoidal rule.

        On a periodic grid every point gets the same weight ``dx``.

        """
        return self.dx * np.sum(values)

    def to_dict(self) -> dict[str, float | int]:
        """Return the grid as plain metadata."""
        return {"x_min": self.x_min, "x_max": self.x_max, "n_points": self.n_points}


@dataclass(frozen=True, eq=False)
class FieldPair:
    """A density and a current on a grid at one time.

    For the standard model these are ``(|psi|^2, j)``; for the causally symmetric model
    they are ``(j0, j1)`` and the density may be negative.

    """

    grid: Grid
    density: np.ndarray
    current: np.ndarray
    time: float

    @property
    def min_density(self) -> float:
        """Return the smallest density value."""
        return float(np.min(self.density))


@dataclass(frozen=True, eq=False)
class GridWavefunction:
    """Amplitudes of a wavefunction on a grid at one time.

    When ``spin`` is given the state is the product of the spatial amplitudes with that
    spinor.

    """

    grid: Grid
    amplitudes: np.ndarray
    time: float = 0.0
    spin: Spinor | None = None

    @classmethod
    def from_snapshot(cls, snapshot: dict) -> GridWavefunction:
        """Rebuild a wavefunction from :meth:`to_snapshot` output."""
        grid = Grid(**snapshot["grid"])
        interleaved = np.asarray(snapshot["amplitudes"], dtype=float)
        spin = None
        if snapshot.get("spin") is not None:
            parts = np.asarray(snapshot["spin"], dtype=float)
            spin = Spinor(parts[0::2] + 1j * parts[1::2])
        return cls(
            grid,
            interleaved[0::2] + 1j * interleaved[1::2],
            float(snapshot["time"]),
            spin,
        )

    def __post_init__(self):
        """Copy the amplitudes into a complex array and check their length."""
        amplitudes = np.array(self.amplitudes, dtype=complex)
        if amplitudes.shape != (self.grid.n_points,):
            msg = (
                f"Expected {self.grid.n_points} amplitudes for this grid, got shape"
                f" {amplitudes.shape}"
            )
            raise GridMismatch(msg)
        amplitudes.flags.writeable = False
        object.__setattr__(self, "amplitudes", amplitudes)
        object.__setattr__(self, "time", float(self.time))

    @property
    def density(self) -> np.ndarray:
        """Return ``|psi|^2``."""
        return np.abs(self.amplitudes) ** 2

    @property
    def norm(self) -> float:
        """Return the L2 norm."""
        return math.sqrt(float(self.grid.integrate(self.density)))

    def mean_momentum(self) -> float:
        """Return ``<p>`` evaluated spectrally."""
        weights = np.abs(fft.fft(self.amplitudes)) ** 2
        return float(np.sum(self.grid.k * weights) / np.sum(weights))

    def mean_position(self) -> float:
        """Return ``<x>``."""
        density = self.density
        return float(self.grid.integrate(self.grid.x * density) / self.grid.integrate(density))

    def normalized(self) -> GridWavefunction:
        """Return the wavefunction scaled to unit norm."""
        return self.with_amplitudes(self.amplitudes / self.norm)

    def tail_ratio(self, fraction: float = TAIL_FRACTION) -> float:
        """Return the largest ``|psi|`` in the outer ``fraction`` of each side over max ``|psi|``."""
        n_tail = max(1, math.ceil(fraction * self.grid.n_points))
        return _tail_ratio(self.amplitudes, n_tail)

    def to_snapshot(self) -> dict:
        """Return JSON-ready grid metadata and interleaved re/im amplitudes."""
        interleaved = np.empty(2 * self.grid.n_points)
        interleaved[0::2] = self.amplitudes.real
        interleaved[1::2] = self.amplitudes.imag
        snapshot = {
            "grid": self.grid.to_dict(),
            "time": self.time,
            "amplitudes": interleaved.tolist(),
        }
        if self.spin is not None:
            snapshot["spin"] = [
                part
                for amplitude in self.spin.amplitudes
                for part in (amplitude.real, amplitude.imag)
            ]
        return snapshot

    def width(self) -> float:
        """Return the Gaussian width parameter, ``sqrt(2)`` times the position spread.

        For ``psi ~ exp(-(x - x0)^2 / (2 sigma^2))`` this is ``sigma``.

        """
        density = self.density
        total = self.grid.integrate(density)
        mean = self.grid.integrate(self.grid.x * density) / total
        variance = self.grid.integrate((self.grid.x - mean) ** 2 * density) / total
        return math.sqrt(2 * float(variance))

    def with_amplitudes(self, amplitudes: np.ndarray, time: float | None = None) -> GridWavefunction:
        """Return a wavefunction on the same grid and spin with new amplitudes."""
        return GridWavefunction(
            self.grid, amplitudes, self.time if time is None else time, self.spin
        )


@dataclass(frozen=True, eq=False)
class WavefunctionHistory(Sequence):
    """Wavefunction slices at equally spaced, ascending times on one grid."""

    grid: Grid
    times: np.ndarray
    amplitudes: np.ndarray
    spin: Spinor | None = None
    _slices: list[GridWavefunction] = field(init=False, repr=False)

    def __getitem__(self, index: int) -> GridWavefunction:
        """Return the slice at ``index``."""
        return self._slices[index]

    def __iter__(self) -> Iterator[GridWavefunction]:
        """Iterate over slices in time order."""
        return iter(self._slices)

    def __len__(self) -> int:
        """Return the number of slices."""
        return len(self._slices)

    def __post_init__(self):
        """Validate the shapes and build the slices."""
        times = np.array(self.times, dtype=float)
        amplitudes = np.array(self.amplitudes, dtype=complex)
        if amplitudes.shape != (len(times), self.grid.n_points):
            msg = (
                f"Expected amplitudes of shape ({len(times)}, {self.grid.n_points}), got"
                f" {amplitudes.shape}"
            )
            raise GridMismatch(msg)
        if len(times) > 1 and np.any(np.diff(times) <= 0):
            msg = "History times must be strictly increasing"
            raise ValueError(msg)
        times.flags.writeable = False
        amplitudes.flags.writeable = False
        object.__setattr__(self, "times", times)
        object.__setattr__(self, "amplitudes", amplitudes)
        object.__setattr__(
            self,
            "_slices",
            [
                GridWavefunction(self.grid, row, time, self.spin)
                for time, row in zip(times, amplitudes, strict=True)
            ],
        )

    @property
    def dt(self) -> float:
        """Return the spacing between slices."""
        if len(self.times) < 2:
            return 0.0
        return float(self.times[1] - self.times[0])

    @property
    def final(self) -> GridWavefunction:
        """Return the latest slice."""
        return self._slices[-1]

    @property
    def initial(self) -> GridWavefunction:
        """Return the earliest slice."""
        return self._slices[0]


class Propagator:
    """Strang split-step Fourier propagator for ``H = -1/2 d^2/dx^2 + V(x)``.

    Each step applies half the potential phase, the exact kinetic phase in momentum
    space, then the other half of the potential phase. Without a potential the kinetic
    step is exact.

    """

    def __init__(self, grid: Grid, dt: float, potential: np.ndarray | None = None):
        """Initialize the Propagator instance.

        :param grid: The grid to propagate on.
        :param dt: The time step; must be positive and finite.
        :param potential: The real potential on the grid, or ``None`` for a free
            particle.

        """
        if not math.isfinite(dt) or dt <= 0:
            msg = f"The time step must be positive and finite, not {dt}"
            raise UnstableStep(msg)
        self.grid = grid
        self.dt = dt
        self.kinetic_phase = np.exp(-0.5j * grid.k**2 * dt)
        self.potential_phase = None
        if potential is not None:
            potential = np.asarray(potential, dtype=float)
            if potential.shape != (grid.n_points,):
                msg = f"Potential has shape {potential.shape}, grid has {grid.n_points} points"
                raise GridMismatch(msg)
            largest = float(np.max(np.abs(potential)))
            if largest * dt > math.pi:
                msg = (
                    f"max|V| dt = {largest * dt:.3g} exceeds pi; the potential phase"
                    " aliases at this step"
                )
                raise UnstableStep(msg)
            if largest > 0:
                self.potential_phase = np.exp(-0.5j * potential * dt)

    def step(self, amplitudes: np.ndarray) -> np.ndarray:
        """Advance amplitudes by one time step."""
        if self.potential_phase is not None:
            amplitudes = amplitudes * self.potential_phase
        amplitudes = fft.ifft(self.kinetic_phase * fft.fft(amplitudes))
        if self.potential_phase is not None:
            amplitudes = amplitudes * self.potential_phase
        return amplitudes


def _tail_ratio(amplitudes: np.ndarray, n_tail: int) -> float:
    magnitude = np.abs(amplitudes)
    peak = float(np.max(magnitude))
    if peak == 0:
        return 0.0
    edge = max(float(np.max(magnitude[:n_tail])), float(np.max(magnitude[-n_tail:])))
    return edge / peak


def _check_tails(amplitudes: np.ndarray, n_tail: int, tail_tolerance: float, time: float):
    ratio = _tail_ratio(amplitudes, n_tail)
    if ratio >= tail_tolerance:
        msg = (
            f"The wavefunction reached the grid edges (tail ratio {ratio:.3e} at"
            f" t={time:.6g}); widen the grid or shorten the run"
        )
        raise UnstableStep(msg)


def _check_norm(start: GridWavefunction, end: GridWavefunction, norm_tolerance: float):
    drift = abs(end.norm - start.norm)
    if drift > norm_tolerance:
        msg = f"Norm drifted by {drift:.3e}, above {norm_tolerance:.1e}"
        raise UnstableStep(msg)


def _fields_compatible(psi_i: GridWavefunction, psi_f: GridWavefunction):
    if psi_i.grid != psi_f.grid:
        msg = f"Wavefunctions live on different grids: {psi_i.grid} and {psi_f.grid}"
        raise GridMismatch(msg)
    if not math.isclose(psi_i.time, psi_f.time, rel_tol=0, abs_tol=TIME_TOLERANCE):
        msg = f"Wavefunctions are at different times: {psi_i.time} and {psi_f.time}"
        raise GridMismatch(msg)
    if (psi_i.spin is None) != (psi_f.spin is None):
        msg = "Only one of the two wavefunctions carries a spin part"
        raise GridMismatch(msg)


def continuity_residual(before: FieldPair, centre: FieldPair, after: FieldPair) -> np.ndarray:
    """Return ``d(density)/dt + d(current)/dx`` at the centre slice.

    The time derivative is the centred difference of ``before`` and ``after``, which
    must be equally spaced around ``centre``.

    :param before: The fields one step before ``centre``.
    :param centre: The fields whose current is differentiated in space.
    :param after: The fields one step after ``centre``.

    :returns: The residual on the grid.

    """
    if not before.grid == centre.grid == after.grid:
        msg = "Continuity residual needs three field pairs on one grid"
        raise GridMismatch(msg)
    dt = after.time - centre.time
    if dt <= 0 or not math.isclose(centre.time - before.time, dt, rel_tol=1e-9):
        msg = (
            f"Field times {before.time}, {centre.time}, {after.time} are not equally"
            " spaced and increasing"
        )
        raise GridMismatch(msg)
    drho_dt = (after.density - before.density) / (2 * dt)
    return drho_dt + centre.grid.derivative(centre.current)


def current_cs(
    psi_i: GridWavefunction,
    psi_f: GridWavefunction,
    eps_overlap: float = EPS_OVERLAP,
) -> FieldPair:
    """Return the causally symmetric density and current of two boundary states.

    With ``a = <psi_f|psi_i>`` the density is ``Re(psi_f* psi_i / a)`` and the current
    is ``Re((psi_f* d psi_i - psi_i d psi_f*) / (2ia))``. Dividing by ``a`` makes the
    density integrate to one; it may be negative at points.

    :param psi_i: The initial wavefunction evolved forward to some time.
    :param psi_f: The final wavefunction evolved backward to the same time.
    :param eps_overlap: The smallest allowed ``|a|`` relative to the norms.

    :returns: The field pair ``(j0, j1)``.

    """
    _fields_compatible(psi_i, psi_f)
    spin_overlap = 1.0 if psi_i.spin is None else inner(psi_f.spin, psi_i.spin)
    # a = spatial overlap times spin overlap; the spin factor cancels locally.
    spatial_overlap = complex(psi_i.grid.integrate(psi_f.amplitudes.conj() * psi_i.amplitudes))
    overlap = spatial_overlap * spin_overlap
    scale = psi_i.norm * psi_f.norm
    if psi_i.spin is not None:
        scale *= psi_i.spin.norm * psi_f.spin.norm
    if scale == 0 or abs(overlap) <= eps_overlap * scale:
        msg = f"|<psi_f|psi_i>| = {abs(overlap):.3e} is below {eps_overlap:.1e}"
        raise ZeroOverlap(msg)
    conj_f = psi_f.amplitudes.conj()
    amplitudes_i = psi_i.amplitudes
    grid = psi_i.grid
    density = (conj_f * amplitudes_i / spatial_overlap).real
    current = (
        (conj_f * grid.derivative(amplitudes_i) - grid.derivative(conj_f) * amplitudes_i)
        / (2j * spatial_overlap)
    ).real
    return FieldPair(grid, density, current, psi_i.time)


def current_standard(psi: GridWavefunction) -> FieldPair:
    """Return ``(|psi|^2, Im(psi* d psi/dx))``, the Schrodinger density and current."""
    derivative = psi.grid.derivative(psi.amplitudes)
    current = (psi.amplitudes.conj() * derivative).imag
    return FieldPair(psi.grid, psi.density, current, psi.time)


def evolve(
    psi: GridWavefunction,
    dt: float,
    steps: int,
    potential: np.ndarray | None = None,
    *,
    norm_tolerance: float = NORM_DRIFT_TOLERANCE,
    tail_tolerance: float = TAIL_TOLERANCE,
) -> GridWavefunction:
    """Evolve a wavefunction forward by ``steps`` steps of ``dt``.

    :param psi: The wavefunction to evolve.
    :param dt: The time step.
    :param steps: The number of steps; zero returns ``psi`` unchanged.
    :param potential: The real potential on the grid, free if ``None``.
    :param norm_tolerance: The largest allowed change of the norm over the run.
    :param tail_tolerance: The largest allowed tail ratio at any step.

    :returns: The wavefunction at ``psi.time + steps * dt``.

    """
    return evolve_history(
        psi,
        dt,
        steps,
        potential,
        stride=max(steps, 1),
        norm_tolerance=norm_tolerance,
        tail_tolerance=tail_tolerance,
    ).final


def evolve_final_backward(
    psi_f: GridWavefunction,
    dt: float,
    steps: int,
    potential: np.ndarray | None = None,
    *,
    stride: int = 1,
    norm_tolerance: float = NORM_DRIFT_TOLERANCE,
    tail_tolerance: float = TAIL_TOLERANCE,
) -> WavefunctionHistory:
    """Evolve a final condition backward in time.

    Backward evolution under a real potential is the complex conjugate of forward
    evolution of the conjugate, so the forward propagator is reused.

    :param psi_f: The final wavefunction at its own time ``t_f``.
    :param dt: The time step.
    :param steps: The number of steps back.
    :param potential: The real potential on the grid, free if ``None``.
    :param stride: Keep every ``stride``-th slice; must divide ``steps``.

    :returns: The history in ascending time, ending with ``psi_f`` at ``t_f``.

    """
    conjugate = psi_f.with_amplitudes(psi_f.amplitudes.conj())
    forward = evolve_history(
        conjugate,
        dt,
        steps,
        potential,
        stride=stride,
        norm_tolerance=norm_tolerance,
        tail_tolerance=tail_tolerance,
    )
    n_slices = len(forward)
    times = psi_f.time - dt * stride * np.arange(n_slices - 1, -1, -1)
    return WavefunctionHistory(
        psi_f.grid, times, forward.amplitudes[::-1].conj(), psi_f.spin
    )


def evolve_history(
    psi: GridWavefunction,
    dt: float,
    steps: int,
    potential: np.ndarray | None = None,
    *,
    stride: int = 1,
    norm_tolerance: float = NORM_DRIFT_TOLERANCE,
    tail_tolerance: float = TAIL_TOLERANCE,
) -> WavefunctionHistory:
    """Evolve a wavefunction forward and keep every ``stride``-th slice.

    :param psi: The wavefunction at its own time ``t0``.
    :param dt: The time step.
    :param steps: The number of steps.
    :param potential: The real potential on the grid, free if ``None``.
    :param stride: Keep every ``stride``-th slice; must divide ``steps``.
    :param norm_tolerance: The largest allowed change of the norm over the run.
    :param tail_tolerance: The largest allowed tail ratio at any step.

    :returns: The history from ``t0`` to ``t0 + steps * dt`` inclusive.

    """
    if steps < 0:
        msg = f"Cannot take a negative number of steps ({steps})"
        raise ValueError(msg)
    if stride < 1 or (steps and steps % stride):
        msg = f"stride {stride} must be positive and divide steps {steps}"
        raise ValueError(msg)
    if steps == 0:
        return WavefunctionHistory(psi.grid, [psi.time], psi.amplitudes[None, :], psi.spin)
    propagator = Propagator(psi.grid, dt, potential)
    n_tail = max(1, math.ceil(TAIL_FRACTION * psi.grid.n_points))
    amplitudes = psi.amplitudes
    kept = [amplitudes]
    for index in range(1, steps + 1):
        amplitudes = propagator.step(amplitudes)
        # Tails are checked every step; a packet can wrap across the edge between slices.
        _check_tails(amplitudes, n_tail, tail_tolerance, psi.time + index * dt)
        if index % stride == 0:
            kept.append(amplitudes)
    times = psi.time + dt * stride * np.arange(len(kept))
    history = WavefunctionHistory(psi.grid, times, np.stack(kept), psi.spin)
    _check_norm(psi, history.final, norm_tolerance)
    log.debug(
        f"Evolved {steps} steps of dt={dt:g} to t={history.final.time:.6g},"
        f" kept {len(history)} slices"
    )
    return history


def kick(psi: GridWavefunction, k: float) -> GridWavefunction:
    """Return ``psi`` multiplied by ``exp(ikx)``, a momentum impulse of ``k``."""
    return psi.with_amplitudes(psi.amplitudes * np.exp(1j * k * psi.grid.x))


def make_gaussian(
    grid: Grid,
    x0: float,
    sigma: float,
    k: float = 0.0,
    spin: Spinor | None = None,
    *,
    time: float = 0.0,
    tail_tolerance: float = TAIL_TOLERANCE,
) -> GridWavefunction:
    """Return the normalized packet ``exp(-(x - x0)^2 / (2 sigma^2) + ikx)``.

    :param grid: The grid.
    :param x0: The centre.
    :param sigma: The width parameter; the position spread is ``sigma / sqrt(2)``.
    :param k: The mean momentum.
    :param spin: An optional spinor the packet is a product with.
    :param time: The time stamp.
    :param tail_tolerance: The largest allowed tail ratio.

    :returns: The packet.

    """
    if sigma <= 0:
        msg = f"Packet width must be positive, not {sigma}"
        raise ValueError(msg)
    x = grid.x
    amplitudes = np.exp(-((x - x0) ** 2) / (2 * sigma**2) + 1j * k * x)
    packet = GridWavefunction(grid, amplitudes, time, spin).normalized()
    ratio = packet.tail_ratio()
    if ratio >= tail_tolerance:
        msg = (
            f"Gaussian at x0={x0:g} with sigma={sigma:g} does not fit [{grid.x_min:g},"
            f" {grid.x_max:g}): tail ratio {ratio:.3e} >= {tail_tolerance:.1e}"
        )
        raise PacketTooWide(msg)
    return packet


def spin_density(
    psi_i: GridWavefunction,
    psi_f: GridWavefunction,
    h: Direction,
    eps_overlap: float = EPS_OVERLAP,
) -> np.ndarray:
    """Return the local spin density ``Re(psi_f^dagger S_h psi_i / a)``.

    Both wavefunctions must carry a spin part. The grid integral of the density is the
    weak value of the ``h`` component between the two spinors.

    """
    if psi_i.spin is None or psi_f.spin is None:
        msg = "A spin density needs both wavefunctions to carry a spin part"
        raise MissingSpin(msg)
    _fields_compatible(psi_i, psi_f)
    spatial = psi_f.amplitudes.conj() * psi_i.amplitudes
    overlap = complex(psi_i.grid.integrate(spatial)) * inner(psi_f.spin, psi_i.spin)
    scale = psi_i.norm * psi_f.norm * psi_i.spin.norm * psi_f.spin.norm
    if scale == 0 or abs(overlap) <= eps_overlap * scale:
        msg = f"|<psi_f|psi_i>| = {abs(overlap):.3e} is below {eps_overlap:.1e}"
        raise ZeroOverlap(msg)
    spin_matrix_element = inner(psi_f.spin, spin_operator(h) @ psi_i.spin)
    return (spatial * spin_matrix_element / overlap).real
