"""Provide the statistical checks: Born rule recovery, equivariance and the average identity.

Positions are drawn from ``|psi|^2`` by inverse transform sampling on the grid. A
measurement is modelled as a momentum kick per outcome that carries each outcome's
packet into its own region of space; the fraction of trajectories ending in a region
estimates that outcome's Born probability.

"""
from __future__ import annotations

import itertools
import logging
import math
from collections.abc import Sequence
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import cumulative_trapezoid
from scipy.stats import kstest

from ..const import (
    BORN_N_SIGMA,
    COMPLETENESS_TOLERANCE,
    ENSEMBLE_ATOL,
    ENSEMBLE_RTOL,
    EPS_DENSITY,
    EPS_OVERLAP,
    MAX_KICK_PHASE_PER_CELL,
    PACKET_OVERLAP_TOLERANCE,
)
from ..exceptions import GridMismatch, IncompleteBasis, PacketsNotSeparated
from .trajectories import FieldHistory, bohm_ensemble
from .wavepacket import (
    Grid,
    GridWavefunction,
    WavefunctionHistory,
    current_cs,
    current_standard,
    evolve_history,
    kick,
    make_gaussian,
)

log = logging.getLogger(__name__)

SeedLike = int | np.random.Generator | None


@dataclass(frozen=True, eq=False)
class EnsembleRun:
    """The tallies of one Born rule experiment.

    Outcomes are labelled ``1..N`` from left to right.

    :ivar seed int | None: The seed the positions were drawn with.
    :ivar n_particles int: The ensemble size.
    :ivar outcome_counts dict[int, int]: How many trajectories ended in each region.
    :ivar expected dict[int, float]: The Born probabilities ``|c_m|^2``.
    :ivar sigma dict[int, float]: The binomial standard deviation of each frequency.
    :ivar max_ks_statistic float: KS statistic of the final positions against the
        final density.
    :ivar passed bool: Whether every frequency is within ``n_sigma`` deviations.

    """

    seed: int | None
    n_particles: int
    outcome_counts: dict[int, int]
    expected: dict[int, float]
    sigma: dict[int, float]
    max_ks_statistic: float
    passed: bool
    n_sigma: float = BORN_N_SIGMA

    @property
    def deviations(self) -> dict[int, float]:
        """Return ``|frequency - expected|`` per outcome."""
        frequencies = self.frequencies
        return {
            outcome: abs(frequencies[outcome] - probability)
            for outcome, probability in self.expected.items()
        }

    @property
    def frequencies(self) -> dict[int, float]:
        """Return the observed fraction per outcome."""
        return {
            outcome: count / self.n_particles
            for outcome, count in self.outcome_counts.items()
        }


@dataclass(frozen=True, eq=False)
class MeasurementSetup:
    """A single particle state with one spatial packet per spin outcome.

    Every outcome starts from the same Gaussian. At ``t_split`` outcome ``m`` is kicked
    with momentum ``kicks[m]``, evenly spaced over ``[-k_sep, +k_sep]``; orthogonal spin
    states keep the branches from interfering.

    """

    coefficients: np.ndarray
    grid: Grid = field(default_factory=lambda: Grid(-32.0, 32.0, 8192))
    sigma: float = 1.0
    x0: float = 0.0
    k_sep: float = 5.0
    t_split: float = 0.0
    duration: float = 2.0
    dt: float = 0.01

    def __post_init__(self):
        """Validate the coefficients and the schedule."""
        coefficients = np.array(self.coefficients, dtype=complex).reshape(-1)
        if coefficients.size < 2:
            msg = f"A measurement needs at least two outcomes, got {coefficients.size}"
            raise ValueError(msg)
        total = float(np.sum(np.abs(coefficients) ** 2))
        if abs(total - 1.0) > 1e-12:
            msg = f"Outcome probabilities sum to {total!r}, not 1"
            raise ValueError(msg)
        if not 0 <= self.t_split < self.duration:
            msg = f"t_split={self.t_split} must lie in [0, duration={self.duration})"
            raise ValueError(msg)
        coefficients.flags.writeable = False
        object.__setattr__(self, "coefficients", coefficients)

    @property
    def kicks(self) -> np.ndarray:
        """Return the momentum given to each outcome's packet, leftmost first."""
        return np.linspace(-self.k_sep, self.k_sep, self.coefficients.size)

    @property
    def kick_phase_per_cell(self) -> float:
        """Return ``k_sep dx``, the largest phase a kicked packet turns per grid cell."""
        return self.k_sep * self.grid.dx

    @property
    def probabilities(self) -> np.ndarray:
        """Return ``|c_m|^2``."""
        return np.abs(self.coefficients) ** 2


def _density_cdf(grid: Grid, density: np.ndarray) -> np.ndarray:
    cdf = cumulative_trapezoid(density, grid.x, initial=0.0)
    cdf = np.maximum.accumulate(cdf / cdf[-1])
    return cdf


def _steps(span: float, dt: float) -> int:
    steps = round(span / dt)
    if not math.isclose(steps * dt, span, rel_tol=1e-9, abs_tol=1e-12):
        msg = f"Interval {span:g} is not a whole number of steps of {dt:g}"
        raise ValueError(msg)
    return steps


def appendix_average_check(
    psi_i: GridWavefunction,
    final_basis: Sequence[GridWavefunction],
    *,
    eps_overlap: float = EPS_OVERLAP,
    completeness_tolerance: float = COMPLETENESS_TOLERANCE,
) -> float:
    """Compare the probability weighted causally symmetric current with the standard one.

    Computes ``sum_f P(f|i) j_cs(x | i, f)`` with ``P(f|i) = |<f|i>|^2`` over a
    complete orthonormal basis. Terms with ``|<f|i>| <= eps_overlap`` contribute zero.

    :param psi_i: The normalized initial wavefunction.
    :param final_basis: A complete orthonormal basis on the same grid and time.
    :param eps_overlap: The overlap below which a term is dropped.
    :param completeness_tolerance: The largest allowed resolution of identity residual.

    :returns: ``max_x |sum - j_standard(x)|``.

    """
    residual = completeness_residual(final_basis)
    if residual > completeness_tolerance:
        msg = (
            f"Basis of {len(final_basis)} functions is incomplete on"
            f" {psi_i.grid.n_points} points: residual {residual:.3e}"
        )
        raise IncompleteBasis(msg)
    grid = psi_i.grid
    total = np.zeros(grid.n_points)
    skipped = 0
    for basis_function in final_basis:
        if basis_function.grid != grid:
            msg = "Basis function lives on a different grid"
            raise GridMismatch(msg)
        overlap = grid.integrate(basis_function.amplitudes.conj() * psi_i.amplitudes)
        if abs(overlap) <= eps_overlap:
            skipped += 1
            continue
        fields = current_cs(psi_i, basis_function, eps_overlap=0.0)
        total += abs(overlap) ** 2 * fields.current
    deviation = float(np.max(np.abs(total - current_standard(psi_i).current)))
    log.debug(
        f"Weighted current over {len(final_basis) - skipped} terms ({skipped} skipped)"
        f" deviates by {deviation:.3e}"
    )
    return deviation


def born_experiment(
    setup: MeasurementSetup,
    n: int,
    seed: SeedLike = None,
    *,
    n_sigma: float = BORN_N_SIGMA,
    overlap_tolerance: float = PACKET_OVERLAP_TOLERANCE,
    eps_density: float = EPS_DENSITY,
    rtol: float = ENSEMBLE_RTOL,
    atol: float = ENSEMBLE_ATOL,
) -> EnsembleRun:
    """Run the packet separation experiment and tally where trajectories end.

    :param setup: The coefficients and separation schedule.
    :param n: The number of trajectories.
    :param seed: The seed for the initial positions.
    :param n_sigma: How many binomial deviations a frequency may miss by.
    :param overlap_tolerance: The largest allowed ``int |phi_m| |phi_m'| dx`` between
        final packets.

    :returns: The tallies.

    """
    if setup.kick_phase_per_cell > MAX_KICK_PHASE_PER_CELL:
        log.warning(
            f"k_sep dx = {setup.kick_phase_per_cell:.3g} is above"
            f" {MAX_KICK_PHASE_PER_CELL:g}; trajectories lag the packets and the KS"
            " statistic is biased. Use more grid points"
        )
    packet = make_gaussian(setup.grid, setup.x0, setup.sigma)
    positions = sample_positions(packet, n, seed)
    if setup.t_split > 0:
        steps = _steps(setup.t_split, setup.dt)
        before = evolve_history(packet, setup.dt, steps)
        positions = bohm_ensemble(
            FieldHistory.standard(before),
            positions,
            eps_density=eps_density,
            rtol=rtol,
            atol=atol,
        )
        packet = before.final
    steps = _steps(setup.duration - setup.t_split, setup.dt)
    branches = [
        evolve_history(kick(packet, k), setup.dt, steps) for k in setup.kicks
    ]
    fields = FieldHistory.from_branches(branches, setup.probabilities)
    positions = bohm_ensemble(
        fields, positions, eps_density=eps_density, rtol=rtol, atol=atol
    )

    finals = [branch.final for branch in branches]
    for (m, first), (m_prime, second) in itertools.combinations(enumerate(finals, 1), 2):
        overlap = float(
            setup.grid.integrate(np.abs(first.amplitudes) * np.abs(second.amplitudes))
        )
        if overlap >= overlap_tolerance:
            msg = (
                f"Packets {m} and {m_prime} still overlap by {overlap:.3e} at"
                f" t={setup.duration:g} (limit {overlap_tolerance:.1e})"
            )
            raise PacketsNotSeparated(msg)
    centres = np.array([final.mean_position() for final in finals])
    boundaries = (centres[:-1] + centres[1:]) / 2
    regions = np.searchsorted(boundaries, positions)
    counts = np.bincount(regions, minlength=len(finals))

    probabilities = setup.probabilities
    sigma = np.sqrt(probabilities * (1 - probabilities) / n)
    deviations = np.abs(counts / n - probabilities)
    passed = bool(n_sigma > 0 and np.all(deviations <= n_sigma * sigma))
    ks_statistic = ks_against_density(positions, fields.at(fields.t_end).density, setup.grid)
    labels = range(1, len(finals) + 1)
    log.debug(f"Born experiment counts {counts.tolist()} for p={probabilities.tolist()}")
    return EnsembleRun(
        seed=seed if isinstance(seed, int) else None,
        n_particles=n,
        outcome_counts=dict(zip(labels, counts.tolist(), strict=True)),
        expected=dict(zip(labels, probabilities.tolist(), strict=True)),
        sigma=dict(zip(labels, sigma.tolist(), strict=True)),
        max_ks_statistic=ks_statistic,
        passed=passed,
        n_sigma=n_sigma,
    )


def complete_basis_from(psi: GridWavefunction) -> list[GridWavefunction]:
    """Return an orthonormal basis of the grid whose first element is ``psi``'s direction.

    The rest of the basis is the orthogonal complement from a QR factorization of
    ``psi`` followed by the point basis.

    """
    grid = psi.grid
    scale = math.sqrt(grid.dx)
    unit = psi.amplitudes * scale / psi.norm
    columns = np.column_stack([unit, np.eye(grid.n_points, dtype=complex)])
    q, _ = np.linalg.qr(columns)
    return [
        GridWavefunction(grid, q[:, index] / scale, psi.time)
        for index in range(grid.n_points)
    ]


def completeness_residual(basis: Sequence[GridWavefunction]) -> float:
    """Return ``max |sum_f f(x) f*(x') dx - delta(x, x')|`` over the grid."""
    if not basis:
        return math.inf
    grid = basis[0].grid
    amplitudes = np.stack([function.amplitudes for function in basis])
    identity = grid.dx * (amplitudes.T @ amplitudes.conj())
    return float(np.max(np.abs(identity - np.eye(grid.n_points))))


def equivariance_check(
    history: FieldHistory | WavefunctionHistory,
    samples: Sequence[float] | np.ndarray,
    t_check: float,
    *,
    eps_density: float = EPS_DENSITY,
    rtol: float = ENSEMBLE_RTOL,
    atol: float = ENSEMBLE_ATOL,
) -> float:
    """Transport samples to ``t_check`` and test them against ``|psi(t_check)|^2``.

    :param history: The forward history the samples move in.
    :param samples: Positions at the history's first time.
    :param t_check: The time to compare at.

    :returns: The Kolmogorov-Smirnov statistic.

    """
    fields = history if isinstance(history, FieldHistory) else FieldHistory.standard(history)
    positions = bohm_ensemble(
        fields, samples, t_end=t_check, eps_density=eps_density, rtol=rtol, atol=atol
    )
    return ks_against_density(positions, fields.at(t_check).density, fields.grid)


def ks_against_density(samples: np.ndarray, density: np.ndarray, grid: Grid) -> float:
    """Return the KS statistic of samples against a density given on the grid."""
    cdf = _density_cdf(grid, density)
    grid_x = grid.x
    result = kstest(np.asarray(samples), lambda x: np.interp(x, grid_x, cdf))
    return float(result.statistic)


def plane_wave_basis(grid: Grid, time: float = 0.0) -> list[GridWavefunction]:
    """Return the discrete plane waves ``exp(ikx) / sqrt(L)`` for every FFT wavenumber.

    They are orthonormal and complete under :meth:`Grid.integrate`.

    """
    length = grid.x_max - grid.x_min
    x = grid.x
    return [
        GridWavefunction(grid, np.exp(1j * k * x) / math.sqrt(length), time)
        for k in grid.k
    ]


def sample_positions(psi: GridWavefunction, n: int, seed: SeedLike = None) -> np.ndarray:
    """Draw ``n`` positions distributed as ``|psi|^2``.

    The grid density is integrated with the trapezoidal rule and inverted with linear
    interpolation. The same seed always yields the same positions.

    :param psi: The wavefunction.
    :param n: The number of positions.
    :param seed: A seed or a ``numpy.random.Generator``.

    :returns: The positions.

    """
    rng = np.random.default_rng(seed)
    cdf = _density_cdf(psi.grid, psi.density)
    return np.interp(rng.random(n), cdf, psi.grid.x)
