"""Provide the statistical experiments: Born rule, the average identity and equivariance."""
import math

import numpy as np

from ..checks import Check, Summary, check_at_most, check_below, check_flag
from ..models.config import AppendixCheckConfig, BornCheckConfig, EquivarianceConfig
from ..physics import (
    EnsembleRun,
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
from ..utils import plural
from .base import Experiment, ExperimentResult, Table

RANDOM_SETUP_N_SIGMA = 4.0
RANDOM_PROBABILITY_RANGE = (0.1, 0.9)


def ks_critical(coefficient: float, n: int) -> float:
    """Return the Kolmogorov-Smirnov critical value ``coefficient / sqrt(n)``."""
    return coefficient / math.sqrt(n)


class BornCheckExperiment(Experiment[BornCheckConfig]):
    """Recover Born probabilities from trajectory end points."""

    kind = "born-check"

    def _setup(self, coefficients: np.ndarray) -> MeasurementSetup:
        params = self.params
        return MeasurementSetup(
            coefficients / np.linalg.norm(coefficients),
            grid=params.grid.to_grid(),
            sigma=params.sigma,
            x0=params.x0,
            k_sep=params.k_sep,
            t_split=params.t_split,
            duration=params.duration,
            dt=params.dt,
        )

    def _run(self, setup: MeasurementSetup, seed: int, n_sigma: float) -> EnsembleRun:
        tolerances = self.tolerances
        return born_experiment(
            setup,
            self.params.n_particles,
            seed,
            n_sigma=n_sigma,
            overlap_tolerance=tolerances.packet_overlap,
            eps_density=tolerances.eps_density,
            rtol=tolerances.ensemble_rtol,
            atol=tolerances.ensemble_atol,
        )

    def checks(self) -> list[Check[Summary]]:
        """Return the criteria the summary must meet."""
        checks = [
            check_flag("frequencies match Born probabilities", "within_n_sigma"),
            check_below(
                "end points follow the final density",
                "ks_statistic",
                ks_critical(self.tolerances.ks_coefficient, self.params.n_particles),
            ),
        ]
        if self.params.random_setups:
            checks.append(
                check_flag("random setups pass", "random_setups_passed")
            )
        return checks

    def compute(self) -> ExperimentResult:
        """Run the configured setup and any random repetitions."""
        params = self.params
        coefficients = np.array([complex(*pair) for pair in params.coefficients])
        run = self._run(self._setup(coefficients), self.seed, self.tolerances.born_n_sigma)
        summary = {
            "n_particles": run.n_particles,
            "n_sigma": run.n_sigma,
            "counts": run.outcome_counts,
            "expected": run.expected,
            "frequencies": run.frequencies,
            "sigma": run.sigma,
            "deviations": run.deviations,
            "within_n_sigma": run.passed,
            "ks_statistic": run.max_ks_statistic,
            "ks_critical": ks_critical(self.tolerances.ks_coefficient, run.n_particles),
        }
        rows = [
            (0, outcome, run.expected[outcome], count, run.frequencies[outcome])
            for outcome, count in run.outcome_counts.items()
        ]
        self.log.info(f"Counts {run.outcome_counts} for {run.expected}", self)

        if params.random_setups:
            rng = np.random.default_rng(self.seed)
            passes = 0
            for number in range(1, params.random_setups + 1):
                probability = rng.uniform(*RANDOM_PROBABILITY_RANGE)
                seed = int(rng.integers(2**63))
                coefficients = np.sqrt([probability, 1.0 - probability]).astype(complex)
                repeat = self._run(self._setup(coefficients), seed, RANDOM_SETUP_N_SIGMA)
                passes += repeat.passed
                rows.extend(
                    (number, outcome, repeat.expected[outcome], count, repeat.frequencies[outcome])
                    for outcome, count in repeat.outcome_counts.items()
                )
                self.log.debug(
                    f"Random setup {number}: p={probability:.4f} passed={repeat.passed}",
                    self,
                )
            min_passes = (
                params.min_passes
                if params.min_passes is not None
                else math.ceil(0.95 * params.random_setups)
            )
            summary["random_setups"] = params.random_setups
            summary["random_passes"] = passes
            summary["random_min_passes"] = min_passes
            summary["random_setups_passed"] = passes >= min_passes
            self.log.info(
                f"{plural(passes):random setup} of {params.random_setups} passed at"
                f" {RANDOM_SETUP_N_SIGMA:g} sigma",
                self,
            )
        table = Table(("setup", "outcome", "expected", "count", "frequency"), rows)
        return ExperimentResult(self.kind, self.seed, summary, {"born": table})


class AppendixCheckExperiment(Experiment[AppendixCheckConfig]):
    """Average the causally symmetric current over a complete set of final states."""

    kind = "appendix-check"

    def checks(self) -> list[Check[Summary]]:
        """Return the criteria the summary must meet."""
        return [
            check_at_most(
                "weighted current equals the standard current",
                "relative_deviation",
                self.tolerances.appendix_relative,
            )
        ]

    def compute(self) -> ExperimentResult:
        """Build the basis and compare the currents."""
        params = self.params
        grid = params.grid.to_grid()
        packet = params.packet
        psi = make_gaussian(
            grid, packet.x0, packet.sigma, packet.k, tail_tolerance=self.tolerances.tail
        )
        if params.basis == "plane-wave":
            basis = plane_wave_basis(grid, psi.time)
        else:
            basis = complete_basis_from(psi)
        deviation = appendix_average_check(
            psi,
            basis,
            eps_overlap=self.tolerances.eps_overlap,
            completeness_tolerance=self.tolerances.completeness,
        )
        standard = current_standard(psi)
        scale = float(np.max(np.abs(standard.current)))
        summary = {
            "basis": params.basis,
            "basis_size": len(basis),
            "completeness_residual": completeness_residual(basis),
            "max_deviation": deviation,
            "max_standard_current": scale,
            "relative_deviation": deviation / scale if scale else deviation,
        }
        rows = list(
            zip(grid.x.tolist(), standard.current.tolist(), strict=True)
        )
        return ExperimentResult(
            self.kind,
            self.seed,
            summary,
            {"standard_current": Table(("x", "current"), rows)},
        )


class EquivarianceExperiment(Experiment[EquivarianceConfig]):
    """Transport an ensemble and test it against the evolved density."""

    kind = "equivariance"

    def checks(self) -> list[Check[Summary]]:
        """Return the criteria the summary must meet."""
        return [
            check_below(
                "transported ensemble follows |psi|^2",
                "ks_statistic",
                ks_critical(self.tolerances.ks_coefficient, self.params.n_particles),
            )
        ]

    def compute(self) -> ExperimentResult:
        """Sample, evolve and transport."""
        params = self.params
        tolerances = self.tolerances
        grid = params.grid.to_grid()
        packet = params.packet
        psi = make_gaussian(
            grid, packet.x0, packet.sigma, packet.k, tail_tolerance=tolerances.tail
        )
        history = evolve_history(
            psi,
            params.dt,
            params.steps,
            norm_tolerance=tolerances.norm_drift,
            tail_tolerance=tolerances.tail,
        )
        if params.initial_distribution == "born":
            samples = sample_positions(psi, params.n_particles, self.seed)
        else:
            rng = np.random.default_rng(self.seed)
            samples = rng.uniform(
                packet.x0 - params.uniform_half_width,
                packet.x0 + params.uniform_half_width,
                params.n_particles,
            )
        statistic = equivariance_check(
            history,
            samples,
            history.final.time,
            eps_density=tolerances.eps_density,
            rtol=tolerances.ensemble_rtol,
            atol=tolerances.ensemble_atol,
        )
        summary = {
            "initial_distribution": params.initial_distribution,
            "n_particles": params.n_particles,
            "t_check": history.final.time,
            "initial_ks_statistic": ks_against_density(samples, psi.density, grid),
            "ks_statistic": statistic,
            "ks_critical": ks_critical(tolerances.ks_coefficient, params.n_particles),
        }
        self.log.info(
            f"KS {statistic:.4g} against critical {summary['ks_critical']:.4g}", self
        )
        return ExperimentResult(self.kind, self.seed, summary)
