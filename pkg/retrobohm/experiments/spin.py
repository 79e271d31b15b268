"""Provide the spin experiments: weak values, entangled values and the spin map."""
import math

import numpy as np

from ..checks import Check, Summary, check_at_most, check_close
from ..models.config import (
    EntangledValueConfig,
    SpinMapConfig,
    WeakValueConfig,
    outcome,
)
from ..physics import (
    X_AXIS,
    Y_AXIS,
    Z_AXIS,
    Direction,
    EntangledContext,
    TwoStateContext,
    born_conditional,
    born_joint,
    component_map,
    conditional_state,
    entangled_weak_value_complex,
    hidden_spin_vector,
    inner,
    reduced_weak_value,
    spherical_grid,
    spin_operator,
    weak_spin_value,
    weak_spin_value_complex,
    weighted_weak_average,
)
from .base import Experiment, ExperimentResult, Table

BISECTION_TOLERANCE = 1e-6
SWEEP_TOLERANCE = 1e-8


def _random_directions(rng: np.random.Generator, count: int) -> list[Direction]:
    vectors = rng.normal(size=(count, 3))
    return [Direction.from_vector(vector) for vector in vectors]


class WeakValueExperiment(Experiment[WeakValueConfig]):
    """The spin components between one preparation and one later outcome."""

    kind = "weak-value"

    def checks(self) -> list[Check[Summary]]:
        """Return the criteria the summary must meet."""
        identity = self.tolerances.identity
        checks = [check_at_most("components are linear", "linearity_deviation", identity)]
        if self.params.post.axis is not None:
            checks.append(
                check_at_most(
                    "outcome average is the expectation value",
                    "weighted_average_deviation",
                    identity,
                )
            )
        return checks

    def compute(self) -> ExperimentResult:
        """Evaluate every requested component."""
        pre = self.params.pre.to_spinor()
        post = self.params.post.to_spinor()
        ctx = TwoStateContext(pre, post, self.tolerances.eps_overlap)
        vector = np.array(
            [weak_spin_value(ctx, axis) for axis in (X_AXIS, Y_AXIS, Z_AXIS)]
        )
        rows = []
        components = []
        linearity = 0.0
        averages = 0.0
        for spec in self.params.components:
            h = spec.to_direction()
            value = weak_spin_value_complex(ctx, h)
            expectation = inner(pre, spin_operator(h) @ pre).real
            linearity = max(linearity, abs(value.real - float(vector @ h.vector)))
            entry = {
                "inputs": {
                    "pre": pre.amplitudes,
                    "post": post.amplitudes,
                    "direction": h.vector,
                },
                "complex_value": value,
                "real_value": value.real,
                "expectation": expectation,
            }
            if self.params.post.axis is not None:
                average = weighted_weak_average(
                    pre,
                    self.params.post.axis.to_direction(),
                    h,
                    self.tolerances.eps_overlap,
                )
                entry["weighted_average"] = average
                averages = max(averages, abs(average - expectation))
            components.append(entry)
            rows.append((h.nx, h.ny, h.nz, value.real, value.imag, expectation))
            self.log.debug(f"S_h along {h} = {value.real:.12g}", self)
        summary = {
            "overlap": ctx.overlap,
            "born_probability": abs(ctx.overlap) ** 2,
            "vector": vector,
            "components": components,
            "linearity_deviation": linearity,
        }
        if self.params.post.axis is not None:
            summary["weighted_average_deviation"] = averages
        table = Table(("nx", "ny", "nz", "value", "imaginary", "expectation"), rows)
        return ExperimentResult(self.kind, self.seed, summary, {"components": table})


class EntangledValueExperiment(Experiment[EntangledValueConfig]):
    """Particle 2's spin components given both outcomes of an entangled pair."""

    kind = "entangled-value"

    def checks(self) -> list[Check[Summary]]:
        """Return the criteria the summary must meet."""
        return [
            check_at_most(
                "two particle value equals conditional state value",
                "max_reduction_deviation",
                self.tolerances.identity,
            )
        ]

    def compute(self) -> ExperimentResult:
        """Evaluate every requested component both ways."""
        params = self.params
        initial = params.initial.to_state()
        axis1 = params.axis1.to_direction()
        axis2 = params.axis2.to_direction()
        outcome1 = outcome(params.outcome1)
        outcome2 = outcome(params.outcome2)
        ctx = EntangledContext(
            initial, axis1, axis2, outcome1, outcome2, self.tolerances.eps_overlap
        )
        inputs = {
            "initial": initial.amplitudes,
            "axis1": axis1.vector,
            "axis2": axis2.vector,
            "outcome1": params.outcome1,
            "outcome2": params.outcome2,
        }
        conditioned = conditional_state(
            initial, axis1, outcome1, self.tolerances.eps_overlap
        )
        rows = []
        components = []
        deviation = 0.0
        for spec in params.components:
            h = spec.to_direction()
            value = entangled_weak_value_complex(ctx, h)
            direct = value.real
            reduced = reduced_weak_value(ctx, h)
            deviation = max(deviation, abs(direct - reduced))
            components.append(
                {
                    "inputs": inputs | {"direction": h.vector},
                    "complex_value": value,
                    "real_value": direct,
                    "reduced": reduced,
                }
            )
            rows.append((h.nx, h.ny, h.nz, direct, reduced))
        summary = {
            "joint_probability": born_joint(initial, axis1, axis2, outcome1, outcome2),
            "conditional_probability": born_conditional(
                initial, axis1, axis2, outcome1, outcome2
            ),
            "conditional_state": conditioned.amplitudes,
            "components": components,
            "max_reduction_deviation": deviation,
        }
        table = Table(("nx", "ny", "nz", "value", "reduced"), rows)
        return ExperimentResult(self.kind, self.seed, summary, {"components": table})


class SpinMapExperiment(Experiment[SpinMapConfig]):
    """The hidden spin vector between two measurements, over the whole sphere."""

    kind = "spin-map"

    def checks(self) -> list[Check[Summary]]:
        """Return the criteria the summary must meet."""
        identity = self.tolerances.identity
        checks = [
            check_close(
                "largest component is 1/(2 cos(omega/2))",
                "max_value",
                "predicted_max",
                identity,
            ),
            check_at_most(
                "largest component bisects the axes",
                "midplane_check",
                BISECTION_TOLERANCE,
            ),
            check_at_most(
                "measured axes carry 1/2", "measured_axis_deviation", identity
            ),
            check_at_most("cosine law", "cosine_law_deviation", identity),
        ]
        if self.params.sweep:
            checks.append(
                check_close(
                    "sphere sweep finds the same maximum",
                    "sweep_value",
                    "max_value",
                    SWEEP_TOLERANCE,
                )
            )
        return checks

    def compute(self) -> ExperimentResult:
        """Reconstruct the vector and tabulate every component on the sphere."""
        params = self.params
        i_axis = params.i_axis.to_direction()
        f_axis = params.f_axis.to_direction()
        options = {
            "i_outcome": params.i_outcome,
            "f_outcome": params.f_outcome,
            "delta_deg": self.tolerances.antiparallel_guard_deg,
            "eps_overlap": self.tolerances.eps_overlap,
        }
        report = hidden_spin_vector(
            i_axis,
            f_axis,
            sweep_resolution_deg=params.resolution_deg if params.sweep else None,
            **options,
        )
        sphere = spherical_grid(params.resolution_deg)
        values = component_map(
            i_axis, f_axis, [direction for _, _, direction in sphere], **options
        )
        rows = [
            (polar, azimuth, value)
            for (polar, azimuth, _), (_, value) in zip(sphere, values, strict=True)
        ]

        rng = np.random.default_rng(self.seed)
        samples = component_map(
            i_axis,
            f_axis,
            _random_directions(rng, params.random_directions),
            **options,
        )
        cosine_law = max(
            (
                abs(value - report.max_value * direction.dot(report.max_direction))
                for direction, value in samples
            ),
            default=0.0,
        )
        measured = max(
            abs(report.component(report.i_axis) - 0.5),
            abs(report.component(report.f_axis) - 0.5),
        )
        summary = {
            "vector": report.vector,
            "max_direction": report.max_direction.vector,
            "max_value": report.max_value,
            "predicted_max": report.predicted_max,
            "omega_deg": math.degrees(report.omega),
            "midplane_check": report.midplane_check,
            "measured_axis_deviation": measured,
            "cosine_law_deviation": cosine_law,
            "random_directions": params.random_directions,
        }
        if report.sweep_direction is not None:
            summary["sweep_direction"] = report.sweep_direction.vector
            summary["sweep_value"] = report.sweep_value
            summary["sweep_angle_deg"] = math.degrees(
                report.sweep_direction.angle_to(report.max_direction)
            )
        self.log.info(
            f"omega = {summary['omega_deg']:.6g} deg, largest component"
            f" {report.max_value:.12g}",
            self,
        )
        table = Table(("polar_deg", "azimuth_deg", "value"), rows)
        return ExperimentResult(self.kind, self.seed, summary, {"spin_map": table})
