"""Provide the wavefunction experiments: plain evolution and two-boundary fields."""
import numpy as np

from ..checks import Check, Summary, check_at_most
from ..models.config import BoundarySpec, EvolveConfig, FieldsConfig, Tolerances
from ..physics import (
    FieldHistory,
    FieldPair,
    WavefunctionHistory,
    continuity_residual,
    evolve,
    evolve_final_backward,
    evolve_history,
    make_gaussian,
)
from .base import Experiment, ExperimentResult, Table


def boundary_pair(
    spec: BoundarySpec, tolerances: Tolerances
) -> tuple[WavefunctionHistory, WavefunctionHistory]:
    """Evolve the initial packet forward and the final state backward.

    The final state is the evolved initial packet plus ``partner_weight`` times the
    evolved partner, normalized.

    :param spec: The boundary setup.
    :param tolerances: The norm and tail tolerances for every evolution.

    :returns: The forward and backward histories, on the same times.

    """
    grid = spec.grid.to_grid()
    potential = spec.potential.to_array(grid)
    options = {"norm_tolerance": tolerances.norm_drift, "tail_tolerance": tolerances.tail}
    psi_i = make_gaussian(
        grid,
        spec.initial.x0,
        spec.initial.sigma,
        spec.initial.k,
        tail_tolerance=tolerances.tail,
    )
    hist_i = evolve_history(
        psi_i, spec.dt, spec.steps, potential, stride=spec.stride, **options
    )
    final = hist_i.final
    if spec.partner_weight:
        partner = make_gaussian(
            grid,
            spec.partner.x0,
            spec.partner.sigma,
            spec.partner.k,
            tail_tolerance=tolerances.tail,
        )
        partner_final = evolve(partner, spec.dt, spec.steps, potential, **options)
        final = final.with_amplitudes(
            final.amplitudes + spec.partner_weight * partner_final.amplitudes
        ).normalized()
    hist_f = evolve_final_backward(
        final, spec.dt, spec.steps, potential, stride=spec.stride, **options
    )
    return hist_i, hist_f


def field_rows(fields: FieldHistory, every: int = 1) -> list[tuple[float, ...]]:
    """Return ``(t, x, density, current)`` rows for every ``every``-th slice."""
    x = fields.grid.x.tolist()
    rows = []
    for index in range(0, len(fields.times), every):
        t = float(fields.times[index])
        rows.extend(
            (t, position, density, current)
            for position, density, current in zip(
                x,
                fields.density[index].tolist(),
                fields.current[index].tolist(),
                strict=True,
            )
        )
    return rows


def max_continuity_residual(fields: FieldHistory) -> float:
    """Return the largest continuity residual over the interior slices."""
    if len(fields.times) < 3:
        return 0.0
    pairs = [
        FieldPair(fields.grid, density, current, float(t))
        for t, density, current in zip(
            fields.times, fields.density, fields.current, strict=True
        )
    ]
    return max(
        float(np.max(np.abs(continuity_residual(*pairs[index - 1 : index + 2]))))
        for index in range(1, len(pairs) - 1)
    )


class EvolveExperiment(Experiment[EvolveConfig]):
    """Evolve a Gaussian packet and tabulate its density and current."""

    kind = "evolve"

    def checks(self) -> list[Check[Summary]]:
        """Return the criteria the summary must meet."""
        checks = [
            check_at_most("norm is conserved", "norm_drift", self.tolerances.norm_drift)
        ]
        if self.params.round_trip:
            checks.append(
                check_at_most(
                    "backward evolution undoes forward evolution",
                    "round_trip_deviation",
                    self.tolerances.identity,
                )
            )
        return checks

    def compute(self) -> ExperimentResult:
        """Run the evolution."""
        params = self.params
        grid = params.grid.to_grid()
        potential = params.potential.to_array(grid)
        options = {
            "norm_tolerance": self.tolerances.norm_drift,
            "tail_tolerance": self.tolerances.tail,
        }
        packet = params.packet
        psi = make_gaussian(
            grid, packet.x0, packet.sigma, packet.k, tail_tolerance=self.tolerances.tail
        )
        history = evolve_history(
            psi, params.dt, params.steps, potential, stride=params.stride, **options
        )
        final = history.final
        fields = FieldHistory.standard(history)
        summary = {
            "grid": grid.to_dict(),
            "slices": len(history),
            "final_time": final.time,
            "norm_drift": abs(final.norm - psi.norm),
            "mean_position": final.mean_position(),
            "mean_momentum": final.mean_momentum(),
            "width": final.width(),
            "max_continuity_residual": max_continuity_residual(fields),
        }
        if params.round_trip:
            back = evolve_final_backward(
                final,
                params.dt,
                params.steps,
                potential,
                stride=max(params.steps, 1),
                **options,
            )
            summary["round_trip_deviation"] = float(
                np.max(np.abs(back.initial.amplitudes - psi.amplitudes))
            )
        self.log.info(
            f"Evolved to t={final.time:.6g}: <x>={summary['mean_position']:.6g},"
            f" width {summary['width']:.6g}",
            self,
        )
        return ExperimentResult(
            self.kind,
            self.seed,
            summary,
            {"evolve": Table(("t", "x", "density", "current"), field_rows(fields))},
            {"initial": psi.to_snapshot(), "final": final.to_snapshot()},
        )


class FieldsExperiment(Experiment[FieldsConfig]):
    """Tabulate the causally symmetric ``(j0, j1)`` between two boundary states."""

    kind = "fields"

    def checks(self) -> list[Check[Summary]]:
        """Return the criteria the summary must meet."""
        identity = self.tolerances.identity
        return [
            check_at_most(
                "overlap is the same at every time", "overlap_variation", identity
            ),
            check_at_most("j0 integrates to one", "j0_integral_deviation", identity),
        ]

    def compute(self) -> ExperimentResult:
        """Build both histories and their fields."""
        boundary = self.params.boundary
        hist_i, hist_f = boundary_pair(boundary, self.tolerances)
        fields = FieldHistory.causally_symmetric(
            hist_i, hist_f, self.tolerances.eps_overlap
        )
        standard = FieldHistory.standard(hist_i)
        grid = fields.grid
        overlaps = np.array(
            [
                grid.integrate(psi_f.amplitudes.conj() * psi_i.amplitudes)
                for psi_i, psi_f in zip(hist_i, hist_f, strict=True)
            ]
        )
        integrals = np.array([grid.integrate(row) for row in fields.density])
        negative = fields.density < 0
        summary = {
            "grid": grid.to_dict(),
            "slices": len(fields.times),
            "overlap": complex(overlaps[0]),
            "overlap_variation": float(np.max(np.abs(overlaps - overlaps[0]))),
            "j0_integral_deviation": float(np.max(np.abs(integrals - 1.0))),
            "min_j0": float(np.min(fields.density)),
            "negative_j0_fraction": float(np.count_nonzero(negative) / negative.size),
            "max_continuity_residual": max_continuity_residual(fields),
            "max_continuity_residual_standard": max_continuity_residual(standard),
        }
        self.log.info(
            f"|<f|i>| = {abs(summary['overlap']):.6g}, min j0 = {summary['min_j0']:.6g}",
            self,
        )
        return ExperimentResult(
            self.kind,
            self.seed,
            summary,
            {
                "fields": Table(
                    ("t", "x", "j0", "j1"), field_rows(fields, self.params.csv_every)
                ),
                "fields_standard": Table(
                    ("t", "x", "density", "current"),
                    field_rows(standard, self.params.csv_every),
                ),
            },
            {"initial": hist_i.initial.to_snapshot(), "final": hist_f.final.to_snapshot()},
        )
