"""Provide the worldline experiment."""
import numpy as np

from ..checks import Check, Summary, check_at_most, check_flag
from ..models.config import TrajectoriesConfig
from ..physics import FieldHistory, WavefunctionHistory, WorldLine, worldline
from .base import Experiment, ExperimentResult, Table
from .fields import boundary_pair


def misplaced_reversals(fields: FieldHistory, line: WorldLine) -> int:
    """Count reversals with no sign change of ``j0`` within one grid cell.

    :param fields: The fields the worldline was integrated through.
    :param line: The worldline.

    :returns: The number of reversal events not next to a zero crossing.

    """
    grid = fields.grid
    count = 0
    for event in line.reversal_events:
        density = fields.at(event.t).density
        index = int(round((event.x - grid.x_min) / grid.dx))
        window = density[max(index - 1, 0) : min(index + 2, grid.n_points)]
        if not window.min() <= 0 <= window.max():
            count += 1
    return count


def witness_start(
    fields: FieldHistory, hist_i: WavefunctionHistory, half_width: float
) -> tuple[float, float]:
    """Return the start point of the most negative ``j0`` near the middle of the run.

    The search covers ``half_width`` either side of the forward packet's centre at the
    middle slice, which is where a counter-moving partner crosses it.

    :returns: ``(x0, t0)``.

    """
    middle = len(fields.times) // 2
    centre = hist_i[middle].mean_position()
    x = fields.grid.x
    window = np.abs(x - centre) <= half_width
    index = int(np.argmin(np.where(window, fields.density[middle], np.inf)))
    return float(x[index]), float(fields.times[middle])


class TrajectoriesExperiment(Experiment[TrajectoriesConfig]):
    """Integrate causally symmetric worldlines and record where they double back."""

    kind = "trajectories"

    def checks(self) -> list[Check[Summary]]:
        """Return the criteria the summary must meet."""
        checks = [
            check_at_most(
                "reversals sit on j0 zero crossings", "misplaced_reversals", 0
            ),
            check_flag("worldlines reach the final boundary", "all_completed"),
        ]
        expected = self.params.expect_reversals
        if expected is not None:
            checks.append(
                check_flag(
                    "doubling back observed" if expected else "no doubling back",
                    "has_reversals",
                    expected,
                )
            )
        return checks

    def compute(self) -> ExperimentResult:
        """Build the fields and integrate every worldline."""
        params = self.params
        tolerances = self.tolerances
        hist_i, hist_f = boundary_pair(params.boundary, tolerances)
        fields = FieldHistory.causally_symmetric(hist_i, hist_f, tolerances.eps_overlap)
        middle_time = float(fields.times[len(fields.times) // 2])
        if params.starts:
            starts = [
                (start.x0, middle_time if start.t0 is None else start.t0)
                for start in params.starts
            ]
        else:
            starts = [witness_start(fields, hist_i, params.search_half_width)]

        lines = []
        rows = []
        misplaced = 0
        for number, (x0, t0) in enumerate(starts, 1):
            line = worldline(
                fields,
                x0,
                t0,
                eps_density=tolerances.eps_density,
                rtol=tolerances.rtol,
                atol=tolerances.atol,
                lambda_cap_factor=tolerances.lambda_cap_factor,
            )
            misplaced += misplaced_reversals(fields, line)
            lines.append(
                {
                    "id": number,
                    "x0": x0,
                    "t0": t0,
                    "completed": line.completed,
                    "reversal_count": line.reversal_count,
                    "reversal_offsets": [
                        event.offset_to_end for event in line.reversal_events
                    ],
                    "reversals": [
                        {"parameter": event.parameter, "t": event.t, "x": event.x}
                        for event in line.reversal_events
                    ],
                    "classification_histogram": line.classification_histogram(
                        tolerances.lightlike
                    ),
                }
            )
            rows.extend(
                (number, parameter, t, x, j0, j1)
                for (parameter, t, x), j0, j1 in zip(
                    line.samples, line.j0.tolist(), line.j1.tolist(), strict=True
                )
            )
            self.log.info(
                f"Worldline {number} from ({t0:.6g}, {x0:.6g}):"
                f" {line.reversal_count} reversals",
                self,
            )
        total = sum(line["reversal_count"] for line in lines)
        summary = {
            "start_count": len(starts),
            "total_reversals": total,
            "has_reversals": total > 0,
            "misplaced_reversals": misplaced,
            "all_completed": all(line["completed"] for line in lines),
            "min_j0": float(np.min(fields.density)),
            "worldlines": lines,
        }
        table = Table(("id", "parameter", "t", "x", "j0", "j1"), rows)
        return ExperimentResult(self.kind, self.seed, summary, {"worldlines": table})
