"""Reconstruct the hidden spin vector between two spin measurements.

The weak value of a component is linear in the component's direction, so evaluating
it on the three Cartesian axes gives the whole vector. A sphere sweep with a local
polish is kept as an independent check on that extraction.

"""
from __future__ import annotations

import logging
import math
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, replace

import numpy as np
from scipy.optimize import minimize

from ..const import ANTIPARALLEL_GUARD_DEG, EPS_OVERLAP
from ..exceptions import AntiparallelAxes
from .spin_algebra import X_AXIS, Y_AXIS, Z_AXIS, Direction, Outcome, eigenspinor
from .two_state import TwoStateContext, weak_spin_value

log = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class SpinVectorReport:
    """The spin vector implied by two successive outcomes.

    :ivar vector numpy.ndarray: The spin vector, in hbar.
    :ivar max_direction Direction: The direction of largest component.
    :ivar max_value float: The largest component, equal to the vector's length.
    :ivar omega float: The angle between the effective measurement axes, in radians.
    :ivar midplane_check float: ``|d.i - d.f|`` for the maximum direction ``d``.
    :ivar sweep_direction Direction | None: The maximum found by the sphere sweep.
    :ivar sweep_value float | None: The value found by the sphere sweep.

    """

    vector: np.ndarray
    max_direction: Direction
    max_value: float
    omega: float
    midplane_check: float
    i_axis: Direction
    f_axis: Direction
    sweep_direction: Direction | None = None
    sweep_value: float | None = None

    @property
    def predicted_max(self) -> float:
        """Return ``(1/2) / cos(omega / 2)``."""
        return 0.5 / math.cos(self.omega / 2)

    def component(self, h: Direction) -> float:
        """Return the spin component along ``h``."""
        return float(self.vector @ h.vector)


def _effective_axes(
    i_axis: Direction,
    f_axis: Direction,
    i_outcome: Outcome | str,
    f_outcome: Outcome | str,
) -> tuple[Direction, Direction]:
    # -1/2 along n is +1/2 along -n.
    if Outcome.parse(i_outcome) is Outcome.MINUS:
        i_axis = -i_axis
    if Outcome.parse(f_outcome) is Outcome.MINUS:
        f_axis = -f_axis
    return i_axis, f_axis


def component_map(
    i_axis: Direction,
    f_axis: Direction,
    directions: Iterable[Direction],
    *,
    i_outcome: Outcome | str = Outcome.PLUS,
    f_outcome: Outcome | str = Outcome.PLUS,
    delta_deg: float = ANTIPARALLEL_GUARD_DEG,
    eps_overlap: float = EPS_OVERLAP,
) -> list[tuple[Direction, float]]:
    """Return the spin component along each direction.

    :param i_axis: The first measurement axis.
    :param f_axis: The second measurement axis.
    :param directions: The components to evaluate.

    :returns: ``(direction, value)`` pairs in the input order.

    """
    ctx = measurement_context(
        i_axis,
        f_axis,
        i_outcome=i_outcome,
        f_outcome=f_outcome,
        delta_deg=delta_deg,
        eps_overlap=eps_overlap,
    )
    return [(direction, weak_spin_value(ctx, direction)) for direction in directions]


def hidden_spin_vector(
    i_axis: Direction,
    f_axis: Direction,
    *,
    i_outcome: Outcome | str = Outcome.PLUS,
    f_outcome: Outcome | str = Outcome.PLUS,
    delta_deg: float = ANTIPARALLEL_GUARD_DEG,
    eps_overlap: float = EPS_OVERLAP,
    sweep_resolution_deg: float | None = None,
) -> SpinVectorReport:
    """Return the spin vector between a measurement along ``i_axis`` and one along ``f_axis``.

    :param i_axis: The first measurement axis.
    :param f_axis: The second measurement axis.
    :param i_outcome: The first outcome; ``-`` is treated as ``+`` along ``-i_axis``.
    :param f_outcome: The second outcome; ``-`` is treated as ``+`` along ``-f_axis``.
    :param delta_deg: How close to antiparallel the effective axes may get.
    :param eps_overlap: The overlap guard passed to the two state context.
    :param sweep_resolution_deg: When given, also locate the maximum by a sphere sweep
        at this resolution and record it in the report.

    :returns: The spin vector report.

    """
    ctx = measurement_context(
        i_axis,
        f_axis,
        i_outcome=i_outcome,
        f_outcome=f_outcome,
        delta_deg=delta_deg,
        eps_overlap=eps_overlap,
    )
    effective_i, effective_f = _effective_axes(i_axis, f_axis, i_outcome, f_outcome)
    vector = np.array(
        [weak_spin_value(ctx, axis) for axis in (X_AXIS, Y_AXIS, Z_AXIS)]
    )
    max_value = float(np.linalg.norm(vector))
    max_direction = Direction.from_vector(vector)
    report = SpinVectorReport(
        vector=vector,
        max_direction=max_direction,
        max_value=max_value,
        omega=effective_i.angle_to(effective_f),
        midplane_check=abs(max_direction.dot(effective_i) - max_direction.dot(effective_f)),
        i_axis=effective_i,
        f_axis=effective_f,
    )
    if sweep_resolution_deg is not None:
        sweep_direction, sweep_value = sweep_maximum(ctx, sweep_resolution_deg)
        report = replace(
            report, sweep_direction=sweep_direction, sweep_value=sweep_value
        )
    log.debug(
        f"omega={math.degrees(report.omega):.6f} deg |v|={max_value:.12f}"
        f" predicted={report.predicted_max:.12f}"
    )
    return report


def measurement_context(
    i_axis: Direction,
    f_axis: Direction,
    *,
    i_outcome: Outcome | str = Outcome.PLUS,
    f_outcome: Outcome | str = Outcome.PLUS,
    delta_deg: float = ANTIPARALLEL_GUARD_DEG,
    eps_overlap: float = EPS_OVERLAP,
) -> TwoStateContext:
    """Return the two state context of two outcomes, guarding against antiparallel axes."""
    effective_i, effective_f = _effective_axes(i_axis, f_axis, i_outcome, f_outcome)
    omega = effective_i.angle_to(effective_f)
    if omega > math.radians(180.0 - delta_deg):
        msg = (
            f"Measurement axes are {math.degrees(omega):.4f} deg apart, beyond the"
            f" {180.0 - delta_deg:.4f} deg limit"
        )
        raise AntiparallelAxes(msg)
    return TwoStateContext(
        eigenspinor(effective_i, Outcome.PLUS),
        eigenspinor(effective_f, Outcome.PLUS),
        eps_overlap,
    )


def spherical_grid(resolution_deg: float) -> list[tuple[float, float, Direction]]:
    """Return ``(polar, azimuth, direction)`` over the sphere, angles in degrees.

    Polar angles run over [0, 180] inclusive and azimuths over [0, 360), in that
    nesting order.

    """
    n_polar = max(1, round(180.0 / resolution_deg))
    n_azimuth = max(1, round(360.0 / resolution_deg))
    grid = []
    for polar in np.linspace(0.0, 180.0, n_polar + 1):
        for azimuth in np.arange(n_azimuth) * (360.0 / n_azimuth):
            grid.append(
                (float(polar), float(azimuth), Direction.from_angles(polar, azimuth))
            )
    return grid


def sweep_maximum(
    ctx: TwoStateContext, resolution_deg: float = 5.0
) -> tuple[Direction, float]:
    """Locate the direction of the largest spin component by search.

    A coarse sweep over :func:`spherical_grid` picks the starting point (ties go to the
    lexicographically smallest ``(polar, azimuth)``), then a Nelder-Mead polish over
    the two angles refines it.

    :param ctx: The two state context.
    :param resolution_deg: The sweep resolution in degrees.

    :returns: The maximizing direction and its value.

    """
    best: tuple[float, float, float] | None = None
    for polar, azimuth, direction in spherical_grid(resolution_deg):
        value = weak_spin_value(ctx, direction)
        if best is None or value > best[0]:
            best = (value, polar, azimuth)

    def negative_value(angles: Sequence[float]) -> float:
        return -weak_spin_value(ctx, Direction.from_angles(angles[0], angles[1]))

    result = minimize(
        negative_value,
        x0=np.array([best[1], best[2]]),
        method="Nelder-Mead",
        options={"xatol": 1e-10, "fatol": 1e-15, "maxiter": 4000},
    )
    direction = Direction.from_angles(result.x[0], result.x[1])
    return direction, weak_spin_value(ctx, direction)
