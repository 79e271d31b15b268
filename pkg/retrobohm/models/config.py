"""Provide the experiment configuration models.

A config file is TOML or JSON with the top-level keys ``kind``, ``seed``, ``output``,
``tolerances`` and ``params``. Unknown keys are rejected everywhere.

"""
import json
import math
import sys
from collections.abc import Mapping
from pathlib import Path
from typing import Annotated, Any, Literal

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

import numpy as np
from pydantic import (
    BaseModel,
    ConfigDict,
    Field,
    TypeAdapter,
    ValidationError,
    model_validator,
)

from .. import const
from ..exceptions import ConfigInvalid, InvalidDirection
from ..physics import (
    Direction,
    Grid,
    MultiSpinState,
    Outcome,
    Spinor,
    eigenspinor,
    tensor,
)

ComplexPair = tuple[float, float]
OutcomeSign = Literal["+", "-"]

AXIS_NAMES = {
    "x": (1.0, 0.0, 0.0),
    "y": (0.0, 1.0, 0.0),
    "z": (0.0, 0.0, 1.0),
    "-x": (-1.0, 0.0, 0.0),
    "-y": (0.0, -1.0, 0.0),
    "-z": (0.0, 0.0, -1.0),
}


class StrictModel(BaseModel):
    """Base model that rejects unknown keys."""

    model_config = ConfigDict(extra="forbid")


class DirectionSpec(StrictModel):
    """A direction given as ``[x, y, z]``, an axis name, or spherical angles in degrees.

    :ivar vector tuple[float, float, float] | None: Cartesian components.
    :ivar polar float | None: The angle from +z, in degrees.
    :ivar azimuth float | None: The angle from +x in the xy-plane, in degrees.

    """

    vector: tuple[float, float, float] | None = None
    polar: float | None = None
    azimuth: float | None = None

    @model_validator(mode="before")
    @classmethod
    def _expand_shorthand(cls, data: Any) -> Any:
        if isinstance(data, str):
            if data not in AXIS_NAMES:
                msg = f"Unknown axis name {data!r}; use one of {', '.join(AXIS_NAMES)}"
                raise ValueError(msg)
            return {"vector": AXIS_NAMES[data]}
        if isinstance(data, list | tuple):
            return {"vector": data}
        return data

    @model_validator(mode="after")
    def _check_form(self) -> "DirectionSpec":
        has_angles = self.polar is not None or self.azimuth is not None
        if self.vector is not None and has_angles:
            msg = "Give either vector or polar/azimuth, not both"
            raise ValueError(msg)
        if self.vector is None and (self.polar is None or self.azimuth is None):
            msg = "A direction needs a vector or both polar and azimuth"
            raise ValueError(msg)
        try:
            self.to_direction()
        except InvalidDirection as error:
            raise ValueError(str(error)) from None
        return self

    def to_direction(self) -> Direction:
        """Return the normalized direction."""
        if self.vector is not None:
            return Direction.from_vector(self.vector)
        return Direction.from_angles(self.polar, self.azimuth)


class SpinorSpec(StrictModel):
    """A spin-1/2 state: an eigenstate ``{axis, sign}`` or explicit ``amplitudes``.

    Explicit amplitudes are ``[[re, im], [re, im]]`` in the z basis and are normalized.

    """

    axis: DirectionSpec | None = None
    sign: OutcomeSign = "+"
    amplitudes: tuple[ComplexPair, ComplexPair] | None = None

    @model_validator(mode="before")
    @classmethod
    def _expand_shorthand(cls, data: Any) -> Any:
        if isinstance(data, str):
            return {"axis": data}
        return data

    @model_validator(mode="after")
    def _check_form(self) -> "SpinorSpec":
        if (self.axis is None) == (self.amplitudes is None):
            msg = "A spinor needs exactly one of axis or amplitudes"
            raise ValueError(msg)
        if self.amplitudes is not None and not any(any(pair) for pair in self.amplitudes):
            msg = "Spinor amplitudes are all zero"
            raise ValueError(msg)
        return self

    def to_spinor(self) -> Spinor:
        """Return the normalized spinor."""
        if self.axis is not None:
            return eigenspinor(self.axis.to_direction(), self.sign)
        return Spinor([complex(*pair) for pair in self.amplitudes]).normalized()


class TwoSpinSpec(StrictModel):
    """A two spin state: ``{preset = "singlet"}``, a product or explicit amplitudes.

    Explicit amplitudes are four ``[re, im]`` pairs ordered (uu, ud, du, dd) and are
    normalized.

    """

    preset: Literal["singlet"] | None = None
    product: tuple[SpinorSpec, SpinorSpec] | None = None
    amplitudes: tuple[ComplexPair, ComplexPair, ComplexPair, ComplexPair] | None = None

    @model_validator(mode="after")
    def _check_form(self) -> "TwoSpinSpec":
        given = [
            value
            for value in (self.preset, self.product, self.amplitudes)
            if value is not None
        ]
        if len(given) != 1:
            msg = "A two spin state needs exactly one of preset, product or amplitudes"
            raise ValueError(msg)
        if self.amplitudes is not None and not any(any(pair) for pair in self.amplitudes):
            msg = "Two spin amplitudes are all zero"
            raise ValueError(msg)
        return self

    def to_state(self) -> MultiSpinState:
        """Return the normalized two spin state."""
        if self.preset == "singlet":
            return MultiSpinState.singlet()
        if self.product is not None:
            first, second = self.product
            return tensor(first.to_spinor(), second.to_spinor())
        return MultiSpinState([complex(*pair) for pair in self.amplitudes]).normalized()


class GridSpec(StrictModel):
    """A periodic grid ``[x_min, x_max)`` with ``n_points`` points."""

    x_min: float
    x_max: float
    n_points: int = Field(ge=16)

    @model_validator(mode="after")
    def _check_extent(self) -> "GridSpec":
        if not self.x_max > self.x_min:
            msg = f"x_max ({self.x_max}) must be greater than x_min ({self.x_min})"
            raise ValueError(msg)
        return self

    def to_grid(self) -> Grid:
        """Return the grid."""
        return Grid(self.x_min, self.x_max, self.n_points)


class PacketSpec(StrictModel):
    """A Gaussian ``exp(-(x - x0)^2 / (2 sigma^2) + ikx)``."""

    x0: float = 0.0
    sigma: float = Field(1.0, gt=0)
    k: float = 0.0


class PotentialSpec(StrictModel):
    """A real potential on the grid.

    ``harmonic`` is ``omega^2 (x - center)^2 / 2``; ``barrier`` is ``height`` on
    ``|x - center| < half_width``.

    """

    kind: Literal["free", "harmonic", "barrier"] = "free"
    omega: float = Field(1.0, gt=0)
    height: float = 1.0
    center: float = 0.0
    half_width: float = Field(0.5, gt=0)

    def to_array(self, grid: Grid) -> np.ndarray | None:
        """Return the potential on the grid, or ``None`` when free."""
        x = grid.x
        if self.kind == "harmonic":
            return 0.5 * self.omega**2 * (x - self.center) ** 2
        if self.kind == "barrier":
            return np.where(np.abs(x - self.center) < self.half_width, self.height, 0.0)
        return None


class Tolerances(StrictModel):
    """Numerical thresholds, each overridable per run."""

    eps_overlap: float = Field(
        const.EPS_OVERLAP,
        gt=0,
        description="The smallest allowed |<f|i>| before a post-selection is rejected.",
    )
    eps_density: float = Field(
        const.EPS_DENSITY,
        gt=0,
        description="Densities below this fraction of the largest density are nodes.",
    )
    antiparallel_guard_deg: float = Field(
        const.ANTIPARALLEL_GUARD_DEG,
        ge=0,
        lt=180,
        description="How close to antiparallel two measurement axes may get.",
    )
    rtol: float = Field(const.RTOL, gt=0, description="Trajectory relative tolerance.")
    atol: float = Field(const.ATOL, gt=0, description="Trajectory absolute tolerance.")
    ensemble_rtol: float = Field(
        const.ENSEMBLE_RTOL, gt=0, description="Ensemble relative tolerance."
    )
    ensemble_atol: float = Field(
        const.ENSEMBLE_ATOL, gt=0, description="Ensemble absolute tolerance."
    )
    born_n_sigma: float = Field(
        const.BORN_N_SIGMA,
        ge=0,
        description="How many binomial deviations a Born frequency may miss by.",
    )
    ks_coefficient: float = Field(
        const.KS_COEFFICIENT,
        gt=0,
        description="The KS critical value is this coefficient over sqrt(n).",
    )
    appendix_relative: float = Field(
        const.APPENDIX_RELATIVE_TOLERANCE,
        gt=0,
        description="Allowed deviation of the weighted current, relative to max |j|.",
    )
    identity: float = Field(
        const.IDENTITY_TOLERANCE,
        gt=0,
        description="Allowed deviation for exact identities.",
    )
    norm_drift: float = Field(
        const.NORM_DRIFT_TOLERANCE, gt=0, description="Allowed change of the norm."
    )
    tail: float = Field(
        const.TAIL_TOLERANCE,
        gt=0,
        description="Allowed |psi| at the grid edges relative to max |psi|.",
    )
    completeness: float = Field(
        const.COMPLETENESS_TOLERANCE,
        gt=0,
        description="Allowed resolution of identity residual of a basis.",
    )
    packet_overlap: float = Field(
        const.PACKET_OVERLAP_TOLERANCE,
        gt=0,
        description="Allowed overlap between final outcome packets.",
    )
    lightlike: float = Field(
        const.LIGHTLIKE_TOLERANCE,
        ge=0,
        description="Relative width of the lightlike band.",
    )
    lambda_cap_factor: float = Field(
        const.LAMBDA_CAP_FACTOR,
        gt=1,
        description="Worldline parameter cap as a multiple of the naive span.",
    )


class BoundarySpec(StrictModel):
    """An initial packet and a final state built from it and a partner packet.

    The final state at ``duration`` is the normalized sum of the evolved initial packet
    and ``partner_weight`` times the evolved partner. A weight of zero makes the final
    state equal to the evolved initial state.

    """

    grid: GridSpec = Field(
        default_factory=lambda: GridSpec(x_min=-30.0, x_max=30.0, n_points=2048)
    )
    initial: PacketSpec = Field(
        default_factory=lambda: PacketSpec(x0=-4.0, sigma=2.0, k=2.0)
    )
    partner: PacketSpec = Field(
        default_factory=lambda: PacketSpec(x0=4.0, sigma=2.0, k=-2.0)
    )
    partner_weight: float = 2.0
    potential: PotentialSpec = Field(default_factory=PotentialSpec)
    dt: float = Field(0.01, gt=0)
    duration: float = Field(4.0, gt=0)
    stride: int = Field(1, ge=1)

    @model_validator(mode="after")
    def _check_schedule(self) -> "BoundarySpec":
        steps = self.steps
        if not math.isclose(steps * self.dt, self.duration, rel_tol=1e-9):
            msg = f"duration {self.duration} is not a whole number of steps of {self.dt}"
            raise ValueError(msg)
        if steps % self.stride:
            msg = f"stride {self.stride} must divide the {steps} steps"
            raise ValueError(msg)
        return self

    @property
    def steps(self) -> int:
        """Return the number of evolution steps between the boundaries."""
        return round(self.duration / self.dt)


def _axis(name: str) -> DirectionSpec:
    return DirectionSpec.model_validate(name)


def _axes() -> list[DirectionSpec]:
    return [_axis("x"), _axis("y"), _axis("z")]


class WeakValueParams(StrictModel):
    """Parameters of the ``weak-value`` experiment."""

    pre: SpinorSpec = Field(default_factory=lambda: SpinorSpec(axis=_axis("z")))
    post: SpinorSpec = Field(default_factory=lambda: SpinorSpec(axis=_axis("x")))
    components: list[DirectionSpec] = Field(default_factory=_axes, min_length=1)


class EntangledValueParams(StrictModel):
    """Parameters of the ``entangled-value`` experiment."""

    initial: TwoSpinSpec = Field(default_factory=lambda: TwoSpinSpec(preset="singlet"))
    axis1: DirectionSpec = Field(default_factory=lambda: _axis("z"))
    axis2: DirectionSpec = Field(default_factory=lambda: _axis("x"))
    outcome1: OutcomeSign = "+"
    outcome2: OutcomeSign = "+"
    components: list[DirectionSpec] = Field(default_factory=_axes, min_length=1)


class SpinMapParams(StrictModel):
    """Parameters of the ``spin-map`` experiment."""

    i_axis: DirectionSpec = Field(default_factory=lambda: _axis("z"))
    f_axis: DirectionSpec = Field(default_factory=lambda: _axis("x"))
    i_outcome: OutcomeSign = "+"
    f_outcome: OutcomeSign = "+"
    resolution_deg: float = Field(5.0, gt=0, le=90)
    sweep: bool = True
    random_directions: int = Field(500, ge=0)


class EvolveParams(StrictModel):
    """Parameters of the ``evolve`` experiment."""

    grid: GridSpec = Field(
        default_factory=lambda: GridSpec(x_min=-20.0, x_max=20.0, n_points=1024)
    )
    packet: PacketSpec = Field(default_factory=PacketSpec)
    potential: PotentialSpec = Field(default_factory=PotentialSpec)
    dt: float = Field(0.01, gt=0)
    steps: int = Field(100, ge=0)
    stride: int = Field(10, ge=1)
    round_trip: bool = True

    @model_validator(mode="after")
    def _check_stride(self) -> "EvolveParams":
        if self.steps % self.stride:
            msg = f"stride {self.stride} must divide steps {self.steps}"
            raise ValueError(msg)
        return self


class FieldsParams(StrictModel):
    """Parameters of the ``fields`` experiment.

    ``csv_every`` keeps every n-th time slice in the field tables.

    """

    boundary: BoundarySpec = Field(default_factory=BoundarySpec)
    csv_every: int = Field(20, ge=1)


class StartSpec(StrictModel):
    """A worldline start point; ``t0`` defaults to the middle of the run."""

    x0: float
    t0: float | None = None


class TrajectoriesParams(StrictModel):
    """Parameters of the ``trajectories`` experiment.

    Without explicit ``starts`` one worldline starts at the most negative ``j0`` within
    ``search_half_width`` of the initial and partner packets' meeting point.

    """

    boundary: BoundarySpec = Field(default_factory=BoundarySpec)
    starts: list[StartSpec] = Field(default_factory=list)
    search_half_width: float = Field(1.5, gt=0)
    expect_reversals: bool | None = None


class BornCheckParams(StrictModel):
    """Parameters of the ``born-check`` experiment."""

    coefficients: list[ComplexPair] = Field(
        default_factory=lambda: [(math.sqrt(0.3), 0.0), (math.sqrt(0.7), 0.0)],
        min_length=2,
    )
    n_particles: int = Field(10_000, ge=1)
    grid: GridSpec = Field(
        default_factory=lambda: GridSpec(x_min=-32.0, x_max=32.0, n_points=8192)
    )
    sigma: float = Field(1.0, gt=0)
    x0: float = 0.0
    k_sep: float = Field(5.0, gt=0)
    t_split: float = Field(0.0, ge=0)
    duration: float = Field(2.0, gt=0)
    dt: float = Field(0.01, gt=0)
    random_setups: int = Field(0, ge=0)
    min_passes: int | None = Field(None, ge=0)

    @model_validator(mode="after")
    def _check_coefficients(self) -> "BornCheckParams":
        total = sum(re * re + im * im for re, im in self.coefficients)
        if abs(total - 1.0) > 1e-6:
            msg = f"Squared coefficients sum to {total!r}, not 1"
            raise ValueError(msg)
        if self.t_split >= self.duration:
            msg = f"t_split ({self.t_split}) must be before the end ({self.duration})"
            raise ValueError(msg)
        for name in ("t_split", "duration"):
            value = getattr(self, name)
            if not math.isclose(
                round(value / self.dt) * self.dt, value, rel_tol=1e-9, abs_tol=1e-12
            ):
                msg = f"{name} {value} is not a whole number of steps of {self.dt}"
                raise ValueError(msg)
        return self


class AppendixCheckParams(StrictModel):
    """Parameters of the ``appendix-check`` experiment."""

    grid: GridSpec = Field(
        default_factory=lambda: GridSpec(x_min=-20.0, x_max=20.0, n_points=1024)
    )
    packet: PacketSpec = Field(default_factory=lambda: PacketSpec(k=1.0))
    basis: Literal["plane-wave", "containing-initial"] = "plane-wave"


class EquivarianceParams(StrictModel):
    """Parameters of the ``equivariance`` experiment."""

    grid: GridSpec = Field(
        default_factory=lambda: GridSpec(x_min=-20.0, x_max=20.0, n_points=1024)
    )
    packet: PacketSpec = Field(default_factory=PacketSpec)
    dt: float = Field(0.01, gt=0)
    t_check: float = Field(1.0, ge=0)
    n_particles: int = Field(10_000, ge=1)
    initial_distribution: Literal["born", "uniform"] = "born"
    uniform_half_width: float = Field(3.0, gt=0)

    @model_validator(mode="after")
    def _check_schedule(self) -> "EquivarianceParams":
        if not math.isclose(
            self.steps * self.dt, self.t_check, rel_tol=1e-9, abs_tol=1e-12
        ):
            msg = f"t_check {self.t_check} is not a whole number of steps of {self.dt}"
            raise ValueError(msg)
        return self

    @property
    def steps(self) -> int:
        """Return the number of evolution steps up to ``t_check``."""
        return round(self.t_check / self.dt)


class BaseExperimentConfig(StrictModel):
    """Keys shared by every experiment kind.

    :ivar seed int | None: The random seed; one is drawn and recorded when absent.
    :ivar output Path | None: The output directory.
    :ivar tolerances Tolerances: Numerical thresholds.

    """

    seed: int | None = Field(None, ge=0, lt=2**64)
    output: Path | None = None
    tolerances: Tolerances = Field(default_factory=Tolerances)


class WeakValueConfig(BaseExperimentConfig):
    """Config of the ``weak-value`` experiment."""

    kind: Literal["weak-value"] = "weak-value"
    params: WeakValueParams = Field(default_factory=WeakValueParams)


class EntangledValueConfig(BaseExperimentConfig):
    """Config of the ``entangled-value`` experiment."""

    kind: Literal["entangled-value"] = "entangled-value"
    params: EntangledValueParams = Field(default_factory=EntangledValueParams)


class SpinMapConfig(BaseExperimentConfig):
    """Config of the ``spin-map`` experiment."""

    kind: Literal["spin-map"] = "spin-map"
    params: SpinMapParams = Field(default_factory=SpinMapParams)


class EvolveConfig(BaseExperimentConfig):
    """Config of the ``evolve`` experiment."""

    kind: Literal["evolve"] = "evolve"
    params: EvolveParams = Field(default_factory=EvolveParams)


class FieldsConfig(BaseExperimentConfig):
    """Config of the ``fields`` experiment."""

    kind: Literal["fields"] = "fields"
    params: FieldsParams = Field(default_factory=FieldsParams)


class TrajectoriesConfig(BaseExperimentConfig):
    """Config of the ``trajectories`` experiment."""

    kind: Literal["trajectories"] = "trajectories"
    params: TrajectoriesParams = Field(default_factory=TrajectoriesParams)


class BornCheckConfig(BaseExperimentConfig):
    """Config of the ``born-check`` experiment."""

    kind: Literal["born-check"] = "born-check"
    params: BornCheckParams = Field(default_factory=BornCheckParams)


class AppendixCheckConfig(BaseExperimentConfig):
    """Config of the ``appendix-check`` experiment."""

    kind: Literal["appendix-check"] = "appendix-check"
    params: AppendixCheckParams = Field(default_factory=AppendixCheckParams)


class EquivarianceConfig(BaseExperimentConfig):
    """Config of the ``equivariance`` experiment."""

    kind: Literal["equivariance"] = "equivariance"
    params: EquivarianceParams = Field(default_factory=EquivarianceParams)


ExperimentConfig = Annotated[
    WeakValueConfig
    | EntangledValueConfig
    | SpinMapConfig
    | EvolveConfig
    | FieldsConfig
    | TrajectoriesConfig
    | BornCheckConfig
    | AppendixCheckConfig
    | EquivarianceConfig,
    Field(discriminator="kind"),
]

CONFIG_MODELS: dict[str, type[BaseExperimentConfig]] = {
    model.model_fields["kind"].default: model
    for model in (
        WeakValueConfig,
        EntangledValueConfig,
        SpinMapConfig,
        EvolveConfig,
        FieldsConfig,
        TrajectoriesConfig,
        BornCheckConfig,
        AppendixCheckConfig,
        EquivarianceConfig,
    )
}

_adapter = TypeAdapter(ExperimentConfig)


def load_config(path: Path) -> BaseExperimentConfig:
    """Load and validate a TOML or JSON config file.

    Files ending in ``.json`` are read as JSON, everything else as TOML.

    :param path: The file to load.

    :returns: The validated config.

    """
    try:
        if path.suffix.lower() == ".json":
            with path.open(encoding="utf-8") as config_file:
                data = json.load(config_file)
        else:
            with path.open("rb") as config_file:
                data = tomllib.load(config_file)
    except (OSError, json.JSONDecodeError, tomllib.TOMLDecodeError) as error:
        msg = f"Could not read config {path}: {error}"
        raise ConfigInvalid(msg) from None
    return parse_config(data, source=str(path))


def parse_config(data: Mapping[str, Any], source: str = "config") -> BaseExperimentConfig:
    """Validate config data.

    :param data: The parsed config.
    :param source: Where the data came from, for error messages.

    :returns: The validated config.

    """
    try:
        return _adapter.validate_python(data)
    except ValidationError as error:
        msg = f"Invalid {source}:\n{error}"
        raise ConfigInvalid(msg) from None


def resolved_config(config: BaseExperimentConfig) -> dict[str, Any]:
    """Return the config with every default filled in, as JSON types.

    Feeding this back through :func:`parse_config` yields an identical config.

    """
    return config.model_dump(mode="json", exclude_none=True)


def outcome(sign: OutcomeSign) -> Outcome:
    """Return the outcome for a config sign."""
    return Outcome.parse(sign)
