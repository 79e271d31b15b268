"""Provide dense linear algebra for one and two spin-1/2 particles.

Units are natural (hbar = 1), so spin components come out in units of hbar. Single
particle amplitudes are in the z basis (up, down); two particle amplitudes are ordered
(up up, up down, down up, down down).

"""
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from ..const import HERMITIAN_TOLERANCE, PHASE_THRESHOLD
from ..exceptions import InvalidDirection, NotHermitian

SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)
IDENTITY = np.eye(2, dtype=complex)

MIN_DIRECTION_NORM = 1e-12


def _frozen(values: np.ndarray) -> np.ndarray:
    values.flags.writeable = False
    return values


class Outcome(Enum):
    """A spin-1/2 measurement outcome along some axis."""

    PLUS = "+"
    MINUS = "-"

    @classmethod
    def parse(cls, value: Outcome | str | int) -> Outcome:
        """Return an outcome from ``"+"``/``"-"``, ``+1``/``-1`` or an Outcome.

        :param value: The value to parse.

        :returns: The parsed outcome.

        """
        if isinstance(value, Outcome):
            return value
        if value in ("+", 1, "+1", "plus", "up"):
            return cls.PLUS
        if value in ("-", -1, "-1", "minus", "down"):
            return cls.MINUS
        msg = f"Unknown spin outcome: {value!r}"
        raise ValueError(msg)

    @property
    def eigenvalue(self) -> float:
        """Return the eigenvalue, in units of hbar."""
        return 0.5 * self.sign

    @property
    def sign(self) -> int:
        """Return +1 or -1."""
        return 1 if self is Outcome.PLUS else -1


@dataclass(frozen=True)
class Direction:
    """A unit 3-vector selecting a spin component.

    The components are normalized on construction; vectors shorter than 1e-12 are
    rejected.

    """

    nx: float
    ny: float
    nz: float

    @classmethod
    def from_angles(cls, polar_deg: float, azimuth_deg: float) -> Direction:
        """Build a direction from spherical angles in degrees.

        :param polar_deg: The angle from +z.
        :param azimuth_deg: The angle from +x in the xy-plane.

        :returns: The direction.

        """
        theta = math.radians(polar_deg)
        phi = math.radians(azimuth_deg)
        return cls(
            math.sin(theta) * math.cos(phi),
            math.sin(theta) * math.sin(phi),
            math.cos(theta),
        )

    @classmethod
    def from_vector(cls, vector: np.ndarray | tuple[float, float, float]) -> Direction:
        """Build a direction from any non-zero Cartesian vector.

        :param vector: The vector to normalize.

        :returns: The direction.

        """
        nx, ny, nz = (float(component) for component in vector)
        return cls(nx, ny, nz)

    def __neg__(self) -> Direction:
        """Return the opposite direction."""
        return Direction(-self.nx, -self.ny, -self.nz)

    def __post_init__(self):
        """Normalize the components."""
        norm = math.sqrt(self.nx**2 + self.ny**2 + self.nz**2)
        if not math.isfinite(norm) or norm < MIN_DIRECTION_NORM:
            msg = f"Cannot normalize direction ({self.nx}, {self.ny}, {self.nz})"
            raise InvalidDirection(msg)
        object.__setattr__(self, "nx", self.nx / norm)
        object.__setattr__(self, "ny", self.ny / norm)
        object.__setattr__(self, "nz", self.nz / norm)

    @property
    def azimuth(self) -> float:
        """Return the azimuth angle in radians, in [0, 2pi)."""
        return math.atan2(self.ny, self.nx) % (2 * math.pi)

    @property
    def polar(self) -> float:
        """Return the polar angle from +z in radians."""
        return math.acos(max(-1.0, min(1.0, self.nz)))

    @property
    def vector(self) -> np.ndarray:
        """Return the components as a numpy array."""
        return np.array([self.nx, self.ny, self.nz])

    def angle_to(self, other: Direction) -> float:
        """Return the angle to another direction, in radians.

        Uses atan2 of the cross and dot products, which stays accurate near 0 and pi.

        """
        a = self.vector
        b = other.vector
        return math.atan2(float(np.linalg.norm(np.cross(a, b))), float(a @ b))

    def dot(self, other: Direction) -> float:
        """Return the scalar product with another direction."""
        return float(self.vector @ other.vector)


X_AXIS = Direction(1.0, 0.0, 0.0)
Y_AXIS = Direction(0.0, 1.0, 0.0)
Z_AXIS = Direction(0.0, 0.0, 1.0)


@dataclass(frozen=True, eq=False)
class Spinor:
    """Complex amplitudes of a spin-1/2 state in the z basis.

    The norm is not constrained; operations that need a unit vector say so.

    """

    amplitudes: np.ndarray

    @classmethod
    def from_components(cls, a0: complex, a1: complex) -> Spinor:
        """Build a spinor from its up and down amplitudes."""
        return cls(np.array([a0, a1], dtype=complex))

    def __post_init__(self):
        """Copy the amplitudes into a read-only complex array."""
        amplitudes = np.array(self.amplitudes, dtype=complex).reshape(2)
        object.__setattr__(self, "amplitudes", _frozen(amplitudes))

    def __repr__(self) -> str:
        """Return a string representation of the spinor."""
        return f"Spinor({self.a0:.6g}, {self.a1:.6g})"

    @property
    def a0(self) -> complex:
        """Return the spin-up amplitude."""
        return complex(self.amplitudes[0])

    @property
    def a1(self) -> complex:
        """Return the spin-down amplitude."""
        return complex(self.amplitudes[1])

    @property
    def norm(self) -> float:
        """Return the Euclidean norm."""
        return float(np.linalg.norm(self.amplitudes))

    def normalized(self) -> Spinor:
        """Return the spinor scaled to unit norm."""
        return Spinor(self.amplitudes / self.norm)

    def with_phase(self, alpha: float) -> Spinor:
        """Return the spinor multiplied by ``exp(i alpha)``."""
        return Spinor(self.amplitudes * np.exp(1j * alpha))


@dataclass(frozen=True, eq=False)
class SpinOp:
    """A Hermitian 2x2 spin operator, in units of hbar."""

    matrix: np.ndarray

    def __matmul__(self, other: Spinor) -> Spinor:
        """Apply the operator to a spinor."""
        return Spinor(self.matrix @ other.amplitudes)

    def __neg__(self) -> SpinOp:
        """Return the negated operator."""
        return SpinOp(-self.matrix)

    def __post_init__(self):
        """Validate hermiticity and freeze the matrix."""
        matrix = np.array(self.matrix, dtype=complex).reshape(2, 2)
        if np.max(np.abs(matrix - matrix.conj().T)) > HERMITIAN_TOLERANCE:
            msg = f"Spin operator is not Hermitian: {matrix.tolist()}"
            raise NotHermitian(msg)
        object.__setattr__(self, "matrix", _frozen(matrix))


@dataclass(frozen=True, eq=False)
class MultiSpinState:
    """Amplitudes of a two spin-1/2 state, ordered (uu, ud, du, dd)."""

    amplitudes: np.ndarray

    @classmethod
    def singlet(cls) -> MultiSpinState:
        """Return the normalized singlet (ud - du) / sqrt(2)."""
        return cls(np.array([0, 1, -1, 0], dtype=complex) / math.sqrt(2))

    def __post_init__(self):
        """Copy the amplitudes into a read-only complex array."""
        amplitudes = np.array(self.amplitudes, dtype=complex).reshape(4)
        object.__setattr__(self, "amplitudes", _frozen(amplitudes))

    @property
    def coefficients(self) -> np.ndarray:
        """Return the amplitudes as a 2x2 matrix indexed by (particle 1, particle 2)."""
        return self.amplitudes.reshape(2, 2)

    @property
    def is_normalized(self) -> bool:
        """Return whether the squared amplitudes sum to one within 1e-12."""
        return abs(self.norm**2 - 1.0) <= 1e-12

    @property
    def norm(self) -> float:
        """Return the Euclidean norm."""
        return float(np.linalg.norm(self.amplitudes))

    def normalized(self) -> MultiSpinState:
        """Return the state scaled to unit norm."""
        return MultiSpinState(self.amplitudes / self.norm)


def apply_on_particle(op: SpinOp, k: int, s: MultiSpinState) -> MultiSpinState:
    """Apply a single particle operator to particle 1 or 2 of a two spin state.

    :param op: The operator.
    :param k: The particle it acts on, 1 or 2.
    :param s: The two spin state.

    :returns: ``(op x I) s`` for ``k = 1`` and ``(I x op) s`` for ``k = 2``.

    """
    if k == 1:
        full = np.kron(op.matrix, IDENTITY)
    elif k == 2:
        full = np.kron(IDENTITY, op.matrix)
    else:
        msg = f"Particle index must be 1 or 2, not {k}"
        raise ValueError(msg)
    return MultiSpinState(full @ s.amplitudes)


def canonical_phase(amplitudes: np.ndarray) -> np.ndarray:
    """Rotate the global phase so the first non-negligible component is real positive.

    :param amplitudes: The amplitudes to fix.

    :returns: A new array with the phase convention applied.

    """
    amplitudes = np.asarray(amplitudes, dtype=complex)
    scale = np.max(np.abs(amplitudes))
    for component in amplitudes:
        if abs(component) > PHASE_THRESHOLD * scale:
            return amplitudes * (abs(component) / component)
    return amplitudes.copy()


def eigenspinor(n: Direction, sign: Outcome | str | int) -> Spinor:
    """Return the unit eigenspinor of the spin component along ``n``.

    :param n: The direction of the spin component.
    :param sign: Which eigenvalue, +1/2 or -1/2.

    :returns: The eigenspinor with the canonical phase convention.

    """
    outcome = Outcome.parse(sign)
    _, vectors = np.linalg.eigh(spin_operator(n).matrix)
    # eigh sorts eigenvalues ascending: column 0 is -1/2, column 1 is +1/2.
    vector = vectors[:, 1 if outcome is Outcome.PLUS else 0]
    vector = canonical_phase(vector / np.linalg.norm(vector))
    return Spinor(vector)


def inner(bra: Spinor, ket: Spinor) -> complex:
    """Return the inner product, conjugate linear in ``bra``."""
    return complex(np.vdot(bra.amplitudes, ket.amplitudes))


def inner2(bra: MultiSpinState, ket: MultiSpinState) -> complex:
    """Return the two particle inner product, conjugate linear in ``bra``."""
    return complex(np.vdot(bra.amplitudes, ket.amplitudes))


def spin_operator(n: Direction) -> SpinOp:
    """Return the spin component operator ``(n . sigma) / 2`` along a direction."""
    return SpinOp(0.5 * (n.nx * SIGMA_X + n.ny * SIGMA_Y + n.nz * SIGMA_Z))


def tensor(p1: Spinor, p2: Spinor) -> MultiSpinState:
    """Return the product state of two single particle spinors."""
    return MultiSpinState(np.kron(p1.amplitudes, p2.amplitudes))
