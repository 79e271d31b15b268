import math

import numpy as np
import pytest

from retrobohm.exceptions import InvalidDirection, NotHermitian
from retrobohm.physics import (
    X_AXIS,
    Z_AXIS,
    Direction,
    MultiSpinState,
    Outcome,
    SpinOp,
    Spinor,
    apply_on_particle,
    eigenspinor,
    inner,
    inner2,
    spin_operator,
    tensor,
)


def random_direction(rng: np.random.Generator) -> Direction:
    return Direction.from_vector(rng.normal(size=3))


def test_direction_is_normalized():
    direction = Direction(3.0, 0.0, 4.0)
    assert direction.nx == pytest.approx(0.6)
    assert direction.nz == pytest.approx(0.8)
    assert np.linalg.norm(direction.vector) == pytest.approx(1.0)


@pytest.mark.parametrize("vector", [(0.0, 0.0, 0.0), (1e-13, 0.0, 0.0)])
def test_direction_rejects_short_vectors(vector):
    with pytest.raises(InvalidDirection):
        Direction(*vector)


def test_direction_from_angles():
    assert np.allclose(Direction.from_angles(90, 0).vector, X_AXIS.vector)
    assert np.allclose(Direction.from_angles(0, 123).vector, Z_AXIS.vector)
    assert Direction.from_angles(60, 0).angle_to(Z_AXIS) == pytest.approx(math.pi / 3)


def test_angle_to_is_accurate_near_antiparallel():
    nearly = Direction.from_angles(180 - 1e-6, 0)
    assert Z_AXIS.angle_to(nearly) == pytest.approx(math.pi - math.radians(1e-6), abs=1e-12)
    assert Z_AXIS.angle_to(-Z_AXIS) == pytest.approx(math.pi)


@pytest.mark.parametrize(
    ("value", "expected"),
    [("+", Outcome.PLUS), ("-", Outcome.MINUS), (1, Outcome.PLUS), (-1, Outcome.MINUS)],
)
def test_outcome_parse(value, expected):
    assert Outcome.parse(value) is expected


def test_outcome_parse_rejects_unknown():
    with pytest.raises(ValueError, match="Unknown spin outcome"):
        Outcome.parse("sideways")


def test_eigenspinors_are_eigenvectors(rng):
    for _ in range(50):
        n = random_direction(rng)
        for outcome in Outcome:
            spinor = eigenspinor(n, outcome)
            image = spin_operator(n) @ spinor
            assert spinor.norm == pytest.approx(1.0)
            assert np.allclose(image.amplitudes, outcome.eigenvalue * spinor.amplitudes)


def test_eigenspinor_phase_convention(rng):
    for _ in range(50):
        spinor = eigenspinor(random_direction(rng), "+")
        first = spinor.a0 if abs(spinor.a0) > 1e-14 else spinor.a1
        assert first.imag == pytest.approx(0.0, abs=1e-15)
        assert first.real > 0


def test_eigenspinors_are_orthogonal(rng):
    for _ in range(1000):
        n = random_direction(rng)
        assert abs(inner(eigenspinor(n, "+"), eigenspinor(n, "-"))) < 1e-14


def test_eigenspinor_construction_is_deterministic(rng):
    for _ in range(100):
        vector = rng.normal(size=3)
        for sign in ("+", "-"):
            first = eigenspinor(Direction.from_vector(vector), sign)
            second = eigenspinor(Direction.from_vector(vector.copy()), sign)
            assert np.array_equal(first.amplitudes, second.amplitudes)


def test_reversed_direction_negates_the_operator(rng):
    for _ in range(100):
        n = random_direction(rng)
        reversed_n = Direction.from_vector(-n.vector)
        assert np.allclose(spin_operator(reversed_n).matrix, -spin_operator(n).matrix, atol=1e-15)
        assert np.allclose((-spin_operator(n)).matrix, spin_operator(reversed_n).matrix, atol=1e-15)


def test_spin_op_rejects_non_hermitian():
    with pytest.raises(NotHermitian):
        SpinOp(np.array([[0, 1], [0, 0]]))


def test_spinor_is_read_only():
    spinor = Spinor.from_components(1, 0)
    with pytest.raises(ValueError):
        spinor.amplitudes[0] = 2


def test_tensor_ordering():
    up = eigenspinor(Z_AXIS, "+")
    down = eigenspinor(Z_AXIS, "-")
    assert np.allclose(tensor(up, down).amplitudes, [0, 1, 0, 0])
    assert np.allclose(tensor(down, up).amplitudes, [0, 0, 1, 0])


def test_singlet_is_normalized_and_rotation_invariant(rng):
    singlet = MultiSpinState.singlet()
    assert singlet.is_normalized
    n = random_direction(rng)
    for outcome in Outcome:
        same = tensor(eigenspinor(n, outcome), eigenspinor(n, outcome))
        assert abs(inner2(same, singlet)) < 1e-14


def test_apply_on_particle_acts_on_the_named_particle():
    up = eigenspinor(Z_AXIS, "+")
    down = eigenspinor(Z_AXIS, "-")
    state = tensor(up, down)
    sz = spin_operator(Z_AXIS)
    assert np.allclose(apply_on_particle(sz, 1, state).amplitudes, 0.5 * state.amplitudes)
    assert np.allclose(apply_on_particle(sz, 2, state).amplitudes, -0.5 * state.amplitudes)


def test_apply_on_particle_rejects_bad_index():
    with pytest.raises(ValueError, match="1 or 2"):
        apply_on_particle(spin_operator(Z_AXIS), 3, MultiSpinState.singlet())
