"""Provide two-boundary spin values: weak values, Born probabilities and conditioning.

A spin component between a preparation ``|i>`` and a later outcome ``|f>`` takes the
value ``Re <f|S_h|i> / <f|i>``. For an entangled pair, the value of particle 2's
component given both outcomes reduces to the same single particle expression once
particle 2 is assigned the state conditioned on particle 1's outcome.

"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np

from ..const import EPS_OVERLAP
from ..exceptions import ZeroBranch, ZeroOverlap
from .spin_algebra import (
    Direction,
    MultiSpinState,
    Outcome,
    Spinor,
    apply_on_particle,
    canonical_phase,
    eigenspinor,
    inner,
    inner2,
    spin_operator,
    tensor,
)

log = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class TwoStateContext:
    """A pre-selected state, a post-selected state and their overlap ``a = <post|pre>``.

    :ivar pre Spinor: The initial state ``|i>``.
    :ivar post Spinor: The final outcome state ``|f_n>``.
    :ivar eps_overlap float: The smallest allowed normalized ``|<f|i>|``.

    """

    pre: Spinor
    post: Spinor
    eps_overlap: float = EPS_OVERLAP
    overlap: complex = field(init=False)

    def __post_init__(self):
        """Compute the overlap and reject orthogonal pairs."""
        overlap = inner(self.post, self.pre)
        scale = self.pre.norm * self.post.norm
        if scale == 0 or abs(overlap) <= self.eps_overlap * scale:
            msg = (
                f"|<f|i>| = {abs(overlap):.3e} is below {self.eps_overlap:.1e}: the"
                " post-selection is incompatible with the pre-selection"
            )
            raise ZeroOverlap(msg)
        object.__setattr__(self, "overlap", overlap)


@dataclass(frozen=True, eq=False)
class EntangledContext:
    """An entangled initial state with outcomes along ``axis1`` and ``axis2``.

    :ivar initial MultiSpinState: The two spin state ``|I>``.
    :ivar axis1 Direction: The measurement direction ``e`` for particle 1.
    :ivar axis2 Direction: The measurement direction ``f`` for particle 2.
    :ivar outcome1 Outcome: Particle 1's outcome ``e_m``.
    :ivar outcome2 Outcome: Particle 2's outcome ``f_n``.

    """

    initial: MultiSpinState
    axis1: Direction
    axis2: Direction
    outcome1: Outcome
    outcome2: Outcome
    eps_overlap: float = EPS_OVERLAP
    overlap: complex = field(init=False)

    def __post_init__(self):
        """Parse the outcomes, compute the joint overlap and reject zero overlaps."""
        object.__setattr__(self, "outcome1", Outcome.parse(self.outcome1))
        object.__setattr__(self, "outcome2", Outcome.parse(self.outcome2))
        overlap = inner2(self.bra, self.initial)
        if abs(overlap) <= self.eps_overlap * self.initial.norm:
            msg = (
                f"|<e_m, f_n|I>| = {abs(overlap):.3e} is below {self.eps_overlap:.1e}:"
                " the outcomes are impossible for this initial state"
            )
            raise ZeroOverlap(msg)
        object.__setattr__(self, "overlap", overlap)

    @property
    def bra(self) -> MultiSpinState:
        """Return the joint outcome state ``|e_m>|f_n>``."""
        return tensor(
            eigenspinor(self.axis1, self.outcome1),
            eigenspinor(self.axis2, self.outcome2),
        )


def born_conditional(
    initial: MultiSpinState,
    e: Direction,
    f: Direction,
    m: Outcome | str,
    n: Outcome | str,
) -> float:
    """Return ``P(f_n | i) = |<f_n|i>|^2`` for the conditional state of particle 2."""
    conditioned = conditional_state(initial, e, m)
    return abs(inner(eigenspinor(f, n), conditioned)) ** 2


def born_joint(
    initial: MultiSpinState,
    e: Direction,
    f: Direction,
    m: Outcome | str,
    n: Outcome | str,
) -> float:
    """Return the joint probability ``|<e_m, f_n|I>|^2`` of two outcomes.

    :param initial: The normalized two spin state.
    :param e: Particle 1's measurement direction.
    :param f: Particle 2's measurement direction.
    :param m: Particle 1's outcome.
    :param n: Particle 2's outcome.

    """
    bra = tensor(eigenspinor(e, m), eigenspinor(f, n))
    return abs(inner2(bra, initial)) ** 2


def conditional_state(
    initial: MultiSpinState,
    e: Direction,
    m: Outcome | str,
    eps: float = EPS_OVERLAP,
) -> Spinor:
    """Return particle 2's normalized state given particle 1's outcome ``e_m``.

    This keeps the ``e_m`` branch of the expansion of ``|I>`` and renormalizes it. The
    result does not depend on the basis particle 2 is expanded in, so none is taken.

    :param initial: The two spin state.
    :param e: Particle 1's measurement direction.
    :param m: Particle 1's outcome.
    :param eps: Branches with norm at or below this are rejected.

    :returns: The conditional state, with the canonical phase convention.

    """
    branch = eigenspinor(e, m).amplitudes.conj() @ initial.coefficients
    norm = float(np.linalg.norm(branch))
    if norm <= eps * initial.norm:
        msg = f"The {Outcome.parse(m).value} branch along {e} has zero norm"
        raise ZeroBranch(msg)
    return Spinor(canonical_phase(branch / norm))


def entangled_weak_value(ctx: EntangledContext, h: Direction) -> float:
    """Return particle 2's ``h`` component given ``|I>`` and both outcomes.

    Evaluated directly in the two particle space with ``I x S_h``.

    """
    return entangled_weak_value_complex(ctx, h).real


def entangled_weak_value_complex(ctx: EntangledContext, h: Direction) -> complex:
    """Return the complex value whose real part is :func:`entangled_weak_value`."""
    lifted = apply_on_particle(spin_operator(h), 2, ctx.initial)
    return inner2(ctx.bra, lifted) / ctx.overlap


def reduced_weak_value(ctx: EntangledContext, h: Direction) -> float:
    """Return the same value as :func:`entangled_weak_value` via the conditional state.

    Particle 2 is given the state conditioned on particle 1's outcome, and the single
    particle weak value is taken against particle 2's outcome.

    """
    pre = conditional_state(ctx.initial, ctx.axis1, ctx.outcome1, ctx.eps_overlap)
    post = eigenspinor(ctx.axis2, ctx.outcome2)
    return weak_spin_value(TwoStateContext(pre, post, ctx.eps_overlap), h)


def weak_spin_value(ctx: TwoStateContext, h: Direction) -> float:
    """Return ``Re <f|S_h|i> / <f|i>``, the value of the ``h`` component, in hbar."""
    return weak_spin_value_complex(ctx, h).real


def weak_spin_value_complex(ctx: TwoStateContext, h: Direction) -> complex:
    """Return the full complex weak value ``<f|S_h|i> / <f|i>``.

    Only the real part is a spin value; the imaginary part is kept for diagnostics.

    """
    return inner(ctx.post, spin_operator(h) @ ctx.pre) / ctx.overlap


def weighted_weak_average(
    pre: Spinor, f_axis: Direction, h: Direction, eps: float = EPS_OVERLAP
) -> float:
    """Average the ``h`` value over the unknown outcome along ``f_axis``.

    Each outcome is weighted by its Born probability ``|<f_n|i>|^2``; the result is the
    ordinary expectation value ``<i|S_h|i>`` of a normalized ``pre``. Outcomes with zero
    probability contribute nothing.

    """
    pre = pre.normalized()
    total = 0.0
    for outcome in Outcome:
        post = eigenspinor(f_axis, outcome)
        probability = abs(inner(post, pre)) ** 2
        if probability <= eps**2:
            log.debug(f"Skipping outcome {outcome.value}: probability {probability:.3e}")
            continue
        total += probability * weak_spin_value(TwoStateContext(pre, post, eps), h)
    return total
