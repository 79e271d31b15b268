"""Provide the numerical core of RetroBohm."""

from .ensemble import (
    EnsembleRun,
    MeasurementSetup,
    appendix_average_check,
    born_experiment,
    complete_basis_from,
    completeness_residual,
    equivariance_check,
    ks_against_density,
    plane_wave_basis,
    sample_positions,
)
from .spin_algebra import (
    X_AXIS,
    Y_AXIS,
    Z_AXIS,
    Direction,
    MultiSpinState,
    Outcome,
    SpinOp,
    Spinor,
    apply_on_particle,
    canonical_phase,
    eigenspinor,
    inner,
    inner2,
    spin_operator,
    tensor,
)
from .spin_geometry import (
    SpinVectorReport,
    component_map,
    hidden_spin_vector,
    measurement_context,
    spherical_grid,
    sweep_maximum,
)
from .trajectories import (
    Classification,
    DoublingBackWitness,
    FieldHistory,
    FourVelocity,
    ReversalEvent,
    Trajectory,
    WorldLine,
    bohm_ensemble,
    bohm_trajectory,
    cs_worldline,
    doubling_back_witness,
    four_velocity,
    worldline,
)
from .two_state import (
    EntangledContext,
    TwoStateContext,
    born_conditional,
    born_joint,
    conditional_state,
    entangled_weak_value,
    entangled_weak_value_complex,
    reduced_weak_value,
    weak_spin_value,
    weak_spin_value_complex,
    weighted_weak_average,
)
from .wavepacket import (
    FieldPair,
    Grid,
    GridWavefunction,
    Propagator,
    WavefunctionHistory,
    continuity_residual,
    current_cs,
    current_standard,
    evolve,
    evolve_final_backward,
    evolve_history,
    kick,
    make_gaussian,
    spin_density,
)
