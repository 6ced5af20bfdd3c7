"""zenosim: continuously monitored two-qubit pairs under null-record
post-selection, entanglement-entropy diagnostics, and interaction design
that freezes target states through frequent weak measurement."""

__version__ = "0.1.0"

from .dynamics import (ConjugateMomenta, Trajectory, ZenoConfig,
                       action_integral, integrate, log_prob_functional,
                       momenta_rhs, ode_rhs, stochastic_hamiltonian)
from .engineering import (InteractionOperator, Jump, LindbladSystem,
                          TargetDesign, build_target_interaction_hamiltonian,
                          build_two_qubit_jumps, design_target_theta,
                          find_stationary, lindblad_rhs,
                          single_qubit_bloch_rhs, theta_rhs, verify_stationary)
from .errors import (ConfigError, DegenerateInteraction,
                     DegenerateNormalization, DimensionMismatch, Infeasible,
                     MissingMomenta, NoConvergence, PlaneLeavingInteraction,
                     StepDiverged, ValidationError, ZenoError)
from .kraus import build_kraus, compare_with_kraus, kraus_step, kraus_trajectory
from .observables import (PeriodEstimate, dominant_frequency, entropy_series,
                          measure_period, measure_saturation)
from .states import (GeneralizedState, entropy_from_bloch_radius,
                     extract_coordinates, partial_trace_second,
                     reconstruct_density, von_neumann_entropy)
from .sweep import SweepPlan, SweepRecord, SweepResult, run_sweep

__all__ = [name for name in dir() if not name.startswith("_")]
