"""Post-selected two-qubit dynamics under continuous weak monitoring.

Coordinate flow: the 15 coupled equations for the Bloch coordinates and
correlators of two Rabi-driven qubits conditioned on the probe never
clicking.  Alongside it live the log-probability rate F of the null record,
the scalar H(p, q) = p . qdot + F whose Hamilton equations extend the flow
to phase space, and the path weight integral S = int(-p . qdot + H) dt.

Units: time in ns, frequencies and rates in 1/ns (hbar = 1).  omega_k is
half the Rabi frequency: the drive Hamiltonian is omega_k sigma_x.
"""
from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np

from . import _kernels
from .errors import MissingMomenta, StepDiverged, ValidationError
from .states import GeneralizedState

__all__ = [
    "ZenoConfig", "ConjugateMomenta", "Trajectory",
    "ode_rhs", "log_prob_functional", "stochastic_hamiltonian",
    "momenta_rhs", "integrate", "action_integral",
]

_MOMENTUM_NAMES = tuple(
    "p_" + n for n in (
        "x1", "y1", "z1", "x2", "y2", "z2",
        "e11", "e12", "e13", "e21", "e22", "e23", "e31", "e32", "e33",
    )
)


@dataclass(frozen=True)
class ZenoConfig:
    """Parameters of a monitored-pair run.

    omega1/omega2 are half the Rabi frequencies (drive omega sigma_x); the
    CLI accepts rabi = 2*omega to match the usual quoting convention.
    alpha1/alpha2 are the continuous measurement strengths (J^2 * dt in the
    discrete picture).  All rates in 1/ns, times in ns.
    """

    omega1: float
    omega2: float
    alpha1: float
    alpha2: float
    dt: float = 1e-4
    t_final: float = 20.0
    initial: GeneralizedState = field(default_factory=lambda: GeneralizedState.computational("00"))

    def __post_init__(self):
        if self.alpha1 < 0 or self.alpha2 < 0:
            raise ValidationError("measurement strengths alpha must be >= 0")
        if not self.dt > 0:
            raise ValidationError("dt must be positive")
        if self.t_final < self.dt:
            raise ValidationError("t_final must be at least one step dt")

    @property
    def n_steps(self) -> int:
        return max(1, int(round(self.t_final / self.dt)))

    def with_(self, **kw) -> "ZenoConfig":
        return replace(self, **kw)


@dataclass(frozen=True)
class ConjugateMomenta:
    """The 15 momenta conjugate to the generalized coordinates."""

    p_x1: float = 0.0
    p_y1: float = 0.0
    p_z1: float = 0.0
    p_x2: float = 0.0
    p_y2: float = 0.0
    p_z2: float = 0.0
    p_e11: float = 0.0
    p_e12: float = 0.0
    p_e13: float = 0.0
    p_e21: float = 0.0
    p_e22: float = 0.0
    p_e23: float = 0.0
    p_e31: float = 0.0
    p_e32: float = 0.0
    p_e33: float = 0.0

    @classmethod
    def from_array(cls, p) -> "ConjugateMomenta":
        p = np.asarray(p, dtype=float)
        if p.shape != (15,):
            raise ValidationError(f"expected 15 momenta, got shape {p.shape}")
        return cls(*(float(v) for v in p))

    def as_array(self) -> np.ndarray:
        return np.array([getattr(self, n) for n in _MOMENTUM_NAMES], dtype=float)

    def validate(self) -> "ConjugateMomenta":
        if not np.all(np.isfinite(self.as_array())):
            raise ValidationError("non-finite momentum")
        return self


@dataclass
class Trajectory:
    """Recorded run: times (ns), coordinate rows, optional momenta/entropy."""

    times: np.ndarray
    states: np.ndarray               # shape (n, 15), COORD_NAMES order
    momenta: np.ndarray | None = None
    entropy: np.ndarray | None = None

    def __len__(self) -> int:
        return len(self.times)

    def state(self, i: int) -> GeneralizedState:
        return GeneralizedState.from_array(self.states[i])

    def momentum(self, i: int) -> ConjugateMomenta:
        if self.momenta is None:
            raise MissingMomenta("trajectory carries no momenta")
        return ConjugateMomenta.from_array(self.momenta[i])

    @property
    def final_state(self) -> GeneralizedState:
        return self.state(len(self) - 1)


def ode_rhs(s: GeneralizedState, cfg: ZenoConfig) -> np.ndarray:
    """Time derivatives of the 15 coordinates (1/ns), COORD_NAMES order."""
    return _kernels.coord_rhs(s.as_array(), cfg.omega1, cfg.omega2,
                              cfg.alpha1, cfg.alpha2)


def log_prob_functional(s: GeneralizedState, cfg: ZenoConfig) -> float:
    """Rate F of the log-probability of the null measurement record (1/ns).

    F = (1/2)[a1 (z1-1) + sqrt(a1 a2)(-1 + z1 + z2 - e33) + a2 (z2-1)];
    zero exactly when the pair sits in the unmonitored state |00>.
    """
    return float(_kernels.log_prob_rate(s.as_array(), cfg.alpha1, cfg.alpha2))


def stochastic_hamiltonian(s: GeneralizedState, p: ConjugateMomenta,
                           cfg: ZenoConfig) -> float:
    """H = p . qdot + F; conserved along the joint (q, p) flow."""
    q = s.as_array()
    qdot = _kernels.coord_rhs(q, cfg.omega1, cfg.omega2, cfg.alpha1, cfg.alpha2)
    return float(p.as_array() @ qdot + _kernels.log_prob_rate(q, cfg.alpha1, cfg.alpha2))


def momenta_rhs(s: GeneralizedState, p: ConjugateMomenta,
                cfg: ZenoConfig) -> np.ndarray:
    """Time derivatives of the 15 momenta, dp/dt = -dH/dq."""
    return _kernels.momenta_rhs(s.as_array(), p.as_array(),
                                cfg.omega1, cfg.omega2, cfg.alpha1, cfg.alpha2)


def _hamiltonian_arrays(q: np.ndarray, p: np.ndarray, cfg: ZenoConfig) -> float:
    qdot = _kernels.coord_rhs(q, cfg.omega1, cfg.omega2, cfg.alpha1, cfg.alpha2)
    return float(p @ qdot + _kernels.log_prob_rate(q, cfg.alpha1, cfg.alpha2))


def integrate(cfg: ZenoConfig, with_momenta: ConjugateMomenta | None = None,
              stride: int = 1, _rhs_bias: np.ndarray | None = None) -> Trajectory:
    """Fixed-step RK4 from t = 0 to t_final, recording every `stride` steps.

    With `with_momenta` the joint (q, p) system is integrated and the
    trajectory carries momenta.  Coordinates are never renormalized
    mid-flight; leaving [-1-1e-6, 1+1e-6] (or any non-finite value) raises
    StepDiverged with the failure time and the partial trajectory, rather
    than silently projecting back.

    `_rhs_bias` adds a constant vector to every coordinate-derivative
    evaluation; it exists solely as the negative control of the channel
    cross-check and is None in normal use.
    """
    if stride < 1:
        raise ValidationError("stride must be >= 1")
    q0 = cfg.initial.as_array()
    n = cfg.n_steps

    if with_momenta is None:
        bias = np.zeros(15) if _rhs_bias is None else np.asarray(_rhs_bias, dtype=float)
        times, states, n_rec, fail = _kernels.rk4_coords(
            q0, cfg.omega1, cfg.omega2, cfg.alpha1, cfg.alpha2,
            cfg.dt, n, stride, bias)
        momenta = None
    else:
        if _rhs_bias is not None:
            raise ValidationError("rhs bias is not supported for joint integration")
        p0 = with_momenta.validate().as_array()
        times, states, momenta, n_rec, fail = _kernels.rk4_joint(
            q0, p0, cfg.omega1, cfg.omega2, cfg.alpha1, cfg.alpha2,
            cfg.dt, n, stride)
        momenta = momenta[:n_rec].copy()

    traj = Trajectory(times=times[:n_rec].copy(), states=states[:n_rec].copy(),
                      momenta=momenta)
    if fail >= 0:
        raise StepDiverged(fail * cfg.dt, partial=traj,
                           detail="coordinate left the physical region")
    return traj


def action_integral(traj: Trajectory, cfg: ZenoConfig) -> float:
    """Path weight S = int (-p . qdot + H) dt on the recorded grid.

    Trapezoid rule over the recorded times.  Along exact solutions of the
    joint flow the integrand reduces to F(q), so S equals the accumulated
    log-probability of the null record.
    """
    if traj.momenta is None:
        raise MissingMomenta("action integral needs a trajectory with momenta")
    integrand = np.empty(len(traj))
    for i in range(len(traj)):
        q = traj.states[i]
        p = traj.momenta[i]
        qdot = _kernels.coord_rhs(q, cfg.omega1, cfg.omega2, cfg.alpha1, cfg.alpha2)
        integrand[i] = -p @ qdot + _hamiltonian_arrays(q, p, cfg)
    return float(np.trapezoid(integrand, traj.times))
