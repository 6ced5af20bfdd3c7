"""Designing interactions that freeze a chosen target state.

Single qubit: a Hermitian coupling S = [[a, b+id], [b-id, c]] monitored at
rate alpha, with drive (omega/2) sigma_x, produces the Bloch flow below;
its stationary points are the states the measurement freezes.  With b = 0
the motion stays in the y-z plane and reduces to one angle, which gives a
closed-form design rule for the frozen angle.

Two qubits: jump operators that map |01> and |10> onto |00> + |11> leave
exactly |00><00| and |11><11| stationary, and lift to an explicit
pair-probe interaction Hamiltonian.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import (DegenerateInteraction, DimensionMismatch, Infeasible,
                     PlaneLeavingInteraction, ValidationError)
from .pauli import IDENT2, KET_0, KET_1, SIGMA_X, SIGMA_Z, basis_ket

logger = logging.getLogger(__name__)

__all__ = [
    "InteractionOperator", "Jump", "LindbladSystem", "TargetDesign",
    "lindblad_rhs", "dissipative_postselected_rhs", "single_qubit_bloch_rhs",
    "bloch_jacobian", "default_sphere_seeds", "find_stationary",
    "integrate_bloch", "theta_rhs", "design_target_theta",
    "build_two_qubit_jumps", "two_qubit_hamiltonian", "verify_stationary",
    "build_target_interaction_hamiltonian",
]


@dataclass(frozen=True)
class InteractionOperator:
    """Hermitian 2x2 coupling S = [[a, b+id], [b-id, c]] (dimensionless)."""

    a: float
    b: float
    c: float
    d: float

    @property
    def matrix(self) -> np.ndarray:
        return np.array([[self.a, self.b + 1j * self.d],
                         [self.b - 1j * self.d, self.c]], dtype=complex)

    def drift_vector(self) -> np.ndarray:
        """The vector s with S^2 = (.)I + s . sigma; the measurement drift
        of the Bloch flow is alpha [ (s.v) v - s ]."""
        ac = self.a + self.c
        return np.array([ac * self.b, -ac * self.d, ac * (self.a - self.c) / 2.0])


@dataclass(frozen=True)
class Jump:
    """One dissipation channel: operator, strength, and whether only the
    anti-commutator (no-recycling) part acts."""

    operator: np.ndarray
    alpha: float
    dissipative_only: bool = False

    def __post_init__(self):
        if self.alpha < 0:
            raise ValidationError("jump strength alpha must be >= 0")


@dataclass(frozen=True)
class LindbladSystem:
    """System Hamiltonian (1/ns) plus a list of jump channels."""

    h_sys: np.ndarray
    jumps: tuple = field(default_factory=tuple)

    def __post_init__(self):
        h = np.asarray(self.h_sys, dtype=complex)
        if h.ndim != 2 or h.shape[0] != h.shape[1]:
            raise ValidationError("h_sys must be square")
        if np.max(np.abs(h - h.conj().T)) > 1e-12:
            raise ValidationError("h_sys must be Hermitian")
        object.__setattr__(self, "h_sys", h)
        object.__setattr__(self, "jumps", tuple(self.jumps))
        for j in self.jumps:
            op = np.asarray(j.operator)
            if op.shape != h.shape:
                raise DimensionMismatch(
                    f"jump operator shape {op.shape} does not match h_sys {h.shape}")


def lindblad_rhs(rho: np.ndarray, sys: LindbladSystem) -> np.ndarray:
    """drho/dt = -i[H, rho] + sum_j alpha_j (L rho L+ - (1/2){L+L, rho}).

    Channels flagged dissipative_only drop the recycling term L rho L+
    (probe prepared outside the eigenbasis of its readout), which makes
    their contribution trace-decreasing; the full form is traceless.
    """
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != sys.h_sys.shape:
        raise DimensionMismatch(
            f"density shape {rho.shape} does not match h_sys {sys.h_sys.shape}")
    out = -1j * (sys.h_sys @ rho - rho @ sys.h_sys)
    for j in sys.jumps:
        op = np.asarray(j.operator, dtype=complex)
        opd_op = op.conj().T @ op
        anti = opd_op @ rho + rho @ opd_op
        out = out - 0.5 * j.alpha * anti
        if not j.dissipative_only:
            out = out + j.alpha * (op @ rho @ op.conj().T)
    return out


def dissipative_postselected_rhs(rho: np.ndarray, s_op: np.ndarray,
                                 alpha: float, h_sys: np.ndarray) -> np.ndarray:
    """No-recycling evolution with the trace restored:
    drho/dt = -i[H, rho] - (alpha/2){S+S, rho} + alpha tr[rho S+S] rho.

    This is the normalized null-record form; it keeps Bloch vectors on or
    inside the sphere, which the raw anti-commutator form does not.
    """
    rho = np.asarray(rho, dtype=complex)
    s_op = np.asarray(s_op, dtype=complex)
    ss = s_op.conj().T @ s_op
    out = -1j * (h_sys @ rho - rho @ h_sys)
    out = out - 0.5 * alpha * (ss @ rho + rho @ ss)
    out = out + alpha * np.trace(rho @ ss).real * rho
    return out


def single_qubit_bloch_rhs(v, s: InteractionOperator, omega: float,
                           alpha: float) -> np.ndarray:
    """Bloch flow of a monitored driven qubit:
    dv/dt = alpha [ (s.v) v - s ] + omega (0, -z, y)."""
    v = np.asarray(v, dtype=float)
    if v.shape != (3,):
        raise ValidationError(f"expected a 3-component Bloch vector, got {v.shape}")
    sv = s.drift_vector()
    free = np.array([0.0, -omega * v[2], omega * v[1]])
    return alpha * (float(sv @ v) * v - sv) + free


def bloch_jacobian(v, s: InteractionOperator, omega: float,
                   alpha: float) -> np.ndarray:
    v = np.asarray(v, dtype=float)
    sv = s.drift_vector()
    jac = alpha * (float(sv @ v) * np.eye(3) + np.outer(v, sv))
    jac[1, 2] += -omega
    jac[2, 1] += omega
    return jac


def default_sphere_seeds() -> list[np.ndarray]:
    """Coarse seeding of the unit sphere: the 26 normalized directions of
    {-1, 0, 1}^3 (poles included)."""
    seeds = []
    for ix in (-1, 0, 1):
        for iy in (-1, 0, 1):
            for iz in (-1, 0, 1):
                if ix == iy == iz == 0:
                    continue
                v = np.array([ix, iy, iz], dtype=float)
                seeds.append(v / np.linalg.norm(v))
    return seeds


def find_stationary(s: InteractionOperator, omega: float, alpha: float,
                    seeds=None) -> list[np.ndarray]:
    """Newton roots of the Bloch flow from each seed.

    Seeds that fail to converge are logged and skipped.  Returned roots
    satisfy ||rhs|| < 1e-12, lie on/inside the sphere (||v|| <= 1 + 1e-9),
    are deduplicated within 1e-8 and sorted lexicographically.
    """
    if seeds is None:
        seeds = default_sphere_seeds()
    seeds = [np.asarray(v, dtype=float) for v in seeds]
    if not seeds:
        raise ValidationError("at least one seed is required")

    roots: list[np.ndarray] = []
    for seed in seeds:
        v = seed.copy()
        converged = False
        for _ in range(200):
            f = single_qubit_bloch_rhs(v, s, omega, alpha)
            if np.linalg.norm(f) < 1e-12:
                converged = True
                break
            jac = bloch_jacobian(v, s, omega, alpha)
            step = np.linalg.lstsq(jac, -f, rcond=None)[0]
            if not np.all(np.isfinite(step)):
                break
            # crude damping keeps wild Newton steps on the chart
            norm = np.linalg.norm(step)
            if norm > 1.0:
                step = step / norm
            v = v + step
        if not converged:
            logger.debug("stationary-point search did not converge from seed %s", seed)
            continue
        if np.linalg.norm(v) > 1.0 + 1e-9:
            continue
        if any(np.max(np.abs(v - r)) < 1e-8 for r in roots):
            continue
        roots.append(v)
    roots.sort(key=lambda r: tuple(r))
    return roots


def integrate_bloch(v0, s: InteractionOperator, omega: float, alpha: float,
                    dt: float, t_final: float):
    """Fixed-step RK4 of the Bloch flow; returns (times, states (n, 3))."""
    v = np.asarray(v0, dtype=float).copy()
    n = max(1, int(round(t_final / dt)))
    times = np.arange(n + 1) * dt
    out = np.empty((n + 1, 3))
    out[0] = v
    for k in range(n):
        k1 = single_qubit_bloch_rhs(v, s, omega, alpha)
        k2 = single_qubit_bloch_rhs(v + 0.5 * dt * k1, s, omega, alpha)
        k3 = single_qubit_bloch_rhs(v + 0.5 * dt * k2, s, omega, alpha)
        k4 = single_qubit_bloch_rhs(v + dt * k3, s, omega, alpha)
        v = v + (dt / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)
        out[k + 1] = v
    return times, out


def theta_rhs(theta: float, s: InteractionOperator, omega: float,
              alpha: float) -> float:
    """Angle flow in the y-z plane (x = 0, y = sin theta, z = cos theta):
    dtheta/dt = -(1/2)[2 omega - (a+c) alpha (2d cos theta + (a-c) sin theta)].

    Requires b = 0; otherwise the motion leaves the plane.
    """
    if s.b != 0.0:
        raise PlaneLeavingInteraction("theta reduction needs b = 0")
    drift = (s.a + s.c) * alpha * (2.0 * s.d * math.cos(theta)
                                   + (s.a - s.c) * math.sin(theta))
    return -0.5 * (2.0 * omega - drift)


@dataclass(frozen=True)
class TargetDesign:
    """Frozen-angle design: both stationary angles of the plane flow at
    ratio lam = alpha / (2 omega), plus the phase offset xi."""

    theta: float
    theta_alt: float
    lam: float
    xi: float


def design_target_theta(s: InteractionOperator, lam: float) -> TargetDesign:
    """Angles where the plane flow freezes:
    theta = arcsin[1 / (lam (a+c) sqrt(4d^2 + (a-c)^2))] - xi,
    with tan xi = 2d / (a-c) resolved by atan2, and the mirror solution
    pi - arcsin(...) - xi.

    Raises DegenerateInteraction when the drift direction vanishes and
    Infeasible when no real angle exists at this lam.
    """
    if s.b != 0.0:
        raise PlaneLeavingInteraction("frozen-angle design needs b = 0")
    if not lam > 0:
        raise ValidationError("lam must be positive")
    ac = s.a + s.c
    radius = math.sqrt(4.0 * s.d**2 + (s.a - s.c) ** 2)
    if ac == 0.0 or radius == 0.0:
        raise DegenerateInteraction(
            f"no measurement drift for a={s.a}, c={s.c}, d={s.d}")
    arg = 1.0 / (lam * ac * radius)
    if abs(arg) > 1.0:
        raise Infeasible(
            f"|1/(lam (a+c) sqrt(4d^2+(a-c)^2))| = {abs(arg):.6g} > 1: "
            "no frozen angle at this ratio")
    xi = math.atan2(2.0 * s.d, s.a - s.c)
    theta = math.asin(arg) - xi
    theta_alt = math.pi - math.asin(arg) - xi
    for th in (theta, theta_alt):
        resid = theta_rhs(th, s, omega=0.5, alpha=lam)  # lam = alpha/(2 omega)
        if abs(resid) > 1e-10:
            raise ValidationError(f"designed angle has residual {resid:.3e}")
    return TargetDesign(theta=theta, theta_alt=theta_alt, lam=lam, xi=xi)


def build_two_qubit_jumps() -> list[np.ndarray]:
    """The two 4x4 jumps L_j = |00><B_j| + |11><B_j| for B_2 = |01>,
    B_3 = |10>; each satisfies L+L = 2 |B_j><B_j| exactly."""
    b1, b2, b3, b4 = (basis_ket(l) for l in ("00", "01", "10", "11"))
    jumps = []
    for bj in (b2, b3):
        jumps.append(np.outer(b1, bj.conj()) + np.outer(b4, bj.conj()))
    return jumps


def two_qubit_hamiltonian(scale: float = 1.0) -> np.ndarray:
    """sigma_z (x) I + I (x) sigma_z, optionally scaled (1/ns)."""
    return scale * (np.kron(SIGMA_Z, IDENT2) + np.kron(IDENT2, SIGMA_Z))


def verify_stationary(rho: np.ndarray, sys: LindbladSystem):
    """(is_stationary, residual): max-entry norm of the dissipative flow."""
    resid = float(np.max(np.abs(lindblad_rhs(rho, sys))))
    return resid < 1e-12, resid


def build_target_interaction_hamiltonian(coupling: float) -> np.ndarray:
    """8x8 pair-probe interaction whose null-outcome channel freezes
    |00> / |11>:  H = J sum_j { (|00><B_j| + |11><B_j|) (x) sigma+ + h.c. }.
    """
    if coupling < 0:
        raise ValidationError("coupling J must be >= 0")
    raise_d = np.outer(KET_1, KET_0.conj())  # probe |0> -> |1>
    h = np.zeros((8, 8), dtype=complex)
    for jump in build_two_qubit_jumps():
        term = np.kron(jump, raise_d)
        h += coupling * (term + term.conj().T)
    return h
