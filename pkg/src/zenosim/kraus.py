"""Discrete measurement-channel oracle for the monitored pair.

One cycle of the microscopic model: the pair evolves unitarily for dt under
the Rabi drive, the probe qubit (prepared in |0>) couples through
H_int = (J1/2)(I - sigma_z) (x) I (x) sigma_y + (J2/2) I (x) (I - sigma_z) (x) sigma_y
with J_k = sqrt(alpha_k / dt), and the probe is read out and reset.  The
null-outcome branch, iterated, converges at first order in dt to the
coordinate flow in `dynamics`; this module exists to check that flow from
an independent route (dense matrix exponentials, no transcribed equations).
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import expm

from .dynamics import ZenoConfig, integrate
from .errors import (DegenerateNormalization, StepDiverged,
                     ValidationError)
from .pauli import COORD_OPERATORS, IDENT2, SIGMA_X, SIGMA_Y, SIGMA_Z
from .states import reconstruct_density, validate_density

__all__ = ["build_kraus", "rabi_unitary", "kraus_step", "kraus_trajectory",
           "ChannelComparison", "compare_with_kraus"]

# The probe is read out in its energy (sigma_z) basis: outcome r = 0 is the
# no-click result <0|_d, r = 1 the click <1|_d.  This is the only readout
# basis whose r = 0 branch reproduces the drift of the coordinate flow in
# the dt -> 0 limit (a sigma_y readout commutes with the coupling and gives
# an information-free unitary kick), which the channel cross-check pins down.
_PROJECT_OUT = {0: 0, 1: 1}


def build_kraus(cfg: ZenoConfig, r: int, dt: float) -> np.ndarray:
    """4x4 back-action operator M^r = <r|_d exp(-i H_int dt) |0>_d.

    Completeness sum_r M^r+ M^r = I holds for any (alpha1, alpha2, dt).
    """
    if r not in _PROJECT_OUT:
        raise ValidationError(f"outcome r must be 0 or 1, got {r!r}")
    if not dt > 0:
        raise ValidationError("dt must be positive")
    j1 = np.sqrt(cfg.alpha1 / dt)
    j2 = np.sqrt(cfg.alpha2 / dt)
    proj1 = (IDENT2 - SIGMA_Z) / 2.0
    h_int = (j1 * np.kron(np.kron(proj1, IDENT2), SIGMA_Y)
             + j2 * np.kron(np.kron(IDENT2, proj1), SIGMA_Y))
    evo = expm(-1j * h_int * dt)
    # basis index = 2 * (system index) + (probe index); probe starts in |0>
    return np.ascontiguousarray(evo[_PROJECT_OUT[r]::2, 0::2])


def rabi_unitary(cfg: ZenoConfig, dt: float) -> np.ndarray:
    """U = exp(-i (omega1 sigma_x (x) I + omega2 I (x) sigma_x) dt)."""
    u1 = expm(-1j * cfg.omega1 * SIGMA_X * dt)
    u2 = expm(-1j * cfg.omega2 * SIGMA_X * dt)
    return np.kron(u1, u2)


def kraus_step(rho: np.ndarray, cfg: ZenoConfig, dt: float) -> np.ndarray:
    """One post-selected cycle: rho -> M0 U rho U+ M0+ / tr[...]."""
    rho = validate_density(rho, dim=4)
    m0 = build_kraus(cfg, 0, dt)
    u = rabi_unitary(cfg, dt)
    a = m0 @ u
    num = a @ rho @ a.conj().T
    tr = np.trace(num).real
    if tr < 1e-14:
        raise DegenerateNormalization(
            f"null-outcome probability {tr:.3e} vanished at this step")
    return num / tr


def kraus_trajectory(cfg: ZenoConfig, dt: float, n_steps: int,
                     stride: int = 1, rho0: np.ndarray | None = None):
    """Iterate the post-selected cycle, recording extracted coordinates.

    Returns (times, coords) with coords of shape (n_recorded, 15).  The
    per-cycle operator M0 U is built once; the trace condition of
    kraus_step applies at every cycle.
    """
    if stride < 1:
        raise ValidationError("stride must be >= 1")
    rho = reconstruct_density(cfg.initial) if rho0 is None else validate_density(rho0, dim=4)
    m0 = build_kraus(cfg, 0, dt)
    a = m0 @ rabi_unitary(cfg, dt)
    a_dag = a.conj().T

    n_rec = n_steps // stride + 1 + (1 if n_steps % stride else 0)
    times = np.empty(n_rec)
    coords = np.empty((n_rec, 15))
    times[0] = 0.0
    coords[0] = np.einsum("kij,ji->k", COORD_OPERATORS, rho).real
    idx = 1
    for k in range(1, n_steps + 1):
        num = a @ rho @ a_dag
        tr = np.trace(num).real
        if tr < 1e-14:
            raise DegenerateNormalization(
                f"null-outcome probability {tr:.3e} vanished at t = {k * dt:.6g}")
        rho = num / tr
        if k % stride == 0 or k == n_steps:
            times[idx] = k * dt
            coords[idx] = np.einsum("kij,ji->k", COORD_OPERATORS, rho).real
            idx += 1
    return times[:idx], coords[:idx]


@dataclass(frozen=True)
class ChannelComparison:
    """Max componentwise deviation between the coordinate flow and the
    iterated channel at one step size.  A flow that leaves the physical
    region is reported as infinitely deviant (the channel never does)."""

    dt: float
    n_steps: int
    max_deviation: float
    diverged: bool = False


def compare_with_kraus(cfg: ZenoConfig, dts, rhs_offset: float = 0.0):
    """Run the flow and the channel side by side for each dt.

    For each step size both routes start from the same initial density and
    are sampled at identical times.  `rhs_offset` injects a constant bias
    into the z1 derivative of the flow (negative control); it must be 0 for
    a faithful comparison.

    Returns a list of ChannelComparison ordered as given.
    """
    rows = []
    bias = None
    if rhs_offset != 0.0:
        bias = np.zeros(15)
        bias[2] = rhs_offset
    for dt in dts:
        run = cfg.with_(dt=float(dt))
        n = run.n_steps
        try:
            traj = integrate(run, stride=1, _rhs_bias=bias)
        except StepDiverged:
            rows.append(ChannelComparison(dt=float(dt), n_steps=n,
                                          max_deviation=float("inf"),
                                          diverged=True))
            continue
        times_k, coords_k = kraus_trajectory(run, float(dt), n, stride=1)
        if len(traj.times) != len(times_k):
            raise ValidationError("recording grids of the two routes differ")
        dev = float(np.max(np.abs(traj.states - coords_k)))
        rows.append(ChannelComparison(dt=float(dt), n_steps=n, max_deviation=dev))
    return rows
