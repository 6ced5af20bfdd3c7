"""Numba kernels for the 15-coordinate flow and the conjugate-momentum flow.

The coordinate equations are the deterministic no-click evolution of two
Rabi-driven qubits whose |1> populations are continuously monitored through
a shared two-level probe (null outcome post-selected, probe reset each
cycle).  The momentum equations are the exact phase-space adjoint
dp/dt = -dH/dq of the scalar H = p . qdot(q) + F(q), where F is the
log-probability rate of the null outcome.  Both sets were generated and
cross-checked symbolically; edit only with the finite-difference tests in
hand.

Frequencies: qubit k precesses under (omega_k) sigma_x, i.e. Rabi frequency
2*omega_k.  alpha_k are the continuous measurement rates (1/ns).
"""
import numpy as np
from numba import njit

# Coordinates live in [-1, 1]; allow this much integration roundoff before
# declaring the trajectory unphysical.
COORD_BOUND = 1.0 + 1e-6


@njit(cache=True)
def coord_rhs(q, w1, w2, a1, a2):
    x1, y1, z1, x2, y2, z2 = q[0], q[1], q[2], q[3], q[4], q[5]
    e11, e12, e13, e21, e22, e23 = q[6], q[7], q[8], q[9], q[10], q[11]
    e31, e32, e33 = q[12], q[13], q[14]
    s12 = np.sqrt(a1 * a2)
    m = z1 + z2 - e33

    out = np.empty(15)
    out[0] = 0.5 * (-a1 * x1 * z1 + s12 * (e13 - x1 * m) + a2 * (e13 - x1 * z2))
    out[1] = 0.5 * (e23 * (s12 + a2) + y1 * (-a1 * z1 - s12 * m - a2 * z2) - 4.0 * w1 * z1)
    out[2] = 0.5 * (a1 * (1.0 - z1 * z1)
                    + s12 * (1.0 + e33 * (1.0 + z1) - z1 * z1 - z2 - z1 * z2)
                    + a2 * (e33 - z1 * z2) + 4.0 * w1 * y1)
    out[3] = 0.5 * (a1 * (e31 - x2 * z1) + s12 * (e31 - x2 * m) - a2 * x2 * z2)
    out[4] = 0.5 * ((s12 + a1) * (e32 - z1 * y2) + s12 * y2 * (e33 - z2)
                    - a2 * y2 * z2 - 4.0 * w2 * z2)
    out[5] = 0.5 * (a1 * (e33 - z1 * z2)
                    + s12 * (1.0 + e33 * (1.0 + z2) - z2 * z2 - z1 - z1 * z2)
                    + a2 * (1.0 - z2 * z2) + 4.0 * w2 * y2)
    out[6] = 0.5 * (-a1 * e11 * z1 + s12 * (e22 - e11 * m) - a2 * e11 * z2)
    out[7] = 0.5 * (-a1 * e12 * z1 - s12 * (e21 + e12 * m) - a2 * e12 * z2 - 4.0 * w2 * e13)
    out[8] = 0.5 * (-a1 * e13 * z1 + s12 * (x1 - e13 * m) + a2 * (x1 - e13 * z2) + 4.0 * w2 * e12)
    out[9] = 0.5 * (-a1 * e21 * z1 - s12 * (e12 + e21 * m) - a2 * e21 * z2 - 4.0 * w1 * e31)
    out[10] = 0.5 * (-a1 * e22 * z1 + s12 * (e11 - e22 * m) - a2 * e22 * z2
                     - 4.0 * (w1 * e32 + w2 * e23))
    out[11] = 0.5 * (e23 * (-a1 * z1 - s12 * m - a2 * z2) + (a2 + s12) * y1
                     + 4.0 * (-w1 * e33 + w2 * e22))
    out[12] = 0.5 * (a1 * (x2 - e31 * z1) + s12 * (x2 - e31 * m) - a2 * e31 * z2 + 4.0 * w1 * e21)
    out[13] = 0.5 * ((a1 + s12) * y2 + e32 * (-a1 * z1 - s12 * m - a2 * z2)
                     + 4.0 * (w1 * e22 - w2 * e33))
    out[14] = 0.5 * (a1 * (z2 - z1 * e33) - s12 * (e33 - 1.0) * (m - 1.0)
                     + a2 * (z1 - z2 * e33) + 4.0 * (w1 * e23 + w2 * e32))
    return out


@njit(cache=True)
def log_prob_rate(q, a1, a2):
    z1, z2, e33 = q[2], q[5], q[14]
    s12 = np.sqrt(a1 * a2)
    return 0.5 * (a1 * (z1 - 1.0) + s12 * (z1 + z2 - e33 - 1.0) + a2 * (z2 - 1.0))


@njit(cache=True)
def momenta_rhs(q, p, w1, w2, a1, a2):
    z1, z2, e33 = q[2], q[5], q[14]
    px1, py1, pz1, px2, py2, pz2 = p[0], p[1], p[2], p[3], p[4], p[5]
    pe11, pe12, pe13, pe21, pe22, pe23 = p[6], p[7], p[8], p[9], p[10], p[11]
    pe31, pe32, pe33 = p[12], p[13], p[14]
    s12 = np.sqrt(a1 * a2)

    # shared factors: qp = q.p; g is the common contraction rate that every
    # momentum picks up; c1/c2 couple a momentum to its partner coordinate.
    qp = 0.0
    for i in range(15):
        qp += q[i] * p[i]
    g = 0.5 * (a1 * z1 + a2 * z2 + s12 * (z1 + z2 - e33))
    c1 = 0.5 * (a1 + s12)
    c2 = 0.5 * (a2 + s12)

    out = np.empty(15)
    out[0] = g * px1 - c2 * pe13
    out[1] = g * py1 - c2 * pe23 - 2.0 * w1 * pz1
    out[2] = (0.5 * a1 * (qp + z1 * pz1 - 1.0)
              + 0.5 * s12 * (qp + (z1 + z2 - e33) * pz1 + pz2 - pe33 - 1.0)
              + 0.5 * a2 * (z2 * pz1 - pe33) + 2.0 * w1 * py1)
    out[3] = g * px2 - c1 * pe31
    out[4] = g * py2 - c1 * pe32 - 2.0 * w2 * pz2
    out[5] = (0.5 * a2 * (qp + z2 * pz2 - 1.0)
              + 0.5 * s12 * (qp + (z1 + z2 - e33) * pz2 + pz1 - pe33 - 1.0)
              + 0.5 * a1 * (z1 * pz2 - pe33) + 2.0 * w2 * py2)
    out[6] = g * pe11 - 0.5 * s12 * pe22
    out[7] = g * pe12 + 0.5 * s12 * pe21 - 2.0 * w2 * pe13
    out[8] = g * pe13 - c2 * px1 + 2.0 * w2 * pe12
    out[9] = g * pe21 + 0.5 * s12 * pe12 - 2.0 * w1 * pe31
    out[10] = g * pe22 - 0.5 * s12 * pe11 - 2.0 * w1 * pe32 - 2.0 * w2 * pe23
    out[11] = g * pe23 - c2 * py1 + 2.0 * w2 * pe22 - 2.0 * w1 * pe33
    out[12] = g * pe31 - c1 * px2 + 2.0 * w1 * pe21
    out[13] = g * pe32 - c1 * py2 + 2.0 * w1 * pe22 - 2.0 * w2 * pe33
    out[14] = (0.5 * a1 * (z1 * pe33 - pz2) + 0.5 * a2 * (z2 * pe33 - pz1)
               + 0.5 * s12 * (-qp + (z1 + z2 - e33) * pe33 - pz1 - pz2 + 1.0)
               + 2.0 * w1 * pe23 + 2.0 * w2 * pe32)
    return out


@njit(cache=True)
def _coords_ok(q):
    for i in range(15):
        v = q[i]
        if v != v or v < -COORD_BOUND or v > COORD_BOUND:
            return False
    return True


@njit(cache=True)
def rk4_coords(q0, w1, w2, a1, a2, dt, n_steps, stride, bias):
    """Fixed-step RK4 of the coordinate flow, recording every `stride` steps.

    `bias` is a constant 15-vector added to every derivative evaluation; it
    is zero in normal operation and nonzero only for the negative-control
    self-test of the channel-comparison command.

    Returns (times, states, n_recorded, fail_step); fail_step is -1 on
    success, else the 1-based step index after which a coordinate left
    [-COORD_BOUND, COORD_BOUND] or went non-finite.
    """
    n_rec = n_steps // stride + 1
    if n_steps % stride != 0:
        n_rec += 1
    times = np.empty(n_rec)
    states = np.empty((n_rec, 15))
    q = q0.copy()
    times[0] = 0.0
    states[0] = q
    idx = 1
    for k in range(1, n_steps + 1):
        k1 = coord_rhs(q, w1, w2, a1, a2) + bias
        k2 = coord_rhs(q + 0.5 * dt * k1, w1, w2, a1, a2) + bias
        k3 = coord_rhs(q + 0.5 * dt * k2, w1, w2, a1, a2) + bias
        k4 = coord_rhs(q + dt * k3, w1, w2, a1, a2) + bias
        q = q + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        if not _coords_ok(q):
            return times, states, idx, k
        if k % stride == 0 or k == n_steps:
            times[idx] = k * dt
            states[idx] = q
            idx += 1
    return times, states, idx, -1


@njit(cache=True)
def rk4_joint(q0, p0, w1, w2, a1, a2, dt, n_steps, stride):
    """Fixed-step RK4 of the joint (q, p) flow (q autonomous, p its adjoint)."""
    n_rec = n_steps // stride + 1
    if n_steps % stride != 0:
        n_rec += 1
    times = np.empty(n_rec)
    states = np.empty((n_rec, 15))
    momenta = np.empty((n_rec, 15))
    q = q0.copy()
    p = p0.copy()
    times[0] = 0.0
    states[0] = q
    momenta[0] = p
    idx = 1
    for k in range(1, n_steps + 1):
        kq1 = coord_rhs(q, w1, w2, a1, a2)
        kp1 = momenta_rhs(q, p, w1, w2, a1, a2)
        q2 = q + 0.5 * dt * kq1
        p2 = p + 0.5 * dt * kp1
        kq2 = coord_rhs(q2, w1, w2, a1, a2)
        kp2 = momenta_rhs(q2, p2, w1, w2, a1, a2)
        q3 = q + 0.5 * dt * kq2
        p3 = p + 0.5 * dt * kp2
        kq3 = coord_rhs(q3, w1, w2, a1, a2)
        kp3 = momenta_rhs(q3, p3, w1, w2, a1, a2)
        q4 = q + dt * kq3
        p4 = p + dt * kp3
        kq4 = coord_rhs(q4, w1, w2, a1, a2)
        kp4 = momenta_rhs(q4, p4, w1, w2, a1, a2)
        q = q + (dt / 6.0) * (kq1 + 2.0 * kq2 + 2.0 * kq3 + kq4)
        p = p + (dt / 6.0) * (kp1 + 2.0 * kp2 + 2.0 * kp3 + kp4)
        bad = not _coords_ok(q)
        if not bad:
            for i in range(15):
                if not np.isfinite(p[i]):
                    bad = True
                    break
        if bad:
            return times, states, momenta, idx, k
        if k % stride == 0 or k == n_steps:
            times[idx] = k * dt
            states[idx] = q
            momenta[idx] = p
            idx += 1
    return times, states, momenta, idx, -1
