"""Pauli algebra tables for one and two qubits.

Convention: |0> is the +1 eigenstate of sigma_z, i.e. ket (1, 0).
"""
import numpy as np

IDENT2 = np.eye(2, dtype=complex)
SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)
SIGMAS = (SIGMA_X, SIGMA_Y, SIGMA_Z)

KET_0 = np.array([1, 0], dtype=complex)
KET_1 = np.array([0, 1], dtype=complex)

# Coordinate order used everywhere: two local Bloch vectors, then the nine
# two-qubit correlators row-major in (first-qubit axis, second-qubit axis).
COORD_NAMES = (
    "x1", "y1", "z1", "x2", "y2", "z2",
    "e11", "e12", "e13", "e21", "e22", "e23", "e31", "e32", "e33",
)

NUM_COORDS = 15


def _coord_operators():
    ops = [np.kron(s, IDENT2) for s in SIGMAS]
    ops += [np.kron(IDENT2, s) for s in SIGMAS]
    ops += [np.kron(si, sj) for si in SIGMAS for sj in SIGMAS]
    return np.array(ops)


# Stack of the 15 traceless operators whose expectation values are the
# coordinates, in COORD_NAMES order.  tr[Op_a Op_b] = 4 delta_ab.
COORD_OPERATORS = _coord_operators()


def basis_ket(label: str) -> np.ndarray:
    """Computational two-qubit ket for a label in {'00','01','10','11'}."""
    if label not in ("00", "01", "10", "11"):
        raise ValueError(f"unknown basis label {label!r}")
    single = {"0": KET_0, "1": KET_1}
    return np.kron(single[label[0]], single[label[1]])


def ket_density(ket: np.ndarray) -> np.ndarray:
    """Rank-one density |psi><psi| / <psi|psi>."""
    ket = np.asarray(ket, dtype=complex)
    return np.outer(ket, ket.conj()) / np.vdot(ket, ket).real
