"""Two-qubit state core: the 15-coordinate density parameterization,
conversions both ways, partial trace and entanglement entropy.

A two-qubit density is stored as 15 real coordinates: the two local Bloch
vectors (x1, y1, z1), (x2, y2, z2) and the nine correlators
e_ij = tr[rho (sigma_i (x) sigma_j)].  The map back is

    rho = (1/4) [ I(x)I + sum_i v1_i sigma_i(x)I + sum_j v2_j I(x)sigma_j
                  + sum_ij e_ij sigma_i(x)sigma_j ].

Entropy is reported in nats throughout (ceiling ln 2 for one qubit).
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ValidationError
from .pauli import COORD_NAMES, COORD_OPERATORS, IDENT2, SIGMAS

LN2 = math.log(2.0)

# Tolerances for density-matrix invariants.
HERMITICITY_TOL = 1e-12
TRACE_TOL = 1e-12
# Eigenvalues in [-EIG_TOL, 0) are treated as integration roundoff and
# clamped; anything below -EIG_TOL means genuinely broken dynamics.
EIG_TOL = 1e-9


@dataclass(frozen=True)
class GeneralizedState:
    """The 15 real coordinates of a two-qubit density (dimensionless)."""

    x1: float = 0.0
    y1: float = 0.0
    z1: float = 0.0
    x2: float = 0.0
    y2: float = 0.0
    z2: float = 0.0
    e11: float = 0.0
    e12: float = 0.0
    e13: float = 0.0
    e21: float = 0.0
    e22: float = 0.0
    e23: float = 0.0
    e31: float = 0.0
    e32: float = 0.0
    e33: float = 0.0

    @classmethod
    def from_array(cls, q) -> "GeneralizedState":
        q = np.asarray(q, dtype=float)
        if q.shape != (15,):
            raise ValidationError(f"expected 15 coordinates, got shape {q.shape}")
        return cls(*(float(v) for v in q))

    @classmethod
    def product(cls, bloch1, bloch2) -> "GeneralizedState":
        """Product state of two qubits with the given Bloch vectors
        (correlators factorize: e_ij = v1_i * v2_j)."""
        v1 = np.asarray(bloch1, dtype=float)
        v2 = np.asarray(bloch2, dtype=float)
        e = np.outer(v1, v2).ravel()
        return cls(*v1, *v2, *e)

    @classmethod
    def computational(cls, label: str) -> "GeneralizedState":
        """|00>, |01>, |10> or |11> as a product state."""
        z = {"0": 1.0, "1": -1.0}
        try:
            z1, z2 = z[label[0]], z[label[1]]
        except (KeyError, IndexError):
            raise ValidationError(f"unknown basis label {label!r}") from None
        return cls.product((0.0, 0.0, z1), (0.0, 0.0, z2))

    def as_array(self) -> np.ndarray:
        return np.array([getattr(self, n) for n in COORD_NAMES], dtype=float)

    @property
    def bloch1(self) -> np.ndarray:
        return np.array([self.x1, self.y1, self.z1])

    @property
    def bloch2(self) -> np.ndarray:
        return np.array([self.x2, self.y2, self.z2])

    @property
    def r1(self) -> float:
        """Bloch radius of qubit 1 (1 = pure reduced state, 0 = maximal mixing)."""
        return float(np.linalg.norm(self.bloch1))

    @property
    def r2(self) -> float:
        return float(np.linalg.norm(self.bloch2))

    def validate(self, eig_tol: float = EIG_TOL) -> "GeneralizedState":
        """Check Bloch radii and positivity of the reconstructed density.

        Raises ValidationError on violation; returns self so calls chain.
        """
        if not np.all(np.isfinite(self.as_array())):
            raise ValidationError("non-finite coordinate")
        for name, r in (("r1", self.r1), ("r2", self.r2)):
            if r > 1.0 + 1e-9:
                raise ValidationError(f"{name} = {r:.12g} exceeds 1")
        lo = float(np.linalg.eigvalsh(reconstruct_density(self)).min())
        if lo < -eig_tol:
            raise ValidationError(f"reconstructed density has eigenvalue {lo:.3e}")
        return self


def reconstruct_density(s: GeneralizedState) -> np.ndarray:
    """4x4 density matrix for the given coordinates (Hermitian, trace 1)."""
    q = s.as_array()
    rho = np.eye(4, dtype=complex) + np.tensordot(q, COORD_OPERATORS, axes=([0], [0]))
    return rho / 4.0


def validate_density(rho: np.ndarray, dim: int | None = None,
                     eig_tol: float = EIG_TOL) -> np.ndarray:
    """Check the density-matrix invariants; returns the array on success."""
    rho = np.asarray(rho, dtype=complex)
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        raise ValidationError(f"density must be square, got shape {rho.shape}")
    if dim is not None and rho.shape[0] != dim:
        raise ValidationError(f"expected {dim}x{dim} density, got {rho.shape[0]}x{rho.shape[0]}")
    if np.max(np.abs(rho - rho.conj().T)) > HERMITICITY_TOL:
        raise ValidationError("density is not Hermitian")
    if abs(np.trace(rho).real - 1.0) > TRACE_TOL or abs(np.trace(rho).imag) > TRACE_TOL:
        raise ValidationError(f"density trace is {np.trace(rho):.12g}, expected 1")
    lo = float(np.linalg.eigvalsh(rho).min())
    if lo < -eig_tol:
        raise ValidationError(f"density has eigenvalue {lo:.3e} below -{eig_tol:g}")
    return rho


def extract_coordinates(rho: np.ndarray) -> GeneralizedState:
    """Inverse of reconstruct_density via Pauli traces (validates the input)."""
    rho = validate_density(rho, dim=4)
    q = np.einsum("kij,ji->k", COORD_OPERATORS, rho).real
    return GeneralizedState.from_array(q)


def partial_trace_second(rho: np.ndarray) -> np.ndarray:
    """Reduced density of qubit 1: trace over the second tensor factor."""
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (4, 4):
        raise ValidationError(f"expected 4x4 density, got shape {rho.shape}")
    return np.trace(rho.reshape(2, 2, 2, 2), axis1=1, axis2=3)


def bloch_vector(rho: np.ndarray) -> np.ndarray:
    """Bloch vector (x, y, z) of a 2x2 density."""
    rho = np.asarray(rho, dtype=complex)
    return np.array([np.trace(rho @ s).real for s in SIGMAS])


def von_neumann_entropy(rho: np.ndarray) -> float:
    """Entropy -sum lam ln lam of a 2x2 density, in nats.

    The eigenvalues are (1 +- r)/2 with r the Bloch radius, so no general
    eigensolver is needed.  Eigenvalues in [-1e-9, 0) from integration
    roundoff are clamped to 0; anything lower raises ValidationError.
    """
    rho = validate_density(rho, dim=2)
    r = float(np.linalg.norm(bloch_vector(rho)))
    lam = np.array([(1.0 + r) / 2.0, (1.0 - r) / 2.0])
    if lam.min() < -EIG_TOL:
        raise ValidationError(f"2x2 density has eigenvalue {lam.min():.3e}")
    lam = np.clip(lam, 0.0, None)
    s = float(-sum(v * math.log(v) for v in lam if v > 0.0))
    return max(s, 0.0)


def entropy_from_bloch_radius(r1: float) -> float:
    """Closed-form single-qubit entropy ln2 - r artanh r - ln sqrt(1-r^2).

    Equals the eigenvalue formula for the spectrum ((1+r)/2, (1-r)/2);
    r = 0 gives ln 2 (maximal entanglement of the pair), r = 1 gives 0.
    """
    if not 0.0 <= r1 <= 1.0 + 1e-9:
        raise ValidationError(f"Bloch radius {r1!r} outside [0, 1]")
    r1 = min(float(r1), 1.0)
    if r1 >= 1.0 - 1e-15:
        return 0.0
    s = LN2 - r1 * math.atanh(r1) - math.log(math.sqrt(1.0 - r1 * r1))
    return max(s, 0.0)
