"""Small dense complex matrix helpers.

Matrices are plain ``numpy`` arrays of dtype ``complex128``. The functions here
validate shapes, keep the eigendecomposition together with its inverse and a
condition estimate, and provide a matrix exponential with two independent
routes (spectral and scaling-and-squaring Padé).
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .constants import EIG_COND_MAX, EIG_RESIDUAL_TOL

__all__ = [
    "DimensionError",
    "EigenConvergenceError",
    "EigenDecomposition",
    "as_cmatrix",
    "matmul",
    "adjoint",
    "eigen",
    "expm",
    "expm_eig",
    "expm_pade",
    "exp_of_scaled",
    "max_abs",
]


class DimensionError(ValueError):
    """Operands have incompatible shapes."""


class EigenConvergenceError(ArithmeticError):
    """The eigenvalue iteration failed; use :func:`expm_pade` instead."""


def as_cmatrix(a) -> np.ndarray:
    m = np.asarray(a, dtype=np.complex128)
    if m.ndim != 2:
        raise DimensionError(f"expected a 2-d matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ValueError("matrix has non-finite entries")
    return m


def max_abs(a) -> float:
    return float(np.max(np.abs(a))) if np.size(a) else 0.0


def matmul(a, b) -> np.ndarray:
    a = as_cmatrix(a)
    b = as_cmatrix(b)
    if a.shape[1] != b.shape[0]:
        raise DimensionError(f"cannot multiply {a.shape} by {b.shape}")
    return a @ b


def adjoint(a) -> np.ndarray:
    """Conjugate transpose."""
    return as_cmatrix(a).conj().T


@dataclass(frozen=True)
class EigenDecomposition:
    """Right eigenvectors in the columns of ``vectors``; ``A = V diag(values) V^-1``."""

    values: np.ndarray
    vectors: np.ndarray
    vectors_inverse: np.ndarray
    condition_estimate: float

    def reconstruct(self) -> np.ndarray:
        return (self.vectors * self.values) @ self.vectors_inverse

    def residual(self, a) -> float:
        """max-abs entry of ``A V - V diag(values)``."""
        a = as_cmatrix(a)
        return max_abs(a @ self.vectors - self.vectors * self.values)


def eigen(a) -> EigenDecomposition:
    a = as_cmatrix(a)
    if a.shape[0] != a.shape[1]:
        raise DimensionError(f"eigen needs a square matrix, got {a.shape}")
    try:
        values, vectors = np.linalg.eig(a)
    except np.linalg.LinAlgError as exc:
        raise EigenConvergenceError(str(exc)) from exc
    cond = float(np.linalg.cond(vectors))
    if not np.isfinite(cond):
        cond = np.inf
        inverse = np.full_like(vectors, np.nan)
    else:
        inverse = np.linalg.inv(vectors)
    dec = EigenDecomposition(values, vectors, inverse, cond)
    # LAPACK can return wrong vectors without complaint, e.g. for entries near underflow
    scale = float(np.linalg.norm(a, 2))
    if dec.residual(a) > EIG_RESIDUAL_TOL * max(scale, np.finfo(float).tiny):
        raise EigenConvergenceError(f"eigen residual {dec.residual(a):.2e} exceeds {EIG_RESIDUAL_TOL:g} * ||A||")
    return dec


def exp_of_scaled(dec: EigenDecomposition, scales) -> np.ndarray:
    """``expm(s * A)`` for every ``s`` in ``scales``, reusing one decomposition.

    Returns an array of shape ``(len(scales), n, n)``.
    """
    s = np.atleast_1d(np.asarray(scales, dtype=np.complex128))
    phases = np.exp(np.multiply.outer(s, dec.values))
    return np.einsum("ik,tk,kj->tij", dec.vectors, phases, dec.vectors_inverse)


def expm_eig(a) -> np.ndarray:
    dec = eigen(a)
    return exp_of_scaled(dec, [1.0])[0]


# Padé [13/13] coefficients and the 1-norm bound below which no scaling is needed
# (Higham, "The scaling and squaring method for the matrix exponential revisited").
_PADE13 = np.array(
    [
        64764752532480000.0,
        32382376266240000.0,
        7771770303897600.0,
        1187353796428800.0,
        129060195264000.0,
        10559470521600.0,
        670442572800.0,
        33522128640.0,
        1323241920.0,
        40840800.0,
        960960.0,
        16380.0,
        182.0,
        1.0,
    ]
)
_THETA13 = 5.371920351148152


def expm_pade(a) -> np.ndarray:
    """Scaling-and-squaring with a degree-13 Padé core."""
    a = as_cmatrix(a)
    n = a.shape[0]
    if a.shape[1] != n:
        raise DimensionError(f"expm needs a square matrix, got {a.shape}")
    norm1 = float(np.linalg.norm(a, 1))
    s = 0
    if norm1 > _THETA13:
        s = int(np.ceil(np.log2(norm1 / _THETA13)))
    a = a / (2.0**s)
    b = _PADE13
    eye = np.eye(n, dtype=np.complex128)
    a2 = a @ a
    a4 = a2 @ a2
    a6 = a2 @ a4
    u = a @ (a6 @ (b[13] * a6 + b[11] * a4 + b[9] * a2) + b[7] * a6 + b[5] * a4 + b[3] * a2 + b[1] * eye)
    v = a6 @ (b[12] * a6 + b[10] * a4 + b[8] * a2) + b[6] * a6 + b[4] * a4 + b[2] * a2 + b[0] * eye
    r = np.linalg.solve(v - u, v + u)
    for _ in range(s):
        r = r @ r
    return r


def expm(a) -> np.ndarray:
    """Matrix exponential.

    Uses the eigendecomposition when the eigenvector matrix is well conditioned
    (estimate below ``EIG_COND_MAX``) and falls back to :func:`expm_pade`
    otherwise, or if the eigen iteration does not converge.
    """
    a = as_cmatrix(a)
    if a.shape[0] != a.shape[1]:
        raise DimensionError(f"expm needs a square matrix, got {a.shape}")
    try:
        dec = eigen(a)
    except EigenConvergenceError:
        return expm_pade(a)
    if dec.condition_estimate >= EIG_COND_MAX:
        return expm_pade(a)
    return exp_of_scaled(dec, [1.0])[0]
