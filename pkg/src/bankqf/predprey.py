"""Closed two-species model with hopping interaction.

``H = w1 n1 + w2 n2 + lam (a1^dag a2 + a2^dag a1)`` on the two-mode Fock
space. The densities starting from a sharp occupation state have the closed
form implemented in :func:`densities_closed_form`.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import fock

__all__ = ["PredPreyParams", "delta", "densities_closed_form", "hamiltonian_matrix", "PRESET_GRID"]


@dataclass(frozen=True)
class PredPreyParams:
    omega1: float
    omega2: float
    lam: float

    def __post_init__(self):
        for name in ("omega1", "omega2", "lam"):
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"{name} must be finite")
        if self.lam < 0:
            raise ValueError(f"lam must be nonnegative, got {self.lam}")


# (omega1, omega2, lam) test grid: degenerate, free and strongly coupled corners.
PRESET_GRID = tuple(
    PredPreyParams(w1, w2, lam) for w1 in (1.0, 2.0) for w2 in (1.0, 2.0, 3.0) for lam in (0.0, 0.5, 2.0)
)


def delta(p: PredPreyParams) -> float:
    return math.sqrt((p.omega1 - p.omega2) ** 2 + 4.0 * p.lam**2)


def _phi_plus(p: PredPreyParams, t):
    return 2.0 * np.exp(-0.5j * t * (p.omega1 + p.omega2)) * np.cos(0.5 * delta(p) * t)


def _phi_minus(p: PredPreyParams, t):
    return -2.0j * np.exp(-0.5j * t * (p.omega1 + p.omega2)) * np.sin(0.5 * delta(p) * t)


def ladder_coefficients(p: PredPreyParams, t):
    """Coefficients of ``a1(t) = c11 a1 + c12 a2`` and ``a2(t) = c21 a1 + c22 a2``.

    Returns a ``(..., 2, 2)`` array. Undefined for ``delta == 0`` (free, degenerate
    case), where the evolution is the plain phase ``exp(-i w t)``.
    """
    t = np.asarray(t, dtype=float)
    d = delta(p)
    if d == 0.0:
        ph = np.exp(-1j * p.omega1 * t)
        z = np.zeros_like(ph)
        return np.stack([np.stack([ph, z], -1), np.stack([z, ph], -1)], -2)
    pp, pm = _phi_plus(p, t), _phi_minus(p, t)
    dw = p.omega1 - p.omega2
    c11 = (dw * pm + d * pp) / (2 * d)
    c12 = 2 * p.lam * pm / (2 * d)
    c22 = (-dw * pm + d * pp) / (2 * d)
    return np.stack([np.stack([c11, c12], -1), np.stack([c12, c22], -1)], -2)


def densities_closed_form(p: PredPreyParams, n1: int, n2: int, t):
    """Densities ``(n1(t), n2(t))`` starting from phi_{n1,n2}.

    ``t`` may be a scalar or an array. With ``delta == 0`` (``w1 == w2`` and
    ``lam == 0``) nothing moves and the initial occupations are returned.
    """
    if n1 not in (0, 1) or n2 not in (0, 1):
        raise ValueError(f"occupations must be 0 or 1, got ({n1}, {n2})")
    t = np.asarray(t, dtype=float)
    d = delta(p)
    if d == 0.0:
        return np.full(t.shape, float(n1)), np.full(t.shape, float(n2))
    free = (p.omega1 - p.omega2) ** 2 / d**2
    hop = 4.0 * p.lam**2 / d**2
    c2 = np.cos(0.5 * d * t) ** 2
    s2 = np.sin(0.5 * d * t) ** 2
    d1 = n1 * free + hop * (n1 * c2 + n2 * s2)
    d2 = n2 * free + hop * (n2 * c2 + n1 * s2)
    return d1, d2


def hamiltonian_matrix(p: PredPreyParams) -> np.ndarray:
    b1, b2 = fock.annihilator(1).matrix, fock.annihilator(2).matrix
    b1d, b2d = fock.creator(1).matrix, fock.creator(2).matrix
    return p.omega1 * (b1d @ b1) + p.omega2 * (b2d @ b2) + p.lam * (b1d @ b2 + b2d @ b1)
