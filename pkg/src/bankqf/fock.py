"""Two-mode fermionic Fock space.

Ladder operators are realised with a Jordan-Wigner construction, mode 1 first::

    b1 = s- (x) I,    b2 = sz (x) s-,    s- = [[0, 1], [0, 0]],  sz = diag(1, -1)

Each single-mode factor acts on ``(|0>, |1>)`` so the basis vector with
occupations ``(k, l)`` sits at index ``2*k + l``. With this ordering
``phi_{1,1} = b1^dag b2^dag phi_{0,0}`` comes out with a ``+1`` sign.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Literal

import numpy as np

from .constants import INPUT_NORM_TOL, STATE_NORM_TOL
from .linalg import adjoint, as_cmatrix

__all__ = [
    "ModeOperator",
    "StateVector",
    "NormalizationError",
    "annihilator",
    "creator",
    "number",
    "basis_index",
    "basis_state",
    "superposition",
    "expectation",
    "anticommutator",
]

DIM = 4
_SIGMA_MINUS = np.array([[0, 1], [0, 0]], dtype=np.complex128)
_SIGMA_Z = np.diag([1.0, -1.0]).astype(np.complex128)
_I2 = np.eye(2, dtype=np.complex128)


class NormalizationError(ValueError):
    """Amplitudes do not have unit norm."""

    def __init__(self, norm_sq: float):
        super().__init__(f"amplitudes are not normalised: sum |alpha|^2 = {norm_sq!r}")
        self.norm_sq = norm_sq


@dataclass(frozen=True)
class ModeOperator:
    mode: Literal[1, 2]
    kind: Literal["annihilator", "creator", "number"]
    matrix: np.ndarray


@lru_cache(maxsize=None)
def _lowering(mode: int) -> np.ndarray:
    if mode == 1:
        m = np.kron(_SIGMA_MINUS, _I2)
    elif mode == 2:
        m = np.kron(_SIGMA_Z, _SIGMA_MINUS)
    else:
        raise ValueError(f"mode must be 1 or 2, got {mode!r}")
    m.setflags(write=False)
    return m


def annihilator(mode: int) -> ModeOperator:
    return ModeOperator(mode, "annihilator", _lowering(mode))


def creator(mode: int) -> ModeOperator:
    return ModeOperator(mode, "creator", adjoint(_lowering(mode)))


def number(mode: int) -> ModeOperator:
    b = _lowering(mode)
    return ModeOperator(mode, "number", adjoint(b) @ b)


def anticommutator(x, y) -> np.ndarray:
    return x @ y + y @ x


@dataclass(frozen=True)
class StateVector:
    """Normalised vector on the 4-dim space; ``amplitudes[2*k + l]`` is the weight of phi_{k,l}."""

    amplitudes: np.ndarray

    def __post_init__(self):
        amps = np.asarray(self.amplitudes, dtype=np.complex128).reshape(DIM)
        norm_sq = float(np.vdot(amps, amps).real)
        if abs(norm_sq - 1.0) > STATE_NORM_TOL:
            raise NormalizationError(norm_sq)
        amps.setflags(write=False)
        object.__setattr__(self, "amplitudes", amps)

    def amplitude(self, k: int, l: int) -> complex:
        return complex(self.amplitudes[basis_index(k, l)])


def basis_index(k: int, l: int) -> int:
    if k not in (0, 1) or l not in (0, 1):
        raise ValueError(f"occupations must be 0 or 1, got ({k}, {l})")
    return 2 * k + l


def _vacuum() -> np.ndarray:
    v = np.zeros(DIM, dtype=np.complex128)
    v[0] = 1.0
    return v


def basis_state(k: int, l: int) -> StateVector:
    """phi_{k,l} built from the vacuum by applying creators (b1^dag before b2^dag)."""
    basis_index(k, l)
    v = _vacuum()
    if l:
        v = creator(2).matrix @ v
    if k:
        v = creator(1).matrix @ v
    return StateVector(v)


def superposition(alphas) -> StateVector:
    """``sum alpha_{k,l} phi_{k,l}`` with ``alphas`` ordered as (a00, a01, a10, a11).

    Inputs within ``INPUT_NORM_TOL`` of unit norm are accepted and rescaled to
    remove that residue; anything further off is rejected.
    """
    a = np.asarray(alphas, dtype=np.complex128).reshape(DIM)
    norm_sq = float(np.sum(np.abs(a) ** 2))
    if abs(norm_sq - 1.0) > INPUT_NORM_TOL:
        raise NormalizationError(norm_sq)
    vec = np.zeros(DIM, dtype=np.complex128)
    for k in (0, 1):
        for l in (0, 1):
            vec = vec + a[basis_index(k, l)] * basis_state(k, l).amplitudes
    return StateVector(vec / np.sqrt(norm_sq))


def expectation(state: StateVector, op) -> complex:
    op = as_cmatrix(op)
    if op.shape != (DIM, DIM):
        raise ValueError(f"operator must be {DIM}x{DIM}, got {op.shape}")
    psi = state.amplitudes
    return complex(np.vdot(psi, op @ psi))
