"""Brute-force references for the closed-form dynamics.

Two independent routes:

* exact Schrödinger evolution of a state on the 4-dim Fock space, valid when the
  banks are decoupled from their environments;
* classical RK4 integration of ``V' = i U V`` for the propagator.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import fock
from .bankmodel import ConfigurationError, ModelSpec, TimeGrid
from .constants import HERMITIAN_TOL, RK4_STABILITY_LIMIT
from .linalg import as_cmatrix, max_abs

__all__ = [
    "OracleScopeError",
    "ClosedSystemSpec",
    "closed_hamiltonian",
    "closed_system",
    "evolve",
    "exact_occupations",
    "ode_propagator",
]


class OracleScopeError(ValueError):
    """The exact oracle only covers systems without environment coupling."""


@dataclass(frozen=True)
class ClosedSystemSpec:
    hamiltonian: np.ndarray
    initial: fock.StateVector

    def __post_init__(self):
        h = as_cmatrix(self.hamiltonian)
        if h.shape != (4, 4):
            raise ValueError(f"hamiltonian must be 4x4, got {h.shape}")
        if max_abs(h - h.conj().T) > HERMITIAN_TOL:
            raise ValueError("hamiltonian is not Hermitian")
        object.__setattr__(self, "hamiltonian", h)


def closed_hamiltonian(spec: ModelSpec) -> np.ndarray:
    """Bank part of the full Hamiltonian: free terms plus both bank-bank couplings."""
    if not spec.closed:
        raise OracleScopeError(
            f"exact oracle needs lam1 = lam2 = 0, got ({spec.bank1.lam}, {spec.bank2.lam})"
        )
    b1, b2 = fock.annihilator(1).matrix, fock.annihilator(2).matrix
    b1d, b2d = fock.creator(1).matrix, fock.creator(2).matrix
    c = spec.coupling
    return (
        spec.bank1.omega * (b1d @ b1)
        + spec.bank2.omega * (b2d @ b2)
        + c.mu_acm * (b1d @ b2 + b2d @ b1)
        + c.mu_cm * (b1d @ b2d + b2 @ b1)
    )


def closed_system(spec: ModelSpec) -> ClosedSystemSpec:
    return ClosedSystemSpec(closed_hamiltonian(spec), fock.superposition(spec.initial.as_tuple()))


def evolve(spec: ClosedSystemSpec, times) -> np.ndarray:
    """``Psi(t) = exp(-i H t) Psi_0`` for each time, shape ``(len(times), 4)``.

    Uses the spectral theorem for the Hermitian ``H`` (unitary eigenbasis), so no
    matrix exponential routine from :mod:`bankqf.linalg` is involved.
    """
    times = np.atleast_1d(np.asarray(times, dtype=float))
    energies, basis = np.linalg.eigh(spec.hamiltonian)
    coeffs = basis.conj().T @ spec.initial.amplitudes
    phases = np.exp(-1j * np.multiply.outer(times, energies))
    return (phases * coeffs) @ basis.T


def exact_occupations(spec: ClosedSystemSpec, grid) -> tuple[np.ndarray, np.ndarray]:
    times = grid.times() if isinstance(grid, TimeGrid) else np.asarray(grid, dtype=float)
    if np.any(np.diff(times) < 0):
        raise ValueError("time grid must be ascending")
    psi = evolve(spec, times)
    out = []
    for mode in (1, 2):
        n = fock.number(mode).matrix
        out.append(np.einsum("ti,ij,tj->t", psi.conj(), n, psi).real)
    return out[0], out[1]


def ode_propagator(u, t_max: float, dt: float) -> tuple[np.ndarray, np.ndarray]:
    """RK4 solution of ``V' = i U V``, ``V(0) = I``.

    Returns ``(times, V)`` with ``times = k * dt`` for ``k = 0 .. floor(t_max / dt)``
    and ``V`` of shape ``(len(times), 4, 4)``.
    """
    a = 1j * as_cmatrix(u)
    if not dt > 0 or dt > t_max:
        raise ConfigurationError(f"need 0 < dt <= t_max, got dt={dt}, t_max={t_max}")
    if np.linalg.norm(a, 2) * dt > RK4_STABILITY_LIMIT:
        raise ConfigurationError(
            f"step too large: ||iU|| * dt = {np.linalg.norm(a, 2) * dt:.3g} exceeds {RK4_STABILITY_LIMIT}"
        )
    steps = int(np.floor(t_max / dt + 1e-9))
    n = a.shape[0]
    out = np.empty((steps + 1, n, n), dtype=np.complex128)
    v = np.eye(n, dtype=np.complex128)
    out[0] = v
    for k in range(steps):
        k1 = a @ v
        k2 = a @ (v + 0.5 * dt * k1)
        k3 = a @ (v + 0.5 * dt * k2)
        k4 = a @ (v + dt * k3)
        v = v + (dt / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)
        out[k + 1] = v
    return dt * np.arange(steps + 1), out
