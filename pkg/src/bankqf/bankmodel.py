"""Two banks coupled to each other and to fermionic environments.

The Heisenberg system for ``b = (b1, b2, b1^dag, b2^dag)`` is linear,
``b'(t) = i U b(t) + (environment source)``, with ``U`` built in
:func:`build_u`. Writing ``V(t) = exp(i U t)``, each Quantum Function splits
into a bank term, an interference term and an environment term::

    n_j(t) = mu_j(t) + dmu_j(t) + res_j(t)

The first two are algebraic in ``V(t)`` and the initial amplitudes; the third
is a time integral of ``|V(tau)|^2`` weighted by the environment occupations
and is evaluated with composite Simpson.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, fields

import numpy as np

from . import linalg
from .constants import EIG_COND_MAX, QUAD_HALVING_TOL

__all__ = [
    "ConfigurationError",
    "BankParams",
    "Coupling",
    "InitialState",
    "ModelSpec",
    "TimeGrid",
    "QuadratureConfig",
    "QFSeries",
    "Propagator",
    "nu",
    "build_u",
    "adjoint_symmetry_defect",
    "propagator",
    "mu_terms",
    "delta_mu_terms",
    "reservoir_integrand",
    "reservoir_terms",
    "quantum_functions",
]


class ConfigurationError(ValueError):
    """Invalid model, grid or quadrature settings."""


def _finite(obj, *names):
    for name in names:
        if not math.isfinite(getattr(obj, name)):
            raise ConfigurationError(f"{type(obj).__name__}.{name} must be finite")


@dataclass(frozen=True)
class BankParams:
    """Parameters of one bank and its environment.

    omega : marginal cost of changing money creation
    lam   : coupling strength to the environment
    Omega : slope of the environment dispersion, ``Omega(k) = Omega * k``
    N     : environment occupation (target debt-deposit ratio)
    """

    omega: float
    lam: float
    Omega: float
    N: float

    def __post_init__(self):
        _finite(self, "omega", "lam", "Omega", "N")
        if not self.Omega > 0:
            raise ConfigurationError(f"Omega must be positive, got {self.Omega}")
        if not 0.0 <= self.N <= 1.0:
            raise ConfigurationError(f"N must lie in [0, 1], got {self.N}")

    @property
    def damping(self) -> float:
        """``pi lam^2 / Omega``, the real part of :func:`nu`."""
        return math.pi * self.lam**2 / self.Omega


@dataclass(frozen=True)
class Coupling:
    mu_acm: float = 0.0
    mu_cm: float = 0.0

    def __post_init__(self):
        _finite(self, "mu_acm", "mu_cm")


@dataclass(frozen=True)
class InitialState:
    """Amplitudes ``alpha_{k,l}`` of the initial superposition over phi_{k,l}."""

    a00: complex = 0j
    a01: complex = 0j
    a10: complex = 0j
    a11: complex = 0j

    def __post_init__(self):
        for f in fields(self):
            v = complex(getattr(self, f.name))
            if not (math.isfinite(v.real) and math.isfinite(v.imag)):
                raise ConfigurationError(f"{f.name} must be finite")
            object.__setattr__(self, f.name, v)
        norm_sq = sum(abs(v) ** 2 for v in self.as_tuple())
        if abs(norm_sq - 1.0) > 1e-9:
            raise ConfigurationError(f"initial amplitudes not normalised: sum |alpha|^2 = {norm_sq!r}")

    @classmethod
    def sharp(cls, k: int, l: int) -> "InitialState":
        if k not in (0, 1) or l not in (0, 1):
            raise ConfigurationError(f"occupations must be 0 or 1, got ({k}, {l})")
        return cls(**{f"a{k}{l}": 1.0})

    def as_tuple(self) -> tuple[complex, complex, complex, complex]:
        """Amplitudes in basis-index order (a00, a01, a10, a11)."""
        return (self.a00, self.a01, self.a10, self.a11)

    def is_sharp(self) -> bool:
        return sum(1 for v in self.as_tuple() if v != 0) == 1


@dataclass(frozen=True)
class ModelSpec:
    bank1: BankParams
    bank2: BankParams
    coupling: Coupling = field(default_factory=Coupling)
    initial: InitialState = field(default_factory=lambda: InitialState.sharp(1, 1))

    @property
    def closed(self) -> bool:
        return self.bank1.lam == 0 and self.bank2.lam == 0


@dataclass(frozen=True)
class TimeGrid:
    """Uniform grid ``0 = t_0 < ... < t_{points-1} = t_max``."""

    t_max: float
    points: int

    def __post_init__(self):
        if not (math.isfinite(self.t_max) and self.t_max > 0):
            raise ConfigurationError(f"t_max must be positive, got {self.t_max}")
        if int(self.points) != self.points or self.points < 2:
            raise ConfigurationError(f"points must be an integer >= 2, got {self.points}")

    def times(self) -> np.ndarray:
        return np.linspace(0.0, self.t_max, int(self.points))


@dataclass(frozen=True)
class QuadratureConfig:
    """Simpson settings for the environment integrals.

    ``refine`` is the (even) number of Simpson subintervals per output
    interval. ``None`` picks it from the fastest rate of ``U`` and then doubles
    it until a further halving of the step moves no sample by ``tol`` or more.
    """

    refine: int | None = None
    tol: float = QUAD_HALVING_TOL
    max_refine: int = 1 << 14

    def __post_init__(self):
        if self.refine is not None:
            if int(self.refine) != self.refine or self.refine <= 0:
                raise ConfigurationError(f"quadrature refinement must be a positive integer, got {self.refine}")
            if self.refine % 2:
                raise ConfigurationError(f"Simpson needs an even refinement, got {self.refine}")
        if not self.tol > 0:
            raise ConfigurationError("quadrature tolerance must be positive")


@dataclass
class QFSeries:
    times: np.ndarray
    n1: np.ndarray
    n2: np.ndarray
    mu1: np.ndarray
    mu2: np.ndarray
    dmu1: np.ndarray
    dmu2: np.ndarray
    res1: np.ndarray
    res2: np.ndarray
    refine: int = 0

    COLUMNS = ("t", "n1", "n2", "mu1", "mu2", "dmu1", "dmu2", "res1", "res2")

    def columns(self) -> list[np.ndarray]:
        return [self.times, self.n1, self.n2, self.mu1, self.mu2, self.dmu1, self.dmu2, self.res1, self.res2]

    def qf(self, j: int) -> np.ndarray:
        return {1: self.n1, 2: self.n2}[j]

    def decomposition_defect(self) -> float:
        d1 = np.abs(self.n1 - (self.mu1 + self.dmu1 + self.res1))
        d2 = np.abs(self.n2 - (self.mu2 + self.dmu2 + self.res2))
        return float(max(d1.max(initial=0.0), d2.max(initial=0.0)))


def nu(bank: BankParams) -> complex:
    return 1j * bank.omega + bank.damping


def build_u(spec: ModelSpec) -> np.ndarray:
    """The 4x4 generator acting on ``(b1, b2, b1^dag, b2^dag)``."""
    nu1, nu2 = nu(spec.bank1), nu(spec.bank2)
    a, c = spec.coupling.mu_acm, spec.coupling.mu_cm
    return np.array(
        [
            [1j * nu1, -a, 0, -c],
            [-a, 1j * nu2, c, 0],
            [0, c, 1j * nu1.conjugate(), a],
            [-c, 0, a, 1j * nu2.conjugate()],
        ],
        dtype=np.complex128,
    )


_SWAP = np.block([[np.zeros((2, 2)), np.eye(2)], [np.eye(2), np.zeros((2, 2))]])


def adjoint_symmetry_defect(u) -> float:
    """max-abs of ``U + J conj(U) J`` with J swapping ``b_j`` and ``b_j^dag``.

    Zero exactly when the dagger equations are the adjoints of the plain ones.
    """
    u = linalg.as_cmatrix(u)
    return linalg.max_abs(u + _SWAP @ u.conj() @ _SWAP)


class Propagator:
    """``V(t) = exp(i U t)`` with one eigendecomposition reused for every ``t``."""

    def __init__(self, u):
        self.u = linalg.as_cmatrix(u)
        self.generator = 1j * self.u
        try:
            dec = linalg.eigen(self.generator)
        except linalg.EigenConvergenceError:
            dec = None
        if dec is not None and dec.condition_estimate >= EIG_COND_MAX:
            dec = None
        self._dec = dec

    @property
    def spectral(self) -> bool:
        return self._dec is not None

    def rate(self) -> float:
        """Largest eigenvalue modulus of ``iU`` (bounds the variation of ``V``)."""
        if self._dec is not None:
            return float(np.max(np.abs(self._dec.values), initial=0.0))
        return float(np.linalg.norm(self.generator, 2))

    def __call__(self, t) -> np.ndarray:
        ts = np.asarray(t, dtype=float)
        flat = np.atleast_1d(ts).ravel()
        if self._dec is not None:
            out = linalg.exp_of_scaled(self._dec, flat)
        else:
            out = np.stack([linalg.expm_pade(self.generator * s) for s in flat])
        return out.reshape(ts.shape + (4, 4))


def propagator(u, t) -> np.ndarray:
    return Propagator(u)(t)


def _abs2(v, j, k):
    # 1-based matrix element |V_{j,k}|^2
    return np.abs(v[..., j - 1, k - 1]) ** 2


def mu_terms(v, alpha: InitialState):
    """Bank contributions ``(mu_1, mu_2)`` for propagator value(s) ``v``."""
    v = np.asarray(v)
    p00, p01, p10, p11 = (abs(a) ** 2 for a in alpha.as_tuple())
    out = []
    for j in (1, 2):
        out.append(
            _abs2(v, j, 1) * (p10 + p11)
            + _abs2(v, j, 2) * (p01 + p11)
            + _abs2(v, j, 3) * (p00 + p01)
            + _abs2(v, j, 4) * (p00 + p10)
        )
    return out[0], out[1]


def delta_mu_terms(v, alpha: InitialState):
    """Interference contributions ``(dmu_1, dmu_2)``; vanish for a sharp initial state."""
    v = np.asarray(v)
    a00, a01, a10, a11 = alpha.as_tuple()
    c_10_01 = a10.conjugate() * a01
    c_11_00 = a11.conjugate() * a00
    c_01_10 = a01.conjugate() * a10
    out = []
    for j in (1, 2):
        vj = [None] + [v[..., j - 1, k] for k in range(4)]
        plus = vj[1].conj() * vj[2] * c_10_01 + vj[1].conj() * vj[4] * c_11_00
        minus = vj[2].conj() * vj[3] * c_11_00 + vj[3].conj() * vj[4] * c_01_10
        out.append(2.0 * plus.real - 2.0 * minus.real)
    return out[0], out[1]


def reservoir_integrand(spec: ModelSpec, v):
    """Integrands ``(g_1, g_2)`` with ``res_j(t) = int_0^t g_j(tau) dtau``."""
    v = np.asarray(v)
    w1 = 2.0 * math.pi * spec.bank1.lam**2 / spec.bank1.Omega
    w2 = 2.0 * math.pi * spec.bank2.lam**2 / spec.bank2.Omega
    n1, n2 = spec.bank1.N, spec.bank2.N
    out = []
    for j in (1, 2):
        out.append(
            w1 * (_abs2(v, j, 1) * n1 + _abs2(v, j, 3) * (1.0 - n1))
            + w2 * (_abs2(v, j, 2) * n2 + _abs2(v, j, 4) * (1.0 - n2))
        )
    return out[0], out[1]


def _cumulative_simpson(spec: ModelSpec, prop: Propagator, times: np.ndarray, refine: int):
    """Composite Simpson of the environment integrands, accumulated at every output time."""
    dt = np.diff(times)
    frac = np.arange(refine + 1) / refine
    nodes = times[:-1, None] + dt[:, None] * frac  # (M, r+1), shared endpoints duplicated
    g1, g2 = reservoir_integrand(spec, prop(nodes))
    w = np.ones(refine + 1)
    w[1:-1:2] = 4.0
    w[2:-1:2] = 2.0
    scale = dt / (3.0 * refine)
    out = []
    for g in (g1, g2):
        panels = scale * (g @ w)
        out.append(np.concatenate([[0.0], np.cumsum(panels)]))
    return out[0], out[1]


def _initial_refine(prop: Propagator, times: np.ndarray) -> int:
    # |V|^2 oscillates at up to twice the fastest rate; aim for h * rate ~ 0.05
    rate = 2.0 * prop.rate()
    max_dt = float(np.max(np.diff(times)))
    r = max(4, math.ceil(max_dt * rate / 0.05))
    return r + (r % 2)


def _resolve_reservoir(spec: ModelSpec, prop: Propagator, times: np.ndarray, quad: QuadratureConfig):
    if spec.closed:
        zero = np.zeros_like(times)
        return zero, zero.copy(), quad.refine or 0
    if quad.refine is not None:
        r1, r2 = _cumulative_simpson(spec, prop, times, quad.refine)
        return r1, r2, quad.refine
    r = _initial_refine(prop, times)
    coarse = _cumulative_simpson(spec, prop, times, r)
    while True:
        fine = _cumulative_simpson(spec, prop, times, 2 * r)
        change = max(np.max(np.abs(fine[0] - coarse[0])), np.max(np.abs(fine[1] - coarse[1])))
        if change < quad.tol or 2 * r >= quad.max_refine:
            return fine[0], fine[1], 2 * r
        r, coarse = 2 * r, fine


def _check_times(times) -> np.ndarray:
    times = np.asarray(times, dtype=float)
    if times.ndim != 1 or times.size < 1:
        raise ConfigurationError("time grid must be a non-empty 1-d array")
    if times[0] != 0.0:
        raise ConfigurationError("time grid must start at 0")
    if np.any(np.diff(times) <= 0) or not np.all(np.isfinite(times)):
        raise ConfigurationError("time grid must be finite and strictly ascending")
    return times


def reservoir_terms(spec: ModelSpec, t: float, quad: QuadratureConfig | None = None) -> tuple[float, float]:
    """Environment contributions ``(res_1(t), res_2(t))`` at a single time."""
    quad = quad or QuadratureConfig()
    if not (math.isfinite(t) and t >= 0):
        raise ConfigurationError(f"t must be finite and nonnegative, got {t}")
    if t == 0:
        return 0.0, 0.0
    prop = Propagator(build_u(spec))
    r1, r2, _ = _resolve_reservoir(spec, prop, np.array([0.0, t]), quad)
    return float(r1[-1]), float(r2[-1])


def quantum_functions(spec: ModelSpec, grid, quad: QuadratureConfig | None = None) -> QFSeries:
    """Quantum Functions and their three-part decomposition on ``grid``.

    ``grid`` is a :class:`TimeGrid` or an ascending array of times starting at 0.
    """
    quad = quad or QuadratureConfig()
    times = _check_times(grid.times() if isinstance(grid, TimeGrid) else grid)
    prop = Propagator(build_u(spec))
    v = prop(times)
    mu1, mu2 = mu_terms(v, spec.initial)
    dmu1, dmu2 = delta_mu_terms(v, spec.initial)
    if times.size == 1:
        res1, res2, refine = np.zeros(1), np.zeros(1), quad.refine or 0
    else:
        res1, res2, refine = _resolve_reservoir(spec, prop, times, quad)
    return QFSeries(
        times=times,
        n1=mu1 + dmu1 + res1,
        n2=mu2 + dmu2 + res2,
        mu1=mu1,
        mu2=mu2,
        dmu1=dmu1,
        dmu2=dmu2,
        res1=res1,
        res2=res2,
        refine=refine,
    )
