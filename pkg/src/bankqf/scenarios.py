"""Named parameter presets and machine-checkable expectations.

Every preset is a fully resolved :class:`ScenarioSpec`. Each tag names a
qualitative property the Quantum Functions of that preset should show; running
a scenario evaluates its tags and reports pass/fail for each.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from functools import lru_cache

import numpy as np

from . import oracle, predprey
from .bankmodel import (
    BankParams,
    Coupling,
    InitialState,
    ModelSpec,
    QFSeries,
    QuadratureConfig,
    TimeGrid,
    quantum_functions,
)
from .constants import (
    ASYMPTOTIC_TOL,
    CLOSED_FORM_TOL,
    INDISTINGUISHABLE_TOL,
    MONOTONE_SLACK,
    OSCILLATION_FLOOR,
    RANGE_SLACK,
    STATIONARY_TV_TOL,
    TAIL_FRACTION,
)

__all__ = [
    "ScenarioNotFound",
    "ScenarioSpec",
    "ScenarioRun",
    "TimeGrid",
    "TAGS",
    "PSI",
    "ALPHA_REAL",
    "ALPHA_COMPLEX",
    "registry",
    "names",
    "get",
    "run",
    "evaluate_tag",
    "tail_slice",
    "tail_amplitude",
    "tail_mean",
    "total_variation",
    "sign_changes",
]


class ScenarioNotFound(KeyError):
    def __str__(self):
        return f"unknown scenario: {self.args[0]!r}"


@dataclass(frozen=True)
class ScenarioSpec:
    name: str
    model: ModelSpec
    grid: TimeGrid = TimeGrid(10.0, 1001)
    tags: tuple[str, ...] = ()
    note: str = ""

    def with_initial(self, initial: InitialState, name: str | None = None) -> "ScenarioSpec":
        return replace(self, name=name or self.name, model=replace(self.model, initial=initial))


@dataclass
class ScenarioRun:
    spec: ScenarioSpec
    series: QFSeries
    report: dict[str, bool] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(self.report.values())


# ---------------------------------------------------------------------------
# initial states

_S3 = 1.0 / math.sqrt(3.0)

PSI = {
    1: InitialState.sharp(1, 1),
    2: InitialState(0.5, 0.5, 0.5, 0.5),
    3: InitialState(a00=0.5, a01=-0.5, a10=0.5j, a11=-0.5j),
    4: InitialState(a00=_S3, a01=_S3, a10=_S3, a11=0.0),
}
ALPHA_REAL = InitialState(0.5, 0.5, 0.5, 0.5)
ALPHA_COMPLEX = InitialState(a00=0.5j, a01=0.5, a10=-0.5j, a11=-0.5)


# ---------------------------------------------------------------------------
# tag evaluators


def tail_slice(series: QFSeries) -> slice:
    start = int(math.floor((1.0 - TAIL_FRACTION) * (len(series.times) - 1)))
    return slice(start, None)


def tail_amplitude(x, series: QFSeries) -> float:
    return float(np.ptp(np.asarray(x)[tail_slice(series)]))


def tail_mean(x, series: QFSeries) -> float:
    return float(np.mean(np.asarray(x)[tail_slice(series)]))


def total_variation(x) -> float:
    return float(np.sum(np.abs(np.diff(x))))


def sign_changes(x) -> int:
    s = np.sign(x)
    s = s[s != 0]
    return int(np.count_nonzero(s[1:] != s[:-1]))


def _detrend(t, x):
    coeffs = np.polyfit(t, x, 1)
    return x - np.polyval(coeffs, t)


def _monotone_to_n(spec, series, quad):
    ok = True
    for j, bank in ((1, spec.model.bank1), (2, spec.model.bank2)):
        n = series.qf(j)
        d = np.diff(n)
        direction = np.sign(bank.N - n[0])
        if direction < 0:
            ok &= bool(d.max(initial=0.0) <= MONOTONE_SLACK)
        elif direction > 0:
            ok &= bool(d.min(initial=0.0) >= -MONOTONE_SLACK)
        else:
            ok &= bool(np.abs(d).max(initial=0.0) <= MONOTONE_SLACK)
        ok &= abs(n[-1] - bank.N) < ASYMPTOTIC_TOL
    return ok


def _stationary(spec, series, quad):
    return total_variation(series.n1) < STATIONARY_TV_TOL and total_variation(series.n2) < STATIONARY_TV_TOL


def _oscillatory(spec, series, quad):
    t = series.times
    out = True
    for j in (1, 2):
        x = _detrend(t, series.qf(j))
        x[np.abs(x) < OSCILLATION_FLOOR] = 0.0  # rounding noise on a flat series is not oscillation
        out &= sign_changes(x) >= 3
    return out


def _indistinguishable_tail(spec, series, quad):
    sl = tail_slice(series)
    return float(np.max(np.abs(series.n1[sl] - series.n2[sl]))) < INDISTINGUISHABLE_TOL


def _in_range(spec, series, quad):
    lo, hi = -RANGE_SLACK, 1.0 + RANGE_SLACK
    return all(bool(np.all((series.qf(j) >= lo) & (series.qf(j) <= hi))) for j in (1, 2))


def peak_interference(series: QFSeries) -> float:
    return float(max(np.max(np.abs(series.dmu1)), np.max(np.abs(series.dmu2))))


def _complex_alpha_amplified(spec, series, quad):
    twin = replace(spec.model, initial=ALPHA_REAL)
    reference = quantum_functions(twin, spec.grid, quad)
    return peak_interference(series) > peak_interference(reference)


def _oracle_match(spec, series, quad):
    o1, o2 = oracle.exact_occupations(oracle.closed_system(spec.model), series.times)
    return max(np.max(np.abs(series.n1 - o1)), np.max(np.abs(series.n2 - o2))) < CLOSED_FORM_TOL


def _closed_form_match(spec, series, quad):
    m = spec.model
    p = predprey.PredPreyParams(m.bank1.omega, m.bank2.omega, m.coupling.mu_acm)
    (k, l), = [(k, l) for k in (0, 1) for l in (0, 1) if m.initial.as_tuple()[2 * k + l] != 0]
    d1, d2 = predprey.densities_closed_form(p, k, l, series.times)
    return max(np.max(np.abs(series.n1 - d1)), np.max(np.abs(series.n2 - d2))) < CLOSED_FORM_TOL


TAGS = {
    "monotone-to-N": _monotone_to_n,
    "stationary": _stationary,
    "oscillatory": _oscillatory,
    "indistinguishable-tail": _indistinguishable_tail,
    "in-range": _in_range,
    "complex-alpha-amplified": _complex_alpha_amplified,
    "oracle-match": _oracle_match,
    "closed-form-match": _closed_form_match,
}


def evaluate_tag(tag: str, spec: ScenarioSpec, series: QFSeries, quad: QuadratureConfig | None = None) -> bool:
    try:
        fn = TAGS[tag]
    except KeyError:
        raise ValueError(f"unknown tag {tag!r}") from None
    return bool(fn(spec, series, quad or QuadratureConfig()))


def run(spec: ScenarioSpec, quad: QuadratureConfig | None = None, grid: TimeGrid | None = None) -> ScenarioRun:
    quad = quad or QuadratureConfig()
    if grid is not None:
        spec = replace(spec, grid=grid)
    series = quantum_functions(spec.model, spec.grid, quad)
    report = {tag: evaluate_tag(tag, spec, series, quad) for tag in spec.tags}
    return ScenarioRun(spec, series, report)


# ---------------------------------------------------------------------------
# presets


def _bank(omega, lam, Omega, N):
    return BankParams(float(omega), float(lam), float(Omega), float(N))


def _tags(*extra):
    return tuple(sorted({"in-range", *extra}))


def _fig7():
    bank2_rows = {1: (2.0, 0.5, 0.1), 2: (2.0, 3.0, 1.0), 3: (2.0, 8.0, 1.0), 4: (2.0, 8.0, 1.0)}
    n_values = {
        "left": {1: (0.0, 1.0), 2: (0.0, 1.0), 3: (0.0, 1.0), 4: (0.2, 0.8)},
        "right": {1: (0.0, 0.0), 2: (0.0, 0.0), 3: (0.0, 0.0), 4: (0.3, 0.6)},
    }
    out = []
    for row in (1, 2, 3, 4):
        for side in ("left", "right"):
            n1, n2 = n_values[side][row]
            w2, lam2, om2 = bank2_rows[row]
            b1 = _bank(1.0, 0.5, 0.1, n1)
            b2 = _bank(w2, lam2, om2, n2)
            # decay scale 10 / (pi lam^2 / Omega), clamped to [5, 50]
            slowest = min(b1.damping, b2.damping)
            t_max = float(min(50.0, max(5.0, 10.0 / slowest)))
            out.append(
                ScenarioSpec(
                    f"fig7-r{row}-{side}",
                    ModelSpec(b1, b2, Coupling(0.0, 0.0), InitialState.sharp(1, 1)),
                    TimeGrid(t_max, 1001),
                    _tags("monotone-to-N"),
                    "Scenario 1: no bank-bank coupling; bank 1 fixed, bank 2 varies by row.",
                )
            )
    return out


_POSITIONS = ("top-left", "top-right", "bottom-left", "bottom-right")


def _fig8():
    mus = [(100.0, 10.0), (100.0, 30.0), (0.0, 10.0), (0.0, 30.0)]
    out = []
    for pos, (acm, cm) in zip(_POSITIONS, mus):
        out.append(
            ScenarioSpec(
                f"fig8-{pos}",
                ModelSpec(_bank(1, 0, 1, 0), _bank(2, 0, 1, 0), Coupling(acm, cm), InitialState.sharp(1, 1)),
                TimeGrid(10.0, 10001),
                _tags("oscillatory", "oracle-match"),
                "Scenario 2: no environments. omega2 is not given in the source; omega2 = 2 assumed.",
            )
        )
    return out


def _fig9():
    out = []
    for side, initial in (("left", PSI[2]), ("right", PSI[4])):
        out.append(
            ScenarioSpec(
                f"fig9-{side}",
                ModelSpec(_bank(20, 0, 1, 0), _bank(60, 0, 1, 0), Coupling(30.0, 0.0), initial),
                TimeGrid(2.0, 4001),
                _tags("oscillatory", "oracle-match"),
                "Scenario 2: superposed initial state oscillates with mu_cm = 0.",
            )
        )
    return out


_SCENARIO3_FIGS = {
    10: ((2.0, 10.0), (0.0, 1.0)),
    11: ((2.0, 10.0), (1.0, 0.0)),
    12: ((2.0, 10.0), (1.0, 1.0)),
    13: ((2.0, 10.0), (0.0, 0.0)),
    14: ((2.0, 25.0), (0.0, 1.0)),
    15: ((2.0, 25.0), (1.0, 0.0)),
    16: ((2.0, 25.0), (1.0, 1.0)),
    17: ((2.0, 25.0), (0.0, 0.0)),
    18: ((25.0, 2.0), (0.0, 1.0)),
    19: ((25.0, 2.0), (1.0, 0.0)),
    20: ((25.0, 2.0), (1.0, 1.0)),
    21: ((25.0, 2.0), (0.0, 0.0)),
}


def scenario3_model(mu, n_values, initial) -> ModelSpec:
    """Full-Hamiltonian parameters shared by the Scenario-3 figures."""
    return ModelSpec(
        _bank(1.0, 0.2, 0.1, n_values[0]),
        _bank(2.0, 0.3, 0.1, n_values[1]),
        Coupling(*mu),
        initial,
    )


def _scenario3_t_max() -> float:
    # five damping times of the slower bank
    slowest = min(_bank(1.0, 0.2, 0.1, 0).damping, _bank(2.0, 0.3, 0.1, 0).damping)
    return float(math.ceil(5.0 / slowest))


def _fig10_21():
    out = []
    t_max = _scenario3_t_max()
    for fig, (mu, n_values) in _SCENARIO3_FIGS.items():
        extra = ("indistinguishable-tail",) if mu == (25.0, 2.0) else ()
        note = "Scenario 3: all interactions active."
        if fig == 21:
            note += " Caption repeats the fig-17 couplings; the running text assigns (25, 2), used here."
        for k in (1, 2, 3, 4):
            out.append(
                ScenarioSpec(
                    f"fig{fig}-psi{k}",
                    scenario3_model(mu, n_values, PSI[k]),
                    TimeGrid(t_max, 1001),
                    _tags(*extra),
                    note,
                )
            )
    return out


_APPB_FIGS = {
    1: ((200.0, 0.0), (0.0, 1.0)),
    2: ((200.0, 0.0), (1.0, 1.0)),
    3: ((0.0, 200.0), (0.0, 1.0)),
    4: ((0.0, 200.0), (1.0, 1.0)),
}
_PARAM_SETS = {
    "c1": ((1.0, 0.5, 0.1), (2.0, 0.5, 0.1)),
    "c2": ((1.2, 0.4, 0.3), (3.0, 0.4, 0.3)),
}


def _appb():
    out = []
    for family in ("c1", "c2"):
        (w1, l1, o1), (w2, l2, o2) = _PARAM_SETS[family]
        prefix = "appB" if family == "c1" else "appB-c2"
        note = "Appendix-B comparison of real and complex initial amplitudes."
        if family == "c2":
            note += " Source lists lambda1 ambiguously; lambda1 = lambda2 = 0.4 used."
        for fig, (mu, (n1, n2)) in _APPB_FIGS.items():
            for side, initial in (("left", ALPHA_REAL), ("right", ALPHA_COMPLEX)):
                tags = _tags("complex-alpha-amplified") if side == "right" else _tags()
                out.append(
                    ScenarioSpec(
                        f"{prefix}-fig{fig}-{side}",
                        ModelSpec(_bank(w1, l1, o1, n1), _bank(w2, l2, o2, n2), Coupling(*mu), initial),
                        TimeGrid(5.0, 5001),
                        tags,
                        note,
                    )
                )
    return out


def _fmt(x: float) -> str:
    return f"{x:g}"


def _predprey():
    out = []
    for p in predprey.PRESET_GRID:
        out.append(
            ScenarioSpec(
                f"predprey-w1_{_fmt(p.omega1)}-w2_{_fmt(p.omega2)}-lam_{_fmt(p.lam)}",
                ModelSpec(
                    _bank(p.omega1, 0, 1, 0),
                    _bank(p.omega2, 0, 1, 0),
                    Coupling(p.lam, 0.0),
                    InitialState.sharp(1, 0),
                ),
                TimeGrid(20.0, 2001),
                _tags("oracle-match", "closed-form-match"),
                "Two-species hopping model, written as the closed bank model with mu_acm = lam.",
            )
        )
    return out


@lru_cache(maxsize=1)
def _registry() -> tuple[ScenarioSpec, ...]:
    specs = (*_fig7(), *_fig8(), *_fig9(), *_fig10_21(), *_appb(), *_predprey())
    seen = set()
    for s in specs:
        if s.name in seen:
            raise RuntimeError(f"duplicate scenario name {s.name}")
        seen.add(s.name)
    return specs


def _aliases() -> dict[str, str]:
    out = {}
    for fig in range(10, 22):
        for k, pos in enumerate(_POSITIONS, start=1):
            out[f"fig{fig}-{pos}"] = f"fig{fig}-psi{k}"
    for fig in _APPB_FIGS:
        for prefix in ("appB", "appB-c2"):
            out[f"{prefix}-fig{fig}-alphaR"] = f"{prefix}-fig{fig}-left"
            out[f"{prefix}-fig{fig}-alphaC"] = f"{prefix}-fig{fig}-right"
            out[f"{prefix}-fig{fig}-calpha1"] = f"{prefix}-fig{fig}-left"
            out[f"{prefix}-fig{fig}-calpha2"] = f"{prefix}-fig{fig}-right"
    return out


ALIASES = _aliases()


def registry() -> list[ScenarioSpec]:
    return list(_registry())


def names() -> list[str]:
    return [s.name for s in _registry()]


def get(name: str) -> ScenarioSpec:
    name = ALIASES.get(name, name)
    for s in _registry():
        if s.name == name:
            return s
    raise ScenarioNotFound(name)
