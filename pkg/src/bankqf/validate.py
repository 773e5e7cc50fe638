"""Self-check suite behind ``bankqf validate``.

Each check returns a :class:`CheckResult`; :func:`run_validation` runs them all.
Checks look up :func:`bankqf.bankmodel.build_u` at call time, so tests can
substitute a mutated builder with ``monkeypatch`` and watch checks fail.
"""
from __future__ import annotations

import re
import time
from dataclasses import dataclass, replace

import numpy as np

from . import bankmodel, fock, linalg, oracle, predprey, scenarios
from .bankmodel import InitialState, QuadratureConfig
from .constants import (
    ASYMPTOTIC_TOL,
    CAR_TOL,
    CLOSED_FORM_TOL,
    EXPM_PATH_AGREEMENT_TOL,
    FD_RESIDUAL_TOL,
    FD_STEP,
    QUAD_HALVING_TOL,
    RK4_EXPM_TOL,
    SHARP_INTERFERENCE_TOL,
    STATIONARY_TV_TOL,
)

__all__ = ["CheckResult", "CHECKS", "run_validation", "format_report"]


@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: str
    seconds: float = 0.0


def _fig_presets(prefix_list):
    return [s for s in scenarios.registry() if any(s.name.startswith(p) for p in prefix_list)]


def _scenario3():
    return [s for s in scenarios.registry() if re.fullmatch(r"fig\d+-psi\d", s.name)]


def car_suite(quad):
    worst = 0.0
    eye = np.eye(4)
    for i in (1, 2):
        for j in (1, 2):
            bi, bj = fock.annihilator(i).matrix, fock.annihilator(j).matrix
            bid, bjd = fock.creator(i).matrix, fock.creator(j).matrix
            worst = max(
                worst,
                linalg.max_abs(fock.anticommutator(bi, bjd) - (i == j) * eye),
                linalg.max_abs(fock.anticommutator(bi, bj)),
                linalg.max_abs(fock.anticommutator(bid, bjd)),
            )
    return worst < CAR_TOL, f"max defect {worst:.2e}"


def predprey_closed_form(quad):
    times = np.linspace(0.0, 20.0, 2001)
    worst = 0.0
    for p in predprey.PRESET_GRID:
        h = predprey.hamiltonian_matrix(p)
        for k in (0, 1):
            for l in (0, 1):
                o1, o2 = oracle.exact_occupations(oracle.ClosedSystemSpec(h, fock.basis_state(k, l)), times)
                d1, d2 = predprey.densities_closed_form(p, k, l, times)
                worst = max(worst, np.abs(o1 - d1).max(), np.abs(o2 - d2).max())
    return worst < CLOSED_FORM_TOL, f"max deviation {worst:.2e}"


def closed_system_equivalence(quad):
    worst = 0.0
    for spec in _fig_presets(["fig8-", "fig9-"]):
        for psi in scenarios.PSI.values():
            model = replace(spec.model, initial=psi)
            qf = bankmodel.quantum_functions(model, spec.grid, quad)
            o1, o2 = oracle.exact_occupations(oracle.closed_system(model), qf.times)
            worst = max(worst, np.abs(qf.n1 - o1).max(), np.abs(qf.n2 - o2).max())
    return worst < CLOSED_FORM_TOL, f"max deviation {worst:.2e}"


def u_adjoint_symmetry(quad):
    worst = max(bankmodel.adjoint_symmetry_defect(bankmodel.build_u(s.model)) for s in scenarios.registry())
    return worst == 0.0, f"max defect {worst:.2e}"


def expm_paths_agree(quad):
    worst = 0.0
    for s in scenarios.registry():
        a = 1j * bankmodel.build_u(s.model)
        for t in (0.1, 1.0, s.grid.t_max):
            worst = max(worst, linalg.max_abs(linalg.expm_eig(a * t) - linalg.expm_pade(a * t)))
    return worst < EXPM_PATH_AGREEMENT_TOL, f"max deviation {worst:.2e}"


def rk4_propagator(quad):
    worst = 0.0
    dt = 1e-3
    for mu in ((2.0, 10.0), (2.0, 25.0), (25.0, 2.0)):
        u = bankmodel.build_u(scenarios.scenario3_model(mu, (0.0, 1.0), scenarios.PSI[1]))
        times, vs = oracle.ode_propagator(u, 5.0, dt)
        prop = bankmodel.Propagator(u)
        for t in (1.0, 2.0, 5.0):
            k = int(round(t / dt))
            worst = max(worst, linalg.max_abs(vs[k] - prop(times[k])))
    return worst < RK4_EXPM_TOL, f"max deviation {worst:.2e}"


def fd_residual(quad):
    h = FD_STEP
    worst = 0.0
    for s in _scenario3():
        u = bankmodel.build_u(s.model)
        prop = bankmodel.Propagator(u)
        ts = np.linspace(h, s.grid.t_max, 50)
        deriv = (prop(ts + h) - prop(ts - h)) / (2 * h)
        worst = max(worst, linalg.max_abs(deriv - (1j * u) @ prop(ts)))
    return worst < FD_RESIDUAL_TOL, f"max residual {worst:.2e}"


def quadrature_convergence(quad):
    worst = 0.0
    for s in _fig_presets(["fig7-"]) + _scenario3():
        base = bankmodel.quantum_functions(s.model, s.grid, quad)
        finer = bankmodel.quantum_functions(s.model, s.grid, QuadratureConfig(refine=2 * base.refine))
        worst = max(worst, np.abs(base.res1 - finer.res1).max(), np.abs(base.res2 - finer.res2).max())
    return worst < QUAD_HALVING_TOL, f"max change on halving {worst:.2e}"


def sharp_interference(quad):
    worst = 0.0
    for s in scenarios.registry():
        v = bankmodel.Propagator(bankmodel.build_u(s.model))(np.linspace(0, s.grid.t_max, 101))
        for k in (0, 1):
            for l in (0, 1):
                d1, d2 = bankmodel.delta_mu_terms(v, InitialState.sharp(k, l))
                worst = max(worst, np.abs(d1).max(), np.abs(d2).max())
    return worst < SHARP_INTERFERENCE_TOL, f"max |dmu| {worst:.2e}"


def scenario1_asymptotics(quad):
    worst = 0.0
    for s in _fig_presets(["fig7-"]):
        qf = bankmodel.quantum_functions(s.model, s.grid, quad)
        worst = max(worst, abs(qf.n1[-1] - s.model.bank1.N), abs(qf.n2[-1] - s.model.bank2.N))
    return worst < ASYMPTOTIC_TOL, f"max |n_j(T) - N_j| {worst:.2e}"


def pair_sector_stationarity(quad):
    # phi_00 and phi_11 are eigenvectors of the hopping Hamiltonian
    base = scenarios.get("fig9-left")
    worst = 0.0
    for k, l in ((0, 0), (1, 1)):
        model = replace(base.model, initial=InitialState.sharp(k, l))
        qf = bankmodel.quantum_functions(model, base.grid, quad)
        worst = max(worst, scenarios.total_variation(qf.n1), scenarios.total_variation(qf.n2))
    return worst < STATIONARY_TV_TOL, f"max total variation {worst:.2e}"


def scenario_tags(quad):
    failed = []
    for s in scenarios.registry():
        result = scenarios.run(s, quad)
        failed += [f"{s.name}:{tag}" for tag, ok in result.report.items() if not ok]
    return not failed, "all tags pass" if not failed else "failed " + ", ".join(failed)


CHECKS = [
    ("CAR identities", car_suite),
    ("hopping closed form vs exact evolution", predprey_closed_form),
    ("closed-system QFs vs exact evolution", closed_system_equivalence),
    ("U adjoint symmetry", u_adjoint_symmetry),
    ("expm eigen vs Pade", expm_paths_agree),
    ("RK4 propagator vs expm", rk4_propagator),
    ("propagator ODE residual", fd_residual),
    ("quadrature step halving", quadrature_convergence),
    ("sharp-state interference vanishes", sharp_interference),
    ("no-coupling asymptotics to N", scenario1_asymptotics),
    ("pair-sector stationarity", pair_sector_stationarity),
    ("scenario tags", scenario_tags),
]


def run_validation(quad: QuadratureConfig | None = None) -> list[CheckResult]:
    quad = quad or QuadratureConfig()
    results = []
    for name, fn in CHECKS:
        start = time.perf_counter()
        try:
            ok, detail = fn(quad)
        except Exception as exc:  # a crashing check is a failing check
            ok, detail = False, f"{type(exc).__name__}: {exc}"
        results.append(CheckResult(name, bool(ok), detail, time.perf_counter() - start))
    return results


def format_report(results: list[CheckResult]) -> str:
    width = max(len(r.name) for r in results)
    lines = [f"{'check':<{width}}  result  time    detail"]
    for r in results:
        lines.append(f"{r.name:<{width}}  {'PASS' if r.passed else 'FAIL':<6}  {r.seconds:5.2f}s  {r.detail}")
    n_fail = sum(not r.passed for r in results)
    lines.append(f"{len(results) - n_fail}/{len(results)} checks passed")
    return "\n".join(lines)
