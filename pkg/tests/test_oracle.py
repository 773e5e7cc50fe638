import numpy as np
import pytest
from hypothesis import given, strategies as st

from bankqf import bankmodel, fock, linalg, oracle, predprey, scenarios
from bankqf.bankmodel import BankParams, ConfigurationError, Coupling, InitialState, ModelSpec
from bankqf.constants import CONSERVATION_TOL, RK4_EXPM_TOL, RK4_ORDER_RATIO, UNITARITY_TOL


def closed_model(w1=1.0, w2=2.0, acm=0.0, cm=0.0, initial=None):
    return ModelSpec(
        BankParams(w1, 0.0, 1.0, 0.0),
        BankParams(w2, 0.0, 1.0, 0.0),
        Coupling(acm, cm),
        initial or InitialState.sharp(1, 1),
    )


def test_closed_hamiltonian_examples():
    h = oracle.closed_hamiltonian(closed_model())
    assert np.count_nonzero(h - np.diag(np.diag(h))) == 0
    h = oracle.closed_hamiltonian(closed_model(cm=30.0))
    assert np.array_equal(h, h.conj().T)


def test_oracle_rejects_open_system():
    spec = scenarios.get("fig7-r1-left").model
    with pytest.raises(oracle.OracleScopeError):
        oracle.closed_hamiltonian(spec)


def test_closed_spec_requires_hermitian():
    with pytest.raises(ValueError):
        oracle.ClosedSystemSpec(np.triu(np.ones((4, 4))), fock.basis_state(0, 0))


def test_exact_occupations_examples():
    h = np.diag([0.0, 2.0, 1.0, 3.0])
    o1, o2 = oracle.exact_occupations(oracle.ClosedSystemSpec(h, fock.basis_state(1, 0)), np.linspace(0, 5, 51))
    assert np.allclose(o1, 1.0) and np.allclose(o2, 0.0)

    h = predprey.hamiltonian_matrix(predprey.PredPreyParams(1.0, 1.0, 0.5))
    t = np.linspace(0, 10, 201)
    o1, o2 = oracle.exact_occupations(oracle.ClosedSystemSpec(h, fock.basis_state(1, 0)), t)
    assert np.allclose(o1, np.cos(t / 2) ** 2, atol=1e-12)
    assert np.allclose(o2, np.sin(t / 2) ** 2, atol=1e-12)


def test_fig9_hamiltonian_oscillates():
    spec = scenarios.get("fig9-left")
    assert (spec.model.bank1.omega, spec.model.bank2.omega, spec.model.coupling.mu_acm) == (20.0, 60.0, 30.0)
    o1, _ = oracle.exact_occupations(oracle.closed_system(spec.model), spec.grid)
    assert np.ptp(o1) > 0.1


def test_fig8_top_left_matches_bankmodel():
    spec = scenarios.get("fig8-top-left")
    qf = bankmodel.quantum_functions(spec.model, spec.grid)
    o1, o2 = oracle.exact_occupations(oracle.closed_system(spec.model), qf.times)
    assert max(np.abs(qf.n1 - o1).max(), np.abs(qf.n2 - o2).max()) < 1e-8


def test_descending_grid_rejected():
    spec = oracle.closed_system(closed_model())
    with pytest.raises(ValueError):
        oracle.exact_occupations(spec, [1.0, 0.5])


coupling = st.floats(-40, 40, allow_nan=False)


@given(coupling, coupling, st.floats(0, 10), st.sampled_from(list(scenarios.PSI)))
def test_unitarity_and_norm(acm, cm, t, k):
    spec = oracle.closed_system(closed_model(acm=acm, cm=cm, initial=scenarios.PSI[k]))
    u = linalg.expm(-1j * spec.hamiltonian * t)
    assert linalg.max_abs(u @ linalg.adjoint(u) - np.eye(4)) < UNITARITY_TOL
    psi = oracle.evolve(spec, [t])[0]
    assert abs(np.linalg.norm(psi) - 1.0) < UNITARITY_TOL


@given(coupling, st.sampled_from(list(scenarios.PSI)))
def test_number_conserved_without_pair_term(acm, k):
    spec = oracle.closed_system(closed_model(acm=acm, initial=scenarios.PSI[k]))
    o1, o2 = oracle.exact_occupations(spec, np.linspace(0, 5, 101))
    assert np.abs((o1 + o2) - (o1[0] + o2[0])).max() < CONSERVATION_TOL


def test_pair_term_breaks_number_conservation():
    spec = oracle.closed_system(closed_model(cm=10.0))
    o1, o2 = oracle.exact_occupations(spec, np.linspace(0, 1, 101))
    assert np.ptp(o1 + o2) > 0.1


def test_ode_propagator_examples():
    times, v = oracle.ode_propagator(np.zeros((4, 4)), 1.0, 0.1)
    assert len(times) == 11 and np.abs(v - np.eye(4)).max() == 0.0

    d = np.array([1.0, -2.0, 0.5 + 0.3j, 3.0])
    times, v = oracle.ode_propagator(np.diag(d), 2.0, 1e-3)
    exact = np.exp(1j * np.multiply.outer(times, d))
    assert np.abs(np.diagonal(v, axis1=1, axis2=2) - exact).max() < 1e-8


def test_ode_propagator_matches_expm_on_scenario3():
    for name in ("fig10-psi1", "fig14-psi1", "fig18-psi1"):
        u = bankmodel.build_u(scenarios.get(name).model)
        times, v = oracle.ode_propagator(u, 5.0, 1e-3)
        exact = bankmodel.Propagator(u)(times[[1000, 2000, 5000]])
        assert np.abs(v[[1000, 2000, 5000]] - exact).max() < RK4_EXPM_TOL


def test_ode_propagator_fourth_order():
    u = bankmodel.build_u(scenarios.get("fig14-psi1").model)
    prop = bankmodel.Propagator(u)
    errors = []
    for dt in (4e-3, 2e-3):
        times, v = oracle.ode_propagator(u, 2.0, dt)
        errors.append(np.abs(v - prop(times)).max())
    assert errors[0] / errors[1] >= RK4_ORDER_RATIO


def test_ode_propagator_errors():
    u = bankmodel.build_u(scenarios.get("fig14-psi1").model)
    with pytest.raises(ConfigurationError):
        oracle.ode_propagator(u, 5.0, 0.5)
    with pytest.raises(ConfigurationError):
        oracle.ode_propagator(u, 1.0, 0.0)
    with pytest.raises(ConfigurationError):
        oracle.ode_propagator(u, 1e-4, 1e-3)
