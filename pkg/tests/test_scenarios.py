import numpy as np
import pytest

from bankqf import bankmodel, scenarios
from bankqf.bankmodel import InitialState, QuadratureConfig, TimeGrid


def test_registry_counts():
    names = scenarios.names()
    assert len(names) == len(set(names))
    counts = {
        "fig7-": 8,
        "fig8-": 4,
        "fig9-": 2,
        "appB-fig": 8,
        "appB-c2-": 8,
        "predprey-": 18,
    }
    for prefix, n in counts.items():
        assert sum(x.startswith(prefix) for x in names) == n, prefix
    assert sum(x.startswith(f"fig{f}-psi") for x in names for f in range(10, 22)) == 48


def test_fig7_r1_left():
    m = scenarios.get("fig7-r1-left").model
    assert (m.bank1.omega, m.bank1.Omega, m.bank1.lam) == (1.0, 0.1, 0.5)
    assert (m.bank2.omega, m.bank2.Omega, m.bank2.lam) == (2.0, 0.1, 0.5)
    assert (m.coupling.mu_acm, m.coupling.mu_cm) == (0.0, 0.0)
    assert (m.bank1.N, m.bank2.N) == (0.0, 1.0)
    assert m.initial == InitialState.sharp(1, 1)


def test_fig7_fractional_row():
    assert (scenarios.get("fig7-r4-left").model.bank1.N, scenarios.get("fig7-r4-left").model.bank2.N) == (0.2, 0.8)
    assert (scenarios.get("fig7-r4-right").model.bank1.N, scenarios.get("fig7-r4-right").model.bank2.N) == (0.3, 0.6)


def test_fig8_couplings():
    got = [
        (scenarios.get(f"fig8-{p}").model.coupling.mu_acm, scenarios.get(f"fig8-{p}").model.coupling.mu_cm)
        for p in ("top-left", "top-right", "bottom-left", "bottom-right")
    ]
    assert got == [(100.0, 10.0), (100.0, 30.0), (0.0, 10.0), (0.0, 30.0)]
    assert "omega2 = 2 assumed" in scenarios.get("fig8-top-left").note


def test_appb_fig1_right():
    s = scenarios.get("appB-fig1-right")
    m = s.model
    assert (m.bank1.omega, m.bank1.lam, m.bank1.Omega) == (1.0, 0.5, 0.1)
    assert (m.bank2.omega, m.bank2.lam, m.bank2.Omega) == (2.0, 0.5, 0.1)
    assert (m.bank1.N, m.bank2.N) == (0.0, 1.0)
    assert (m.coupling.mu_acm, m.coupling.mu_cm) == (200.0, 0.0)
    assert m.initial == scenarios.ALPHA_COMPLEX
    assert scenarios.get("appB-fig1-left").model.initial == scenarios.ALPHA_REAL


def test_aliases():
    assert scenarios.get("appB-fig2-alphaC") == scenarios.get("appB-fig2-right")
    assert scenarios.get("appB-fig2-calpha1") == scenarios.get("appB-fig2-left")
    assert scenarios.get("fig12-bottom-right") == scenarios.get("fig12-psi4")


def test_scenario3_parameters():
    for fig in range(10, 22):
        for k in (1, 2, 3, 4):
            m = scenarios.get(f"fig{fig}-psi{k}").model
            assert (m.bank1.omega, m.bank2.omega, m.bank1.lam, m.bank2.lam) == (1.0, 2.0, 0.2, 0.3)
            assert m.initial == scenarios.PSI[k]


def test_unknown_scenario():
    with pytest.raises(scenarios.ScenarioNotFound):
        scenarios.get("nonexistent")
    with pytest.raises(KeyError):
        scenarios.get("nonexistent")


def test_psi_states_normalized():
    for alpha in [*scenarios.PSI.values(), scenarios.ALPHA_REAL, scenarios.ALPHA_COMPLEX]:
        assert sum(abs(a) ** 2 for a in alpha.as_tuple()) == pytest.approx(1.0)


@pytest.mark.parametrize(
    "name,tag",
    [
        ("fig7-r1-left", "monotone-to-N"),
        ("fig8-top-left", "oscillatory"),
        ("fig9-left", "oracle-match"),
        ("fig18-psi1", "indistinguishable-tail"),
        ("appB-fig1-right", "complex-alpha-amplified"),
        ("predprey-w1_1-w2_2-lam_0.5", "closed-form-match"),
    ],
)
def test_tag_examples(name, tag):
    result = scenarios.run(scenarios.get(name))
    assert tag in result.report and result.report[tag]
    assert result.passed


def test_tail_amplitude_fig18_vs_fig14():
    a = scenarios.run(scenarios.get("fig18-psi1")).series
    c = scenarios.run(scenarios.get("fig14-psi1")).series
    assert scenarios.tail_amplitude(a.n1, a) < scenarios.tail_amplitude(c.n1, c)


def test_tags_detect_wrong_behaviour():
    spec = scenarios.get("fig7-r1-left")
    frozen = bankmodel.quantum_functions(spec.model.__class__(
        spec.model.bank1.__class__(1.0, 0.0, 0.1, 0.0),
        spec.model.bank2.__class__(2.0, 0.0, 0.1, 1.0),
        spec.model.coupling,
        spec.model.initial,
    ), spec.grid)
    assert not scenarios.evaluate_tag("monotone-to-N", spec, frozen)
    assert scenarios.evaluate_tag("stationary", spec, frozen)
    assert not scenarios.evaluate_tag("oscillatory", spec, frozen)
    with pytest.raises(ValueError):
        scenarios.evaluate_tag("no-such-tag", spec, frozen)


def test_run_with_grid_override():
    result = scenarios.run(scenarios.get("fig7-r1-left"), grid=TimeGrid(5.0, 2))
    assert result.series.times.tolist() == [0.0, 5.0]


def test_helpers():
    assert scenarios.sign_changes(np.array([1.0, -1.0, 0.0, 2.0, -3.0])) == 3
    assert scenarios.total_variation(np.array([0.0, 1.0, 0.5])) == 1.5
    series = bankmodel.quantum_functions(scenarios.get("fig7-r1-left").model, TimeGrid(1.0, 5))
    assert scenarios.tail_slice(series) == slice(3, None)


def test_all_tags_pass_on_every_preset():
    failed = []
    for s in scenarios.registry():
        result = scenarios.run(s, QuadratureConfig())
        failed += [f"{s.name}:{t}" for t, ok in result.report.items() if not ok]
    assert not failed
