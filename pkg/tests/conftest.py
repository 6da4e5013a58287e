"""Shared scenario fixtures: figure parameter sets plus milder ones for ODE runs."""

from __future__ import annotations

import pathlib

import pytest

from ncho.config import PhysicalConstants, Scenario, ScenarioKind, ScenarioSpec, build_scenario

SCENARIO_DIR = pathlib.Path(__file__).resolve().parent.parent / "scenarios"

# Figure parameters: M=1, mu=1, Delta=sigma=1e7, omega0=1e3, Gamma=vartheta=1,
# chi=1 for the rational/linear families, xi=1.
FIG_BASE = dict(
    mass_M=1.0,
    omega0=1.0e3,
    Gamma=1.0,
    vartheta=1.0,
    chi=1.0,
    sigma=1.0e7,
    Delta=1.0e7,
    mu=1.0,
    xi=1.0,
    hbar=1.0,
)


def make_scenario(
    kind: ScenarioKind, k_exp: int = 2, enforce: bool = True, **overrides
) -> Scenario:
    values = dict(FIG_BASE)
    values.update(overrides)
    spec = ScenarioSpec(constants=PhysicalConstants(**values), kind=kind, k_exp=k_exp)
    return build_scenario(spec, enforce_constraint=enforce)


@pytest.fixture(scope="session")
def fig_ia() -> Scenario:
    return make_scenario(ScenarioKind.SET_IA)


@pytest.fixture(scope="session")
def fig_ib() -> Scenario:
    return make_scenario(ScenarioKind.SET_IB)


@pytest.fixture(scope="session")
def fig_ic() -> Scenario:
    return make_scenario(ScenarioKind.SET_IC)


@pytest.fixture(scope="session")
def fig_ii() -> Scenario:
    return make_scenario(ScenarioKind.SET_II_K, k_exp=2)


@pytest.fixture(scope="session")
def fig_iii() -> Scenario:
    return make_scenario(ScenarioKind.SET_III)


@pytest.fixture(scope="session")
def fig_scenarios(fig_ia, fig_ib, fig_ic, fig_ii, fig_iii) -> dict[str, Scenario]:
    return {"Ia": fig_ia, "Ib": fig_ib, "Ic": fig_ic, "II": fig_ii, "III": fig_iii}


# Mild parameter sets: same families, O(1) stiffness, exact constraints —
# chosen so fixed-step integration and quadrature stay cheap in tests.
@pytest.fixture(scope="session")
def mild_ib() -> Scenario:
    # mu^4 (sigma*Delta - vartheta^2/4) = (16/7)(2 - 1/4) = 4 = xi^2 sigma^2
    return make_scenario(
        ScenarioKind.SET_IB, omega0=1.0, sigma=2.0, Delta=1.0, mu=(16.0 / 7.0) ** 0.25
    )


@pytest.fixture(scope="session")
def mild_ii() -> Scenario:
    # Gamma^2 mu = 16 (sigma*Delta*mu - xi^2 sigma^2 / mu^3): 1 = 16(17/16 - 1)
    return make_scenario(
        ScenarioKind.SET_II_K, k_exp=2, omega0=0.5, sigma=1.0, Delta=17.0 / 16.0, mu=1.0
    )


@pytest.fixture(scope="session")
def mild_iii() -> Scenario:
    # Delta*mu^4 = xi^2 sigma: 2 = 2
    return make_scenario(ScenarioKind.SET_III, omega0=0.5, sigma=2.0, Delta=2.0, mu=1.0)


@pytest.fixture(scope="session")
def mild_scenarios(mild_ib, mild_ii, mild_iii) -> dict[str, Scenario]:
    return {"Ib": mild_ib, "II": mild_ii, "III": mild_iii}


@pytest.fixture(scope="session")
def steep_ia() -> Scenario:
    # omega0 = 1e4 puts the hypergeometric argument at 0.1 * exp(2t), inside
    # the validated |z| < 1 region for t < ln(10)/2 ~ 1.151, so both the
    # closed form (early grid) and the quadrature fallback (beyond) are
    # exercised. mu keeps the family constraint exact.
    mu = (1.0e14 / (1.0e14 - 0.25)) ** 0.25
    return make_scenario(ScenarioKind.SET_IA, omega0=1.0e4, mu=mu)
