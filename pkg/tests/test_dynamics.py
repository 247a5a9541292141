import math

import numpy as np
import pytest
from scipy.integrate import solve_ivp

from conftest import STRUCTURE_STATES, liouvillian, random_density_matrix
from vcdyn.algebra import trace_distance, vectorize
from vcdyn.dynamics import (
    ConvergenceError,
    IntegrationError,
    Liouvillian,
    asymptotic_state,
    build_liouvillian,
    evolve,
    exchange_hamiltonian,
    kernel_dimension,
    time_grid,
)
from vcdyn.entanglement import (
    PATTERN_11,
    PATTERN_12,
    PATTERN_13,
    PATTERN_13T,
    excited_population,
    matches_pattern,
)
from vcdyn.geometry import CouplingCoefficients, Geometry, configuration_preset, coupling_coefficients
from vcdyn.states import product_state, state_from_label


# Literal transcription of the master equation with operators built from
# scratch (no package helpers), used as an independent oracle.
def _unit(j, k):
    m = np.zeros((3, 3), complex)
    m[j - 1, k - 1] = 1.0
    return m


def _op(j, k, atom):
    return np.kron(_unit(j, k), np.eye(3)) if atom == "A" else np.kron(np.eye(3), _unit(j, k))


def _d(x, y, rho):
    # 2 x rho y - y x rho - rho y x
    return 2 * x @ rho @ y - y @ x @ rho - rho @ y @ x


def reference_rhs(c: CouplingCoefficients, rho):
    out = np.zeros((9, 9), complex)
    other = {"A": "B", "B": "A"}
    for a in "AB":
        b = other[a]
        for k in (1, 2):
            out += c.gamma * _d(_op(3, k, a), _op(k, 3, a), rho)
        for k, g in ((1, c.gamma13_c), (2, c.gamma23_c)):
            out += g * _d(_op(3, k, a), _op(k, 3, b), rho)
        out += c.gamma_vc * (_d(_op(3, 1, a), _op(2, 3, b), rho) + _d(_op(3, 2, a), _op(1, 3, b), rho))
    h = np.zeros((9, 9), complex)
    for k, om in ((1, c.omega13), (2, c.omega23)):
        h += om * (_op(k, 3, "A") @ _op(3, k, "B") + _op(k, 3, "B") @ _op(3, k, "A"))
    for a in "AB":
        b = other[a]
        h += c.omega_vc * (_op(2, 3, a) @ _op(3, 1, b) + _op(3, 2, a) @ _op(1, 3, b))
    return out + 1j * (h @ rho - rho @ h)


GEOMETRIES = [
    configuration_preset("I", 0.2),
    configuration_preset("II", 0.2),
    configuration_preset("I", 0.08),
    configuration_preset("II", 0.08),
    Geometry(0.37, 1.1, 0.4),
    Geometry(0.05, 2.0, 5.5, gamma=1.7),
]


@pytest.mark.parametrize("geom", GEOMETRIES, ids=str)
def test_generator_matches_literal_master_equation(geom, rng):
    c = coupling_coefficients(geom)
    L = build_liouvillian(c)
    for _ in range(5):
        rho = random_density_matrix(rng)
        scale = max(1.0, max(abs(v) for v in c.as_dict().values()))
        np.testing.assert_allclose(L(rho), reference_rhs(c, rho), atol=1e-12 * scale)


@pytest.mark.parametrize("geom", GEOMETRIES[:4], ids=str)
def test_propagation_matches_ode_oracle(geom):
    c = coupling_coefficients(geom)
    rho0 = state_from_label("bell:2")

    def f(_t, y):
        return reference_rhs(c, y.reshape(9, 9)).ravel()

    sol = solve_ivp(f, (0, 2.0), rho0.ravel(), method="DOP853", rtol=1e-11, atol=1e-13,
                    t_eval=np.linspace(0, 2.0, 21))
    traj = evolve(build_liouvillian(c), rho0, 2.0, 0.1)
    for n in range(21):
        np.testing.assert_allclose(traj.states[n], sol.y[:, n].reshape(9, 9), atol=1e-8)


def test_generator_preserves_trace_and_hermiticity():
    L = liouvillian("II", 0.2).superoperator
    # Tr(L rho) = 0 for every rho  <=>  vec(I)^T L = 0
    np.testing.assert_allclose(vectorize(np.eye(9)) @ L, 0, atol=1e-12)
    rng = np.random.default_rng(3)
    h = random_density_matrix(rng)
    out = liouvillian("II", 0.2)(h)
    np.testing.assert_allclose(out, out.conj().T, atol=1e-13)


def test_exchange_hamiltonian_is_hermitian():
    h = exchange_hamiltonian(coupling_coefficients(configuration_preset("II", 0.2)))
    np.testing.assert_allclose(h, h.conj().T, atol=0)


def test_independent_decay_analytic():
    c = coupling_coefficients(configuration_preset("II", 0.2)).without_collective()
    L = build_liouvillian(c)
    # atom A in (|1> + |2> + |3>)/sqrt(3), atom B in |3>
    psi_a = np.ones(3) / math.sqrt(3)
    psi = np.kron(psi_a, np.array([0, 0, 1.0]))
    traj = evolve(L, np.outer(psi, psi.conj()), 5.0, 0.05)
    t, r = traj.times, traj.states
    # 0-based positions of |1 3>, |2 3>, |3 3>
    p13, p23, p33 = 2, 5, 8
    np.testing.assert_allclose(r[:, p13, p13].real, np.exp(-2 * t) / 3, atol=1e-12)
    np.testing.assert_allclose(r[:, p13, p23].real, np.exp(-2 * t) / 3, atol=1e-12)
    np.testing.assert_allclose(r[:, p13, p33].real, np.exp(-t) / 3, atol=1e-12)
    np.testing.assert_allclose(r[:, p33, p33].real, 1 - 2 * np.exp(-2 * t) / 3, atol=1e-12)


def test_semigroup_property():
    L = liouvillian("II", 0.2)
    rng = np.random.default_rng(7)
    for _ in range(5):
        t1, t2 = rng.uniform(0.01, 3.0, size=2)
        lhs = L.propagator(t1 + t2)
        rhs = L.propagator(t1) @ L.propagator(t2)
        assert np.max(np.abs(lhs - rhs)) < 1e-9


def test_time_grid():
    t = time_grid(1.0, 0.1)
    assert len(t) == 11 and t[-1] == pytest.approx(1.0)
    np.testing.assert_allclose(np.diff(t), 0.1)
    with pytest.raises(ValueError):
        time_grid(0.1, 1.0)
    with pytest.raises(ValueError):
        time_grid(1.0, 0.0)


@pytest.mark.parametrize(
    "config,label,pattern",
    [
        ("I", "product:1:3", PATTERN_13T),
        ("II", "product:1:3", PATTERN_13),
        ("I", "dicke:anti:1:3", PATTERN_13T),
        ("II", "dicke:sym:1:3", PATTERN_13),
        ("I", "product:1:2", PATTERN_12),
        ("I", "product:1:1", PATTERN_11),
    ],
)
def test_zero_patterns_are_preserved(structure_trajectories, config, label, pattern):
    traj = structure_trajectories[config, label]
    assert all(matches_pattern(rho, pattern, tol=1e-12) for rho in traj.states)


def test_structure_invariants(structure_trajectories):
    for (config, label), traj in structure_trajectories.items():
        pops = np.array([excited_population(r) for r in traj.states])
        assert np.all(np.diff(pops) <= 1e-9), (config, label)
        assert abs(np.trace(traj.states[-1]) - 1) < 1e-10


def test_invariant_violation_raises():
    c = CouplingCoefficients(-1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0)
    L = build_liouvillian(c)
    with pytest.raises(IntegrationError) as err:
        evolve(L, product_state(1, 1), 1.0, 0.01)
    assert err.value.step >= 1 and err.value.violations


def test_evolve_rejects_invalid_initial_state():
    with pytest.raises(ValueError):
        evolve(liouvillian("I", 0.2), np.eye(9), 1.0, 0.1)


def test_large_separation_is_uniquely_relaxing():
    L = liouvillian("II", 1000.0)
    assert kernel_dimension(L) == 1
    ground = product_state(3, 3)
    for label in STRUCTURE_STATES:
        rho = asymptotic_state(L, state_from_label(label))
        assert trace_distance(rho, ground) < 1e-10


@pytest.mark.parametrize("config,r", [("I", 1000.0), ("II", 1000.0), ("I", 0.2), ("II", 0.2)])
def test_spectral_and_integrated_asymptotes_agree(config, r):
    L = liouvillian(config, r)
    for label in ("bell:2", "dicke:anti:1:3", "product:1:2"):
        rho0 = state_from_label(label)
        a = asymptotic_state(L, rho0, "spectral")
        b = asymptotic_state(L, rho0, "integrate", step=2.0, settle_tol=1e-12)
        assert np.max(np.abs(a - b)) < 1e-8


def test_dissipative_small_separation_limit_reaches_psi2_asymptote():
    # R -> 0 without the coherent shifts: Gamma_13 = Gamma_23 = gamma
    L = build_liouvillian(CouplingCoefficients(1.0, 1.0, 1.0, 0.0, 0.0, 0.0, 0.0))
    rho = asymptotic_state(L, state_from_label("bell:2"))
    assert trace_distance(rho, state_from_label("asymptotic_psi2")) < 1e-12
    rho_int = asymptotic_state(L, state_from_label("bell:2"), "integrate", step=5.0)
    assert trace_distance(rho_int, rho) < 1e-9


def test_integration_convergence_error():
    L = build_liouvillian(CouplingCoefficients(1.0, 1.0, 1.0, 0.0, 0.0, 0.0, 0.0))
    with pytest.raises(ConvergenceError):
        asymptotic_state(L, state_from_label("bell:2"), "integrate", step=0.01, max_time=0.1)
    with pytest.raises(ValueError):
        asymptotic_state(L, state_from_label("bell:2"), "power")


def test_liouvillian_call_matches_superoperator():
    L = liouvillian("II", 0.2)
    assert isinstance(L, Liouvillian)
    rho = state_from_label("bell:5")
    np.testing.assert_allclose(vectorize(L(rho)), L.superoperator @ vectorize(rho))


def test_small_separation_propagation_keeps_invariants_tight():
    # ||L dt|| ~ 1e5 here; expm rounding must not leak into hermiticity or trace
    L = liouvillian("II", 1e-3)
    traj = evolve(L, state_from_label("bell:2"), 10.0, 0.01)
    assert max(np.max(np.abs(r - r.conj().T)) for r in traj.states) < 1e-13
    assert max(abs(np.trace(r) - 1) for r in traj.states) < 1e-12
    np.testing.assert_allclose(vectorize(np.eye(9)) @ L.propagator(0.01), vectorize(np.eye(9)), atol=1e-15)
