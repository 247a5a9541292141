import numpy as np
import pytest

from vcdyn.dynamics import build_liouvillian, evolve
from vcdyn.geometry import configuration_preset, coupling_coefficients
from vcdyn.states import state_from_label

STRUCTURE_STATES = (
    "product:1:3",
    "product:1:2",
    "product:1:1",
    "bell:1",
    "bell:2",
    "dicke:anti:1:3",
    "dicke:sym:1:3",
)


def random_density_matrix(rng, dim=9, rank=None):
    rank = rank or dim
    g = rng.normal(size=(dim, rank)) + 1j * rng.normal(size=(dim, rank))
    rho = g @ g.conj().T
    return rho / np.trace(rho).real


def liouvillian(config, r):
    return build_liouvillian(coupling_coefficients(configuration_preset(config, r)))


@pytest.fixture(scope="session")
def structure_trajectories():
    """Trajectories to t = 10 at R/lambda = 0.2, keyed by (configuration, label)."""
    out = {}
    for config in ("I", "II"):
        L = liouvillian(config, 0.2)
        for label in STRUCTURE_STATES:
            out[config, label] = evolve(L, state_from_label(label), 10.0, 0.01)
    return out


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


# block structure (1-based labels) of random states for each closed-form family
PATTERN_BLOCKS = {
    "13": [(3, 6, 7, 8), (9,)],
    "12": [(2,), (3, 7), (6, 8), (9,)],
    "11": [(1,), (3, 7), (9,)],
    "13t": [(3, 7), (9,)],
}


def random_patterned_state(rng, blocks):
    """Random valid density matrix that is block diagonal on the given labels.

    Each block gets a random rank and weight; rank-one blocks push the state
    to the boundary, where the closed forms are most delicate.
    """
    rho = np.zeros((9, 9), complex)
    weights = rng.dirichlet(np.full(len(blocks), 0.7))
    for w, block in zip(weights, blocks):
        n = len(block)
        g = random_density_matrix(rng, n, rank=int(rng.integers(1, n + 1)))
        idx = np.array(block) - 1
        rho[np.ix_(idx, idx)] = w * g
    return rho


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for n in sorted(RESULTS):
            terminalreporter.write_line(RESULTS[n])
