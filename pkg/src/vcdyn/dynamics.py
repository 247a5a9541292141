"""Master-equation generator for two V-type atoms and its integration.

Rate convention: every dissipator carries its rate in front of the full
bracket ``2 L rho L^+ - L^+ L rho - rho L^+ L``, so an isolated excited atom
decays as exp(-2 gamma t), not exp(-gamma t).
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from .algebra import (
    DIM,
    Atom,
    DensityMatrixError,
    check_density_matrix,
    density_matrix_violations,
    devectorize,
    left,
    right,
    sandwich,
    transition_operator,
    vectorize,
)
from .geometry import CouplingCoefficients

SUPER_DIM = DIM * DIM
KERNEL_TOL = 1e-6

# vec(rho^T) == vec(rho)[_TRANSPOSE]
_TRANSPOSE = vectorize(devectorize(np.arange(SUPER_DIM)).T)
_VEC_ID = vectorize(np.eye(DIM))


class IntegrationError(ArithmeticError):
    """A propagated state broke a density-matrix invariant."""

    def __init__(self, step, time, violations):
        self.step = step
        self.time = time
        self.violations = list(violations)
        super().__init__(
            f"invariant violated at step {step} (t = {time:.6g}): " + "; ".join(self.violations)
        )


class ConvergenceError(ArithmeticError):
    """Long-time integration did not settle within the allowed time."""

    def __init__(self, residual, t_max):
        self.residual = residual
        self.t_max = t_max
        super().__init__(f"no stationary state by t = {t_max:g}; last residual {residual:.3e}")


def _sigma(j, k, atom):
    return transition_operator(j, k, atom)


def _dissipator(jump: np.ndarray, partner: np.ndarray) -> np.ndarray:
    """Superoperator of rho -> 2 J rho P^+ - P^+ J rho - rho P^+ J."""
    pd = partner.conj().T
    pdj = pd @ jump
    return 2 * sandwich(jump, pd) - left(pdj) - right(pdj)


def _commutator(h: np.ndarray) -> np.ndarray:
    """Superoperator of rho -> [h, rho]."""
    return left(h) - right(h)


def build_single_atom_generator(atom, gamma: float) -> np.ndarray:
    """Independent spontaneous decay of one atom on both transitions at rate ``gamma``."""
    atom = Atom(atom)
    gen = np.zeros((SUPER_DIM, SUPER_DIM), dtype=complex)
    for k in (1, 2):
        lower = _sigma(3, k, atom)
        gen += gamma * _dissipator(lower, lower)
    return gen


def exchange_hamiltonian(c: CouplingCoefficients) -> np.ndarray:
    """Hermitian operator whose commutator (times +i) gives the coherent couplings."""
    h = np.zeros((DIM, DIM), dtype=complex)
    for k, om in ((1, c.omega13), (2, c.omega23)):
        h += om * (_sigma(k, 3, "A") @ _sigma(3, k, "B") + _sigma(k, 3, "B") @ _sigma(3, k, "A"))
    for a in Atom:
        b = a.other
        h += c.omega_vc * (_sigma(2, 3, a) @ _sigma(3, 1, b) + _sigma(3, 2, a) @ _sigma(1, 3, b))
    return h


def build_cross_generator(c: CouplingCoefficients) -> np.ndarray:
    """Collective damping, dipole-dipole and cross-coupling part of the generator."""
    gen = np.zeros((SUPER_DIM, SUPER_DIM), dtype=complex)
    for a in Atom:
        b = a.other
        for k, g in ((1, c.gamma13_c), (2, c.gamma23_c)):
            # 2 s3k^a rho sk3^b - sk3^b s3k^a rho - rho sk3^b s3k^a
            gen += g * _dissipator(_sigma(3, k, a), _sigma(3, k, b))
        gen += c.gamma_vc * (
            _dissipator(_sigma(3, 1, a), _sigma(3, 2, b))
            + _dissipator(_sigma(3, 2, a), _sigma(3, 1, b))
        )
    gen += 1j * _commutator(exchange_hamiltonian(c))
    return gen


@dataclass(frozen=True)
class Liouvillian:
    superoperator: np.ndarray = field(repr=False)
    coefficients: CouplingCoefficients

    def __call__(self, rho: np.ndarray) -> np.ndarray:
        return devectorize(self.superoperator @ vectorize(rho))

    def propagator(self, dt: float) -> np.ndarray:
        """exp(L dt) on vectorized matrices (scaling and squaring Pade).

        The rounding error of expm grows with ||L dt||, which reaches 1e5 for
        closely spaced atoms.  The part of it that breaks hermiticity or trace
        preservation, both exact properties of the true map, is projected out.
        """
        return _project_roundoff(scipy.linalg.expm(self.superoperator * dt))

    def eigenvalues(self) -> np.ndarray:
        return scipy.linalg.eigvals(self.superoperator)


def _project_roundoff(p: np.ndarray) -> np.ndarray:
    # Hermiticity preserving: P == K conj(P) K with K the transpose permutation.
    p = 0.5 * (p + p.conj()[np.ix_(_TRANSPOSE, _TRANSPOSE)])
    # Trace preserving: vec(I)^T P == vec(I)^T; the rank-one fix keeps the line above.
    return p + np.outer(_VEC_ID, _VEC_ID - _VEC_ID @ p) / DIM


def build_liouvillian(c: CouplingCoefficients) -> Liouvillian:
    """Full generator: decay of A, decay of B, and the collective part."""
    s = (
        build_single_atom_generator(Atom.A, c.gamma)
        + build_single_atom_generator(Atom.B, c.gamma)
        + build_cross_generator(c)
    )
    return Liouvillian(s, c)


@dataclass
class Trajectory:
    times: np.ndarray
    states: np.ndarray
    meta: dict = field(default_factory=dict)

    def __len__(self):
        return len(self.times)

    @property
    def dt(self) -> float:
        return float(self.times[1] - self.times[0]) if len(self.times) > 1 else 0.0


def time_grid(t_max: float, dt: float) -> np.ndarray:
    """Uniform grid 0, dt, ..., n*dt with n = round(t_max/dt)."""
    if not dt > 0 or not t_max > 0:
        raise ValueError(f"t_max and dt must be positive, got t_max={t_max}, dt={dt}")
    n = int(round(t_max / dt))
    if n < 1:
        raise ValueError(f"dt = {dt} exceeds t_max = {t_max}")
    return dt * np.arange(n + 1)


def evolve(
    L: Liouvillian,
    rho0: np.ndarray,
    t_max: float = 10.0,
    dt: float = 0.01,
    check: bool = True,
    meta: dict | None = None,
) -> Trajectory:
    """Propagate ``rho0`` on the grid 0, dt, ..., t_max with the exact one-step map.

    Each step is one matrix-vector product with exp(L dt).  With ``check`` set,
    every state is validated and the first violation raises
    :class:`IntegrationError`; nothing is clipped or renormalized.
    """
    rho0 = check_density_matrix(rho0, where="initial state")
    times = time_grid(t_max, dt)
    prop = L.propagator(dt)
    states = np.empty((len(times), DIM, DIM), dtype=complex)
    states[0] = rho0
    v = vectorize(rho0).copy()
    for n in range(1, len(times)):
        v = prop @ v
        rho = devectorize(v)
        if check:
            bad = density_matrix_violations(rho)
            if bad:
                raise IntegrationError(n, times[n], bad)
        states[n] = rho
    info = {"coefficients": L.coefficients}
    if meta:
        info.update(meta)
    return Trajectory(times, states, info)


def kernel_dimension(L: Liouvillian, tol: float = KERNEL_TOL) -> int:
    """Number of generator eigenvalues with modulus below ``tol * gamma``."""
    lam = L.eigenvalues()
    return int(np.sum(np.abs(lam) <= tol * L.coefficients.gamma))


def slow_projector(L: Liouvillian, tol: float = KERNEL_TOL) -> np.ndarray:
    """Spectral projector onto the eigenvalues with Re(lambda) >= -tol * gamma.

    These are the modes that survive at long times (stationary ones and, for
    closely spaced atoms, undamped oscillations at the dipole-dipole
    frequencies).  Built from an ordered Schur form and one Sylvester solve,
    so degenerate or defective eigenvalues are handled.
    """
    cutoff = tol * L.coefficients.gamma
    t, z, sdim = scipy.linalg.schur(
        L.superoperator, output="complex", sort=lambda x: x.real >= -cutoff
    )
    if sdim == 0:
        raise ConvergenceError(float("nan"), float("inf"))
    t11, t12, t22 = t[:sdim, :sdim], t[:sdim, sdim:], t[sdim:, sdim:]
    y = scipy.linalg.solve_sylvester(t11, -t22, -t12)
    p = np.zeros_like(t)
    p[:sdim, :sdim] = np.eye(sdim)
    p[:sdim, sdim:] = -y
    return z @ p @ z.conj().T


def asymptotic_state(
    L: Liouvillian,
    rho0: np.ndarray,
    method: str = "spectral",
    kernel_tol: float = KERNEL_TOL,
    step: float = 1.0,
    settle_tol: float = 1e-10,
    max_time: float = 1e4,
) -> np.ndarray:
    """Long-time limit of the evolution started at ``rho0``.

    Parameters
    ----------
    method : {"spectral", "integrate"}
        ``"spectral"`` projects ``rho0`` onto the invariant subspace of
        eigenvalues with real part at least ``-kernel_tol * gamma``, along the
        complementary one.  The evolution then approaches exp(L t) of the
        returned state; when the kernel is the whole non-decaying spectrum
        this is the stationary limit.  Raising ``kernel_tol`` above the decay
        rates of nearly dark states gives the quasi-stationary state of
        closely spaced atoms.  ``"integrate"`` applies exp(L * step) until
        successive states differ by less than ``settle_tol`` (max abs entry).
    """
    rho0 = check_density_matrix(rho0, where="initial state")
    if method == "spectral":
        rho = devectorize(slow_projector(L, kernel_tol) @ vectorize(rho0))
        return 0.5 * (rho + rho.conj().T)
    if method != "integrate":
        raise ValueError(f"unknown method {method!r}")
    prop = L.propagator(step)
    v = vectorize(rho0).copy()
    t, residual = 0.0, np.inf
    while t < max_time:
        nxt = prop @ v
        t += step
        residual = float(np.max(np.abs(nxt - v)))
        v = nxt
        if residual < settle_tol:
            rho = devectorize(v)
            return 0.5 * (rho + rho.conj().T)
    raise ConvergenceError(residual, max_time)


__all__ = [
    "ConvergenceError",
    "DensityMatrixError",
    "IntegrationError",
    "Liouvillian",
    "Trajectory",
    "asymptotic_state",
    "build_cross_generator",
    "build_liouvillian",
    "build_single_atom_generator",
    "evolve",
    "exchange_hamiltonian",
    "kernel_dimension",
    "slow_projector",
    "time_grid",
]
