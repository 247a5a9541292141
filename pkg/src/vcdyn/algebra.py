"""Fixed operator algebra on the two-qutrit space C^3 (x) C^3.

Basis ordering is lexicographic: |j_A> (x) |k_B> with j, k in {1, 2, 3} sits at
0-based position ``3*(j-1) + (k-1)``.  Matrix elements are quoted with 1-based
labels throughout the package (rho_37 is ``rho[2, 6]``):

    label  (j,k)   0-based        label  (j,k)   0-based
      1    (1,1)     0              6    (2,3)     5
      2    (1,2)     1              7    (3,1)     6
      3    (1,3)     2              8    (3,2)     7
      4    (2,1)     3              9    (3,3)     8
      5    (2,2)     4

Superoperators act on column-major vectorized 9x9 matrices, so that
``vectorize(A @ rho @ B) == kron(B.T, A) @ vectorize(rho)``.
"""
from __future__ import annotations

from enum import Enum

import numpy as np

DIM_ATOM = 3
DIM = DIM_ATOM * DIM_ATOM

HERMITIAN_TOL = 1e-10
TRACE_TOL = 1e-8
POSITIVITY_TOL = 1e-8
EIG_HERMITIAN_TOL = 1e-8

_I3 = np.eye(DIM_ATOM, dtype=complex)


class Atom(str, Enum):
    A = "A"
    B = "B"

    @property
    def other(self) -> "Atom":
        return Atom.B if self is Atom.A else Atom.A


class DensityMatrixError(ValueError):
    """A matrix failed one or more density-matrix invariants."""

    def __init__(self, violations, where=None):
        self.violations = list(violations)
        self.where = where
        prefix = f"{where}: " if where else ""
        super().__init__(prefix + "; ".join(self.violations))


def index(j: int, k: int) -> int:
    """0-based position of |j_A k_B> for 1-based levels j, k."""
    _check_level(j)
    _check_level(k)
    return DIM_ATOM * (j - 1) + (k - 1)


def label_to_index(label: int) -> int:
    """Map a 1-based basis label (1..9) to its 0-based array index."""
    if not 1 <= label <= DIM:
        raise ValueError(f"basis label must be in 1..9, got {label}")
    return label - 1


def element(rho: np.ndarray, m: int, n: int) -> complex:
    """Matrix element rho_mn using the 1-based labels of the basis table."""
    return rho[label_to_index(m), label_to_index(n)]


def _check_level(j) -> None:
    if j not in (1, 2, 3):
        raise ValueError(f"atomic level must be 1, 2 or 3, got {j!r}")


def atom_operator(j: int, k: int) -> np.ndarray:
    """Single-atom transition operator sigma_jk = |j><k| (3x3)."""
    _check_level(j)
    _check_level(k)
    op = np.zeros((DIM_ATOM, DIM_ATOM), dtype=complex)
    op[j - 1, k - 1] = 1.0
    return op


def embed(op: np.ndarray, atom) -> np.ndarray:
    """Lift a 3x3 single-atom operator to the 9x9 two-atom space."""
    atom = Atom(atom)
    return np.kron(op, _I3) if atom is Atom.A else np.kron(_I3, op)


def transition_operator(j: int, k: int, atom) -> np.ndarray:
    """sigma_jk on atom A (sigma_jk (x) I) or atom B (I (x) sigma_jk)."""
    return embed(atom_operator(j, k), atom)


def basis_ket(j: int, k: int) -> np.ndarray:
    v = np.zeros(DIM, dtype=complex)
    v[index(j, k)] = 1.0
    return v


def projector(psi: np.ndarray) -> np.ndarray:
    psi = np.asarray(psi, dtype=complex)
    return np.outer(psi, psi.conj())


def vectorize(m: np.ndarray) -> np.ndarray:
    """Column-major (Fortran order) flattening of a 9x9 matrix."""
    return np.asarray(m).reshape(-1, order="F")


def devectorize(v: np.ndarray) -> np.ndarray:
    """Inverse of :func:`vectorize`."""
    return np.asarray(v).reshape(DIM, DIM, order="F")


def left(a: np.ndarray) -> np.ndarray:
    """Superoperator of rho -> a @ rho."""
    return np.kron(np.eye(DIM), a)


def right(b: np.ndarray) -> np.ndarray:
    """Superoperator of rho -> rho @ b."""
    return np.kron(b.T, np.eye(DIM))


def sandwich(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Superoperator of rho -> a @ rho @ b."""
    return np.kron(b.T, a)


def apply_superoperator(s: np.ndarray, rho: np.ndarray) -> np.ndarray:
    return devectorize(s @ vectorize(rho))


def partial_transpose(rho: np.ndarray, subsystem="B") -> np.ndarray:
    """Transpose the indices of one tensor factor of a 9x9 matrix."""
    subsystem = Atom(subsystem)
    t = np.asarray(rho).reshape(DIM_ATOM, DIM_ATOM, DIM_ATOM, DIM_ATOM)
    if subsystem is Atom.B:
        t = t.transpose(0, 3, 2, 1)
    else:
        t = t.transpose(2, 1, 0, 3)
    return t.reshape(DIM, DIM)


def partial_trace(rho: np.ndarray, keep="A") -> np.ndarray:
    """Reduced 3x3 state of the atom named by ``keep``."""
    t = np.asarray(rho).reshape(DIM_ATOM, DIM_ATOM, DIM_ATOM, DIM_ATOM)
    if Atom(keep) is Atom.A:
        return np.einsum("ijkj->ik", t)
    return np.einsum("ijil->jl", t)


def swap_operator() -> np.ndarray:
    """Unitary exchanging the two atoms, |j_A k_B> -> |k_A j_B>."""
    s = np.zeros((DIM, DIM), dtype=complex)
    for j in (1, 2, 3):
        for k in (1, 2, 3):
            s[index(k, j), index(j, k)] = 1.0
    return s


def hermiticity_residual(m: np.ndarray) -> float:
    return float(np.max(np.abs(m - m.conj().T)))


def hermitian_eigh(m: np.ndarray, tol: float = EIG_HERMITIAN_TOL):
    """Ascending eigenvalues and orthonormal eigenvectors of a Hermitian matrix.

    The input is symmetrized before the LAPACK call; anything further than
    ``tol`` from Hermitian is rejected.
    """
    m = np.asarray(m, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {m.shape}")
    res = hermiticity_residual(m)
    if res > tol:
        raise ValueError(f"matrix is not Hermitian (residual {res:.3e} > {tol:g})")
    return np.linalg.eigh(0.5 * (m + m.conj().T))


def hermitian_eigenvalues(m: np.ndarray, tol: float = EIG_HERMITIAN_TOL) -> np.ndarray:
    """Real eigenvalues of a Hermitian matrix in ascending order."""
    m = np.asarray(m, dtype=complex)
    res = hermiticity_residual(m)
    if res > tol:
        raise ValueError(f"matrix is not Hermitian (residual {res:.3e} > {tol:g})")
    return np.linalg.eigvalsh(0.5 * (m + m.conj().T))


def density_matrix_violations(
    rho: np.ndarray,
    hermitian_tol: float = HERMITIAN_TOL,
    trace_tol: float = TRACE_TOL,
    positivity_tol: float = POSITIVITY_TOL,
) -> list[str]:
    """List every density-matrix invariant ``rho`` breaks (empty if valid)."""
    rho = np.asarray(rho)
    if rho.shape != (DIM, DIM):
        return [f"shape {rho.shape} != (9, 9)"]
    if not np.all(np.isfinite(rho)):
        return ["non-finite entries"]
    out = []
    res = hermiticity_residual(rho)
    if res > hermitian_tol:
        out.append(f"hermiticity residual {res:.3e} > {hermitian_tol:g}")
    tr = np.trace(rho)
    if abs(tr - 1) > trace_tol:
        out.append(f"trace {tr.real:.12g}{tr.imag:+.3g}j differs from 1 by {abs(tr - 1):.3e}")
    if res <= EIG_HERMITIAN_TOL:
        lam = np.linalg.eigvalsh(0.5 * (rho + rho.conj().T))[0]
        if lam < -positivity_tol:
            out.append(f"minimum eigenvalue {lam:.3e} < -{positivity_tol:g}")
    return out


def check_density_matrix(rho, where=None, **tols) -> np.ndarray:
    """Validate and return ``rho`` as a complex 9x9 array."""
    rho = np.asarray(rho, dtype=complex)
    bad = density_matrix_violations(rho, **tols)
    if bad:
        raise DensityMatrixError(bad, where)
    return rho


def trace_distance(rho: np.ndarray, sigma: np.ndarray) -> float:
    """Half the trace norm of the difference of two Hermitian matrices."""
    d = np.asarray(rho) - np.asarray(sigma)
    return 0.5 * float(np.sum(np.abs(np.linalg.eigvalsh(0.5 * (d + d.conj().T)))))
