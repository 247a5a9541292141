"""Named two-qutrit states: product, Bell-like, Dicke, superposition and
the small-separation asymptotic states.

Every state has a canonical string label used by the CLI and CSV metadata::

    product:1:3          |1_A> (x) |3_B>
    bell:2               maximally entangled |Psi_2>
    dicke:anti:1:3       (|1_A 3_B> - |3_A 1_B>)/sqrt(2)
    dicke:sym:1:2        (|1_A 2_B> + |2_A 1_B>)/sqrt(2)
    superposition:0.7854 cos(phi)|1_A 1_B> + sin(phi)|1_A 3_B>
    asymptotic_psi2      limiting state reached from |Psi_2> as R -> 0
    asymptotic_a12       limiting state reached from |a_12> as R -> 0
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .algebra import DIM, basis_ket, check_density_matrix, index, projector

W = cmath.exp(2j * math.pi / 3)

# Bell-like basis: |Psi_{3m+s+1}> = (|1,1+s> + ph1 |2,2+s> + ph2 |3,3+s>)/sqrt(3),
# levels taken cyclically, with phase pair m = 0: (1, 1), 1: (w, w*), 2: (w*, w).
_BELL_PHASES = ((1.0, 1.0), (W, W.conjugate()), (W.conjugate(), W))


def _cyc(level: int) -> int:
    return (level - 1) % 3 + 1


def product_ket(j: int, k: int) -> np.ndarray:
    return basis_ket(j, k)


def bell_ket(alpha: int) -> np.ndarray:
    if alpha not in range(1, 10):
        raise ValueError(f"Bell index must be in 1..9, got {alpha!r}")
    m, s = divmod(alpha - 1, 3)
    ph1, ph2 = _BELL_PHASES[m]
    psi = (
        basis_ket(1, _cyc(1 + s))
        + ph1 * basis_ket(2, _cyc(2 + s))
        + ph2 * basis_ket(3, _cyc(3 + s))
    )
    return psi / math.sqrt(3)


def dicke_ket(parity: str, k: int, l: int) -> np.ndarray:
    if parity not in ("sym", "anti"):
        raise ValueError(f"parity must be 'sym' or 'anti', got {parity!r}")
    if not (k in (1, 2, 3) and l in (1, 2, 3) and k < l):
        raise ValueError(f"Dicke levels need 1 <= k < l <= 3, got k={k!r}, l={l!r}")
    sign = 1.0 if parity == "sym" else -1.0
    return (basis_ket(k, l) + sign * basis_ket(l, k)) / math.sqrt(2)


def superposition_ket(phi: float) -> np.ndarray:
    if not 0.0 <= phi <= math.pi / 2 + 1e-12:
        raise ValueError(f"superposition angle must lie in [0, pi/2], got {phi}")
    return math.cos(phi) * basis_ket(1, 1) + math.sin(phi) * basis_ket(1, 3)


def product_state(j: int, k: int) -> np.ndarray:
    """Projector onto |j_A> (x) |k_B>."""
    return projector(product_ket(j, k))


def bell_state(alpha: int) -> np.ndarray:
    """Projector onto the maximally entangled state |Psi_alpha>, alpha = 1..9."""
    return projector(bell_ket(alpha))


def dicke_state(parity: str, k: int, l: int) -> np.ndarray:
    """Projector onto the symmetric (``"sym"``) or antisymmetric (``"anti"``) Dicke state."""
    return projector(dicke_ket(parity, k, l))


def superposition_state(phi: float) -> np.ndarray:
    """Projector onto cos(phi)|1_A 1_B> + sin(phi)|1_A 3_B>, phi in [0, pi/2]."""
    return projector(superposition_ket(phi))


def _from_labelled_entries(entries) -> np.ndarray:
    rho = np.zeros((DIM, DIM), dtype=complex)
    for (m, n), v in entries.items():
        rho[m - 1, n - 1] = v
        rho[n - 1, m - 1] = np.conj(v)
    return rho


def asymptotic_psi2_state() -> np.ndarray:
    """Small-separation limit reached from |Psi_2> (entries 3, 6, 7, 8, 9 only)."""
    a, b = 1 / 8, 1 / 12
    return _from_labelled_entries(
        {
            (3, 3): a, (3, 6): -b, (3, 7): -a, (3, 8): b, (3, 9): b,
            (6, 6): a, (6, 7): b, (6, 8): -a, (6, 9): -b,
            (7, 7): a, (7, 8): -b, (7, 9): -b,
            (8, 8): a, (8, 9): b,
            (9, 9): 1 / 2,
        }
    )


def asymptotic_a12_state() -> np.ndarray:
    """Small-separation limit reached from |a_12>.

    Only rho_33 = rho_66 = rho_88 = 1/4 and rho_37 = rho_68 = -1/4 are given
    explicitly; unit trace puts the remaining 1/4 at rho_77, which makes the
    state the equal mixture of |a_13> and |a_23>.
    """
    q = 1 / 4
    return _from_labelled_entries(
        {(3, 3): q, (6, 6): q, (7, 7): q, (8, 8): q, (3, 7): -q, (6, 8): -q}
    )


@dataclass(frozen=True)
class StateLabel:
    """Parsed state tag; ``str()`` gives the canonical form."""

    kind: str
    args: tuple = ()

    def __str__(self) -> str:
        if self.kind == "superposition":
            return f"superposition:{self.args[0]:.12g}"
        return ":".join([self.kind, *map(str, self.args)])

    def density_matrix(self) -> np.ndarray:
        return check_density_matrix(_BUILDERS[self.kind](*self.args), where=str(self))


_BUILDERS = {
    "product": product_state,
    "bell": bell_state,
    "dicke": dicke_state,
    "superposition": superposition_state,
    "asymptotic_psi2": asymptotic_psi2_state,
    "asymptotic_a12": asymptotic_a12_state,
}


def _int(s: str) -> int:
    try:
        return int(s)
    except ValueError:
        raise ValueError(f"expected an integer, got {s!r}") from None


def parse_state_label(text: str) -> StateLabel:
    """Parse a canonical label such as ``"dicke:anti:1:3"`` (validates ranges)."""
    parts = text.strip().split(":")
    kind, rest = parts[0].lower(), parts[1:]
    if kind == "product" and len(rest) == 2:
        label = StateLabel(kind, (_int(rest[0]), _int(rest[1])))
    elif kind == "bell" and len(rest) == 1:
        label = StateLabel(kind, (_int(rest[0]),))
    elif kind == "dicke" and len(rest) == 3:
        label = StateLabel(kind, (rest[0].lower(), _int(rest[1]), _int(rest[2])))
    elif kind == "superposition" and len(rest) == 1:
        label = StateLabel(kind, (float(rest[0]),))
    elif kind in ("asymptotic_psi2", "asymptotic_a12") and not rest:
        label = StateLabel(kind)
    else:
        raise ValueError(f"unrecognized state label {text!r}")
    # building once validates the parameter ranges
    _BUILDERS[label.kind](*label.args)
    return label


def state_from_label(text: str) -> np.ndarray:
    return parse_state_label(text).density_matrix()


def dicke_basis() -> dict[str, np.ndarray]:
    """Kets of the six generalized Dicke states keyed as ``s12``, ``a12``, ..."""
    out = {}
    for parity, tag in (("sym", "s"), ("anti", "a")):
        for k, l in ((1, 2), (1, 3), (2, 3)):
            out[f"{tag}{k}{l}"] = dicke_ket(parity, k, l)
    return out


def _basis_self_test() -> None:
    # Guards the lexicographic map: |1_A 3_B> must sit at label 3, |3_A 1_B> at 7.
    assert index(1, 3) == 2 and index(3, 1) == 6 and index(3, 3) == 8
    a13 = dicke_state("anti", 1, 3)
    nz = {(m + 1, n + 1) for m, n in zip(*np.nonzero(np.abs(a13) > 0))}
    assert nz == {(3, 3), (3, 7), (7, 3), (7, 7)}, nz


_basis_self_test()
