"""Negativity and the other observables tracked along trajectories.

Closed-form negativities apply to states with a fixed sparsity pattern; each
checks its pattern first and raises :class:`PatternError` otherwise.  Entries
are named with the 1-based basis labels of :mod:`vcdyn.algebra`.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .algebra import DIM, hermitian_eigenvalues, partial_transpose
from .states import dicke_basis

PATTERN_TOL = 1e-12
BIRTH_THRESHOLD = 1e-7
BIRTH_HOLD = 10


class PatternError(ValueError):
    """State lacks the zero pattern a closed-form formula requires."""


def _block(labels):
    return {(m, n) for m in labels for n in labels}


#: Allowed nonzero entries (1-based labels) of each structured family.
PATTERN_13 = frozenset(_block((3, 6, 7, 8)) | {(9, 9)})
PATTERN_12 = frozenset(
    {(2, 2), (3, 3), (6, 6), (7, 7), (8, 8), (9, 9), (3, 7), (7, 3), (6, 8), (8, 6)}
)
PATTERN_11 = frozenset({(1, 1), (3, 3), (7, 7), (9, 9), (3, 7), (7, 3)})
PATTERN_13T = frozenset({(3, 3), (7, 7), (9, 9), (3, 7), (7, 3)})


def _mask(pattern) -> np.ndarray:
    m = np.zeros((DIM, DIM), dtype=bool)
    for a, b in pattern:
        m[a - 1, b - 1] = True
    return m


_MASKS = {p: _mask(p) for p in (PATTERN_13, PATTERN_12, PATTERN_11, PATTERN_13T)}


def pattern_violation(rho, pattern, tol: float = PATTERN_TOL):
    """Largest entry outside ``pattern`` as ``((m, n), |value|)``, or None if within tol."""
    rho = np.asarray(rho)
    outside = np.where(_MASKS[pattern], 0.0, np.abs(rho))
    i, j = np.unravel_index(np.argmax(outside), outside.shape)
    if outside[i, j] > tol:
        return (i + 1, j + 1), float(outside[i, j])
    return None


def matches_pattern(rho, pattern, tol: float = PATTERN_TOL) -> bool:
    return pattern_violation(rho, pattern, tol) is None


def _require(rho, pattern, name, tol):
    bad = pattern_violation(rho, pattern, tol)
    if bad is not None:
        (m, n), v = bad
        raise PatternError(f"{name}: entry rho_{m}{n} = {v:.3e} lies outside the required pattern")


def _e(rho, m, n):
    return rho[m - 1, n - 1]


def negativity(rho) -> float:
    """Sum of |negative eigenvalues| of the partial transpose over atom B."""
    lam = hermitian_eigenvalues(partial_transpose(np.asarray(rho), "B"))
    return float(-np.sum(lam[lam < 0])) + 0.0


def negativity_trace_norm(rho) -> float:
    """(||rho^PT||_1 - 1) / 2, equal to :func:`negativity` for unit-trace states."""
    lam = hermitian_eigenvalues(partial_transpose(np.asarray(rho), "B"))
    return float((np.sum(np.abs(lam)) - 1) / 2)


def _root_form(coh_sq: float, r99: float) -> float:
    return 0.5 * (math.sqrt(4 * coh_sq + r99 * r99) - r99)


def negativity_form13(rho, tol: float = PATTERN_TOL) -> float:
    """Closed form for states supported on labels {3, 6, 7, 8} plus rho_99."""
    rho = np.asarray(rho)
    _require(rho, PATTERN_13, "negativity_form13", tol)
    coh = sum(abs(_e(rho, m, n)) ** 2 for m, n in ((3, 7), (3, 8), (6, 7), (6, 8)))
    return _root_form(coh, _e(rho, 9, 9).real)


def negativity_form12(rho, tol: float = PATTERN_TOL) -> float:
    """Closed form for states whose only coherences are rho_37 and rho_68."""
    rho = np.asarray(rho)
    _require(rho, PATTERN_12, "negativity_form12", tol)
    coh = abs(_e(rho, 3, 7)) ** 2 + abs(_e(rho, 6, 8)) ** 2
    return _root_form(coh, _e(rho, 9, 9).real)


def negativity_form11_raw(rho, tol: float = PATTERN_TOL) -> float:
    """Signed quantity whose positive part is the negativity of the rho_11 family."""
    rho = np.asarray(rho)
    _require(rho, PATTERN_11, "negativity_form11", tol)
    r11, r99 = _e(rho, 1, 1).real, _e(rho, 9, 9).real
    c = abs(_e(rho, 3, 7))
    return 0.5 * (math.sqrt((r11 - r99) ** 2 + 4 * c * c) - r11 - r99)


def negativity_form11(rho, tol: float = PATTERN_TOL) -> float:
    """Closed form for states with entries 11, 33, 77, 99 and the coherence rho_37.

    Zero below a coherence threshold: |rho_37|^2 must exceed rho_11 * rho_99.
    """
    return max(0.0, negativity_form11_raw(rho, tol))


def negativity_form13t(rho, tol: float = PATTERN_TOL) -> float:
    """Closed form when rho_37 is the only coherence (entries 33, 37, 77, 99)."""
    rho = np.asarray(rho)
    _require(rho, PATTERN_13T, "negativity_form13t", tol)
    return _root_form(abs(_e(rho, 3, 7)) ** 2, _e(rho, 9, 9).real)


_DICKE = dicke_basis()


def dicke_populations(rho) -> dict[str, float]:
    """<s_kl|rho|s_kl> and <a_kl|rho|a_kl> keyed ``pop_s12`` ... ``pop_a23``."""
    rho = np.asarray(rho)
    return {
        f"pop_{name}": float(np.real(ket.conj() @ rho @ ket)) for name, ket in _DICKE.items()
    }


def coherence_magnitudes(rho) -> dict[str, float]:
    rho = np.asarray(rho)
    return {
        f"rho{m}{n}_abs": float(abs(_e(rho, m, n))) for m, n in ((3, 7), (3, 8), (6, 7), (6, 8))
    }


# number of excited atoms in each basis state |j_A k_B>
_EXCITATIONS = np.array([(j != 3) + (k != 3) for j in (1, 2, 3) for k in (1, 2, 3)], float)


def excited_population(rho) -> float:
    """Expected number of excited atoms, sum over j = 1, 2 and both atoms of <sigma_jj>."""
    return float(np.real(np.diagonal(np.asarray(rho))) @ _EXCITATIONS)


def _pop(name):
    return lambda rho: dicke_populations(rho)[name]


def _coh(m, n):
    return lambda rho: float(abs(np.asarray(rho)[m - 1, n - 1]))


OBSERVABLES: dict[str, Callable[[np.ndarray], float]] = {
    "negativity": negativity,
    "rho37_abs": _coh(3, 7),
    "rho38_abs": _coh(3, 8),
    "rho67_abs": _coh(6, 7),
    "rho68_abs": _coh(6, 8),
    **{f"pop_{n}": _pop(f"pop_{n}") for n in ("s12", "s13", "s23", "a12", "a13", "a23")},
    "pop_excited_total": excited_population,
}

OBSERVABLE_NAMES = tuple(OBSERVABLES)


@dataclass
class ObservableSeries:
    name: str
    times: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        self.times = np.asarray(self.times, dtype=float)
        self.values = np.asarray(self.values, dtype=float)
        if self.times.shape != self.values.shape:
            raise ValueError("times and values must have the same length")

    @property
    def peak(self) -> float:
        return float(np.max(self.values))


def observable_series(trajectory, name: str) -> ObservableSeries:
    try:
        fn = OBSERVABLES[name]
    except KeyError:
        raise ValueError(f"unknown observable {name!r}; choose from {OBSERVABLE_NAMES}") from None
    values = np.array([fn(rho) for rho in trajectory.states])
    return ObservableSeries(name, trajectory.times, values)


def negativity_series(trajectory) -> ObservableSeries:
    return observable_series(trajectory, "negativity")


def _check_uniform(times) -> None:
    if len(times) < 2:
        return
    steps = np.diff(times)
    if np.max(np.abs(steps - steps[0])) > 1e-9 * max(1.0, abs(steps[0])):
        raise ValueError("birth_time needs a uniform time grid")


def birth_time(
    series: ObservableSeries, threshold: float = BIRTH_THRESHOLD, hold: int = BIRTH_HOLD
) -> Optional[float]:
    """Onset of the first run of ``hold`` consecutive points above ``threshold``.

    The onset lies between the last sub-threshold grid point and the first
    point of the run; the earlier of the two is returned, so a series that
    rises straight from its initial value gives ``times[0]``.  Returns None
    when no such run exists.
    """
    _check_uniform(series.times)
    if hold < 1:
        raise ValueError("hold must be at least 1")
    above = series.values > threshold
    run = 0
    for i in range(len(above) - 1, -1, -1):
        run = run + 1 if above[i] else 0
        above[i] = run >= hold
    hits = np.flatnonzero(above)
    if not hits.size:
        return None
    return float(series.times[max(hits[0] - 1, 0)])


def fall_time(series: ObservableSeries, level: float = 0.05) -> Optional[float]:
    """First grid time at which the series drops below ``level``; None if it never does."""
    hits = np.flatnonzero(series.values < level)
    return float(series.times[hits[0]]) if hits.size else None
