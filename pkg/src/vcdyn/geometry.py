"""Two-atom geometry and the collective coupling coefficients.

Atom A sits at the origin, atom B at distance R in the direction given by the
polar angle ``theta`` (from z) and azimuth ``phi`` (from x).  The transition
dipoles are d13 = x d and d23 = y d, identical for both atoms.

All rates are expressed in units of the single-atom rate ``gamma``; the
default ``gamma = 1`` makes times dimensionless (gamma * t).
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from enum import Enum

import numpy as np

#: Smallest separation accepted by the public constructors.  The coherent
#: couplings grow like (R/lambda)^-3, so the R -> 0 limit is out of reach.
MIN_R_OVER_LAMBDA = 1e-4

#: Trig values closer than this to zero are snapped to exactly zero, so that
#: e.g. theta = pi gives vanishing cross couplings instead of ~1e-33.
_TRIG_SNAP = 1e-14
# below this xi the damping factors come from their power series (no cancellation)
_SERIES_XI = 1.0
# rounding allowance for typed-in polar angles, see normalize_angles
ANGLE_SLACK = 1e-3

CP_TOL = 1e-12


class Configuration(str, Enum):
    """The two named arrangements: I (atoms on the z axis), II (xy plane)."""

    I = "I"
    II = "II"


@dataclass(frozen=True)
class Geometry:
    """Separation in wavelengths, orientation angles and the decay rate."""

    r_over_lambda: float
    theta: float
    phi: float
    gamma: float = 1.0

    def __post_init__(self):
        for name in ("r_over_lambda", "theta", "phi", "gamma"):
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"{name} must be finite")
        if self.r_over_lambda < MIN_R_OVER_LAMBDA:
            raise ValueError(
                f"r_over_lambda must be >= {MIN_R_OVER_LAMBDA}, got {self.r_over_lambda}"
            )
        if not 0.0 <= self.theta <= math.pi:
            raise ValueError(f"theta must lie in [0, pi], got {self.theta}")
        if not 0.0 <= self.phi < 2 * math.pi:
            raise ValueError(f"phi must lie in [0, 2pi), got {self.phi}")
        if self.gamma <= 0:
            raise ValueError(f"gamma must be positive, got {self.gamma}")

    @property
    def xi(self) -> float:
        """Dimensionless separation R * omega0 / c = 2 pi R / lambda."""
        return 2 * math.pi * self.r_over_lambda


@dataclass(frozen=True)
class RadialFactors:
    xi: float
    p_i: float
    q_i: float
    p_r: float
    q_r: float


@dataclass(frozen=True)
class CouplingCoefficients:
    """Single-atom rate plus the six collective constants.

    ``gamma13_c``/``gamma23_c`` are collective damping rates on the 1->3 and
    2->3 transitions, ``omega13``/``omega23`` the dipole-dipole shifts, and
    ``gamma_vc``/``omega_vc`` the cross couplings between orthogonal dipoles.
    """

    gamma: float
    gamma13_c: float
    gamma23_c: float
    omega13: float
    omega23: float
    gamma_vc: float
    omega_vc: float

    def dissipation_matrix(self) -> np.ndarray:
        """Real symmetric 4x4 Kossakowski matrix over channels (A,1), (B,1), (A,2), (B,2)."""
        g, g13, g23, gvc = self.gamma, self.gamma13_c, self.gamma23_c, self.gamma_vc
        return np.array(
            [
                [g, g13, 0.0, gvc],
                [g13, g, gvc, 0.0],
                [0.0, gvc, g, g23],
                [gvc, 0.0, g23, g],
            ]
        )

    def min_dissipation_eigenvalue(self) -> float:
        return float(np.linalg.eigvalsh(self.dissipation_matrix())[0])

    def is_completely_positive(self, tol: float = CP_TOL) -> bool:
        return self.min_dissipation_eigenvalue() >= -tol * max(1.0, self.gamma)

    def without_collective(self) -> "CouplingCoefficients":
        """Same single-atom rate, all collective terms switched off."""
        return CouplingCoefficients(self.gamma, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0)

    def as_dict(self) -> dict[str, float]:
        return {
            "gamma": self.gamma,
            "gamma13_c": self.gamma13_c,
            "gamma23_c": self.gamma23_c,
            "omega13": self.omega13,
            "omega23": self.omega23,
            "gamma_vc": self.gamma_vc,
            "omega_vc": self.omega_vc,
        }


def _imaginary_series(xi: float, terms: int = 10) -> tuple[float, float]:
    """Taylor series of p_i and q_i about xi = 0, summed from the small end."""
    f = math.factorial
    p = q = 0.0
    for m in reversed(range(terms)):
        sign = -1.0 if m % 2 else 1.0
        a, b, c = 1 / f(2 * m + 1), 1 / f(2 * m + 2), 1 / f(2 * m + 3)
        x = xi ** (2 * m)
        p += sign * (a - b + c) * x
        q += sign * (a - 3 * b + 3 * c) * x
    return p, q


def radial_factors(xi: float) -> RadialFactors:
    """Evaluate the four radial interference functions at ``xi``.

    Parameters
    ----------
    xi : float
        Dimensionless separation ``2 pi R / lambda``; must be positive.

    Returns
    -------
    RadialFactors
        ``p_i, q_i`` (imaginary parts, entering the damping) and ``p_r, q_r``
        (real parts, entering the coherent shifts).
    """
    xi = float(xi)
    if not xi > 0 or not math.isfinite(xi):
        raise ValueError(f"radial factors are singular for xi <= 0, got {xi}")
    s, c = math.sin(xi), math.cos(xi)
    x2, x3 = xi * xi, xi * xi * xi
    if xi < _SERIES_XI:
        p_i, q_i = _imaginary_series(xi)
    else:
        p_i = s / xi + c / x2 - s / x3
        q_i = s / xi + 3 * c / x2 - 3 * s / x3
    p_r = c / xi - s / x2 - c / x3
    q_r = c / xi - 3 * s / x2 - 3 * c / x3
    return RadialFactors(xi=xi, p_i=p_i, q_i=q_i, p_r=p_r, q_r=q_r)


def _snap(v: float) -> float:
    return 0.0 if abs(v) < _TRIG_SNAP else v


def coupling_coefficients(g: Geometry) -> CouplingCoefficients:
    """Collective damping, dipole-dipole and cross-coupling rates for ``g``."""
    rf = radial_factors(g.xi)
    sin_t = _snap(math.sin(g.theta))
    sin_p, cos_p = _snap(math.sin(g.phi)), _snap(math.cos(g.phi))
    s2 = sin_t * sin_t
    pref = 1.5 * g.gamma
    ang13 = s2 * cos_p * cos_p
    ang23 = s2 * sin_p * sin_p
    ang_vc = s2 * sin_p * cos_p

    coeffs = CouplingCoefficients(
        gamma=g.gamma,
        gamma13_c=pref * (rf.p_i - ang13 * rf.q_i),
        gamma23_c=pref * (rf.p_i - ang23 * rf.q_i),
        omega13=pref * (rf.p_r - ang13 * rf.q_r),
        omega23=pref * (rf.p_r - ang23 * rf.q_r),
        gamma_vc=-pref * ang_vc * rf.q_i,
        omega_vc=-pref * ang_vc * rf.q_r,
    )
    if not coeffs.is_completely_positive():
        # Should never fire for physical geometries; a coefficient bug would.
        warnings.warn(
            "dissipation matrix is not positive semidefinite "
            f"(min eigenvalue {coeffs.min_dissipation_eigenvalue():.3e}) for {g}",
            RuntimeWarning,
            stacklevel=2,
        )
    return coeffs


def normalize_angles(theta: float, phi: float, slack: float = ANGLE_SLACK) -> tuple[float, float]:
    """Bring user-typed angles into the Geometry domain.

    ``theta`` within ``slack`` outside [0, pi] is clamped (so a rounded 3.1416
    means pi); ``phi`` is wrapped into [0, 2 pi).  Anything further out is
    left alone for :class:`Geometry` to reject.
    """
    theta, phi = float(theta), float(phi)
    if -slack <= theta < 0.0:
        theta = 0.0
    elif math.pi < theta <= math.pi + slack:
        theta = math.pi
    if math.isfinite(phi):
        phi = phi % (2 * math.pi)
    return theta, phi


def configuration_preset(which, r_over_lambda: float, gamma: float = 1.0) -> Geometry:
    """Geometry of Configuration I (theta = pi) or II (theta = pi/2), both with phi = pi/4."""
    which = Configuration(which)
    theta = math.pi if which is Configuration.I else math.pi / 2
    return Geometry(r_over_lambda=r_over_lambda, theta=theta, phi=math.pi / 4, gamma=gamma)
