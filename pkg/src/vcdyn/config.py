"""Scenario configuration: flat ``key = value`` files, CLI overrides and the
plain-text 9x9 state matrix format.
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Optional

import numpy as np

from .algebra import DIM, DensityMatrixError, density_matrix_violations
from .entanglement import OBSERVABLE_NAMES
from .geometry import Configuration, Geometry, configuration_preset, normalize_angles
from .states import parse_state_label

DEFAULT_T_MAX = 10.0
DEFAULT_DT = 0.01

SWEEP_PARAMS = ("superposition_angle",)

#: Keys understood in config files; CLI flags mirror them (``--r-over-lambda``).
CONFIG_KEYS = (
    "preset",
    "label",
    "r_over_lambda",
    "theta",
    "phi",
    "gamma",
    "initial_state",
    "t_max",
    "dt",
    "observables",
    "sweep_param",
    "sweep_values",
    "output",
)

#: First line of every trajectory CSV; marks a file whose metadata can be replayed.
CSV_MARKER = "# vcdyn trajectory"


class ConfigError(ValueError):
    """Bad configuration key, value or combination."""


@dataclass(frozen=True)
class ScenarioConfig:
    """One fully resolved simulation (or one sweep of simulations)."""

    geometry: Geometry
    initial_state: str = "product:1:3"
    t_max: float = DEFAULT_T_MAX
    dt: float = DEFAULT_DT
    observables: tuple = ("negativity",)
    configuration: Optional[str] = None
    label: str = "run"
    sweep_param: Optional[str] = None
    sweep_values: tuple = ()
    output: Optional[str] = None
    state_matrix: Optional[np.ndarray] = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        if not self.observables:
            raise ConfigError("observables must not be empty")
        unknown = [o for o in self.observables if o not in OBSERVABLE_NAMES]
        if unknown:
            raise ConfigError(f"unknown observables {unknown}; choose from {list(OBSERVABLE_NAMES)}")
        if not (self.t_max > 0 and self.dt > 0 and self.dt <= self.t_max):
            raise ConfigError(f"need 0 < dt <= t_max, got dt={self.dt}, t_max={self.t_max}")
        if self.sweep_param is not None:
            if self.sweep_param not in SWEEP_PARAMS:
                raise ConfigError(f"sweep_param must be one of {SWEEP_PARAMS}")
            if not self.sweep_values:
                raise ConfigError("sweep_values must not be empty")
            for v in self.sweep_values:
                if not 0.0 <= v <= math.pi / 2 + 1e-12:
                    raise ConfigError(f"superposition angle {v} outside [0, pi/2]")

    def for_sweep_value(self, value: float, index: int) -> "ScenarioConfig":
        return replace(
            self,
            initial_state=f"superposition:{value!r}",
            label=f"{self.label}_{index:03d}",
            sweep_param=None,
            sweep_values=(),
            state_matrix=None,
        )

    def metadata(self) -> dict[str, str]:
        """Config keys of this run, formatted so that reloading reproduces it exactly."""
        g = self.geometry
        meta = {"label": self.label}
        if self.configuration:
            meta["preset"] = self.configuration
        meta.update(
            r_over_lambda=repr(g.r_over_lambda),
            theta=repr(g.theta),
            phi=repr(g.phi),
            gamma=repr(g.gamma),
            initial_state=self.initial_state,
            t_max=repr(self.t_max),
            dt=repr(self.dt),
            observables=",".join(self.observables),
        )
        return meta


def _parse_lines(lines, metadata_only: bool) -> dict[str, str]:
    out = {}
    for n, raw in enumerate(lines, 1):
        line = raw.strip()
        if metadata_only:
            if not line.startswith("#"):
                continue
            line = line[1:].strip()
        else:
            line = line.split("#", 1)[0].strip()
        if not line or "=" not in line:
            if line and not metadata_only:
                raise ConfigError(f"line {n}: expected 'key = value', got {raw.rstrip()!r}")
            continue
        key, value = (s.strip() for s in line.split("=", 1))
        if key in CONFIG_KEYS:
            out[key] = value
        elif not metadata_only:
            raise ConfigError(f"line {n}: unknown key {key!r}")
    return out


def read_config_file(path) -> dict[str, str]:
    """Raw key/value pairs from a config file or from a trajectory CSV's metadata."""
    text = Path(path).read_text(encoding="utf-8")
    lines = text.splitlines()
    replay = bool(lines) and lines[0].strip() == CSV_MARKER
    return _parse_lines(lines, metadata_only=replay)


def _float(key, value) -> float:
    try:
        v = float(value)
    except (TypeError, ValueError):
        raise ConfigError(f"{key}: expected a number, got {value!r}") from None
    if not math.isfinite(v):
        raise ConfigError(f"{key}: expected a finite number, got {value!r}")
    return v


def _float_list(key, value) -> tuple:
    if isinstance(value, (list, tuple)):
        return tuple(_float(key, v) for v in value)
    text = str(value).strip()
    m = re.fullmatch(r"linspace\(\s*([^,]+),([^,]+),([^,]+)\)", text)
    if m:
        lo, hi = _float(key, m[1]), _float(key, m[2])
        n = int(_float(key, m[3]))
        return tuple(float(v) for v in np.linspace(lo, hi, n))
    return tuple(_float(key, v) for v in text.split(",") if v.strip())


def resolve_config(raw: dict) -> ScenarioConfig:
    """Turn raw key/value strings into a validated :class:`ScenarioConfig`.

    Geometry comes from ``preset`` (I or II) plus ``r_over_lambda``, with any
    explicit ``theta``/``phi`` overriding the preset angles, or entirely from
    ``r_over_lambda``, ``theta`` and ``phi``.
    """
    raw = {k: v for k, v in raw.items() if v is not None}
    unknown = set(raw) - set(CONFIG_KEYS)
    if unknown:
        raise ConfigError(f"unknown keys {sorted(unknown)}")
    if "r_over_lambda" not in raw:
        raise ConfigError("r_over_lambda is required")
    r = _float("r_over_lambda", raw["r_over_lambda"])
    gamma = _float("gamma", raw.get("gamma", 1.0))
    configuration = None
    try:
        if raw.get("preset"):
            configuration = Configuration(str(raw["preset"]).strip()).value
            base = configuration_preset(configuration, r, gamma)
            theta = _float("theta", raw.get("theta", base.theta))
            phi = _float("phi", raw.get("phi", base.phi))
        else:
            if "theta" not in raw or "phi" not in raw:
                raise ConfigError("without a preset both theta and phi are required")
            theta, phi = _float("theta", raw["theta"]), _float("phi", raw["phi"])
        geometry = Geometry(r, *normalize_angles(theta, phi), gamma)
    except ValueError as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(str(exc)) from None

    state = str(raw.get("initial_state", "product:1:3")).strip()
    matrix = None
    if ":" in state or state.startswith("asymptotic_"):
        try:
            parse_state_label(state)
        except ValueError as exc:
            raise ConfigError(f"initial_state: {exc}") from None
    else:
        # anything that is not a label is a path to a 9x9 matrix file
        matrix = read_state_matrix(state)

    obs = raw.get("observables", "negativity")
    if isinstance(obs, str):
        obs = [o.strip() for o in obs.split(",") if o.strip()]
    sweep_param = raw.get("sweep_param") or None
    sweep_values = _float_list("sweep_values", raw["sweep_values"]) if raw.get("sweep_values") else ()
    return ScenarioConfig(
        geometry=geometry,
        initial_state=state,
        t_max=_float("t_max", raw.get("t_max", DEFAULT_T_MAX)),
        dt=_float("dt", raw.get("dt", DEFAULT_DT)),
        observables=tuple(obs),
        configuration=configuration,
        label=str(raw.get("label", "run")),
        sweep_param=sweep_param,
        sweep_values=sweep_values,
        output=raw.get("output"),
        state_matrix=matrix,
    )


def parse_complex(token: str) -> complex:
    """Parse ``a+bi`` / ``a-bi`` / ``a`` / ``bi`` (``j`` accepted as well)."""
    t = token.strip().replace("i", "j")
    try:
        return complex(t)
    except ValueError:
        raise ValueError(f"bad complex entry {token!r}") from None


def format_complex(z: complex) -> str:
    return f"{z.real:.17g}{z.imag:+.17g}i"


def read_state_matrix(path) -> np.ndarray:
    """Load a 9x9 density matrix: 9 lines of 9 whitespace-separated ``a+bi`` entries.

    Raises ``OSError`` if unreadable, :class:`ConfigError` on format problems
    and :class:`~vcdyn.algebra.DensityMatrixError` if the matrix is not a
    valid state.
    """
    lines = [ln for ln in Path(path).read_text(encoding="utf-8").splitlines() if ln.strip()]
    if len(lines) != DIM:
        raise ConfigError(f"{path}: expected 9 non-empty lines, found {len(lines)}")
    rows = []
    for n, line in enumerate(lines, 1):
        tokens = line.split()
        if len(tokens) != DIM:
            raise ConfigError(f"{path}: line {n} has {len(tokens)} entries, expected 9")
        try:
            rows.append([parse_complex(t) for t in tokens])
        except ValueError as exc:
            raise ConfigError(f"{path}: line {n}: {exc}") from None
    rho = np.array(rows, dtype=complex)
    bad = density_matrix_violations(rho)
    if bad:
        raise DensityMatrixError(bad, where=str(path))
    return rho


def write_state_matrix(path, rho) -> None:
    rho = np.asarray(rho, dtype=complex)
    text = "\n".join(" ".join(format_complex(z) for z in row) for row in rho) + "\n"
    Path(path).write_text(text, encoding="utf-8")
