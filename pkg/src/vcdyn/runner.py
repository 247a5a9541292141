"""Execute scenarios and write their observables as CSV."""
from __future__ import annotations

import csv
import io
import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

import numpy as np
import scipy

from . import __version__
from .config import CSV_MARKER, ScenarioConfig, resolve_config
from .dynamics import Trajectory, build_liouvillian, evolve
from .entanglement import birth_time, negativity_series, observable_series
from .geometry import coupling_coefficients
from .presets import get_preset
from .states import state_from_label

log = logging.getLogger(__name__)

SUMMARY_MARKER = "# vcdyn sweep summary"
SUMMARY_HEADER = ("sweep_value", "birth_time", "peak_negativity")


def fmt(x: float) -> str:
    """Locale-independent 12-significant-digit formatting used for every CSV number."""
    return format(float(x) + 0.0, ".12g")


@dataclass
class RunResult:
    config: ScenarioConfig
    trajectory: Trajectory
    columns: dict

    @property
    def negativity(self):
        return negativity_series(self.trajectory)


def expand(raw: dict) -> list[ScenarioConfig]:
    """Resolve raw keys into configs; a ``figN`` preset expands into its runs.

    Keys given alongside a figure preset override every run of that figure.
    """
    preset = str(raw.get("preset") or "").strip()
    if preset.lower().startswith("fig"):
        figure = get_preset(preset)
        overrides = {k: v for k, v in raw.items() if k != "preset" and v is not None}
        return [resolve_config({**run, **overrides}) for run in figure.raw_runs()]
    return [resolve_config(raw)]


def initial_density_matrix(cfg: ScenarioConfig) -> np.ndarray:
    if cfg.state_matrix is not None:
        return cfg.state_matrix
    return state_from_label(cfg.initial_state)


def simulate(cfg: ScenarioConfig) -> RunResult:
    """Integrate one (non-sweep) config and evaluate its observables."""
    coeffs = coupling_coefficients(cfg.geometry)
    L = build_liouvillian(coeffs)
    traj = evolve(
        L,
        initial_density_matrix(cfg),
        cfg.t_max,
        cfg.dt,
        meta={"geometry": cfg.geometry, "initial_state": cfg.initial_state},
    )
    columns = {name: observable_series(traj, name).values for name in cfg.observables}
    return RunResult(cfg, traj, columns)


def metadata_lines(cfg: ScenarioConfig) -> list[str]:
    coeffs = coupling_coefficients(cfg.geometry)
    lines = [CSV_MARKER]
    lines += [f"# {k}={v}" for k, v in cfg.metadata().items()]
    lines.append(f"# xi={cfg.geometry.xi!r}")
    lines += [f"# {k}={v!r}" for k, v in coeffs.as_dict().items() if k != "gamma"]
    lines += [
        f"# vcdyn_version={__version__}",
        f"# numpy_version={np.__version__}",
        f"# scipy_version={scipy.__version__}",
    ]
    return lines


def trajectory_csv(result: RunResult) -> str:
    buf = io.StringIO(newline="")
    for line in metadata_lines(result.config):
        buf.write(line + "\r\n")
    w = csv.writer(buf, lineterminator="\r\n")
    names = list(result.config.observables)
    w.writerow(["t", *names])
    for i, t in enumerate(result.trajectory.times):
        w.writerow([fmt(t), *(fmt(result.columns[n][i]) for n in names)])
    return buf.getvalue()


def summary_csv(cfg: ScenarioConfig, results: list[RunResult]) -> str:
    buf = io.StringIO(newline="")
    buf.write(SUMMARY_MARKER + "\r\n")
    for k, v in cfg.metadata().items():
        if k != "initial_state":
            buf.write(f"# {k}={v}\r\n")
    buf.write(f"# sweep_param={cfg.sweep_param}\r\n")
    w = csv.writer(buf, lineterminator="\r\n")
    w.writerow(SUMMARY_HEADER)
    for value, res in zip(cfg.sweep_values, results):
        neg = res.negativity
        bt = birth_time(neg)
        w.writerow([fmt(value), "" if bt is None else fmt(bt), fmt(neg.peak)])
    return buf.getvalue()


def sweep_summary(cfg: ScenarioConfig, results: list[RunResult]) -> list[tuple]:
    """(value, birth time or None, peak negativity) per sweep point."""
    out = []
    for value, res in zip(cfg.sweep_values, results):
        neg = res.negativity
        out.append((value, birth_time(neg), neg.peak))
    return out


def _map(configs, parallel: int):
    if parallel > 1 and len(configs) > 1:
        with ProcessPoolExecutor(max_workers=parallel) as pool:
            return list(pool.map(simulate, configs))
    return [simulate(c) for c in configs]


@dataclass
class ScenarioOutput:
    """In-memory CSV documents keyed by file name, plus the underlying runs."""

    documents: dict
    results: list
    summaries: dict


def run_configs(configs: list[ScenarioConfig], parallel: int = 1) -> ScenarioOutput:
    docs, results, summaries = {}, [], {}
    for cfg in configs:
        if cfg.sweep_param is None:
            res = simulate(cfg)
            results.append(res)
            docs[f"{cfg.label}.csv"] = trajectory_csv(res)
            continue
        points = [cfg.for_sweep_value(v, i) for i, v in enumerate(cfg.sweep_values)]
        log.info("sweep %s: %d points", cfg.label, len(points))
        sweep_results = _map(points, parallel)
        for p, res in zip(points, sweep_results):
            docs[f"{p.label}.csv"] = trajectory_csv(res)
        results.extend(sweep_results)
        docs[f"{cfg.label}_summary.csv"] = summary_csv(cfg, sweep_results)
        summaries[cfg.label] = sweep_summary(cfg, sweep_results)
    return ScenarioOutput(docs, results, summaries)


def write_documents(docs: dict, output: Optional[str]) -> list[Path]:
    """Write documents to ``output``: a directory, or a single ``.csv`` file."""
    target = Path(output or ".")
    if target.suffix.lower() == ".csv":
        if len(docs) != 1:
            raise ValueError(f"{len(docs)} CSV documents produced; output must be a directory")
        target.parent.mkdir(parents=True, exist_ok=True)
        (text,) = docs.values()
        target.write_text(text, encoding="utf-8", newline="")
        return [target]
    target.mkdir(parents=True, exist_ok=True)
    paths = []
    for name, text in docs.items():
        p = target / name
        p.write_text(text, encoding="utf-8", newline="")
        paths.append(p)
    return paths


def run_scenario(raw, output: Optional[str] = None, parallel: int = 1) -> list[Path]:
    """Expand ``raw`` (dict of config keys, or a ScenarioConfig), simulate, write CSVs."""
    configs = [raw] if isinstance(raw, ScenarioConfig) else expand(raw)
    result = run_configs(configs, parallel)
    dest = output if output is not None else configs[0].output
    return write_documents(result.documents, dest)


__all__ = [
    "RunResult",
    "ScenarioOutput",
    "expand",
    "fmt",
    "run_configs",
    "run_scenario",
    "simulate",
    "summary_csv",
    "sweep_summary",
    "trajectory_csv",
    "write_documents",
]
