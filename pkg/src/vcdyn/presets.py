"""Scenario presets, one per data figure (fig2 ... fig15).

Each preset is a list of raw runs in config-file form.  The figure captions
fix the configuration, R/lambda and initial state; ``t_max`` is chosen to
cover the visible time axis (gamma t up to 5, 6 or 10).
"""
from __future__ import annotations

import math
from dataclasses import dataclass


@dataclass(frozen=True)
class FigurePreset:
    name: str
    description: str
    runs: tuple

    def raw_runs(self) -> list[dict]:
        return [dict(r) for r in self.runs]


def _run(label, preset, r, state, observables, t_max, **extra):
    raw = {
        "label": label,
        "preset": preset,
        "r_over_lambda": repr(r),
        "initial_state": state,
        "observables": observables,
        "t_max": repr(float(t_max)),
        "dt": "0.01",
    }
    raw.update(extra)
    return raw


def _sweep_values(values):
    return ",".join(repr(float(v)) for v in values)


_NEG = "negativity"

PRESETS = {
    p.name: p
    for p in (
        FigurePreset(
            "fig2",
            "|rho37| for |1_A 3_B>, Configuration I, R/lambda = 0.2",
            (_run("fig2", "I", 0.2, "product:1:3", "rho37_abs", 5),),
        ),
        FigurePreset(
            "fig3",
            "|rho38|, |rho67|, |rho68| for |1_A 3_B>, Configuration II, R/lambda = 0.2",
            (_run("fig3", "II", 0.2, "product:1:3", "rho38_abs,rho67_abs,rho68_abs", 5),),
        ),
        FigurePreset(
            "fig4",
            "negativity of |1_A 3_B>, Configurations I and II, R/lambda = 0.2",
            (
                _run("fig4_nonvc", "I", 0.2, "product:1:3", _NEG, 5),
                _run("fig4_vc", "II", 0.2, "product:1:3", _NEG, 5),
            ),
        ),
        FigurePreset(
            "fig5",
            "negativity of |1_A 2_B>, Configurations I and II, R/lambda = 0.2",
            (
                _run("fig5_nonvc", "I", 0.2, "product:1:2", _NEG, 5),
                _run("fig5_vc", "II", 0.2, "product:1:2", _NEG, 5),
            ),
        ),
        FigurePreset(
            "fig6",
            "delayed sudden birth for |1_A 1_B>, Configuration I, R/lambda = 0.2",
            (_run("fig6", "I", 0.2, "product:1:1", _NEG, 6),),
        ),
        FigurePreset(
            "fig7",
            "negativity of cos(phi)|11> + sin(phi)|13>, phi in {0, pi/8, ..., pi/2}, "
            "Configuration I, R/lambda = 0.2",
            (
                _run(
                    "fig7", "I", 0.2, "superposition:0.0", _NEG, 6,
                    sweep_param="superposition_angle",
                    sweep_values=_sweep_values(k * math.pi / 8 for k in range(5)),
                ),
            ),
        ),
        FigurePreset(
            "fig8",
            "birth time versus superposition angle, 33 points on [0, pi/2], "
            "Configuration I, R/lambda = 0.2",
            (
                _run(
                    "fig8", "I", 0.2, "superposition:0.0", _NEG, 6,
                    sweep_param="superposition_angle",
                    sweep_values=_sweep_values(k * math.pi / 64 for k in range(33)),
                ),
            ),
        ),
        FigurePreset(
            "fig9",
            "negativity of |1_A 1_B>, Configuration II, R/lambda = 0.2",
            (_run("fig9", "II", 0.2, "product:1:1", _NEG, 5),),
        ),
        FigurePreset(
            "fig10",
            "|rho37| for |s_13> and |a_13>, Configuration I, R/lambda = 0.2",
            (
                _run("fig10_s13", "I", 0.2, "dicke:sym:1:3", "rho37_abs", 10),
                _run("fig10_a13", "I", 0.2, "dicke:anti:1:3", "rho37_abs", 10),
            ),
        ),
        FigurePreset(
            "fig11",
            "disentanglement of |s_13> and |a_13>, Configuration I, R/lambda = 0.2",
            (
                _run("fig11_s13", "I", 0.2, "dicke:sym:1:3", _NEG, 10),
                _run("fig11_a13", "I", 0.2, "dicke:anti:1:3", _NEG, 10),
            ),
        ),
        FigurePreset(
            "fig12",
            "disentanglement of |a_13>, Configurations I (non-VC) and II (VC), R/lambda = 0.2",
            (
                _run("fig12_nonvc", "I", 0.2, "dicke:anti:1:3", _NEG, 10),
                _run("fig12_vc", "II", 0.2, "dicke:anti:1:3", _NEG, 10),
            ),
        ),
        FigurePreset(
            "fig13",
            "populations of a_13, s_13, a_12 for |Psi_2>, Configuration I, R/lambda = 0.08",
            (_run("fig13", "I", 0.08, "bell:2", "pop_a13,pop_s13,pop_a12", 10),),
        ),
        FigurePreset(
            "fig14",
            "disentanglement of |Psi_1> and |Psi_2>, Configuration I, R/lambda = 0.08",
            (
                _run("fig14_psi1", "I", 0.08, "bell:1", _NEG, 6),
                _run("fig14_psi2", "I", 0.08, "bell:2", _NEG, 6),
            ),
        ),
        FigurePreset(
            "fig15",
            "disentanglement of |Psi_2>, Configurations I (non-VC) and II (VC), R/lambda = 0.08",
            (
                _run("fig15_nonvc", "I", 0.08, "bell:2", _NEG, 6),
                _run("fig15_vc", "II", 0.08, "bell:2", _NEG, 6),
            ),
        ),
    )
}


def get_preset(name: str) -> FigurePreset:
    try:
        return PRESETS[name.strip().lower()]
    except KeyError:
        raise ValueError(f"unknown preset {name!r}; choose from {', '.join(PRESETS)}") from None


def list_presets() -> str:
    """Plain-text table of all figure presets and their runs."""
    lines = [f"{'preset':<7} {'runs':<5} description"]
    for p in PRESETS.values():
        lines.append(f"{p.name:<7} {len(p.runs):<5} {p.description}")
        for r in p.runs:
            sweep = ""
            if "sweep_values" in r:
                sweep = f"  sweep {r['sweep_param']} ({len(r['sweep_values'].split(','))} values)"
            lines.append(
                f"{'':<13} {r['label']}: Configuration {r['preset']}, "
                f"R/lambda = {float(r['r_over_lambda']):g}, {r['initial_state']}, "
                f"t_max = {float(r['t_max']):g}, [{r['observables']}]{sweep}"
            )
    return "\n".join(lines)


__all__ = ["FigurePreset", "PRESETS", "get_preset", "list_presets"]
