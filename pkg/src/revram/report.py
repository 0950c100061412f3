"""Improvement percentages against the published baseline designs.

Percentages are recomputed from our measured metrics, so a regression in a
generator shows up as a mismatch against the printed value.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .netlist import metrics
from .synth import build_decoder, build_dff, build_msdff_we

__all__ = ["Comparison", "BASELINES", "improvement_percent", "report_improvements"]

METRIC_KEYS = ("quantum_cost", "delay", "garbage")

# (design, reference, baseline metrics, printed improvement %)
BASELINES: tuple[tuple[str, str, dict, dict], ...] = (
    ("decoder_2to4", "[14]", {"quantum_cost": 11, "delay": 11, "garbage": 2},
     {"quantum_cost": 18, "delay": 18, "garbage": 50}),
    ("decoder_2to4", "[19]", {"quantum_cost": 10, "delay": 10},
     {"quantum_cost": 10, "delay": 10}),
    ("dff", "[15]", {"quantum_cost": 7, "delay": 7, "garbage": 2},
     {"quantum_cost": 0, "delay": 0, "garbage": 50}),
    ("dff", "[16]", {"quantum_cost": 7, "delay": 7, "garbage": 2},
     {"quantum_cost": 0, "delay": 0, "garbage": 50}),
    ("msdff_we", "[19]", {"quantum_cost": 21, "delay": 19},
     {"quantum_cost": 19, "delay": 11}),
)


def improvement_percent(old: int, new: int) -> int:
    """(old - new) / old as a percentage, rounded half up to an integer."""
    if old <= 0:
        raise ValueError("baseline value must be positive")
    ratio = Fraction(old - new, old) * 100
    return int(ratio + Fraction(1, 2)) if ratio >= 0 else -int(-ratio + Fraction(1, 2))


@dataclass(frozen=True)
class Comparison:
    design: str
    reference: str
    metric: str
    ours: int
    baseline: int
    percent: int
    printed: Optional[int]

    @property
    def matches(self) -> bool:
        return self.printed is None or self.printed == self.percent


def _measured() -> dict[str, dict[str, int]]:
    out = {}
    for key, netlist in (
        ("decoder_2to4", build_decoder(2)),
        ("dff", build_dff()),
        ("msdff_we", build_msdff_we()),
    ):
        r = metrics(netlist)
        out[key] = {"quantum_cost": r.quantum_cost, "delay": r.delay, "garbage": r.garbage_count}
    return out


def report_improvements() -> list[Comparison]:
    measured = _measured()
    rows = []
    for design, ref, base, printed in BASELINES:
        for metric in METRIC_KEYS:
            if metric not in base:
                continue
            ours = measured[design][metric]
            rows.append(
                Comparison(
                    design, ref, metric, ours, base[metric],
                    improvement_percent(base[metric], ours), printed.get(metric),
                )
            )
    return rows
