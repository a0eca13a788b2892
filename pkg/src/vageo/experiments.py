"""Experiment configurations and runners used by the scripts in ``scripts/``."""

from __future__ import annotations

import logging
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

from .counter import build_geodesic_machine, corpus_decomposition, machine_accepts, windowed_decomposition
from .geodesic import build_ball, is_geodesic_oracle
from .group import corpus_spec
from .growth import GrowthTable, classify_growth, fit_rational_series, geodesic_counts, growth_rate_estimate
from .shuffle import AlphabetYP

log = logging.getLogger(__name__)


@dataclass
class CensusConfig:
    groups: tuple[str, ...] = ("z", "z2", "dinf", "p4")
    max_weight: int = 12
    method: str = "pattern"  # or "oracle"
    out_dir: Optional[Path] = None


@dataclass
class CensusResult:
    group: str
    table: GrowthTable
    seconds: float
    summary: list[str] = field(default_factory=list)


def run_census(cfg: CensusConfig) -> list[CensusResult]:
    results = []
    for name in cfg.groups:
        spec = corpus_spec(name)
        t0 = time.time()
        ball = build_ball(spec, cfg.max_weight) if cfg.method == "oracle" else None
        table = geodesic_counts(AlphabetYP(spec), ball, cfg.max_weight, cfg.method)
        res = CensusResult(name, table, time.time() - t0)
        res.summary.append(str(classify_growth(table)))
        if len(table) >= 4:
            res.summary.append(str(growth_rate_estimate(table)))
        fit = fit_rational_series(table)
        res.summary.append(f"recurrence: {fit}" if fit else "no recurrence of order <= 8")
        if cfg.out_dir is not None:
            cfg.out_dir.mkdir(parents=True, exist_ok=True)
            (cfg.out_dir / f"{name}.csv").write_text(table.to_csv(), encoding="utf-8", newline="\n")
        log.info("%s: %d rows in %.1fs", name, len(table), res.seconds)
        results.append(res)
    return results


@dataclass
class MachineCheckConfig:
    group: str = "z2"
    window: Optional[int] = 6  # None: use the bundled exact decomposition
    max_weight: int = 6


def run_machine_check(cfg: MachineCheckConfig) -> dict:
    """Compare the machine with the ball oracle on every word of weight at most ``max_weight``."""
    spec = corpus_spec(cfg.group)
    yp = AlphabetYP(spec)
    t0 = time.time()
    dec = corpus_decomposition(cfg.group, yp) if cfg.window is None else windowed_decomposition(yp, cfg.window)
    m = build_geodesic_machine(yp, dec)
    ball = build_ball(spec, cfg.max_weight)
    words = disagreements = 0
    stack = [((), 0)]
    while stack:
        w, weight = stack.pop()
        words += 1
        disagreements += machine_accepts(m, w) != is_geodesic_oracle(spec, ball, w)
        for g in spec.generators:
            if weight + g.weight <= cfg.max_weight:
                stack.append((w + (g.label,), weight + g.weight))
    return {"group": cfg.group, "basics": dec.size(), "counters": m.k, "words": words,
            "disagreements": disagreements, "seconds": round(time.time() - t0, 1)}
