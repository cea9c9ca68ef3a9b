"""Scenario loading, experiment orchestration, and report emission."""

from __future__ import annotations

import csv
import io
import itertools
import json
from dataclasses import dataclass, field, replace
from fractions import Fraction
from pathlib import Path
from typing import Optional, Union

from . import __version__
from .adversary import make_adversary, run_duel, star_network
from .hexnet import Cell, Network, color_of
from .ledger import (
    Caco2Certificate,
    CacoCertificate,
    RatioReport,
    caco2_certificate,
    caco_certificate,
    ratio_report,
)
from .offline import exact_optimum
from .online import RunTrace, make_algorithm, run_sequence


class ScenarioError(ValueError):
    """A scenario file failed validation; message pinpoints the offending field."""


@dataclass(frozen=True)
class ScenarioConfig:
    scenario_id: str
    omega: int
    cells: tuple  # sorted tuple of Cell
    algorithm: str
    traffic: Union[tuple, str]  # explicit request tuple or adversary selector
    verify_certificate: bool = False
    compute_opt: bool = False

    def to_jsonable(self) -> dict:
        traffic = (
            self.traffic
            if isinstance(self.traffic, str)
            else [list(c) for c in self.traffic]
        )
        return {
            "omega": self.omega,
            "cells": [list(c) for c in self.cells],
            "algorithm": self.algorithm,
            "traffic": traffic,
            "verify_certificate": self.verify_certificate,
            "compute_opt": self.compute_opt,
        }


def _as_cell(value, what: str) -> Cell:
    if (
        not isinstance(value, (list, tuple))
        or len(value) != 2
        or not all(isinstance(v, int) for v in value)
    ):
        raise ScenarioError(f"{what} must be an integer pair [q, r], got {value!r}")
    return (value[0], value[1])


def parse_scenario(data: dict, scenario_id: str) -> ScenarioConfig:
    if not isinstance(data, dict):
        raise ScenarioError("scenario must be a JSON object")
    omega = data.get("omega")
    if not isinstance(omega, int) or omega <= 0:
        raise ScenarioError(f"omega must be a positive integer, got {omega!r}")
    raw_cells = data.get("cells")
    if not isinstance(raw_cells, list) or not raw_cells:
        raise ScenarioError("cells must be a non-empty list of [q, r] pairs")
    cells = tuple(sorted(_as_cell(c, "cell") for c in raw_cells))
    if len(set(cells)) != len(cells):
        raise ScenarioError("cells contains duplicates")
    algorithm = data.get("algorithm")
    if not isinstance(algorithm, str):
        raise ScenarioError("algorithm must be a selector string")
    traffic = data.get("traffic")
    if isinstance(traffic, str):
        parsed_traffic: Union[tuple, str] = traffic
    elif isinstance(traffic, list):
        parsed_traffic = tuple(_as_cell(c, "traffic request") for c in traffic)
    else:
        raise ScenarioError("traffic must be a request list or an adversary selector")
    config = ScenarioConfig(
        scenario_id=scenario_id,
        omega=omega,
        cells=cells,
        algorithm=algorithm,
        traffic=parsed_traffic,
        verify_certificate=bool(data.get("verify_certificate", False)),
        compute_opt=bool(data.get("compute_opt", False)),
    )
    validate_scenario(config)
    return config


def validate_scenario(config: ScenarioConfig) -> None:
    network = Network(config.cells)
    try:
        make_algorithm(config.algorithm, network, config.omega)
    except Exception as exc:
        raise ScenarioError(f"algorithm {config.algorithm!r}: {exc}") from exc
    if isinstance(config.traffic, str):
        try:
            scenario = make_adversary(config.traffic, config.omega, network)
        except Exception as exc:
            raise ScenarioError(f"traffic selector {config.traffic!r}: {exc}") from exc
        missing = scenario.network.cells - network.cells
        if missing:
            raise ScenarioError(
                f"adversary {config.traffic!r} needs cells {sorted(missing)} "
                "which are not in the scenario"
            )
    else:
        for i, cell in enumerate(config.traffic):
            if cell not in network:
                raise ScenarioError(f"traffic request {i} at cell {cell} is outside the network")


def load_scenario(path) -> ScenarioConfig:
    path = Path(path)
    try:
        data = json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise ScenarioError(f"{path}: line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc
    return parse_scenario(data, scenario_id=path.stem)


@dataclass
class RunReport:
    scenario_id: str
    algorithm: str
    omega: int
    rows: list  # (q, r, color, demand, online_accepted, opt_accepted or None)
    total_demand: int
    total_accepted: int
    total_opt: Optional[int]
    ratio: Optional[RatioReport]
    certificate: Optional[Union[CacoCertificate, Caco2Certificate]] = None
    certificate_kind: Optional[str] = None
    flagged_cells: tuple = ()
    version: str = __version__
    error: Optional[str] = None

    @property
    def certificate_ok(self) -> bool:
        """True when no requested check failed (uncovered cases are tolerated)."""
        if self.certificate is None:
            return True
        if isinstance(self.certificate, Caco2Certificate):
            return self.certificate.status in ("pass", "uncovered")
        return self.certificate.passed


def _certificate_for(config: ScenarioConfig, trace: RunTrace, opt, omega: int):
    if config.algorithm == "caco":
        return "caco", caco_certificate(trace, opt, omega)
    if config.algorithm == "caco2":
        return "caco2", caco2_certificate(trace, opt, omega)
    return None, None


def run_experiment(config: ScenarioConfig) -> RunReport:
    network = Network(config.cells)
    if isinstance(config.traffic, str):
        scenario = make_adversary(config.traffic, config.omega, network)
        trace = run_duel(
            scenario, lambda net, om: make_algorithm(config.algorithm, net, om)
        )
        network = scenario.network
        compute_opt = True  # adversary duels are small; the ratio is the point
    else:
        alg = make_algorithm(config.algorithm, network, config.omega)
        trace = run_sequence(alg, network, config.omega, config.traffic)
        compute_opt = config.compute_opt or config.verify_certificate

    opt = None
    if compute_opt:
        # tiny topologies stay tractable at any omega, so lift the spectrum cap
        max_omega = max(64, config.omega) if len(network.cells) <= 8 else 64
        opt = exact_optimum(network, config.omega, dict(trace.demands), max_omega=max_omega)

    certificate = kind = None
    if config.verify_certificate and opt is not None:
        kind, certificate = _certificate_for(config, trace, opt, config.omega)

    rows = []
    for cell in sorted(network.cells):
        rows.append(
            (
                cell[0],
                cell[1],
                color_of(cell).value,
                trace.demands.get(cell, 0),
                trace.accepted_at(cell),
                opt.per_cell[cell] if opt is not None else None,
            )
        )
    return RunReport(
        scenario_id=config.scenario_id,
        algorithm=trace.algorithm,
        omega=config.omega,
        rows=rows,
        total_demand=sum(r[3] for r in rows),
        total_accepted=trace.total_accepted(),
        total_opt=opt.total if opt is not None else None,
        ratio=ratio_report(trace, opt) if opt is not None else None,
        certificate=certificate,
        certificate_kind=kind,
        flagged_cells=trace.flagged_cells,
    )


CSV_COLUMNS = ("q", "r", "color", "demand", "online_accepted", "opt_accepted")


def emit_report(report: RunReport, fmt: str = "text") -> str:
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(CSV_COLUMNS)
        for q, r, color, demand, acc, opt in report.rows:
            writer.writerow([q, r, color, demand, acc, "" if opt is None else opt])
        return buf.getvalue()
    if fmt != "text":
        raise ValueError(f"unknown report format {fmt!r}")

    lines = [
        f"scenario: {report.scenario_id}",
        f"algorithm: {report.algorithm}",
        f"omega: {report.omega}",
        f"suite: cellcall {report.version}",
        "",
        f"{'q':>4} {'r':>4} {'color':>5} {'demand':>6} {'online':>6} {'opt':>5}",
    ]
    for q, r, color, demand, acc, opt in report.rows:
        opt_s = "-" if opt is None else str(opt)
        lines.append(f"{q:>4} {r:>4} {color:>5} {demand:>6} {acc:>6} {opt_s:>5}")
    opt_total = "-" if report.total_opt is None else str(report.total_opt)
    lines.append("")
    lines.append(
        f"totals: demand={report.total_demand} online={report.total_accepted} opt={opt_total}"
    )
    if report.ratio is not None:
        lines.append(f"ratio OPT/ALG: {report.ratio.render()}")
    if report.flagged_cells:
        lines.append(f"flagged degenerate-structure cells: {list(report.flagged_cells)}")
    cert = report.certificate
    if cert is not None:
        lines.append("")
        lines.append(f"certificate ({report.certificate_kind}):")
        for check in cert.checks:
            lines.append(f"  {check}")
        if isinstance(cert, Caco2Certificate):
            lines.append(f"  status: {cert.status}")
            for cell, reason in cert.uncovered:
                lines.append(f"  uncovered: {cell} ({reason})")
    if report.error:
        lines.append(f"error: {report.error}")
    return "\n".join(lines) + "\n"


@dataclass
class SweepSummary:
    reports: list
    ratio_range: dict  # algorithm -> (min Fraction, max Fraction)
    failures: list  # (scenario_id, message)

    def best_by_ratio(self) -> Optional[str]:
        """Algorithm with the smallest worst-case ratio over the sweep."""
        ranking = sorted(
            (hi, alg) for alg, (lo, hi) in self.ratio_range.items() if hi is not None
        )
        return ranking[0][1] if ranking else None


def sweep(template: ScenarioConfig, grid: dict) -> SweepSummary:
    """Run the template once per grid point (cartesian product, given order).

    Failing points are recorded and the sweep continues.
    """
    if not grid:
        return SweepSummary(reports=[], ratio_range={}, failures=[])
    names = list(grid)
    reports = []
    failures = []
    for values in itertools.product(*(grid[n] for n in names)):
        overrides = dict(zip(names, values))
        point_id = template.scenario_id + "[" + ",".join(
            f"{k}={v}" for k, v in overrides.items()
        ) + "]"
        try:
            config = replace(template, scenario_id=point_id, **overrides)
            validate_scenario(config)
            reports.append(run_experiment(config))
        except Exception as exc:
            failures.append((point_id, str(exc)))
    ratio_range: dict = {}
    for r in reports:
        if r.ratio is None or r.ratio.ratio is None:
            continue
        lo, hi = ratio_range.get(r.algorithm, (None, None))
        value = r.ratio.ratio
        ratio_range[r.algorithm] = (
            value if lo is None else min(lo, value),
            value if hi is None else max(hi, value),
        )
    return SweepSummary(reports=reports, ratio_range=ratio_range, failures=failures)


def duel_config(adversary: str, algorithm: str, omega: int) -> ScenarioConfig:
    """Config for an adversary duel; certificates on for the two named algorithms."""
    scenario = make_adversary(adversary, omega)
    config = ScenarioConfig(
        scenario_id=f"duel:{adversary}:{algorithm}:{omega}",
        omega=omega,
        cells=tuple(scenario.network.sorted_cells()),
        algorithm=algorithm,
        traffic=adversary,
        verify_certificate=algorithm in ("caco", "caco2"),
        compute_opt=True,
    )
    validate_scenario(config)
    return config
