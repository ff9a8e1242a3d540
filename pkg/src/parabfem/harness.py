"""Convergence studies: run, rate, and report.

A study fixes the problem, scheme, and degree, and sweeps mesh sizes M
with the time step either coupled (tau = c/M^2, the tables' h = 1/M
convention) or fixed.  Reports carry per-M errors, solver statistics,
and boundedness-monitor maxima, plus adjacent-pair observed rates.
"""

from dataclasses import dataclass, field
import csv
import io
import time

import numpy as np

from .mesh import unit_cube_mesh, unit_disk_mesh, unit_square_mesh
from .norms import error_norms, observed_rate
from .problem import EXAMPLES
from .scheme import advance, initialize, with_tau
from .space import FunctionSpace


class ConfigError(ValueError):
    """Invalid study configuration."""


_MESH_BUILDERS = {"square": unit_square_mesh,
                  "disk": unit_disk_mesh,
                  "cube": unit_cube_mesh}


@dataclass(frozen=True)
class StudyConfig:
    example: int
    scheme: str = "A"
    degree: int = 1
    mesh_sizes: tuple = (8, 16, 32)
    tau_rule: tuple = ("h2", 1.0)    # ("h2", c) -> tau = c/M^2, or ("fixed", tau)
    T: float = 1.0
    init_mode: str = "ritz"
    tol: float = 1e-10
    g_time: str = "n+1"

    def validate(self):
        if self.example not in EXAMPLES:
            raise ConfigError(f"unknown example {self.example}")
        if self.scheme not in ("A", "B"):
            raise ConfigError(f"unknown scheme {self.scheme!r}")
        if self.degree not in (1, 2):
            raise ConfigError(f"unsupported degree {self.degree}")
        if not self.mesh_sizes:
            raise ConfigError("mesh_sizes must be nonempty")
        if list(self.mesh_sizes) != sorted(set(self.mesh_sizes)):
            raise ConfigError("mesh_sizes must be strictly increasing")
        kind = self.tau_rule[0]
        if kind not in ("h2", "fixed"):
            raise ConfigError(f"unknown tau rule {kind!r}")
        for M in self.mesh_sizes:
            self.tau_for(M)

    def tau_for(self, M):
        kind, value = self.tau_rule
        tau = value / M ** 2 if kind == "h2" else value
        n = self.T / tau
        if abs(n - round(n)) > 1e-12 * max(1.0, n):
            raise ConfigError(
                f"tau = {tau} does not divide T = {self.T} (M = {M})")
        return tau, int(round(n))


@dataclass(frozen=True)
class StudyRow:
    M: int
    h: float
    tau: float
    steps: int
    l2: float
    h1: float
    cg_iters_avg: float
    monitor_linf_max: float
    monitor_w1inf_max: float
    wall_ms: float


@dataclass(frozen=True)
class ConvergenceReport:
    config: StudyConfig
    rows: tuple
    rates_l2: tuple
    rates_h1: tuple


def _run_cell(spec, config, M):
    tau, n_steps = config.tau_for(M)
    mesh = _MESH_BUILDERS[spec.domain_tag](M)
    space = FunctionSpace(mesh, config.degree)
    t0 = time.perf_counter()
    state = with_tau(initialize(spec, space, mode=config.init_mode), tau)
    iters = []
    mon_linf = state.monitor_linf
    mon_w1inf = state.monitor_w1inf
    for _ in range(n_steps):
        try:
            state, stats = advance(spec, space, state, scheme=config.scheme,
                                   tol=config.tol, g_time=config.g_time)
        except Exception as exc:
            raise type(exc)(f"{exc} [M = {M}]") from exc
        iters.extend(s.iterations for s in stats)
        mon_linf = max(mon_linf, state.monitor_linf)
        mon_w1inf = max(mon_w1inf, state.monitor_w1inf)
    errs = error_norms(spec, space, state, state.time)
    wall_ms = 1000.0 * (time.perf_counter() - t0)
    return StudyRow(M=M, h=mesh.h, tau=tau, steps=n_steps,
                    l2=errs.l2, h1=errs.h1,
                    cg_iters_avg=float(np.mean(iters)) if iters else 0.0,
                    monitor_linf_max=mon_linf, monitor_w1inf_max=mon_w1inf,
                    wall_ms=wall_ms)


def run_study(config):
    """Run each mesh size, then compute adjacent observed rates."""
    config.validate()
    spec = EXAMPLES[config.example]()
    rows = tuple(_run_cell(spec, config, M) for M in config.mesh_sizes)
    rates_l2 = tuple(observed_rate((a.h, a.l2), (b.h, b.l2))
                     for a, b in zip(rows, rows[1:]))
    rates_h1 = tuple(observed_rate((a.h, a.h1), (b.h, b.h1))
                     for a, b in zip(rows, rows[1:]))
    return ConvergenceReport(config=config, rows=rows,
                             rates_l2=rates_l2, rates_h1=rates_h1)


def plateau_check(reports):
    """Fixed-tau comparison at the finest mesh.

    Returns one row per report, sorted by decreasing tau: (tau, finest-mesh
    L2 error, ratio of that error to the next smaller tau's error, or None
    for the last row).
    """
    if len(reports) < 2:
        raise ConfigError("plateau check needs at least two reports")
    meshes = {tuple(r.config.mesh_sizes) for r in reports}
    if len(meshes) != 1:
        raise ConfigError("plateau check requires matching mesh_sizes")
    for r in reports:
        if r.config.tau_rule[0] != "fixed":
            raise ConfigError("plateau check requires fixed-tau reports")
    ordered = sorted(reports, key=lambda r: -r.config.tau_rule[1])
    out = []
    for i, r in enumerate(ordered):
        e = r.rows[-1].l2
        ratio = (e / ordered[i + 1].rows[-1].l2
                 if i + 1 < len(ordered) else None)
        out.append((r.config.tau_rule[1], e, ratio))
    return out


CSV_COLUMNS = ("example,scheme,degree,M,h,tau,steps,l2_error,h1_error,"
               "rate_l2,rate_h1,cg_iters_avg,monitor_linf_max,"
               "monitor_w1inf_max,wall_ms")


def _fmt(x):
    return f"{x:.12g}"


def report_csv(report):
    buf = io.StringIO()
    buf.write(CSV_COLUMNS + "\n")
    cfg = report.config
    for i, row in enumerate(report.rows):
        r_l2 = _fmt(report.rates_l2[i - 1]) if i > 0 else ""
        r_h1 = _fmt(report.rates_h1[i - 1]) if i > 0 else ""
        buf.write(",".join([
            str(cfg.example), cfg.scheme, str(cfg.degree), str(row.M),
            _fmt(row.h), _fmt(row.tau), str(row.steps),
            _fmt(row.l2), _fmt(row.h1), r_l2, r_h1,
            _fmt(row.cg_iters_avg), _fmt(row.monitor_linf_max),
            _fmt(row.monitor_w1inf_max), _fmt(row.wall_ms)]) + "\n")
    return buf.getvalue()


def report_markdown(report):
    cfg = report.config
    lines = [f"### Example {cfg.example}, scheme {cfg.scheme}, "
             f"degree {cfg.degree}",
             "",
             "| M | h | tau | steps | L2 error | H1 error | rate L2 "
             "| rate H1 |",
             "|---|---|-----|-------|----------|----------|---------"
             "|---------|"]
    for i, row in enumerate(report.rows):
        r_l2 = f"{report.rates_l2[i - 1]:.2f}" if i > 0 else "-"
        r_h1 = f"{report.rates_h1[i - 1]:.2f}" if i > 0 else "-"
        lines.append(
            f"| {row.M} | {row.h:.6g} | {row.tau:.6g} | {row.steps} "
            f"| {row.l2:.4e} | {row.h1:.4e} | {r_l2} | {r_h1} |")
    return "\n".join(lines) + "\n"


def emit_report(report, fmt, destination):
    """Write the report as CSV or markdown to a path or file object."""
    text = report_csv(report) if fmt == "csv" else report_markdown(report)
    if hasattr(destination, "write"):
        destination.write(text)
        return
    try:
        with open(destination, "w") as fh:
            fh.write(text)
    except OSError as exc:
        raise OSError(f"cannot write report to {destination}: {exc}") from exc


def parse_report_csv(text):
    """Round-trip helper: rows of the emitted CSV as dictionaries."""
    return list(csv.DictReader(io.StringIO(text)))


# canned convergence-table layouts, parameterized by M with h = 1/M
PRESETS = {
    "table1": [StudyConfig(example=1, mesh_sizes=(8, 16, 32),
                           tau_rule=("h2", 1.0))],
    "table2": [StudyConfig(example=1, mesh_sizes=(16, 32, 64),
                           tau_rule=("fixed", t))
               for t in (0.05, 0.025, 0.01)],
    "table3": [StudyConfig(example=2, mesh_sizes=(16, 32, 64),
                           tau_rule=("h2", 1.0))],
    "table4": [StudyConfig(example=2, mesh_sizes=(32, 64, 128),
                           tau_rule=("fixed", t))
               for t in (0.025, 0.01, 0.005)],
    "table5": [StudyConfig(example=3, mesh_sizes=(8, 16, 32),
                           tau_rule=("h2", 8.0))],
    "table6": [StudyConfig(example=3, mesh_sizes=(8, 16, 32),
                           tau_rule=("fixed", t))
               for t in (0.1, 0.05, 0.025)],
}
