"""Design-space studies: retention sweeps, specialization, asymmetric cores.

All candidate simulations are independent; with jobs > 1 they run in a
forked worker pool and results are reduced in a fixed key order, so
reports are identical to a serial run.  Objective values are total cache
energy (joules), execution time (seconds), or their product; memory
energy is reported separately and excluded from objectives.
"""

from __future__ import annotations

import enum
import itertools
import multiprocessing
from dataclasses import dataclass, replace

from .cache import CacheUnitConfig, Technology
from .energy import TechTable, sample_tech_table
from .errors import ConfigError
from .hierarchy import HierarchyConfig, SimReport, simulate
from .trace import SyntheticTraceSpec, generate_trace


class Objective(enum.Enum):
    ENERGY = "energy"
    TIME = "time"
    EDP = "edp"  # energy-delay product, an extension beyond energy/latency


def objective_value(report: SimReport, objective: Objective) -> float:
    if objective is Objective.ENERGY:
        return report.cache_energy_j
    if objective is Objective.TIME:
        return report.exec_time_s
    return report.cache_energy_j * report.exec_time_s


def with_technology(cfg: HierarchyConfig, technology: Technology, retention: float | None) -> HierarchyConfig:
    """The same hierarchy with every cache unit's technology substituted."""

    def conv(unit: CacheUnitConfig) -> CacheUnitConfig:
        return replace(unit, technology=technology, retention_time=retention)

    return replace(
        cfg,
        l1i=tuple(conv(u) for u in cfg.l1i),
        l1d=tuple(conv(u) for u in cfg.l1d),
        l2=conv(cfg.l2) if cfg.l2 is not None else None,
    )


# -- parallel execution plumbing -------------------------------------------
#
# Workers inherit the submitted traces through fork, so large record lists
# are never pickled.  Falls back to serial execution when fork is not
# available or jobs <= 1.

_SHARED: dict = {}


def _run_task(task):
    idx, cfg = task
    return simulate(cfg, _SHARED["traces"][idx], _SHARED["table"])


def _run_sims(
    tasks: list[tuple[int, HierarchyConfig]], traces: list, table: TechTable | None, jobs: int
) -> list[SimReport]:
    if table is None:
        table = sample_tech_table()
    if jobs > 1 and len(tasks) > 1 and "fork" in multiprocessing.get_all_start_methods():
        _SHARED["traces"] = traces
        _SHARED["table"] = table
        try:
            ctx = multiprocessing.get_context("fork")
            with ctx.Pool(processes=min(jobs, len(tasks))) as pool:
                return pool.map(_run_task, tasks)
        finally:
            _SHARED.clear()
    return [simulate(cfg, traces[idx], table) for idx, cfg in tasks]


def _materialize(trace) -> list:
    if isinstance(trace, SyntheticTraceSpec):
        return generate_trace(trace)
    return trace if isinstance(trace, list) else list(trace)


# -- retention sweep ---------------------------------------------------------


@dataclass
class SweepEntry:
    technology: str
    retention_s: float | None
    report: SimReport
    normalized_energy: float
    normalized_time: float


@dataclass
class SweepResult:
    entries: list[SweepEntry]  # SRAM baseline first, then retentions ascending
    best_retention: float
    objective: Objective

    @property
    def sram(self) -> SweepEntry:
        return self.entries[0]

    def entry_for(self, retention: float | None) -> SweepEntry:
        for e in self.entries:
            if e.retention_s == retention:
                return e
        raise KeyError(retention)


def _check_retentions(retentions) -> list[float]:
    rets = sorted(retentions)
    if not rets:
        raise ConfigError("retention sweep requires at least one retention")
    if any(not r > 0 for r in rets):
        raise ConfigError("retentions must be positive")
    if len(set(rets)) != len(rets):
        raise ConfigError("duplicate retention values")
    return rets


def sweep(
    trace,
    template: HierarchyConfig,
    retentions,
    objective: Objective = Objective.ENERGY,
    tech_table: TechTable | None = None,
    jobs: int = 1,
) -> SweepResult:
    """Simulate an SRAM baseline plus each retention applied at all levels.

    Normalized columns are ratios to the SRAM run of identical geometry
    and trace (the SRAM row normalizes to exactly 1.0).  The best
    retention is the objective argmin among the swept retentions, ties
    broken toward the longer retention.
    """
    rets = _check_retentions(retentions)
    records = _materialize(trace)
    configs = [with_technology(template, Technology.SRAM, None)]
    configs += [with_technology(template, Technology.STTRAM, r) for r in rets]
    reports = _run_sims([(0, c) for c in configs], [records], tech_table, jobs)

    sram_energy = reports[0].cache_energy_j
    sram_time = reports[0].exec_time_s
    entries = [SweepEntry("SRAM", None, reports[0], 1.0, 1.0)]
    for r, rep in zip(rets, reports[1:]):
        entries.append(
            SweepEntry(
                "STTRAM",
                r,
                rep,
                rep.cache_energy_j / sram_energy if sram_energy else 0.0,
                rep.exec_time_s / sram_time if sram_time else 0.0,
            )
        )

    best = rets[0]
    best_value = objective_value(reports[1], objective)
    for r, rep in zip(rets[1:], reports[2:]):
        v = objective_value(rep, objective)
        if v <= best_value:  # ties go to the longer retention
            best_value = v
            best = r
    return SweepResult(entries=entries, best_retention=best, objective=objective)


# -- retention specialization via sampling -----------------------------------


@dataclass
class SpecializeResult:
    chosen_retention: float
    sample_values: dict[float, float]  # retention -> objective on the profile interval
    full_value_chosen: float
    full_value_base: float
    savings_vs_base: float  # fraction; negative when sampling mispredicts
    base_retention: float
    sample_len: int
    objective: Objective


def specialize(
    trace,
    template: HierarchyConfig,
    retentions,
    base_retention: float,
    sample_len: int,
    objective: Objective = Objective.ENERGY,
    tech_table: TechTable | None = None,
    jobs: int = 1,
) -> SpecializeResult:
    """Pick a retention by simulating a cold-cache profile prefix per candidate.

    The chosen retention then runs the full trace; savings are reported
    against running the full trace at base_retention (and may be negative
    for adversarial phase-change workloads).
    """
    rets = _check_retentions(retentions)
    records = _materialize(trace)
    if sample_len < 1:
        raise ConfigError("sample_len must be >= 1")
    if sample_len > len(records):
        raise ConfigError(f"sample_len {sample_len} exceeds trace length {len(records)}")

    prefix = records[:sample_len]
    tasks = [(0, with_technology(template, Technology.STTRAM, r)) for r in rets]
    sample_reports = _run_sims(tasks, [prefix], tech_table, jobs)
    sample_values = {r: objective_value(rep, objective) for r, rep in zip(rets, sample_reports)}

    chosen = rets[0]
    best_value = sample_values[chosen]
    for r in rets[1:]:
        if sample_values[r] <= best_value:
            best_value = sample_values[r]
            chosen = r

    full_tasks = [
        (0, with_technology(template, Technology.STTRAM, chosen)),
        (0, with_technology(template, Technology.STTRAM, base_retention)),
    ]
    full_chosen, full_base = _run_sims(full_tasks, [records], tech_table, jobs)
    v_chosen = objective_value(full_chosen, objective)
    v_base = objective_value(full_base, objective)
    savings = (v_base - v_chosen) / v_base if v_base else 0.0
    return SpecializeResult(
        chosen_retention=chosen,
        sample_values=sample_values,
        full_value_chosen=v_chosen,
        full_value_base=v_base,
        savings_vs_base=savings,
        base_retention=base_retention,
        sample_len=sample_len,
        objective=objective,
    )


# -- asymmetric retention assignment ------------------------------------------


@dataclass
class AssignmentResult:
    assignment: dict[int, int]  # thread -> core
    cost_matrix: list[list[float]]  # [thread][core] objective on the profile interval
    profiled_total: float
    full_asym_total: float
    homogeneous_totals: dict[float, float]  # retention -> full-run total
    best_homogeneous_retention: float
    best_homogeneous_total: float
    savings_vs_best_homogeneous: float
    core_retentions: list[float]
    profile_len: int
    objective: Objective


def _single_core_config(template: HierarchyConfig, retention: float) -> HierarchyConfig:
    """One core with the template's L1 geometry at the given retention, no L2.

    Asymmetry is evaluated at the private L1s; threads on different cores
    share nothing, so each (thread, core) pair simulates independently.
    """
    l1i = replace(template.l1i[0], technology=Technology.STTRAM, retention_time=retention)
    l1d = replace(template.l1d[0], technology=Technology.STTRAM, retention_time=retention)
    return replace(template, num_cores=1, l1i=l1i, l1d=l1d, l2=None)


def _rebase_core(records: list, core: int = 0) -> list:
    if all(r[0] == core for r in records):
        return records
    return [r._replace(core_id=core) for r in records]


def assign_asymmetric(
    thread_traces: list,
    template: HierarchyConfig,
    core_retentions,
    profile_len: int,
    objective: Objective = Objective.ENERGY,
    tech_table: TechTable | None = None,
    jobs: int = 1,
) -> AssignmentResult:
    """Match threads to asymmetric-retention cores by profiled cost.

    Profiles every (thread, core) pair on the first profile_len accesses
    from cold caches, searches all assignments exhaustively for the
    minimum total cost, then runs every thread's full trace under the
    plan.  The comparison baseline is the best single retention from the
    core set applied to all threads.
    """
    core_rets = [float(r) for r in core_retentions]
    nthreads = len(thread_traces)
    ncores = len(core_rets)
    if nthreads == 0:
        raise ConfigError("assign_asymmetric requires at least one thread trace")
    if nthreads > ncores:
        raise ConfigError(f"thread count {nthreads} exceeds core count {ncores} (one thread per core)")
    if ncores > 8:
        raise ConfigError("exhaustive assignment supports at most 8 cores")
    if profile_len < 1:
        raise ConfigError("profile_len must be >= 1")
    if any(not r > 0 for r in core_rets):
        raise ConfigError("core retentions must be positive")

    traces = [_rebase_core(_materialize(t)) for t in thread_traces]
    prefixes = [t[: min(profile_len, len(t))] for t in traces]

    pair_tasks = []
    for t in range(nthreads):
        for c in range(ncores):
            pair_tasks.append((t, _single_core_config(template, core_rets[c])))
    pair_reports = _run_sims(pair_tasks, prefixes, tech_table, jobs)
    cost = [
        [objective_value(pair_reports[t * ncores + c], objective) for c in range(ncores)]
        for t in range(nthreads)
    ]

    best_perm = None
    best_total = None
    for perm in itertools.permutations(range(ncores), nthreads):
        total = sum(cost[t][perm[t]] for t in range(nthreads))
        if best_total is None or total < best_total:
            best_total = total
            best_perm = perm
    assignment = {t: best_perm[t] for t in range(nthreads)}

    full_tasks = [(t, _single_core_config(template, core_rets[assignment[t]])) for t in range(nthreads)]
    distinct_rets = sorted(set(core_rets))
    for r in distinct_rets:
        full_tasks += [(t, _single_core_config(template, r)) for t in range(nthreads)]
    full_reports = _run_sims(full_tasks, traces, tech_table, jobs)

    asym_total = sum(objective_value(rep, objective) for rep in full_reports[:nthreads])
    homogeneous = {}
    pos = nthreads
    for r in distinct_rets:
        homogeneous[r] = sum(objective_value(rep, objective) for rep in full_reports[pos : pos + nthreads])
        pos += nthreads

    best_h_ret = min(homogeneous, key=lambda r: (homogeneous[r], -r))
    best_h_total = homogeneous[best_h_ret]
    savings = (best_h_total - asym_total) / best_h_total if best_h_total else 0.0
    return AssignmentResult(
        assignment=assignment,
        cost_matrix=cost,
        profiled_total=best_total,
        full_asym_total=asym_total,
        homogeneous_totals=homogeneous,
        best_homogeneous_retention=best_h_ret,
        best_homogeneous_total=best_h_total,
        savings_vs_best_homogeneous=savings,
        core_retentions=core_rets,
        profile_len=profile_len,
        objective=objective,
    )
