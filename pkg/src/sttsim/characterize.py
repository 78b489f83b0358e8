"""Workload characterization over traces and single-unit simulations.

Covers read-write activity, cache block lifetimes, block persistence, and
expiration-miss curves across retention times.  Lifetime and persistence
analyses replay the trace through one unit in unbounded-retention (SRAM)
mode; the expiration curve runs one full unit simulation per retention.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .cache import CacheUnit, CacheUnitConfig, Technology
from .errors import ConfigError
from .trace import AccessKind

DEFAULT_CLOCK_HZ = 1.9e9

# log-decade lifetime buckets spanning 1us..1s, plus underflow/overflow
LIFETIME_BUCKET_EDGES = (1e-6, 1e-5, 1e-4, 1e-3, 1e-2, 1e-1, 1.0)


@dataclass
class RwRatioReport:
    """Read fraction of data accesses, per core and aggregate.

    Fractions are loads / (loads + stores); instruction fetches are
    excluded.  A core (or trace) with zero data accesses reports None.
    """

    per_core: dict[int, tuple[int, int, float | None]]
    loads: int
    stores: int

    @property
    def read_fraction(self) -> float | None:
        total = self.loads + self.stores
        return self.loads / total if total else None


def read_write_ratio(trace) -> RwRatioReport:
    if not trace:
        raise ConfigError("read_write_ratio requires a non-empty trace")
    counts: dict[int, list[int]] = {}
    for rec in trace:
        kind = rec[2]
        if kind:
            c = counts.setdefault(rec[0], [0, 0])
            c[kind - 1] += 1
    per_core = {}
    loads = stores = 0
    for core in sorted(counts):
        ld, st = counts[core]
        loads += ld
        stores += st
        per_core[core] = (ld, st, ld / (ld + st) if ld + st else None)
    return RwRatioReport(per_core=per_core, loads=loads, stores=stores)


def _stream(trace, stream: str):
    if stream == "data":
        return [r for r in trace if r[2]]
    if stream == "instr":
        return [r for r in trace if not r[2]]
    if stream == "all":
        return list(trace)
    raise ConfigError(f"unknown stream {stream!r}; expected data, instr, or all")


def _unbounded(cfg: CacheUnitConfig) -> CacheUnitConfig:
    if cfg.technology is Technology.SRAM:
        return cfg
    return replace(cfg, technology=Technology.SRAM, retention_time=None)


def _replay_unbounded(records, cfg: CacheUnitConfig, clock_hz: float):
    """Replay records through one SRAM-mode unit, yielding per-access info.

    Yields (record, aligned_addr, outcome, now_seconds) tuples in
    (timestamp, core_id) order; all cores feed the single unit.
    """
    unit = CacheUnit(_unbounded(cfg), "probe")
    mask = ~(cfg.line_size_bytes - 1)
    ordered = sorted(records, key=lambda r: (r[1], r[0]))
    for rec in ordered:
        now = rec[1] / clock_hz
        aligned = rec[3] & mask
        out = unit.access(aligned, rec[2] == AccessKind.STORE, now)
        yield rec, aligned, out, now


@dataclass
class LifetimeHistogram:
    """Distribution of completed block residency lifetimes.

    The primary measure is fill-to-last-hit (a residency with no hits
    contributes lifetime 0); fill-to-eviction is reported alongside.
    Bucket i counts lifetimes in [edges[i], edges[i+1]), with dedicated
    underflow (< edges[0]) and overflow (>= edges[-1]) buckets.
    """

    bucket_edges: tuple[float, ...]
    counts_last_hit: list[int]
    counts_fill_to_eviction: list[int]
    quantiles_last_hit: dict[str, float]
    quantiles_fill_to_eviction: dict[str, float]
    total_residencies: int

    @staticmethod
    def bucket_labels(edges: tuple[float, ...]) -> list[str]:
        labels = [f"<{edges[0]:g}"]
        labels += [f"[{lo:g},{hi:g})" for lo, hi in zip(edges, edges[1:])]
        labels.append(f">={edges[-1]:g}")
        return labels


def _bucketize(values: list[float], edges: tuple[float, ...]) -> list[int]:
    counts = [0] * (len(edges) + 1)
    for v in values:
        counts[int(np.searchsorted(edges, v, side="right"))] += 1
    return counts


def _quantiles(values: list[float]) -> dict[str, float]:
    if not values:
        return {"p50": 0.0, "p90": 0.0, "p99": 0.0}
    arr = np.asarray(values)
    p50, p90, p99 = np.quantile(arr, [0.50, 0.90, 0.99])
    return {"p50": float(p50), "p90": float(p90), "p99": float(p99)}


def block_lifetimes(
    trace,
    cfg: CacheUnitConfig,
    clock_hz: float = DEFAULT_CLOCK_HZ,
    stream: str = "data",
    bucket_edges: tuple[float, ...] = LIFETIME_BUCKET_EDGES,
) -> LifetimeHistogram:
    """Histogram completed residency lifetimes on an unbounded-retention unit."""
    fill_time: dict[int, float] = {}
    last_hit: dict[int, float] = {}
    by_last_hit: list[float] = []
    by_eviction: list[float] = []
    for _, aligned, out, now in _replay_unbounded(_stream(trace, stream), cfg, clock_hz):
        if out.hit:
            last_hit[aligned] = now
        else:
            victim = out.victim_address
            if victim is not None:
                by_last_hit.append(last_hit[victim] - fill_time[victim])
                by_eviction.append(now - fill_time[victim])
            fill_time[aligned] = now
            last_hit[aligned] = now
    return LifetimeHistogram(
        bucket_edges=bucket_edges,
        counts_last_hit=_bucketize(by_last_hit, bucket_edges),
        counts_fill_to_eviction=_bucketize(by_eviction, bucket_edges),
        quantiles_last_hit=_quantiles(by_last_hit),
        quantiles_fill_to_eviction=_quantiles(by_eviction),
        total_residencies=len(by_last_hit),
    )


@dataclass
class PersistenceReport:
    """Fraction of unique block addresses reloaded at least thd times.

    A reload is a fill occurring after the block's first eviction, so a
    block filled exactly once (or never evicted) has a reload count of 0.
    """

    fractions: dict[int, float]
    reloaded_counts: dict[int, int]
    unique_blocks: int
    total_fills: int


def persistence(
    trace,
    cfg: CacheUnitConfig,
    thresholds: tuple[int, ...] = (1, 2, 4, 8),
    clock_hz: float = DEFAULT_CLOCK_HZ,
    stream: str = "data",
) -> PersistenceReport:
    """Per-threshold persistent-block fractions on an unbounded-retention unit."""
    reloads: dict[int, int] = {}
    evicted_once: set[int] = set()
    seen: set[int] = set()
    total_fills = 0
    for _, aligned, out, _ in _replay_unbounded(_stream(trace, stream), cfg, clock_hz):
        if out.hit:
            continue
        total_fills += 1
        seen.add(aligned)
        if aligned in evicted_once:
            reloads[aligned] = reloads.get(aligned, 0) + 1
        if out.victim_address is not None:
            evicted_once.add(out.victim_address)
    unique = len(seen)
    fractions = {}
    counts = {}
    for thd in thresholds:
        n = sum(1 for r in reloads.values() if r >= thd)
        counts[thd] = n
        fractions[thd] = n / unique if unique else 0.0
    return PersistenceReport(
        fractions=fractions,
        reloaded_counts=counts,
        unique_blocks=unique,
        total_fills=total_fills,
    )


@dataclass
class ExpirationCurvePoint:
    retention_s: float
    expiration_misses: int
    total_misses: int
    miss_ratio_vs_unbounded: float


def expiration_curve(
    trace,
    cfg: CacheUnitConfig,
    retentions,
    clock_hz: float = DEFAULT_CLOCK_HZ,
    stream: str = "data",
    counter_states: int | None = None,
) -> list[ExpirationCurvePoint]:
    """Expiration-miss counts of one unit across a sorted retention sweep."""
    retentions = list(retentions)
    if not retentions:
        raise ConfigError("expiration_curve requires at least one retention")
    if any(not r > 0 for r in retentions):
        raise ConfigError("retentions must be positive")
    if retentions != sorted(retentions):
        raise ConfigError("retentions must be sorted ascending")

    records = _stream(trace, stream)
    n_states = counter_states if counter_states is not None else cfg.counter_states
    mask = ~(cfg.line_size_bytes - 1)
    ordered = sorted(records, key=lambda r: (r[1], r[0]))

    def run(unit_cfg: CacheUnitConfig) -> CacheUnit:
        unit = CacheUnit(unit_cfg, "probe")
        access = unit.access
        for rec in ordered:
            access(rec[3] & mask, rec[2] == 2, rec[1] / clock_hz)
        return unit

    baseline = run(_unbounded(cfg))
    baseline_misses = baseline.misses
    points = []
    for r in retentions:
        unit = run(
            replace(cfg, technology=Technology.STTRAM, retention_time=r, counter_states=n_states)
        )
        points.append(
            ExpirationCurvePoint(
                retention_s=r,
                expiration_misses=unit.miss_expiration,
                total_misses=unit.misses,
                miss_ratio_vs_unbounded=unit.misses / baseline_misses if baseline_misses else 0.0,
            )
        )
    return points
