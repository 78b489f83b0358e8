"""Command-line front end.

Subcommands: gen-trace, simulate, characterize, sweep, specialize, asym.
Reports are deterministic CSV files written atomically (temp file plus
rename) with floats formatted to 9 significant digits, so identical
inputs produce byte-identical outputs.
"""

from __future__ import annotations

import argparse
import os
import sys
import tempfile
from dataclasses import replace

from . import characterize as chz
from . import explore
from .config import ExperimentConfig, load_experiment_config
from .energy import load_tech_table, sample_tech_table
from .errors import ConfigError, SttsimError
from .hierarchy import simulate as run_simulation
from .trace import (
    AccessKind,
    SyntheticTraceSpec,
    generate_trace,
    parse_gap_spec,
    parse_pattern_spec,
    read_trace,
    write_trace,
)


def _fmt(value) -> str:
    if value is None:
        return "-"
    if isinstance(value, bool):
        return "1" if value else "0"
    if isinstance(value, float):
        return format(value, ".9g")
    return str(value)


def _write_csv(path: str, header: list[str], rows: list[list]) -> None:
    out_dir = os.path.dirname(path) or "."
    os.makedirs(out_dir, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=out_dir, suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(",".join(header) + "\n")
            for row in rows:
                fh.write(",".join(_fmt(v) for v in row) + "\n")
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
    print(f"wrote {path}")


def _load_config(args) -> ExperimentConfig:
    if not args.config:
        raise ConfigError("this subcommand requires --config <path>")
    cfg = load_experiment_config(args.config)
    if args.trace:
        cfg.trace_path = args.trace
        cfg.synthetic = None
    if args.tech_table:
        cfg.tech_table_path = args.tech_table
    if args.out_dir:
        cfg.out_dir = args.out_dir
    if args.seed is not None and cfg.synthetic is not None:
        cfg.synthetic = replace(cfg.synthetic, seed=args.seed)
    return cfg


def _load_table(cfg: ExperimentConfig):
    if cfg.tech_table_path:
        return load_tech_table(cfg.tech_table_path)
    return sample_tech_table()


def _load_records(cfg: ExperimentConfig):
    if cfg.trace_path:
        return read_trace(cfg.trace_path)
    return generate_trace(cfg.synthetic)


def _cmd_gen_trace(args) -> int:
    spec = SyntheticTraceSpec(
        seed=args.seed if args.seed is not None else 1,
        num_cores=args.num_cores,
        accesses_per_core=args.accesses_per_core,
        read_fraction=args.read_fraction,
        working_set_blocks=args.working_set_blocks,
        line_size_bytes=args.line_size,
        gap=parse_gap_spec(args.gap),
        pattern=parse_pattern_spec(args.pattern),
    )
    records = generate_trace(spec)
    out_dir = os.path.dirname(args.out)
    if out_dir:
        os.makedirs(out_dir, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=out_dir or ".", suffix=".tmp")
    os.close(fd)
    try:
        write_trace(records, tmp)
        os.replace(tmp, args.out)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
    print(f"wrote {args.out} ({len(records)} records)")
    return 0


def _cmd_simulate(args) -> int:
    cfg = _load_config(args)
    table = _load_table(cfg)
    records = _load_records(cfg)
    report = run_simulation(cfg.hierarchy, records, table)

    header = [
        "unit",
        "accesses",
        "hits",
        "miss_compulsory",
        "miss_replacement",
        "miss_expiration",
        "writebacks",
        "e_read_J",
        "e_write_J",
        "e_leak_J",
        "e_total_J",
        "time_s",
    ]
    rows = []
    for name, u in report.units.items():
        rows.append(
            [
                name,
                u.accesses,
                u.hits,
                u.miss_compulsory,
                u.miss_replacement,
                u.miss_expiration,
                u.writebacks,
                u.energy.dynamic_read,
                u.energy.dynamic_write,
                u.energy.leakage,
                u.energy.total,
                report.exec_time_s,
            ]
        )
    rows.append(
        [
            "mem",
            report.mem_accesses,
            0,
            0,
            0,
            0,
            0,
            0.0,
            0.0,
            0.0,
            report.mem_energy_j,
            report.exec_time_s,
        ]
    )
    _write_csv(os.path.join(cfg.out_dir, "simulate.csv"), header, rows)
    return 0


def _streams_present(records) -> list[str]:
    streams = []
    if any(r.kind != AccessKind.INSTR_FETCH for r in records):
        streams.append("data")
    if any(r.kind == AccessKind.INSTR_FETCH for r in records):
        streams.append("instr")
    return streams


def _cmd_characterize(args) -> int:
    cfg = _load_config(args)
    records = _load_records(cfg)
    clock = cfg.hierarchy.clock_hz
    out = cfg.out_dir

    ratio = chz.read_write_ratio(records)
    rows = [
        [f"core{core}", ld, st, frac]
        for core, (ld, st, frac) in sorted(ratio.per_core.items())
    ]
    rows.append(["aggregate", ratio.loads, ratio.stores, ratio.read_fraction])
    _write_csv(os.path.join(out, "rwratio.csv"), ["scope", "loads", "stores", "read_fraction"], rows)

    unit_cfg_for = {"data": cfg.hierarchy.l1d[0], "instr": cfg.hierarchy.l1i[0]}
    life_rows = []
    pers_rows = []
    curve_rows = []
    for stream in _streams_present(records):
        unit_cfg = unit_cfg_for[stream]
        hist = chz.block_lifetimes(records, unit_cfg, clock_hz=clock, stream=stream)
        labels = hist.bucket_labels(hist.bucket_edges)
        edges = (None,) + hist.bucket_edges + (None,)
        for measure, counts, quants in (
            ("fill_to_last_hit", hist.counts_last_hit, hist.quantiles_last_hit),
            ("fill_to_eviction", hist.counts_fill_to_eviction, hist.quantiles_fill_to_eviction),
        ):
            for i, (label, count) in enumerate(zip(labels, counts)):
                life_rows.append([stream, measure, "bucket", label, edges[i], edges[i + 1], count])
            for q in ("p50", "p90", "p99"):
                life_rows.append([stream, measure, "quantile", q, None, None, quants[q]])
            life_rows.append([stream, measure, "total", "residencies", None, None, hist.total_residencies])

        pers = chz.persistence(records, unit_cfg, clock_hz=clock, stream=stream)
        for thd in sorted(pers.fractions):
            pers_rows.append(
                [stream, thd, pers.reloaded_counts[thd], pers.unique_blocks, pers.total_fills, pers.fractions[thd]]
            )

        for pt in chz.expiration_curve(records, unit_cfg, cfg.retentions, clock_hz=clock, stream=stream):
            curve_rows.append(
                [stream, pt.retention_s, pt.expiration_misses, pt.total_misses, pt.miss_ratio_vs_unbounded]
            )

    _write_csv(
        os.path.join(out, "lifetimes.csv"),
        ["stream", "measure", "row_type", "label", "lo_s", "hi_s", "value"],
        life_rows,
    )
    _write_csv(
        os.path.join(out, "persistence.csv"),
        ["stream", "thd", "persistent_blocks", "unique_blocks", "total_fills", "fraction"],
        pers_rows,
    )
    _write_csv(
        os.path.join(out, "expiration_curve.csv"),
        ["stream", "retention_s", "expiration_misses", "total_misses", "miss_ratio_vs_unbounded"],
        curve_rows,
    )
    return 0


def _cmd_sweep(args) -> int:
    cfg = _load_config(args)
    table = _load_table(cfg)
    records = _load_records(cfg)
    result = explore.sweep(
        records, cfg.hierarchy, cfg.retentions, cfg.objective, table, jobs=args.jobs
    )
    header = [
        "technology",
        "retention_s",
        "cache_energy_J",
        "exec_time_s",
        "normalized_energy",
        "normalized_time",
        "total_misses",
        "expiration_misses",
        "mem_accesses",
        "best",
    ]
    rows = []
    for e in result.entries:
        rows.append(
            [
                e.technology,
                e.retention_s,
                e.report.cache_energy_j,
                e.report.exec_time_s,
                e.normalized_energy,
                e.normalized_time,
                e.report.total_misses(),
                e.report.total_expiration_misses(),
                e.report.mem_accesses,
                e.retention_s == result.best_retention,
            ]
        )
    _write_csv(os.path.join(cfg.out_dir, "sweep.csv"), header, rows)
    return 0


def _cmd_specialize(args) -> int:
    cfg = _load_config(args)
    table = _load_table(cfg)
    records = _load_records(cfg)
    result = explore.specialize(
        records,
        cfg.hierarchy,
        cfg.retentions,
        cfg.base_retention,
        sample_len=min(cfg.profile_len, len(records)),
        objective=cfg.objective,
        tech_table=table,
        jobs=args.jobs,
    )
    header = ["row_type", "retention_s", "sample_value", "full_value", "savings_vs_base"]
    rows = []
    for r in sorted(result.sample_values):
        rows.append(["candidate", r, result.sample_values[r], None, None])
    rows.append(["chosen", result.chosen_retention, result.sample_values[result.chosen_retention], result.full_value_chosen, result.savings_vs_base])
    rows.append(["base", result.base_retention, None, result.full_value_base, 0.0])
    _write_csv(os.path.join(cfg.out_dir, "specialize.csv"), header, rows)
    return 0


def _cmd_asym(args) -> int:
    cfg = _load_config(args)
    table = _load_table(cfg)
    records = _load_records(cfg)
    if not cfg.core_retentions:
        raise ConfigError("asym requires core_retentions in the [experiment] section")
    by_core: dict[int, list] = {}
    for rec in records:
        by_core.setdefault(rec.core_id, []).append(rec)
    threads = [by_core[c] for c in sorted(by_core)]
    result = explore.assign_asymmetric(
        threads,
        cfg.hierarchy,
        cfg.core_retentions,
        profile_len=cfg.profile_len,
        objective=cfg.objective,
        tech_table=table,
        jobs=args.jobs,
    )
    header = ["row_type", "thread", "core", "retention_s", "value"]
    rows = []
    for t, row in enumerate(result.cost_matrix):
        for c, v in enumerate(row):
            rows.append(["profiled_cost", t, c, result.core_retentions[c], v])
    for t in sorted(result.assignment):
        c = result.assignment[t]
        rows.append(["assignment", t, c, result.core_retentions[c], None])
    for r in sorted(result.homogeneous_totals):
        rows.append(["homogeneous_total", None, None, r, result.homogeneous_totals[r]])
    rows.append(["asymmetric_total", None, None, None, result.full_asym_total])
    rows.append(
        ["best_homogeneous", None, None, result.best_homogeneous_retention, result.best_homogeneous_total]
    )
    rows.append(["savings_vs_best_homogeneous", None, None, None, result.savings_vs_best_homogeneous])
    _write_csv(os.path.join(cfg.out_dir, "asym.csv"), header, rows)
    return 0


def _build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="experiment config file")
    common.add_argument("--tech-table", help="technology parameter table (overrides config)")
    common.add_argument("--trace", help="trace file (overrides config input)")
    common.add_argument("--out-dir", help="report output directory (overrides config)")
    common.add_argument("--jobs", type=int, default=1, help="parallel simulation workers")
    common.add_argument("--seed", type=int, help="synthetic trace seed override")

    parser = argparse.ArgumentParser(prog="sttsim", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("gen-trace", parents=[common], help="generate a synthetic trace")
    gen.add_argument("--num-cores", type=int, default=1)
    gen.add_argument("--accesses-per-core", type=int, default=1000)
    gen.add_argument("--read-fraction", type=float, default=0.67)
    gen.add_argument("--working-set-blocks", type=int, default=256)
    gen.add_argument("--line-size", type=int, default=64)
    gen.add_argument("--gap", default="constant:10", help="constant:<cycles> or loguniform:<lo>:<hi>")
    gen.add_argument("--pattern", default="sequential", help="sequential, uniform, or zipf:<s>")
    gen.add_argument("--out", required=True, help="output trace path")
    gen.set_defaults(func=_cmd_gen_trace)

    for name, func, help_text in (
        ("simulate", _cmd_simulate, "run one hierarchy simulation"),
        ("characterize", _cmd_characterize, "read-write ratio, lifetimes, persistence, expiration curve"),
        ("sweep", _cmd_sweep, "retention sweep with SRAM normalization"),
        ("specialize", _cmd_specialize, "pick a retention by sampled profiling"),
        ("asym", _cmd_asym, "asymmetric-retention thread assignment"),
    ):
        p = sub.add_parser(name, parents=[common], help=help_text)
        p.set_defaults(func=func)
    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except SttsimError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
