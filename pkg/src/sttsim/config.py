"""Experiment configuration files.

A config is a flat sectioned key-value file (INI syntax).  Recognized
sections and keys, all optional unless marked required:

[hierarchy]
    num_cores = 4                     ; default 1
    clock_hz = 1.9e9
    mem_latency_cycles = 100
    mem_energy_per_access_j = 2e-11

[l1i] / [l1d] / [l2]
    size_bytes = 32768                ; l1 default 32KB, l2 default 2MB
    associativity = 4                 ; l2 default 16
    line_size_bytes = 64
    technology = STTRAM               ; SRAM or STTRAM
    retention_s = 1e-3                ; required for STTRAM
    counter_states = 4
    refresh_on_read = false
    An [l2] section enables the shared L2; omit it for single-level runs.

[input]                                ; exactly one of trace / synthetic
    trace = path/to/file.trace         ; relative paths resolve from the config file

[synthetic]
    seed = 1
    num_cores =                        ; defaults to hierarchy num_cores
    accesses_per_core = 100000
    read_fraction = 0.67
    working_set_blocks = 1024
    line_size_bytes = 64
    gap = constant:20                  ; or loguniform:<lo>:<hi>
    pattern = zipf:1.2                 ; or sequential / uniform

[experiment]
    retentions = 1e-6 1e-5 1e-4 1e-3 1e-2 1e-1
    objective = energy                 ; energy, time, or edp
    profile_len = 10000
    base_retention = 1e-3              ; specialize baseline
    core_retentions = 1e-3 1e-2 1e-1 1e-3   ; asym per-core retentions
    tech_table = path/to/table.txt     ; default: bundled illustrative table
    out_dir = reports
"""

from __future__ import annotations

import configparser
import os
from dataclasses import dataclass

from .cache import CacheUnitConfig, Technology
from .errors import ConfigError
from .explore import Objective
from .hierarchy import HierarchyConfig
from .trace import SyntheticTraceSpec, parse_gap_spec, parse_pattern_spec

DEFAULT_RETENTIONS = (1e-6, 1e-5, 1e-4, 1e-3, 1e-2, 1e-1)


@dataclass
class ExperimentConfig:
    hierarchy: HierarchyConfig
    trace_path: str | None
    synthetic: SyntheticTraceSpec | None
    retentions: list[float]
    objective: Objective
    profile_len: int
    base_retention: float
    core_retentions: list[float]
    tech_table_path: str | None
    out_dir: str


def _get(section, key, conv, default):
    if section is None or key not in section:
        return default
    raw = section[key]
    try:
        if conv is bool:
            lowered = raw.strip().lower()
            if lowered in ("1", "true", "yes", "on"):
                return True
            if lowered in ("0", "false", "no", "off"):
                return False
            raise ValueError(raw)
        return conv(raw)
    except ValueError:
        raise ConfigError(f"bad value {raw!r} for key {key!r}") from None


def _unit_config(section, defaults: dict) -> CacheUnitConfig:
    tech_text = _get(section, "technology", str, defaults.get("technology", "SRAM")).upper()
    if tech_text not in ("SRAM", "STTRAM"):
        raise ConfigError(f"technology must be SRAM or STTRAM, got {tech_text!r}")
    return CacheUnitConfig(
        size_bytes=_get(section, "size_bytes", int, defaults["size_bytes"]),
        associativity=_get(section, "associativity", int, defaults["associativity"]),
        line_size_bytes=_get(section, "line_size_bytes", int, defaults["line_size_bytes"]),
        technology=Technology[tech_text],
        retention_time=_get(section, "retention_s", float, defaults.get("retention_s")),
        counter_states=_get(section, "counter_states", int, 4),
        refresh_on_read=_get(section, "refresh_on_read", bool, False),
    )


L1_DEFAULTS = {"size_bytes": 32 * 1024, "associativity": 4, "line_size_bytes": 64}
L2_DEFAULTS = {"size_bytes": 2 * 1024 * 1024, "associativity": 16, "line_size_bytes": 64}


def load_experiment_config(path: str) -> ExperimentConfig:
    parser = configparser.ConfigParser(inline_comment_prefixes=(";", "#"))
    try:
        with open(path, "r", encoding="utf-8") as fh:
            parser.read_file(fh)
    except (configparser.Error, OSError) as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
    base_dir = os.path.dirname(os.path.abspath(path))

    def section(name):
        return parser[name] if parser.has_section(name) else None

    hier_sec = section("hierarchy")
    num_cores = _get(hier_sec, "num_cores", int, 1)
    hierarchy = HierarchyConfig(
        num_cores=num_cores,
        l1i=_unit_config(section("l1i"), L1_DEFAULTS),
        l1d=_unit_config(section("l1d"), L1_DEFAULTS),
        l2=_unit_config(section("l2"), L2_DEFAULTS) if parser.has_section("l2") else None,
        clock_hz=_get(hier_sec, "clock_hz", float, 1.9e9),
        mem_latency_cycles=_get(hier_sec, "mem_latency_cycles", int, 100),
        mem_energy_per_access=_get(hier_sec, "mem_energy_per_access_j", float, 2.0e-11),
    )

    input_sec = section("input")
    trace_path = _get(input_sec, "trace", str, None)
    if trace_path is not None and not os.path.isabs(trace_path):
        trace_path = os.path.join(base_dir, trace_path)
    synth_sec = section("synthetic")
    synthetic = None
    if synth_sec is not None:
        synthetic = SyntheticTraceSpec(
            seed=_get(synth_sec, "seed", int, 1),
            num_cores=_get(synth_sec, "num_cores", int, num_cores),
            accesses_per_core=_get(synth_sec, "accesses_per_core", int, 100_000),
            read_fraction=_get(synth_sec, "read_fraction", float, 0.67),
            working_set_blocks=_get(synth_sec, "working_set_blocks", int, 1024),
            line_size_bytes=_get(synth_sec, "line_size_bytes", int, 64),
            gap=parse_gap_spec(_get(synth_sec, "gap", str, "constant:20")),
            pattern=parse_pattern_spec(_get(synth_sec, "pattern", str, "uniform")),
        )
        synthetic.validate()
    if (trace_path is None) == (synthetic is None):
        raise ConfigError("config must provide exactly one of [input] trace or a [synthetic] section")

    exp_sec = section("experiment")
    retentions_text = _get(exp_sec, "retentions", str, None)
    if retentions_text is None:
        retentions = list(DEFAULT_RETENTIONS)
    else:
        try:
            retentions = [float(tok) for tok in retentions_text.split()]
        except ValueError:
            raise ConfigError(f"bad retentions list {retentions_text!r}") from None
    if not retentions or any(not r > 0 for r in retentions):
        raise ConfigError("retentions must be a non-empty list of positive durations")
    if len(set(retentions)) != len(retentions):
        raise ConfigError("duplicate values in retentions")

    objective_text = _get(exp_sec, "objective", str, "energy").lower()
    try:
        objective = Objective(objective_text)
    except ValueError:
        raise ConfigError(f"objective must be energy, time, or edp, got {objective_text!r}") from None

    core_rets_text = _get(exp_sec, "core_retentions", str, None)
    if core_rets_text is None:
        core_retentions = []
    else:
        try:
            core_retentions = [float(tok) for tok in core_rets_text.split()]
        except ValueError:
            raise ConfigError(f"bad core_retentions list {core_rets_text!r}") from None

    tech_table_path = _get(exp_sec, "tech_table", str, None)
    if tech_table_path is not None and not os.path.isabs(tech_table_path):
        tech_table_path = os.path.join(base_dir, tech_table_path)

    out_dir = _get(exp_sec, "out_dir", str, "reports")
    if not os.path.isabs(out_dir):
        out_dir = os.path.join(base_dir, out_dir)

    return ExperimentConfig(
        hierarchy=hierarchy,
        trace_path=trace_path,
        synthetic=synthetic,
        retentions=sorted(retentions),
        objective=objective,
        profile_len=_get(exp_sec, "profile_len", int, 10_000),
        base_retention=_get(exp_sec, "base_retention", float, 1e-3),
        core_retentions=core_retentions,
        tech_table_path=tech_table_path,
        out_dir=out_dir,
    )
