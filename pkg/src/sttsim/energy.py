"""Energy model over per-(technology, retention) parameter tables.

The table stands in for a device-level modeling pipeline: each row gives
per-access read/write energies, leakage power, and read/write latencies
for one technology point.  Values are inputs, never derived here; the
bundled sample table is illustrative and documented as such.

Table file format, one row per line::

    <tech:SRAM|STTRAM> <retention_s:float|-> <e_read_J> <e_write_J> <p_leak_W> <t_read_cycles:int> <t_write_cycles:int>

`-` retention marks the SRAM row; `#` begins a comment.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from importlib import resources
from typing import NamedTuple

from .cache import Technology
from .errors import ConfigError

SAMPLE_TABLE_RESOURCE = "tech_table_sample.txt"


@dataclass(frozen=True)
class TechParams:
    technology: Technology
    retention_time: float | None
    e_read: float
    e_write: float
    p_leak: float
    t_read: int
    t_write: int

    def __post_init__(self) -> None:
        for field in ("e_read", "e_write", "p_leak", "t_read", "t_write"):
            if getattr(self, field) < 0:
                raise ConfigError(f"tech parameter {field} must be >= 0")
        if self.technology is Technology.STTRAM and (self.retention_time is None or self.retention_time <= 0):
            raise ConfigError("STTRAM tech params require retention_time > 0")


class EnergyBreakdown(NamedTuple):
    dynamic_read: float
    dynamic_write: float
    leakage: float
    total: float


class TechTable:
    """Lookup of TechParams keyed by (technology, retention)."""

    def __init__(self, entries: list[TechParams]) -> None:
        self._by_key: dict[tuple[Technology, float | None], TechParams] = {}
        for p in entries:
            key = (p.technology, p.retention_time if p.technology is Technology.STTRAM else None)
            if key in self._by_key:
                raise ConfigError(f"duplicate tech table entry for ({key[0].value}, {key[1]})")
            self._by_key[key] = p
        self._warn_nonmonotone()

    def _warn_nonmonotone(self) -> None:
        stt = sorted(
            (p for p in self._by_key.values() if p.technology is Technology.STTRAM),
            key=lambda p: p.retention_time,
        )
        for a, b in zip(stt, stt[1:]):
            if b.e_write < a.e_write or b.t_write < a.t_write:
                warnings.warn(
                    f"tech table: write cost decreases from retention {a.retention_time:g}s "
                    f"to {b.retention_time:g}s; longer retention is expected to cost more",
                    stacklevel=3,
                )

    def lookup(self, technology: Technology, retention_time: float | None) -> TechParams:
        key = (technology, retention_time if technology is Technology.STTRAM else None)
        try:
            return self._by_key[key]
        except KeyError:
            raise ConfigError(
                f"tech table has no entry for ({technology.value}, "
                f"{'-' if key[1] is None else format(key[1], 'g')})"
            ) from None

    def retentions(self) -> list[float]:
        return sorted(k[1] for k in self._by_key if k[0] is Technology.STTRAM)

    def __len__(self) -> int:
        return len(self._by_key)


def _parse_row(fields: list[str], where: str) -> TechParams:
    tech_text = fields[0].upper()
    if tech_text not in ("SRAM", "STTRAM"):
        raise ConfigError(f"{where}: unknown technology {fields[0]!r}")
    tech = Technology[tech_text]
    if fields[1] == "-":
        retention = None
        if tech is Technology.STTRAM:
            raise ConfigError(f"{where}: STTRAM row requires a retention time")
    else:
        retention = float(fields[1])
    return TechParams(
        technology=tech,
        retention_time=retention,
        e_read=float(fields[2]),
        e_write=float(fields[3]),
        p_leak=float(fields[4]),
        t_read=int(fields[5]),
        t_write=int(fields[6]),
    )


def load_tech_table(path: str) -> TechTable:
    """Parse a tech table file; duplicate keys and negative values are errors."""
    entries = []
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            stripped = line.strip()
            if not stripped or stripped.startswith("#"):
                continue
            fields = stripped.split()
            if len(fields) != 7:
                raise ConfigError(f"{path}:{lineno}: expected 7 fields, got {len(fields)}")
            try:
                entries.append(_parse_row(fields, f"{path}:{lineno}"))
            except ValueError:
                raise ConfigError(f"{path}:{lineno}: malformed numeric field") from None
    return TechTable(entries)


def sample_tech_table() -> TechTable:
    """Load the bundled illustrative table (not measured device data)."""
    text = resources.files("sttsim.data").joinpath(SAMPLE_TABLE_RESOURCE).read_text()
    entries = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        entries.append(_parse_row(stripped.split(), f"<sample>:{lineno}"))
    return TechTable(entries)


def unit_energy(params: TechParams, counters, wall_time: float) -> EnergyBreakdown:
    """Energy of one unit from its counters and the wall-clock duration.

    `counters` needs read_hits, write_hits, fills, and writebacks
    attributes.  Dynamic reads cover read hits plus the array reads that
    emit writebacks of dirty evicted blocks; dynamic writes cover write
    hits plus fills.
    """
    if wall_time < 0:
        raise ValueError("wall_time must be >= 0")
    dynamic_read = params.e_read * (counters.read_hits + counters.writebacks)
    dynamic_write = params.e_write * (counters.write_hits + counters.fills)
    leakage = params.p_leak * wall_time
    return EnergyBreakdown(dynamic_read, dynamic_write, leakage, dynamic_read + dynamic_write + leakage)
