"""Set-associative write-back cache unit with optional retention expiration.

An STTRAM unit carries a per-block counter driven by a unit-global tick
clock of period retention_time / N.  A block whose counter receives N
ticks since its last reset is evicted just before its data would decay:
dirty blocks emit a writeback first.  The counter resets on fills and
write hits (writes re-magnetize the cells); read hits leave it running
unless refresh_on_read is enabled.

Ticks are applied lazily through per-block expiry deadlines kept in a
heap; observable outcomes are identical to firing every tick eagerly,
which the test suite checks against an independent eager simulator.
"""

from __future__ import annotations

import enum
import heapq
import math
from dataclasses import dataclass, replace
from typing import NamedTuple

from .errors import ConfigError


class Technology(enum.Enum):
    SRAM = "SRAM"
    STTRAM = "STTRAM"


class MissClass(enum.IntEnum):
    COMPULSORY = 0
    REPLACEMENT = 1
    EXPIRATION = 2


class EvictionCause(enum.IntEnum):
    """Last known state of a block address in a unit's eviction ledger."""

    NEVER_RESIDENT = 0
    RESIDENT = 1
    EVICTED_BY_REPLACEMENT = 2
    EVICTED_BY_EXPIRATION = 3


# ledger state -> class of the miss a subsequent reference takes
_MISS_CLASS_FOR_CAUSE = {
    EvictionCause.NEVER_RESIDENT: MissClass.COMPULSORY,
    EvictionCause.EVICTED_BY_REPLACEMENT: MissClass.REPLACEMENT,
    EvictionCause.EVICTED_BY_EXPIRATION: MissClass.EXPIRATION,
}


class AccessOutcome(NamedTuple):
    hit: bool
    miss_class: MissClass | None
    writeback_issued: bool
    victim_address: int | None


class ExpiredBlock(NamedTuple):
    address: int
    dirty: bool
    expire_time: float


_HIT = AccessOutcome(True, None, False, None)


@dataclass(frozen=True)
class CacheUnitConfig:
    """Geometry, technology, and retention parameters of one cache unit.

    size_bytes must equal num_sets * associativity * line_size_bytes with
    num_sets a power of two.  retention_time (seconds) is required for
    STTRAM and ignored for SRAM.  counter_states is the number of FSM
    states N of the per-block retention counter.
    """

    size_bytes: int
    associativity: int
    line_size_bytes: int
    technology: Technology = Technology.SRAM
    retention_time: float | None = None
    counter_states: int = 4
    replacement: str = "LRU"
    refresh_on_read: bool = False

    def __post_init__(self) -> None:
        if self.line_size_bytes < 1 or self.line_size_bytes & (self.line_size_bytes - 1):
            raise ConfigError("line_size_bytes must be a positive power of two")
        if self.associativity < 1:
            raise ConfigError("associativity must be >= 1")
        if self.size_bytes % (self.associativity * self.line_size_bytes):
            raise ConfigError("size_bytes must be a multiple of associativity * line_size_bytes")
        sets = self.num_sets
        if sets < 1 or sets & (sets - 1):
            raise ConfigError(f"num_sets must be a power of two, got {sets}")
        if self.replacement != "LRU":
            raise ConfigError(f"unsupported replacement policy {self.replacement!r}")
        if self.counter_states < 2:
            raise ConfigError("counter_states must be >= 2")
        if self.technology is Technology.STTRAM:
            if self.retention_time is None or not self.retention_time > 0:
                raise ConfigError("STTRAM requires retention_time > 0")

    @property
    def num_sets(self) -> int:
        return self.size_bytes // (self.associativity * self.line_size_bytes)

    @property
    def num_blocks(self) -> int:
        return self.size_bytes // self.line_size_bytes

    @property
    def counter_bits(self) -> int:
        """Modeled per-block counter overhead (2 bits for N=4)."""
        return math.ceil(math.log2(self.counter_states))

    @property
    def counter_overhead_bytes(self) -> float:
        """Total modeled storage overhead of the retention counters."""
        if self.technology is not Technology.STTRAM:
            return 0.0
        return self.counter_bits * self.num_blocks / 8


@dataclass
class BlockState:
    """Snapshot of one cache way, for inspection and tests."""

    tag: int | None
    valid: bool
    dirty: bool
    counter: int
    lru_rank: int


def reset_counter_on_refresh(block: BlockState) -> BlockState:
    """Return the block with its retention counter back in the initial state."""
    if not block.valid:
        raise ValueError("cannot refresh an invalid block")
    return replace(block, counter=0)


def tick_index(t: float, period: float) -> int:
    """Largest k >= 0 with k * period <= t, robust to float division rounding."""
    k = int(t / period)
    while (k + 1) * period <= t:
        k += 1
    while k > 0 and k * period > t:
        k -= 1
    return k


class EvictionLedger:
    """Tracks the last eviction cause per block-aligned address."""

    __slots__ = ("_states",)

    def __init__(self) -> None:
        self._states: dict[int, int] = {}

    def cause(self, address: int) -> EvictionCause:
        return EvictionCause(self._states.get(address, 0))

    def addresses(self) -> list[int]:
        return list(self._states)


class CacheUnit:
    """One mutable cache unit; single-owner, not safe for concurrent use."""

    def __init__(self, config: CacheUnitConfig, name: str = "unit") -> None:
        self.config = config
        self.name = name
        self.num_sets = config.num_sets
        self.assoc = config.associativity
        self._set_mask = self.num_sets - 1
        self._shift = config.line_size_bytes.bit_length() - 1
        self._line_mask = config.line_size_bytes - 1
        n = self.num_sets * self.assoc
        # parallel per-way arrays; tag None marks an invalid way
        self._tags: list[int | None] = [None] * n
        self._dirty = [False] * n
        self._lru = [0] * n
        self._reset_time = [0.0] * n
        self._gen = [0] * n
        self._seq = 0
        self.ledger = EvictionLedger()
        self._ledger_map = self.ledger._states

        self.has_expiry = config.technology is Technology.STTRAM
        if self.has_expiry:
            self.tick_period = config.retention_time / config.counter_states
        else:
            self.tick_period = math.inf
        self._heap: list[tuple[float, int, int]] = []
        self._backlog: list[ExpiredBlock] = []
        self.last_access_time = -math.inf
        self._refresh_on_read = config.refresh_on_read
        self._n_states = config.counter_states

        self.accesses = 0
        self.read_hits = 0
        self.write_hits = 0
        self.miss_compulsory = 0
        self.miss_replacement = 0
        self.miss_expiration = 0
        self.fills = 0
        self.writebacks = 0
        self.evictions_replacement = 0
        self.evictions_expiration = 0

    # -- counter / deadline arithmetic ------------------------------------

    def _deadline(self, reset_time: float) -> float:
        # the block expires at the Nth tick strictly after its reset
        return (tick_index(reset_time, self.tick_period) + self._n_states) * self.tick_period

    def _arm(self, way: int, now: float) -> None:
        self._reset_time[way] = now
        gen = self._gen[way] + 1
        self._gen[way] = gen
        heapq.heappush(self._heap, (self._deadline(now), gen, way))

    def counter_value(self, way: int, at: float) -> int:
        """Counter state of a valid way at time `at` (ticks since reset, capped)."""
        if not self.has_expiry:
            return 0
        ticks = tick_index(at, self.tick_period) - tick_index(self._reset_time[way], self.tick_period)
        return min(self._n_states - 1, max(0, ticks))

    # -- expiration --------------------------------------------------------

    def _drain_expired(self, now: float) -> None:
        heap = self._heap
        tags = self._tags
        gen = self._gen
        ledger = self._ledger_map
        dirty = self._dirty
        backlog = self._backlog
        while heap and heap[0][0] <= now:
            deadline, g, way = heapq.heappop(heap)
            if gen[way] != g:
                continue  # stale entry: the block was reset or replaced
            addr = tags[way]
            was_dirty = dirty[way]
            tags[way] = None
            gen[way] = g + 1
            ledger[addr] = 3
            self.evictions_expiration += 1
            if was_dirty:
                self.writebacks += 1
            backlog.append(ExpiredBlock(addr, was_dirty, deadline))

    def tick_expirations(self, now: float) -> list[ExpiredBlock]:
        """Apply all expirations due at or before `now`.

        Returns every block expired since the previous call, including any
        applied internally by access().  No-op for SRAM.
        """
        if self._heap and self._heap[0][0] <= now:
            self._drain_expired(now)
        out = self._backlog
        if out:
            self._backlog = []
            return out
        return []

    # -- access ------------------------------------------------------------

    def access(self, addr: int, is_write: bool, now: float) -> AccessOutcome:
        """One read or write of a block-aligned address at simulated time `now`.

        Expirations due at or before `now` are applied before the lookup,
        so a reference arriving after a block's deadline observes the
        expiration miss.
        """
        if addr & self._line_mask:
            raise ValueError(f"{self.name}: address {addr:#x} not aligned to {self._line_mask + 1}-byte line")
        if now < self.last_access_time:
            raise ValueError(f"{self.name}: time regression ({now} < {self.last_access_time})")
        self.last_access_time = now
        self.accesses += 1

        heap = self._heap
        if heap and heap[0][0] <= now:
            # expired blocks stay queued for the next tick_expirations() call
            self._drain_expired(now)

        sidx = (addr >> self._shift) & self._set_mask
        base = sidx * self.assoc
        tags = self._tags
        for way in range(base, base + self.assoc):
            if tags[way] == addr:
                self._seq += 1
                self._lru[way] = self._seq
                if is_write:
                    self.write_hits += 1
                    self._dirty[way] = True
                    if self.has_expiry:
                        self._arm(way, now)
                else:
                    self.read_hits += 1
                    if self._refresh_on_read and self.has_expiry:
                        self._arm(way, now)
                return _HIT

        # miss: classify from the ledger, pick a victim, allocate
        cause = self._ledger_map.get(addr, 0)
        if cause == 0:
            miss_class = MissClass.COMPULSORY
            self.miss_compulsory += 1
        elif cause == 2:
            miss_class = MissClass.REPLACEMENT
            self.miss_replacement += 1
        else:
            miss_class = MissClass.EXPIRATION
            self.miss_expiration += 1

        victim_way = -1
        lru = self._lru
        best = None
        for way in range(base, base + self.assoc):
            if tags[way] is None:
                victim_way = way
                break
            if best is None or lru[way] < best:
                best = lru[way]
                victim_way = way

        victim_addr = tags[victim_way]
        writeback = False
        if victim_addr is not None:
            self._ledger_map[victim_addr] = 2
            self.evictions_replacement += 1
            if self._dirty[victim_way]:
                writeback = True
                self.writebacks += 1

        tags[victim_way] = addr
        self._dirty[victim_way] = is_write
        self._seq += 1
        lru[victim_way] = self._seq
        self.fills += 1
        self._ledger_map[addr] = 1
        if self.has_expiry:
            self._arm(victim_way, now)
        return AccessOutcome(False, miss_class, writeback, victim_addr)

    # -- inspection ----------------------------------------------------------

    @property
    def hits(self) -> int:
        return self.read_hits + self.write_hits

    @property
    def misses(self) -> int:
        return self.miss_compulsory + self.miss_replacement + self.miss_expiration

    def block_state(self, set_index: int, way: int, at: float | None = None) -> BlockState:
        w = set_index * self.assoc + way
        tag = self._tags[w]
        when = self.last_access_time if at is None else at
        return BlockState(
            tag=tag,
            valid=tag is not None,
            dirty=self._dirty[w] if tag is not None else False,
            counter=self.counter_value(w, when) if tag is not None else 0,
            lru_rank=self._lru[w],
        )

    def resident_addresses(self) -> set[int]:
        return {t for t in self._tags if t is not None}
