"""Naive reference cache simulator used to cross-check the real one.

Deliberately independent of the package implementation: blocks live in
per-set dicts keyed by address, exact reset timestamps are kept per
block, and retention ticks are fired eagerly one at a time, incrementing
every valid block's counter and evicting blocks whose counter reaches N.
No expiry deadlines are precomputed anywhere.
"""


class OracleCache:
    def __init__(self, num_sets, assoc, line_size, retention=None, counter_states=4,
                 refresh_on_read=False):
        self.num_sets = num_sets
        self.assoc = assoc
        self.line_size = line_size
        self.n_states = counter_states
        self.refresh_on_read = refresh_on_read
        self.use_expiry = retention is not None
        self.period = retention / counter_states if retention is not None else None
        self.sets = [dict() for _ in range(num_sets)]
        self.ledger = {}  # addr -> 'resident' | 'repl' | 'exp'
        self.ticks_fired = 0
        self.seq = 0
        self.expired_events = []  # (addr, dirty, time)

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

    def _advance(self, now):
        while (self.ticks_fired + 1) * self.period <= now:
            self.ticks_fired += 1
            t = self.ticks_fired * self.period
            for s in self.sets:
                for addr in list(s):
                    entry = s[addr]
                    entry["ticks"] += 1
                    if entry["ticks"] >= self.n_states:
                        dirty = entry["dirty"]
                        del s[addr]
                        self.ledger[addr] = "exp"
                        self.evictions_expiration += 1
                        if dirty:
                            self.writebacks += 1
                        self.expired_events.append((addr, dirty, t))

    def access(self, addr, is_write, now):
        """Returns (hit, miss_class, writeback_issued, victim_address)."""
        if self.use_expiry:
            self._advance(now)
        self.accesses += 1
        self.seq += 1
        s = self.sets[(addr // self.line_size) % self.num_sets]
        if addr in s:
            entry = s[addr]
            entry["lru"] = self.seq
            if is_write:
                self.write_hits += 1
                entry["dirty"] = True
                entry["ticks"] = 0
            else:
                self.read_hits += 1
                if self.refresh_on_read:
                    entry["ticks"] = 0
            return (True, None, False, None)

        prior = self.ledger.get(addr)
        if prior is None:
            miss_class = "compulsory"
            self.miss_compulsory += 1
        elif prior == "repl":
            miss_class = "replacement"
            self.miss_replacement += 1
        else:
            miss_class = "expiration"
            self.miss_expiration += 1

        writeback = False
        victim = None
        if len(s) >= self.assoc:
            victim = min(s, key=lambda a: s[a]["lru"])
            writeback = s[victim]["dirty"]
            del s[victim]
            self.ledger[victim] = "repl"
            self.evictions_replacement += 1
            if writeback:
                self.writebacks += 1
        s[addr] = {"dirty": is_write, "ticks": 0, "lru": self.seq}
        self.ledger[addr] = "resident"
        self.fills += 1
        return (False, miss_class, writeback, victim)
