"""
Workload characterization for retention sizing
==============================================

How long do blocks actually need to stay in the cache?  Block lifetimes,
block persistence, and the expiration-miss curve across retention times
answer that, and together they dictate the retention time a workload wants.
"""

from sttsim import (
    CacheUnitConfig,
    LogUniformGap,
    SyntheticTraceSpec,
    Technology,
    Zipf,
    block_lifetimes,
    expiration_curve,
    generate_trace,
    persistence,
)

spec = SyntheticTraceSpec(
    seed=7,
    num_cores=1,
    accesses_per_core=40_000,
    read_fraction=0.7,
    working_set_blocks=1024,
    gap=LogUniformGap(100, 200_000),
    pattern=Zipf(1.1),
)
trace = generate_trace(spec)
l1d = CacheUnitConfig(32 * 1024, 4, 64, Technology.SRAM)

# Lifetimes: how long a block must remain resident to serve its hits,
# measured fill-to-last-hit on an unbounded-retention (SRAM-mode) run.
hist = block_lifetimes(trace, l1d)
labels = hist.bucket_labels(hist.bucket_edges)
print("block lifetime histogram (fill to last hit):")
for label, count in zip(labels, hist.counts_last_hit):
    if count:
        print(f"  {label:>14}: {count}")
print(f"  p50={hist.quantiles_last_hit['p50']:.2e}s p99={hist.quantiles_last_hit['p99']:.2e}s")

# Persistence: the fraction of blocks reloaded at least thd times after
# their first eviction. Skewed mobile-style data caches drop off sharply.
report = persistence(trace, l1d)
print("\npersistent block fractions:")
for thd, frac in report.fractions.items():
    print(f"  thd >= {thd}: {100 * frac:.1f}%")

# The expiration-miss curve across the retention sweep: misses fall as the
# retention time grows toward the block lifetimes.
print("\nexpiration misses by retention:")
for pt in expiration_curve(trace, l1d, [1e-6, 1e-5, 1e-4, 1e-3, 1e-2, 1e-1]):
    print(f"  {pt.retention_s:>6g}s: {pt.expiration_misses:>7} expiration misses"
          f" ({pt.total_misses} total)")
