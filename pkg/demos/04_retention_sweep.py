"""
Retention sweep normalized to SRAM
==================================

Simulate the same workload on an SRAM baseline and on STTRAM at each
retention time. The bulk of the saving over SRAM is leakage (the
normalized column sits near the leakage-power ratio of the tech table).
On top of that, short retentions pay for expiration refills while long
retentions write expensively, so the per-retention differences in the
last columns decide the best point.
"""

from sttsim import (
    CacheUnitConfig,
    HierarchyConfig,
    LogUniformGap,
    SyntheticTraceSpec,
    Technology,
    Zipf,
    generate_trace,
    sweep,
)

spec = SyntheticTraceSpec(
    seed=20,
    num_cores=1,
    accesses_per_core=60_000,
    read_fraction=0.95,
    working_set_blocks=400,
    gap=LogUniformGap(2_000, 8_000),
    pattern=Zipf(1.1),
)
trace = generate_trace(spec)

l1 = CacheUnitConfig(32 * 1024, 4, 64, Technology.SRAM)
template = HierarchyConfig(num_cores=1, l1i=l1, l1d=l1)

result = sweep(trace, template, [1e-6, 1e-5, 1e-4, 1e-3, 1e-2, 1e-1])
best_energy = result.entry_for(result.best_retention).report.cache_energy_j
print(f"{'config':>8} {'cache energy (J)':>17} {'norm E':>8} {'vs best':>12} {'exp misses':>10}")
for e in result.entries:
    label = "SRAM" if e.retention_s is None else f"{e.retention_s:g}s"
    delta = e.report.cache_energy_j - best_energy
    print(f"{label:>8} {e.report.cache_energy_j:>17.6e} {e.normalized_energy:>8.4f}"
          f" {delta * 1e9:>10.2f}nJ {e.report.total_expiration_misses():>10}")
print(f"\nbest retention by energy: {result.best_retention:g}s")
