"""
Asymmetric retention cores
==========================

Give each core a different L1 retention time and schedule threads to the
core whose retention best fits their reuse behavior, as judged by a short
profiling interval on every (thread, core) pair. A workload whose threads
cluster at different reuse gaps beats any single homogeneous retention.
"""

from sttsim import (
    AccessKind,
    AccessRecord,
    CacheUnitConfig,
    HierarchyConfig,
    Technology,
    assign_asymmetric,
)

CLOCK = 1.9e9
MS = 1e-3


def loop_thread(num_blocks, reuse_gap_s, duration_s, kind=AccessKind.LOAD):
    """Cycle over blocks so each one is re-referenced every reuse_gap_s."""
    gap = reuse_gap_s / num_blocks
    records, t, i = [], 0.0, 0
    while t < duration_s:
        records.append(AccessRecord(0, int(round(t * CLOCK)), kind, (i % num_blocks) * 64))
        t += gap
        i += 1
    return records


threads = [
    loop_thread(8, 0.5 * MS, 200 * MS),                      # hot reuse
    loop_thread(8, 3 * MS, 200 * MS),                        # medium reuse
    loop_thread(8, 30 * MS, 200 * MS),                       # cold reuse
    loop_thread(2, 0.1 * MS, 200 * MS, kind=AccessKind.STORE),  # write-heavy
]
core_retentions = [1e-3, 1e-2, 1e-1, 1e-3]

l1 = CacheUnitConfig(32 * 1024, 4, 64, Technology.SRAM)
template = HierarchyConfig(num_cores=1, l1i=l1, l1d=l1)

result = assign_asymmetric(threads, template, core_retentions, profile_len=400)

print("profiled cost matrix (J), rows = threads, cols = cores:")
for t, row in enumerate(result.cost_matrix):
    print(f"  t{t}: " + "  ".join(f"{v:.6e}" for v in row))
print("\nassignment:", {f"t{t}": f"core{c} ({core_retentions[c]:g}s)"
                        for t, c in result.assignment.items()})
for r, total in result.homogeneous_totals.items():
    print(f"homogeneous {r:g}s everywhere: {total:.8e} J")
print(f"asymmetric plan:            {result.full_asym_total:.8e} J")
saved = result.best_homogeneous_total - result.full_asym_total
print(f"savings vs best homogeneous ({result.best_homogeneous_retention:g}s): "
      f"{saved * 1e9:.1f} nJ ({100 * result.savings_vs_best_homogeneous:.4f}%)")
print("\nNote: desk-scale synthetic traces are far sparser than real access"
      "\nstreams, so constant leakage dwarfs the dynamic-energy differences"
      "\nthe assignment optimizes; denser traces widen the relative margin.")
