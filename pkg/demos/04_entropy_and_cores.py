"""Exact solution counting, cycle simplification and core entropy.

Counts are exact big integers: each unfrozen double pair is a binary choice
constrained by the single edges, alternating double/single cycles collapse to
super-pairs without changing the count, and whatever survives peeling is
counted by branching.
"""

import statistics

import vcspace as v

# an alternating hexagon: six nodes that mutually determine each other
g = v.Graph(6, [(i, (i + 1) % 6) for i in range(6)])
rsg = v.build_rsg_bipartite(g, v.check_bipartition(g))
simp = v.cycle_simplification(rsg)
print("alternating hexagon:")
print(f"  before: {rsg.host.node_count} nodes; "
      f"after simplification: {simp.rsg.host.node_count} super-nodes")
res = v.count_solutions(rsg)
print(f"  exact count S_n = {res.solution_count}, entropy h_s = {res.entropy:.4f}")

core = v.unfrozen_core(rsg)
print(f"  unfrozen core pairs: {core.pairs} -> S_c = "
      f"{v.count_core_solutions(rsg, core, g.node_count).core_count}")
print()

# ensembles: entropy falls with the mean degree while cores appear above e
N1 = N2 = 300
print(f"random bipartite, n={N1 + N2}, 30 instances per point:")
print(f"{'c':>5} {'h_s':>8} {'median h_c':>11} {'core frac':>10}")
for c in (0.5, 1.0, 1.5, 2.0):
    rows = [v.run_instance(N1, N2, c, 4000 + i) for i in range(30)]
    print(f"{c:5.1f} {statistics.fmean(r.h_s for r in rows):8.4f} "
          f"{statistics.median(r.h_c for r in rows):11.4f} "
          f"{statistics.fmean(r.unfrozen_core for r in rows):10.4f}")
for c in (3.0, 3.5, 4.0):
    rows = [v.run_instance(N1, N2, c, 4000 + i, entropy="core")
            for i in range(30)]
    print(f"{c:5.1f} {'-':>8} "
          f"{statistics.median(r.h_c for r in rows):11.4f} "
          f"{statistics.fmean(r.unfrozen_core for r in rows):10.4f}")

print()
print("above c = e the unfrozen core is extensive for a minority of")
print("instances, yet its own solution count stays tiny: the core pins")
print("almost everything (few clusters, low core entropy)")

# one representative count on a larger instance
row = v.run_instance(1000, 1000, 1.0, 7)
print(f"\nn=2000, c=1: S_n has {len(str(row.s_n))} decimal digits, "
      f"h_s = {row.h_s:.4f}")
