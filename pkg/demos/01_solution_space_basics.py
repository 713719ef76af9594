"""Reduced solution graphs on small examples.

Builds the exact solution-space encoding of minimum vertex covers for a few
tiny bipartite graphs and prints states, edge kinds and the full cover sets.
"""

import vcspace as v

STATE_CHAR = {v.NodeState.UNFROZEN: "unfrozen",
              v.NodeState.UNCOVERED_BACKBONE: "uncovered-backbone",
              v.NodeState.COVERED_BACKBONE: "covered-backbone"}


def show(name, g):
    part = v.check_bipartition(g)
    if isinstance(part, v.OddCycle):
        print(f"{name}: not bipartite (odd cycle {part.nodes}), "
              f"using the bipartite-core construction")
        rsg = v.build_rsg_bipartite_core(g)
    else:
        rsg = v.build_rsg_bipartite(g, part)
    print(f"{name}: n={g.node_count} m={g.edge_count} "
          f"min_cover={rsg.min_cover_size}")
    for u in range(g.node_count):
        print(f"  node {u}: {STATE_CHAR[rsg.state_of(u)]}")
    for a, b in rsg.host.edges:
        kind = rsg.edge_kind(int(a), int(b))
        print(f"  edge ({a},{b}): {kind.name.lower()}")
    covers = v.consistent_assignments(rsg)
    print(f"  all {len(covers)} minimum covers:",
          sorted(sorted(c) for c in covers))
    print()


# a single edge: both ends trade places freely (one mutual-determination)
show("single edge", v.Graph(2, [(0, 1)]))

# a path of three nodes: the center is forced into every cover
show("path P3", v.Graph(3, [(0, 1), (1, 2)]))

# an even cycle: fully unfrozen, two covers
show("cycle C4", v.Graph(4, [(0, 1), (1, 2), (2, 3), (0, 3)]))

# a triangle with a pendant edge is not bipartite, but its leaf-removal core
# is empty, so the solution space is still exact
show("triangle + pendant", v.Graph(4, [(0, 1), (0, 2), (1, 2), (0, 3)]))

# the same objects round-trip through the text formats
import tempfile, pathlib

tmp = pathlib.Path(tempfile.mkdtemp())
g = v.Graph(4, [(0, 1), (1, 2), (2, 3), (0, 3)])
v.write_graph(g, tmp / "c4.txt")
rsg = v.build_rsg_bipartite(g, v.check_bipartition(g))
v.write_rsg(rsg, tmp / "c4.rsg")
print("graph file:")
print((tmp / "c4.txt").read_text())
print("rsg file:")
print((tmp / "c4.rsg").read_text())
