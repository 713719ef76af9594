"""Growing a Konig-Egervary subgraph of a general graph.

Seed with a bipartite subgraph around a matching, then examine the leftover
same-side edges one by one using the current reduced solution graph.  The
minimum cover size never moves; whatever survives satisfies cover = matching.
"""

import vcspace as v


def walk(name, g):
    state = v.bipartite_seed(g)
    print(f"{name}: n={g.node_count} m={g.edge_count}, seed keeps "
          f"{len(state.accepted)} edges, {len(state.pending)} pending, "
          f"energy {state.rsg.min_cover_size}")
    for edge in state.pending:
        before = state.rsg.state_of(edge[0]), state.rsg.state_of(edge[1])
        state = v.grow_step(state, edge)
        verdict = "discarded" if edge in state.discarded else "accepted"
        print(f"  edge {edge} with end states "
              f"({before[0].name.lower()}, {before[1].name.lower()}): {verdict}")
    print(f"  result: {len(state.accepted)} edges kept, "
          f"{len(state.discarded)} discarded, "
          f"{state.contraction_freezes} contraction freezes")
    print(f"  certificate: {state.certificate_line()}")
    print()
    return state


# the odd cycles: exactly one edge must go
walk("triangle K3", v.Graph(3, [(0, 1), (1, 2), (0, 2)]))
walk("pentagon C5", v.Graph(5, [(i, (i + 1) % 5) for i in range(5)]))

# bipartite input: nothing to do
g_bip, _ = v.generate_random_bipartite(v.EnsembleParams(8, 6, 1.5, 3))
walk("random bipartite", g_bip)

# a denser general graph; the order of examination can change what survives
g = v.generate_random_graph(16, 0.3, 11)
lex = walk("random graph, lexicographic order", g)
shuffled = v.grow_all(g, seed=99)
print(f"same graph, shuffled order: kept {len(shuffled.accepted)} edges "
      f"(vs {len(lex.accepted)}), certificate {shuffled.certificate_line()}")
print("every output is Konig-Egervary; which edges survive may differ")
