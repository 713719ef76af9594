"""Maximum matching on bipartite graphs, plus a general-graph heuristic."""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from ._kernels import build_csr, has_augmenting_path, hopcroft_karp
from .graph import BipartitePartition, Graph


class InvalidPartitionError(ValueError):
    """The supplied bipartition does not two-color the graph's edges."""


@dataclass(frozen=True)
class Matching:
    """A set of node-disjoint edges, stored as a partner array.

    partner[u] is the matched neighbor of u, or -1; the array is an involution
    on matched nodes.
    """

    partner: np.ndarray

    @property
    def size(self) -> int:
        return int((self.partner >= 0).sum()) // 2

    @cached_property
    def pairs(self) -> list[tuple[int, int]]:
        out = []
        for u, v in enumerate(self.partner):
            if v >= 0 and u < v:
                out.append((int(u), int(v)))
        return out

    def is_matched(self, u: int) -> bool:
        return self.partner[u] >= 0

    def unmatched_nodes(self) -> np.ndarray:
        return np.flatnonzero(self.partner < 0)


def max_bipartite_matching(g: Graph, part: BipartitePartition) -> Matching:
    """Maximum-cardinality matching via layered augmenting-path phases.

    Deterministic for a fixed input: vertices are scanned in increasing id.
    By Konig's theorem the size equals the minimum vertex cover size of g.
    """
    if not part.is_valid_for(g):
        raise InvalidPartitionError("partition does not two-color all edges")
    left = part.side1_nodes()
    right = part.side2_nodes()
    n1, n2 = len(left), len(right)
    partner = np.full(g.node_count, -1, dtype=np.int32)
    if g.edge_count == 0 or n1 == 0 or n2 == 0:
        return Matching(partner)
    local = np.empty(g.node_count, dtype=np.int64)
    local[left] = np.arange(n1)
    local[right] = np.arange(n2)
    side = part.side_of
    u_glob = g.edges[:, 0].astype(np.int64)
    v_glob = g.edges[:, 1].astype(np.int64)
    swap = side[u_glob] == 1
    u_glob[swap], v_glob[swap] = v_glob[swap], u_glob[swap].copy()
    local_edges = np.stack([local[u_glob], n1 + local[v_glob]], axis=1)
    indptr, indices = build_csr(n1 + n2, local_edges)
    # restrict to the left->right direction; right-local ids start at n1
    match_l, match_r, _ = hopcroft_karp(indptr[: n1 + 1], indices - n1, n1, n2)
    for i in range(n1):
        if match_l[i] >= 0:
            u = int(left[i])
            v = int(right[match_l[i]])
            partner[u] = v
            partner[v] = u
    return Matching(partner)


def verify_matching(g: Graph, m: Matching) -> bool:
    """True iff m is a valid matching of g (disjoint pairs, edges exist)."""
    p = m.partner
    if len(p) != g.node_count:
        return False
    for u, v in enumerate(p):
        if v < 0:
            continue
        if v >= g.node_count or p[v] != u or u == v:
            return False
        if u < v and not g.has_edge(int(u), int(v)):
            return False
    return True


def matching_is_maximum_bipartite(g: Graph, part: BipartitePartition, m: Matching) -> bool:
    """Second-pass check: no augmenting path exists from any unmatched node."""
    if not verify_matching(g, m):
        return False
    left = part.side1_nodes()
    right = part.side2_nodes()
    n1, n2 = len(left), len(right)
    if g.edge_count == 0:
        return m.size == 0
    local = np.empty(g.node_count, dtype=np.int64)
    local[left] = np.arange(n1)
    local[right] = np.arange(n2)
    side = part.side_of
    u_glob = g.edges[:, 0].astype(np.int64)
    v_glob = g.edges[:, 1].astype(np.int64)
    swap = side[u_glob] == 1
    u_glob[swap], v_glob[swap] = v_glob[swap], u_glob[swap].copy()
    local_edges = np.stack([local[u_glob], n1 + local[v_glob]], axis=1)
    indptr, indices = build_csr(n1 + n2, local_edges)
    match_l = np.full(n1, -1, np.int32)
    match_r = np.full(n2, -1, np.int32)
    for u, v in m.pairs:
        lu, lv = (u, v) if side[u] == 0 else (v, u)
        match_l[local[lu]] = local[lv]
        match_r[local[lv]] = local[lu]
    return not has_augmenting_path(indptr[: n1 + 1], indices - n1, n1, n2,
                                   match_l, match_r)


def heuristic_max_matching(g: Graph) -> Matching:
    """Greedy augmenting-path matching for general graphs.

    Repeated Kuhn-style alternating DFS without blossom contraction, so the
    result can fall short of maximum on odd structures; callers that need a
    certificate must verify independently.
    """
    n = g.node_count
    partner = np.full(n, -1, dtype=np.int64)

    def try_augment(start: int) -> bool:
        # iterative alternating DFS over (free node, edge, matched continuation)
        visited = set()
        parent: dict[int, int] = {}

        stack = [start]
        visited.add(start)
        while stack:
            u = stack.pop()
            for v in sorted(int(x) for x in g.neighbors(u)):
                if v in visited:
                    continue
                visited.add(v)
                parent[v] = u
                w = partner[v]
                if w < 0:
                    # augment along parent chain: v is free
                    x = v
                    while True:
                        prev = parent[x]
                        nxt = partner[prev]
                        partner[prev] = x
                        partner[x] = prev
                        if nxt < 0:
                            return True
                        x = int(nxt)
                else:
                    visited.add(int(w))
                    parent[int(w)] = v  # matched edge hop
                    stack.append(int(w))
        return False

    improved = True
    while improved:
        improved = False
        for u in range(n):
            if partner[u] < 0 and len(g.neighbors(u)):
                if try_augment(u):
                    improved = True
    return Matching(partner.astype(np.int32))
