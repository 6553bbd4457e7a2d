"""Codegree control for bipartite graphs.

Two operations: a constructive counting argument that extracts a complete
bipartite K_{k,k} from a dense enough side, and the greedy one-pass edge
deletion that caps all A-side codegrees at k * m^(1-1/k) while keeping at
least a 1/(k+1) fraction of the edges on K_{k,k}-free inputs.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

from .errors import DegreeCapViolatedError, PreconditionViolatedError
from .graph import BipartiteGraph, SubgraphWitness, canonical_edge


@dataclass(frozen=True)
class CleanupReport:
    """What the cleaning pass did.

    ``rounds`` counts processing steps that deleted at least one edge;
    ``resulting_codegree_bound`` is the cap k * m^(1-1/k) the output obeys.
    """

    deleted_edges: int
    rounds: int
    resulting_codegree_bound: float


def dense_side_kkk_extract(h: BipartiteGraph, k: int) -> SubgraphWitness:
    """Extract a K_{k,k} from a bipartite graph with a dense A side.

    Requires every A-side degree to be at least k * |B|^(1-1/k) and more
    than k*|B| edges; under those hypotheses a k-subset of A with k common
    neighbors must exist, and counting k-subsets of B-neighborhoods finds
    one. Degree hypothesis is compared exactly via d^k >= k^k * |B|^(k-1).
    """
    if k < 1:
        raise ValueError("k must be positive")
    t_size = len(h.side_b)
    rhs = (k**k) * (t_size ** (k - 1))
    for u in sorted(h.side_a):
        if h.graph.degree(u) ** k < rhs:
            raise PreconditionViolatedError(
                f"A-side degree {h.graph.degree(u)} at vertex {u} is below "
                f"k*|B|^(1-1/k) (exact test {h.graph.degree(u)}^{k} < {rhs})"
            )
    if h.edge_count <= k * t_size:
        raise PreconditionViolatedError(
            f"edge count {h.edge_count} is not above k*|B| = {k * t_size}"
        )

    hits: dict[tuple[int, ...], list[int]] = {}
    for v in sorted(h.side_b):
        nbrs = h.graph.neighbors(v)
        if len(nbrs) < k:
            continue
        for subset in combinations(nbrs, k):
            got = hits.setdefault(subset, [])
            got.append(v)
            if len(got) == k:
                verts = frozenset(subset) | frozenset(got)
                edges = frozenset(
                    canonical_edge(u, w) for u in subset for w in got
                )
                return SubgraphWitness(verts, edges, k)
    raise AssertionError(
        "hypotheses hold but no K_{k,k} found; the counting bound excludes this"
    )


def codegree_clean(
    g: BipartiteGraph, k: int, m: int, *, order: tuple[int, ...] | None = None
) -> tuple[BipartiteGraph, CleanupReport]:
    """Delete edges until all A-side codegrees are at most k * m^(1-1/k).

    Processes A-vertices in ascending label order (overridable): at step i
    with T the current neighborhood of u_i, every later vertex whose
    codegree with u_i exceeds the cap loses all its edges into T. The cap
    holds unconditionally on the output; the retention bound
    e(out) >= e(in)/(k+1) holds whenever the input is K_{k,k}-free.
    """
    if k < 1:
        raise ValueError("k must be positive")
    if m < 1:
        raise ValueError("m must be positive")
    for u in _side_a_sorted(g):
        if g.graph.degree(u) > m:
            raise DegreeCapViolatedError(
                f"A-side degree {g.graph.degree(u)} at vertex {u} exceeds m={m}"
            )
    bound = k * m ** (1.0 - 1.0 / k)
    seq = order if order is not None else _side_a_sorted(g)
    if sorted(seq) != sorted(g.side_a):
        raise ValueError("order must enumerate side_a exactly once")

    # Codegrees never exceed |B|, so a cap at least that large cannot bind.
    if bound >= len(g.side_b):
        return g, CleanupReport(0, 0, bound)

    masks = {u: 0 for u in g.side_a}
    for u, v in g.graph.edges:
        if u in masks:
            masks[u] |= 1 << v
        else:
            masks[v] |= 1 << u

    deleted = 0
    rounds = 0
    for i, u in enumerate(seq):
        t_mask = masks[u]
        if t_mask == 0:
            continue
        step_deleted = 0
        for u2 in seq[i + 1 :]:
            overlap = masks[u2] & t_mask
            if overlap.bit_count() > bound:
                step_deleted += overlap.bit_count()
                masks[u2] &= ~t_mask
        if step_deleted:
            deleted += step_deleted
            rounds += 1

    kept = []
    for u in sorted(g.side_a):
        mask = masks[u]
        while mask:
            low = mask & -mask
            v = low.bit_length() - 1
            kept.append(canonical_edge(u, v))
            mask ^= low
    out = g.spanning(kept)
    assert out.edge_count == g.edge_count - deleted
    return out, CleanupReport(deleted, rounds, bound)


def _side_a_sorted(g: BipartiteGraph) -> tuple[int, ...]:
    return tuple(sorted(g.side_a))
