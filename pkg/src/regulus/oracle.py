"""Exact desk-scale oracles: k-factors, k-regular subgraphs, K_{k,k}, certificates.

Everything here is exact on small graphs and honest about giving up:
budgeted searches either complete (a returned witness, or ``None`` after
exhausting the pruned space) or raise ``BudgetExceededError`` with partial
statistics. Every returned witness passes ``check_certificate``.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

from .errors import BudgetExceededError, UnknownVertexError
from .graph import BipartiteGraph, Graph, SubgraphWitness, canonical_edge, prune_min_degree
from .matching import maximum_matching

# Above this many gadget nodes a single matching call stops being desk-scale;
# candidates over the cap are skipped and the search reports BudgetExceeded
# instead of pretending to have exhausted the space.
GADGET_NODE_CAP = 2000


@dataclass(frozen=True)
class OracleBudget:
    """Work bound for exact searches.

    ``max_subsets`` counts enumerated candidates (deterministic, takes
    precedence); ``time_limit_ms`` is a wall-clock backstop.
    """

    max_subsets: int = 1_000_000
    time_limit_ms: int = 60_000

    def __post_init__(self):
        if self.max_subsets <= 0 or self.time_limit_ms <= 0:
            raise ValueError("budget fields must be positive")


@dataclass
class SearchStats:
    """Partial statistics carried by BudgetExceededError."""

    examined: int = 0
    tested: int = 0
    skipped_oversize: int = 0
    elapsed_ms: float = 0.0


@dataclass(frozen=True)
class AlmostRegularCertificate:
    """Witness that a graph's support degrees are within a factor K.

    All three degree statistics are recomputable from the subgraph itself.
    """

    K: float
    min_degree: int
    max_degree: int
    avg_degree: Fraction


@dataclass(frozen=True)
class BiregularCertificate:
    """Witness of (L,d)-almost-biregularity with the parts identified.

    Every ``b_side`` vertex has degree exactly ``d``; ``D`` is the exact
    edges-per-A-vertex ratio, at least ``d``; every ``a_side`` degree is at
    most ``L * D``.
    """

    L: float
    d: int
    D: Fraction
    a_side: frozenset[int]
    b_side: frozenset[int]


# -- k-factor gadget ---------------------------------------------------------


def k_factor_edges(
    g: Graph, vertices, k: int
) -> tuple[tuple[int, int], ...] | None:
    """Edge set of a spanning k-regular subgraph of g[vertices], or None.

    Reduction: each selected vertex of induced degree d becomes d edge
    stubs plus d-k absorber nodes, stubs and absorbers completely joined;
    each induced edge links its two stubs. A perfect matching of the gadget
    leaves exactly k stubs per vertex matched across, i.e. a k-factor.
    """
    if k < 1:
        raise ValueError("k must be positive")
    vs = sorted(set(vertices))
    for v in vs:
        if not (0 <= v < g.vertex_count):
            raise UnknownVertexError(f"vertex {v} not in graph")
    if not vs:
        return ()
    vset = set(vs)
    induced = [
        e for e in g.edges if e[0] in vset and e[1] in vset
    ]
    deg = {v: 0 for v in vs}
    for u, v in induced:
        deg[u] += 1
        deg[v] += 1
    if any(d < k for d in deg.values()):
        return None
    if (k * len(vs)) % 2:
        return None

    # Gadget node ids: stubs first (one per edge endpoint), then absorbers.
    stub_id: dict[tuple[int, int], int] = {}
    next_id = 0
    for idx, (u, v) in enumerate(induced):
        stub_id[(u, idx)] = next_id
        next_id += 1
        stub_id[(v, idx)] = next_id
        next_id += 1
    adj: list[list[int]] = [[] for _ in range(next_id + sum(deg[v] - k for v in vs))]
    stubs_of: dict[int, list[int]] = {v: [] for v in vs}
    for idx, (u, v) in enumerate(induced):
        su, sv = stub_id[(u, idx)], stub_id[(v, idx)]
        adj[su].append(sv)
        adj[sv].append(su)
        stubs_of[u].append(su)
        stubs_of[v].append(sv)
    for v in vs:
        for _ in range(deg[v] - k):
            a = next_id
            next_id += 1
            for s in stubs_of[v]:
                adj[s].append(a)
                adj[a].append(s)

    match = maximum_matching(next_id, adj)
    if any(m == -1 for m in match):
        return None
    picked = []
    for idx, (u, v) in enumerate(induced):
        if match[stub_id[(u, idx)]] == stub_id[(v, idx)]:
            picked.append((u, v))
    return tuple(picked)


def has_k_factor(g: Graph, vertices, k: int) -> bool:
    """True iff g[vertices] has a spanning k-regular subgraph."""
    return k_factor_edges(g, vertices, k) is not None


def _gadget_nodes(induced_edge_count: int, size: int, k: int) -> int:
    # 2 stubs per edge plus (deg - k) absorbers per vertex.
    return 4 * induced_edge_count - k * size


# -- exact k-regular subgraph search ------------------------------------------


def find_k_regular_exact(
    g: Graph, k: int, budget: OracleBudget
) -> SubgraphWitness | None:
    """Search the k-core's vertex subsets for one carrying a k-factor.

    Candidates are enumerated by descending size (lexicographic within a
    size), filtered by induced minimum degree and parity, then decided by
    the factor gadget. Returns None only after the whole pruned space was
    enumerated within budget; raises BudgetExceededError otherwise.
    """
    if k < 1:
        raise ValueError("k must be positive")
    core = prune_min_degree(g, k)
    support = core.support
    stats = SearchStats()
    start = time.monotonic()
    if not support:
        return None
    masks = {v: 0 for v in support}
    for u, v in core.edges:
        masks[u] |= 1 << v
        masks[v] |= 1 << u

    skipped = False
    for size in range(len(support), k, -1):
        for combo in combinations(support, size):
            stats.examined += 1
            if stats.examined > budget.max_subsets:
                stats.elapsed_ms = 1000 * (time.monotonic() - start)
                raise BudgetExceededError("subset budget exhausted", stats)
            if stats.examined % 256 == 0:
                elapsed = 1000 * (time.monotonic() - start)
                if elapsed > budget.time_limit_ms:
                    stats.elapsed_ms = elapsed
                    raise BudgetExceededError("time limit exceeded", stats)
            if (k * size) % 2:
                continue
            mask = 0
            for v in combo:
                mask |= 1 << v
            inner = 0
            ok = True
            for v in combo:
                dv = (masks[v] & mask).bit_count()
                if dv < k:
                    ok = False
                    break
                inner += dv
            if not ok:
                continue
            if _gadget_nodes(inner // 2, size, k) > GADGET_NODE_CAP:
                stats.skipped_oversize += 1
                skipped = True
                continue
            stats.tested += 1
            edges = k_factor_edges(core, combo, k)
            if edges is not None:
                witness = SubgraphWitness(frozenset(combo), frozenset(edges), k)
                assert check_certificate(g, witness)
                return witness
    if skipped:
        stats.elapsed_ms = 1000 * (time.monotonic() - start)
        raise BudgetExceededError("candidates over the gadget size cap were skipped", stats)
    return None


# -- K_{k,k} search ------------------------------------------------------------


def find_kkk(g: Graph, k: int, budget: OracleBudget) -> SubgraphWitness | None:
    """Find a complete bipartite K_{k,k} witness, or None if none exists.

    Enumerates k-subsets of one side in ascending label order, shrinking
    the common neighborhood as vertices are added and generating extension
    candidates by counting over the current common neighborhood's
    adjacency. The witness doubles as a k-regular subgraph.
    """
    if k < 1:
        raise ValueError("k must be positive")
    stats = SearchStats()
    start = time.monotonic()
    if k == 1:
        if not g.edges:
            return None
        u, v = g.edges[0]
        witness = SubgraphWitness(frozenset((u, v)), frozenset({(u, v)}), 1)
        assert check_certificate(g, witness)
        return witness

    cand = [v for v in range(g.vertex_count) if g.degree(v) >= k]
    cand_set = set(cand)

    def tick() -> None:
        stats.examined += 1
        if stats.examined > budget.max_subsets:
            stats.elapsed_ms = 1000 * (time.monotonic() - start)
            raise BudgetExceededError("subset budget exhausted", stats)
        if stats.examined % 1024 == 0:
            elapsed = 1000 * (time.monotonic() - start)
            if elapsed > budget.time_limit_ms:
                stats.elapsed_ms = elapsed
                raise BudgetExceededError("time limit exceeded", stats)

    def extend(chosen: list[int], common: set[int]) -> SubgraphWitness | None:
        if len(chosen) == k:
            free = sorted(common.difference(chosen))
            if len(free) < k:
                return None
            side_b = free[:k]
            verts = frozenset(chosen) | frozenset(side_b)
            edges = frozenset(canonical_edge(u, w) for u in chosen for w in side_b)
            return SubgraphWitness(verts, edges, k)
        counts: dict[int, int] = {}
        for c in common:
            for w in g.neighbors(c):
                counts[w] = counts.get(w, 0) + 1
        last = chosen[-1]
        for w in sorted(counts):
            if w <= last or w not in cand_set:
                continue
            tick()
            if counts[w] < k:
                continue
            new_common = common.intersection(g.neighbors(w))
            if len(new_common.difference(chosen)) < k:
                continue
            found = extend(chosen + [w], new_common)
            if found is not None:
                return found
        return None

    for u in cand:
        tick()
        common = set(g.neighbors(u))
        if len(common) < k:
            continue
        found = extend([u], common)
        if found is not None:
            assert check_certificate(g, found)
            return found
    return None


# -- certificate checking --------------------------------------------------------


def check_certificate(
    g: Graph | BipartiteGraph,
    w: SubgraphWitness | AlmostRegularCertificate | BiregularCertificate,
) -> bool:
    """Recompute every claimed quantity from scratch; True iff all hold."""
    host = g.graph if isinstance(g, BipartiteGraph) else g
    if isinstance(w, SubgraphWitness):
        return _check_witness(host, w)
    if isinstance(w, AlmostRegularCertificate):
        return _check_almost_regular(host, w)
    if isinstance(w, BiregularCertificate):
        return _check_biregular(host, w)
    raise TypeError(f"unknown certificate type: {type(w)!r}")


def _check_witness(g: Graph, w: SubgraphWitness) -> bool:
    for v in w.vertices:
        if not (0 <= v < g.vertex_count):
            return False
    host_edges = set(g.edges)
    deg = {v: 0 for v in w.vertices}
    for u, v in w.edges:
        if canonical_edge(u, v) not in host_edges:
            return False
        if u not in deg or v not in deg:
            return False
        deg[u] += 1
        deg[v] += 1
    if w.claimed_k is not None:
        if w.claimed_k <= 0 or not w.vertices:
            return False
        if any(d != w.claimed_k for d in deg.values()):
            return False
    return True


def _support_degrees(g: Graph) -> list[int]:
    return [g.degree(v) for v in g.support]


def _check_almost_regular(g: Graph, cert: AlmostRegularCertificate) -> bool:
    degs = _support_degrees(g)
    if not degs or cert.K <= 0:
        return False
    mn, mx = min(degs), max(degs)
    avg = Fraction(sum(degs), len(degs))
    if (mn, mx) != (cert.min_degree, cert.max_degree) or avg != cert.avg_degree:
        return False
    return mx <= cert.K * mn


def _check_biregular(g: Graph, cert: BiregularCertificate) -> bool:
    if cert.d <= 0 or cert.L <= 0 or not cert.a_side or not cert.b_side:
        return False
    if cert.a_side & cert.b_side:
        return False
    sides = cert.a_side | cert.b_side
    for v in sides:
        if not (0 <= v < g.vertex_count):
            return False
    for u, v in g.edges:
        if not (
            (u in cert.a_side and v in cert.b_side)
            or (u in cert.b_side and v in cert.a_side)
        ):
            return False
    if any(g.degree(v) != cert.d for v in cert.b_side):
        return False
    D = Fraction(g.edge_count, len(cert.a_side))
    if D != cert.D or D < cert.d:
        return False
    return all(g.degree(u) <= cert.L * D for u in cert.a_side)
