"""Graph primitives: immutable simple graphs, bipartite views, witnesses, I/O.

All graphs live on dense integer labels ``0..vertex_count-1``. Subgraph
operations keep the host's vertex count and drop edges, so labels stay
stable through a whole pipeline run; the *support* (non-isolated vertices)
is what degree statistics refer to. Adjacency is stored both as sorted
neighbor tuples and, when the graph is small enough, as integer bitsets so
that common-neighborhood counts are single popcount operations.
"""

from __future__ import annotations

import json
import random
from collections import deque
from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import (
    DegreeTooLowError,
    DuplicateEdgeError,
    EmptyGraphError,
    ParseError,
    SelfLoopError,
    UnknownVertexError,
)

DEFAULT_BITSET_CAP = 4096

Edge = tuple[int, int]


def canonical_edge(u: int, v: int) -> Edge:
    return (u, v) if u < v else (v, u)


class Graph:
    """Immutable simple undirected graph.

    Vertices are ``0..vertex_count-1``; edges are unordered pairs with no
    loops and no duplicates. Construction canonicalizes and validates, so a
    ``Graph`` value can be trusted downstream without re-checking.
    """

    __slots__ = ("vertex_count", "edges", "_adj", "_masks")

    def __init__(
        self,
        vertex_count: int,
        edges: Iterable[Edge] = (),
        *,
        bitset_cap: int = DEFAULT_BITSET_CAP,
    ):
        if vertex_count < 0:
            raise ValueError("vertex_count must be non-negative")
        seen: set[Edge] = set()
        for u, v in edges:
            if not (0 <= u < vertex_count and 0 <= v < vertex_count):
                raise UnknownVertexError(f"edge ({u},{v}) outside 0..{vertex_count - 1}")
            if u == v:
                raise SelfLoopError(f"loop at vertex {u}")
            e = canonical_edge(u, v)
            if e in seen:
                raise DuplicateEdgeError(f"edge ({e[0]},{e[1]}) repeated")
            seen.add(e)
        self.vertex_count = vertex_count
        self.edges: tuple[Edge, ...] = tuple(sorted(seen))
        adj: list[list[int]] = [[] for _ in range(vertex_count)]
        for u, v in self.edges:
            adj[u].append(v)
            adj[v].append(u)
        self._adj = tuple(tuple(sorted(a)) for a in adj)
        if vertex_count <= bitset_cap:
            masks = [0] * vertex_count
            for u, v in self.edges:
                masks[u] |= 1 << v
                masks[v] |= 1 << u
            self._masks: tuple[int, ...] | None = tuple(masks)
        else:
            self._masks = None

    # -- basic accessors ---------------------------------------------------

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    def degree(self, v: int) -> int:
        self._check_vertex(v)
        return len(self._adj[v])

    def degrees(self) -> tuple[int, ...]:
        return tuple(len(a) for a in self._adj)

    @property
    def max_degree(self) -> int:
        return max((len(a) for a in self._adj), default=0)

    @property
    def average_degree(self) -> float:
        """2e/n over the full label range (isolated vertices included)."""
        if self.vertex_count == 0:
            return 0.0
        return 2.0 * self.edge_count / self.vertex_count

    @property
    def support(self) -> tuple[int, ...]:
        """Vertices with at least one incident edge, ascending."""
        return tuple(v for v in range(self.vertex_count) if self._adj[v])

    @property
    def support_average_degree(self) -> float:
        """2e/|support|: the average degree of the subgraph the edges span."""
        sup = sum(1 for a in self._adj if a)
        if sup == 0:
            return 0.0
        return 2.0 * self.edge_count / sup

    def neighbors(self, v: int) -> tuple[int, ...]:
        self._check_vertex(v)
        return self._adj[v]

    def neighbor_mask(self, v: int) -> int | None:
        """Bitset of neighbors, or None above the bitset size cap."""
        self._check_vertex(v)
        if self._masks is None:
            return None
        return self._masks[v]

    def has_edge(self, u: int, v: int) -> bool:
        self._check_vertex(u)
        self._check_vertex(v)
        if self._masks is not None:
            return bool(self._masks[u] >> v & 1)
        a = self._adj[u]
        lo, hi = 0, len(a)
        while lo < hi:
            mid = (lo + hi) // 2
            if a[mid] < v:
                lo = mid + 1
            else:
                hi = mid
        return lo < len(a) and a[lo] == v

    def codegree(self, u: int, v: int) -> int:
        """Number of common neighbors of two distinct vertices."""
        if u == v:
            raise ValueError("codegree requires two distinct vertices")
        self._check_vertex(u)
        self._check_vertex(v)
        if self._masks is not None:
            return (self._masks[u] & self._masks[v]).bit_count()
        return len(set(self._adj[u]).intersection(self._adj[v]))

    # -- subgraph helpers ----------------------------------------------------

    def spanning(self, edges: Iterable[Edge]) -> "Graph":
        """Same vertex set, the given edge subset."""
        return Graph(self.vertex_count, edges)

    def induced_on(self, vertices: Iterable[int]) -> "Graph":
        """Keep only edges with both endpoints in ``vertices`` (labels stable)."""
        keep = set(vertices)
        for v in keep:
            self._check_vertex(v)
        return Graph(
            self.vertex_count,
            (e for e in self.edges if e[0] in keep and e[1] in keep),
        )

    def _check_vertex(self, v: int) -> None:
        if not (0 <= v < self.vertex_count):
            raise UnknownVertexError(f"vertex {v} outside 0..{self.vertex_count - 1}")

    # -- value semantics -----------------------------------------------------

    def __eq__(self, other) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return self.vertex_count == other.vertex_count and self.edges == other.edges

    def __hash__(self) -> int:
        return hash((self.vertex_count, self.edges))

    def __repr__(self) -> str:
        return f"Graph(n={self.vertex_count}, e={self.edge_count})"


class BipartiteGraph:
    """A graph together with a two-sided split that every edge crosses.

    The sides must cover the support; isolated vertices of the host may
    stay unassigned so that pipeline stages can shrink the working sides
    without relabeling.
    """

    __slots__ = ("graph", "side_a", "side_b")

    def __init__(self, graph: Graph, side_a: Iterable[int], side_b: Iterable[int]):
        a = frozenset(side_a)
        b = frozenset(side_b)
        for v in a | b:
            graph._check_vertex(v)
        if a & b:
            raise ValueError("sides are not disjoint")
        for u, v in graph.edges:
            if not ((u in a and v in b) or (u in b and v in a)):
                raise ValueError(f"edge ({u},{v}) does not cross the bipartition")
        self.graph = graph
        self.side_a = a
        self.side_b = b

    @property
    def edge_count(self) -> int:
        return self.graph.edge_count

    def degrees_a(self) -> dict[int, int]:
        return {u: self.graph.degree(u) for u in self.side_a}

    def degrees_b(self) -> dict[int, int]:
        return {v: self.graph.degree(v) for v in self.side_b}

    def induced(self, a_sub: Iterable[int], b_sub: Iterable[int]) -> "BipartiteGraph":
        a = frozenset(a_sub)
        b = frozenset(b_sub)
        if not a <= self.side_a or not b <= self.side_b:
            raise ValueError("induced sides must be subsets of the current sides")
        return BipartiteGraph(self.graph.induced_on(a | b), a, b)

    def spanning(self, edges: Iterable[Edge]) -> "BipartiteGraph":
        return BipartiteGraph(self.graph.spanning(edges), self.side_a, self.side_b)

    def __eq__(self, other) -> bool:
        if not isinstance(other, BipartiteGraph):
            return NotImplemented
        return (
            self.graph == other.graph
            and self.side_a == other.side_a
            and self.side_b == other.side_b
        )

    def __hash__(self) -> int:
        return hash((self.graph, self.side_a, self.side_b))

    def __repr__(self) -> str:
        return (
            f"BipartiteGraph(n={self.graph.vertex_count}, e={self.edge_count}, "
            f"|A|={len(self.side_a)}, |B|={len(self.side_b)})"
        )


@dataclass(frozen=True)
class SubgraphWitness:
    """Self-contained record of a claimed subgraph, recheckable against a host.

    ``edges`` is a subset of the host's edges selected on ``vertices``; if
    ``claimed_k`` is set, every listed vertex must have that exact degree
    within the witness edge set.
    """

    vertices: frozenset[int]
    edges: frozenset[Edge]
    claimed_k: int | None = None

    def to_json(self) -> str:
        payload = {
            "vertices": sorted(self.vertices),
            "edges": [list(e) for e in sorted(self.edges)],
            "k": self.claimed_k,
        }
        return json.dumps(payload, sort_keys=True, indent=2) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "SubgraphWitness":
        try:
            payload = json.loads(text)
            vertices = frozenset(int(v) for v in payload["vertices"])
            edges = frozenset(canonical_edge(int(u), int(v)) for u, v in payload["edges"])
            k = payload.get("k")
        except (KeyError, TypeError, ValueError) as exc:
            raise ParseError(f"malformed witness JSON: {exc}") from exc
        return cls(vertices, edges, None if k is None else int(k))


# -- edge-list I/O -----------------------------------------------------------


def load_edge_list(data: str | bytes) -> Graph:
    """Parse "u v" lines into a Graph.

    The vertex count is one more than the largest label seen (zero for
    empty input). Duplicate edges and self-loops are errors, not silently
    merged.
    """
    if isinstance(data, bytes):
        try:
            data = data.decode("ascii")
        except UnicodeDecodeError as exc:
            raise ParseError(f"edge list is not ASCII: {exc}") from exc
    edges: list[Edge] = []
    seen: set[Edge] = set()
    max_label = -1
    for lineno, raw in enumerate(data.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 2:
            raise ParseError(f"line {lineno}: expected 'u v', got {line!r}")
        try:
            u, v = int(parts[0]), int(parts[1])
        except ValueError as exc:
            raise ParseError(f"line {lineno}: non-integer label in {line!r}") from exc
        if u < 0 or v < 0:
            raise ParseError(f"line {lineno}: negative label in {line!r}")
        if u == v:
            raise SelfLoopError(f"line {lineno}: loop at vertex {u}")
        e = canonical_edge(u, v)
        if e in seen:
            raise DuplicateEdgeError(f"line {lineno}: edge ({e[0]},{e[1]}) repeated")
        seen.add(e)
        edges.append(e)
        max_label = max(max_label, u, v)
    return Graph(max_label + 1, edges)


def dump_edge_list(g: Graph) -> str:
    """Canonical LF-terminated edge list (inverse of load on canonical order)."""
    return "".join(f"{u} {v}\n" for u, v in g.edges)


def load_bipartite_sides(g: Graph, data: str | bytes) -> BipartiteGraph:
    """Attach a JSON sidecar {"A": [...], "B": [...]} to a loaded graph."""
    if isinstance(data, bytes):
        data = data.decode("ascii")
    try:
        payload = json.loads(data)
        side_a = [int(v) for v in payload["A"]]
        side_b = [int(v) for v in payload["B"]]
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"malformed bipartite sidecar: {exc}") from exc
    return BipartiteGraph(g, side_a, side_b)


def dump_bipartite_sides(bg: BipartiteGraph) -> str:
    payload = {"A": sorted(bg.side_a), "B": sorted(bg.side_b)}
    return json.dumps(payload, sort_keys=True) + "\n"


# -- elementary reductions -----------------------------------------------------


def codegree(g: Graph, u: int, v: int) -> int:
    """|N(u) ∩ N(v)| for distinct vertices of g."""
    return g.codegree(u, v)


def bipartite_half(g: Graph, seed: int) -> BipartiteGraph:
    """Spanning bipartite subgraph keeping at least half the edges.

    Two-colorable inputs keep every edge (exact BFS coloring); otherwise a
    seeded random split is improved by local switching until every vertex
    has at least half its degree crossing, which forces the kept count to
    at least ceil(e/2). Deterministic given the seed.
    """
    n = g.vertex_count
    if n == 0:
        raise EmptyGraphError("bipartite_half requires at least one vertex")

    color = _two_color(g)
    if color is None:
        color = _local_switch_split(g, seed)

    kept = [e for e in g.edges if color[e[0]] != color[e[1]]]
    assert 2 * len(kept) >= g.edge_count
    side_a = [v for v in range(n) if color[v] == 0]
    side_b = [v for v in range(n) if color[v] == 1]
    return BipartiteGraph(g.spanning(kept), side_a, side_b)


def _two_color(g: Graph) -> list[int] | None:
    color = [-1] * g.vertex_count
    for start in range(g.vertex_count):
        if color[start] != -1:
            continue
        color[start] = 0
        queue = deque([start])
        while queue:
            v = queue.popleft()
            for w in g.neighbors(v):
                if color[w] == -1:
                    color[w] = 1 - color[v]
                    queue.append(w)
                elif color[w] == color[v]:
                    return None
    return color


def _local_switch_split(g: Graph, seed: int) -> list[int]:
    rng = random.Random(seed)
    color = [rng.randrange(2) for _ in range(g.vertex_count)]
    changed = True
    while changed:
        changed = False
        for v in range(g.vertex_count):
            cross = sum(1 for w in g.neighbors(v) if color[w] != color[v])
            if 2 * cross < g.degree(v):
                color[v] ^= 1
                changed = True
    return color


def prune_min_degree(g: Graph, threshold: int) -> Graph:
    """The unique maximal subgraph in which every vertex has degree >= threshold.

    Queue-based peel; result may be edgeless. Order-independent because the
    peeled set is exactly the complement of the maximal ``threshold``-core.
    """
    degs = list(g.degrees())
    alive = [True] * g.vertex_count
    queue = deque(v for v in range(g.vertex_count) if degs[v] < threshold)
    while queue:
        v = queue.popleft()
        if not alive[v]:
            continue
        alive[v] = False
        for w in g.neighbors(v):
            if alive[w]:
                degs[w] -= 1
                if degs[w] < threshold:
                    queue.append(w)
    kept = [e for e in g.edges if alive[e[0]] and alive[e[1]]]
    return g.spanning(kept)


def trim_b_to_degree(bg: BipartiteGraph, target: int, seed: int) -> BipartiteGraph:
    """Keep exactly ``target`` edges at every B-side vertex, chosen uniformly.

    A-side degrees change only through the removals; the selection per
    vertex is an independent uniform sample, deterministic given the seed.
    """
    if target <= 0:
        raise ValueError("target must be positive")
    rng = random.Random(seed)
    kept: list[Edge] = []
    for v in sorted(bg.side_b):
        nbrs = bg.graph.neighbors(v)
        if len(nbrs) < target:
            raise DegreeTooLowError(v, len(nbrs), target)
        if len(nbrs) == target:
            chosen: Sequence[int] = nbrs
        else:
            chosen = rng.sample(nbrs, target)
        kept.extend(canonical_edge(v, u) for u in chosen)
    return bg.spanning(kept)
