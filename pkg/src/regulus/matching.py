"""Maximum cardinality matching in general graphs.

Classic blossom-contraction search (O(V^3)): repeated BFS for augmenting
paths with odd cycles contracted via a base[] relabeling. Small and exact,
which is what the desk-scale oracles need; no weights.
"""

from __future__ import annotations

from collections import deque
from typing import Sequence


def maximum_matching(n: int, adj: Sequence[Sequence[int]]) -> list[int]:
    """Return match[v] = partner of v, or -1 if v is unmatched.

    ``adj`` is an adjacency list over vertices 0..n-1.
    """
    match = [-1] * n
    # Greedy warm start cuts the number of augmentation phases roughly in half.
    for v in range(n):
        if match[v] == -1:
            for u in adj[v]:
                if match[u] == -1:
                    match[v] = u
                    match[u] = v
                    break
    for v in range(n):
        if match[v] == -1:
            _augment_from(n, adj, match, v)
    return match


def has_perfect_matching(n: int, adj: Sequence[Sequence[int]]) -> bool:
    if n % 2:
        return False
    match = maximum_matching(n, adj)
    return all(m != -1 for m in match)


def _augment_from(n: int, adj: Sequence[Sequence[int]], match: list[int], root: int) -> bool:
    p = [-1] * n
    base = list(range(n))
    used = [False] * n
    used[root] = True
    queue = deque([root])

    def lca(a: int, b: int) -> int:
        on_path = [False] * n
        x = a
        while True:
            x = base[x]
            on_path[x] = True
            if match[x] == -1:
                break
            x = p[match[x]]
        y = b
        while True:
            y = base[y]
            if on_path[y]:
                return y
            y = p[match[y]]

    def mark_path(v: int, b: int, child: int, blossom: list[bool]) -> None:
        while base[v] != b:
            blossom[base[v]] = True
            blossom[base[match[v]]] = True
            p[v] = child
            child = match[v]
            v = p[match[v]]

    while queue:
        v = queue.popleft()
        for to in adj[v]:
            if base[v] == base[to] or match[v] == to:
                continue
            if to == root or (match[to] != -1 and p[match[to]] != -1):
                # Odd cycle: contract the blossom around the least common ancestor.
                cur = lca(v, to)
                blossom = [False] * n
                mark_path(v, cur, to, blossom)
                mark_path(to, cur, v, blossom)
                for i in range(n):
                    if blossom[base[i]]:
                        base[i] = cur
                        if not used[i]:
                            used[i] = True
                            queue.append(i)
            elif p[to] == -1:
                p[to] = v
                if match[to] == -1:
                    # Augmenting path reached an exposed vertex: flip it.
                    while to != -1:
                        pv = p[to]
                        ppv = match[pv]
                        match[to] = pv
                        match[pv] = to
                        to = ppv
                    return True
                used[match[to]] = True
                queue.append(match[to])
    return False
