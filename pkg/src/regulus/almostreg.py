"""From almost-biregular to almost-regular.

Three conversions: squeeze a wide biregular ratio L down to 4 (dyadic
grouping plus per-vertex edge retention, postcondition-verified), randomly
thin the B side so the whole graph becomes nearly regular, and the
composite that chains both and prunes, turning an (L, delta)-almost-
biregular graph into a 64-almost-regular subgraph with average degree at
least delta / (16 * log2 L).
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction

from .errors import (
    PreconditionViolatedError,
    StageFailedError,
    TrialsExhaustedError,
)
from .exact import pow2
from .graph import BipartiteGraph, Graph, canonical_edge, prune_min_degree
from .oracle import AlmostRegularCertificate, BiregularCertificate, check_certificate

DEFAULT_THIN_TRIALS = 200


@dataclass(frozen=True)
class ThinningStats:
    """Edge accounting of an accepted thinning trial.

    ``x`` is the edge count after B-side sampling, ``y`` how many of those
    edges sat at overloaded A-vertices and were deleted; ``resamples`` is
    the 1-based index of the accepted trial.
    """

    x: int
    y: int
    resamples: int

    def __post_init__(self):
        if not (self.x >= self.y >= 0):
            raise ValueError("need X >= Y >= 0")


def _validated(g: BipartiteGraph, cert: BiregularCertificate) -> None:
    if not check_certificate(g, cert):
        raise PreconditionViolatedError("biregular certificate does not match the graph")


def nearly_reg_subgraph(
    g: BipartiteGraph,
    cert: BiregularCertificate,
    seed: int,
    max_trials: int = DEFAULT_THIN_TRIALS,
) -> tuple[Graph, ThinningStats]:
    """Random B-side thinning to average degree >= d/2, max degree <= 4Ld.

    Each trial keeps every B-vertex with exact probability d/D, deletes all
    edges at A-vertices whose sampled B-degree reaches 4Ld, and accepts
    when X - Y >= (|A| + |B'|) * d / 4; the accepted subgraph's average
    degree over A and B' is then at least d/2 by construction, and both
    bounds are re-verified on the output graph.
    """
    _validated(g, cert)
    L, d = cert.L, cert.d
    if L < 1 or d < 1:
        raise PreconditionViolatedError(f"need L, d >= 1, got L={L}, d={d}")
    keep = Fraction(d) / cert.D
    assert keep <= 1
    heavy_threshold = 4 * Fraction(L) * d if isinstance(L, int) else 4 * L * d
    side_b = sorted(cert.b_side)
    side_a = sorted(cert.a_side)
    master = random.Random(seed)
    for trial in range(1, max_trials + 1):
        rng = random.Random(master.getrandbits(64))
        b_prime = [v for v in side_b if rng.randrange(keep.denominator) < keep.numerator]
        b_set = set(b_prime)
        x_val = d * len(b_prime)
        sampled_degree = {
            u: sum(1 for w in g.graph.neighbors(u) if w in b_set) for u in side_a
        }
        heavy = {u for u, cnt in sampled_degree.items() if cnt >= heavy_threshold}
        y_val = sum(sampled_degree[u] for u in heavy)
        if x_val - y_val >= Fraction((len(side_a) + len(b_prime)) * d, 4):
            kept = [
                canonical_edge(u, v)
                for v in b_prime
                for u in g.graph.neighbors(v)
                if u not in heavy
            ]
            out = g.graph.spanning(kept)
            assert out.edge_count == x_val - y_val
            assert 2 * out.edge_count >= Fraction((len(side_a) + len(b_prime)) * d, 2)
            assert out.max_degree <= heavy_threshold
            return out, ThinningStats(x_val, y_val, trial)
    raise TrialsExhaustedError(f"no accepted thinning in {max_trials} resamples")


def to_4_almost_biregular(
    g: BipartiteGraph,
    cert: BiregularCertificate,
    d: int,
    seed: int,
    max_trials: int = DEFAULT_THIN_TRIALS,
) -> tuple[BipartiteGraph, BiregularCertificate]:
    """Squeeze the biregular ratio down to 4 at B-side degree d.

    Requires L*delta <= 2^floor(delta/(d-1)) and d <= delta (d = 1 passes
    vacuously). The reduction groups A by dyadic degree, picks the class
    serving the most B-vertices at degree d, retains d random edges per
    B-vertex into it, and repairs by dropping overloaded or underused
    A-vertices. The output certificate is verified from scratch; a wrong
    certificate is never returned, failure raises StageFailedError.
    """
    _validated(g, cert)
    delta = cert.d
    if d < 1 or d > delta:
        raise PreconditionViolatedError(f"need 1 <= d <= delta, got d={d}, delta={delta}")
    if d > 1:
        exponent = delta // (d - 1)
        lhs = Fraction(cert.L) * delta
        if lhs > pow2(exponent):
            raise PreconditionViolatedError(
                f"L*delta = {float(lhs):g} exceeds 2^floor(delta/(d-1)) = 2^{exponent}"
            )

    # Short-circuit: the input may already qualify at ratio 4.
    if delta == d:
        direct = BiregularCertificate(4, d, cert.D, cert.a_side, cert.b_side)
        if check_certificate(g, direct):
            return g, direct

    by_class: dict[int, set[int]] = {}
    for u in sorted(cert.a_side):
        deg = g.graph.degree(u)
        if deg >= 1:
            by_class.setdefault(deg.bit_length() - 1, set()).add(u)
    candidates: list[tuple[int, frozenset[int], list[int]]] = []
    for j, a_class in sorted(by_class.items()):
        b_served = [
            v
            for v in sorted(cert.b_side)
            if sum(1 for u in g.graph.neighbors(v) if u in a_class) >= d
        ]
        if b_served:
            candidates.append((j, frozenset(a_class), b_served))
    if not candidates:
        raise StageFailedError("to_4_almost_biregular", "no degree class serves any B vertex")
    candidates.sort(key=lambda item: (-len(item[2]), item[0]))

    master = random.Random(seed)
    for trial in range(max_trials):
        _, a_class, b_served = candidates[trial % len(candidates)]
        rng = random.Random(master.getrandbits(64))
        retained: dict[int, tuple[int, ...]] = {}
        for v in b_served:
            nbrs = [u for u in g.graph.neighbors(v) if u in a_class]
            retained[v] = tuple(nbrs) if len(nbrs) == d else tuple(rng.sample(nbrs, d))
        result = _repair_retention(retained, d)
        if result is None:
            continue
        b_kept, a_used = result
        edges = [
            canonical_edge(u, v) for v in sorted(b_kept) for u in retained[v]
        ]
        out = BipartiteGraph(g.graph.spanning(edges), frozenset(a_used), frozenset(b_kept))
        out_cert = BiregularCertificate(
            4, d, Fraction(d * len(b_kept), len(a_used)), frozenset(a_used), frozenset(b_kept)
        )
        if check_certificate(out, out_cert):
            return out, out_cert
    raise StageFailedError(
        "to_4_almost_biregular",
        f"no verified ratio-4 subgraph within {max_trials} trials",
    )


def _repair_retention(
    retained: dict[int, tuple[int, ...]], d: int
) -> tuple[set[int], set[int]] | None:
    """Drop B-vertices at overloaded or surplus A-vertices until (4,d) holds."""
    b_kept = set(retained)
    while b_kept:
        load: dict[int, int] = {}
        for v in b_kept:
            for u in retained[v]:
                load[u] = load.get(u, 0) + 1
        a_used = set(load)
        ratio = Fraction(d * len(b_kept), len(a_used))
        heavy = {u for u, cnt in load.items() if cnt > 4 * ratio}
        if heavy:
            b_kept = {v for v in b_kept if not heavy.intersection(retained[v])}
            continue
        if len(a_used) > len(b_kept):
            victim = min(a_used, key=lambda u: (load[u], u))
            b_kept = {v for v in b_kept if victim not in retained[v]}
            continue
        return b_kept, a_used
    return None


def almost_bireg_to_almost_reg(
    g: BipartiteGraph,
    cert: BiregularCertificate,
    seed: int,
    max_trials: int = DEFAULT_THIN_TRIALS,
) -> tuple[Graph, AlmostRegularCertificate]:
    """(L, delta)-almost-biregular -> 64-almost-regular, average >= delta/(16 log2 L).

    Sets d = ceil(delta / (4 log2 L)), squeezes the ratio to 4, thins to
    average >= d/2 with max <= 16d, then prunes below ceil(d/4); the prune
    cannot empty the graph (averaging), leaving min >= d/4 and max <= 16d,
    a ratio of at most 64. Requires L >= delta >= 2.
    """
    _validated(g, cert)
    L, delta = cert.L, cert.d
    if not (L >= delta >= 2):
        raise PreconditionViolatedError(f"need L >= delta >= 2, got L={L}, delta={delta}")
    d = _ceil_ratio_to_quarter_log(delta, L)
    master = random.Random(seed)
    try:
        g4, cert4 = to_4_almost_biregular(g, cert, d, master.getrandbits(64), max_trials)
    except TrialsExhaustedError as exc:
        raise StageFailedError("to_4_almost_biregular", str(exc)) from exc
    try:
        thin, _stats = nearly_reg_subgraph(g4, cert4, master.getrandbits(64), max_trials)
    except TrialsExhaustedError as exc:
        raise StageFailedError("nearly_reg_subgraph", str(exc)) from exc
    floor_deg = -(-d // 4)
    out = prune_min_degree(thin, floor_deg)
    assert out.edge_count > 0
    degs = [out.degree(v) for v in out.support]
    mn, mx = min(degs), max(degs)
    assert mn >= floor_deg and mx <= 16 * d and mx <= 64 * mn
    out_cert = AlmostRegularCertificate(
        64, mn, mx, Fraction(sum(degs), len(degs))
    )
    assert check_certificate(out, out_cert)
    return out, out_cert


def _ceil_ratio_to_quarter_log(delta: int, L) -> int:
    """ceil(delta / (4*log2 L)), exactly when L is a power of two."""
    if isinstance(L, int) and L >= 2 and L & (L - 1) == 0:
        k = L.bit_length() - 1
        return -(-delta // (4 * k))
    return math.ceil(delta / (4 * math.log2(L)))
