"""Randomized degree regularization of bipartite graphs.

The input has an r-regular B side, A-side degrees at most 2^t, average
A-side degree at least 2^s, and a codegree cap; one randomized round thins
A with exact dyadic keep-probabilities so that an accepted sample has the
edges-per-A-vertex ratio within a polylog factor of its maximum A-degree.
Iterating rounds contracts the dyadic gap t-s down to 5*log2(r).

All thresholds and acceptance tests are evaluated in exact integer and
rational arithmetic, including negative powers of two.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping

from .errors import (
    DegreeCapViolatedError,
    EmptyGraphError,
    HypothesisViolatedError,
    NotRRegularError,
    TrialsExhaustedError,
)
from .exact import ceil_log2, floor_log2, pow2
from .graph import BipartiteGraph

DEFAULT_MAX_TRIALS = 500


@dataclass(frozen=True)
class RegularizationParams:
    """The (r, s, t) triple: B-side degree and the dyadic degree window."""

    r: int
    s: int
    t: int

    def __post_init__(self):
        if self.r < 1 or self.s < 1 or self.t < 1:
            raise ValueError("r, s, t must be positive")
        if self.s >= self.t:
            raise ValueError("s < t required")


@dataclass(frozen=True)
class DegreeClassPartition:
    """Dyadic degree classes of side A and the class index of each vertex.

    Class s+1 absorbs every degree up to 2^(s+1); class i (s+2..t) holds
    degrees in (2^(i-1), 2^i].
    """

    classes: Mapping[int, frozenset[int]]
    alpha: Mapping[int, int]


@dataclass(frozen=True)
class PigeonholeSelection:
    """A most-frequent neighbor-class-sum value and the B vertices attaining it."""

    gamma: int
    b_tilde: frozenset[int]
    beta: Mapping[int, int]


@dataclass(frozen=True)
class RegularizationOutcome:
    """Accepted sample of one randomized round.

    ``a2``/``b2`` are the final vertex sets (neighborhood-closed on the B
    side), ``d_prime`` the exact edges-per-A-vertex ratio of the induced
    graph, and ``trial_stats`` the (X, Y) pair of every trial run.
    """

    a2: frozenset[int]
    b2: frozenset[int]
    d_prime: Fraction
    gamma_used: int
    trials: int
    trial_stats: tuple[tuple[int, int], ...]


@dataclass(frozen=True)
class IterationOutcome:
    """Fixed point of the iterated rounds: a (t*-s*)-narrow dyadic window."""

    s_star: int
    t_star: int
    a_star: frozenset[int]
    b_star: frozenset[int]
    d_star: Fraction


def degree_classes(g: BipartiteGraph, p: RegularizationParams) -> DegreeClassPartition:
    """Partition side A into its dyadic degree classes."""
    classes: dict[int, set[int]] = {i: set() for i in range(p.s + 1, p.t + 1)}
    alpha: dict[int, int] = {}
    for u in sorted(g.side_a):
        d = g.graph.degree(u)
        if d > (1 << p.t):
            raise DegreeCapViolatedError(
                f"A-side degree {d} at vertex {u} exceeds 2^t = {1 << p.t}"
            )
        if d <= (1 << (p.s + 1)):
            i = p.s + 1
        else:
            i = max(p.s + 1, (d - 1).bit_length())
        classes[i].add(u)
        alpha[u] = i
    return DegreeClassPartition(
        {i: frozenset(members) for i, members in classes.items()}, alpha
    )


def pigeonhole_beta(
    g: BipartiteGraph, p: RegularizationParams, part: DegreeClassPartition
) -> PigeonholeSelection:
    """Group B by the sum of neighbor class indices; select the largest group.

    Every beta value lies in [(s+1)r, tr], so the most frequent value is
    attained by at least |B| / ((t-s)r) vertices. Ties break toward the
    smallest value for determinism.
    """
    if not g.side_b:
        raise EmptyGraphError("side_B is empty")
    beta: dict[int, int] = {}
    counts: dict[int, int] = {}
    for v in sorted(g.side_b):
        nbrs = g.graph.neighbors(v)
        if len(nbrs) != p.r:
            raise NotRRegularError(
                f"B-side degree {len(nbrs)} at vertex {v}, expected r={p.r}"
            )
        bv = sum(part.alpha[u] for u in nbrs)
        assert (p.s + 1) * p.r <= bv <= p.t * p.r
        beta[v] = bv
        counts[bv] = counts.get(bv, 0) + 1
    gamma = min(val for val, c in counts.items() if c == max(counts.values()))
    b_tilde = frozenset(v for v, bv in beta.items() if bv == gamma)
    assert len(b_tilde) * (p.t - p.s) * p.r >= len(g.side_b)
    return PigeonholeSelection(gamma, b_tilde, beta)


def keep_with_dyadic_probability(rng: random.Random, bits: int) -> bool:
    """Exact Bernoulli(2^-bits): draw `bits` fair bits, keep iff all zero."""
    if bits < 0:
        raise ValueError("bits must be non-negative")
    if bits == 0:
        return True
    return rng.getrandbits(bits) == 0


def hypothesis_violations(
    g: BipartiteGraph,
    p: RegularizationParams,
    *,
    codeg_cap_exp: int,
    edge_slack: int = 0,
) -> list[str]:
    """Which hypotheses of the regularization round fail for this input.

    ``codeg_cap_exp`` is the integer exponent of the codegree cap 2^E
    (E may be negative, in which case every codegree must be zero);
    ``edge_slack`` raises the edge requirement to 2^(s+slack) * |A|.
    Empty list means the input qualifies.
    """
    bad: list[str] = []
    if not g.side_a:
        bad.append("side_A is empty")
    if not g.side_b:
        bad.append("side_B is empty")
    if bad:
        return bad
    for v in sorted(g.side_b):
        if g.graph.degree(v) != p.r:
            bad.append(f"b-degree: vertex {v} has degree {g.graph.degree(v)} != r={p.r}")
            break
    cap_t = 1 << p.t
    for u in sorted(g.side_a):
        if g.graph.degree(u) > cap_t:
            bad.append(f"a-degree-cap: vertex {u} has degree {g.graph.degree(u)} > 2^t")
            break
    cap = pow2(codeg_cap_exp)
    side_a = sorted(g.side_a)
    done = False
    for i, u in enumerate(side_a):
        if done:
            break
        for u2 in side_a[i + 1 :]:
            if g.graph.codegree(u, u2) > cap:
                bad.append(
                    f"codegree: vertices {u},{u2} share "
                    f"{g.graph.codegree(u, u2)} neighbors > 2^{codeg_cap_exp}"
                )
                done = True
                break
    if g.edge_count < (1 << (p.s + edge_slack)) * len(g.side_a):
        bad.append(
            f"edge-count: e={g.edge_count} < 2^{p.s + edge_slack} * |A|"
            f" = {(1 << (p.s + edge_slack)) * len(g.side_a)}"
        )
    return bad


def random_regularize(
    g: BipartiteGraph,
    p: RegularizationParams,
    seed: int,
    max_trials: int = DEFAULT_MAX_TRIALS,
) -> RegularizationOutcome:
    """One randomized regularization round; retries until a trial is accepted.

    Per trial, every A-vertex is kept with exact probability 2^(alpha-t);
    B' is the neighborhood-closed part of the pigeonholed group; A'' drops
    A'-vertices whose B'-degree exceeds 4r * 2^(gamma-(r-1)t); the trial is
    accepted when X - rY - |A'| * 2^(gamma-(r-1)t) / (10(t-s)r) > 0, with X
    the edge count of the sampled graph and Y its heavy-edge count. The
    returned outcome is fully re-audited before being handed back.

    Raises HypothesisViolatedError naming the failing hypothesis, or
    TrialsExhaustedError carrying per-trial (X, Y) statistics.
    """
    r, s, t = p.r, p.s, p.t
    bad = hypothesis_violations(g, p, codeg_cap_exp=r * s - (r - 1) * t)
    if bad:
        raise HypothesisViolatedError(bad[0])
    part = degree_classes(g, p)
    sel = pigeonhole_beta(g, p, part)
    gamma = sel.gamma

    scale = pow2(gamma - (r - 1) * t)
    heavy_threshold = 4 * r * scale
    accept_term = scale / (10 * (t - s) * r)

    side_a = sorted(g.side_a)
    b_tilde = sorted(sel.b_tilde)
    master = random.Random(seed)
    stats: list[tuple[int, int]] = []
    for trial in range(1, max_trials + 1):
        rng = random.Random(master.getrandbits(64))
        a_prime = {
            u for u in side_a if keep_with_dyadic_probability(rng, t - part.alpha[u])
        }
        b_prime = [v for v in b_tilde if all(u in a_prime for u in g.graph.neighbors(v))]
        b_degree: dict[int, int] = {}
        for v in b_prime:
            for u in g.graph.neighbors(v):
                b_degree[u] = b_degree.get(u, 0) + 1
        x_val = r * len(b_prime)
        y_val = sum(cnt for cnt in b_degree.values() if cnt >= heavy_threshold)
        stats.append((x_val, y_val))
        lhs = Fraction(x_val - r * y_val) - len(a_prime) * accept_term
        if lhs > 0:
            a2 = frozenset(
                u for u in a_prime if b_degree.get(u, 0) <= heavy_threshold
            )
            b2 = frozenset(
                v for v in b_prime if all(u in a2 for u in g.graph.neighbors(v))
            )
            edge_count = r * len(b2)
            assert edge_count >= x_val - r * y_val
            outcome = RegularizationOutcome(
                a2=a2,
                b2=b2,
                d_prime=Fraction(edge_count, len(a2)),
                gamma_used=gamma,
                trials=trial,
                trial_stats=tuple(stats),
            )
            problems = audit_outcome(g, p, outcome)
            assert not problems, problems
            return outcome
    raise TrialsExhaustedError(
        f"no accepted trial in {max_trials} attempts", tuple(stats)
    )


def audit_outcome(
    g: BipartiteGraph, p: RegularizationParams, out: RegularizationOutcome
) -> list[str]:
    """Recheck every claim of an accepted outcome from scratch."""
    r, s, t = p.r, p.s, p.t
    problems: list[str] = []
    if not out.a2 or not out.b2:
        problems.append("empty output side")
        return problems
    edges = 0
    for v in sorted(out.b2):
        nbrs = g.graph.neighbors(v)
        if len(nbrs) != r:
            problems.append(f"vertex {v} in B'' has degree {len(nbrs)} != r")
        if any(u not in out.a2 for u in nbrs):
            problems.append(f"vertex {v} in B'' has a neighbor outside A''")
        edges += len(nbrs)
    d_prime = Fraction(edges, len(out.a2))
    if d_prime != out.d_prime:
        problems.append(f"d' mismatch: recomputed {d_prime} != {out.d_prime}")
    floor_bound = pow2(r * s - (r - 1) * t) / (10 * (t - s) * r)
    if d_prime < floor_bound:
        problems.append(f"d' = {d_prime} below 2^(rs-(r-1)t)/(10(t-s)r) = {floor_bound}")
    degree_cap = 40 * (t - s) * r * r * d_prime
    b2 = out.b2
    for u in sorted(out.a2):
        du = sum(1 for w in g.graph.neighbors(u) if w in b2)
        if du > degree_cap:
            problems.append(f"A''-degree {du} at {u} exceeds 40(t-s)r^2 d' = {degree_cap}")
            break
    return problems


def iterate_regularize(
    g: BipartiteGraph,
    p: RegularizationParams,
    seed: int,
    max_trials: int = DEFAULT_MAX_TRIALS,
    *,
    r_floor: int = 1,
    trace=None,
) -> IterationOutcome:
    """Apply regularization rounds until t - s <= 5*log2(r).

    Each round recomputes s' = floor(log2 d') and
    t' = ceil(log2(40(t-s) r^2 d')) from the accepted sample and recurses on
    the induced graph. The gap t-s must shrink every round; if it does not
    (r too small for the contraction), the run stops honestly.

    ``trace``, when given, receives one record per round plus the final
    window, which is how monotonicity is audited externally.
    """
    r = p.r
    if r < r_floor:
        raise HypothesisViolatedError(f"r={r} below configured floor {r_floor}")
    bad = hypothesis_violations(g, p, codeg_cap_exp=2 * r * p.s - (2 * r - 1) * p.t)
    if bad:
        raise HypothesisViolatedError(bad[0])

    cur_g, cur_s, cur_t = g, p.s, p.t
    master = random.Random(seed)
    gap_limit = 5 * math.log2(r)
    while cur_t - cur_s > gap_limit:
        round_p = RegularizationParams(r, cur_s, cur_t)
        out = random_regularize(
            cur_g, round_p, master.getrandbits(64), max_trials
        )
        s_next = floor_log2(out.d_prime)
        t_next = ceil_log2(40 * (cur_t - cur_s) * r * r * out.d_prime)
        if trace is not None:
            trace.add(
                "regularize_round",
                s=cur_s,
                t=cur_t,
                gap=cur_t - cur_s,
                gamma=out.gamma_used,
                trials=out.trials,
                a_size=len(out.a2),
                b_size=len(out.b2),
                d_prime=out.d_prime,
                s_next=s_next,
                t_next=t_next,
            )
        if t_next - s_next >= cur_t - cur_s:
            raise HypothesisViolatedError(
                "contraction",
                f"round did not shrink the window: {cur_t - cur_s} -> {t_next - s_next}"
                " (r too small for the iteration)",
            )
        cur_g = cur_g.induced(out.a2, out.b2)
        cur_s, cur_t = s_next, t_next

    a_star = frozenset(cur_g.side_a)
    b_star = frozenset(cur_g.side_b)
    if not a_star or not b_star:
        raise HypothesisViolatedError("empty window after iteration")
    d_star = Fraction(cur_g.edge_count, len(a_star))
    outcome = IterationOutcome(cur_s, cur_t, a_star, b_star, d_star)
    problems = audit_iteration(g, p, outcome)
    if problems:
        raise HypothesisViolatedError("iteration-invariant", "; ".join(problems))
    if trace is not None:
        trace.add(
            "regularize_final",
            s_star=cur_s,
            t_star=cur_t,
            gap=cur_t - cur_s,
            a_size=len(a_star),
            b_size=len(b_star),
            d_star=d_star,
        )
    return outcome


def audit_iteration(
    g: BipartiteGraph, p: RegularizationParams, out: IterationOutcome
) -> list[str]:
    """Recheck the iterated outcome against the original input."""
    problems: list[str] = []
    r = p.r
    if out.t_star <= out.s_star:
        problems.append("t* <= s*")
    if out.t_star - out.s_star > 5 * math.log2(r):
        problems.append(f"gap {out.t_star - out.s_star} exceeds 5*log2({r})")
    if out.s_star < 2 * r * p.s - (2 * r - 1) * p.t:
        problems.append(
            f"s* = {out.s_star} below 2rs-(2r-1)t = {2 * r * p.s - (2 * r - 1) * p.t}"
        )
    if out.d_star < pow2(out.s_star):
        problems.append(f"d* = {out.d_star} below 2^s* = {pow2(out.s_star)}")
    edges = 0
    cap = 1 << out.t_star
    b_star = out.b_star
    for u in sorted(out.a_star):
        du = sum(1 for w in g.graph.neighbors(u) if w in b_star)
        if du > cap:
            problems.append(f"A*-degree {du} at {u} exceeds 2^t*")
        edges += du
    for v in sorted(out.b_star):
        nbrs = g.graph.neighbors(v)
        if len(nbrs) != r:
            problems.append(f"B*-degree {len(nbrs)} at {v} != r")
        if any(u not in out.a_star for u in nbrs):
            problems.append(f"vertex {v} in B* has a neighbor outside A*")
    if out.a_star and Fraction(edges, len(out.a_star)) != out.d_star:
        problems.append("d* does not match the induced edge count")
    return problems
