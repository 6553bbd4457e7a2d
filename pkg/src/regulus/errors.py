"""Exception types shared across the package.

Errors fall into three groups: input/format problems raised by loaders and
constructors, contract violations raised when an operation's stated
hypotheses do not hold, and bounded-effort outcomes (budgets, retry limits)
that carry partial statistics so a caller can report them honestly.
"""

from __future__ import annotations


class RegulusError(Exception):
    """Base class for all package-specific errors."""


class ParseError(RegulusError):
    """Malformed edge-list or sidecar input."""


class SelfLoopError(RegulusError):
    """An edge joins a vertex to itself."""


class DuplicateEdgeError(RegulusError):
    """The same undirected edge appears twice."""


class UnknownVertexError(RegulusError):
    """A vertex label is outside the graph's label range."""


class EmptyGraphError(RegulusError):
    """Operation requires a non-empty graph."""


class DegreeTooLowError(RegulusError):
    """A vertex degree is below a required target."""

    def __init__(self, vertex: int, degree: int, target: int):
        super().__init__(f"vertex {vertex} has degree {degree} < target {target}")
        self.vertex = vertex
        self.degree = degree
        self.target = target


class DegreeCapViolatedError(RegulusError):
    """A vertex degree exceeds the cap assumed by the operation."""


class NotRRegularError(RegulusError):
    """A side that must be r-regular is not."""


class PreconditionViolatedError(RegulusError):
    """An operation's stated precondition fails; the result is undefined."""


class HypothesisViolatedError(PreconditionViolatedError):
    """A randomized step's hypothesis set fails.

    ``clause`` names the first violated hypothesis.
    """

    def __init__(self, clause: str, detail: str = ""):
        msg = clause if not detail else f"{clause}: {detail}"
        super().__init__(msg)
        self.clause = clause


class TrialsExhaustedError(RegulusError):
    """A retry loop hit its trial limit without an accepted sample."""

    def __init__(self, message: str, trial_stats: tuple = ()):
        super().__init__(message)
        self.trial_stats = trial_stats


class BudgetExceededError(RegulusError):
    """A budgeted search ran out before exhausting its space.

    ``stats`` carries the partial search statistics.
    """

    def __init__(self, message: str, stats=None):
        super().__init__(message)
        self.stats = stats


class InfeasibleError(RegulusError):
    """Generator parameters admit no instance."""


class UnsupportedOrderError(RegulusError):
    """No projective plane of the requested order is available."""


class RangeEmptyError(RegulusError):
    """The derived level range of the layered construction is empty."""


class DegenerateDeltaError(RegulusError):
    """Maximum degree too small for the doubly-logarithmic ladder."""


class KkkFoundError(RegulusError):
    """A complete bipartite K_{k,k} turned up where the caller assumed none.

    The witness is itself a k-regular subgraph, so callers usually treat
    this as early success.
    """

    def __init__(self, witness):
        super().__init__("found a K_{k,k} witness")
        self.witness = witness


class StageFailedError(RegulusError):
    """A pipeline stage gave up; ``stage`` tags which one."""

    def __init__(self, stage: str, reason: str):
        super().__init__(f"{stage}: {reason}")
        self.stage = stage
        self.reason = reason


class PipelineFailedError(RegulusError):
    """The end-to-end driver found no verified witness.

    Never a claim that no regular subgraph exists; ``trace`` records what
    was tried.
    """

    def __init__(self, reason: str, trace=None):
        super().__init__(reason)
        self.trace = trace
