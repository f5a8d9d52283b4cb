"""Exception hierarchy shared across the package.

Every error carries a stable ``code`` (used by the HTTP service for its
error bodies) and an optional ``detail`` mapping with machine-readable
context.
"""

from __future__ import annotations


class LegNetError(Exception):
    code = "error"

    def __init__(self, message: str, detail: dict | None = None):
        super().__init__(message)
        self.detail = detail or {}


# -- table construction ------------------------------------------------------

class NegativeCell(LegNetError):
    code = "negative_cell"


class WrongLength(LegNetError):
    code = "wrong_length"


class NotNormalized(LegNetError):
    code = "not_normalized"


# -- lookups -----------------------------------------------------------------

class UnknownEvent(LegNetError):
    code = "unknown_event"


class SameEvent(LegNetError):
    code = "same_event"


class UnknownLeg(LegNetError):
    code = "unknown_leg"


class UnknownUpdate(LegNetError):
    code = "unknown_update"


class UnknownSession(LegNetError):
    code = "unknown_session"


# -- probability queries -----------------------------------------------------

class ZeroCondition(LegNetError):
    code = "zero_condition"


class DegenerateHypothesis(LegNetError):
    code = "degenerate_hypothesis"


class MismatchedTables(LegNetError):
    code = "mismatched_tables"


# -- knowledge-base loading --------------------------------------------------

class ParseError(LegNetError):
    code = "parse_error"


class UnknownEventInLeg(LegNetError):
    code = "unknown_event_in_leg"


class CyclicLegGraph(LegNetError):
    code = "cyclic_leg_graph"


class DisconnectedNet(LegNetError):
    code = "disconnected_net"


class InconsistentMarginals(LegNetError):
    code = "inconsistent_marginals"


# -- evidence updating -------------------------------------------------------

class InvalidConstraint(LegNetError):
    code = "invalid_constraint"


class ImpossibleEvidence(LegNetError):
    code = "impossible_evidence"


class NoConvergence(LegNetError):
    code = "no_convergence"


# -- causal structure and explanations ---------------------------------------

class CyclicCausalGraph(LegNetError):
    code = "cyclic_causal_graph"


class EndpointsShareNoLeg(LegNetError):
    code = "endpoints_share_no_leg"


class FilterRequired(LegNetError):
    code = "filter_required"


class FilterExhausted(LegNetError):
    code = "filter_exhausted"


class InvalidQuery(LegNetError):
    code = "invalid_query"
