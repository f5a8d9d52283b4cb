"""Networks of joint probability tables with minimum-information updating
and an effect-based explanation facility."""

from . import errors
from .table import (
    CONSISTENCY_TOL,
    MAX_EVENTS,
    NORMALIZATION_TOL,
    Cmd,
    ConsistencyReport,
    Leg,
    LegNet,
    PairCheck,
    build_cmd,
    check_consistency,
    complement_event,
    conditional,
    marginal,
    prob,
)
from .update import (
    EvidenceSpec,
    Session,
    TouchedLeg,
    UpdateRecord,
    apply_evidence,
    initialize,
    ipf_project,
    jeffrey_update,
    make_session,
    snapshots,
)
from .effect import (
    EFFECT_EPS,
    EffectBreakdown,
    covariance,
    effect_of,
    likelihood_ratio,
    lr_substituted_effect,
    rank_explainers,
    reported_correlation,
)
from .explain import (
    ALL_HISTORY,
    CausalGraph,
    Clause,
    Detail,
    Direction,
    Explanation,
    ExplanationQuery,
    Filter,
    Scope,
    build_causal_graph,
    explain,
    explain_global,
    explain_history,
    explain_local,
    explanation_to_dict,
    format_probability,
    parse_query,
    render,
    set_causal_links,
)
from .kb import load_net, make_archive, new_session, session_from_archive

__version__ = "0.1.0"

__all__ = [
    "ALL_HISTORY",
    "CONSISTENCY_TOL",
    "CausalGraph",
    "Clause",
    "Cmd",
    "ConsistencyReport",
    "Detail",
    "Direction",
    "EFFECT_EPS",
    "EffectBreakdown",
    "EvidenceSpec",
    "Explanation",
    "ExplanationQuery",
    "Filter",
    "Leg",
    "LegNet",
    "MAX_EVENTS",
    "NORMALIZATION_TOL",
    "PairCheck",
    "Scope",
    "Session",
    "TouchedLeg",
    "UpdateRecord",
    "apply_evidence",
    "build_causal_graph",
    "build_cmd",
    "check_consistency",
    "complement_event",
    "conditional",
    "covariance",
    "effect_of",
    "errors",
    "explain",
    "explain_global",
    "explain_history",
    "explain_local",
    "explanation_to_dict",
    "format_probability",
    "initialize",
    "ipf_project",
    "jeffrey_update",
    "likelihood_ratio",
    "load_net",
    "lr_substituted_effect",
    "make_archive",
    "make_session",
    "marginal",
    "new_session",
    "parse_query",
    "prob",
    "rank_explainers",
    "render",
    "reported_correlation",
    "session_from_archive",
    "set_causal_links",
    "snapshots",
]
