"""The effect measure used to rank candidate explainers.

The effect of an explainer event E on a hypothesis H across one update is
the product of three signed factors, all cheap to read off the tables:

    [P(HE) - P(H)P(E)] * [P'(H) - P(H)] * [P'(E) - P(E)]

The covariance factor is taken on the table before the update. A positive
product means E's movement supports H's movement (a positively correlated
event moved the same way, or a negatively correlated one moved the other
way); only positive effects are offered as explanations. Explanation text
prints the conditional form P(H|E) - P(H), which has the covariance's sign.
"""

from __future__ import annotations

import math
from collections.abc import Iterable
from dataclasses import dataclass

from .errors import DegenerateHypothesis, MismatchedTables, SameEvent, ZeroCondition
from .table import Cmd, ZERO_PROB, conditional, prob

EFFECT_EPS = 1e-12


@dataclass(frozen=True)
class EffectBreakdown:
    hypothesis: str
    explainer: str
    correlation: float            # P(HE) - P(H)P(E), before the update
    delta_h: float                # P'(H) - P(H)
    delta_e: float                # P'(E) - P(E)
    effect: float                 # product of the three factors
    reported_correlation: float   # P(H|E) - P(H), the printed form
    update_index: int = 0


def covariance(cmd: Cmd, h: str, e: str) -> float:
    """P(h and e) - P(h)P(e); symmetric in its arguments."""
    if h == e:
        raise SameEvent(f"hypothesis and explainer are both {h!r}")
    p_h = prob(cmd, {h: True})
    p_e = prob(cmd, {e: True})
    p_he = prob(cmd, {h: True, e: True})
    return p_he - p_h * p_e


def reported_correlation(cmd: Cmd, h: str, e: str) -> float:
    """P(h | e) - P(h); the form shown in explanations."""
    if h == e:
        raise SameEvent(f"hypothesis and explainer are both {h!r}")
    if prob(cmd, {e: True}) <= ZERO_PROB:
        raise ZeroCondition(f"{e} has (near-)zero probability")
    return conditional(cmd, {h: True}, {e: True}) - prob(cmd, {h: True})


def effect_of(before: Cmd, after: Cmd, h: str, e: str, update_index: int = 0) -> EffectBreakdown:
    """Evaluate all factors of the effect of ``e`` on ``h`` across one
    before/after table pair."""
    if before.events != after.events:
        raise MismatchedTables(
            f"tables disagree on events: {before.events!r} vs {after.events!r}"
        )
    corr = covariance(before, h, e)
    delta_h = prob(after, {h: True}) - prob(before, {h: True})
    delta_e = prob(after, {e: True}) - prob(before, {e: True})
    p_e = prob(before, {e: True})
    reported = corr / p_e if p_e > ZERO_PROB else 0.0
    return EffectBreakdown(
        hypothesis=h,
        explainer=e,
        correlation=corr,
        delta_h=delta_h,
        delta_e=delta_e,
        effect=corr * delta_h * delta_e,
        reported_correlation=reported,
        update_index=update_index,
    )


def rank_explainers(
    before: Cmd,
    after: Cmd,
    h: str,
    allowed: Iterable[str] | None = None,
    update_index: int = 0,
) -> list[EffectBreakdown]:
    """All co-table events with a positive effect on ``h``, strongest first.
    Ties keep event declaration order. ``allowed`` (when given) restricts
    the candidate set; events in it that are absent from the table are
    ignored."""
    before.position(h)
    allowed_set = None if allowed is None else set(allowed)
    out = []
    for event in before.events:
        if event == h:
            continue
        if allowed_set is not None and event not in allowed_set:
            continue
        breakdown = effect_of(before, after, h, event, update_index)
        if breakdown.effect > EFFECT_EPS:
            out.append(breakdown)
    out.sort(key=lambda b: b.effect, reverse=True)
    return out


def likelihood_ratio(cmd: Cmd, h: str, e: str) -> float:
    """P(e | h) / P(e | not h). Returns ``inf`` when the denominator is 0
    and the numerator positive, and 1 when both are 0 (the evidence carries
    no information either way)."""
    p_h = prob(cmd, {h: True})
    if p_h <= ZERO_PROB or 1.0 - p_h <= ZERO_PROB:
        raise DegenerateHypothesis(f"{h} needs probability mass on both truth values")
    numerator = conditional(cmd, {e: True}, {h: True})
    denominator = conditional(cmd, {e: True}, {h: False})
    if denominator <= 0.0:
        return math.inf if numerator > 0.0 else 1.0
    return numerator / denominator


def lr_substituted_effect(before: Cmd, after: Cmd, h: str, e: str) -> float:
    """The effect product with the likelihood ratio in place of the
    covariance factor. Kept to document why that substitution fails: the
    ratio is non-negative, so this variant punishes legitimate negatively
    correlated explainers and is not invariant under negating the
    evidence event."""
    if before.events != after.events:
        raise MismatchedTables(
            f"tables disagree on events: {before.events!r} vs {after.events!r}"
        )
    lr = likelihood_ratio(before, h, e)
    delta_h = prob(after, {h: True}) - prob(before, {h: True})
    delta_e = prob(after, {e: True}) - prob(before, {e: True})
    return lr * delta_h * delta_e
