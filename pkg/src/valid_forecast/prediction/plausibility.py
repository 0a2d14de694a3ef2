"""
Upper and lower probabilities over a finite ensemble of candidate models.

The upper probability (plausibility) of an event B at data value x is the
largest conditional probability any member assigns to B; the lower probability
(belief) is one minus the upper probability of the complement.
"""
import logging
import math
from itertools import chain, combinations
from typing import Iterable, Iterator, Tuple

import numpy as np

from ..core.exceptions import DomainError, InputError
from ..core.models import (
    BetDecision,
    DataValue,
    EnsembleValidityReport,
    MemberValidity,
    ModelEnsemble,
    OutcomeSpace,
    PlausibilityAssignment,
    PredictionSet,
)
from .sets import check_alpha
from .validity import DEFAULT_ENUMERATION_LIMIT, check_enumerable, miscoverage_cdf


logger = logging.getLogger(__name__)

# Power-set iteration is only offered for small outcome spaces.
MAX_POWERSET_SIZE = 16


def powerset(space: OutcomeSpace) -> Iterator[Tuple[str, ...]]:
    """All events of a small outcome space, as sorted label tuples."""
    if space.size > MAX_POWERSET_SIZE:
        raise InputError(f"Power set of {space.size} outcomes is too large to iterate")
    labels = space.labels
    return chain.from_iterable(combinations(labels, r) for r in range(len(labels) + 1))


def upper_probability(ensemble: ModelEnsemble, x: DataValue, event: Iterable[str]) -> float:
    """
    max over members of P(Y in B | X=x), with upper(empty) = 0 and upper(space) = 1.

    Raises:
        InputError: On an unknown data value or labels outside the space.
    """
    labels = ensemble.space.subset(event)
    index = ensemble.members[0].index_of(x)
    if not labels:
        return 0.0
    if len(labels) == ensemble.space.size:
        return 1.0
    return min(1.0, max(member.conditional[index].mass(labels) for member in ensemble.members))


def lower_probability(ensemble: ModelEnsemble, x: DataValue, event: Iterable[str]) -> float:
    """
    1 - upper probability of the complement; the min over members of P(Y in B | X=x).

    Raises:
        InputError: On an unknown data value or labels outside the space.
    """
    complement = ensemble.space.complement(event)
    return max(0.0, 1.0 - upper_probability(ensemble, x, complement))


def event_bounds(ensemble: ModelEnsemble, x: DataValue, event: Iterable[str]) -> Tuple[float, float]:
    """(lower, upper) probability of an arbitrary event."""
    labels = ensemble.space.subset(event)
    return lower_probability(ensemble, x, labels), upper_probability(ensemble, x, labels)


def plausibility_assignment(ensemble: ModelEnsemble, x: DataValue) -> PlausibilityAssignment:
    """
    Per-outcome upper and lower probabilities and the "don't know" mass.
    """
    upper = {}
    lower = {}
    for label in ensemble.space.labels:
        upper[label] = upper_probability(ensemble, x, (label,))
        # rounding in 1 - upper(complement) can overshoot upper by an ulp
        lower[label] = min(lower_probability(ensemble, x, (label,)), upper[label])
    dont_know = {label: upper[label] - lower[label] for label in ensemble.space.labels}
    return PlausibilityAssignment(space=ensemble.space, upper=upper, lower=lower, dont_know=dont_know)


def plausibility_prediction_set(ensemble: ModelEnsemble, x: DataValue, alpha: float) -> PredictionSet:
    """
    Outcomes whose plausibility strictly exceeds alpha.

    This is the union of the members' own alpha-level prediction sets.

    Raises:
        DomainError: If alpha is not in (0, 1).
        InputError: On an unknown data value.
    """
    check_alpha(alpha)
    members = tuple(
        label for label in ensemble.space.labels if upper_probability(ensemble, x, (label,)) > alpha
    )
    return PredictionSet(alpha=alpha, members=members)


def upper_matrix(ensemble: ModelEnsemble) -> np.ndarray:
    """Per-outcome plausibility at every data value (rows) for every label (columns)."""
    return np.max(np.stack([member.probability_matrix() for member in ensemble.members]), axis=0)


def check_ensemble_validity(
    ensemble: ModelEnsemble,
    alpha: float,
    enumeration_limit: int = DEFAULT_ENUMERATION_LIMIT,
) -> EnsembleValidityReport:
    """
    Exact miscoverage of the plausibility prediction set under every member.

    The guarantee sup_P P{plausibility set misses Y} <= alpha is conditional on every
    member satisfying P{pi_X(Y) <= alpha} <= alpha. That hypothesis is checked per
    member, and validity is only claimed when it holds.

    Raises:
        DomainError: If alpha is not in (0, 1).
        EnumerationSizeError: If a member is too large to enumerate.
    """
    check_alpha(alpha)
    for member in ensemble.members:
        check_enumerable(member, enumeration_limit)

    excluded = upper_matrix(ensemble) <= alpha
    results = []
    for index, member in enumerate(ensemble.members):
        probs = member.probability_matrix()
        weights = member.marginal_array()[:, None] * probs
        hypothesis = miscoverage_cdf(member, enumeration_limit).evaluate(alpha)
        results.append(
            MemberValidity(
                index=index,
                hypothesis_miscoverage=hypothesis,
                hypothesis_holds=hypothesis <= alpha,
                own_set_miscoverage=float(weights[probs <= alpha].sum()),
                plausibility_set_miscoverage=float(weights[excluded].sum()),
            )
        )

    hypothesis_holds = all(result.hypothesis_holds for result in results)
    max_miscoverage = max(result.plausibility_set_miscoverage for result in results)
    if not hypothesis_holds:
        failed = [result.index for result in results if not result.hypothesis_holds]
        logger.warning("Members %s violate P{pi_X(Y) <= %g} <= %g; no validity claim is made", failed, alpha, alpha)
    return EnsembleValidityReport(
        alpha=alpha,
        members=tuple(results),
        max_miscoverage=max_miscoverage,
        hypothesis_holds=hypothesis_holds,
        validity_claimed=hypothesis_holds and max_miscoverage <= alpha,
    )


def bet_decision(assignment: PlausibilityAssignment, event: Iterable[str], price: float) -> BetDecision:
    """
    Whether to bet on B, on its complement, or neither, at a given price for B.

    A bet on B is coherent under every member when the price is below the lower
    probability; a bet on the complement when it is above the upper probability.

    Raises:
        DomainError: If price is not in (0, 1).
        InputError: If B has no closed form in per-outcome values; use ensemble_bet_decision.
    """
    return _decide(assignment.bounds(event), price)


def ensemble_bet_decision(
    ensemble: ModelEnsemble, x: DataValue, event: Iterable[str], price: float
) -> BetDecision:
    """
    Bet decision for any event B, with bounds taken directly from the ensemble at x.

    Raises:
        DomainError: If price is not in (0, 1).
        InputError: If x or a label in B is unknown.
    """
    return _decide(event_bounds(ensemble, x, event), price)


def _decide(bounds: Tuple[float, float], price: float) -> BetDecision:
    if math.isnan(price) or not 0.0 < price < 1.0:
        raise DomainError(f"price must lie in (0, 1), got {price}")
    lower, upper = bounds
    if price < lower:
        return BetDecision.ACCEPT_B
    if price > upper:
        return BetDecision.ACCEPT_COMPLEMENT
    return BetDecision.ABSTAIN
