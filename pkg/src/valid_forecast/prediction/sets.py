"""
Alpha-level prediction sets and the validity threshold A.
"""
import logging
import math
from typing import Dict, Mapping, Tuple

from ..core.exceptions import DomainError
from ..core.models import BINARY_SPACE, JointModel, OutcomeSpace, PredictionSet, PredictiveDistribution
from ..polling.logistic import binary_labels


logger = logging.getLogger(__name__)


def check_alpha(alpha: float) -> None:
    """
    Raises:
        DomainError: If alpha is not in (0, 1).
    """
    if math.isnan(alpha) or not 0.0 < alpha < 1.0:
        raise DomainError(f"alpha must lie in (0, 1), got {alpha}")


def prediction_set(pi: PredictiveDistribution, alpha: float) -> PredictionSet:
    """
    All outcomes with probability strictly greater than alpha.

    The set may be empty when every probability is <= alpha.

    Raises:
        DomainError: If alpha is not in (0, 1).
    """
    check_alpha(alpha)
    members = tuple(label for label in pi.space.labels if pi.probs[label] > alpha)
    return PredictionSet(alpha=alpha, members=members)


def validity_threshold(model: JointModel) -> float:
    """
    A = min over x of the second smallest strictly positive pi_x(y).

    Ties count separately. Data values with fewer than two positive
    probabilities are skipped; if every data value is skipped, A = 1.
    """
    threshold = 1.0
    for dist in model.conditional:
        positives = sorted(p for p in dist.probs.values() if p > 0.0)
        if len(positives) < 2:
            continue
        threshold = min(threshold, positives[1])
    return threshold


def set_collapse_bounds(alpha: float, lam: float) -> Tuple[float, float]:
    """
    Fractions at which the logistic prediction set shrinks to a single candidate.

    The set is a singleton iff theta_hat <= low or theta_hat >= high.

    Raises:
        DomainError: If alpha is not in (0, 1/2) or lam <= 0.
    """
    if math.isnan(alpha) or not 0.0 < alpha < 0.5:
        raise DomainError(f"alpha must lie in (0, 1/2) for the bounds not to cross, got {alpha}")
    if not lam > 0:
        raise DomainError(f"lambda must be positive, got {lam}")
    low = 0.5 + math.log(alpha / (1.0 - alpha)) / lam
    high = 0.5 + math.log((1.0 - alpha) / alpha) / lam
    return low, high


def classify_forecasts(
    forecasts: Mapping[str, float],
    alpha: float,
    space: OutcomeSpace = BINARY_SPACE,
    target: str = "T",
) -> Dict[str, PredictionSet]:
    """
    Prediction sets for published binary forecasts.

    Each forecast is the probability of the non-target outcome, e.g. a reported
    chance for C; the target gets the complement.

    Raises:
        DomainError: If a forecast is outside [0, 1] or alpha is not in (0, 1).
    """
    target, other = binary_labels(space, target)
    sets = {}
    for name, p_other in forecasts.items():
        if math.isnan(p_other) or not 0.0 <= p_other <= 1.0:
            raise DomainError(f"forecast {name!r} is not a probability: {p_other}")
        pi = PredictiveDistribution(space=space, probs={other: p_other, target: 1.0 - p_other})
        sets[name] = prediction_set(pi, alpha)
        logger.debug("%s: %s at alpha=%g", name, list(sets[name].members), alpha)
    return sets
