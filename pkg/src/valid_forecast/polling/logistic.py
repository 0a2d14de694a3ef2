"""
Poll-based joint models: the logistic prediction rule and the binomial/flat-prior joint model.
"""
import logging
import math
from typing import Optional, Tuple

from scipy.special import expit

from ..core.exceptions import DomainError, InputError, PollDataError
from ..core.models import (
    BINARY_SPACE,
    JointModel,
    LogisticRuleParams,
    OutcomeSpace,
    PollData,
    PredictiveDistribution,
)


logger = logging.getLogger(__name__)


def binary_labels(space: OutcomeSpace, target: str) -> Tuple[str, str]:
    """
    Split a two-outcome space into (target, other).

    Raises:
        InputError: If the space is not binary or does not contain the target.
    """
    if space.size != 2:
        raise InputError(f"The logistic rule needs exactly two outcomes, got {list(space.labels)}")
    if target not in space:
        raise InputError(f"Target {target!r} is not one of {list(space.labels)}")
    other = next(label for label in space.labels if label != target)
    return target, other


def logistic_probability(theta_hat: float, lam: float, theta_digits: Optional[int] = None) -> float:
    """
    exp{lam (theta_hat - 1/2)} / (1 + exp{lam (theta_hat - 1/2)}).

    Raises:
        DomainError: If theta_hat is outside [0, 1] or lam <= 0.
    """
    if math.isnan(theta_hat) or not 0.0 <= theta_hat <= 1.0:
        raise DomainError(f"theta_hat must lie in [0, 1], got {theta_hat}")
    if not lam > 0:
        raise DomainError(f"lambda must be positive, got {lam}")
    if theta_digits is not None:
        theta_hat = round(theta_hat, theta_digits)
    return float(expit(lam * (theta_hat - 0.5)))


def logistic_rule(
    theta_hat: float,
    params: LogisticRuleParams,
    space: OutcomeSpace = BINARY_SPACE,
    target: str = "T",
) -> PredictiveDistribution:
    """
    Predictive distribution of the logistic rule at an observed fraction.

    The target gets the logistic probability and the other outcome its complement,
    so the two always sum to one.

    Args:
        theta_hat: Observed fraction supporting the target, in [0, 1].
        params: Sharpness and poll size.
        space: A two-outcome space.
        target: The outcome whose support theta_hat measures.

    Returns:
        The predictive distribution over `space`.

    Raises:
        DomainError: If theta_hat is outside [0, 1] or lambda <= 0.
        InputError: If the space is not binary or lacks the target.
    """
    target, other = binary_labels(space, target)
    p_target = logistic_probability(theta_hat, params.lam, params.theta_digits)
    return PredictiveDistribution(space=space, probs={target: p_target, other: 1.0 - p_target})


def binomial_flat_joint(
    params: LogisticRuleParams,
    space: OutcomeSpace = BINARY_SPACE,
    target: str = "T",
) -> JointModel:
    """
    Binomial poll with a flat prior: X is uniform on {0, ..., n} and Y | X=x follows
    the logistic rule at x/n.
    """
    n = params.n
    data_values = tuple(range(n + 1))
    weight = 1.0 / (n + 1)
    conditional = tuple(logistic_rule(x / n, params, space, target) for x in data_values)
    logger.debug("Built binomial/flat joint model with n=%d, lambda=%g", n, params.lam)
    return JointModel(
        space=space,
        data_values=data_values,
        marginal=(weight,) * (n + 1),
        conditional=conditional,
    )


def uninformative_joint(n: int, space: OutcomeSpace = BINARY_SPACE) -> JointModel:
    """
    A poll model whose data says nothing: every data value predicts the uniform distribution.
    """
    if n < 1:
        raise DomainError(f"poll size must be at least 1, got {n}")
    uniform = PredictiveDistribution(space=space, probs={label: 1.0 / space.size for label in space.labels})
    return JointModel(
        space=space,
        data_values=tuple(range(n + 1)),
        marginal=(1.0 / (n + 1),) * (n + 1),
        conditional=(uniform,) * (n + 1),
    )


def theta_hat(poll: PollData, target: str, imputed_to_target: int = 0) -> float:
    """
    Observed fraction for `target` after assigning some nonresponders to it.

    Raises:
        InputError: If the target is not in the poll.
        DomainError: If imputed_to_target is outside [0, nonresponse].
        PollDataError: If nobody was polled.
    """
    if target not in poll.counts:
        raise InputError(f"Target {target!r} is not in the poll counts {sorted(poll.counts)}")
    if not 0 <= imputed_to_target <= poll.nonresponse:
        raise DomainError(
            f"imputed_to_target must lie in [0, {poll.nonresponse}], got {imputed_to_target}"
        )
    if poll.n == 0:
        raise PollDataError("The poll is empty (n=0)")
    return (poll.counts[target] + imputed_to_target) / poll.n
