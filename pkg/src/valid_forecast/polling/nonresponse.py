"""
Model ensembles for polls with nonresponse.

Each member assigns a fraction f of the nonresponders to the target candidate,
for f on an even grid over [0, 1]. The endpoints f=0 and f=1 are always
present. The logistic rule is monotone in theta_hat, so the ensemble's upper
and lower probabilities are attained there and a finite grid is exact.
"""
import logging
from typing import Tuple

import numpy as np

from ..core.exceptions import DomainError, PollDataError
from ..core.models import (
    JointModel,
    LogisticRuleParams,
    ModelEnsemble,
    OutcomeSpace,
    PollData,
    PredictiveDistribution,
)
from .logistic import binary_labels, logistic_rule


logger = logging.getLogger(__name__)


def _check_binary_poll(poll: PollData, target: str) -> None:
    if not poll.is_binary:
        raise PollDataError(f"Nonresponse ensembles need a two-candidate poll, got {sorted(poll.counts)}")
    if poll.n == 0:
        raise PollDataError("The poll is empty (n=0)")
    binary_labels(poll.space, target)


def imputation_fractions(poll: PollData, grid_size: int) -> Tuple[float, ...]:
    """
    Fractions of nonresponders given to the target, 0 and 1 included.

    With no nonresponse every fraction gives the same model, so only f=0 is kept.
    """
    if grid_size < 2:
        raise DomainError(f"grid_size must be at least 2, got {grid_size}")
    if poll.nonresponse == 0:
        return (0.0,)
    return tuple(float(f) for f in np.linspace(0.0, 1.0, grid_size))


def imputation_thetas(poll: PollData, grid_size: int = 2, target: str = "T") -> Tuple[float, ...]:
    """theta_hat(f) = (counts[target] + f * nonresponse) / n for each imputation fraction."""
    _check_binary_poll(poll, target)
    return tuple(
        (poll.counts[target] + f * poll.nonresponse) / poll.n
        for f in imputation_fractions(poll, grid_size)
    )


def _imputed_joint(
    params: LogisticRuleParams,
    space: OutcomeSpace,
    target: str,
    imputed: float,
) -> JointModel:
    # Uniform marginal over 0..n as in the no-nonresponse model; theta_hat is
    # capped at 1 for counts that leave no room for the imputed nonresponders.
    n = params.n
    data_values = tuple(range(n + 1))
    conditional = tuple(
        logistic_rule(min(1.0, (x + imputed) / n), params, space, target) for x in data_values
    )
    return JointModel(
        space=space,
        data_values=data_values,
        marginal=(1.0 / (n + 1),) * (n + 1),
        conditional=conditional,
    )


def imputation_ensemble(
    poll: PollData,
    params: LogisticRuleParams,
    grid_size: int = 2,
    target: str = "T",
) -> ModelEnsemble:
    """
    One binomial/flat joint model per imputation fraction.

    At the observed data value x = counts[target], member f uses
    theta_hat = (counts[target] + f * nonresponse) / n.

    Args:
        poll: A two-candidate poll.
        params: Logistic sharpness; params.n must equal poll.n.
        grid_size: Number of fractions on [0, 1], at least 2.
        target: The candidate the logistic rule models.

    Returns:
        The ensemble, a singleton when there is no nonresponse.

    Raises:
        PollDataError: If the poll is not binary or does not match params.n.
        DomainError: If grid_size < 2.
    """
    _check_binary_poll(poll, target)
    if params.n != poll.n:
        raise PollDataError(f"Model poll size {params.n} does not match the poll's n={poll.n}")
    fractions = imputation_fractions(poll, grid_size)
    members = tuple(
        _imputed_joint(params, poll.space, target, f * poll.nonresponse) for f in fractions
    )
    logger.debug(
        "Imputation ensemble with %d members for %d nonresponders", len(members), poll.nonresponse
    )
    return ModelEnsemble(members=members)


def naive_mar_theta(poll: PollData, target: str = "T") -> float:
    """
    theta_hat under missing-at-random: the target's share among responders.

    Raises:
        PollDataError: If nobody responded.
    """
    _check_binary_poll(poll, target)
    if poll.responses == 0:
        raise PollDataError("Every polled person is a nonresponder; the responder share is undefined")
    return poll.counts[target] / poll.responses


def naive_mar_rule(poll: PollData, params: LogisticRuleParams, target: str = "T") -> PredictiveDistribution:
    """
    Logistic rule at the missing-at-random estimate, i.e. ignoring nonresponders.
    """
    return logistic_rule(naive_mar_theta(poll, target), params, poll.space, target)
