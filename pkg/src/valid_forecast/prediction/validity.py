"""
Exact and Monte Carlo checks of prediction-set validity.

Validity at level alpha means P{Pi_X(alpha) does not contain Y} <= alpha. Because
the set excludes exactly the outcomes with pi_x(y) <= alpha, the miscoverage is
G(alpha) = P{pi_X(Y) <= alpha}, which is computed here by full enumeration of
the (x, y) pairs.
"""
import logging
import math
from typing import Optional, Sequence, Tuple

import numpy as np

from ..core.exceptions import DomainError, EnumerationSizeError
from ..core.models import JointModel, MiscoverageCurve, MonteCarloEstimate, ValidityReport
from .sets import check_alpha, prediction_set, validity_threshold


logger = logging.getLogger(__name__)

DEFAULT_ENUMERATION_LIMIT = 10_000_000
# Trials per Philox stream. Changing it changes every seeded estimate.
DEFAULT_BLOCK_SIZE = 10_000


def check_enumerable(model: JointModel, enumeration_limit: int = DEFAULT_ENUMERATION_LIMIT) -> None:
    """
    Raises:
        EnumerationSizeError: If the model has more (x, y) pairs than the limit.
    """
    if model.pair_count > enumeration_limit:
        raise EnumerationSizeError(
            f"Model has {model.pair_count} (x, y) pairs; the enumeration limit is {enumeration_limit}"
        )


def default_alpha_grid(points: int = 512, low: float = 0.001, high: float = 0.999) -> Tuple[float, ...]:
    """Equally spaced alpha values from low to high, both included."""
    if points < 1:
        raise DomainError(f"an alpha grid needs at least one point, got {points}")
    if not 0.0 < low <= high < 1.0:
        raise DomainError(f"alpha grid bounds must satisfy 0 < low <= high < 1, got {low}, {high}")
    return tuple(float(a) for a in np.linspace(low, high, points))


def miscoverage_cdf(model: JointModel, enumeration_limit: int = DEFAULT_ENUMERATION_LIMIT) -> MiscoverageCurve:
    """
    Exact distribution function G(pi) = P{pi_X(Y) <= pi}.

    G is a step function with jumps at the attained values of pi_X(Y). It is
    returned at each of those values plus the endpoints 0 and 1.

    Raises:
        EnumerationSizeError: If the model is too large to enumerate.
    """
    check_enumerable(model, enumeration_limit)
    probs = model.probability_matrix()
    weights = model.marginal_array()[:, None] * probs

    values = probs.ravel()
    masses = weights.ravel()
    order = np.argsort(values, kind="stable")
    sorted_values = values[order]
    cumulative = np.cumsum(masses[order])

    distinct, first = np.unique(sorted_values, return_index=True)
    last = np.append(first[1:] - 1, len(sorted_values) - 1)

    points = []
    if distinct[0] > 0.0:
        points.append((0.0, 0.0))
    points.extend((float(v), float(g)) for v, g in zip(distinct, cumulative[last]))
    if distinct[-1] < 1.0:
        points.append((1.0, float(cumulative[-1])))

    logger.debug("Miscoverage curve has %d points over %d pairs", len(points), model.pair_count)
    return MiscoverageCurve(points=tuple(points), threshold=validity_threshold(model))


def direct_miscoverage(model: JointModel, alpha: float) -> float:
    """
    P{Pi_X(alpha) does not contain Y}, from the prediction set at every data value.

    Summed in data-value order.
    """
    check_alpha(alpha)
    total = 0.0
    for weight, dist in zip(model.marginal, model.conditional):
        pset = prediction_set(dist, alpha)
        missed = math.fsum(dist.probs[label] for label in dist.space.labels if label not in pset)
        total += weight * missed
    return total


def dominance_limit(curve: MiscoverageCurve) -> float:
    """
    Supremum of a such that G(alpha) <= alpha for every alpha < a.

    G is constant between attained values, so the first violation happens at
    an attained value v with G(v) > v. If there is none, the limit is 1.
    """
    for pi, g in curve.points:
        if g > pi:
            return pi
    return 1.0


def check_validity(
    model: JointModel,
    alpha_grid: Sequence[float],
    enumeration_limit: int = DEFAULT_ENUMERATION_LIMIT,
) -> ValidityReport:
    """
    Exact miscoverage of the alpha-level prediction set at each grid point.

    Args:
        model: The joint model to check.
        alpha_grid: Levels in (0, 1).
        enumeration_limit: Maximum number of (x, y) pairs to enumerate.

    Returns:
        A report with per-level miscoverage, whether validity holds, the
        threshold A and the dominance limit.

    Raises:
        DomainError: If a grid value is not in (0, 1).
        EnumerationSizeError: If the model is too large to enumerate.
    """
    for alpha in alpha_grid:
        check_alpha(alpha)
    curve = miscoverage_cdf(model, enumeration_limit)
    miscoverage = tuple(curve.evaluate(alpha) for alpha in alpha_grid)
    holds = tuple(miss <= alpha for alpha, miss in zip(alpha_grid, miscoverage))

    failures = [alpha for alpha, ok in zip(alpha_grid, holds) if alpha < curve.threshold and not ok]
    if failures:
        logger.warning(
            "Validity fails below A=%g at %d grid points (first alpha=%g)",
            curve.threshold, len(failures), failures[0],
        )
    return ValidityReport(
        alpha_grid=tuple(alpha_grid),
        miscoverage=miscoverage,
        holds=holds,
        threshold=curve.threshold,
        guarantee_holds=not failures,
        dominance_limit=dominance_limit(curve),
    )


def monte_carlo_miscoverage(
    model: JointModel,
    alpha: float,
    trials: int,
    seed: int,
    block_size: int = DEFAULT_BLOCK_SIZE,
) -> MonteCarloEstimate:
    """
    Estimate P{pi_X(Y) <= alpha} by sampling X from the marginal and Y from the conditional.

    Trials are split into fixed-size blocks and each block draws from its own
    Philox stream spawned from `seed`. The estimate depends only on
    (seed, trials, block_size), not on how blocks are scheduled. Reports always
    use DEFAULT_BLOCK_SIZE so a seed reproduces the same estimate everywhere.

    Raises:
        DomainError: If alpha is not in (0, 1), trials < 1 or seed < 0.
    """
    check_alpha(alpha)
    if trials < 1:
        raise DomainError(f"trials must be at least 1, got {trials}")
    if seed < 0:
        raise DomainError(f"seed must be non-negative, got {seed}")
    if block_size < 1:
        raise DomainError(f"block_size must be at least 1, got {block_size}")

    probs = model.probability_matrix()
    marginal = model.marginal_array()
    marginal = marginal / marginal.sum()
    cumulative = np.cumsum(probs, axis=1)
    last_outcome = probs.shape[1] - 1

    n_blocks = -(-trials // block_size)
    streams = np.random.SeedSequence(seed).spawn(n_blocks)
    misses = 0
    for index, stream in enumerate(streams):
        size = min(block_size, trials - index * block_size)
        rng = np.random.Generator(np.random.Philox(stream))
        xs = rng.choice(len(marginal), size=size, p=marginal)
        u = rng.random(size)
        ys = np.minimum((cumulative[xs] <= u[:, None]).sum(axis=1), last_outcome)
        misses += int(np.count_nonzero(probs[xs, ys] <= alpha))

    estimate = misses / trials
    std_error = math.sqrt(estimate * (1.0 - estimate) / trials)
    logger.debug("Monte Carlo: %d/%d misses at alpha=%g (seed=%d)", misses, trials, alpha, seed)
    return MonteCarloEstimate(alpha=alpha, trials=trials, seed=seed, estimate=estimate, std_error=std_error)
