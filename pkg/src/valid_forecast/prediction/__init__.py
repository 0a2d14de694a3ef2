"""Prediction sets, validity checks and plausibilities."""
from .plausibility import (
    bet_decision,
    check_ensemble_validity,
    lower_probability,
    plausibility_assignment,
    plausibility_prediction_set,
    upper_probability,
)
from .sets import prediction_set, set_collapse_bounds, validity_threshold
from .validity import check_validity, miscoverage_cdf, monte_carlo_miscoverage

__all__ = [
    "bet_decision",
    "check_ensemble_validity",
    "check_validity",
    "lower_probability",
    "miscoverage_cdf",
    "monte_carlo_miscoverage",
    "plausibility_assignment",
    "plausibility_prediction_set",
    "prediction_set",
    "set_collapse_bounds",
    "upper_probability",
    "validity_threshold",
]
