"""
Main module for valid-forecast.
"""
import json
import logging
from pathlib import Path
from typing import Dict, Mapping, Optional, Sequence, Tuple

import pandas as pd
from pydantic import ValidationError

from .core.config import Settings, settings
from .core.exceptions import ConfigurationError, DomainError, InputError, PollDataError
from .core.models import (
    ConditionalTable,
    EnsembleValidityReport,
    JointModel,
    LogisticRuleParams,
    MiscoverageCurve,
    OutletReport,
    PlausibilityReport,
    PollData,
    PredictReport,
    SimulationReport,
    ValidityReport,
)
from .polling.logistic import binomial_flat_joint, logistic_probability, uninformative_joint
from .polling.nonresponse import imputation_ensemble, imputation_thetas, naive_mar_rule, naive_mar_theta
from .prediction.plausibility import (
    check_ensemble_validity,
    plausibility_assignment,
    plausibility_prediction_set,
)
from .prediction.sets import classify_forecasts, prediction_set
from .prediction.validity import check_validity, default_alpha_grid, miscoverage_cdf, monte_carlo_miscoverage


logger = logging.getLogger(__name__)

# Reported chances for C on the morning of the 2016 election.
OUTLETS_2016: Dict[str, float] = {
    "FiveThirtyEight": 0.72,
    "The New York Times": 0.91,
    "The Huffington Post": 0.98,
    "Princeton Election Consortium": 0.99,
}


def _read_json(path: Path) -> object:
    try:
        return json.loads(Path(path).read_text(encoding="utf-8"))
    except OSError as e:
        raise InputError(f"Cannot read {path}: {str(e)}")
    except json.JSONDecodeError as e:
        raise InputError(f"{path} is not valid JSON: {str(e)}")


def load_poll(path: Path) -> PollData:
    """
    Read a poll from a JSON file.

    Raises:
        PollDataError: If the JSON does not describe a consistent poll.
        InputError: If the file cannot be read or parsed.
    """
    data = _read_json(path)
    try:
        return PollData.model_validate(data)
    except ValidationError as e:
        raise PollDataError(f"Invalid poll in {path}: {str(e)}")


def load_joint_model(path: Path) -> JointModel:
    """
    Read a user-supplied conditional table from a JSON file.

    Raises:
        InputError: If the JSON does not describe a valid joint model.
    """
    data = _read_json(path)
    try:
        return ConditionalTable.model_validate(data).to_joint_model()
    except ValidationError as e:
        raise InputError(f"Invalid joint model in {path}: {str(e)}")


class PollForecaster:
    """
    Valid prediction sets and plausibilities for poll-based forecasts.
    """

    def __init__(
        self,
        lam: Optional[float] = None,
        alpha: Optional[float] = None,
        grid_size: Optional[int] = None,
        target: Optional[str] = None,
        theta_digits: Optional[int] = None,
        exact_theta: bool = False,
        config: Settings = settings,
    ):
        """
        Initialize the forecaster.

        Args:
            lam: Logistic sharpness. Defaults to config.default_lambda.
            alpha: Prediction-set level. Defaults to config.default_alpha.
            grid_size: Imputation grid size. Defaults to config.default_grid_size.
            target: Outcome modelled by the logistic rule. Defaults to config.target_label.
            theta_digits: Decimals theta_hat is rounded to in the naive missing-at-random
                report. Defaults to config.theta_digits.
            exact_theta: Evaluate the naive report at the unrounded theta_hat.
            config: Settings to read defaults and limits from.
        """
        self.config = config
        self.lam = config.default_lambda if lam is None else lam
        self.alpha = config.default_alpha if alpha is None else alpha
        self.grid_size = config.default_grid_size if grid_size is None else grid_size
        self.target = target or config.target_label
        self.theta_digits = config.theta_digits if theta_digits is None else theta_digits
        if exact_theta:
            self.theta_digits = None

    def params_for(self, n: int, theta_digits: Optional[int] = None) -> LogisticRuleParams:
        """
        Logistic rule parameters for a poll of size n.

        Enumeration models use the exact theta_hat; only the naive report passes theta_digits.

        Raises:
            DomainError: If lambda, n or theta_digits are out of range.
        """
        try:
            return LogisticRuleParams(lam=self.lam, n=n, theta_digits=theta_digits)
        except ValidationError as e:
            raise DomainError(f"Invalid model parameters: {str(e)}")

    def predict(self, poll: PollData) -> PredictReport:
        """
        Prediction set from the missing-at-random estimate.

        Raises:
            PollDataError: If the poll is not a two-candidate poll with responders.
            DomainError: If alpha or lambda are out of range.
        """
        params = self.params_for(poll.n, self.theta_digits)
        pi = naive_mar_rule(poll, params, self.target)
        pset = prediction_set(pi, self.alpha)
        if pset.is_empty:
            logger.warning("Empty prediction set at alpha=%g", self.alpha)
        return PredictReport(
            theta_hat=naive_mar_theta(poll, self.target),
            lam=self.lam,
            alpha=self.alpha,
            probabilities={label: pi.probs[label] for label in pi.space.labels},
            prediction_set=list(pset.members),
            too_close_to_call=not pset.is_singleton,
            empty_set=pset.is_empty,
        )

    def plausibility(self, poll: PollData, check_validity: bool = False) -> PlausibilityReport:
        """
        Plausibilities over the nonresponse ensemble, at the observed count for the target.

        Args:
            poll: A two-candidate poll.
            check_validity: Also verify the plausibility set's validity under every member.

        Raises:
            PollDataError: If the poll is not a two-candidate poll.
            DomainError: If alpha, lambda or grid_size are out of range.
            EnumerationSizeError: If check_validity is set and a member is too large.
        """
        params = self.params_for(poll.n)
        ensemble = imputation_ensemble(poll, params, self.grid_size, self.target)
        thetas = imputation_thetas(poll, self.grid_size, self.target)
        x = poll.counts[self.target]
        assignment = plausibility_assignment(ensemble, x)
        pset = plausibility_prediction_set(ensemble, x, self.alpha)
        if pset.is_empty:
            logger.warning("Empty plausibility prediction set at alpha=%g", self.alpha)
        validity = self.ensemble_validity(poll) if check_validity else None
        return PlausibilityReport(
            x=x,
            lam=self.lam,
            alpha=self.alpha,
            grid_size=self.grid_size,
            theta_hat_range=(min(thetas), max(thetas)),
            plausibility=assignment.to_report(self.config.json_decimals),
            prediction_set=list(pset.members),
            naive_mar=self.predict(poll),
            ensemble_validity=validity,
        )

    def ensemble_validity(self, poll: PollData) -> EnsembleValidityReport:
        """Exact validity of the plausibility set under each member of the nonresponse ensemble."""
        ensemble = imputation_ensemble(poll, self.params_for(poll.n), self.grid_size, self.target)
        return check_ensemble_validity(ensemble, self.alpha, self.config.enumeration_limit)

    def logistic_curve(self, points: Optional[int] = None) -> pd.DataFrame:
        """(theta_hat, pi_T) on an even grid over [0, 1]."""
        points = self.config.curve_points if points is None else points
        if points < 2:
            raise DomainError(f"a curve needs at least two points, got {points}")
        thetas = [i / (points - 1) for i in range(points)]
        values = [logistic_probability(theta, self.lam) for theta in thetas]
        return pd.DataFrame({"theta_hat": thetas, f"pi_{self.target}": values})

    def joint_model(self, n: int, uninformative: bool = False) -> JointModel:
        if uninformative:
            return uninformative_joint(n)
        return binomial_flat_joint(self.params_for(n))

    def miscoverage_curve(self, n: int, uninformative: bool = False) -> MiscoverageCurve:
        """Exact G for the binomial/flat logistic model (or the uninformative one)."""
        return miscoverage_cdf(self.joint_model(n, uninformative), self.config.enumeration_limit)

    def validity(
        self,
        n: Optional[int] = None,
        alpha_grid: Optional[Sequence[float]] = None,
        uninformative: bool = False,
        model: Optional[JointModel] = None,
    ) -> ValidityReport:
        """
        Exact validity check on an alpha grid.

        Args:
            n: Poll size of the binomial/flat model. Ignored when model is given.
            alpha_grid: Levels to check. Defaults to the configured grid.
            uninformative: Use the uninformative poll model instead of the logistic one.
            model: A user-supplied joint model.
        """
        if model is None:
            if n is None:
                raise InputError("Either a poll size or a joint model is required")
            model = self.joint_model(n, uninformative)
        if alpha_grid is None:
            alpha_grid = self.default_grid()
        return check_validity(model, alpha_grid, self.config.enumeration_limit)

    def default_grid(self) -> Tuple[float, ...]:
        """
        The configured alpha grid.

        Raises:
            ConfigurationError: If the grid settings do not describe a valid grid.
        """
        try:
            return default_alpha_grid(
                self.config.alpha_grid_points, self.config.alpha_grid_low, self.config.alpha_grid_high
            )
        except DomainError as e:
            raise ConfigurationError(f"Invalid alpha grid settings: {str(e)}")

    def simulate(self, n: int, trials: Optional[int] = None, seed: Optional[int] = None) -> SimulationReport:
        """
        Monte Carlo miscoverage of the binomial/flat logistic model, next to the exact value.
        """
        trials = self.config.monte_carlo_trials if trials is None else trials
        seed = self.config.default_seed if seed is None else seed
        model = self.joint_model(n)
        result = monte_carlo_miscoverage(model, self.alpha, trials, seed)
        exact = miscoverage_cdf(model, self.config.enumeration_limit).evaluate(self.alpha)
        deviation = None
        if result.std_error > 0:
            deviation = abs(result.estimate - exact) / result.std_error
        return SimulationReport(
            n=n,
            lam=self.lam,
            alpha=self.alpha,
            trials=trials,
            seed=seed,
            estimate=result.estimate,
            std_error=result.std_error,
            exact=exact,
            deviation_in_std_errors=deviation,
        )

    def outlets(self, forecasts: Optional[Mapping[str, float]] = None) -> OutletReport:
        """Prediction sets for published chances of the non-target candidate."""
        forecasts = OUTLETS_2016 if forecasts is None else forecasts
        sets = classify_forecasts(forecasts, self.alpha, target=self.target)
        return OutletReport(alpha=self.alpha, prediction_sets={name: list(s.members) for name, s in sets.items()})
