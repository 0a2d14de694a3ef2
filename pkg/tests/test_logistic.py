import math

import pytest
from hypothesis import given
from hypothesis import strategies as st
from pydantic import ValidationError

from valid_forecast.core.exceptions import DomainError, InputError, PollDataError
from valid_forecast.core.models import LogisticRuleParams, OutcomeSpace, PollData
from valid_forecast.polling.logistic import (
    binomial_flat_joint,
    logistic_probability,
    logistic_rule,
    theta_hat,
    uninformative_joint,
)

_theta = st.floats(min_value=0.0, max_value=1.0, allow_nan=False)
_lam = st.floats(min_value=0.01, max_value=100.0, allow_nan=False)


@pytest.mark.unit
class TestLogisticRule:
    def test_worked_example_x470(self, params_1000):
        pi = logistic_rule(0.47, params_1000)
        assert round(pi.probs["T"], 3) == 0.426
        assert round(pi.probs["C"], 3) == 0.574

    def test_half_is_even_odds(self):
        for lam in (0.5, 10.0, 250.0):
            pi = logistic_rule(0.5, LogisticRuleParams(lam=lam, n=10))
            assert pi.probs["T"] == 0.5
            assert pi.probs["C"] == 0.5

    def test_hidden_vote_extreme(self, params_1000):
        assert round(logistic_rule(0.525, params_1000).probs["T"], 3) == 0.562

    def test_theta_06_is_e_over_one_plus_e(self, params_1000):
        assert logistic_rule(0.6, params_1000).probs["T"] == pytest.approx(math.e / (1 + math.e), rel=1e-12)

    def test_complement_sums_to_one(self, params_1000):
        pi = logistic_rule(0.31, params_1000)
        assert pi.probs["C"] == 1.0 - pi.probs["T"]

    @pytest.mark.parametrize("bad", [-0.01, 1.01, float("nan")])
    def test_theta_outside_unit_interval(self, params_1000, bad):
        with pytest.raises(DomainError):
            logistic_rule(bad, params_1000)

    @pytest.mark.parametrize("lam", [0.0, -1.0])
    def test_nonpositive_lambda_rejected(self, lam):
        with pytest.raises(ValidationError):
            LogisticRuleParams(lam=lam, n=10)
        with pytest.raises(DomainError):
            logistic_probability(0.5, lam)

    def test_lambda_alias(self):
        assert LogisticRuleParams.model_validate({"lambda": 5, "n": 3}).lam == 5.0

    def test_theta_digits_rounds_before_evaluating(self):
        exact = logistic_rule(425 / 900, LogisticRuleParams(lam=10.0, n=900))
        rounded = logistic_rule(425 / 900, LogisticRuleParams(lam=10.0, n=900, theta_digits=3))
        assert round(exact.probs["T"], 3) == 0.431
        assert round(rounded.probs["T"], 3) == 0.430
        assert round(rounded.probs["C"], 3) == 0.570

    def test_custom_labels(self):
        space = OutcomeSpace(labels=("clinton", "trump"))
        pi = logistic_rule(0.47, LogisticRuleParams(lam=10.0, n=100), space, target="trump")
        assert round(pi.probs["trump"], 3) == 0.426

    def test_non_binary_space_rejected(self, params_1000):
        with pytest.raises(InputError):
            logistic_rule(0.5, params_1000, OutcomeSpace(labels=("A", "B", "C")), target="A")

    @given(a=_theta, b=_theta, lam=_lam)
    def test_monotone_in_theta(self, a, b, lam):
        low, high = sorted((a, b))
        assert logistic_probability(low, lam) <= logistic_probability(high, lam)

    @given(a=st.floats(min_value=0.0, max_value=0.49), lam=_lam)
    def test_strictly_increasing_on_separated_points(self, a, lam):
        assert logistic_probability(a, lam) < logistic_probability(a + 0.5, lam)

    @given(theta=_theta, lam=_lam)
    def test_symmetry(self, theta, lam):
        params = LogisticRuleParams(lam=lam, n=1)
        assert logistic_rule(theta, params).probs["T"] == pytest.approx(
            logistic_rule(1.0 - theta, params).probs["C"], abs=1e-12
        )


@pytest.mark.unit
class TestBinomialFlatJoint:
    def test_uniform_marginal_n4(self):
        model = binomial_flat_joint(LogisticRuleParams(lam=10.0, n=4))
        assert model.data_values == (0, 1, 2, 3, 4)
        assert model.marginal == pytest.approx((0.2,) * 5)

    def test_conditional_at_470(self, logistic_model_1000):
        assert round(logistic_model_1000.conditional_at(470).probs["T"], 3) == 0.426

    def test_n2_table(self):
        model = binomial_flat_joint(LogisticRuleParams(lam=10.0, n=2))
        low = 1.0 / (1.0 + math.exp(5.0))
        expected_t = [low, 0.5, 1.0 - low]
        for x, p_t in zip(model.data_values, expected_t):
            dist = model.conditional_at(x)
            assert dist.probs["T"] == pytest.approx(p_t, rel=1e-12)
            assert dist.probs["C"] == pytest.approx(1.0 - p_t, rel=1e-12)

    def test_marginal_sums_to_one(self, logistic_model_1000):
        assert math.fsum(logistic_model_1000.marginal) == pytest.approx(1.0, abs=1e-12)

    def test_unknown_data_value(self, logistic_model_1000):
        with pytest.raises(InputError):
            logistic_model_1000.conditional_at(1001)

    def test_uninformative(self):
        model = uninformative_joint(10)
        assert all(dist.probs == {"C": 0.5, "T": 0.5} for dist in model.conditional)


@pytest.mark.unit
class TestThetaHat:
    def test_extremes(self, nonresponse_poll):
        assert theta_hat(nonresponse_poll, "T", 0) == pytest.approx(0.425)
        assert theta_hat(nonresponse_poll, "T", 100) == pytest.approx(0.525)

    def test_no_missing_data(self, complete_poll):
        assert theta_hat(complete_poll, "T", 0) == pytest.approx(0.47)

    def test_unknown_target(self, complete_poll):
        with pytest.raises(InputError):
            theta_hat(complete_poll, "Z", 0)

    def test_imputed_out_of_range(self, nonresponse_poll):
        with pytest.raises(DomainError):
            theta_hat(nonresponse_poll, "T", 101)

    def test_empty_poll(self):
        with pytest.raises(PollDataError):
            theta_hat(PollData(n=0, counts={"C": 0, "T": 0}), "T", 0)
