import pytest

from valid_forecast.core.exceptions import DomainError, PollDataError
from valid_forecast.core.models import LogisticRuleParams, PollData
from valid_forecast.polling.logistic import logistic_probability
from valid_forecast.polling.nonresponse import (
    imputation_ensemble,
    imputation_fractions,
    imputation_thetas,
    naive_mar_rule,
    naive_mar_theta,
)
from valid_forecast.prediction.plausibility import plausibility_assignment, plausibility_prediction_set
from valid_forecast.prediction.sets import prediction_set


@pytest.mark.unit
class TestImputationGrid:
    def test_extremes(self, nonresponse_poll):
        assert imputation_thetas(nonresponse_poll, 2) == pytest.approx((0.425, 0.525))

    def test_three_point_grid(self, nonresponse_poll):
        assert imputation_thetas(nonresponse_poll, 3) == pytest.approx((0.425, 0.475, 0.525))

    def test_fractions_include_endpoints(self, nonresponse_poll):
        fractions = imputation_fractions(nonresponse_poll, 11)
        assert fractions[0] == 0.0 and fractions[-1] == 1.0
        assert len(fractions) == 11

    def test_no_nonresponse_gives_one_fraction(self, complete_poll):
        assert imputation_fractions(complete_poll, 5) == (0.0,)

    def test_grid_size_at_least_two(self, nonresponse_poll):
        with pytest.raises(DomainError):
            imputation_fractions(nonresponse_poll, 1)


@pytest.mark.unit
class TestImputationEnsemble:
    def test_member_count(self, nonresponse_poll, params_1000):
        assert len(imputation_ensemble(nonresponse_poll, params_1000, grid_size=7)) == 7

    def test_members_at_observed_count(self, extremes_ensemble):
        low, high = extremes_ensemble.members
        assert low.conditional_at(425).probs["T"] == logistic_probability(0.425, 10.0)
        assert high.conditional_at(425).probs["T"] == logistic_probability(0.525, 10.0)

    def test_marginal_is_uniform(self, extremes_ensemble):
        for member in extremes_ensemble.members:
            assert set(member.marginal) == {1.0 / 1001}

    def test_theta_capped_at_one(self):
        poll = PollData(n=10, counts={"C": 0, "T": 8}, nonresponse=2)
        ensemble = imputation_ensemble(poll, LogisticRuleParams(lam=10.0, n=10))
        assert ensemble.members[1].conditional_at(10).probs["T"] == logistic_probability(1.0, 10.0)

    @pytest.mark.parametrize("grid_size", [2, 5, 101])
    def test_refinement_does_not_change_bounds(self, nonresponse_poll, params_1000, grid_size):
        coarse = plausibility_assignment(imputation_ensemble(nonresponse_poll, params_1000, 2), 425)
        fine = plausibility_assignment(imputation_ensemble(nonresponse_poll, params_1000, grid_size), 425)
        assert fine.upper == coarse.upper
        assert fine.lower == coarse.lower

    def test_complete_poll_is_a_single_model(self, complete_poll, params_1000):
        ensemble = imputation_ensemble(complete_poll, params_1000, grid_size=5)
        assert len(ensemble) == 1
        assignment = plausibility_assignment(ensemble, 470)
        assert assignment.dont_know["T"] == pytest.approx(0.0, abs=1e-12)
        mar = prediction_set(naive_mar_rule(complete_poll, params_1000), 0.05)
        assert plausibility_prediction_set(ensemble, 470, 0.05).members == mar.members

    def test_size_mismatch(self, nonresponse_poll):
        with pytest.raises(PollDataError):
            imputation_ensemble(nonresponse_poll, LogisticRuleParams(lam=10.0, n=999))

    def test_three_candidates_rejected(self, params_1000):
        poll = PollData(n=1000, counts={"C": 400, "T": 400, "J": 100}, nonresponse=100)
        with pytest.raises(PollDataError):
            imputation_ensemble(poll, params_1000)


@pytest.mark.unit
class TestNaiveMar:
    def test_responder_share(self, nonresponse_poll):
        assert naive_mar_theta(nonresponse_poll) == pytest.approx(425 / 900)

    def test_probability(self, nonresponse_poll, params_1000):
        assert round(naive_mar_rule(nonresponse_poll, params_1000).probs["T"], 3) == 0.431

    def test_rounded_theta_reproduces_published_value(self, nonresponse_poll):
        params = LogisticRuleParams(lam=10.0, n=1000, theta_digits=3)
        pi = naive_mar_rule(nonresponse_poll, params)
        assert round(pi.probs["T"], 3) == 0.430
        assert round(pi.probs["C"], 3) == 0.570

    def test_sandwiched_by_plausibility(self, nonresponse_poll, params_1000, extremes_ensemble):
        assignment = plausibility_assignment(extremes_ensemble, 425)
        pi = naive_mar_rule(nonresponse_poll, params_1000)
        for label in ("C", "T"):
            assert assignment.lower[label] <= pi.probs[label] <= assignment.upper[label]

    def test_everyone_missing(self):
        poll = PollData(n=10, counts={"C": 0, "T": 0}, nonresponse=10)
        with pytest.raises(PollDataError):
            naive_mar_theta(poll)
        assert imputation_thetas(poll, 2) == (0.0, 1.0)
