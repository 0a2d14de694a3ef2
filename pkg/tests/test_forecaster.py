import logging

import pytest

from valid_forecast import PollForecaster, load_joint_model, load_poll
from valid_forecast import forecaster as forecaster_module
from valid_forecast.core.config import Settings
from valid_forecast.core.exceptions import ConfigurationError, DomainError, InputError, PollDataError
from valid_forecast.core.models import PollData
from valid_forecast.polling.logistic import logistic_probability
from valid_forecast.prediction.validity import DEFAULT_BLOCK_SIZE, monte_carlo_miscoverage


@pytest.fixture
def forecaster():
    return PollForecaster(lam=10.0, alpha=0.05, config=Settings(_env_file=None))


@pytest.mark.integration
class TestPollForecaster:
    def test_defaults_come_from_settings(self):
        config = Settings(_env_file=None, default_lambda=5.0, default_alpha=0.1, default_grid_size=4)
        forecaster = PollForecaster(config=config)
        assert (forecaster.lam, forecaster.alpha, forecaster.grid_size) == (5.0, 0.1, 4)

    def test_predict_reports_probabilities_in_label_order(self, forecaster, complete_poll):
        report = forecaster.predict(complete_poll)
        assert list(report.probabilities) == ["C", "T"]
        assert report.prediction_set == ["C", "T"]

    def test_predict_rounds_theta_hat_by_default(self, forecaster, nonresponse_poll):
        report = forecaster.predict(nonresponse_poll)
        assert round(report.probabilities["T"], 3) == 0.430
        assert round(report.probabilities["C"], 3) == 0.570

    def test_predict_with_exact_theta(self, nonresponse_poll):
        forecaster = PollForecaster(exact_theta=True, config=Settings(_env_file=None))
        assert forecaster.theta_digits is None
        assert round(forecaster.predict(nonresponse_poll).probabilities["T"], 3) == 0.431

    def test_rounding_only_touches_the_naive_report(self, nonresponse_poll):
        forecaster = PollForecaster(theta_digits=1, config=Settings(_env_file=None))
        report = forecaster.plausibility(nonresponse_poll)
        assert report.plausibility["T"]["upper"] == 0.562177
        assert report.naive_mar.probabilities["T"] == pytest.approx(0.5)
        exact = logistic_probability(0.25, 10.0)
        assert forecaster.joint_model(4).conditional_at(1).probs["T"] == pytest.approx(exact)
        curve = forecaster.logistic_curve(5)
        assert curve["pi_T"].iloc[1] == pytest.approx(exact)

    def test_empty_set_is_flagged(self, caplog):
        poll = PollData(n=10, counts={"C": 5, "T": 5})
        forecaster = PollForecaster(lam=10.0, alpha=0.5, config=Settings(_env_file=None))
        with caplog.at_level(logging.WARNING):
            report = forecaster.predict(poll)
        assert report.empty_set
        assert report.prediction_set == []
        assert "Empty prediction set" in caplog.text

    def test_plausibility_rounds_to_configured_decimals(self, nonresponse_poll):
        config = Settings(_env_file=None, json_decimals=3)
        report = PollForecaster(config=config).plausibility(nonresponse_poll)
        assert report.plausibility["C"] == {"upper": 0.679, "lower": 0.438, "dont_know": 0.241}
        assert report.theta_hat_range == pytest.approx((0.425, 0.525))

    def test_logistic_curve(self, forecaster):
        frame = forecaster.logistic_curve(5)
        assert list(frame.columns) == ["theta_hat", "pi_T"]
        assert frame["theta_hat"].tolist() == [0.0, 0.25, 0.5, 0.75, 1.0]

    def test_logistic_curve_needs_two_points(self, forecaster):
        with pytest.raises(DomainError):
            forecaster.logistic_curve(1)

    def test_validity_needs_a_model(self, forecaster):
        with pytest.raises(InputError):
            forecaster.validity()

    def test_bad_grid_settings(self):
        config = Settings(_env_file=None, alpha_grid_low=0.9, alpha_grid_high=0.1)
        with pytest.raises(ConfigurationError):
            PollForecaster(config=config).validity(10)

    def test_simulation_report(self, forecaster):
        report = forecaster.simulate(20, trials=2000, seed=3)
        assert report.trials == 2000
        assert 0.0 <= report.exact <= 0.05
        assert report.deviation_in_std_errors is None or report.deviation_in_std_errors >= 0.0

    def test_simulation_uses_the_pinned_block_size(self, forecaster):
        report = forecaster.simulate(40, trials=25_000, seed=9)
        model = forecaster.joint_model(40)
        expected = monte_carlo_miscoverage(model, 0.05, 25_000, 9, block_size=DEFAULT_BLOCK_SIZE)
        assert report.estimate == expected.estimate
        assert report.std_error == expected.std_error

    def test_zero_trials_is_not_replaced_by_the_default(self, forecaster):
        with pytest.raises(DomainError):
            forecaster.simulate(10, trials=0)

    def test_zero_points_is_not_replaced_by_the_default(self, forecaster):
        with pytest.raises(DomainError):
            forecaster.logistic_curve(0)

    def test_outlets_domain_error_propagates(self, forecaster):
        with pytest.raises(DomainError):
            forecaster.outlets({"mine": 1.4})

    def test_outlets_does_not_mask_unexpected_errors(self, forecaster, monkeypatch):
        def broken(*args, **kwargs):
            raise TypeError("broken")

        monkeypatch.setattr(forecaster_module, "classify_forecasts", broken)
        with pytest.raises(TypeError):
            forecaster.outlets()

    def test_params_domain(self):
        with pytest.raises(DomainError):
            PollForecaster(lam=-1.0, config=Settings(_env_file=None)).params_for(10)


@pytest.mark.integration
class TestLoaders:
    def test_load_poll(self, write_json):
        poll = load_poll(write_json("poll.json", {"n": 3, "counts": {"C": 1, "T": 1}, "nonresponse": 1}))
        assert poll.responses == 2

    def test_load_poll_inconsistent(self, write_json):
        with pytest.raises(PollDataError):
            load_poll(write_json("poll.json", {"n": 4, "counts": {"C": 1, "T": 1}}))

    def test_load_joint_model(self, write_json):
        path = write_json(
            "model.json",
            {
                "labels": ["A", "B"],
                "data_values": ["lo", "hi"],
                "marginal": [0.25, 0.75],
                "conditional": [{"A": 0.9, "B": 0.1}, {"A": 0.4, "B": 0.6}],
            },
        )
        model = load_joint_model(path)
        assert model.data_values == ("lo", "hi")
        assert model.marginal_of("hi") == 0.75

    def test_load_joint_model_rejects_bad_rows(self, write_json):
        path = write_json(
            "model.json",
            {"labels": ["A", "B"], "data_values": [0], "marginal": [1.0], "conditional": [{"A": 0.9, "B": 0.2}]},
        )
        with pytest.raises(InputError):
            load_joint_model(path)
