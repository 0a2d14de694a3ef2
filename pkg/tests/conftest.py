import json

import numpy as np
import pytest

from valid_forecast.core.models import (
    BINARY_SPACE,
    JointModel,
    LogisticRuleParams,
    ModelEnsemble,
    OutcomeSpace,
    PollData,
    PredictiveDistribution,
)
from valid_forecast.polling.logistic import binomial_flat_joint
from valid_forecast.polling.nonresponse import imputation_ensemble


@pytest.fixture
def params_1000():
    return LogisticRuleParams(lam=10.0, n=1000)


@pytest.fixture(scope="session")
def logistic_model_1000():
    return binomial_flat_joint(LogisticRuleParams(lam=10.0, n=1000))


@pytest.fixture
def nonresponse_poll():
    """475 for C, 425 for T, 100 nonresponders."""
    return PollData(n=1000, counts={"C": 475, "T": 425}, nonresponse=100)


@pytest.fixture
def complete_poll():
    return PollData(n=1000, counts={"C": 530, "T": 470}, nonresponse=0)


@pytest.fixture(scope="session")
def extremes_ensemble():
    poll = PollData(n=1000, counts={"C": 475, "T": 425}, nonresponse=100)
    return imputation_ensemble(poll, LogisticRuleParams(lam=10.0, n=1000), grid_size=2)


def binary_dist(p_t: float) -> PredictiveDistribution:
    return PredictiveDistribution(space=BINARY_SPACE, probs={"T": p_t, "C": 1.0 - p_t})


def constant_model(p_t: float, n: int = 4) -> JointModel:
    """Same conditional at every data value, uniform marginal."""
    dist = binary_dist(p_t)
    return JointModel(
        space=BINARY_SPACE,
        data_values=tuple(range(n + 1)),
        marginal=(1.0 / (n + 1),) * (n + 1),
        conditional=(dist,) * (n + 1),
    )


def random_ensemble(seed: int, outcomes: int = 4, data_values: int = 3, members: int = 3) -> ModelEnsemble:
    """Members with Dirichlet conditionals over a shared space and data space."""
    rng = np.random.default_rng(seed)
    space = OutcomeSpace(labels=tuple(f"y{i}" for i in range(outcomes)))
    models = []
    for _ in range(members):
        rows = rng.dirichlet(np.ones(outcomes), size=data_values)
        conditional = tuple(
            PredictiveDistribution(space=space, probs=dict(zip(space.labels, map(float, row))))
            for row in rows
        )
        models.append(
            JointModel(
                space=space,
                data_values=tuple(range(data_values)),
                marginal=(1.0 / data_values,) * data_values,
                conditional=conditional,
            )
        )
    return ModelEnsemble(members=tuple(models))


@pytest.fixture
def write_json(tmp_path):
    def _write(name, payload):
        path = tmp_path / name
        path.write_text(json.dumps(payload), encoding="utf-8")
        return path

    return _write
