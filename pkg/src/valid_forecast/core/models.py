"""
Core data models for valid-forecast.

All models are frozen: they are immutable after construction and safe to share
across threads.
"""
import math
from bisect import bisect_right
from enum import Enum
from typing import Dict, Iterable, List, Optional, Tuple, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from .exceptions import InputError

# Tolerance for "sums to one" checks on probability vectors.
PROB_TOLERANCE = 1e-9

DataValue = Union[int, str]


class FrozenModel(BaseModel):
    """Base for immutable domain types."""
    model_config = ConfigDict(frozen=True)


class BetDecision(str, Enum):
    """Outcome of offering a bet on an event B at a given price."""
    ACCEPT_B = "accept_B"
    ACCEPT_COMPLEMENT = "accept_complement"
    ABSTAIN = "abstain"


class CurveKind(str, Enum):
    """Plot data that can be emitted as TSV."""
    LOGISTIC = "logistic"
    MISCOVERAGE = "miscoverage"


class OutcomeSpace(FrozenModel):
    """
    The finite set of outcomes (candidates).

    Labels are kept in lexicographic order so serialisation is reproducible.
    """
    labels: Tuple[str, ...]

    @field_validator("labels")
    @classmethod
    def validate_labels(cls, v):
        """Labels must be distinct, non-empty, and at least two."""
        if any(not label for label in v):
            raise ValueError("outcome labels must be non-empty strings")
        if len(set(v)) != len(v):
            raise ValueError(f"outcome labels must be unique: {list(v)}")
        if len(v) < 2:
            raise ValueError("an outcome space needs at least two labels")
        return tuple(sorted(v))

    @property
    def size(self) -> int:
        return len(self.labels)

    def __contains__(self, label: object) -> bool:
        return label in self.labels

    def index(self, label: str) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise InputError(f"Unknown outcome label {label!r}; expected one of {list(self.labels)}")

    def subset(self, labels: Iterable[str]) -> Tuple[str, ...]:
        """
        Normalise an event to a sorted tuple of labels.

        Raises:
            InputError: If a label is not part of the space.
        """
        chosen = set(labels)
        unknown = sorted(chosen - set(self.labels))
        if unknown:
            raise InputError(f"Unknown outcome labels {unknown}; expected a subset of {list(self.labels)}")
        return tuple(label for label in self.labels if label in chosen)

    def complement(self, labels: Iterable[str]) -> Tuple[str, ...]:
        chosen = set(self.subset(labels))
        return tuple(label for label in self.labels if label not in chosen)


BINARY_SPACE = OutcomeSpace(labels=("C", "T"))


class PollData(FrozenModel):
    """
    A single poll: n people polled, per-outcome counts, and the number who did not respond.
    """
    n: int = Field(..., ge=0)
    counts: Dict[str, int]
    nonresponse: int = Field(0, ge=0)

    @field_validator("counts")
    @classmethod
    def validate_counts(cls, v):
        """Counts must be non-negative and keyed by non-empty labels."""
        for label, count in v.items():
            if not label:
                raise ValueError("poll labels must be non-empty strings")
            if count < 0:
                raise ValueError(f"count for {label!r} is negative: {count}")
        return v

    @model_validator(mode="after")
    def check_total(self):
        """The counts identity: sum(counts) + nonresponse = n."""
        total = sum(self.counts.values()) + self.nonresponse
        if total != self.n:
            raise ValueError(
                f"counts sum to {sum(self.counts.values())} and nonresponse is {self.nonresponse}, "
                f"which totals {total}, not n={self.n}"
            )
        return self

    @property
    def responses(self) -> int:
        return self.n - self.nonresponse

    @property
    def space(self) -> OutcomeSpace:
        return OutcomeSpace(labels=tuple(self.counts))

    @property
    def is_binary(self) -> bool:
        return len(self.counts) == 2


class PredictiveDistribution(FrozenModel):
    """
    The conditional distribution of the outcome given one data value.
    """
    space: OutcomeSpace
    probs: Dict[str, float]

    @model_validator(mode="after")
    def check_distribution(self):
        """Every outcome has a probability in [0, 1] and they sum to one."""
        if set(self.probs) != set(self.space.labels):
            raise ValueError(
                f"probabilities given for {sorted(self.probs)} but the space is {list(self.space.labels)}"
            )
        for label, p in self.probs.items():
            if not 0.0 <= p <= 1.0 or math.isnan(p):
                raise ValueError(f"probability of {label!r} is outside [0, 1]: {p}")
        total = math.fsum(self.probs.values())
        if abs(total - 1.0) > PROB_TOLERANCE:
            raise ValueError(f"probabilities sum to {total}, not 1")
        return self

    def prob(self, label: str) -> float:
        if label not in self.probs:
            raise InputError(f"Unknown outcome label {label!r}; expected one of {list(self.space.labels)}")
        return self.probs[label]

    def mass(self, labels: Iterable[str]) -> float:
        """Probability of an event, summed in label order."""
        return math.fsum(self.probs[label] for label in self.space.subset(labels))

    def as_array(self) -> np.ndarray:
        return np.array([self.probs[label] for label in self.space.labels], dtype=float)


class LogisticRuleParams(FrozenModel):
    """
    Parameters of the logistic prediction rule.

    `lam` is the sharpness (serialised as "lambda"). When `theta_digits` is set,
    the observed fraction is rounded half-even to that many decimals first.
    """
    model_config = ConfigDict(frozen=True, populate_by_name=True)

    lam: float = Field(..., gt=0, alias="lambda")
    n: int = Field(..., ge=1)
    theta_digits: Optional[int] = Field(None, ge=0)


class JointModel(FrozenModel):
    """
    A joint distribution for (data, outcome) on a finite data space.

    `marginal` and `conditional` are aligned with `data_values`.
    """
    space: OutcomeSpace
    data_values: Tuple[DataValue, ...]
    marginal: Tuple[float, ...]
    conditional: Tuple[PredictiveDistribution, ...]

    @model_validator(mode="after")
    def check_joint(self):
        """Marginal is a pmf over the data values and every conditional shares the space."""
        if not self.data_values:
            raise ValueError("a joint model needs at least one data value")
        if len(set(self.data_values)) != len(self.data_values):
            raise ValueError("data values must be unique")
        if len(self.marginal) != len(self.data_values):
            raise ValueError(
                f"marginal has {len(self.marginal)} entries for {len(self.data_values)} data values"
            )
        if len(self.conditional) != len(self.data_values):
            raise ValueError(
                f"conditional has {len(self.conditional)} entries for {len(self.data_values)} data values"
            )
        for weight in self.marginal:
            if not 0.0 <= weight <= 1.0 or math.isnan(weight):
                raise ValueError(f"marginal weight outside [0, 1]: {weight}")
        total = math.fsum(self.marginal)
        if abs(total - 1.0) > PROB_TOLERANCE:
            raise ValueError(f"marginal sums to {total}, not 1")
        for dist in self.conditional:
            if dist.space != self.space:
                raise ValueError(
                    f"conditional over {list(dist.space.labels)} does not match space {list(self.space.labels)}"
                )
        return self

    @property
    def pair_count(self) -> int:
        return len(self.data_values) * self.space.size

    def index_of(self, x: DataValue) -> int:
        try:
            return self.data_values.index(x)
        except ValueError:
            raise InputError(f"Unknown data value {x!r}")

    def marginal_of(self, x: DataValue) -> float:
        return self.marginal[self.index_of(x)]

    def conditional_at(self, x: DataValue) -> PredictiveDistribution:
        return self.conditional[self.index_of(x)]

    def marginal_array(self) -> np.ndarray:
        return np.array(self.marginal, dtype=float)

    def probability_matrix(self) -> np.ndarray:
        """Conditional probabilities, one row per data value, columns in label order."""
        return np.vstack([dist.as_array() for dist in self.conditional])


class ConditionalTable(BaseModel):
    """
    Compact JSON form of a joint model, for user-supplied conditional tables.

    Example::

        {"labels": ["A", "B", "C"], "data_values": [0, 1],
         "marginal": [0.5, 0.5],
         "conditional": [{"A": 0.01, "B": 0.04, "C": 0.95},
                         {"A": 0.2, "B": 0.3, "C": 0.5}]}
    """
    labels: List[str]
    data_values: List[DataValue]
    marginal: List[float]
    conditional: List[Dict[str, float]]

    def to_joint_model(self) -> JointModel:
        space = OutcomeSpace(labels=tuple(self.labels))
        return JointModel(
            space=space,
            data_values=tuple(self.data_values),
            marginal=tuple(self.marginal),
            conditional=tuple(PredictiveDistribution(space=space, probs=row) for row in self.conditional),
        )


class PredictionSet(FrozenModel):
    """
    The outcomes whose (upper) probability strictly exceeds alpha.
    """
    alpha: float = Field(..., gt=0, lt=1)
    members: Tuple[str, ...]

    @property
    def is_empty(self) -> bool:
        return not self.members

    @property
    def is_singleton(self) -> bool:
        return len(self.members) == 1

    def __contains__(self, label: object) -> bool:
        return label in self.members


class MiscoverageCurve(FrozenModel):
    """
    The distribution function G(pi) = P{pi_X(Y) <= pi} as a right-continuous step function.

    `points` holds (pi, G(pi)) at 0, every attained value of pi_X(Y), and 1.
    """
    points: Tuple[Tuple[float, float], ...]
    threshold: float

    @model_validator(mode="after")
    def check_curve(self):
        """Points start at 0, end at 1, and G is nondecreasing with G(1) = 1."""
        if len(self.points) < 2:
            raise ValueError("a miscoverage curve needs at least the endpoints 0 and 1")
        pis = [pi for pi, _ in self.points]
        values = [g for _, g in self.points]
        if pis[0] != 0.0 or pis[-1] != 1.0:
            raise ValueError("a miscoverage curve must start at pi=0 and end at pi=1")
        if any(b <= a for a, b in zip(pis, pis[1:])):
            raise ValueError("curve abscissae must be strictly increasing")
        if any(b < a for a, b in zip(values, values[1:])):
            raise ValueError("G must be nondecreasing")
        if abs(values[-1] - 1.0) > PROB_TOLERANCE:
            raise ValueError(f"G(1) is {values[-1]}, not 1")
        return self

    def evaluate(self, pi: float) -> float:
        """G at an arbitrary pi in [0, 1]."""
        pis = [p for p, _ in self.points]
        position = bisect_right(pis, pi) - 1
        if position < 0:
            return 0.0
        return self.points[position][1]


class ValidityReport(FrozenModel):
    """
    Exact miscoverage of the alpha-level prediction set on a grid of alpha values.
    """
    alpha_grid: Tuple[float, ...]
    miscoverage: Tuple[float, ...]
    holds: Tuple[bool, ...]
    threshold: float
    guarantee_holds: bool
    dominance_limit: float

    @model_validator(mode="after")
    def check_lengths(self):
        """Lists share a length and holds[i] <=> miscoverage[i] <= alpha[i]."""
        if not len(self.alpha_grid) == len(self.miscoverage) == len(self.holds):
            raise ValueError("alpha_grid, miscoverage and holds must have the same length")
        for alpha, miss, ok in zip(self.alpha_grid, self.miscoverage, self.holds):
            if ok != (miss <= alpha):
                raise ValueError(f"holds flag inconsistent at alpha={alpha}")
        return self

    @property
    def all_hold(self) -> bool:
        return all(self.holds)


class ModelEnsemble(FrozenModel):
    """
    A finite collection of candidate joint models sharing one outcome space and data space.
    """
    members: Tuple[JointModel, ...] = Field(..., min_length=1)

    @model_validator(mode="after")
    def check_shared(self):
        """All members share outcome labels and data values."""
        first = self.members[0]
        for member in self.members[1:]:
            if member.space != first.space:
                raise ValueError("ensemble members must share one outcome space")
            if member.data_values != first.data_values:
                raise ValueError("ensemble members must share one data space")
        return self

    @property
    def space(self) -> OutcomeSpace:
        return self.members[0].space

    @property
    def data_values(self) -> Tuple[DataValue, ...]:
        return self.members[0].data_values

    def __len__(self) -> int:
        return len(self.members)


class PlausibilityAssignment(FrozenModel):
    """
    Per-outcome upper and lower probabilities and the "don't know" mass between them.
    """
    space: OutcomeSpace
    upper: Dict[str, float]
    lower: Dict[str, float]
    dont_know: Dict[str, float]

    @model_validator(mode="after")
    def check_bounds(self):
        """0 <= lower <= upper <= 1 and dont_know = upper - lower for every outcome."""
        for label in self.space.labels:
            lo, hi, gap = self.lower[label], self.upper[label], self.dont_know[label]
            if not 0.0 <= lo <= hi <= 1.0:
                raise ValueError(f"bounds for {label!r} violate 0 <= lower <= upper <= 1: {lo}, {hi}")
            if gap != hi - lo:
                raise ValueError(f"dont_know for {label!r} must equal upper - lower")
        return self

    def bounds(self, event: Iterable[str]) -> Tuple[float, float]:
        """
        Lower and upper probability of an event.

        Only events derivable from the per-outcome values are supported: the
        empty event, the whole space, singletons, and complements of singletons.

        Raises:
            InputError: For events that need the full ensemble (see event_bounds).
        """
        labels = self.space.subset(event)
        complement = self.space.complement(labels)
        if not labels:
            return 0.0, 0.0
        if not complement:
            return 1.0, 1.0
        if len(labels) == 1:
            return self.lower[labels[0]], self.upper[labels[0]]
        if len(complement) == 1:
            other = complement[0]
            return 1.0 - self.upper[other], 1.0 - self.lower[other]
        raise InputError(
            f"bounds for {list(labels)} cannot be derived from per-outcome values; use event_bounds"
        )

    def to_report(self, decimals: int = 6) -> Dict[str, Dict[str, float]]:
        """{outcome: {upper, lower, dont_know}} rounded half-even."""
        return {
            label: {
                "upper": round(self.upper[label], decimals),
                "lower": round(self.lower[label], decimals),
                "dont_know": round(self.dont_know[label], decimals),
            }
            for label in self.space.labels
        }


class MemberValidity(FrozenModel):
    """Exact checks for one ensemble member at a fixed alpha."""
    index: int
    hypothesis_miscoverage: float
    hypothesis_holds: bool
    own_set_miscoverage: float
    plausibility_set_miscoverage: float


class EnsembleValidityReport(FrozenModel):
    """
    Validity of the plausibility prediction set against every ensemble member.

    `validity_claimed` is only true when every member satisfies the hypothesis
    P{pi_X(Y) <= alpha} <= alpha and the worst member miscoverage is <= alpha.
    """
    alpha: float
    members: Tuple[MemberValidity, ...]
    max_miscoverage: float
    hypothesis_holds: bool
    validity_claimed: bool


class MonteCarloEstimate(FrozenModel):
    """Monte Carlo estimate of the miscoverage probability."""
    alpha: float
    trials: int
    seed: int
    estimate: float
    std_error: float


class ReportModel(BaseModel):
    """Base for CLI reports; fields may be set by name or by their JSON alias."""
    model_config = ConfigDict(populate_by_name=True)


class PredictReport(ReportModel):
    """Output of `valid-forecast predict`."""
    theta_hat: float
    lam: float = Field(..., alias="lambda")
    alpha: float
    probabilities: Dict[str, float]
    prediction_set: List[str]
    too_close_to_call: bool
    empty_set: bool


class PlausibilityReport(ReportModel):
    """Output of `valid-forecast plaus`."""
    x: DataValue
    lam: float = Field(..., alias="lambda")
    alpha: float
    grid_size: int
    theta_hat_range: Tuple[float, float]
    plausibility: Dict[str, Dict[str, float]]
    prediction_set: List[str]
    naive_mar: PredictReport
    ensemble_validity: Optional[EnsembleValidityReport] = None


class SimulationReport(ReportModel):
    """Output of `valid-forecast simulate`."""
    n: int
    lam: float = Field(..., alias="lambda")
    alpha: float
    trials: int
    seed: int
    estimate: float
    std_error: float
    exact: float
    deviation_in_std_errors: Optional[float]


class OutletReport(ReportModel):
    """Output of `valid-forecast outlets`."""
    alpha: float
    prediction_sets: Dict[str, List[str]]
