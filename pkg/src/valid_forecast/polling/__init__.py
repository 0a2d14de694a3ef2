"""Poll-based joint models and nonresponse ensembles."""
from .logistic import binomial_flat_joint, logistic_rule, theta_hat, uninformative_joint
from .nonresponse import imputation_ensemble, naive_mar_rule

__all__ = [
    "binomial_flat_joint",
    "imputation_ensemble",
    "logistic_rule",
    "naive_mar_rule",
    "theta_hat",
    "uninformative_joint",
]
