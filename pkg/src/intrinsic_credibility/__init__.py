"""Intrinsic credibility of significant findings.

Reverse-Bayes tools built on a normal likelihood: the sceptical prior implied
by a confidence interval, the prior-predictive (Box) conflict check, the
p-value threshold and credibility-ratio forms of that check, the p-value for
intrinsic credibility and the replication probability derived from it.
"""

from ._accel import backend
from .core import (
    CREDIBILITY_RATIO_BOUND,
    CredibilityReport,
    EffectEstimate,
    NormalSummary,
    ScepticalPrior,
    SymmetricInterval,
    assess,
    box_statistic_sq,
    box_statistic_sq_from_interval,
    credibility_ratio,
    credibility_verdicts,
    derive_sceptical_prior,
    estimate_to_interval,
    interval_to_estimate,
    intrinsic_credibility_threshold,
    matthews_credibility_check,
    matthews_threshold,
    p_box,
    p_intrinsic,
    p_replication,
    posterior_from_prior,
    sceptical_prior_variance,
    scepticism_limit,
)
from .errors import DomainError, NotSignificantError
from .simulation import (
    SimulationConfig,
    SimulationResult,
    closed_form_flip,
    simulate_replication,
)
from .special import chisq1_upper_tail, std_normal_cdf, std_normal_quantile

__version__ = "0.1.0"
