"""Reverse-Bayes assessment of intrinsic credibility.

Everything works on an additive effect scale (differences, log odds ratios,
log hazard ratios, ...) with a normal likelihood and known standard error.
A confidence interval ``[L, U]`` at level ``gamma`` is the primary input; the
matching estimate is its midpoint and the standard error follows from the
half-width.

The sceptical prior is the zero-mean normal prior that, combined with the
data, gives a posterior whose level-``gamma`` interval just touches zero.
A significant finding is *intrinsically credible* when it conflicts with
that prior under the prior-predictive (Box) check.  Four equivalent forms
of the check are available:

* ``p <= alpha_ic(alpha)``
* ``t_box^2 >= z^2``
* ``U / L <= 3 + 2 sqrt(2)``
* ``tau^2 <= sigma^2``

Ties count as credible.  Because the four quantities are computed along
different floating-point routes, a tie is recognised within a relative
tolerance of :data:`TIE_RTOL`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import DomainError, NotSignificantError
from .special import (
    normal_upper_tail,
    std_normal_cdf_vec,
    std_normal_quantile,
    std_normal_quantile_vec,
    chisq1_upper_tail,
    chisq1_upper_tail_vec,
)

SQRT2 = math.sqrt(2.0)

#: Upper bound on the credibility ratio U/L for intrinsic credibility.
CREDIBILITY_RATIO_BOUND = 3.0 + 2.0 * math.sqrt(2.0)

#: Multiplier of z_{alpha/2} in Matthews' threshold, as published (4 s.f.).
MATTHEWS_FACTOR = 1.272

#: Relative tolerance under which two sides of a credibility inequality tie.
TIE_RTOL = 1e-12


def _check_probability(value: float, name: str) -> float:
    value = float(value)
    if not (0.0 < value < 1.0):
        raise DomainError(f"{name} must lie strictly between 0 and 1, got {value!r}")
    return value


def critical_value(alpha: float) -> float:
    """Two-sided critical value z_{alpha/2}, i.e. the 1 - alpha/2 normal quantile."""
    alpha = _check_probability(alpha, "alpha")
    # Lower-tail evaluation keeps full precision for tiny alpha.
    return -std_normal_quantile(0.5 * alpha)


def two_sided_p(t: float) -> float:
    """Two-sided p-value 2 * (1 - Phi(|t|)) of a z statistic."""
    return 2.0 * normal_upper_tail(abs(t))


# ---------------------------------------------------------------------------
# Value types
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SymmetricInterval:
    """Two-sided confidence interval ``[lower, upper]`` at confidence ``level``."""

    lower: float
    upper: float
    level: float = 0.95

    def __post_init__(self):
        if not (math.isfinite(self.lower) and math.isfinite(self.upper)):
            raise DomainError("interval limits must be finite")
        if not self.lower < self.upper:
            raise DomainError(
                f"invalid interval: lower ({self.lower!r}) must be below upper ({self.upper!r})"
            )
        _check_probability(self.level, "level")

    @property
    def alpha(self) -> float:
        return 1.0 - self.level

    @property
    def significant(self) -> bool:
        return (self.lower > 0.0 and self.upper > 0.0) or (self.lower < 0.0 and self.upper < 0.0)


@dataclass(frozen=True)
class EffectEstimate:
    """Point estimate with its (known) standard error."""

    estimate: float
    std_error: float

    def __post_init__(self):
        if not (math.isfinite(self.estimate) and math.isfinite(self.std_error)):
            raise DomainError("estimate and standard error must be finite")
        if not self.std_error > 0.0:
            raise DomainError(f"standard error must be positive, got {self.std_error!r}")

    @property
    def t(self) -> float:
        return self.estimate / self.std_error


@dataclass(frozen=True)
class ScepticalPrior:
    """Zero-mean normal prior with variance tau^2 and scepticism limit S.

    ``[-S, S]`` is the prior's equi-tailed credible interval at ``level``.
    """

    variance: float
    scepticism_limit: float
    level: float

    @property
    def std(self) -> float:
        return math.sqrt(self.variance)

    def as_normal(self) -> NormalSummary:
        return NormalSummary(0.0, self.variance)


@dataclass(frozen=True)
class NormalSummary:
    mean: float
    variance: float

    def __post_init__(self):
        if not self.variance > 0.0:
            raise DomainError(f"variance must be positive, got {self.variance!r}")

    def quantile(self, prob: float) -> float:
        return self.mean + math.sqrt(self.variance) * std_normal_quantile(prob)

    def interval(self, level: float) -> tuple[float, float]:
        """Equi-tailed interval at ``level``."""
        half = critical_value(1.0 - level) * math.sqrt(self.variance)
        return self.mean - half, self.mean + half


@dataclass(frozen=True)
class CredibilityReport:
    """All quantities derived from one confidence interval.

    Fields that only exist for significant intervals (the Box statistic and
    its tail probability, the credibility ratio) are ``None`` otherwise, and
    both credibility flags are then ``False``.
    """

    p_value: float
    t_statistic: float
    box_statistic_sq: Optional[float]
    p_box: Optional[float]
    p_ic: float
    p_rep: float
    credibility_ratio: Optional[float]
    alpha_ic: float
    significant: bool
    intrinsically_credible_box: bool
    intrinsically_credible_matthews: bool

    def as_dict(self) -> dict:
        return {
            "p_value": self.p_value,
            "t_statistic": self.t_statistic,
            "box_statistic_sq": self.box_statistic_sq,
            "p_box": self.p_box,
            "p_ic": self.p_ic,
            "p_rep": self.p_rep,
            "credibility_ratio": self.credibility_ratio,
            "alpha_ic": self.alpha_ic,
            "significant": self.significant,
            "intrinsically_credible_box": self.intrinsically_credible_box,
            "intrinsically_credible_matthews": self.intrinsically_credible_matthews,
        }


# ---------------------------------------------------------------------------
# Conversions
# ---------------------------------------------------------------------------

def interval_to_estimate(ci: SymmetricInterval) -> EffectEstimate:
    z = critical_value(ci.alpha)
    return EffectEstimate(0.5 * (ci.lower + ci.upper), (ci.upper - ci.lower) / (2.0 * z))


def estimate_to_interval(est: EffectEstimate, level: float = 0.95) -> SymmetricInterval:
    level = _check_probability(level, "level")
    half = critical_value(1.0 - level) * est.std_error
    return SymmetricInterval(est.estimate - half, est.estimate + half, level)


def _require_significant(ci: SymmetricInterval) -> None:
    if not ci.significant:
        raise NotSignificantError(
            f"interval [{ci.lower!r}, {ci.upper!r}] includes zero; not significant at level {ci.level}"
        )


def _require_t_significant(est: EffectEstimate, z: float, alpha: float) -> float:
    t2 = est.t ** 2
    if not t2 > z * z:
        raise NotSignificantError(
            f"t^2 = {t2:.6g} does not exceed z^2 = {z * z:.6g}; not significant at alpha = {alpha}"
        )
    return t2


# ---------------------------------------------------------------------------
# Sceptical prior
# ---------------------------------------------------------------------------

def scepticism_limit(ci: SymmetricInterval) -> float:
    """Half-width S = (U - L)^2 / (4 sqrt(U L)) of the critical prior interval."""
    _require_significant(ci)
    lo, hi = (ci.lower, ci.upper) if ci.lower > 0 else (-ci.upper, -ci.lower)
    return (hi - lo) ** 2 / (4.0 * math.sqrt(hi * lo))


def sceptical_prior_variance(est: EffectEstimate, alpha: float) -> float:
    """tau^2 = sigma^2 / (t^2 / z^2 - 1).

    Raises :class:`NotSignificantError` unless ``t^2 > z_{alpha/2}^2``.
    """
    z = critical_value(alpha)
    t2 = _require_t_significant(est, z, alpha)
    return est.std_error ** 2 / (t2 / (z * z) - 1.0)


def derive_sceptical_prior(ci: SymmetricInterval) -> ScepticalPrior:
    _require_significant(ci)
    est = interval_to_estimate(ci)
    return ScepticalPrior(
        variance=sceptical_prior_variance(est, ci.alpha),
        scepticism_limit=scepticism_limit(ci),
        level=ci.level,
    )


def posterior_from_prior(prior: NormalSummary, est: EffectEstimate) -> NormalSummary:
    """Conjugate normal-normal update of ``prior`` with the likelihood ``est``."""
    prior_precision = 1.0 / prior.variance
    data_precision = 1.0 / est.std_error ** 2
    variance = 1.0 / (prior_precision + data_precision)
    mean = variance * (prior.mean * prior_precision + est.estimate * data_precision)
    return NormalSummary(mean, variance)


# ---------------------------------------------------------------------------
# Box prior-predictive check
# ---------------------------------------------------------------------------

def box_statistic_sq(est: EffectEstimate, alpha: float) -> float:
    """Squared prior-predictive statistic theta^2 / (tau^2 + sigma^2) = t^2 - z^2."""
    z = critical_value(alpha)
    t2 = _require_t_significant(est, z, alpha)
    return t2 - z * z


def box_statistic_sq_from_interval(ci: SymmetricInterval) -> float:
    """Same statistic from the interval limits: z^2 * 4UL / (U - L)^2.

    Free of the cancellation in ``t^2 - z^2`` for borderline intervals.
    """
    _require_significant(ci)
    z = critical_value(ci.alpha)
    return z * z * 4.0 * ci.upper * ci.lower / (ci.upper - ci.lower) ** 2


def p_box(est: EffectEstimate, alpha: float) -> float:
    """Tail probability Pr(chi2(1) >= t_box^2); small values flag prior-data conflict."""
    return chisq1_upper_tail(box_statistic_sq(est, alpha))


# ---------------------------------------------------------------------------
# Thresholds
# ---------------------------------------------------------------------------

def intrinsic_credibility_threshold(alpha: float) -> float:
    """p-value threshold alpha_IC = 2 (1 - Phi(sqrt(2) z_{alpha/2})).

    A result with two-sided ``p <= alpha_IC`` is intrinsically credible at
    level ``1 - alpha``.  ``intrinsic_credibility_threshold(0.05)`` is about
    0.0056.
    """
    return two_sided_p(SQRT2 * critical_value(alpha))


def matthews_threshold(alpha: float) -> float:
    """Matthews' threshold 2 (1 - Phi(1.272 z_{alpha/2})), which ignores the
    sampling uncertainty of the estimate."""
    return two_sided_p(MATTHEWS_FACTOR * critical_value(alpha))


def matthews_credibility_check(est: EffectEstimate, prior: ScepticalPrior) -> bool:
    """True when the estimate lies strictly outside ``[-S, S]``."""
    return abs(est.estimate) > prior.scepticism_limit


def credibility_ratio(ci: SymmetricInterval) -> float:
    """U/L for positive intervals, L/U for negative ones."""
    _require_significant(ci)
    if ci.lower > 0:
        return ci.upper / ci.lower
    return ci.lower / ci.upper


def is_credible_ratio(ratio: float) -> bool:
    return ratio <= CREDIBILITY_RATIO_BOUND * (1.0 + TIE_RTOL)


# ---------------------------------------------------------------------------
# p-value for intrinsic credibility and replication probability
# ---------------------------------------------------------------------------

def p_intrinsic(p: float) -> float:
    """p-value for intrinsic credibility, 2 (1 - Phi(t / sqrt(2))) with t = Phi^-1(1 - p/2)."""
    p = _check_probability(p, "p")
    t = -std_normal_quantile(0.5 * p)
    return two_sided_p(t / SQRT2)


def p_intrinsic_from_t(t: float) -> float:
    return two_sided_p(t / SQRT2)


def p_replication(p_ic: float) -> float:
    """Probability that an identical replication gives an estimate of the same sign."""
    p_ic = float(p_ic)
    if not (0.0 <= p_ic <= 1.0):
        raise DomainError(f"p_ic must lie in [0, 1], got {p_ic!r}")
    return 1.0 - 0.5 * p_ic


# ---------------------------------------------------------------------------
# Full assessment
# ---------------------------------------------------------------------------

def assess(ci: SymmetricInterval) -> CredibilityReport:
    """Run every credibility computation on ``ci``.

    Never raises for an interval that covers zero: the report comes back with
    ``significant=False`` and the Box fields set to ``None``.
    """
    alpha = ci.alpha
    z = critical_value(alpha)
    est = interval_to_estimate(ci)
    t = est.t
    p = two_sided_p(t)
    p_ic = p_intrinsic_from_t(t)
    alpha_ic = intrinsic_credibility_threshold(alpha)

    if not ci.significant:
        return CredibilityReport(
            p_value=p,
            t_statistic=t,
            box_statistic_sq=None,
            p_box=None,
            p_ic=p_ic,
            p_rep=p_replication(p_ic),
            credibility_ratio=None,
            alpha_ic=alpha_ic,
            significant=False,
            intrinsically_credible_box=False,
            intrinsically_credible_matthews=False,
        )

    tb2 = box_statistic_sq_from_interval(ci)
    prior = derive_sceptical_prior(ci)
    return CredibilityReport(
        p_value=p,
        t_statistic=t,
        box_statistic_sq=tb2,
        p_box=chisq1_upper_tail(tb2),
        p_ic=p_ic,
        p_rep=p_replication(p_ic),
        credibility_ratio=credibility_ratio(ci),
        alpha_ic=alpha_ic,
        significant=True,
        intrinsically_credible_box=tb2 >= z * z * (1.0 - TIE_RTOL),
        intrinsically_credible_matthews=matthews_credibility_check(est, prior),
    )


def credibility_verdicts(lower, upper, level):
    """Vectorised form of the four credibility criteria.

    Parameters
    ----------
    lower, upper, level : array_like
        Interval limits and confidence levels, broadcast together.  All
        intervals must be significant.

    Returns
    -------
    dict of ndarray
        Boolean arrays ``by_p``, ``by_box``, ``by_p_box``, ``by_ratio`` and
        ``by_variance``, one per equivalent criterion, plus the numeric arrays they were
        computed from.
    """
    lower, upper, level = np.broadcast_arrays(
        np.asarray(lower, dtype=np.float64),
        np.asarray(upper, dtype=np.float64),
        np.asarray(level, dtype=np.float64),
    )
    if not np.all((lower * upper > 0) & (lower < upper)):
        raise NotSignificantError("credibility_verdicts requires significant intervals")
    alpha = 1.0 - level
    z = -std_normal_quantile_vec(0.5 * alpha)
    estimate = 0.5 * (lower + upper)
    sigma = (upper - lower) / (2.0 * z)
    t = estimate / sigma
    p = 2.0 * std_normal_cdf_vec(-np.abs(t))
    alpha_ic = 2.0 * std_normal_cdf_vec(-SQRT2 * z)
    tb2 = z * z * 4.0 * upper * lower / (upper - lower) ** 2
    ratio = np.where(lower > 0, upper / lower, lower / upper)
    p_box_arr = chisq1_upper_tail_vec(tb2)
    tau2 = sigma ** 2 / (t ** 2 / z ** 2 - 1.0)
    return {
        "p": p,
        "alpha_ic": alpha_ic,
        "box_statistic_sq": tb2,
        "p_box": p_box_arr,
        "credibility_ratio": ratio,
        "prior_variance": tau2,
        "data_variance": sigma ** 2,
        "by_p": p <= alpha_ic * (1.0 + TIE_RTOL),
        "by_box": tb2 >= z * z * (1.0 - TIE_RTOL),
        "by_p_box": p_box_arr <= alpha * (1.0 + TIE_RTOL),
        "by_ratio": ratio <= CREDIBILITY_RATIO_BOUND * (1.0 + TIE_RTOL),
        "by_variance": tau2 <= sigma ** 2 * (1.0 + TIE_RTOL),
    }


def threshold_curves(alpha):
    """alpha_IC and Matthews' threshold over an array of significance levels."""
    alpha = np.asarray(alpha, dtype=np.float64)
    z = -std_normal_quantile_vec(0.5 * alpha)
    return 2.0 * std_normal_cdf_vec(-SQRT2 * z), 2.0 * std_normal_cdf_vec(-MATTHEWS_FACTOR * z)


def p_intrinsic_vec(p):
    """:func:`p_intrinsic` over an array of p-values (NaN outside (0, 1))."""
    p = np.asarray(p, dtype=np.float64)
    t = -std_normal_quantile_vec(0.5 * p)
    return 2.0 * std_normal_cdf_vec(-t / SQRT2)
