"""
CDF family behind the hypothesis tests: Student t, F and the studentized range.

All evaluation is delegated to scipy.stats (incomplete-beta based t and F,
numerically integrated studentized range). With two groups the studentized
range reduces to sqrt(2) * |T|, which is used directly.
"""
import logging
import math

from scipy import stats

logger = logging.getLogger(__name__)


class StatsError(ValueError):
    """Base class for statistics errors."""


class DegenerateInputError(StatsError):
    """Samples too small, too few, or not finite."""


class InvalidParametersError(StatsError):
    """Distribution parameters outside their domain."""


def _check_df(df: float, name: str = "df") -> float:
    df = float(df)
    if math.isnan(df) or df <= 0:
        logger.error(f"Invalid degrees of freedom {name}={df}")
        raise InvalidParametersError(f"{name} must be > 0, got {df}")
    return df


def _check_k(k: int) -> int:
    if int(k) != k or k < 2:
        raise InvalidParametersError(f"Number of groups must be an integer >= 2, got {k}")
    return int(k)


def _probability(p: float) -> float:
    return float(min(1.0, max(0.0, p)))


# --- Student t ---

def t_cdf(x: float, df: float) -> float:
    df = _check_df(df)
    if math.isinf(df):
        return _probability(stats.norm.cdf(x))
    return _probability(stats.t.cdf(x, df))


def t_two_sided_p(t_stat: float, df: float) -> float:
    df = _check_df(df)
    if math.isinf(df):
        return _probability(2.0 * stats.norm.sf(abs(t_stat)))
    return _probability(2.0 * stats.t.sf(abs(t_stat), df))


# --- F ---

def f_cdf(x: float, dfn: float, dfd: float) -> float:
    dfn, dfd = _check_df(dfn, "dfn"), _check_df(dfd, "dfd")
    return _probability(stats.f.cdf(x, dfn, dfd))


def f_sf(x: float, dfn: float, dfd: float) -> float:
    dfn, dfd = _check_df(dfn, "dfn"), _check_df(dfd, "dfd")
    return _probability(stats.f.sf(x, dfn, dfd))


# --- Studentized range ---

def studentized_range_cdf(q: float, k: int, df: float) -> float:
    """
    P(Q <= q) for the range of k standard normal means studentized by an
    independent chi estimate with df degrees of freedom (df may be inf).
    """
    k, df = _check_k(k), _check_df(df)
    if q <= 0:
        return 0.0
    if k == 2:
        return _probability(1.0 - t_two_sided_p(q / math.sqrt(2.0), df))
    return _probability(stats.studentized_range.cdf(q, k, df))


def studentized_range_sf(q: float, k: int, df: float) -> float:
    """Upper tail P(Q > q); the p-value of a Tukey q statistic."""
    k, df = _check_k(k), _check_df(df)
    if math.isinf(q):
        return 0.0
    if q <= 0:
        return 1.0
    if k == 2:
        return t_two_sided_p(q / math.sqrt(2.0), df)
    return _probability(stats.studentized_range.sf(q, k, df))


def studentized_range_critical(alpha: float, k: int, df: float) -> float:
    """
    Critical value q such that P(Q > q) = alpha.

    Raises:
        InvalidParametersError: If alpha is outside (0, 1) or k, df are invalid.
    """
    if not 0.0 < alpha < 1.0:
        raise InvalidParametersError(f"alpha must lie in (0, 1), got {alpha}")
    k, df = _check_k(k), _check_df(df)
    if k == 2:
        quantile = stats.norm.isf(alpha / 2.0) if math.isinf(df) else stats.t.isf(alpha / 2.0, df)
        return float(math.sqrt(2.0) * quantile)
    return float(stats.studentized_range.isf(alpha, k, df))
