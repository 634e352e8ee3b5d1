"""Goodness-of-fit statistics used to validate the samplers."""

import numpy as np
from scipy import stats as sps

__all__ = ["ks_statistic", "chi_square_uniform", "empirical_cdf_sup_distance"]


def ks_statistic(sample_a, sample_b=None, cdf=None):
    """Kolmogorov-Smirnov test.

    Two-sample when ``sample_b`` is given, one-sample against the callable
    ``cdf`` otherwise.  Returns (statistic, p-value) with the p-value from
    the asymptotic Kolmogorov distribution.
    """
    if (sample_b is None) == (cdf is None):
        raise ValueError("provide exactly one of sample_b or cdf")
    a = np.asarray(sample_a, dtype=float)
    if sample_b is not None:
        res = sps.ks_2samp(a, np.asarray(sample_b, dtype=float), method="asymp")
    else:
        res = sps.kstest(a, np.vectorize(cdf, otypes=[float]))
    return float(res.statistic), float(res.pvalue)


def chi_square_uniform(values, bins, value_range=(-np.pi, np.pi)):
    """Chi-square test of uniformity over equal-width bins on ``value_range``.

    Returns (statistic, p-value) with bins - 1 degrees of freedom.
    """
    v = np.asarray(values, dtype=float)
    counts, _ = np.histogram(v, bins=bins, range=value_range)
    if counts.sum() != v.size:
        raise ValueError("values fall outside the stated range")
    expected = v.size / bins
    stat = float(((counts - expected) ** 2 / expected).sum())
    return stat, float(sps.chi2.sf(stat, bins - 1))


def empirical_cdf_sup_distance(sample, cdf, grid=None):
    """Sup distance between the empirical CDF of ``sample`` and the callable
    ``cdf`` evaluated on ``grid`` (default: the sorted sample itself)."""
    x = np.sort(np.asarray(sample, dtype=float))
    n = x.size
    if grid is None:
        target = np.array([cdf(v) for v in x])
        upper = np.arange(1, n + 1) / n
        lower = np.arange(0, n) / n
        return float(max(np.abs(upper - target).max(), np.abs(lower - target).max()))
    grid = np.asarray(grid, dtype=float)
    emp = np.searchsorted(x, grid, side="right") / n
    target = np.array([cdf(v) for v in grid])
    return float(np.abs(emp - target).max())
