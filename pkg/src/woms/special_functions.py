"""Elementary special functions used by the densities and samplers.

Everything here is deterministic and pure: log-gamma, the modified Bessel
function of the first kind evaluated by its power series, and the
regularized upper incomplete gamma function Q(a, x).
"""

import math

__all__ = ["ln_gamma", "bessel_i", "reg_upper_gamma_q"]

# Series / continued-fraction truncation constants are fixed so that results
# are bit-stable across runs.
_REL_TOL = 1e-16
_MAX_TERMS = 200
_CF_MAX_ITER = 400
_TINY = 1e-300


def ln_gamma(x):
    """log Gamma(x) for x > 0."""
    if x <= 0.0:
        raise ValueError(f"ln_gamma requires x > 0, got {x}")
    return math.lgamma(x)


def bessel_i(nu, z):
    """Modified Bessel function I_nu(z) by its ascending power series.

    Accurate for moderate arguments (z <= 50 is more than enough here).
    Requires nu >= -1/2 and z >= 0; for nu < 0 the series has a pole at
    z = 0, which is outside the range this library ever evaluates.
    """
    if z < 0.0:
        raise ValueError(f"bessel_i requires z >= 0, got {z}")
    if nu < -0.5:
        raise ValueError(f"bessel_i requires nu >= -1/2, got {nu}")
    if z == 0.0:
        if nu == 0.0:
            return 1.0
        if nu > 0.0:
            return 0.0
        return math.inf
    half = 0.5 * z
    # n = 0 term: (z/2)^nu / Gamma(nu + 1)
    term = math.exp(nu * math.log(half) - math.lgamma(nu + 1.0))
    total = term
    for n in range(1, _MAX_TERMS):
        term *= half * half / (n * (nu + n))
        total += term
        if term < _REL_TOL * total:
            break
    return total


def _gamma_p_series(a, x):
    # Lower regularized P(a, x) by series, valid for x < a + 1.
    term = 1.0 / a
    total = term
    ap = a
    for _ in range(_MAX_TERMS):
        ap += 1.0
        term *= x / ap
        total += term
        if abs(term) < abs(total) * _REL_TOL:
            break
    return total * math.exp(-x + a * math.log(x) - math.lgamma(a))

def _gamma_q_contfrac(a, x):
    # Upper regularized Q(a, x) by modified Lentz continued fraction,
    # valid for x >= a + 1.
    b = x + 1.0 - a
    c = 1.0 / _TINY
    d = 1.0 / b
    h = d
    for i in range(1, _CF_MAX_ITER):
        an = -i * (i - a)
        b += 2.0
        d = an * d + b
        if abs(d) < _TINY:
            d = _TINY
        c = b + an / c
        if abs(c) < _TINY:
            c = _TINY
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < _REL_TOL:
            break
    return h * math.exp(-x + a * math.log(x) - math.lgamma(a))


def reg_upper_gamma_q(alpha, x):
    """Regularized upper incomplete gamma Q(alpha, x) = Gamma(alpha, x)/Gamma(alpha).

    Series expansion for x < alpha + 1, continued fraction otherwise.
    """
    if alpha <= 0.0:
        raise ValueError(f"reg_upper_gamma_q requires alpha > 0, got {alpha}")
    if x < 0.0:
        raise ValueError(f"reg_upper_gamma_q requires x >= 0, got {x}")
    if x == 0.0:
        return 1.0
    if x < alpha + 1.0:
        return 1.0 - _gamma_p_series(alpha, x)
    return _gamma_q_contfrac(alpha, x)
