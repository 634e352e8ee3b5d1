"""Closed-form hitting-time densities and CDFs for the three boundary families,
Bessel transition densities, and the Laplace-transform oracle for level hitting.
"""

import math
from dataclasses import dataclass

from scipy.integrate import quad

from .boundaries import _laplace_t_end, _log_norm_const, psi_laplace, psi_second, t_max
from .special_functions import bessel_i, ln_gamma, reg_upper_gamma_q

__all__ = [
    "HittingLaw",
    "p0_density",
    "py_density",
    "density_family1",
    "cdf_family1",
    "density_family2",
    "density_family3",
    "cdf_family2_quadrature",
    "cdf_family3_quadrature",
    "laplace_transform_level",
]

_QUAD_ABS_TOL = 1e-10


@dataclass(frozen=True)
class HittingLaw:
    """One boundary family with its parameters and time domain of validity.

    ``family`` is 'first', 'second' or 'third'; ``params`` the tuple of
    family parameters (a,), (a, s) or (a, lam); ``t_domain`` the closed
    interval on which the boundary (and its density) is defined.
    """

    family: str
    params: tuple
    nu: float
    t_domain: tuple

    @classmethod
    def first(cls, a, nu):
        return cls("first", (a,), nu, (0.0, t_max(a, nu)))

    @classmethod
    def second(cls, a, s, nu):
        if a >= 1.0:
            end = math.inf
        else:
            end = s / ((1.0 / a) ** (1.0 / (nu + 1.0)) - 1.0)
        return cls("second", (a, s), nu, (0.0, end))

    @classmethod
    def third(cls, a, lam, nu):
        return cls("third", (a, lam), nu, (0.0, _laplace_t_end(a, lam, nu)))

    def density(self, t):
        if self.family == "first":
            return density_family1(*self.params, self.nu, t)
        if self.family == "second":
            return density_family2(*self.params, self.nu, t)
        return density_family3(*self.params, self.nu, t)


def p0_density(nu, t, x):
    """Transition density of the Bessel process started at 0.

    p_0(t, x) = x^(delta-1) exp(-x^2/2t) / (2^nu t^(nu+1) Gamma(nu+1)),
    with delta = 2 nu + 2.
    """
    if t <= 0.0:
        raise ValueError(f"time must be positive, got {t}")
    if x < 0.0:
        raise ValueError(f"position must be nonnegative, got {x}")
    if x == 0.0:
        return 0.0 if nu > -0.5 else math.exp(-_log_norm_const(nu)) / math.sqrt(t)
    return math.exp(
        (2.0 * nu + 1.0) * math.log(x)
        - x * x / (2.0 * t)
        - _log_norm_const(nu)
        - (nu + 1.0) * math.log(t)
    )


def py_density(nu, y, t, x):
    """Transition density of the Bessel process started at y > 0.

    p_y(t, x) = (x/t) (x/y)^nu exp(-(x^2+y^2)/2t) I_nu(x y / t).
    """
    if y <= 0.0 or t <= 0.0:
        raise ValueError(f"need y > 0 and t > 0, got y={y}, t={t}")
    if x < 0.0:
        raise ValueError(f"position must be nonnegative, got {x}")
    if x == 0.0:
        # x * (x/y)^nu -> 0 for every nu >= -1/2
        return 0.0
    return (
        x / t * (x / y) ** nu
        * math.exp(-(x * x + y * y) / (2.0 * t))
        * bessel_i(nu, x * y / t)
    )


def density_family1(a, nu, t):
    """Hitting-time density of the first-family boundary psi_a.

    (1/2at) (2t log(a / (Gamma(nu+1) t^(nu+1) 2^nu)))^(nu+1) on (0, t_max(a)].
    """
    if a <= 0.0:
        raise ValueError(f"need a > 0, got {a}")
    if t <= 0.0 or t > t_max(a, nu) * (1.0 + 1e-12):
        return 0.0
    log_arg = math.log(a) - _log_norm_const(nu) - (nu + 1.0) * math.log(t)
    if log_arg <= 0.0:
        return 0.0
    return (2.0 * t * log_arg) ** (nu + 1.0) / (2.0 * a * t)


def cdf_family1(a, nu, t):
    """CDF of the first-family hitting time, through its Gamma representation.

    Q(nu+2, (nu+1) log(t_max(a)/t)) for t in (0, t_max], 0 below, 1 above.
    """
    if a <= 0.0:
        raise ValueError(f"need a > 0, got {a}")
    if t <= 0.0:
        return 0.0
    tm = t_max(a, nu)
    if t >= tm:
        return 1.0
    return reg_upper_gamma_q(nu + 2.0, (nu + 1.0) * math.log(tm / t))


def density_family2(a, s, nu, t):
    """Hitting-time density of the second-family (Markov-property) boundary.

    (1/Gamma(nu+1)) (1/t) ((t+s)/s)^nu M^(nu+1) exp(-((t+s)/s) M) with
    M = log(a ((t+s)/t)^(nu+1)).
    """
    if a <= 0.0 or s <= 0.0:
        raise ValueError(f"need a > 0 and s > 0, got a={a}, s={s}")
    if t <= 0.0:
        return 0.0
    if a < 1.0:
        t_end = s / ((1.0 / a) ** (1.0 / (nu + 1.0)) - 1.0)
        if t > t_end:
            return 0.0
    m = math.log(a) + (nu + 1.0) * math.log((t + s) / t)
    if m <= 0.0:
        return 0.0
    ratio = (t + s) / s
    return math.exp(
        -ln_gamma(nu + 1.0)
        - math.log(t)
        + nu * math.log(ratio)
        + (nu + 1.0) * math.log(m)
        - ratio * m
    )


def density_family3(a, lam, nu, t):
    """Hitting-time density of the third-family (Laplace-transform) boundary.

    (1/2) (psi/(t w)) p_0(t, psi) with w = 1 + 2*lam*t and psi = psi_laplace,
    which is -(1/2) du/dx evaluated on the boundary; the lam -> 0 limit is
    density_family1, and the law matches the Euler curved-boundary baseline.
    """
    if a <= 0.0 or lam <= 0.0:
        raise ValueError(f"need a > 0 and lambda > 0, got a={a}, lambda={lam}")
    if t <= 0.0 or t > _laplace_t_end(a, lam, nu) * (1.0 + 1e-12):
        return 0.0
    w = 1.0 + 2.0 * lam * t
    ps = psi_laplace(a, lam, nu, t)
    if ps <= 0.0:
        return 0.0
    return 0.5 * ps / (t * w) * p0_density(nu, t, ps)


def _cdf_quadrature(density, t, t_start=0.0):
    if t <= t_start:
        return 0.0
    val, _ = quad(density, t_start, t, epsabs=_QUAD_ABS_TOL, limit=200)
    return val


def cdf_family2_quadrature(a, s, nu, t):
    """CDF of the second-family hitting time by adaptive quadrature."""
    end = HittingLaw.second(a, s, nu).t_domain[1]
    return _cdf_quadrature(lambda u: density_family2(a, s, nu, u), min(t, end))


def cdf_family3_quadrature(a, lam, nu, t):
    """CDF of the third-family hitting time by adaptive quadrature."""
    end = HittingLaw.third(a, lam, nu).t_domain[1]
    return _cdf_quadrature(lambda u: density_family3(a, lam, nu, u), min(t, end))


def laplace_transform_level(l, nu, lam):
    """E_0[exp(-lam * tau_l)] = (l sqrt(2 lam))^nu / (2^nu Gamma(nu+1) I_nu(l sqrt(2 lam)))."""
    if l <= 0.0 or lam <= 0.0:
        raise ValueError(f"need l > 0 and lambda > 0, got l={l}, lambda={lam}")
    z = l * math.sqrt(2.0 * lam)
    return z ** nu / (math.exp(_log_norm_const(nu)) * bessel_i(nu, z))
