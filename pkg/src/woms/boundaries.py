"""Closed-form moving boundaries and the image-constant rules.

The moving sphere used by each walk has time-dependent radius
``psi(a, nu, t)``; the image constant ``a`` controls its size and lifetime
``t_max(a)``.  The three families of curved boundaries (second and third
family, square-root envelope) and their image-constant update rules live
here as pure functions over immutable inputs.
"""

import math
from dataclasses import dataclass, field
from typing import Callable

from .special_functions import ln_gamma

__all__ = [
    "BesselParams",
    "ConstantLevel",
    "DecreasingCurve",
    "SquareRoot",
    "psi",
    "t_max",
    "psi_sup",
    "psi_second",
    "psi_laplace",
    "F_nu",
    "image_constant_level",
    "image_constant_decreasing",
    "decreasing_curve_kappa",
    "image_constant_sqrt",
]

# Log arguments within this of 1 are treated as exactly 1 (psi = 0 there);
# pure float rounding can push them slightly below 1 near t_max.
_LOG_CLAMP = 1e-12


@dataclass(frozen=True)
class BesselParams:
    """Dimension delta and index nu = delta/2 - 1 of the Bessel process."""

    delta: int
    nu: float = field(init=False)
    frac: float = field(init=False)

    def __post_init__(self):
        if self.delta < 1 or self.delta != int(self.delta):
            raise ValueError(f"dimension must be a positive integer, got {self.delta}")
        object.__setattr__(self, "delta", int(self.delta))
        nu = self.delta / 2.0 - 1.0
        object.__setattr__(self, "nu", nu)
        object.__setattr__(self, "frac", nu - math.floor(nu))

    @classmethod
    def from_index(cls, nu):
        delta = 2.0 * nu + 2.0
        if abs(delta - round(delta)) > 1e-9 or round(delta) < 1:
            raise ValueError(f"index nu={nu} does not give an integer dimension")
        return cls(int(round(delta)))


@dataclass(frozen=True)
class ConstantLevel:
    """Fixed level l > 0."""

    l: float

    def __post_init__(self):
        if self.l <= 0.0:
            raise ValueError(f"level must be positive, got {self.l}")

    def value(self, t):
        return self.l


@dataclass(frozen=True)
class DecreasingCurve:
    """Decreasing boundary l(t) with derivative bounded below by -delta_min."""

    level: Callable[[float], float]
    delta_min: float

    def __post_init__(self):
        if self.delta_min <= 0.0:
            raise ValueError(f"delta_min must be positive, got {self.delta_min}")
        if self.level(0.0) <= 0.0:
            raise ValueError("boundary must satisfy l(0) > 0")

    def value(self, t):
        return self.level(t)


@dataclass(frozen=True)
class SquareRoot:
    """Square-root boundary sqrt(beta0 - beta1*t), defined for t <= beta0/beta1."""

    beta0: float
    beta1: float

    def __post_init__(self):
        if self.beta0 <= 0.0 or self.beta1 <= 0.0:
            raise ValueError(
                f"beta0 and beta1 must be positive, got ({self.beta0}, {self.beta1})"
            )

    @property
    def root(self):
        return self.beta0 / self.beta1

    def value(self, t):
        return math.sqrt(max(self.beta0 - self.beta1 * t, 0.0))


def _log_norm_const(nu):
    # log(Gamma(nu+1) * 2^nu)
    return ln_gamma(nu + 1.0) + nu * math.log(2.0)


def t_max(a, nu):
    """Lifetime of the moving sphere: [a / (Gamma(nu+1) 2^nu)]^(1/(nu+1))."""
    if a <= 0.0:
        raise ValueError(f"image constant a must be positive, got {a}")
    return math.exp((math.log(a) - _log_norm_const(nu)) / (nu + 1.0))


def psi(a, nu, t):
    """Radius of the moving sphere at time t in [0, t_max(a)].

    psi_a(t) = sqrt(2 t log(a / (Gamma(nu+1) t^(nu+1) 2^nu))), clamped to 0
    when rounding pushes the log argument below 1.
    """
    if a <= 0.0:
        raise ValueError(f"image constant a must be positive, got {a}")
    if t < 0.0:
        raise ValueError(f"time must be nonnegative, got {t}")
    if t == 0.0:
        return 0.0
    tm = t_max(a, nu)
    if t > tm * (1.0 + _LOG_CLAMP):
        raise ValueError(f"t={t} beyond sphere lifetime t_max={tm}")
    log_arg = math.log(a) - _log_norm_const(nu) - (nu + 1.0) * math.log(t)
    if log_arg <= 0.0:
        return 0.0
    return math.sqrt(2.0 * t * log_arg)


def psi_sup(a, nu):
    """Maximum of psi_a over its lifetime, attained at t_max(a)/e."""
    return math.sqrt(2.0 * (nu + 1.0) / math.e * t_max(a, nu))


def psi_second(a, s, nu, t):
    """Second-family boundary sqrt((2t(t+s)/s) [(nu+1) log(1 + s/t) + log a]).

    Defined for all t >= 0 when a >= 1, and up to
    s / ((1/a)^(1/(nu+1)) - 1) when 0 < a < 1.
    """
    if a <= 0.0 or s <= 0.0:
        raise ValueError(f"need a > 0 and s > 0, got a={a}, s={s}")
    if t < 0.0:
        raise ValueError(f"time must be nonnegative, got {t}")
    if t == 0.0:
        return 0.0
    if a < 1.0:
        t_end = s / ((1.0 / a) ** (1.0 / (nu + 1.0)) - 1.0)
        if t > t_end * (1.0 + _LOG_CLAMP):
            raise ValueError(f"t={t} beyond boundary domain t<={t_end} for a={a}")
    bracket = (nu + 1.0) * math.log1p(s / t) + math.log(a)
    if bracket <= 0.0:
        return 0.0
    return math.sqrt(2.0 * t * (t + s) / s * bracket)


def _laplace_t_end(a, lam, nu):
    thresh = 0.5 * math.exp((_log_norm_const(nu) - math.log(a)) / (nu + 1.0))
    if lam >= thresh:
        return math.inf
    return 1.0 / (2.0 * thresh - 2.0 * lam)


def psi_laplace(a, lam, nu, t):
    """Third-family (Laplace-transform) boundary.

    psi_a(t) = sqrt(2 t w log(a w^(nu+1) / (2^nu t^(nu+1) Gamma(nu+1)))) with
    w = 1 + 2*lam*t; the zero level set of
    u(t,x) = p_0(t,x) - (x^(2nu+1)/a) w^(-(nu+1)) exp(-lam x^2 / w),
    the image of the measure y^(2nu+1) exp(-lam y^2) dy.
    """
    if a <= 0.0 or lam <= 0.0:
        raise ValueError(f"need a > 0 and lambda > 0, got a={a}, lambda={lam}")
    if t < 0.0:
        raise ValueError(f"time must be nonnegative, got {t}")
    if t == 0.0:
        return 0.0
    t_end = _laplace_t_end(a, lam, nu)
    if t > t_end * (1.0 + _LOG_CLAMP):
        raise ValueError(f"t={t} beyond boundary domain t<={t_end}")
    w = 1.0 + 2.0 * lam * t
    log_arg = math.log(a) + (nu + 1.0) * math.log(w) - _log_norm_const(nu) \
        - (nu + 1.0) * math.log(t)
    if log_arg <= 0.0:
        return 0.0
    return math.sqrt(2.0 * t * w * log_arg)


def F_nu(r, u, nu):
    """Image constant fitting psi_a under the envelope sqrt(r - u*t).

    F_nu(r, u) = (1/2) (e*r/(nu+1))^(nu+1) Gamma(nu+1) exp(-u/2); with
    a = F_nu(r, u) one has psi_a(t) <= sqrt(r - u*t) on the sphere lifetime.
    """
    if r <= 0.0:
        raise ValueError(f"need r > 0, got {r}")
    if u < 0.0:
        raise ValueError(f"need u >= 0, got {u}")
    return 0.5 * math.exp(
        (nu + 1.0) * (1.0 + math.log(r) - math.log(nu + 1.0))
        + ln_gamma(nu + 1.0)
        - 0.5 * u
    )


def image_constant_level(chi, l, gamma, nu):
    """Image constant for the constant-level walk.

    a = (gamma^2 (l - sqrt(chi))^2 e / (nu+1))^(nu+1) * Gamma(nu+1)/2; the
    resulting sphere satisfies sup psi_a = gamma*(l - sqrt(chi)), so it
    stays inside the ball of radius l.
    """
    if chi < 0.0:
        raise ValueError(f"squared radius must be nonnegative, got {chi}")
    # gamma = 1 allowed here (the degenerate sphere touching the level);
    # the walks themselves require gamma < 1
    if not 0.0 < gamma <= 1.0:
        raise ValueError(f"gamma must be in (0,1], got {gamma}")
    d = l - math.sqrt(chi)
    if d < 0.0:
        raise ValueError("current position is outside the level")
    base = gamma * gamma * d * d * math.e / (nu + 1.0)
    return base ** (nu + 1.0) * math.exp(ln_gamma(nu + 1.0)) / 2.0


def decreasing_curve_kappa(boundary, nu):
    """Constant kappa = 2^nu Gamma(nu+1) / (5^(nu+1) L^(2nu+2)) with
    L = max(l(0), delta_min, sqrt(nu+1))."""
    L = max(boundary.level(0.0), boundary.delta_min, math.sqrt(nu + 1.0))
    return math.exp(
        nu * math.log(2.0)
        + ln_gamma(nu + 1.0)
        - (nu + 1.0) * (math.log(5.0) + 2.0 * math.log(L))
    )


def image_constant_decreasing(chi, xi, boundary, kappa, nu):
    """Image constant for the decreasing-curve walk: kappa * (l(Xi) - sqrt(chi))^(2(nu+1))."""
    if chi < 0.0:
        raise ValueError(f"squared radius must be nonnegative, got {chi}")
    d = boundary.value(xi) - math.sqrt(chi)
    if d < 0.0:
        raise ValueError("current position is outside the boundary")
    if d == 0.0:
        return 0.0
    return kappa * d ** (2.0 * (nu + 1.0))


def image_constant_sqrt(chi, xi, beta0, beta1, kappa, nu):
    """Image constant for the square-root boundary walk.

    a = kappa * F_nu((l(Xi) - sqrt(chi))^2, beta1 (1 - sqrt(chi)/l(Xi)))
    with l(t) = sqrt(beta0 - beta1 t) and kappa in (0, 1).
    """
    if not 0.0 < kappa < 1.0:
        raise ValueError(f"kappa must be in (0,1), got {kappa}")
    lv = math.sqrt(max(beta0 - beta1 * xi, 0.0))
    root_chi = math.sqrt(chi)
    if lv <= root_chi:
        raise ValueError("current position is outside the square-root boundary")
    d = lv - root_chi
    return kappa * F_nu(d * d, beta1 * (1.0 - root_chi / lv), nu)
