"""Cox-Ingersoll-Ross level hitting via the squared-Bessel time change.

The hitting time of a level l by the CIR process equals in law
eta(tau), where tau is the first time a Bessel process of dimension
4a/c^2 reaches the curve sqrt(l (1 - 4bt/c^2)) and
eta(t) = -(1/b) log(1 - 4bt/c^2).  The walk route requires 4a/c^2 to be a
positive integer and b > 0 (so the curve is decreasing); an explicit Euler
scheme for the CIR SDE serves as the baseline oracle.
"""

import math
from dataclasses import dataclass, field

import numpy as np
from numba import njit

from .boundaries import BesselParams, SquareRoot
from .engine import DEFAULT_STEP_CAP, run_a4

__all__ = [
    "CirParams",
    "cir_boundary",
    "time_change_eta",
    "time_change_eta_inv",
    "sample_cir_hitting",
    "euler_cir",
]

_GAUSS_BLOCK = 8192


@dataclass(frozen=True)
class CirParams:
    """Parameters of dX = (a + bX) dt + c sqrt(|X|) dB with target level l."""

    a: float
    b: float
    c: float
    x0: float = 0.0
    l: float = 1.0
    delta: float = field(init=False)

    def __post_init__(self):
        if self.a < 0.0:
            raise ValueError(f"drift constant a must be >= 0, got {self.a}")
        if self.c <= 0.0:
            raise ValueError(f"volatility c must be positive, got {self.c}")
        if self.x0 < 0.0:
            raise ValueError(f"start x0 must be >= 0, got {self.x0}")
        if self.l <= 0.0:
            raise ValueError(f"target level must be positive, got {self.l}")
        object.__setattr__(self, "delta", 4.0 * self.a / (self.c * self.c))

    def require_walk_route(self):
        """Validate the constraints of the walk-based sampler: integer
        dimension 4a/c^2 and b > 0."""
        if self.b <= 0.0:
            raise ValueError(
                "walk-based CIR sampling needs b > 0 (the associated boundary "
                f"must be decreasing); got b={self.b}"
            )
        d = self.delta
        if abs(d - round(d)) > 1e-9 or round(d) < 1:
            raise ValueError(f"4a/c^2 must be a positive integer, got {d}")
        return BesselParams(int(round(d)))


def cir_boundary(params):
    """Square-root boundary hit by the associated Bessel process:
    beta0 = l, beta1 = 4 b l / c^2."""
    params.require_walk_route()
    return SquareRoot(params.l, 4.0 * params.b * params.l / (params.c * params.c))


def time_change_eta(params, t):
    """Bessel clock -> CIR clock: eta(t) = -(1/b) log(1 - 4bt/c^2)."""
    b, c = params.b, params.c
    limit = c * c / (4.0 * b)
    if t < 0.0 or t >= limit:
        raise ValueError(f"time change defined on [0, {limit}), got {t}")
    return -math.log1p(-4.0 * b * t / (c * c)) / b


def time_change_eta_inv(params, s):
    """CIR clock -> Bessel clock: eta^{-1}(s) = c^2 (1 - e^{-bs}) / (4b)."""
    if s < 0.0:
        raise ValueError(f"time must be nonnegative, got {s}")
    b, c = params.b, params.c
    return c * c / (4.0 * b) * -math.expm1(-b * s)


def sample_cir_hitting(params, eps, kappa, rng, step_cap=DEFAULT_STEP_CAP):
    """One draw of the CIR level-hitting time through the Bessel walk."""
    bessel = params.require_walk_route()
    boundary = cir_boundary(params)
    sample = run_a4(
        bessel,
        boundary.beta0,
        boundary.beta1,
        eps,
        kappa,
        rng,
        x0=math.sqrt(params.x0),
        step_cap=step_cap,
    )
    return time_change_eta(params, sample.time)


@njit(cache=True)
def _euler_cir_block(x, a, b, c, l, dt, gauss):
    # Advance through one block of pre-drawn Gaussians; return
    # (index of the first grid point with x >= l, or -1; state afterwards).
    sqrt_dt = math.sqrt(dt)
    for i in range(gauss.shape[0]):
        x = x + (a + b * x) * dt + c * math.sqrt(abs(x)) * sqrt_dt * gauss[i]
        if x >= l:
            return i, x
    return -1, x


def euler_cir(params, dt, horizon, rng):
    """Explicit Euler for the CIR SDE, stopped at the first grid time X >= l.

    Returns (time, X at stop) on a hit and (None, X at horizon) when censored.
    """
    if dt <= 0.0 or horizon <= 0.0:
        raise ValueError(f"bad parameters dt={dt}, horizon={horizon}")
    x = params.x0
    if x >= params.l:
        return 0.0, x
    n_steps = int(math.ceil(horizon / dt))
    done = 0
    while done < n_steps:
        nb = min(_GAUSS_BLOCK, n_steps - done)
        gauss = rng.gen.standard_normal(nb)
        hit, x = _euler_cir_block(x, params.a, params.b, params.c, params.l, dt, gauss)
        if hit >= 0:
            return (done + hit + 1) * dt, x
        done += nb
    return None, x
