"""The four Walk-on-Moving-Spheres algorithms.

All walks share one stepping rule: draw the exit time ``xi`` of the current
moving sphere (an exact Gamma-based draw), advance the clock, and update the
squared radial position using one uniformly distributed direction on the
sphere.  The algorithms differ only in the image-constant update and the
stopping test.
"""

import math
from dataclasses import dataclass, replace
from typing import Optional

import numpy as np

from .boundaries import (
    BesselParams,
    DecreasingCurve,
    decreasing_curve_kappa,
    image_constant_decreasing,
    image_constant_level,
    image_constant_sqrt,
    psi,
    t_max,
)
from .samplers import sample_unit_sphere

__all__ = [
    "WalkState",
    "PlanarWalkState",
    "HittingSample",
    "StepCapExceeded",
    "DEFAULT_STEP_CAP",
    "MIN_EPS",
    "step_a2",
    "run_a1",
    "run_a2",
    "run_a2_batch",
    "run_a3",
    "run_a3_batch",
    "run_a4",
    "run_a4_batch",
]

DEFAULT_STEP_CAP = 10_000_000
MIN_EPS = 1e-12


class StepCapExceeded(RuntimeError):
    """Walk exceeded the configured safety step cap."""


@dataclass
class WalkState:
    """Markov-chain state of the radial walks (A2, A3, A4)."""

    n: int = 0
    Xi: float = 0.0
    chi: float = 0.0
    A: float = 0.0
    stopped: bool = False


@dataclass
class PlanarWalkState:
    """State of the planar walk (A1): position tracked as a 2-vector."""

    n: int = 0
    Theta: float = 0.0
    X: np.ndarray = None


@dataclass(frozen=True)
class HittingSample:
    """One simulated hitting time."""

    time: float
    radial_position: float
    steps: int
    algorithm: str
    position: Optional[np.ndarray] = None


def _check_eps(eps):
    if eps < MIN_EPS:
        raise ValueError(f"eps must be >= {MIN_EPS}, got {eps}")


def _draw_xi(A, params, rng):
    """Exit time of a sphere with image constant A: t_max(A) * exp(-Z),
    Z ~ Gamma(nu+2, 1/(nu+1)), drawn Erlang-style from floor(nu)+2 uniforms
    (plus a squared Gaussian for half-integer indices)."""
    nu = params.nu
    k = int(math.floor(nu)) + 2
    log_prod = float(np.log(rng.uniforms(k)).sum())
    z = -log_prod / (nu + 1.0)
    if params.frac != 0.0:
        g = rng.gaussian()
        z += params.frac / (nu + 1.0) * g * g
    return t_max(A, nu) * math.exp(-z)


def step_a2(state, params, rng):
    """One moving-sphere step: advance the clock by the sphere exit time and
    update the squared radial position with a uniform sphere direction.

    Leaves the image constant untouched; each algorithm applies its own
    update rule after the step.
    """
    if state.stopped:
        raise ValueError("cannot step a stopped walk")
    xi = _draw_xi(state.A, params, rng)
    radius = psi(state.A, params.nu, xi)
    pi1 = float(sample_unit_sphere(params.delta, rng)[0])
    chi = state.chi + 2.0 * pi1 * math.sqrt(state.chi) * radius + radius * radius
    if chi < 0.0:
        chi = 0.0
    return replace(state, n=state.n + 1, Xi=state.Xi + xi, chi=chi)


def run_a1(l, eps, gamma, rng, step_cap=DEFAULT_STEP_CAP):
    """Planar walk (delta = 2) to the circle of radius l, tracking the full
    2-vector position.  Returns the hitting time, exit position and step count.
    """
    _check_eps(eps)
    if not 0.0 < gamma < 1.0:
        raise ValueError(f"gamma must be in (0,1), got {gamma}")
    if l <= 0.0:
        raise ValueError(f"level must be positive, got {l}")
    x = np.zeros(2)
    theta_total = 0.0
    n = 0
    if eps >= l:
        return HittingSample(0.0, 0.0, 0, "a1", position=x)
    a = gamma * gamma * l * l * math.e / 2.0
    while True:
        u = rng.uniform()
        v = rng.uniform()
        w = rng.uniform()
        theta = a * u * v
        radius = psi(a, 0.0, theta)
        x = x + radius * np.array([math.cos(2.0 * math.pi * w),
                                   math.sin(2.0 * math.pi * w)])
        theta_total += theta
        n += 1
        norm = float(np.hypot(x[0], x[1]))
        if norm > l - eps:
            return HittingSample(theta_total, norm, n, "a1", position=x)
        a = gamma * gamma * (l - norm) ** 2 * math.e / 2.0
        if n >= step_cap:
            raise StepCapExceeded(f"walk exceeded {step_cap} steps")


def _run_radial(params, rng, chi0, a_of, stop_reached, tag, step_cap):
    """Shared driver for A2/A3/A4: ``a_of(Xi, chi)`` gives the image constant,
    ``stop_reached(Xi, chi)`` the stopping test."""
    nu = params.nu
    k = int(math.floor(nu)) + 2
    xi_total = 0.0
    chi = chi0
    n = 0
    if stop_reached(xi_total, chi):
        return HittingSample(0.0, math.sqrt(chi), 0, tag)
    a = a_of(xi_total, chi)
    gen = rng.gen
    delta = params.delta
    frac = params.frac
    inv = 1.0 / (nu + 1.0)
    while True:
        # xi = t_max(a) * exp(-Z)
        u = gen.random(k)
        while (u == 0.0).any():
            u[u == 0.0] = gen.random(int((u == 0.0).sum()))
        z = -float(np.log(u).sum()) * inv
        if frac != 0.0:
            g = gen.standard_normal()
            z += frac * inv * g * g
        xi = t_max(a, nu) * math.exp(-z)
        radius = psi(a, nu, xi)
        # first coordinate of a uniform direction on the delta-sphere
        if delta == 1:
            pi1 = 1.0 if gen.random() < 0.5 else -1.0
        else:
            gv = gen.standard_normal(delta)
            pi1 = gv[0] / math.sqrt(float(gv @ gv))
        chi = chi + 2.0 * pi1 * math.sqrt(chi) * radius + radius * radius
        if chi < 0.0:
            chi = 0.0
        xi_total += xi
        n += 1
        if stop_reached(xi_total, chi):
            return HittingSample(xi_total, math.sqrt(chi), n, tag)
        a = a_of(xi_total, chi)
        if n >= step_cap:
            raise StepCapExceeded(f"walk exceeded {step_cap} steps")


def run_a2(params, l, x0, eps, gamma, rng, step_cap=DEFAULT_STEP_CAP):
    """Radial walk to a constant level l, started from radius x0 >= 0."""
    _check_eps(eps)
    if not isinstance(params, BesselParams):
        params = BesselParams(params)
    if l <= 0.0:
        raise ValueError(f"level must be positive, got {l}")
    if x0 < 0.0:
        raise ValueError(f"start radius must be nonnegative, got {x0}")
    nu = params.nu

    def a_of(xi_total, chi):
        return image_constant_level(chi, l, gamma, nu)

    def stop_reached(xi_total, chi):
        return math.sqrt(chi) >= l - eps

    return _run_radial(params, rng, x0 * x0, a_of, stop_reached, "a2", step_cap)


def _run_radial_batch(params, rng, n, chi0, a_fn, keep_fn, step_cap):
    """Vectorized lockstep driver shared by the *_batch entry points.

    ``a_fn(times, chi)`` and ``keep_fn(times, chi)`` act on the arrays of
    still-active walks; ``keep_fn`` returns the boolean mask of walks that
    must continue.  The random stream layout differs from the per-run
    drivers, so individual samples are not reproducible across the two
    entry points, only laws coincide.
    """
    nu = params.nu
    delta = params.delta
    frac = params.frac
    inv = 1.0 / (nu + 1.0)
    k = int(math.floor(nu)) + 2
    # t_max(a) = (a / norm_const)^{1/(nu+1)}
    norm_const = math.exp(math.lgamma(nu + 1.0)) * 2.0 ** nu
    gen = rng.gen
    chi = np.full(n, chi0, dtype=float)
    times = np.zeros(n)
    steps = np.zeros(n, dtype=np.int64)
    active = np.nonzero(keep_fn(times, chi))[0]
    total = 0
    while active.size:
        m = active.size
        a = a_fn(times[active], chi[active])
        z = -np.log1p(-gen.random((m, k))).sum(axis=1) * inv
        if frac != 0.0:
            z += frac * inv * gen.standard_normal(m) ** 2
        xi = (a / norm_const) ** inv * np.exp(-z)
        # psi_a(xi) with log(a / (norm_const xi^{nu+1})) = (nu+1) z
        radius = np.sqrt(2.0 * xi * (nu + 1.0) * z)
        if delta == 1:
            pi1 = np.where(gen.random(m) < 0.5, 1.0, -1.0)
        else:
            gv = gen.standard_normal((m, delta))
            pi1 = gv[:, 0] / np.sqrt((gv * gv).sum(axis=1))
        chi[active] += 2.0 * pi1 * np.sqrt(chi[active]) * radius + radius * radius
        times[active] += xi
        steps[active] += 1
        active = active[keep_fn(times[active], chi[active])]
        total += 1
        if total >= step_cap:
            raise StepCapExceeded(f"walk exceeded {step_cap} steps")
    return times, np.sqrt(chi), steps


def run_a2_batch(params, l, eps, gamma, rng, n, x0=0.0, step_cap=DEFAULT_STEP_CAP):
    """Vectorized level walk: n independent chains advanced in lockstep.

    Samples the same Markov chain as run_a2 but draws variates for all
    still-active chains at once, which is much faster for large batches.
    Returns (times, radial_positions, steps) as numpy arrays.
    """
    _check_eps(eps)
    if not isinstance(params, BesselParams):
        params = BesselParams(params)
    if l <= 0.0:
        raise ValueError(f"level must be positive, got {l}")
    if not 0.0 < gamma < 1.0:
        raise ValueError(f"gamma must be in (0,1), got {gamma}")
    if x0 < 0.0:
        raise ValueError(f"start radius must be nonnegative, got {x0}")
    if n < 1:
        raise ValueError(f"batch size must be >= 1, got {n}")
    nu = params.nu
    gamma_nu1 = math.exp(math.lgamma(nu + 1.0))
    scale = gamma * gamma * math.e / (nu + 1.0)

    def a_fn(times, chi):
        d = l - np.sqrt(chi)
        return (scale * d * d) ** (nu + 1.0) * gamma_nu1 / 2.0

    def keep_fn(times, chi):
        return np.sqrt(chi) < l - eps

    return _run_radial_batch(params, rng, n, x0 * x0, a_fn, keep_fn, step_cap)


def run_a3_batch(params, boundary, eps, rng, n, x0=0.0, step_cap=DEFAULT_STEP_CAP):
    """Vectorized decreasing-curve walk; ``boundary.level`` must accept an
    ndarray of times.  Same chain as run_a3."""
    _check_eps(eps)
    if not isinstance(params, BesselParams):
        params = BesselParams(params)
    if not isinstance(boundary, DecreasingCurve):
        raise TypeError("run_a3_batch expects a DecreasingCurve boundary")
    if eps >= boundary.level(0.0):
        raise ValueError("eps must be smaller than the starting boundary value")
    nu = params.nu
    kappa = decreasing_curve_kappa(boundary, nu)

    def a_fn(times, chi):
        d = np.asarray(boundary.level(times), dtype=float) - np.sqrt(chi)
        return kappa * d ** (2.0 * (nu + 1.0))

    def keep_fn(times, chi):
        return np.asarray(boundary.level(times), dtype=float) - np.sqrt(chi) > eps

    return _run_radial_batch(params, rng, n, x0 * x0, a_fn, keep_fn, step_cap)


def run_a4_batch(params, beta0, beta1, eps, kappa, rng, n, x0=0.0,
                 step_cap=DEFAULT_STEP_CAP):
    """Vectorized square-root-boundary walk.  Same chain as run_a4."""
    _check_eps(eps)
    if not isinstance(params, BesselParams):
        params = BesselParams(params)
    if beta0 <= 0.0 or beta1 <= 0.0:
        raise ValueError(f"beta0, beta1 must be positive, got ({beta0}, {beta1})")
    if not 0.0 < kappa < 1.0:
        raise ValueError(f"kappa must be in (0,1), got {kappa}")
    nu = params.nu
    # F_nu(r, u) = (1/2)(e r/(nu+1))^{nu+1} Gamma(nu+1) e^{-u/2}
    f_scale = math.exp((nu + 1.0) * (1.0 - math.log(nu + 1.0))
                       + math.lgamma(nu + 1.0)) / 2.0

    def a_fn(times, chi):
        lv = np.sqrt(np.maximum(beta0 - beta1 * times, 0.0))
        root = np.sqrt(chi)
        d = lv - root
        u = beta1 * (1.0 - root / lv)
        return kappa * f_scale * (d * d) ** (nu + 1.0) * np.exp(-0.5 * u)

    def keep_fn(times, chi):
        lv = np.sqrt(np.maximum(beta0 - beta1 * times, 0.0))
        return lv - np.sqrt(chi) > eps

    return _run_radial_batch(params, rng, n, x0 * x0, a_fn, keep_fn, step_cap)


def run_a3(params, boundary, eps, rng, x0=0.0, step_cap=DEFAULT_STEP_CAP):
    """Radial walk to a decreasing curved boundary l(t)."""
    _check_eps(eps)
    if not isinstance(params, BesselParams):
        params = BesselParams(params)
    if not isinstance(boundary, DecreasingCurve):
        raise TypeError("run_a3 expects a DecreasingCurve boundary")
    if eps >= boundary.level(0.0):
        raise ValueError("eps must be smaller than the starting boundary value")
    nu = params.nu
    kappa = decreasing_curve_kappa(boundary, nu)

    def a_of(xi_total, chi):
        return image_constant_decreasing(chi, xi_total, boundary, kappa, nu)

    def stop_reached(xi_total, chi):
        return boundary.value(xi_total) - math.sqrt(chi) <= eps

    return _run_radial(params, rng, x0 * x0, a_of, stop_reached, "a3", step_cap)


def run_a4(params, beta0, beta1, eps, kappa, rng, x0=0.0, step_cap=DEFAULT_STEP_CAP):
    """Radial walk to the square-root boundary l(t) = sqrt(beta0 - beta1*t)."""
    _check_eps(eps)
    if not isinstance(params, BesselParams):
        params = BesselParams(params)
    if beta0 <= 0.0 or beta1 <= 0.0:
        raise ValueError(f"beta0, beta1 must be positive, got ({beta0}, {beta1})")
    if not 0.0 < kappa < 1.0:
        raise ValueError(f"kappa must be in (0,1), got {kappa}")
    nu = params.nu

    def a_of(xi_total, chi):
        return image_constant_sqrt(chi, xi_total, beta0, beta1, kappa, nu)

    def stop_reached(xi_total, chi):
        lv = math.sqrt(max(beta0 - beta1 * xi_total, 0.0))
        return lv - math.sqrt(chi) <= eps

    return _run_radial(params, rng, x0 * x0, a_of, stop_reached, "a4", step_cap)
