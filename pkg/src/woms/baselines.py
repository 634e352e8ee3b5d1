"""Euler-scheme baselines used as independent oracles for the walk samplers.

Brownian-motion exits are simulated by accumulating Gaussian increments in
blocks, which keeps the per-run cost at a handful of vectorized numpy calls.
"""

import math

import numpy as np

__all__ = ["euler_bm_exit", "euler_bessel_curved"]

_BLOCK = 4096


def euler_bm_exit(delta, l, dt, rng, block=_BLOCK):
    """First grid time at which a delta-dimensional Brownian motion leaves the
    ball of radius l.  Returns (time, position at that grid point)."""
    if delta < 1 or l <= 0.0 or dt <= 0.0:
        raise ValueError(f"bad parameters delta={delta}, l={l}, dt={dt}")
    sqrt_dt = math.sqrt(dt)
    pos = np.zeros(delta)
    steps_done = 0
    while True:
        inc = rng.gen.standard_normal((block, delta)) * sqrt_dt
        path = pos + np.cumsum(inc, axis=0)
        norms = np.linalg.norm(path, axis=1)
        hit = np.nonzero(norms >= l)[0]
        if hit.size:
            k = int(hit[0])
            return (steps_done + k + 1) * dt, path[k]
        pos = path[-1]
        steps_done += block


def euler_bessel_curved(delta, boundary, dt, horizon, rng, block=_BLOCK):
    """First grid time at which the norm of a delta-dimensional Brownian motion
    reaches ``boundary(t)``; returns the time, or None when censored at
    ``horizon``.  ``boundary`` must accept an ndarray of times.  Used as the
    oracle for the curved-boundary walks."""
    if delta < 1 or dt <= 0.0 or horizon <= 0.0:
        raise ValueError(f"bad parameters delta={delta}, dt={dt}, horizon={horizon}")
    sqrt_dt = math.sqrt(dt)
    pos = np.zeros(delta)
    steps_done = 0
    n_steps = int(math.ceil(horizon / dt))
    while steps_done < n_steps:
        nb = min(block, n_steps - steps_done)
        inc = rng.gen.standard_normal((nb, delta)) * sqrt_dt
        path = pos + np.cumsum(inc, axis=0)
        norms = np.linalg.norm(path, axis=1)
        times = (steps_done + 1 + np.arange(nb)) * dt
        levels = np.asarray(boundary(times), dtype=float)
        hit = np.nonzero(norms >= levels)[0]
        if hit.size:
            return float(times[int(hit[0])])
        pos = path[-1]
        steps_done += nb
    return None
