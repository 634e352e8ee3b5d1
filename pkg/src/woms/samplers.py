"""Seeded random streams and the exact samplers used by the walk algorithms.

Streams are built on PCG64 seeded through a ``SeedSequence`` spawn key, so
that ``RngStream(seed, k)`` for distinct ``k`` gives statistically
independent, individually reproducible streams.  Batch drivers assign
``stream_id = run index``, which makes results independent of how runs are
distributed over workers.
"""

import math

import numpy as np

from .special_functions import ln_gamma

__all__ = [
    "RngStream",
    "next_uniform",
    "next_gaussian",
    "sample_gamma_half_integer",
    "sample_first_passage_psi",
    "sample_unit_sphere",
]


class RngStream:
    """One reproducible random stream, identified by (seed, stream_id)."""

    def __init__(self, seed, stream_id=0):
        self.seed = int(seed)
        self.stream_id = int(stream_id)
        ss = np.random.SeedSequence(self.seed, spawn_key=(self.stream_id,))
        self.gen = np.random.Generator(np.random.PCG64(ss))

    def __repr__(self):
        return f"RngStream(seed={self.seed}, stream_id={self.stream_id})"

    def uniform(self):
        """One uniform draw, strictly inside (0, 1)."""
        u = self.gen.random()
        while u == 0.0:
            u = self.gen.random()
        return u

    def uniforms(self, n):
        """Array of n uniform draws, each strictly inside (0, 1)."""
        u = self.gen.random(n)
        bad = u == 0.0
        while bad.any():
            u[bad] = self.gen.random(int(bad.sum()))
            bad = u == 0.0
        return u

    def gaussian(self):
        return self.gen.standard_normal()

    def gaussians(self, n):
        return self.gen.standard_normal(n)


def next_uniform(rng):
    """Uniform draw on the open interval (0, 1); never 0, so logs stay finite."""
    return rng.uniform()


def next_gaussian(rng):
    """Standard normal draw."""
    return rng.gaussian()


def _check_half_integer(alpha):
    two_alpha = 2.0 * alpha
    if two_alpha <= 0 or abs(two_alpha - round(two_alpha)) > 1e-9:
        raise ValueError(f"shape alpha must satisfy 2*alpha in N*, got {alpha}")


def sample_gamma_half_integer(alpha, beta, rng, size=None):
    """Gamma(alpha, beta) draws for integer or half-integer shape alpha.

    Integer alpha (Erlang): -beta*log(U_1...U_alpha).  Half-integer alpha:
    -beta*log(U_1...U_floor(alpha)) + beta*N^2/2 with N standard normal.
    ``beta`` is the scale parameter.
    """
    _check_half_integer(alpha)
    if beta <= 0.0:
        raise ValueError(f"scale beta must be positive, got {beta}")
    k = int(math.floor(alpha + 1e-9))
    half = abs(alpha - k) > 1e-9
    if size is None:
        z = 0.0
        if k > 0:
            z = -beta * math.log(float(np.prod(rng.uniforms(k))))
        if half:
            g = rng.gaussian()
            z += 0.5 * beta * g * g
        return z
    u = rng.uniforms((size, k)) if k > 0 else None
    z = np.zeros(size)
    if k > 0:
        z = -beta * np.log(u).sum(axis=1)
    if half:
        g = rng.gaussians(size)
        z = z + 0.5 * beta * g * g
    return z


def sample_first_passage_psi(a, nu, rng, size=None):
    """Exact draw of the hitting time of the first-family boundary psi_a.

    Equal in law to t_max(a) * exp(-Z) with Z ~ Gamma(nu + 2, 1/(nu + 1)),
    where t_max(a) = [a / (Gamma(nu+1) 2^nu)]^(1/(nu+1)).
    """
    if a <= 0.0:
        raise ValueError(f"image constant a must be positive, got {a}")
    _check_half_integer(nu + 2.0)
    t_max = (a / math.exp(ln_gamma(nu + 1.0) + nu * math.log(2.0))) ** (1.0 / (nu + 1.0))
    z = sample_gamma_half_integer(nu + 2.0, 1.0 / (nu + 1.0), rng, size=size)
    return t_max * np.exp(-z) if size is not None else t_max * math.exp(-z)


def sample_unit_sphere(delta, rng, size=None):
    """Uniform draw(s) on the surface of the unit sphere in R^delta.

    A delta-vector of independent Gaussians normalized to unit length;
    for delta = 1 this degenerates to a uniform sign.
    """
    if delta < 1:
        raise ValueError(f"dimension must be >= 1, got {delta}")
    if size is None:
        if delta == 1:
            return np.array([1.0 if rng.uniform() < 0.5 else -1.0])
        g = rng.gaussians(delta)
        norm = math.sqrt(float(g @ g))
        while norm == 0.0:
            g = rng.gaussians(delta)
            norm = math.sqrt(float(g @ g))
        return g / norm
    if delta == 1:
        return np.where(rng.uniforms(size) < 0.5, 1.0, -1.0)[:, None]
    g = rng.gaussians((size, delta))
    return g / np.linalg.norm(g, axis=1, keepdims=True)
