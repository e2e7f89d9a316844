"""Geometry of the complex unit sphere: measure, sampling, Monte Carlo norms.

The surface measure is NOT normalised: the sphere in C^d carries total mass
omega(d) = 2 pi^d / (d-1)!, the surface area of S^(2d-1) in R^(2d). Every
norm estimator therefore multiplies sample means by omega(d) explicitly.

Sampling is reproducible and worker-independent: points are generated in
fixed-size chunks, each chunk seeded by (seed, chunk index) through a
SeedSequence spawn key, so serial and parallel runs produce bit-identical
streams for the same (seed, count, chunk).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ArgumentError

DEFAULT_CHUNK = 4096


def omega(d):
    """Surface area of the unit sphere of C^d, i.e. of S^(2d-1) in R^(2d)."""
    if d < 1:
        raise ArgumentError(f"dimension d must be >= 1, got {d}")
    return 2.0 * math.pi**d / math.factorial(d - 1)


def upsilon(z):
    """Identify points of C^d with R^(2d): (x1, y1, ..., xd, yd)."""
    z = np.asarray(z, dtype=complex)
    out = np.empty(z.shape[:-1] + (2 * z.shape[-1],), dtype=float)
    out[..., 0::2] = z.real
    out[..., 1::2] = z.imag
    return out


def _chunk_rng(seed, index):
    return np.random.default_rng(np.random.SeedSequence(entropy=seed, spawn_key=(index,)))


def sample_points(d, count, seed, chunk=DEFAULT_CHUNK):
    """Uniform i.i.d. points on the unit sphere of C^d, shape (count, d) complex.

    Normalised standard Gaussian vectors in R^(2d). Deterministic for fixed
    (seed, count, chunk) regardless of how the chunks are scheduled.
    """
    if count < 1:
        raise ArgumentError(f"sample count must be >= 1, got {count}")
    if chunk < 1:
        raise ArgumentError(f"chunk size must be >= 1, got {chunk}")
    blocks = []
    for index in range(0, -(-count // chunk)):
        n = min(chunk, count - index * chunk)
        g = _chunk_rng(seed, index).standard_normal((n, 2 * d))
        z = g[:, 0::2] + 1j * g[:, 1::2]
        norms = np.sqrt(np.sum(np.abs(z) ** 2, axis=1, keepdims=True))
        blocks.append(z / norms)
    return np.concatenate(blocks, axis=0)


@dataclass(frozen=True)
class McEstimate:
    """A Monte Carlo estimate with its standard error and provenance."""

    value: float
    stderr: float
    samples: int
    seed: int


def lp_norm_mc(values, p, d, seed=0):
    """L^p(Omega_d) norm estimate from |f| sampled at uniform points.

    For finite p returns (omega(d) * mean(|f|^p))^(1/p) with the delta-method
    standard error. For p = inf returns max(values), which is a lower-biased
    estimate of the essential sup (stderr is reported as 0).
    """
    values = np.asarray(values, dtype=float)
    if values.size == 0:
        raise ArgumentError("cannot estimate a norm from zero samples")
    if not np.all(np.isfinite(values)):
        raise ArgumentError("sampled |f| values must be finite")
    if p != math.inf and p < 1:
        raise ArgumentError(f"need p >= 1 or p = inf, got {p}")
    n = values.size
    if p == math.inf:
        return McEstimate(value=float(values.max()), stderr=0.0, samples=n, seed=seed)
    w = omega(d)
    powers = values**p
    mean = float(powers.mean())
    est = (w * mean) ** (1.0 / p)
    if n > 1 and mean > 0:
        se_mean = float(powers.std(ddof=1)) / math.sqrt(n)
        stderr = (1.0 / p) * (w * mean) ** (1.0 / p - 1.0) * w * se_mean
    else:
        stderr = 0.0
    return McEstimate(value=est, stderr=stderr, samples=n, seed=seed)


def sup_norm_refined(f, d, samples, seed, rounds=3, shrink=0.3):
    """Lower bound for sup |f| on the sphere: dense sampling plus cap refinement.

    Starts from uniform samples, then repeatedly resamples a shrinking
    Gaussian cap around the running maximiser. f must accept an (n, d)
    complex array and return |f| or f values (magnitudes are taken here).
    """
    pts = sample_points(d, samples, seed)
    vals = np.abs(np.asarray(f(pts)))
    best = float(vals.max())
    center = pts[int(np.argmax(vals))]
    sigma = shrink
    for r in range(rounds):
        rng = _chunk_rng(seed, 10_000 + r)
        perturbed = center + sigma * (rng.standard_normal((samples, d)) + 1j * rng.standard_normal((samples, d)))
        perturbed /= np.sqrt(np.sum(np.abs(perturbed) ** 2, axis=1, keepdims=True))
        vals = np.abs(np.asarray(f(perturbed)))
        if float(vals.max()) > best:
            best = float(vals.max())
            center = perturbed[int(np.argmax(vals))]
        sigma *= shrink
    return best
