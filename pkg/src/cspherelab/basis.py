"""Exact orthogonal bases of the bidegree harmonic spaces on the complex sphere.

The harmonic space of bidegree (m, n) is realised as the orthogonal
complement of the restricted bidegree-(m-1, n-1) polynomials inside the
restricted bidegree-(m, n) polynomials. All linear algebra runs in exact
rational arithmetic over the closed-form monomial inner product, so emitted
vectors are *exactly* orthogonal; square roots appear only when a vector is
evaluated in floating point.

Two structural facts keep the construction cheap:

* Monomials z^a zbar^b only couple when their signatures a - b agree, so the
  Gram matrix is block diagonal and the Gram-Schmidt passes run per block.
* Restriction to the sphere is injective on each bidegree-homogeneous
  polynomial space, so the only exact zeros met during orthogonalisation are
  the expected rank drops from quotienting out the lower bidegree.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .dimensions import bidegree_monomials, dim_complex_harmonic
from .errors import ArgumentError, ConsistencyError
from .polynomials import disk_poly_eval
from .sphere import DEFAULT_CHUNK, omega, sample_points

# Combinatorial growth guard for exact basis construction.
MAX_BIDEGREE = 8
MAX_DIMENSION = 4

POINT_TOL = 1e-12


def monomial_inner(d, a, b, c, e):
    """Exact inner product <z^a zbar^b, z^c zbar^e> on the sphere, in units of omega(d).

    Zero unless a + e == b + c componentwise; otherwise
    (d-1)! * prod((a_j + e_j)!) / (d - 1 + |a+e|)! as a Fraction.
    """
    if not (len(a) == len(b) == len(c) == len(e) == d):
        raise ArgumentError("multi-index length mismatch")
    total = tuple(ai + ei for ai, ei in zip(a, e))
    if total != tuple(bi + ci for bi, ci in zip(b, c)):
        return Fraction(0)
    num = math.factorial(d - 1)
    for t in total:
        num *= math.factorial(t)
    return Fraction(num, math.factorial(d - 1 + sum(total)))


class MonomialPoly:
    """Sparse polynomial sum_{(a,b)} c_{a,b} z^a zbar^b with Fraction coefficients."""

    __slots__ = ("d", "terms")

    def __init__(self, d, terms=None):
        self.d = d
        self.terms = {}
        if terms:
            for key, coeff in terms.items():
                coeff = Fraction(coeff)
                if coeff != 0:
                    self.terms[key] = coeff

    @classmethod
    def monomial(cls, d, a, b, coeff=1):
        return cls(d, {(tuple(a), tuple(b)): Fraction(coeff)})

    def __add__(self, other):
        out = dict(self.terms)
        for key, coeff in other.terms.items():
            new = out.get(key, Fraction(0)) + coeff
            if new == 0:
                out.pop(key, None)
            else:
                out[key] = new
        return MonomialPoly(self.d, out)

    def __sub__(self, other):
        return self + other.scale(Fraction(-1))

    def scale(self, factor):
        factor = Fraction(factor)
        if factor == 0:
            return MonomialPoly(self.d)
        return MonomialPoly(self.d, {k: c * factor for k, c in self.terms.items()})

    def conj(self):
        """Complex conjugate: swaps each (a, b) to (b, a) (coefficients are real)."""
        return MonomialPoly(self.d, {(b, a): c for (a, b), c in self.terms.items()})

    def inner(self, other):
        """Exact inner product in units of omega(d)."""
        total = Fraction(0)
        for (a, b), cf in self.terms.items():
            for (c, e), cg in other.terms.items():
                v = monomial_inner(self.d, a, b, c, e)
                if v != 0:
                    total += cf * cg * v
        return total

    def is_zero(self):
        return not self.terms

    def eval(self, points):
        """Evaluate at an (N, d) complex array (or a single point) -> complex values."""
        points = np.asarray(points, dtype=complex)
        single = points.ndim == 1
        if single:
            points = points[None, :]
        out = np.zeros(points.shape[0], dtype=complex)
        conj_points = np.conj(points)
        for (a, b), coeff in self.terms.items():
            term = np.full(points.shape[0], complex(coeff))
            for j, aj in enumerate(a):
                if aj:
                    term = term * points[:, j] ** aj
            for j, bj in enumerate(b):
                if bj:
                    term = term * conj_points[:, j] ** bj
            out += term
        return out[0] if single else out

    def __repr__(self):
        return f"MonomialPoly(d={self.d}, {len(self.terms)} terms)"


def _gram_schmidt(vectors):
    """Exact Gram-Schmidt; drops exact zeros. Returns (orthogonal vectors, sq norms)."""
    basis = []
    norms = []
    for v in vectors:
        for u, q in zip(basis, norms):
            coeff = v.inner(u)
            if coeff != 0:
                v = v - u.scale(coeff / q)
        q = v.inner(v)
        if q != 0:
            basis.append(v)
            norms.append(q)
    return basis, norms


@dataclass(frozen=True)
class HarmonicBasis:
    """Exact orthogonal basis of one bidegree harmonic space.

    vectors are pairwise orthogonal (exactly, in rational arithmetic) and
    orthogonal to every lower-bidegree polynomial; sq_norms[j] is the exact
    squared norm of vectors[j] in units of omega(d). The L^2-orthonormal
    function is vectors[j] / sqrt(sq_norms[j] * omega(d)).
    """

    d: int
    m: int
    n: int
    vectors: tuple
    sq_norms: tuple

    @property
    def dim(self):
        return len(self.vectors)

    def eval_orthonormal(self, points, j=None):
        """Orthonormalised values: a single function (j given) or an (N, dim) matrix."""
        points = np.asarray(points, dtype=complex)
        _check_on_sphere(points)
        if j is not None:
            if not 0 <= j < self.dim:
                raise ArgumentError(f"basis index {j} out of range [0, {self.dim})")
            scale = 1.0 / math.sqrt(float(self.sq_norms[j]) * omega(self.d))
            return self.vectors[j].eval(points) * scale
        single = points.ndim == 1
        pts = points[None, :] if single else points
        out = np.empty((pts.shape[0], self.dim), dtype=complex)
        for k, (vec, q) in enumerate(zip(self.vectors, self.sq_norms)):
            out[:, k] = vec.eval(pts) / math.sqrt(float(q) * omega(self.d))
        return out[0] if single else out


def _check_on_sphere(points):
    pts = np.atleast_2d(np.asarray(points, dtype=complex))
    r2 = np.sum(np.abs(pts) ** 2, axis=1)
    if np.any(np.abs(r2 - 1.0) > POINT_TOL):
        worst = float(np.max(np.abs(r2 - 1.0)))
        raise ArgumentError(f"points must lie on the unit sphere (|<z,z>-1| = {worst})")


@lru_cache(maxsize=None)
def build_basis(d, m, n):
    """Exact orthogonal basis of the bidegree-(m, n) harmonic space on Omega_d.

    Two-stage Gram-Schmidt per signature block: project the bidegree-(m, n)
    monomials against the restricted bidegree-(m-1, n-1) span, then
    orthogonalise the surviving residuals. Aborts if the emitted count
    disagrees with the dimension formula.
    """
    if d < 2:
        raise ArgumentError(f"complex dimension d must be >= 2, got {d}")
    if m < 0 or n < 0:
        raise ArgumentError(f"bidegree must be nonnegative, got ({m}, {n})")
    if m > MAX_BIDEGREE or n > MAX_BIDEGREE or d > MAX_DIMENSION:
        raise ArgumentError(
            f"basis construction limited to m, n <= {MAX_BIDEGREE} and d <= {MAX_DIMENSION}"
            f" (requested d={d}, bidegree ({m}, {n}))")

    uppers = bidegree_monomials(d, m, n)
    lowers = bidegree_monomials(d, m - 1, n - 1) if m > 0 and n > 0 else []

    blocks = {}
    for a, b in uppers:
        sig = tuple(ai - bi for ai, bi in zip(a, b))
        blocks.setdefault(sig, ([], []))[0].append((a, b))
    for a, b in lowers:
        sig = tuple(ai - bi for ai, bi in zip(a, b))
        blocks.setdefault(sig, ([], []))[1].append((a, b))

    vectors = []
    sq_norms = []
    for sig in sorted(blocks, reverse=True):
        upper_keys, lower_keys = blocks[sig]
        low_basis, low_norms = _gram_schmidt(
            [MonomialPoly.monomial(d, a, b) for a, b in lower_keys])
        residuals = []
        for a, b in upper_keys:
            v = MonomialPoly.monomial(d, a, b)
            for u, q in zip(low_basis, low_norms):
                coeff = v.inner(u)
                if coeff != 0:
                    v = v - u.scale(coeff / q)
            if not v.is_zero():
                residuals.append(v)
        got, norms = _gram_schmidt(residuals)
        vectors.extend(got)
        sq_norms.extend(norms)

    expected = dim_complex_harmonic(d, m, n)
    if len(vectors) != expected:
        raise ConsistencyError(
            f"basis construction for d={d}, bidegree ({m}, {n}) emitted "
            f"{len(vectors)} vectors but the dimension formula gives {expected}")
    return HarmonicBasis(d=d, m=m, n=n, vectors=tuple(vectors), sq_norms=tuple(sq_norms))


def zonal_eval(d, m, n, w, z):
    """Zonal kernel of the (m, n) harmonic space with pole w, evaluated at z.

    (dim / omega(d)) * R_{m,n}^(d-2)(<z, w>), where <z, w> = sum z_j conj(w_j).
    z may be a single point or an (N, d) array.
    """
    w = np.asarray(w, dtype=complex)
    _check_on_sphere(w)
    z = np.asarray(z, dtype=complex)
    _check_on_sphere(z)
    t = z @ np.conj(w) if z.ndim > 1 else np.dot(z, np.conj(w))
    return (dim_complex_harmonic(d, m, n) / omega(d)) * disk_poly_eval(m, n, d - 2, t)


def verify_addition(d, m, n, samples, seed, chunk=DEFAULT_CHUNK):
    """Max deviation of the reproducing identity over random point pairs.

    Checks both sum_j conj(Y_j(w)) Y_j(z) = zonal(w, z) and the diagonal
    normalisation sum_j |Y_j(z)|^2 = dim / omega(d).
    """
    if samples < 1:
        raise ArgumentError("need at least one sample pair")
    basis_ = build_basis(d, m, n)
    pts = sample_points(d, 2 * samples, seed, chunk)
    zs, ws = pts[:samples], pts[samples:]
    ez = basis_.eval_orthonormal(zs)
    ew = basis_.eval_orthonormal(ws)
    lhs = np.sum(np.conj(ew) * ez, axis=1)
    dmn = dim_complex_harmonic(d, m, n)
    t = np.sum(zs * np.conj(ws), axis=1)
    rhs = (dmn / omega(d)) * disk_poly_eval(m, n, d - 2, t)
    dev_pairs = float(np.max(np.abs(lhs - rhs)))
    diag = np.sum(np.abs(ez) ** 2, axis=1)
    dev_diag = float(np.max(np.abs(diag - dmn / omega(d))))
    return max(dev_pairs, dev_diag)


def verify_gegenbauer(d, k, samples, seed, chunk=DEFAULT_CHUNK):
    """Max deviation between the real-sphere zonal of total degree k (through
    the identification of C^d with R^(2d)) and the sum of complex zonals with
    m + n = k, over random point pairs.

    The left side uses the Gegenbauer polynomial with index d - 1 (the real
    sphere is S^(2d-1)) evaluated at Re <z, w>; this check pins down the
    Gegenbauer normalisation used in this package.
    """
    from .polynomials import gegenbauer_eval

    if k < 0:
        raise ArgumentError(f"degree must be nonnegative, got {k}")
    if samples < 1:
        raise ArgumentError("need at least one sample pair")
    pts = sample_points(d, 2 * samples, seed, chunk)
    zs, ws = pts[:samples], pts[samples:]
    t = np.sum(zs * np.conj(ws), axis=1)
    w = omega(d)
    lhs = (2 * d + 2 * k - 2) / (w * (2 * d - 2)) * gegenbauer_eval(k, d - 1, t.real)
    rhs = np.zeros_like(lhs, dtype=complex)
    for m in range(k + 1):
        n = k - m
        rhs += (dim_complex_harmonic(d, m, n) / w) * disk_poly_eval(m, n, d - 2, t)
    return float(np.max(np.abs(lhs - rhs)))


def project_mc(f, d, m, n, w, samples, seed, chunk=DEFAULT_CHUNK):
    """Monte Carlo estimate of the projection of f onto the (m, n) harmonic
    space, evaluated at the pole w.

    Integrates f(z) * conj(zonal_w(z)) over the sphere: returns
    (omega(d) * mean, stderr) where the stderr combines the real and
    imaginary sample variances of the integrand.
    """
    if samples < 2:
        raise ArgumentError("need at least two samples for a standard error")
    pts = sample_points(d, samples, seed, chunk)
    fvals = np.asarray(f(pts), dtype=complex)
    if not np.all(np.isfinite(fvals)):
        from .errors import DataError

        raise DataError("f produced non-finite values at sample points")
    integrand = fvals * np.conj(zonal_eval(d, m, n, w, pts))
    wd = omega(d)
    estimate = wd * complex(integrand.mean())
    var = integrand.real.var(ddof=1) + integrand.imag.var(ddof=1)
    stderr = wd * math.sqrt(var / samples)
    return estimate, stderr
