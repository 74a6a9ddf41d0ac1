"""Independent reference computations used to derive and freeze expected values.

Everything here is written from the defining formulas with the most naive
method available (dense matrices, double loops, plain fractions) and shares no
code with the package.
"""

from fractions import Fraction

import numpy as np


def line_interval(k):
    if k == 0:
        return Fraction(-1), Fraction(1)
    if k > 0:
        return Fraction(2) ** (k - 1), Fraction(2) ** k
    return -(Fraction(2) ** (-k)), -(Fraction(2) ** (-k - 1))


def unit_interval(k):
    if k == 0:
        return Fraction(1, 4), Fraction(3, 4)
    if k >= 1:
        return 1 - Fraction(1, 2 ** (k + 1)), 1 - Fraction(1, 2 ** (k + 2))
    return Fraction(2) ** (k - 2), Fraction(2) ** (k - 1)


def nested(path):
    lo, hi = line_interval(path[0])
    for k in path[1:]:
        a, b = unit_interval(k)
        lo, hi = lo + (hi - lo) * a, lo + (hi - lo) * b
    return lo, hi


def brute_modulus(values, delta, spacing=1.0):
    """Max |f(s) - f(t)| over all pairs of 1-D grid points with |s - t| <= delta."""
    v = np.asarray(values)
    n = len(v)
    best = 0.0
    for i in range(n):
        for j in range(i + 1, n):
            if (j - i) * spacing <= delta + 1e-12:
                best = max(best, abs(v[i] - v[j]))
    return best


def circulant(m):
    """Dense matrix of f -> ifft(m * fft(f)) on Z_N (1-D)."""
    N = len(m)
    eye = np.eye(N)
    return np.fft.ifft(m[:, None] * np.fft.fft(eye, axis=0), axis=0)


def dense_norm_1(m):
    A = circulant(np.asarray(m))
    return float(np.abs(A).sum(axis=0).max())


def dense_norm_2(m):
    return float(np.linalg.svd(circulant(np.asarray(m)), compute_uv=False)[0])


def random_search_norm(m, p, samples=4000, seed=0):
    """Best ratio over random complex test vectors (a lower estimate)."""
    A = circulant(np.asarray(m))
    rng = np.random.default_rng(seed)
    X = rng.standard_normal((A.shape[0], samples)) + 1j * rng.standard_normal((A.shape[0], samples))
    num = (np.abs(A @ X) ** p).sum(0) ** (1 / p)
    den = (np.abs(X) ** p).sum(0) ** (1 / p)
    return float((num / den).max())


def floor_refinement(a, b, depth=40):
    """Floors of the dyadic sub-partition endpoints of (a, b), with a and b added."""
    L = b - a
    pts = {a, b}
    for k in range(-depth, depth + 1):
        u, w = unit_interval(k)
        for t in (u, w):
            c = int(np.floor(float(a + t * L)))
            if a < c < b:
                pts.add(c)
    pts = sorted(pts)
    return list(zip(pts, pts[1:]))
