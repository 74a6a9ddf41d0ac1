"""Discrete Fourier machinery on cyclic grids.

Spatial samples live on Z_N^d; frequencies are the integers in
``[-N/2, N/2)^d``.  Arrays are kept in numpy's FFT order (index ``j`` is
frequency ``j`` for ``j < N/2`` and ``j - N`` otherwise); partitions and
rectangles are described in natural integer frequencies and converted.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import product
from typing import Callable, Sequence

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_array

from .nets import AlphaNet, EndpointHit, Net, unit_dyadic

__all__ = [
    "GridSignal",
    "Spectrum",
    "FrequencyPartition",
    "spectrum",
    "frequencies",
    "symbol_axis",
    "project",
    "square_function",
    "SquareFunction",
    "lp_norm",
    "empirical_lp_constants",
    "lp_ratio_table",
    "partition_from_cuts",
    "dyadic_partition",
    "full_band",
    "refine_partition_dyadic",
    "product_partition",
    "ProductSymbol",
    "rank_centers",
    "approximant",
    "oscillation",
    "periodize",
]


@dataclass
class GridSignal:
    """Samples on a uniform grid: the torus (``domain="torus"``) or a truncated box of R^d."""

    values: np.ndarray
    domain: str = "torus"
    box: float | None = None

    def __post_init__(self):
        self.values = np.asarray(self.values)
        n = self.values.shape
        if len(set(n)) > 1:
            raise ValueError(f"grid must have equal size per axis, got {n}")
        N = n[0]
        if N & (N - 1):
            raise ValueError(f"N must be a power of two, got {N}")
        if self.domain not in ("torus", "line"):
            raise ValueError("domain is 'torus' or 'line'")
        if not np.all(np.isfinite(self.values)):
            raise ValueError("samples must be finite")

    @property
    def N(self) -> int:
        return self.values.shape[0]

    @property
    def d(self) -> int:
        return self.values.ndim


@dataclass
class Spectrum:
    coefficients: np.ndarray  # FFT order

    @property
    def N(self) -> int:
        return self.coefficients.shape[0]

    def at(self, n) -> complex:
        idx = tuple(int(k) % self.N for k in np.atleast_1d(n))
        return complex(self.coefficients[idx])

    def natural(self) -> np.ndarray:
        return np.fft.fftshift(self.coefficients)

    def inverse(self) -> np.ndarray:
        return np.fft.ifftn(self.coefficients)


def _values(f):
    return f.values if isinstance(f, GridSignal) else np.asarray(f)


def _wrap(f, values):
    if isinstance(f, GridSignal):
        return GridSignal(values, f.domain, f.box)
    return values


def spectrum(f) -> Spectrum:
    return Spectrum(np.fft.fftn(_values(f)))


def frequencies(N: int) -> np.ndarray:
    """Integer frequencies in FFT order."""
    return np.fft.fftfreq(N, 1.0 / N).astype(int)


def symbol_axis(N: int, box: float) -> np.ndarray:
    """Points of [-box, box) carried by the FFT-ordered frequency slots of Z_N."""
    return frequencies(N) * (2.0 * box / N)


def lp_norm(x, p: float) -> float:
    a = np.abs(np.asarray(x)).ravel()
    if math.isinf(p):
        return float(a.max())
    return float(np.sum(a ** p) ** (1.0 / p))


# ---------------------------------------------------------------------------
# partitions
# ---------------------------------------------------------------------------

@dataclass
class FrequencyPartition:
    """Disjoint integer-frequency rectangles covering ``[-N/2, N/2)^d``.

    Each rectangle is a tuple of half-open ``(lo, hi)`` pairs, one per axis.
    """

    N: int
    rectangles: list = field(default_factory=list)

    def __post_init__(self):
        self.rectangles = [tuple((int(a), int(b)) for a, b in r) for r in self.rectangles]
        if not self.rectangles:
            raise ValueError("empty partition")
        self._labels = self._build_labels()

    @property
    def d(self) -> int:
        return len(self.rectangles[0])

    def _build_labels(self):
        N, d = self.N, self.d
        labels = np.full((N,) * d, -1, dtype=np.int64)
        half = N // 2
        for i, rect in enumerate(self.rectangles):
            if len(rect) != d:
                raise ValueError("rectangles of mixed dimension")
            idx = []
            for lo, hi in rect:
                if not (-half <= lo < hi <= half):
                    raise ValueError(f"rectangle {rect} leaves the band [{-half}, {half})")
                idx.append(np.arange(lo, hi) % N)
            block = np.ix_(*idx)
            if np.any(labels[block] >= 0):
                raise ValueError(f"rectangle {rect} overlaps another")
            labels[block] = i
        if np.any(labels < 0):
            raise ValueError("partition does not cover the band")
        return labels

    @property
    def labels(self) -> np.ndarray:
        """Rectangle index of every frequency slot (FFT order)."""
        return self._labels

    def mask(self, i: int) -> np.ndarray:
        return self._labels == i

    def __len__(self):
        return len(self.rectangles)


def partition_from_cuts(cuts, lo: int, hi: int) -> list:
    """1-D integer intervals between the floors of ``cuts`` (plus ``lo`` and ``hi``)."""
    pts = {lo, hi}
    for c in cuts:
        c = math.floor(c)
        if lo < c < hi:
            pts.add(c)
    pts = sorted(pts)
    return [(a, b) for a, b in zip(pts, pts[1:])]


def full_band(N: int, d: int = 1) -> FrequencyPartition:
    return FrequencyPartition(N, [((-N // 2, N // 2),) * d])


def dyadic_partition(N: int, d: int = 1) -> FrequencyPartition:
    """Dyadic partition of the line truncated to the band (product partition for d > 1)."""
    half = N // 2
    cuts = [s * 2 ** k for k in range(int(math.log2(half)) + 1) for s in (1, -1)]
    ivs = partition_from_cuts(cuts, -half, half)
    return product_partition([ivs] * d, N)


def product_partition(axes: Sequence[Sequence[tuple]], N: int) -> FrequencyPartition:
    return FrequencyPartition(N, [tuple(r) for r in product(*axes)])


def _refine_interval(a: int, b: int) -> list:
    if b - a < 2:
        return [(a, b)]
    L = b - a
    depth = int(math.log2(L)) + 3
    cuts = []
    for k in range(-depth, depth + 1):
        u0, u1 = unit_dyadic(k)
        cuts += [a + u0 * L, a + u1 * L]
    return partition_from_cuts(cuts, a, b)


def refine_partition_dyadic(partition: FrequencyPartition) -> FrequencyPartition:
    """Replace each interval by the floors of its dyadic sub-partition.

    Intervals shorter than two frequencies are kept whole; cuts that collapse
    after flooring are merged, so the result is again a partition.
    """
    if partition.d != 1:
        raise ValueError("refinement is defined for one-dimensional partitions")
    rects = []
    for ((a, b),) in partition.rectangles:
        rects += [((lo, hi),) for lo, hi in _refine_interval(a, b)]
    return FrequencyPartition(partition.N, rects)


# ---------------------------------------------------------------------------
# projections and the square function
# ---------------------------------------------------------------------------

def _rect_mask(rect, N: int) -> np.ndarray:
    idx = [np.arange(lo, hi) % N for lo, hi in rect]
    m = np.zeros((N,) * len(rect), dtype=bool)
    m[np.ix_(*idx)] = True
    return m


def project(f, rect):
    """Band projection: keep the Fourier coefficients inside ``rect``."""
    v = _values(f)
    N = v.shape[0]
    rect = tuple(rect) if isinstance(rect[0], (tuple, list)) else (tuple(rect),)
    out = np.fft.ifftn(np.fft.fftn(v) * _rect_mask(rect, N))
    return _wrap(f, out)


def square_function(f, partition: FrequencyPartition):
    """``sqrt(sum_I |S_I f|^2)`` over the rectangles of ``partition``."""
    v = _values(f)
    if v.shape != partition.labels.shape:
        raise ValueError(f"signal shape {v.shape} does not match partition grid")
    F = np.fft.fftn(v).ravel()
    labels = partition.labels.ravel()
    axes = tuple(range(1, v.ndim + 1))
    acc = np.zeros(v.size, dtype=float)
    chunk = max(1, (1 << 20) // v.size)
    for start in range(0, len(partition), chunk):
        ids = np.arange(start, min(start + chunk, len(partition)))
        block = np.where(labels[None, :] == ids[:, None], F[None, :], 0)
        parts = np.fft.ifftn(block.reshape((len(ids),) + v.shape), axes=axes)
        acc += (np.abs(parts) ** 2).sum(0).ravel()
    return _wrap(f, np.sqrt(acc).reshape(v.shape))


class SquareFunction(TransformerMixin, BaseEstimator):
    """Row-wise square function of 1-D signals, as a scikit-learn transformer."""

    def __init__(self, partition: str | FrequencyPartition = "dyadic", refinements: int = 0):
        self.partition = partition
        self.refinements = refinements

    def fit(self, X, y=None):
        X = check_array(X, dtype=None)
        N = X.shape[1]
        if isinstance(self.partition, FrequencyPartition):
            part = self.partition
        elif self.partition == "dyadic":
            part = dyadic_partition(N)
        elif self.partition == "full":
            part = full_band(N)
        else:
            raise ValueError(f"unknown partition {self.partition!r}")
        for _ in range(self.refinements):
            part = refine_partition_dyadic(part)
        self.partition_ = part
        self.n_features_in_ = N
        return self

    def transform(self, X):
        X = check_array(X, dtype=None)
        if X.shape[1] != self.n_features_in_:
            raise ValueError("signal length changed since fit")
        return np.stack([square_function(row, self.partition_) for row in X])


def lp_ratio_table(partition: FrequencyPartition, ps: Sequence[float], trials: int = 100,
                   seed: int = 0) -> dict:
    """``||S f||_p / ||f||_p`` for every trial signal and every ``p`` (one pass per trial).

    Trial ``t`` has i.i.d. complex Gaussian Fourier coefficients drawn from
    ``default_rng([seed, t])``, so every partition sees the same signals.
    """
    for p in ps:
        if not 1 < p < math.inf:
            raise ValueError("p must lie in (1, inf)")
    shape = partition.labels.shape
    out = {p: np.empty(trials) for p in ps}
    for t in range(trials):
        rng = np.random.default_rng([seed, t])
        F = rng.standard_normal(shape) + 1j * rng.standard_normal(shape)
        f = np.fft.ifftn(F)
        Sf = square_function(f, partition)
        for p in ps:
            out[p][t] = lp_norm(Sf, p) / lp_norm(f, p)
    return out


def empirical_lp_constants(partition: FrequencyPartition, p: float, trials: int = 100,
                           seed: int = 0, return_ratios: bool = False):
    """Min and max of ``||S f||_p / ||f||_p`` over seeded random signals."""
    ratios = lp_ratio_table(partition, [p], trials, seed)[p]
    out = (float(ratios.min()), float(ratios.max()))
    return (out, ratios) if return_ratios else out


# ---------------------------------------------------------------------------
# piecewise-constant approximants on the symbol grid
# ---------------------------------------------------------------------------

class ProductSymbol:
    """``g = f o h`` with ``h`` acting coordinatewise; evaluated on product grids.

    ``axis_map`` is the one-dimensional increasing map (a float function),
    memoised because the grids repeat coordinates heavily.
    """

    def __init__(self, f: Callable, axis_map: Callable[[float], float], d: int = 1):
        self.f = f
        self.axis_map = axis_map
        self.d = d
        self._memo = {}

    def map_axis(self, coords) -> np.ndarray:
        coords = np.asarray(coords, dtype=float)
        out = np.empty(coords.shape)
        for i, c in enumerate(coords.ravel()):
            v = self._memo.get(c)
            if v is None:
                v = self._memo[c] = float(self.axis_map(c))
            out.flat[i] = v
        return out

    def on_axes(self, axes: Sequence[np.ndarray]) -> np.ndarray:
        """Values on the product grid ``axes[0] x ... x axes[d-1]``."""
        mapped = [self.map_axis(a) for a in axes]
        if self.d == 1:
            return np.asarray(self.f(mapped[0]))
        mesh = np.stack(np.meshgrid(*mapped, indexing="ij"), axis=-1)
        return np.asarray(self.f(mesh))


def rank_centers(coords, rank: int, net: Net | None = None) -> np.ndarray:
    """Center of the rank-``rank`` net interval holding each coordinate.

    A coordinate that is itself a net endpoint of rank at most ``rank`` lies
    in no open interval of that rank; it is returned unchanged, which keeps it
    inside the closure of both neighbouring intervals.
    """
    net = net if net is not None else AlphaNet()
    coords = np.asarray(coords, dtype=float)
    out = np.empty(coords.shape)
    for i, c in enumerate(coords.ravel()):
        hit = net.locate(c, rank)
        out.flat[i] = c if isinstance(hit, EndpointHit) else float(net.interval(hit).midpoint)
    return out


def approximant(g: ProductSymbol, axes: Sequence[np.ndarray], rank: int,
                net: Net | None = None) -> np.ndarray:
    """``g_nu``: on each rank-``rank`` rectangle, the value of ``g`` at its center."""
    centers = [rank_centers(a, rank, net) for a in axes]
    return g.on_axes(centers)


def oscillation(values, coords: Sequence[np.ndarray], rect) -> float:
    """Sup of pairwise differences of grid values inside a half-open rectangle."""
    values = np.asarray(values)
    sel = []
    for c, (lo, hi) in zip(coords, rect):
        c = np.asarray(c)
        sel.append(np.nonzero((c >= float(lo)) & (c < float(hi)))[0])
    if any(len(s) == 0 for s in sel):
        raise ValueError("no grid point lies in the rectangle")
    block = values[np.ix_(*sel)].ravel()
    if np.isrealobj(block):
        return float(block.max() - block.min())
    if block.size <= 4096:
        return float(np.abs(block[:, None] - block[None, :]).max())
    best = 0.0
    for chunk in np.array_split(block, math.ceil(block.size / 1024)):
        best = max(best, float(np.abs(chunk[:, None] - block[None, :]).max()))
    return best


def periodize(m0, N: int, offset: int = 0) -> np.ndarray:
    """Periodic extension of a cube-supported symbol onto the torus grid.

    ``m0[i]`` (per axis) sits at torus slot ``(offset + i) mod N``; ``m0`` may
    be longer than ``N`` only if it vanishes outside one period.
    """
    m0 = np.asarray(m0)
    d = m0.ndim
    M = m0.shape[0]
    if M > N:
        outside = np.ones(m0.shape, dtype=bool)
        outside[(slice(0, N),) * d] = False
        if np.any(m0[outside] != 0):
            raise ValueError("support exceeds one period")
        m0 = m0[(slice(0, N),) * d]
        M = N
    out = np.zeros((N,) * d, dtype=m0.dtype)
    idx = [(offset + np.arange(M)) % N for _ in range(d)]
    out[np.ix_(*idx)] = m0
    return out
