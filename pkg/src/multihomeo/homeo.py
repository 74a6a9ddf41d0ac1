"""Homeomorphisms: the radial map psi, the net map phi and its coordinate/torus versions.

All maps follow the scikit-learn transformer protocol (``fit`` builds the
construction, ``transform``/``inverse_transform`` evaluate it on arrays of
points) and also expose exact scalar evaluation on fractions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_array, check_is_fitted

from .modulus import CModel, select_b, select_delta
from .nets import (
    AlphaNet,
    BetaNet,
    Interval,
    Net,
    NetAddress,
    _floor_log2,
    _pow2,
    to_fraction,
)

__all__ = [
    "RadialHomeomorphism",
    "radial_build",
    "radial_eval",
    "radial_lipschitz_check",
    "LocalPoint",
    "PhiValue",
    "NetHomeomorphism",
    "CoordinateHomeomorphism",
    "AffineLineMap",
    "TorusHomeomorphism",
    "torus_adapt",
    "TWO_PI",
]

TWO_PI = Fraction(2 * math.pi)
# largest rank-1 alpha index whose endpoints we are willing to materialise
MATERIALISE_LIMIT = 20000


# ---------------------------------------------------------------------------
# radial homeomorphism
# ---------------------------------------------------------------------------

class RadialHomeomorphism(TransformerMixin, BaseEstimator):
    """Radial map ``psi(x) = g(|x|) x/|x|`` slowing a family down shell by shell.

    Parameters
    ----------
    shell_moduli : callable or sequence
        ``shell_moduli(j)`` (or ``shell_moduli[j]``) is a modulus of the
        family on the shell ``j <= |x| <= j + 1``.
    n_shells : int
        Number of shells for which ``b_j`` is computed.  Beyond the last
        breakpoint the profile continues with the last slope.
    b : sequence, optional
        Explicit decreasing ``b_0, b_1, ...`` in (0, 1); skips the selection.
    """

    def __init__(self, shell_moduli=None, n_shells: int = 12, b=None):
        self.shell_moduli = shell_moduli
        self.n_shells = n_shells
        self.b = b

    def _omegas(self):
        sm = self.shell_moduli
        if callable(sm):
            return [sm(j) for j in range(self.n_shells + 1)]
        return list(sm)[: self.n_shells + 1]

    def fit(self, X=None, y=None):
        if self.b is not None:
            b = np.asarray(self.b, dtype=float)
            if np.any(b <= 0) or np.any(b >= 1) or np.any(np.diff(b) >= 0):
                raise ValueError("b must be strictly decreasing inside (0, 1)")
        else:
            if self.shell_moduli is None:
                raise ValueError("need shell_moduli or b")
            b = select_b(self._omegas())
        if len(b) < 2:
            raise ValueError("need at least b_0 and b_1")
        j = np.arange(1, len(b))
        a = b[1:] / (j + 2)  # a_1, a_2, ...
        r = np.concatenate([[0.0], np.cumsum(1.0 / a)])  # r_0 .. r_J
        self.b_ = b
        self.a_ = np.concatenate([[np.nan], a])  # index j holds a_j
        self.r_ = r
        return self

    def profile(self, rho):
        """The radial profile g: piecewise linear, g(r_j) = j, slope a_{j+1} on [r_j, r_{j+1}]."""
        check_is_fitted(self)
        rho = np.asarray(rho, dtype=float)
        r, a = self.r_, self.a_
        last = len(r) - 1
        j = np.clip(np.searchsorted(r, rho, side="right") - 1, 0, last)
        slope = np.where(j < last, a[np.minimum(j + 1, last)], a[last])
        return j + slope * (rho - r[j])

    def inverse_profile(self, s):
        check_is_fitted(self)
        s = np.asarray(s, dtype=float)
        r, a = self.r_, self.a_
        last = len(r) - 1
        j = np.clip(np.floor(s).astype(int), 0, last)
        slope = np.where(j < last, a[np.minimum(j + 1, last)], a[last])
        return r[j] + (s - j) / slope

    def _radial(self, X, g):
        X = check_array(X, ensure_min_samples=0)
        norm = np.linalg.norm(X, axis=1)
        out = np.zeros_like(X)
        nz = norm > 0
        out[nz] = X[nz] * (g(norm[nz]) / norm[nz])[:, None]
        return out

    def transform(self, X):
        return self._radial(X, self.profile)

    def inverse_transform(self, X):
        return self._radial(X, self.inverse_profile)

    def shell_of(self, X):
        """Index j of the shell r_j <= |x| <= r_{j+1} containing each point."""
        X = check_array(X, ensure_min_samples=0)
        return np.searchsorted(self.r_, np.linalg.norm(X, axis=1), side="right") - 1


def radial_build(omegas, n_shells: int = 12) -> RadialHomeomorphism:
    return RadialHomeomorphism(omegas, n_shells=n_shells).fit()


def radial_eval(psi: RadialHomeomorphism, x):
    x = np.asarray(x, dtype=float)
    return psi.transform(x.reshape(1, -1))[0] if x.ndim == 1 else psi.transform(x)


def radial_lipschitz_check(psi: RadialHomeomorphism, j: int, samples: int = 10_000,
                           d: int = 1, seed: int = 0) -> float:
    """Max of ``|psi(x) - psi(y)| / |x - y|`` over seeded pairs in the shell ``r_j <= |x| <= r_{j+1}``."""
    check_is_fitted(psi)
    if j + 1 >= len(psi.r_):
        raise ValueError(f"shell {j} is beyond the fitted range")
    rng = np.random.default_rng([seed, j])
    lo, hi = psi.r_[j], psi.r_[j + 1]

    def draw(n):
        rho = rng.uniform(lo, hi, n)
        u = rng.standard_normal((n, d))
        u /= np.linalg.norm(u, axis=1, keepdims=True)
        return u * rho[:, None]

    x, y = draw(samples), draw(samples)
    gap = np.linalg.norm(x - y, axis=1)
    keep = gap > 0
    ratio = np.linalg.norm(psi.transform(x) - psi.transform(y), axis=1)[keep] / gap[keep]
    return float(ratio.max()) if ratio.size else 0.0


# ---------------------------------------------------------------------------
# net homeomorphism
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class LocalPoint:
    """A point of the source line given as (rank-1 index, unit coordinate).

    Used when the rank-1 source interval is too large to hold its endpoints
    as fractions (alpha intervals ``(2**(k-1), 2**k)`` with huge k).
    """

    index: int
    tau: Fraction

    def value(self, net: Net) -> Fraction:
        if abs(self.index) > MATERIALISE_LIMIT:
            raise OverflowError(f"rank-1 index {self.index} is too large to materialise")
        return net.root_interval(self.index).at(self.tau)

    def to_float(self, net: Net) -> float:
        if abs(self.index) <= MATERIALISE_LIMIT:
            return float(self.value(net))
        return math.copysign(math.inf, self.index)


@dataclass(frozen=True)
class PhiValue:
    value: Fraction
    rank: int
    target_length: Fraction
    converged: bool
    endpoint: bool = False

    def __float__(self):
        return float(self.value)


class NetHomeomorphism(TransformerMixin, BaseEstimator):
    """The increasing map of the line sending each source-net interval onto
    the target-net interval with the same address.

    ``fit`` selects the length sequence ``delta`` from ``modulus`` and
    ``c_model`` (unless ``delta`` is given) and builds the alpha and beta
    nets.  Evaluation descends both nets until the target interval is no
    longer than ``tolerance`` (and at least ``min_rank`` deep, at most
    ``max_rank`` deep), then interpolates affinely.  Net endpoints are
    mapped exactly.
    """

    def __init__(self, modulus=None, c_model=None, d: int = 1, delta=None,
                 max_rank: int = 12, min_rank: int = 1, tolerance: float = 2.0 ** -16,
                 jitter: bool = False, seed: int = 0, source=None, target=None):
        self.modulus = modulus
        self.c_model = c_model
        self.d = d
        self.delta = delta
        self.max_rank = max_rank
        self.min_rank = min_rank
        self.tolerance = tolerance
        self.jitter = jitter
        self.seed = seed
        self.source = source
        self.target = target

    def fit(self, X=None, y=None):
        if not 1 <= self.min_rank <= self.max_rank:
            raise ValueError("need 1 <= min_rank <= max_rank")
        self.source_ = self.source if self.source is not None else AlphaNet()
        if self.target is not None:
            self.target_ = self.target
            self.deltas_ = np.asarray(getattr(self.target, "delta", ()), dtype=float)
        else:
            if self.delta is not None:
                deltas = np.asarray(self.delta, dtype=float)
            else:
                if self.modulus is None:
                    raise ValueError("need a modulus, an explicit delta, or a target net")
                c_model = self.c_model if self.c_model is not None else CModel(d=self.d)
                deltas = select_delta(self.modulus, c_model, d=self.d, n_ranks=self.max_rank)
            if len(deltas) < self.max_rank:
                raise ValueError(f"need delta values for ranks 1..{self.max_rank}")
            self.deltas_ = deltas
            self.target_ = BetaNet(deltas, jitter=self.jitter, seed=self.seed)
        self._tol = to_fraction(float(self.tolerance))
        self._scale_free = isinstance(self.source_, AlphaNet)
        self._cache = {}
        return self

    # -- helpers ------------------------------------------------------------
    def _stop(self, rank: int, J: Interval) -> bool:
        if rank >= self.max_rank:
            return True
        return rank >= self.min_rank and J.length <= self._tol

    def _src_len(self, root_len, W):
        return None if self._scale_free else root_len * W

    # -- exact evaluation ---------------------------------------------------
    def phi_exact(self, x) -> PhiValue:
        """phi(x) as an exact fraction, with the rank reached."""
        check_is_fitted(self)
        src, tgt = self.source_, self.target_
        if isinstance(x, LocalPoint):
            s1, tau = x.index, to_fraction(x.tau)
            J = tgt.root_interval(s1)
            if tau == 0 or tau == 1:
                return PhiValue(J.lo if tau == 0 else J.hi, 1, J.length, J.length <= self._tol, True)
            root_len = None if self._scale_free else src.root_interval(s1).length
        else:
            x = to_fraction(x)
            idx = src.root_index(x)
            if isinstance(idx, tuple):
                J = tgt.root_interval(idx[0])
                return PhiValue(J.hi, 1, J.length, J.length <= self._tol, True)
            s1 = idx
            I = src.root_interval(s1)
            tau = I.unit(x)
            root_len = I.length
            J = tgt.root_interval(s1)
        path = (s1,)
        rank, W = 1, Fraction(1)
        address = NetAddress(path)
        while not self._stop(rank, J):
            k = src.unit_child_index(address, tau, self._src_len(root_len, W))
            if isinstance(k, tuple):
                lo, hi = tgt.unit_child(address, k[0], J.length)
                child = Interval(J.at(lo), J.at(hi))
                return PhiValue(child.hi, rank + 1, child.length, child.length <= self._tol, True)
            lo, hi = src.unit_child(address, k, self._src_len(root_len, W))
            tau = (tau - lo) / (hi - lo)
            W = W * (hi - lo)
            J = tgt.child_interval(J, address, k)
            address = address.child(k)
            rank += 1
        return PhiValue(J.at(tau), rank, J.length, J.length <= self._tol)

    def phi_inverse_exact(self, y):
        """Exact inverse; returns a Fraction when representable, else a LocalPoint."""
        check_is_fitted(self)
        src, tgt = self.source_, self.target_
        y = to_fraction(y)
        idx = tgt.root_index(y)
        if isinstance(idx, tuple):
            return self._materialise(LocalPoint(idx[0], Fraction(1)))
        s1 = idx
        J = tgt.root_interval(s1)
        root_len = None if self._scale_free else src.root_interval(s1).length
        A, W = Fraction(0), Fraction(1)
        address = NetAddress((s1,))
        rank = 1
        while not self._stop(rank, J):
            k = tgt.unit_child_index(address, J.unit(y), J.length)
            if isinstance(k, tuple):
                lo, hi = src.unit_child(address, k[0], self._src_len(root_len, W))
                return self._materialise(LocalPoint(s1, A + W * hi))
            lo, hi = src.unit_child(address, k, self._src_len(root_len, W))
            A, W = A + W * lo, W * (hi - lo)
            J = tgt.child_interval(J, address, k)
            address = address.child(k)
            rank += 1
        return self._materialise(LocalPoint(s1, A + W * J.unit(y)))

    def _materialise(self, p: LocalPoint):
        if abs(p.index) <= MATERIALISE_LIMIT:
            return p.value(self.source_)
        return p

    def source_interval_length(self, x, rank: int):
        """Length of the source interval of the given rank containing ``x``."""
        addr = self.source_.locate(x, rank)
        if not hasattr(addr, "path"):
            return Fraction(0)
        return self.source_.interval(addr).length

    # -- array evaluation ---------------------------------------------------
    def phi(self, x) -> float:
        return float(self.phi_exact(x).value)

    def _map_values(self, values, fn):
        out = np.empty(values.shape, dtype=float)
        flat = values.ravel()
        res = out.ravel()
        for i, v in enumerate(flat):
            key = (fn.__name__, float(v))
            hit = self._cache.get(key)
            if hit is None:
                hit = fn(float(v))
                if len(self._cache) < 1_000_000:
                    self._cache[key] = hit
            res[i] = hit
        return out

    def _fwd(self, v):
        return float(self.phi_exact(v).value)

    def _inv(self, v):
        r = self.phi_inverse_exact(v)
        return r.to_float(self.source_) if isinstance(r, LocalPoint) else float(r)

    def transform(self, X):
        """Apply phi to every coordinate (the coordinate map h)."""
        check_is_fitted(self)
        X = check_array(X, ensure_min_samples=0)
        return self._map_values(X, self._fwd)

    def inverse_transform(self, X):
        check_is_fitted(self)
        X = check_array(X, ensure_min_samples=0)
        return self._map_values(X, self._inv)


class AffineLineMap:
    """``x -> slope * x + offset`` with exact forward and inverse evaluation."""

    def __init__(self, slope, offset=0):
        self.slope = to_fraction(slope)
        self.offset = to_fraction(offset)
        if self.slope <= 0:
            raise ValueError("slope must be positive (increasing map)")

    def phi_exact(self, x):
        return self.slope * to_fraction(x) + self.offset

    def phi_inverse_exact(self, y):
        return (to_fraction(y) - self.offset) / self.slope

    def __call__(self, x):
        return float(self.phi_exact(x))


def _exact_value(v):
    return v.value if isinstance(v, PhiValue) else v


class CoordinateHomeomorphism(TransformerMixin, BaseEstimator):
    """``h(t) = (phi(t_1), ..., phi(t_d))`` for any increasing line map ``phi``."""

    def __init__(self, phi=None, d: int = 1):
        self.phi = phi
        self.d = d

    def fit(self, X=None, y=None):
        if self.phi is None:
            raise ValueError("phi is required")
        if isinstance(self.phi, BaseEstimator):
            check_is_fitted(self.phi)
        self.phi_ = self.phi
        self._cache = {}
        return self

    def _apply(self, X, fn):
        check_is_fitted(self)
        X = check_array(X, ensure_min_samples=0)
        if X.shape[1] != self.d:
            raise ValueError(f"expected {self.d} coordinates, got {X.shape[1]}")
        uniq, inv = np.unique(X, return_inverse=True)
        vals = np.array([fn(v) for v in uniq], dtype=float)
        return vals[inv].reshape(X.shape)

    def transform(self, X):
        return self._apply(X, lambda v: float(_exact_value(self.phi_.phi_exact(float(v)))))

    def inverse_transform(self, X):
        def inv(v):
            r = self.phi_.phi_inverse_exact(float(v))
            return r.to_float(self.phi_.source_) if isinstance(r, LocalPoint) else float(r)
        return self._apply(X, inv)


# ---------------------------------------------------------------------------
# torus adaptation
# ---------------------------------------------------------------------------

class TorusHomeomorphism(TransformerMixin, BaseEstimator):
    """``phi1 = phi o l`` with ``l`` affine and ``l([0, 2pi]) = phi^{-1}([0, 2pi])``.

    ``phi1`` fixes 0 and 2pi, so it descends to a self-homeomorphism of the
    circle; ``transform`` applies it coordinatewise to angles (the torus map).
    When ``phi^{-1}(2pi)`` is too large to hold exactly, ``l`` is evaluated
    in (rank-1 index, unit coordinate) form and the additive ``l(0)`` term is
    dropped; its relative size is below 2**-17000.
    """

    def __init__(self, phi=None, d: int = 1):
        self.phi = phi
        self.d = d

    def fit(self, X=None, y=None):
        phi = self.phi
        if phi is None:
            raise ValueError("phi is required")
        self.phi_ = phi
        lo = phi.phi_inverse_exact(Fraction(0))
        hi = phi.phi_inverse_exact(TWO_PI)
        self.preimage_ = (lo, hi)
        if isinstance(lo, LocalPoint):
            raise OverflowError("phi^{-1}(0) is not representable")
        self.exact_affine_ = not isinstance(hi, LocalPoint)
        if self.exact_affine_:
            if not hi > lo:
                raise ValueError("phi must be increasing")
            self.slope_ = (hi - lo) / TWO_PI
        else:
            if hi.index < 1:
                raise OverflowError("only large positive preimages are supported in local form")
            self.slope_ = None
        self.offset_ = lo
        return self

    def l_exact(self, x):
        """The affine map l, exactly (a Fraction or a LocalPoint)."""
        x = to_fraction(x)
        if self.exact_affine_:
            return self.offset_ + self.slope_ * x
        lo, hi = self.preimage_
        rho = x / TWO_PI
        if rho == 1:
            return hi
        v = rho * (1 + hi.tau)
        if v == 0:
            return lo
        e = _floor_log2(v)
        return LocalPoint(hi.index + e, v / _pow2(e) - 1)

    def phi1_exact(self, x) -> Fraction:
        return _exact_value(self.phi_.phi_exact(self.l_exact(x)))

    def phi1(self, x) -> float:
        return float(self.phi1_exact(x))

    def transform(self, X):
        check_is_fitted(self)
        X = check_array(X, ensure_min_samples=0)
        Xm = np.mod(X, 2 * math.pi)
        uniq, inv = np.unique(Xm, return_inverse=True)
        vals = np.array([self.phi1(v) for v in uniq], dtype=float)
        return vals[inv].reshape(X.shape)


def torus_adapt(phi, d: int = 1) -> TorusHomeomorphism:
    return TorusHomeomorphism(phi, d=d).fit()
