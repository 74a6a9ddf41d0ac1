"""Ordered interval partitions and the nested nets built from them.

Two nets are provided.  The *alpha* net starts from the dyadic partition of
the real line and repeatedly applies the dyadic partition of an interval to
every piece.  The *beta* net starts from a uniform partition of step
``delta[0]`` and splits every piece into children of length at most the next
``delta`` value.  Both are indexed by integer addresses ``(s_1, ..., s_nu)``
and every bounded endpoint is held as an exact :class:`fractions.Fraction`.

Child rules are expressed in *unit coordinates*: the parent is rescaled to
``(0, 1)`` and the rule returns the child as a pair of fractions in ``[0, 1]``.
The homeomorphism code relies on this to descend the alpha net without ever
materialising astronomically large endpoints.
"""

from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import product
from typing import Iterable, Sequence, Union

Real = Union[Fraction, float]

__all__ = [
    "Interval",
    "NetAddress",
    "EndpointHit",
    "RankedRectangle",
    "Net",
    "AlphaNet",
    "BetaNet",
    "dyadic_line",
    "dyadic_interval",
    "unit_dyadic",
    "net_alpha",
    "net_beta",
    "locate",
    "product_rectangles",
    "to_fraction",
]


def to_fraction(x) -> Fraction:
    """Exact conversion of ints, floats and fractions (no rounding)."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, float):
        if not math.isfinite(x):
            raise ValueError(f"cannot convert {x!r} to an exact fraction")
        return Fraction(x)
    return Fraction(x)


def _floor_log2(q: Fraction) -> int:
    """Largest integer e with 2**e <= q, for q > 0."""
    a, b = q.numerator, q.denominator
    e = a.bit_length() - b.bit_length()
    # now 2**(e-1) < a/b < 2**(e+1)
    if e >= 0:
        if a < (b << e):
            e -= 1
    elif (a << -e) < b:
        e -= 1
    return e


def _is_pow2(q: Fraction) -> bool:
    a, b = q.numerator, q.denominator
    return a > 0 and (a & (a - 1)) == 0 and (b & (b - 1)) == 0


def _pow2(e: int) -> Fraction:
    return Fraction(1 << e) if e >= 0 else Fraction(1, 1 << -e)


@dataclass(frozen=True)
class Interval:
    """Open interval ``(lo, hi)`` with exact finite endpoints.

    Endpoints may be ``-inf``/``+inf`` (floats); finite endpoints are always
    stored as fractions.
    """

    lo: Real
    hi: Real

    def __post_init__(self):
        lo, hi = self.lo, self.hi
        if type(lo) is Fraction and type(hi) is Fraction:
            if not lo < hi:
                raise ValueError(f"empty interval ({lo}, {hi})")
            return
        if not (isinstance(lo, float) and math.isinf(lo)):
            object.__setattr__(self, "lo", to_fraction(lo))
        if not (isinstance(hi, float) and math.isinf(hi)):
            object.__setattr__(self, "hi", to_fraction(hi))
        if not self.lo < self.hi:
            raise ValueError(f"empty interval ({self.lo}, {self.hi})")

    @property
    def bounded(self) -> bool:
        return isinstance(self.lo, Fraction) and isinstance(self.hi, Fraction)

    @property
    def length(self):
        return self.hi - self.lo

    @property
    def midpoint(self) -> Fraction:
        if not self.bounded:
            raise ValueError("unbounded interval has no midpoint")
        return (self.lo + self.hi) / 2

    def __contains__(self, x) -> bool:
        return self.lo < x < self.hi

    def at(self, t: Fraction) -> Fraction:
        """Point at unit coordinate ``t`` (0 -> lo, 1 -> hi)."""
        return self.lo + t * (self.hi - self.lo)

    def unit(self, x) -> Fraction:
        """Inverse of :meth:`at`."""
        return (to_fraction(x) - self.lo) / (self.hi - self.lo)

    def __iter__(self):
        yield self.lo
        yield self.hi

    def __repr__(self):
        return f"Interval({self.lo}, {self.hi})"


@dataclass(frozen=True)
class NetAddress:
    path: tuple

    def __post_init__(self):
        object.__setattr__(self, "path", tuple(int(s) for s in self.path))
        if not self.path:
            raise ValueError("an address has rank >= 1")

    @property
    def rank(self) -> int:
        return len(self.path)

    @property
    def parent(self) -> "NetAddress | None":
        return NetAddress(self.path[:-1]) if len(self.path) > 1 else None

    def child(self, k: int) -> "NetAddress":
        return NetAddress(self.path + (int(k),))

    def __iter__(self):
        return iter(self.path)


@dataclass(frozen=True)
class EndpointHit:
    """A point that coincides with the shared endpoint of two neighbours.

    ``left`` and ``right`` are the addresses (same rank) of the intervals
    whose ``hi`` and ``lo`` equal ``value``.
    """

    value: Fraction
    left: NetAddress
    right: NetAddress

    @property
    def rank(self) -> int:
        return self.left.rank


@dataclass(frozen=True)
class RankedRectangle:
    factors: tuple
    addresses: tuple = field(default=())

    @property
    def rank(self) -> int:
        return self.addresses[0].rank if self.addresses else 0

    @property
    def center(self) -> tuple:
        return tuple(f.midpoint for f in self.factors)

    @property
    def d(self) -> int:
        return len(self.factors)


# ---------------------------------------------------------------------------
# dyadic rules
# ---------------------------------------------------------------------------

def dyadic_line(k: int) -> Interval:
    """k-th interval of the dyadic partition of the real line."""
    k = int(k)
    if k == 0:
        return Interval(-1, 1)
    if k > 0:
        return Interval(_pow2(k - 1), _pow2(k))
    return Interval(-_pow2(-k), -_pow2(-k - 1))


@lru_cache(maxsize=4096)
def unit_dyadic(k: int) -> tuple:
    """k-th interval of the dyadic partition of (0, 1), as a fraction pair."""
    k = int(k)
    if k == 0:
        return Fraction(1, 4), Fraction(3, 4)
    if k > 0:
        return 1 - _pow2(-k - 1), 1 - _pow2(-k - 2)
    return _pow2(k - 2), _pow2(k - 1)


def dyadic_interval(parent: Interval, k: int) -> Interval:
    """k-th interval of the dyadic partition of a bounded ``parent``."""
    if not parent.bounded:
        raise ValueError("dyadic_interval needs a bounded parent; use dyadic_line for R")
    lo, hi = unit_dyadic(k)
    a, b = parent.lo, parent.hi
    da, db = a.denominator, b.denominator
    if da & (da - 1) or db & (db - 1):
        base, length = a, b - a
        return Interval(base + lo * length, base + hi * length)
    # dyadic endpoints: exact integer arithmetic over a common power-of-two denominator
    D = max(da, db)
    pa = a.numerator * (D // da)
    L = b.numerator * (D // db) - pa
    u = lo.denominator if lo.denominator > hi.denominator else hi.denominator
    nl = lo.numerator * (u // lo.denominator)
    nh = hi.numerator * (u // hi.denominator)
    den = D * u
    return Interval(Fraction(pa * u + L * nl, den), Fraction(pa * u + L * nh, den))


def _dyadic_line_index(x: Fraction):
    """Index of the dyadic line interval containing x, or the endpoint pair."""
    if -1 < x < 1:
        return 0
    ax = abs(x)
    f = _floor_log2(ax)
    if x > 0:
        return (f, f + 1) if _is_pow2(ax) else f + 1
    return (-f - 1, -f) if _is_pow2(ax) else -f - 1


def _unit_dyadic_index(t: Fraction):
    """Index of the unit dyadic interval containing t in (0, 1), or endpoint pair."""
    if Fraction(1, 4) < t < Fraction(3, 4):
        return 0
    if t >= Fraction(3, 4):
        w = 1 - t
        f = _floor_log2(w)
        return (-f - 2, -f - 1) if _is_pow2(w) else -f - 2
    f = _floor_log2(t)
    return (f + 1, f + 2) if _is_pow2(t) else f + 2


# ---------------------------------------------------------------------------
# nets
# ---------------------------------------------------------------------------

class Net:
    """A net of nested ordered partitions of the real line.

    Subclasses implement the rank-1 rule and the unit-coordinate child rule.
    ``index`` methods return an ``int`` for interior points and a pair
    ``(left, right)`` of indices when the point is a shared endpoint.
    """

    kind = "net"

    # -- rules ------------------------------------------------------------
    def root_interval(self, k: int) -> Interval:
        raise NotImplementedError

    def root_index(self, x: Fraction):
        raise NotImplementedError

    def unit_child(self, address: NetAddress, k: int, parent_length) -> tuple:
        raise NotImplementedError

    def unit_child_index(self, address: NetAddress, t: Fraction, parent_length):
        raise NotImplementedError

    # -- derived ----------------------------------------------------------
    def child_interval(self, parent: Interval, address: NetAddress, k: int) -> Interval:
        lo, hi = self.unit_child(address, k, parent.length)
        return Interval(parent.at(lo), parent.at(hi))

    def interval(self, address) -> Interval:
        if not isinstance(address, NetAddress):
            address = NetAddress(address)
        return self._interval(address.path)

    @lru_cache(maxsize=65536)
    def _interval(self, path: tuple) -> Interval:
        if len(path) == 1:
            return self.root_interval(path[0])
        parent = self._interval(path[:-1])
        return self.child_interval(parent, NetAddress(path[:-1]), path[-1])

    def children(self, address, window: Iterable[int]) -> list:
        if not isinstance(address, NetAddress):
            address = NetAddress(address)
        parent = self.interval(address)
        return [self.child_interval(parent, address, k) for k in window]

    def locate(self, x, rank: int):
        """Address of the rank-``rank`` interval containing ``x``.

        Returns an :class:`EndpointHit` if ``x`` is an endpoint of some
        interval of rank at most ``rank``.
        """
        x = to_fraction(x)
        idx = self.root_index(x)
        if isinstance(idx, tuple):
            return EndpointHit(x, NetAddress(idx[:1]), NetAddress(idx[1:]))
        address = NetAddress((idx,))
        interval = self.root_interval(idx)
        for _ in range(rank - 1):
            t = interval.unit(x)
            k = self.unit_child_index(address, t, interval.length)
            if isinstance(k, tuple):
                return EndpointHit(x, address.child(k[0]), address.child(k[1]))
            interval = self.child_interval(interval, address, k)
            address = address.child(k)
        return address

    def __hash__(self):
        return id(self)

    def __eq__(self, other):
        return self is other


class AlphaNet(Net):
    """Dyadic partition of the line, refined by dyadic partitions of intervals."""

    kind = "alpha"

    def root_interval(self, k):
        return dyadic_line(k)

    def root_index(self, x):
        return _dyadic_line_index(x)

    def unit_child(self, address, k, parent_length=None):
        return unit_dyadic(k)

    def unit_child_index(self, address, t, parent_length=None):
        return _unit_dyadic_index(t)

    def __repr__(self):
        return "AlphaNet()"


class BetaNet(Net):
    """Net whose rank-nu intervals have length at most ``delta[nu - 1]``.

    Rank 1 is the uniform family ``((k-1) d1, k d1)``.  A bounded parent of
    length L is cut at ``theta_j = j u`` (``u = 2**-m``, the largest dyadic
    step with ``u <= delta_next / L``) for ``j = 1..n-1``; the two outer cells
    are themselves split geometrically towards the parent's ends so the
    children form a bi-infinite ordered partition.  Child ``s = 0`` is the
    cell just right of the parent's midpoint.

    With ``jitter=True`` each interior cut is moved by a seeded dyadic offset
    of at most ``u/4`` (and ``u`` is shrunk so lengths stay within bound).
    """

    kind = "beta"

    def __init__(self, delta: Sequence, jitter: bool = False, seed: int = 0):
        delta = [to_fraction(d) for d in delta]
        if not delta:
            raise ValueError("delta must be non-empty")
        if any(d <= 0 for d in delta):
            raise ValueError("delta must be strictly positive")
        if any(b > a for a, b in zip(delta, delta[1:])):
            raise ValueError("delta must be nonincreasing")
        self.delta = tuple(delta)
        self.jitter = bool(jitter)
        self.seed = int(seed)

    def __repr__(self):
        return f"BetaNet(ranks={len(self.delta)}, jitter={self.jitter}, seed={self.seed})"

    def delta_at(self, rank: int) -> Fraction:
        if rank < 1 or rank > len(self.delta):
            raise IndexError(f"beta net has delta values for ranks 1..{len(self.delta)}, not {rank}")
        return self.delta[rank - 1]

    # rank 1
    def root_interval(self, k):
        d = self.delta[0]
        return Interval((k - 1) * d, k * d)

    def root_index(self, x):
        q = x / self.delta[0]
        if q.denominator == 1:
            return (int(q), int(q) + 1)
        return math.ceil(q)

    # children
    @lru_cache(maxsize=65536)
    def _grid(self, rank: int, parent_length: Fraction) -> int:
        """Exponent m of the unit step u = 2**-m used for children of rank ``rank``."""
        eps = self.delta_at(rank) / parent_length
        if self.jitter:
            eps = eps * Fraction(2, 3)
        m = max(1, -_floor_log2(eps))
        if _pow2(-m) > eps:
            m += 1
        return m

    def _cut(self, address: NetAddress, m: int, j: int) -> Fraction:
        n = 1 << m
        if j <= 0:
            return Fraction(0)
        if j >= n:
            return Fraction(1)
        base = Fraction(j, n)
        if not self.jitter:
            return base
        h = hashlib.blake2b(digest_size=8)
        h.update(repr((self.seed, address.path, m, j)).encode())
        r = int.from_bytes(h.digest(), "little") % 4097  # 0..4096
        return base + Fraction(r - 2048, n << 13)

    def unit_child(self, address, k, parent_length):
        m = self._grid(address.rank + 1, to_fraction(parent_length))
        n = 1 << m
        half = n >> 1
        if k <= -half:
            j = -half - k
            c1 = self._cut(address, m, 1)
            return c1 * _pow2(-j - 1), c1 * _pow2(-j)
        if k >= half - 1:
            j = k - (half - 1)
            r = 1 - self._cut(address, m, n - 1)
            return 1 - r * _pow2(-j), 1 - r * _pow2(-j - 1)
        i = k + half
        return self._cut(address, m, i), self._cut(address, m, i + 1)

    def unit_child_index(self, address, t, parent_length):
        m = self._grid(address.rank + 1, to_fraction(parent_length))
        n = 1 << m
        half = n >> 1
        c1 = self._cut(address, m, 1)
        cn = self._cut(address, m, n - 1)
        if t < c1:
            w = t / c1
            f = _floor_log2(w)
            if _is_pow2(w):
                return (-half + f, -half + f + 1)
            return -half + f + 1
        if t > cn:
            w = (1 - t) / (1 - cn)
            f = _floor_log2(w)
            if _is_pow2(w):
                return (half - 2 - f, half - 1 - f)
            return half - 2 - f
        i = int(t * n)
        i = min(max(i, 1), n - 1)
        while i > 1 and self._cut(address, m, i) > t:
            i -= 1
        while i < n - 1 and self._cut(address, m, i + 1) <= t:
            i += 1
        ci = self._cut(address, m, i)
        if ci == t:
            return (i - 1 - half, i - half)
        return i - half


def net_alpha() -> AlphaNet:
    return AlphaNet()


def net_beta(delta: Sequence, jitter: bool = False, seed: int = 0) -> BetaNet:
    return BetaNet(delta, jitter=jitter, seed=seed)


def locate(net: Net, x, rank: int):
    return net.locate(x, rank)


def _addresses(rank: int, window: Sequence[int]):
    for path in product(window, repeat=rank):
        yield NetAddress(path)


def product_rectangles(net: Net, rank: int, window, d: int = 1) -> list:
    """All rank-``rank`` rectangles of ``net`` whose indices lie in ``window``.

    ``window`` is either one index collection used for every axis and every
    rank component, or a sequence of ``d`` such collections (one per axis).
    """
    window = list(window)
    if window and not isinstance(window[0], int) and hasattr(window[0], "__iter__"):
        axes = [list(w) for w in window]
        if len(axes) != d:
            raise ValueError(f"got {len(axes)} axis windows for d={d}")
    else:
        axes = [window] * d
    if any(not w for w in axes):
        return []
    per_axis = [[(a, net.interval(a)) for a in _addresses(rank, w)] for w in axes]
    rects = []
    for combo in product(*per_axis):
        rects.append(
            RankedRectangle(
                factors=tuple(iv for _, iv in combo),
                addresses=tuple(a for a, _ in combo),
            )
        )
    return rects
