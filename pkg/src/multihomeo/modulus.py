"""Moduli of continuity and the sequence selections driven by them."""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

__all__ = [
    "Modulus",
    "CModel",
    "FunctionFamily",
    "UnderestimateWarning",
    "estimate_modulus",
    "family_modulus",
    "select_b",
    "select_delta",
    "largest_feasible",
]

# relative bisection tolerance on delta
BISECT_RTOL = 2.0 ** -20


class UnderestimateWarning(UserWarning):
    """Grid spacing exceeds the requested delta; the estimate is a lower bound only."""


@dataclass(frozen=True)
class Modulus:
    """A nondecreasing function on [0, inf) vanishing at 0.

    ``fn`` must accept numpy arrays.  ``source`` is ``"analytic"`` for
    certified upper moduli and ``"grid-estimated"`` for sampled ones.
    """

    fn: Callable
    source: str = "analytic"
    label: str = ""

    def __call__(self, delta):
        delta = np.asarray(delta, dtype=float)
        out = np.where(delta <= 0, 0.0, self.fn(np.maximum(delta, 0.0)))
        return float(out) if out.ndim == 0 else out

    def __repr__(self):
        return f"Modulus({self.label or self.fn!r}, source={self.source!r})"

    @classmethod
    def lipschitz(cls, L: float, cap: float = math.inf) -> "Modulus":
        return cls(lambda d: np.minimum(L * d, cap), label=f"lipschitz(L={L:g}, cap={cap:g})")

    @classmethod
    def holder(cls, C: float, alpha: float, cap: float = math.inf) -> "Modulus":
        if not 0 < alpha <= 1:
            raise ValueError("Holder exponent must lie in (0, 1]")
        return cls(
            lambda d: np.minimum(C * d ** alpha, cap),
            label=f"holder(C={C:g}, alpha={alpha:g}, cap={cap:g})",
        )

    @classmethod
    def zero(cls) -> "Modulus":
        return cls(lambda d: np.zeros_like(d), label="zero")

    @classmethod
    def maximum(cls, moduli: Sequence["Modulus"]) -> "Modulus":
        moduli = list(moduli)
        if not moduli:
            raise ValueError("empty family")
        source = "analytic" if all(m.source == "analytic" for m in moduli) else "grid-estimated"
        return cls(
            lambda d: np.max([np.asarray(m(d), dtype=float) for m in moduli], axis=0),
            source=source,
            label="max(" + ", ".join(m.label for m in moduli) + ")",
        )

    def scaled(self, factor: float) -> "Modulus":
        """delta -> self(factor * delta)."""
        return Modulus(lambda d: self(factor * d), self.source, f"{self.label}(x{factor:g})")


@dataclass(frozen=True)
class CModel:
    """Growth model for the multiplier constants of rank-nu piecewise-constant symbols.

    ``c(p, nu) = (C * max(p, p / (p - 1))) ** (d * nu)``.  The true constants
    are suprema nobody knows in closed form; this is a declared assumption.
    """

    C: float = 8.0
    d: int = 1

    def __call__(self, p: float, nu: int) -> float:
        return (self.C * max(p, p / (p - 1.0))) ** (self.d * nu)


@dataclass
class FunctionFamily:
    """A finite family of evaluable functions on a common domain."""

    members: list
    bound: float
    moduli: list = field(default_factory=list)

    def __post_init__(self):
        if not self.members:
            raise ValueError("empty family")

    def modulus(self) -> Modulus:
        if not self.moduli:
            raise ValueError("family carries no analytic moduli")
        return Modulus.maximum(self.moduli)


def _lags(spacing: Sequence[float], delta: float):
    """Integer offset vectors whose physical length is at most delta."""
    spacing = np.asarray(spacing, dtype=float)
    reach = np.floor(delta / spacing + 1e-12).astype(int)
    axes = [np.arange(-r, r + 1) for r in reach]
    grid = np.stack(np.meshgrid(*axes, indexing="ij"), -1).reshape(-1, len(spacing))
    length = np.sqrt(((grid * spacing) ** 2).sum(1))
    keep = (length <= delta * (1 + 1e-12)) & (length > 0)
    # one of each +/- pair is enough
    grid = grid[keep]
    first = np.array([next((c for c in row if c != 0), 0) for row in grid]) if len(grid) else np.zeros(0)
    return grid[first > 0]


def estimate_modulus(values, delta: float, spacing=1.0) -> float:
    """Sup of ``|f(t1) - f(t2)|`` over grid pairs at distance at most ``delta``.

    ``values`` is an array sampled on a uniform grid (any dimension);
    ``spacing`` is the grid step, scalar or per axis.
    """
    values = np.asarray(values)
    if values.size == 0:
        raise ValueError("empty grid")
    if delta < 0:
        raise ValueError("delta must be >= 0")
    spacing = np.broadcast_to(np.asarray(spacing, dtype=float), (values.ndim,))
    if delta == 0:
        return 0.0
    if delta < spacing.min():
        warnings.warn(
            f"grid spacing {spacing.min():g} exceeds delta={delta:g}; modulus underestimated",
            UnderestimateWarning,
            stacklevel=2,
        )
    best = 0.0
    for lag in _lags(spacing, delta):
        a = [slice(None)] * values.ndim
        b = [slice(None)] * values.ndim
        ok = True
        for ax, s in enumerate(lag):
            n = values.shape[ax]
            if abs(s) >= n:
                ok = False
                break
            if s >= 0:
                a[ax], b[ax] = slice(s, None), slice(0, n - s)
            else:
                a[ax], b[ax] = slice(0, n + s), slice(-s, None)
        if not ok:
            continue
        diff = np.abs(values[tuple(a)] - values[tuple(b)])
        if diff.size:
            best = max(best, float(diff.max()))
    return best


def family_modulus(members, delta: float, spacing=1.0) -> float:
    """Pointwise sup of the member moduli (members sampled on a common grid)."""
    if isinstance(members, FunctionFamily):
        members = members.members
    members = list(members)
    if not members:
        raise ValueError("empty family")
    return max(estimate_modulus(v, delta, spacing) for v in members)


def largest_feasible(pred: Callable[[float], bool], cap: float, rtol: float = BISECT_RTOL,
                     max_halvings: int = 1100) -> float:
    """Approximately the largest ``x <= cap`` with ``pred(x)``, approached from the feasible side.

    Assumes ``pred`` is monotone (true below some threshold).  Raises
    ``ValueError`` if nothing feasible is found above float underflow.
    """
    if pred(cap):
        return cap
    hi, lo = cap, cap / 2
    for _ in range(max_halvings):
        if lo == 0.0:
            break
        if pred(lo):
            break
        hi, lo = lo, lo / 2
    else:
        lo = 0.0
    if lo == 0.0:
        raise ValueError("no feasible value above underflow: the modulus does not vanish at 0")
    while hi - lo > rtol * lo:
        mid = 0.5 * (lo + hi)
        if pred(mid):
            lo = mid
        else:
            hi = mid
    return lo


def select_b(omegas: Sequence[Callable]) -> np.ndarray:
    """Decreasing ``b_j`` in (0, 1) with ``omegas[j](b_j) <= 1/(j+1)``.

    Each ``b_j`` is the bisection answer below the previous value; when the
    constraint does not bind, ``b_j`` falls back to half the previous value
    (so identically-zero moduli give ``b_j = 2**-(j+1)``).
    """
    out = []
    cap = 0.5
    for j, omega in enumerate(omegas):
        target = 1.0 / (j + 1)
        try:
            found = largest_feasible(lambda d: omega(d) <= target, cap)
        except ValueError as exc:
            raise ValueError(f"shell {j}: {exc}") from None
        if j > 0 and found >= cap:
            found = cap / 2
        out.append(found)
        cap = found
    return np.array(out)


def select_delta(omega: Callable, c_model: Callable | None = None, d: int = 1,
                 n_ranks: int = 12, cap: float = 1.0) -> np.ndarray:
    """Decreasing ``delta_1..delta_n`` making the rank-nu series terms at most ``2**-nu``.

    For every ``nu = 2..n+1`` the returned value ``delta_{nu-1}`` satisfies
    ``c_model(1 + 1/nu, nu) * omega(delta_{nu-1} * sqrt(d)) <= 2**-nu``.
    """
    if c_model is None:
        c_model = CModel(d=d)
    root_d = math.sqrt(d)
    out = []
    prev = cap
    for nu in range(2, n_ranks + 2):
        c = float(c_model(1.0 + 1.0 / nu, nu))
        if not c > 0:
            raise ValueError("c_model must be positive")
        target = 2.0 ** -nu
        try:
            found = largest_feasible(lambda x: c * omega(x * root_d) <= target, prev)
        except ValueError as exc:
            raise ValueError(f"rank {nu - 1}: {exc}") from None
        if out and found >= prev:
            found = prev / 2
        out.append(found)
        prev = found
    return np.array(out)
