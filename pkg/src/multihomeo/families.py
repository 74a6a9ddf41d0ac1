"""Built-in test functions, each carrying an analytic (certified) modulus."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .modulus import FunctionFamily, Modulus

__all__ = [
    "TestFunction",
    "constant",
    "lipschitz_sine",
    "holder_sine",
    "weierstrass",
    "weierstrass_constant",
    "random_trig",
    "chirp",
    "character",
    "make_family",
    "from_spec",
]


@dataclass
class TestFunction:
    """A bounded function on R^d (or T^d if ``periodic``) with a known modulus.

    ``modulus`` bounds the modulus of continuity on the whole space; functions
    that are only uniformly continuous on balls set it to ``None`` and provide
    ``shell_modulus(j)`` for the shell ``j <= |x| <= j + 1`` instead.
    """

    fn: Callable
    bound: float
    modulus: Optional[Modulus]
    name: str
    d: int = 1
    periodic: bool = False
    params: dict = field(default_factory=dict)
    shell_modulus: Optional[Callable[[int], Modulus]] = None

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        if self.d == 1:
            if t.ndim == 2 and t.shape[-1] == 1:
                t = t[..., 0]
            return self.fn(t)
        if t.shape[-1] != self.d:
            raise ValueError(f"expected points with last axis {self.d}, got {t.shape}")
        return np.mean([self.fn(t[..., i]) for i in range(self.d)], axis=0)

    def modulus_on_shell(self, j: int) -> Modulus:
        if self.shell_modulus is not None:
            return self.shell_modulus(j)
        return self.modulus

    @property
    def uniformly_continuous(self) -> bool:
        return self.modulus is not None


def constant(c: complex = 1.0, d: int = 1) -> TestFunction:
    return TestFunction(
        fn=lambda t: np.full(np.shape(t), c, dtype=complex if isinstance(c, complex) else float),
        bound=abs(c), modulus=Modulus.zero(), name="constant", d=d, periodic=True,
        params={"c": c},
    )


def lipschitz_sine(L: float = 1.0, d: int = 1) -> TestFunction:
    return TestFunction(
        fn=lambda t: np.sin(L * t), bound=1.0, modulus=Modulus.lipschitz(L, cap=2.0),
        name="lipschitz", d=d, periodic=float(L).is_integer(), params={"L": L},
    )


def holder_sine(alpha: float = 0.5, d: int = 1) -> TestFunction:
    """``|sin t| ** alpha``; |a^alpha - b^alpha| <= |a - b|^alpha gives the modulus."""
    if not 0 < alpha <= 1:
        raise ValueError("alpha must lie in (0, 1]")
    return TestFunction(
        fn=lambda t: np.abs(np.sin(t)) ** alpha, bound=1.0,
        modulus=Modulus.holder(1.0, alpha, cap=1.0), name="holder", d=d, periodic=True,
        params={"alpha": alpha},
    )


def weierstrass_constant(a: float, b: float) -> float:
    """C with ``omega(delta) <= C delta**alpha`` for the series ``sum a^k cos(b^k t)``.

    Split the series at ``b^-(K+1) < delta <= b^-K``: the head contributes at
    most ``delta * (ab)^(K+1) / (ab - 1) <= ab/(ab - 1) * delta**alpha`` and the
    tail at most ``2 a^(K+1) / (1 - a) < 2/(1 - a) * delta**alpha``.
    """
    if a * b <= 1:
        raise ValueError("the closed-form constant needs a*b > 1")
    return a * b / (a * b - 1) + 2 / (1 - a)


def weierstrass(a: float = 0.5, b: float = 4.0, terms: int = 12, d: int = 1) -> TestFunction:
    """Partial sum ``sum_{k < terms} a^k cos(b^k t)`` with Holder exponent log(1/a)/log(b)."""
    if not (0 < a < 1 and b > 1 and a * b >= 1):
        raise ValueError("need 0 < a < 1 < b and a*b >= 1")
    ks = np.arange(terms)
    amps = a ** ks
    freqs = b ** ks
    alpha = math.log(1 / a) / math.log(b)
    bound = float(amps.sum())

    def fn(t):
        t = np.asarray(t, dtype=float)
        return np.tensordot(np.cos(np.multiply.outer(t, freqs)), amps, axes=([-1], [0]))

    def termwise(dl):
        return (amps * np.minimum(2.0, np.multiply.outer(dl, freqs))).sum(-1)

    C = weierstrass_constant(a, b) if a * b > 1 else math.inf

    def omega(dl):
        dl = np.asarray(dl, dtype=float)
        return np.minimum(np.minimum(C * dl ** alpha, 2 * bound), termwise(dl))

    return TestFunction(
        fn=fn, bound=bound,
        modulus=Modulus(omega, label=f"weierstrass(C={C:g}, alpha={alpha:g})"),
        name="weierstrass", d=d, periodic=float(b).is_integer(),
        params={"a": a, "b": b, "terms": terms, "C": C, "alpha": alpha},
    )


def random_trig(seed: int = 0, degree: int = 8, d: int = 1) -> TestFunction:
    """Seeded real trigonometric polynomial with coefficients decaying like 1/k^2."""
    rng = np.random.default_rng(seed)
    ks = np.arange(1, degree + 1)
    ca = rng.standard_normal(degree) / ks ** 2
    cb = rng.standard_normal(degree) / ks ** 2
    scale = float(np.abs(ca).sum() + np.abs(cb).sum())
    ca, cb = ca / scale, cb / scale
    lip = float((ks * np.hypot(ca, cb)).sum())

    def fn(t):
        arg = np.multiply.outer(np.asarray(t, dtype=float), ks)
        return np.cos(arg) @ ca + np.sin(arg) @ cb

    return TestFunction(
        fn=fn, bound=1.0, modulus=Modulus.lipschitz(lip, cap=2.0), name="random_trig",
        d=d, periodic=True, params={"seed": seed, "degree": degree, "L": lip},
    )


def chirp(d: int = 1) -> TestFunction:
    """``sin(|t|^2)``: bounded, continuous, not uniformly continuous on R^d."""

    def fn(t):
        return np.sin(np.asarray(t, dtype=float) ** 2)

    return TestFunction(
        fn=fn, bound=1.0, modulus=None, name="chirp", d=d,
        shell_modulus=lambda j: Modulus.lipschitz(2.0 * (j + 1), cap=2.0),
    )


def character(n: int, gamma: Callable[[int], float] = lambda n: math.log(2 + n)) -> TestFunction:
    """``exp(i n t) / gamma(|n|)``."""
    g = float(gamma(abs(n)))
    return TestFunction(
        fn=lambda t: np.exp(1j * n * np.asarray(t, dtype=float)) / g,
        bound=1.0 / g, modulus=Modulus.lipschitz(abs(n) / g, cap=2.0 / g),
        name="character", periodic=True, params={"n": n, "gamma": g},
    )


def make_family(functions) -> FunctionFamily:
    functions = list(functions)
    if not functions:
        raise ValueError("empty family")
    moduli = [f.modulus for f in functions if f.modulus is not None]
    return FunctionFamily(
        members=functions,
        bound=max(f.bound for f in functions),
        moduli=moduli if len(moduli) == len(functions) else [],
    )


def from_spec(spec: dict, d: int = 1) -> TestFunction:
    """Build a test function from a config dict such as ``{"kind": "holder", "alpha": 0.5}``."""
    spec = dict(spec)
    kind = spec.pop("kind")
    makers = {
        "constant": constant,
        "lipschitz": lipschitz_sine,
        "holder": holder_sine,
        "weierstrass": weierstrass,
        "random_trig": random_trig,
        "chirp": chirp,
    }
    if kind not in makers:
        raise ValueError(f"unknown function kind {kind!r}; choose from {sorted(makers)}")
    return makers[kind](d=d, **spec)
