"""Radial eigenstates of a unit sphere with an impenetrable wall.

A particle of scaled mass m' confined to r < 1 with a Dirichlet wall has
eigenfunctions (spherical harmonic) x j_l(x_{l,n} r)/r and energies
x_{l,n}^2 / (2 m'), where x_{l,n} is the nth positive zero of the spherical
Bessel function j_l. Everything here works with the radial factor

    u_{l,n}(r) = norm * r * j_l(x_{l,n} r),  int_0^1 u^2 dr = 1,

so downstream Coulomb integrals are one-dimensional in each radial variable.
The normalization follows from int_0^1 j_l(x r)^2 r^2 dr = j_{l+1}(x)^2 / 2
at a zero x, giving norm = sqrt(2) / |j_{l+1}(x_{l,n})|. For l = 0 this
reduces to u(r) = sqrt(2) sin(n pi r).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ValidationError

_SERIES_TERM_LIMIT = 200


@dataclass(frozen=True, order=True)
class ModeIndex:
    """Angular momentum l >= 0 and radial quantum number n >= 1."""

    l: int
    n: int

    def __post_init__(self):
        for name, value, low in (("l", self.l, 0), ("n", self.n, 1)):
            if isinstance(value, bool) or not isinstance(value, (int, np.integer)):
                raise ValidationError(f"mode {name} must be an integer, got {value!r}")
            if value < low:
                raise ValidationError(f"mode {name} must be >= {low}, got {value}")


def _double_factorial_odd(k: int) -> float:
    # (2k+1)!! as a float; k stays small (k = l or l+1)
    out = 1.0
    for j in range(3, 2 * k + 2, 2):
        out *= j
    return out


def _jl_series(l: int, x: np.ndarray) -> np.ndarray:
    # ascending series around 0; u ~ r^(l+1) smoothness comes from the x^l prefactor
    z = -0.5 * x * x
    term = np.ones_like(x)
    acc = np.ones_like(x)
    for k in range(1, _SERIES_TERM_LIMIT):
        term = term * z / (k * (2 * l + 2 * k + 1))
        acc = acc + term
        if np.all(np.abs(term) <= 1e-17 * np.abs(acc)):
            break
    return x**l / _double_factorial_odd(l) * acc


def _jl_recurrence(l: int, x: np.ndarray) -> np.ndarray:
    # upward recurrence j_{k+1} = (2k+1)/x j_k - j_{k-1}; stable for x >= l
    j0 = np.sin(x) / x
    if l == 0:
        return j0
    j1 = j0 / x - np.cos(x) / x
    jm, jc = j0, j1
    for k in range(2, l + 1):
        jm, jc = jc, (2 * k - 1) / x * jc - jm
    return jc


def spherical_jl(l: int, x) -> np.ndarray | float:
    """Spherical Bessel function j_l, series below x ~ max(1, l), recurrence above."""
    if isinstance(l, bool) or not isinstance(l, (int, np.integer)) or l < 0:
        raise ValidationError(f"order l must be a nonnegative integer, got {l!r}")
    arr = np.asarray(x, dtype=float)
    scalar = arr.ndim == 0
    arr = np.atleast_1d(arr)
    out = np.empty_like(arr)
    cut = max(1.0, float(l))
    small = np.abs(arr) < cut
    if np.any(small):
        out[small] = _jl_series(l, arr[small])
    if np.any(~small):
        out[~small] = _jl_recurrence(l, arr[~small])
    return float(out[0]) if scalar else out


def _jl_prime(l: int, x: float) -> float:
    if l == 0:
        return -spherical_jl(1, x)
    return spherical_jl(l - 1, x) - (l + 1) / x * spherical_jl(l, x)


def _refine_zero(l: int, lo: float, hi: float) -> float:
    # bisection to a narrow bracket, then Newton polish
    f = lambda t: spherical_jl(l, t)
    a, b = lo, hi
    fa = f(a)
    fb = f(b)
    if fa == 0.0:
        return a
    if fb == 0.0:
        return b
    if (fa > 0) == (fb > 0):
        raise ValidationError(f"zero bracket for j_{l} on ({lo}, {hi}) lost its sign change")
    while b - a > 1e-10:
        mid = 0.5 * (a + b)
        fm = f(mid)
        if fm == 0.0:
            return mid
        if (fm > 0) == (fa > 0):
            a, fa = mid, fm
        else:
            b = mid
    x = 0.5 * (a + b)
    for _ in range(8):
        step = f(x) / _jl_prime(l, x)
        x_new = min(max(x - step, a), b)
        if abs(x_new - x) <= 1e-15 * x:
            return x_new
        x = x_new
    return x


_zero_cache: dict[tuple[int, int], float] = {}


def bessel_zero(l: int, n: int) -> float:
    """nth positive zero of j_l, accurate to ~1 ulp.

    Brackets come from the interlacing x_{l-1,n} < x_{l,n} < x_{l-1,n+1};
    the l = 0 zeros seed the recursion from the brackets ((n-1/2)pi, (n+1/2)pi).
    """
    ModeIndex(l, n)  # validates both arguments
    key = (int(l), int(n))
    got = _zero_cache.get(key)
    if got is not None:
        return got
    if key[0] == 0:
        lo, hi = (key[1] - 0.5) * math.pi, (key[1] + 0.5) * math.pi
    else:
        lo, hi = bessel_zero(key[0] - 1, key[1]), bessel_zero(key[0] - 1, key[1] + 1)
    root = _refine_zero(key[0], lo, hi)
    # setdefault keeps the first inserted value if two threads race
    return _zero_cache.setdefault(key, root)


def mode_energy(index: ModeIndex, m_prime: float) -> float:
    """Single-particle sphere energy x_{l,n}^2 / (2 m')."""
    m_prime = float(m_prime)
    if not math.isfinite(m_prime) or m_prime <= 0:
        raise ValidationError(f"scaled mass must be positive, got {m_prime!r}")
    x = bessel_zero(index.l, index.n)
    return x * x / (2.0 * m_prime)


@dataclass(frozen=True)
class RadialMode:
    """Normalized radial factor u(r) = norm * r * j_l(zero * r) on [0, 1]."""

    index: ModeIndex
    zero: float
    norm: float

    def __call__(self, r) -> np.ndarray | float:
        arr = np.asarray(r, dtype=float)
        if self.index.l == 0:
            # closed form sqrt(2) sin(n pi r); exact and cheap
            return math.sqrt(2.0) * np.sin(self.index.n * math.pi * arr)
        return self.norm * arr * spherical_jl(self.index.l, self.zero * arr)


def build_radial_mode(index: ModeIndex) -> RadialMode:
    """Construct the normalized mode for the given index."""
    zero = bessel_zero(index.l, index.n)
    norm = math.sqrt(2.0) / abs(spherical_jl(index.l + 1, zero))
    return RadialMode(index=index, zero=zero, norm=norm)
