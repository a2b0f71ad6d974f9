"""Coulomb matrix elements between sphere modes, cached and self-checked.

Between s-wave pair states the multipole expansion of 1/r12 truncates exactly
at the monopole, so every two-particle element reduces to the radial kernel
1/max(r1, r2) and splits over the triangle r2 <= r1 where it is smooth:

    R0(ab;cd) = T(u_a u_c, u_b u_d) + T(u_b u_d, u_a u_c),
    T(F, G)   = int_0^1 dr1 F(r1)/r1 int_0^r1 dr2 G(r2).

Every integral is evaluated at the table's rule size n and again at 2n;
disagreement beyond 1e-9 raises ConvergenceError instead of caching an
under-resolved number. Caches use atomic insert-if-absent, so a table can be
shared across threads.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import ConvergenceError, UnsupportedModeError, ValidationError
from .quadrature import gauss_legendre, triangle_grid
from .sphere import ModeIndex, build_radial_mode

DEFAULT_POINTS = 200
MIN_POINTS = 16
MAX_POINTS = 512
AGREEMENT_TOL = 1e-9


@dataclass(frozen=True)
class PairIntegralKey:
    """Slater integral label: coordinate-1 couples bra[0]/ket[0], coordinate-2 bra[1]/ket[1]."""

    bra: tuple[ModeIndex, ModeIndex]
    ket: tuple[ModeIndex, ModeIndex]
    multipole: int = 0

    def __post_init__(self):
        for side, pair in (("bra", self.bra), ("ket", self.ket)):
            if len(pair) != 2 or not all(isinstance(m, ModeIndex) for m in pair):
                raise ValidationError(f"{side} must be a pair of ModeIndex, got {pair!r}")
        if isinstance(self.multipole, bool) or not isinstance(self.multipole, int) or self.multipole < 0:
            raise ValidationError(f"multipole must be a nonnegative integer, got {self.multipole!r}")


def _require_s_wave(*modes: ModeIndex) -> None:
    for m in modes:
        if m.l != 0:
            raise UnsupportedModeError(
                f"two-particle integrals are restricted to s-wave modes (l = 0); got {m}"
            )


class _Grid:
    """Triangle quadrature grid with per-mode and per-pair node-value caches."""

    def __init__(self, points: int):
        rule = gauss_legendre(points)
        self.r1, self.w1, self.r2, self.w2 = triangle_grid(rule)
        self._outer: dict[ModeIndex, np.ndarray] = {}
        self._inner: dict[ModeIndex, np.ndarray] = {}
        self._pair_outer: dict[tuple[ModeIndex, ModeIndex], np.ndarray] = {}
        self._pair_inner: dict[tuple[ModeIndex, ModeIndex], np.ndarray] = {}

    def _mode_outer(self, mode: ModeIndex) -> np.ndarray:
        got = self._outer.get(mode)
        if got is None:
            got = self._outer.setdefault(mode, build_radial_mode(mode)(self.r1))
        return got

    def _mode_inner(self, mode: ModeIndex) -> np.ndarray:
        got = self._inner.get(mode)
        if got is None:
            got = self._inner.setdefault(mode, build_radial_mode(mode)(self.r2))
        return got

    def pair_outer(self, pair: tuple[ModeIndex, ModeIndex]) -> np.ndarray:
        # weighted outer profile w1 * u_a * u_c / r1, ready for the dot product
        got = self._pair_outer.get(pair)
        if got is None:
            vals = self.w1 * self._mode_outer(pair[0]) * self._mode_outer(pair[1]) / self.r1
            got = self._pair_outer.setdefault(pair, vals)
        return got

    def pair_inner(self, pair: tuple[ModeIndex, ModeIndex]) -> np.ndarray:
        # cumulative inner integrals int_0^{r1_i} u_b u_d dr2 for every outer node
        got = self._pair_inner.get(pair)
        if got is None:
            vals = np.sum(self.w2 * self._mode_inner(pair[0]) * self._mode_inner(pair[1]), axis=1)
            got = self._pair_inner.setdefault(pair, vals)
        return got

    def central(self, pair: tuple[ModeIndex, ModeIndex]) -> float:
        # int u_a u_b / r dr; the pair_outer profile already carries weights and 1/r
        return float(np.sum(self.pair_outer(pair)))

    def slater(self, pair1: tuple[ModeIndex, ModeIndex], pair2: tuple[ModeIndex, ModeIndex]) -> float:
        return float(
            np.dot(self.pair_outer(pair1), self.pair_inner(pair2))
            + np.dot(self.pair_outer(pair2), self.pair_inner(pair1))
        )


class CoulombTable:
    """Cached s-wave Coulomb integrals at a fixed quadrature resolution."""

    def __init__(self, points: int = DEFAULT_POINTS):
        if isinstance(points, bool) or not isinstance(points, (int, np.integer)):
            raise ValidationError(f"quadrature points must be an integer, got {points!r}")
        if not MIN_POINTS <= points <= MAX_POINTS:
            raise ValidationError(
                f"quadrature points must lie in [{MIN_POINTS}, {MAX_POINTS}], got {points}"
            )
        self.points = int(points)
        self._grids = (_Grid(self.points), _Grid(2 * self.points))
        self._central: dict = {}
        self._slater: dict = {}

    def _checked(self, what, coarse: float, fine: float) -> float:
        if abs(coarse - fine) > AGREEMENT_TOL:
            raise ConvergenceError(
                f"{what} disagrees between {self.points} and {2 * self.points} quadrature "
                f"points by {abs(coarse - fine):.3e} (tolerance {AGREEMENT_TOL:.0e}); "
                f"increase the quadrature resolution"
            )
        return coarse

    def central_expectation(self, a: ModeIndex, b: ModeIndex) -> float:
        """One-particle matrix element int u_a u_b / r dr; exact 0 when l_a != l_b."""
        if not isinstance(a, ModeIndex) or not isinstance(b, ModeIndex):
            raise ValidationError("central_expectation takes two ModeIndex arguments")
        if a.l != b.l:
            return 0.0  # angular orthogonality, not an error
        key = (min(a, b), max(a, b))
        got = self._central.get(key)
        if got is None:
            value = self._checked(
                f"central_expectation{key}",
                self._grids[0].central(key),
                self._grids[1].central(key),
            )
            got = self._central.setdefault(key, value)
        return got

    def pair_expectation(self, a: ModeIndex, b: ModeIndex) -> float:
        """Ground-type repulsion element: u_a^2 and u_b^2 against 1/max(r1, r2)."""
        if not isinstance(a, ModeIndex) or not isinstance(b, ModeIndex):
            raise ValidationError("pair_expectation takes two ModeIndex arguments")
        _require_s_wave(a, b)
        return self.slater_radial(PairIntegralKey(bra=(a, b), ket=(a, b)))

    def slater_radial(self, key: PairIntegralKey) -> float:
        """Monopole Slater integral R0(ab;cd) for s-wave modes."""
        if not isinstance(key, PairIntegralKey):
            raise ValidationError("slater_radial takes a PairIntegralKey")
        if key.multipole != 0:
            raise UnsupportedModeError(
                f"only the multipole-0 channel is implemented; got multipole={key.multipole}"
            )
        _require_s_wave(*key.bra, *key.ket)
        pair1 = (min(key.bra[0], key.ket[0]), max(key.bra[0], key.ket[0]))
        pair2 = (min(key.bra[1], key.ket[1]), max(key.bra[1], key.ket[1]))
        canon = (min(pair1, pair2), max(pair1, pair2))
        got = self._slater.get(canon)
        if got is None:
            value = self._checked(
                f"slater_radial{canon}",
                self._grids[0].slater(*canon),
                self._grids[1].slater(*canon),
            )
            got = self._slater.setdefault(canon, value)
        return got


@lru_cache(maxsize=8)
def get_table(points: int = DEFAULT_POINTS) -> CoulombTable:
    """Process-wide shared table for the given resolution."""
    return CoulombTable(points)
