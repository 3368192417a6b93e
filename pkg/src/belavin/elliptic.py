"""Theta functions with rational characteristics.

The basic object is

    theta[a; b](z, tau) = sum_m exp(i pi (m+a)^2 tau + 2 i pi (m+a)(z+b)),

truncated adaptively so that the neglected Gaussian tail is below a
relative tolerance.  Everything else in the package is built from
``theta_char`` through ``sigma_alpha``, ``h`` and ``theta_j``.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

import numpy as np

ArrayLike = Union[complex, np.ndarray]

HALF = Fraction(1, 2)


@dataclass(frozen=True)
class ThetaChar:
    """Characteristic ``(a, b)`` of a theta function.

    Values are kept as :class:`fractions.Fraction` so that sums of many
    ``k/n`` terms stay exact; they are converted to float only inside the
    series summand.
    """

    a: Fraction
    b: Fraction

    def __post_init__(self):
        object.__setattr__(self, "a", Fraction(self.a))
        object.__setattr__(self, "b", Fraction(self.b))

    @classmethod
    def from_zn(cls, alpha1: int, alpha2: int, n: int) -> "ThetaChar":
        """Characteristic ``(1/2 + alpha1/n, 1/2 + alpha2/n)``."""
        return cls(HALF + Fraction(alpha1, n), HALF + Fraction(alpha2, n))


@dataclass(frozen=True)
class EllipticContext:
    """Modulus and truncation policy.

    Parameters
    ----------
    tau : complex
        Modulus, ``Im tau > 0``.
    tail_tol : float
        Relative size of the largest neglected term.  Ignored when ``M``
        is given.
    M : int, optional
        Fixed half-width of the summation window around its centre.
    """

    tau: complex
    tail_tol: float = 1e-14
    M: int | None = None

    def __post_init__(self):
        tau = complex(self.tau)
        if not (math.isfinite(tau.real) and math.isfinite(tau.imag)):
            raise ValueError("tau must be finite")
        if tau.imag <= 0:
            raise ValueError(f"Im tau must be > 0, got {tau.imag}")
        if self.M is None and not (0 < self.tail_tol < 1):
            raise ValueError("tail_tol must lie in (0, 1)")
        if self.M is not None and self.M < 0:
            raise ValueError("M must be non-negative")
        object.__setattr__(self, "tau", tau)

    def scaled(self, k: int) -> "EllipticContext":
        """Same policy at modulus ``k * tau``."""
        return EllipticContext(k * self.tau, self.tail_tol, self.M)

    def gaussian_width(self) -> int:
        """Half-width guaranteeing the tail bound around the peak term."""
        if self.M is not None:
            return self.M
        return math.ceil(math.sqrt(-math.log(self.tail_tol) / (math.pi * self.tau.imag))) + 1


def _check_finite(z: np.ndarray) -> None:
    if not np.all(np.isfinite(z)):
        raise ValueError("non-finite argument")


def theta_char(ch: ThetaChar, z: ArrayLike, ctx: EllipticContext) -> ArrayLike:
    """Evaluate ``theta[a; b](z, tau)``.

    The summation window is centred on the dominant term
    ``m + a ~ -Im z / Im tau`` and extends ``ctx.gaussian_width()`` terms
    on each side, so the neglected terms are below ``tail_tol`` relative
    to the largest one.

    Parameters
    ----------
    ch : ThetaChar
    z : complex or ndarray
    ctx : EllipticContext

    Returns
    -------
    complex or ndarray
        Same shape as ``z``.
    """
    zz = np.asarray(z, dtype=complex)
    _check_finite(zz)
    a = float(ch.a)
    b = float(ch.b)
    tau = ctx.tau
    width = ctx.gaussian_width()
    centre = -zz.imag / tau.imag - a
    lo = math.floor(float(np.min(centre))) - width
    hi = math.ceil(float(np.max(centre))) + width
    k = np.arange(lo, hi + 1, dtype=float) + a
    k = k.reshape((-1,) + (1,) * zz.ndim)
    terms = np.exp(1j * math.pi * k * k * tau + 2j * math.pi * k * (zz + b))
    out = terms.sum(axis=0)
    if np.ndim(z) == 0:
        return complex(out)
    return out


def sigma_alpha(alpha, z: ArrayLike, ctx: EllipticContext, n: int) -> ArrayLike:
    """``sigma_alpha(z) = theta[1/2 + alpha_1/n; 1/2 + alpha_2/n](z, tau)``.

    ``alpha`` is any integer pair; it is not reduced mod ``n`` (shifting a
    component by ``n`` changes the value by a constant phase).
    """
    return theta_char(ThetaChar.from_zn(int(alpha[0]), int(alpha[1]), n), z, ctx)


_H = ThetaChar(HALF, HALF)


def h(z: ArrayLike, ctx: EllipticContext) -> ArrayLike:
    """Odd theta function ``h = sigma_0 = theta[1/2; 1/2]``."""
    return theta_char(_H, z, ctx)


def theta_j(j: int, z: ArrayLike, ctx: EllipticContext, n: int) -> ArrayLike:
    """Intertwiner component ``theta[1/2 - j/n; 1/2](z, n tau)``.

    ``ctx`` carries the base modulus ``tau``; the rescaling to ``n tau``
    happens here.
    """
    ch = ThetaChar(HALF - Fraction(j, n), HALF)
    return theta_char(ch, z, ctx.scaled(n))


def quasi_shift_residual(alpha: int, beta: int, z: complex, ctx: EllipticContext, n: int) -> float:
    """Residual of the fractional shift identity

    ``sigma_0(z + (alpha tau + beta)/n)
    = exp(-2 i pi (alpha/n)(alpha tau/(2n) + z + 1/2 + beta/n)) sigma_{alpha,beta}(z)``.
    """
    tau = ctx.tau
    lhs = h(z + (alpha * tau + beta) / n, ctx)
    phase = cmath.exp(-2j * math.pi * alpha / n * (alpha * tau / (2 * n) + z + 0.5 + beta / n))
    rhs = phase * sigma_alpha((alpha, beta), z, ctx, n)
    return abs(lhs - rhs)


def parity_residual(k: int, z: complex, ctx: EllipticContext, n: int) -> float:
    """Residual of ``theta[1/2+k/n; 1/2](z, n tau) = -w^k theta[1/2-k/n; 1/2](-z, n tau)``
    with ``w = exp(2 i pi / n)``.
    """
    big = ctx.scaled(n)
    lhs = theta_char(ThetaChar(HALF + Fraction(k, n), HALF), z, big)
    rhs = -cmath.exp(2j * math.pi * k / n) * theta_char(ThetaChar(HALF - Fraction(k, n), HALF), -z, big)
    return abs(lhs - rhs)


def quasi_period_residuals(ch: ThetaChar, z: complex, ctx: EllipticContext) -> tuple[float, float]:
    """Residuals of the two quasi-periodicities.

    ``theta(z+1) = e^{2 i pi a} theta(z)`` and
    ``theta(z+tau) = e^{-i pi tau - 2 i pi (z+b)} theta(z)``.
    """
    t0 = theta_char(ch, z, ctx)
    r1 = abs(theta_char(ch, z + 1, ctx) - cmath.exp(2j * math.pi * float(ch.a)) * t0)
    f = cmath.exp(-1j * math.pi * ctx.tau - 2j * math.pi * (z + float(ch.b)))
    r2 = abs(theta_char(ch, z + ctx.tau, ctx) - f * t0)
    return r1, r2
