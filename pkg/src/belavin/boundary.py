"""Reflection matrices and the (dual) reflection equations."""

from __future__ import annotations

import itertools

import numpy as np

from .elliptic import sigma_alpha
from .errors import DegenerateParameter
from .vertex import DENOM_TOL, ModelParams, build_R, build_R21, scaled_residual, weyl

FORMS = ("corrected", "printed")


def build_K0(z: complex, p: ModelParams) -> np.ndarray:
    """``K0(z) = sum_alpha U_{2 alpha}(z) omega^{2 alpha_1 alpha_2} I_{2 alpha}``.

    ``U_{2 alpha}(z) = sigma_{2 alpha}(z + c) / sigma_{2 alpha}(c)``.  The sum
    runs literally over all of Z_n^2, so for even n several terms coincide.
    """
    n, ctx = p.n, p.ctx
    om = p.omega
    out = np.zeros((n, n), dtype=complex)
    for a1, a2 in itertools.product(range(n), repeat=2):
        al = (2 * a1, 2 * a2)
        den = sigma_alpha(al, p.c, ctx, n)
        if abs(den) < DENOM_TOL:
            raise DegenerateParameter(f"sigma_{al}(c) = {den}")
        u = sigma_alpha(al, z + p.c, ctx, n) / den
        out += u * om ** ((2 * a1 * a2) % n) * weyl(al[0], al[1], n)
    return out


def build_K(z: complex, p: ModelParams) -> np.ndarray:
    """``K(z) = K0(z) K0(0)``."""
    return build_K0(z, p) @ build_K0(0.0, p)


def build_Ktilde(z: complex, p: ModelParams) -> np.ndarray:
    """Dual reflection matrix ``K~(z) = K(-z - n w / 2)``."""
    return build_K(-z - p.n * p.w / 2, p)


def _residual(r12a, k1, r21b, k2, r12b, r21a):
    lhs = r12a @ k1 @ r21b @ k2
    rhs = k2 @ r12b @ k1 @ r21a
    return scaled_residual(lhs, rhs, r12a, k1, r21b, k2)


def re_residual(z1: complex, z2: complex, p: ModelParams, K=None, form: str = "corrected") -> float:
    """Normalized max-norm of the reflection equation residual.

    ``R12(z1-z2) K1(z1) R21(z1+z2) K2(z2) = K2(z2) R12(z1+z2) K1(z1) R21(x)``

    Parameters
    ----------
    K : callable, optional
        ``K(z) -> (n, n)`` array; defaults to :func:`build_K`.
    form : {"corrected", "printed"}
        ``x = z1 - z2`` for ``"corrected"`` (the form that holds) and
        ``x = z2 - z1`` for ``"printed"``.
    """
    if form not in FORMS:
        raise ValueError(f"form must be one of {FORMS}")
    n = p.n
    K = K or (lambda z: build_K(z, p))
    e = np.eye(n)
    k1 = np.kron(K(z1), e)
    k2 = np.kron(e, K(z2))
    last = z1 - z2 if form == "corrected" else z2 - z1
    return _residual(build_R(z1 - z2, p), k1, build_R21(z1 + z2, p), k2,
                     build_R(z1 + z2, p), build_R21(last, p))


def dual_re_residual(z1: complex, z2: complex, p: ModelParams, Kt=None, form: str = "corrected") -> float:
    """Normalized max-norm of the dual reflection equation residual.

    ``R12(x) K~1(z1) R21(-z1-z2-nw) K~2(z2) = K~2(z2) R12(-z1-z2-nw) K~1(z1) R21(z2-z1)``

    with ``x = z2 - z1`` (``"corrected"``) or ``x = z1 - z2`` (``"printed"``).
    """
    if form not in FORMS:
        raise ValueError(f"form must be one of {FORMS}")
    n = p.n
    Kt = Kt or (lambda z: build_Ktilde(z, p))
    e = np.eye(n)
    k1 = np.kron(Kt(z1), e)
    k2 = np.kron(e, Kt(z2))
    s = -z1 - z2 - n * p.w
    first = z2 - z1 if form == "corrected" else z1 - z2
    return _residual(build_R(first, p), k1, build_R21(s, p), k2,
                     build_R(s, p), build_R21(z2 - z1, p))
