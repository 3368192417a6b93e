"""Difference operators on functions of the weight vector.

An operator is kept in normal form ``sum_m c_m(a) Gamma^m`` with the
coefficients on the left, acting as

    (c Gamma^m F)(a) = c(a) F(a + m).

Composition then reads ``(c1 Gamma^m1)(c2 Gamma^m2) = c1(a) c2(a+m1) Gamma^{m1+m2}``,
which is the shift rule ``Gamma_mu f(a) = f(a + e_mu) Gamma_mu``.
Coefficients may be scalars or matrices; a matrix-valued operator plays the
role of a matrix of scalar operators (see :meth:`DifferenceOperator.entry`).
"""

from __future__ import annotations

import itertools
from functools import lru_cache
from typing import Callable

import numpy as np

from .boundary import build_K, build_Ktilde
from .elliptic import sigma_alpha
from .face import (WeightVector, bar_matrix_inverse, intertwiner_phi, tilde_matrix_inverse,
                   unit)
from .vertex import ModelParams, build_R
from .errors import DegenerateParameter

Coeff = Callable[[WeightVector], object]


def _memo(f: Coeff) -> Coeff:
    cache: dict = {}

    def g(a: WeightVector):
        key = (a.a, a.delta)
        if key not in cache:
            cache[key] = f(a)
        return cache[key]

    g.__wrapped__ = f
    return g


def _mul(x, y):
    if np.ndim(x) == 2 and np.ndim(y) == 2:
        return x @ y
    return x * y


def _add(m1, m2):
    return tuple(i + j for i, j in zip(m1, m2))


class DifferenceOperator:
    """Finite sum ``sum_m c_m(a) Gamma^m``.

    Parameters
    ----------
    terms : dict
        Maps a shift tuple of length ``n`` to a coefficient callable
        ``WeightVector -> complex | ndarray``.  Callables in a list are
        summed.
    n : int
    """

    def __init__(self, terms: dict, n: int):
        self.n = n
        self.terms: dict[tuple, Coeff] = {}
        for m, f in terms.items():
            m = tuple(int(x) for x in m)
            if len(m) != n:
                raise ValueError("shift length must equal n")
            if isinstance(f, (list, tuple)):
                f = _sum_of(list(f))
            self.terms[m] = _memo(f)

    @property
    def shifts(self) -> list[tuple]:
        return sorted(self.terms)

    def coeff(self, m, a: WeightVector):
        """Coefficient of ``Gamma^m`` at ``a`` (zero if absent)."""
        m = tuple(m)
        if m not in self.terms:
            return 0.0
        return self.terms[m](a)

    def apply(self, F: Callable[[WeightVector], object], a: WeightVector):
        """``(A F)(a) = sum_m c_m(a) F(a + m)``."""
        return sum(_mul(f(a), F(a.shift(m))) for m, f in self.terms.items())

    def __add__(self, other: "DifferenceOperator") -> "DifferenceOperator":
        terms: dict = {}
        for op in (self, other):
            for m, f in op.terms.items():
                terms.setdefault(m, []).append(f)
        return DifferenceOperator(terms, self.n)

    def __sub__(self, other: "DifferenceOperator") -> "DifferenceOperator":
        return self + other.scale(-1.0)

    def scale(self, s: complex) -> "DifferenceOperator":
        return DifferenceOperator({m: (lambda a, f=f: s * f(a)) for m, f in self.terms.items()}, self.n)

    def left_mul(self, M: np.ndarray) -> "DifferenceOperator":
        """Constant matrix times the operator."""
        return DifferenceOperator({m: (lambda a, f=f: M @ f(a)) for m, f in self.terms.items()}, self.n)

    def right_mul(self, M: np.ndarray) -> "DifferenceOperator":
        """Operator times a constant matrix."""
        return DifferenceOperator({m: (lambda a, f=f: f(a) @ M) for m, f in self.terms.items()}, self.n)

    def trace(self) -> "DifferenceOperator":
        return DifferenceOperator({m: (lambda a, f=f: np.trace(f(a))) for m, f in self.terms.items()}, self.n)

    def entry(self, i: int, j: int) -> "DifferenceOperator":
        """Scalar operator in row ``i``, column ``j`` of a matrix-valued operator."""
        return DifferenceOperator({m: (lambda a, f=f: f(a)[i, j]) for m, f in self.terms.items()}, self.n)

    def lift(self, slot: int, k: int) -> "DifferenceOperator":
        """Embed matrix coefficients into factor ``slot`` (0 or 1) of C^k (x) C^k."""
        e = np.eye(k)
        if slot == 0:
            return DifferenceOperator({m: (lambda a, f=f: np.kron(f(a), e)) for m, f in self.terms.items()}, self.n)
        return DifferenceOperator({m: (lambda a, f=f: np.kron(e, f(a))) for m, f in self.terms.items()}, self.n)


def _sum_of(fs):
    def f(a):
        out = fs[0](a)
        for g in fs[1:]:
            out = out + g(a)
        return out
    return f


def identity_operator(n: int, value=1.0) -> DifferenceOperator:
    return DifferenceOperator({(0,) * n: (lambda a: value)}, n)


def gamma(mu: int, n: int, k: int = 1) -> DifferenceOperator:
    """Shift operator ``Gamma_mu^k``."""
    return DifferenceOperator({unit(mu, n, k): (lambda a: 1.0)}, n)


def multiplication(f: Coeff, n: int) -> DifferenceOperator:
    """Multiplication by the function ``f(a)``."""
    return DifferenceOperator({(0,) * n: f}, n)


def compose(A: DifferenceOperator, B: DifferenceOperator) -> DifferenceOperator:
    """Operator product ``A B`` (B acts first on functions of ``a``).

    The coefficient of ``Gamma^{m1+m2}`` accumulates ``c^A_{m1}(a) c^B_{m2}(a + m1)``;
    matrix coefficients are multiplied with ``@``.
    """
    if A.n != B.n:
        raise ValueError("operators act on different weight lattices")
    terms: dict = {}
    for m1, f1 in A.terms.items():
        for m2, f2 in B.terms.items():
            terms.setdefault(_add(m1, m2), []).append(
                lambda a, f1=f1, f2=f2, m1=m1: _mul(f1(a), f2(a.shift(m1))))
    return DifferenceOperator(terms, A.n)


def commutator(A: DifferenceOperator, B: DifferenceOperator) -> DifferenceOperator:
    return compose(A, B) - compose(B, A)


def op_equal_on_samples(A: DifferenceOperator, B: DifferenceOperator, sample_as, tol: float,
                        normalized: bool = False) -> tuple[bool, float]:
    """Compare all coefficients at the sample points.

    Returns
    -------
    ok : bool
    residual : float
        Max coefficient difference, divided by the max coefficient
        magnitude when ``normalized``.
    """
    shifts = set(A.terms) | set(B.terms)
    diff = 0.0
    scale = 0.0
    for a in sample_as:
        for m in shifts:
            x = np.asarray(A.coeff(m, a))
            y = np.asarray(B.coeff(m, a))
            diff = max(diff, float(np.abs(x - y).max()))
            scale = max(scale, float(np.abs(x).max()), float(np.abs(y).max()))
    res = diff / scale if normalized and scale > 0 else diff
    return res < tol, res


# --- L, L^{-1} and the transfer operator ---------------------------------------------

def build_L(z: complex, p: ModelParams) -> DifferenceOperator:
    """Factorized L-operator ``L(a, z) = sum_mu Gamma_mu f(a, mu, z)``.

    ``f(a, mu, z)_i^j = phi^(i)_{a-mu,a}(z + xi1) phi~^(j)_{a-mu,a}(z + xi2)``;
    in normal form the coefficient of ``Gamma_mu`` is ``f(a + e_mu, mu, z)``.
    """
    n = p.n

    def f(mu):
        def c(a):
            b = a.plus(mu)
            return np.outer(intertwiner_phi(a, mu, z + p.xi1, p),
                            tilde_matrix_inverse(b, z + p.xi2, p)[mu])
        return c

    return DifferenceOperator({unit(mu, n): f(mu) for mu in range(n)}, n)


def build_Linv(z: complex, p: ModelParams) -> DifferenceOperator:
    """``L^{-1}(a, z) = sum_mu Gamma_{-mu} g(a, mu, z)``.

    ``g(a, mu, z)_i^j = phi^(i)_{a,a+mu}(z + xi2) phi-^(j)_{a,a+mu}(z + xi1)``;
    in normal form the coefficient of ``Gamma_{-mu}`` is ``g(a - e_mu, mu, z)``.
    """
    n = p.n

    def g(mu):
        def c(a):
            b = a.plus(mu, -1)
            return np.outer(intertwiner_phi(b, mu, z + p.xi2, p),
                            bar_matrix_inverse(b, z + p.xi1, p)[mu])
        return c

    return DifferenceOperator({unit(mu, n, -1): g(mu) for mu in range(n)}, n)


def lyb_residual(z1: complex, z2: complex, p: ModelParams, sample_as) -> float:
    """Operator Yang-Baxter relation ``R12 L1(z1) L2(z2) = L2(z2) L1(z1) R12``.

    Normalized max coefficient residual over the sample weights.
    """
    n = p.n
    R = build_R(z1 - z2, p)
    L1 = build_L(z1, p).lift(0, n)
    L2 = build_L(z2, p).lift(1, n)
    lhs = compose(L1, L2).left_mul(R)
    rhs = compose(L2, L1).right_mul(R)
    return op_equal_on_samples(lhs, rhs, sample_as, np.inf, normalized=True)[1]


@lru_cache(maxsize=256)
def _K(z: complex, p: ModelParams) -> np.ndarray:
    return build_K(z, p)


@lru_cache(maxsize=256)
def _Kt(z: complex, p: ModelParams) -> np.ndarray:
    return build_Ktilde(z, p)


def build_F1_direct(a: WeightVector, mu: int, nu: int, z: complex, p: ModelParams,
                    K: np.ndarray | None = None) -> complex:
    """``F1 = phi~_{a+mu-nu, a+mu}(z + xi2) K(z) phi_{a,a+mu}(-z + xi2)``."""
    K = _K(complex(z), p) if K is None else K
    row = tilde_matrix_inverse(a.plus(mu), z + p.xi2, p)[nu]
    return complex(row @ K @ intertwiner_phi(a, mu, -z + p.xi2, p))


def build_F2_direct(a: WeightVector, mu: int, nu: int, z: complex, p: ModelParams,
                    Kt: np.ndarray | None = None) -> complex:
    """``F2 = phi-_{a,a+mu}(-z + xi1) K~(z) phi_{a+mu-nu, a+mu}(z + xi1)``."""
    Kt = _Kt(complex(z), p) if Kt is None else Kt
    row = bar_matrix_inverse(a, -z + p.xi1, p)[mu]
    col = intertwiner_phi(a.plus(mu).plus(nu, -1), nu, z + p.xi1, p)
    return complex(row @ Kt @ col)


def G_direct(a: WeightVector, mu: int, nu: int, z: complex, p: ModelParams) -> complex:
    return build_F1_direct(a, mu, nu, z, p) * build_F2_direct(a, mu, nu, z, p)


def _sab(al: int, be: int, x: complex, p: ModelParams) -> complex:
    return sigma_alpha((al, be), x, p.ctx, p.n)


def _check(x: complex, what: str) -> complex:
    if abs(x) < 1e-12:
        raise DegenerateParameter(f"{what} vanishes")
    return x


def closed_form_F1(a: WeightVector, mu: int, nu: int, z: complex, p: ModelParams,
                   extra_phase: bool = False, gamma_sign: int = -1) -> complex:
    """Theta-function closed form of F1 (gauge ``xi1 = xi2 = 0``).

    ``sum_gamma U_{2gamma}(z) e^{s 2 i pi 2 g1 g2 / n}
    sigma_{2g1,2g2+1}(X0 - w(abar_nu + d_{mu nu} - 1 + abar_mu)) / sigma_0(X0)
    prod_{j != nu} sigma_{2g1,2g2+1}(-w(abar_j + d_{mu j} - 1 + abar_mu))
                   / sigma_0(-w(abar_j + d_{mu j} - abar_nu - d_{mu nu}))``

    with ``X0 = -z + w delta + w(1-n) + (n-1)/2``, ``delta = sum delta_i``.
    The value equals ``build_F1_direct / n``.  ``gamma_sign`` and
    ``extra_phase`` expose the sign variants compared in the closedform
    check; the defaults are the ones that match.
    """
    n, w = p.n, p.w
    ab = a.abar
    d = 1.0 if mu == nu else 0.0
    ds = sum(a.delta)
    X0 = -z + w * ds + w * (1 - n) + (n - 1) / 2
    den0 = _check(_sab(0, 0, X0, p), "sigma_0(X0)")
    dens = []
    for j in range(n):
        if j != nu:
            dj = 1.0 if j == mu else 0.0
            dens.append(_check(_sab(0, 0, -w * (ab[j] + dj - ab[nu] - d), p), "product denominator"))
    tot = 0j
    for g1, g2 in itertools.product(range(n), repeat=2):
        u = _sab(2 * g1, 2 * g2, z + p.c, p) / _sab(2 * g1, 2 * g2, p.c, p)
        pref = np.exp(gamma_sign * 2j * np.pi * 2 * g1 * g2 / n)
        if extra_phase:
            pref *= np.exp(2j * np.pi * 2 * g1 / n)
        t = _sab(2 * g1, 2 * g2 + 1, X0 - w * (ab[nu] + d - 1 + ab[mu]), p) / den0
        k = 0
        for j in range(n):
            if j == nu:
                continue
            dj = 1.0 if j == mu else 0.0
            t *= _sab(2 * g1, 2 * g2 + 1, -w * (ab[j] + dj - 1 + ab[mu]), p) / dens[k]
            k += 1
        tot += u * pref * t
    return complex(tot)


def closed_form_F2(a: WeightVector, mu: int, nu: int, z: complex, p: ModelParams,
                   extra_phase: bool = False, gamma_sign: int = -1,
                   denominator: str = "mu") -> complex:
    """Theta-function closed form of F2 (gauge ``xi1 = xi2 = 0``).

    ``sum_gamma U_{2gamma}(-z - nw/2) e^{s 2 i pi 2 g1 g2 / n}
    sigma_{2g1,2g2+1}(X0 - w(abar_mu + d_{mu nu} - 1 + abar_nu)) / sigma_0(X0)
    prod_{j != mu} sigma_{2g1,2g2+1}(-w(abar_j + d_{mu nu} - 1 + abar_nu))
                   / sigma_0(-w(abar_j - abar_D))``

    with ``X0 = z + w delta + (n-1)/2``.  ``denominator`` picks ``D = mu``
    (matches ``build_F2_direct / n``) or ``D = nu``.
    """
    n, w = p.n, p.w
    ab = a.abar
    d = 1.0 if mu == nu else 0.0
    ds = sum(a.delta)
    X0 = z + w * ds + (n - 1) / 2
    den0 = _check(_sab(0, 0, X0, p), "sigma_0(X0)")
    ref = {"mu": mu, "nu": nu}[denominator]
    dens = [_check(_sab(0, 0, -w * (ab[j] - ab[ref]), p), "product denominator")
            for j in range(n) if j != mu]
    zz = -z - n * w / 2
    tot = 0j
    for g1, g2 in itertools.product(range(n), repeat=2):
        u = _sab(2 * g1, 2 * g2, zz + p.c, p) / _sab(2 * g1, 2 * g2, p.c, p)
        pref = np.exp(gamma_sign * 2j * np.pi * 2 * g1 * g2 / n)
        if extra_phase:
            pref *= np.exp(2j * np.pi * 2 * g1 / n)
        t = _sab(2 * g1, 2 * g2 + 1, X0 - w * (ab[mu] + d - 1 + ab[nu]), p) / den0
        k = 0
        for j in range(n):
            if j == mu:
                continue
            t *= _sab(2 * g1, 2 * g2 + 1, -w * (ab[j] + d - 1 + ab[nu]), p) / dens[k]
            k += 1
        tot += u * pref * t
    return complex(tot)


def transfer_t(z: complex, p: ModelParams, path: str = "G") -> DifferenceOperator:
    """Open transfer operator ``t(z) = tr K~(z) L(a, z) K(z) L^{-1}(a, -z)``.

    Parameters
    ----------
    path : {"G", "trace"}
        ``"trace"`` composes the operator matrices and takes the trace;
        ``"G"`` assembles ``sum_{mu nu} Gamma_{-mu} Gamma_nu G_{mu nu}(a, z)``
        from the direct ``F1 F2`` products.  Both give the same operator.
    """
    n = p.n
    z = complex(z)
    if path == "trace":
        L = build_L(z, p).left_mul(_Kt(z, p)).right_mul(_K(z, p))
        return compose(L, build_Linv(-z, p)).trace()
    if path != "G":
        raise ValueError("path must be 'G' or 'trace'")
    terms: dict = {}
    for mu, nu in itertools.product(range(n), repeat=2):
        m = _add(unit(nu, n), unit(mu, n, -1))
        # Gamma^m G(a) = G(a + m) Gamma^m
        terms.setdefault(m, []).append(
            lambda a, mu=mu, nu=nu, m=m: G_direct(a.shift(m), mu, nu, z, p))
    return DifferenceOperator(terms, n)


def commutation_residual(z1: complex, z2: complex, p: ModelParams, sample_as,
                         t_builder=None) -> float:
    """Normalized max coefficient of ``[t(z1), t(z2)]`` over the sample weights."""
    tb = t_builder or (lambda z: transfer_t(z, p))
    A, B = tb(z1), tb(z2)
    return op_equal_on_samples(compose(A, B), compose(B, A), sample_as, np.inf, normalized=True)[1]


def action_commutation_residual(z1: complex, z2: complex, p: ModelParams, sample_as,
                                rng: np.random.Generator, t_builder=None) -> float:
    """Same commutator applied to a seeded random test function of ``a``."""
    tb = t_builder or (lambda z: transfer_t(z, p))
    A, B = tb(z1), tb(z2)
    k = rng.normal(size=p.n)
    phase = rng.uniform(0, 2 * np.pi)

    def F(a: WeightVector):
        x = np.dot(k, a.a)
        return np.exp(1j * (x + phase)) + 0.5 * np.cos(0.7 * x)

    AB, BA = compose(A, B), compose(B, A)
    diff = max(abs(AB.apply(F, a) - BA.apply(F, a)) for a in sample_as)
    scale = max(abs(AB.apply(F, a)) for a in sample_as)
    return diff / scale
