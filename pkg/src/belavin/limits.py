"""Trigonometric and z -> -i infinity limits, and the Hamiltonian families.

The trigonometric layer keeps the conventions of the elliptic one: the
model data come from :class:`~belavin.vertex.ModelParams` (only ``n`` and
``w = n eta`` are used), and the weight shifts from
:class:`~belavin.face.WeightVector` (real ``delta`` recommended).

Direct elliptic F's at large ``Im tau`` suffer cancellations of order
``exp(2 Im tau)``, so :func:`direct_F_hp` evaluates them with mpmath.
"""

from __future__ import annotations

import cmath
import itertools
import math
from dataclasses import dataclass, field

import mpmath as mp
import numpy as np

from .diffop import DifferenceOperator
from .errors import PoleNearby
from .face import WeightVector, unit
from .vertex import ModelParams

POLE_TOL = 1e-8


@dataclass(frozen=True)
class TrigParams:
    """Data of the trigonometric limit.

    Parameters
    ----------
    eps : float
        ``c = eps tau + c'`` with ``0 < eps < 1/n``.
    c_prime : complex
    im_tau_schedule : tuple of float
        Increasing ``Im tau`` values for convergence studies.
    m_branch : int
        Surviving ``2 gamma_1 / n = m`` branch; only ``m = 0`` is realised
        by ``gamma_1 = 0``.
    dps : int
        mpmath working precision for the direct elliptic route.
    """

    eps: float = 0.1
    c_prime: complex = 0.23
    im_tau_schedule: tuple = (10.0, 20.0, 30.0)
    m_branch: int = 0
    dps: int = 60

    def validate(self, n: int) -> None:
        if not 0 < self.eps < 1 / n:
            raise ValueError(f"eps must lie in (0, 1/n), got {self.eps}")
        if list(self.im_tau_schedule) != sorted(self.im_tau_schedule):
            raise ValueError("Im tau schedule must be increasing")


def _require_odd(n: int) -> None:
    if n % 2 == 0:
        raise ValueError("Hamiltonian extraction is restricted to odd n")


def roots_of_unity_vanishing(gamma1: int, n: int) -> complex:
    """``sum_{gamma_2=0}^{n-1} omega^{2 gamma_1 gamma_2}``; zero unless ``2 gamma_1 = 0 mod n``."""
    k = (2 * gamma1) % n
    if k == 0:
        return complex(n)
    return complex(sum(cmath.exp(2j * math.pi * k * g / n) for g in range(n)))


def _sin(x: complex) -> complex:
    return cmath.sin(math.pi * x)


def _den(x: complex) -> complex:
    s = _sin(x)
    if abs(s) < POLE_TOL:
        raise PoleNearby(f"sin(pi {x}) = {s}")
    return s


def _pieces(which: int, a: WeightVector, mu: int, nu: int, w: complex):
    """Shared ingredients of the trigonometric F's.

    Returns ``(X0_shift, B, [A_j], [D_j])`` with
    ``F = sum_q sin pi(X0 + B + q)/sin pi X0 prod_j sin pi(A_j + q)/sin pi D_j``.
    """
    n = a.n
    ab = a.abar
    d = 1.0 if mu == nu else 0.0
    ds = sum(a.delta)
    if which == 1:
        x0 = w * ds + w * (1 - n) + (n - 1) / 2
        B = -w * (ab[nu] + d - 1 + ab[mu])
        A = [-w * (ab[j] + (j == mu) - 1 + ab[mu]) for j in range(n) if j != nu]
        D = [-w * (ab[j] + (j == mu) - ab[nu] - d) for j in range(n) if j != nu]
    elif which == 2:
        x0 = w * ds + (n - 1) / 2
        B = -w * (ab[mu] + d - 1 + ab[nu])
        A = [-w * (ab[j] + d - 1 + ab[nu]) for j in range(n) if j != mu]
        D = [-w * (ab[j] - ab[mu]) for j in range(n) if j != mu]
    else:
        raise ValueError("which must be 1 or 2")
    return x0, B, A, D


def trig_F(which: int, a: WeightVector, mu: int, nu: int, z: complex, p: ModelParams,
           trig: TrigParams | None = None) -> complex:
    """Trigonometric limit of F1 (``which=1``) or F2 (``which=2``).

    ``F1 = sum_{g2} sin pi(X0 + B + q)/sin pi X0 prod_{j != nu} sin pi(A_j + q)/sin pi D_j``

    with ``q = (2 g2 + 1)/n``, ``X0 = -z + w delta + w(1-n) + (n-1)/2``,
    ``B = -w(abar_nu + d_{mu nu} - 1 + abar_mu)``,
    ``A_j = -w(abar_j + d_{mu j} - 1 + abar_mu)`` and
    ``D_j = -w(abar_j + d_{mu j} - abar_nu - d_{mu nu})``.  For F2,
    ``X0 = z + w delta + (n-1)/2``, ``B`` is the same, the product runs over
    ``j != mu`` with ``A_j = -w(abar_j + d_{mu nu} - 1 + abar_nu)`` and
    ``D_j = -w(abar_j - abar_mu)``.

    Raises
    ------
    PoleNearby
        If a sine denominator is below ``POLE_TOL``.
    """
    n = p.n
    x0, B, A, D = _pieces(which, a, mu, nu, p.w)
    X0 = (-z if which == 1 else z) + x0
    den = _den(X0)
    dprod = 1.0
    for dj in D:
        dprod *= _den(dj)
    tot = 0j
    for g2 in range(n):
        q = (2 * g2 + 1) / n
        t = _sin(X0 + B + q) / den
        for aj in A:
            t *= _sin(aj + q)
        tot += t
    return tot / dprod


def _limit_sign(which: int, direction: int) -> int:
    # sin pi(X0 + y)/sin pi X0 -> exp(-i pi s y) when Im X0 -> s infinity
    s_im = -direction if which == 1 else direction
    return -s_im


def asymptotic_F(which: int, a: WeightVector, mu: int, nu: int, p: ModelParams,
                 trig: TrigParams | None = None, direction: int = -1,
                 selection: bool = True) -> complex:
    """Limit of :func:`trig_F` as ``z -> direction * i infinity``.

    The ratio ``sin pi(X0 + B + q)/sin pi X0`` tends to ``exp(i pi s (B + q))``
    with ``s = -1`` for F1 and ``s = +1`` for F2 when ``direction = -1``
    (signs flip for ``direction = +1``).  With ``selection=True`` only the
    all-equal-sign terms of the expanded sine product are kept, which is
    exact for odd ``n``; otherwise the full ``gamma_2`` sum is evaluated.
    """
    n = p.n
    s = _limit_sign(which, direction)
    _, B, A, D = _pieces(which, a, mu, nu, p.w)
    dprod = 1.0
    for dj in D:
        dprod *= _den(dj)
    if not selection:
        tot = 0j
        for g2 in range(n):
            q = (2 * g2 + 1) / n
            t = cmath.exp(1j * math.pi * s * (B + q))
            for aj in A:
                t *= _sin(aj + q)
            tot += t
        return tot / dprod
    _require_odd(n)
    # expanding each sin into exponentials, the q exponent is s + sum(eps_j);
    # for odd n only eps_j = s for every j reaches a multiple of n, and then
    # sum_q exp(i pi s n q) = -n
    e = B + sum(A)
    return -n * cmath.exp(1j * math.pi * s * e) * (s / 2j) ** (n - 1) / dprod


def selection_rule_residual(which: int, a: WeightVector, mu: int, nu: int, p: ModelParams,
                            direction: int = -1) -> float:
    """Relative gap between the full ``gamma_2`` sum and the selection-rule value."""
    full = asymptotic_F(which, a, mu, nu, p, direction=direction, selection=False)
    kept = asymptotic_F(which, a, mu, nu, p, direction=direction, selection=True)
    return abs(full - kept) / abs(full)


def g_factor(a: WeightVector, mu: int, nu: int, p: ModelParams) -> complex:
    """``g_{mu nu} = prod_{j != nu} 1/sin pi D1_j  prod_{k != mu} 1/sin pi D2_k``."""
    *_, D1 = _pieces(1, a, mu, nu, p.w)
    *_, D2 = _pieces(2, a, mu, nu, p.w)
    out = 1.0
    for d in D1 + D2:
        out /= _den(d)
    return out


def G_closed(a: WeightVector, mu: int, nu: int, p: ModelParams, direction: int = -1) -> complex:
    """Closed limit ``G_{mu nu} = C e^{-i pi dir (n w (abar_nu - abar_mu) + n w d_{mu nu} - w)} g_{mu nu}``.

    For odd ``n`` the constant is ``C = n^2 / 4^{n-1}``, so this equals the
    product of the two :func:`asymptotic_F` values.
    """
    n = p.n
    _require_odd(n)
    w = p.w
    ab = a.abar
    d = 1.0 if mu == nu else 0.0
    ph = cmath.exp(1j * math.pi * direction * (n * w * (ab[nu] - ab[mu]) + n * w * d - w))
    return n * n / 4 ** (n - 1) * ph * g_factor(a, mu, nu, p)


def _assemble(G, n: int) -> DifferenceOperator:
    """``sum_{mu nu} Gamma_{-mu} Gamma_nu G_{mu nu}(a)`` in normal form."""
    terms: dict = {}
    for mu, nu in itertools.product(range(n), repeat=2):
        m = tuple(x - y for x, y in zip(unit(nu, n), unit(mu, n)))
        terms.setdefault(m, []).append(lambda a, mu=mu, nu=nu, m=m: G(a.shift(m), mu, nu))
    return DifferenceOperator(terms, n)


def trig_transfer(z: complex, p: ModelParams) -> DifferenceOperator:
    """Trigonometric transfer operator with ``G = trig_F1 trig_F2``."""
    return _assemble(lambda a, mu, nu: trig_F(1, a, mu, nu, z, p) * trig_F(2, a, mu, nu, z, p), p.n)


def build_H(p: ModelParams, trig: TrigParams | None = None, route: str = "asymptotic",
            z: complex | None = None, direction: int = -1) -> DifferenceOperator:
    """Hamiltonian ``H = sum Gamma_{-mu} Gamma_nu G_{mu nu}`` of the z -> -i infinity limit.

    Parameters
    ----------
    route : {"asymptotic", "closed", "trig"}
        ``"asymptotic"`` multiplies the two :func:`asymptotic_F` limits,
        ``"closed"`` uses :func:`G_closed`, and ``"trig"`` uses
        ``trig_F1 trig_F2`` at the finite point ``z`` (large negative
        ``Im z`` approaches the limit).
    """
    _require_odd(p.n)
    if route == "asymptotic":
        G = lambda a, mu, nu: (asymptotic_F(1, a, mu, nu, p, direction=direction)  # noqa: E731
                               * asymptotic_F(2, a, mu, nu, p, direction=direction))
    elif route == "closed":
        G = lambda a, mu, nu: G_closed(a, mu, nu, p, direction)  # noqa: E731
    elif route == "trig":
        if z is None:
            raise ValueError("route 'trig' needs z")
        G = lambda a, mu, nu: trig_F(1, a, mu, nu, z, p) * trig_F(2, a, mu, nu, z, p)  # noqa: E731
    else:
        raise ValueError("unknown route")
    return _assemble(G, p.n)


@dataclass
class HamiltonianFamily:
    """Members ``H``, ``H1``, ``H2``, ``H3``, ``H11``, ``H12`` and their data."""

    members: dict
    params: ModelParams
    z: complex
    rho: float = 0.0
    notes: dict = field(default_factory=dict)

    def __getitem__(self, key: str) -> DifferenceOperator:
        return self.members[key]


def family_G(kind: str, a: WeightVector, mu: int, nu: int, z: complex, p: ModelParams,
             rho: float = 0.0) -> complex:
    """Coefficient ``G^kind_{mu nu}(a, z)`` of the four-term split.

    With ``P = n + 1 - n w (abar_mu + abar_nu + d_{mu nu} - 1)`` and
    ``Q = -2z - n w (abar_mu + 1 - abar_nu - d_{mu nu})``:

    * ``"11"``: ``e^{i pi P} g``, ``"12"``: ``e^{-i pi P} g``, ``"1"``: their sum
    * ``"2"``: ``e^{i pi Q} g``, ``"3"``: ``e^{-i pi Q} g``
    * ``"G"``: ``G1 - G2 - G3``

    ``rho`` shifts every ``delta_mu`` (it cancels in ``g`` and in ``Q``).
    """
    n, w = p.n, p.w
    if rho:
        a = WeightVector(a.a, tuple(x + rho for x in a.delta))
    ab = a.abar
    d = 1.0 if mu == nu else 0.0
    P = n + 1 - n * w * (ab[mu] + ab[nu] + d - 1)
    Q = -2 * z - n * w * (ab[mu] + 1 - ab[nu] - d)
    e = {"11": cmath.exp(1j * math.pi * P), "12": cmath.exp(-1j * math.pi * P),
         "2": cmath.exp(1j * math.pi * Q), "3": cmath.exp(-1j * math.pi * Q)}
    e["1"] = e["11"] + e["12"]
    e["G"] = e["1"] - e["2"] - e["3"]
    return e[kind] * g_factor(a, mu, nu, p)


def build_family(z: complex, p: ModelParams, trig: TrigParams | None = None,
                 rho: float = 0.0) -> HamiltonianFamily:
    """Operators ``H^i = sum Gamma_{-mu} Gamma_nu G^i_{mu nu}`` for the split above."""
    _require_odd(p.n)
    members = {}
    for kind in ("G", "1", "2", "3", "11", "12"):
        members["H" if kind == "G" else "H" + kind] = _assemble(
            lambda a, mu, nu, kind=kind: family_G(kind, a, mu, nu, z, p, rho), p.n)
    return HamiltonianFamily(members, p, z, rho)


# --- high-precision direct elliptic route -----------------------------------------

def _mp_theta(a, b, z, tau, tol_digits: int):
    width = int(mp.sqrt(tol_digits * mp.log(10) / (mp.pi * mp.im(tau)))) + 2
    centre = -mp.im(z) / mp.im(tau) - a
    lo = int(mp.floor(centre)) - width
    hi = int(mp.ceil(centre)) + width
    s = mp.mpc(0)
    for m in range(lo, hi + 1):
        k = m + a
        s += mp.exp(1j * mp.pi * k * k * tau + 2j * mp.pi * k * (z + b))
    return s


def direct_F_hp(which: int, a: WeightVector, mu: int, nu: int, z: complex, p: ModelParams,
                im_tau: float, trig: TrigParams, sector: int | None = None) -> complex:
    """Elliptic F1/F2 at ``tau = i im_tau`` and ``c = eps tau + c'`` in high precision.

    ``sector`` restricts the ``K0(z)`` sum to ``gamma_1 = sector`` (a
    diagnostic; ``None`` is the full matrix).
    """
    n = p.n
    with mp.workdps(trig.dps):
        tau = mp.mpc(0, im_tau)
        c = trig.eps * tau + mp.mpc(trig.c_prime)
        w = mp.mpc(p.w)
        half = mp.mpf(1) / 2
        dig = trig.dps
        om = mp.exp(2j * mp.pi / n)
        delta = [mp.mpc(x) for x in a.delta]

        def abar(v):
            s = mp.mpf(sum(v)) / n
            return [v[i] - s + delta[i] for i in range(n)]

        def sig(al, x):
            return _mp_theta(half + mp.mpf(al[0]) / n, half + mp.mpf(al[1]) / n, x, tau, dig)

        def weyl(a1, a2):
            m = mp.matrix(n, n)
            for i in range(n):
                m[i, (i + a1) % n] = om ** ((a2 * i) % n)
            return m

        def K0(x, sec):
            out = mp.matrix(n, n)
            for g1, g2 in itertools.product(range(n), repeat=2):
                if sec is not None and g1 != sec:
                    continue
                al = (2 * g1, 2 * g2)
                u = sig(al, x + c) / sig(al, c)
                out += (u * om ** ((2 * g1 * g2) % n)) * weyl(al[0] % n, al[1] % n)
            return out

        def K(x):
            return K0(x, sector) * K0(mp.mpf(0), None)

        def phi(v, l, x):
            ab = abar(v)
            return mp.matrix([_mp_theta(half - mp.mpf(j) / n, half, x - n * w * ab[l], n * tau, dig)
                              for j in range(n)])

        def cols(vs_ls, x):
            m = mp.matrix(n, n)
            for col, (v, l) in enumerate(vs_ls):
                ph = phi(v, l, x)
                for i in range(n):
                    m[i, col] = ph[i]
            return m

        av = list(a.a)
        zz = mp.mpc(z)
        if which == 1:
            b = [av[i] + (i == mu) for i in range(n)]
            x2 = mp.mpc(p.xi2)
            M = cols([([b[i] - (i == l) for i in range(n)], l) for l in range(n)], zz + x2)
            rhs = K(zz) * phi(av, mu, -zz + x2)
            val = mp.lu_solve(M, rhs)[nu]
        else:
            x1 = mp.mpc(p.xi1)
            M = cols([(av, l) for l in range(n)], -zz + x1)
            # row mu of M^{-1} contracted with K~ phi
            top = [av[i] + (i == mu) - (i == nu) for i in range(n)]
            kt = K(-zz - n * w / 2)
            vec = kt * phi(top, nu, zz + x1)
            val = mp.lu_solve(M, vec)[mu]
        return complex(val)


def trig_convergence(which: int, configs, z: complex, p: ModelParams, trig: TrigParams,
                     sector: int | None = None) -> dict:
    """Ratios ``direct/trig`` along the ``Im tau`` schedule.

    Ratios are normalized by the first configuration to remove the overall
    (configuration independent) constants.  A genuine limit gives
    normalized ratios tending to 1 for every configuration.

    Returns
    -------
    dict
        ``ratios`` (schedule x configs), ``drift`` (max change between the
        last two schedule points) and ``spread`` (max distance from 1 at
        the last point).
    """
    trig.validate(p.n)
    table = []
    for T in trig.im_tau_schedule:
        r = [direct_F_hp(which, a, mu, nu, z, p, T, trig, sector) / trig_F(which, a, mu, nu, z, p)
             for a, mu, nu in configs]
        table.append([x / r[0] for x in r])
    last, prev = table[-1], table[-2]
    drift = max(abs(x - y) for x, y in zip(last, prev))
    spread = max(abs(x - 1) for x in last)
    return {"ratios": table, "drift": drift, "spread": spread}
