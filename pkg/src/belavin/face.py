"""Intertwiners, dual intertwiners and face weights.

A face configuration is written as the 2x2 array of corners

    [[d, b],
     [c, a]]

with ``a - b`` and ``a - c`` unit vectors and ``d`` two steps below ``a``.
Intertwiners ``phi_{a, a+mu}`` connect a weight ``a`` with ``a + e_mu``.
"""

from __future__ import annotations

import cmath
import itertools
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .boundary import build_K0
from .elliptic import h, theta_j
from .errors import DegenerateParameter, SingularIntertwiner
from .vertex import DENOM_TOL, ModelParams, build_R, pauli_gh

COND_MAX = 1e10


@dataclass(frozen=True)
class WeightVector:
    """Dynamical variable ``a`` in Z^n with generic shifts ``delta``.

    Parameters
    ----------
    a : tuple of int
    delta : tuple of complex
        Fixed per run.
    """

    a: tuple
    delta: tuple

    def __post_init__(self):
        object.__setattr__(self, "a", tuple(int(x) for x in self.a))
        object.__setattr__(self, "delta", tuple(complex(x) for x in self.delta))
        if len(self.a) != len(self.delta):
            raise ValueError("a and delta must have the same length")

    @property
    def n(self) -> int:
        return len(self.a)

    @property
    def abar(self) -> np.ndarray:
        """``abar_mu = a_mu - (1/n) sum_nu a_nu + delta_mu``."""
        a = np.array(self.a, dtype=float)
        return a - a.sum() / self.n + np.array(self.delta)

    def shift(self, m) -> "WeightVector":
        return WeightVector(tuple(x + int(y) for x, y in zip(self.a, m)), self.delta)

    def plus(self, mu: int, k: int = 1) -> "WeightVector":
        """``a + k e_mu``."""
        return self.shift(unit(mu, self.n, k))


def unit(mu: int, n: int, k: int = 1) -> tuple:
    return tuple(k if i == mu else 0 for i in range(n))


def step_between(lo: WeightVector, hi: WeightVector) -> int | None:
    """Index mu with ``hi = lo + e_mu``, or None."""
    d = [y - x for x, y in zip(lo.a, hi.a)]
    if sorted(d) == [0] * (len(d) - 1) + [1]:
        return d.index(1)
    return None


def sample_delta(n: int, rng: np.random.Generator, real: bool = False, min_gap: float = 1e-3,
                 max_tries: int = 100) -> tuple:
    """Generic shifts with pairwise separated values.

    Complex values come from the generic box; ``real=True`` gives real
    values with spacing at least ``min_gap`` (used by the trigonometric
    layer).
    """
    for _ in range(max_tries):
        if real:
            d = np.sort(rng.uniform(0, 1, n))
        else:
            d = rng.uniform(-0.5, 0.5, n) + 1j * rng.uniform(0.1, 0.5, n)
        gaps = [_lattice_dist(d[i] - d[j]) for i in range(n) for j in range(i + 1, n)]
        if min(gaps, default=1.0) >= min_gap:
            return tuple(complex(x) for x in d)
    raise DegenerateParameter("no separated delta found")


def _lattice_dist(x: complex) -> float:
    # distance to the nearest integer, which is where face weights blow up
    return abs(x - round(x.real))


@lru_cache(maxsize=1 << 18)
def _phi(a: tuple, delta: tuple, mu: int, z: complex, p: ModelParams) -> np.ndarray:
    n = p.n
    ab = WeightVector(a, delta).abar
    x = z - n * p.w * ab[mu]
    v = np.array([theta_j(j, x, p.ctx, n) for j in range(n)])
    v.setflags(write=False)
    return v


def intertwiner_phi(a: WeightVector, mu: int, z: complex, p: ModelParams) -> np.ndarray:
    """Intertwiner ``phi_{a, a+mu}(z)``.

    Component ``j`` is ``theta^(j)(z - n w abar_mu, n tau)``.
    """
    return _phi(a.a, a.delta, int(mu), complex(z), p)


def _inverse(m: np.ndarray) -> np.ndarray:
    """Inverse via row and column equilibration and LU with partial pivoting.

    Columns are theta values at shifted arguments whose magnitudes differ by
    large Gaussian factors, so both scalings are needed before the
    condition number means anything.
    """
    rs = np.abs(m).max(axis=1)
    if not np.all(rs > 0):
        raise SingularIntertwiner("zero row in intertwiner matrix")
    ms = m / rs[:, None]
    cs = np.abs(ms).max(axis=0)
    if not np.all(cs > 0):
        raise SingularIntertwiner("zero column in intertwiner matrix")
    ms = ms / cs[None, :]
    cond = np.linalg.cond(ms)
    if not cond < COND_MAX:
        raise SingularIntertwiner(f"condition number {cond:.3g}")
    # m = diag(rs) ms diag(cs)  =>  m^{-1} = diag(1/cs) ms^{-1} diag(1/rs)
    return np.linalg.solve(ms, np.eye(len(m))) / cs[:, None] / rs[None, :]


@lru_cache(maxsize=1 << 16)
def _inv_tilde(a: tuple, delta: tuple, z: complex, p: ModelParams) -> np.ndarray:
    wv = WeightVector(a, delta)
    cols = [intertwiner_phi(wv.plus(lam, -1), lam, z, p) for lam in range(p.n)]
    out = _inverse(np.array(cols).T)
    out.setflags(write=False)
    return out


@lru_cache(maxsize=1 << 16)
def _inv_bar(a: tuple, delta: tuple, z: complex, p: ModelParams) -> np.ndarray:
    wv = WeightVector(a, delta)
    cols = [intertwiner_phi(wv, lam, z, p) for lam in range(p.n)]
    out = _inverse(np.array(cols).T)
    out.setflags(write=False)
    return out


def tilde_matrix_inverse(a: WeightVector, z: complex, p: ModelParams) -> np.ndarray:
    """Rows ``phi~_{a-mu, a}(z)`` stacked over mu."""
    return _inv_tilde(a.a, a.delta, complex(z), p)


def bar_matrix_inverse(a: WeightVector, z: complex, p: ModelParams) -> np.ndarray:
    """Rows ``phi-_{a, a+mu}(z)`` stacked over mu."""
    return _inv_bar(a.a, a.delta, complex(z), p)


def dual_phi_tilde(a: WeightVector, mu: int, z: complex, p: ModelParams) -> np.ndarray:
    """Row vector ``phi~_{a-mu, a}(z)`` with ``phi~_{a-mu,a} phi_{a-nu,a} = delta_{mu nu}``.

    Raises
    ------
    SingularIntertwiner
        If the column matrix has condition number above ``COND_MAX``.
    """
    return tilde_matrix_inverse(a, z, p)[mu]


def dual_phi_bar(a: WeightVector, mu: int, z: complex, p: ModelParams) -> np.ndarray:
    """Row vector ``phi-_{a, a+mu}(z)`` with ``phi-_{a,a+mu} phi_{a,a+nu} = delta_{mu nu}``."""
    return bar_matrix_inverse(a, z, p)[mu]


def biorthogonality_residuals(a: WeightVector, z: complex, p: ModelParams) -> dict:
    """Contraction and completeness residuals for both dual families.

    Each entry of ``A B - I`` is divided by the norms of the row of ``A``
    and the column of ``B`` it comes from, which makes the residual
    independent of the very different magnitudes of the theta columns.
    """
    n = p.n
    mt = np.array([intertwiner_phi(a.plus(l, -1), l, z, p) for l in range(n)]).T
    mb = np.array([intertwiner_phi(a, l, z, p) for l in range(n)]).T
    it = tilde_matrix_inverse(a, z, p)
    ib = bar_matrix_inverse(a, z, p)
    return {
        "tilde_contraction": _product_residual(it, mt),
        "tilde_completeness": _product_residual(mt, it),
        "bar_contraction": _product_residual(ib, mb),
        "bar_completeness": _product_residual(mb, ib),
    }


def _product_residual(A: np.ndarray, B: np.ndarray) -> float:
    """``max |(A B - I)_ij| / (|A_i.| |B_.j|)``, the natural scale of each entry."""
    E = A @ B - np.eye(len(A))
    scale = np.outer(np.linalg.norm(A, axis=1), np.linalg.norm(B, axis=0))
    return float((np.abs(E) / scale).max())


# --- face weights -----------------------------------------------------------

def _h_ratio(num: complex, den: complex, p: ModelParams) -> complex:
    d = h(den, p.ctx)
    if abs(d) < DENOM_TOL:
        raise DegenerateParameter(f"h({den}) vanishes")
    return h(num, p.ctx) / d


def face_weight(d: WeightVector, b: WeightVector, c: WeightVector, a: WeightVector,
                z: complex, p: ModelParams) -> complex:
    """Boltzmann weight of the face ``[[d, b], [c, a]]``.

    With ``b = a - e_t``, ``c = a - e_s`` and ``abar`` taken at ``a``:

    * ``d = a - 2 e_t``, ``s = t``: ``h(z + w) / h(w)``
    * ``d = a - e_t - e_u``, ``s = t``: ``h(z - a_{ut} w) / h(-a_{ut} w)``
    * ``d = a - e_t - e_u``, ``s = u``: ``h(z) h((a_{st} + 1) w) / (h(w) h(a_{st} w))``

    where ``a_{mu nu} = abar_mu - abar_nu``.  Every other configuration
    has weight 0.
    """
    t = step_between(b, a)
    s = step_between(c, a)
    if t is None or s is None:
        return 0.0
    tb = step_between(d, b)
    sc = step_between(d, c)
    if tb is None or sc is None:
        return 0.0
    w = p.w
    ab = a.abar
    if tb == t:
        return _h_ratio(z + w, w, p) if s == t else 0.0
    u = tb
    if s == t:
        x = ab[u] - ab[t]
        return _h_ratio(z - x * w, -x * w, p)
    if s == u:
        x = ab[s] - ab[t]
        return h(z, p.ctx) * _h_ratio((x + 1) * w, x * w, p) / h(w, p.ctx)
    return 0.0


class FaceWeightTable:
    """The three non-trivial weight cases indexed by ``(a, mu, nu, z)``.

    ``case1(a, mu, z)`` is ``W[[a-2mu, a-mu], [a-mu, a]]``,
    ``case2(a, mu, nu, z)`` is ``W[[a-mu-nu, a-mu], [a-mu, a]]`` and
    ``case3(a, mu, nu, z)`` is ``W[[a-mu-nu, a-nu], [a-mu, a]]``.
    """

    def __init__(self, p: ModelParams):
        self.p = p

    def case1(self, a: WeightVector, mu: int, z: complex) -> complex:
        return face_weight(a.plus(mu, -2), a.plus(mu, -1), a.plus(mu, -1), a, z, self.p)

    def case2(self, a: WeightVector, mu: int, nu: int, z: complex) -> complex:
        d = a.plus(mu, -1).plus(nu, -1)
        return face_weight(d, a.plus(mu, -1), a.plus(mu, -1), a, z, self.p)

    def case3(self, a: WeightVector, mu: int, nu: int, z: complex) -> complex:
        d = a.plus(mu, -1).plus(nu, -1)
        return face_weight(d, a.plus(nu, -1), a.plus(mu, -1), a, z, self.p)


# --- face-vertex correspondence ---------------------------------------------

def _variant_sides(variant: int, a: WeightVector, mu: int, nu: int, z1: complex, z2: complex,
                   p: ModelParams):
    n = p.n
    z = z1 - z2
    R = build_R(z, p)
    R4 = R.reshape(n, n, n, n)  # [i, j, i', j']
    phi = lambda b, l, x: intertwiner_phi(b, l, x, p)  # noqa: E731
    phit = lambda b, l, x: dual_phi_tilde(b, l, x, p)  # noqa: E731
    phib = lambda b, l, x: dual_phi_bar(b, l, x, p)  # noqa: E731
    W = lambda d, b, c, aa: face_weight(d, b, c, aa, z, p)  # noqa: E731
    am, an = a.plus(mu, -1), a.plus(nu, -1)
    rhs = np.zeros((n, n), dtype=complex)
    if variant == 17:
        d = am.plus(nu, -1)
        lhs = (R @ np.kron(phi(d, nu, z1), phi(am, mu, z2))).reshape(n, n)
        for k in range(n):
            ak = a.plus(k, -1)
            wt = W(d, am, ak, a)
            if wt != 0:
                rhs += wt * np.outer(phi(ak, k, z1), phi(d, step_between(d, ak), z2))
    elif variant == 24:
        lhs = np.einsum("i,ijkl,l->kj", phit(a, mu, z1), R4, phi(an, nu, z2))
        for k in range(n):
            d = am.plus(k, -1)
            wt = W(d, an, am, a)
            if wt != 0:
                rhs += wt * np.outer(phit(an, step_between(d, an), z1), phi(d, k, z2))
    elif variant == 25:
        lhs = np.einsum("j,ijkl,k->il", phib(a, mu, z2), R4, phi(a, nu, z1))
        ap = a.plus(mu)
        for k in range(n):
            top = ap.plus(k)
            wt = W(a, a.plus(nu), ap, top)
            if wt != 0:
                rhs += wt * np.outer(phi(ap, k, z1), phib(a.plus(nu), step_between(a.plus(nu), top), z2))
    elif variant == 26:
        d = am.plus(nu, -1)
        lhs = np.einsum("i,j,ijkl->kl", phit(a, mu, z1), phit(am, nu, z2), R4)
        for k in range(n):
            ak = a.plus(k, -1)
            wt = W(d, ak, am, a)
            if wt != 0:
                rhs += wt * np.outer(phit(ak, step_between(d, ak), z1), phit(a, k, z2))
    elif variant == 27:
        ap = a.plus(mu)
        top = ap.plus(nu)
        lhs = np.einsum("i,j,ijkl->kl", phib(ap, nu, z1), phib(a, mu, z2), R4)
        for k in range(n):
            wt = W(a, a.plus(k), ap, top)
            if wt != 0:
                rhs += wt * np.outer(phib(a, k, z1), phib(a.plus(k), step_between(a.plus(k), top), z2))
    else:
        raise ValueError("variant must be one of 17, 24, 25, 26, 27")
    return lhs, rhs


VARIANTS = (17, 24, 25, 26, 27)


def face_vertex_residual(variant: int, a: WeightVector, mu: int, nu: int, z1: complex, z2: complex,
                         p: ModelParams) -> float:
    """Relative max-norm residual of one face-vertex relation.

    ``variant`` selects the relation: 17 is the basic correspondence
    ``R phi phi = sum W phi phi``; 24 to 27 are the forms with one or two
    dual intertwiners.  Variants 1..5 are accepted as aliases in that
    order.
    """
    if variant in (1, 2, 3, 4, 5):
        variant = VARIANTS[variant - 1]
    lhs, rhs = _variant_sides(variant, a, mu, nu, z1, z2, p)
    scale = max(float(np.abs(lhs).max()), float(np.abs(rhs).max()), 1e-300)
    return float(np.abs(lhs - rhs).max()) / scale


# --- determinant formula and appendix identity -------------------------------

def theta_matrix(zs, p: ModelParams) -> np.ndarray:
    """``A_ij = theta^(i)(n z_j, n tau)``."""
    n = p.n
    return np.array([[theta_j(i, n * zj, p.ctx, n) for zj in zs] for i in range(n)])


def det_product(zs, p: ModelParams) -> complex:
    """``h(sum z - (n-1)/2) prod_{i<k} h(z_i - z_k)``."""
    n = p.n
    out = h(sum(zs) - (n - 1) / 2, p.ctx)
    for i, k in itertools.combinations(range(n), 2):
        out *= h(zs[i] - zs[k], p.ctx)
    return out


def det_formula_check(zs, zs_ref, p: ModelParams) -> float:
    """Relative residual of ``det A(Z)/det A(Z') = prod(Z)/prod(Z')``.

    The unknown constant in front of the product eliminates in the ratio.
    """
    d_ref = np.linalg.det(theta_matrix(zs_ref, p))
    if abs(d_ref) < 1e-12:
        raise DegenerateParameter("reference determinant vanishes")
    lhs = np.linalg.det(theta_matrix(zs, p)) / d_ref
    rhs = det_product(zs, p) / det_product(zs_ref, p)
    return abs(lhs - rhs) / max(abs(rhs), 1e-300)


def appendix_identity_residual(alpha: int, beta: int, a: WeightVector, mu: int, z: complex,
                               p: ModelParams) -> float:
    """Relative residual of the shift identity for ``K0(0)`` acting on intertwiners.

    ``g^{beta-1} h^alpha K0(0) phi_{a,a+mu}(z)
      = n (-1)^{beta-1} e^{2 i pi (alpha/n)(alpha tau/2 + z - n w abar_mu + 1/2)}
        phi_{a,a+mu}(-z + 2 n w abar_mu - alpha tau - beta)``
    """
    n = p.n
    g, hm = pauli_gh(n)
    ab = a.abar[mu]
    nwa = n * p.w * ab
    lhs = (np.linalg.matrix_power(g, (beta - 1) % n) @ np.linalg.matrix_power(hm, alpha % n)
           @ build_K0(0.0, p) @ intertwiner_phi(a, mu, z, p))
    pref = n * (-1) ** ((beta - 1) % 2) * cmath.exp(
        2j * math.pi * alpha / n * (alpha * p.tau / 2 + z - nwa + 0.5))
    rhs = pref * intertwiner_phi(a, mu, -z + 2 * nwa - alpha * p.tau - beta, p)
    return float(np.abs(lhs - rhs).max() / max(np.abs(rhs).max(), 1e-300))
