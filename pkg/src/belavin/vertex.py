"""Z_n Belavin R-matrix.

Index convention (fixed package-wide): an element of C^n (x) C^n is a flat
vector with index ``i*n + j`` for the basis vector ``e_i (x) e_j``.  A matrix
``A (x) B`` is therefore ``np.kron(A, B)`` and has entries
``A[i, i'] B[j, j']`` at ``(i*n + j, i'*n + j')``.
"""

from __future__ import annotations

import cmath
import itertools
import math
from dataclasses import dataclass, field
from functools import cached_property, lru_cache

import numpy as np

from .elliptic import EllipticContext, h, sigma_alpha
from .errors import DegenerateParameter

DENOM_TOL = 1e-12


@dataclass(frozen=True)
class ZnIndex:
    """Element ``(alpha_1, alpha_2)`` of Z_n x Z_n, stored reduced."""

    alpha1: int
    alpha2: int
    n: int

    def __post_init__(self):
        object.__setattr__(self, "alpha1", self.alpha1 % self.n)
        object.__setattr__(self, "alpha2", self.alpha2 % self.n)

    @staticmethod
    def all(n: int) -> list["ZnIndex"]:
        return [ZnIndex(a1, a2, n) for a1, a2 in itertools.product(range(n), repeat=2)]


@dataclass(frozen=True)
class ModelParams:
    """Global model parameters and elliptic context.

    Parameters
    ----------
    n : int
        Order of the symmetry, ``n >= 2``.
    tau : complex
        Modulus.
    eta : complex
        Crossing parameter; ``w = n * eta`` enters the face layer.
    c : complex
        Free constant of the K-matrix.
    xi1, xi2 : complex
        Gauge shifts of the factorized L-operator.
    tail_tol : float
        Theta truncation tolerance.
    """

    n: int
    tau: complex
    eta: complex
    c: complex = 0.23 + 0.11j
    xi1: complex = 0.0
    xi2: complex = 0.0
    tail_tol: float = 1e-14
    flags: tuple = field(default=(), compare=False)

    def __post_init__(self):
        if self.n < 2:
            raise ValueError("n must be >= 2")
        for name in ("tau", "eta", "c", "xi1", "xi2"):
            object.__setattr__(self, name, complex(getattr(self, name)))

    @property
    def w(self) -> complex:
        return self.n * self.eta

    @property
    def omega(self) -> complex:
        return cmath.exp(2j * math.pi / self.n)

    @cached_property
    def ctx(self) -> EllipticContext:
        return EllipticContext(self.tau, self.tail_tol)

    def replace(self, **kw) -> "ModelParams":
        d = dict(n=self.n, tau=self.tau, eta=self.eta, c=self.c, xi1=self.xi1, xi2=self.xi2,
                 tail_tol=self.tail_tol, flags=self.flags)
        d.update(kw)
        return ModelParams(**d)


def sample_box(rng: np.random.Generator, size=None, re=(-0.5, 0.5), im=(0.1, 0.5)):
    """Complex numbers from the seeded uniform box used for generic points."""
    return rng.uniform(*re, size) + 1j * rng.uniform(*im, size)


def sample_params(n: int, rng: np.random.Generator, tau: complex = 0.2 + 1.0j,
                  eta: complex | None = None, max_tries: int = 100, **kw) -> ModelParams:
    """Draw generic ``eta`` and ``c`` and reject near-degenerate draws.

    Raises
    ------
    DegenerateParameter
        If ``max_tries`` draws all hit a small denominator.
    """
    for _ in range(max_tries):
        # the box is applied to w = n eta so that n-fold shifts stay moderate
        e = sample_box(rng) / n if eta is None else eta
        c = sample_box(rng)
        p = ModelParams(n=n, tau=tau, eta=e, c=c, **kw)
        if denominators_ok(p, 1e-8):
            return p
        if eta is not None:
            break
    raise DegenerateParameter("no generic parameters found")


def denominators_ok(p: ModelParams, tol: float) -> bool:
    ctx, n = p.ctx, p.n
    vals = [sigma_alpha(a, p.eta, ctx, n) for a in itertools.product(range(n), repeat=2)]
    vals += [sigma_alpha((2 * a[0], 2 * a[1]), p.c, ctx, n) for a in itertools.product(range(n), repeat=2)]
    vals.append(h(p.w, ctx))
    return min(abs(v) for v in vals) > tol


@lru_cache(maxsize=None)
def pauli_gh(n: int) -> tuple[np.ndarray, np.ndarray]:
    """Clock and shift matrices.

    ``g = diag(omega^i)`` and ``h_{ij} = delta_{i+1, j}`` (indices mod n),
    so that ``h g = omega g h``.
    """
    if n < 2:
        raise ValueError("n must be >= 2")
    om = cmath.exp(2j * math.pi / n)
    g = np.diag(om ** np.arange(n))
    hm = np.roll(np.eye(n, dtype=complex), 1, axis=1)
    g.setflags(write=False)
    hm.setflags(write=False)
    return g, hm


@lru_cache(maxsize=None)
def weyl(alpha1: int, alpha2: int, n: int) -> np.ndarray:
    """``I_alpha = g^{alpha_2} h^{alpha_1}`` (exponents taken mod n)."""
    g, hm = pauli_gh(n)
    m = np.linalg.matrix_power(g, alpha2 % n) @ np.linalg.matrix_power(hm, alpha1 % n)
    m.setflags(write=False)
    return m


@lru_cache(maxsize=None)
def flip(n: int) -> np.ndarray:
    """Permutation ``P (x (x) y) = y (x) x``."""
    p = np.zeros((n * n, n * n))
    for i in range(n):
        for j in range(n):
            p[i * n + j, j * n + i] = 1.0
    p.setflags(write=False)
    return p


def partial_transpose2(m: np.ndarray, n: int) -> np.ndarray:
    """Transpose on the second tensor factor."""
    return m.reshape(n, n, n, n).transpose(0, 3, 2, 1).reshape(n * n, n * n)


def partial_transpose1(m: np.ndarray, n: int) -> np.ndarray:
    """Transpose on the first tensor factor."""
    return m.reshape(n, n, n, n).transpose(2, 1, 0, 3).reshape(n * n, n * n)


@lru_cache(maxsize=None)
def _weyl_pairs(n: int) -> np.ndarray:
    """Stack of ``I_alpha (x) I_alpha^{-1}`` ordered like ``itertools.product``."""
    out = []
    for a1, a2 in itertools.product(range(n), repeat=2):
        ia = weyl(a1, a2, n)
        out.append(np.kron(ia, np.linalg.inv(ia)))
    arr = np.array(out)
    arr.setflags(write=False)
    return arr


def r_weights(z: complex, p: ModelParams) -> np.ndarray:
    """``W_alpha(z) = sigma_alpha(z + eta) / sigma_alpha(eta)`` for all alpha."""
    ctx, n = p.ctx, p.n
    out = np.empty(n * n, dtype=complex)
    for k, al in enumerate(itertools.product(range(n), repeat=2)):
        den = sigma_alpha(al, p.eta, ctx, n)
        if abs(den) < DENOM_TOL:
            raise DegenerateParameter(f"sigma_{al}(eta) = {den}")
        out[k] = sigma_alpha(al, z + p.eta, ctx, n) / den
    return out


def build_R(z: complex, p: ModelParams) -> np.ndarray:
    """Belavin R-matrix ``R(z) = (1/n) sum_alpha W_alpha(z) I_alpha (x) I_alpha^{-1}``.

    Returns
    -------
    ndarray, shape (n^2, n^2)
    """
    return np.tensordot(r_weights(z, p), _weyl_pairs(p.n), axes=1) / p.n


def build_R21(z: complex, p: ModelParams) -> np.ndarray:
    P = flip(p.n)
    return P @ build_R(z, p) @ P


def rho(z: complex, p: ModelParams) -> complex:
    """Unitarity factor ``h(z+w) h(-z+w) / h(w)^2``."""
    ctx = p.ctx
    hw = _hw(p)
    return h(z + p.w, ctx) * h(-z + p.w, ctx) / hw**2


def rho_tilde(z: complex, p: ModelParams) -> complex:
    """Crossing factor ``h(z) h(-z-nw) / h(w)^2``."""
    ctx = p.ctx
    hw = _hw(p)
    return h(z, ctx) * h(-z - p.n * p.w, ctx) / hw**2


def _hw(p: ModelParams) -> complex:
    hw = h(p.w, p.ctx)
    if abs(hw) < DENOM_TOL:
        raise DegenerateParameter("h(w) vanishes")
    return hw


def scaled_residual(lhs: np.ndarray, rhs: np.ndarray, *factors: np.ndarray) -> float:
    """``max|lhs - rhs|`` divided by the product of the factors' max-norms.

    Both sides of every relation checked here are products of the given
    factors, so this is a scale-free relative error; it is invariant under
    rescaling any factor.
    """
    scale = 1.0
    for f in factors:
        scale *= float(np.abs(f).max())
    return float(np.abs(lhs - rhs).max()) / scale


def _embed(n: int):
    """Embeddings of two-site operators into three sites."""
    e = np.eye(n)
    p23 = np.kron(e, flip(n))

    def r12(m):
        return np.kron(m, e)

    def r23(m):
        return np.kron(e, m)

    def r13(m):
        return p23 @ r12(m) @ p23

    return r12, r13, r23


def ybe_residual(z1: complex, z2: complex, z3: complex, p: ModelParams) -> float:
    """Normalized max-norm of ``R12 R13 R23 - R23 R13 R12`` at the differences of the z's."""
    r12, r13, r23 = _embed(p.n)
    a = build_R(z1 - z2, p)
    b = build_R(z1 - z3, p)
    c = build_R(z2 - z3, p)
    lhs = r12(a) @ r13(b) @ r23(c)
    rhs = r23(c) @ r13(b) @ r12(a)
    return scaled_residual(lhs, rhs, a, b, c)


def unitarity_residual(z1: complex, z2: complex, p: ModelParams) -> float:
    """Normalized max-norm of ``R12(z) R21(-z) - rho(z) Id`` with ``z = z1 - z2``."""
    z = z1 - z2
    a, b = build_R(z, p), build_R21(-z, p)
    return scaled_residual(a @ b, rho(z, p) * np.eye(p.n**2), a, b)


def crossing_residual(z1: complex, z2: complex, p: ModelParams) -> float:
    """Normalized max-norm of ``R21^{t2}(-z-nw) R12^{t2}(z) - rho~(z) Id``, ``z = z1 - z2``."""
    n = p.n
    z = z1 - z2
    a = partial_transpose2(build_R21(-z - n * p.w, p), n)
    b = partial_transpose2(build_R(z, p), n)
    return scaled_residual(a @ b, rho_tilde(z, p) * np.eye(n * n), a, b)


def zn_symmetry_residual(z: complex, p: ModelParams) -> float:
    """Max over beta of ``|(I_b (x) I_b) R (I_b (x) I_b)^{-1} - R| / |R|``."""
    n = p.n
    r = build_R(z, p)
    worst = 0.0
    for b1, b2 in itertools.product(range(n), repeat=2):
        ib = np.kron(weyl(b1, b2, n), weyl(b1, b2, n))
        worst = max(worst, scaled_residual(ib @ r @ np.linalg.inv(ib), r, r))
    return worst
