"""Classical Hamiltonians, numeric Poisson brackets and trajectory integration.

Every Hamiltonian here factorizes as ``H = D+ D-`` with

``D+ = sum_nu e^{p_nu} f_nu(x)``,  ``D- = sum_mu e^{-p_mu} g_mu(x)``.

Kinds
-----
sinh
    ``f_nu = e^{-n pi x_nu} prod_{j != nu} 1/sinh pi(x_j - x_nu)`` and
    ``g_mu = e^{n pi x_mu} prod_{k != mu} 1/sinh pi(x_k - x_mu)``.
scaled
    The sinh kind at ``x / chi`` times ``(pi / chi)^{2n-2}``.
rational
    ``f_nu = prod_{j != nu} 1/(x_j - x_nu)``, ``g_mu = prod_{k != mu} 1/(x_k - x_mu)``
    (the ``chi -> infinity`` limit of the scaled kind).
exponential
    Leading behaviour of the sinh kind when ``x_0 >> x_1 >> ...``:
    ``1/sinh pi(x_j - x_nu)`` becomes ``2 e^{-pi(x_j - x_nu)}`` for ``j < nu``
    and ``-2 e^{-pi(x_nu - x_j)}`` for ``j > nu``.  ``signed=False`` drops the
    signs and the powers of 2.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import CollisionSingularity, StepSizeError

COLLISION_TOL = 1e-8
KINDS = ("sinh", "scaled", "rational", "exponential")
MEMBERS = ("H", "D+", "D-")


@dataclass(frozen=True)
class PhasePoint:
    """Positions ``x`` and momenta ``p`` (real n-vectors)."""

    x: np.ndarray
    p: np.ndarray

    def __post_init__(self):
        x = np.asarray(self.x, dtype=float)
        p = np.asarray(self.p, dtype=float)
        if x.shape != p.shape or x.ndim != 1:
            raise ValueError("x and p must be vectors of equal length")
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "p", p)

    @property
    def n(self) -> int:
        return len(self.x)

    def as_vector(self) -> np.ndarray:
        return np.concatenate([self.x, self.p])

    @staticmethod
    def from_vector(v: np.ndarray) -> "PhasePoint":
        k = len(v) // 2
        return PhasePoint(v[:k], v[k:])


@dataclass(frozen=True)
class ClassicalHamiltonian:
    """One member of the factorized family.

    Parameters
    ----------
    kind : {"sinh", "scaled", "rational", "exponential"}
    n : int
    member : {"H", "D+", "D-"}
    chi : float
        Scale for the ``scaled`` kind.
    signed : bool
        Keep the limit signs and factors of 2 in the ``exponential`` kind.
    """

    kind: str
    n: int
    member: str = "H"
    chi: float = 1.0
    signed: bool = True

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"kind must be one of {KINDS}")
        if self.member not in MEMBERS:
            raise ValueError(f"member must be one of {MEMBERS}")

    def with_member(self, member: str) -> "ClassicalHamiltonian":
        return ClassicalHamiltonian(self.kind, self.n, member, self.chi, self.signed)

    def _weights(self, x: np.ndarray, sign: int) -> np.ndarray:
        """``f_nu(x)`` for ``sign=+1`` and ``g_mu(x)`` for ``sign=-1``."""
        n = self.n
        kind = self.kind
        if kind == "scaled":
            x = x / self.chi
        if kind != "exponential":
            d = np.abs(x[:, None] - x[None, :]) + np.eye(n)
            if d.min() < COLLISION_TOL:
                raise CollisionSingularity(f"min |x_j - x_k| = {d.min():.3g}")
        out = np.empty(n)
        for v in range(n):
            t = 1.0
            for j in range(n):
                if j == v:
                    continue
                if kind == "rational":
                    t /= x[j] - x[v]
                elif kind == "exponential":
                    if j < v:
                        t *= math.exp(-math.pi * (x[j] - x[v]))
                    else:
                        t *= math.exp(-math.pi * (x[v] - x[j]))
                    if self.signed:
                        t *= 2.0 if j < v else -2.0
                else:
                    t /= math.sinh(math.pi * (x[j] - x[v]))
            if kind != "rational":
                t *= math.exp(-sign * n * math.pi * x[v])
            out[v] = t
        if kind == "scaled":
            out *= (math.pi / self.chi) ** (n - 1)
        return out

    def term_scale(self, pt: "PhasePoint") -> float:
        """``sum_{mu nu} |e^{p_nu - p_mu} f_nu g_mu|`` for the ``H`` member."""
        a = np.abs(np.exp(pt.p) * self._weights(pt.x, +1)).sum()
        b = np.abs(np.exp(-pt.p) * self._weights(pt.x, -1)).sum()
        return float(a * b)

    def __call__(self, x, p) -> float:
        x = np.asarray(x, dtype=float)
        p = np.asarray(p, dtype=float)
        with np.errstate(over="ignore"):
            dp = float(np.exp(p) @ self._weights(x, +1)) if self.member != "D-" else 1.0
            dm = float(np.exp(-p) @ self._weights(x, -1)) if self.member != "D+" else 1.0
        return dp * dm


def eval_H(H: ClassicalHamiltonian, pt: PhasePoint) -> float:
    """Value of ``H`` at ``pt``.

    Raises
    ------
    CollisionSingularity
        If two positions are closer than ``COLLISION_TOL`` (not for the
        exponential kind, which has no collisions).
    """
    return H(pt.x, pt.p)


def _grad(f, v: np.ndarray, h: float) -> np.ndarray:
    g = np.empty_like(v)
    for i in range(len(v)):
        e = np.zeros_like(v)
        e[i] = h
        g[i] = (f(v + e) - f(v - e)) / (2 * h)
    return g


def gradient(f, pt: PhasePoint, h_fd: float = 1e-5, check: float = 1e-4) -> np.ndarray:
    """Richardson-extrapolated central-difference gradient in ``(x, p)``.

    Raises
    ------
    StepSizeError
        If the steps ``h`` and ``h/2`` disagree by more than ``check``
        relative to the gradient norm.
    """
    n = pt.n

    def fv(v):
        return f(v[:n], v[n:])

    v = pt.as_vector()
    g1 = _grad(fv, v, h_fd)
    g2 = _grad(fv, v, h_fd / 2)
    scale = max(float(np.abs(g2).max()), np.finfo(float).tiny)
    if float(np.abs(g1 - g2).max()) / scale > check:
        raise StepSizeError("finite-difference gradient not converged")
    return (4 * g2 - g1) / 3


def poisson_bracket(f, g, pt: PhasePoint, h_fd: float = 1e-5, normalized: bool = True) -> float:
    """Canonical bracket ``sum_l (df/dp_l dg/dx_l - df/dx_l dg/dp_l)``.

    With ``normalized=True`` the value is divided by ``|grad f| |grad g|``
    so that it measures the failure of the two flows to commute.
    """
    n = pt.n
    gf = gradient(f, pt, h_fd)
    gg = gradient(g, pt, h_fd)
    val = float(gf[n:] @ gg[:n] - gf[:n] @ gg[n:])
    if normalized:
        den = float(np.linalg.norm(gf) * np.linalg.norm(gg))
        return val / den if den > 0 else val
    return val


def scaling_limit_check(chi_schedule, pt: PhasePoint) -> dict:
    """Relative gap between the scaled sinh kind and the rational kind.

    The gap is measured relative to :meth:`ClassicalHamiltonian.term_scale`.

    Returns
    -------
    dict
        ``gaps`` per chi, the same differences relative to ``|H''|``
        (``gaps_vs_value``), ``monotone`` flag and the order
        ``-d log gap / d log chi`` from the last two schedule points.
    """
    chis = list(chi_schedule)
    if chis != sorted(chis):
        raise ValueError("chi schedule must be increasing")
    n = pt.n
    rat = ClassicalHamiltonian("rational", n)
    ref = eval_H(rat, pt)
    # D+ of the rational kind vanishes at equal momenta, so the double sum
    # can cancel; the scale is the sum of the absolute values of its terms
    scale = rat.term_scale(pt)
    diffs = [abs(eval_H(ClassicalHamiltonian("scaled", n, chi=c), pt) - ref) for c in chis]
    gaps = [d / scale for d in diffs]
    order = float(-math.log(gaps[-1] / gaps[-2]) / math.log(chis[-1] / chis[-2])) if len(chis) > 1 else float("nan")
    monotone = all(b < a for a, b in zip(gaps, gaps[1:]))
    return {"chis": chis, "gaps": gaps, "gaps_vs_value": [d / abs(ref) for d in diffs],
            "order": order, "monotone": monotone}


def exponential_limit_check(s_schedule, pt: PhasePoint, spacing: float = 1.0) -> dict:
    """Compare the sinh kind with the exponential kind at ``x + s Delta``.

    ``Delta = spacing (n-1, n-2, ..., 0)`` realises the ordering
    ``x_0 >> x_1 >> ...``.  The signed exponential kind is the exact leading
    term, so its gap decays like ``exp(-2 pi s spacing)``; the unsigned form
    is reported for comparison.
    """
    n = pt.n
    delta = spacing * np.arange(n - 1, -1, -1, dtype=float)
    sinh = ClassicalHamiltonian("sinh", n)
    out = {"s": list(s_schedule), "signed": [], "unsigned": []}
    for s in s_schedule:
        q = PhasePoint(pt.x + s * delta, pt.p)
        ref = eval_H(sinh, q)
        for key, signed in (("signed", True), ("unsigned", False)):
            val = eval_H(ClassicalHamiltonian("exponential", n, signed=signed), q)
            if not signed:
                val *= 4.0 ** (n - 1)
            out[key].append(abs(ref - val) / abs(ref))
    return out


@dataclass
class Trajectory:
    """Rows ``(t, x, p, H, F2)`` of an integrated flow."""

    t: list = field(default_factory=list)
    x: list = field(default_factory=list)
    p: list = field(default_factory=list)
    H: list = field(default_factory=list)
    F2: list = field(default_factory=list)
    aborted: str | None = None

    def append(self, t, pt: PhasePoint, hv, fv):
        self.t.append(t)
        self.x.append(pt.x.copy())
        self.p.append(pt.p.copy())
        self.H.append(hv)
        self.F2.append(fv)

    def max_relative_drift(self, key: str) -> float:
        v = np.asarray(getattr(self, key))
        return float(np.abs(v - v[0]).max() / abs(v[0]))

    def write_csv(self, path) -> None:
        """Write ``t, x_0.., p_0.., H, F_2`` at 17 significant digits."""
        n = len(self.x[0]) if self.x else 0
        head = ["t"] + [f"x_{i}" for i in range(n)] + [f"p_{i}" for i in range(n)] + ["H", "F_2"]
        with open(path, "w", newline="") as fh:
            wr = csv.writer(fh)
            wr.writerow(head)
            for i in range(len(self.t)):
                row = [self.t[i], *self.x[i], *self.p[i], self.H[i], self.F2[i]]
                wr.writerow([f"{float(v):.17g}" for v in row])


def hamilton_rhs(H, pt: PhasePoint, h_fd: float = 1e-5) -> np.ndarray:
    """``(dx/dt, dp/dt) = (dH/dp, -dH/dx)`` from finite-difference gradients."""
    n = pt.n
    g = gradient(H, pt, h_fd)
    return np.concatenate([g[n:], -g[:n]])


def integrate_flow(H: ClassicalHamiltonian, pt0: PhasePoint, dt: float, steps: int,
                   second: ClassicalHamiltonian | None = None, h_fd: float = 1e-5) -> Trajectory:
    """Fixed-step classical RK4 integration of the ``H`` flow.

    ``second`` (default: the ``D+`` member of the same kind) is recorded as
    the column ``F2``.  A collision mid-flight stops the integration and
    returns the partial trajectory with ``aborted`` set.
    """
    second = second or H.with_member("D+")
    traj = Trajectory()
    pt = pt0
    traj.append(0.0, pt, eval_H(H, pt), eval_H(second, pt))
    v = pt.as_vector()

    def f(u):
        return hamilton_rhs(H, PhasePoint.from_vector(u), h_fd)

    for k in range(1, steps + 1):
        try:
            k1 = f(v)
            k2 = f(v + dt / 2 * k1)
            k3 = f(v + dt / 2 * k2)
            k4 = f(v + dt * k3)
            v = v + dt / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
            pt = PhasePoint.from_vector(v)
            hv, fv = eval_H(H, pt), eval_H(second, pt)
            if not np.all(np.isfinite(np.r_[v, hv, fv])):
                traj.aborted = "non-finite state"
                break
            traj.append(k * dt, pt, hv, fv)
        except (CollisionSingularity, StepSizeError, OverflowError, FloatingPointError) as exc:
            traj.aborted = str(exc)
            break
    return traj


def sample_phase_point(n: int, rng: np.random.Generator, min_gap: float = 0.3) -> PhasePoint:
    """Generic real phase point with positions separated by at least ``min_gap``."""
    x = np.sort(rng.uniform(-1, 1, n)) + min_gap * np.arange(n)
    p = rng.normal(scale=0.3, size=n)
    return PhasePoint(x, p)


def sign_family(n: int) -> dict:
    """Classical counterparts of the four-term split of the z-limit Hamiltonian.

    ``E_{s,f} = sum_nu e^{s p_nu + f n pi x_nu} prod_{j != nu} 1/sinh pi(x_j - x_nu)``
    with signs ``s, f`` in ``{+1, -1}``; the products ``E_{+-} E_{-+}`` (the
    sinh ``H``), ``E_{++} E_{--}``, ``E_{++} E_{-+}`` and ``E_{+-} E_{--}``
    mirror the members ``H2``, ``H3``, ``H11`` and ``H12``.
    """
    def E(s, f):
        def g(x, p):
            x = np.asarray(x, dtype=float)
            p = np.asarray(p, dtype=float)
            tot = 0.0
            for v in range(n):
                t = math.exp(s * p[v] + f * n * math.pi * x[v])
                for j in range(n):
                    if j != v:
                        t /= math.sinh(math.pi * (x[j] - x[v]))
                tot += t
            return tot
        return g

    e = {(s, f): E(s, f) for s in (1, -1) for f in (1, -1)}

    def prod(k1, k2):
        return lambda x, p: e[k1](x, p) * e[k2](x, p)

    return {"H2": prod((1, -1), (-1, 1)), "H3": prod((1, 1), (-1, -1)),
            "H11": prod((1, 1), (-1, 1)), "H12": prod((1, -1), (-1, -1))}
