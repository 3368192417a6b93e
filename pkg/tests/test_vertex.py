import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from belavin.elliptic import sigma_alpha
from belavin.errors import DegenerateParameter
from belavin.vertex import (ModelParams, ZnIndex, build_R, crossing_residual, flip, pauli_gh,
                            partial_transpose1, partial_transpose2, sample_params, scaled_residual,
                            unitarity_residual, weyl, ybe_residual, zn_symmetry_residual)

from conftest import params, points


def brute_R(z, p):
    """Entry-by-entry double loop over (i, j, k, l) and alpha."""
    n = p.n
    om = np.exp(2j * np.pi / n)
    out = np.zeros((n * n, n * n), dtype=complex)
    for a1, a2 in itertools.product(range(n), repeat=2):
        W = sigma_alpha((a1, a2), z + p.eta, p.ctx, n) / sigma_alpha((a1, a2), p.eta, p.ctx, n)
        # I_alpha e_k = omega^{a2 (k - a1)} e_{k - a1}
        I = np.zeros((n, n), dtype=complex)
        for k in range(n):
            I[(k - a1) % n, k] = om ** (a2 * ((k - a1) % n))
        Iinv = np.linalg.inv(I)
        for i, j, k, l in itertools.product(range(n), repeat=4):
            out[i * n + j, k * n + l] += W * I[i, k] * Iinv[j, l] / n
    return out


def test_clock_shift_relation():
    for n in (2, 3, 4):
        g, h = pauli_gh(n)
        om = np.exp(2j * np.pi / n)
        assert np.allclose(h @ g, om * g @ h)
        assert np.allclose(np.linalg.matrix_power(h, n), np.eye(n))


@pytest.mark.parametrize("n", [2, 3])
def test_R_matches_brute(n):
    p = params(n)
    for z in (0.1 + 0.2j, -0.3 + 0.05j):
        assert np.abs(build_R(z, p) - brute_R(z, p)).max() < 1e-12


@pytest.mark.parametrize("n", [2, 3, 4])
def test_R0_is_permutation(n):
    assert np.abs(build_R(0.0, params(n)) - flip(n)).max() < 1e-12


@pytest.mark.parametrize("n", [2, 3, 4])
def test_ybe_unitarity_crossing(n, rng):
    p = params(n)
    for _ in range(5):
        assert ybe_residual(*points(rng, 3), p) < 1e-12
        assert unitarity_residual(*points(rng, 2), p) < 1e-12
        assert crossing_residual(*points(rng, 2), p) < 1e-12


def test_zn_symmetry():
    assert zn_symmetry_residual(0.2 + 0.1j, params(3)) < 1e-12


def test_negative_control_ybe_with_wrong_argument(rng):
    p = params(3)
    from belavin.vertex import _embed
    r12, r13, r23 = _embed(3)
    z1, z2, z3 = points(rng, 3)
    a, b, c = build_R(z1 - z2, p), build_R(z1 + z3, p), build_R(z2 - z3, p)
    assert scaled_residual(r12(a) @ r13(b) @ r23(c), r23(c) @ r13(b) @ r12(a), a, b, c) > 1e-3


def test_partial_transposes():
    n = 3
    A, B = np.arange(9.0).reshape(3, 3), np.arange(9.0).reshape(3, 3) ** 2 + 1j
    m = np.kron(A, B)
    assert np.allclose(partial_transpose2(m, n), np.kron(A, B.T))
    assert np.allclose(partial_transpose1(m, n), np.kron(A.T, B))


def test_scaled_residual_invariant_under_rescaling(rng):
    p = params(3)
    z1, z2 = points(rng, 2)
    a = build_R(z1 - z2, p)
    b = build_R(z2 - z1, p)
    lhs, rhs = a @ b, b @ a + 1e-3
    r1 = scaled_residual(lhs, rhs, a, b)
    r2 = scaled_residual(7 * lhs, 7 * rhs, 7 * a, b)
    assert abs(r1 - r2) < 1e-15 * max(1, r1) + 1e-15


def test_zn_index_reduces():
    assert ZnIndex(5, -1, 3) == ZnIndex(2, 2, 3)
    assert len(ZnIndex.all(4)) == 16


def test_weyl_is_unitary():
    for a1, a2 in itertools.product(range(3), repeat=2):
        w = weyl(a1, a2, 3)
        assert np.allclose(w @ w.conj().T, np.eye(3))


def test_degenerate_eta_raises():
    with pytest.raises(DegenerateParameter):
        sample_params(3, np.random.default_rng(0), eta=0.0)


def test_n_below_two_rejected():
    with pytest.raises(ValueError):
        ModelParams(n=1, tau=1j, eta=0.1)


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 10_000))
def test_ybe_property(seed):
    rng = np.random.default_rng(seed)
    p = sample_params(2, rng)
    assert ybe_residual(*points(rng, 3), p) < 1e-11
