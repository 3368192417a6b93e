import itertools

import numpy as np
import pytest

from belavin import diffop as D
from belavin.boundary import build_K
from belavin.face import WeightVector, intertwiner_phi, tilde_matrix_inverse

from conftest import params, points, weights


def F_test(a: WeightVector):
    x = np.dot([0.3, -0.7, 0.11][: a.n], a.a)
    return np.exp(1j * x) + 0.2 * x


def test_gamma_shift_action():
    n = 3
    a = WeightVector((0, 1, 2), (0.1, 0.2, 0.3))
    g = D.gamma(1, n)
    assert g.apply(F_test, a) == F_test(a.plus(1))


def test_compose_matches_sequential_application():
    n = 3
    a = WeightVector((1, -1, 0), (0.1, 0.2, 0.3))
    A = D.DifferenceOperator({(1, 0, 0): lambda b: b.a[1] + 2.0, (0, 0, -1): lambda b: 1j * b.a[0]}, n)
    B = D.DifferenceOperator({(0, 1, 0): lambda b: b.a[2] - 0.5, (0, 0, 0): lambda b: 3.0}, n)
    AB = D.compose(A, B)
    # brute: (A (B F))(a)
    BF = lambda b: B.apply(F_test, b)  # noqa: E731
    assert abs(AB.apply(F_test, a) - A.apply(BF, a)) < 1e-14


def test_compose_associative(rng):
    n = 2
    mk = lambda s: D.DifferenceOperator(  # noqa: E731
        {(1, 0): lambda b: s + b.a[0], (0, -1): lambda b: s * 1j - b.a[1]}, n)
    A, B, C = mk(1.0), mk(2.0), mk(-0.5)
    samples = [WeightVector((i, j), (0.1, 0.4)) for i, j in [(0, 0), (1, -2), (3, 1)]]
    ok, res = D.op_equal_on_samples(D.compose(D.compose(A, B), C), D.compose(A, D.compose(B, C)), samples, 1e-12)
    assert ok, res


def test_commutator_of_shifts_vanishes():
    n = 3
    samples = [WeightVector((0, 0, 0), (0.1, 0.2, 0.3))]
    ok, _ = D.op_equal_on_samples(D.commutator(D.gamma(0, n), D.gamma(2, n)), D.identity_operator(n, 0.0),
                                  samples, 1e-15)
    assert ok


def test_non_commuting_multiplication():
    n = 2
    m = D.multiplication(lambda b: float(b.a[0]), n)
    c = D.commutator(D.gamma(0, n), m)
    a = WeightVector((2, 0), (0.1, 0.2))
    # [Gamma_0, a_0] = Gamma_0
    assert abs(c.coeff((1, 0), a) - 1.0) < 1e-15


@pytest.mark.parametrize("n", [2, 3])
def test_L_times_Linv(n, rng):
    p = params(n)
    ws = weights(n, rng, 4)
    z = points(rng, 1)[0]
    eye = D.identity_operator(n, np.eye(n))
    assert D.op_equal_on_samples(D.compose(D.build_L(z, p), D.build_Linv(z, p)), eye, ws, 1e-10)[0]
    assert D.op_equal_on_samples(D.compose(D.build_Linv(z, p), D.build_L(z, p)), eye, ws, 1e-10)[0]


@pytest.mark.parametrize("n", [2, 3])
def test_operator_ybr(n, rng):
    p = params(n)
    z1, z2 = points(rng, 2)
    assert D.lyb_residual(z1, z2, p, weights(n, rng, 3)) < 1e-10


def test_ybr_negative_control(rng):
    p = params(3)
    z1, z2 = points(rng, 2)
    ws = weights(3, rng, 2)
    from belavin.vertex import build_R
    L1 = D.build_L(z1, p).lift(0, 3)
    L2 = D.build_L(z2, p).lift(1, 3)
    R = build_R(z2 - z1, p)
    lhs = D.compose(L1, L2).left_mul(R)
    rhs = D.compose(L2, L1).right_mul(R)
    assert D.op_equal_on_samples(lhs, rhs, ws, 1e-6, normalized=True)[1] > 1e-3


def test_F1_against_cramer_rule_with_identity_K(rng):
    # with K = Id, F1 is a ratio of determinants (Cramer's rule)
    n = 3
    p = params(n)
    a = weights(n, rng, 1)[0]
    z = 0.13 + 0.21j
    for mu, nu in itertools.product(range(n), repeat=2):
        b = a.plus(mu)
        M = np.array([intertwiner_phi(b.plus(l, -1), l, z, p) for l in range(n)]).T
        v = intertwiner_phi(a, mu, -z, p)
        Mn = M.copy()
        Mn[:, nu] = v
        cramer = np.linalg.det(Mn) / np.linalg.det(M)
        ours = D.build_F1_direct(a, mu, nu, z, p, K=np.eye(n))
        assert abs(ours - cramer) < 1e-10 * max(1, abs(cramer))


@pytest.mark.parametrize("n", [2, 3])
def test_closed_forms_match_direct(n, rng):
    p = params(n)
    a = weights(n, rng, 1)[0]
    z = points(rng, 1)[0]
    const = n if n % 2 else n * n
    for mu, nu in itertools.product(range(n), repeat=2):
        r1 = D.build_F1_direct(a, mu, nu, z, p) / D.closed_form_F1(a, mu, nu, z, p)
        r2 = D.build_F2_direct(a, mu, nu, z, p) / D.closed_form_F2(a, mu, nu, z, p)
        assert abs(r1 - const) < 1e-8 * const
        assert abs(r2 - const) < 1e-8 * const


def test_closed_form_other_sign_differs(rng):
    p = params(3)
    a = weights(3, rng, 1)[0]
    z = points(rng, 1)[0]
    r = [D.build_F1_direct(a, mu, nu, z, p) / D.closed_form_F1(a, mu, nu, z, p, gamma_sign=+1)
         for mu in range(3) for nu in range(3)]
    assert np.ptp(np.abs(r)) > 1e-3


@pytest.mark.parametrize("n", [2, 3])
def test_transfer_paths_agree(n, rng):
    p = params(n)
    ws = weights(n, rng, 2)
    z = points(rng, 1)[0]
    ok, res = D.op_equal_on_samples(D.transfer_t(z, p, "trace"), D.transfer_t(z, p, "G"), ws, 1e-9, normalized=True)
    assert ok, res


@pytest.mark.parametrize("n", [2, 3])
def test_transfer_operators_commute(n, rng):
    p = params(n)
    ws = weights(n, rng, 5)
    z1, z2 = points(rng, 2)
    assert D.commutation_residual(z1, z2, p, ws) < 1e-8
    assert D.action_commutation_residual(z1, z2, p, ws, rng) < 1e-8


def test_commutation_negative_control(rng):
    # replacing K by the identity (not a solution for n = 3) breaks commutativity
    n = 3
    p = params(n)
    ws = weights(n, rng, 3)
    z1, z2 = points(rng, 2)

    def tb(z):
        L = D.build_L(z, p).right_mul(build_K(z, p))
        return D.compose(L, D.build_Linv(-z, p)).trace()

    assert D.commutation_residual(z1, z2, p, ws, t_builder=tb) > 1e-4


def test_F_uses_phi_tilde_rows(rng):
    n = 2
    p = params(n)
    a = weights(n, rng, 1)[0]
    z = 0.1 + 0.1j
    row = tilde_matrix_inverse(a.plus(0), z, p)[1]
    expected = row @ build_K(z, p) @ intertwiner_phi(a, 0, -z, p)
    assert abs(D.build_F1_direct(a, 0, 1, z, p) - expected) < 1e-12 * max(1, abs(expected))
