import itertools

import numpy as np
import pytest

from belavin.elliptic import h
from belavin.errors import SingularIntertwiner
from belavin.face import (VARIANTS, FaceWeightTable, WeightVector, _inverse, appendix_identity_residual,
                          bar_matrix_inverse, biorthogonality_residuals, det_formula_check, face_weight,
                          face_vertex_residual, intertwiner_phi, sample_delta, step_between,
                          tilde_matrix_inverse, unit)

from conftest import params, points, weights


def test_weight_vector_abar_sums_to_delta():
    a = WeightVector((1, 2, -4), (0.1, 0.2, 0.3))
    assert abs(a.abar.sum() - 0.6) < 1e-15
    assert a.plus(1).a == (1, 3, -4)
    assert step_between(a, a.plus(2)) == 2
    assert step_between(a, a.plus(2, 2)) is None


@pytest.mark.parametrize("n", [2, 3, 4])
def test_biorthogonality(n, rng):
    p = params(n)
    for a in weights(n, rng):
        z = points(rng, 1)[0]
        res = biorthogonality_residuals(a, z, p)
        assert max(res.values()) < 1e-10, res


def test_dual_rows_brute(rng):
    n = 3
    p = params(n)
    a = weights(n, rng, 1)[0]
    z = 0.1 + 0.2j
    it = tilde_matrix_inverse(a, z, p)
    ib = bar_matrix_inverse(a, z, p)
    for mu, nu in itertools.product(range(n), repeat=2):
        d = 1.0 if mu == nu else 0.0
        assert abs(it[mu] @ intertwiner_phi(a.plus(nu, -1), nu, z, p) - d) < 1e-10
        assert abs(ib[mu] @ intertwiner_phi(a, nu, z, p) - d) < 1e-10


def test_singular_matrix_detected():
    with pytest.raises(SingularIntertwiner):
        _inverse(np.array([[1.0, 1.0], [1.0, 1.0 + 1e-14]]))


def test_face_weight_cases():
    n = 3
    p = params(n)
    a = WeightVector((0, 0, 0), sample_delta(n, np.random.default_rng(1)))
    z = 0.21 + 0.13j
    table = FaceWeightTable(p)
    ab, w, ctx = a.abar, p.w, p.ctx
    assert abs(table.case1(a, 0, z) - h(z + w, ctx) / h(w, ctx)) < 1e-14
    x = ab[2] - ab[1]
    assert abs(table.case2(a, 1, 2, z) - h(z - x * w, ctx) / h(-x * w, ctx)) < 1e-13
    x = ab[1] - ab[2]
    expected = h(z, ctx) * h((x + 1) * w, ctx) / (h(w, ctx) * h(x * w, ctx))
    assert abs(table.case3(a, 1, 2, z) - expected) < 1e-13


def test_non_admissible_faces_vanish():
    n = 3
    p = params(n)
    a = WeightVector((0, 0, 0), (0.1, 0.2, 0.3))
    # d two steps in different directions than both b and c allow
    assert face_weight(a.plus(0, -2), a.plus(1, -1), a.plus(1, -1), a, 0.1, p) == 0.0
    assert face_weight(a, a, a, a, 0.1, p) == 0.0


@pytest.mark.parametrize("n", [2, 3])
@pytest.mark.parametrize("variant", VARIANTS)
def test_face_vertex_relations(n, variant, rng):
    p = params(n)
    for a in weights(n, rng, 2):
        z1, z2 = points(rng, 2)
        for mu, nu in itertools.product(range(n), repeat=2):
            assert face_vertex_residual(variant, a, mu, nu, z1, z2, p) < 1e-10


def test_face_vertex_negative_control(rng):
    # swapping the case-2 sign breaks the basic relation
    from belavin import face
    p = params(3)
    a = weights(3, rng, 1)[0]
    z1, z2 = points(rng, 2)
    orig = face.face_weight

    def wrong(d, b, c, aa, z, pp):
        t, s, u = step_between(b, aa), step_between(c, aa), step_between(d, b)
        if t is not None and s == t and u is not None and u != t:
            x = aa.abar[u] - aa.abar[t]
            return face._h_ratio(z + x * pp.w, x * pp.w, pp)
        return orig(d, b, c, aa, z, pp)

    face.face_weight = wrong
    try:
        worst = max(face_vertex_residual(17, a, mu, nu, z1, z2, p) for mu in range(3) for nu in range(3))
    finally:
        face.face_weight = orig
    assert worst > 1e-3


@pytest.mark.parametrize("n", [2, 3, 4])
def test_det_formula(n, rng):
    p = params(n)
    ref = points(rng, n)
    for _ in range(3):
        assert det_formula_check(points(rng, n), ref, p) < 1e-10


def test_det_formula_brute_n2():
    # n = 2: det [[t0(2z1), t0(2z2)], [t1(2z1), t1(2z2)]] up to a constant
    p = params(2)
    from belavin.elliptic import theta_j

    def d(z1, z2):
        return (theta_j(0, 2 * z1, p.ctx, 2) * theta_j(1, 2 * z2, p.ctx, 2)
                - theta_j(0, 2 * z2, p.ctx, 2) * theta_j(1, 2 * z1, p.ctx, 2))

    def prod(z1, z2):
        return h(z1 + z2 - 0.5, p.ctx) * h(z1 - z2, p.ctx)

    a, b = (0.1 + 0.2j, -0.2 + 0.1j), (0.3 + 0.15j, 0.05 + 0.3j)
    assert abs(d(*a) / d(*b) - prod(*a) / prod(*b)) < 1e-12


@pytest.mark.parametrize("n", [3, 5])
def test_appendix_identity_odd_n(n, rng):
    p = params(n)
    a = weights(n, rng, 1)[0]
    worst = 0.0
    for alpha, beta in itertools.product(range(n), repeat=2):
        z = points(rng, 1)[0]
        for mu in range(n):
            worst = max(worst, appendix_identity_residual(alpha, beta, a, mu, z, p))
    assert worst < 1e-9


def test_appendix_identity_fails_for_even_n(rng):
    p = params(2)
    a = weights(2, rng, 1)[0]
    assert appendix_identity_residual(1, 1, a, 0, 0.1 + 0.2j, p) > 1e-3


def test_unit_vector():
    assert unit(1, 3) == (0, 1, 0)
    assert unit(2, 3, -2) == (0, 0, -2)
