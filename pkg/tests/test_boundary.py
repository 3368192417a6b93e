import numpy as np
import pytest

from belavin.boundary import build_K, build_K0, build_Ktilde, dual_re_residual, re_residual

from conftest import params, points


@pytest.mark.parametrize("n", [2, 3, 4])
def test_reflection_equation(n, rng):
    p = params(n)
    for _ in range(3):
        z1, z2 = points(rng, 2)
        assert re_residual(z1, z2, p) < 1e-11
        assert dual_re_residual(z1, z2, p) < 1e-11


@pytest.mark.parametrize("n", [2, 3])
def test_printed_forms_fail(n, rng):
    p = params(n)
    z1, z2 = points(rng, 2)
    assert re_residual(z1, z2, p, form="printed") > 1e-3
    assert dual_re_residual(z1, z2, p, form="printed") > 1e-3


def test_identity_K_negative_control(rng):
    p = params(3)
    z1, z2 = points(rng, 2)
    ident = lambda z: np.eye(3)  # noqa: E731
    assert re_residual(z1, z2, p, K=ident) > 1e-3
    assert dual_re_residual(z1, z2, p, Kt=ident) > 1e-3


def test_scalar_multiple_of_K_is_equivalent(rng):
    p = params(3)
    z1, z2 = points(rng, 2)
    a = re_residual(z1, z2, p)
    b = re_residual(z1, z2, p, K=lambda z: 3.7 * build_K(z, p))
    assert a < 1e-11 and b < 1e-11


def test_K0_at_zero_for_odd_n_is_n_times_permutation():
    n = 3
    k = build_K0(0.0, params(n))
    J = np.zeros((n, n))
    for i in range(n):
        J[i, (-i) % n] = 1
    assert np.abs(k - n * J).max() < 1e-12


def test_K0_at_zero_for_n2_is_multiple_of_identity():
    assert np.abs(build_K0(0.0, params(2)) - 4 * np.eye(2)).max() < 1e-12


def test_Ktilde_definition():
    p = params(3)
    z = 0.2 + 0.1j
    assert np.allclose(build_Ktilde(z, p), build_K(-z - 3 * p.w / 2, p))


def test_unknown_form_rejected():
    with pytest.raises(ValueError):
        re_residual(0.1, 0.2, params(2), form="other")
