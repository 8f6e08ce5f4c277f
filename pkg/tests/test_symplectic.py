import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from coupled_strings.errors import InvalidInputError, RangeError
from coupled_strings.models import U, block_diag2, point_generator
from coupled_strings.symplectic import (J, SP2_BASIS, bracket, coords_to_matrix, expm, in_sp2,
                                        is_symplectic, sp2_project, symplectic_inverse)


def test_j_is_symplectic():
    assert is_symplectic(J)


def test_shear_is_symplectic():
    m = np.eye(4)
    m[2:, :2] = np.diag([3.0, -1.0])
    assert is_symplectic(m)


def test_diagonal_stretch_is_not_symplectic():
    assert not is_symplectic(np.diag([2.0, 1.0, 1.0, 1.0]))


def test_rejects_non_finite():
    m = np.eye(4)
    m[0, 0] = np.nan
    with pytest.raises(InvalidInputError):
        is_symplectic(m)
    with pytest.raises(InvalidInputError):
        is_symplectic(np.eye(4), tol=0)


def test_symplectic_inverse(rng):
    x = coords_to_matrix(rng.normal(size=10))
    m = expm(x)
    assert np.allclose(symplectic_inverse(m) @ m, np.eye(4), atol=1e-10)


def test_expm_zero_and_diagonal():
    assert np.array_equal(expm(np.zeros((4, 4))), np.eye(4))
    a, b = 0.7, -1.3
    out = expm(np.diag([a, b, -a, -b]))
    assert np.allclose(out, np.diag(np.exp([a, b, -a, -b])), rtol=1e-14, atol=0)


def test_expm_matches_closed_form_at_e5():
    alpha, beta = 2.0, np.sqrt(6.0)
    r = np.array([[np.cos(alpha), 0, np.sin(alpha) / alpha, 0],
                  [0, np.cos(beta), 0, np.sin(beta) / beta],
                  [-alpha * np.sin(alpha), 0, np.cos(alpha), 0],
                  [0, -beta * np.sin(beta), 0, np.cos(beta)]])
    uu = block_diag2(U)
    assert np.abs(expm(point_generator(5.0)) - uu @ r @ uu).max() <= 1e-10


@pytest.mark.parametrize("norm", [0.5, 5.0, 20.0, 50.0])
def test_expm_against_high_precision_taylor(rng, norm):
    x = rng.normal(size=(4, 4))
    x *= norm / np.linalg.norm(x, 2)
    mpmath.mp.dps = 80
    exact = np.array(mpmath.expm(mpmath.matrix(x.tolist()), method="taylor").tolist(),
                     dtype=float)
    err = np.linalg.norm(expm(x) - exact, 2) / np.linalg.norm(exact, 2)
    assert err <= 1e-12


def test_expm_range_error():
    with pytest.raises(RangeError):
        expm(np.diag([1000.0, 0, -1000.0, 0]))


def test_bracket_examples(rng):
    x, y = rng.normal(size=(2, 4, 4))
    assert np.array_equal(bracket(x, x), np.zeros((4, 4)))
    assert np.allclose(bracket(x, y), -bracket(y, x))


def test_basis_is_orthogonal_and_in_algebra():
    g = SP2_BASIS.reshape(10, 16) @ SP2_BASIS.reshape(10, 16).T
    assert np.allclose(g, np.diag(np.diag(g)))
    for b in SP2_BASIS:
        assert np.allclose(b.T @ J + J @ b, 0)


def test_project_zero_and_membership():
    c, res = sp2_project(np.zeros((4, 4)))
    assert np.array_equal(c, np.zeros(10)) and res == 0.0
    e12 = np.zeros((4, 4))
    e12[0, 1] = 1.0
    _, res = sp2_project(e12)
    # least-squares oracle in R^16 against the basis columns
    coef, *_ = np.linalg.lstsq(SP2_BASIS.reshape(10, 16).T, e12.ravel(), rcond=None)
    oracle = np.linalg.norm(e12.ravel() - SP2_BASIS.reshape(10, 16).T @ coef)
    assert res == pytest.approx(oracle, rel=1e-12)
    assert res == pytest.approx(1 / np.sqrt(2), rel=1e-12)


finite = st.floats(-10, 10, allow_nan=False)


@settings(max_examples=100, deadline=None)
@given(arrays(float, 10, elements=finite))
def test_coordinate_round_trip(c):
    back, res = sp2_project(coords_to_matrix(c))
    assert np.allclose(back, c, rtol=1e-12, atol=1e-12 * max(1, np.abs(c).max()))
    assert res <= 1e-12 * max(1, np.abs(c).max())


@settings(max_examples=100, deadline=None)
@given(arrays(float, 10, elements=finite), arrays(float, 10, elements=finite))
def test_bracket_stays_in_algebra(a, b):
    x, y = coords_to_matrix(a), coords_to_matrix(b)
    z = bracket(x, y)
    _, res = sp2_project(z)
    assert res <= 1e-9 * max(1.0, np.abs(z).max())


@settings(max_examples=60, deadline=None)
@given(arrays(float, 10, elements=st.floats(-1, 1)))
def test_exp_of_algebra_is_group(c):
    x = coords_to_matrix(c)
    x *= min(1.0, 10.0 / max(np.linalg.norm(x), 1e-300))
    g = expm(x)
    assert is_symplectic(g, 1e-9)
    assert np.allclose(g @ expm(-x), np.eye(4), atol=1e-10)
    assert in_sp2(x)
