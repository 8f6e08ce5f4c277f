import json

import numpy as np
import pytest

from coupled_strings.errors import BranchPointError, InvalidInputError
from coupled_strings.models import (ModelSpec, ParamDistribution, U, anderson_eigen,
                                    anderson_generator, block_diag2, free_propagator,
                                    interface_matrix, make_rng, point_generator, sample_indices,
                                    sample_params, transfer_anderson, transfer_point)
from coupled_strings.symplectic import expm, is_symplectic


def rel_err(a, b):
    return np.abs(a - b).max() / max(1.0, np.abs(b).max())


def test_interface_matrix():
    assert np.array_equal(interface_matrix(np.zeros((2, 2))), np.eye(4))
    q1 = np.array([[1.0, 2.0], [2.0, -1.0]])
    q2 = np.array([[0.5, -1.0], [-1.0, 3.0]])
    assert np.allclose(interface_matrix(q1) @ interface_matrix(q2), interface_matrix(q1 + q2))
    assert is_symplectic(interface_matrix(np.diag([3.0, -1.0])))
    with pytest.raises(InvalidInputError):
        interface_matrix(np.array([[0.0, 1.0], [0.0, 0.0]]))


@pytest.mark.parametrize("E", [5.0, 0.0, -3.0, 1.5, -0.999, 17.0])
def test_free_propagator_matches_expm(E):
    assert rel_err(transfer_point(E, (0.0, 0.0)), expm(point_generator(E))) <= 1e-10


def test_point_split_identity(rng):
    for _ in range(20):
        E = rng.uniform(-10, 10)
        w = rng.uniform(-3, 3, size=2)
        a = transfer_point(E, w)
        a0 = transfer_point(E, (0.0, 0.0))
        assert np.allclose(a @ np.linalg.inv(a0), interface_matrix(np.diag(w)), atol=1e-10)


def test_free_case_is_exact():
    assert np.array_equal(transfer_point(2.0, (0, 0)), free_propagator(2.0))


@pytest.mark.parametrize("E", [-1.0, 1.0])
def test_point_branch_points(E):
    with pytest.raises(BranchPointError):
        transfer_point(E, (0, 0))


def test_anderson_eigen_golden_values():
    e = anderson_eigen((0, 0))
    assert e.eigenvalues == pytest.approx((1.0, -1.0), abs=1e-14)
    assert np.allclose(e.s, U, atol=1e-14)
    assert anderson_eigen((1, 1)).eigenvalues == pytest.approx((2.0, 0.0), abs=1e-14)
    e10 = anderson_eigen((1, 0))
    s5 = np.sqrt(5)
    assert e10.eigenvalues == pytest.approx(((1 + s5) / 2, (1 - s5) / 2), abs=1e-14)
    s10 = np.array([[2 / np.sqrt(10 - 2 * s5), 2 / np.sqrt(10 + 2 * s5)],
                    [(-1 + s5) / np.sqrt(10 - 2 * s5), (-1 - s5) / np.sqrt(10 + 2 * s5)]])
    assert np.allclose(e10.s, s10, atol=1e-14)


def test_anderson_eigen_reconstructs(rng):
    for _ in range(50):
        w = rng.uniform(-10, 10, size=2)
        e = anderson_eigen(w)
        assert np.allclose(e.s.T @ e.s, np.eye(2), atol=1e-12)
        m = e.s @ np.diag(e.eigenvalues) @ e.s.T
        assert np.allclose(m, [[w[0], 1], [1, w[1]]], atol=1e-12 * max(1, np.abs(w).max()))
        assert e.lam1 >= e.lam2


def test_anderson_a00_closed_form():
    a1, a2 = np.sqrt(2.0), 2.0
    k = np.array([[np.cos(a1), 0, np.sin(a1) / a1, 0], [0, np.cos(a2), 0, np.sin(a2) / a2],
                  [-a1 * np.sin(a1), 0, np.cos(a1), 0], [0, -a2 * np.sin(a2), 0, np.cos(a2)]])
    r = block_diag2(U)
    assert rel_err(transfer_anderson(3.0, (0, 0)), r @ k @ r.T) <= 1e-12
    assert rel_err(transfer_anderson(3.0, (0, 0)), expm(anderson_generator(3.0, (0, 0)))) <= 1e-10


def test_anderson_matches_expm(rng):
    assert rel_err(transfer_anderson(2.5, (1, 1)), expm(anderson_generator(2.5, (1, 1)))) <= 1e-10
    for _ in range(50):
        w = rng.uniform(-5, 5, size=2)
        E = rng.uniform(-20, 20)
        m = transfer_anderson(E, w)
        assert is_symplectic(m, 1e-9)
        assert rel_err(m, expm(anderson_generator(E, w))) <= 1e-10


def test_anderson_branch_point():
    with pytest.raises(BranchPointError):
        transfer_anderson(2.0, (1, 1))


def test_two_cells_square():
    g = anderson_generator(3.7, (0.3, -1.2))
    one = transfer_anderson(3.7, (0.3, -1.2))
    assert rel_err(one @ one, expm(2 * g)) <= 1e-10


@pytest.mark.parametrize("model,branch", [("point", 1.0), ("point", -1.0),
                                          ("anderson", 2.0), ("anderson", 0.0)])
def test_continuity_across_branch(model, branch):
    build = transfer_point if model == "point" else transfer_anderson
    w = (0.0, 0.0) if model == "point" else (1.0, 1.0)
    lo, hi = build(branch - 1e-6, w), build(branch + 1e-6, w)
    assert np.abs(lo - hi).max() <= 1e-4


def test_symplectic_everywhere(rng):
    for _ in range(500):
        E = rng.uniform(-50, 50)
        w = rng.uniform(-7, 7, size=2)
        assert is_symplectic(transfer_point(E, w), 1e-9)
        assert is_symplectic(transfer_anderson(E, w), 1e-9)


def test_distribution_validation():
    with pytest.raises(InvalidInputError):
        ParamDistribution((), ())
    with pytest.raises(InvalidInputError):
        ParamDistribution(((0, 0), (1, 1)), (0.5, 0.6))
    d = ParamDistribution.from_dict({"atoms": [[0, 0], [1, 0], [0, 1]]})
    assert d.weights == pytest.approx((1 / 3,) * 3)
    assert d.differences_span_plane()
    assert not ParamDistribution.uniform([(0, 0), (1, 1), (2, 2)]).differences_span_plane()
    again = ParamDistribution.from_json(json.dumps(d.to_dict()))
    assert again == d


def test_sampling_single_and_degenerate():
    rng = make_rng(3)
    single = ParamDistribution.point_mass((0.5, -2.0))
    assert all(sample_params(single, rng) == (0.5, -2.0) for _ in range(100))
    first = ParamDistribution(((1.0, 2.0), (3.0, 4.0)), (1.0, 0.0))
    assert all(sample_params(first, rng) == (1.0, 2.0) for _ in range(1000))


def test_sampling_frequencies():
    dist = ParamDistribution.uniform([(0, 0), (0, 1), (1, 0), (1, 1)])
    n = 10**6
    counts = np.bincount(sample_indices(dist, make_rng(11), n), minlength=4)
    sigma = np.sqrt(n * 0.25 * 0.75)
    assert np.all(np.abs(counts - n / 4) <= 4 * sigma)


def test_sampling_deterministic_and_streams_differ():
    dist = ParamDistribution.uniform([(0, 0), (1, 1)])
    a = sample_indices(dist, make_rng(5, 0, 0), 100)
    b = sample_indices(dist, make_rng(5, 0, 0), 100)
    c = sample_indices(dist, make_rng(5, 1, 0), 100)
    assert np.array_equal(a, b)
    assert not np.array_equal(a, c)


def test_model_spec_branch_points():
    spec = ModelSpec("anderson", ParamDistribution.uniform([(0, 0), (1, 1)]))
    assert spec.branch_points() == pytest.approx((-1.0, 0.0, 1.0, 2.0))
    assert ModelSpec("point").branch_points() == (-1.0, 1.0)
