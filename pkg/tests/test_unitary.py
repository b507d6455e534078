import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from mubsearch.linalg import MatrixError
from mubsearch.unitary import (exp_i, hermitian_to_params, log_unitary,
                               params_to_hermitian, unitarity_defect)

from conftest import random_hermitian, random_unitary

SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)


def test_params_to_hermitian_examples():
    assert np.array_equal(params_to_hermitian(np.zeros(4), 2), np.zeros((2, 2)))
    assert np.array_equal(params_to_hermitian([1, 2, 3, 4], 2),
                          np.array([[1, 3 + 4j], [3 - 4j, 2]]))


def test_params_to_hermitian_d3_layout():
    h = params_to_hermitian(np.arange(9.0), 3)
    # diagonal, then pairs (0,1), (0,2), (1,2)
    assert np.array_equal(np.diag(h), [0, 1, 2])
    assert h[0, 1] == 3 + 4j and h[0, 2] == 5 + 6j and h[1, 2] == 7 + 8j


def test_hermitian_to_params_examples():
    assert np.array_equal(hermitian_to_params(np.zeros((2, 2))), np.zeros(4))
    assert np.array_equal(
        hermitian_to_params(np.array([[1, 3 + 4j], [3 - 4j, 2]])), [1, 2, 3, 4])


def test_wrong_segment_length():
    with pytest.raises(MatrixError):
        params_to_hermitian(np.zeros(5), 2)


def test_hermitian_to_params_rejects_non_hermitian():
    with pytest.raises(MatrixError):
        hermitian_to_params(np.array([[0, 1], [0, 0]], dtype=complex))


@settings(max_examples=200, deadline=None)
@given(st.integers(1, 7).flatmap(
    lambda d: arrays(np.float64, d * d,
                     elements=st.floats(-1e6, 1e6, allow_nan=False))))
def test_param_round_trip_is_exact(segment):
    d = int(round(np.sqrt(segment.size)))
    h = params_to_hermitian(segment, d)
    assert np.array_equal(hermitian_to_params(h), segment)
    assert np.array_equal(params_to_hermitian(hermitian_to_params(h), d), h)


def test_hermitian_round_trip(rng):
    for d in range(1, 8):
        h = random_hermitian(rng, d)
        assert np.array_equal(params_to_hermitian(hermitian_to_params(h), d), h)


def test_exp_i_examples():
    assert np.allclose(exp_i(np.zeros((3, 3))), np.eye(3), atol=0)
    assert np.max(np.abs(exp_i(np.pi / 2 * SIGMA_X) - 1j * SIGMA_X)) <= 1e-15


def test_exp_i_inverse(rng):
    h = random_hermitian(rng, 5)
    assert np.max(np.abs(exp_i(h) @ exp_i(-h) - np.eye(5))) <= 1e-12


def test_exp_i_matches_scipy(rng):
    from scipy.linalg import expm
    h = random_hermitian(rng, 6)
    assert np.max(np.abs(exp_i(h) - expm(1j * h))) <= 1e-12


@settings(max_examples=100, deadline=None)
@given(st.integers(1, 6).flatmap(
    lambda d: arrays(np.float64, d * d, elements=st.floats(-50, 50))))
def test_exp_i_of_params_is_unitary(segment):
    d = int(round(np.sqrt(segment.size)))
    assert unitarity_defect(exp_i(params_to_hermitian(segment, d))) <= 1e-12


def test_log_examples():
    assert np.allclose(log_unitary(np.eye(3)), 0, atol=1e-15)
    assert np.allclose(log_unitary(np.diag([1j, 1])), np.diag([np.pi / 2, 0]), atol=1e-15)


def test_log_branch_is_half_open():
    h = log_unitary(np.diag([-1.0 + 0j, 1.0]))
    assert np.allclose(np.diag(h).real, [np.pi, 0.0], atol=1e-15)
    w = np.linalg.eigvalsh(log_unitary(np.diag(np.exp(1j * np.array([-np.pi, 3.0, -3.0])))))
    assert np.all(w > -np.pi) and np.all(w <= np.pi)


@pytest.mark.parametrize("d", [1, 2, 3, 5, 8])
def test_log_exp_round_trip(rng, d):
    for _ in range(20):
        u = random_unitary(rng, d)
        h = log_unitary(u)
        assert np.max(np.abs(h - h.conj().T)) <= 1e-14
        assert np.max(np.abs(exp_i(h) - u)) <= 1e-10


def test_log_degenerate_conjugate_phases(rng):
    # eigenphases +a and -a share a cosine; the sine block separates them
    v = random_unitary(rng, 4)
    u = (v * np.exp(1j * np.array([0.7, -0.7, 0.7, 2.0]))) @ v.conj().T
    assert np.max(np.abs(exp_i(log_unitary(u)) - u)) <= 1e-10


def test_log_rejects_non_unitary():
    with pytest.raises(MatrixError):
        log_unitary(np.diag([2.0, 1.0]))
