#!/usr/bin/env python3
"""
Tests for the matrix-function kernel: logarithms, fractional powers and
exponentials of unitaries.
"""

import logging
import os
import sys

import numpy as np
import pytest
from hypothesis import given
from hypothesis.strategies import floats

# Add the project root to the Python path
project_root = os.path.abspath(os.path.join(os.path.dirname(__file__), ".."))
sys.path.insert(0, project_root)

from src.geometry.errors import NegativeEigenvalue, NotHermitian, NotSkew, NotUnitary, ShapeMismatch
from src.geometry.matfun import (
    Field,
    expm_skew,
    frobenius_inner,
    hermitian_eigen,
    principal_log_unitary,
    unitary_eigen,
    unitary_fractional_power,
)
from src.geometry.sampling import random_unitary

logger = logging.getLogger(__name__)


def rotation(theta):
    return np.array([[np.cos(theta), -np.sin(theta)], [np.sin(theta), np.cos(theta)]])


def test_log_of_quarter_turn():
    log = principal_log_unitary(rotation(np.pi / 2))
    assert np.isrealobj(log)
    np.testing.assert_allclose(log, [[0, -np.pi / 2], [np.pi / 2, 0]], atol=1e-12)


@given(floats(min_value=-np.pi + 1e-3, max_value=np.pi - 1e-3))
def test_log_recovers_rotation_angle(theta):
    log = principal_log_unitary(rotation(theta))
    np.testing.assert_allclose(log, [[0, -theta], [theta, 0]], atol=1e-10)


def test_minus_identity_is_on_the_branch_cut():
    with pytest.raises(NegativeEigenvalue) as info:
        principal_log_unitary(-np.eye(2))
    assert abs(abs(info.value.phase) - np.pi) < 1e-12


def test_cut_tolerance_boundary():
    with pytest.raises(NegativeEigenvalue):
        principal_log_unitary(rotation(np.pi - 1e-7))
    log = principal_log_unitary(rotation(np.pi - 1e-5))
    assert abs(log[1, 0] - (np.pi - 1e-5)) < 1e-9


def test_exp_inverts_log_for_complex_unitaries():
    rng = np.random.default_rng(7)
    for _ in range(20):
        u = random_unitary(4, Field.COMPLEX, rng)
        try:
            log = principal_log_unitary(u)
        except NegativeEigenvalue:
            continue
        np.testing.assert_allclose(log + log.conj().T, 0, atol=1e-12)
        np.testing.assert_allclose(expm_skew(log), u, atol=1e-10)


def test_square_of_half_power():
    u = rotation(2.0)
    half = unitary_fractional_power(u, 0.5)
    np.testing.assert_allclose(half @ half, u, atol=1e-12)
    np.testing.assert_allclose(half, rotation(1.0), atol=1e-12)


def test_phases_lie_in_half_open_interval():
    spectrum = unitary_eigen(np.diag([1j, -1j, 1.0]))
    assert np.all(spectrum.phases > -np.pi)
    assert np.all(spectrum.phases <= np.pi)
    np.testing.assert_allclose(spectrum.reconstruct(), np.diag([1j, -1j, 1.0]), atol=1e-12)


def test_input_validation():
    with pytest.raises(NotHermitian):
        hermitian_eigen(np.array([[1.0, 2.0], [0.0, 1.0]]))
    with pytest.raises(NotUnitary):
        unitary_eigen(2 * np.eye(2))
    with pytest.raises(NotSkew):
        expm_skew(np.eye(2))
    with pytest.raises(ShapeMismatch):
        frobenius_inner(np.eye(2), np.eye(3))
    with pytest.raises(ShapeMismatch):
        principal_log_unitary(np.ones((2, 3)))


def test_field_detection():
    assert Field.of(np.eye(2)) is Field.REAL
    assert Field.of(np.eye(2, dtype=complex)) is Field.COMPLEX
    assert Field.COMPLEX.dtype == np.complex128


def block_rotation(rng, angles):
    """Real orthogonal W diag(R(angles), 1) W^T of size 2 len(angles) + 1"""
    n = 2 * len(angles) + 1
    block = np.eye(n)
    for i, theta in enumerate(angles):
        block[2 * i:2 * i + 2, 2 * i:2 * i + 2] = rotation(theta)
    w = random_unitary(n, Field.REAL, rng)
    return w @ block @ w.T


@pytest.mark.parametrize("gap", [2e-6, 1e-5, 1e-4])
def test_real_log_just_outside_the_cut_stays_real(gap):
    rng = np.random.default_rng(17)
    u = block_rotation(rng, [np.pi - gap, 0.7])
    log = principal_log_unitary(u)
    assert np.isrealobj(log)
    np.testing.assert_allclose(expm_skew(log), u, atol=1e-8)
    phases = np.sort(np.abs(np.linalg.eigvals(log).imag))
    assert phases[-1] == pytest.approx(np.pi - gap, abs=1e-9)
    assert np.isrealobj(unitary_fractional_power(u, 0.5))


def test_real_log_inside_the_cut_tolerance_raises():
    u = block_rotation(np.random.default_rng(17), [np.pi - 1e-7, 0.7])
    with pytest.raises(NegativeEigenvalue):
        principal_log_unitary(u)


def test_log_of_inverse_is_negated():
    rng = np.random.default_rng(23)
    for field in Field:
        for _ in range(10):
            u = random_unitary(4, field, rng)
            try:
                log = principal_log_unitary(u)
            except NegativeEigenvalue:
                continue
            np.testing.assert_allclose(principal_log_unitary(u.conj().T), -log, atol=1e-10)


def test_fractional_powers_compose():
    rng = np.random.default_rng(29)
    checked = 0
    while checked < 10:
        u = random_unitary(4, Field.COMPLEX, rng)
        # keep |s + t| * max|phase| inside (-pi, pi) so the powers share one branch
        if np.max(np.abs(unitary_eigen(u).phases)) > 2.5:
            continue
        s, t = rng.uniform(0.1, 0.6, size=2)
        np.testing.assert_allclose(
            unitary_fractional_power(u, s + t),
            unitary_fractional_power(u, s) @ unitary_fractional_power(u, t),
            atol=1e-10,
        )
        checked += 1


def test_cube_of_third_power_recovers_the_unitary():
    rng = np.random.default_rng(31)
    for field in Field:
        for _ in range(10):
            u = random_unitary(5, field, rng)
            try:
                third = unitary_fractional_power(u, 1 / 3)
            except NegativeEigenvalue:
                continue
            np.testing.assert_allclose(third @ third @ third, u, atol=1e-10)


@pytest.mark.parametrize("field", list(Field))
def test_hermitian_eigen_reconstructs_random_matrices(field):
    rng = np.random.default_rng(37)
    for n in (1, 3, 6):
        g = rng.standard_normal((n, n))
        if field is Field.COMPLEX:
            g = g + 1j * rng.standard_normal((n, n))
        h = (g + g.conj().T) / 2
        values, vectors = hermitian_eigen(h)
        assert np.all(np.diff(values) >= 0)
        np.testing.assert_allclose(vectors.conj().T @ vectors, np.eye(n), atol=1e-12)
        np.testing.assert_allclose((vectors * values) @ vectors.conj().T, h, atol=1e-12)


def test_phases_of_a_diagonal_unitary():
    u = np.diag([np.exp(0.3j), np.exp(-1.1j)])
    assert sorted(unitary_eigen(u).phases) == pytest.approx([-1.1, 0.3], abs=1e-12)
    np.testing.assert_allclose(principal_log_unitary(u), np.diag([0.3j, -1.1j]), atol=1e-12)
