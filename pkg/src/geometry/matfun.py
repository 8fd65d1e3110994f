#!/usr/bin/env python3
"""
Dense matrix-function kernel for GrassMean.

Everything the geodesic formulas need: Hermitian and unitary
eigendecompositions, the principal logarithm and fractional powers of a
unitary, and the exponential of a skew-Hermitian matrix.

Spectral work is always done in complex arithmetic. When the input is real
the result is checked to be real (imaginary residue at most
IMAG_RESIDUE_TOL) and returned as a real array.
"""

import logging
from dataclasses import dataclass
from enum import Enum

import numpy as np
from scipy import linalg

from src.geometry.errors import (
    ComplexResidue,
    NegativeEigenvalue,
    NotHermitian,
    NotSkew,
    NotUnitary,
    ShapeMismatch,
)

logger = logging.getLogger(__name__)

DEFAULT_CUT_TOL = 1e-6
HERMITIAN_TOL = 1e-10
UNITARY_TOL = 1e-10
IMAG_RESIDUE_TOL = 1e-10
# Below this distance of a phase from pi the residue tolerance grows as 1/gap
PHASE_GAP_REF = 1e-3


class Field(Enum):
    """Scalar field of a matrix"""

    REAL = "real"
    COMPLEX = "complex"

    @classmethod
    def of(cls, mat):
        return cls.REAL if np.isrealobj(mat) else cls.COMPLEX

    @property
    def dtype(self):
        return np.float64 if self is Field.REAL else np.complex128


@dataclass(frozen=True, eq=False)
class UnitarySpectrum:
    """Eigen-phases and orthonormal eigenvectors of a unitary matrix

    phases are in (-pi, pi]; U = V diag(exp(i*phases)) V*.
    """

    phases: np.ndarray
    vectors: np.ndarray

    def reconstruct(self):
        return (self.vectors * np.exp(1j * self.phases)) @ self.vectors.conj().T

    def max_abs_phase(self):
        return float(np.max(np.abs(self.phases))) if self.phases.size else 0.0


def adjoint(mat):
    return np.conj(mat).T


def frobenius_inner(a, b):
    """Real part of tr(A* B)"""
    a = np.asarray(a)
    b = np.asarray(b)
    if a.shape != b.shape:
        raise ShapeMismatch(f"shapes {a.shape} and {b.shape} differ")
    return float(np.real(np.vdot(a, b)))


def frobenius_norm(a):
    return float(np.linalg.norm(np.asarray(a), "fro"))


def _square(mat, what):
    mat = np.asarray(mat)
    if mat.ndim != 2 or mat.shape[0] != mat.shape[1] or mat.shape[0] == 0:
        raise ShapeMismatch(f"{what} must be a non-empty square matrix, got shape {mat.shape}")
    return mat


def _realify(mat, like, gap=np.pi):
    """Drop the imaginary part when the reference input was real

    gap is the distance of the largest phase from pi; the logarithm of a
    real rotation is ill-conditioned there and the residue scales with 1/gap.
    """
    if not np.isrealobj(like):
        return mat
    residue = float(np.max(np.abs(mat.imag))) if mat.size else 0.0
    allowed = IMAG_RESIDUE_TOL * max(1.0, PHASE_GAP_REF / gap)
    if residue > allowed:
        raise ComplexResidue(f"imaginary residue {residue:.3e} for a real input (allowed {allowed:.1e})")
    return np.ascontiguousarray(mat.real)


def hermitian_eigen(mat, tol=HERMITIAN_TOL):
    """Eigendecomposition of a Hermitian matrix

    Args:
        mat: Hermitian (or real symmetric) matrix
        tol (float): Relative tolerance on ||M - M*||_F

    Returns:
        tuple: (ascending eigenvalues, unitary eigenvector matrix)
    """
    mat = _square(mat, "Hermitian input")
    scale = frobenius_norm(mat)
    asym = frobenius_norm(mat - adjoint(mat))
    if asym > tol * scale:
        raise NotHermitian(f"||M - M*||_F = {asym:.3e} exceeds {tol:.1e} * ||M||_F")
    values, vectors = linalg.eigh((mat + adjoint(mat)) / 2)
    return values, vectors


def check_unitary(mat, tol=UNITARY_TOL):
    mat = _square(mat, "unitary input")
    defect = frobenius_norm(adjoint(mat) @ mat - np.eye(mat.shape[0]))
    if defect > tol:
        raise NotUnitary(f"||U*U - I||_F = {defect:.3e} exceeds {tol:.1e}")
    return mat


def unitary_eigen(mat, tol=UNITARY_TOL):
    """Spectrum of a unitary matrix via the complex Schur form

    A normal matrix has a diagonal Schur factor, so the Schur vectors are
    eigenvectors and the diagonal carries the eigenvalues.
    """
    mat = check_unitary(mat, tol)
    schur_form, vectors = linalg.schur(mat.astype(np.complex128), output="complex")
    phases = np.angle(np.diag(schur_form))
    # angle() maps -1 - 0j to -pi; the half-open range is (-pi, pi]
    phases = np.where(phases <= -np.pi, phases + 2 * np.pi, phases)
    return UnitarySpectrum(phases=phases, vectors=vectors)


def _safe_spectrum(mat, cut_tol, tol):
    spectrum = unitary_eigen(mat, tol)
    if spectrum.phases.size:
        worst = int(np.argmax(np.abs(spectrum.phases)))
        phase = spectrum.phases[worst]
        if abs(phase) >= np.pi - cut_tol:
            raise NegativeEigenvalue(phase)
    return spectrum


def principal_log_unitary(mat, cut_tol=DEFAULT_CUT_TOL, tol=UNITARY_TOL):
    """Principal logarithm of a unitary matrix

    Returns the skew-Hermitian S = V diag(i*theta) V* with e^S = U. Raises
    NegativeEigenvalue when a phase is within cut_tol of +-pi.
    """
    spectrum = _safe_spectrum(mat, cut_tol, tol)
    vectors = spectrum.vectors
    log = (vectors * (1j * spectrum.phases)) @ adjoint(vectors)
    log = (log - adjoint(log)) / 2
    return _realify(log, mat, np.pi - spectrum.max_abs_phase())


def unitary_fractional_power(mat, t, cut_tol=DEFAULT_CUT_TOL, tol=UNITARY_TOL):
    """U^t := exp(t log U) with the principal logarithm"""
    spectrum = _safe_spectrum(mat, cut_tol, tol)
    vectors = spectrum.vectors
    power = (vectors * np.exp(1j * t * spectrum.phases)) @ adjoint(vectors)
    return _realify(power, mat, np.pi - spectrum.max_abs_phase())


def _check_skew(mat):
    mat = _square(mat, "skew input")
    defect = frobenius_norm(mat + adjoint(mat))
    if defect > 1e-10 * (1 + frobenius_norm(mat)):
        raise NotSkew(f"||S + S*||_F = {defect:.3e}")
    return mat


def expm_skew(mat):
    """Exponential of a skew-Hermitian matrix (a unitary)"""
    return linalg.expm(_check_skew(mat))


class SkewFlow:
    """t -> e^{tS} for a fixed skew-Hermitian S

    S = i H with H Hermitian; one eigendecomposition of H serves every t.
    """

    def __init__(self, mat):
        self.generator = _check_skew(mat)
        self.frequencies, self.vectors = hermitian_eigen(-1j * self.generator, tol=np.inf)

    def __call__(self, t):
        flow = (self.vectors * np.exp(1j * t * self.frequencies)) @ adjoint(self.vectors)
        return _realify(flow, self.generator)
