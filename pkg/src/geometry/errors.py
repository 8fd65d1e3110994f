#!/usr/bin/env python3
"""
Exception hierarchy for GrassMean.

Library code raises these; the command line maps them to exit codes.
"""


class GrassmannError(Exception):
    """Base class for every error raised by the geometry and experiment layers"""


class NotHermitian(GrassmannError):
    pass


class NotUnitary(GrassmannError):
    pass


class NotSkew(GrassmannError):
    pass


class ShapeMismatch(GrassmannError):
    pass


class ComplexResidue(GrassmannError):
    """A real input produced a result with a non-negligible imaginary part"""


class NegativeEigenvalue(GrassmannError):
    """A unitary has an eigenvalue on (or numerically at) the branch cut -1

    Args:
        phase (float): The offending eigenvalue phase in radians
    """

    def __init__(self, phase, message=None):
        self.phase = float(phase)
        super().__init__(message or f"eigenvalue phase {self.phase:.12g} is on the branch cut")


class CutLocus(NegativeEigenvalue):
    """Two points are (numerically) conjugate: some principal angle is pi/2"""


class NotAProjector(GrassmannError):
    pass


class DimensionMismatch(GrassmannError):
    pass


class RankMismatch(GrassmannError):
    pass


class NotTangent(GrassmannError):
    pass


class DegenerateVertex(GrassmannError):
    pass


class ParameterError(GrassmannError, ValueError):
    pass


class BadRank(ParameterError):
    pass


class MatrixFileError(GrassmannError):
    pass


class GoldenMismatch(GrassmannError):
    """A golden case check failed"""

    def __init__(self, case, quantity, expected, computed):
        self.case = case
        self.quantity = quantity
        self.expected = expected
        self.computed = computed
        super().__init__(f"{case}: {quantity} expected {expected}, computed {computed}")


class NotFound(GrassmannError):
    pass
