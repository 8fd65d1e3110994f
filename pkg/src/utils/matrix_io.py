#!/usr/bin/env python3
"""
Matrix file reader/writer.

On-disk schema (JSON):
    {"field": "real" | "complex", "n": 2, "data": [[...], [...]]}
Rows are row-major; complex entries are [re, im] pairs. Floats are written
with their shortest round-trip representation, so write-then-read is exact.
"""
import json
import logging
import os

import numpy as np

from src.geometry.errors import GrassmannError, MatrixFileError
from src.geometry.grassmann import validate_projector
from src.geometry.matfun import Field

logger = logging.getLogger(__name__)

FILE_TOL = 1e-3


def matrix_from_dict(doc):
    """Parse a matrix document into a numpy array"""
    if not isinstance(doc, dict):
        raise MatrixFileError("matrix document must be a JSON object")
    try:
        field = Field(doc.get("field", "real"))
    except ValueError:
        raise MatrixFileError(f"unknown field {doc.get('field')!r}")
    rows = doc.get("data")
    if not isinstance(rows, list) or not rows:
        raise MatrixFileError("'data' must be a non-empty list of rows")

    try:
        if field is Field.COMPLEX:
            mat = np.array([[_complex_entry(e) for e in row] for row in rows], dtype=np.complex128)
        else:
            mat = np.array(rows, dtype=np.float64)
    except (TypeError, ValueError) as e:
        raise MatrixFileError(f"malformed matrix entries: {e}")

    if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
        raise MatrixFileError(f"matrix must be square, got shape {mat.shape}")
    n = doc.get("n", mat.shape[0])
    if n != mat.shape[0]:
        raise MatrixFileError(f"declared n = {n} but data is {mat.shape[0]} x {mat.shape[1]}")
    return mat


def _complex_entry(entry):
    if isinstance(entry, (list, tuple)):
        if len(entry) != 2:
            raise ValueError(f"complex entry must be [re, im], got {entry}")
        return complex(float(entry[0]), float(entry[1]))
    return complex(float(entry), 0.0)


def matrix_to_dict(mat):
    mat = np.asarray(mat)
    if np.isrealobj(mat):
        data = [[float(x) for x in row] for row in mat]
        field = Field.REAL
    else:
        data = [[[float(x.real), float(x.imag)] for x in row] for row in mat]
        field = Field.COMPLEX
    return {"field": field.value, "n": int(mat.shape[0]), "data": data}


def load_matrix(path):
    if not os.path.exists(path):
        raise MatrixFileError(f"matrix file not found: {path}")
    try:
        with open(path, "r") as f:
            doc = json.load(f)
    except json.JSONDecodeError as e:
        raise MatrixFileError(f"{path}: invalid JSON ({e})")
    return matrix_from_dict(doc)


def read_projector(path, tol=FILE_TOL):
    """Load a matrix file and validate it as a projector

    Validation failures are re-raised as MatrixFileError naming the file.
    """
    mat = load_matrix(path)
    try:
        point = validate_projector(mat, tol=tol)
    except GrassmannError as e:
        raise MatrixFileError(f"{path}: {e}")
    logger.debug(f"Read {point} from {path}")
    return point


def write_matrix(path, mat):
    """Write a matrix (or a ProjectorPoint) as a matrix file"""
    mat = getattr(mat, "mat", mat)
    directory = os.path.dirname(path)
    if directory:
        os.makedirs(directory, exist_ok=True)
    with open(path, "w") as f:
        json.dump(matrix_to_dict(mat), f, indent=2)
        f.write("\n")
    logger.debug(f"Wrote matrix to {path}")
