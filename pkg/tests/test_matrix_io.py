#!/usr/bin/env python3
"""
Tests for the matrix file format.
"""

import json
import logging
import os
import sys

import numpy as np
import pytest

# Add the project root to the Python path
project_root = os.path.abspath(os.path.join(os.path.dirname(__file__), ".."))
sys.path.insert(0, project_root)

from src.geometry.errors import MatrixFileError
from src.geometry.matfun import Field
from src.geometry.sampling import random_projector
from src.utils.matrix_io import load_matrix, matrix_from_dict, read_projector, write_matrix

logger = logging.getLogger(__name__)


@pytest.mark.parametrize("field", list(Field))
def test_write_then_read_is_exact(tmp_path, field):
    point = random_projector(5, 2, field, 17)
    path = str(tmp_path / "p.json")
    write_matrix(path, point)
    assert np.array_equal(load_matrix(path), point.mat)
    assert read_projector(path).k == 2


def test_complex_entries_are_pairs():
    mat = matrix_from_dict({"field": "complex", "n": 2, "data": [[[1, 0], [0, 1]], [[0, -1], 0]]})
    assert mat.dtype == np.complex128
    assert mat[0, 1] == 1j and mat[1, 1] == 0


@pytest.mark.parametrize("doc", [
    {"field": "quaternion", "n": 1, "data": [[1.0]]},
    {"field": "real", "n": 2, "data": [[1.0, 0.0]]},
    {"field": "real", "n": 3, "data": [[1.0, 0.0], [0.0, 0.0]]},
    {"field": "real", "data": []},
    {"field": "complex", "n": 1, "data": [[[1.0, 0.0, 2.0]]]},
    {"field": "real", "n": 1, "data": [["x"]]},
])
def test_malformed_documents(doc):
    with pytest.raises(MatrixFileError):
        matrix_from_dict(doc)


def test_read_projector_reports_the_file(tmp_path):
    path = tmp_path / "half.json"
    path.write_text(json.dumps({"field": "real", "n": 2, "data": [[0.5, 0.0], [0.0, 0.5]]}))
    with pytest.raises(MatrixFileError) as info:
        read_projector(str(path))
    assert "half.json" in str(info.value)


def test_four_decimal_inputs_pass_the_file_tolerance(tmp_path):
    path = tmp_path / "b1.json"
    path.write_text(json.dumps({"field": "real", "n": 2, "data": [[0.9414, 0.2348], [0.2348, 0.0586]]}))
    point = read_projector(str(path))
    assert point.k == 1
    with pytest.raises(MatrixFileError):
        read_projector(str(path), tol=1e-8)


def test_invalid_json(tmp_path):
    path = tmp_path / "broken.json"
    path.write_text("[1, 2")
    with pytest.raises(MatrixFileError):
        load_matrix(str(path))
