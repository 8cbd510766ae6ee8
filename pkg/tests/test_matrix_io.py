import json

import numpy as np
import pytest

from geofid import ensembles as ens
from geofid.errors import NotHermitianError
from geofid.matrix_io import load_matrix, matrix_from_dict, matrix_to_dict, save_matrix


def test_round_trip(tmp_path):
    rho = ens.random_density(3, seed=0)
    path = tmp_path / "rho.json"
    save_matrix(path, rho)
    np.testing.assert_array_equal(load_matrix(path), rho)


def test_real_only_record():
    M = matrix_from_dict({"dim": 2, "re": [[0.5, 0], [0, 0.5]]})
    np.testing.assert_array_equal(M, np.eye(2) / 2)
    assert matrix_to_dict(M)["im"] == [[0.0, 0.0], [0.0, 0.0]]


@pytest.mark.parametrize(
    "record",
    [
        {"dim": 2, "re": [[1, 0], [0]]},
        {"dim": 3, "re": [[1, 0], [0, 1]]},
        {"re": [[1]]},
        {"dim": 2, "re": [[1, 1], [0, 1]]},
        {"dim": 2, "re": [[1, 0], [0, 1]], "im": [[0, 1], [1, 0]]},
    ],
)
def test_rejects_bad_records(record):
    with pytest.raises(NotHermitianError):
        matrix_from_dict(record)


def test_bad_json(tmp_path):
    path = tmp_path / "x.json"
    path.write_text("{not json")
    with pytest.raises(NotHermitianError):
        load_matrix(path)
    path.write_text(json.dumps([1, 2]))
    with pytest.raises(NotHermitianError):
        load_matrix(path)
