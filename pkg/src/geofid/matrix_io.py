"""JSON matrix files: ``{"dim": n, "re": [[...]], "im": [[...]]}``.

``im`` may be omitted for real matrices. Loading rejects ill-shaped or
non-Hermitian data (asymmetry above ``1e-9``) with :class:`NotHermitianError`.
"""

import json

import numpy as np

from .errors import NotHermitianError
from .linalg import as_hermitian


def matrix_to_dict(M):
    M = np.asarray(M, dtype=np.complex128)
    return {"dim": int(M.shape[0]), "re": M.real.tolist(), "im": M.imag.tolist()}


def matrix_from_dict(d):
    try:
        n = int(d["dim"])
        re = np.asarray(d["re"], dtype=float)
        im = np.asarray(d.get("im", np.zeros_like(re)), dtype=float)
    except (KeyError, TypeError, ValueError) as exc:
        raise NotHermitianError(f"malformed matrix record: {exc}") from exc
    if re.shape != (n, n) or im.shape != (n, n):
        raise NotHermitianError(f"matrix record declares dim {n} but has shape {re.shape}/{im.shape}")
    return as_hermitian(re + 1j * im)


def load_matrix(path):
    with open(path) as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise NotHermitianError(f"{path}: not valid JSON ({exc})") from exc
    return matrix_from_dict(data)


def save_matrix(path, M):
    with open(path, "w") as fh:
        json.dump(matrix_to_dict(M), fh)
