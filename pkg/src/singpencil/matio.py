"""Matrix Market and JSON input/output."""

from __future__ import annotations

import json
from importlib import resources
from pathlib import Path

import numpy as np
import scipy.io
import scipy.sparse

from .pencil import Pencil


def read_matrix(path) -> np.ndarray:
    """Dense array from a Matrix Market file (array or coordinate, real or complex)."""
    M = scipy.io.mmread(str(path))
    if scipy.sparse.issparse(M):
        M = M.toarray()
    M = np.asarray(M)
    if M.ndim != 2:
        raise ValueError(f"{path}: expected a matrix")
    if np.iscomplexobj(M) and not np.any(M.imag):
        M = M.real
    return M.astype(complex if np.iscomplexobj(M) else float)


def write_matrix(path, M) -> None:
    # 17 significant digits round-trip every double
    scipy.io.mmwrite(str(path), np.asarray(M), precision=17)


def read_pencil(path_a, path_b) -> Pencil:
    return Pencil(read_matrix(path_a), read_matrix(path_b))


def write_pencil(directory, p: Pencil) -> tuple[Path, Path]:
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    a, b = directory / "A.mtx", directory / "B.mtx"
    write_matrix(a, p.A)
    write_matrix(b, p.B)
    return a, b


def read_json(path) -> dict:
    with open(path, encoding="utf-8") as fh:
        return json.load(fh)


def write_json(path, obj) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(obj, fh, indent=2)
        fh.write("\n")


def data_path(name: str) -> Path:
    """Path of a bundled fixture in ``singpencil/data``."""
    return Path(str(resources.files("singpencil") / "data" / name))


def matrix_from_json(obj) -> np.ndarray:
    """Matrix from a nested list, or from ``{"re": [[...]], "im": [[...]]}``."""
    if isinstance(obj, dict):
        M = np.array(obj["re"], dtype=float)
        if "im" in obj:
            M = M + 1j * np.array(obj["im"], dtype=float)
        return np.atleast_2d(M)
    return np.atleast_2d(np.array(obj, dtype=float))
