"""Dense complex Hermitian linear algebra.

Spectral decompositions with eigenvalue clustering, positive-contraction
validation, spectral functional calculus, and the three kernel projectors
(eigenspace of 1, eigenspace of 0, and the rest) used by the boundary
classification.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .errors import (
    NoConvergenceError,
    NotHermitianError,
    SingularCalculusError,
    SpectrumOutOfRangeError,
)

#: default eigenvalue clustering / snapping tolerance
DEFAULT_EIGTOL = 1e-9


def as_complex_matrix(a) -> np.ndarray:
    """Coerce to a finite 2-d complex array."""
    arr = np.array(a, dtype=complex)
    if arr.ndim != 2:
        raise ValueError(f"expected a 2-d matrix, got shape {arr.shape}")
    if not np.all(np.isfinite(arr.real)) or not np.all(np.isfinite(arr.imag)):
        raise ValueError("matrix entries must be finite")
    return arr


def matrix_to_json(a) -> dict:
    """Serialize a matrix as {"rows", "cols", "re", "im"} with row-major entries."""
    arr = as_complex_matrix(a)
    rows, cols = arr.shape
    return {
        "rows": int(rows),
        "cols": int(cols),
        "re": [float(x) for x in arr.real.ravel()],
        "im": [float(x) for x in arr.imag.ravel()],
    }


def matrix_from_json(doc: dict) -> np.ndarray:
    """Parse the JSON matrix schema produced by :func:`matrix_to_json`."""
    rows, cols = int(doc["rows"]), int(doc["cols"])
    if rows <= 0 or cols <= 0:
        raise ValueError("matrix dimensions must be positive")
    re = np.asarray(doc["re"], dtype=float)
    im = np.asarray(doc.get("im", np.zeros(rows * cols)), dtype=float)
    if re.size != rows * cols or im.size != rows * cols:
        raise ValueError("entry count does not match rows * cols")
    return as_complex_matrix((re + 1j * im).reshape(rows, cols))


def hermitian_defect(a) -> float:
    """Operator 2-norm of A - A*."""
    arr = as_complex_matrix(a)
    if arr.shape[0] != arr.shape[1]:
        raise ValueError("matrix must be square")
    return float(np.linalg.norm(arr - arr.conj().T, 2))


def opnorm(a) -> float:
    """Operator 2-norm (largest singular value)."""
    return float(np.linalg.norm(np.asarray(a, dtype=complex), 2))


@dataclass(frozen=True)
class SpectralDecomposition:
    """Clustered eigenvalues with one orthogonal projector per cluster."""

    eigenvalues: tuple[float, ...]
    projectors: tuple[np.ndarray, ...]

    @property
    def dim(self) -> int:
        return self.projectors[0].shape[0]

    def reconstruct(self) -> np.ndarray:
        """Sum of eigenvalue * projector."""
        total = np.zeros((self.dim, self.dim), dtype=complex)
        for w, p in zip(self.eigenvalues, self.projectors):
            total += w * p
        return total

    def apply(self, f: Callable[[float], complex]) -> np.ndarray:
        """Sum of f(eigenvalue) * projector; caller guarantees f is finite."""
        total = np.zeros((self.dim, self.dim), dtype=complex)
        for w, p in zip(self.eigenvalues, self.projectors):
            total += complex(f(w)) * p
        return total


def _cluster(values: np.ndarray, eigtol: float) -> list[list[int]]:
    """Group indices of ascending values whose consecutive gaps are <= eigtol."""
    groups: list[list[int]] = [[0]]
    for i in range(1, values.size):
        if values[i] - values[groups[-1][-1]] <= eigtol:
            groups[-1].append(i)
        else:
            groups.append([i])
    return groups


def spectral_decompose(a, eigtol: float = DEFAULT_EIGTOL) -> SpectralDecomposition:
    """Spectral decomposition of a Hermitian matrix with eigenvalue clustering.

    Eigenvalues within ``eigtol`` of each other share a projector, and a
    cluster value within ``eigtol`` of 0 or 1 is snapped to the exact
    endpoint, so projections are recognized exactly.
    """
    arr = as_complex_matrix(a)
    if arr.shape[0] != arr.shape[1]:
        raise ValueError("matrix must be square")
    defect = hermitian_defect(arr)
    if defect > max(eigtol, 1e-14 * max(1.0, opnorm(arr))):
        raise NotHermitianError(defect)
    herm = (arr + arr.conj().T) / 2
    try:
        w, v = np.linalg.eigh(herm)
    except np.linalg.LinAlgError as exc:
        raise NoConvergenceError(str(exc)) from exc

    eigenvalues: list[float] = []
    projectors: list[np.ndarray] = []
    for group in _cluster(w, eigtol):
        vg = v[:, group]
        proj = vg @ vg.conj().T
        value = float(np.mean(w[group]))
        if abs(value) <= eigtol:
            value = 0.0
        elif abs(value - 1.0) <= eigtol:
            value = 1.0
        if eigenvalues and value == eigenvalues[-1]:
            # two clusters snapped onto the same endpoint: merge
            projectors[-1] = projectors[-1] + proj
        else:
            eigenvalues.append(value)
            projectors.append(proj)
    projectors = [(p + p.conj().T) / 2 for p in projectors]
    return SpectralDecomposition(tuple(eigenvalues), tuple(projectors))


@dataclass(frozen=True)
class PositiveContraction:
    """Hermitian matrix with spectrum in [0, 1], plus its decomposition."""

    matrix: np.ndarray
    decomposition: SpectralDecomposition

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @property
    def eigenvalues(self) -> tuple[float, ...]:
        return self.decomposition.eigenvalues

    @property
    def projectors(self) -> tuple[np.ndarray, ...]:
        return self.decomposition.projectors

    def is_projection(self, eigtol: float = DEFAULT_EIGTOL) -> bool:
        """True when the spectrum touches only the endpoints 0 and 1."""
        return all(w in (0.0, 1.0) for w in self.eigenvalues)


def validate_positive_contraction(
    a, eigtol: float = DEFAULT_EIGTOL
) -> PositiveContraction:
    """Validate spectrum in [-eigtol, 1+eigtol] and clamp it into [0, 1]."""
    dec = spectral_decompose(a, eigtol)
    for w in dec.eigenvalues:
        if w < 0.0 or w > 1.0:
            # snapping already absorbed excursions within eigtol
            raise SpectrumOutOfRangeError(w)
    herm = (as_complex_matrix(a) + as_complex_matrix(a).conj().T) / 2
    return PositiveContraction(herm, dec)


def apply_calculus(y: PositiveContraction, f: Callable[[float], complex]) -> np.ndarray:
    """Evaluate f on the spectrum of a positive contraction.

    Raises SingularCalculusError when f is undefined or non-finite at an
    eigenvalue (a pole of the calculus).
    """
    total = np.zeros((y.dim, y.dim), dtype=complex)
    for w, p in zip(y.eigenvalues, y.projectors):
        try:
            value = complex(f(w))
        except ZeroDivisionError as exc:
            raise SingularCalculusError(f"function undefined at eigenvalue {w!r}") from exc
        if not (math.isfinite(value.real) and math.isfinite(value.imag)):
            raise SingularCalculusError(f"function non-finite at eigenvalue {w!r}")
        total += value * p
    return total


@dataclass(frozen=True)
class KernelProjectors:
    """Orthogonal projectors onto the 1-eigenspace, 0-eigenspace, and the rest.

    e1 + e0 + e is the identity; e projects onto the orthogonal complement
    of ker Y(1-Y).
    """

    e1: np.ndarray
    e0: np.ndarray
    e: np.ndarray

    @property
    def dim(self) -> int:
        return self.e1.shape[0]


def kernel_projectors(
    y: PositiveContraction, eigtol: float = DEFAULT_EIGTOL
) -> KernelProjectors:
    """Split the identity along the endpoint eigenspaces of Y."""
    n = y.dim
    e1 = np.zeros((n, n), dtype=complex)
    e0 = np.zeros((n, n), dtype=complex)
    for w, p in zip(y.eigenvalues, y.projectors):
        if abs(w - 1.0) <= eigtol:
            e1 = e1 + p
        elif abs(w) <= eigtol:
            e0 = e0 + p
    e = np.eye(n, dtype=complex) - e1 - e0
    return KernelProjectors(e1, e0, e)


def random_positive_contraction(
    dim: int,
    rng: np.random.Generator,
    eigenvalues: Sequence[float] | None = None,
) -> PositiveContraction:
    """Random positive contraction with prescribed or uniform spectrum."""
    if eigenvalues is None:
        eigenvalues = rng.uniform(0.0, 1.0, size=dim)
    vals = np.asarray(list(eigenvalues), dtype=float)
    if vals.size != dim:
        raise ValueError("need one eigenvalue per dimension")
    g = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    q, _ = np.linalg.qr(g)
    mat = (q * vals) @ q.conj().T
    return validate_positive_contraction((mat + mat.conj().T) / 2)
