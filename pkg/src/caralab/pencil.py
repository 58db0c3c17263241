"""Operator-valued rational map attached to a positive contraction.

Given a positive contraction Y and a boundary point tau, the pencil

    I_Y(lam) = 1 - (1-p)(1-q) * [(1-p)(1-Y) + (1-q) Y]^{-1},

with p = conj(tau1) lam1 and q = conj(tau2) lam2, is contractive and
analytic on the bidisk, takes the value 1 at tau, and reduces to
diag-multiplication by (p, q) when Y is a projection.  Two independent
evaluation routes are kept: a direct linear solve and the spectral form
summing scalar family values against the eigenprojectors.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import PoleHitError, SingularCalculusError, SingularDenominatorError
from .hermitian import (
    DEFAULT_EIGTOL,
    KernelProjectors,
    PositiveContraction,
    kernel_projectors,
    opnorm,
)
from .points import BoundaryPoint, DiskPoint, as_pair, require_admissible
from .scalar_family import phi_y_eval

#: relative singular-value floor below which a denominator counts as singular
SINGULAR_RTOL = 1e-13

#: points closer to tau than this evaluate to the identity exactly
TAU_SNAP = 1e-15


class OperatorPencil:
    """A positive contraction, a boundary point, and cached kernel projectors."""

    def __init__(self, contraction: PositiveContraction, tau, eigtol: float = DEFAULT_EIGTOL):
        self.contraction = contraction
        self.tau = tau if isinstance(tau, BoundaryPoint) else BoundaryPoint(*as_pair(tau))
        self.kernel: KernelProjectors = kernel_projectors(contraction, eigtol)

    @property
    def dim(self) -> int:
        return self.contraction.dim

    def __repr__(self) -> str:
        return f"OperatorPencil(dim={self.dim}, tau=({self.tau.tau1!r}, {self.tau.tau2!r}))"


def _rotated(pencil: OperatorPencil, lam) -> tuple[complex, complex]:
    t1, t2 = as_pair(pencil.tau)
    l1, l2 = as_pair(lam)
    return t1.conjugate() * l1, t2.conjugate() * l2


def i_y_eval(pencil: OperatorPencil, lam) -> np.ndarray:
    """Evaluate the pencil by one linear solve.

    Defined on the closed bidisk wherever the denominator operator is
    invertible; the value at tau itself is the identity (the continuous
    extension along rays), which is returned exactly.
    """
    p, q = _rotated(pencil, lam)
    n = pencil.dim
    eye = np.eye(n, dtype=complex)
    if abs(1.0 - p) < TAU_SNAP and abs(1.0 - q) < TAU_SNAP:
        return eye
    y = pencil.contraction.matrix
    m = (1.0 - p) * (eye - y) + (1.0 - q) * y
    sv = np.linalg.svd(m, compute_uv=False)
    if sv[-1] <= SINGULAR_RTOL * max(sv[0], 1.0):
        raise SingularDenominatorError(
            f"pencil denominator singular at lam={tuple(as_pair(lam))!r}"
        )
    return eye - (1.0 - p) * (1.0 - q) * np.linalg.solve(m, eye)


def i_y_spectral_form(pencil: OperatorPencil, lam) -> np.ndarray:
    """Evaluate the pencil as the spectral sum of scalar family values.

    Independent cross-check oracle for :func:`i_y_eval`.
    """
    p, q = _rotated(pencil, lam)
    if abs(1.0 - p) < TAU_SNAP and abs(1.0 - q) < TAU_SNAP:
        return np.eye(pencil.dim, dtype=complex)
    total = np.zeros((pencil.dim, pencil.dim), dtype=complex)
    for w, proj in zip(pencil.contraction.eigenvalues, pencil.contraction.projectors):
        try:
            total += phi_y_eval(w, pencil.tau, lam) * proj
        except PoleHitError as exc:
            raise SingularDenominatorError(str(exc)) from exc
    return total


def i_y_difference_at_tau(pencil: OperatorPencil, delta, t: float) -> np.ndarray:
    """The exact difference I(tau + t delta) - identity.

    Equals t * a * b * [a (1-Y) + b Y]^{-1} with a = conj(tau1) delta1 and
    b = conj(tau2) delta2, for every t small enough that tau + t delta stays
    in the bidisk; this is an algebraic identity, not a first-order
    approximation.
    """
    if t <= 0:
        raise ValueError("t must be positive")
    t1, t2 = as_pair(pencil.tau)
    d1, d2 = as_pair(delta)
    lam_t = DiskPoint(t1 + t * d1, t2 + t * d2)
    if not lam_t.in_open_bidisk():
        raise ValueError(f"tau + t*delta = {tuple(lam_t)!r} leaves the open bidisk")
    return t * _direction_calculus(pencil, d1, d2)


def i_y_derivative_at_tau(pencil: OperatorPencil, delta) -> np.ndarray:
    """Directional derivative of the pencil at tau for an admissible direction."""
    require_admissible(pencil.tau, delta)
    d1, d2 = as_pair(delta)
    return _direction_calculus(pencil, d1, d2)


def _direction_calculus(pencil: OperatorPencil, d1: complex, d2: complex) -> np.ndarray:
    t1, t2 = as_pair(pencil.tau)
    a = t1.conjugate() * d1
    b = t2.conjugate() * d2
    n = pencil.dim
    eye = np.eye(n, dtype=complex)
    y = pencil.contraction.matrix
    m = a * (eye - y) + b * y
    sv = np.linalg.svd(m, compute_uv=False)
    if sv[-1] <= SINGULAR_RTOL * max(sv[0], 1.0):
        raise SingularCalculusError("direction denominator operator is singular")
    return a * b * np.linalg.solve(m, eye)


@dataclass(frozen=True)
class ContractivityScan:
    """Largest operator norm of the pencil over sampled interior points."""

    max_norm: float
    argmax: DiskPoint
    n_samples: int


def sample_bidisk(rng: np.random.Generator) -> DiskPoint:
    """One point uniform w.r.t. area measure in each coordinate disk."""
    r = np.sqrt(rng.uniform(0.0, 1.0, size=2))
    th = rng.uniform(0.0, 2.0 * np.pi, size=2)
    z = r * np.exp(1j * th)
    return DiskPoint(complex(z[0]), complex(z[1]))


def contractivity_scan(
    pencil: OperatorPencil, n_samples: int, seed: int = 0
) -> ContractivityScan:
    """Scan random interior points for the largest pencil norm."""
    if n_samples <= 0:
        raise ValueError("n_samples must be positive")
    rng = np.random.default_rng(seed)
    best = -1.0
    best_point = DiskPoint(0j, 0j)
    for _ in range(n_samples):
        lam = sample_bidisk(rng)
        norm = opnorm(i_y_eval(pencil, lam))
        if norm > best:
            best, best_point = norm, lam
    return ContractivityScan(best, best_point, n_samples)
