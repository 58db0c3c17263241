"""The one-parameter family of rational inner functions on the bidisk.

Writing p = conj(tau1) lam1 and q = conj(tau2) lam2 for a boundary point
tau, the family is

    phi_y(lam) = (y p + (1-y) q - p q) / (1 - (1-y) p - y q),

inner on the bidisk, equal to r along the radial ray (r tau1, r tau2), and
for y strictly between 0 and 1 carrying a boundary singularity at tau whose
directional derivative is genuinely nonlinear.  Each member has an explicit
two-dimensional model vector, the scalar building block of the
operator-valued theory.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    DegenerateParameterError,
    PoleHitError,
    SingularCalculusError,
)
from .points import as_pair, require_admissible

#: denominators smaller than this are treated as poles (boundary zero set)
POLE_TOL = 1e-14


def _check_y(y: float) -> float:
    y = float(y)
    if not 0.0 <= y <= 1.0:
        raise ValueError(f"parameter y={y!r} outside [0, 1]")
    return y


def _pq(tau, lam) -> tuple[complex, complex]:
    """The rotated coordinates p = conj(tau1) lam1, q = conj(tau2) lam2."""
    t1, t2 = as_pair(tau)
    l1, l2 = as_pair(lam)
    return t1.conjugate() * l1, t2.conjugate() * l2


def _denominator(y: float, p: complex, q: complex) -> complex:
    den = (1.0 - y) * (1.0 - p) + y * (1.0 - q)
    if abs(den) < POLE_TOL:
        raise PoleHitError(f"denominator {den!r} vanishes")
    return den


def phi_y_eval(y: float, tau, lam) -> complex:
    """Evaluate phi_y at a point of the closed bidisk.

    The endpoint parameters y = 0, 1 reduce to the coordinate monomials
    conj(tau2) lam2 and conj(tau1) lam1 and are short-circuited exactly.
    """
    y = _check_y(y)
    p, q = _pq(tau, lam)
    if y == 1.0:
        return p
    if y == 0.0:
        return q
    den = _denominator(y, p, q)
    num = y * p * (1.0 - q) + (1.0 - y) * q * (1.0 - p)
    return num / den


@dataclass(frozen=True)
class ScalarModelVector:
    """Two-dimensional model vector of phi_y at a point of the bidisk.

    ``u1``/``u2`` are the components in the standard basis; ``coef_plus``
    and ``coef_minus`` express the same vector in the rotated orthonormal
    basis returned by :func:`rotation_basis`, where the first coefficient
    vanishes on the diagonal p = q and is the quantity the nontangential
    bound controls.
    """

    y: float
    u1: complex
    u2: complex
    coef_plus: complex
    coef_minus: complex

    def as_array(self) -> np.ndarray:
        return np.array([self.u1, self.u2], dtype=complex)

    @property
    def norm(self) -> float:
        return float(math.hypot(abs(self.u1), abs(self.u2)))

    def reconstruct(self) -> np.ndarray:
        """Rebuild the standard components from the rotated coordinates."""
        e_plus, e_minus = rotation_basis(self.y)
        return self.coef_plus * e_plus + self.coef_minus * e_minus


def rotation_basis(y: float) -> tuple[np.ndarray, np.ndarray]:
    """Orthonormal basis of C^2 diagonalizing the model vector of phi_y.

    The sign of the second entries is fixed so that expanding the standard
    components in this basis gives exactly (coef_plus, coef_minus).
    """
    sy, sy1 = math.sqrt(y), math.sqrt(1.0 - y)
    e_plus = np.array([sy1, -sy], dtype=complex)
    e_minus = np.array([sy, sy1], dtype=complex)
    return e_plus, e_minus


def phi_y_model_vector(y: float, tau, lam) -> ScalarModelVector:
    """Model vector u_{y, lam} for y strictly inside (0, 1)."""
    y = _check_y(y)
    if y in (0.0, 1.0):
        raise DegenerateParameterError(
            "model vector formula degenerates at y in {0, 1}; "
            "the endpoint functions are plain monomials"
        )
    p, q = _pq(tau, lam)
    den = _denominator(y, p, q)
    u1 = math.sqrt(y) * (1.0 - q) / den
    u2 = math.sqrt(1.0 - y) * (1.0 - p) / den
    coef_plus = math.sqrt(y * (1.0 - y)) * (p - q) / den
    return ScalarModelVector(y, u1, u2, coef_plus, 1.0 + 0j)


def phi_y_model_residual(y: float, tau, lam, mu) -> float:
    """Absolute defect of the two-variable model identity at a pair of points.

    The identity equates 1 - conj(phi(mu)) phi(lam) with the weighted inner
    products of the model vectors; it is algebraic, so the residual is
    rounding noise.
    """
    l1, l2 = as_pair(lam)
    m1, m2 = as_pair(mu)
    ul = phi_y_model_vector(y, tau, lam)
    um = phi_y_model_vector(y, tau, mu)
    lhs = 1.0 - phi_y_eval(y, tau, mu).conjugate() * phi_y_eval(y, tau, lam)
    rhs = (1.0 - m1.conjugate() * l1) * ul.u1 * um.u1.conjugate() + (
        1.0 - m2.conjugate() * l2
    ) * ul.u2 * um.u2.conjugate()
    return abs(lhs - rhs)


def phi_y_directional_derivative(y: float, tau, delta) -> complex:
    """Directional derivative of phi_y at tau along an admissible direction.

    Closed form a*b / (a*(1-y) + b*y) with a = conj(tau1) delta1 and
    b = conj(tau2) delta2; degree-1 homogeneous in delta, and linear in
    delta only at the endpoint parameters.
    """
    y = _check_y(y)
    require_admissible(tau, delta)
    a, b = _pq(tau, delta)
    den = a * (1.0 - y) + b * y
    if abs(den) < POLE_TOL:
        raise SingularCalculusError("derivative denominator vanishes")
    return a * b / den


def model_vector_bound(y: float, aperture: float) -> float:
    """Nontangential bound on ||u_{y, lam}|| over an aperture-c region."""
    return 2.0 * aperture * math.sqrt(y * (1.0 - y)) + 1.0
