"""Generate Schur-Agler functions from model data.

An isometric colligation V = [A B; C D] on M + C together with an operator
pencil I_Y defines

    v(lam) = (1 - A I_Y(lam))^{-1} B,
    phi(lam) = D + C I_Y(lam) v(lam),

and the polarized isometry relation makes the generalized model identity

    1 - conj(phi(mu)) phi(lam) = < (1 - I(mu)* I(lam)) v(lam), v(mu) >

hold by construction.  This inverts the usual direction of the theory: the
function is produced from the model, giving a corpus whose boundary
behavior at tau is known in advance.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import xprec
from .errors import NotIsometricError, SingularResolventError
from .extrapolate import richardson_limit
from .hermitian import (
    DEFAULT_EIGTOL,
    matrix_from_json,
    matrix_to_json,
    opnorm,
    validate_positive_contraction,
)
from .pencil import SINGULAR_RTOL, OperatorPencil, i_y_eval
from .points import BoundaryPoint, as_pair

#: default isometry tolerance for colligation validation
DEFAULT_ISOTOL = 1e-8

#: defects above this are structural, not representation noise; such
#: blocks are never snapped to a unitary even if a loose isotol admits them
SNAP_DEFECT_MAX = 1e-6

#: default dyadic exponent range for ray limits, t = 2^-k
RAY_EXPONENTS = (4, 20)


@dataclass(frozen=True)
class Colligation:
    """Block operator [A B; C D] on M + C, stored as one square matrix."""

    block: np.ndarray

    @property
    def dim(self) -> int:
        """Dimension of the state space M."""
        return self.block.shape[0] - 1

    @property
    def a(self) -> np.ndarray:
        return self.block[: self.dim, : self.dim]

    @property
    def b(self) -> np.ndarray:
        return self.block[: self.dim, self.dim]

    @property
    def c(self) -> np.ndarray:
        return self.block[self.dim, : self.dim]

    @property
    def d(self) -> complex:
        return complex(self.block[self.dim, self.dim])

    def isometry_defect(self) -> float:
        n = self.block.shape[0]
        return opnorm(self.block.conj().T @ self.block - np.eye(n))


def validate_colligation(block, isotol: float = DEFAULT_ISOTOL) -> Colligation:
    """Accept a block matrix as a colligation when V*V is the identity."""
    arr = np.asarray(block, dtype=complex)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1] or arr.shape[0] < 2:
        raise ValueError(f"colligation block must be square of size >= 2, got {arr.shape}")
    col = Colligation(arr)
    defect = col.isometry_defect()
    if defect > isotol:
        raise NotIsometricError(defect)
    return col


def random_colligation(dim: int, rng: np.random.Generator) -> Colligation:
    """Haar-ish random unitary colligation from QR of a complex Gaussian block."""
    g = rng.standard_normal((dim + 1, dim + 1)) + 1j * rng.standard_normal((dim + 1, dim + 1))
    q, r = np.linalg.qr(g)
    # fix the phase convention so the draw is determined by rng alone
    q = q * (np.diagonal(r) / np.abs(np.diagonal(r)))
    return Colligation(q)


def colligation_with_ray_limit(direction, strength: float = 0.8) -> Colligation:
    """Isometric colligation whose model-vector ray limit points along `direction`.

    Uses the Householder reflection sending the last basis vector to
    (B, D) with B = strength * direction / ||direction|| and D real; for
    that completion the ray limit of v is the positive multiple
    (1 - D) B / ||B||^2 of the requested direction.  strength = 1 on a
    one-dimensional state space gives the swap colligation.
    """
    if not 0.0 < strength <= 1.0:
        raise ValueError("strength must lie in (0, 1]")
    vhat = np.asarray(direction, dtype=complex).ravel()
    norm = float(np.linalg.norm(vhat))
    if norm == 0.0:
        raise ValueError("direction must be nonzero")
    n = vhat.size
    b = strength * vhat / norm
    d = float(np.sqrt(max(0.0, 1.0 - strength**2)))
    w = np.concatenate([-b, [1.0 - d]])
    block = np.eye(n + 1, dtype=complex) - 2.0 * np.outer(w, w.conj()) / np.vdot(w, w)
    return Colligation(block)


@dataclass(frozen=True)
class RayLimit:
    """Extrapolated limit of a quantity along the radial ray into tau."""

    value: np.ndarray
    converged: bool
    residual: float
    diverged: bool = False


class GeneralizedRealization:
    """Pencil plus colligation; evaluates phi, the model vector, and residuals."""

    def __init__(
        self,
        pencil: OperatorPencil,
        colligation: Colligation,
        isotol: float = DEFAULT_ISOTOL,
    ):
        if colligation.dim != pencil.dim:
            raise ValueError(
                f"colligation state dimension {colligation.dim} does not match "
                f"pencil dimension {pencil.dim}"
            )
        self.pencil = pencil
        self.colligation = colligation
        self.isotol = isotol
        self.isometry_defect = colligation.isometry_defect()
        self.is_isometric = self.isometry_defect <= isotol
        self._vtau_cache: dict[tuple[int, int], RayLimit] = {}
        self._ray_cache: dict[float, tuple[np.ndarray, np.clongdouble]] = {}
        self._ray_block = None

    @property
    def dim(self) -> int:
        return self.pencil.dim

    @property
    def tau(self) -> BoundaryPoint:
        return self.pencil.tau

    # -- double-precision evaluation at general points ------------------

    def _resolve(self, lam) -> tuple[np.ndarray, np.ndarray]:
        """Pencil value and model vector at a point, by one resolvent solve."""
        iy = i_y_eval(self.pencil, lam)
        col = self.colligation
        resolvent = np.eye(self.dim, dtype=complex) - col.a @ iy
        sv = np.linalg.svd(resolvent, compute_uv=False)
        if sv[-1] <= SINGULAR_RTOL * max(sv[0], 1.0):
            raise SingularResolventError(
                f"resolvent singular at lam={tuple(as_pair(lam))!r}"
            )
        v = np.linalg.solve(resolvent, col.b)
        return iy, v

    def phi(self, lam) -> complex:
        """Value of the realized function."""
        iy, v = self._resolve(lam)
        col = self.colligation
        return complex(col.d + col.c @ (iy @ v))

    def model_vector(self, lam) -> np.ndarray:
        """Model vector v(lam)."""
        return self._resolve(lam)[1]

    def model_residual(self, lam, mu) -> float:
        """Absolute defect of the generalized model identity at a pair of points."""
        iy_l, v_l = self._resolve(lam)
        iy_m, v_m = self._resolve(mu)
        phi_l = self.colligation.d + self.colligation.c @ (iy_l @ v_l)
        phi_m = self.colligation.d + self.colligation.c @ (iy_m @ v_m)
        lhs = 1.0 - np.conj(phi_m) * phi_l
        gram = np.eye(self.dim, dtype=complex) - iy_m.conj().T @ iy_l
        rhs = np.vdot(v_m, gram @ v_l)
        return float(abs(lhs - rhs))

    # -- extended-precision evaluation along the radial ray -------------

    def _refined_block(self) -> np.ndarray:
        """Extended-precision colligation block used on the ray paths.

        For an isometric colligation the stored double entries carry an
        O(1e-16) defect, which ray quotients amplify by 1/t; snapping to
        the nearest unitary removes it.  Non-isometric blocks (negative
        controls) are used as-is.
        """
        if self._ray_block is None:
            if self.is_isometric and self.isometry_defect <= SNAP_DEFECT_MAX:
                self._ray_block = xprec.nearest_unitary(self.colligation.block)
            else:
                self._ray_block = xprec.asxp(self.colligation.block)
        return self._ray_block

    def ray_state(self, t: float) -> tuple[np.ndarray, np.clongdouble]:
        """Model vector and phi at (1-t) tau, in extended precision.

        Along the radial ray the pencil is exactly (1-t) times the
        identity, so the resolvent solve needs no pencil evaluation.
        """
        if not 0.0 < t < 1.0:
            raise ValueError("t must lie in (0, 1)")
        if t in self._ray_cache:
            return self._ray_cache[t]
        block = self._refined_block()
        n = self.dim
        a = block[:n, :n]
        b = block[:n, n]
        c = block[n, :n]
        d = block[n, n]
        tx = xprec.CDTYPE(t)
        one = xprec.CDTYPE(1)
        resolvent = np.eye(n, dtype=xprec.CDTYPE) - (one - tx) * a
        v = xprec.solve(resolvent, b)
        phi = d + (one - tx) * (c @ v)
        self._ray_cache[t] = (v, phi)
        return v, phi

    def v_at_tau(self, exponents: tuple[int, int] = RAY_EXPONENTS) -> RayLimit:
        """Richardson-extrapolated limit of the model vector along the ray.

        Divergence (possible only for non-isometric blocks) is reported on
        the returned flag rather than raised.
        """
        key = (int(exponents[0]), int(exponents[1]))
        if key in self._vtau_cache:
            return self._vtau_cache[key]
        ks = range(key[0], key[1] + 1)
        vs = [self.ray_state(2.0 ** -k)[0] for k in ks]
        norms = [float(np.linalg.norm(v.astype(complex))) for v in vs]
        window = min(6, len(norms))
        diverged = window >= 3 and all(
            norms[i + 1] > norms[i] for i in range(len(norms) - window, len(norms) - 1)
        ) and norms[-1] > 10.0 * norms[-window]
        limit, residual = richardson_limit(vs)
        value = limit.astype(complex)
        converged = not diverged and residual <= 1e-8 * max(1.0, float(np.linalg.norm(value)))
        result = RayLimit(value, converged, residual, diverged)
        self._vtau_cache[key] = result
        return result

    def phi_at_tau(self, exponents: tuple[int, int] = RAY_EXPONENTS) -> complex:
        """Extrapolated boundary value of phi along the ray."""
        ks = range(int(exponents[0]), int(exponents[1]) + 1)
        phis = [self.ray_state(2.0 ** -k)[1] for k in ks]
        limit, _ = richardson_limit(phis)
        return complex(limit)

    def __repr__(self) -> str:
        return (
            f"GeneralizedRealization(dim={self.dim}, tau=({self.tau.tau1!r}, "
            f"{self.tau.tau2!r}), isometric={self.is_isometric})"
        )


# -- JSON model interchange ---------------------------------------------


def dump_model(model: GeneralizedRealization) -> dict:
    """Serialize a realization to the canonical JSON document."""
    t1, t2 = as_pair(model.tau)
    return {
        "dim": model.dim,
        "tau": [[t1.real, t1.imag], [t2.real, t2.imag]],
        "Y": matrix_to_json(model.pencil.contraction.matrix),
        "V": matrix_to_json(model.colligation.block),
    }


def load_model(
    doc,
    eigtol: float = DEFAULT_EIGTOL,
    isotol: float = DEFAULT_ISOTOL,
) -> GeneralizedRealization:
    """Build a validated realization from a JSON document, path, or dict."""
    if isinstance(doc, (str, Path)):
        doc = json.loads(Path(doc).read_text())
    dim = int(doc["dim"])
    (t1re, t1im), (t2re, t2im) = doc["tau"]
    tau = BoundaryPoint(complex(t1re, t1im), complex(t2re, t2im))
    y = matrix_from_json(doc["Y"])
    if y.shape != (dim, dim):
        raise ValueError(f"Y has shape {y.shape}, expected {(dim, dim)}")
    contraction = validate_positive_contraction(y, eigtol)
    v = matrix_from_json(doc["V"])
    if v.shape != (dim + 1, dim + 1):
        raise ValueError(f"V has shape {v.shape}, expected {(dim + 1, dim + 1)}")
    colligation = validate_colligation(v, isotol)
    return GeneralizedRealization(OperatorPencil(contraction, tau, eigtol), colligation, isotol)
