"""Boundary analysis at a distinguished-boundary point.

Nontangential approach grids, Caratheodory-quotient carapoint detection,
directional derivatives by two independent routes (spectral calculus on
the ray limit of the model vector versus finite differences), the derived
standard model, the Julia-quotient ray identity, and the regular /
singular / purely-singular classification of a generalized model.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

import numpy as np

from .errors import BadApertureError, NoConvergenceError, NoLimitError, UnconvergedError
from .extrapolate import richardson_limit
from .hermitian import apply_calculus
from .points import (
    BoundaryPoint,
    DiskPoint,
    as_pair,
    direction_entry_time,
    require_admissible,
)
from .realization import GeneralizedRealization, RAY_EXPONENTS
from .scalar_family import phi_y_model_vector

#: quotient ceiling above which an approach to the boundary counts as unbounded
QUOTIENT_BOUND = 1e6

#: deepest dyadic exponent used when refining the ray for carapoint detection
DETECT_EXPONENT = 24

#: deepest dyadic exponent feeding the alpha extrapolation; beyond this the
#: rounding noise u/t of the quotient outweighs the truncation gain
ALPHA_EXPONENT = 20

#: classification cutoff on the component of the ray limit outside ker Y(1-Y)
DEFAULT_CLASS_TOL = 1e-7

#: gray zone above class_tol reported as indeterminate instead of singular
INDETERMINATE_TOL = 1e-3

#: linearity defect thresholds matching the classification cutoffs
DEFECT_REGULAR_TOL = 1e-6
DEFECT_SINGULAR_TOL = 1e-3


def satisfies_aperture(tau, lam, aperture: float, slack: float = 0.0) -> bool:
    """Check the nontangential inequality ||tau - lam||_inf <= c (1 - ||lam||_inf).

    ``slack`` absorbs representation noise: the radial ray sits exactly on
    the aperture-1 cone boundary, where the ~1e-16 modulus error of a
    stored boundary point would otherwise flip the comparison.
    """
    t1, t2 = as_pair(tau)
    l1, l2 = as_pair(lam)
    gap = max(abs(t1 - l1), abs(t2 - l2))
    return gap <= aperture * (1.0 - max(abs(l1), abs(l2))) + slack


@dataclass(frozen=True)
class NontangentialGrid:
    """Points approaching tau inside an aperture cone, grouped by family.

    Each family follows one approach geometry (the radial ray, skewed
    radial scalings, small angular detours) sampled along the dyadic
    schedule t = 2^-k, k = 1..depth.
    """

    tau: BoundaryPoint
    aperture: float
    depth: int
    families: tuple[tuple[str, tuple[tuple[float, DiskPoint], ...]], ...]

    @property
    def points(self) -> list[DiskPoint]:
        return [pt for _, pts in self.families for _, pt in pts]

    @property
    def ray(self) -> tuple[tuple[float, DiskPoint], ...]:
        for name, pts in self.families:
            if name == "ray":
                return pts
        raise KeyError("grid has no ray family")

    def family(self, name: str) -> tuple[tuple[float, DiskPoint], ...]:
        for fam_name, pts in self.families:
            if fam_name == name:
                return pts
        raise KeyError(name)


def build_grid(tau, aperture: float = 2.0, depth: int = 12) -> NontangentialGrid:
    """Build a deterministic nontangential grid at tau.

    Contains the radial ray (1 - 2^-k) tau, radial scalings with per-
    coordinate speed ratios down to 1/aperture, and (for aperture > 1)
    angular detours; every stored point satisfies the aperture inequality
    exactly.
    """
    if aperture < 1.0:
        raise BadApertureError(f"aperture {aperture!r} < 1 leaves no room to approach")
    if not 1 <= depth <= 48:
        # beyond 2^-48 the schedule is within a few ulp of the boundary
        raise ValueError("depth must lie in 1..48")
    tau = tau if isinstance(tau, BoundaryPoint) else BoundaryPoint(*as_pair(tau))
    t1, t2 = as_pair(tau)
    ts = [2.0**-k for k in range(1, depth + 1)]

    def radial(u1: float, u2: float, t: float) -> DiskPoint:
        return DiskPoint((1.0 - t * u1) * t1, (1.0 - t * u2) * t2)

    def angular(theta1: float, theta2: float, t: float) -> DiskPoint:
        w1 = complex(math.cos(theta1 * t), math.sin(theta1 * t))
        w2 = complex(math.cos(theta2 * t), math.sin(theta2 * t))
        return DiskPoint((1.0 - t) * w1 * t1, (1.0 - t) * w2 * t2)

    makers: list[tuple[str, Callable[[float], DiskPoint]]] = [
        ("ray", lambda t: radial(1.0, 1.0, t))
    ]
    if aperture > 1.0:
        ratios = sorted({1.0 / aperture, (1.0 + 1.0 / aperture) / 2.0})
        for r in ratios:
            makers.append((f"radial(1,{r:g})", lambda t, r=r: radial(1.0, r, t)))
            makers.append((f"radial({r:g},1)", lambda t, r=r: radial(r, 1.0, t)))
        # safe angular speed: sqrt(1 + kappa^2) <= aperture with margin
        kappa = 0.9 * math.sqrt(aperture**2 - 1.0)
        makers.append((f"angular(+{kappa:.3g},0)", lambda t: angular(kappa, 0.0, t)))
        makers.append((f"angular(0,-{kappa:.3g})", lambda t: angular(0.0, -kappa, t)))

    families = []
    for name, make in makers:
        pts = []
        for t in ts:
            pt = make(t)
            if not pt.in_open_bidisk() or not satisfies_aperture(tau, pt, aperture, slack=1e-12):
                raise AssertionError(f"grid family {name!r} violated its cone at t={t!r}")
            pts.append((t, pt))
        families.append((name, tuple(pts)))
    return NontangentialGrid(tau, float(aperture), int(depth), tuple(families))


def cara_quotient(phi: Callable[[DiskPoint], complex], lam) -> float:
    """The Caratheodory quotient (1 - |phi(lam)|) / (1 - ||lam||_inf)."""
    lam = lam if isinstance(lam, DiskPoint) else DiskPoint(*as_pair(lam))
    return (1.0 - abs(phi(lam))) / (1.0 - lam.inf_norm)


@dataclass(frozen=True)
class CarapointScan:
    """Result of quotient-boundedness detection over a grid."""

    carapoint: bool
    alpha: float
    quotient_max: float
    quotient_min: float


def detect_carapoint(
    phi: Callable[[DiskPoint], complex],
    grid: NontangentialGrid,
    threshold: float = QUOTIENT_BOUND,
    max_exponent: int = DETECT_EXPONENT,
) -> CarapointScan:
    """Decide boundedness of the Caratheodory quotient over the grid.

    The radial ray is refined down to t = 2^-max_exponent, where a
    quotient growing like 1/(1 - ||lam||_inf) crosses the ceiling; alpha is
    the Richardson-extrapolated ray limit of the quotient, taken from the
    moderately deep ray samples where rounding is still negligible.
    """
    quotients = [cara_quotient(phi, pt) for pt in grid.points]
    by_exponent: dict[int, float] = {}
    for k, (_, pt) in enumerate(grid.ray, start=1):
        by_exponent[k] = cara_quotient(phi, pt)
    for k in range(grid.depth + 1, max_exponent + 1):
        by_exponent[k] = cara_quotient(phi, grid.tau.ray_point(2.0**-k))
        quotients.append(by_exponent[k])
    k_hi = min(ALPHA_EXPONENT, max(by_exponent))
    tail = [by_exponent[k] for k in range(max(1, k_hi - 7), k_hi + 1)]
    alpha, _ = richardson_limit(tail)
    qmax, qmin = max(quotients), min(quotients)
    return CarapointScan(bool(qmax < threshold), float(alpha), float(qmax), float(qmin))


@dataclass(frozen=True)
class NontangentialLimit:
    """Extrapolated boundary value with the spread across approach families."""

    value: complex
    max_deviation: float


def nt_limit_phi(
    phi: Callable[[DiskPoint], complex],
    grid: NontangentialGrid,
    family_tol: float = 1e-5,
) -> NontangentialLimit:
    """Nontangential limit of phi at the grid's boundary point.

    Extrapolates every approach family and cross-checks the off-ray limits
    against the ray limit; disagreement beyond family_tol raises NoLimit.
    """
    limits = {}
    for name, pts in grid.families:
        limits[name], _ = richardson_limit([phi(pt) for _, pt in pts])
    ray_value = complex(limits["ray"])
    deviation = max(
        (abs(complex(v) - ray_value) for name, v in limits.items() if name != "ray"),
        default=0.0,
    )
    if deviation > family_tol:
        raise NoLimitError(
            f"approach families disagree by {deviation:.3e} (> {family_tol:.1e})"
        )
    return NontangentialLimit(ray_value, float(deviation))


def derivative_fd(
    phi: Callable[[DiskPoint], complex],
    tau,
    delta,
    phi_tau: complex | None = None,
    steps: int = 15,
) -> complex:
    """Directional derivative at tau by extrapolated difference quotients.

    The step schedule is geometric inside the largest safe entry interval
    for the direction; phi(tau) defaults to the extrapolated radial limit.
    """
    tau = tau if isinstance(tau, BoundaryPoint) else BoundaryPoint(*as_pair(tau))
    require_admissible(tau, delta)
    d1, d2 = as_pair(delta)
    t0 = direction_entry_time(tau, delta) / 8.0
    if phi_tau is None:
        ray_values = [phi(tau.ray_point(2.0**-k)) for k in range(8, 21)]
        phi_tau = complex(richardson_limit(ray_values)[0])
    t1, t2 = as_pair(tau)
    quotients = []
    for k in range(steps):
        t = t0 * 2.0**-k
        lam = DiskPoint(t1 + t * d1, t2 + t * d2)
        quotients.append((phi(lam) - phi_tau) / t)
    limit, residual = richardson_limit(quotients)
    if residual > 1e-4 * max(1.0, abs(complex(limit))):
        raise NoConvergenceError(
            f"difference quotients did not settle (residual {residual:.3e})"
        )
    return complex(limit)


def derivative_model(model: GeneralizedRealization, delta) -> complex:
    """Directional derivative at tau from the model's ray limit.

    Evaluates phi(tau) * < g(Y) v_tau, v_tau > with
    g(y) = a b / (a (1-y) + b y), a = conj(tau1) delta1,
    b = conj(tau2) delta2, by spectral calculus; g has no pole on [0, 1]
    for admissible directions.  The unimodular prefactor phi(tau) comes
    from polarizing the model identity against the boundary value and is
    what makes this agree with the difference quotient for functions with
    phi(tau) != 1.
    """
    require_admissible(model.tau, delta)
    ray = model.v_at_tau()
    if not ray.converged:
        raise UnconvergedError("model vector has no converged ray limit at tau")
    t1, t2 = as_pair(model.tau)
    d1, d2 = as_pair(delta)
    a = t1.conjugate() * d1
    b = t2.conjugate() * d2
    g = apply_calculus(model.pencil.contraction, lambda y: a * b / (a * (1.0 - y) + b * y))
    v = ray.value
    return model.phi_at_tau() * complex(np.vdot(v, g @ v))


@dataclass(frozen=True)
class DerivativeEntry:
    delta: tuple[complex, complex]
    value: complex
    method: str  # "analytic" or "finite_difference"


@dataclass(frozen=True)
class DerivativeTable:
    """Directional derivatives at tau, tagged by evaluation method."""

    entries: tuple[DerivativeEntry, ...]

    def by_method(self, method: str) -> list[DerivativeEntry]:
        return [e for e in self.entries if e.method == method]

    def agreement(self) -> float:
        """Largest gap between the two methods over shared directions."""
        analytic = {e.delta: e.value for e in self.by_method("analytic")}
        worst = 0.0
        for e in self.by_method("finite_difference"):
            if e.delta in analytic:
                worst = max(worst, abs(analytic[e.delta] - e.value))
        return worst


def default_directions(tau, count: int = 12) -> list[tuple[complex, complex]]:
    """Deterministic admissible directions, rotation-covariant in tau."""
    scales = [
        (-1.0, -1.0),
        (-2.0, -1.0),
        (-1.0, -2.0),
        (-3.0, -1.0),
        (-1.0, -3.0),
        (-1.0 - 1.0j, -1.0),
        (-1.0, -1.0 + 1.0j),
        (-2.0 - 1.0j, -1.0 - 2.0j),
        (-0.5, -1.5),
        (-1.5, -0.5),
        (-2.5 + 0.5j, -1.0),
        (-1.0, -2.5 - 0.5j),
    ]
    t1, t2 = as_pair(tau)
    return [(s1 * t1, s2 * t2) for s1, s2 in scales[:count]]


def default_direction_pairs(tau) -> list[tuple[tuple[complex, complex], tuple[complex, complex]]]:
    """Admissible direction pairs probing additivity of the derivative.

    The leading pair dominates the defect for the scalar family (value 1/3
    at the midpoint parameter); the others probe asymmetric and complex
    combinations.
    """
    t1, t2 = as_pair(tau)

    def d(s1, s2):
        return (s1 * t1, s2 * t2)

    return [
        (d(-2, -1), d(-1, -2)),
        (d(-1, -1), d(-1, -2)),
        (d(-1 - 1j, -1), d(-1, -1 + 1j)),
    ]


def derivative_table(
    model: GeneralizedRealization,
    deltas: Sequence[tuple[complex, complex]] | None = None,
    methods: Iterable[str] = ("analytic", "finite_difference"),
) -> DerivativeTable:
    """Tabulate directional derivatives of a realization at tau."""
    if deltas is None:
        deltas = default_directions(model.tau)
    phi_tau = model.phi_at_tau()
    entries = []
    for delta in deltas:
        for method in methods:
            if method == "analytic":
                value = derivative_model(model, delta)
            elif method == "finite_difference":
                value = derivative_fd(model.phi, model.tau, delta, phi_tau=phi_tau)
            else:
                raise ValueError(f"unknown method {method!r}")
            entries.append(DerivativeEntry(as_pair(delta), value, method))
    return DerivativeTable(tuple(entries))


def linearity_defect(
    derivative: Callable[[tuple[complex, complex]], complex],
    pairs: Sequence[tuple[tuple[complex, complex], tuple[complex, complex]]],
) -> float:
    """Largest additivity defect |D(a+b) - D(a) - D(b)| over direction pairs."""
    worst = 0.0
    for da, db in pairs:
        a1, a2 = as_pair(da)
        b1, b2 = as_pair(db)
        joint = derivative((a1 + b1, a2 + b2))
        worst = max(worst, abs(joint - derivative(da) - derivative(db)))
    return worst


# -- derived standard model ----------------------------------------------


def standard_model_pair(model: GeneralizedRealization, lam) -> tuple[np.ndarray, np.ndarray]:
    """The two components of the derived standard model vector at lam.

    The pencil's spectral decomposition splits the state space; endpoint
    eigenvalues contribute the constant weights (1, 0) and (0, 1), interior
    eigenvalues the scalar-family model components, each multiplying the
    corresponding eigenprojector applied to v(lam).
    """
    dec = model.pencil.contraction.decomposition
    v = model.model_vector(lam)
    n = model.dim
    u1 = np.zeros(n, dtype=complex)
    u2 = np.zeros(n, dtype=complex)
    for w, proj in zip(dec.eigenvalues, dec.projectors):
        if w == 1.0:
            w1, w2 = 1.0 + 0j, 0j
        elif w == 0.0:
            w1, w2 = 0j, 1.0 + 0j
        else:
            u = phi_y_model_vector(w, model.tau, lam)
            w1, w2 = u.u1, u.u2
        pv = proj @ v
        u1 += w1 * pv
        u2 += w2 * pv
    return u1, u2


def standard_model_residual(model: GeneralizedRealization, lam, mu) -> float:
    """Defect of the ordinary model identity for the derived standard model."""
    l1, l2 = as_pair(lam)
    m1, m2 = as_pair(mu)
    u1_l, u2_l = standard_model_pair(model, lam)
    u1_m, u2_m = standard_model_pair(model, mu)
    lhs = 1.0 - np.conj(model.phi(mu)) * model.phi(lam)
    rhs = (1.0 - m1.conjugate() * l1) * np.vdot(u1_m, u1_l) + (
        1.0 - m2.conjugate() * l2
    ) * np.vdot(u2_m, u2_l)
    return float(abs(lhs - rhs))


# -- Julia quotient along the ray ----------------------------------------


@dataclass(frozen=True)
class JuliaRow:
    """One ray sample of the squared-quotient identity."""

    t: float
    lhs: float  # ||v((1-t) tau)||^2
    rhs: float  # (1 - |phi|^2) / (1 - ||lam||_inf^2)

    @property
    def residual(self) -> float:
        return abs(self.lhs - self.rhs)


def julia_quotient_ray(
    model: GeneralizedRealization, exponents: tuple[int, int] = RAY_EXPONENTS
) -> list[JuliaRow]:
    """Sample both sides of the squared Julia quotient along the radial ray.

    Evaluated in extended precision: the denominators shrink to 2^-20 and
    double rounding would swamp the 1e-9 identity budget.
    """
    rows = []
    one = np.longdouble(1.0)
    for k in range(int(exponents[0]), int(exponents[1]) + 1):
        t = 2.0**-k
        v, phi = model.ray_state(t)
        tx = np.longdouble(t)
        lhs = np.vdot(v, v).real
        num = one - (phi * np.conj(phi)).real
        den = tx * (np.longdouble(2.0) - tx)  # 1 - (1-t)^2, exactly
        rows.append(JuliaRow(t, float(lhs), float(num / den)))
    return rows


# -- classification -------------------------------------------------------


@dataclass(frozen=True)
class BoundaryReport:
    """Verdict of the boundary analysis of a realization at tau."""

    carapoint: bool
    alpha: float
    phi_tau: complex
    v_tau_norm: float
    classification: str  # regular | singular | purely_singular | indeterminate
    linearity_defect: float
    singular_part_norm: float  # ||P_{N-perp} v_tau||, N = ker Y(1-Y)
    kernel_part_norm: float  # ||P_N v_tau||
    cross_check_ok: bool
    quotient_max: float

    def to_json(self) -> dict:
        return {
            "carapoint": self.carapoint,
            "alpha": self.alpha,
            "phi_tau": [self.phi_tau.real, self.phi_tau.imag],
            "v_tau_norm": self.v_tau_norm,
            "classification": self.classification,
            "linearity_defect": self.linearity_defect,
            "singular_part_norm": self.singular_part_norm,
            "kernel_part_norm": self.kernel_part_norm,
            "cross_check_ok": self.cross_check_ok,
            "quotient_max": self.quotient_max,
        }


def classify_model(
    model: GeneralizedRealization,
    class_tol: float = DEFAULT_CLASS_TOL,
    indeterminate_tol: float = INDETERMINATE_TOL,
    aperture: float = 2.0,
    depth: int = 12,
    ray_exponents: tuple[int, int] = RAY_EXPONENTS,
) -> BoundaryReport:
    """Classify a generalized model by the geometry of its ray limit.

    Regular when the component of v_tau outside ker Y(1-Y) vanishes,
    purely singular when the component inside vanishes instead, singular
    otherwise; components between class_tol and indeterminate_tol are
    reported as indeterminate rather than silently classified.  The
    linearity defect of the directional derivative is recorded as an
    independent cross-check: it must vanish exactly for regular models.
    """
    ray = model.v_at_tau(ray_exponents)
    if not ray.converged:
        raise UnconvergedError("ray limit of the model vector did not converge")
    v = ray.value
    kernel = model.pencil.kernel
    singular_part = float(np.linalg.norm(kernel.e @ v))
    kernel_part = float(np.linalg.norm((kernel.e1 + kernel.e0) @ v))

    if singular_part <= class_tol:
        classification = "regular"
    elif singular_part <= indeterminate_tol:
        classification = "indeterminate"
    elif kernel_part <= class_tol:
        classification = "purely_singular"
    else:
        classification = "singular"

    grid = build_grid(model.tau, aperture, depth)
    scan = detect_carapoint(model.phi, grid)
    phi_tau = model.phi_at_tau(ray_exponents)
    defect = linearity_defect(
        lambda d: derivative_model(model, d), default_direction_pairs(model.tau)
    )

    if classification == "regular":
        cross_check_ok = defect <= DEFECT_REGULAR_TOL
    elif classification == "indeterminate":
        cross_check_ok = True
    else:
        cross_check_ok = defect > DEFECT_SINGULAR_TOL

    return BoundaryReport(
        carapoint=scan.carapoint,
        alpha=scan.alpha,
        phi_tau=phi_tau,
        v_tau_norm=float(np.linalg.norm(v)),
        classification=classification,
        linearity_defect=float(defect),
        singular_part_norm=singular_part,
        kernel_part_norm=kernel_part,
        cross_check_ok=cross_check_ok,
        quotient_max=scan.quotient_max,
    )
