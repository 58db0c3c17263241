"""Randomized verification harness over generated realizations.

Draws validated models (random unitary colligations over positive
contractions with projection, interior, or mixed spectra), then checks
every library invariant on each: the generalized and derived standard
model identities, pencil cross-oracle agreement, contractivity, the Julia
ray identity, derivative agreement and homogeneity, nontangential bounds,
and consistency of the geometric classification with the linearity defect.
All randomness flows from one seed, so reports are reproducible
byte-for-byte.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .boundary import (
    DEFECT_REGULAR_TOL,
    DEFECT_SINGULAR_TOL,
    build_grid,
    classify_model,
    default_directions,
    derivative_fd,
    derivative_model,
    detect_carapoint,
    julia_quotient_ray,
    standard_model_pair,
    standard_model_residual,
)
from .hermitian import opnorm, random_positive_contraction
from .pencil import OperatorPencil, i_y_eval, i_y_spectral_form, sample_bidisk
from .points import BoundaryPoint
from .realization import GeneralizedRealization, random_colligation

#: exactly representable boundary points cycled through by the generator;
#: ray arithmetic at these points is exact in floating point
SUITE_TAUS = (
    BoundaryPoint(1 + 0j, 1 + 0j),
    BoundaryPoint(1 + 0j, -1 + 0j),
    BoundaryPoint(-1 + 0j, 1j),
    BoundaryPoint(1j, -1j),
)

SPECTRUM_KINDS = ("projection", "interior", "mixed")


@dataclass(frozen=True)
class CheckOutcome:
    name: str
    passed: bool
    worst: float
    bound: float

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "passed": self.passed,
            "worst": self.worst,
            "bound": self.bound,
        }


@dataclass
class ModelRecord:
    index: int
    dim: int
    spectrum_kind: str
    tau_label: str
    classification: str
    checks: list[CheckOutcome] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def to_json(self) -> dict:
        return {
            "index": self.index,
            "dim": self.dim,
            "spectrum_kind": self.spectrum_kind,
            "tau": self.tau_label,
            "classification": self.classification,
            "passed": self.passed,
            "checks": [c.to_json() for c in self.checks],
        }


@dataclass
class SuiteReport:
    seed: int
    count: int
    records: list[ModelRecord]

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.records)

    def totals(self) -> dict[str, tuple[int, int]]:
        """Per-check (passed, total) counts."""
        out: dict[str, list[int]] = {}
        for record in self.records:
            for check in record.checks:
                slot = out.setdefault(check.name, [0, 0])
                slot[0] += int(check.passed)
                slot[1] += 1
        return {k: (v[0], v[1]) for k, v in out.items()}

    def to_json(self) -> dict:
        return {
            "seed": self.seed,
            "count": self.count,
            "passed": self.passed,
            "totals": {k: {"passed": p, "total": t} for k, (p, t) in self.totals().items()},
            "models": [r.to_json() for r in self.records],
        }


@dataclass(frozen=True)
class SuiteConfig:
    seed: int = 7
    count: int = 50
    max_dim: int = 8
    residual_tol: float = 1e-9
    cross_oracle_tol: float = 1e-10
    contractivity_tol: float = 1e-10
    julia_tol: float = 1e-9
    alpha_tol: float = 1e-6
    derivative_tol: float = 1e-5
    homogeneity_tol: float = 1e-6
    identity_pairs: int = 400
    standard_pairs: int = 30
    cross_oracle_samples: int = 40
    contractivity_samples: int = 200
    n_directions: int = 10
    aperture: float = 2.0
    grid_depth: int = 12


def _spectrum(kind: str, dim: int, rng: np.random.Generator) -> np.ndarray:
    if kind == "projection":
        vals = rng.integers(0, 2, size=dim).astype(float)
    elif kind == "interior":
        vals = rng.uniform(0.05, 0.95, size=dim)
    else:  # mixed: at least one endpoint and one interior eigenvalue
        if dim == 1:
            return rng.uniform(0.05, 0.95, size=1)
        vals = np.concatenate(
            [
                [float(rng.integers(0, 2))],
                rng.uniform(0.05, 0.95, size=dim - 1),
            ]
        )
        rng.shuffle(vals)
    return vals


def generate_model(index: int, rng: np.random.Generator, config: SuiteConfig) -> tuple[GeneralizedRealization, str, str]:
    """One validated random realization; spectrum kind and tau cycle deterministically."""
    dim = int(rng.integers(1, config.max_dim + 1))
    kind = SPECTRUM_KINDS[index % len(SPECTRUM_KINDS)]
    tau = SUITE_TAUS[index % len(SUITE_TAUS)]
    contraction = random_positive_contraction(dim, rng, eigenvalues=_spectrum(kind, dim, rng))
    colligation = random_colligation(dim, rng)
    pencil = OperatorPencil(contraction, tau)
    model = GeneralizedRealization(pencil, colligation)
    tau_label = f"({tau.tau1:g},{tau.tau2:g})"
    return model, kind, tau_label


def _is_constant(model: GeneralizedRealization) -> bool:
    probes = [(0j, 0j), (0.3 + 0.1j, -0.2j), (-0.5, 0.4 + 0.2j)]
    values = [model.phi(p) for p in probes]
    return max(abs(v - values[0]) for v in values) < 1e-12


def run_model_checks(
    model: GeneralizedRealization, rng: np.random.Generator, config: SuiteConfig
) -> list[CheckOutcome]:
    """All invariant checks for one validated model."""
    checks: list[CheckOutcome] = []

    def record(name: str, worst: float, bound: float):
        checks.append(CheckOutcome(name, bool(worst <= bound), float(worst), float(bound)))

    # generalized model identity on random interior pairs
    worst = 0.0
    for _ in range(config.identity_pairs):
        worst = max(worst, model.model_residual(sample_bidisk(rng), sample_bidisk(rng)))
    record("model_identity", worst, config.residual_tol)

    # two pencil evaluation routes agree
    worst = 0.0
    for _ in range(config.cross_oracle_samples):
        lam = sample_bidisk(rng)
        worst = max(
            worst, opnorm(i_y_eval(model.pencil, lam) - i_y_spectral_form(model.pencil, lam))
        )
    record("pencil_cross_oracle", worst, config.cross_oracle_tol)

    # contractivity of the pencil and of phi
    worst = 0.0
    worst_phi = 0.0
    for _ in range(config.contractivity_samples):
        lam = sample_bidisk(rng)
        worst = max(worst, opnorm(i_y_eval(model.pencil, lam)))
        worst_phi = max(worst_phi, abs(model.phi(lam)))
    record("pencil_contractivity", worst, 1.0 + config.contractivity_tol)
    record("schur_bound", worst_phi, 1.0 + config.contractivity_tol)

    # Julia quotient identity along the ray
    rows = julia_quotient_ray(model)
    record("julia_identity", max(r.residual for r in rows), config.julia_tol)

    # extrapolated Caratheodory quotient against the ray limit of v
    ray = model.v_at_tau()
    grid = build_grid(model.tau, config.aperture, config.grid_depth)
    scan = detect_carapoint(model.phi, grid)
    if ray.converged:
        alpha_target = float(np.linalg.norm(ray.value)) ** 2
        record("alpha_vs_vtau", abs(scan.alpha - alpha_target), config.alpha_tol)
        if not _is_constant(model):
            # nonconstant realizations must carry a genuine carapoint
            record("alpha_positive", 0.0 if alpha_target > 1e-10 else 1.0, 0.5)
    record("carapoint_detected", 0.0 if scan.carapoint else 1.0, 0.5)

    # derivative routes agree, and both are homogeneous
    phi_tau = model.phi_at_tau()
    worst = 0.0
    worst_h = 0.0
    for delta in default_directions(model.tau, config.n_directions):
        analytic = derivative_model(model, delta)
        fd = derivative_fd(model.phi, model.tau, delta, phi_tau=phi_tau)
        worst = max(worst, abs(analytic - fd))
        for s in (0.5, 2.0):
            scaled = (s * delta[0], s * delta[1])
            worst_h = max(worst_h, abs(derivative_model(model, scaled) - s * analytic))
            worst_h = max(worst_h, abs(derivative_fd(model.phi, model.tau, scaled, phi_tau=phi_tau) - s * fd))
    record("derivative_agreement", worst, config.derivative_tol)
    record("derivative_homogeneity", worst_h, config.homogeneity_tol)

    # derived standard model: identity on random pairs, bound on the grid
    worst = 0.0
    for _ in range(config.standard_pairs):
        worst = max(
            worst, standard_model_residual(model, sample_bidisk(rng), sample_bidisk(rng))
        )
    record("standard_model_identity", worst, config.residual_tol)
    worst = 0.0
    for pt in grid.points:
        u1, u2 = standard_model_pair(model, pt)
        vnorm = float(np.linalg.norm(model.model_vector(pt)))
        bound = (config.aperture + 1.0) * vnorm
        worst = max(
            worst,
            max(float(np.linalg.norm(u1)), float(np.linalg.norm(u2))) - bound,
        )
    record("standard_model_bound", worst, 1e-12)

    return checks


def run_suite(config: SuiteConfig) -> SuiteReport:
    """Generate `count` models and run every check; deterministic in the seed."""
    if config.count < 1:
        raise ValueError("count must be >= 1")
    rng = np.random.default_rng(config.seed)
    records: list[ModelRecord] = []
    for index in range(config.count):
        model, kind, tau_label = generate_model(index, rng, config)
        checks = run_model_checks(model, rng, config)
        report = classify_model(model, aperture=config.aperture, depth=config.grid_depth)
        # geometric classification must match the derivative's linearity defect
        if report.classification == "regular":
            agree = report.linearity_defect <= DEFECT_REGULAR_TOL
            threshold = DEFECT_REGULAR_TOL
        elif report.classification == "indeterminate":
            agree = False  # gray zone: surfaced as a failure, never silently passed
            threshold = DEFECT_REGULAR_TOL
        else:
            agree = report.linearity_defect > DEFECT_SINGULAR_TOL
            threshold = DEFECT_SINGULAR_TOL
        checks.append(
            CheckOutcome(
                "classification_cross_check", bool(agree), report.linearity_defect, threshold
            )
        )
        records.append(
            ModelRecord(index, model.dim, kind, tau_label, report.classification, checks)
        )
    return SuiteReport(config.seed, config.count, records)
