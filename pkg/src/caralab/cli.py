"""Command-line front end.

Subcommands: family | verify | classify | derivative | suite.  Reports are
JSON on stdout (or --out), tables go to CSV files under a --csv base path.
Output is deterministic for a given seed and configuration; the
CARALAB_SEED environment variable overrides the configured seed.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

import numpy as np

from .boundary import (
    build_grid,
    cara_quotient,
    classify_model,
    default_direction_pairs,
    default_directions,
    derivative_fd,
    derivative_table,
    detect_carapoint,
    julia_quotient_ray,
    linearity_defect,
)
from .errors import (
    CaralabError,
    InadmissibleDirectionError,
    NotIsometricError,
    SpectrumOutOfRangeError,
    UnconvergedError,
)
from .hermitian import DEFAULT_EIGTOL
from .pencil import contractivity_scan, sample_bidisk
from .points import BoundaryPoint
from .realization import DEFAULT_ISOTOL, load_model
from .scalar_family import (
    phi_y_directional_derivative,
    phi_y_eval,
    phi_y_model_residual,
)
from .suite import SuiteConfig, run_suite

EXIT_BAD_PARAMS = 2
EXIT_NOT_ISOMETRIC = 3
EXIT_SPECTRUM = 4
EXIT_RESIDUAL = 5
EXIT_UNCONVERGED = 6


def _fmt(x: float) -> str:
    return f"{x:.17g}"


def _parse_tau(args) -> BoundaryPoint:
    if args.tau_angles is not None:
        parts = [float(p) for p in args.tau_angles.split(",")]
        if len(parts) != 2:
            raise ValueError("--tau-angles expects two angles in turns")
        return BoundaryPoint.from_angles(*parts)
    parts = [float(p) for p in args.tau.split(",")]
    if len(parts) == 2:
        return BoundaryPoint(complex(parts[0], 0.0), complex(parts[1], 0.0))
    if len(parts) == 4:
        return BoundaryPoint(complex(parts[0], parts[1]), complex(parts[2], parts[3]))
    raise ValueError("--tau expects 're1,re2' or 're1,im1,re2,im2'")


def _parse_delta(text: str) -> tuple[complex, complex]:
    parts = [float(p) for p in text.split(",")]
    if len(parts) == 2:
        return complex(parts[0], 0.0), complex(parts[1], 0.0)
    if len(parts) == 4:
        return complex(parts[0], parts[1]), complex(parts[2], parts[3])
    raise ValueError("direction expects 're1,re2' or 're1,im1,re2,im2'")


def _resolve_seed(args) -> int:
    env = os.environ.get("CARALAB_SEED")
    if env is not None:
        return int(env)
    return int(args.seed)


def _parse_ray_exponents(args) -> tuple[int, int]:
    lo, hi = (int(p) for p in args.ray_exponents.split(","))
    if not 0 < lo < hi:
        raise ValueError("--ray-exponents expects 0 < LO < HI")
    return lo, hi


def _emit_report(report: dict, args) -> None:
    text = json.dumps(report, indent=2, sort_keys=True) + "\n"
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)


def _write_csv(path: Path, header: list[str], rows: list[list[float | str]]) -> None:
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(x if isinstance(x, str) else _fmt(x) for x in row))
    path.write_text("\n".join(lines) + "\n")


def _emit_tables(args, tables: dict[str, tuple[list[str], list[list]]]) -> None:
    if not args.csv:
        return
    base = Path(args.csv)
    for name, (header, rows) in tables.items():
        _write_csv(base.with_name(base.name + f".{name}.csv"), header, rows)


def _derivative_rows(table) -> list[list]:
    rows = []
    for e in table.entries:
        d1, d2 = e.delta
        rows.append(
            [d1.real, d1.imag, d2.real, d2.imag, e.value.real, e.value.imag, e.method]
        )
    return rows


def _complex_json(z: complex) -> list[float]:
    return [z.real, z.imag]


# -- family ---------------------------------------------------------------


def cmd_family(args) -> int:
    tau = _parse_tau(args)
    y = float(args.y)
    if not 0.0 <= y <= 1.0:
        raise ValueError(f"--y {y} outside [0, 1]")
    seed = _resolve_seed(args)
    rng = np.random.default_rng(seed)
    monomial = y in (0.0, 1.0)

    grid = build_grid(tau, args.aperture, args.depth)
    phi = lambda lam: phi_y_eval(y, tau, lam)  # noqa: E731
    scan = detect_carapoint(phi, grid)
    quotient_rows = [[t, cara_quotient(phi, pt)] for t, pt in grid.ray]

    residual_max = None
    if not monomial:
        residual_max = 0.0
        for _ in range(args.pairs):
            residual_max = max(
                residual_max,
                phi_y_model_residual(y, tau, sample_bidisk(rng), sample_bidisk(rng)),
            )

    deltas = default_directions(tau)
    entries = []
    for delta in deltas:
        analytic = phi_y_directional_derivative(y, tau, delta)
        fd = derivative_fd(phi, tau, delta, phi_tau=1.0 + 0j)
        entries.append((delta, analytic, "analytic"))
        entries.append((delta, fd, "finite_difference"))
    defect = linearity_defect(
        lambda d: phi_y_directional_derivative(y, tau, d), default_direction_pairs(tau)
    )

    phi_probe = [0.25, 0.5, 0.75]
    samples = [
        {"r": r, "phi": _complex_json(phi(tau.ray_point(1.0 - r)))} for r in phi_probe
    ]

    report = {
        "command": "family",
        "y": y,
        "tau": [_complex_json(tau.tau1), _complex_json(tau.tau2)],
        "seed": seed,
        "phi_ray_samples": samples,
        "model_residual_max": residual_max,
        "carapoint": scan.carapoint,
        "alpha": scan.alpha,
        "quotient_max": scan.quotient_max,
        "linearity_defect": defect,
        "classification": "regular" if monomial else "purely_singular",
        "note": "monomial case" if monomial else "interior parameter",
        "derivatives": [
            {
                "delta": [_complex_json(d[0]), _complex_json(d[1])],
                "value": _complex_json(v),
                "method": m,
            }
            for d, v, m in entries
        ],
    }
    _emit_report(report, args)

    deriv_rows = [
        [d[0].real, d[0].imag, d[1].real, d[1].imag, v.real, v.imag, m]
        for d, v, m in entries
    ]
    _emit_tables(
        args,
        {
            "quotient": (["t", "quotient"], quotient_rows),
            "derivative": (
                ["re_d1", "im_d1", "re_d2", "im_d2", "re_D", "im_D", "method"],
                deriv_rows,
            ),
        },
    )
    return 0


# -- verify ---------------------------------------------------------------


def cmd_verify(args) -> int:
    model = load_model(args.model, eigtol=args.eigtol, isotol=args.isotol)
    seed = _resolve_seed(args)
    rng = np.random.default_rng(seed)

    residual_max = 0.0
    for _ in range(args.pairs):
        residual_max = max(
            residual_max, model.model_residual(sample_bidisk(rng), sample_bidisk(rng))
        )
    scan = contractivity_scan(model.pencil, args.samples, seed=seed)
    rows = julia_quotient_ray(model, exponents=_parse_ray_exponents(args))
    julia_max = max(r.residual for r in rows)

    ok = (
        residual_max <= args.residual_tol
        and scan.max_norm <= 1.0 + 1e-10
        and julia_max <= args.residual_tol
    )
    report = {
        "command": "verify",
        "model": str(args.model),
        "seed": seed,
        "dim": model.dim,
        "isometry_defect": model.isometry_defect,
        "model_residual_max": residual_max,
        "contractivity_max": scan.max_norm,
        "julia_residual_max": julia_max,
        "residual_tol": args.residual_tol,
        "ok": ok,
    }
    _emit_report(report, args)
    _emit_tables(
        args,
        {
            "julia": (
                ["t", "lhs", "rhs", "residual"],
                [[r.t, r.lhs, r.rhs, r.residual] for r in rows],
            )
        },
    )
    return 0 if ok else EXIT_RESIDUAL


# -- classify -------------------------------------------------------------


def cmd_classify(args) -> int:
    model = load_model(args.model, eigtol=args.eigtol, isotol=args.isotol)
    exponents = _parse_ray_exponents(args)
    report = classify_model(
        model,
        class_tol=args.class_tol,
        aperture=args.aperture,
        depth=args.depth,
        ray_exponents=exponents,
    )
    ray = model.v_at_tau(exponents)
    doc = {
        "command": "classify",
        "model": str(args.model),
        "dim": model.dim,
        "v_tau": [_complex_json(complex(z)) for z in ray.value],
        **report.to_json(),
    }
    _emit_report(doc, args)
    table = derivative_table(model)
    _emit_tables(
        args,
        {
            "derivative": (
                ["re_d1", "im_d1", "re_d2", "im_d2", "re_D", "im_D", "method"],
                _derivative_rows(table),
            )
        },
    )
    return 0


# -- derivative -----------------------------------------------------------


def cmd_derivative(args) -> int:
    model = load_model(args.model, eigtol=args.eigtol, isotol=args.isotol)
    if args.delta:
        deltas = [_parse_delta(d) for d in args.delta]
    else:
        deltas = default_directions(model.tau)
    table = derivative_table(model, deltas)
    doc = {
        "command": "derivative",
        "model": str(args.model),
        "agreement": table.agreement(),
        "entries": [
            {
                "delta": [_complex_json(e.delta[0]), _complex_json(e.delta[1])],
                "value": _complex_json(e.value),
                "method": e.method,
            }
            for e in table.entries
        ],
    }
    _emit_report(doc, args)
    _emit_tables(
        args,
        {
            "derivative": (
                ["re_d1", "im_d1", "re_d2", "im_d2", "re_D", "im_D", "method"],
                _derivative_rows(table),
            )
        },
    )
    return 0


# -- suite ----------------------------------------------------------------


def cmd_suite(args) -> int:
    seed = _resolve_seed(args)
    config = SuiteConfig(
        seed=seed,
        count=args.count,
        residual_tol=args.residual_tol,
        aperture=args.aperture,
        grid_depth=args.depth,
    )
    report = run_suite(config)
    doc = report.to_json()
    doc["command"] = "suite"
    _emit_report(doc, args)
    for name, (p, t) in sorted(report.totals().items()):
        sys.stderr.write(f"{name}: {p}/{t}\n")
    sys.stderr.write(f"suite: {'PASS' if report.passed else 'FAIL'}\n")
    return 0 if report.passed else EXIT_RESIDUAL


# -- parser ---------------------------------------------------------------


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--out", help="write the JSON report here instead of stdout")
    p.add_argument("--csv", help="base path for CSV tables (suffixes are appended)")
    p.add_argument("--seed", type=int, default=7, help="seed for randomized checks")
    p.add_argument("--eigtol", type=float, default=DEFAULT_EIGTOL)
    p.add_argument("--isotol", type=float, default=DEFAULT_ISOTOL)
    p.add_argument("--residual-tol", type=float, default=1e-9)
    p.add_argument("--class-tol", type=float, default=1e-7)
    p.add_argument("--aperture", "-c", type=float, default=2.0)
    p.add_argument("--depth", type=int, default=12)
    p.add_argument(
        "--ray-exponents",
        default="4,20",
        help="dyadic ray schedule t = 2^-k for k in LO..HI, as 'LO,HI'",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="caralab",
        description="Boundary-behavior laboratory for Schur-Agler functions on the bidisk",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("family", help="analyze one member of the scalar family")
    p.add_argument("--y", type=float, required=True, help="parameter in [0, 1]")
    p.add_argument("--tau", default="1,1", help="boundary point: 're1,re2' or 're1,im1,re2,im2'")
    p.add_argument("--tau-angles", default=None, help="boundary point as two angles in turns")
    p.add_argument("--pairs", type=int, default=200, help="random pairs for the model residual")
    _add_common(p)
    p.set_defaults(func=cmd_family)

    p = sub.add_parser("verify", help="verify a model JSON spec")
    p.add_argument("model", help="path to the model JSON file")
    p.add_argument("--pairs", type=int, default=400)
    p.add_argument("--samples", type=int, default=2000, help="contractivity scan points")
    _add_common(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("classify", help="classify a model at its boundary point")
    p.add_argument("model", help="path to the model JSON file")
    _add_common(p)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("derivative", help="tabulate directional derivatives of a model")
    p.add_argument("model", help="path to the model JSON file")
    p.add_argument(
        "--delta",
        action="append",
        help="direction 're1,re2' or 're1,im1,re2,im2'; repeatable",
    )
    _add_common(p)
    p.set_defaults(func=cmd_derivative)

    p = sub.add_parser("suite", help="run the randomized verification suite")
    p.add_argument("--count", type=int, default=50)
    _add_common(p)
    p.set_defaults(func=cmd_suite)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except NotIsometricError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_NOT_ISOMETRIC
    except SpectrumOutOfRangeError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_SPECTRUM
    except UnconvergedError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_UNCONVERGED
    except (
        InadmissibleDirectionError,  # caller-supplied direction, so a parameter error
        ValueError,
        KeyError,
        OSError,
        json.JSONDecodeError,
    ) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_BAD_PARAMS
    except CaralabError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_RESIDUAL


if __name__ == "__main__":
    sys.exit(main())
