"""cmt command line: analyze, simulate, examples.

Exit codes: 0 on success, 1 on any analysis error (module-tagged message on
stderr), 2 on usage errors.  CMT_ZERO_TOL overrides the default spectral
zero tolerance; an explicit --zero-tol flag wins over the environment.
"""

from __future__ import annotations

import argparse
import os
import sys

from . import manifold as manifold_mod
from . import plots, report, spectral, stability
from .casestudies import BUNDLED
from .errors import CmtError
from .sim import integrate, trajectory_csv
from .sysdsl import parse_system, shift_equilibrium


def _zero_tol_default() -> float:
    env = os.environ.get("CMT_ZERO_TOL")
    if env:
        try:
            return float(env)
        except ValueError:
            raise CmtError(f"CMT_ZERO_TOL={env!r} is not a number") from None
    return spectral.ZERO_TOL_DEFAULT


def _parse_matrix(text: str, n: int):
    words = text.replace(",", " ").split()
    if len(words) != n * n:
        raise CmtError(
            f"basis override needs {n * n} numbers (row-major), got {len(words)}"
        )
    vals = [float(w) for w in words]
    return [vals[i * n:(i + 1) * n] for i in range(n)]


def _parse_vector(text: str) -> list[float]:
    return [float(w) for w in text.replace(",", " ").split()]


def _analyze_pipeline(source: str, order: int, zero_tol: float,
                      basis_override: str | None, theta_samples: int,
                      r_max: float | None):
    spec = parse_system(source)
    point = spec.equilibrium if spec.equilibrium is not None else (0.0,) * spec.nvars
    spec = shift_equilibrium(spec, point)

    lin = spectral.linear_part(spec)
    basis = spec.basis
    if basis_override is not None:
        basis = _parse_matrix(basis_override, spec.nvars)
    split = spectral.eigen_split(lin, zero_tol=zero_tol, basis=basis)
    transformed = spectral.to_eigenbasis(spec, split)

    mani = manifold_mod.solve_centre_manifold(transformed, order=order)
    residual = manifold_mod.invariance_residual(transformed, mani)
    residual_max = residual.max_abs_coeff()
    c = split.centre_dim
    similar = split.basis_inv @ lin.matrix @ split.basis
    offblock_max = 0.0
    if split.centre_dim and split.stable_dim:
        offblock_max = max(
            float(abs(similar[:c, c:]).max()), float(abs(similar[c:, :c]).max())
        )
    reduced = manifold_mod.reduce(transformed, mani)
    parity = manifold_mod.parity_check(transformed, mani)

    radial = None
    if split.centre_dim == 1:
        verdict = stability.classify_1d(reduced)
    elif split.centre_dim == 2:
        radial = stability.radial_fixed_points(
            reduced, theta_samples=theta_samples, r_max=r_max
        )
        verdict = stability.planar_verdict(radial, reduced)
    else:
        verdict = stability.StabilityVerdict(
            "inconclusive", f"unclassified-{split.centre_dim}d-centre", 0, 0.0
        )

    doc = report.build_report(
        source_text=source,
        spec=spec,
        split=split,
        transformed=transformed,
        manifold=mani,
        residual_max=residual_max,
        reduced=reduced,
        verdict=verdict,
        parity=parity,
        radial=radial,
        order=order,
        zero_tol=zero_tol,
        offblock_max=offblock_max,
    )
    return doc, reduced, radial


def cmd_analyze(args) -> int:
    with open(args.file, encoding="utf-8") as fh:
        source = fh.read()
    zero_tol = args.zero_tol if args.zero_tol is not None else _zero_tol_default()
    doc, reduced, radial = _analyze_pipeline(
        source, args.order, zero_tol, args.basis_override,
        args.theta_samples, args.r_max,
    )
    text = report.render_json(doc) + "\n"
    if args.json:
        with open(args.json, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    if args.radial_csv:
        if radial is None:
            raise CmtError("no radial analysis for this system (centre is not 2-D)")
        with open(args.radial_csv, "w", encoding="utf-8") as fh:
            fh.write(report.radial_csv(radial))
    if args.plots:
        for path in plots.render_analysis_figures(reduced, radial, args.plots):
            print(f"wrote {path}", file=sys.stderr)
    return 0 if doc["status"] == "OK" else 1


def cmd_simulate(args) -> int:
    with open(args.file, encoding="utf-8") as fh:
        source = fh.read()
    spec = parse_system(source)
    x0 = _parse_vector(args.x0)
    if len(x0) != spec.nvars:
        raise CmtError(
            f"--x0 has {len(x0)} entries, system has {spec.nvars} variables"
        )
    traj = integrate(spec.field, x0, args.t, args.dt, labels=spec.variables)
    text = trajectory_csv(traj)
    if args.csv:
        with open(args.csv, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    if args.plots:
        for path in plots.render_simulation_figures(traj, args.plots):
            print(f"wrote {path}", file=sys.stderr)
    return 0


def cmd_examples(args) -> int:
    if args.name not in BUNDLED:
        known = ", ".join(sorted(BUNDLED))
        raise CmtError(f"unknown example {args.name!r}; available: {known}")
    path = args.out or f"{args.name}.sys"
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(BUNDLED[args.name])
    print(path)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cmt",
        description="Centre-manifold reduction and stability analysis of "
                    "polynomial ODE systems.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="run the full reduction pipeline")
    p.add_argument("file", help="system description file")
    p.add_argument("--order", type=int, default=2, choices=(2, 3, 4),
                   help="manifold expansion order (default 2)")
    p.add_argument("--zero-tol", type=float, default=None,
                   help="centre eigenvalue tolerance (default 1e-9 or CMT_ZERO_TOL)")
    p.add_argument("--basis-override", default=None, metavar="NUMBERS",
                   help="row-major n*n eigenbasis matrix, overrides the DSL stanza")
    p.add_argument("--theta-samples", type=int, default=360,
                   help="ray count for the polar analysis (default 360)")
    p.add_argument("--r-max", type=float, default=None,
                   help="radial search bound (default scales with the spectrum)")
    p.add_argument("--json", default=None, metavar="PATH",
                   help="write the report here instead of stdout")
    p.add_argument("--radial-csv", default=None, metavar="PATH",
                   help="write (theta, r, class) rows of the radial analysis")
    p.add_argument("--plots", default=None, metavar="DIR",
                   help="render figures into this directory")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("simulate", help="integrate the full system")
    p.add_argument("file", help="system description file")
    p.add_argument("--x0", required=True,
                   help="initial state, comma or space separated")
    p.add_argument("--t", type=float, default=20.0, help="time horizon (default 20)")
    p.add_argument("--dt", type=float, default=1e-3, help="step size (default 1e-3)")
    p.add_argument("--csv", default=None, metavar="PATH",
                   help="write the trajectory here instead of stdout")
    p.add_argument("--plots", default=None, metavar="DIR",
                   help="render figures into this directory")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("examples", help="write a bundled case-study file")
    p.add_argument("name", help="one of: " + ", ".join(sorted(BUNDLED)))
    p.add_argument("--out", default=None, help="output path (default <name>.sys)")
    p.set_defaults(func=cmd_examples)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except CmtError as err:
        print(err.tagged(), file=sys.stderr)
        return 1
    except OSError as err:
        print(f"cmt: {err}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
