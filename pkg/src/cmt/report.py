"""Analysis report assembly and deterministic serialization.

The JSON emitter is hand-rolled so float formatting is pinned to 17
significant digits and key order is exactly insertion order: identical
inputs and flags must produce byte-identical reports.
"""

from __future__ import annotations

import hashlib
import math

from .manifold import CentreManifoldMap, ParityReport, ReducedSystem
from .spectral import SpectralSplit, TransformedSystem
from .stability import RadialAnalysis, StabilityVerdict
from .sysdsl import SystemSpec, render_system

SCHEMA_VERSION = 1
RESIDUAL_TOL = 1e-8


def _fmt_float(x: float) -> str:
    if not math.isfinite(x):
        raise ValueError(f"non-finite value {x!r} in report")
    if x == int(x) and abs(x) < 1e16:
        return f"{int(x)}.0"
    return format(x, ".17g")


def render_json(value, indent: int = 0) -> str:
    """Deterministic pretty JSON: insertion-ordered keys, pinned floats."""
    pad = "  " * indent
    inner = "  " * (indent + 1)
    if isinstance(value, dict):
        if not value:
            return "{}"
        rows = [
            f'{inner}"{k}": {render_json(v, indent + 1)}' for k, v in value.items()
        ]
        return "{\n" + ",\n".join(rows) + "\n" + pad + "}"
    if isinstance(value, (list, tuple)):
        if not value:
            return "[]"
        rows = [f"{inner}{render_json(v, indent + 1)}" for v in value]
        return "[\n" + ",\n".join(rows) + "\n" + pad + "]"
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        return _fmt_float(value)
    if isinstance(value, str):
        out = value.replace("\\", "\\\\").replace('"', '\\"').replace("\n", "\\n")
        return f'"{out}"'
    if value is None:
        return "null"
    raise TypeError(f"cannot serialize {type(value)!r}")


def _poly_terms(poly) -> list[dict]:
    return [
        {"exponents": list(e), "value": float(c)} for e, c in poly.sorted_terms()
    ]


def manifold_coefficients(manifold: CentreManifoldMap) -> list[dict]:
    """Flat list of {degree, exponents, stable index, value} entries."""
    out = []
    for j, poly in enumerate(manifold.h):
        for e, c in poly.sorted_terms():
            out.append(
                {
                    "degree": sum(e),
                    "exponents": list(e),
                    "stable_index": j,
                    "value": float(c),
                }
            )
    out.sort(key=lambda d: (d["degree"], [-x for x in d["exponents"]], d["stable_index"]))
    return out


def build_report(
    source_text: str,
    spec: SystemSpec,
    split: SpectralSplit,
    transformed: TransformedSystem,
    manifold: CentreManifoldMap,
    residual_max: float,
    reduced: ReducedSystem,
    verdict: StabilityVerdict,
    parity: ParityReport,
    radial: RadialAnalysis | None,
    order: int,
    zero_tol: float,
    offblock_max: float = 0.0,
) -> dict:
    labels = transformed.labels
    centre_labels = labels[: split.centre_dim]
    status = "OK" if residual_max <= RESIDUAL_TOL else "FAILED"
    report = {
        "schema_version": SCHEMA_VERSION,
        "status": status,
        "input": {
            "sha256": hashlib.sha256(source_text.encode("utf-8")).hexdigest(),
            "canonical": render_system(spec),
        },
        "eigenvalues": [
            {"re": e.re, "im": e.im, "kind": e.kind} for e in split.eigenvalues
        ],
        "centre_dim": split.centre_dim,
        "stable_dim": split.stable_dim,
        "basis": [[float(v) for v in row] for row in split.basis],
        "centre_block": [[float(v) for v in row] for row in split.centre_block],
        "stable_block": [[float(v) for v in row] for row in split.stable_block],
        "manifold": {
            "order": manifold.order,
            "coefficients": manifold_coefficients(manifold),
            "text": [
                f"{labels[split.centre_dim + j]} = {poly.render(centre_labels)}"
                for j, poly in enumerate(manifold.h)
            ],
        },
        "reduced_system": {
            "variables": list(centre_labels),
            "equations": [
                f"d{name}/dt = {poly.render(centre_labels)}"
                for name, poly in zip(centre_labels, reduced.field)
            ],
            "terms": [
                {"component": name, "terms": _poly_terms(poly)}
                for name, poly in zip(centre_labels, reduced.field)
            ],
        },
        "stability": {
            "kind": verdict.kind,
            "mechanism": verdict.mechanism,
            "leading_degree": verdict.leading_degree,
            "leading_coefficient": verdict.leading_coefficient,
        },
        "parity": {
            "f_parity": parity.f_parity,
            "g_parity": parity.g_parity,
            "predicted_h_parity": parity.predicted_h_parity,
            "observed_odd_mass": parity.observed_odd_mass,
        },
    }
    if radial is not None:
        report["radial_analysis"] = {
            "theta_samples": radial.theta_samples,
            "r_max": radial.r_max,
            "rays": [
                {
                    "theta": ray.theta,
                    "tangential": ray.tangential,
                    "fixed_points": [
                        {"r": p.r, "class": p.classification}
                        for p in ray.fixed_points
                    ],
                }
                for ray in radial.rays
            ],
        }
    report["diagnostics"] = {
        "zero_tol": zero_tol,
        "order": order,
        "residual_max": residual_max,
        "residual_tol": RESIDUAL_TOL,
        "offblock_max": offblock_max,
        "offblock_tol": 1e-9,
        "prune_tol": 1e-14,
    }
    return report


def radial_csv(radial: RadialAnalysis) -> str:
    """CSV of (theta, r*, class) rows for every reported fixed point."""
    lines = ["theta,r,class"]
    for ray in radial.rays:
        for p in ray.fixed_points:
            lines.append(
                f"{format(ray.theta, '.17g')},{format(p.r, '.17g')},{p.classification}"
            )
    return "\n".join(lines) + "\n"
