"""Command-line front end: body specs in, CSV/JSON experiment tables out.

Exit codes: 0 on success, 2 on spec/parameter validation failures, 3 on
numeric failures.  Every subcommand is deterministic given identical flags and
seed; reruns produce byte-identical output.  Numeric CSV fields carry 17
significant digits; JSON floats use shortest round-trip representation.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass

import numpy as np

from .bodies import make_body, spec_from_json, spec_to_json
from .detector import DetectionConfig, detect_body
from .errors import DualQuermassError, ValidationError
from .harmonics import build_multiplier_table
from .sections import (
    SectionQuery,
    dual_kubota_check,
    dual_steiner_check,
    moment_identity_check,
    section_function,
)


def _fmt(x) -> str:
    return format(float(x), ".17g")


def _parse_xi(text: str, n: int) -> np.ndarray:
    if text.startswith("axis:"):
        idx = int(text[5:])
        if not 0 <= idx < n:
            raise ValidationError(f"axis index must be in 0..{n - 1}, got {idx}")
        xi = np.zeros(n)
        xi[idx] = 1.0
        return xi
    if text.startswith("vec:"):
        parts = [float(v) for v in text[4:].split(",")]
        if len(parts) != n:
            raise ValidationError(
                f"direction has {len(parts)} components, body has dimension {n}"
            )
        vec = np.asarray(parts, dtype=float)
        norm = np.linalg.norm(vec)
        if norm <= 0.0:
            raise ValidationError("direction vector must be nonzero")
        return vec / norm
    raise ValidationError("--xi must look like axis:K or vec:x,y,...")


def _parse_int_list(text: str) -> list:
    return [int(v) for v in text.split(",") if v != ""]


def _load_body(path: str):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ValidationError(f"cannot read body spec {path!r}: {exc}") from exc
    return make_body(spec_from_json(data))


def _write_output(text: str, out_path: str | None):
    if out_path is None:
        sys.stdout.write(text)
    else:
        with open(out_path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


def _table_text(header, rows, fmt: str) -> str:
    if fmt == "json":
        payload = [dict(zip(header, row)) for row in rows]
        return json.dumps(payload, indent=2) + "\n"
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(str(v) for v in row))
    return "\n".join(lines) + "\n"


@dataclass
class RunConfig:
    """Validated parameters of one CLI invocation."""

    subcommand: str
    body_path: str | None = None
    n: int | None = None
    m: int | None = None
    i: int | None = None
    l: int | None = None
    k: int | None = None
    q: float | None = None
    t: float = 0.0
    xi: str = "axis:0"
    degree: int = 24
    outer_degree: int | None = None
    grid_size: int = 64
    samples: int = 10_000
    eps: str = "0.25,0.5,0.75,1.0,1.25,1.5,1.75,2.0"
    m_list: str = "2,4,6"
    n_list: str = "3,4,5"
    seed: int = 0
    out: str | None = None
    format: str = "csv"
    threads: int = 1


def cmd_eval_section(config: RunConfig) -> int:
    body = _load_body(config.body_path)
    if config.n is not None and config.n != body.n:
        raise ValidationError(f"--n {config.n} does not match body dimension {body.n}")
    xi = _parse_xi(config.xi, body.n)
    samples = section_function(
        body,
        config.m,
        xi,
        grid_size=config.grid_size,
        degree=config.degree,
    )
    rows = [( _fmt(t), _fmt(v)) for t, v in zip(samples.t_grid, samples.values)]
    _write_output(_table_text(("t", "value"), rows, config.format), config.out)
    return 0


def cmd_detect(config: RunConfig) -> int:
    body = _load_body(config.body_path)
    if config.n is not None and config.n != body.n:
        raise ValidationError(f"--n {config.n} does not match body dimension {body.n}")
    det = DetectionConfig(seed=config.seed, quad_degree=config.degree, threads=config.threads)
    report = detect_body(body, config.m, det)
    payload = {
        "body": spec_to_json(body.spec),
        "n": body.n,
        "m": config.m,
        "verdict": "polynomial" if report.is_polynomial else "non-polynomial",
        "degree_bound": report.degree_bound,
        "per_direction": [
            {
                "xi": list(r.xi),
                "degree": r.degree,
                "residual": r.residual,
            }
            for r in report.per_direction
        ],
        "ellipsoid_residual": report.ellipsoid.residual,
    }
    _write_output(json.dumps(payload, indent=2) + "\n", config.out)
    return 0


def cmd_multipliers(config: RunConfig) -> int:
    l_max = config.l if config.l is not None else 6
    k_max = config.k if config.k is not None else 6
    m_values = _parse_int_list(config.m_list) if config.m is None else [config.m]
    n_values = _parse_int_list(config.n_list) if config.n is None else [config.n]
    table = build_multiplier_table(l_max, k_max, m_values, n_values)
    rows = []
    for l, k, m, n, value in table.rows():
        rows.append(
            (
                l,
                k,
                m,
                n,
                value.numerator,
                value.denominator,
                str(value == 0).lower(),
                str(not table.predicted_nonzero(l, k, m)).lower(),
            )
        )
    header = ("l", "k", "m", "n", "numerator", "denominator", "is_zero", "predicted_zero")
    _write_output(_table_text(header, rows, config.format), config.out)
    return 0


def cmd_verify_identity(config: RunConfig) -> int:
    body = _load_body(config.body_path)
    lhs, rhs = moment_identity_check(
        body,
        config.m,
        config.t,
        degree=config.degree,
        outer_degree=config.outer_degree,
    )
    rows = [(_fmt(lhs), _fmt(rhs), _fmt(0.0))]
    _write_output(_table_text(("lhs", "rhs", "stderr"), rows, config.format), config.out)
    return 0


def cmd_kubota(config: RunConfig) -> int:
    body = _load_body(config.body_path)
    report = dual_kubota_check(
        body, config.i, samples=config.samples, seed=config.seed, degree=config.degree
    )
    rows = [(_fmt(report.lhs), _fmt(report.rhs), _fmt(report.stderr))]
    _write_output(_table_text(("lhs", "rhs", "stderr"), rows, config.format), config.out)
    return 0


def cmd_steiner(config: RunConfig) -> int:
    body = _load_body(config.body_path)
    eps = [float(v) for v in config.eps.split(",") if v != ""]
    report = dual_steiner_check(body, eps, degree=config.degree)
    rows = [(_fmt(e), _fmt(v)) for e, v in zip(report.epsilons, report.volumes)]
    _write_output(_table_text(("epsilon", "volume"), rows, config.format), config.out)
    return 0


_COMMANDS = {
    "eval-section": cmd_eval_section,
    "detect": cmd_detect,
    "multipliers": cmd_multipliers,
    "verify-identity": cmd_verify_identity,
    "kubota": cmd_kubota,
    "steiner": cmd_steiner,
}


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dualquermass",
        description="Dual quermassintegrals, dual section functions, and "
        "polynomial-integrability detection for star bodies.",
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)

    def add_common(p, body_required=True):
        if body_required:
            p.add_argument("--body", required=True, help="path to a JSON body spec")
        p.add_argument("--n", type=int, default=None, help="ambient dimension check")
        p.add_argument("--degree", type=int, default=24, help="quadrature degree")
        p.add_argument("--seed", type=int, default=0, help="RNG seed")
        p.add_argument("--out", default=None, help="output path (default stdout)")
        p.add_argument("--format", choices=("csv", "json"), default="csv")
        p.add_argument("--threads", type=int, default=1, help="worker thread cap")

    p = sub.add_parser("eval-section", help="sample the m-th dual section function")
    add_common(p)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--xi", default="axis:0", help="axis:K or vec:x,y,...")
    p.add_argument("--grid-size", type=int, default=64)

    p = sub.add_parser("detect", help="polynomial-integrability verdict for a body")
    add_common(p)
    p.add_argument("--m", type=int, required=True)

    p = sub.add_parser("multipliers", help="exact multiplier table as CSV")
    add_common(p, body_required=False)
    p.add_argument("--l", type=int, default=6, help="max harmonic degree")
    p.add_argument("--k", type=int, default=6, help="max derivative order")
    p.add_argument("--m", type=int, default=None, help="single in-plane power")
    p.add_argument("--m-list", default="2,4,6")
    p.add_argument("--n-list", default="3,4,5")

    p = sub.add_parser("verify-identity", help="moment identity two-path check")
    add_common(p)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--t", type=float, default=0.0)
    p.add_argument("--outer-degree", type=int, default=None)

    p = sub.add_parser("kubota", help="Monte-Carlo dual Kubota check")
    add_common(p)
    p.add_argument("--i", type=int, required=True)
    p.add_argument("--samples", type=int, default=10_000)

    p = sub.add_parser("steiner", help="radial Steiner expansion table")
    add_common(p)
    p.add_argument("--eps", default="0.25,0.5,0.75,1.0,1.25,1.5,1.75,2.0")

    return parser


def _config_from_namespace(ns: argparse.Namespace) -> RunConfig:
    config = RunConfig(subcommand=ns.subcommand)
    mapping = {
        "body": "body_path",
        "grid_size": "grid_size",
        "m_list": "m_list",
        "n_list": "n_list",
        "outer_degree": "outer_degree",
    }
    for key, value in vars(ns).items():
        if key == "subcommand" or value is None:
            continue
        setattr(config, mapping.get(key, key), value)
    return config


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    config = _config_from_namespace(ns)
    try:
        return _COMMANDS[config.subcommand](config)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except DualQuermassError as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return 3


def entrypoint():
    raise SystemExit(main())


if __name__ == "__main__":
    entrypoint()
