"""Command-line front end.

Subcommands:

    divergence   compute divergences between named objects from a JSON file
    verify       run the seeded invariant suites
    recover      recover the metric and connections from a divergence
    sweep        tabulate divergences over a grid of alpha values as CSV

Exit codes: 0 success, 1 verification failure, 2 usage or input error,
3 numerical-domain error.

Input documents are JSON::

    {"kind": "classical", "objects": {"p": [1.0, 2.0], "q": [2.0, 1.0]}}
    {"kind": "quantum",
     "objects": {"rho": [[[2.0, 0.0], [1.0, 0.0]],
                         [[1.0, 0.0], [2.0, 0.0]]]}}

Quantum matrix entries are [re, im] pairs, row-major; matrices are
symmetrized on load and must be Hermitian and positive definite.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field

import numpy as np

from . import classical, quantum, recovery, suites
from .numkit import FDConfig, NumericalDomainError, gauss_legendre_rule

__all__ = ["CaseRecord", "Report", "load_document", "main"]

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_USAGE = 2
EXIT_NUMERICAL = 3

FAMILIES = ("canonical", "alpha", "kl", "tsallis", "relative-entropy", "furuichi")


class InputError(ValueError):
    """Malformed document, unknown name, or inconsistent flags."""


@dataclass(frozen=True)
class CaseRecord:
    """One computed divergence value, with its reference when available."""

    pair: tuple
    family: str
    method: str
    value: float
    alpha: float | None = None
    qparam: float | None = None
    reference: float | None = None
    abs_error: float | None = None
    rel_error: float | None = None

    def to_dict(self):
        return {
            "pair": list(self.pair),
            "family": self.family,
            "method": self.method,
            "value": self.value,
            "alpha": self.alpha,
            "q": self.qparam,
            "reference": self.reference,
            "abs_error": self.abs_error,
            "rel_error": self.rel_error,
        }

    @classmethod
    def from_dict(cls, data):
        return cls(
            pair=tuple(data["pair"]),
            family=data["family"],
            method=data["method"],
            value=data["value"],
            alpha=data["alpha"],
            qparam=data["q"],
            reference=data["reference"],
            abs_error=data["abs_error"],
            rel_error=data["rel_error"],
        )


@dataclass(frozen=True)
class Report:
    """Case records plus a pass/fail summary against a tolerance."""

    cases: tuple
    summary: dict = field(default_factory=dict)

    def to_dict(self):
        return {"cases": [c.to_dict() for c in self.cases], "summary": dict(self.summary)}

    @classmethod
    def from_dict(cls, data):
        return cls(
            cases=tuple(CaseRecord.from_dict(c) for c in data["cases"]),
            summary=dict(data["summary"]),
        )

    @classmethod
    def from_cases(cls, cases, tolerance):
        # the gate uses the (1 + |reference|)-normalized error; cases without
        # a reference value contribute nothing
        errors = [c.rel_error for c in cases if c.rel_error is not None]
        max_error = max(errors) if errors else 0.0
        return cls(
            cases=tuple(cases),
            summary={
                "max_error": max_error,
                "tolerance": tolerance,
                "pass": max_error <= tolerance,
            },
        )


def _reject_duplicate_keys(pairs):
    seen = {}
    for key, value in pairs:
        if key in seen:
            raise InputError(f"duplicate object name {key!r} in document")
        seen[key] = value
    return seen


def load_document(path):
    """Load and validate an input document; returns (kind, {name: object})."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            doc = json.load(fh, object_pairs_hook=_reject_duplicate_keys)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"invalid JSON in {path}: {exc}") from exc
    if not isinstance(doc, dict):
        raise InputError("document must be a JSON object")
    kind = doc.get("kind")
    if kind not in ("classical", "quantum"):
        raise InputError(f"document kind must be 'classical' or 'quantum', got {kind!r}")
    objects = doc.get("objects")
    if not isinstance(objects, dict) or not objects:
        raise InputError("document must provide a nonempty 'objects' mapping")
    loaded = {}
    for name, raw in objects.items():
        try:
            if kind == "classical":
                loaded[name] = classical.as_measure(raw)
            else:
                loaded[name] = quantum.PositiveOperator(_complex_matrix(raw))
        except (ValueError, ArithmeticError) as exc:
            raise InputError(f"object {name!r} is invalid: {exc}") from exc
    return kind, loaded


def _complex_matrix(raw):
    arr = np.asarray(raw, dtype=float)
    if arr.ndim != 3 or arr.shape[2] != 2 or arr.shape[0] != arr.shape[1]:
        raise ValueError(
            "a quantum object must be a square matrix of [re, im] entry pairs"
        )
    return arr[..., 0] + 1j * arr[..., 1]


def _parse_pairs(text, names):
    if text:
        pairs = []
        for chunk in text.split(","):
            parts = chunk.split(":")
            if len(parts) != 2 or not all(parts):
                raise InputError(f"malformed pair {chunk!r}; expected 'name1:name2'")
            pairs.append(tuple(parts))
    else:
        pairs = [(a, b) for a in names for b in names if a != b]
        if not pairs:
            raise InputError("document holds a single object; give --pairs explicitly")
    for a, b in pairs:
        for name in (a, b):
            if name not in names:
                raise InputError(f"unknown object name {name!r}")
    return pairs


def _parse_alphas(text):
    values = []
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise InputError("alpha range must be 'start:stop:step'")
        try:
            start, stop, step = (float(x) for x in parts)
        except ValueError as exc:
            raise InputError(f"malformed alpha range {text!r}") from exc
        if step <= 0:
            raise InputError("alpha range step must be positive")
        x = start
        while x <= stop + 1e-12:
            values.append(round(x, 12))
            x += step
    else:
        for chunk in text.split(","):
            chunk = chunk.strip()
            if not chunk:
                continue
            try:
                values.append(float(chunk))
            except ValueError as exc:
                raise InputError(f"malformed alpha value {chunk!r}") from exc
    if not values:
        raise InputError("empty alpha list")
    for a in values:
        if not (-1.0 < a < 1.0):
            raise InputError(f"alpha values must lie inside (-1, 1), got {a}")
    return sorted(values)


def _classical_value(family, method, p, q, alpha, qparam, rule):
    if family in ("canonical", "alpha"):
        if method == "quadrature":
            return classical.canonical_divergence_numeric(p, q, alpha, rule)
        return classical.alpha_divergence_closed(p, q, alpha)
    if family == "kl":
        return classical.kl_extended(p, q)
    if family == "tsallis":
        return classical.tsallis_q_divergence(p, q, qparam)
    raise InputError(f"family {family!r} is not defined on classical documents")


def _quantum_value(family, method, r1, r2, alpha, qparam, rule):
    if family in ("canonical", "alpha"):
        if method == "quadrature":
            return quantum.canonical_divergence_numeric_q(r1, r2, alpha, rule)
        return quantum.quantum_alpha_divergence_closed(r1, r2, alpha)
    if family == "relative-entropy":
        return quantum.quantum_relative_entropy(r1, r2, extended=True)
    if family == "tsallis":
        return quantum.quantum_q_divergence(r1, r2, qparam)
    if family == "furuichi":
        return quantum.furuichi_q_divergence(r1, r2, qparam)
    raise InputError(f"family {family!r} is not defined on quantum documents")


def _check_family_flags(args, method):
    needs_alpha = args.family in ("canonical", "alpha")
    needs_q = args.family in ("tsallis", "furuichi")
    if needs_alpha and args.alpha is None:
        raise InputError(f"--alpha is required for family {args.family!r}")
    if needs_q and args.q is None:
        raise InputError(f"--q is required for family {args.family!r}")
    if not needs_q and args.q is not None:
        raise InputError("--q is only meaningful with the tsallis/furuichi families")
    if not needs_alpha and args.alpha is not None:
        raise InputError(f"--alpha is not meaningful with family {args.family!r}")
    if not needs_alpha and method != "closed":
        raise InputError(
            f"family {args.family!r} has no quadrature path; use --method closed"
        )


def cmd_divergence(args):
    kind, objects = load_document(args.input)
    if args.kind and args.kind != kind:
        raise InputError(f"--kind {args.kind} does not match document kind {kind!r}")
    default_method = "quadrature" if args.family == "canonical" else "closed"
    method = args.method or default_method
    _check_family_flags(args, method)
    pairs = _parse_pairs(args.pairs, list(objects))
    rule = gauss_legendre_rule(args.nodes)
    compute = _classical_value if kind == "classical" else _quantum_value
    cases = []
    for a, b in pairs:
        x, y = objects[a], objects[b]
        if method == "both":
            value = compute(args.family, "quadrature", x, y, args.alpha, args.q, rule)
            reference = compute(args.family, "closed", x, y, args.alpha, args.q, rule)
            abs_err = abs(value - reference)
            rel_err = abs_err / (1.0 + abs(reference))
        else:
            value = compute(args.family, method, x, y, args.alpha, args.q, rule)
            reference = abs_err = rel_err = None
        cases.append(
            CaseRecord(
                pair=(a, b),
                family=args.family,
                method=method,
                value=value,
                alpha=args.alpha,
                qparam=args.q,
                reference=reference,
                abs_error=abs_err,
                rel_error=rel_err,
            )
        )
    report = Report.from_cases(cases, args.tolerance)
    _emit(report.to_dict(), args.out)
    return EXIT_OK


def cmd_verify(args):
    records = suites.run_suite(args.suite, args.trials, args.seed, args.tolerance)
    failed = [r for r in records if not r["pass"]]
    worst = max(
        records, key=lambda r: r["max_error"] / r["tolerance"] if r["tolerance"] else 0.0
    )
    report = {
        "suite": args.suite,
        "seed": args.seed,
        "trials": args.trials,
        "checks": records,
        "summary": {"pass": not failed, "worst": worst},
    }
    _emit(report, args.out)
    if failed:
        print(f"verification failed, worst case: {json.dumps(worst)}", file=sys.stderr)
        return EXIT_VERIFY_FAILED
    return EXIT_OK


def cmd_recover(args):
    kind, objects = load_document(args.input)
    if args.kind and args.kind != kind:
        raise InputError(f"--kind {args.kind} does not match document kind {kind!r}")
    if args.point not in objects:
        raise InputError(f"unknown object name {args.point!r}")
    cfg = FDConfig(step=args.step, order=4)

    if args.reference_euclidean:
        divergence = recovery.half_squared_distance
        if kind == "classical":
            point = objects[args.point]
        else:
            basis = quantum.hermitian_basis(objects[args.point].dim)
            point = quantum.theta_coordinates(objects[args.point].matrix, basis)
    elif kind == "classical":
        if args.alpha is None:
            raise InputError("--alpha is required to recover from the alpha-divergence")
        alpha = args.alpha
        point = objects[args.point]

        def divergence(x, y):
            return classical.alpha_divergence_closed(x, y, alpha)

    else:
        if args.alpha is None:
            raise InputError("--alpha is required to recover from the alpha-divergence")
        alpha = args.alpha
        rho = objects[args.point]
        basis = quantum.hermitian_basis(rho.dim)
        point = quantum.theta_coordinates(quantum.alpha_embedding(rho, alpha), basis)

        def divergence(x, y):
            r1 = quantum.operator_from_chart(x, basis, alpha)
            r2 = quantum.operator_from_chart(y, basis, alpha)
            return quantum.quantum_alpha_divergence_closed(r1, r2, alpha)

    structure = recovery.recover_structure(divergence, point, cfg)
    defect = recovery.duality_defect(structure, divergence, cfg)
    curvature = None
    if point.size <= 4:
        curvature = recovery.curvature_max(divergence, point, cfg)
    report = {
        "kind": kind,
        "point": args.point,
        "alpha": args.alpha,
        "step": args.step,
        "metric": structure.metric.tolist(),
        "christoffel": structure.christoffel.tolist(),
        "christoffel_dual": structure.christoffel_dual.tolist(),
        "duality_defect": defect,
        "curvature_max": curvature,
        "summary": {
            "defect_within": defect <= args.tolerance,
            "curvature_within": curvature is None or curvature <= 1e-3,
        },
    }
    _emit(report, args.out)
    return EXIT_OK


def cmd_sweep(args):
    kind, objects = load_document(args.input)
    if args.kind and args.kind != kind:
        raise InputError(f"--kind {args.kind} does not match document kind {kind!r}")
    parts = args.pair.split(":")
    if len(parts) != 2 or not all(parts):
        raise InputError(f"malformed --pair {args.pair!r}; expected 'name1:name2'")
    for name in parts:
        if name not in objects:
            raise InputError(f"unknown object name {name!r}")
    alphas = _parse_alphas(args.alphas)
    rule = gauss_legendre_rule(args.nodes)
    x, y = objects[parts[0]], objects[parts[1]]

    if kind == "classical":
        limit = classical.kl_extended(x, y)
        ref_column = "kl_reference"
        rows = [
            (
                a,
                classical.canonical_divergence_numeric(x, y, a, rule),
                classical.alpha_divergence_closed(x, y, a),
            )
            for a in alphas
        ]
    else:
        limit = quantum.quantum_relative_entropy(x, y, extended=True)
        ref_column = "relative_entropy_reference"
        rows = [
            (
                a,
                quantum.canonical_divergence_numeric_q(x, y, a, rule),
                quantum.quantum_alpha_divergence_closed(x, y, a),
            )
            for a in alphas
        ]

    lines = [f"alpha,canonical_numeric,closed,{ref_column},abs_gap_to_limit"]
    for a, numeric, closed in rows:
        gap = abs(closed - limit)
        lines.append(f"{a!r},{numeric!r},{closed!r},{limit!r},{gap!r}")
    text = "\n".join(lines) + "\n"
    with open(args.out, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)
    return EXIT_OK


def _emit(payload, out):
    text = json.dumps(payload, indent=2)
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def build_parser():
    parser = argparse.ArgumentParser(
        prog="alphadiv",
        description="Alpha-divergences on positive measures and positive operators, "
        "by closed form or geodesic quadrature.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_div = sub.add_parser("divergence", help="compute divergences between named objects")
    p_div.add_argument("input", help="JSON input document")
    p_div.add_argument("--kind", choices=("classical", "quantum"))
    p_div.add_argument("--family", choices=FAMILIES, default="alpha")
    p_div.add_argument("--alpha", type=float)
    p_div.add_argument("--q", type=float)
    p_div.add_argument("--method", choices=("closed", "quadrature", "both"))
    p_div.add_argument("--nodes", type=int, default=64)
    p_div.add_argument("--pairs", help="comma-separated name1:name2 pairs (default: all)")
    p_div.add_argument("--tolerance", type=float, default=1e-8)
    p_div.add_argument("--out", help="write the JSON report here instead of stdout")
    p_div.set_defaults(func=cmd_divergence)

    p_ver = sub.add_parser("verify", help="run the seeded invariant suites")
    p_ver.add_argument(
        "--suite", choices=("classical", "quantum", "recovery", "all"), default="all"
    )
    p_ver.add_argument("--trials", type=int, default=100)
    p_ver.add_argument("--seed", type=int, required=True)
    p_ver.add_argument(
        "--tolerance",
        type=float,
        default=None,
        help="override the per-suite default tolerance "
        "(classical 1e-9, quantum 1e-8, recovery 1e-4)",
    )
    p_ver.add_argument("--out", help="write the JSON report here instead of stdout")
    p_ver.set_defaults(func=cmd_verify)

    p_rec = sub.add_parser("recover", help="recover metric and connections at a point")
    p_rec.add_argument("input", help="JSON input document")
    p_rec.add_argument("--kind", choices=("classical", "quantum"))
    p_rec.add_argument("--alpha", type=float)
    p_rec.add_argument("--point", required=True, help="name of the base point object")
    p_rec.add_argument("--step", type=float, default=1e-3)
    p_rec.add_argument("--tolerance", type=float, default=1e-4)
    p_rec.add_argument(
        "--reference-euclidean",
        action="store_true",
        help="recover from the built-in half squared distance instead",
    )
    p_rec.add_argument("--out", help="write the JSON report here instead of stdout")
    p_rec.set_defaults(func=cmd_recover)

    p_swp = sub.add_parser("sweep", help="tabulate divergences over alpha values")
    p_swp.add_argument("input", help="JSON input document")
    p_swp.add_argument("--kind", choices=("classical", "quantum"))
    p_swp.add_argument("--pair", required=True, help="name1:name2")
    p_swp.add_argument("--alphas", required=True, help="'start:stop:step' or 'a,b,c'")
    p_swp.add_argument("--nodes", type=int, default=64)
    p_swp.add_argument("--out", required=True, help="CSV output path")
    p_swp.set_defaults(func=cmd_sweep)

    return parser


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else 0
    try:
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except NumericalDomainError as exc:
        print(f"numerical error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
