"""Command-line front end.

Every command builds a report dictionary; ``--json`` prints it as JSON, the
default prints it as indented ``key: value`` lines.  Exit codes: 0 when the
verdict holds, 1 when it fails (or a decomposition does not exist), 2 on usage
or input errors.  Timing goes to standard error so reports stay deterministic.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from typing import Any, Sequence

import numpy as np

from . import blocks, catalog, field, gma, hypotheses, lie, traces
from .algebra import center_basis, validate_algebra
from .serialize import (SpecError, algebra_from_json, bilinear_to_json, bilinear_from_json,
                        gma_from_json, gma_to_json, linear_from_json, linear_to_json,
                        to_jsonable, vector_from_json)


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # raise instead of exiting so execute() stays pure
        raise UsageError(f"{self.prog}: {message}")


def _load_json(path: str) -> Any:
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise SpecError("$", f"{path} is not valid JSON ({exc.msg} at line {exc.lineno})") from None


def _load_gma(path: str, check: bool = True) -> gma.Gma:
    try:
        g = gma_from_json(_load_json(path))
    except SpecError as exc:
        raise SpecError(exc.path, f"{path}: {exc.message}") from None
    if check:
        bad = gma.validate_gma(g)
        if bad:
            raise SpecError("$", f"{path}: not a generalized matrix algebra ({bad[0]})")
    return g


def _verdict(v: gma.Verdict) -> dict:
    out = {"holds": v.holds}
    if v.witness is not None:
        out["witness"] = to_jsonable(v.witness)
    if v.note:
        out["note"] = v.note
    return out


def _violations(vs) -> list:
    return [{"axiom": v.axiom, "index": list(v.index)} for v in vs]


# -- commands ---------------------------------------------------------------------

def cmd_validate(args) -> tuple[dict, int]:
    doc = _load_json(args.spec)
    if isinstance(doc, dict) and "A" in doc:
        try:
            g = gma_from_json(doc)
        except SpecError as exc:
            raise SpecError(exc.path, f"{args.spec}: {exc.message}") from None
        bad = gma.validate_gma(g)
        report = {"kind": "gma", "dims": dict(zip("AMNB", g.dims))}
    else:
        a = algebra_from_json(doc)
        bad = validate_algebra(a)
        report = {"kind": "algebra", "dim": a.dim}
    report.update(ok=not bad, violations=_violations(bad))
    return report, 0 if not bad else 1


def cmd_catalog(args) -> tuple[dict, int]:
    name, params = args.name, args.params
    try:
        if name == "full":
            n, k, p = (int(x) for x in params)
            g = catalog.full(n, k, p)
        elif name == "triangular":
            n, p = (int(x) for x in params)
            g = catalog.triangular(n, p)
        elif name == "nonloyal-demo":
            (p,) = (int(x) for x in params)
            g = catalog.nonloyal_demo(p)
        elif name == "peirce":
            alg_path, e_text = params
            a = algebra_from_json(_load_json(alg_path))
            try:
                e_doc = json.loads(e_text) if e_text.lstrip().startswith("[") else \
                    [int(x) for x in e_text.split(",")]
            except ValueError:
                raise UsageError(f"idempotent must be a JSON list or comma list, got {e_text!r}") from None
            e = vector_from_json(e_doc, a.dim, a.p, "$idempotent")
            g = catalog.peirce(a, e)
        else:
            raise UsageError(f"unknown catalog entry {name!r}")
    except (TypeError, ValueError) as exc:
        if isinstance(exc, (SpecError, gma.NotIdempotent, gma.TrivialIdempotent)):
            raise
        raise UsageError(f"catalog {name}: {exc}") from None
    return gma_to_json(g), 0


def cmd_center(args) -> tuple[dict, int]:
    g = _load_gma(args.gma)
    c = gma.gma_center(g)
    agrees = field.same_span(c.center_basis, center_basis(g.flat), g.p, g.dim)
    return {
        "dims": dict(zip("AMNB", g.dims)),
        "center_dim": c.dim,
        "center_basis": c.center_basis,
        "piA_basis": c.piA_basis,
        "piB_basis": c.piB_basis,
        "phi": c.phi.T,  # row r = φ(piA_basis[r])
        "phi_well_defined": c.well_defined,
        "agrees_with_flat_center": agrees,
    }, 0 if agrees else 1


def cmd_hypotheses(args) -> tuple[dict, int]:
    g = _load_gma(args.gma)
    r = hypotheses.hypothesis_report(g, args.theorem, args.enum_cap)
    return {
        "theorem": r.theorem,
        "holds": r.holds,
        "failed": r.failed(),
        "conditions": {k: _verdict(v) for k, v in r.conditions.items()},
        "structural": {k: _verdict(v) for k, v in r.extras.items()},
    }, 0 if r.holds else 1


def cmd_trace_space(args) -> tuple[dict, int]:
    g = _load_gma(args.gma)
    basis = traces.trace_space(g, args.kind, args.enum_cap)
    vecs = np.array([traces.sym_to_vector(q) for q in basis], dtype=np.int64).reshape(len(basis), -1)
    pb = traces.properness_basis(g)
    return {
        "kind": args.kind,
        "dim": len(basis),
        "properness_dim": int(pb.shape[0]),
        "contained_in_proper": field.span_contains_all(pb, vecs, g.p, pb.shape[1]),
        "basis": [bilinear_to_json(q) for q in basis],
    }, 0


def _load_bilinear(path: str, g: gma.Gma) -> traces.BilinearMap:
    try:
        q = bilinear_from_json(_load_json(path), g.p)
    except SpecError as exc:
        raise SpecError(exc.path, f"{path}: {exc.message}") from None
    if q.dim != g.dim:
        raise SpecError("$.dim", f"{path}: bilinear map has dim {q.dim}, algebra has {g.dim}")
    return q


def _decomposition(dec: traces.ProperDecomposition) -> dict:
    return {"z": dec.z, "mu": linear_to_json(dec.mu), "nu": bilinear_to_json(dec.nu)}


def cmd_decompose_trace(args) -> tuple[dict, int]:
    g = _load_gma(args.gma)
    q = _load_bilinear(args.bilinear, g)
    dec = traces.proper_trace_decompose(g, q)
    if dec is None:
        return {"proper": False}, 1
    res = traces.decomposition_residual(g, q, dec)
    return {"proper": True, "residual_zero": not res.any(), **_decomposition(dec)}, 0


def cmd_block_components(args) -> tuple[dict, int]:
    g = _load_gma(args.gma)
    q = _load_bilinear(args.bilinear, g)
    report: dict[str, Any] = {}
    try:
        bc = blocks.block_components(g, q)
    except blocks.RequiresCommuting as exc:
        bc = blocks.raw_components(g, q)
        report["derived"] = None
        report["error"] = f"RequiresCommuting: {exc}"
    raw = {name: {f"{name}{i}{j}": getattr(bc, name)[(i, j)] for i, j in blocks.KEYS}
           for name in "fghk"}
    report = {"components": raw, **report}
    if bc.derived is None:
        return report, 1
    d = bc.derived
    report["derived"] = {
        "alpha": d.alpha.T, "tau": d.tau.T, "gamma": d.gamma.T, "gamma_prime": d.gamma_p.T,
        "delta": d.delta, "epsilon": d.epsilon, "epsilon_prime": d.epsilon_p,
        "zeta": d.zeta, "theta": d.theta,
    }
    checks = blocks.lemma_checks(g, bc)
    report["relations"] = checks
    try:
        dec = blocks.constructive_decomposition(g, bc)
        report["constructive"] = _decomposition(dec)
        report["constructive_residual_zero"] = not traces.decomposition_residual(g, q, dec).any()
    except blocks.RequiresCommuting as exc:
        report["constructive"] = None
        report["error"] = f"RequiresCommuting: {exc}"
    ok = all(checks.values()) and report.get("constructive") is not None
    return report, 0 if ok else 1


def cmd_decompose_lie(args) -> tuple[dict, int]:
    g = _load_gma(args.source)
    g2 = _load_gma(args.target)
    if g2.p != g.p:
        raise SpecError("$.p", f"{args.target}: modulus differs from {args.source}")
    try:
        l = linear_from_json(_load_json(args.map), g.p)
    except SpecError as exc:
        raise SpecError(exc.path, f"{args.map}: {exc.message}") from None
    try:
        iso = lie.is_lie_isomorphism(l, g, g2)
    except lie.DimensionMismatch as exc:
        raise SpecError("$.matrix", f"{args.map}: {exc}") from None
    if not iso.holds:
        return {"lie_isomorphism": _verdict(iso)}, 1
    try:
        dec = lie.lie_decompose(l, g, g2)
    except lie.LieDecompositionError as exc:
        return {"lie_isomorphism": _verdict(iso),
                "failure": {"reason": exc.reason, "detail": exc.detail,
                            "witness": to_jsonable(exc.witness)}}, 1
    return {
        "lie_isomorphism": _verdict(iso),
        "kind": dec.kind,
        "degenerate": dec.degenerate,
        "lambda": dec.lam,
        "mu1": linear_to_json(dec.mu1),
        "m": linear_to_json(dec.m),
        "n": linear_to_json(dec.n),
        "h": dec.h,
        "standard_form_violations": lie.verify_standard_form(l, dec, g, g2),
    }, 0


def cmd_check_identity(args) -> tuple[dict, int]:
    g = _load_gma(args.gma)
    v = lie.check_identity_L41(g, args.enum_cap)
    return {"identity": "[[x^2, y], [x, y]] = 0", **_verdict(v)}, 0 if v.holds else 1


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable output")
    common.add_argument("--enum-cap", type=int, default=gma.DEFAULT_CAP,
                        help="bound on exhaustive enumerations (default 10^6)")
    parser = _Parser(prog="gmalg", description="Generalized matrix algebras over F_p.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("validate", parents=[common], help="check algebra or Gma axioms")
    p.add_argument("spec")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("catalog", parents=[common],
                       help="emit a built-in Gma: full N K P | triangular N P | "
                            "peirce ALGEBRA.json IDEMPOTENT | nonloyal-demo P")
    p.add_argument("name", choices=["full", "triangular", "peirce", "nonloyal-demo"])
    p.add_argument("params", nargs="*")
    p.set_defaults(func=cmd_catalog)

    p = sub.add_parser("center", parents=[common], help="center, projections and φ")
    p.add_argument("gma")
    p.set_defaults(func=cmd_center)

    p = sub.add_parser("hypotheses", parents=[common], help="evaluate a statement's hypotheses")
    p.add_argument("--theorem", required=True, choices=list(hypotheses.THEOREMS))
    p.add_argument("gma")
    p.set_defaults(func=cmd_hypotheses)

    p = sub.add_parser("trace-space", parents=[common], help="commuting or centralizing traces")
    p.add_argument("--kind", choices=["commuting", "centralizing"], default="commuting")
    p.add_argument("gma")
    p.set_defaults(func=cmd_trace_space)

    p = sub.add_parser("decompose-trace", parents=[common], help="proper form of a trace")
    p.add_argument("gma")
    p.add_argument("bilinear")
    p.set_defaults(func=cmd_decompose_trace)

    p = sub.add_parser("block-components", parents=[common], help="corner components of a trace")
    p.add_argument("gma")
    p.add_argument("bilinear")
    p.set_defaults(func=cmd_block_components)

    p = sub.add_parser("decompose-lie", parents=[common], help="standard form of a Lie isomorphism")
    p.add_argument("source")
    p.add_argument("target")
    p.add_argument("map")
    p.set_defaults(func=cmd_decompose_lie)

    p = sub.add_parser("check-identity", parents=[common], help="test [[x^2, y], [x, y]] = 0")
    p.add_argument("gma")
    p.set_defaults(func=cmd_check_identity)
    return parser


def execute(argv: Sequence[str]) -> tuple[dict | None, int, str]:
    """Run one command; returns (report, exit code, diagnostic)."""
    argv = list(argv)
    try:
        args = build_parser().parse_args(argv)
        report, code = args.func(args)
    except UsageError as exc:
        return None, 2, str(exc)
    except SpecError as exc:
        return None, 2, f"error at {exc.path}: {exc.message}"
    except field.TooLarge as exc:
        return None, 2, f"enumeration too large: {exc} (raise --enum-cap)"
    except (gma.NotIdempotent, gma.TrivialIdempotent) as exc:
        return None, 2, f"error at $idempotent: {exc}"
    body = to_jsonable(report)
    if args.command != "catalog":
        body = {"command": argv, **body}
    return body, code, ""


def _human(obj: Any, indent: int = 0) -> list[str]:
    pad = "  " * indent
    lines = []
    for k, v in obj.items():
        if isinstance(v, dict) and v:
            lines.append(f"{pad}{k}:")
            lines += _human(v, indent + 1)
        else:
            lines.append(f"{pad}{k}: {json.dumps(v) if not isinstance(v, str) else v}")
    return lines


def main(argv: Sequence[str] | None = None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    start = time.perf_counter()
    report, code, diag = execute(argv)
    if report is None:
        print(diag, file=sys.stderr)
        return code
    as_json = "--json" in argv or "command" not in report  # catalog always emits JSON
    if as_json:
        print(json.dumps(report))
    else:
        print("\n".join(_human(report)))
    print(f"elapsed: {time.perf_counter() - start:.3f}s", file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
