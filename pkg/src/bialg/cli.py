"""Batch command line: catalog verification, GCYBE verdicts, cohomology, Schouten dumps.

Exit codes: 0 success, 1 verification failure, 2 usage, I/O or parse error.
"""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence, TextIO

from . import __version__
from .catalog import (CatalogSummary, VerificationReport, document_multivector, load_catalog,
                      verify_all)
from .cohomology import cohomology, elements, invariants, parse_module
from .errors import BialgError
from .exterior import MultiVector, format_multivector, multivector_to_doc, split3
from .linalg import rank
from .poincare import InhomogeneousAlgebra, format_lightcone, make_inhomogeneous, omega_invariant
from .scalar import format_scalar, parse_scalar, simplify
from .schouten import schouten_bracket, span_coordinates

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


@dataclass(frozen=True)
class RunConfig:
    command: str
    inputs: tuple = ()
    fmt: str = "text"
    bindings: dict = field(default_factory=dict)
    samples: int = 5
    seed: int = 0
    mode: str = "symbolic"
    entries: tuple = ()
    algebra: tuple = (1, 3)
    module: str | None = None
    acting: str = "g"
    invariants_only: bool = False
    emit_basis: bool = False
    catalog_dir: str | None = None


# ---------------------------------------------------------------------------
# output helpers

def show(A: InhomogeneousAlgebra, u: MultiVector) -> str:
    """Light-cone labels for the Poincare algebra, algebra labels otherwise."""
    return format_lightcone(A, u) if A.is_poincare else format_multivector(u)


def emit(out: TextIO, obj) -> None:
    out.write(json.dumps(obj, sort_keys=True) + "\n")


def _doc(u: MultiVector) -> dict:
    return multivector_to_doc(u)


# ---------------------------------------------------------------------------
# input

def parse_algebra(text: str) -> tuple:
    try:
        p, q = (int(x) for x in text.replace(" ", "").split(","))
    except ValueError:
        raise UsageError(f"--algebra expects 'p,q', got {text!r}") from None
    return p, q


def parse_bindings(items: Sequence[str]) -> dict:
    out = {}
    for item in items or ():
        name, sep, value = item.partition("=")
        if not sep or not name.strip():
            raise UsageError(f"--bind expects NAME=VALUE, got {item!r}")
        out[name.strip()] = parse_scalar(value)
    return out


def read_multivector(A: InhomogeneousAlgebra, path: str, bindings: dict) -> MultiVector:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise UsageError(f"{path}: {exc.strerror or exc}") from None
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}") from None
    if not isinstance(doc, dict):
        raise UsageError(f"{path}: expected a JSON object")
    if "algebra" in doc and tuple(doc["algebra"]) != (A.p, A.q):
        raise UsageError(f"{path}: written for algebra {doc['algebra']}, running ({A.p},{A.q})")
    try:
        u = document_multivector(A, doc)
    except (BialgError, KeyError, ValueError, TypeError) as exc:
        raise UsageError(f"{path}: {exc}") from None
    return u.subs(bindings) if bindings else u


# ---------------------------------------------------------------------------
# commands

def _report_line(A, r: VerificationReport) -> str:
    status = "PASS" if r.passed else "FAIL"
    t = "none" if r.t_solved is None else format_scalar(r.t_solved)
    line = f"{r.id:<12} {status}  t={t} (expected {format_scalar(r.expected_t)})"
    if r.variants:
        line += f"  [{len(r.variants)} instances]"
    for k in r.failing:
        line += f"\n    {k}: {show(A, r.residuals[k])}"
    return line


def _report_json(r: VerificationReport) -> dict:
    return {
        "id": r.id,
        "passed": r.passed,
        "t_solved": None if r.t_solved is None else format_scalar(r.t_solved),
        "expected_t": format_scalar(r.expected_t),
        "failing": r.failing,
        "residuals": {k: _doc(v) for k, v in r.residuals.items()},
        "bindings": {k: format_scalar(v) for k, v in r.bindings},
        "instances": len(r.variants),
    }


def cmd_verify_catalog(cfg: RunConfig, out: TextIO) -> int:
    try:
        cat = load_catalog(cfg.catalog_dir)
    except BialgError as exc:
        raise UsageError(str(exc)) from None
    unknown = [e for e in cfg.entries if e not in cat]
    if unknown:
        raise UsageError(f"unknown entry {', '.join(unknown)}")
    entries = list(cfg.entries) or None
    if cfg.bindings:
        from .catalog import verify_entry
        ids = entries or list(cat)
        reports = []
        for i in ids:
            b = {p: cfg.bindings.get(p) for p in cat[i].params}
            b.update({d: cfg.bindings[d] for d in cat[i].discrete if d in cfg.bindings})
            reports.append(verify_entry(i, b, cat))
        summary = CatalogSummary("bound", tuple(reports))
    else:
        try:
            summary = verify_all(cfg.mode, cfg.samples, cfg.seed, cat, entries)
        except BialgError as exc:
            raise UsageError(str(exc)) from None
    A = make_inhomogeneous(1, 3)
    for r in summary.reports:
        if cfg.fmt == "jsonl":
            emit(out, _report_json(r))
        else:
            out.write(_report_line(A, r) + "\n")
    total = len(summary.reports)
    if cfg.fmt == "jsonl":
        emit(out, {"summary": {"mode": summary.mode, "passed": summary.pass_count,
                               "total": total, "failures": summary.failures}})
    else:
        extra = f" samples={cfg.samples} seed={cfg.seed}" if summary.mode == "sampled" else ""
        out.write(f"{summary.pass_count}/{total} pass (mode={summary.mode}{extra})\n")
    return EXIT_OK if summary.passed else EXIT_FAIL


def invariant_basis(A: InhomogeneousAlgebra) -> list[MultiVector]:
    """Omega first (when invariant), completed by echelon invariants of Lambda^3 g."""
    g = A.algebra
    inv = invariants(g, "L3g")
    omega = omega_invariant(A)
    basis = [omega] if inv.contains(omega.to_sparse()) and not omega.is_zero() else []
    for u in elements(g, 3, inv):
        trial = basis + [u]
        if rank([x.to_sparse() for x in trial]) == len(trial):
            basis = trial
    return basis


def cmd_gcybe(cfg: RunConfig, out: TextIO) -> int:
    A = make_inhomogeneous(*cfg.algebra)
    r = read_multivector(A, cfg.inputs[0], cfg.bindings)
    if r.degree != 2:
        raise UsageError(f"{cfg.inputs[0]}: r must be a bivector")
    w = schouten_bracket(r, r)
    basis = invariant_basis(A)
    coords, resid = span_coordinates(w, basis)
    holds = resid.is_zero()
    t = None
    if holds and basis and all(simplify(c) == 0 for c in coords[1:]):
        t = coords[0] if coords else 0
    if cfg.fmt == "jsonl":
        emit(out, {"command": "gcybe", "algebra": list(cfg.algebra), "rr": _doc(w),
                   "holds": holds, "t": None if t is None else format_scalar(t),
                   "coordinates": [format_scalar(c) for c in coords] if holds else None,
                   "residual_terms": None if holds else len(resid)})
    else:
        out.write(f"[r,r] = {show(A, w)}\n")
        if holds:
            msg = "GCYBE holds"
            if t is not None:
                msg += f", t = {format_scalar(t)}"
                if w.is_zero():
                    msg += ", [r,r]=0"
            else:
                msg += ", coordinates " + ", ".join(format_scalar(c) for c in coords)
            out.write(msg + "\n")
        else:
            out.write(f"Fails: [r,r] is not invariant; residual has {len(resid)} terms\n")
    return EXIT_OK if holds else EXIT_FAIL


def cmd_cohomology(cfg: RunConfig, out: TextIO) -> int:
    A = make_inhomogeneous(*cfg.algebra)
    g = A.algebra
    try:
        E = parse_module(cfg.module or "L2g")
        inv = invariants(g, E, cfg.acting)
        rep = None if cfg.invariants_only else cohomology(g, E, cfg.acting)
    except BialgError as exc:
        raise UsageError(str(exc)) from None
    basis = elements(g, E.degree, inv) if cfg.emit_basis and E.degree > 0 else []
    if cfg.fmt == "jsonl":
        obj = {"command": "cohomology", "algebra": list(cfg.algebra), "module": str(E),
               "acting": cfg.acting, "invariants": inv.dim}
        if rep is not None:
            obj.update(Z=rep.dim_Z, B=rep.dim_B, H=rep.dim_H)
        if cfg.emit_basis:
            obj["basis"] = [_doc(u) for u in basis]
        emit(out, obj)
    else:
        head = f"({A.p},{A.q}) module {E} acting {cfg.acting}:"
        if rep is not None:
            head += f" Z={rep.dim_Z} B={rep.dim_B} H={rep.dim_H}"
        out.write(head + f" invariants dim = {inv.dim}\n")
        for u in basis:
            out.write(f"  {show(A, u)}\n")
    return EXIT_OK


def cmd_schouten(cfg: RunConfig, out: TextIO) -> int:
    A = make_inhomogeneous(*cfg.algebra)
    r = read_multivector(A, cfg.inputs[0], cfg.bindings)
    s = read_multivector(A, cfg.inputs[1], cfg.bindings)
    if r.degree + s.degree - 1 > 3 or min(r.degree, s.degree) < 1:
        raise UsageError("Schouten bracket needs degrees p, q >= 1 with p + q - 1 <= 3")
    if r.is_zero() or s.is_zero():
        w = MultiVector.zero(A.algebra, r.degree + s.degree - 1)
    else:
        w = schouten_bracket(r, s)
    blocks = split3(w) if w.degree == 3 else None
    if cfg.fmt == "jsonl":
        obj = {"command": "schouten", "algebra": list(cfg.algebra), "bracket": _doc(w)}
        if blocks is not None:
            obj["blocks"] = {k: _doc(getattr(blocks, k)) for k in ("vvv", "vvh", "vhh", "hhh")}
        emit(out, obj)
    else:
        out.write(f"[r,s] = {show(A, w)}\n")
        if blocks is not None:
            for k in ("vvv", "vvh", "vhh", "hhh"):
                out.write(f"  {k}: {show(A, getattr(blocks, k))}\n")
    return EXIT_OK


COMMANDS = {
    "verify-catalog": cmd_verify_catalog,
    "gcybe": cmd_gcybe,
    "cohomology": cmd_cohomology,
    "schouten": cmd_schouten,
}


# ---------------------------------------------------------------------------
# argument parsing

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="bialg", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=f"bialg {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, algebra=True):
        p.add_argument("--format", choices=("text", "jsonl"), default="text")
        p.add_argument("--bind", action="append", default=[], metavar="NAME=VALUE",
                       help="substitute a parameter value")
        if algebra:
            p.add_argument("--algebra", default="1,3", metavar="P,Q")

    v = sub.add_parser("verify-catalog", help="verify the defining equations for catalog entries")
    common(v, algebra=False)
    v.add_argument("--entry", action="append", default=[], help="entry id (repeatable)")
    v.add_argument("--mode", choices=("symbolic", "sampled"), default="symbolic")
    v.add_argument("--samples", type=int, default=5)
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--catalog", default=None, help="catalog directory")

    gc = sub.add_parser("gcybe", help="decide whether [r,r] is invariant")
    common(gc)
    gc.add_argument("file")

    co = sub.add_parser("cohomology", help="dimensions of cocycles, coboundaries and invariants")
    common(co)
    co.add_argument("--module", default="L2g", help="R, g, L2g, L3g, V, h, L2V, Vh, L2Vh, ...")
    co.add_argument("--acting", choices=("g", "h", "V"), default="g")
    co.add_argument("--invariants", action="store_true", help="only the invariant subspace")
    co.add_argument("--emit-basis", action="store_true", help="print the echelon invariant basis")

    sc = sub.add_parser("schouten", help="Schouten bracket of two multivectors")
    common(sc)
    sc.add_argument("file1")
    sc.add_argument("file2")
    return ap


def config_from_args(args: argparse.Namespace) -> RunConfig:
    cmd = args.command
    inputs = tuple(getattr(args, k) for k in ("file", "file1", "file2") if hasattr(args, k))
    if getattr(args, "samples", 1) < 1:
        raise UsageError("--samples must be positive")
    return RunConfig(
        command=cmd, inputs=inputs, fmt=args.format, bindings=parse_bindings(args.bind),
        samples=getattr(args, "samples", 5), seed=getattr(args, "seed", 0),
        mode=getattr(args, "mode", "symbolic"), entries=tuple(getattr(args, "entry", ())),
        algebra=parse_algebra(args.algebra) if hasattr(args, "algebra") else (1, 3),
        module=getattr(args, "module", None), acting=getattr(args, "acting", "g"),
        invariants_only=getattr(args, "invariants", False),
        emit_basis=getattr(args, "emit_basis", False),
        catalog_dir=getattr(args, "catalog", None),
    )


def main(argv: Sequence[str] | None = None, out: TextIO | None = None,
         err: TextIO | None = None) -> int:
    out = out if out is not None else sys.stdout
    err = err if err is not None else sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse reports usage errors with status 2
        return int(exc.code or 0)
    try:
        cfg = config_from_args(args)
        if cfg.algebra[0] + cfg.algebra[1] < 2 or min(cfg.algebra) < 0:
            raise UsageError(f"unsupported signature {cfg.algebra}")
        return COMMANDS[cfg.command](cfg, out)
    except UsageError as exc:
        err.write(f"bialg: error: {exc}\n")
        return EXIT_USAGE
    except BialgError as exc:
        err.write(f"bialg: error: {exc}\n")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
