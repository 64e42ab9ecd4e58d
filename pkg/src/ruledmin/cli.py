"""Command-line front end.

Subcommands: verify, classify, existence, mesh, causal-map, gauge. Input is
surface JSON (--input) or a generated catalog surface (--family/--sig);
output is JSON (default), CSV, or OBJ, printed to stdout or written via
--out. Exit codes: 0 success (for verify: minimal; for classify:
recognized), 1 negative verdict or diagnosis, 2 malformed input, violated
conventions, or non-existence (with the certificate in the report).
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import jsonio
from .catalog import causal_map, generate
from .classify import (
    CaseInvariants,
    ClassificationResult,
    GenericityReport,
    StructureReport,
    case_invariants,
    identify_family,
    verify_structure_odes,
)
from .errors import NonExistenceError, RuledminError, UsageError
from .existence import (
    Certificate,
    ExistenceResult,
    existence_oracle,
    existence_table,
    replay_certificate,
)
from .export import csv_grid, obj_mesh
from .families import CLI_NAME_OF, CLI_NAMES, TABLE_FAMILIES, FamilyId, FrameSpec, SignChoice
from .metric import Signature
from .surface import (
    H_TOL,
    MinimalityReport,
    RuledSurface,
    gauge_normalize,
    is_minimal,
    is_totally_geodesic,
    sweep_grid,
)

DEFAULT_SEED = 0


# ---------------------------------------------------------------------------
# argument parsing


def _sig_arg(text: str) -> Signature:
    parts = text.split(",")
    if len(parts) != 2:
        raise UsageError(f"--sig expects n,p (e.g. 4,1), got {text!r}")
    try:
        n, p = int(parts[0]), int(parts[1])
    except ValueError:
        raise UsageError(f"--sig expects integers n,p, got {text!r}") from None
    return Signature(n, p)


def _signs_arg(text: str) -> SignChoice:
    parts = text.split(",")
    if len(parts) != 3:
        raise UsageError(f"--signs expects s1,s2,s3 (e.g. 1,1,-1), got {text!r}")
    try:
        vals = [int(v) for v in parts]
    except ValueError:
        raise UsageError(f"--signs expects integers, got {text!r}") from None
    return SignChoice(*vals)


def _family_arg(text: str) -> FamilyId:
    key = text.strip().lower()
    if key not in CLI_NAMES:
        raise UsageError(
            f"unknown family {text!r}; expected one of {', '.join(sorted(CLI_NAMES))}"
        )
    return CLI_NAMES[key]


def _grid_arg(text: str) -> tuple[int, int]:
    parts = text.lower().split("x")
    if len(parts) != 2:
        raise UsageError(f"--grid expects NSxNT (e.g. 41x41), got {text!r}")
    try:
        ns, nt = int(parts[0]), int(parts[1])
    except ValueError:
        raise UsageError(f"--grid expects integers NSxNT, got {text!r}") from None
    if ns < 2 or nt < 2:
        raise UsageError("--grid needs at least 2 points per axis")
    return ns, nt


def _range_arg(flag: str, text: str) -> tuple[float, float]:
    parts = text.split(",")
    if len(parts) != 2:
        raise UsageError(f"{flag} expects a,b, got {text!r}")
    try:
        a, b = float(parts[0]), float(parts[1])
    except ValueError:
        raise UsageError(f"{flag} expects numbers a,b, got {text!r}") from None
    if not a < b:
        raise UsageError(f"{flag} needs a < b, got {text!r}")
    return a, b


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ruledmin",
        description="Ruled minimal surfaces in pseudo-Euclidean spaces: "
        "verification, classification, existence, meshes.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser, surface_input: bool = True) -> None:
        if surface_input:
            p.add_argument("--input", help="surface JSON file")
            p.add_argument("--family", help="catalog family (kebab-case name)")
            p.add_argument("--signs", help="frame sign choice s1,s2,s3")
        p.add_argument("--sig", help="ambient signature n,p")
        p.add_argument("--grid", help="sweep grid NSxNT (default 41x41)")
        p.add_argument("--s-range", dest="s_range", help="s interval a,b")
        p.add_argument("--t-range", dest="t_range", help="t interval a,b")
        p.add_argument("--tol", type=float, help="verification tolerance")
        p.add_argument("--seed", type=int, default=DEFAULT_SEED, help="rng seed")
        p.add_argument("--out", help="write the primary artifact to this path")
        p.add_argument(
            "--format", choices=("json", "csv", "obj"), help="output format"
        )

    common(sub.add_parser("verify", help="decide minimality"))
    common(sub.add_parser("classify", help="identify the family"))
    pe = sub.add_parser("existence", help="witnesses, certificates, the table")
    pe.add_argument("--table", action="store_true", help="print the existence table")
    pe.add_argument("--family", help="catalog family (kebab-case name)")
    pe.add_argument("--signs", help="frame sign choice s1,s2,s3")
    common(pe, surface_input=False)
    common(sub.add_parser("mesh", help="export an OBJ/CSV lattice mesh"))
    common(sub.add_parser("causal-map", help="spacelike/timelike regions over t"))
    common(sub.add_parser("gauge", help="normalize the base curve (kill g12)"))
    return parser


# ---------------------------------------------------------------------------
# shared plumbing


def _resolve_surface(args) -> tuple[Signature, RuledSurface, dict]:
    """Surface from --input JSON or a generated catalog family."""
    meta: dict = {}
    if getattr(args, "input", None):
        path = Path(args.input)
        try:
            text = path.read_text()
        except OSError as exc:
            raise UsageError(f"cannot read {args.input}: {exc}") from exc
        sig, surface = jsonio.loads_surface(text)
        meta["source"] = str(path)
        if args.sig is not None and _sig_arg(args.sig) != sig:
            raise UsageError(
                "--sig disagrees with the signature inside the input file"
            )
    elif getattr(args, "family", None):
        if args.sig is None:
            raise UsageError("--family needs --sig n,p")
        sig = _sig_arg(args.sig)
        family = _family_arg(args.family)
        signs = _signs_arg(args.signs) if getattr(args, "signs", None) else None
        surface = generate(sig, family, signs)
        meta["family"] = CLI_NAME_OF[family]
        if signs is not None:
            meta["signs"] = list(signs.as_tuple())
    else:
        raise UsageError("provide --input FILE or --family NAME with --sig n,p")

    s_dom = _range_arg("--s-range", args.s_range) if args.s_range else surface.s_domain
    t_dom = _range_arg("--t-range", args.t_range) if args.t_range else surface.t_domain
    if (s_dom, t_dom) != (surface.s_domain, surface.t_domain):
        surface = RuledSurface(
            gamma=surface.gamma, base=surface.base, s_domain=s_dom, t_domain=t_dom
        )
    return sig, surface, meta


def _grids(args, surface: RuledSurface):
    shape = _grid_arg(args.grid) if getattr(args, "grid", None) else (41, 41)
    return surface.default_grids(shape)


def _emit(payload: dict, args=None) -> None:
    text = jsonio.dumps(payload)
    out = getattr(args, "out", None) if args is not None else None
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _write_or_print(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


# ---------------------------------------------------------------------------
# JSON views of report objects


def _sig_json(sig: Signature) -> dict:
    return {"n": sig.n, "p": sig.p}


def _frame_json(frame: FrameSpec) -> dict:
    return {
        "vectors": [list(v) for v in frame.vectors],
        "signs": list(frame.signs),
        "gram": [[int(x) for x in row] for row in frame.gram],
    }


def _certificate_json(sig: Signature, family: FamilyId | None, cert: Certificate) -> dict:
    data = cert.to_dict()
    if family is not None:
        try:
            data["replay"] = replay_certificate(sig, family, cert).to_dict()
        except RuledminError:
            data["replay"] = None
    return data


def _existence_json(result: ExistenceResult) -> dict:
    payload: dict = {
        "signature": _sig_json(result.sig),
        "family": CLI_NAME_OF[result.family] if result.family else None,
        "verdict": result.verdict.value,
    }
    if result.signs is not None:
        payload["signs"] = list(result.signs.as_tuple())
    if result.frame is not None:
        payload["frame"] = _frame_json(result.frame)
    if result.cylinder is not None:
        payload["cylinder"] = {
            "direction": list(result.cylinder.direction),
            "partner": list(result.cylinder.partner),
            "pairing": result.cylinder.pairing,
            "axes": list(result.cylinder.axes),
            "mirrored": result.cylinder.mirrored,
        }
    if result.certificate is not None:
        payload["certificate"] = _certificate_json(
            result.sig, result.family, result.certificate
        )
    if result.per_sign:
        payload["per_sign"] = [
            {
                "signs": list(signs.as_tuple()),
                "admissible": ok,
                "certificate": cert.to_dict() if cert else None,
            }
            for signs, ok, cert in result.per_sign
        ]
    if result.note:
        payload["note"] = result.note
    return payload


def _minimality_json(report: MinimalityReport) -> dict:
    return {
        "verdict": report.verdict.value,
        "max_h_norm": report.max_h_norm,
        "tol": report.tol,
        "points_checked": report.points_checked,
        "points_degenerate": report.points_degenerate,
        "degenerate_sample": [list(pt) for pt in report.degenerate_sample],
        "grid": list(report.grid_shape),
    }


def _invariants_json(inv: CaseInvariants) -> dict:
    return {
        "epsilon": inv.epsilon,
        "eta": inv.eta,
        "delta": inv.delta,
        "delta_value": inv.delta_value,
        "mu": {"kind": inv.mu.kind, "value": inv.mu.value, "max_abs": inv.mu.max_abs},
    }


def _genericity_json(rep: GenericityReport) -> dict:
    return {
        "generic": rep.generic,
        "num_points": rep.num_points,
        "profiles": {
            name: {
                "identically_zero": p.identically_zero,
                "max_abs": p.max_abs,
                "isolated_zeros": list(p.isolated_zeros),
            }
            for name, p in rep.profiles.items()
        },
        "dependence_switches": list(rep.dependence_switches),
    }


def _structure_json(rep: StructureReport | None) -> dict | None:
    if rep is None:
        return None
    return {
        "eta": rep.eta,
        "max_direction_residual": rep.max_direction_residual,
        "max_base_residual": rep.max_base_residual,
        "tol": rep.tol,
        "ok": rep.ok,
    }


# ---------------------------------------------------------------------------
# commands


def cmd_verify(args) -> int:
    sig, surface, meta = _resolve_surface(args)
    tol = args.tol if args.tol is not None else H_TOL
    s_grid, t_grid = _grids(args, surface)
    report = is_minimal(sig, surface, s_grid, t_grid, tol=tol)
    tg = is_totally_geodesic(sig, surface, s_grid, t_grid, tol=tol)
    structure = None
    try:
        inv = case_invariants(sig, surface)
        structure = verify_structure_odes(sig, surface, inv)
    except RuledminError:
        pass
    payload = {
        "command": "verify",
        "signature": _sig_json(sig),
        **meta,
        "minimality": _minimality_json(report),
        "totally_geodesic": tg,
        "structure": _structure_json(structure),
    }
    _emit(payload, args)
    return 0 if report.is_minimal else 1


def _classification_json(result: ClassificationResult) -> dict:
    return {
        "command": "classify",
        "signature": _sig_json(result.sig),
        "case": result.reported_case.value if result.reported_case else None,
        "raw_case": result.case_label.value if result.case_label else None,
        "family": CLI_NAME_OF[result.family] if result.family else None,
        "invariants": _invariants_json(result.invariants) if result.invariants else None,
        "genericity": _genericity_json(result.genericity) if result.genericity else None,
        "residuals": _structure_json(result.structure),
        "minimality": _minimality_json(result.minimality) if result.minimality else None,
        "diagnosis": result.diagnosis,
        "notes": list(result.notes),
    }


def cmd_classify(args) -> int:
    sig, surface, _ = _resolve_surface(args)
    tol = args.tol if args.tol is not None else H_TOL
    result = identify_family(sig, surface, h_tol=tol)
    _emit(_classification_json(result), args)
    return 0 if result.recognized else 1


def _table_rows_json() -> dict:
    rows = []
    for row in existence_table():
        rows.append(
            {
                "signature": row.label,
                "representatives": [_sig_json(s) for s in row.representatives],
                "cells": {
                    CLI_NAME_OF[fam]: bool(cell)
                    for fam, cell in zip(TABLE_FAMILIES, row.cells)
                },
            }
        )
    return {"command": "existence-table", "rows": rows}


def _table_text() -> str:
    rows = existence_table()
    legend = ", ".join(
        f"{i + 1}={CLI_NAME_OF[fam]}" for i, fam in enumerate(TABLE_FAMILIES)
    )
    width = max(len(r.label) for r in rows)
    lines = [f"# family columns: {legend}"]
    header = "signature".ljust(width) + "  " + "  ".join(
        str(i + 1) for i in range(len(TABLE_FAMILIES))
    )
    lines.append(header)
    for row in rows:
        cells = "  ".join("O" if c else "x" for c in row.cells)
        lines.append(row.label.ljust(width) + "  " + cells)
    return "\n".join(lines) + "\n"


def _table_csv() -> str:
    rows = existence_table()
    header = "signature," + ",".join(CLI_NAME_OF[fam] for fam in TABLE_FAMILIES)
    lines = [header]
    for row in rows:
        cells = ",".join("true" if c else "false" for c in row.cells)
        lines.append(f"\"{row.label}\",{cells}")
    return "\n".join(lines) + "\n"


def cmd_existence(args) -> int:
    if args.table:
        fmt = args.format or "text"
        if fmt == "json":
            _emit(_table_rows_json(), args)
        elif fmt == "csv":
            _write_or_print(_table_csv(), args.out)
        elif fmt == "obj":
            raise UsageError("the existence table has no OBJ form")
        else:
            _write_or_print(_table_text(), args.out)
        return 0
    if not args.sig or not args.family:
        raise UsageError("existence needs --table, or --sig n,p with --family NAME")
    sig = _sig_arg(args.sig)
    family = _family_arg(args.family)
    signs = _signs_arg(args.signs) if args.signs else None
    result = existence_oracle(sig, family, signs)
    payload = {"command": "existence", **_existence_json(result)}
    _emit(payload, args)
    return 0


def cmd_mesh(args) -> int:
    sig, surface, meta = _resolve_surface(args)
    s_grid, t_grid = _grids(args, surface)
    sweep = sweep_grid(sig, surface, s_grid, t_grid)
    fmt = args.format
    if fmt is None:
        fmt = "csv" if (args.out or "").endswith(".csv") else "obj"
    if fmt == "json":
        raise UsageError("mesh emits obj or csv; use --format obj|csv")
    if fmt == "csv":
        _write_or_print(csv_grid(sig, surface, s_grid, t_grid, sweep), args.out)
        return 0
    obj_text = obj_mesh(sig, surface, s_grid, t_grid, sweep)
    if args.out:
        out = Path(args.out)
        out.write_text(obj_text)
        sidecar = out.with_suffix(".csv")
        sidecar.write_text(csv_grid(sig, surface, s_grid, t_grid, sweep))
        summary = {
            "command": "mesh",
            "signature": _sig_json(sig),
            **meta,
            "vertices": int(sweep.f.shape[0] * sweep.f.shape[1]),
            "faces": int(2 * (sweep.f.shape[0] - 1) * (sweep.f.shape[1] - 1)),
            "obj": str(out),
            "csv": str(sidecar),
        }
        sys.stdout.write(jsonio.dumps(summary))
    else:
        sys.stdout.write(obj_text)
    return 0


def cmd_causal_map(args) -> int:
    if not args.family or not args.sig:
        raise UsageError("causal-map needs --family NAME and --sig n,p")
    sig = _sig_arg(args.sig)
    family = _family_arg(args.family)
    signs = _signs_arg(args.signs) if args.signs else None
    t_domain = _range_arg("--t-range", args.t_range) if args.t_range else None
    report = causal_map(sig, family, signs, t_domain=t_domain)
    if args.format == "csv":
        lines = ["t_lo,t_hi,verdict"]
        for region in report.regions:
            lines.append(f"{region.t_lo!r},{region.t_hi!r},{region.verdict}")
        _write_or_print("\n".join(lines) + "\n", args.out)
        return 0
    payload = {
        "command": "causal-map",
        "signature": _sig_json(sig),
        "family": CLI_NAME_OF[family],
        "signs": list(report.signs.as_tuple()) if report.signs else None,
        "t_domain": list(report.t_domain),
        "det_g": report.expression,
        "regions": [
            {"t_lo": r.t_lo, "t_hi": r.t_hi, "verdict": r.verdict}
            for r in report.regions
        ],
        "degenerate_loci": list(report.degenerate_loci),
        "constant": report.constant,
        "cross_validated": report.cross_validated,
    }
    _emit(payload, args)
    return 0


def cmd_gauge(args) -> int:
    sig, surface, meta = _resolve_surface(args)
    tol = args.tol if args.tol is not None else 1e-9
    result = gauge_normalize(sig, surface, tol=tol)
    payload = {
        "command": "gauge",
        "signature": _sig_json(sig),
        **meta,
        "epsilon": result.epsilon,
        "exact": result.exact,
        "max_abs_g12": result.max_abs_g12,
        "lam": jsonio.scalar_fn_to_json(result.lam) if result.lam is not None else None,
        "lam_table": None
        if result.lam_table is None
        else {
            "s": [float(v) for v in result.lam_table[0]],
            "lam": [float(v) for v in result.lam_table[1]],
        },
        "surface": jsonio.surface_to_json(sig, result.surface)
        if result.exact
        else None,
    }
    _emit(payload, args)
    return 0


_HANDLERS = {
    "verify": cmd_verify,
    "classify": cmd_classify,
    "existence": cmd_existence,
    "mesh": cmd_mesh,
    "causal-map": cmd_causal_map,
    "gauge": cmd_gauge,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    handler = _HANDLERS[args.command]
    try:
        return handler(args)
    except NonExistenceError as exc:
        result = exc.result
        payload = {
            "error": "non-existence",
            "message": str(exc),
            **_existence_json(result),
        }
        sys.stdout.write(jsonio.dumps(payload))
        return 2
    except RuledminError as exc:
        payload = {"error": type(exc).__name__, "message": str(exc)}
        sys.stdout.write(jsonio.dumps(payload))
        return 2


if __name__ == "__main__":
    sys.exit(main())
