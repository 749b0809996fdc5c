"""Command-line front end.

Subcommands: generate, verify, decompose, export.  All output is
deterministic; reports are line-oriented JSON, one record per check.

Exit codes: 0 all-pass, 1 check failure, 2 invalid input or parameters,
3 I/O error.
"""

from __future__ import annotations

import argparse
import json
import sys as _sys
from fractions import Fraction
from pathlib import Path

from . import forge
from .linalg import rat, rat_str
from .psi import OperatorError, build_operator_set
from .split import SplitStructureError, build_apparatus
from .suite import full_suite
from .tdsystem import (
    NotDiagonalizableError,
    NotTDSystemError,
    ParameterError,
    QRacahParams,
)
from .uqsl2 import ModuleError, decompose_into_components, first_structure

EXIT_OK = 0
EXIT_CHECK_FAILURE = 1
EXIT_INVALID = 2
EXIT_IO = 3


def _write(text: str, out_path: str | None) -> None:
    if out_path is None:
        _sys.stdout.write(text)
        if text and not text.endswith("\n"):
            _sys.stdout.write("\n")
    else:
        Path(out_path).write_text(text if text.endswith("\n") or not text else text + "\n")


def _load_instance(path: str):
    return forge.ingest(path)


def cmd_generate(args) -> int:
    try:
        params = QRacahParams(args.d, rat(args.q), rat(args.a), rat(args.b))
    except (ParameterError, ValueError) as exc:
        print(f"invalid parameters: {exc}", file=_sys.stderr)
        return EXIT_INVALID
    if args.phi:
        try:
            phi = tuple(rat(p) for p in args.phi.split(","))
        except ValueError as exc:
            print(f"invalid phi: {exc}", file=_sys.stderr)
            return EXIT_INVALID
    else:
        phi = (Fraction(1),) * params.d
    try:
        spec = forge.SplitFormSpec(params, phi)
        instance = forge.validate(forge.build_split_form(spec), params)
    except (NotTDSystemError, NotDiagonalizableError, ValueError) as exc:
        print(f"validation failed: {exc}", file=_sys.stderr)
        return EXIT_INVALID
    try:
        if args.out:
            forge.export_instance(instance, args.out)
        else:
            _sys.stdout.write(forge.format_instance(instance))
    except OSError as exc:
        print(f"cannot write output: {exc}", file=_sys.stderr)
        return EXIT_IO
    return EXIT_OK


def cmd_verify(args) -> int:
    try:
        instance = _load_instance(args.instance)
    except (forge.IngestError, NotTDSystemError, NotDiagonalizableError, ParameterError) as exc:
        print(f"invalid instance: {exc}", file=_sys.stderr)
        return EXIT_INVALID
    try:
        report = full_suite(instance)
    except (SplitStructureError, OperatorError, ModuleError) as exc:
        print(f"internal consistency failure: {exc}", file=_sys.stderr)
        return EXIT_INVALID
    if args.suite != "all":
        names = [s for s in args.suite.split(",") if s]
        report = report.subset(names)
    try:
        _write(report.to_json_lines(), args.out)
    except OSError as exc:
        print(f"cannot write output: {exc}", file=_sys.stderr)
        return EXIT_IO
    return EXIT_OK if report.all_passed else EXIT_CHECK_FAILURE


def cmd_decompose(args) -> int:
    try:
        instance = _load_instance(args.instance)
    except (forge.IngestError, NotTDSystemError, NotDiagonalizableError, ParameterError) as exc:
        print(f"invalid instance: {exc}", file=_sys.stderr)
        return EXIT_INVALID
    try:
        apparatus = build_apparatus(instance)
        ops = build_operator_set(instance, apparatus)
        action = first_structure(instance, apparatus, ops.R, ops.psi)
        decomposition = decompose_into_components(action, instance, apparatus)
    except (SplitStructureError, OperatorError, ModuleError) as exc:
        print(f"internal consistency failure: {exc}", file=_sys.stderr)
        return EXIT_INVALID
    lines = [
        json.dumps(
            {
                "i": c.i,
                "component": f"L({c.label},1)",
                "multiplicity": c.multiplicity,
                "casimir": rat_str(c.casimir_scalar),
            },
            sort_keys=True,
        )
        for c in decomposition.components
    ]
    try:
        _write("\n".join(lines), args.out)
    except OSError as exc:
        print(f"cannot write output: {exc}", file=_sys.stderr)
        return EXIT_IO
    return EXIT_OK


def _apparatus_payload(instance, apparatus) -> dict:
    return {
        "U": [s.basis.to_strings() for s in apparatus.U],
        "Udd": [s.basis.to_strings() for s in apparatus.Udd],
        "Kspaces": [s.basis.to_strings() for s in apparatus.Kspaces],
        "cells": {
            f"{i},{j}": cell.space.basis.to_strings()
            for (i, j), cell in sorted(apparatus.cells.items())
        },
        "K": apparatus.Kop.to_strings(),
        "B": apparatus.Bop.to_strings(),
    }


def cmd_export(args) -> int:
    try:
        instance = _load_instance(args.instance)
    except (forge.IngestError, NotTDSystemError, NotDiagonalizableError, ParameterError) as exc:
        print(f"invalid instance: {exc}", file=_sys.stderr)
        return EXIT_INVALID
    try:
        apparatus = build_apparatus(instance)
        payload: dict
        if args.what == "operators":
            ops = build_operator_set(instance, apparatus)
            payload = {
                "K": apparatus.Kop.to_strings(),
                "B": apparatus.Bop.to_strings(),
                "R": ops.R.to_strings(),
                "Rdd": ops.Rdd.to_strings(),
                "psi": ops.psi.to_strings(),
                "Lambda": ops.Lambda.to_strings(),
            }
        else:
            payload = _apparatus_payload(instance, apparatus)
    except (SplitStructureError, OperatorError) as exc:
        print(f"internal consistency failure: {exc}", file=_sys.stderr)
        return EXIT_INVALID
    text = json.dumps(payload, sort_keys=True, indent=2) + "\n"
    try:
        _write(text, args.out)
    except OSError as exc:
        print(f"cannot write output: {exc}", file=_sys.stderr)
        return EXIT_IO
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tdlab",
        description="Exact verification toolkit for tridiagonal systems "
        "of q-Racah type",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("generate", help="build and validate a split-form instance")
    gen.add_argument("--d", type=int, required=True)
    gen.add_argument("--q", required=True, help="rational string")
    gen.add_argument("--a", required=True, help="rational string")
    gen.add_argument("--b", required=True, help="rational string")
    gen.add_argument("--phi", help="comma-separated rational superdiagonal")
    gen.add_argument("--out", help="output path (stdout if omitted)")
    gen.set_defaults(func=cmd_generate)

    ver = sub.add_parser("verify", help="run the exact identity suite")
    ver.add_argument("--instance", required=True)
    ver.add_argument(
        "--suite",
        default="all",
        help="'all' or comma-separated check-id prefixes",
    )
    ver.add_argument("--out", help="report path (stdout if omitted)")
    ver.set_defaults(func=cmd_verify)

    dec = sub.add_parser("decompose", help="decompose into irreducible components")
    dec.add_argument("--instance", required=True)
    dec.add_argument("--out", help="report path (stdout if omitted)")
    dec.set_defaults(func=cmd_decompose)

    exp = sub.add_parser("export", help="export operators or the split apparatus")
    exp.add_argument("--instance", required=True)
    exp.add_argument("--what", choices=("operators", "apparatus"), default="operators")
    exp.add_argument("--out", help="output path (stdout if omitted)")
    exp.set_defaults(func=cmd_export)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    raise SystemExit(main())
