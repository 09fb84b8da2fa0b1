"""Command line front end: norm, decompose, verify, table and demo.

Reports go to stdout as JSON (sorted keys) or CSV rows; logging goes to stderr and the log file.
Exit codes: 0 pass, 1 failed check, 2 unreadable input, 3 non-convergence.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from typing import Any, Sequence

import numpy as np
from loguru import logger
from pydantic import ValidationError

from src.amalgam import Letter, alternating_words, build_amalgam, corner_iso, psi_multiplier, word_operator
from src.configuration import ConfigValue, setup_config_store
from src.corpus import build_deformation
from src.errors import NotInClassError, RadialMultiplierError, SpecificationError
from src.fock import TruncatedFock
from src.model import DIHEDRAL, AmalgamSpecModel, RadialFunction, RunConfig, from_complex
from src.multiplier import RadialMultipliers, cb_lower_bound
from src.radial_kernel import class_norm, constant, delta, eval_radial, geometric, rank_one_decompose
from src.verify import SuiteOptions, Suites, run_suite
from src.wick import Wick

EXIT_OK, EXIT_FAILED, EXIT_PARSE, EXIT_NOT_CONVERGED = 0, 1, 2, 3


class CommandFailed(Exception):
    """Raised by a command with a report that should still be printed."""

    def __init__(self, report: Any, code: int) -> None:
        super().__init__(f"command failed with exit code {code}")
        self.report: Any = report
        self.code: int = code


def _jsonable(value: Any) -> Any:
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if isinstance(value, np.ndarray):
        return _jsonable(value.tolist())
    if isinstance(value, (np.bool_,)):
        return bool(value)
    if isinstance(value, (np.integer,)):
        return int(value)
    if isinstance(value, (np.floating,)):
        return float(value)
    if isinstance(value, (complex, np.complexfloating)):
        return from_complex(complex(value))
    return value


def to_json(report: Any) -> str:
    return json.dumps(_jsonable(report), sort_keys=True, indent=2)


def _flatten(record: dict[str, Any], prefix: str = "") -> dict[str, Any]:
    flat: dict[str, Any] = {}
    for key, value in record.items():
        name: str = f"{prefix}{key}"
        if isinstance(value, dict):
            flat.update(_flatten(value, f"{name}."))
        elif isinstance(value, list):
            flat[name] = json.dumps(value, sort_keys=True)
        else:
            flat[name] = value
    return flat


def to_csv(rows: Sequence[dict[str, Any]]) -> str:
    """One line per record; nested fields become dotted columns."""
    flat = [_flatten(_jsonable(row)) for row in rows]
    columns: list[str] = sorted({key for row in flat for key in row})
    buffer = io.StringIO()
    writer = csv.DictWriter(buffer, fieldnames=columns, lineterminator="\n")
    writer.writeheader()
    writer.writerows(flat)
    return buffer.getvalue()


def load_json(source: str) -> Any:
    """Inline JSON or the path of a JSON file."""
    try:
        if os.path.isfile(source):
            with open(source, encoding="utf-8") as fp:
                return json.load(fp)
        return json.loads(source)
    except json.JSONDecodeError as ex:
        raise SpecificationError(f"could not parse '{source}' as JSON: {ex}") from ex


def load_radial(source: str) -> RadialFunction:
    try:
        return RadialFunction.model_validate(load_json(source))
    except ValidationError as ex:
        raise SpecificationError(f"invalid radial function: {ex}") from ex


def _norm_record(phi: RadialFunction, cls: str, N: int, tol: float) -> dict[str, Any]:
    result = class_norm(phi, cls, N, tol)
    return {
        "phi": phi.to_json(),
        "class": cls,
        "norm": result.norm,
        "converged": result.converged,
        "truncation": result.truncation,
        "tol": result.tol,
        "c_plus": result.asymptotics.c_plus,
        "c_minus": result.asymptotics.c_minus,
        "c_limit": result.asymptotics.c_limit,
        "hankel": [r.to_dict() for r in result.reports],
    }


def cmd_norm(args: argparse.Namespace, run: RunConfig) -> Any:
    record = _norm_record(load_radial(args.phi), args.cls, run.truncation, run.tol)
    if not record["converged"]:
        raise CommandFailed(record, EXIT_NOT_CONVERGED)
    return record


def cmd_decompose(args: argparse.Namespace, run: RunConfig) -> Any:
    phi: RadialFunction = load_radial(args.phi)
    norm = class_norm(phi, "C", run.truncation, run.tol)
    decomposition = rank_one_decompose(phi, run.truncation, run.tol)
    rows = decomposition.table() if run.fmt == "csv" else None
    record = {
        "phi": phi.to_json(),
        "truncation": run.truncation,
        "tol": run.tol,
        "norm": norm.norm,
        "converged": norm.converged,
        "nuclear_sum": decomposition.nuclear_sum,
        "c_plus": norm.asymptotics.c_plus,
        "c_minus": norm.asymptotics.c_minus,
        "pairs": decomposition.table(),
    }
    if not norm.converged:
        raise CommandFailed(rows or record, EXIT_NOT_CONVERGED)
    return rows or record


def cmd_verify(args: argparse.Namespace, run: RunConfig) -> Any:
    options = SuiteOptions.from_config(seed=run.seed, truncation=args.fock_trunc, samples=args.samples, trials=args.trials)
    reports = run_suite(args.suite, options)
    payload: Any = (
        [c.to_dict() | {"suite": r.suite} for r in reports for c in sorted(r.checks, key=lambda c: c.name)]
        if run.fmt == "csv"
        else {"seed": options.seed, "truncation": options.truncation, "suites": [r.to_dict() for r in reports]}
    )
    if not all(r.passed for r in reports):
        raise CommandFailed(payload, EXIT_FAILED)
    return payload


FAMILIES: dict[str, Any] = {
    "geometric": geometric,
    "constant": constant,
    "delta": lambda n: delta(int(n)),
}


def cmd_table(args: argparse.Namespace, run: RunConfig) -> Any:
    if args.family not in FAMILIES:
        raise SpecificationError(f"unknown family '{args.family}' (known: {', '.join(sorted(FAMILIES))})")
    grid: list[float] = [float(v) for v in args.grid.split(",") if v.strip()]
    bundle = build_deformation({"kind": "zero", "copies": 1})
    fock = TruncatedFock(bundle.deformation, args.fock_trunc)
    multipliers = RadialMultipliers(fock)

    rows: list[dict[str, Any]] = []
    for value in grid:
        phi: RadialFunction = FAMILIES[args.family](value)
        c_norm = class_norm(phi, "C", run.truncation, run.tol)
        prime = class_norm(phi, "Cprime", run.truncation, run.tol)
        lower: float | None = None
        if c_norm.converged:
            lower = cb_lower_bound(multipliers.psi_map(phi, run.truncation, run.tol).apply, fock, trials=args.trials, seed=run.seed)
        rows.append(
            {
                "parameter": value,
                "norm_C": c_norm.norm,
                "norm_Cprime": prime.norm,
                "converged_C": c_norm.converged,
                "converged_Cprime": prime.converged,
                "cb_lower_bound": lower,
                "truncation": run.truncation,
                "tol": run.tol,
            }
        )
    return rows if run.fmt == "csv" else {"family": args.family, "rows": rows}


def cmd_demo(args: argparse.Namespace, run: RunConfig) -> Any:
    try:
        spec = AmalgamSpecModel.model_validate(load_json(args.spec) if args.spec else DIHEDRAL)
    except ValidationError as ex:
        raise SpecificationError(f"invalid amalgam specification: {ex}") from ex
    psi: RadialFunction = load_radial(args.phi) if args.phi else geometric(0.5)
    N: int = ConfigValue("options:amalgam:word_length", default=3, after=int).resolve() if args.words is None else args.words

    amalgam = build_amalgam(spec)
    fock = amalgam.fock(N)
    iso = corner_iso(amalgam, fock, N)
    wick = Wick(fock, amalgam.involution)
    multipliers = RadialMultipliers(fock)

    words: list[dict[str, Any]] = []
    bound: float = 0.0
    for n in range(1, N + 1):
        for word in alternating_words(len(amalgam.factors), n):
            bases = [amalgam.mean_zero_basis(i) for i in word]
            if any(b.shape[1] == 0 for b in bases):
                continue
            letters = [Letter(i, amalgam.factors[i].from_gns(b[:, 0])) for i, b in zip(word, bases)]
            reference = iso.compress(word_operator(amalgam, fock, letters, wick))
            image, bound = psi_multiplier(amalgam, multipliers, psi, letters, wick=wick)
            defect = float(np.linalg.norm(iso.compress(image) - eval_radial(psi, n) * reference))
            words.append({"word": list(word), "length": n, "psi": eval_radial(psi, n), "defect": defect})

    flags = amalgam.deformation.flags.to_dict()
    record = {
        "factors": len(amalgam.factors),
        "dim_H": amalgam.H.dim,
        "rank_F": round(float(np.trace(amalgam.deformation.F).real)),
        "flags": flags,
        "word_length": N,
        "corner_dim": iso.dim,
        "isometry_defect": iso.isometry_defect,
        "projection_defect": iso.projection_defect,
        "bound": bound,
        "phi": psi.to_json(),
        "words": words,
        "tol": run.tol,
        "truncation": 2 * N,
    }
    failed = not all(flags.values()) or max([w["defect"] for w in words] + [iso.isometry_defect, iso.projection_defect]) > 1e-8
    payload = words if run.fmt == "csv" else record
    if failed:
        raise CommandFailed(payload, EXIT_FAILED)
    return payload


COMMANDS = {"norm": cmd_norm, "decompose": cmd_decompose, "verify": cmd_verify, "table": cmd_table, "demo": cmd_demo}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", default=None, help="configuration file (default config/config.yml)")
    common.add_argument("--trunc", type=int, default=None, help="Hankel truncation N")
    common.add_argument("--tol", type=float, default=None, help="convergence tolerance")
    common.add_argument("--seed", type=int, default=None)
    common.add_argument("--out", choices=["json", "csv"], default="json")

    parser = argparse.ArgumentParser(prog="radial-multipliers", description="Radial multipliers on deformed Fock spaces")
    commands = parser.add_subparsers(dest="command", required=True)

    norm = commands.add_parser("norm", parents=[common], help="class norm of a radial function")
    norm.add_argument("--phi", required=True, help="radial function as JSON file or inline JSON")
    norm.add_argument("--class", dest="cls", choices=["C", "Cprime"], default="C")

    decompose = commands.add_parser("decompose", parents=[common], help="rank one decomposition of H_φ")
    decompose.add_argument("--phi", required=True)

    verify = commands.add_parser("verify", parents=[common], help="run invariant suites")
    verify.add_argument("--suite", choices=sorted(Suites.keys()) + ["all"], default="all")
    verify.add_argument("--fock-trunc", type=int, default=None, help="Fock space truncation")
    verify.add_argument("--samples", type=int, default=None)
    verify.add_argument("--trials", type=int, default=None)

    table = commands.add_parser("table", parents=[common], help="class norms and cb lower bounds over a parameter grid")
    table.add_argument("--family", default="geometric", help=f"one of {', '.join(sorted(FAMILIES))}")
    table.add_argument("--grid", default="0.1,0.2,0.3,0.4,0.5,0.6,0.7,0.8,0.9")
    table.add_argument("--fock-trunc", type=int, default=4)
    table.add_argument("--trials", type=int, default=None)

    demo = commands.add_parser("demo", parents=[common], help="amalgamated free product end to end")
    demo.add_argument("--spec", default=None, help="amalgam specification (default: infinite dihedral group)")
    demo.add_argument("--phi", default=None, help="class C′ radial function (default: geometric 0.5)")
    demo.add_argument("--words", type=int, default=None, help="maximal word length")
    return parser


def resolve_run_config(args: argparse.Namespace) -> RunConfig:
    return RunConfig(
        command=args.command,
        inputs=[v for v in (getattr(args, "phi", None), getattr(args, "spec", None)) if v],
        truncation=ConfigValue("options:radial:truncation", default=200, after=int).resolve() if args.trunc is None else args.trunc,
        tol=ConfigValue("options:radial:tol", default=1e-9, after=float).resolve() if args.tol is None else args.tol,
        seed=args.seed if args.seed is not None else ConfigValue("options:verify:seed", default=42, after=int).resolve(),
        fmt=args.out,
    )


def emit(payload: Any, fmt: str) -> None:
    if fmt == "csv":
        rows = payload if isinstance(payload, list) else [payload]
        sys.stdout.write(to_csv(rows))
    else:
        sys.stdout.write(to_json(payload) + "\n")


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    if args.config or os.path.isfile("config/config.yml"):
        setup_config_store(args.config or "config/config.yml")

    try:
        run: RunConfig = resolve_run_config(args)
    except ValidationError as ex:
        logger.error(f"invalid options: {ex}")
        return EXIT_PARSE

    logger.info(f"{run.command}: truncation {run.truncation}, tol {run.tol}, seed {run.seed}")
    try:
        emit(COMMANDS[run.command](args, run), run.fmt)
    except CommandFailed as ex:
        emit(ex.report, run.fmt)
        logger.error(f"{run.command} finished with exit code {ex.code}")
        return ex.code
    except (SpecificationError, ValidationError) as ex:
        logger.error(f"rejected input: {ex}")
        return EXIT_PARSE
    except NotInClassError as ex:
        logger.error(str(ex))
        return EXIT_NOT_CONVERGED
    except RadialMultiplierError as ex:
        logger.error(str(ex))
        return EXIT_FAILED
    logger.info(f"{run.command} finished")
    return EXIT_OK
