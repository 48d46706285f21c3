"""Command-line front end.

Subcommands: verify, classify, iso, cocycle, affinize, table.  Structures are
described by TOML spec files; results go to standard output as text or JSON
and optionally to a JSON report file.  Exit codes: 0 pass/success, 1
verification failure (counterexamples found, no isomorphism, or no cocycle
solution), 2 usage or input errors.
"""

from __future__ import annotations

import argparse
import itertools
import json
import sys
from fractions import Fraction
from typing import Optional

from . import groups
from .affinization import aff, affine_bracket, check_jacobi
from .classifier import are_isomorphic, identify, solve_cocycle
from .report import SCHEMA_VERSION, Report
from .scalars import ParseError, ScalarError, SingularEvaluation, Symbols, parse_scalar
from .structures import (
    CustomTable,
    SpecError,
    StructureSpec,
    build_spec,
    parse_pair_key,
    read_spec_config,
    render_pair_key,
    symbols_for,
    to_table,
)
from .verifier import (
    AModule,
    BModule,
    VModule,
    check_cocycle,
    check_graded_equations,
    check_left_symmetric,
    check_nongraded_equations,
    check_novikov,
    check_pair_identities,
    check_sub_adjacent,
    check_module,
)
from .structures import _parse_param  # shared parameter parsing for module specs

COST_WARN_THRESHOLD = 10**6

IDENTITY_ARITY = {
    "left-symmetric": (3,),
    "graded-eqs": (2, 3),
    "pair-identities": (2,),
    "nongraded-eqs": (2, 2, 3, 3, 3),
    "sub-adjacent": (2,),
    "novikov": (3,),
    "module": (3,),
    "cocycle": (2, 3),
}


class UsageError(Exception):
    pass


def _build_module_spec(config: dict, symbols: Symbols):
    family = config["family"]
    if family == "module_v":
        return VModule(
            symbols,
            _parse_param(config, "alpha", symbols, default="alpha"),
            _parse_param(config, "beta", symbols, default="beta"),
        )
    if family == "module_a":
        return AModule(symbols, _parse_param(config, "gamma", symbols, default="gamma"))
    if family == "module_b":
        return BModule(symbols, _parse_param(config, "gamma", symbols, default="gamma"))
    raise UsageError(f"{config['_path']}: family {family!r} is not a module description")


def _load_structure(path: str):
    config = read_spec_config(path)
    if config["family"].startswith("module_"):
        raise UsageError(f"{path}: module specs are only usable with 'verify --identity module'")
    symbols = symbols_for(config)
    return build_spec(config, symbols), symbols


def _parse_eval(arg: Optional[str]) -> Optional[dict]:
    if arg is None:
        return None
    assignment = {}
    for piece in arg.split(","):
        piece = piece.strip()
        if not piece:
            continue
        if "=" not in piece:
            raise UsageError(f"--eval entry {piece!r} is not of the form name=rational")
        name, _, value = piece.partition("=")
        try:
            assignment[name.strip()] = Fraction(value.strip())
        except (ValueError, ZeroDivisionError):
            raise UsageError(f"--eval entry {piece!r}: bad rational {value!r}") from None
    return assignment


def _emit(args, document: dict, text_lines: list) -> None:
    payload = json.dumps(document, separators=(",", ":"))
    if args.format == "json":
        print(payload)
    else:
        for line in text_lines:
            print(line)
    if args.report:
        with open(args.report, "w") as fh:
            fh.write(payload)
            fh.write("\n")


def _cost_note(rank: int, radius: int, arities) -> None:
    cases = sum((2 * radius + 1) ** (rank * k) for k in arities)
    if cases > COST_WARN_THRESHOLD:
        print(
            f"note: about {cases} cases at rank {rank}, radius {radius}; "
            f"case counts grow as (2*radius+1)**(rank*arity)",
            file=sys.stderr,
        )


def _report_lines(report: Report, assignment) -> list:
    lines = [report.summary()]
    for note in report.assumptions:
        lines.append(f"  assumption: {note}")
    for ce in report.counterexamples:
        d = ce.to_dict(assignment)
        lines.append(f"  counterexample {d['inputs']}: lhs = {d['lhs']} ; rhs = {d['rhs']}")
    return lines


def _cmd_verify(args) -> int:
    assignment = _parse_eval(args.eval)
    config = read_spec_config(args.spec)
    symbols = symbols_for(config)
    if args.identity == "module":
        mspec = _build_module_spec(config, symbols)
        _cost_note(symbols.rank, args.radius, IDENTITY_ARITY["module"])
        report = check_module(mspec, args.radius, args.partitions, args.max_counterexamples)
    else:
        if config["family"].startswith("module_"):
            raise UsageError(f"{args.spec}: use --identity module with a module spec")
        spec = build_spec(config, symbols)
        _cost_note(symbols.rank, args.radius, IDENTITY_ARITY[args.identity])
        if args.identity == "left-symmetric":
            report = check_left_symmetric(spec, args.radius, args.partitions, args.max_counterexamples)
        elif args.identity == "graded-eqs":
            report = check_graded_equations(spec, args.radius, args.partitions, args.max_counterexamples)
        elif args.identity == "pair-identities":
            report = check_pair_identities(spec, args.radius, args.partitions, args.max_counterexamples)
        elif args.identity == "nongraded-eqs":
            report = check_nongraded_equations(spec, args.radius, args.partitions, args.max_counterexamples)
        elif args.identity == "sub-adjacent":
            report = check_sub_adjacent(spec, args.radius, args.partitions, args.max_counterexamples)
        elif args.identity == "novikov":
            report = check_novikov(spec, args.radius, args.partitions, args.max_counterexamples)
        elif args.identity == "cocycle":
            phi = _load_phi(args.phi, symbols) if args.phi else None
            report = check_cocycle(spec, phi, args.radius, args.partitions, args.max_counterexamples)
        else:
            raise UsageError(f"unknown identity {args.identity!r}")
    _emit(args, report.to_dict(assignment), _report_lines(report, assignment))
    return 0 if report.passed else 1


def _load_phi(path: str, symbols: Symbols) -> dict:
    with open(path) as fh:
        raw = json.load(fh)
    table = {}
    for key, expr in raw.items():
        pair = parse_pair_key(key, symbols.rank)
        table[pair] = parse_scalar(expr, symbols)
    return table


def _cmd_classify(args) -> int:
    config = read_spec_config(args.spec)
    symbols = symbols_for(config)
    spec = build_spec(config, symbols)
    if isinstance(spec, CustomTable):
        table = spec
    else:
        table = to_table(spec, args.radius)
    fit = identify(table, args.radius)
    document = {"schema_version": SCHEMA_VERSION}
    document.update(fit.to_dict())
    lines = [f"candidates: {len(fit.candidates)}"]
    for spec_c, exact in fit.candidates:
        lines.append(f"  {spec_c.describe()} (residual-free: {exact})")
    for note in fit.notes:
        lines.append(f"  note: {note}")
    _emit(args, document, lines)
    return 0 if fit.candidates else 1


def _cmd_iso(args) -> int:
    config1 = read_spec_config(args.spec)
    config2 = read_spec_config(args.spec2)
    if config1["rank"] != config2["rank"]:
        raise UsageError(
            f"rank mismatch: {args.spec} has rank {config1['rank']}, {args.spec2} has rank {config2['rank']}"
        )
    params = list(config1["params"])
    for extra in config2["params"]:
        if extra not in params:
            params.append(extra)
    symbols = Symbols(config1["rank"], tuple(params))
    spec1 = build_spec(config1, symbols)
    spec2 = build_spec(config2, symbols)
    result, witness = are_isomorphic(spec1, spec2)
    document = {
        "schema_version": SCHEMA_VERSION,
        "isomorphic": result,
        "witness": witness,
        "spec1": {"family": spec1.kind, "params": spec1.params()},
        "spec2": {"family": spec2.kind, "params": spec2.params()},
    }
    lines = [f"isomorphic: {result}", f"witness: {witness}"]
    _emit(args, document, lines)
    return 0 if result else 1


def _cmd_cocycle(args) -> int:
    assignment = _parse_eval(args.eval)
    spec, symbols = _load_structure(args.spec)
    solution = solve_cocycle(spec, args.radius)
    document = {"schema_version": SCHEMA_VERSION}
    document.update(solution.to_dict())
    if assignment is not None and solution.phi is not None:
        document["phi"] = {
            render_pair_key(a, b): str(solution.phi[(a, b)].evaluate(assignment))
            for (a, b) in sorted(solution.phi)
        }
    lines = [
        f"status: {solution.status}",
        f"system: {solution.system_size[0]} unknowns, {solution.system_size[1]} equations",
    ]
    if solution.status == "unique":
        nonzero = {p: v for p, v in solution.phi.items() if not v.is_zero()}
        lines.append(f"nonzero entries: {len(nonzero)}")
        for (a, b) in sorted(nonzero):
            value = nonzero[(a, b)]
            shown = str(value.evaluate(assignment)) if assignment is not None else value.render()
            lines.append(f"  phi({list(a)}, {list(b)}) = {shown}")
    _emit(args, document, lines)
    return 0 if solution.status == "unique" else 1


def _cmd_affinize(args) -> int:
    assignment = _parse_eval(args.eval)
    spec, symbols = _load_structure(args.spec)
    if args.check_jacobi:
        _cost_note(symbols.rank * (2 * args.t_radius + 1), args.radius, (3,))
        report = check_jacobi(spec, args.radius, args.t_radius, args.partitions, args.max_counterexamples)
        _emit(args, report.to_dict(assignment), _report_lines(report, assignment))
        return 0 if report.passed else 1
    win = groups.window(symbols.rank, args.radius)
    degrees = range(-args.t_radius, args.t_radius + 1)
    basis = [(a, i) for a in win for i in degrees]
    entries = []
    lines = []
    for (a, i), (b, j) in itertools.product(basis, basis):
        value = affine_bracket(spec, aff(symbols, a, i), aff(symbols, b, j))
        entries.append(
            {
                "left": {"a": list(a), "i": i},
                "right": {"a": list(b), "i": j},
                "value": value.to_entries(),
            }
        )
        shown = value.render_eval(assignment) if assignment is not None else value.render()
        lines.append(f"[x({','.join(map(str, a))};{i}), x({','.join(map(str, b))};{j})] = {shown}")
    document = {
        "schema_version": SCHEMA_VERSION,
        "family": spec.kind,
        "rank": symbols.rank,
        "radius": args.radius,
        "t_radius": args.t_radius,
        "brackets": entries,
    }
    _emit(args, document, lines)
    return 0


def _cmd_table(args) -> int:
    assignment = _parse_eval(args.eval)
    spec, symbols = _load_structure(args.spec)
    win = groups.window(symbols.rank, args.radius)
    f_map = {}
    g_map = {}
    phi_map = {}
    lines = []
    for a, b in itertools.product(win, win):
        key = render_pair_key(a, b)
        fv = spec.f_of(a, b)
        f_map[key] = fv.render()
        pieces = [f"({_shown(fv, assignment)})*L({','.join(map(str, groups.add(a, b)))})"]
        if spec.zeta is not None:
            gv = spec.g_of(a, b)
            g_map[key] = gv.render()
            if not gv.is_zero():
                target = groups.add(groups.add(a, b), spec.zeta)
                pieces.append(f"({_shown(gv, assignment)})*L({','.join(map(str, target))})")
        if spec.has_central:
            pv = spec.phi_of(a, b)
            phi_map[key] = pv.render()
            if not pv.is_zero():
                pieces.append(f"({_shown(pv, assignment)})*K")
        lines.append(
            f"L({','.join(map(str, a))}) * L({','.join(map(str, b))}) = " + " + ".join(pieces)
        )
    document = {
        "schema_version": SCHEMA_VERSION,
        "family": spec.kind,
        "rank": symbols.rank,
        "radius": args.radius,
        "f": f_map,
    }
    if spec.zeta is not None:
        document["g"] = g_map
        document["zeta"] = list(spec.zeta)
    if spec.has_central:
        document["phi"] = phi_map
    _emit(args, document, lines)
    return 0


def _shown(value, assignment) -> str:
    if assignment is not None:
        return str(value.evaluate(assignment))
    return value.render()


def _add_common(p: argparse.ArgumentParser, radius_default: int = 1) -> None:
    p.add_argument("--spec", required=True, help="TOML spec file")
    p.add_argument("--radius", type=int, default=radius_default, help=f"window radius (default {radius_default})")
    p.add_argument("--report", help="write the JSON document to this path")
    p.add_argument("--format", choices=("text", "json"), default="text", help="stdout format")
    p.add_argument("--eval", help="evaluate scalars at 'name=rational,...'")
    p.add_argument("--partitions", type=int, default=1, help="split window iteration into N parts")
    p.add_argument(
        "--max-counterexamples",
        type=int,
        default=10,
        help="cap stored counterexamples (-1 for all)",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="clsas",
        description=(
            "Exact verification, classification and affinization of compatible "
            "left-symmetric structures on high rank Witt and Virasoro algebras"
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify", help="verify an identity system on a window")
    _add_common(p)
    p.add_argument(
        "--identity",
        required=True,
        choices=sorted(IDENTITY_ARITY),
        help="identity system to check",
    )
    p.add_argument("--phi", help="JSON file with a cocycle table for --identity cocycle")
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("classify", help="recover families matching a structure table")
    _add_common(p, radius_default=2)
    p.set_defaults(func=_cmd_classify)

    p = sub.add_parser("iso", help="decide isomorphism of two graded structures")
    p.add_argument("--spec", required=True)
    p.add_argument("--spec2", required=True)
    p.add_argument("--report", help="write the JSON document to this path")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.set_defaults(func=_cmd_iso)

    p = sub.add_parser("cocycle", help="solve the central-extension linear system")
    _add_common(p, radius_default=2)
    p.set_defaults(func=_cmd_cocycle)

    p = sub.add_parser("affinize", help="affinized bracket table or Jacobi check")
    _add_common(p)
    p.add_argument("--t-radius", type=int, default=1, help="t-degree window radius (default 1)")
    p.add_argument("--check-jacobi", action="store_true", help="verify the Jacobi identity instead")
    p.set_defaults(func=_cmd_affinize)

    p = sub.add_parser("table", help="emit the structure-constant table on a window")
    _add_common(p, radius_default=0)
    p.set_defaults(func=_cmd_table)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (SpecError, ParseError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except SingularEvaluation as exc:
        print(f"error: singular evaluation: {exc}", file=sys.stderr)
        return 2
    except FileNotFoundError as exc:
        print(f"error: {exc.filename}: file not found", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
