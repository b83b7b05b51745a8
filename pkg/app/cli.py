"""Command-line front end: verify, decompose, diff, dims, solve"""

import argparse
import itertools
import json
import sys
from typing import Callable, Dict, List, Optional, Sequence

from pydantic import ValidationError

from app import __version__
from app.config import settings
from app.exceptions import ArgumentError, CalculusError, GroupMismatchError, InputError, NotPolynomialLikeError
from app.models.element import dump_decomposition, dump_element, dump_value, load_element
from app.models.group import GroupSpecModel
from app.models.job import JobConfig
from app.models.operator import dump_kernel, load_operator
from app.models.polymorphism import dump_polymorphism, load_polymorphism
from app.models.report import CheckResult, CheckStatus, Report
from app.services import catalogue, identities, polymorph, solver
from app.services.diffcalc import difference, difference_closed
from app.services.floquet import decompose, export_decomposition, reconstruct
from app.services.gmodule import FloquetElement, ModuleElement
from app.services.groups import GroupSpec
from app.services.logger import configure_logging, get_logger
from app.services.solver import StencilOperator

logger = get_logger(__name__)


# Parsing helpers


def parse_group(text: str) -> GroupSpec:
    """`free_abelian:2`, `fin_gen_abelian:1:2,3`, `heisenberg` or a JSON object"""
    text = text.strip()
    try:
        if text.startswith("{"):
            return GroupSpecModel.model_validate_json(text).to_spec()
        kind, *rest = text.split(":")
        rank = int(rest[0]) if rest else 0
        moduli = [int(m) for m in rest[1].split(",") if m] if len(rest) > 1 else []
        return GroupSpecModel(kind=kind, rank=rank, torsion_moduli=moduli).to_spec()
    except (ValueError, ValidationError):
        raise InputError(f"cannot parse group {text!r}") from None


def parse_tuples(text: str, group: GroupSpec) -> List[tuple]:
    """JSON list of tuples of coordinate lists, e.g. [[[1],[2]], [[0],[3]]]"""
    try:
        data = json.loads(text)
        return [tuple(group.element(*coords) for coords in gs) for gs in data]
    except (json.JSONDecodeError, TypeError):
        raise InputError(f"cannot parse tuples {text!r}") from None


def resolve_element(config: JobConfig) -> ModuleElement:
    if not config.element:
        raise ArgumentError("--element is required")
    rank = config.rank
    if rank is None and config.group is not None:
        rank = config.group.rank
    element = load_element(config.element, rank)
    if config.group is not None and config.group.to_spec() != element.group:
        raise GroupMismatchError(f"element lives over {element.group}, not {config.group.to_spec()}")
    return element


def resolve_degree(config: JobConfig, element: ModuleElement) -> int:
    if config.degree is not None:
        return config.degree
    if isinstance(element, FloquetElement):
        return max(element.degree(), 0)
    if config.element and config.element.startswith("catalogue:"):
        return catalogue.get(config.element.split(":", 1)[1]).degree
    raise ArgumentError("--degree is required for black-box elements")


# Commands


def cmd_verify(config: JobConfig, element: Optional[ModuleElement] = None) -> Report:
    """Membership and the identity suite on one element"""
    a = element if element is not None else resolve_element(config)
    n = resolve_degree(config, a)
    report = Report(command="verify", config=config.echo(), result={"element": str(a) if isinstance(a, FloquetElement) else repr(a), "n": n})
    for check in identities.run_suite(a, n, config.probe()):
        report.add(check)
    return report


def cmd_decompose(config: JobConfig, element: Optional[ModuleElement] = None) -> Report:
    """Decomposition, its reconstruction and the round-trip check"""
    p = element if element is not None else resolve_element(config)
    n = resolve_degree(config, p)
    probe = config.probe()
    decomposition = decompose(p, n, probe)
    report = Report(command="decompose", config=config.echo(), result={"n": n})
    if isinstance(p, FloquetElement):
        rebuilt = reconstruct(decomposition)
        report.result["decomposition"] = dump_decomposition(decomposition)
        report.result["reconstructed"] = dump_element(rebuilt)
        if rebuilt == p:
            report.add(CheckResult.passed("round_trip", len(decomposition)))
        else:
            report.add(CheckResult.failed("round_trip", dump_element(rebuilt - p), len(decomposition)))
        return report

    rebuilt = reconstruct(decomposition)
    witness = rebuilt.distinguish(p, probe)
    if witness is None:
        report.add(CheckResult.passed("round_trip", probe.points, exact=False))
    else:
        report.add(CheckResult.failed("round_trip", witness, probe.points, exact=False))
    exported = export_decomposition(decomposition, cutoff=config.fourier_cutoff)
    report.result["decomposition"] = dump_decomposition(exported)
    report.result["reconstructed"] = dump_element(reconstruct(exported))
    return report


def cmd_diff(config: JobConfig, at: Optional[str] = None, element: Optional[ModuleElement] = None) -> Report:
    """Values of D^n a on generator tuples (or on --at tuples)"""
    a = element if element is not None else resolve_element(config)
    n = resolve_degree(config, a)
    group = a.group
    if at:
        tuples = parse_tuples(at, group)
    else:
        gens = group.free_generators()
        tuples = [tuple(gens[i] for i in index) for index in itertools.product(range(group.abelian_rank), repeat=n)]
    recursive = difference(a, n)
    values = []
    mismatches = 0
    sampled = 0
    for gs in tuples:
        if len(gs) != n:
            raise ArgumentError(f"D^{n} needs {n}-tuples, got {len(gs)}")
        value = difference_closed(a, gs)
        if recursive(gs).distinguish(value, config.probe()) is not None:
            mismatches += 1
        dumped = dump_value(value, config.probe(), config.fourier_cutoff)
        if isinstance(dumped, dict):
            sampled += 1
        values.append({"at": [list(g.coords) for g in gs], "value": dumped})
    report = Report(command="diff", config=config.echo(), result={"n": n, "values": values})
    name = f"closed_form[n={n}]"
    if mismatches:
        report.add(CheckResult.failed(name, {"mismatches": mismatches}, len(tuples), a.exact))
    else:
        report.add(CheckResult.passed(name, len(tuples), a.exact))
    if not a.exact:
        report.add(CheckResult(
            name="fourier_export",
            status=CheckStatus.DIAGNOSTIC,
            exact=False,
            checked=len(tuples),
            detail=f"{len(tuples) - sampled} Fourier series, {sampled} sampled (not periodic)",
        ))
    extracted = None
    if n >= 1 and a.exact:
        try:
            extraction = polymorph.from_Dn(a, n, config.probe())
        except NotPolynomialLikeError as e:
            report.add(CheckResult(name="polymorphism", status=CheckStatus.SKIPPED, detail=e.message))
        else:
            extracted = extraction.polymorphism
            report.result["polymorphism"] = dump_polymorphism(extracted)
            report.result["symmetry"] = extraction.symmetry.to_dict()
            for check in extraction.checks:
                report.add(check)
    if config.expect:
        expected = load_polymorphism(config.expect)
        if extracted is None:
            report.add(CheckResult.failed("expected_polymorphism", "no polymorphism was extracted"))
        elif extracted == expected:
            report.add(CheckResult.passed("expected_polymorphism", len(expected.values)))
        else:
            report.add(CheckResult.failed("expected_polymorphism", dump_polymorphism(expected), len(expected.values)))
    return report


def cmd_dims(config: JobConfig) -> Report:
    """dim L_n, dim L_n^S and the P_n bounds"""
    n = settings.MAX_DEGREE if config.degree is None else config.degree
    r = config.rank if config.rank is not None else (config.group.rank if config.group else 1)
    s = config.invariant_dim or 1
    row = {
        "n": n,
        "r": r,
        "s": s,
        "dim_L": polymorph.dim_Ln(n, r, s),
        "dim_LS": polymorph.dim_LnS(n, r, s),
        "P_bound": polymorph.dim_Pn_bound(n, r, s),
        "telescoped_bound": polymorph.telescoped_bound(n, r, s),
    }
    report = Report(command="dims", config=config.echo(), result=row)
    if n < 1 or r < 1:
        return report
    unknowns = polymorph.brute_force_unknowns(n, r)
    if unknowns > settings.BRUTE_FORCE_MAX_UNKNOWNS:
        logger.info("brute_force_skipped", n=n, r=r, unknowns=unknowns)
        report.add(CheckResult(
            name="brute_force",
            status=CheckStatus.SKIPPED,
            detail=f"{unknowns} unknowns exceed BRUTE_FORCE_MAX_UNKNOWNS={settings.BRUTE_FORCE_MAX_UNKNOWNS}",
        ))
    else:
        brute = {"dim_L": polymorph.brute_force_dim_Ln(n, r, s), "dim_LS": polymorph.brute_force_dim_LnS(n, r, s)}
        for key, value in brute.items():
            name = f"brute_force_{key}"
            if value == row[key]:
                report.add(CheckResult.passed(name, 1, detail=str(value)))
            else:
                report.add(CheckResult.failed(name, {"formula": row[key], "brute_force": value}, 1))
    return report


def cmd_solve(config: JobConfig, operator: Optional[StencilOperator] = None) -> Report:
    """Polynomial-like kernel of a stencil operator and the dimension bound"""
    if operator is None and not config.operator:
        raise ArgumentError("--operator is required")
    D = operator if operator is not None else load_operator(config.operator)
    n = settings.MAX_DEGREE if config.degree is None else config.degree
    if D.period > config.max_period:
        raise ArgumentError(f"period {D.period} exceeds --max-period {config.max_period}")
    if n > config.max_degree:
        raise ArgumentError(f"degree {n} exceeds --max-degree {config.max_degree}")
    kernel = solver.polynomial_kernel(D, n)
    bound = solver.check_bound(D, n)
    report = Report(command="solve", config=config.echo(), result={"kernel": dump_kernel(kernel), "bound": bound.to_dict()})
    report.add(CheckResult.passed("bound", n + 1, detail=f"{bound.dimension} <= {bound.bound}"))
    report.add(solver.commutes_with_period_shift(D, config.probe(), samples=max(config.samples // 4, 1)))
    checked = 0
    for b in kernel.basis:
        for i in range(D.rank):
            checked += 1
            t = [1 if j == i else 0 for j in range(D.rank)]
            if not solver.in_span(kernel, solver.translate(b, t)):
                report.add(CheckResult.failed("translation_invariance", {"basis": str(b), "t": t}, checked))
                break
        else:
            continue
        break
    else:
        report.add(CheckResult.passed("translation_invariance", checked))
    expectation = bound.expectation_met
    if expectation is not None:
        report.add(CheckResult(
            name="covering_expectation",
            status=CheckStatus.DIAGNOSTIC,
            checked=n + 1,
            detail="met" if expectation else "not met",
        ))
    return report


# Text rendering


def render_dims(report: Report) -> str:
    row = report.result
    header = "n r s dimL dimLS Pbound"
    line = f"{row['n']} {row['r']} {row['s']} {row['dim_L']} {row['dim_LS']} {row['P_bound']}"
    return f"{header}\n{line}"


def render_solve(report: Report) -> str:
    kernel = report.result["kernel"]
    lines = [f"dim={kernel['dimension']}"]
    lines += [f"  {text}" for text in kernel["text"]]
    bound = report.result["bound"]
    lines.append(f"bound={bound['bound']} slack={bound['slack']} dims={' '.join(map(str, bound['dims']))}")
    return "\n".join(lines)


COMMANDS: Dict[str, Callable[..., Report]] = {
    "verify": cmd_verify,
    "decompose": cmd_decompose,
    "diff": cmd_diff,
    "dims": cmd_dims,
    "solve": cmd_solve,
}

RENDERERS: Dict[str, Callable[[Report], str]] = {
    "dims": render_dims,
    "solve": render_solve,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="python -m app",
        description="Difference operators, polymorphisms and Floquet decompositions for group actions",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("command", choices=sorted(COMMANDS), help="What to run")
    parser.add_argument("--group", type=str, help="Group: free_abelian:R, fin_gen_abelian:R:M1,M2, heisenberg or JSON")
    parser.add_argument("--element", type=str, help="FloquetElement JSON file or catalogue:NAME")
    parser.add_argument("--operator", type=str, help="StencilOperator JSON file")
    parser.add_argument("--degree", "-n", type=int, help="Order n")
    parser.add_argument("--rank", "-r", type=int, help="Rank r (dims, empty elements)")
    parser.add_argument("--invariant-dim", "-s", type=int, help="s = dim of the invariant coefficients (dims)")
    parser.add_argument("--at", type=str, help="diff: JSON list of tuples of coordinate lists")
    parser.add_argument("--expect", type=str, help="diff: polymorphism JSON file that D^n a must equal")
    parser.add_argument("--tol", type=float, help=f"Black-box tolerance (default {settings.TOLERANCE})")
    parser.add_argument("--samples", type=int, help=f"Random tuples per check (default {settings.RANDOM_SAMPLES})")
    parser.add_argument("--radius", type=int, help=f"Coordinate radius (default {settings.SAMPLE_RADIUS})")
    parser.add_argument("--seed", type=int, help=f"Seed for randomized checks (default {settings.SEED})")
    parser.add_argument("--fourier-cutoff", type=int, help=f"Fourier export cutoff (default {settings.FOURIER_CUTOFF})")
    parser.add_argument("--max-period", type=int, help=f"Solver period cap (default {settings.MAX_PERIOD})")
    parser.add_argument("--max-degree", type=int, help=f"Solver degree cap (default {settings.MAX_DEGREE})")
    parser.add_argument("--out", "-o", type=str, help="Write the JSON report here")
    parser.add_argument("--json", action="store_true", help="Print the JSON report instead of the text summary")
    parser.add_argument("--log-level", type=str, help=f"Log level (default {settings.LOG_LEVEL})")
    return parser


def job_config(args: argparse.Namespace) -> JobConfig:
    fields = {
        "command": args.command,
        "group": GroupSpecModel.from_spec(parse_group(args.group)) if args.group else None,
        "element": args.element,
        "operator": args.operator,
        "degree": args.degree,
        "rank": args.rank,
        "invariant_dim": args.invariant_dim,
        "tol": args.tol,
        "samples": args.samples,
        "radius": args.radius,
        "seed": args.seed,
        "fourier_cutoff": args.fourier_cutoff,
        "max_period": args.max_period,
        "max_degree": args.max_degree,
        "expect": args.expect,
        "out": args.out,
    }
    try:
        return JobConfig(**{k: v for k, v in fields.items() if v is not None})
    except ValidationError as e:
        error = e.errors()[0]
        raise ArgumentError(f"--{'-'.join(map(str, error['loc']))}: {error['msg']}") from None


def dumps(report: Report) -> str:
    return json.dumps(report.model_dump(mode="json"), indent=2) + "\n"


def write_report(path: Optional[str], text: str) -> None:
    if path:
        with open(path, "w", encoding="utf-8") as f:
            f.write(text)


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Run one command; returns 0 on success, 1 on a failed check, 2 on bad input"""
    parser = build_parser()
    args = parser.parse_args(argv)
    configure_logging(level=args.log_level)

    try:
        config = job_config(args)
        logger.info("job_started", command=config.command, seed=config.seed)
        command = COMMANDS[config.command]
        report = command(config, args.at) if config.command == "diff" else command(config)
    except CalculusError as e:
        logger.error("job_failed", error=type(e).__name__, message=e.message)
        failure = Report(command=args.command, result=e.to_dict())
        write_report(args.out, dumps(failure))
        print(f"error: {e.message}", file=sys.stderr)
        return e.exit_code

    text = dumps(report)
    write_report(config.out, text)
    if args.json:
        sys.stdout.write(text)
    else:
        render = RENDERERS.get(config.command, Report.summary)
        print(render(report))
    logger.info("job_finished", command=config.command, passed=report.passed)
    return report.exit_code


def run() -> None:
    sys.exit(main())
