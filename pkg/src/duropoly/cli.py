"""Command-line front end: solve markets, audit bounds, run sweeps.

Commands:
    solve <file>                 equilibrium prices, schedule, profit
    bounds <file>                benchmark profits and the sandwich verdicts
    verify <file> [--profile p]  deviation hunt on the solved (or loaded) solution
    pacman <file>                full-surplus eligibility and greedy simulation
    tight --n N --k K --vh V     generate the near-factor-2 family member
    nonskim [--demo | <file>]    two-period profile verification and swap repair
    oracle <file>                brute-force cross-check of the solver
    sweep --count ... --seed ... CSV of bounds reports over random markets

Exit codes: 0 success, 1 invalid input, 2 property violation discovered,
3 exhaustive-search size guard refused the instance.

Rationals are serialized as exact strings ("260", "21/11"); decimal columns
are display-only renderings.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import dataclass
from fractions import Fraction

from . import bounds as bounds_mod
from . import nonskim as nonskim_mod
from . import oracle as oracle_mod
from . import pacman as pacman_mod
from .generate import random_instances
from .model import (
    Instance,
    Rational,
    SizeGuardError,
    ValidationError,
    format_rational,
    instance_from_dict,
    instance_to_dict,
    parse_rational,
    total_surplus,
)
from .solver import EquilibriumSolution, solve
from .static_monopoly import suffix_price_table

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_VIOLATION = 2
EXIT_GUARD = 3

SWEEP_COLUMNS = [
    "instance_id",
    "N",
    "T",
    "Pi_M",
    "Pi_D",
    "sum_p",
    "p1",
    "ratio_num",
    "ratio_den",
    "ratio_decimal",
    "bounds_ok",
]


@dataclass(frozen=True)
class RunConfig:
    """One resolved CLI invocation."""

    command: str
    input_path: str | None = None
    output_format: str = "table"
    out_path: str | None = None
    profile_path: str | None = None
    demo: bool = False
    n: int | None = None
    k: int | None = None
    v_high: str | None = None
    seed: int = 0
    count: int = 100
    max_n: int = 10
    max_t: int = 4
    max_value: int = 100


def decimal_places(value: Rational, places: int = 6) -> str:
    """Exact round-half-even decimal rendering of a non-negative rational."""
    scaled = value * 10**places
    whole = scaled.numerator // scaled.denominator
    remainder = scaled - whole
    if remainder > Fraction(1, 2) or (remainder == Fraction(1, 2) and whole % 2 == 1):
        whole += 1
    return f"{whole // 10 ** places}.{whole % 10 ** places:0{places}d}"


def solution_to_dict(inst: Instance, sol: EquilibriumSolution) -> dict:
    """JSON-ready solution form (tables omitted; they re-derive from the instance)."""
    return {
        "instance": instance_to_dict(inst),
        "prices": [format_rational(p) for p in sol.prices],
        "buyers": list(sol.buyers),
        "cutoffs": list(sol.cutoffs),
        "profit": format_rational(sol.profit),
    }


def solution_from_dict(data: dict) -> tuple[Instance, EquilibriumSolution]:
    """Parse a serialized solution back into checkable form."""
    if not isinstance(data, dict):
        raise ValidationError("solution", f"expected JSON object, got {type(data).__name__}")
    for key in ("instance", "prices", "buyers", "cutoffs", "profit"):
        if key not in data:
            raise ValidationError(key, "missing")
    inst = instance_from_dict(data["instance"])
    prices = tuple(parse_rational(p) for p in data["prices"])
    buyers = tuple(data["buyers"])
    cutoffs = tuple(data["cutoffs"])
    for name, seq in (("buyers", buyers), ("cutoffs", cutoffs)):
        for entry in seq:
            if not isinstance(entry, int) or isinstance(entry, bool):
                raise ValidationError(name, f"expected integers, got {entry!r}")
    sol = EquilibriumSolution(
        prices=prices,
        buyers=buyers,
        cutoffs=cutoffs,
        profit=parse_rational(data["profit"]),
    )
    return inst, sol


def _load_json(path: str) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as handle:
            return json.load(handle)
    except OSError as exc:
        raise ValidationError("input", f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ValidationError("input", f"{path} is not valid JSON (line {exc.lineno}, column {exc.colno})") from exc


def _load_instance(path: str) -> Instance:
    return instance_from_dict(_load_json(path))


def _bounds_row(instance_id: int, inst: Instance, report) -> list[str]:
    return [
        str(instance_id),
        str(inst.n),
        str(inst.periods),
        format_rational(report.static_profit),
        format_rational(report.duropoly_profit),
        format_rational(report.sum_suffix_prices),
        format_rational(report.top_price),
        str(report.ratio.numerator),
        str(report.ratio.denominator),
        decimal_places(report.ratio),
        "true" if report.all_ok else "false",
    ]


def _emit(text: str, out_path: str | None):
    if out_path is None:
        sys.stdout.write(text)
        if text and not text.endswith("\n"):
            sys.stdout.write("\n")
    else:
        with open(out_path, "w", encoding="utf-8", newline="") as handle:
            handle.write(text)


def _cmd_solve(config: RunConfig) -> int:
    inst = _load_instance(config.input_path)
    sol = solve(inst)
    if config.output_format == "json":
        text = json.dumps(solution_to_dict(inst, sol), indent=2)
    elif config.output_format == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["period", "price", "buyers", "cutoff"])
        for t in range(inst.periods):
            writer.writerow([t + 1, format_rational(sol.prices[t]), sol.buyers[t], sol.cutoffs[t]])
        text = buf.getvalue()
    else:
        lines = ["period  price        buyers"]
        for t in range(inst.periods):
            lines.append(f"{t + 1:>6}  {format_rational(sol.prices[t]):<11}  {sol.buyers[t]:>6}")
        lines.append(f"profit: {format_rational(sol.profit)}")
        text = "\n".join(lines) + "\n"
    _emit(text, config.out_path)
    return EXIT_OK


def _cmd_bounds(config: RunConfig) -> int:
    inst = _load_instance(config.input_path)
    report = bounds_mod.analyze(inst)
    if config.output_format == "json":
        payload = {
            "static_profit": format_rational(report.static_profit),
            "duropoly_profit": format_rational(report.duropoly_profit),
            "sum_suffix_prices": format_rational(report.sum_suffix_prices),
            "top_price": format_rational(report.top_price),
            "coase_profit": format_rational(report.coase_profit),
            "surplus": format_rational(report.surplus),
            "ratio": format_rational(report.ratio),
            "ratio_decimal": decimal_places(report.ratio),
            "verdicts": report.verdicts,
        }
        text = json.dumps(payload, indent=2)
    elif config.output_format == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(SWEEP_COLUMNS)
        writer.writerow(_bounds_row(0, inst, report))
        text = buf.getvalue()
    else:
        lines = [
            f"static profit:      {format_rational(report.static_profit)}",
            f"duropoly profit:    {format_rational(report.duropoly_profit)}",
            f"sum tail prices:    {format_rational(report.sum_suffix_prices)}",
            f"top price:          {format_rational(report.top_price)}",
            f"coase profit:       {format_rational(report.coase_profit)}",
            f"surplus:            {format_rational(report.surplus)}",
            f"ratio:              {format_rational(report.ratio)} ({decimal_places(report.ratio)})",
        ]
        for name, verdict in report.verdicts.items():
            lines.append(f"{name}: {'ok' if verdict else 'VIOLATED'}")
        text = "\n".join(lines) + "\n"
    _emit(text, config.out_path)
    return EXIT_OK if report.all_ok else EXIT_VIOLATION


def _render_deviations(report) -> str:
    if report.ok:
        return "no profitable deviations\n"
    lines = [f"{len(report.deviations)} profitable deviation(s):"]
    for dev in report.deviations:
        lines.append(
            f"  agent {dev.agent} at (consumer {dev.subgame.first_consumer}, "
            f"period {dev.subgame.start_period}): {dev.alternative_action} "
            f"(gain {format_rational(dev.payoff_gain)})"
        )
    return "\n".join(lines) + "\n"


def _deviations_payload(report) -> dict:
    return {
        "ok": report.ok,
        "deviations": [
            {
                "agent": dev.agent,
                "first_consumer": dev.subgame.first_consumer,
                "start_period": dev.subgame.start_period,
                "alternative_action": dev.alternative_action,
                "payoff_gain": format_rational(dev.payoff_gain),
            }
            for dev in report.deviations
        ],
    }


def _cmd_verify(config: RunConfig) -> int:
    if config.profile_path is not None:
        inst, sol = solution_from_dict(_load_json(config.profile_path))
        file_inst = _load_instance(config.input_path)
        if file_inst != inst:
            raise ValidationError("profile", "solution was produced for a different instance")
    else:
        inst = _load_instance(config.input_path)
        sol = solve(inst)
    report = oracle_mod.verify_spne(inst, sol)
    if config.output_format == "json":
        text = json.dumps(_deviations_payload(report), indent=2)
    else:
        text = _render_deviations(report)
    _emit(text, config.out_path)
    return EXIT_OK if report.ok else EXIT_VIOLATION


def _cmd_pacman(config: RunConfig) -> int:
    inst = _load_instance(config.input_path)
    check = pacman_mod.pacman_condition(inst)
    revenue, prices = pacman_mod.simulate_pacman(inst)
    surplus = total_surplus(inst)
    profit = solve(inst).profit
    consistent = (profit == surplus) == check.eligible and (
        not check.eligible or revenue == surplus
    )
    payload = {
        "eligible": check.eligible,
        "witness": check.witness,
        "tie_dependent_eligibility": check.tie_dependent,
        "greedy_revenue": format_rational(revenue),
        "greedy_prices": [format_rational(p) for p in prices],
        "equilibrium_profit": format_rational(profit),
        "surplus": format_rational(surplus),
        "consistent": consistent,
    }
    if config.output_format == "json":
        text = json.dumps(payload, indent=2)
    else:
        lines = [
            f"full-surplus eligible: {check.eligible}"
            + (" (tie-dependent eligibility)" if check.tie_dependent else ""),
        ]
        if check.witness is not None:
            lines.append(f"witness: {check.witness}")
        lines.append(f"greedy prices: {', '.join(format_rational(p) for p in prices)}")
        lines.append(f"greedy revenue: {format_rational(revenue)}")
        lines.append(f"equilibrium profit: {format_rational(profit)}")
        lines.append(f"total surplus: {format_rational(surplus)}")
        text = "\n".join(lines) + "\n"
    _emit(text, config.out_path)
    return EXIT_OK if consistent else EXIT_VIOLATION


def _cmd_tight(config: RunConfig) -> int:
    inst = bounds_mod.tight_example(config.n, config.k, parse_rational(config.v_high))
    report = bounds_mod.analyze(inst)
    if config.output_format == "json":
        payload = {
            "instance": instance_to_dict(inst),
            "static_profit": format_rational(report.static_profit),
            "duropoly_profit": format_rational(report.duropoly_profit),
            "ratio": format_rational(report.ratio),
            "ratio_decimal": decimal_places(report.ratio),
        }
        text = json.dumps(payload, indent=2)
    else:
        values = instance_to_dict(inst)["valuations"]
        shown = ", ".join(values[:5]) + (", ..." if len(values) > 5 else "")
        lines = [
            f"instance: [{shown}] over 2 periods",
            f"static profit:   {format_rational(report.static_profit)}",
            f"duropoly profit: {format_rational(report.duropoly_profit)}",
            f"ratio:           {format_rational(report.ratio)} ({decimal_places(report.ratio)})",
        ]
        text = "\n".join(lines) + "\n"
    _emit(text, config.out_path)
    return EXIT_OK


def _cmd_nonskim(config: RunConfig) -> int:
    if config.demo:
        inst, prof = nonskim_mod.builtin_nonskim_example()
    else:
        data = _load_json(config.input_path)
        if "instance" not in data or "profile" not in data:
            raise ValidationError("input", 'expected {"instance": ..., "profile": ...}')
        inst = instance_from_dict(data["instance"])
        prof = nonskim_mod.profile_from_dict(inst, data["profile"])
    report = nonskim_mod.verify_profile(inst, prof)
    outcome = nonskim_mod.play_profile(inst, prof)
    skimming = nonskim_mod.is_skimming(inst, prof)
    payload: dict = {
        "instance": instance_to_dict(inst),
        "profile": nonskim_mod.profile_to_dict(inst, prof),
        "equilibrium": report.ok,
        "skimming": skimming,
        "revenue": format_rational(outcome.revenue),
        "deviations": _deviations_payload(report)["deviations"],
    }
    if report.ok and not skimming:
        chain = nonskim_mod.check_swap_chain(inst, prof)
        swapped = nonskim_mod.swap_to_skimming(inst, prof)
        swapped_outcome = nonskim_mod.play_profile(inst, swapped)
        payload["swap_chain"] = [format_rational(x) for x in chain.as_tuple()]
        payload["swapped_profile"] = nonskim_mod.profile_to_dict(inst, swapped)
        payload["swapped_revenue"] = format_rational(swapped_outcome.revenue)
        payload["swapped_skimming"] = nonskim_mod.is_skimming(inst, swapped)
    if config.output_format == "json":
        text = json.dumps(payload, indent=2)
    else:
        lines = [
            f"equilibrium: {report.ok}",
            f"skimming: {skimming}",
            f"revenue: {format_rational(outcome.revenue)}",
        ]
        if not report.ok:
            lines.append(_render_deviations(report).rstrip())
        if "swap_chain" in payload:
            lines.append(f"swap chain: {', '.join(payload['swap_chain'])}")
            lines.append(f"swapped profile: {json.dumps(payload['swapped_profile'])}")
            lines.append(
                f"swapped revenue: {payload['swapped_revenue']} "
                f"(skimming: {payload['swapped_skimming']})"
            )
        text = "\n".join(lines) + "\n"
    _emit(text, config.out_path)
    return EXIT_OK if report.ok else EXIT_VIOLATION


def _cmd_oracle(config: RunConfig) -> int:
    inst = _load_instance(config.input_path)
    sol = solve(inst)
    enum_profit, schedule = oracle_mod.enumerate_schedules(inst)
    skip_profit = oracle_mod.best_with_skips(inst)
    report = oracle_mod.verify_spne(inst, sol)
    matches = enum_profit == sol.profit and skip_profit <= sol.profit and report.ok
    payload = {
        "solver_profit": format_rational(sol.profit),
        "enumerated_profit": format_rational(enum_profit),
        "enumerated_schedule": list(schedule),
        "best_with_skips": format_rational(skip_profit),
        "deviations_ok": report.ok,
        "match": matches,
    }
    if config.output_format == "json":
        text = json.dumps(payload, indent=2)
    else:
        lines = [
            f"solver profit:      {payload['solver_profit']}",
            f"enumerated profit:  {payload['enumerated_profit']}",
            f"enumerated schedule: {schedule}",
            f"best with skips:    {payload['best_with_skips']}",
            f"deviation check:    {'clean' if report.ok else 'FAILED'}",
            f"oracle match:       {'ok' if matches else 'MISMATCH'}",
        ]
        text = "\n".join(lines) + "\n"
    _emit(text, config.out_path)
    return EXIT_OK if matches else EXIT_VIOLATION


def _cmd_sweep(config: RunConfig) -> int:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(SWEEP_COLUMNS)
    all_ok = True
    instances = random_instances(
        config.seed, config.count, config.max_n, config.max_t, config.max_value
    )
    for instance_id, inst in enumerate(instances):
        report = bounds_mod.analyze(inst)
        all_ok = all_ok and report.all_ok
        writer.writerow(_bounds_row(instance_id, inst, report))
    _emit(buf.getvalue(), config.out_path)
    return EXIT_OK if all_ok else EXIT_VIOLATION


_COMMANDS = {
    "solve": _cmd_solve,
    "bounds": _cmd_bounds,
    "verify": _cmd_verify,
    "pacman": _cmd_pacman,
    "tight": _cmd_tight,
    "nonskim": _cmd_nonskim,
    "oracle": _cmd_oracle,
    "sweep": _cmd_sweep,
}


def run(config: RunConfig) -> int:
    """Execute one command; returns the process exit code."""
    handler = _COMMANDS.get(config.command)
    if handler is None:
        print(f"unknown command: {config.command}", file=sys.stderr)
        return EXIT_INVALID
    try:
        return handler(config)
    except ValidationError as exc:
        print(f"invalid input -- {exc}", file=sys.stderr)
        return EXIT_INVALID
    except SizeGuardError as exc:
        print(f"refused -- {exc}", file=sys.stderr)
        return EXIT_GUARD


def _add_common(parser: argparse.ArgumentParser, formats=("table", "json", "csv")):
    parser.add_argument("--format", choices=formats, default="table", dest="output_format")
    parser.add_argument("--out", dest="out_path", default=None, help="write output to a file")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="duropoly",
        description="Exact solver and analysis toolkit for deadline-constrained durable-good pricing.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    for name in ("solve", "bounds", "pacman", "oracle"):
        p = sub.add_parser(name)
        p.add_argument("input_path", metavar="file", help="instance JSON file")
        _add_common(p)

    p = sub.add_parser("verify")
    p.add_argument("input_path", metavar="file", help="instance JSON file")
    p.add_argument("--profile", dest="profile_path", default=None, help="serialized solution JSON to check")
    _add_common(p)

    p = sub.add_parser("tight")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--vh", dest="v_high", default="1", help="high valuation (exact rational)")
    _add_common(p)

    p = sub.add_parser("nonskim")
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--demo", action="store_true", help="use the built-in out-of-order example")
    group.add_argument("input_path", metavar="file", nargs="?", help='JSON {"instance": ..., "profile": ...}')
    _add_common(p)

    p = sub.add_parser("sweep")
    p.add_argument("--count", type=int, default=100)
    p.add_argument("--max-n", dest="max_n", type=int, default=10)
    p.add_argument("--max-t", dest="max_t", type=int, default=4)
    p.add_argument("--max-value", dest="max_value", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", dest="out_path", default=None)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    fields = {f for f in RunConfig.__dataclass_fields__}
    config = RunConfig(**{k: v for k, v in vars(args).items() if k in fields and v is not None})
    return run(config)


if __name__ == "__main__":
    sys.exit(main())
