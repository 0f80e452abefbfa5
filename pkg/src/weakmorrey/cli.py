"""Command line interface.

Subcommands: bounds, norm, split, holder, inclusion, sharpness. Output
formats: json (default), csv (flattened single row), text (aligned
key = value lines, numbers to 9 significant digits, same values as json).

Exit codes: 0 = computed and every asserted inequality holds; 1 = input
or validation error; 2 = an inequality verdict failed or an internal
inconsistency was detected.
"""

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import dataclass

from . import __version__
from .bounds import ExponentSystem, bound_comparison, harmonic_conjugate
from .errors import InconsistencyError, WeakMorreyError
from .functions import parse_function, to_spec
from .geometry import Ball
from .holder import check_holder, equal_share_split, optimal_split
from .quasinorm import SearchConfig, check_inclusion, weak_lebesgue_norm, weak_morrey_norm
from .sharpness import FamilyConfig, search_extremal

CONVENTION_NOTE = (
    "convention: ||f|| = sup_B |B|^(1/q-1/p) * sup_{gamma>0} gamma * "
    "|{x in B : f(x) > gamma}|^(1/p); the exponent 1/p on the superlevel "
    "measure is applied throughout (definitions omitting it describe a "
    "different quantity and do not match the |B|^(1/q-1/p) * weak-L^p form)"
)


class _CliError(Exception):
    """Input error carrying the message to print before exiting with 1."""


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _CliError(message)


@dataclass
class RunConfig:
    """A parsed invocation: which command, its arguments, and formatting."""

    command: str
    format: str
    output: str
    args: argparse.Namespace
    search: SearchConfig


def _build_parser() -> _Parser:
    parser = _Parser(prog="weakmorrey", description=__doc__)
    parser.add_argument("--version", action="version", version=__version__)
    parser.add_argument(
        "--format", choices=("json", "csv", "text"), default="json",
        help="output format (default json)",
    )
    parser.add_argument("--output", default=None, help="write the report here instead of stdout")
    sub = parser.add_subparsers(dest="command", required=True)

    b = sub.add_parser("bounds", help="constant chain c_new <= m^(1/p*) <= m")
    b.add_argument("--p", required=True, help="comma list of exponents, e.g. 3,1.5")

    n = sub.add_parser("norm", help="weak Morrey norm (or weak Lebesgue norm on a ball)")
    n.add_argument("--fn", required=True, help="function spec string")
    n.add_argument("--n", required=True, type=int, help="ambient dimension")
    n.add_argument("--p", required=True, type=float)
    n.add_argument("--q", type=float, default=None, help="global exponent (omit with --ball-*)")
    n.add_argument("--ball-center", default=None, help="comma list; compute on this ball only")
    n.add_argument("--ball-radius", type=float, default=None)
    _add_search_flags(n)

    s = sub.add_parser("split", help="optimal threshold split vs the equal-share one")
    s.add_argument("--a", required=True, help="comma list of factor weights")
    s.add_argument("--p", required=True, help="comma list of exponents")
    s.add_argument("--theta", required=True, type=float)

    h = sub.add_parser("holder", help="product inequality verdict")
    h.add_argument("--system", required=True, help="exponent system JSON file")
    h.add_argument("--fns", required=True, help="semicolon-joined function specs")
    _add_search_flags(h)

    i = sub.add_parser("inclusion", help="norm monotonicity in p at fixed q")
    i.add_argument("--fn", required=True)
    i.add_argument("--n", required=True, type=int)
    i.add_argument("--p1", required=True, type=float)
    i.add_argument("--p2", required=True, type=float)
    i.add_argument("--q", required=True, type=float)
    _add_search_flags(i)

    x = sub.add_parser("sharpness", help="search a family for the largest norm ratio")
    x.add_argument("--system", required=True, help="exponent system JSON file")
    x.add_argument("--family", required=True, help="family config JSON file")
    x.add_argument("--budget", required=True, type=int)
    x.add_argument("--seed", type=int, default=0)
    x.add_argument("--history-csv", default=None, help="write per-trial history CSV here")
    _add_search_flags(x)
    return parser


def _add_search_flags(sub):
    sub.add_argument("--search", default=None, help="SearchConfig JSON file")
    sub.add_argument("--mc-samples", type=int, default=None)
    sub.add_argument("--seed-search", type=int, default=None, help="seed for Monte Carlo paths")


def _load_search(args) -> SearchConfig:
    if getattr(args, "search", None):
        with open(args.search) as fh:
            cfg = SearchConfig.from_dict(json.load(fh))
    else:
        cfg = SearchConfig()
    updates = {}
    if getattr(args, "mc_samples", None) is not None:
        updates["mc_samples"] = args.mc_samples
    if getattr(args, "seed_search", None) is not None:
        updates["seed"] = args.seed_search
    if updates:
        cfg = SearchConfig.from_dict({**cfg.to_dict(), **updates})
    return cfg


def _parse_floats(text: str, what: str) -> list:
    try:
        return [float(v) for v in text.split(",") if v.strip() != ""]
    except ValueError as exc:
        raise _CliError(f"could not parse {what} {text!r}: {exc}") from exc


def _load_system(path: str) -> tuple:
    with open(path) as fh:
        data = json.load(fh)
    if "n" not in data:
        raise _CliError(f"system file {path} is missing the dimension field 'n'")
    system = ExponentSystem.from_dict(data)
    return int(data["n"]), system


def _split_specs(text: str) -> list:
    """Split semicolon-joined specs, ignoring semicolons inside product:[...]."""
    out, depth, start = [], 0, 0
    for i, ch in enumerate(text):
        if ch == "[":
            depth += 1
        elif ch == "]":
            depth -= 1
        elif ch == ";" and depth == 0:
            out.append(text[start:i])
            start = i + 1
    out.append(text[start:])
    return [s for s in out if s.strip()]


# ---------------------------------------------------------------------------
# Command handlers: each returns (payload, exit_code)


def _cmd_bounds(args, cfg) -> tuple:
    p = _parse_floats(args.p, "--p")
    c_new, c_mid, c_old = bound_comparison(p)
    notes = []
    if any(v == 1.0 for v in p):
        notes.append(
            "some exponents equal 1; the chain is computed as stated, though "
            "sharper behavior at p = 1 is unexplored"
        )
    chain_ok = c_new <= c_mid * (1 + 1e-12) and c_mid <= c_old * (1 + 1e-12)
    payload = {
        "command": "bounds",
        "p": p,
        "m": len(p),
        "p_star": harmonic_conjugate(p),
        "c_new": c_new,
        "c_mid": c_mid,
        "c_old": c_old,
        "chain_holds": chain_ok,
        "notes": notes,
    }
    return payload, 0 if chain_ok else 2


def _cmd_norm(args, cfg) -> tuple:
    f = parse_function(args.fn, n=args.n)
    if (args.ball_center is None) != (args.ball_radius is None):
        raise _CliError("--ball-center and --ball-radius must be given together")
    if args.ball_center is not None:
        if args.q is not None:
            raise _CliError("--q selects the space norm; drop it when fixing a ball")
        ball = Ball(tuple(_parse_floats(args.ball_center, "--ball-center")), args.ball_radius)
        report = weak_lebesgue_norm(f, ball, args.p, cfg)
        scope = {"ball": ball.to_dict()}
    else:
        if args.q is None:
            raise _CliError("--q is required for the space norm (or give --ball-*)")
        report = weak_morrey_norm(f, args.p, args.q, cfg)
        scope = {"q": args.q}
    payload = {
        "command": "norm",
        "fn": to_spec(f),
        "n": args.n,
        "p": args.p,
        **scope,
        "report": report.to_dict(),
        "notes": [CONVENTION_NOTE],
    }
    return payload, 0


def _cmd_split(args, cfg) -> tuple:
    a = _parse_floats(args.a, "--a")
    p = _parse_floats(args.p, "--p")
    optimal = optimal_split(a, p, args.theta)
    equal = equal_share_split(a, p, args.theta)
    payload = {
        "command": "split",
        "a": a,
        "p": p,
        "theta": args.theta,
        "optimal": optimal.to_dict(),
        "equal_share": equal.to_dict(),
        "notes": [
            "equal_share reaches the same objective value but satisfies "
            "prod(y) * theta = m^(-1/p*) * c_new, which is below 1 unless all "
            "exponents coincide, so it is not a feasible split"
        ],
    }
    return payload, 0


def _cmd_holder(args, cfg) -> tuple:
    n, system = _load_system(args.system)
    specs = _split_specs(args.fns)
    functions = [parse_function(s, n=n) for s in specs]
    report = check_holder(functions, system, cfg)
    ok = report.verdict and report.inclusion_ok
    payload = {
        "command": "holder",
        "n": n,
        "system": system.to_dict(),
        "functions": [to_spec(f) for f in functions],
        "report": report.to_dict(),
        "notes": [CONVENTION_NOTE],
    }
    return payload, 0 if ok else 2


def _cmd_inclusion(args, cfg) -> tuple:
    f = parse_function(args.fn, n=args.n)
    report = check_inclusion(f, args.p1, args.p2, args.q, cfg)
    payload = {
        "command": "inclusion",
        "fn": to_spec(f),
        "n": args.n,
        "report": report.to_dict(),
        "notes": [CONVENTION_NOTE],
    }
    return payload, 0 if report.holds else 2


def _cmd_sharpness(args, cfg) -> tuple:
    n, system = _load_system(args.system)
    with open(args.family) as fh:
        family = FamilyConfig.from_dict(json.load(fh))
    if family.n != n:
        raise _CliError(
            f"family dimension {family.n} does not match system dimension {n}"
        )
    result = search_extremal(system, family, budget=args.budget, seed=args.seed, config=cfg)
    if args.history_csv:
        _write_history_csv(args.history_csv, result)
    data = result.to_dict()
    payload = {
        "command": "sharpness",
        "n": n,
        "system": system.to_dict(),
        "family": family.to_dict(),
        "result": data,
        "notes": [
            "best_ratio is the largest ratio found, not a sharpness claim",
        ],
    }
    return payload, 0


def _write_history_csv(path: str, result) -> None:
    d = len(result.best_params)
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["trial", "ratio"] + [f"param_{i}" for i in range(d)])
        for t, (params, ratio) in enumerate(result.history):
            writer.writerow([t, "" if ratio is None else repr(ratio)] + [repr(v) for v in params])


_HANDLERS = {
    "bounds": _cmd_bounds,
    "norm": _cmd_norm,
    "split": _cmd_split,
    "holder": _cmd_holder,
    "inclusion": _cmd_inclusion,
    "sharpness": _cmd_sharpness,
}


# ---------------------------------------------------------------------------
# Formatting


def _flatten(obj, prefix: str = "") -> list:
    if isinstance(obj, dict):
        out = []
        for k, v in obj.items():
            out.extend(_flatten(v, f"{prefix}.{k}" if prefix else str(k)))
        return out
    if isinstance(obj, (list, tuple)):
        out = []
        for i, v in enumerate(obj):
            out.extend(_flatten(v, f"{prefix}[{i}]"))
        return out
    return [(prefix, obj)]


def _format_value(v) -> str:
    if isinstance(v, bool) or v is None or isinstance(v, str):
        return str(v)
    if isinstance(v, float):
        return f"{v:.9g}"
    return str(v)


def render(payload: dict, fmt: str) -> str:
    """Render a payload as json, csv, or text."""
    if fmt == "json":
        return json.dumps(payload, indent=2)
    flat = _flatten(payload)
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf)
        writer.writerow([k for k, _ in flat])
        writer.writerow([_format_value(v) for _, v in flat])
        return buf.getvalue().rstrip("\n")
    width = max(len(k) for k, _ in flat)
    return "\n".join(f"{k.ljust(width)} = {_format_value(v)}" for k, v in flat)


def run(config: RunConfig) -> int:
    """Execute a parsed invocation and write its report; returns the exit code."""
    payload, code = _HANDLERS[config.command](config.args, config.search)
    text = render(payload, config.format)
    if config.output:
        with open(config.output, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    return code


def parse_args(argv=None) -> RunConfig:
    args = _build_parser().parse_args(argv)
    return RunConfig(
        command=args.command,
        format=args.format,
        output=args.output,
        args=args,
        search=_load_search(args),
    )


def main(argv=None) -> int:
    try:
        return run(parse_args(argv))
    except _CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except InconsistencyError as exc:
        print(f"inconsistency: {exc}", file=sys.stderr)
        return 2
    except (WeakMorreyError, ValueError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
