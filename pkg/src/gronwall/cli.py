"""Command-line entry point: ``gronwall <subcommand> [options]``.

Exit codes: 0 success / everything applicable holds, 1 a certified failure
(critical violation or failed check), 2 usage error, 3 indeterminate results.
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import os
import sys
import time
from typing import Sequence

from gmpy2 import mpq

from . import __version__, primes
from .abundance import (
    BRUTE_FORCE_MAX,
    config_hash,
    enum_ca,
    enum_sa_bruteforce,
    enum_sa_structured,
    read_records,
    write_records,
)
from .audit import DEFAULT_N_FLOOR_LOG10, DEFAULT_P_FLOOR, Thresholds, audit_lemma, probe_chain
from .classify import check_extraordinary
from .factored import FactoredNumber
from .numeric import ladder_from_env, parse_ladder
from .scan import DEFAULT_SCAN_CAP, ScanBudgetError, scan_nicolas, scan_robin

EXIT_USAGE = 2

EPILOG = """exit codes:
  0  success; every applicable check holds
  1  certified failure (critical violation, failed lemma or chain step)
  2  usage error
  3  some comparison stayed indeterminate after the whole precision ladder

environment:
  GRONWALL_LADDER  default precision ladder, e.g. 64,256,1024,4096
  GRONWALL_PURE    set to 1 to force the NumPy kernels
"""


class UsageError(Exception):
    pass


def _positive_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be positive: {text!r}")
    return value


def _rational(text: str) -> mpq:
    try:
        return mpq(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gronwall",
        description="Certified checks around Robin's inequality and superabundant numbers.",
        epilog=EPILOG,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("--config", metavar="FILE", help="key=value file; command-line flags override it")
    parser.add_argument("--precision", metavar="BITS,...", help="precision ladder (default $GRONWALL_LADDER or 64,256,1024,4096)")
    parser.add_argument("--threads", type=_positive_int, default=1, help="worker threads (default 1)")
    parser.add_argument("--sieve-cap", type=_positive_int, default=primes.DEFAULT_SIEVE_CAP,
                        help=f"largest prime-table bound (default {primes.DEFAULT_SIEVE_CAP})")
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = parser.add_subparsers(dest="command", metavar="COMMAND", required=True)

    def add(name, help_text):
        return sub.add_parser(name, help=help_text, description=help_text, epilog=EPILOG,
                              formatter_class=argparse.RawDescriptionHelpFormatter)

    p = add("scan-robin", "List every n in [from, to] with certified G(n) > e^gamma.")
    p.add_argument("--from", dest="lo", type=_positive_int, required=True)
    p.add_argument("--to", dest="hi", type=_positive_int, required=True)
    p.add_argument("--cap", type=_positive_int, default=DEFAULT_SCAN_CAP, help=f"largest allowed 'to' (default {DEFAULT_SCAN_CAP})")
    p.add_argument("--out", help="write violations and indeterminates here")
    p.add_argument("--format", choices=("jsonl", "csv"), default="jsonl")

    p = add("scan-nicolas", "List every j in [jmin, jmax] with certified H_j < e^gamma.")
    p.add_argument("--jmax", type=_positive_int, required=True)
    p.add_argument("--jmin", type=_positive_int, default=2)
    p.add_argument("--out")
    p.add_argument("--format", choices=("jsonl", "csv"), default="jsonl")

    p = add("enum-sa", "Enumerate superabundant numbers up to a limit.")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--limit", type=_positive_int)
    g.add_argument("--log-limit", type=float, help="natural log of the limit")
    p.add_argument("--method", choices=("auto", "brute", "structured"), default="auto",
                   help=f"auto uses brute force up to {BRUTE_FORCE_MAX}")
    p.add_argument("--out", required=True)

    p = add("enum-ca", "Enumerate colossally abundant numbers with largest prime <= max-prime.")
    p.add_argument("--max-prime", type=_positive_int, required=True)
    p.add_argument("--out", required=True)

    p = add("classify", "GA1, bounded GA2 and extraordinary status of one number (JSON).")
    p.add_argument("--n", required=True, help="integer or factored form like '2^4 * 3^2 * [5..7]^1'")
    p.add_argument("--multiplier-bound", type=_positive_int, default=None,
                   help="largest multiplier c tried (default 10000, 1000 beyond 2^64)")
    p.add_argument("--out")

    p = add("audit-lemmas", "Check a structural lemma against a record table.")
    p.add_argument("--records", required=True)
    p.add_argument("--lemma", type=int, choices=(1, 3, 4, 5), required=True)
    p.add_argument("--out")

    p = add("probe-chain", "Evaluate every step of the contradiction chain on a candidate.")
    p.add_argument("--candidate", required=True)
    p.add_argument("--p-floor", type=_positive_int, default=DEFAULT_P_FLOOR)
    p.add_argument("--x-cap", type=_rational, default=mpq(1, 100))
    p.add_argument("--n-floor-log10", type=_positive_int, default=DEFAULT_N_FLOOR_LOG10,
                   help="the premise n > 10^N uses this N")
    p.add_argument("--out")

    add("selftest", "Run the embedded small-scale oracle cross-checks.")
    return parser


# -- configuration ------------------------------------------------------------------


def _read_config(path: str) -> dict[str, str]:
    out = {}
    with open(path) as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise UsageError(f"{path}:{lineno}: expected key=value")
            key, value = (s.strip() for s in line.split("=", 1))
            out[key.lstrip("-").replace("_", "-")] = value
    return out


def _subparsers(parser: argparse.ArgumentParser) -> dict[str, argparse.ArgumentParser]:
    for action in parser._actions:
        if isinstance(action, argparse._SubParsersAction):
            return action.choices
    return {}


def _apply_config(parser: argparse.ArgumentParser, argv: Sequence[str], cfg: dict[str, str]) -> None:
    """Install config values as defaults; keys are long flag names without dashes."""
    subs = _subparsers(parser)
    command = next((a for a in argv if a in subs), None)
    targets = [parser] + ([subs[command]] if command else [])
    known = {}
    for p in targets:
        for action in p._actions:
            for opt in action.option_strings:
                if opt.startswith("--") and opt not in ("--help", "--version", "--config"):
                    known[opt[2:]] = (p, action)
    unknown = sorted(set(cfg) - set(known))
    if unknown:
        raise UsageError(f"unknown config keys: {', '.join(unknown)}")
    for key, value in cfg.items():
        p, action = known[key]
        if action.nargs == 0:  # store_true flags
            converted = value.lower() in ("1", "true", "yes", "on")
        else:
            try:
                converted = action.type(value) if action.type else value
            except (argparse.ArgumentTypeError, ValueError) as exc:
                raise UsageError(f"config key {key}: {exc}") from None
            if action.choices is not None and converted not in action.choices:
                raise UsageError(f"config key {key}: {value!r} not in {list(action.choices)}")
        p.set_defaults(**{action.dest: converted})
        action.required = False
        for group in p._mutually_exclusive_groups:
            if action in group._group_actions:
                group.required = False


def parse_args(argv: Sequence[str]) -> argparse.Namespace:
    """Parse flags; values from --config fill in anything not given on the command line."""
    pre = argparse.ArgumentParser(add_help=False)
    pre.add_argument("--config")
    known, _ = pre.parse_known_args(argv)
    parser = build_parser()
    if known.config:
        _apply_config(parser, argv, _read_config(known.config))
    return parser.parse_args(argv)


def _ladder(args) -> tuple[int, ...]:
    try:
        return parse_ladder(args.precision) if args.precision else ladder_from_env()
    except ValueError as exc:
        raise UsageError(f"bad precision ladder: {exc}") from None


def _run_config(args, **extra) -> dict:
    cfg = {"command": args.command, "ladder": list(_ladder(args)), "sieve_cap": args.sieve_cap}
    cfg.update(extra)
    return cfg


def _header(config: dict, relaxed: Sequence[str] = ()) -> dict:
    return {
        "tool_version": __version__,
        "config": config,
        "config_hash": config_hash(config),
        "relaxed_premises": list(relaxed),
    }


def _emit(text: str, path: str | None) -> None:
    if path:
        with open(path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# -- subcommands ---------------------------------------------------------------------


def _write_scan(report, header: dict, path: str | None, fmt: str) -> None:
    if not path:
        return
    rows = list(report.records())
    with open(path, "w", newline="") as fh:
        if fmt == "jsonl":
            fh.write(json.dumps(header, sort_keys=True) + "\n")
            for row in rows:
                fh.write(json.dumps(row) + "\n")
        else:
            fh.write("# " + json.dumps(header, sort_keys=True) + "\n")
            key = "n" if report.kind == "robin" else "j"
            prefix = "g" if report.kind == "robin" else "h"
            fields = [key, f"{prefix}_lo", f"{prefix}_hi", "verdict"] + (["critical"] if report.kind == "robin" else [])
            writer = csv.DictWriter(fh, fieldnames=fields)
            writer.writeheader()
            writer.writerows(rows)


def _scan_summary(report, seconds: float) -> str:
    return json.dumps({
        "kind": report.kind,
        "from": report.lo,
        "to": report.hi,
        "checked": report.checksum,
        "violations": [f.n for f in report.violations],
        "critical": [f.n for f in report.critical],
        "indeterminate": [f.n for f in report.indeterminates],
        "seconds": round(seconds, 3),
    }) + "\n"


def cmd_scan_robin(args) -> int:
    if args.lo < 2 or args.lo > args.hi:
        raise UsageError("need 2 <= --from <= --to")
    t0 = time.perf_counter()
    try:
        report = scan_robin(args.lo, args.hi, _ladder(args), cap=args.cap, threads=args.threads)
    except ScanBudgetError as exc:
        raise UsageError(str(exc)) from None
    cfg = _run_config(args, lo=args.lo, hi=args.hi)
    relaxed = [f"range [{args.lo}, {args.hi}] stands in for (5040, 10^(10^10)]"]
    _write_scan(report, _header(cfg, relaxed), args.out, args.format)
    sys.stdout.write(_scan_summary(report, time.perf_counter() - t0))
    return report.exit_code()


def cmd_scan_nicolas(args) -> int:
    if args.jmin < 2 or args.jmin > args.jmax:
        raise UsageError("need 2 <= --jmin <= --jmax")
    t0 = time.perf_counter()
    report = scan_nicolas(args.jmax, _ladder(args), j_min=args.jmin)
    cfg = _run_config(args, jmin=args.jmin, jmax=args.jmax)
    _write_scan(report, _header(cfg), args.out, args.format)
    sys.stdout.write(_scan_summary(report, time.perf_counter() - t0))
    # any certified H_j < e^gamma would contradict the criterion
    return 1 if report.violations else report.exit_code()


def cmd_enum_sa(args) -> int:
    method = args.method
    if args.limit is not None:
        if method == "auto":
            method = "brute" if args.limit <= BRUTE_FORCE_MAX else "structured"
        if method == "brute":
            records = enum_sa_bruteforce(args.limit)
        else:
            records = enum_sa_structured(args.limit)
        bound = {"limit": args.limit}
    else:
        if method == "brute":
            raise UsageError("--log-limit needs the structured method")
        method = "structured"
        records = enum_sa_structured(log_limit=args.log_limit)
        bound = {"log_limit": args.log_limit}
    _remove_existing(args.out)
    count = write_records(args.out, records, _run_config(args, method=method, **bound))
    sys.stdout.write(json.dumps({"records": count, "method": method, "out": args.out}) + "\n")
    return 0


def cmd_enum_ca(args) -> int:
    records = enum_ca(args.max_prime, ladder=_ladder(args))
    _remove_existing(args.out)
    count = write_records(args.out, records, _run_config(args, max_prime=args.max_prime))
    sys.stdout.write(json.dumps({"records": count, "out": args.out}) + "\n")
    return 0


def _remove_existing(path: str) -> None:
    # a fresh enumeration replaces the table rather than appending to it
    if os.path.exists(path):
        os.remove(path)


def _parse_number(text: str) -> FactoredNumber:
    try:
        return FactoredNumber.parse(text)
    except ValueError as exc:
        raise UsageError(f"cannot parse number {text!r}: {exc}") from None


def cmd_classify(args) -> int:
    n = _parse_number(args.n)
    if n.is_one:
        raise UsageError("--n must be >= 2")
    if args.multiplier_bound is not None and args.multiplier_bound < 2:
        raise UsageError("--multiplier-bound must be >= 2")
    status = check_extraordinary(n, args.multiplier_bound, _ladder(args))
    out = {"header": _header(_run_config(args, n=str(n), multiplier_bound=status.ga2.bound)), **status.to_json()}
    _emit(json.dumps(out, indent=2, sort_keys=True) + "\n", args.out)
    if "Indeterminate" in (status.ga1.value, status.ga2.status):
        return 3
    return 0


def cmd_audit_lemmas(args) -> int:
    if not os.path.exists(args.records):
        raise UsageError(f"no such record table: {args.records}")
    report = audit_lemma(args.lemma, read_records(args.records), _ladder(args))
    out = {"header": _header(_run_config(args, records=os.path.basename(args.records), lemma=args.lemma)),
           **report.to_json()}
    _emit(json.dumps(out, indent=2, sort_keys=True) + "\n", args.out)
    return report.exit_code()


def cmd_probe_chain(args) -> int:
    n = _parse_number(args.candidate)
    if n.is_one:
        raise UsageError("--candidate must be >= 2")
    if not 0 < args.x_cap < 1:
        raise UsageError("--x-cap must lie in (0, 1)")
    th = Thresholds(n_floor_log10=args.n_floor_log10, p_floor=args.p_floor, x_cap=args.x_cap)
    report = probe_chain(n, th, _ladder(args))
    _emit(report.dumps(), args.out)
    return report.exit_code()


def cmd_selftest(args) -> int:
    from .selftest import run

    return run(sys.stdout)


COMMANDS = {
    "scan-robin": cmd_scan_robin,
    "scan-nicolas": cmd_scan_nicolas,
    "enum-sa": cmd_enum_sa,
    "enum-ca": cmd_enum_ca,
    "classify": cmd_classify,
    "audit-lemmas": cmd_audit_lemmas,
    "probe-chain": cmd_probe_chain,
    "selftest": cmd_selftest,
}


def main(argv: Sequence[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        args = parse_args(argv)
        logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                            format="%(levelname)s %(name)s: %(message)s")
        primes.set_sieve_cap(args.sieve_cap)
        return COMMANDS[args.command](args)
    except SystemExit as exc:  # argparse: --help exits 0, usage errors exit 2
        return int(exc.code or 0)
    except (UsageError, ValueError, OSError) as exc:
        sys.stderr.write(f"gronwall: error: {exc}\n")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
