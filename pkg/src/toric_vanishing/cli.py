"""Command-line entry point: toric-vanishing <subcommand> ...

Exit codes: 0 all checks pass, 1 a check failed, 2 invalid input or an
unmet hypothesis.
"""
import argparse
import json
import sys
from pathlib import Path

from .divisors import divisor_from_json
from .errors import HypothesisError, InputError, ToricError
from .fan import Fan, named_fan
from .harness import (
    R_MAX,
    SUITES,
    _instances,
    canonical_json,
    check_bott,
    check_hodge,
    check_injection,
    check_kv,
    check_strong_lift,
    render_text,
    resolve_catalog,
    run_suite,
)


def _load_json(path):
    try:
        return json.loads(Path(path).read_text(encoding="utf-8"))
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"{path} is not valid JSON: {exc}") from exc


def _fan(args):
    if args.catalog:
        return named_fan(args.catalog)
    if not args.fan:
        raise InputError("give --fan PATH or --catalog NAME")
    return Fan.from_json(_load_json(args.fan), name=Path(args.fan).stem)


def _divisor(args, f):
    if not args.divisor:
        # same per-instance stream as the suite's first sample
        suite = args.command.removeprefix("check-")
        return _instances(suite, f, f.name or "fan", args.prime, args.seed, 1)[0]
    return divisor_from_json(f, _load_json(args.divisor))


def _prime(p):
    p = int(p)
    if p < 2 or any(p % q == 0 for q in range(2, int(p**0.5) + 1)):
        raise argparse.ArgumentTypeError(f"{p} is not prime")
    return p


def _primes(text):
    return [_prime(x) for x in text.split(",") if x.strip()]


def _emit(args, payload, text):
    body = canonical_json(payload) if args.format == "json" else text
    print(body)
    if args.report:
        Path(args.report).write_text(json.dumps(payload, sort_keys=True, indent=2) + "\n", encoding="utf-8")


def _single(args):
    f = _fan(args)
    if args.command == "check-bott":
        rep = check_bott(f, _divisor(args, f), args.prime)
    elif args.command == "check-kv":
        rep = check_kv(f, _divisor(args, f), args.prime)
    elif args.command == "check-injection":
        rep = check_injection(f, _divisor(args, f), args.prime, args.r_max)
    elif args.command == "check-hodge":
        rep = check_hodge(f, args.prime)
    else:
        rep = check_strong_lift(f, _divisor(args, f), args.prime)
    _emit(args, rep.to_json(timing=not args.no_timing), render_text([rep]) + "\n" + rep.message())
    return 0 if rep.ok else 1


def _suite(args):
    cfg = {
        "catalog": resolve_catalog(args.catalog),
        "primes": args.primes,
        "seed": args.seed,
        "samples": args.samples,
        "suites": [s for s in args.suites.split(",") if s] if args.suites else list(SUITES),
        "r_max": args.r_max,
        "jobs": args.jobs,
    }
    res = run_suite(cfg)
    _emit(args, res.to_json(timing=not args.no_timing), render_text(res.reports))
    return 0 if res.status == "pass" else 1


def _export(args):
    f = named_fan(args.name)
    text = json.dumps(f.to_json(), sort_keys=True)
    if args.output:
        Path(args.output).write_text(text + "\n", encoding="utf-8")
    else:
        print(text)
    return 0


def build_parser():
    ap = argparse.ArgumentParser(prog="toric-vanishing", description="Vanishing-theorem checks on toric varieties over F_p.")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--prime", type=_prime, default=3)
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--report", help="also write the JSON report here")
        sp.add_argument("--format", choices=("json", "text"), default="text")
        sp.add_argument("--no-timing", action="store_true", help="omit timing fields (byte-stable output)")
        sp.add_argument("--r-max", type=int, default=R_MAX)

    for name in ("check-bott", "check-kv", "check-injection", "check-hodge", "check-lift"):
        sp = sub.add_parser(name)
        sp.add_argument("--fan", help="fan JSON file")
        sp.add_argument("--catalog", help="named catalog fan instead of --fan")
        sp.add_argument("--divisor", help="divisor JSON file (default: sampled from --seed)")
        common(sp)

    sp = sub.add_parser("suite")
    sp.add_argument("--catalog", default="all", help="'all' or comma-separated catalog names")
    sp.add_argument("--primes", type=_primes, default=[2, 3, 5])
    sp.add_argument("--samples", type=int, default=10)
    sp.add_argument("--suites", help=f"comma-separated subset of {','.join(SUITES)}")
    sp.add_argument("--jobs", type=int, default=1)
    common(sp)

    sp = sub.add_parser("export-fan", help="write a catalog fan as JSON")
    sp.add_argument("name")
    sp.add_argument("-o", "--output")
    return ap


def main(argv=None):
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0
    try:
        if args.command == "suite":
            return _suite(args)
        if args.command == "export-fan":
            return _export(args)
        return _single(args)
    except HypothesisError as exc:
        print(f"refused: {exc}", file=sys.stderr)
        return 2
    except (InputError, ToricError) as exc:
        print(f"invalid input: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
