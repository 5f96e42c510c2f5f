"""
Command-line interface for the next-bit coder.
"""

import argparse
import sys
from pathlib import Path
from typing import List, Optional

from . import __version__
from .codec import NextBitCodec
from .container import deserialize, serialize
from .errors import CodingError, ConfigError
from .harness import ExperimentRunner
from .models import (
    EMPTY,
    EXPERIMENT_MODES,
    Advice,
    BitString,
    ExperimentConfig,
    ExperimentSummary,
    PredictorParams,
)
from .predictor import build_base_predictor
from .reporting import ExperimentReporter, emit_report
from .source_model import load_source, parse_rational
from .vectors import verify_vectors

PROPERTIES = ("pseudodet", "light", "worstcase", "roundtrip", "vectors")


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--source", type=str, help="Source configuration (JSON)")
    parser.add_argument("--q", type=int, help="Error parameter q")
    parser.add_argument("--seed", type=int, default=0, help="Root seed (default: 0)")
    parser.add_argument(
        "--predictor",
        type=str,
        default="oracle",
        help="Base predictor: oracle, noisy[:<trials>], adversarial, faulty[:<rate>]",
    )
    parser.add_argument(
        "--verbose", "-v", action="store_true", help="Enable verbose logging"
    )


def create_parser() -> argparse.ArgumentParser:
    """Create and configure argument parser."""
    parser = argparse.ArgumentParser(
        prog="nextbit-coder",
        description="Arithmetic coding with pseudo-deterministic next-bits predictors",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  # Encode a string and print the container as hex
  nextbit-coder encode --source uniform.json --q 8 --bits 10

  # Decode it again
  nextbit-coder decode --source uniform.json --q 8 --hex 388c94

  # Average-length experiment with a report file
  nextbit-coder bench --source bern.json --q 256 --trials 2000 --out report.jsonl

  # Verify the golden container vectors
  nextbit-coder check --property vectors
        """,
    )
    parser.add_argument(
        "--version", action="version", version=f"%(prog)s {__version__}"
    )
    commands = parser.add_subparsers(dest="command", required=True)

    encode = commands.add_parser("encode", help="Encode x_[k:ell] given x_[k-1]")
    _add_common(encode)
    encode.add_argument("--bits", type=str, required=True, help="The whole string x")
    encode.add_argument("--k", type=int, default=1, help="First encoded position (1-indexed)")
    encode.add_argument("--alpha", type=int, help="Force the advice value")
    encode.add_argument("--out", type=str, help="Write container bytes here instead of hex")

    decode = commands.add_parser("decode", help="Decode a container")
    _add_common(decode)
    payload = decode.add_mutually_exclusive_group(required=True)
    payload.add_argument("--hex", type=str, help="Container as hex")
    payload.add_argument("--in", dest="infile", type=str, help="File with container bytes")
    decode.add_argument("--prefix", type=str, default="", help="Known prefix x_[k-1]")

    bench = commands.add_parser("bench", help="Run an experiment and check its bounds")
    _add_common(bench)
    bench.add_argument("--mode", choices=EXPERIMENT_MODES, default="avg")
    bench.add_argument("--k", type=int, default=1)
    bench.add_argument("--trials", type=int, default=100)
    bench.add_argument("--epsilon", type=str, default="1/4", help="Worst-case slack (rational)")
    bench.add_argument("--kappa", type=int, help="Worst-case exponent, q = ell**kappa")
    bench.add_argument("--self-test-trials", type=int, help="Self-test size in robust mode")
    bench.add_argument("--out", type=str, help="Write a JSON-lines report")

    check = commands.add_parser("check", help="Check a single property")
    _add_common(check)
    check.add_argument("--property", choices=PROPERTIES, required=True)
    check.add_argument("--trials", type=int, default=1000)
    check.add_argument("--delta", type=str, default="1/20", help="Light threshold (rational)")
    check.add_argument("--epsilon", type=str, default="1/4")
    check.add_argument("--kappa", type=int)
    check.add_argument("--vectors", type=str, help="Vector file (default: packaged vectors)")
    check.add_argument("--out", type=str, help="Write a JSON-lines report")

    return parser


def validate_args(args: argparse.Namespace) -> None:
    """Validate command-line arguments."""
    if args.command == "check" and args.property == "vectors":
        return
    if not args.source:
        raise ConfigError("required for this command", "--source")
    if not Path(args.source).exists():
        raise ConfigError(f"source file does not exist: {args.source}", "--source")
    needs_q = args.command in ("encode", "bench") or (
        args.command == "check" and args.property in ("pseudodet", "roundtrip")
    )
    if needs_q and args.q is None:
        raise ConfigError("required for this command", "--q")
    if getattr(args, "infile", None) and not Path(args.infile).exists():
        raise ConfigError(f"input file does not exist: {args.infile}", "--in")


def _parse_bits(text: str, field: str) -> BitString:
    try:
        return BitString.from_str(text)
    except ValueError as e:
        raise ConfigError(str(e), field)


def _experiment_config(args: argparse.Namespace, mode: str = "avg") -> ExperimentConfig:
    return ExperimentConfig(
        source=load_source(args.source),
        q=args.q if args.q is not None else 1,
        k=getattr(args, "k", 1),
        trials=args.trials,
        root_seed=args.seed,
        predictor=args.predictor,
        mode=mode,
        epsilon=parse_rational(args.epsilon, "--epsilon"),
        kappa=args.kappa,
        self_test_trials=getattr(args, "self_test_trials", None),
        source_path=args.source,
    )


def _codec(args: argparse.Namespace, q: int) -> NextBitCodec:
    src = load_source(args.source)
    params = PredictorParams(src.n, src.ell, q)
    return NextBitCodec(build_base_predictor(args.predictor, src, params.base_err), params)


def _run_encode(args: argparse.Namespace) -> int:
    codec = _codec(args, args.q)
    x = _parse_bits(args.bits, "--bits")
    alpha = Advice(args.alpha) if args.alpha is not None else None
    data = serialize(codec.encode(x, args.k, args.seed, alpha))
    if args.out:
        Path(args.out).write_bytes(data)
        print(f"✅ Wrote {len(data)} bytes to {args.out}")
    else:
        print(data.hex())
    return 0


def _run_decode(args: argparse.Namespace) -> int:
    if args.infile:
        data = Path(args.infile).read_bytes()
    else:
        try:
            data = bytes.fromhex(args.hex)
        except ValueError as e:
            raise ConfigError(str(e), "--hex")
    enc = deserialize(data)
    q = args.q if args.q is not None else (enc.q or 1)
    prefix = _parse_bits(args.prefix, "--prefix") if args.prefix else EMPTY
    print(str(_codec(args, q).decode(enc, prefix, args.seed)))
    return 0


def _finish(
    summary: ExperimentSummary, args: argparse.Namespace, records: Optional[list] = None
) -> int:
    ExperimentReporter().print_console_report(summary)
    if getattr(args, "out", None):
        emit_report(records or [], summary, args.out)
    return 0 if summary.passed else 1


def _run_bench(args: argparse.Namespace, runner: ExperimentRunner) -> int:
    result = runner.run(_experiment_config(args, args.mode))
    return _finish(result.summary, args, result.records)


def _run_check(args: argparse.Namespace, runner: ExperimentRunner) -> int:
    if args.property == "vectors":
        results = verify_vectors(args.vectors)
        for description, error in results:
            print(f"{'✅' if error is None else '❌'} {description}")
            if error:
                print(f"   {error}")
        failed = sum(1 for _, error in results if error)
        print(f"\n🎯 {len(results) - failed}/{len(results)} vectors verified")
        return 0 if failed == 0 else 1

    if args.property == "light":
        summary = runner.check_light_bound(
            load_source(args.source), parse_rational(args.delta, "--delta")
        )
        return _finish(summary, args)
    if args.property == "pseudodet":
        return _finish(runner.check_pseudodeterminism(_experiment_config(args)), args)

    if args.property == "worstcase":
        result = runner.run_worst_case_enumeration(_experiment_config(args, "worst"))
    else:
        result = runner.run_roundtrip_check(_experiment_config(args))
    return _finish(result.summary, args, result.records)


def main(argv: Optional[List[str]] = None) -> int:
    """Main CLI entry point."""
    parser = create_parser()
    args = parser.parse_args(argv)

    try:
        validate_args(args)
        log_level = "DEBUG" if args.verbose else "INFO"

        if args.command == "encode":
            return _run_encode(args)
        if args.command == "decode":
            return _run_decode(args)

        runner = ExperimentRunner(log_level=log_level)
        if args.command == "bench":
            return _run_bench(args, runner)
        return _run_check(args, runner)

    except CodingError as e:
        print(f"❌ Error: {e}", file=sys.stderr)
        return 1
    except KeyboardInterrupt:
        print("\n❌ Cancelled by user", file=sys.stderr)
        return 1
    except Exception as e:
        print(f"❌ Unexpected error: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
