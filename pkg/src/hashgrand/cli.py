"""Command line entry point: ``sweep``, ``capacity`` and ``decode-demo``.

Exit status: 0 on success, 1 on invalid arguments or configuration,
2 on I/O failure.
"""
import argparse
import sys

import numpy as np

from . import analysis
from .bits import BitVector, split, xor
from .channel import ebn0_to_sigma
from .codes import FAMILIES, CodeConfigError, SystematicCode
from .grand import GrandConfig, grand_decode, grand_decode_sequential
from .harness import HarnessIOError, SweepConfig, SweepConfigError, emit_summary, run_sweep, write_csv

EXIT_OK, EXIT_INVALID, EXIT_IO = 0, 1, 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INVALID, f"{self.prog}: error: {message}\n")


def parse_grid(text):
    """``START:STOP:STEP`` (inclusive stop), a single value, or a comma list."""
    try:
        if ":" in text:
            start, stop, step = (float(x) for x in text.split(":"))
            if step <= 0 or stop < start:
                raise ValueError
            count = int(np.floor((stop - start) / step + 1e-9)) + 1
            return tuple(round(start + i * step, 10) for i in range(count))
        return tuple(float(x) for x in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid Eb/N0 grid {text!r}") from None


def parse_positions(text):
    try:
        return sorted({int(x) for x in text.split(",") if x.strip()})
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid bit list {text!r}") from None


def build_parser():
    parser = _Parser(prog="hashgrand", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    sw = sub.add_parser("sweep", help="BLER vs Eb/N0 Monte-Carlo sweep")
    sw.add_argument("--config", help="code config file (family/k/n/seed); overrides the flags below")
    sw.add_argument("--family", choices=FAMILIES, default="sha1")
    sw.add_argument("--k", type=int, default=128)
    sw.add_argument("--n", type=int, default=288)
    sw.add_argument("--ebn0", type=parse_grid, required=True, help="START:STOP:STEP in dB")
    sw.add_argument("--trials", type=int, default=10_000)
    sw.add_argument("--max-weight", type=int, default=6)
    sw.add_argument("--max-queries", type=int, default=None)
    sw.add_argument("--seed", type=int, default=0)
    sw.add_argument("--workers", type=int, default=1)
    sw.add_argument("--noiseless-digest", action="store_true")
    sw.add_argument("--early-stop", type=int, default=None, metavar="ERRORS",
                    help="stop a point once this many block errors are seen")
    sw.add_argument("--out", required=True)

    cap = sub.add_parser("capacity", help="channel capacity and rate margin")
    cap.add_argument("--k", type=int, required=True)
    cap.add_argument("--n", type=int, required=True)
    cap.add_argument("--ebn0", type=float, required=True)
    cap.add_argument("--model", choices=analysis.MODELS, default="hard")

    demo = sub.add_parser("decode-demo", help="trace a single decode query by query")
    demo.add_argument("--family", choices=FAMILIES, default="sha1")
    demo.add_argument("--k", type=int, default=16)
    demo.add_argument("--n", type=int, default=32)
    demo.add_argument("--flip-bits", type=parse_positions, default=[])
    demo.add_argument("--seed", type=int, default=0)
    demo.add_argument("--max-weight", type=int, default=3)
    return parser


def cmd_sweep(args):
    if args.config:
        try:
            with open(args.config) as fh:
                code = SystematicCode.from_config(fh.read())
        except OSError as exc:
            raise HarnessIOError(f"cannot read {args.config}: {exc.strerror}") from exc
        args.family, args.k, args.n, args.seed = code.family, code.k, code.n, code.seed
    else:
        SystematicCode(args.family, args.k, args.n, args.seed)
    config = SweepConfig(args.family, args.k, args.n, args.ebn0, args.trials, args.max_weight,
                         args.seed, args.workers, args.noiseless_digest, args.max_queries,
                         args.early_stop)
    points = run_sweep(config, progress=lambda p: print(
        f"Eb/N0 {p.ebn0_db:g} dB: {p.block_errors}/{p.trials} errors", file=sys.stderr))
    write_csv(points, args.out)
    print(emit_summary(points))
    return EXIT_OK


def cmd_capacity(args):
    sigma = ebn0_to_sigma(args.ebn0, args.k / args.n)
    p = analysis.crossover_probability(sigma)
    cap = analysis.capacity(sigma, args.model)
    print(f"rate k/n      {args.k / args.n:.6f}")
    print(f"sigma         {sigma:.6f}")
    print(f"crossover p   {p:.6e}")
    print(f"capacity      {cap:.6f} bits/use ({args.model})")
    print(f"rate margin   {analysis.rate_margin(args.k, args.n, sigma, args.model):+.6f}")
    return EXIT_OK


def cmd_decode_demo(args):
    code = SystematicCode(args.family, args.k, args.n, args.seed)
    rng = np.random.default_rng(args.seed)
    m = BitVector.random(code.k, rng)
    word = code.encode(m)
    if any(not 0 <= i < code.n for i in args.flip_bits):
        raise CodeConfigError(f"flip positions must lie in [0, {code.n})")
    noise = BitVector([1 if i in set(args.flip_bits) else 0 for i in range(code.n)])
    y, z = split(xor(word, noise), code.k)
    print(f"code     {code.family} k={code.k} n={code.n}")
    print(f"message  {m.hex()}")
    print(f"flipped  {list(args.flip_bits)}")

    def trace(pat, m_hat, ok):
        print(f"query {pat.rank + 1:>8}  weight {pat.weight}  flips {list(pat.pattern.support())}"
              f"  {'VERIFIED' if ok else 'reject'}")

    cfg = GrandConfig(args.max_weight)
    result = grand_decode_sequential(y, z, code, cfg, trace=trace)
    fast = grand_decode(y, z, code, cfg)
    if result.abandoned:
        print(f"abandoned after {result.queries} queries")
    else:
        verdict = "correct" if result.message == m else "WRONG (verified on another message)"
        print(f"decoded  {result.message.hex()}  ({verdict}, {result.queries} queries, "
              f"noise weight {result.noise_weight})")
    print(f"fast decoder: {fast.queries} queries, {fast.hash_evaluations} digests computed")
    return EXIT_OK


COMMANDS = {"sweep": cmd_sweep, "capacity": cmd_capacity, "decode-demo": cmd_decode_demo}


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except HarnessIOError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except (CodeConfigError, SweepConfigError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
