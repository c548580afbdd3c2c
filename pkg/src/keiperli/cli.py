"""keiperli command line.

Exit codes: 0 ok, 2 bad arguments, 3 precision failure, 4 IO failure,
5 schema mismatch, 6 insufficient data.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import warnings
from contextlib import contextmanager
from pathlib import Path
from typing import Iterator, Sequence

from . import __version__
from .errors import (DomainError, InsufficientDataError, PrecisionError, ResolutionError,
                     SchemaError)

EXIT_OK, EXIT_ARGS, EXIT_PRECISION, EXIT_IO, EXIT_SCHEMA, EXIT_DATA = 0, 2, 3, 4, 5, 6


class ArgumentError(Exception):
    pass


def parse_range(text: str) -> list[int]:
    """``a..b`` (inclusive), single integers, or comma-separated mixtures."""
    out: list[int] = []
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        try:
            if ".." in part:
                lo, hi = (int(x) for x in part.split("..", 1))
                if hi < lo:
                    raise ArgumentError(f"empty range {part!r}")
                out.extend(range(lo, hi + 1))
            else:
                out.append(int(part))
        except ValueError:
            raise ArgumentError(f"bad range {text!r}; use e.g. 1..100") from None
    if not out:
        raise ArgumentError("empty n range")
    if min(out) < 1:
        raise ArgumentError("n must be >= 1")
    return sorted(set(out))


def _bounds(text: str) -> tuple[float, float]:
    try:
        lo, hi = (float(x) for x in text.split("..", 1))
    except ValueError:
        raise ArgumentError(f"bad window {text!r}; use e.g. 500..4000") from None
    if not 1 <= lo < hi:
        raise ArgumentError("window needs 1 <= lo < hi")
    return lo, hi


def _checkpoint_path(arg: str | None, kind: str) -> Path | None:
    if arg:
        return Path(arg)
    root = os.environ.get("KEIPERLI_CHECKPOINT_DIR")
    if root:
        return Path(root) / f"{kind}.phi"
    return None


@contextmanager
def _output(path: str | None) -> Iterator:
    if path is None or path == "-":
        yield sys.stdout
    else:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            yield fh


def _manifest_path(out: str | None) -> Path | None:
    if out is None or out == "-":
        return None
    p = Path(out)
    return p.with_name(p.stem + ".manifest.json")


# ------------------------------------------------------------------ commands

def _run_sequence(args, kind: str, variant: str | None) -> int:
    from .liseq import RunManifest, compute_sequence, resolve_threads
    from .specials import PhiCache
    from .tables import CsvSink, format_sci, write_manifest

    ns = parse_range(args.n)
    if args.digits < 1:
        raise ArgumentError("--digits must be >= 1")
    threads = resolve_threads(args.threads)
    ckpt = _checkpoint_path(args.checkpoint, kind)
    if kind == "riemann":
        cache_cls, make = PhiCache, lambda: PhiCache("riemann")
    else:
        from .dh import DHPhiCache
        cache_cls, make = DHPhiCache, lambda: DHPhiCache(variant)
    cache = cache_cls.open_checkpoint(ckpt, kind=kind) if ckpt else make()

    with _output(args.out) as fh:
        records = []
        if args.format == "csv":
            sink = CsvSink(fh, args.digits, variant, timing=not args.no_timing)
        else:
            def sink(point):
                row = {"n": point.n, "lambda": format_sci(point.lam, args.digits),
                       "delta": format_sci(point.delta, args.digits), "bits": point.bits,
                       "elapsed_ms": 0 if args.no_timing else round(point.elapsed, 3)}
                if variant is not None:
                    row["variant"] = variant
                records.append(row)
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always")
            if kind == "riemann":
                points = compute_sequence(ns, cache, args.digits, threads, sink)
            else:
                from .dh import dh_range
                points = dh_range(ns, variant, args.digits, threads, cache, sink)
        for w in caught:
            print(f"warning: {w.message}", file=sys.stderr)
        if args.format == "json":
            json.dump(records, fh, indent=1)
            fh.write("\n")

    manifest_file = _manifest_path(args.out)
    if manifest_file is not None:
        manifest = RunManifest(ns, args.digits, threads, str(ckpt) if ckpt else None, args.out,
                               kind=kind, working_bits=points[0].bits if points else None,
                               extra={"format": args.format})
        write_manifest(manifest_file, manifest)
    return EXIT_OK


def cmd_lambda(args) -> int:
    return _run_sequence(args, "riemann", None)


def cmd_dh(args) -> int:
    from .dh import get_variant

    try:
        v = get_variant(args.variant)
    except DomainError as exc:
        raise ArgumentError(str(exc)) from None
    return _run_sequence(args, v.kind, v.sign)


def cmd_keiper(args) -> int:
    from mpmath import mpf

    from .keiper_ref import keiper_lambda
    from .tables import format_sci

    if args.n_max < 1 or args.n_max > 500:
        raise ArgumentError("--n-max must lie in 1..500")
    values = keiper_lambda(args.n_max, r=mpf(args.r), M=args.samples)
    with _output(args.out) as fh:
        fh.write("n,lambda_keiper,lambda_li\n")
        for n, v in enumerate(values, 1):
            fh.write(f"{n},{format_sci(v, args.digits)},{format_sci(n * v, args.digits)}\n")
    return EXIT_OK


def _zero(text: str):
    from .analysis import ZeroCandidate
    from .keiper_ref import parse_zero

    try:
        return ZeroCandidate.from_zero(complex(parse_zero(text)))
    except DomainError as exc:
        raise ArgumentError(str(exc)) from None


def cmd_analyze(args) -> int:
    from . import analysis

    if args.mode == "thresholds":
        if not args.zero:
            raise ArgumentError("--zero is required for thresholds")
        zero = _zero(args.zero)
        report = {"zero": {"t": zero.t, "T": zero.T}, **analysis.thresholds(zero).to_dict()}
    elif args.mode == "amplitude":
        if not args.zero or args.at is None:
            raise ArgumentError("--zero and --at are required for amplitude")
        zero = _zero(args.zero)
        report = {"zero": {"t": zero.t, "T": zero.T}, "n": args.at,
                  "amplitude": analysis.oscillation_amplitude(args.at, zero)}
    else:
        if not args.input:
            raise ArgumentError("--input is required for wavelength")
        from .tables import read_csv

        table = read_csv(args.input)
        ns = table.n
        signed = [float(d) * (-1) ** n for n, d in zip(ns, table.delta)]
        window = analysis.u_window(*_bounds(args.window)) if args.window else None
        fit = analysis.wavelength_fit(ns, signed, window)
        report = fit.to_dict()
        if args.window:
            report["n_window"] = list(_bounds(args.window))
    with _output(args.out) as fh:
        json.dump(report, fh, indent=2)
        fh.write("\n")
    return EXIT_OK


def cmd_phi_cache(args) -> int:
    from .specials import PhiCache

    path = Path(args.path)
    kind = args.kind
    if kind == "riemann":
        cls = PhiCache
    else:
        from .dh import DHPhiCache
        cls = DHPhiCache
    if args.extend_to:
        from .liseq import prepare_table
        from .precision import plan_precision

        cache = cls.open_checkpoint(path, kind=kind)
        prepare_table(cache, plan_precision(args.extend_to, args.digits))
    else:
        cache = cls.load(path, kind=kind)
    ms = sorted({m for m, _, _ in cache.records()})
    report = {"path": str(path), "kind": cache.kind, "entries": len(cache),
              "m_min": ms[0] if ms else None, "m_max": ms[-1] if ms else None,
              "contiguous": bool(ms) and ms == list(range(1, ms[-1] + 1)),
              "max_bits": max((b for _, b, _ in cache.records()), default=None)}
    print(json.dumps(report, indent=2))
    return EXIT_OK


# ------------------------------------------------------------------ parser

def _sequence_options(p: argparse.ArgumentParser) -> None:
    p.add_argument("--n", required=True, help="indices, e.g. 1..4000 or 1,10,100")
    p.add_argument("--digits", type=int, default=12, help="target significant digits (12)")
    p.add_argument("--threads", type=int, default=None,
                   help="worker processes (default: $KEIPERLI_THREADS or all cores)")
    p.add_argument("--checkpoint", help="Phi cache file to resume from and append to")
    p.add_argument("--out", help="output file (default stdout)")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--no-timing", action="store_true",
                   help="write 0 in elapsed_ms so reruns are byte-identical")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="keiperli",
                                     description="Closed-form Keiper-Li sequences and diagnostics.")
    parser.add_argument("--version", action="version", version=f"keiperli {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("lambda", help="Lambda_n for the Riemann zeta function")
    _sequence_options(p)
    p.set_defaults(func=cmd_lambda)

    p = sub.add_parser("dh", help="Lambda_(+/-),n for the Davenport-Heilbronn functions")
    p.add_argument("--variant", required=True, help="'+' or '-' (also plus/minus)")
    _sequence_options(p)
    p.set_defaults(func=cmd_dh)

    p = sub.add_parser("keiper", help="Keiper's lambda_n^K by contour quadrature")
    p.add_argument("--n-max", type=int, required=True)
    p.add_argument("--r", default="0.5", help="contour radius (0.5)")
    p.add_argument("--samples", type=int, default=None, help="contour samples M")
    p.add_argument("--digits", type=int, default=12)
    p.add_argument("--out")
    p.set_defaults(func=cmd_keiper)

    p = sub.add_parser("analyze", help="wavelength fit, thresholds or amplitude")
    p.add_argument("--mode", choices=("wavelength", "thresholds", "amplitude"),
                   default="wavelength")
    p.add_argument("--input", help="CSV from 'lambda' or 'dh'")
    p.add_argument("--window", help="n-window lo..hi for the fit")
    p.add_argument("--zero", help="beta+Ti or a named zero, e.g. dh-plus-offline")
    p.add_argument("--at", type=int, help="n for --mode amplitude")
    p.add_argument("--out")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("phi-cache", help="inspect or extend a Phi checkpoint")
    p.add_argument("path")
    p.add_argument("--kind", choices=("riemann", "dh+", "dh-"), default="riemann")
    p.add_argument("--extend-to", type=int, default=0, help="fill entries needed for n")
    p.add_argument("--digits", type=int, default=12)
    p.set_defaults(func=cmd_phi_cache)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except (ArgumentError, DomainError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ARGS
    except (PrecisionError, ResolutionError) as exc:
        print(f"precision error: {exc}", file=sys.stderr)
        return EXIT_PRECISION
    except SchemaError as exc:
        print(f"schema error: {exc}", file=sys.stderr)
        return EXIT_SCHEMA
    except InsufficientDataError as exc:
        print(f"insufficient data: {exc}", file=sys.stderr)
        return EXIT_DATA
    except OSError as exc:
        print(f"io error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
