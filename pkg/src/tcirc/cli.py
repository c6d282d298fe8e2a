"""Command-line surface: completion runs, synthetic tensors, the oracle
suite, and metric emission.

Exit codes are part of the contract: 0 success, 1 usage, 2 I/O,
3 numerical/validation failure, 4 oracle check failure.
"""

import argparse
import os
import sys

import numpy as np

from . import io as tio
from .metrics import irse, rse_per_frame, write_metrics_csv
from .norms import PROX_SCALINGS
from .oracle import run_checks
from .sampling import OCCLUSION_MODES, parse_mask_spec, synth_low_multirank
from .solver import REGULARIZERS, AdmmConfig, complete
from .tsvd import multi_rank

__all__ = ["main"]

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_IO = 2
EXIT_NUMERICAL = 3
EXIT_ORACLE = 4

_EPILOG = """\
exit codes:
  0  success
  1  usage error (bad flags, malformed mask spec or config file)
  2  I/O error (missing, unreadable, or malformed files)
  3  numerical/validation failure (dim mismatch, non-finite data, divergence)
  4  oracle check failure
"""


class UsageError(Exception):
    """Bad flag values discovered after argparse (mask spec, config)."""


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on usage errors; the documented code is 1
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, "%s: error: %s\n" % (self.prog, message))


def _dims(text):
    parts = text.split(",")
    if len(parts) != 3:
        raise ValueError("expected three comma-separated dims")
    dims = tuple(int(p) for p in parts)
    if min(dims) < 1:
        raise ValueError("dims must be positive")
    return dims


def _build_parser():
    p = _Parser(prog="tcirc",
                description="Low-rank tensor completion (video inpainting) "
                            "via circulant tensor algebra.",
                epilog=_EPILOG,
                formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = p.add_subparsers(dest="command", required=True, metavar="command")

    c = sub.add_parser(
        "complete", help="complete a partially observed tensor",
        description="Complete a TT3D tensor or an image-frame directory "
                    "from the entries an observation mask keeps.",
        epilog=_EPILOG,
        formatter_class=argparse.RawDescriptionHelpFormatter)
    c.add_argument("input",
                   help="TT3D tensor file or a directory of image frames "
                        "(lexicographic order, converted to grayscale)")
    c.add_argument("--mask", required=True,
                   help="mask recipe (bernoulli:p=0.3,seed=7 or "
                        "occlusion:frac=0.3,seed=7,mode=area) or a TTM1 "
                        "mask file")
    c.add_argument("--out", default="completed.tt3d",
                   help="output tensor file (default %(default)s)")
    c.add_argument("--report", default="report.csv",
                   help="per-iteration CSV (default %(default)s)")
    c.add_argument("--truth", default=None,
                   help="ground-truth TT3D file or frame directory; "
                        "enables metrics output")
    c.add_argument("--metrics", default="metrics.csv",
                   help="metrics CSV path, used with --truth "
                        "(default %(default)s)")
    c.add_argument("--dump-frames", default=None, metavar="DIR",
                   help="also write the completed frames as images")
    c.add_argument("--config", default=None,
                   help="key=value solver config file; flags override it")
    c.add_argument("--regularizer", choices=REGULARIZERS, default=None)
    c.add_argument("--rho0", type=float, default=None)
    c.add_argument("--eta", type=float, default=None)
    c.add_argument("--tol", type=float, default=None)
    c.add_argument("--max-iters", type=int, default=None, dest="max_iters")
    c.add_argument("--prox-scaling", choices=PROX_SCALINGS, default=None,
                   dest="prox_scaling")
    c.add_argument("--occlusion-mode", choices=OCCLUSION_MODES,
                   default="area", dest="occlusion_mode",
                   help="rectangle sizing for occlusion specs that do not "
                        "say mode=... (default %(default)s)")
    c.add_argument("--channels", choices=("gray", "split"), default="gray",
                   help="frame-directory ingest: convert to grayscale, or "
                        "solve R/G/B separately and recombine")
    c.set_defaults(func=cmd_complete)

    s = sub.add_parser("synth", help="generate a synthetic low-rank tensor",
                       description="Write a random tensor whose every "
                                   "Fourier slice has the given rank.")
    s.add_argument("--dims", type=_dims, required=True, metavar="N1,N2,N3")
    s.add_argument("--rank", type=int, required=True)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--scale", type=float, default=1.0)
    s.add_argument("--out", required=True, help="output TT3D file")
    s.set_defaults(func=cmd_synth)

    o = sub.add_parser(
        "oracle", help="run the brute-force verification suite",
        description="Verify the library against dense materialized "
                    "linear algebra at desk scale.")
    o.add_argument("--budget", type=int, default=None,
                   help="element cap for materialized circulant matrices; "
                        "0 skips the dense checks")
    o.add_argument("--seed", type=int, default=0)
    o.add_argument("--perturbations", type=int, default=1000,
                   help="random perturbations per prox-arbitration "
                        "instance (default %(default)s)")
    o.set_defaults(func=cmd_oracle)

    m = sub.add_parser("metrics", help="per-frame RSE and global iRSE",
                       description="Compare a completed tensor against "
                                   "ground truth and write metrics.csv.")
    m.add_argument("x", help="completed TT3D file or frame directory")
    m.add_argument("truth", help="ground-truth TT3D file or frame directory")
    m.add_argument("--out", default="metrics.csv",
                   help="metrics CSV path (default %(default)s)")
    m.set_defaults(func=cmd_metrics)
    return p


def _load_gray(path, what="input"):
    if os.path.isdir(path):
        return tio.load_frames(path)
    if os.path.isfile(path):
        return tio.read_tensor(path)
    raise tio.TensorFileError("%s %s does not exist" % (what, path))


def _load_channels(args):
    """Returns a list of (suffix, tensor) to solve."""
    if args.channels == "split":
        if not os.path.isdir(args.input):
            raise UsageError("--channels split needs a frame directory "
                             "as input")
        r, g, b = tio.load_frames_rgb(args.input)
        return [("_r", r), ("_g", g), ("_b", b)]
    return [("", _load_gray(args.input))]


def _resolve_mask(mask_arg, dims, occlusion_mode):
    if os.path.isfile(mask_arg):
        m = tio.read_mask(mask_arg)
        if m.shape != tuple(dims):
            raise ValueError("mask dims %r do not match tensor dims %r"
                             % (m.shape, tuple(dims)))
        return m
    try:
        spec = parse_mask_spec(mask_arg)
    except ValueError as e:
        raise UsageError("bad --mask: %s" % e) from e
    if spec.kind == "occlusion":
        spec.params.setdefault("mode", occlusion_mode)
    return spec.realize(dims)


def _config_from_args(args):
    if args.config:
        try:
            base = AdmmConfig.from_file(args.config)
        except ValueError as e:
            raise UsageError("bad --config: %s" % e) from e
    else:
        base = AdmmConfig()
    overrides = {name: getattr(args, name)
                 for name in ("regularizer", "rho0", "eta", "tol",
                              "max_iters", "prox_scaling")
                 if getattr(args, name) is not None}
    try:
        return base.replace(**overrides)
    except ValueError as e:
        raise UsageError(str(e)) from e


def _suffixed(path, suffix):
    if not suffix:
        return path
    root, ext = os.path.splitext(path)
    return root + suffix + ext


def cmd_complete(args):
    channels = _load_channels(args)
    dims = channels[0][1].shape
    mask = _resolve_mask(args.mask, dims, args.occlusion_mode)
    cfg = _config_from_args(args)

    results = []
    for suffix, t in channels:
        x, report = complete(t, mask, cfg)
        out_path = _suffixed(args.out, suffix)
        tio.write_tensor(out_path, x)
        report.to_csv(_suffixed(args.report, suffix))
        print("%s: %s" % (out_path, report.summary()))
        results.append(x)

    if args.dump_frames:
        if len(results) == 3:
            tio.dump_frames_rgb(args.dump_frames, *results)
        else:
            tio.dump_frames(args.dump_frames, results[0])
        print("frames: %s" % args.dump_frames)

    if args.truth is not None:
        if len(results) != 1:
            raise UsageError("--truth works with single-channel "
                             "(grayscale) completion")
        truth = _load_gray(args.truth, "truth")
        rse = rse_per_frame(results[0], truth)
        score = irse(results[0], truth)
        write_metrics_csv(args.metrics, rse, score)
        print("metrics: %s (irse %.6g dB)" % (args.metrics, score))
    return EXIT_OK


def cmd_synth(args):
    try:
        t = synth_low_multirank(args.dims, args.rank, seed=args.seed,
                                scale=args.scale)
    except ValueError as e:
        raise UsageError(str(e)) from e
    tio.write_tensor(args.out, t)
    print("multi-rank: %s" % " ".join(str(int(v)) for v in multi_rank(t)))
    print("wrote %s" % args.out)
    return EXIT_OK


def cmd_oracle(args):
    results = run_checks(seed=args.seed, budget=args.budget,
                         n_perturbations=args.perturbations)
    print("%-26s %-11s %-10s %-8s %s"
          % ("check", "max_error", "tolerance", "verdict", "detail"))
    for r in results:
        err = "%.3e" % r.max_error if r.max_error is not None else "-"
        tol = "%.0e" % r.tolerance if r.tolerance is not None else "-"
        print("%-26s %-11s %-10s %-8s %s"
              % (r.name, err, tol, r.verdict, r.detail))
    if any(r.failed for r in results):
        return EXIT_ORACLE
    return EXIT_OK


def cmd_metrics(args):
    x = _load_gray(args.x, "input")
    truth = _load_gray(args.truth, "truth")
    rse = rse_per_frame(x, truth)
    score = irse(x, truth)
    write_metrics_csv(args.out, rse, score)
    print("wrote %s (irse %.6g dB)" % (args.out, score))
    return EXIT_OK


def main(argv=None):
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else EXIT_USAGE
    try:
        return args.func(args)
    except UsageError as e:
        print("%s: error: %s" % (parser.prog, e), file=sys.stderr)
        return EXIT_USAGE
    except tio.TensorFileError as e:
        print("%s: I/O error: %s" % (parser.prog, e), file=sys.stderr)
        return EXIT_IO
    except OSError as e:
        print("%s: I/O error: %s" % (parser.prog, e), file=sys.stderr)
        return EXIT_IO
    except (ValueError, RuntimeError, np.linalg.LinAlgError) as e:
        print("%s: failure: %s" % (parser.prog, e), file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
