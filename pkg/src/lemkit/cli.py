"""Command-line front end.

Every subcommand parses its inputs, dispatches to one library call, and
prints a single report: JSON by default, flat key/value text with
--format text, SVG for plots.  Failures are structured JSON on stderr;
the exit code states the outcome (0 ok, 1 usage or parse error, 2
indeterminate, 3 a certified count broke a proven bound).
"""

import argparse
import json
import sys
from dataclasses import dataclass

from .construct import circle_pair, flower_pair, verify_counterexample
from .curves import (
    BivarPoly,
    hermitian_numerator,
    lemniscate_poly,
    separated_numerator,
)
from .factor import (
    MonodromyIndeterminate,
    absolute_factor_count,
    certify_irreducible_tp,
)
from .plot import lemniscate_segments, lemniscate_svg
from .ratfunc import parse
from .solve import lemniscate_intersections, real_bezout_check

__all__ = ["RunConfig", "main", "run"]

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_INDETERMINATE = 2
EXIT_FALSIFICATION = 3

DEFAULT_TOL = 2.0**-128


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    precision_bits: int = 256
    tol: float = DEFAULT_TOL
    seed: int = 0
    fmt: str = "json"
    max_precision_bits: int = 4096

    def validate(self):
        if self.precision_bits < 53:
            raise UsageError("--precision must be at least 53 bits")
        if not self.tol > 0:
            raise UsageError("--tol must be positive")
        if self.max_precision_bits < self.precision_bits:
            raise UsageError("--max-precision must be at least --precision")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _common_flags():
    # SUPPRESS keeps a flag absent from the namespace unless typed, so the
    # same option group can sit on the root parser and every subparser
    # without the subparser default clobbering a value parsed earlier
    common = _Parser(add_help=False)
    common.add_argument("--precision", type=int, metavar="BITS", default=argparse.SUPPRESS)
    common.add_argument("--tol", type=float, default=argparse.SUPPRESS)
    common.add_argument("--seed", type=int, default=argparse.SUPPRESS)
    common.add_argument(
        "--format", choices=("json", "svg", "text"), default=argparse.SUPPRESS
    )
    common.add_argument(
        "--max-precision",
        type=int,
        dest="max_precision",
        metavar="BITS",
        default=argparse.SUPPRESS,
    )
    return common


def _build_parser():
    common = _common_flags()
    ap = _Parser(prog="lemkit", description=__doc__, parents=[common])
    sub = ap.add_subparsers(dest="command", required=True, metavar="COMMAND")

    b = sub.add_parser("build", parents=[common], help="curve polynomial from expressions")
    b.add_argument("kind", choices=("lemniscate", "hermitian", "separated"))
    b.add_argument("exprs", nargs="+", metavar="EXPR")

    it = sub.add_parser("intersect", parents=[common], help="count common lemniscate points")
    it.add_argument("p1")
    it.add_argument("p2")

    bz = sub.add_parser("bezout", parents=[common], help="real Bezout check of two curve files")
    bz.add_argument("f", metavar="F.json")
    bz.add_argument("g", metavar="G.json")

    fc = sub.add_parser("factor-count", parents=[common], help="absolute irreducible factor count")
    fc.add_argument("file", nargs="?", metavar="F.json")
    fc.add_argument("--from", dest="from_expr", metavar="P")

    tp = sub.add_parser("certify-tp", parents=[common], help="pole-multiplicity irreducibility certificate")
    tp.add_argument("p")
    tp.add_argument("q")

    c = sub.add_parser("construct", parents=[common], help="sharp intersection families")
    c.add_argument("family", choices=("flower", "circles"))
    c.add_argument("n1", type=int)
    c.add_argument("n2", type=int)

    sub.add_parser("counterexample", parents=[common], help="verify the degree-11 splitting example")

    pl = sub.add_parser("plot", parents=[common], help="SVG of a lemniscate")
    pl.add_argument("p")
    pl.add_argument(
        "--box",
        nargs=4,
        type=float,
        default=(-2.0, -2.0, 2.0, 2.0),
        metavar=("X0", "Y0", "X1", "Y1"),
    )
    pl.add_argument("--samples", type=int, default=512, metavar="N")
    return ap


def _load_bivar(path):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ValueError(f"{path} is not valid JSON: {exc}") from exc
    return BivarPoly.from_json_dict(data)


def _cmd_build(args, cfg):
    if args.kind == "separated":
        if len(args.exprs) != 2:
            raise UsageError("build separated takes exactly two expressions")
        out = separated_numerator(parse(args.exprs[0]), parse(args.exprs[1]))
    else:
        if len(args.exprs) != 1:
            raise UsageError(f"build {args.kind} takes exactly one expression")
        fn = lemniscate_poly if args.kind == "lemniscate" else hermitian_numerator
        out = fn(parse(args.exprs[0]))
    return out.to_json_dict(), EXIT_OK


def _cmd_intersect(args, cfg):
    rep = lemniscate_intersections(
        parse(args.p1),
        parse(args.p2),
        precision_bits=cfg.precision_bits,
        seed=cfg.seed,
        max_precision_bits=cfg.max_precision_bits,
    )
    out = rep.to_json_dict()
    out["seed"] = cfg.seed
    if rep.falsification:
        return out, EXIT_FALSIFICATION
    if rep.status != "ok":
        return out, EXIT_INDETERMINATE
    return out, EXIT_OK


def _cmd_bezout(args, cfg):
    rep = real_bezout_check(
        _load_bivar(args.f),
        _load_bivar(args.g),
        precision_bits=cfg.precision_bits,
        max_precision_bits=cfg.max_precision_bits,
    )
    out = rep.to_json_dict()
    if rep.falsification:
        return out, EXIT_FALSIFICATION
    if rep.verdict == "indeterminate":
        return out, EXIT_INDETERMINATE
    return out, EXIT_OK


def _cmd_factor_count(args, cfg):
    if (args.file is None) == (args.from_expr is None):
        raise UsageError("factor-count needs a curve file or --from <P>, not both")
    if args.file is not None:
        f = _load_bivar(args.file)
    else:
        f = hermitian_numerator(parse(args.from_expr))
    cert = absolute_factor_count(
        f,
        precision_bits=cfg.precision_bits,
        seed=cfg.seed,
        max_precision_bits=cfg.max_precision_bits,
    )
    out = cert.to_json_dict()
    out["seed"] = cfg.seed
    return out, EXIT_OK


def _cmd_certify_tp(args, cfg):
    p = parse(args.p)
    if not p.is_polynomial:
        raise ValueError("certify-tp requires a polynomial first argument")
    cert = certify_irreducible_tp(p.as_poly(), parse(args.q))
    if cert is None:
        out = {
            "applicable": False,
            "reason": "pole multiplicities share a common factor with the degree",
        }
        return out, EXIT_INDETERMINATE
    out = cert.to_json_dict()
    out["applicable"] = True
    return out, EXIT_OK


def _cmd_construct(args, cfg):
    fn = circle_pair if args.family == "circles" else flower_pair
    res = fn(args.n1, args.n2, seed=cfg.seed, precision_bits=cfg.precision_bits)
    return res.to_json_dict(), EXIT_OK


def _cmd_counterexample(args, cfg):
    rep = verify_counterexample(precision_bits=cfg.precision_bits, seed=cfg.seed)
    out = rep.to_json_dict()
    return out, EXIT_OK if rep.status == "ok" else EXIT_INDETERMINATE


def _cmd_plot(args, cfg):
    p = parse(args.p)
    box = tuple(args.box)
    if cfg.fmt == "svg":
        return lemniscate_svg(p, box, args.samples), EXIT_OK
    segs = lemniscate_segments(p, box, args.samples)
    out = {
        "svg": lemniscate_svg(p, box, args.samples),
        "box": list(box),
        "samples": args.samples,
        "segments": len(segs),
    }
    if cfg.fmt == "text":
        out = {"box": list(box), "samples": args.samples, "segments": len(segs)}
    return out, EXIT_OK


_COMMANDS = {
    "build": _cmd_build,
    "intersect": _cmd_intersect,
    "bezout": _cmd_bezout,
    "factor-count": _cmd_factor_count,
    "certify-tp": _cmd_certify_tp,
    "construct": _cmd_construct,
    "counterexample": _cmd_counterexample,
    "plot": _cmd_plot,
}

_ERROR_KINDS = {
    EXIT_USAGE: "usage",
    EXIT_INDETERMINATE: "indeterminate",
    EXIT_FALSIFICATION: "falsification",
}


def _emit_error(kind, message, stream=None):
    stream = stream or sys.stderr
    json.dump({"error": {"type": kind, "message": message}}, stream)
    stream.write("\n")


def _text_render(value, prefix=""):
    lines = []
    for key, val in value.items():
        name = f"{prefix}{key}"
        if isinstance(val, dict):
            lines.extend(_text_render(val, prefix=f"{name}."))
        elif isinstance(val, list):
            lines.append(f"{name}: {json.dumps(val)}")
        else:
            lines.append(f"{name}: {val}")
    return lines


def _print_output(out, fmt, stream):
    if isinstance(out, str):
        stream.write(out)
        if not out.endswith("\n"):
            stream.write("\n")
    elif fmt == "text":
        stream.write("\n".join(_text_render(out)) + "\n")
    else:
        json.dump(out, stream, indent=2)
        stream.write("\n")


def run(argv, stdout=None, stderr=None):
    """Execute one command line; returns the process exit code."""
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = _build_parser()
    try:
        try:
            args = parser.parse_args(argv)
        except SystemExit as exc:  # --help
            return int(exc.code or 0)
        cfg = RunConfig(
            precision_bits=getattr(args, "precision", 256),
            tol=getattr(args, "tol", DEFAULT_TOL),
            seed=getattr(args, "seed", 0),
            fmt=getattr(args, "format", "svg" if args.command == "plot" else "json"),
            max_precision_bits=getattr(args, "max_precision", 4096),
        )
        cfg.validate()
        if cfg.fmt == "svg" and args.command != "plot":
            raise UsageError("--format svg is only available for plot")
        out, code = _COMMANDS[args.command](args, cfg)
    except UsageError as exc:
        _emit_error("usage", str(exc), stderr)
        return EXIT_USAGE
    except (ValueError, ZeroDivisionError) as exc:
        _emit_error("parse", str(exc), stderr)
        return EXIT_USAGE
    except MonodromyIndeterminate as exc:
        _emit_error("indeterminate", str(exc), stderr)
        return EXIT_INDETERMINATE
    except RuntimeError as exc:
        _emit_error("indeterminate", str(exc), stderr)
        return EXIT_INDETERMINATE
    _print_output(out, cfg.fmt, stdout)
    if code != EXIT_OK:
        kind = _ERROR_KINDS[code]
        _emit_error(kind, f"{args.command} finished with a {kind} outcome", stderr)
    return code


def main(argv=None):
    return run(sys.argv[1:] if argv is None else argv)


if __name__ == "__main__":
    sys.exit(main())
