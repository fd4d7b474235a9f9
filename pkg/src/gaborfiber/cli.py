"""Command-line front end.

Exit status is 0 on success, 2 when an input violates a precondition
(unreadable or misaligned window, not a frame, ...) and 3 when a numerical
kernel fails.
"""
from __future__ import annotations

import argparse
import csv
import sys
import warnings
from pathlib import Path

import numpy as np

from . import gabor, serialize, spaces
from .errors import NumericalError, PreconditionError
from .kernels import BACKEND

EXIT_OK, EXIT_PRECONDITION, EXIT_NUMERICAL = 0, 2, 3
COMMANDS = ("analyze", "dual", "verify", "classify", "correlations")


def build_parser():
    parser = argparse.ArgumentParser(prog="gaborfiber", description="Fiberwise analysis of Gabor systems.")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--window", required=True, help="builtin 'name:key=val,...' or a .csv/.json window file")
        p.add_argument("--window2", help="second window (dual candidate for verify)")
        p.add_argument("-a", type=float, default=1.0, help="translation step a (classify: the period P)")
        p.add_argument("-b", type=float, default=1.0, help="modulation step b")
        p.add_argument("--grid", type=int, default=None, metavar="M", help="samples per fiber of length 1/b")
        p.add_argument("--trunc-n", type=int, default=None, help="module truncation N")
        p.add_argument("--trunc-k", type=int, default=None, help="correlation / fiber matrix truncation K")
        p.add_argument("--out", help="output path (default: stdout)")
        p.add_argument("--format", choices=("json", "csv"), default=None)
        p.add_argument("--tol-parseval", type=float, default=gabor.PARSEVAL_TOL)
        p.add_argument("--tol-wr", type=float, default=gabor.WR_TOL)
        p.add_argument("--tol-tail", type=float, default=spaces.EPS_TAIL, help="gaussian/exponential cutoff")
    return parser


def _load(text, eps):
    w = serialize.parse_window(text)
    if w.kind in ("gaussian", "exponential") and "eps" in w.params and eps != w.params["eps"]:
        w = spaces.WindowSpec(w.kind, {**w.params, "eps": eps}, w.shift, w.dilation, w.cell_sups)
    return w


def _config(args, lat=None):
    cfg = {
        "command": args.command,
        "window": args.window,
        "window2": args.window2,
        "a": args.a,
        "b": args.b,
        "grid_M": args.grid,
        "trunc_n": args.trunc_n,
        "trunc_k": args.trunc_k,
        "format": args.format,
        "tolerances": {"parseval": args.tol_parseval, "wr": args.tol_wr, "tail": args.tol_tail},
        "backend": BACKEND,
    }
    if lat is not None:
        cfg["lattice"] = lat.to_dict()
    return cfg


def _emit(args, text):
    if args.out:
        Path(args.out).write_text(text + ("" if text.endswith("\n") else "\n"))
    else:
        sys.stdout.write(text + ("" if text.endswith("\n") else "\n"))


def _cmd_analyze(args, g, lat):
    res = gabor.analyze_system(g, lat, K=args.trunc_k, parseval_tol=args.tol_parseval)
    return res.to_dict()


def _cmd_dual(args, g, lat):
    h = gabor.dual_window(g, lat, K=args.trunc_k)
    wr = gabor.wexler_raz_verify(g, h, lat, tol=args.tol_wr)
    result = {"wexler_raz": wr.to_dict(), "dual_start": h.start, "dual_step": h.step, "dual_samples": h.samples.size}
    if args.out:
        out = Path(args.out)
        csv_path = out if out.suffix.lower() == ".csv" else out.with_suffix(".csv")
        serialize.write_window_csv(csv_path, h)
        result["dual_csv"] = str(csv_path)
        args.out = str(csv_path.with_suffix(".wr.json"))
    else:
        result["dual"] = h.to_dict()
    return result


def _cmd_verify(args, g, lat):
    if not args.window2:
        raise PreconditionError("verify needs --window2")
    h = _load(args.window2, args.tol_tail)
    return {
        "g_h": gabor.wexler_raz_verify(g, h, lat, tol=args.tol_wr).to_dict(),
        "h_g": gabor.wexler_raz_verify(h, g, lat, tol=args.tol_wr).to_dict(),
    }


def _cmd_classify(args, g, lat):
    P = args.a
    step = lat.step if not g.is_sampled else None
    result = spaces.classify_space(g, P, step).to_dict()
    if args.trunc_n is not None:
        from .hmod import module_norm

        result["module_norm"] = module_norm(spaces.fiberize(g, P, N=args.trunc_n, step=step))
    return result


def _correlation_rows(args, g, lat):
    K = args.trunc_k if args.trunc_k is not None else gabor.default_truncation(g, lat)
    rows = []
    for k in range(-K, K + 1):
        Gk = gabor.modulation_correlation(g, g, lat, k)
        rows += [("G", k, x, v) for x, v in zip(Gk.grid, Gk.samples)]
    for j in range(-K, K + 1):
        Gj = gabor.translate_correlation(g, lat, j)
        rows += [("Gamma", j, x, v) for x, v in zip(Gj.grid, Gj.samples)]
    return K, rows


def run(argv=None):
    """Parse ``argv``, run the command and return the exit status."""
    args = build_parser().parse_args(argv)
    try:
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always")
            g = _load(args.window, args.tol_tail)
            lat = gabor.Lattice(args.a, args.b, M=args.grid)
            if args.command == "correlations":
                K, rows = _correlation_rows(args, g, lat)
                if (args.format or "csv") == "csv":
                    _write_rows(args, rows)
                    _flush_warnings(caught)
                    return EXIT_OK
                result = {
                    "truncation": K,
                    "rows": [{"kind": r[0], "index": r[1], "x": r[2], "value": complex(r[3])} for r in rows],
                }
            else:
                handler = {
                    "analyze": _cmd_analyze,
                    "dual": _cmd_dual,
                    "verify": _cmd_verify,
                    "classify": _cmd_classify,
                }[args.command]
                result = handler(args, g, lat)
        cfg = _config(args, lat)
        cfg["warnings"] = [str(w.message) for w in caught]
        _emit(args, serialize.dumps(serialize.report(args.command, cfg, result)))
        _flush_warnings(caught)
        return EXIT_OK
    except PreconditionError as exc:
        print(f"gaborfiber: error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    except (OSError, ValueError, KeyError) as exc:
        print(f"gaborfiber: error: invalid input: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    except (NumericalError, np.linalg.LinAlgError) as exc:
        print(f"gaborfiber: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


def _flush_warnings(caught):
    for w in caught:
        print(f"gaborfiber: warning: {w.category.__name__}: {w.message}", file=sys.stderr)


def _write_rows(args, rows):
    fh = open(args.out, "w", newline="") if args.out else sys.stdout
    try:
        out = csv.writer(fh)
        out.writerow(("kind", "index", "x", "value_re", "value_im"))
        for kind, idx, x, v in rows:
            out.writerow((kind, idx, repr(float(x)), repr(float(v.real)), repr(float(v.imag))))
    finally:
        if fh is not sys.stdout:
            fh.close()


def main(argv=None):
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
