"""Command line front end.

Subcommands
-----------
fit        draw samples (or read them) and fit a model; writes a model file
spin-fit   fit a shift-averaged ensemble from one sample draw
grid       evaluate a model, ensemble, or center-sample oracle on a grid
integrate  print the integral of a stored model or ensemble
compare    per-level error table: oracle, random fit, spin, Monte Carlo
verify     run the exact-identity checks; nonzero exit on failure

The default sample budget is l = ceil(c1 * n * ln(n)^2) with n = 2^m and
the natural logarithm; c1 defaults to 8.  All randomness is derived from
--seed, so identical invocations produce byte-identical outputs.

Exit codes: 0 success, 1 usage error, 2 verification failure, 3 I/O error.
"""

from __future__ import annotations

import argparse
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np

from mhkz import approximator as ap
from mhkz import functions, verify
from mhkz.kaczmarz import KaczmarzConfig
from mhkz.samples import read_samples_csv
from mhkz.smolyak import CenterSamples, build_weight_vector

USAGE_ERROR = 1
VERIFY_ERROR = 2
IO_ERROR = 3


class CliError(Exception):
    """Usage-level problem; maps to exit code 1."""


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"error: {message}\n")
        raise SystemExit(USAGE_ERROR)


def _fmt(value) -> str:
    return repr(float(value))


def _build_parser() -> _Parser:
    parser = _Parser(
        prog="mhkz",
        description=__doc__,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_fit_args(p, spins=False):
        p.add_argument("--function", help="registry function name")
        p.add_argument("--samples", help="CSV file with header x,y,value")
        p.add_argument("--m", type=int, required=True, help="resolution level")
        p.add_argument("--c1", type=float, default=8.0, help="budget factor (default 8)")
        p.add_argument("--l", type=int, help="override sample count")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--recenter", action="store_true",
                       help="subtract the first sample value before fitting")
        p.add_argument("--reference", action="store_true",
                       help="report the Monte Carlo L2 error against --function")
        p.add_argument("--mc-points", type=int, default=200_000)
        p.add_argument("--out", help="output path")
        if spins:
            p.add_argument("--spins", type=int, default=128, help="ensemble size q")

    add_fit_args(sub.add_parser("fit", help="fit a single model"))
    add_fit_args(sub.add_parser("spin-fit", help="fit a shift-averaged ensemble"),
                 spins=True)

    grid = sub.add_parser("grid", help="evaluate on a midpoint grid; write CSV and PGM")
    grid.add_argument("--model", help="model file or ensemble directory")
    grid.add_argument("--mode", choices=["smolyak"],
                      help="evaluate the center-sample oracle instead of a model file")
    grid.add_argument("--function", help="registry function (with --mode smolyak)")
    grid.add_argument("--m", type=int, help="level (with --mode smolyak)")
    grid.add_argument("--grid", type=int, default=256, help="grid resolution G")
    grid.add_argument("--out", required=True, help="output base path (.csv/.pgm appended)")

    integ = sub.add_parser("integrate", help="print the integral of a stored fit")
    integ.add_argument("--model", required=True, help="model file or ensemble directory")

    comp = sub.add_parser("compare", help="error table across levels")
    comp.add_argument("--function", required=True)
    comp.add_argument("--m", required=True,
                      help="level or inclusive range, e.g. 7 or 3..7")
    comp.add_argument("--c1", type=float, default=8.0)
    comp.add_argument("--l", type=int, help="override sample count (all levels)")
    comp.add_argument("--seed", type=int, default=0)
    comp.add_argument("--trials", type=int, default=5)
    comp.add_argument("--spins", type=int, default=0,
                      help="spin-ensemble size; 0 leaves the column empty")
    comp.add_argument("--mc-points", type=int, default=200_000)
    comp.add_argument("--out", help="CSV output path (default stdout)")

    sub.add_parser("verify", help="run the exact-identity checks")
    return parser


def _resolve_samples(args):
    if args.samples:
        samples = read_samples_csv(args.samples)
        l = args.l if args.l is not None else len(samples)
        if l > len(samples):
            raise CliError(f"--l {l} exceeds the {len(samples)} samples in the file")
        return samples, l
    if not args.function:
        raise CliError("either --function or --samples is required")
    fn = functions.get(args.function)
    l = args.l if args.l is not None else ap.default_iterations(args.m, args.c1)
    return ap.draw_samples(fn.f, l, args.seed), l


def _report_reference(args, target) -> str:
    if not args.function:
        raise CliError("--reference needs --function")
    fn = functions.get(args.function)
    err, se = ap.l2_error(target, fn.f, args.mc_points, seed=(args.seed, 3))
    return f" l2={_fmt(err)} l2_se={_fmt(se)}"


def cmd_fit(args) -> int:
    samples, l = _resolve_samples(args)
    started = time.perf_counter()
    model = ap.fit(samples, args.m, KaczmarzConfig(iterations=l, seed=args.seed),
                   recenter=args.recenter, c1=args.c1)
    elapsed = time.perf_counter() - started
    line = (f"fit function={args.function or args.samples} m={args.m} "
            f"n={1 << args.m} l={l} seed={args.seed} "
            f"recenter={int(args.recenter)} elapsed_s={elapsed:.4f}")
    if args.out:
        ap.save_model(model, args.out)
        line += f" out={args.out}"
    if args.reference:
        line += _report_reference(args, model)
    print(line)
    return 0


def cmd_spin_fit(args) -> int:
    if args.spins < 1:
        raise CliError("--spins must be at least 1")
    samples, l = _resolve_samples(args)
    started = time.perf_counter()
    ensemble = ap.fit_spin(samples, args.m, KaczmarzConfig(iterations=l, seed=args.seed),
                           args.spins, shift_seed=(args.seed, 2), recenter=args.recenter)
    elapsed = time.perf_counter() - started
    line = (f"spin-fit function={args.function or args.samples} m={args.m} "
            f"n={1 << args.m} l={l} spins={args.spins} seed={args.seed} "
            f"elapsed_s={elapsed:.4f}")
    if args.out:
        ap.save_ensemble(ensemble, args.out)
        line += f" out={args.out}"
    if args.reference:
        line += _report_reference(args, ensemble)
    print(line)
    return 0


def _load_target(path_text: str):
    path = Path(path_text)
    if path.is_dir():
        return ap.load_ensemble(path)
    return ap.load_model(path)


def _evaluate_target(target, xs, ys) -> np.ndarray:
    if isinstance(target, ap.SpinEnsemble):
        return ap.ensemble_evaluate_many(target, xs, ys)
    return ap.evaluate_many(target, xs, ys)


def write_pgm(path, image: np.ndarray) -> None:
    """8-bit binary PGM with linear value scaling (min -> 0, max -> 255)."""
    lo = float(image.min())
    hi = float(image.max())
    if hi > lo:
        scaled = np.clip((image - lo) / (hi - lo) * 255.0 + 0.5, 0.0, 255.0)
        pixels = scaled.astype(np.uint8)
    else:
        pixels = np.zeros(image.shape, dtype=np.uint8)
    height, width = image.shape
    with open(path, "wb") as fh:
        fh.write(f"P5\n{width} {height}\n255\n".encode())
        fh.write(pixels.tobytes())


def cmd_grid(args) -> int:
    if args.grid < 2:
        raise CliError("--grid must be at least 2")
    if args.mode == "smolyak":
        if not (args.function and args.m):
            raise CliError("--mode smolyak needs --function and --m")
        fn = functions.get(args.function)
        weights = build_weight_vector(CenterSamples.from_function(fn.f, args.m))
        target = ap.Model(args.m, weights)
    elif args.model:
        target = _load_target(args.model)
    else:
        raise CliError("grid needs --model or --mode smolyak")

    g = args.grid
    centers = (np.arange(g) + 0.5) / g
    xx, yy = np.meshgrid(centers, centers)  # row iy, column ix
    values = _evaluate_target(target, xx.ravel(), yy.ravel()).reshape(g, g)

    base = Path(args.out)
    if base.suffix in (".csv", ".pgm"):
        base = base.with_suffix("")
    csv_path = base.with_suffix(".csv")
    with open(csv_path, "w", newline="") as fh:
        fh.write("x,y,value\n")
        for iy in range(g):
            for ix in range(g):
                fh.write(f"{_fmt(centers[ix])},{_fmt(centers[iy])},{_fmt(values[iy, ix])}\n")
    pgm_path = base.with_suffix(".pgm")
    write_pgm(pgm_path, values[::-1, :])  # top image row = largest y
    print(f"grid G={g} csv={csv_path} pgm={pgm_path}")
    return 0


def cmd_integrate(args) -> int:
    target = _load_target(args.model)
    if isinstance(target, ap.SpinEnsemble):
        # Torus shifts preserve the integral, so the ensemble integral is
        # the mean of the member integrals.
        value = float(np.mean([ap.integrate(model) for model in target.models]))
    else:
        value = ap.integrate(target)
    print(f"integral={_fmt(value)} model={args.model}")
    return 0


def _parse_level_range(text: str) -> list[int]:
    if ".." in text:
        lo_text, _, hi_text = text.partition("..")
        lo, hi = int(lo_text), int(hi_text)
    else:
        lo = hi = int(text)
    if lo > hi:
        raise CliError(f"bad level range {text!r}")
    return list(range(lo, hi + 1))


def _compare_cell(fn, m, l, trial, args):
    """One (level, trial) unit of the comparison table."""
    sample_seed = (args.seed, m, trial)
    samples = ap.draw_samples(fn.f, l, sample_seed)
    cfg = KaczmarzConfig(iterations=l, seed=sample_seed)
    model = ap.fit(samples, m, cfg, c1=args.c1)
    fit_l2, _ = ap.l2_error(model, fn.f, args.mc_points, seed=(args.seed, m, trial, 3))
    out = {"fit_l2": fit_l2}
    if fn.reference_integral is not None:
        out["fit_int_err"] = abs(ap.integrate(model) - fn.reference_integral)
        out["mc_int_err"] = abs(float(samples.values.mean()) - fn.reference_integral)
    if args.spins > 0:
        ensemble = ap.fit_spin(samples, m, cfg, args.spins,
                               shift_seed=(args.seed, m, trial, 2))
        out["spin_l2"], _ = ap.l2_error(ensemble, fn.f, args.mc_points,
                                        seed=(args.seed, m, trial, 3))
    return out


def cmd_compare(args) -> int:
    fn = functions.get(args.function)
    levels = _parse_level_range(args.m)
    if fn.reference_integral is None:
        sys.stderr.write(
            f"warning: {fn.name} has no reference integral; "
            "integration columns left empty\n"
        )

    jobs = [(m, t) for m in levels for t in range(args.trials)]
    budgets = {m: (args.l if args.l is not None else ap.default_iterations(m, args.c1))
               for m in levels}
    with ThreadPoolExecutor() as pool:
        cells = dict(
            zip(jobs, pool.map(lambda mt: _compare_cell(fn, mt[0], budgets[mt[0]],
                                                        mt[1], args), jobs))
        )

    lines = ["m,n,l,smolyak_l2,fit_l2,spin_l2,mc_int_err,fit_int_err,smolyak_int_err"]
    for m in levels:
        weights = build_weight_vector(CenterSamples.from_function(fn.f, m))
        oracle = ap.Model(m, weights)
        oracle_l2, _ = ap.l2_error(oracle, fn.f, args.mc_points, seed=(args.seed, m, 4))
        per_trial = [cells[(m, t)] for t in range(args.trials)]
        fit_l2 = float(np.median([c["fit_l2"] for c in per_trial]))
        spin_l2 = (_fmt(float(np.median([c["spin_l2"] for c in per_trial])))
                   if args.spins > 0 else "")
        if fn.reference_integral is not None:
            mc_int = _fmt(float(np.median([c["mc_int_err"] for c in per_trial])))
            fit_int = _fmt(float(np.median([c["fit_int_err"] for c in per_trial])))
            oracle_int = _fmt(abs(ap.integrate(oracle) - fn.reference_integral))
        else:
            mc_int = fit_int = oracle_int = ""
        lines.append(
            f"{m},{1 << m},{budgets[m]},{_fmt(oracle_l2)},{_fmt(fit_l2)},"
            f"{spin_l2},{mc_int},{fit_int},{oracle_int}"
        )

    text = "\n".join(lines) + "\n"
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return 0


def cmd_verify(args) -> int:
    results = verify.run_all()
    failed = False
    for r in results:
        status = "PASS" if r.passed else "FAIL"
        print(f"{r.name:24s} tol {r.tolerance:<8.1e} measured {r.measured:<12.3e} "
              f"{status}  {r.detail}")
        failed = failed or not r.passed
    return VERIFY_ERROR if failed else 0


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    handlers = {
        "fit": cmd_fit,
        "spin-fit": cmd_spin_fit,
        "grid": cmd_grid,
        "integrate": cmd_integrate,
        "compare": cmd_compare,
        "verify": cmd_verify,
    }
    try:
        return handlers[args.command](args)
    except CliError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return USAGE_ERROR
    except ValueError as exc:
        if isinstance(exc, ap.ModelFormatError):
            sys.stderr.write(f"error: {exc}\n")
            return IO_ERROR
        sys.stderr.write(f"error: {exc}\n")
        return USAGE_ERROR
    except OSError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return IO_ERROR


def entrypoint() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entrypoint()
