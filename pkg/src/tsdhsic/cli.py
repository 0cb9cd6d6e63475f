"""Command-line entry point: ``tsdhsic {test,scan,generate,preprocess,power}``.

Every command except ``generate`` prints a JSON envelope (or writes it to
``--out``). Exit status is 0 on success, 1 on error, and 2 when
``--exit-on-reject`` is given and the null was rejected (for ``scan``: at
least one hyperedge was found).
"""

from __future__ import annotations

import argparse
import logging
import os
import sys
from dataclasses import asdict

from . import _core
from .errors import SpecError, TsdhsicError
from .formats import dumps_envelope, make_envelope, read_panel, write_panel
from .kernel import DEFAULT_MEDIAN_FACTOR, MEDIAN, KernelConfig
from .panel import TimeSeriesPanel
from .power import expand_grid, power_sweep
from .preprocess import adf_test, block_average, difference, zscore
from .resampling import TestConfig, joint_independence_test
from .scan import CAUTION, scan_higher_order
from .synthgen import KINDS, GeneratorSpec, gen_freqmix, generate

log = logging.getLogger("tsdhsic")

EXIT_OK, EXIT_ERROR, EXIT_REJECT = 0, 1, 2


def _bool(text: str) -> bool:
    low = text.strip().lower()
    if low in ("1", "true", "yes", "on"):
        return True
    if low in ("0", "false", "no", "off"):
        return False
    raise argparse.ArgumentTypeError(f"expected a boolean, got {text!r}")


def _bandwidth(text: str):
    if text == MEDIAN:
        return MEDIAN
    try:
        return float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"bandwidth must be 'median' or a number, got {text!r}") from None


def _int_list(text: str) -> list[int]:
    return [int(v) for v in text.split(",") if v.strip()]


def _scalar(text: str):
    for cast in (int, float):
        try:
            return cast(text)
        except ValueError:
            pass
    low = text.lower()
    if low in ("true", "false"):
        return low == "true"
    return text


def _key_values(items: list[str]) -> dict:
    out = {}
    for item in items or []:
        key, sep, value = item.partition("=")
        if not sep:
            raise SpecError(f"expected key=value, got {item!r}")
        out[key.strip()] = _scalar(value.strip())
    return out


def _grid_axes(items: list[str]) -> dict:
    axes = {}
    for item in items or []:
        key, sep, values = item.partition("=")
        if not sep:
            raise SpecError(f"grid axis must look like name=v1,v2,..., got {item!r}")
        axes[key.strip()] = [_scalar(v.strip()) for v in values.split(",") if v.strip()]
    return axes


def _add_test_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--method", choices=["shift", "permute", "auto"], default="auto")
    p.add_argument("--alpha", type=float, default=0.05)
    p.add_argument("--null-samples", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--bandwidth", type=_bandwidth, default=MEDIAN, help="'median' or a fixed sigma")
    p.add_argument("--median-factor", type=float, default=DEFAULT_MEDIAN_FACTOR,
                   help="sigma = factor * median pairwise distance")
    p.add_argument("--fix-first", type=_bool, default=True)


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--out", help="write output here instead of stdout")
    p.add_argument("--threads", type=int, default=None, help="worker cap (env TSDHSIC_THREADS)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="tsdhsic", description="Joint independence tests for time series.")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("test", help="test joint independence of selected variables")
    p.add_argument("--input", required=True)
    p.add_argument("--vars", help="comma-separated variable names (default: all)")
    _add_test_flags(p)
    _add_common(p)
    p.add_argument("--exit-on-reject", action="store_true")
    p.add_argument("--no-null", action="store_true", help="omit the null samples from the output")

    p = sub.add_parser("scan", help="order-2..max-order scan for minimal dependent subsets")
    p.add_argument("--input", required=True)
    p.add_argument("--vars")
    p.add_argument("--max-order", type=int, default=None)
    p.add_argument("--bonferroni", action="store_true")
    p.add_argument("--edge-list", help="also write a plain-text edge list here")
    _add_test_flags(p)
    _add_common(p)
    p.add_argument("--exit-on-reject", action="store_true")

    p = sub.add_parser("generate", help="write a synthetic panel CSV")
    _add_generator_flags(p)
    p.add_argument("--raw", action="store_true", help="freqmix: write root1, root2, mixed instead of phases")
    _add_common(p)

    p = sub.add_parser("preprocess", help="difference / block-average / z-score a panel, optional ADF check")
    p.add_argument("--input", required=True)
    p.add_argument("--diff", type=_int_list, default=[], help="periods applied in order, e.g. 1,52")
    p.add_argument("--block", type=int, default=None)
    p.add_argument("--zscore", action="store_true")
    p.add_argument("--adf", action="store_true")
    p.add_argument("--adf-lag", type=int, default=0)
    p.add_argument("--report", help="write the JSON report here (default stdout)")
    _add_common(p)

    p = sub.add_parser("power", help="rejection rates over a parameter grid")
    _add_generator_flags(p)
    p.add_argument("--grid", action="append", default=[], help="axis like dep_coef=0,0.5,1; repeatable")
    p.add_argument("--repeats", type=int, default=200)
    p.add_argument("--vars")
    p.add_argument("--common-seeds", action="store_true", help="reuse the same datasets in every cell")
    p.add_argument("--csv", help="write the tidy table here")
    p.add_argument("--method", choices=["shift", "permute", "auto"], default="auto")
    p.add_argument("--alpha", type=float, default=0.05)
    p.add_argument("--null-samples", type=int, default=1000)
    p.add_argument("--bandwidth", type=_bandwidth, default=MEDIAN)
    p.add_argument("--median-factor", type=float, default=DEFAULT_MEDIAN_FACTOR)
    p.add_argument("--fix-first", type=_bool, default=True)
    _add_common(p)
    return parser


def _add_generator_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--kind", choices=KINDS, required=True)
    p.add_argument("--T", type=int, default=300)
    p.add_argument("--N", type=int, default=1)
    p.add_argument("--dep-coef", type=float, default=0.0)
    p.add_argument("--ar-coef", type=float, default=None)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--set", action="append", default=[], metavar="KEY=VALUE",
                   help="kind-specific parameter, e.g. flip=0.05 or f1=7; repeatable")


def _threads(args) -> int:
    threads = args.threads
    if threads is None and os.environ.get("TSDHSIC_THREADS"):
        threads = int(os.environ["TSDHSIC_THREADS"])
    threads = threads or 1
    _core.set_threads(threads)
    return threads


def _kcfg(args) -> KernelConfig:
    return KernelConfig(bandwidth=args.bandwidth, median_factor=args.median_factor)


def _tcfg(args) -> TestConfig:
    return TestConfig(alpha=args.alpha, method=args.method, num_null=args.null_samples, seed=args.seed,
                      fix_first=args.fix_first)


def _spec(args) -> GeneratorSpec:
    return GeneratorSpec(kind=args.kind, T=args.T, N=args.N, dep_coef=args.dep_coef, ar_coef=args.ar_coef,
                         extra=_key_values(args.set), seed=args.seed)


def _kernel_echo(kcfg: KernelConfig, bandwidths) -> dict:
    return {
        "family": kcfg.family,
        "form": "exp(-||x-y||^2 / (2 sigma^2))",
        "bandwidth_rule": "median" if kcfg.is_median else "fixed",
        "median_factor": kcfg.median_factor,
        "bandwidths": None if bandwidths is None else list(bandwidths),
    }


def _load(args) -> TimeSeriesPanel:
    panel = read_panel(args.input)
    if getattr(args, "vars", None):
        panel = panel.select([v.strip() for v in args.vars.split(",") if v.strip()])
    return panel


def _emit(text: str, dest: str | None) -> None:
    if dest:
        with open(dest, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def run_test(args) -> int:
    threads = _threads(args)
    panel = _load(args)
    kcfg, cfg = _kcfg(args), _tcfg(args)
    result = joint_independence_test(panel, kcfg, cfg)
    payload = result.summary()
    payload["num_null"] = len(result.null)
    if not args.no_null:
        payload["null"] = result.null.samples
    warnings = []
    if result.small_sample:
        warnings.append(f"sample count {result.sample_count} is below 2d = {2 * panel.d}")
    config = {
        "input": args.input,
        "variables": list(panel.names),
        "mode": "single" if panel.is_single else "multi",
        "test": {**cfg.to_dict(), "resolved_method": result.method},
        "kernel": _kernel_echo(kcfg, result.bandwidths),
        "threads": threads,
    }
    _emit(dumps_envelope(make_envelope("test", config, payload, warnings)), args.out)
    return EXIT_REJECT if args.exit_on_reject and result.reject else EXIT_OK


def run_scan(args) -> int:
    threads = _threads(args)
    panel = _load(args)
    kcfg, cfg = _kcfg(args), _tcfg(args)
    graph = scan_higher_order(panel, kcfg, cfg, args.max_order, args.bonferroni)
    config = {
        "input": args.input,
        "variables": list(panel.names),
        "max_order": args.max_order or panel.d,
        "bonferroni": args.bonferroni,
        "test": {**cfg.to_dict(), "resolved_method": graph.method},
        "kernel": _kernel_echo(kcfg, graph.bandwidths),
        "threads": threads,
    }
    if args.edge_list:
        with open(args.edge_list, "w") as fh:
            fh.write(graph.edge_list())
    _emit(dumps_envelope(make_envelope("scan", config, graph.to_dict(), [CAUTION])), args.out)
    return EXIT_REJECT if args.exit_on_reject and graph.edges else EXIT_OK


def run_generate(args) -> int:
    _threads(args)
    spec = _spec(args)
    if args.raw:
        if spec.kind != "freqmix":
            raise SpecError("--raw only applies to --kind freqmix")
        sig = gen_freqmix(spec)
        panel = TimeSeriesPanel(("root1", "root2", "mixed"), (sig.root1, sig.root2, sig.mixed))
    else:
        panel = generate(spec)
    if args.out:
        write_panel(panel, args.out)
    else:
        write_panel(panel, sys.stdout)
    return EXIT_OK


def run_preprocess(args) -> int:
    _threads(args)
    panel = read_panel(args.input)
    names, arrays, adf = [], [], []
    for name, x in zip(panel.names, panel.data):
        rows = []
        for r, series in enumerate(x):
            if args.block:
                series = block_average(series, args.block)
            for period in args.diff:
                series = difference(series, period)
            if args.zscore:
                series = zscore(series)
            if args.adf:
                adf.append({"variable": name, "realization": r, **asdict(adf_test(series, args.adf_lag))})
            rows.append(series)
        names.append(name)
        arrays.append(rows)
    out = TimeSeriesPanel(tuple(names), tuple(arrays))
    if args.out:
        write_panel(out, args.out)
    config = {"input": args.input, "output": args.out, "block": args.block, "diff": args.diff,
              "zscore": args.zscore, "adf_lag": args.adf_lag if args.adf else None,
              "adf_regression": "constant, no trend"}
    payload = {"variables": list(out.names), "lengths": list(out.lengths), "adf": adf}
    warnings = [f"{a['variable']}[{a['realization']}] not stationary at 5%" for a in adf if not a["stationary"]]
    text = dumps_envelope(make_envelope("preprocess", config, payload, warnings))
    if args.report:
        with open(args.report, "w") as fh:
            fh.write(text)
    elif args.out:
        sys.stdout.write(text)
    else:
        sys.stderr.write(text)
    return EXIT_OK


def run_power(args) -> int:
    threads = _threads(args)
    spec = _spec(args)
    kcfg = _kcfg(args)
    cfg = TestConfig(alpha=args.alpha, method=args.method, num_null=args.null_samples, seed=0,
                     fix_first=args.fix_first)
    grid = expand_grid(_grid_axes(args.grid))
    variables = [v.strip() for v in args.vars.split(",")] if args.vars else None
    curve = power_sweep(spec, grid, cfg, args.repeats, args.seed, kcfg, variables, threads, args.common_seeds)
    if args.csv:
        with open(args.csv, "w", newline="") as fh:
            curve.write_csv(fh)
    config = {
        "generator": {"kind": spec.kind, "T": spec.T, "N": spec.N, "dep_coef": spec.dep_coef,
                      "ar_coef": spec.ar_coef, "extra": spec.extra},
        "grid": grid,
        "test": cfg.to_dict(),
        "kernel": _kernel_echo(kcfg, None),
        "variables": variables,
        "threads": threads,
    }
    warnings = [f"cell {c.params} failed: {c.error}" for c in curve.cells if c.error]
    _emit(dumps_envelope(make_envelope("power", config, curve.to_dict(), warnings)), args.out)
    return EXIT_OK


COMMANDS = {
    "test": run_test,
    "scan": run_scan,
    "generate": run_generate,
    "preprocess": run_preprocess,
    "power": run_power,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits with 2 on usage errors; 2 is reserved for rejections
        return EXIT_OK if exc.code in (0, None) else EXIT_ERROR
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return COMMANDS[args.command](args)
    except (TsdhsicError, KeyError, OSError) as exc:
        log.error("%s", exc)
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
