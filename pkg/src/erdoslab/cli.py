"""Command-line front door.

One subcommand per capability, CSV primary output with a JSON mirror,
and a header line on every artifact embedding the tool version, the
fully-resolved configuration, and the seed. Outputs are deterministic:
re-running with the same config and seed, at any worker count, produces
byte-identical files.

Exit codes: 0 success, 2 invalid configuration, 3 range or resource
errors.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

import numpy as np

from . import __version__, calibration
from . import census as census_mod
from . import gaps as gaps_mod
from . import model as model_mod
from . import series as series_mod
from . import singular as singular_mod
from .errors import BoundsError
from .primes import PrimeTable, build_table, cache_path, load_or_build
from .singular import OffsetTuple


def _parse_phase(text: str) -> complex:
    t = text.strip().replace("i", "j")
    z = complex(t)
    if abs(abs(z) - 1.0) > 1e-9:
        raise ValueError(f"phase {text!r} is not on the unit circle")
    return z


def _parse_int(text: str) -> int:
    # accepts 1e6-style scientific notation for convenience
    v = float(text)
    if v != int(v):
        raise ValueError(f"expected an integer, got {text!r}")
    return int(v)


def _parse_offsets(text: str) -> OffsetTuple:
    return OffsetTuple(int(s) for s in text.split(",") if s.strip() != "")


def _fmt(v) -> str:
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    if isinstance(v, (np.integer,)):
        return str(int(v))
    return str(v)


def _emit(out: str, fmt: str, cmd: str, config: dict, columns: list[str], rows: list[tuple]) -> None:
    cfg = json.dumps(config, sort_keys=True, separators=(",", ":"), default=str)
    header = f"erdoslab={__version__} cmd={cmd} config={cfg}"
    if fmt == "csv":
        lines = [f"# {header}", ",".join(columns)]
        lines += [",".join(_fmt(v) for v in row) for row in rows]
        text = "\n".join(lines) + "\n"
    else:
        doc = {
            "header": {"erdoslab": __version__, "cmd": cmd, "config": config},
            "columns": columns,
            "rows": [[(float(v) if isinstance(v, (float, np.floating)) else (int(v) if isinstance(v, (int, np.integer)) else str(v))) for v in row] for row in rows],
        }
        text = json.dumps(doc, indent=1, sort_keys=True, default=str) + "\n"
    if out == "-":
        sys.stdout.write(text)
    else:
        Path(out).write_text(text)
        print(f"wrote {out}")


def _get_table(limit: int, args) -> PrimeTable:
    if getattr(args, "no_cache", False):
        return build_table(limit)
    return load_or_build(limit, getattr(args, "cache_dir", None))


def _nth_prime_upper(n: int) -> int:
    if n < 6:
        return 14
    return int(n * (math.log(n) + math.log(math.log(n)))) + 10


def _model_table(x: float, args) -> PrimeTable:
    limit = max(1000, int(2.0 * x ** (1.0 / math.exp(np.euler_gamma))) + 100)
    for _ in range(4):
        table = _get_table(limit, args)
        try:
            model_mod.sieve_cutoff(x, table)
            return table
        except BoundsError:
            limit *= 4
    raise BoundsError(f"could not cover the sieve cutoff for x={x}")


# -- subcommand runners ---------------------------------------------------


def _run_sieve(args) -> None:
    if args.limit is None:
        raise ValueError("sieve requires --limit")
    table = build_table(args.limit)
    path = cache_path(args.limit, args.cache_dir)
    table.save(path)
    config = {"limit": args.limit, "cache_file": str(path)}
    rows = [(args.limit, table.primes.size, int(table.primes[-1]))]
    _emit(args.out, args.format, "sieve", config, ["limit", "pi", "largest_prime"], rows)


def _run_series(args) -> None:
    phase = _parse_phase(args.phase)
    dense = tuple(tuple(_parse_int(s) for s in w.split(":")) for w in args.dense)
    if args.kind == "erdos":
        limit = args.limit or _nth_prime_upper(args.nmax)
        table = _get_table(limit, args)
        trace = series_mod.erdos_partial(
            table, args.nmax, phase, dense_windows=dense, ratio=args.ratio
        )
    else:
        limit = args.limit or args.nmax
        table = _get_table(limit, args)
        trace = series_mod.parity_partial(
            table, args.nmax, phase, dense_windows=dense, ratio=args.ratio
        )
    if args.average:
        trace = series_mod.average_consecutive(trace)
    config = {
        "kind": args.kind, "nmax": args.nmax, "phase": str(phase),
        "ratio": args.ratio, "dense": [list(w) for w in dense], "average": args.average,
        "table_limit": limit,
    }
    rows = list(trace._rows())
    _emit(args.out, args.format, "series", config,
          ["index", "value_re", "value_im", "compensation"], rows)


def _run_equiv(args) -> None:
    phase = _parse_phase(args.phase)
    xs = [_parse_int(s) for s in args.x.split(",")]
    need = max(int(x * math.log(x)) for x in xs) + 10
    limit = args.limit or max(need, _nth_prime_upper(max(xs)))
    table = _get_table(limit, args)
    rep = series_mod.verify_equivalence(table, xs, phase)
    config = {"x": xs, "phase": str(phase), "table_limit": limit,
              "max_pairwise_spread_top_half": rep.max_pairwise_spread()}
    rows = [
        (int(x), l.real, l.imag, r.real, r.imag, d.real, d.imag)
        for x, l, r, d in zip(rep.x_values, rep.lhs, rep.rhs, rep.differences)
    ]
    _emit(args.out, args.format, "equiv", config,
          ["x", "lhs_re", "lhs_im", "rhs_re", "rhs_im", "diff_re", "diff_im"], rows)


def _run_singular(args) -> None:
    if args.tuple:
        tup = _parse_offsets(args.tuple)
        sv = singular_mod.singular_series(tup, args.truncation)
        config = {"tuple": list(tup.offsets), "truncation": sv.truncation_prime}
        rows = [("_".join(map(str, tup.offsets)), sv.value, sv.tail_bound, sv.admissible)]
        _emit(args.out, args.format, "singular", config,
              ["offsets", "value", "tail_bound", "admissible"], rows)
    else:
        vals = singular_mod.pair_singular_table(args.hmax, args.truncation or singular_mod.DEFAULT_TRUNCATION)
        config = {"hmax": args.hmax, "truncation": args.truncation or singular_mod.DEFAULT_TRUNCATION}
        rows = [(d, vals[d]) for d in range(1, args.hmax + 1)]
        _emit(args.out, args.format, "singular", config, ["d", "singular_value"], rows)


def _run_paircorr(args) -> None:
    hs = np.arange(args.hmin, args.hmax + 1, args.step, dtype=np.int64)
    curve = singular_mod.pair_correlation_curve(hs)
    # empirical first H from which the square bound holds through hmax
    all_h = np.arange(2, args.hmax + 1, dtype=np.int64)
    full = singular_mod.pair_correlation_curve(all_h)
    ok = full <= all_h.astype(np.float64) ** 2
    h0 = int(all_h[np.flatnonzero(~ok)[-1] + 1]) if (~ok).any() else 2
    config = {"hmin": args.hmin, "hmax": args.hmax, "step": args.step,
              "square_bound_holds_from": h0}
    rows = [
        (int(h), s, singular_mod.pair_correlation_asymptotic(int(h)), float(h) ** 2)
        for h, s in zip(hs, curve)
    ]
    _emit(args.out, args.format, "paircorr", config,
          ["H", "pair_sum", "asymptotic_prediction", "H_squared"], rows)


def _run_tuples(args) -> None:
    tups = [_parse_offsets(t) for t in args.tuple]
    x = args.x
    limit = args.limit or (x + max(t.offsets[-1] for t in tups) + 10)
    table = _get_table(limit, args)
    rows = []
    for tup in tups:
        rep = census_mod.check_tuple(table, tup, x, args.eps, args.strict)
        rows.append((
            "_".join(map(str, tup.offsets)), x, rep.count, rep.prediction,
            rep.abs_error, rep.normalized_error, rep.epsilon,
        ))
    config = {"tuples": [list(t.offsets) for t in tups], "x": x, "eps": args.eps,
              "strict": args.strict, "table_limit": limit}
    _emit(args.out, args.format, "tuples", config,
          ["tuple", "x", "count", "prediction", "abs_error", "normalized_error", "epsilon"], rows)


def _model_config(args, table) -> model_mod.ModelConfig:
    return model_mod.ModelConfig.from_scale(args.x, args.lam, table, seed=args.seed)


def _run_model(args) -> None:
    table = _model_table(args.x, args)
    cfg = _model_config(args, table)
    base = {"x": args.x, "lambda": args.lam, "window_len": cfg.window_len,
            "cutoff_z": cfg.cutoff_z, "seed": args.seed}
    if args.action == "sample":
        rows = []
        for i in range(args.samples):
            s = model_mod.draw_sample(cfg, w=args.w, table=table, sample_index=i)
            rows.append((args.seed, i, s.size, ";".join(map(str, s.survivors.tolist()))))
        config = {**base, "action": "sample", "samples": args.samples, "w": args.w or cfg.cutoff_z}
        _emit(args.out, args.format, "model", config,
              ["seed", "sample_index", "size", "survivors"], rows)
    elif args.action == "moments":
        w = args.w or cfg.cutoff_z
        rep = model_mod.moments(cfg, w, args.samples, table, workers=args.workers)
        config = {**base, "action": "moments", "w": w, "samples": args.samples}
        rows = [(rep.w, rep.sample_count, rep.mean, rep.variance,
                 rep.predicted_mean, rep.predicted_variance_bound, rep.in_lemma_range)]
        _emit(args.out, args.format, "model", config,
              ["w", "samples", "mean", "variance", "predicted_mean",
               "predicted_variance_bound", "in_lemma_range"], rows)
    else:  # bias
        est = model_mod.parity_bias(cfg, args.samples, table, workers=args.workers)
        se = model_mod.parity_bias_stderr(est, args.samples)
        config = {**base, "action": "bias", "samples": args.samples}
        rows = [(args.lam, est, se, math.exp(-2.0 * args.lam))]
        _emit(args.out, args.format, "model", config,
              ["lambda", "estimate", "stderr", "exp_minus_2lambda"], rows)


def _run_bias(args) -> None:
    lams = [float(s) for s in args.lambdas.split(",")]
    table = _model_table(args.x, args)
    rows = []
    for lam in lams:
        cfg = model_mod.ModelConfig.from_scale(args.x, lam, table, seed=args.seed)
        est = model_mod.parity_bias(cfg, args.samples, table, workers=args.workers)
        se = model_mod.parity_bias_stderr(est, args.samples)
        rows.append((lam, est, se, math.exp(-2.0 * lam)))
    config = {"x": args.x, "lambdas": lams, "samples": args.samples, "seed": args.seed}
    _emit(args.out, args.format, "bias", config,
          ["lambda", "estimate", "stderr", "exp_minus_2lambda"], rows)


def _run_gaps(args) -> None:
    if args.action == "series":
        limit = args.limit or _nth_prime_upper(args.nmax + 1)
        table = _get_table(limit, args)
        cfg = gaps_mod.GapSeriesConfig(kind=args.kind, c=args.c, theta=args.theta)
        trace = gaps_mod.gap_series_partial(table, cfg, args.nmax)
        config = {"action": "series", "kind": args.kind, "c": args.c,
                  "theta": args.theta, "nmax": args.nmax, "table_limit": limit}
        _emit(args.out, args.format, "gaps", config,
              ["index", "value_re", "value_im", "compensation"], list(trace._rows()))
    elif args.action == "smallgap":
        limit = args.limit or (2 * args.X + 1000)
        table = _get_table(limit, args)
        lams = [float(s) for s in args.lambdas.split(",")]
        rows = []
        for lam in lams:
            rep = gaps_mod.small_gap_count(table, args.X, lam)
            rows.append((rep.X, rep.lam, rep.count, rep.gallagher_main,
                         rep.density_ratio, rep.in_lambda_range))
        config = {"action": "smallgap", "X": args.X, "lambdas": lams, "table_limit": limit}
        _emit(args.out, args.format, "gaps", config,
              ["X", "lambda", "count", "gallagher_main", "density_ratio",
               "in_lambda_range"], rows)
    else:  # blocks
        limit = args.limit or 10**6
        table = _get_table(limit, args)
        stats = gaps_mod.dyadic_gap_stats(table)
        config = {"action": "blocks", "table_limit": limit}
        rows = [(s.n_lo, s.n_hi, s.min_gap, s.max_gap, s.has_gap_two) for s in stats]
        _emit(args.out, args.format, "gaps", config,
              ["n_lo", "n_hi", "min_gap", "max_gap", "has_gap_two"], rows)


def _run_parity(args) -> None:
    window = int(args.lam * math.log(args.x))
    limit = args.limit or (args.x + int(args.x**0.9) + window + 10)
    table = _get_table(limit, args)
    rep = gaps_mod.empirical_parity_statistic(table, args.x, args.lam, args.points, args.seed)
    config = {"x": args.x, "lambda": args.lam, "points": args.points,
              "seed": args.seed, "table_limit": limit}
    rows = [(rep.x, rep.lam, rep.window, rep.base_points, rep.estimate, rep.stderr,
             math.exp(-2.0 * args.lam))]
    _emit(args.out, args.format, "parity", config,
          ["x", "lambda", "window", "base_points", "estimate", "stderr",
           "exp_minus_2lambda"], rows)


def _run_calibrate(args) -> None:
    try:
        fixture = calibration.load_fixture(args.fixture)
    except FileNotFoundError:
        fixture = {}
    if args.suite in ("model", "all"):
        table = _model_table(1e6, args)
        fixture["model"] = calibration.calibrate_model(table, args.samples, args.seed)
    if args.suite in ("series", "all"):
        table = _get_table(181_000_000, args)
        fixture["series"] = calibration.calibrate_series(table)
    if args.suite in ("gaps", "all"):
        table = _get_table(181_000_000, args)
        fixture["gaps"] = calibration.calibrate_gaps(table, args.samples, args.seed)
    path = calibration.save_fixture(fixture, args.fixture)
    print(f"wrote {path}")


# -- parser ----------------------------------------------------------------


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--out", default=None, help="output path, '-' for stdout")
    p.add_argument("--cache-dir", default=None, help="prime cache directory (or ERDOS_CACHE_DIR)")
    p.add_argument("--no-cache", action="store_true", help="always sieve, never touch the cache")
    p.add_argument("--limit", type=_parse_int, default=None, help="explicit prime-table limit")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="erdoslab", description=__doc__)
    ap.add_argument("--version", action="version", version=f"erdoslab {__version__}")
    sub = ap.add_subparsers(dest="cmd", required=True)

    p = sub.add_parser("sieve", help="build a prime table and write its cache file")
    _add_common(p)
    p.set_defaults(run=_run_sieve)

    p = sub.add_parser("series", help="partial-sum trace of a prime series")
    _add_common(p)
    p.add_argument("--kind", choices=("erdos", "parity"), default="erdos")
    p.add_argument("--nmax", type=_parse_int, required=True)
    p.add_argument("--phase", default="-1")
    p.add_argument("--ratio", type=float, default=1.25)
    p.add_argument("--dense", action="append", default=[], metavar="LO:HI")
    p.add_argument("--average", action="store_true", help="emit pairwise-averaged trace")
    p.set_defaults(run=_run_series)

    p = sub.add_parser("equiv", help="compare the two series at matched scales")
    _add_common(p)
    p.add_argument("--x", required=True, help="comma-separated x values")
    p.add_argument("--phase", default="-1")
    p.set_defaults(run=_run_equiv)

    p = sub.add_parser("singular", help="singular-series values")
    _add_common(p)
    p.add_argument("--tuple", default=None, help="comma-separated offsets")
    p.add_argument("--hmax", type=_parse_int, default=100)
    p.add_argument("--truncation", type=_parse_int, default=None)
    p.set_defaults(run=_run_singular)

    p = sub.add_parser("paircorr", help="pair-correlation sums vs the asymptotic")
    _add_common(p)
    p.add_argument("--hmin", type=_parse_int, default=50)
    p.add_argument("--hmax", type=_parse_int, default=5000)
    p.add_argument("--step", type=_parse_int, default=1)
    p.set_defaults(run=_run_paircorr)

    p = sub.add_parser("tuples", help="exact tuple counts vs predictions")
    _add_common(p)
    p.add_argument("--tuple", action="append", required=True, help="comma-separated offsets")
    p.add_argument("--x", type=_parse_int, required=True)
    p.add_argument("--eps", type=float, default=0.05)
    p.add_argument("--strict", action="store_true")
    p.set_defaults(run=_run_tuples)

    p = sub.add_parser("model", help="random sifted-set model")
    _add_common(p)
    p.add_argument("action", choices=("sample", "moments", "bias"))
    p.add_argument("--x", type=float, required=True)
    p.add_argument("--lambda", dest="lam", type=float, default=1.0)
    p.add_argument("--w", type=_parse_int, default=None)
    p.add_argument("--samples", type=_parse_int, default=10_000)
    p.add_argument("--seed", type=_parse_int, default=0)
    p.add_argument("--workers", type=_parse_int, default=1)
    p.set_defaults(run=_run_model)

    p = sub.add_parser("bias", help="model parity-bias curve over lambda")
    _add_common(p)
    p.add_argument("--x", type=float, required=True)
    p.add_argument("--lambdas", default="1,2,4")
    p.add_argument("--samples", type=_parse_int, default=100_000)
    p.add_argument("--seed", type=_parse_int, default=0)
    p.add_argument("--workers", type=_parse_int, default=1)
    p.set_defaults(run=_run_bias)

    p = sub.add_parser("gaps", help="gap series, small-gap counts, dyadic blocks")
    _add_common(p)
    p.add_argument("action", choices=("series", "smallgap", "blocks"))
    p.add_argument("--kind", choices=gaps_mod.KINDS, default="alternating_gap")
    p.add_argument("--c", type=float, default=3.0)
    p.add_argument("--theta", type=float, default=1.0)
    p.add_argument("--nmax", type=_parse_int, default=10_000)
    p.add_argument("--X", type=_parse_int, default=100_000)
    p.add_argument("--lambdas", default="0.5")
    p.set_defaults(run=_run_gaps)

    p = sub.add_parser("parity", help="parity statistic over real primes")
    _add_common(p)
    p.add_argument("--x", type=_parse_int, required=True)
    p.add_argument("--lambda", dest="lam", type=float, default=1.0)
    p.add_argument("--points", type=_parse_int, default=100_000)
    p.add_argument("--seed", type=_parse_int, default=0)
    p.set_defaults(run=_run_parity)

    p = sub.add_parser("calibrate", help="run oracle calibrations and write the fixture")
    _add_common(p)
    p.add_argument("--suite", choices=("model", "series", "gaps", "all"), required=True)
    p.add_argument("--samples", type=_parse_int, default=100_000)
    p.add_argument("--seed", type=_parse_int, default=20260808)
    p.add_argument("--fixture", default=None, help="fixture path override")
    p.set_defaults(run=_run_calibrate)

    return ap


def main(argv: list[str] | None = None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    if getattr(args, "out", None) is None and hasattr(args, "format"):
        args.out = f"erdoslab-{args.cmd}.{args.format}"
    try:
        args.run(args)
    except (BoundsError, MemoryError, FileNotFoundError) as exc:
        print(f"error: range: {exc}", file=sys.stderr)
        return 3
    except ValueError as exc:
        print(f"error: invalid: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
