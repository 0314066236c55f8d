"""Command-line front end.

Exit codes: 0 success, 1 usage or configuration error, 2 data error,
3 internal invariant violation.
"""

from __future__ import annotations

import argparse
import csv
import logging
import math
import os
import sys
import warnings
from collections import Counter
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import List, Optional, Sequence

import numpy as np

from . import __version__
from .calibration import DEFAULT_M_RANGE, calibrate, default_m_range
from .correlation import DEFAULT_SEGMENT_LENGTH, align_on_dates, correlate_segments
from .errors import BicepError, DataFileError, InvalidInputError, InvariantViolation
from .measures import BicepPoint, bicep_point, rank_by_inefficiency, RECORD_FIELDS
from .randomness import DEFAULT_THRESHOLD, MIN_LENGTH, randomness_battery
from .report import (RANKING_FIELDS, barcode_text, point_rows, ranking_rows,
                     ranking_table, atomic_write_text, write_csv, write_json)
from .seeding import substream
from .sequence import (BinarySequence, SparseStatisticsWarning, binarize,
                       block_distribution, check_block_size, distribution_support_ratio,
                       read_price_csv, warn_if_sparse)
from .surrogate import ENVELOPES, RbfParams, rbf_generate, shuffle_surrogates

log = logging.getLogger("bicep")

EXIT_OK, EXIT_USAGE, EXIT_DATA, EXIT_INVARIANT = 0, 1, 2, 3
FORMATS = ("csv", "json")
SEED_ENV = "BICEP_SEED"


class UsageError(BicepError):
    pass


class DataLoadError(BicepError):
    """One or more input files failed to parse."""

    def __init__(self, errors):
        self.errors = errors
        super().__init__("\n".join(str(e) for e in errors))


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


@dataclass
class RunConfig:
    inputs: List[str] = field(default_factory=list)
    m: int = 8
    surrogates: int = 1000
    seed: int = 0
    threshold: float = DEFAULT_THRESHOLD
    out: str = "bicep_out"
    formats: List[str] = field(default_factory=lambda: list(FORMATS))
    envelope: str = "minmax"
    alpha: float = 0.05
    plots: bool = True

    def validate(self):
        if self.m < 1:
            raise UsageError(f"--m must be >= 1, got {self.m}")
        if self.surrogates < 2:
            raise UsageError(f"--surrogates must be >= 2, got {self.surrogates}")
        if not 0 < self.threshold < 1:
            raise UsageError(f"--threshold must lie in (0, 1), got {self.threshold}")
        if not 0 < self.alpha < 1:
            raise UsageError(f"--alpha must lie in (0, 1), got {self.alpha}")


def _parse_range(text: str, kind=int, parts=2):
    pieces = text.split(":")
    if len(pieces) != parts:
        raise UsageError(f"expected {parts} ':'-separated values, got {text!r}")
    try:
        return tuple(kind(p) for p in pieces)
    except ValueError as exc:
        raise UsageError(f"cannot parse {text!r}: {exc}") from None


def parse_r_grid(text: str) -> List[float]:
    lo, hi, step = _parse_range(text, float, 3)
    if step <= 0 or hi < lo:
        raise InvalidInputError(f"invalid r grid {text!r}")
    count = int(math.floor((hi - lo) / step + 1e-9)) + 1
    grid = [round(lo + k * step, 12) for k in range(count)]
    if grid[0] < 0 or grid[-1] > 0.5:
        raise InvalidInputError(f"r grid {text!r} leaves [0, 0.5]")
    return grid


def resolve_seed(arg: Optional[int]) -> int:
    if arg is not None:
        return arg
    env = os.environ.get(SEED_ENV)
    if env is None or env.strip() == "":
        return 0
    try:
        return int(env)
    except ValueError:
        raise UsageError(f"{SEED_ENV} must be an integer, got {env!r}") from None


def collect_csv_paths(inputs: Sequence[str]) -> List[Path]:
    paths = []
    for item in inputs:
        p = Path(item)
        if p.is_dir():
            paths.extend(sorted(p.glob("*.csv")))
        elif p.exists():
            paths.append(p)
        else:
            raise DataFileError(p, [(None, "no such file or directory")])
    if not paths:
        raise DataFileError(", ".join(inputs) or "<none>", [(None, "no input CSV files found")])
    seen = Counter(p.stem for p in paths)
    dupes = sorted(s for s, n in seen.items() if n > 1)
    if dupes:
        raise DataFileError(", ".join(inputs), [(None, f"duplicate tickers: {', '.join(dupes)}")])
    return paths


def load_sequences(inputs: Sequence[str]) -> List[BinarySequence]:
    """Read and binarize every input; all file errors are reported together."""
    errors = []
    sequences = []
    for path in collect_csv_paths(inputs):
        try:
            sequences.append(binarize(read_price_csv(path)))
        except DataFileError as exc:
            errors.append(exc)
    if errors:
        raise DataLoadError(errors)
    return sequences


def read_table(path) -> List[BicepPoint]:
    """Read a ``symbol,entropy,complexity`` table (``E``/``C`` also accepted)."""
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as exc:
        raise DataFileError(path, [(None, f"cannot read file: {exc}")]) from exc
    rows = list(csv.reader(text.splitlines()))
    if not rows:
        raise DataFileError(path, [(None, "file is empty")])
    header = [h.strip().lower() for h in rows[0]]
    aliases = {"e": "entropy", "c": "complexity", "h": "entropy"}
    header = [aliases.get(h, h) for h in header]
    missing = {"symbol", "entropy", "complexity"} - set(header)
    if missing:
        raise DataFileError(path, [(1, f"missing columns: {', '.join(sorted(missing))}")])
    col = {name: header.index(name) for name in ("symbol", "entropy", "complexity")}
    points, problems = [], []
    for lineno, row in enumerate(rows[1:], start=2):
        if not row or all(not c.strip() for c in row):
            continue
        try:
            sym = row[col["symbol"]].strip()
            E = float(row[col["entropy"]])
            C = float(row[col["complexity"]])
            points.append(BicepPoint.from_coordinates(sym, E, C))
        except (IndexError, ValueError) as exc:
            problems.append((lineno, str(exc)))
    if problems:
        raise DataFileError(path, problems)
    if not points:
        raise DataFileError(path, [(None, "no rows")])
    return points


def _check_points(points, ranked):
    for pt in points:
        recomputed = math.hypot(pt.C, pt.E - 1.0)
        if abs(recomputed - pt.I) > 1e-12 or not (0 <= pt.E <= 1 and 0 <= pt.C <= 1):
            raise InvariantViolation(f"{pt.symbol}: inconsistent plane coordinates")
    if sorted(p.symbol for p in ranked) != sorted(p.symbol for p in points):
        raise InvariantViolation("ranking is not a permutation of the analyzed series")


def _write_points(out: Path, points, formats):
    if "csv" in formats:
        write_csv(out / "bicep.csv", RECORD_FIELDS, point_rows(points))
    if "json" in formats:
        write_json(out / "bicep.json", [p.as_record() for p in points])


def cmd_analyze(config: RunConfig, from_table: Optional[str] = None) -> int:
    """Place every series on the plane, rank, and test against shuffles."""
    config.validate()
    out = Path(config.out)
    meta = {"command": "analyze", "version": __version__, "seed": config.seed,
            "config": asdict(config)}

    if from_table is not None:
        meta["config"]["from_table"] = str(from_table)
        points = read_table(from_table)
        ranked = rank_by_inefficiency(points)
        _check_points(points, ranked)
        write_csv(out / "ranking.csv", RANKING_FIELDS, ranking_rows(ranked))
        if config.plots:
            from .plotting import plot_inefficiency_bars, plot_plane
            plot_plane(ranked, out / "bicep_plane.png")
            plot_inefficiency_bars(ranked, out / "inefficiency.png")
        write_json(out / "run.json", meta)
        print(ranking_table(ranked))
        return EXIT_OK

    sequences = load_sequences(config.inputs)
    for seq in sequences:
        try:
            check_block_size(seq.length, config.m)
        except InvalidInputError as exc:
            raise DataFileError(seq.symbol, [(None, str(exc))]) from None

    points, verdicts = [], []
    for seq in sequences:
        dist = block_distribution(seq, config.m)
        sparse = warn_if_sparse(dist, seq.symbol)
        pt = bicep_point(dist, seq.symbol)
        points.append(pt)
        verdict = shuffle_surrogates(
            seq, config.m, config.surrogates, substream(config.seed, "surrogates", seq.symbol),
            envelope=config.envelope, alpha=config.alpha)
        if seq.length >= max(MIN_LENGTH.values()):
            battery = randomness_battery(seq, config.threshold).to_dict()
            skipped = None
        else:
            battery = None
            skipped = f"series has {seq.length} bits; the battery needs {max(MIN_LENGTH.values())}"
        verdicts.append({
            "symbol": seq.symbol,
            "length": seq.length,
            "support_ratio": distribution_support_ratio(dist),
            "sparse": sparse,
            "surrogate": verdict.to_dict(),
            "randomness": battery,
            "randomness_skipped": skipped,
        })

    ranked = rank_by_inefficiency(points)
    _check_points(points, ranked)

    lengths = Counter(s.length for s in sequences)
    ref_len = max(lengths.items(), key=lambda kv: (kv[1], kv[0]))[0]
    rng = np.random.default_rng(substream(config.seed, "reference"))
    ref_bits = BinarySequence("RANDOM", rng.integers(0, 2, ref_len, dtype=np.uint8))
    ref = bicep_point(block_distribution(ref_bits, min(config.m, ref_len)), "RANDOM")
    meta["reference_random"] = {"length": ref_len, "entropy": ref.E, "complexity": ref.C,
                                "note": "length is the most common series length"}
    meta["series"] = [{"symbol": s.symbol, "length": s.length} for s in sequences]
    if len(lengths) > 1:
        meta["warning"] = "series lengths differ"

    _write_points(out, points, config.formats)
    write_csv(out / "ranking.csv", RANKING_FIELDS, ranking_rows(ranked))
    write_json(out / "verdicts.json", verdicts)
    if config.plots:
        from .plotting import plot_inefficiency_bars, plot_plane
        means = [(v["surrogate"]["E_mean"], v["surrogate"]["C_mean"]) for v in verdicts]
        plot_plane(points, out / "bicep_plane.png", surrogate_means=means,
                   reference=(ref.E, ref.C))
        plot_inefficiency_bars(ranked, out / "inefficiency.png")
    write_json(out / "run.json", meta)

    print(ranking_table(ranked))
    flagged = [v["symbol"] for v in verdicts if v["surrogate"]["inefficient"]]
    print(f"inefficient (failed both shuffle tests): {', '.join(flagged) or 'none'}")
    return EXIT_OK


def cmd_barcode(config: RunConfig) -> int:
    sequences = load_sequences(config.inputs)
    if len({s.length for s in sequences}) > 1:
        log.warning("series have different lengths; rows are emitted as-is")
    out = Path(config.out)
    atomic_write_text(out / "barcode.txt", barcode_text(sequences))
    if config.plots:
        from .plotting import plot_barcode
        plot_barcode(sequences, out / "barcode.png")
    return EXIT_OK


def cmd_calibrate(config: RunConfig, m_range=None) -> int:
    sequences = load_sequences(config.inputs)
    if len(sequences) < 2:
        raise InvalidInputError("calibration needs at least 2 input series")
    if m_range is None:
        m_values = default_m_range(sequences, DEFAULT_M_RANGE)
    else:
        m_values = range(m_range[0], m_range[1] + 1)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", SparseStatisticsWarning)
        curve = calibrate(sequences, m_values)
    out = Path(config.out)
    write_csv(out / "calibration.csv", ("m", "std", "amplitude"), curve.rows())
    if config.plots:
        from .plotting import plot_calibration
        plot_calibration(curve, out / "calibration.png")
    write_json(out / "run.json", {
        "command": "calibrate", "version": __version__, "config": asdict(config),
        "m_values": list(curve.m_values), "std_convention": "population (divide by n)",
        "sparse_m": list(curve.sparse_m),
        "m_star_std": curve.m_star_std, "m_star_amp": curve.m_star_amp,
    })
    for m in curve.sparse_m:
        log.warning("m=%d: fewer than 4 blocks per pattern for some series", m)
    print(f"m_star_std={curve.m_star_std}")
    print(f"m_star_amp={curve.m_star_amp}")
    return EXIT_OK


def rbf_sweep(r_grid, L, m, realizations, seed):
    """Average ``(E, D, C)`` over ``realizations`` RBF sequences per flip fraction."""
    check_block_size(L, m)
    rows = []
    for i, r in enumerate(r_grid):
        acc = np.zeros(3)
        for k in range(realizations):
            params = RbfParams(L=L, r=r, seed=substream(seed, "rbf", i, k))
            pt = bicep_point(block_distribution(rbf_generate(params), m))
            acc += (pt.E, pt.D, pt.C)
        rows.append((float(r),) + tuple(float(v) for v in acc / realizations))
    return rows


def cmd_rbf(config: RunConfig, r_grid, length, realizations) -> int:
    if realizations < 1:
        raise UsageError(f"--realizations must be >= 1, got {realizations}")
    rows = rbf_sweep(r_grid, length, config.m, realizations, config.seed)
    out = Path(config.out)
    write_csv(out / "rbf.csv", ("r", "E", "D", "C"), rows)
    if config.plots:
        from .plotting import plot_rbf
        plot_rbf(rows, out / "rbf.png")
    write_json(out / "run.json", {
        "command": "rbf", "version": __version__, "config": asdict(config),
        "length": length, "realizations": realizations, "r_grid": list(r_grid),
    })
    return EXIT_OK


def cmd_correlate(config: RunConfig, segment_length=DEFAULT_SEGMENT_LENGTH) -> int:
    paths = collect_csv_paths(config.inputs)
    if len(paths) != 2:
        raise UsageError(f"correlate needs exactly 2 input files, got {len(paths)}")
    errors, series = [], []
    for p in paths:
        try:
            series.append(read_price_csv(p))
        except DataFileError as exc:
            errors.append(exc)
    if errors:
        raise DataLoadError(errors)
    a, b, dropped_a, dropped_b = align_on_dates(*series)
    result = correlate_segments(binarize(a), binarize(b), segment_length)
    out = Path(config.out)
    rows = [(s, e, *t) for (s, e), t in zip(result.segment_bounds, result.per_segment)]
    write_csv(out / "correlation.csv",
              ("segment_start", "segment_end", "pearson", "kendall", "spearman"), rows)
    # Bit t compares closes t and t+1, so segment [s, e) spans dates s..e.
    dates = [(a.timestamps[s].isoformat(), a.timestamps[e].isoformat())
             for s, e in result.segment_bounds]
    write_json(out / "correlation.json", {
        "command": "correlate", "version": __version__, "config": asdict(config),
        "pair": list(result.pair), "segment_length": segment_length,
        "aligned_dates": len(a), "dropped": {a.symbol: dropped_a, b.symbol: dropped_b},
        "segment_dates": dates,
    })
    if config.plots and result.per_segment:
        from .plotting import plot_correlation
        plot_correlation(result, out / "correlation.png")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="bicep", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p, inputs_required=True):
        p.add_argument("--input", action="append", default=[], required=inputs_required,
                       help="CSV file or directory of <TICKER>.csv files (repeatable)")
        p.add_argument("--out", default="bicep_out", help="output directory")
        p.add_argument("--seed", type=int, default=None,
                       help=f"master seed (falls back to ${SEED_ENV}, then 0)")
        p.add_argument("--no-plots", dest="plots", action="store_false",
                       help="skip PNG figures")
        p.add_argument("-v", "--verbose", action="store_true")

    p = sub.add_parser("analyze", help="plane coordinates, ranking and significance tests")
    common(p, inputs_required=False)
    p.add_argument("--m", type=int, default=8)
    p.add_argument("--surrogates", type=int, default=1000)
    p.add_argument("--threshold", type=float, default=DEFAULT_THRESHOLD)
    p.add_argument("--format", dest="formats", action="append", choices=FORMATS)
    p.add_argument("--from-table", default=None,
                   help="CSV of published symbol,entropy,complexity values")
    p.add_argument("--envelope", choices=ENVELOPES, default="minmax")
    p.add_argument("--alpha", type=float, default=0.05,
                   help="two-sided level for --envelope percentile")

    p = sub.add_parser("barcode", help="bit strings of every series")
    common(p)

    p = sub.add_parser("calibrate", help="sweep block sizes")
    common(p)
    p.add_argument("--m-range", default=None, help="lo:hi (default 2:10, capped)")

    p = sub.add_parser("rbf", help="random-bit-flip characterization curves")
    common(p, inputs_required=False)
    p.add_argument("--m", type=int, default=8)
    p.add_argument("--r-grid", default="0:0.5:0.05", help="lo:hi:step")
    p.add_argument("--realizations", type=int, default=50)
    p.add_argument("--length", type=int, default=10000, help="sequence length L")

    p = sub.add_parser("correlate", help="segmented up/down correlations of two series")
    common(p)
    p.add_argument("--segment-length", type=int, default=DEFAULT_SEGMENT_LENGTH)
    return parser


def _config(args) -> RunConfig:
    cfg = RunConfig(inputs=list(args.input), out=args.out, seed=resolve_seed(args.seed),
                    plots=args.plots)
    for name in ("m", "surrogates", "threshold", "envelope", "alpha"):
        if hasattr(args, name):
            setattr(cfg, name, getattr(args, name))
    if getattr(args, "formats", None):
        cfg.formats = sorted(set(args.formats), key=FORMATS.index)
    cfg.validate()
    return cfg


def run(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s: %(message)s")
    logging.captureWarnings(True)
    try:
        config = _config(args)
        if args.command == "analyze":
            if args.from_table is None and not config.inputs:
                raise UsageError("analyze needs --input or --from-table")
            return cmd_analyze(config, from_table=args.from_table)
        if args.command == "barcode":
            return cmd_barcode(config)
        if args.command == "calibrate":
            m_range = _parse_range(args.m_range) if args.m_range else None
            return cmd_calibrate(config, m_range)
        if args.command == "rbf":
            try:
                grid = parse_r_grid(args.r_grid)
            except InvalidInputError as exc:
                raise UsageError(str(exc)) from None
            return cmd_rbf(config, grid, args.length, args.realizations)
        if args.command == "correlate":
            return cmd_correlate(config, args.segment_length)
    except UsageError as exc:
        print(f"bicep: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except InvariantViolation as exc:
        print(f"bicep: internal error: {exc}", file=sys.stderr)
        return EXIT_INVARIANT
    except (DataFileError, DataLoadError, InvalidInputError) as exc:
        print(f"bicep: data error:\n{exc}", file=sys.stderr)
        return EXIT_DATA
    raise AssertionError(f"unhandled command {args.command!r}")


def main(argv=None):
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
