"""Command-line front end.

Exit status: 0 on success, 1 on a data error, 2 on a usage error.
Input defaults to stdin and output to stdout, so subcommands chain::

    gaussianize synth --subjects 193 --sessions 1 --marginal lognormal:0,1 --seed 7 \\
        | gaussianize transform --method rank-normal \\
        | gaussianize test-normality --test both
"""
import argparse
import csv
import io
import json
import math
import sys

import numpy as np

from . import __version__
from .classic import BoxCoxGrid, BoxCoxParams, boxcox, fit_boxcox, log_transform, logit_transform
from .dataset import format_value, read_long_csv, write_long_csv
from .distributions import analytic_gaussianize, parse_distribution
from .errors import DataFormatError, GaussianizeError
from .normality import KS_DEFAULT_REPLICATES, KS_DEFAULT_SEED, anderson_darling, ks_normality, moments
from .rank import apply_spec, format_specs, gaussianize, parse_specs
from .reliability import TRANSFORMS, reliability_study
from .rosenblatt import BivariateNormalParams, forward, inverse
from .synth import SynthConfig, generate


class UsageError(Exception):
    pass


# ---------------------------------------------------------------------------
# io helpers
# ---------------------------------------------------------------------------

def _read_text(path):
    if path == "-":
        return sys.stdin.read()
    try:
        with open(path, newline="") as fh:
            return fh.read()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None


def _write_text(path, text):
    if path == "-":
        sys.stdout.write(text)
        sys.stdout.flush()
    else:
        with open(path, "w", newline="") as fh:
            fh.write(text)


def _read_plain(text):
    values = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        try:
            v = float(line)
        except ValueError:
            raise DataFormatError(f"{line!r} is not a number", lineno) from None
        if not math.isfinite(v):
            raise DataFormatError(f"{line!r} is not finite", lineno)
        values.append(v)
    if not values:
        raise DataFormatError("no values in input")
    return np.array(values)


def _line_of(data, measure, index):
    # data rows start on line 2; records keep file order
    rows = [i for i, rec in enumerate(data) if rec[2] == measure]
    return rows[index] + 2


def _clean(obj):
    if isinstance(obj, float):
        return obj if math.isfinite(obj) else None
    if isinstance(obj, dict):
        return {k: _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, np.floating):
        return _clean(float(obj))
    if isinstance(obj, np.integer):
        return int(obj)
    return obj


def _dump_json(obj):
    return json.dumps(_clean(obj), indent=2) + "\n"


def _measures(data, wanted):
    available = data.measures()
    if not wanted:
        return available
    missing = [m for m in wanted if m not in available]
    if missing:
        raise UsageError(f"unknown measure(s): {', '.join(missing)}; available: {', '.join(available)}")
    return sorted(wanted)


def _two_sig(p):
    return format(float(f"{p:.2g}"), "g")


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def _transform_values(args, values, spec=None):
    """Returns (transformed, fitted rank spec or None, clamp count)."""
    method = args.method
    if method == "rank-normal":
        if spec is not None:
            out, clamped = apply_spec(spec, values)
            return out, None, clamped
        out, fitted = gaussianize(values, args.mu, args.sigma)
        return out, fitted, 0
    if method == "log":
        return log_transform(values), None, 0
    if method == "logit":
        return logit_transform(values), None, 0
    if method == "boxcox":
        if args.lambda1 is None:
            params = fit_boxcox(values).params
        else:
            params = BoxCoxParams(args.lambda1, args.lambda2)
        return boxcox(values, params), None, 0
    if method == "analytic":
        if not args.dist:
            raise UsageError("--method analytic needs --dist NAME:P1,P2")
        try:
            dist = parse_distribution(args.dist)
        except GaussianizeError as exc:
            raise UsageError(str(exc)) from None
        return args.mu + args.sigma * np.asarray(analytic_gaussianize(values, dist)), None, 0
    raise UsageError(f"unknown method {method!r}")


def cmd_transform(args):
    if args.spec_in and args.method != "rank-normal":
        raise UsageError("--spec-in applies only to --method rank-normal")
    if args.spec_out and args.method != "rank-normal":
        raise UsageError("--spec-out applies only to --method rank-normal")
    if not args.sigma > 0:
        raise UsageError("--sigma must be positive")
    specs_in = parse_specs(_read_text(args.spec_in)) if args.spec_in else None
    text = _read_text(args.input)

    if args.plain:
        values = _read_plain(text)
        spec = None
        if specs_in is not None:
            spec = specs_in.get(None) or (next(iter(specs_in.values())) if len(specs_in) == 1 else None)
            if spec is None:
                raise UsageError("spec file holds several measures; plain input needs exactly one table")
        try:
            out, fitted, clamped = _transform_values(args, values, spec)
        except GaussianizeError as exc:
            _reraise_with_plain_line(exc, text)
        _write_text(args.output, "".join(format_value(v) + "\n" for v in out))
        if fitted is not None and args.spec_out:
            _write_text(args.spec_out, fitted.to_text())
        if specs_in is not None:
            print(f"clamped: {clamped}", file=sys.stderr)
        return 0

    data = read_long_csv(io.StringIO(text))
    fitted_specs, clamps = {}, {}
    targets = _measures(data, args.measure)
    for m in targets:
        spec = None
        if specs_in is not None:
            spec = specs_in.get(m) or specs_in.get(None)
            if spec is None:
                raise UsageError(f"spec file has no table for measure {m!r}")
        holder = {}

        def fn(v, m=m, spec=spec, holder=holder):
            try:
                out, fitted, clamped = _transform_values(args, v, spec)
            except GaussianizeError as exc:
                raise _with_csv_line(exc, data, m) from None
            holder["fitted"], holder["clamped"] = fitted, clamped
            return out

        data = data.replace_values(m, fn)
        if holder.get("fitted") is not None:
            fitted_specs[m] = holder["fitted"]
        clamps[m] = holder.get("clamped", 0)
    _write_text(args.output, write_long_csv(data))
    if args.spec_out:
        _write_text(args.spec_out, format_specs(fitted_specs))
    if specs_in is not None:
        for m in targets:
            print(f"clamped {m}: {clamps[m]}", file=sys.stderr)
    return 0


def _offending_index(exc):
    msg = str(exc)
    marker = "index "
    if marker in msg:
        tail = msg.split(marker, 1)[1]
        digits = "".join(c for c in tail[: len(tail) - len(tail.lstrip("0123456789"))])
        if digits:
            return int(digits)
    return None


def _with_csv_line(exc, data, measure):
    i = _offending_index(exc)
    if i is None:
        return DataFormatError(f"measure {measure!r}: {exc}")
    return DataFormatError(f"measure {measure!r}: {exc}", _line_of(data, measure, i))


def _reraise_with_plain_line(exc, text):
    i = _offending_index(exc)
    if i is None:
        raise exc
    seen = -1
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if line and not line.startswith("#"):
            seen += 1
            if seen == i:
                raise DataFormatError(str(exc), lineno) from None
    raise exc


def cmd_test_normality(args):
    data = read_long_csv(io.StringIO(_read_text(args.input)))
    methods = {"ad": ["ad"], "ks": ["ks"], "both": ["ad", "ks"]}[args.test]
    results = []
    for m in _measures(data, args.measure):
        groups = [(None, data.pooled(m))]
        if args.by_session:
            groups = [
                (s, np.array(list(data.session_values(m, s).values()))) for s in data.sessions(m)
            ]
        for session, values in groups:
            mom = moments(values)
            for meth in methods:
                if meth == "ad":
                    rep = anderson_darling(values)
                else:
                    rep = ks_normality(values, args.replicates, args.seed)
                entry = {"measure": m}
                if session is not None:
                    entry["session"] = session
                entry.update(rep.to_dict())
                entry["moments"] = mom._asdict()
                results.append(entry)
    if args.format == "text":
        lines = [f"{'measure':<20} {'session':>7} {'test':<20} {'statistic':>12} {'p':>8} {'n':>6}"]
        for r in results:
            sess = "" if "session" not in r else str(r["session"])
            lines.append(
                f"{r['measure']:<20} {sess:>7} {r['method']:<20} {r['statistic']:>12.5g} "
                f"{_two_sig(r['p']):>8} {r['n']:>6}"
            )
        _write_text(args.output, "\n".join(lines) + "\n")
    else:
        _write_text(args.output, _dump_json({"tests": results}))
    return 0


def _parse_l1_grid(text):
    try:
        lo, step, hi = (float(v) for v in text.split(":"))
    except ValueError:
        raise UsageError(f"--grid-l1 must be min:step:max, got {text!r}") from None
    if not step > 0 or hi < lo:
        raise UsageError("--grid-l1 needs step > 0 and max >= min")
    count = int(math.floor((hi - lo) / step + 1e-9)) + 1
    return tuple(np.round(lo + step * np.arange(count), 12).tolist())


def cmd_fit_boxcox(args):
    data = read_long_csv(io.StringIO(_read_text(args.input)))
    if args.grid_l2 < 1:
        raise UsageError("--grid-l2 must be at least 1")
    grid = BoxCoxGrid(
        lambda1=_parse_l1_grid(args.grid_l1) if args.grid_l1 else None,
        lambda2_count=args.grid_l2,
        lambda2_upper=args.grid_l2_upper,
    )
    fits = []
    for m in _measures(data, args.measure):
        try:
            fit = fit_boxcox(data.pooled(m), grid)
        except GaussianizeError as exc:
            raise type(exc)(f"measure {m!r}: {exc}") from None
        fits.append({"measure": m, **fit.to_dict()})
    _write_text(args.output, _dump_json({"fits": fits}))
    return 0


def cmd_reliability(args):
    data = read_long_csv(io.StringIO(_read_text(args.input)))
    transforms = [t.strip() for t in args.transforms.split(",") if t.strip()]
    unknown = [t for t in transforms if t not in TRANSFORMS]
    if unknown:
        raise UsageError(f"unknown transform(s): {', '.join(unknown)}; choose from {', '.join(sorted(TRANSFORMS))}")
    if args.window is not None and not args.window.startswith("first:"):
        raise UsageError("--window must look like first:k")
    report = reliability_study(
        data, transforms, window=args.window, pairing=args.pairing,
        per_session_fit=args.per_session_fit, fisher_z=args.fisher_z,
        measures=_measures(data, args.measure),
    )
    _write_text(args.output, _dump_json(report.to_dict()))
    return 0


def cmd_hist(args):
    if args.bins < 1:
        raise UsageError("--bins must be positive")
    data = read_long_csv(io.StringIO(_read_text(args.input)))
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(("measure", "bin_left", "bin_right", "count"))
    for m in _measures(data, args.measure):
        counts, edges = np.histogram(data.pooled(m), bins=args.bins)
        for c, lo, hi in zip(counts, edges[:-1], edges[1:]):
            w.writerow((m, format_value(lo), format_value(hi), int(c)))
    _write_text(args.output, buf.getvalue())
    return 0


def cmd_rosenblatt(args):
    try:
        params = BivariateNormalParams(args.mu1, args.mu2, args.sigma1, args.sigma2, args.rho)
    except GaussianizeError as exc:
        raise UsageError(str(exc)) from None
    text = _read_text(args.input)
    reader = csv.reader(io.StringIO(text))
    expected = ("x1", "x2") if args.inverse else ("y1", "y2")
    header = next(reader, None)
    if header is None or tuple(h.strip() for h in header) != expected:
        raise DataFormatError(f"header must be {','.join(expected)}", 1)
    a, b = [], []
    for row in reader:
        if not row or all(not c.strip() for c in row):
            continue
        if len(row) != 2:
            raise DataFormatError(f"expected 2 fields, got {len(row)}", reader.line_num)
        try:
            va, vb = float(row[0]), float(row[1])
        except ValueError:
            raise DataFormatError("non-numeric field", reader.line_num) from None
        if not (math.isfinite(va) and math.isfinite(vb)):
            raise DataFormatError("non-finite field", reader.line_num)
        a.append(va)
        b.append(vb)
    a, b = np.array(a), np.array(b)
    if args.inverse:
        bad = ~((a > 0) & (a < 1) & (b > 0) & (b < 1))
        if bad.any():
            raise DataFormatError("probabilities must lie strictly inside (0, 1)", int(np.flatnonzero(bad)[0]) + 2)
        out = inverse(a, b, params)
        out_header = ("y1", "y2")
    else:
        out = forward(a, b, params)
        out_header = ("x1", "x2")
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(out_header)
    for u, v in zip(*out):
        w.writerow((format_value(u), format_value(v)))
    _write_text(args.output, buf.getvalue())
    return 0


def cmd_synth(args):
    try:
        config = SynthConfig(
            n_subjects=args.subjects, n_sessions=args.sessions,
            latent_correlation=args.rho, marginal=args.marginal, seed=args.seed,
            measures=tuple(args.measure or ["value"]),
        )
    except GaussianizeError as exc:
        raise UsageError(str(exc)) from None
    _write_text(args.output, write_long_csv(generate(config)))
    return 0


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------

def build_parser():
    parser = argparse.ArgumentParser(
        prog="gaussianize",
        description="Normalizing transforms, normality tests and test-retest reliability.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", metavar="COMMAND")
    sub.required = True

    def io_args(p, with_measure=True):
        p.add_argument("-i", "--input", default="-", help="input file (default: stdin)")
        p.add_argument("-o", "--output", default="-", help="output file (default: stdout)")
        if with_measure:
            p.add_argument("--measure", action="append",
                           help="restrict to this measure (repeatable; default: all)")

    p = sub.add_parser("transform", help="transform values of a long CSV (or a plain value list)")
    io_args(p)
    p.add_argument("--method", required=True,
                   choices=["rank-normal", "log", "logit", "boxcox", "analytic"])
    p.add_argument("--mu", type=float, default=0.0, help="target mean (rank-normal, analytic)")
    p.add_argument("--sigma", type=float, default=1.0, help="target sd (rank-normal, analytic)")
    p.add_argument("--lambda1", type=float, help="Box-Cox power; omit to fit per measure")
    p.add_argument("--lambda2", type=float, default=0.0, help="Box-Cox shift (default 0)")
    p.add_argument("--dist", help="source law for --method analytic, e.g. weibull:9,1")
    p.add_argument("--spec-out", help="write the fitted rank-normal tables here")
    p.add_argument("--spec-in", help="apply stored rank-normal tables instead of fitting")
    p.add_argument("--plain", action="store_true", help="input/output are bare values, one per line")
    p.set_defaults(func=cmd_transform)

    p = sub.add_parser("test-normality", help="Anderson-Darling / Kolmogorov-Smirnov per measure (JSON)")
    io_args(p)
    p.add_argument("--test", choices=["ad", "ks", "both"], default="both")
    p.add_argument("--by-session", action="store_true", help="test each session separately")
    p.add_argument("--replicates", type=int, default=KS_DEFAULT_REPLICATES,
                   help="Monte Carlo replicates for the KS null table")
    p.add_argument("--seed", type=int, default=KS_DEFAULT_SEED, help="seed for the KS null table")
    p.add_argument("--format", choices=["json", "text"], default="json",
                   help="text rounds p-values to two significant figures")
    p.set_defaults(func=cmd_test_normality)

    p = sub.add_parser("fit-boxcox", help="fit Box-Cox parameters per measure by AD p-value (JSON)")
    io_args(p)
    p.add_argument("--grid-l1", help="lambda1 grid as min:step:max (default -2:0.05:3); write --grid-l1=MIN:STEP:MAX when MIN is negative")
    p.add_argument("--grid-l2", type=int, default=41, help="number of lambda2 grid points (default 41)")
    p.add_argument("--grid-l2-upper", choices=["span", "min"], default="span",
                   help="lambda2 grid runs from -0.99*min up to the sample span (default) or to +min")
    p.set_defaults(func=cmd_fit_boxcox)

    p = sub.add_parser("reliability", help="test-retest correlations per measure (JSON)")
    io_args(p)
    p.add_argument("--pairing", choices=["all", "consecutive"], default="all")
    p.add_argument("--window", help="only the first k sessions, as first:k")
    p.add_argument("--transforms", default="rank-normal",
                   help=f"comma-separated subset of {','.join(sorted(TRANSFORMS))}")
    p.add_argument("--per-session-fit", action="store_true",
                   help="fit transforms per session instead of pooled (inflates rank-normal r)")
    p.add_argument("--fisher-z", action="store_true", help="average correlations on the Fisher z scale")
    p.set_defaults(func=cmd_reliability)

    p = sub.add_parser("hist", help="histogram counts per measure as CSV")
    io_args(p)
    p.add_argument("--bins", type=int, default=20)
    p.set_defaults(func=cmd_hist)

    p = sub.add_parser("rosenblatt", help="bivariate normal <-> uniform square on a two-column CSV")
    io_args(p, with_measure=False)
    p.add_argument("--mu1", type=float, default=0.0)
    p.add_argument("--mu2", type=float, default=0.0)
    p.add_argument("--sigma1", type=float, default=1.0)
    p.add_argument("--sigma2", type=float, default=1.0)
    p.add_argument("--rho", type=float, default=0.0)
    p.add_argument("--inverse", action="store_true", help="map x1,x2 back to y1,y2")
    p.set_defaults(func=cmd_rosenblatt)

    p = sub.add_parser("synth", help="seeded Gaussian-copula longitudinal dataset as long CSV")
    p.add_argument("-o", "--output", default="-")
    p.add_argument("--subjects", type=int, default=193)
    p.add_argument("--sessions", type=int, default=2)
    p.add_argument("--rho", type=float, default=0.7, help="latent test-retest correlation")
    p.add_argument("--marginal", default="lognormal:0,1", help="NAME:P1,P2 (lognormal, weibull, uniform, normal)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--measure", action="append", help="measure name (repeatable; default 'value')")
    p.set_defaults(func=cmd_synth)
    return parser


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 2
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"gaussianize {args.command}: usage error: {exc}", file=sys.stderr)
        return 2
    except GaussianizeError as exc:
        print(f"gaussianize {args.command}: error: {exc}", file=sys.stderr)
        return 1
    except BrokenPipeError:
        return 1


def main_entry():
    sys.exit(main())
