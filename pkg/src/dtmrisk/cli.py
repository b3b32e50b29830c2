"""Command-line interface: fit, measure, sweep, moment and oracle.

Exit codes: 0 success, 1 closed form and oracle disagree, 2 usage or
domain error (one line on stderr naming the violated constraint).
"""

from __future__ import annotations

import argparse
import io
import json
import math
import sys

from . import estimation, measures, oracle
from .distribution import EllipticalDistribution, make_window
from .errors import DomainError, QuadratureAccuracyError
from .generators import FAMILY_NAMES, make_family

MEASURES = ("dte", "dtv", "dts", "dtk")
_ORDER = {"dte": 1, "dtv": 2, "dts": 3, "dtk": 4}
ORACLE_TOLERANCE = 1e-6
SWEEP_LEVELS = (0.05, 0.10, 0.15, 0.20, 0.25, 0.30)
FIXED_WIDTH = 0.65


class UsageError(DomainError):
    pass


# ---------------------------------------------------------------------------
# formatting


def _round(x):
    if x is None or not math.isfinite(x):
        return None
    return float(f"{x:.12g}")


def _json(obj) -> str:
    def clean(v):
        if isinstance(v, float):
            return _round(v)
        if isinstance(v, dict):
            return {k: clean(w) for k, w in v.items()}
        if isinstance(v, (list, tuple)):
            return [clean(w) for w in v]
        return v

    return json.dumps(clean(obj), allow_nan=False) + "\n"


def _num(x) -> str:
    if x is None:
        return ""
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return f"{x:.11e}"


def _emit(text: str, output):
    if output in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(output, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


# ---------------------------------------------------------------------------
# argument handling


def _parse_measures(text: str) -> tuple:
    names = tuple(m.strip().lower() for m in text.split(",") if m.strip())
    bad = [m for m in names if m not in MEASURES]
    if bad or not names:
        raise UsageError(f"--measures must be a comma list drawn from {','.join(MEASURES)} (got {text!r})")
    return tuple(m for m in MEASURES if m in names)


def _distribution(args) -> EllipticalDistribution:
    if args.segment is not None:
        if args.mu is not None or args.sigma is not None:
            raise UsageError("--segment sets mu and sigma; do not combine it with --mu/--sigma")
        model = estimation.SEGMENT_MODEL
        idx = model.names.index(args.segment)
        return estimation.marginal_distributions(model)[idx]
    family = make_family(args.family, dof=args.dof, shape=args.shape)
    mu = 0.0 if args.mu is None else args.mu
    sigma = 1.0 if args.sigma is None else args.sigma
    return EllipticalDistribution(mu, sigma, family)


def _validate_order(dist, order: int):
    if order >= 1:
        dist.family.require_moment(order, measures._label(order))


def _closed_form(dist, window, wanted: tuple) -> dict:
    order = max(_ORDER[m] for m in wanted)
    if order == 1:
        return {"dte": measures.dte(dist, window)}
    rep = measures.risk_report(dist, window, order=order)
    return {m: getattr(rep, m) for m in wanted}


def _warn(dist, order: int):
    for w in measures.conditioning_warnings(dist.family, order):
        print(f"warning: {w}", file=sys.stderr)


# ---------------------------------------------------------------------------
# subcommands


def cmd_measure(args) -> int:
    dist = _distribution(args)
    wanted = _parse_measures(args.measures)
    order = max(_ORDER[m] for m in wanted)
    _validate_order(dist, order)
    window = make_window(dist, args.p, args.q)
    values = _closed_form(dist, window, wanted)
    _warn(dist, order)
    out = dict(values)
    out.update(p=window.p, q=window.q, x_p=window.x_p, x_q=window.x_q)
    _emit(_json(out), args.output)
    return 0


def _schedule(args) -> list:
    if args.windows:
        pairs = []
        for item in args.windows.split(","):
            try:
                p, q = (float(v) for v in item.split(":"))
            except ValueError:
                raise UsageError(f"--windows entries must look like p:q (got {item!r})") from None
            pairs.append((p, q))
        return pairs
    if args.schedule == "symmetric":
        return [(p, round(1.0 - p, 12)) for p in SWEEP_LEVELS]
    return [(p, round(p + FIXED_WIDTH, 12)) for p in SWEEP_LEVELS]


def cmd_sweep(args) -> int:
    dist = _distribution(args)
    wanted = _parse_measures(args.measures)
    order = max(_ORDER[m] for m in wanted)
    _validate_order(dist, order)
    _warn(dist, order)
    rows, failed = [], False
    for p, q in _schedule(args):
        try:
            window = make_window(dist, p, q)
            vals = _closed_form(dist, window, wanted)
            rows.append((p, q, vals, ""))
        except DomainError as exc:
            failed = True
            rows.append((p, q, {}, str(exc)))
    header = ["p", "q", *MEASURES] + (["error"] if failed else [])
    buf = io.StringIO()
    buf.write(",".join(header) + "\n")
    for p, q, vals, err in rows:
        cells = [_num(p), _num(q)] + [_num(vals.get(m)) for m in MEASURES]
        if failed:
            cells.append('"' + err.replace('"', "'") + '"' if err else "")
        buf.write(",".join(cells) + "\n")
    _emit(buf.getvalue(), args.output)
    return 0


def cmd_fit(args) -> int:
    if not args.input:
        raise UsageError("fit requires --input")
    series = estimation.read_returns_csv(args.input)
    model = estimation.fit_normal_mle(series)
    _emit(_json(model.to_dict()), args.output)
    return 0


def cmd_moment(args) -> int:
    dist = _distribution(args)
    n = args.n
    if n is None or n < 1:
        raise UsageError("moment requires --n >= 1")
    _validate_order(dist, n)
    window = make_window(dist, args.p, args.q)
    value = measures.dte(dist, window) if n == 1 else measures.dtm(dist, window, n)
    _warn(dist, n)
    _emit(_num(value) + "\n", args.output)
    return 0


def cmd_oracle(args) -> int:
    dist = _distribution(args)
    window = make_window(dist, args.p, args.q)
    if args.n is not None:
        if args.n < 1:
            raise UsageError("--n must be >= 1")
        n = args.n
        _validate_order(dist, n)
        name = "dte" if n == 1 else f"dtm{n}"
        closed = {name: measures.dte(dist, window) if n == 1 else measures.dtm(dist, window, n)}
        ref_rep = oracle.oracle_report(dist, window, orders=(2, n) if n > 1 else (2,))
        ref = {name: ref_rep.dte if n == 1 else oracle.oracle_truncated_moment(dist, window, n, central=True)}
        order = n
    else:
        wanted = _parse_measures(args.measures)
        order = max(_ORDER[m] for m in wanted)
        _validate_order(dist, order)
        closed = _closed_form(dist, window, wanted)
        ref_rep = oracle.oracle_report(dist, window, orders=tuple(range(2, max(order, 2) + 1)))
        ref = {m: getattr(ref_rep, m) for m in wanted}
    _warn(dist, order)
    out, worst = {}, 0.0
    for m, v in closed.items():
        err = oracle.relative_error(v, ref[m], oracle.measure_scale(m, ref_rep.dtv))
        worst = max(worst, err)
        out[f"{m}_closed"] = v
        out[f"{m}_oracle"] = ref[m]
        out[f"{m}_rel_error"] = err
    out["max_rel_error"] = worst
    out["tolerance"] = ORACLE_TOLERANCE
    out["pass"] = worst <= ORACLE_TOLERANCE
    _emit(_json(out), args.output)
    if worst > ORACLE_TOLERANCE:
        print(f"error: closed form and oracle differ by {worst:.3g} > {ORACLE_TOLERANCE:g}", file=sys.stderr)
        return 1
    return 0


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dtmrisk",
        description="Doubly truncated moment risk measures for elliptical distributions.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def dist_args(p, window=True):
        p.add_argument("--family", choices=FAMILY_NAMES, default="normal")
        p.add_argument("--mu", type=float, default=None, help="location (default 0)")
        p.add_argument("--sigma", type=float, default=None, help="scale (default 1)")
        p.add_argument("--dof", type=float, default=None, help="student-t degrees of freedom m")
        p.add_argument("--shape", type=float, default=None, help="pearson-vii shape t")
        p.add_argument("--segment", choices=estimation.SEGMENT_MODEL.names, default=None,
                       help="use the normal marginal of a built-in fitted segment")
        if window:
            p.add_argument("--p", type=float, default=0.05, help="lower probability level")
            p.add_argument("--q", type=float, default=0.95, help="upper probability level")
        p.add_argument("--output", default=None, help="write to this file instead of stdout")

    p = sub.add_parser("measure", help="dte, dtv, dts, dtk on one window (JSON)")
    dist_args(p)
    p.add_argument("--measures", default=",".join(MEASURES))
    p.set_defaults(func=cmd_measure)

    p = sub.add_parser("sweep", help="measures over a schedule of windows (CSV)")
    dist_args(p, window=False)
    p.add_argument("--schedule", choices=("symmetric", "fixed-width"), default="symmetric")
    p.add_argument("--windows", default=None, help="explicit list p:q,p:q,... (overrides --schedule)")
    p.add_argument("--measures", default=",".join(MEASURES))
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("fit", help="normal MLE of a returns CSV (JSON)")
    p.add_argument("--input", required=True)
    p.add_argument("--output", default=None)
    p.set_defaults(func=cmd_fit)

    p = sub.add_parser("moment", help="n-th truncated central moment (n = 1: mean)")
    dist_args(p)
    p.add_argument("--n", type=int, required=True)
    p.set_defaults(func=cmd_moment)

    p = sub.add_parser("oracle", help="closed form against brute-force quadrature (JSON)")
    dist_args(p)
    p.add_argument("--n", type=int, default=None, help="check one moment order instead of the measures")
    p.add_argument("--measures", default=",".join(MEASURES))
    p.set_defaults(func=cmd_oracle)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except DomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except QuadratureAccuracyError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
