"""Command-line front end.

    lorenz-acim classify A B C
    lorenz-acim density A B C [--method ulam|parry|markov|renorm|auto]
    lorenz-acim scan --a LO HI STEP [--b LO HI STEP] [--c C | --c LO HI STEP]
    lorenz-acim orbit A B C X N
    lorenz-acim rotation A B C N
    lorenz-acim equivalence A B C

Exit codes: 0 success, 2 input or constraint error, 3 method precondition error.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction

from .classifier import (
    PeriodicIdentity,
    UniqueEquivalentBounded,
    boundary_sign,
    classify,
)
from .core_map import MapParams, Side, SidedPoint, format_number, iterate, parse_number, validate
from .density import (
    CSV_HEADER,
    StepDensity,
    birkhoff_average,
    markov_density,
    markov_density_n,
    parry_density,
    renormalized_density,
    ulam_matrix,
    ulam_stationary,
)
from .errors import ConstraintViolation, InvalidParams, LorenzError, NotApplicable
from .periodic import NotEquivalent, equivalence_check
from .rotation import (
    exact_rotation_number,
    is_homeomorphism,
    rotation_interval_estimate,
    rotation_number_homeo,
)

EXIT_OK, EXIT_INPUT, EXIT_METHOD = 0, 2, 3
SCAN_COLUMNS = ["a", "b", "c", "status", "class", "kappa", "equivalent", "rho_lo", "rho_hi"]
SCAN_FIELDS = ("classify", "equivalence", "kappa", "rho")
MAX_MARKOV_K = 64


class InputError(Exception):
    """Malformed command-line input (exit 2)."""


def _jsonable(x):
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, dict):
        return {k: _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    return x


def _cell(x) -> str:
    if x is None:
        return ""
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, (Fraction, float, int)):
        return format_number(x)
    return str(x)


def _table(columns: list[str], rows: list[list]) -> str:
    buf = io.StringIO()
    buf.write(CSV_HEADER + "\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for r in rows:
        w.writerow([_cell(v) for v in r])
    return buf.getvalue()


def _record(args, record: dict) -> str:
    """A single result as a one-row CSV or a JSON object."""
    if args.format == "json":
        return json.dumps(_jsonable(record), indent=2) + "\n"
    return _table(list(record), [list(record.values())])


def _number(s: str, args) -> Fraction | float:
    try:
        return parse_number(s, exact=True if args.exact else None)
    except (ValueError, ZeroDivisionError) as err:
        raise InputError(f"cannot parse number {s!r}") from err


def _params(args) -> MapParams:
    return validate(_number(args.a, args), _number(args.b, args), _number(args.c, args))


# --- commands --------------------------------------------------------------


def cmd_classify(args) -> str:
    p = _params(args)
    cls = classify(p)
    rec = {"class": cls.kind, "boundary_sum": cls.boundary_sum, "n": None, "r_lo": None, "r_hi": None}
    if isinstance(cls, PeriodicIdentity):
        rec["n"] = cls.n
    if isinstance(cls, UniqueEquivalentBounded):
        rec["r_lo"], rec["r_hi"] = cls.r_lo, cls.r_hi
    return _record(args, rec)


def _same(p: MapParams, x, y) -> bool:
    return x == y if p.exact else math.isclose(x, y, rel_tol=1e-12, abs_tol=1e-15)


def _markov_match(p: MapParams) -> StepDensity | None:
    """Closed-form Markov density if p is one of the two recognised families."""
    if p.a == 1 and p.b > 1 and p.b == int(p.b) and _same(p, p.c, 1 - 1 / p.b):
        return markov_density_n(int(p.b))
    if p.a > 1 and _same(p, p.c, 1 / p.a):
        for k in range(1, MAX_MARKOV_K + 1):
            alpha = 1 / (p.a ** (k - 1) * (p.a - 1))
            if _same(p, alpha, p.b):
                return markov_density(p.a, k)
            if alpha < p.b:
                break
    return None


def _density(p: MapParams, args) -> StepDensity:
    method = args.method
    if method == "ulam":
        return ulam_stationary(ulam_matrix(p, args.cells), tol=args.tol)
    if method == "parry":
        if p.a != p.b:
            raise NotApplicable("the series density needs equal slopes a = b")
        return parry_density(p.a, p.c, args.terms, exact=p.exact)
    if method == "markov":
        g = _markov_match(p)
        if g is None:
            raise InvalidParams(f"{p} is not f_(beta, alpha, 1/beta) or f_(1, n, 1-1/n)")
        return g
    if method == "renorm":
        return renormalized_density(p, args.terms_auto)
    # auto
    cls = classify(p)
    if isinstance(cls, PeriodicIdentity):
        one = StepDensity.constant(1, exact=p.exact)
        return birkhoff_average(p, one, cls.n)
    g = _markov_match(p)
    if g is not None:
        return g
    if boundary_sign(p) > 0:
        if isinstance(equivalence_check(p), NotEquivalent):
            return renormalized_density(p)
        if p.a == p.b and p.f0 != 0 and p.f1 != 1:
            return parry_density(p.a, p.c, args.terms, exact=p.exact)
    if boundary_sign(p) < 0:
        raise NotApplicable(f"{p} has no acim (ac + b(1-c) < 1)")
    return ulam_stationary(ulam_matrix(p, args.cells), tol=args.tol)


def cmd_density(args) -> str:
    if args.cells < 2:
        raise InputError("--cells must be at least 2")
    if args.terms < 1:
        raise InputError("--terms must be at least 1")
    args.terms_auto = args.terms if args.terms_given else None
    g = _density(_params(args), args)
    if args.format == "json":
        meta = {k: v for k, v in g.meta.items() if isinstance(v, (int, float, Fraction, str))}
        return json.dumps({**g.to_json(), "meta": _jsonable(meta)}, indent=2) + "\n"
    return g.to_csv()


def cmd_equivalence(args) -> str:
    p = _params(args)
    v = equivalence_check(p)
    st = getattr(v, "structure", None)
    rec = {
        "verdict": v.to_json()["kind"],
        "reason": getattr(v, "reason", None),
        "kappa": getattr(v, "kappa", None),
        "equivalent": v.equivalent,
        "p_left": st.p_left if st else None,
        "p_right": st.p_right if st else None,
        "A": st.A if st else None,
        "B": st.B if st else None,
        "M": st.M if st else None,
    }
    if args.format == "json":
        rec["gaps"] = list(getattr(v, "gaps", ()))
        if st:
            rec["orbit"] = st.orbit
    return _record(args, rec)


def cmd_rotation(args) -> str:
    p = _params(args)
    if args.n < 1:
        raise InputError("n must be positive")
    est = rotation_interval_estimate(p, args.n)
    rho = None
    if is_homeomorphism(p):
        rho = exact_rotation_number(p) if p.exact else None
        if rho is None:
            rho = rotation_number_homeo(p)
    rec = {"lo": est.lo, "hi": est.hi, "error_bound": est.error_bound, "rho": rho}
    return _record(args, rec)


def _sided(s: str, args) -> SidedPoint:
    side = Side.PLAIN
    if s.endswith(("+", "-")):
        side = Side.RIGHT if s[-1] == "+" else Side.LEFT
        s = s[:-1]
    return SidedPoint(_number(s, args), side)


def cmd_orbit(args) -> str:
    p = _params(args)
    if args.n < 0:
        raise InputError("n must be nonnegative")
    x = _sided(args.x, args)
    if not 0 <= x.x <= 1:
        raise InputError("x must lie in [0, 1]")
    tr = iterate(p, x, args.n, on_critical=args.on_critical)
    rows = [
        [k, pt.x, pt.side.value, m]
        for k, (pt, m) in enumerate(zip(tr.points, tr.visit_counts))
    ]
    if args.format == "json":
        return json.dumps(
            {
                "points": [_jsonable(r[1]) for r in rows],
                "sides": [r[2] for r in rows],
                "visit_counts": tr.visit_counts,
                "log_deriv": tr.log_deriv,
                "critical_hit": tr.critical_hit,
            },
            indent=2,
        ) + "\n"
    return _table(["step", "point", "side", "m_k"], rows)


# --- scan ------------------------------------------------------------------


def _grid(lo: Fraction, hi: Fraction, step: Fraction) -> list[Fraction]:
    if step <= 0:
        raise InputError("scan steps must be positive")
    if hi < lo:
        return []
    return [lo + i * step for i in range((hi - lo) // step + 1)]


def _range(values, name: str) -> list[Fraction]:
    if not isinstance(values, (list, tuple)):
        values = [values]
    try:
        nums = [Fraction(str(v)) for v in values]
    except (ValueError, ZeroDivisionError) as err:
        raise InputError(f"malformed {name} range {values!r}") from err
    if len(nums) == 1:
        return nums
    if len(nums) != 3:
        raise InputError(f"{name} takes a value or LO HI STEP")
    return _grid(*nums)


def build_scan_grid(spec: dict, exact: bool) -> list[tuple]:
    """Grid points (a, b, c) in row order: a outermost, then b, then c."""
    if "a" not in spec:
        raise InputError("scan needs an a range")
    a_vals = _range(spec["a"], "a")
    b_vals = None if spec.get("b") in (None, "a") else _range(spec["b"], "b")
    c_vals = _range(spec.get("c", ["1/2"]), "c")
    conv = (lambda x: x) if exact else float
    points = []
    for a in a_vals:
        for b in [a] if b_vals is None else b_vals:
            for c in c_vals:
                points.append((conv(a), conv(b), conv(c)))
    return points


def scan_row(point: tuple, fields: tuple[str, ...], rho_n: int) -> list:
    a, b, c = point
    row = {k: None for k in SCAN_COLUMNS}
    row.update(a=a, b=b, c=c)
    try:
        p = validate(a, b, c)
    except ConstraintViolation:
        row["status"] = "invalid"
        return [row[k] for k in SCAN_COLUMNS]
    row["status"] = "ok"
    try:
        if "classify" in fields:
            row["class"] = classify(p).kind
        if "equivalence" in fields or "kappa" in fields:
            v = equivalence_check(p)
            if "equivalence" in fields:
                row["equivalent"] = v.equivalent
            if "kappa" in fields:
                row["kappa"] = getattr(v, "kappa", None)
        if "rho" in fields:
            est = rotation_interval_estimate(p, rho_n)
            row["rho_lo"], row["rho_hi"] = est.lo, est.hi
    except LorenzError as err:
        row["status"] = f"error:{err.name}"
    return [row[k] for k in SCAN_COLUMNS]


def _scan_worker(job):
    point, fields, rho_n = job
    return scan_row(point, fields, rho_n)


def cmd_scan(args) -> str:
    spec: dict = {}
    if args.spec:
        try:
            with open(args.spec) as fh:
                spec = json.load(fh)
        except (OSError, json.JSONDecodeError) as err:
            raise InputError(f"cannot read scan spec: {err}") from err
        if not isinstance(spec, dict):
            raise InputError("scan spec must be a JSON object")
    for key in ("a", "b", "c"):
        if getattr(args, key) is not None:
            spec[key] = getattr(args, key)
    if args.fields is not None:
        spec["fields"] = args.fields
    fields = spec.get("fields", list(SCAN_FIELDS))
    if isinstance(fields, str):
        fields = fields.split(",")
    bad = [f for f in fields if f not in SCAN_FIELDS]
    if bad:
        raise InputError(f"unknown scan fields {bad}; choose from {list(SCAN_FIELDS)}")
    if args.jobs < 1:
        raise InputError("--jobs must be positive")
    points = build_scan_grid(spec, args.exact or spec.get("exact", False))
    jobs = [(pt, tuple(fields), args.rho_n) for pt in points]
    if args.jobs > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            rows = list(pool.map(_scan_worker, jobs, chunksize=max(1, len(jobs) // (4 * args.jobs))))
    else:
        rows = [_scan_worker(j) for j in jobs]
    if args.format == "json":
        recs = [dict(zip(SCAN_COLUMNS, r)) for r in rows]
        return json.dumps(_jsonable(recs), indent=2) + "\n"
    return _table(SCAN_COLUMNS, rows)


# --- parser ----------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--exact", action="store_true", help="read decimals as exact rationals")
    common.add_argument("--tol", type=float, default=1e-10, help="Ulam convergence tolerance")
    common.add_argument("--format", choices=["csv", "json"], default="csv")
    common.add_argument("--out", help="write output to this file instead of stdout")

    parser = argparse.ArgumentParser(prog="lorenz-acim", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def with_map(name, help_):
        sp = sub.add_parser(name, parents=[common], help=help_)
        sp.add_argument("a")
        sp.add_argument("b")
        sp.add_argument("c")
        return sp

    with_map("classify", "existence and type of the acim").set_defaults(func=cmd_classify)

    sp = with_map("density", "invariant density as a step function")
    sp.add_argument(
        "--method", choices=["ulam", "parry", "markov", "renorm", "auto"], default="auto"
    )
    sp.add_argument("--cells", type=int, default=4096)
    sp.add_argument("--terms", type=int, default=None)
    sp.set_defaults(func=cmd_density)

    with_map("equivalence", "is the acim equivalent to Lebesgue?").set_defaults(
        func=cmd_equivalence
    )

    sp = with_map("rotation", "empirical and closed-form rotation number")
    sp.add_argument("n", type=int)
    sp.set_defaults(func=cmd_rotation)

    sp = with_map("orbit", "forward orbit with visit counts")
    sp.add_argument("x", help="start point; suffix + or - for c+ / c-")
    sp.add_argument("n", type=int)
    sp.add_argument("--on-critical", choices=["stop", "left", "right"], default="stop")
    sp.set_defaults(func=cmd_orbit)

    sp = sub.add_parser("scan", parents=[common], help="parameter-grid sweep")
    sp.add_argument("--spec", help="JSON scan spec with keys a, b, c, fields")
    sp.add_argument("--a", nargs="+", metavar="V", help="LO HI STEP")
    sp.add_argument("--b", nargs="+", metavar="V", help="LO HI STEP, or omit for b = a")
    sp.add_argument("--c", nargs="+", metavar="V", help="fixed value or LO HI STEP")
    sp.add_argument("--fields", help=f"comma list from {','.join(SCAN_FIELDS)}")
    sp.add_argument("--rho-n", type=int, default=1000, help="iterations for rho_lo/rho_hi")
    sp.add_argument("--jobs", type=int, default=1)
    sp.set_defaults(func=cmd_scan)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "command", None) == "density":
        args.terms_given = args.terms is not None
        if args.terms is None:
            args.terms = 60
    if getattr(args, "command", None) == "scan" and args.b == ["a"]:
        args.b = None
    try:
        text = args.func(args)
    except (InputError, ConstraintViolation) as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_INPUT
    except LorenzError as err:
        print(f"error: {err.name}: {err}", file=sys.stderr)
        return EXIT_METHOD
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
