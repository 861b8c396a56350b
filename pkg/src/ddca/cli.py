"""Command-line surface over the whole engine.

One executable, ``ddca``, with one subcommand per task: products and
sandwiches in a concrete algebra, T-generators and T-basis expansions,
rank-interpolated structure-constant tables, their specialization, the
DDCA relation suites, the finite tensor module suite, and the content
identity sweep.  Verification subcommands exit 0 exactly when every
requested identity holds; ``--out BASE`` leaves BASE.json plus, for
report- and table-shaped output, BASE.csv and BASE.png.  Artifacts are
byte-deterministic, independent of ``--threads``.

Exit codes: 0 ok / all pass, 1 verification failure, 2 usage, 3 domain
error from an engine module, 4 I/O error.
"""

from __future__ import annotations

import argparse
import json
import multiprocessing
import os
import random
import sys
from fractions import Fraction

from . import guay, interp, report, vlrep
from .cherednik import (
    CherednikElement,
    EqualIndices,
    IndexOutOfRange,
    ParamMismatch,
    ZeroElement,
    get_algebra,
)
from .rings import InconsistentSamples, ParamPoly, parse_rational
from .spherical import (
    DegreeBoundExceeded,
    NotInSpan,
    SphericalElement,
    TIndex,
    enumerate_t_indices,
    expand_in_t_basis,
    expansion_to_obj,
    sandwich,
    t_basis_elem,
    t_gen,
)
from .symgroup import PadTooSmall, content, interpolated_omega_value, pad

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_USAGE = 2
EXIT_DOMAIN = 3
EXIT_IO = 4

_DOMAIN_ERRORS = (
    IndexOutOfRange,
    EqualIndices,
    ParamMismatch,
    ZeroElement,
    NotInSpan,
    DegreeBoundExceeded,
    InconsistentSamples,
    interp.FitValidationFailed,
    interp.CacheCorrupt,
    guay.NonTraceless,
    guay.IndexConstraintViolated,
    vlrep.TruncationOverflow,
    vlrep.NotSymmetric,
    PadTooSmall,
    ValueError,
)


class UsageError(Exception):
    """Malformed inputs caught before dispatch."""


_COMMANDS = (
    "mul",
    "sandwich",
    "tgen",
    "expand",
    "structure-constants",
    "specialize",
    "verify-guay",
    "verify-vl",
    "content-check",
)


class JobSpec:
    """One validated run: command, parameters, output and cache policy."""

    __slots__ = ("command", "params", "out", "cache_dir", "threads", "pretty")

    def __init__(self, command, params, out=None, cache_dir=None, threads=1, pretty=False):
        self.command = command
        self.params = params
        self.out = out
        self.cache_dir = cache_dir
        self.threads = threads
        self.pretty = pretty

    @classmethod
    def from_args(cls, args):
        if args.no_cache:
            cache_dir = None
        else:
            cache_dir = args.cache_dir or os.environ.get("DDCA_CACHE_DIR") or None
        params = {
            k: v
            for k, v in vars(args).items()
            if k not in ("command", "out", "cache_dir", "no_cache", "threads", "pretty", "func")
        }
        return cls(
            args.command,
            params,
            out=args.out,
            cache_dir=cache_dir,
            threads=args.threads,
            pretty=args.pretty,
        )

    def validate(self):
        if self.command not in _COMMANDS:
            raise UsageError("unknown command %r" % self.command)
        if self.threads < 1:
            raise UsageError("--threads must be at least 1")
        p = self.params
        for name in ("n", "r", "l"):
            if p.get(name) is not None and p[name] < 1:
                raise UsageError("--%s must be at least 1" % name)
        for name in ("p", "q", "max_weight", "max_degree", "trials"):
            if p.get(name) is not None and p[name] < 0:
                raise UsageError("--%s must be nonnegative" % name.replace("_", "-"))
        if self.command == "structure-constants":
            has_pair = p.get("m1") is not None and p.get("m2") is not None
            if not has_pair and p.get("max_weight") is None:
                raise UsageError(
                    "structure-constants needs --m1/--m2 or --max-weight"
                )
        if self.command == "verify-guay" and not p.get("all_indices"):
            if not p.get("k_extraction") and None in (
                p.get("a"), p.get("b"), p.get("c"), p.get("d")
            ):
                raise UsageError(
                    "verify-guay needs --all-indices, --k-extraction, or all of "
                    "--a/--b/--c/--d"
                )


# ---------------------------------------------------------------------------
# input parsing helpers
# ---------------------------------------------------------------------------

def _arg_json(text):
    """Inline JSON, or @path to read it from a file."""
    try:
        if text.startswith("@"):
            with open(text[1:]) as fh:
                return json.load(fh)
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise UsageError("bad JSON input: %s" % exc)


def _element_obj(text):
    obj = _arg_json(text)
    if not isinstance(obj, dict):
        raise UsageError("expected a serialized object, got %s" % type(obj).__name__)
    return obj


def _parse_matrix(obj, r):
    if not isinstance(obj, list) or len(obj) != r:
        raise UsageError("matrix must be a list of %d rows" % r)
    rows = []
    for row in obj:
        if not isinstance(row, list) or len(row) != r:
            raise UsageError("matrix rows must have length %d" % r)
        rows.append(tuple(parse_rational(v) for v in row))
    return tuple(rows)


def _algebra(job, n=None, r=None):
    p = job.params
    n = n if n is not None else p.get("n")
    r = r if r is not None else p.get("r")
    if n is None or r is None:
        raise UsageError("this command needs --n and --r")
    tpar = kpar = None
    if p.get("t") is not None:
        tpar = ParamPoly.const(parse_rational(p["t"]))
    if p.get("k") is not None:
        kpar = ParamPoly.const(parse_rational(p["k"]))
    return get_algebra(n, r, tpar, kpar)


# ---------------------------------------------------------------------------
# artifact emission
# ---------------------------------------------------------------------------

def _emit(job, obj, rows=None, rows_kind=None, title=""):
    """Write BASE.json (+ BASE.csv/BASE.png for row-shaped output) when
    --out is set; otherwise print the canonical JSON to stdout."""
    if job.out:
        report.write_json(job.out + ".json", obj)
        if rows is not None:
            if rows_kind == "table":
                report.write_table_csv(job.out + ".csv", rows)
                report.render_table_figure(job.out + ".png", rows, title)
            else:
                report.write_report_csv(job.out + ".csv", rows)
                report.render_report_figure(job.out + ".png", rows, title)
        print("wrote %s.json" % job.out)
    elif not job.pretty:
        print(json.dumps(obj, sort_keys=True, separators=(",", ":")))


def _print_report(job, rows):
    for identity, params, status, detail in rows:
        line = "%-7s %s  %s" % (status, identity, params)
        if detail and status == "FAIL":
            line += "  diff=%s" % detail
        elif detail:
            line += "  (%s)" % detail
        print(line)
    n_fail = sum(1 for row in rows if row[2] == "FAIL")
    n_skip = sum(1 for row in rows if row[2] == "skipped")
    summary = "%d checks, %d failed" % (len(rows) - n_skip, n_fail)
    if n_skip:
        summary += ", %d skipped" % n_skip
    print(summary)


def _rows_exit(rows):
    return EXIT_FAIL if any(row[2] == "FAIL" for row in rows) else EXIT_OK


# ---------------------------------------------------------------------------
# element commands
# ---------------------------------------------------------------------------

def _cmd_mul(job):
    p = job.params
    a_obj = _element_obj(p["lhs"])
    b_obj = _element_obj(p["rhs"])
    alg = _algebra(job, n=int(a_obj.get("n", 0)) or None, r=int(a_obj.get("r", 0)) or None)
    a = CherednikElement.from_obj(a_obj, algebra=alg)
    b = CherednikElement.from_obj(b_obj, algebra=alg)
    product = a * b
    _emit(job, product.to_obj())
    if job.pretty:
        print(repr(product))
    return EXIT_OK


def _cmd_sandwich(job):
    p = job.params
    obj = _element_obj(p["elem"])
    alg = _algebra(job, n=int(obj.get("n", 0)) or None, r=int(obj.get("r", 0)) or None)
    elem = CherednikElement.from_obj(obj, algebra=alg)
    result = sandwich(elem)
    _emit(job, result.to_obj())
    if job.pretty:
        print(repr(result))
    return EXIT_OK


def _cmd_tgen(job):
    p = job.params
    alg = _algebra(job)
    g = _parse_matrix(_arg_json(p["g"]), alg.r)
    result = t_gen(alg, p["p"], p["q"], g)
    _emit(job, result.to_obj())
    if job.pretty:
        print(repr(result))
    return EXIT_OK


def _cmd_expand(job):
    p = job.params
    obj = _element_obj(p["elem"])
    alg = _algebra(job, n=int(obj.get("n", 0)) or None, r=int(obj.get("r", 0)) or None)
    elem = SphericalElement.from_obj(obj, algebra=alg)
    expansion = expand_in_t_basis(elem, strict=not p.get("loose"))
    _emit(job, expansion_to_obj(expansion))
    if job.pretty:
        for m in sorted(expansion, key=TIndex.sort_key):
            print("%r: %s" % (m, expansion[m]))
    return EXIT_OK


# ---------------------------------------------------------------------------
# structure constants
# ---------------------------------------------------------------------------

def _table_job(m1_obj, m2_obj, r, cache_dir):
    table = interp.structure_constants(
        TIndex.from_obj(m1_obj),
        TIndex.from_obj(m2_obj),
        r,
        cache_dir=cache_dir,
        rng=random.Random(0),
    )
    return table.to_obj()


def _run_jobs(worker, jobs, threads):
    """Order-preserving map, fanned over processes when asked."""
    if threads > 1 and len(jobs) > 1:
        with multiprocessing.Pool(threads) as pool:
            return pool.starmap(worker, jobs)
    return [worker(*jobargs) for jobargs in jobs]


def _cmd_structure_constants(job):
    p = job.params
    r = p.get("r")
    if r is None:
        raise UsageError("structure-constants needs --r")
    if p.get("m1") is not None:
        pairs = [(TIndex.from_obj(_arg_json(p["m1"])), TIndex.from_obj(_arg_json(p["m2"])))]
    else:
        singles = [
            m
            for m in enumerate_t_indices(r, p["max_weight"], 1, include_empty=False)
            if m.size == 1
        ]
        pairs = [
            (m1, m2)
            for m1 in singles
            for m2 in singles
            if m1.weight + m2.weight <= p["max_weight"]
        ]
        pairs.sort(key=lambda pair: (pair[0].sort_key(), pair[1].sort_key()))
    jobs = [(m1.to_obj(), m2.to_obj(), r, job.cache_dir) for (m1, m2) in pairs]
    objs = _run_jobs(_table_job, jobs, job.threads)
    tables = [interp.StructureConstantTable.from_obj(obj) for obj in objs]
    rows = report.table_rows(tables)
    if len(tables) == 1:
        payload = tables[0].to_obj()
    else:
        payload = {"format": "structure-table-batch/1", "r": r, "tables": objs}
    _emit(job, payload, rows=rows, rows_kind="table", title="structure constants, r=%d" % r)
    if job.pretty:
        for table in tables:
            print(repr(table))
            for m in sorted(table.entries, key=TIndex.sort_key):
                print("  %r: %s" % (m, table.entries[m]))
    return EXIT_OK


def _cmd_specialize(job):
    p = job.params
    table = interp.StructureConstantTable.from_obj(_element_obj(p["table"]))
    n = p.get("n")
    if n is None:
        raise UsageError("specialize needs --n")
    expansion = table.specialize(n)
    status = EXIT_OK
    if p.get("check"):
        alg = get_algebra(n, table.r)
        direct = t_basis_elem(alg, table.m1) * t_basis_elem(alg, table.m2)
        if expand_in_t_basis(direct) != expansion:
            print("specialization at n=%d disagrees with the direct product" % n, file=sys.stderr)
            status = EXIT_FAIL
    _emit(job, expansion_to_obj(expansion))
    if job.pretty:
        for m in sorted(expansion, key=TIndex.sort_key):
            print("%r: %s" % (m, expansion[m]))
    return status


# ---------------------------------------------------------------------------
# verification suites
# ---------------------------------------------------------------------------

def _guay_job(kind, args):
    if kind == "main":
        rep = guay.verify_main_relation(*args)
    elif kind == "disjoint":
        rep = guay.verify_disjoint_case(*args)
    elif kind == "k-extraction":
        rep = guay.verify_k_extraction(*args)
    else:
        raise ValueError("unknown guay job %r" % kind)
    return report.report_rows([rep])


def _cmd_verify_guay(job):
    p = job.params
    r = p.get("r")
    n = p.get("n")
    if r is None or n is None:
        raise UsageError("verify-guay needs --n and --r")
    jobs = []
    if p.get("all_indices"):
        for (a, b, c, d) in guay.admissible_tuples(r):
            jobs.append(("main", (a, b, c, d, n, r)))
        for (a, b, c, d) in guay.admissible_tuples(r):
            if not ({a, b} & {c, d}):
                jobs.append(("disjoint", (a, b, c, d, n, r)))
    elif p.get("a") is not None:
        jobs.append(("main", (p["a"], p["b"], p["c"], p["d"], n, r)))
    if p.get("k_extraction"):
        jobs.append(("k-extraction", (n, r)))
    row_lists = _run_jobs(_guay_job, jobs, job.threads)
    rows = [row for rows_ in row_lists for row in rows_]
    payload = {
        "format": "verification-run/1",
        "command": "verify-guay",
        "params": {"n": n, "r": r},
        "pass": all(row[2] != "FAIL" for row in rows),
        "rows": [list(row) for row in rows],
    }
    _emit(job, payload, rows=rows, title="verify-guay, n=%d, r=%d" % (n, r))
    _print_report(job, rows)
    return _rows_exit(rows)


def _cmd_verify_vl(job):
    p = job.params
    l, r = p.get("l"), p.get("r")
    if l is None or r is None:
        raise UsageError("verify-vl needs --l and --r")
    d = p.get("max_degree")
    reports = [
        vlrep.verify_module_relations(l, r, D=d),
        vlrep.verify_commuting_square(l, r, d),
    ]
    rows = report.report_rows(reports)
    payload = {
        "format": "verification-run/1",
        "command": "verify-vl",
        "params": {"l": l, "r": r, "maxDegree": d},
        "pass": all(row[2] != "FAIL" for row in rows),
        "rows": [list(row) for row in rows],
    }
    _emit(job, payload, rows=rows, title="verify-vl, l=%d, r=%d" % (l, r))
    _print_report(job, rows)
    return _rows_exit(rows)


def _random_partition(rng):
    rows = sorted((rng.randint(1, 5) for _ in range(rng.randint(0, 4))), reverse=True)
    return tuple(rows)


def _cmd_content_check(job):
    p = job.params
    trials = p.get("trials")
    rng = random.Random(p.get("seed"))
    rows = []
    for trial in range(trials):
        lam = _random_partition(rng)
        n = sum(lam) + (lam[0] if lam else 0) + rng.randint(0, 5)
        ok = interpolated_omega_value(lam, n) == Fraction(content(pad(lam, n)))
        rows.append(
            (
                "content/trial-%03d" % trial,
                json.dumps({"lam": list(lam), "n": n}, sort_keys=True, separators=(",", ":")),
                "pass" if ok else "FAIL",
                "",
            )
        )
    payload = {
        "format": "verification-run/1",
        "command": "content-check",
        "params": {"trials": trials, "seed": p.get("seed")},
        "pass": all(row[2] != "FAIL" for row in rows),
        "rows": [list(row) for row in rows],
    }
    _emit(job, payload, rows=rows, title="content-check, %d trials" % trials)
    _print_report(job, rows)
    return _rows_exit(rows)


# ---------------------------------------------------------------------------
# argument parsing and dispatch
# ---------------------------------------------------------------------------

_DISPATCH = {
    "mul": _cmd_mul,
    "sandwich": _cmd_sandwich,
    "tgen": _cmd_tgen,
    "expand": _cmd_expand,
    "structure-constants": _cmd_structure_constants,
    "specialize": _cmd_specialize,
    "verify-guay": _cmd_verify_guay,
    "verify-vl": _cmd_verify_vl,
    "content-check": _cmd_content_check,
}


def run(job):
    """Dispatch one validated JobSpec; returns the exit status."""
    return _DISPATCH[job.command](job)


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="ddca",
        description="Exact spherical Cherednik / deformed double current algebra engine.",
    )
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--n", type=int, help="number of sites / rank")
    common.add_argument("--r", type=int, help="matrix size r")
    common.add_argument("--t", help="numeric value for t, as p or p/q (default: symbolic)")
    common.add_argument("--k", help="numeric value for k, as p or p/q (default: symbolic)")
    common.add_argument("--max-weight", type=int, dest="max_weight", help="weight bound for batch runs")
    common.add_argument("--cache-dir", dest="cache_dir", help="table cache directory (default: $DDCA_CACHE_DIR)")
    common.add_argument("--no-cache", action="store_true", dest="no_cache", help="bypass the table cache")
    common.add_argument("--threads", type=int, default=1, help="worker processes for batch subtasks")
    common.add_argument("--out", help="artifact base path: writes BASE.json (+ BASE.csv/BASE.png for reports and tables)")
    common.add_argument("--pretty", action="store_true", help="also print a human-readable rendering")

    sub = parser.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("mul", parents=[common], help="product of two serialized algebra elements")
    sp.add_argument("lhs", help="left factor, JSON or @file")
    sp.add_argument("rhs", help="right factor, JSON or @file")

    sp = sub.add_parser("sandwich", parents=[common], help="e * x * e as a spherical element")
    sp.add_argument("elem", help="ambient element, JSON or @file")

    sp = sub.add_parser("tgen", parents=[common], help="spherical generator T_{p,q}(g)")
    sp.add_argument("--p", type=int, required=True, help="x-degree")
    sp.add_argument("--q", type=int, required=True, help="y-degree")
    sp.add_argument("--g", required=True, help="r x r matrix, JSON rows of rationals")

    sp = sub.add_parser("expand", parents=[common], help="T-basis expansion of a spherical element")
    sp.add_argument("elem", help="spherical element, JSON or @file")
    sp.add_argument("--loose", action="store_true", help="skip the rank-vs-degree admissibility gate")

    sp = sub.add_parser(
        "structure-constants",
        parents=[common],
        help="rank-interpolated tables for T(m1) * T(m2)",
    )
    sp.add_argument("--m1", help="first index, JSON triples [[p,q,label,mult],...]")
    sp.add_argument("--m2", help="second index, same format")

    sp = sub.add_parser("specialize", parents=[common], help="table at a concrete rank K = n")
    sp.add_argument("table", help="structure table, JSON or @file")
    sp.add_argument("--check", action="store_true", help="compare with the direct finite-rank product")

    sp = sub.add_parser("verify-guay", parents=[common], help="DDCA relation suite in the spherical algebra")
    sp.add_argument("--all-indices", action="store_true", dest="all_indices", help="every admissible (a,b,c,d)")
    sp.add_argument("--a", type=int)
    sp.add_argument("--b", type=int)
    sp.add_argument("--c", type=int)
    sp.add_argument("--d", type=int)
    sp.add_argument("--k-extraction", action="store_true", dest="k_extraction", help="also run the rank-extraction identities")

    sp = sub.add_parser("verify-vl", parents=[common], help="tensor module relations and commuting square")
    sp.add_argument("--l", type=int, help="number of tensor factors")
    sp.add_argument("--max-degree", type=int, dest="max_degree", default=2, help="degree bound for spanning vectors")

    sp = sub.add_parser("content-check", parents=[common], help="interpolated content identity sweep")
    sp.add_argument("--trials", type=int, default=200)
    sp.add_argument("--seed", type=int, default=0)

    return parser


def main(argv=None):
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        job = JobSpec.from_args(args)
        job.validate()
        return run(job)
    except UsageError as exc:
        print("usage error: %s" % exc, file=sys.stderr)
        return EXIT_USAGE
    except _DOMAIN_ERRORS as exc:
        print("error: %s: %s" % (type(exc).__name__, exc), file=sys.stderr)
        return EXIT_DOMAIN
    except OSError as exc:
        print("i/o error: %s" % exc, file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
