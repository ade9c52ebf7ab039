"""Command-line interface.

Subcommands: words, classes, entropy, constraints, verify.  CSV output
starts with `# key=value` config lines then a header row; JSON output is a
pure array of row objects with the same field names (config goes to
stderr).  Identical spec + config + seed give byte-identical output.

Exit codes: 0 success, 1 verification check failed, 2 usage/spec error,
3 resource cap exceeded.
"""

import argparse
import csv
import json
import sys

from . import specfile
from .classify import classify_bounded, classify_sofic_exact, k_sweep, \
    left_constraint_count
from .core import (DEFAULT_CAP, CountRow, CountTable, ResourceCapError,
                   ShiftSpaceError, enumerate_language, language_size)
from .entropy import estimate

_MODE_NAMES = {"f": "follower", "p": "predecessor", "e": "extender"}
_QUANTITIES = ("h", "h_E", "h_F", "h_P")


def _fmt(value):
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return "%.12g" % value
    return str(value)


def _emit(rows, columns, config, fmt, out=None, err=None):
    out = sys.stdout if out is None else out
    err = sys.stderr if err is None else err
    if fmt == "json":
        print("# " + " ".join("%s=%s" % (k, _fmt(v)) for k, v in config),
              file=err)
        doc = [{c: row.get(c) for c in columns} for row in rows]
        out.write(json.dumps(doc, indent=2) + "\n")
        return
    for key, value in config:
        out.write("# %s=%s\n" % (key, _fmt(value)))
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([_fmt(row.get(c)) for c in columns])


def _modes(flag):
    if flag == "all":
        return ["follower", "predecessor", "extender"]
    return [_MODE_NAMES[flag]]


def run_words(oracle, n, cap):
    return [{"word": str(w)} for w in enumerate_language(oracle, n, cap)]


def run_classes(oracle, max_n, modes, k=None, k_max=None, stability=2,
                cap=DEFAULT_CAP):
    """CountTable over n = 1..max_n.

    Preference order per row: sofic-exact counts when a presentation is
    known and no explicit k was forced (k_used emitted as -1); otherwise
    bounded classification, all modes at one common context depth so the
    cross-mode inequalities are comparable.
    """
    rows = []
    exact_path = k is None and oracle.presentation is not None
    bound = oracle.exact_context_bound
    for n in range(1, max_n + 1):
        count_l = language_size(oracle, n, cap)
        counts = {}
        exact = {}
        if exact_path:
            for mode in modes:
                counts[mode] = classify_sofic_exact(oracle.presentation, n,
                                                    mode)
                exact[mode] = True
            k_used = -1
        else:
            if k is not None:
                k_used = k
            else:
                swept = [k_sweep(oracle, n, mode, k_max=k_max,
                                 stability_window=stability, cap=cap)
                         for mode in modes]
                k_used = max(s.k_used for s in swept)
            for mode in modes:
                counts[mode] = classify_bounded(oracle, n, k_used, mode,
                                                cap).count
                exact[mode] = bound is not None and k_used >= bound
        rows.append(CountRow(
            n, count_l,
            counts.get("follower"), counts.get("predecessor"),
            counts.get("extender"), k_used,
            exact.get("follower"), exact.get("predecessor"),
            exact.get("extender")))
    return CountTable(rows)


def _classes_rows(table):
    rows = []
    for r in table:
        rows.append({"n": r.n, "count_L": r.count_L, "count_F": r.count_F,
                     "count_P": r.count_P, "count_E": r.count_E,
                     "k_used": r.k_used, "exact_F": r.exact_F,
                     "exact_P": r.exact_P, "exact_E": r.exact_E})
    return rows


def run_entropy(table, quantities):
    rows = []
    for q in quantities:
        est = estimate(table, q)
        for r in est:
            rows.append({"quantity": q, "n": r.n, "count": r.count,
                         "value": r.value, "exact": r.exact,
                         "certified_upper_bound":
                             est.certified_upper_bound})
    return rows


def run_constraints(oracle, max_n, k=None, cap=DEFAULT_CAP):
    bound = oracle.exact_context_bound
    rows = []
    for n in range(2, max_n + 1):
        kk = k if k is not None else (bound if bound is not None else n + 2)
        count = left_constraint_count(oracle, n, kk, cap)
        rows.append({"n": n, "count_C": count, "k_used": kk,
                     "exact": bound is not None and kk >= bound})
    return rows


def build_parser():
    ap = argparse.ArgumentParser(
        prog="shiftspace",
        description="Count words and context classes of shift spaces.")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, spec=True):
        if spec:
            p.add_argument("--spec", required=True,
                           help="path to a shift spec file (JSON)")
        p.add_argument("--format", choices=("csv", "json"), default="csv")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--cap", type=int, default=DEFAULT_CAP,
                       help="max words per language level")

    p = sub.add_parser("words", help="list the words of length n")
    common(p)
    p.add_argument("--n", type=int, required=True)

    for name in ("classes", "entropy"):
        p = sub.add_parser(
            name, help="per-n context class counts" if name == "classes"
            else "per-n entropy estimate sequences")
        common(p)
        p.add_argument("--max-n", type=int, required=True)
        p.add_argument("--k", type=int, default=None,
                       help="fixed context depth (skips sweeping)")
        p.add_argument("--k-max", type=int, default=None)
        p.add_argument("--stability", type=int, default=2)
        p.add_argument("--mode", choices=("f", "p", "e", "all"),
                       default="all")
        if name == "entropy":
            p.add_argument("--quantity",
                           choices=_QUANTITIES + ("all",), default="all")

    p = sub.add_parser("constraints",
                       help="per-n left-constraint counts")
    common(p)
    p.add_argument("--max-n", type=int, required=True)
    p.add_argument("--k", type=int, default=None)

    p = sub.add_parser("verify", help="run the verification checks")
    common(p, spec=False)
    p.add_argument("--suite",
                   choices=("paper-examples", "inequalities",
                            "constructions", "all"),
                   default="all")
    return ap


def main(argv=None):
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return _dispatch(args)
    except ResourceCapError as exc:
        print("resource cap: %s" % exc, file=sys.stderr)
        return 3
    except (ShiftSpaceError, OSError) as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 2


def _dispatch(args):
    config = [("command", args.command), ("seed", args.seed),
              ("cap", args.cap)]
    if args.command == "verify":
        from .verify import run_suite
        results = run_suite(args.suite, seed=args.seed, cap=args.cap)
        config.insert(1, ("suite", args.suite))
        rows = [{"check_id": r.check_id, "property": r.property,
                 "params": r.params, "observed": r.observed,
                 "required": r.required, "verdict": r.verdict}
                for r in results]
        _emit(rows, ("check_id", "property", "params", "observed",
                     "required", "verdict"), config, args.format)
        return 1 if any(r.verdict == "FAIL" for r in results) else 0

    oracle = specfile.load(args.spec)
    config.insert(1, ("spec", args.spec))
    if args.command == "words":
        config.append(("n", args.n))
        _emit(run_words(oracle, args.n, args.cap), ("word",), config,
              args.format)
        return 0

    if args.command == "constraints":
        config.append(("max_n", args.max_n))
        config.append(("k", args.k))
        _emit(run_constraints(oracle, args.max_n, args.k, args.cap),
              ("n", "count_C", "k_used", "exact"), config, args.format)
        return 0

    modes = _modes(args.mode)
    config.extend([("max_n", args.max_n), ("mode", args.mode),
                   ("k", args.k), ("k_max", args.k_max),
                   ("stability", args.stability)])
    table = run_classes(oracle, args.max_n, modes, k=args.k,
                        k_max=args.k_max, stability=args.stability,
                        cap=args.cap)
    if args.command == "classes":
        _emit(_classes_rows(table),
              ("n", "count_L", "count_F", "count_P", "count_E", "k_used",
               "exact_F", "exact_P", "exact_E"), config, args.format)
        return 0

    quantities = (_QUANTITIES if args.quantity == "all"
                  else (args.quantity,))
    config.append(("quantity", args.quantity))
    _emit(run_entropy(table, quantities),
          ("quantity", "n", "count", "value", "exact",
           "certified_upper_bound"), config, args.format)
    return 0


if __name__ == "__main__":
    sys.exit(main())
