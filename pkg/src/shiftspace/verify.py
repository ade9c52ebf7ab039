"""Verification checks: finite-n count identities and inequalities.

Each check recomputes counts from scratch through the public machinery and
compares them against an independently stated requirement (closed-form
bound, factored identity, or a brute-force recomputation).  Checks are
grouped into suites; `run_suite` returns one CheckResult per check with
verdict PASS, FAIL, or ERROR (resource caps and construction failures
report as ERROR, never as silent passes).
"""

import math
from fractions import Fraction

from . import spaces, transforms
from .classify import (classify_bounded, classify_sofic_exact, k_sweep,
                       left_constraint_count)
from .core import (DEFAULT_CAP, ResourceCapError, ShiftSpaceError,
                   enumerate_language, language_size, subword_count)
from .entropy import estimate
from .cli import run_classes

_GOLDEN_DIGITS = ((), (1, 0))


class CheckResult:
    __slots__ = ("check_id", "property", "params", "observed", "required",
                 "verdict")

    def __init__(self, check_id, prop, params, observed, required, verdict):
        self.check_id = check_id
        self.property = prop
        self.params = params
        self.observed = observed
        self.required = required
        self.verdict = verdict

    def __repr__(self):
        return "CheckResult(%s: %s)" % (self.check_id, self.verdict)


def _golden_beta():
    return spaces.beta_shift(spaces.BetaDigits(*_GOLDEN_DIGITS))


def _golden_sft():
    return spaces.sft(["0", "1"], ["11"])


def _exact_counts(presentation, mode, ns, **kw):
    return [classify_sofic_exact(presentation, n, mode, **kw) for n in ns]


# --- individual checks -----------------------------------------------------


def _check_even_table(seed, cap):
    table = run_classes(spaces.even_shift(), 5,
                        ["follower", "predecessor", "extender"], cap=cap)
    obs = {"F": table.counts("F"), "P": table.counts("P"),
           "E": table.counts("E"),
           "exact": all(r.exact_F and r.exact_P and r.exact_E
                        for r in table)}
    req = {"F": [2, 3, 3, 3, 3], "P": [2, 3, 3, 3, 3],
           "E": [2, 5, 6, 6, 6], "exact": True}
    return "n=1..5", obs, req, obs == req


def _check_full_shift(seed, cap):
    table = run_classes(spaces.full_shift(["0", "1"]), 6,
                        ["follower", "predecessor", "extender"], cap=cap)
    bound = estimate(table, "h_E").certified_upper_bound
    obs = {"F": table.counts("F"), "P": table.counts("P"),
           "E": table.counts("E"), "h_E_bound": bound}
    req = {"F": [1] * 6, "P": [1] * 6, "E": [1] * 6, "h_E_bound": 0.0}
    return "n=1..6", obs, req, obs == req


def _check_submultiplicative(seed, cap):
    shifts = [("even", spaces.even_shift().presentation)]
    for i in (0, 1):
        shifts.append(("random-%d" % i,
                       spaces.random_sofic_presentation(
                           4, ["0", "1"], seed + i)))
    bad = []
    for name, pres in shifts:
        e = _exact_counts(pres, "extender", range(1, 9))
        for n in range(1, 8):
            for m in range(1, 8 - n + 1):
                if e[n + m - 1] > e[n - 1] * e[m - 1]:
                    bad.append((name, n, m, e[n + m - 1],
                                e[n - 1] * e[m - 1]))
    obs = bad if bad else "no violations over %d shifts" % len(shifts)
    return ("seeds=%d,%d n+m<=8" % (seed, seed + 1), obs,
            "|E(n+m)| <= |E(n)||E(m)|", not bad)


def _check_product(seed, cap):
    ev = spaces.even_shift()
    factor = _exact_counts(ev.presentation, "extender", range(1, 5))
    prod = transforms.product(ev, ev)
    swept = [k_sweep(prod, n, "extender", cap=cap).count
             for n in range(1, 5)]
    req = [f * f for f in factor]
    return ("n=1..4", {"product": swept, "factor": factor},
            {"product": req}, swept == req)


def _check_higher_block_sandwich(seed, cap):
    ev = spaces.even_shift()
    z = transforms.higher_block(ev, 3)
    ex = _exact_counts(ev.presentation, "extender", range(5, 9))
    ez = _exact_counts(z.presentation, "extender", range(5, 9))
    ok = all(a <= b <= 16 * a for a, b in zip(ex, ez))
    return ("window=3 n=5..8", {"E_X": ex, "E_Z": ez},
            "E_X <= E_Z <= 16*E_X", ok)


def _check_reversal(seed, cap):
    cases = []
    for name, oracle in [("even", spaces.even_shift()),
                         ("golden-sft", _golden_sft()),
                         ("context-free", spaces.context_free_shift())]:
        rev = transforms.reverse(oracle)
        for n in range(1, 7):
            if oracle.presentation is not None:
                f = classify_sofic_exact(oracle.presentation, n, "follower")
                p = classify_sofic_exact(rev.presentation, n, "predecessor")
                ex = classify_sofic_exact(oracle.presentation, n,
                                          "extender")
                ey = classify_sofic_exact(rev.presentation, n, "extender")
            else:
                kk = max(k_sweep(oracle, n, "follower", cap=cap,
                                 stability_window=3).k_used,
                         k_sweep(rev, n, "predecessor", cap=cap,
                                 stability_window=3).k_used,
                         k_sweep(oracle, n, "extender", cap=cap,
                                 stability_window=3).k_used)
                f = classify_bounded(oracle, n, kk, "follower", cap).count
                p = classify_bounded(rev, n, kk, "predecessor", cap).count
                ex = classify_bounded(oracle, n, kk, "extender", cap).count
                ey = classify_bounded(rev, n, kk, "extender", cap).count
            cases.append((name, n, f, p, ex, ey))
    bad = [c for c in cases if c[2] != c[3] or c[4] != c[5]]
    obs = bad if bad else "all %d cases matched" % len(cases)
    return ("even, golden-sft, context-free; n=1..6", obs,
            "|F_X|=|P_rev| and |E_X|=|E_rev|", not bad)


def _check_beta_facts(seed, cap):
    b = _golden_beta()
    f = _exact_counts(b.presentation, "follower", range(1, 9))
    p = _exact_counts(b.presentation, "predecessor", range(1, 9))
    digits = spaces.BetaDigits(*_GOLDEN_DIGITS)
    sub = [subword_count(digits, n) for n in range(1, 9)]
    ok = (all(f[n - 1] <= n + 1 for n in range(1, 9))
          and p == sub and all(s == 2 for s in sub))
    return ("golden d*=(10)^inf n=1..8", {"F": f, "P": p, "subwords": sub},
            "F(n) <= n+1 and P(n) = subword_count = 2", ok)


def _check_context_free_bounds(seed, cap):
    cf = spaces.context_free_shift()
    rows = []
    ok = True
    for n in range(2, 7):
        f = k_sweep(cf, n, "follower", stability_window=3, cap=cap).count
        e = k_sweep(cf, n, "extender", stability_window=3, cap=cap).count
        rows.append((n, f, e))
        ok = ok and f < 3 * n * n and e < 9 * n**4
    return ("n=2..6", rows, "F(n) < 3n^2 and E(n) < 9n^4", ok)


def _check_collapse_blowup(seed, cap):
    y = transforms.star_collapse(
        transforms.marker_interleave(spaces.context_free_shift()))
    big = max(cap, 200_000_000)
    obs = {}
    ok = True
    for n, need in ((4, 2), (8, 4)):
        count = k_sweep(y, n, "follower", k_max=12, stability_window=3,
                        cap=big).count
        if count < need:
            count = classify_bounded(y, n, 12, "follower", big).count
        obs[n] = count
        ok = ok and count >= need
    return ("star-collapsed marked shift, k up to 12", obs,
            "F(4) >= 2 and F(8) >= 4", ok)


def _check_union_selector_chain(seed, cap):
    x1 = transforms.reverse(_golden_beta())
    x2 = transforms.disjoint_union(x1, x1)
    f1 = _exact_counts(x1.presentation, "follower", range(1, 6))
    f2 = _exact_counts(x2.presentation, "follower", range(1, 6))
    doubled = f2 == [2 * v for v in f1]
    x3 = transforms.selector_shift(x2)
    x4 = transforms.higher_block(x3, 2)

    def collapse_ab(tokens):
        inner = tokens[0][1:-1].split(",")
        return "*" if inner[0] in ("a", "b") else tokens[0]

    x5 = transforms.block_image(x4, 1, collapse_ab)
    obs = {"F_X2": f2, "2*F_X1": [2 * v for v in f1]}
    ok = doubled
    big = max(cap, 60_000_000)
    for n in (1, 2):
        # bounded counts only grow with k, and any of them already lower-
        # bounds the true class count, so stop as soon as the target is hit
        need = f1[n - 1] ** 2
        count = 0
        for k in range(7):
            count = classify_bounded(x5, 2 * n, k, "follower", big).count
            if count >= need:
                break
        obs["F_X5(%d)" % (2 * n)] = count
        ok = ok and count >= need
    return ("X1=reverse(golden beta); union, selector, 2-block, collapse",
            obs, "F_X2 = 2 F_X1 (n=1..5); F_X5(2n) >= F_X1(n)^2 (n=1,2)",
            ok)


def _check_modulated_sandwich(seed, cap):
    base = _golden_beta()
    z = transforms.sturmian_modulated(base, [1] * 10)
    eta = Fraction(z.modulator.eta)
    rows = []
    ok = True
    for n in range(2, 9):
        lo = int(n * eta)
        hi = lo if n * eta == lo else lo + 1
        lz = language_size(z, n, cap)
        llo = language_size(base, lo, cap) if lo else 1
        lhi = language_size(base, hi, cap)
        ok = ok and (n + 1) * llo <= lz <= (n + 1) * lhi
        se = k_sweep(z, n, "extender", stability_window=3, cap=cap)
        if lo >= 1:
            sb = k_sweep(base, lo, "extender", stability_window=3, cap=cap)
            kk = max(se.k_used, sb.k_used)
            ez = classify_bounded(z, n, kk, "extender", cap).count
            eb = classify_bounded(base, lo, kk, "extender", cap).count
        else:
            ez, eb = se.count, 1
        ok = ok and ez >= eb
        rows.append((n, lo, hi, llo, lz, lhi, ez, eb))
    return ("golden beta base, cf=[1]*10, n=2..8", rows,
            "(n+1)L_lo <= L_n(Z) <= (n+1)L_hi and E_Z(n) >= E_base(lo)",
            ok)


def _check_bounded_vs_exact(seed, cap):
    bad = []
    for name, oracle in [("golden-sft", _golden_sft()),
                         ("even", spaces.even_shift())]:
        for mode in ("follower", "predecessor", "extender"):
            for n in range(1, 7):
                swept = k_sweep(oracle, n, mode, stability_window=3,
                                cap=cap).count
                exact = classify_sofic_exact(oracle.presentation, n, mode)
                if swept != exact:
                    bad.append((name, mode, n, swept, exact))
    obs = bad if bad else "all sweep counts matched exact counts"
    return ("golden-sft + even, all modes, n=1..6", obs,
            "k_sweep count = classify_sofic_exact count", not bad)


def _brute_left_constraints(oracle, n, k):
    ctx = [()]
    for m in range(1, k + 1):
        ctx += [tuple(w.indices) for w in enumerate_language(oracle, m)]
    count = 0
    for w in enumerate_language(oracle, n):
        w = tuple(w.indices)
        fw = frozenset(u for u in ctx if oracle._member(w + u))
        fv = frozenset(u for u in ctx if oracle._member(w[1:] + u))
        count += fw != fv
    return count


def _check_left_constraints(seed, cap):
    full = spaces.full_shift(["0", "1"])
    full_counts = [left_constraint_count(full, n, 2, cap)
                   for n in range(2, 9)]
    b = _golden_beta()
    fast = [left_constraint_count(b, n, 3, cap) for n in range(2, 7)]
    brute = [_brute_left_constraints(b, n, 3) for n in range(2, 7)]
    ok = all(c == 0 for c in full_counts) and fast == brute
    return ("full shift n=2..8; golden beta n=2..6 k=3",
            {"full": full_counts, "beta": fast, "beta_brute": brute},
            "full shift all 0; beta counts match brute force", ok)


_CHECKS = [
    ("even-count-table",
     "even-shift follower/predecessor/extender count table",
     "paper-examples", _check_even_table),
    ("full-shift-counts",
     "full shift has one context class per mode and zero extender entropy "
     "bound", "paper-examples", _check_full_shift),
    ("submultiplicativity",
     "extender counts are submultiplicative",
     "inequalities", _check_submultiplicative),
    ("product-extender-counts",
     "extender counts of a product are products of factor counts",
     "constructions", _check_product),
    ("higher-block-sandwich",
     "3-block recoding keeps extender counts within an alphabet-power "
     "factor", "inequalities", _check_higher_block_sandwich),
    ("reversal-duality",
     "reversal swaps follower and predecessor counts and preserves "
     "extender counts", "constructions", _check_reversal),
    ("beta-follower-predecessor",
     "golden beta-shift follower counts under n+1 and predecessor counts "
     "equal digit-word subword counts", "paper-examples", _check_beta_facts),
    ("context-free-poly-bounds",
     "context-free shift class counts under polynomial bounds",
     "inequalities", _check_context_free_bounds),
    ("collapse-follower-blowup",
     "marker interleave plus star collapse multiplies follower classes",
     "constructions", _check_collapse_blowup),
    ("union-selector-chain",
     "union doubling and selector-chain squared lower bound on follower "
     "counts", "constructions", _check_union_selector_chain),
    ("modulated-complexity-sandwich",
     "rotation-modulated shift complexity sandwich and extender lower "
     "bound", "inequalities", _check_modulated_sandwich),
    ("bounded-vs-exact-counts",
     "bounded sweeps agree with presentation-exact counts",
     "paper-examples", _check_bounded_vs_exact),
    ("left-constraint-counts",
     "left-constraint counts: zero on the full shift, brute-force match "
     "on the golden beta-shift", "paper-examples", _check_left_constraints),
]


def run_suite(suite="all", seed=0, cap=DEFAULT_CAP):
    """Run one suite (or all checks) and return CheckResults in order."""
    results = []
    for check_id, prop, group, fn in _CHECKS:
        if suite != "all" and group != suite:
            continue
        try:
            params, observed, required, ok = fn(seed, cap)
            verdict = "PASS" if ok else "FAIL"
        except ResourceCapError as exc:
            params, observed, required = "", "resource cap: %s" % exc, ""
            verdict = "ERROR"
        except ShiftSpaceError as exc:
            params, observed, required = "", "%s" % exc, ""
            verdict = "ERROR"
        results.append(CheckResult(check_id, prop, str(params),
                                   str(observed), str(required), verdict))
    return results
