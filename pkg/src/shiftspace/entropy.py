"""Entropy estimate sequences from count tables.

Per-n values are log(count)/n (natural log).  For the quantities whose
count sequences are submultiplicative -- |L_n| and exact |E(n)| -- the
minimum over exact rows is a certified upper bound for the limit (Fekete:
a subadditive sequence converges to its infimum).  Follower, predecessor,
and constraint quantities are limsups, so only raw sequences are reported
for them.
"""

import math

from .core import CountTable, DomainError

QUANTITIES = ("h", "h_E", "h_F", "h_P", "h_C")

_COLUMN = {"h": "L", "h_E": "E", "h_F": "F", "h_P": "P"}


class EntropyRow:
    __slots__ = ("n", "count", "value", "exact")

    def __init__(self, n, count, value, exact):
        self.n = n
        self.count = count
        self.value = value
        self.exact = exact

    def __repr__(self):
        return "EntropyRow(n=%d, count=%d, value=%.6f, exact=%s)" % (
            self.n, self.count, self.value, self.exact)


class EntropyEstimate:
    """Finite-n entropy sequence for one quantity.

    certified_upper_bound is None unless the quantity supports Fekete
    certificates (h, h_E) and at least one row is exact.
    """

    def __init__(self, quantity, rows, certified_upper_bound):
        self.quantity = quantity
        self.rows = rows
        self.certified_upper_bound = certified_upper_bound

    def __iter__(self):
        return iter(self.rows)

    def __len__(self):
        return len(self.rows)

    def __repr__(self):
        bound = ("%.6f" % self.certified_upper_bound
                 if self.certified_upper_bound is not None else "none")
        return "EntropyEstimate(%s, %d rows, bound=%s)" % (
            self.quantity, len(self.rows), bound)


def _value(count, n):
    # zero counts (possible for left constraints) contribute value 0
    return math.log(count) / n if count > 0 else 0.0


def estimate(table, quantity):
    """EntropyEstimate for one quantity from a CountTable.

    For h_C, `table` is instead an iterable of (n, count, exact) triples
    as produced by the left-constraint runs.
    """
    if quantity not in QUANTITIES:
        raise DomainError("quantity must be one of %s" % (QUANTITIES,))
    rows = []
    if quantity == "h_C":
        if isinstance(table, CountTable):
            raise DomainError("h_C needs (n, count, exact) rows, not a "
                              "count table")
        for n, count, exact in table:
            rows.append(EntropyRow(int(n), int(count),
                                   _value(int(count), int(n)), bool(exact)))
        rows.sort(key=lambda r: r.n)
    else:
        col = _COLUMN[quantity]
        for r in table:
            count = getattr(r, "count_" + col)
            if count is None:
                continue
            exact = (True if quantity == "h"
                     else bool(getattr(r, "exact_" + col)))
            rows.append(EntropyRow(r.n, int(count), _value(count, r.n),
                                   exact))
    if not rows:
        raise DomainError("no rows with %s counts" % quantity)
    bound = None
    if quantity in ("h", "h_E"):
        exact_vals = [r.value for r in rows if r.exact]
        if exact_vals:
            bound = min(exact_vals)
    return EntropyEstimate(quantity, rows, bound)


# ---------------------------------------------------------------------------
# comparisons between a shift and a transformed version of it

_RELATIONS = ("equal", "scale", "sandwich", "swap")


class GapRow:
    __slots__ = ("n", "counts_x", "counts_y", "ratio", "value_diff", "ok")

    def __init__(self, n, counts_x, counts_y, ratio, value_diff, ok):
        self.n = n
        self.counts_x = counts_x
        self.counts_y = counts_y
        self.ratio = ratio
        self.value_diff = value_diff
        self.ok = ok

    def __repr__(self):
        return "GapRow(n=%d, ratio=%s, ok=%s)" % (self.n, self.ratio,
                                                  self.ok)


class GapReport:
    def __init__(self, relation, column, factor, rows):
        self.relation = relation
        self.column = column
        self.factor = factor
        self.rows = rows

    @property
    def all_ok(self):
        return all(r.ok for r in self.rows)

    def __iter__(self):
        return iter(self.rows)

    def __repr__(self):
        return "GapReport(%s on %s, %d rows, %s)" % (
            self.relation, self.column, len(self.rows),
            "pass" if self.all_ok else "FAIL")


def gap_report(table_x, table_y, relation, column="E", factor=None):
    """Compare two count tables row by row under a stated relation.

    relation: "equal"    -- y == x on `column`
              "scale"    -- y == factor * x on `column`
              "sandwich" -- x <= y <= factor * x on `column`
              "swap"     -- F/P columns exchanged and E preserved
    Rows report the counts, the y/x ratio on `column`, and the per-symbol
    value difference log(y)/n - log(x)/n.
    """
    if relation not in _RELATIONS:
        raise DomainError("relation must be one of %s" % (_RELATIONS,))
    if relation in ("scale", "sandwich") and not factor:
        raise DomainError("relation %r needs a factor" % relation)
    xs = {r.n: r for r in table_x}
    ys = {r.n: r for r in table_y}
    if sorted(xs) != sorted(ys):
        raise DomainError("tables cover different n ranges: %s vs %s"
                          % (sorted(xs), sorted(ys)))
    rows = []
    for n in sorted(xs):
        rx, ry = xs[n], ys[n]
        cx = {c: getattr(rx, "count_" + c) for c in ("L", "F", "P", "E")}
        cy = {c: getattr(ry, "count_" + c) for c in ("L", "F", "P", "E")}
        a, b = cx[column], cy[column]
        if relation == "swap":
            checks = [(cx["F"], cy["P"]), (cx["P"], cy["F"]),
                      (cx["E"], cy["E"])]
            ok = all(u == v for u, v in checks
                     if u is not None and v is not None)
            a, b = cx["E"], cy["E"]
        elif a is None or b is None:
            ok = False
        elif relation == "equal":
            ok = b == a
        elif relation == "scale":
            ok = b == factor * a
        else:
            ok = a <= b <= factor * a
        ratio = (b / a) if a and b is not None else None
        diff = (_value(b, n) - _value(a, n)) if a and b else None
        rows.append(GapRow(n, cx, cy, ratio, diff, ok))
    return GapReport(relation, column, factor, rows)
