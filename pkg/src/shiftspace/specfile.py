"""Shift-space description files.

A spec file is a JSON document: one node object with a "kind" field and
per-kind parameters; transform kinds nest child nodes.  `parse` validates
and normalizes, `build` turns a normalized node into an oracle, and `emit`
writes canonical text such that parse(emit(node)) == node.
"""

import json
from fractions import Fraction

from . import spaces, transforms
from .core import ShiftSpaceError


class SpecError(ShiftSpaceError):
    """Malformed spec document."""


# per kind: (required fields, optional fields with defaults)
_FIELDS = {
    "full": (("alphabet",), {}),
    "sft": (("alphabet", "forbidden"), {}),
    "sofic": (("alphabet", "states", "edges"), {}),
    "even": ((), {}),
    "beta": ((), {"digits": None, "beta": None, "horizon": 64,
                  "precision": 96}),
    "sturmian": (("cf",), {}),
    "context-free": ((), {}),
    "product": (("left", "right"), {}),
    "reverse": (("child",), {}),
    "higher-block": (("child", "window"), {}),
    "block-image": (("child", "radius", "table"), {"targets": None}),
    "disjoint-union": (("left", "right"), {}),
    "selector": (("child",), {}),
    "marker-interleave": (("child",), {}),
    "star-collapse": (("child",), {}),
    "sturmian-modulated": (("base", "cf"), {}),
}

_CHILD_FIELDS = ("left", "right", "child", "base")


def _check_tokens(value, where):
    if (not isinstance(value, list) or not value
            or not all(isinstance(t, str) and t for t in value)):
        raise SpecError("%s must be a nonempty list of token strings"
                        % where)
    return list(value)


def _check_int(value, where, low=None):
    if not isinstance(value, int) or isinstance(value, bool):
        raise SpecError("%s must be an integer" % where)
    if low is not None and value < low:
        raise SpecError("%s must be >= %d" % (where, low))
    return value


def _normalize(node, path):
    if not isinstance(node, dict):
        raise SpecError("%s: node must be an object" % path)
    kind = node.get("kind")
    if kind not in _FIELDS:
        raise SpecError("%s: unknown kind %r (expected one of %s)"
                        % (path, kind, sorted(_FIELDS)))
    required, optional = _FIELDS[kind]
    allowed = {"kind"} | set(required) | set(optional)
    extra = set(node) - allowed
    if extra:
        raise SpecError("%s: unknown fields %s for kind %r"
                        % (path, sorted(extra), kind))
    missing = [f for f in required if f not in node]
    if missing:
        raise SpecError("%s: kind %r requires fields %s"
                        % (path, kind, missing))
    out = {"kind": kind}
    for f in required:
        out[f] = node[f]
    for f, dflt in optional.items():
        out[f] = node.get(f, dflt)

    if kind in ("full", "sft", "sofic"):
        out["alphabet"] = _check_tokens(out["alphabet"],
                                        path + ".alphabet")
    if kind == "sft":
        words = []
        for i, w in enumerate(out["forbidden"] if isinstance(
                out["forbidden"], list) else [None]):
            if isinstance(w, str) and w:
                words.append(w)
            elif isinstance(w, list) and all(isinstance(t, str) for t in w):
                words.append(list(w))
            else:
                raise SpecError("%s.forbidden[%d]: words are strings or "
                                "token lists" % (path, i))
        out["forbidden"] = words
    if kind == "sofic":
        out["states"] = _check_tokens(out["states"], path + ".states")
        edges = []
        for i, e in enumerate(out["edges"] if isinstance(out["edges"], list)
                              else [None]):
            if (not isinstance(e, list) or len(e) != 3
                    or not all(isinstance(v, str) for v in e)):
                raise SpecError("%s.edges[%d]: edges are [from, label, to] "
                                "string triples" % (path, i))
            edges.append(list(e))
        out["edges"] = edges
    if kind == "beta":
        if (out["digits"] is None) == (out["beta"] is None):
            raise SpecError("%s: beta nodes take exactly one of 'digits' "
                            "or 'beta'" % path)
        if out["digits"] is not None:
            d = out["digits"]
            if not isinstance(d, dict) or set(d) - {"preperiod", "period"}:
                raise SpecError("%s.digits: object with fields preperiod, "
                                "period" % path)
            pre = d.get("preperiod", [])
            per = d.get("period")
            if not isinstance(pre, list) or not all(
                    isinstance(v, int) and not isinstance(v, bool) and v >= 0
                    for v in pre):
                raise SpecError("%s.digits.preperiod: list of digits" % path)
            if per is not None and (not isinstance(per, list) or not per
                                    or not all(isinstance(v, int)
                                               and not isinstance(v, bool)
                                               and v >= 0 for v in per)):
                raise SpecError("%s.digits.period: null or a nonempty list "
                                "of digits" % path)
            out["digits"] = {"preperiod": list(pre),
                             "period": list(per) if per is not None
                             else None}
        else:
            b = out["beta"]
            if isinstance(b, bool) or not isinstance(b, (int, float, str)):
                raise SpecError("%s.beta: number or expression string"
                                % path)
            out["horizon"] = _check_int(out["horizon"],
                                        path + ".horizon", 1)
            out["precision"] = _check_int(out["precision"],
                                          path + ".precision", 4)
    if kind in ("sturmian", "sturmian-modulated"):
        cf = out["cf"]
        if (not isinstance(cf, list) or len(cf) < 2
                or not all(isinstance(v, int) and not isinstance(v, bool)
                           and v >= 1 for v in cf)):
            raise SpecError("%s.cf: list of >= 2 positive integers" % path)
        out["cf"] = list(cf)
    if kind == "higher-block":
        out["window"] = _check_int(out["window"], path + ".window", 1)
    if kind == "block-image":
        out["radius"] = _check_int(out["radius"], path + ".radius", 0)
        table = out["table"]
        if (not isinstance(table, dict) or not table
                or not all(isinstance(k, str) and isinstance(v, str) and v
                           for k, v in table.items())):
            raise SpecError("%s.table: object mapping window words to "
                            "target tokens" % path)
        out["table"] = dict(sorted(table.items()))
        if out["targets"] is not None:
            out["targets"] = _check_tokens(out["targets"],
                                           path + ".targets")
    for f in _CHILD_FIELDS:
        if f in out:
            out[f] = _normalize(out[f], path + "." + f)
    return out


def parse(text):
    """Normalized spec node from JSON text."""
    try:
        doc = json.loads(text)
    except ValueError as exc:
        raise SpecError("invalid JSON: %s" % exc)
    return _normalize(doc, "spec")


def parse_file(path):
    with open(path) as fh:
        return parse(fh.read())


def emit(node):
    """Canonical text form; parse(emit(node)) == node."""
    return json.dumps(node, indent=2, sort_keys=True) + "\n"


def _num(value):
    # json numbers arrive as int/float; strings may hold exact forms
    if isinstance(value, str):
        s = value.strip()
        if "/" in s:
            try:
                return Fraction(s)
            except ValueError:
                return s
        try:
            return int(s)
        except ValueError:
            return s
    return value


def build(node):
    """LanguageOracle for a normalized spec node."""
    kind = node["kind"]
    if kind == "full":
        return spaces.full_shift(node["alphabet"])
    if kind == "sft":
        return spaces.sft(node["alphabet"], node["forbidden"])
    if kind == "sofic":
        p = spaces.SoficPresentation(node["alphabet"], node["states"],
                                     [tuple(e) for e in node["edges"]])
        return spaces.sofic(p)
    if kind == "even":
        return spaces.even_shift()
    if kind == "beta":
        if node["digits"] is not None:
            digits = spaces.BetaDigits(node["digits"]["preperiod"],
                                       node["digits"]["period"])
        else:
            digits = spaces.beta_dstar_digits(_num(node["beta"]),
                                              node["horizon"],
                                              node["precision"])
        return spaces.beta_shift(digits)
    if kind == "sturmian":
        return spaces.sturmian(node["cf"])
    if kind == "context-free":
        return spaces.context_free_shift()
    if kind == "product":
        return transforms.product(build(node["left"]), build(node["right"]))
    if kind == "reverse":
        return transforms.reverse(build(node["child"]))
    if kind == "higher-block":
        return transforms.higher_block(build(node["child"]), node["window"])
    if kind == "block-image":
        return transforms.block_image(build(node["child"]),
                                      2 * node["radius"] + 1,
                                      node["table"], node["targets"])
    if kind == "disjoint-union":
        return transforms.disjoint_union(build(node["left"]),
                                         build(node["right"]))
    if kind == "selector":
        return transforms.selector_shift(build(node["child"]))
    if kind == "marker-interleave":
        return transforms.marker_interleave(build(node["child"]))
    if kind == "star-collapse":
        return transforms.star_collapse(build(node["child"]))
    assert kind == "sturmian-modulated"
    return transforms.sturmian_modulated(build(node["base"]), node["cf"])


def load(path):
    """Parse a spec file and build its oracle."""
    return build(parse_file(path))
