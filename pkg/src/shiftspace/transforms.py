"""Constructions that build new shift spaces from old ones.

Products, reversal, higher-block recodings, sliding block-code images,
disjoint unions, marker collapse, and two interleavings (selector shifts
and marker-selected data streams).  Each construction returns a
LanguageOracle; when the ingredients carry labeled-graph presentations the
result does too, so the exact classification path stays available.
"""

import numpy as np

from . import kernels
from .core import (Alphabet, AlphabetError, ConstructionError, DomainError,
                   LanguageOracle, ResourceCapError, Word, levels_of)
from .spaces import (ContextFreeOracle, SoficPresentation, cf_scanner)


def _reencode(codes, length, old_base, new_base, digit_map=None):
    """Map level codes to a different base (optionally remapping digits)."""
    if length == 0:
        return codes.astype(np.int64)
    digits = kernels.decode_digits(codes, length, old_base)
    if digit_map is not None:
        digits = digit_map[digits]
    out = np.zeros(codes.shape[0], dtype=np.int64)
    for i in range(length):
        out = out * new_base + digits[:, i].astype(np.int64)
    return out


# ---------------------------------------------------------------------------
# product


class ProductOracle(LanguageOracle):
    """Coordinatewise product; length-n words are exactly the pairs of
    length-n words of the factors."""

    level_strategy = "forward"

    def __init__(self, x, y, name=None):
        self.x, self.y = x, y
        tokens = ["(%s,%s)" % (s, t)
                  for s in x.alphabet.tokens for t in y.alphabet.tokens]
        super().__init__(tokens, name or "product(%s,%s)" % (x.name, y.name))
        kx, ky = x.exact_context_bound, y.exact_context_bound
        if kx is not None and ky is not None:
            self.exact_context_bound = max(kx, ky)
        px = getattr(x, "presentation", None)
        py = getattr(y, "presentation", None)
        if px is not None and py is not None:
            self.presentation = _tensor_presentation(px, py, self.alphabet)

    def _split(self, idx):
        by = len(self.y.alphabet)
        return [a // by for a in idx], [a % by for a in idx]

    def _member(self, idx):
        xs, ys = self._split(idx)
        return (self.x._member(tuple(xs)) and self.y._member(tuple(ys)))

    def _forward_level(self, m, cap):
        by = len(self.y.alphabet)
        cx = levels_of(self.x).level(m, cap)
        cy = levels_of(self.y).level(m, cap)
        if cx.size * cy.size > cap:
            raise ResourceCapError(
                "product level %d has %d words (cap %d)"
                % (m, cx.size * cy.size, cap),
                cap=cap, length=m, count=cx.size * cy.size)
        sx = _reencode(cx, m, len(self.x.alphabet), len(self.alphabet)) * by
        sy = _reencode(cy, m, by, len(self.alphabet))
        out = (sx[:, None] + sy[None, :]).ravel()
        out.sort()
        return out


def _tensor_presentation(px, py, alphabet):
    states = ["%s|%s" % (s, t) for s in px.states for t in py.states]
    bx = len(px.alphabet)
    by = len(py.alphabet)
    edges = []
    for f1, a1, t1 in px.edges:
        for f2, a2, t2 in py.edges:
            edges.append((states[f1 * len(py.states) + f2],
                          alphabet.tokens[a1 * by + a2],
                          states[t1 * len(py.states) + t2]))
    return SoficPresentation(alphabet, states, edges)


def product(x, y, name=None):
    return ProductOracle(x, y, name)


# ---------------------------------------------------------------------------
# reversal


class ReverseOracle(LanguageOracle):
    level_strategy = "forward"

    def __init__(self, x, name=None):
        self.x = x
        super().__init__(x.alphabet, name or "reverse(%s)" % x.name)
        self.exact_context_bound = x.exact_context_bound
        px = getattr(x, "presentation", None)
        if px is not None:
            self.presentation = px.reversed_presentation()

    def _member(self, idx):
        return self.x._member(tuple(reversed(idx)))

    def _forward_level(self, m, cap):
        codes = levels_of(self.x).level(m, cap)
        if m == 0:
            return codes.copy()
        digits = kernels.decode_digits(codes, m, len(self.alphabet))
        out = np.zeros(codes.shape[0], dtype=np.int64)
        for i in range(m - 1, -1, -1):
            out = out * len(self.alphabet) + digits[:, i].astype(np.int64)
        out.sort()
        return out


def reverse(x, name=None):
    return ReverseOracle(x, name)


# ---------------------------------------------------------------------------
# higher-block recoding


class HigherBlockOracle(LanguageOracle):
    """Alphabet = length-w words of x; length-n words correspond to
    length-(n+w-1) words of x read through overlapping windows."""

    level_strategy = "forward"

    def __init__(self, x, window, name=None):
        if window < 1:
            raise DomainError("window must be >= 1")
        self.x = x
        self.window = window
        store = levels_of(x)
        wcodes = store.level(window, 5_000_000)
        if wcodes.size == 0:
            raise ConstructionError("x has no words of the window length")
        self._wcodes = wcodes.copy()
        toks = []
        for c in wcodes:
            word = Word(x.alphabet, tuple(
                int(d) for d in kernels.decode_digits(
                    np.array([c], dtype=np.int64), window,
                    len(x.alphabet))[0]))
            toks.append("(%s)" % ",".join(word.tokens))
        super().__init__(toks, name or "block%d(%s)" % (window, x.name))
        self.exact_context_bound = x.exact_context_bound
        px = getattr(x, "presentation", None)
        if px is not None:
            self.presentation = _higher_block_presentation(
                px, window, self._wcodes, self.alphabet)

    def _window_codes(self, digits):
        # wcode[:, i] = sum_j digits[:, i+j] * bx**(w-1-j)
        bx = len(self.x.alphabet)
        n, total = digits.shape
        m = total - self.window + 1
        out = np.zeros((n, m), dtype=np.int64)
        for j in range(self.window):
            out += digits[:, j:j + m].astype(np.int64) \
                * bx**(self.window - 1 - j)
        return out

    def _forward_level(self, m, cap):
        codes = levels_of(self.x).level(m + self.window - 1, cap)
        if m == 0:
            return np.zeros(1 if codes.size else 0, dtype=np.int64)
        digits = kernels.decode_digits(codes, m + self.window - 1,
                                       len(self.x.alphabet))
        wc = self._window_codes(digits)
        ranks = np.searchsorted(self._wcodes, wc)
        out = np.zeros(codes.shape[0], dtype=np.int64)
        for i in range(m):
            out = out * len(self.alphabet) + ranks[:, i]
        # windowing preserves lexicographic order, so `out` is sorted
        return out

    def _member(self, idx):
        if not idx:
            return True
        bx = len(self.x.alphabet)
        words = [kernels.decode_digits(
            np.array([self._wcodes[r]], dtype=np.int64), self.window, bx)[0]
            for r in idx]
        for prev, cur in zip(words, words[1:]):
            if list(prev[1:]) != list(cur[:-1]):
                return False
        full = list(words[0]) + [w[-1] for w in words[1:]]
        return self.x._member(tuple(int(d) for d in full))


def _higher_block_presentation(px, window, wcodes, alphabet):
    """States are (window-1)-step edge paths of px; an edge extends a path
    by one px-edge and is labeled by the window of letters it reads."""
    wlist = {int(c): i for i, c in enumerate(wcodes)}
    if window == 1:
        return SoficPresentation(
            alphabet, px.states,
            [(px.states[f], alphabet.tokens[wlist[a]], px.states[t])
             for f, a, t in px.edges])
    bx = len(px.alphabet)
    paths = [((i,), px.edges[i][2]) for i in range(len(px.edges))]
    for _ in range(window - 2):
        paths = [(p + (i,), px.edges[i][2])
                 for p, end in paths
                 for i in range(len(px.edges))
                 if px.edges[i][0] == end]
    names = {p: "p" + "-".join(str(i) for i in p) for p, _ in paths}
    edges = []
    for p, end in paths:
        for i, (f, a, t) in enumerate(px.edges):
            if f != end:
                continue
            seq = p + (i,)
            code = 0
            for j in seq:
                code = code * bx + px.edges[j][1]
            if code not in wlist:
                # the path's label word fell outside the retained level;
                # cannot happen for a trimmed presentation
                continue
            edges.append((names[p], alphabet.tokens[wlist[code]],
                          names[seq[1:]]))
    return SoficPresentation(alphabet, list(names.values()), edges)


def higher_block(x, window, name=None):
    return HigherBlockOracle(x, window, name)


# ---------------------------------------------------------------------------
# sliding block-code images


class BlockImageOracle(LanguageOracle):
    """Image of x under a sliding block code with the given window; the
    map must be defined on every window word of x."""

    level_strategy = "forward"

    def __init__(self, x, window, block_map, target_tokens=None, name=None):
        if window < 1:
            raise DomainError("window must be >= 1")
        self.x = x
        self.window = window
        wcodes = levels_of(x).level(window, 5_000_000)
        if wcodes.size == 0:
            raise ConstructionError("x has no words of the window length")
        self._wcodes = wcodes.copy()
        bx = len(x.alphabet)
        images = []
        for c in wcodes:
            digits = tuple(int(d) for d in kernels.decode_digits(
                np.array([c], dtype=np.int64), window, bx)[0])
            toks = tuple(x.alphabet.tokens[d] for d in digits)
            if callable(block_map):
                img = block_map(toks)
            else:
                img = block_map.get(toks)
                if img is None:
                    img = block_map.get("".join(toks))
            if img is None:
                raise ConstructionError(
                    "block map undefined on %r" % ("".join(toks),))
            images.append(str(img))
        if target_tokens is None:
            target_tokens = sorted(set(images))
        super().__init__(target_tokens,
                         name or "image(%s)" % x.name)
        self._img = np.array([self.alphabet.index[t] for t in images],
                             dtype=np.int64)
        px = getattr(x, "presentation", None)
        if px is not None:
            hb_alpha = Alphabet(["w%d" % i for i in range(wcodes.size)])
            hb = _higher_block_presentation(px, window, self._wcodes,
                                            hb_alpha)
            self.presentation = SoficPresentation(
                self.alphabet, hb.states,
                [(hb.states[f], self.alphabet.tokens[self._img[a]],
                  hb.states[t]) for f, a, t in hb.edges])

    def _forward_level(self, m, cap):
        codes = levels_of(self.x).level(m + self.window - 1, cap)
        if m == 0:
            return np.zeros(1 if codes.size else 0, dtype=np.int64)
        digits = kernels.decode_digits(codes, m + self.window - 1,
                                       len(self.x.alphabet))
        bx = len(self.x.alphabet)
        wc = np.zeros((digits.shape[0], m), dtype=np.int64)
        for j in range(self.window):
            wc += digits[:, j:j + m].astype(np.int64) \
                * bx**(self.window - 1 - j)
        mapped = self._img[np.searchsorted(self._wcodes, wc)]
        out = np.zeros(codes.shape[0], dtype=np.int64)
        for i in range(m):
            out = out * len(self.alphabet) + mapped[:, i]
        return np.unique(out)

    def _member(self, idx):
        if not idx:
            return True
        n = len(idx)
        code = 0
        for a in idx:
            code = code * len(self.alphabet) + a
        level = levels_of(self).level(n, 5_000_000)
        pos = np.searchsorted(level, code)
        return bool(pos < level.size and level[pos] == code)


def block_image(x, window, block_map, target_tokens=None, name=None):
    return BlockImageOracle(x, window, block_map, target_tokens, name)


# ---------------------------------------------------------------------------
# disjoint union


class DisjointUnionOracle(LanguageOracle):
    """Union of two languages over the concatenation of their alphabets;
    colliding tokens of y get prime suffixes."""

    level_strategy = "forward"

    def __init__(self, x, y, name=None):
        self.x, self.y = x, y
        toks = list(x.alphabet.tokens)
        self._ymap = []
        for t in y.alphabet.tokens:
            t2 = t
            while t2 in toks:
                t2 = t2 + "'"
            toks.append(t2)
            self._ymap.append(t2)
        super().__init__(toks, name or "union(%s,%s)" % (x.name, y.name))
        kx, ky = x.exact_context_bound, y.exact_context_bound
        if kx is not None and ky is not None:
            self.exact_context_bound = max(kx, ky, 1)
        px = getattr(x, "presentation", None)
        py = getattr(y, "presentation", None)
        if px is not None and py is not None:
            edges = [("L:%s" % px.states[f], x.alphabet.tokens[a],
                      "L:%s" % px.states[t]) for f, a, t in px.edges]
            edges += [("R:%s" % py.states[f], self._ymap[a],
                       "R:%s" % py.states[t]) for f, a, t in py.edges]
            states = ["L:%s" % s for s in px.states] \
                + ["R:%s" % s for s in py.states]
            self.presentation = SoficPresentation(self.alphabet, states,
                                                  edges)

    def _member(self, idx):
        if not idx:
            return True
        bx = len(self.x.alphabet)
        if all(a < bx for a in idx):
            return self.x._member(tuple(idx))
        if all(a >= bx for a in idx):
            return self.y._member(tuple(a - bx for a in idx))
        return False

    def _forward_level(self, m, cap):
        bx = len(self.x.alphabet)
        b = len(self.alphabet)
        cx = levels_of(self.x).level(m, cap)
        cy = levels_of(self.y).level(m, cap)
        if m == 0:
            return np.zeros(1 if cx.size or cy.size else 0, dtype=np.int64)
        zx = _reencode(cx, m, bx, b)
        ymap = np.arange(bx, bx + len(self.y.alphabet), dtype=np.int64)
        zy = _reencode(cy, m, len(self.y.alphabet), b, digit_map=ymap)
        out = np.concatenate([zx, zy])
        out.sort()
        return out


def disjoint_union(x, y, name=None):
    return DisjointUnionOracle(x, y, name)


# ---------------------------------------------------------------------------
# marker-selected data streams and their collapse


class MarkerInterleaveOracle(LanguageOracle):
    """Blocks of four: a selector letter (value 1..3) followed by three
    data letters; the selected data letters, one per block in order, must
    form a word of the child language.  Membership existentially
    quantifies over the block phase and over selectors outside the window.
    """

    def __init__(self, child, selectors=("1", "2", "3"), name=None):
        if len(selectors) != 3:
            raise ConstructionError("exactly three selector letters")
        if len(child.alphabet) != 3:
            raise ConstructionError(
                "the selected stream runs over a three-letter child")
        if not hasattr(child, "scanner"):
            raise ConstructionError(
                "child must expose a scanner(cap) automaton")
        for t in selectors:
            if t in child.alphabet.index:
                raise AlphabetError("selector letter %r already used" % t)
        self.child = child
        self.selectors = tuple(selectors)
        toks = child.alphabet.tokens + self.selectors
        super().__init__(toks, name or "marked(%s)" % child.name)
        self.sel_class = np.array([0, 0, 0, 1, 2, 3], dtype=np.int8)
        self.data_class = np.array([0, 1, 2, 0, 0, 0], dtype=np.int8)

    def _scan_tables(self, length):
        # at most one selected letter per block reaches the child scanner
        return self.child.scanner(length // 4 + 2)

    def _member(self, idx):
        codes = np.array([0], dtype=np.int64)
        code = 0
        for a in idx:
            code = code * len(self.alphabet) + a
        codes[0] = code
        return bool(self._member_batch(codes, len(idx))[0])

    def _member_batch(self, codes, length):
        if length == 0:
            return np.ones(codes.shape[0], dtype=bool)
        trans, start, accept = self._scan_tables(length)
        return kernels.marker_filter(codes, length, len(self.alphabet),
                                     self.sel_class, self.data_class,
                                     trans, start, accept)


class MarkerCollapsedOracle(LanguageOracle):
    """Marker interleaving with the selector letters collapsed to one
    star; membership also quantifies over the hidden selector values."""

    def __init__(self, child, star="*", name=None):
        if len(child.alphabet) != 3:
            raise ConstructionError(
                "the selected stream runs over a three-letter child")
        if not hasattr(child, "scanner"):
            raise ConstructionError(
                "child must expose a scanner(cap) automaton")
        if star in child.alphabet.index:
            raise AlphabetError("star letter %r already used" % star)
        self.child = child
        self.star = star
        toks = child.alphabet.tokens + (star,)
        super().__init__(toks, name or "collapsed(%s)" % child.name)
        self.sel_class = np.array([0, 0, 0, -1], dtype=np.int8)
        self.data_class = np.array([0, 1, 2, 0], dtype=np.int8)

    def _member(self, idx):
        code = 0
        for a in idx:
            code = code * len(self.alphabet) + a
        return bool(self._member_batch(
            np.array([code], dtype=np.int64), len(idx))[0])

    def _member_batch(self, codes, length):
        if length == 0:
            return np.ones(codes.shape[0], dtype=bool)
        trans, start, accept = self.child.scanner(length // 4 + 2)
        return kernels.marker_filter(codes, length, len(self.alphabet),
                                     self.sel_class, self.data_class,
                                     trans, start, accept)


def marker_interleave(child, selectors=("1", "2", "3"), name=None):
    return MarkerInterleaveOracle(child, selectors, name)


def star_collapse(x, markers=None, star="*", name=None):
    """Collapse the given marker letters of x to a single star letter.

    When x is a marker interleaving and the markers are its selector
    letters, the collapse is fused into one membership automaton (the
    image language stays decidable without preimage search); otherwise it
    is the one-block image map sending markers to the star.
    """
    if isinstance(x, MarkerInterleaveOracle) and (
            markers is None or set(markers) == set(x.selectors)):
        return MarkerCollapsedOracle(x.child, star,
                                     name or "collapsed(%s)" % x.child.name)
    if not markers:
        raise ConstructionError("markers to collapse are required")
    markers = set(markers)

    def phi(toks):
        return star if toks[0] in markers else toks[0]

    target = [t for t in x.alphabet.tokens if t not in markers] + [star]
    return block_image(x, 1, phi, target_tokens=target,
                       name=name or "collapsed(%s)" % x.name)


# ---------------------------------------------------------------------------
# selector shifts


class SelectorOracle(LanguageOracle):
    """Child data letters interleaved with marker letters a, b, c at
    mutual distance >= 3; each marker selects the odd (a), even (b), or no
    (c) 1-based positions of the data segment it opens, and the selected
    letters must form a word of the child language.  The segment before
    the first marker contributes nothing."""

    def __init__(self, child, markers=("a", "b", "c"), name=None):
        if len(markers) != 3:
            raise ConstructionError("exactly three marker letters")
        for t in markers:
            if t in child.alphabet.index:
                raise AlphabetError("marker letter %r already used" % t)
        self.child = child
        self.markers = tuple(markers)
        toks = child.alphabet.tokens + self.markers
        super().__init__(toks, name or "selector(%s)" % child.name)
        nc = len(child.alphabet)
        self.marker_class = np.array([0] * nc + [1, 2, 3], dtype=np.int8)

    def _eta(self, idx):
        """Selected data subsequence, or None if marker spacing fails."""
        nc = len(self.child.alphabet)
        out = []
        last_marker = -3
        mode = 0
        seg_pos = 0
        for i, letter in enumerate(idx):
            if letter >= nc:
                if i - last_marker < 3:
                    return None
                last_marker = i
                mode = letter - nc + 1
                seg_pos = 0
            else:
                seg_pos += 1
                if mode == 1 and seg_pos % 2 == 1:
                    out.append(letter)
                elif mode == 2 and seg_pos % 2 == 0:
                    out.append(letter)
        return out

    def _member(self, idx):
        eta = self._eta(idx)
        if eta is None:
            return False
        return self.child._member(tuple(eta))

    def _member_batch(self, codes, length):
        if length == 0:
            return np.ones(codes.shape[0], dtype=bool)
        store = levels_of(self.child)
        max_m = (length + 1) // 2
        offsets = [0]
        tables = []
        for m in range(max_m + 1):
            lv = store.level(m, 5_000_000)
            tables.append(lv)
            offsets.append(offsets[-1] + lv.size)
        child_codes = np.concatenate(tables) if tables else \
            np.zeros(0, dtype=np.int64)
        child_offsets = np.array(offsets, dtype=np.int64)
        nc = len(self.child.alphabet)
        data_digit = np.array(list(range(nc)) + [0, 0, 0], dtype=np.int64)
        return kernels.selector_filter(
            codes, length, len(self.alphabet), self.marker_class,
            data_digit, nc, child_codes, child_offsets)


def selector_shift(child, markers=("a", "b", "c"), name=None):
    return SelectorOracle(child, markers, name)


# ---------------------------------------------------------------------------
# sturmian-modulated embeddings


class SturmianModulatedOracle(LanguageOracle):
    """Points follow a sturmian itinerary: rotation-coded 1s emit the next
    letter of a child point, 0s emit the pause letter."""

    level_strategy = "forward"

    def __init__(self, child, cf, pause="-", name=None):
        from .spaces import SturmianOracle

        if pause in child.alphabet.index:
            raise AlphabetError("pause letter %r already used" % pause)
        self.child = child
        self.modulator = SturmianOracle(cf)
        self.pause = pause
        toks = child.alphabet.tokens + (pause,)
        super().__init__(toks, name or "stmod(%s)" % child.name)

    def _member(self, idx):
        if not idx:
            return True
        p = len(self.child.alphabet)
        v = tuple(0 if a == p else 1 for a in idx)
        if v not in self.modulator.factor_set(len(idx)):
            return False
        data = tuple(a for a in idx if a != p)
        return self.child._member(data)

    def _forward_level(self, m, cap):
        if m == 0:
            return np.zeros(1, dtype=np.int64)
        p = len(self.child.alphabet)
        b = len(self.alphabet)
        store = levels_of(self.child)
        pieces = []
        total = 0
        for v in sorted(self.modulator.factor_set(m)):
            k = sum(v)
            u = store.level(k, cap)
            total += u.size
            if total > cap:
                raise ResourceCapError(
                    "level %d exceeds %d words" % (m, cap),
                    cap=cap, length=m, count=total)
            if k:
                digits = kernels.decode_digits(u, k, p)
            out = np.zeros(u.size, dtype=np.int64)
            col = 0
            for i in range(m):
                if v[i]:
                    out = out * b + digits[:, col].astype(np.int64)
                    col += 1
                else:
                    out = out * b + p
            pieces.append(out)
        out = np.concatenate(pieces)
        out.sort()
        return out


def sturmian_modulated(child, cf, pause="-", name=None):
    return SturmianModulatedOracle(child, cf, pause, name)
