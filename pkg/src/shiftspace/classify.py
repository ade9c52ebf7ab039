"""Partition the length-n words of a shift space by their context sets.

Three routes: explicit signatures for single words (`signature`), bounded
context bands over whole language levels (`classify_bounded`, with
`k_sweep` to choose the bound), and exact counts from a sofic presentation
via transition relations (`classify_sofic_exact`).  `left_constraint_count`
counts the words whose first letter restricts the follower set of their
tail.
"""

import numpy as np

from .core import DEFAULT_CAP, DomainError, ResourceCapError, levels_of

DEAD = np.uint32(0xFFFFFFFF)

_MODES = ("follower", "predecessor", "extender")


def _unique_rows(rows):
    """Row ids (uint32) for a uint32 matrix; equal rows get equal ids.

    Columns are packed pairwise into uint64 and deduplicated with
    np.unique, so the whole reduction stays on 1-d arrays.
    """
    cols = [rows[:, i].astype(np.uint64) for i in range(rows.shape[1])]
    while len(cols) > 1:
        nxt = []
        for i in range(0, len(cols) - 1, 2):
            packed = (cols[i] << np.uint64(32)) | cols[i + 1]
            _, inv = np.unique(packed, return_inverse=True)
            nxt.append(inv.astype(np.uint64))
        if len(cols) % 2:
            nxt.append(cols[-1])
        cols = nxt
    _, inv = np.unique(cols[0], return_inverse=True)
    return inv.astype(np.uint32)


def _child_links(oracle, lvl, cap):
    """Right-extension links from L_lvl to L_{lvl+1}.

    Returns (hit, pos), both shaped (|L_lvl|, B): hit[i, a] says whether
    word_i + a is in the language, pos[i, a] its index in level lvl+1
    (valid only where hit).
    """
    store = levels_of(oracle)
    base = len(oracle.alphabet)
    npar = store.size(lvl, cap)
    mask = store.child_mask(lvl + 1, cap)
    if mask is not None:
        pos = np.cumsum(mask, dtype=np.int64) - 1
        return mask.reshape(npar, base), pos.reshape(npar, base)
    parents = store.level(lvl, cap)
    child = store.level(lvl + 1, cap)
    cand = (parents[:, None] * base
            + np.arange(base, dtype=np.int64)).ravel()
    if child.size == 0:
        shape = (npar, base)
        return np.zeros(shape, dtype=bool), np.zeros(shape, dtype=np.int64)
    pos = np.searchsorted(child, cand)
    pos = np.minimum(pos, child.size - 1)
    hit = child[pos] == cand
    return hit.reshape(npar, base), pos.reshape(npar, base)


def _left_links(oracle, lvl, cap):
    """Left-extension links a + w from L_lvl to L_{lvl+1}; same shape
    contract as _child_links."""
    store = levels_of(oracle)
    base = len(oracle.alphabet)
    codes = store.level(lvl, cap)
    child = store.level(lvl + 1, cap)
    hit = np.zeros((codes.size, base), dtype=bool)
    pos = np.zeros((codes.size, base), dtype=np.int64)
    if child.size == 0:
        return hit, pos
    shift = base**lvl
    for a in range(base):
        cand = codes + a * shift
        p = np.searchsorted(child, cand)
        p = np.minimum(p, child.size - 1)
        hit[:, a] = child[p] == cand
        pos[:, a] = p
    return hit, pos


def _refine(hit, pos, prev):
    """One descent step: prev ids of the extensions become the new row."""
    rows = np.full(hit.shape, DEAD, dtype=np.uint32)
    rows[hit] = prev[pos[hit]]
    return _unique_rows(rows)


def _pack_or_refine(hit, pos, prev, base):
    if prev is None:
        if base <= 31:
            ids = np.zeros(hit.shape[0], dtype=np.uint32)
            for a in range(base):
                ids = (ids << np.uint32(1)) | hit[:, a].astype(np.uint32)
            return ids
        prev = np.zeros(int(pos.max(initial=-1)) + 1, dtype=np.uint32)
    return _refine(hit, pos, prev)


def _follower_ids(oracle, n, k, cap):
    store = levels_of(oracle)
    base = len(oracle.alphabet)
    if k == 0:
        return np.zeros(store.size(n, cap), dtype=np.uint32)
    store.size(n + k, cap)
    ids = None
    for lvl in range(n + k - 1, n - 1, -1):
        hit, pos = _child_links(oracle, lvl, cap)
        ids = _pack_or_refine(hit, pos, ids, base)
    return ids


def _predecessor_ids(oracle, n, k, cap):
    store = levels_of(oracle)
    base = len(oracle.alphabet)
    if k == 0:
        return np.zeros(store.size(n, cap), dtype=np.uint32)
    store.size(n + k, cap)
    ids = None
    for lvl in range(n + k - 1, n - 1, -1):
        hit, pos = _left_links(oracle, lvl, cap)
        ids = _pack_or_refine(hit, pos, ids, base)
    return ids


def _extender_ids(oracle, n, k, cap):
    """Ids of the depth-k two-sided context sets over L_n.

    Iteration j turns bound-(j-1) ids over levels n..n+2(k-j)+2 into
    bound-j ids over levels n..n+2(k-j).  A word's new row lists the old
    ids of its left extensions aw, right extensions wb, and two-sided
    single-step extensions awb; the row determines the depth-j context
    set and vice versa, so canonicalizing rows yields exactly the depth-j
    partition.
    """
    store = levels_of(oracle)
    base = len(oracle.alphabet)
    if k == 0:
        return np.zeros(store.size(n, cap), dtype=np.uint32)
    store.size(n + 2 * k, cap)
    right = {}
    left = {}
    for lvl in range(n, n + 2 * k):
        right[lvl] = _child_links(oracle, lvl, cap)
        left[lvl] = _left_links(oracle, lvl, cap)
    sigs = {lvl: np.zeros(store.size(lvl, cap), dtype=np.uint32)
            for lvl in range(n, n + 2 * k + 1)}
    width = 2 * base + base * base
    for j in range(1, k + 1):
        top = n + 2 * (k - j)
        nxt = {}
        for lvl in range(n, top + 1):
            lhit, lpos = left[lvl]
            rhit, rpos = right[lvl]
            rows = np.full((store.size(lvl, cap), width), DEAD,
                           dtype=np.uint32)
            prev1 = sigs[lvl + 1]
            prev2 = sigs[lvl + 2]
            r1hit, r1pos = right[lvl + 1]
            for a in range(base):
                la = lhit[:, a]
                rows[la, a] = prev1[lpos[la, a]]
                ra = rhit[:, a]
                rows[ra, base + a] = prev1[rpos[ra, a]]
                pos_a = np.where(la, lpos[:, a], 0)
                hit_ab = r1hit[pos_a]
                pos_ab = r1pos[pos_a]
                for b in range(base):
                    ok = la & hit_ab[:, b]
                    rows[ok, 2 * base + a * base + b] = prev2[pos_ab[ok, b]]
            nxt[lvl] = _unique_rows(rows)
        sigs = nxt
    return sigs[n]


_ID_FNS = {"follower": _follower_ids, "predecessor": _predecessor_ids,
           "extender": _extender_ids}


class ClassifyResult:
    """Class count plus the partition of L_n as integer labels."""

    __slots__ = ("count", "labels", "exact", "mode", "k")

    def __init__(self, count, labels, exact, mode, k):
        self.count = count
        self.labels = labels
        self.exact = exact
        self.mode = mode
        self.k = k

    def __iter__(self):
        return iter((self.count, self.labels))

    def __repr__(self):
        return "ClassifyResult(count=%d, mode=%r, k=%d, exact=%s)" % (
            self.count, self.mode, self.k, self.exact)


def classify_bounded(oracle, n, k, mode="extender", cap=DEFAULT_CAP):
    """Group L_n(X) by context sets truncated to depth k.

    The count is a lower bound for the true number of context classes and
    equals it once k reaches the oracle's declared exact bound (then
    ``exact`` is True).
    """
    if mode not in _MODES:
        raise DomainError("mode must be one of %s" % (_MODES,))
    if n < 1 or k < 0:
        raise DomainError("need n >= 1 and k >= 0")
    ids = _ID_FNS[mode](oracle, n, k, cap)
    if ids.size == 0:
        return ClassifyResult(0, np.zeros(0, dtype=np.int64), False, mode, k)
    _, labels = np.unique(ids, return_inverse=True)
    bound = oracle.exact_context_bound
    exact = bound is not None and k >= bound
    return ClassifyResult(int(labels.max()) + 1, labels.astype(np.int64),
                          exact, mode, k)


class SweepResult:
    __slots__ = ("count", "certified", "k_used", "history")

    def __init__(self, count, certified, k_used, history):
        self.count = count
        self.certified = certified
        self.k_used = k_used
        self.history = history

    def __iter__(self):
        return iter((self.count, self.certified, self.k_used))

    def __repr__(self):
        return "SweepResult(count=%d, certified=%s, k_used=%d)" % (
            self.count, self.certified, self.k_used)


def k_sweep(oracle, n, mode="extender", k_max=None, stability_window=2,
            cap=DEFAULT_CAP):
    """Raise the context bound until the class count looks settled.

    Stops early (certified) when the oracle's declared exact bound is
    reached, else when the count has been constant over `stability_window`
    consecutive bounds, else at k_max (default n + 2).  Uncertified counts
    are still lower bounds for the true class count.
    """
    if k_max is None:
        k_max = n + 2
    if stability_window < 1:
        raise DomainError("stability_window must be >= 1")
    history = []
    prev = -1
    for k in range(k_max + 1):
        res = classify_bounded(oracle, n, k, mode, cap)
        assert res.count >= prev, "class counts must be nondecreasing in k"
        prev = res.count
        history.append((k, res.count))
        if res.exact:
            return SweepResult(res.count, True, k, history)
        tail = [c for _, c in history[-stability_window:]]
        if len(history) >= stability_window and len(set(tail)) == 1:
            return SweepResult(res.count, False, k, history)
    return SweepResult(prev, False, k_max, history)


# ---------------------------------------------------------------------------
# explicit signatures


class ContextSignature:
    """Canonical depth-k context set of a single word.

    The payload is a packed bit grid over the deterministic enumeration of
    L_{<=k} (pairs of it in extender mode), so equal context sets give
    byte-identical payloads.  Hashing uses the content; equality compares
    the payload in full.
    """

    __slots__ = ("mode", "k", "payload", "_hash")

    def __init__(self, mode, k, payload):
        self.mode = mode
        self.k = k
        self.payload = payload
        self._hash = hash((mode, k, payload))

    def __hash__(self):
        return self._hash

    def __eq__(self, other):
        if not isinstance(other, ContextSignature):
            return NotImplemented
        return (self.mode == other.mode and self.k == other.k
                and self.payload == other.payload)

    def __repr__(self):
        ones = bin(int.from_bytes(self.payload, "big")).count("1")
        return "ContextSignature(%r, k=%d, %d contexts)" % (
            self.mode, self.k, ones)


def _context_words(oracle, k, cap):
    """All words of length <= k as index tuples, in (length, code) order."""
    store = levels_of(oracle)
    base = len(oracle.alphabet)
    out = [()]
    for m in range(1, k + 1):
        for code in store.level(m, cap):
            digits = []
            c = int(code)
            for _ in range(m):
                c, d = divmod(c, base)
                digits.append(d)
            out.append(tuple(reversed(digits)))
    return out


def signature(oracle, w, k, mode="extender", cap=DEFAULT_CAP):
    """Explicit ContextSignature of one word at context depth k."""
    if mode not in _MODES:
        raise DomainError("mode must be one of %s" % (_MODES,))
    if k < 0:
        raise DomainError("need k >= 0")
    idx = tuple(oracle.alphabet.word(w).indices)
    if not oracle._member(idx):
        raise DomainError("word %r is not in the language" % (w,))
    ctx = _context_words(oracle, k, cap)
    if mode == "extender":
        right_ok = [oracle._member(idx + u) for u in ctx]
        left_ok = [oracle._member(s + idx) for s in ctx]
        bits = np.zeros(len(ctx) * len(ctx), dtype=np.uint8)
        for i, s in enumerate(ctx):
            if not left_ok[i]:
                continue
            row = i * len(ctx)
            for j, u in enumerate(ctx):
                if right_ok[j] and oracle._member(s + idx + u):
                    bits[row + j] = 1
    else:
        bits = np.zeros(len(ctx), dtype=np.uint8)
        for j, u in enumerate(ctx):
            full = idx + u if mode == "follower" else u + idx
            if oracle._member(full):
                bits[j] = 1
    return ContextSignature(mode, k, np.packbits(bits).tobytes())


# ---------------------------------------------------------------------------
# exact counts from a presentation


def _compose(r1, r2, q):
    """Boolean matrix product of q x q relations packed row-major in ints."""
    row_mask = (1 << q) - 1
    out = 0
    for i in range(q):
        row = (r1 >> (i * q)) & row_mask
        if not row:
            continue
        acc = 0
        j = 0
        while row:
            if row & 1:
                acc |= (r2 >> (j * q)) & row_mask
            row >>= 1
            j += 1
        out |= acc << (i * q)
    return out


def _ends(rel, q):
    """States with an incoming relation pair (union of rows)."""
    out = 0
    row_mask = (1 << q) - 1
    for i in range(q):
        out |= (rel >> (i * q)) & row_mask
    return out


def _starts(rel, q):
    """States with an outgoing relation pair (nonempty rows)."""
    out = 0
    row_mask = (1 << q) - 1
    for i in range(q):
        if (rel >> (i * q)) & row_mask:
            out |= 1 << i
    return out


class SoficAnalyzer:
    """Transition-relation calculus over a presentation.

    Caches the distinct relations R_w per word length and the reachable
    start-set / end-set atlases used to read context sets off a relation.
    """

    def __init__(self, presentation, rel_cap=1_000_000):
        self.p = presentation
        self.q = presentation.n_states
        self.rel_cap = rel_cap
        self.letter_rels = [0] * len(presentation.alphabet)
        for f, a, t in presentation.edges:
            self.letter_rels[a] |= 1 << (f * self.q + t)
        ident = 0
        for i in range(self.q):
            ident |= 1 << (i * self.q + i)
        self._rels = {0: {ident: None}}
        self._start_atlas = None
        self._end_atlas = None

    def relations(self, n):
        """Distinct nonzero R_w over w in L_n, as packed ints."""
        have = max(self._rels)
        while have < n:
            nxt = {}
            for r in self._rels[have]:
                for lr in self.letter_rels:
                    c = _compose(r, lr, self.q)
                    if c:
                        nxt[c] = None
                if len(nxt) > self.rel_cap:
                    raise ResourceCapError(
                        "more than %d distinct relations at length %d"
                        % (self.rel_cap, have + 1), cap=self.rel_cap,
                        length=have + 1)
            have += 1
            self._rels[have] = nxt
        return list(self._rels[n])

    def _closure(self, step):
        full = (1 << self.q) - 1
        seen = {full}
        queue = [full]
        while queue:
            s = queue.pop()
            for a in range(len(self.letter_rels)):
                t = step(s, a)
                if t and t not in seen:
                    seen.add(t)
                    queue.append(t)
        return sorted(seen)

    def start_atlas(self):
        """All sets Start(u) of states from which some u can be read."""
        if self._start_atlas is None:
            row_mask = (1 << self.q) - 1

            def pre(s, a):
                rel = self.letter_rels[a]
                out = 0
                for i in range(self.q):
                    if ((rel >> (i * self.q)) & row_mask) & s:
                        out |= 1 << i
                return out

            self._start_atlas = self._closure(pre)
        return self._start_atlas

    def end_atlas(self):
        """All sets End(s) of states reachable after reading some s."""
        if self._end_atlas is None:
            row_mask = (1 << self.q) - 1

            def post(s, a):
                rel = self.letter_rels[a]
                out = 0
                for i in range(self.q):
                    if s & (1 << i):
                        out |= (rel >> (i * self.q)) & row_mask
                return out

            self._end_atlas = self._closure(post)
        return self._end_atlas


def analyzer_for(presentation, rel_cap=1_000_000):
    ana = getattr(presentation, "_analyzer", None)
    if ana is None or ana.rel_cap < rel_cap:
        ana = SoficAnalyzer(presentation, rel_cap)
        presentation._analyzer = ana
    return ana


def classify_sofic_exact(presentation, n, mode="extender",
                         rel_cap=1_000_000, atlas_cap=1 << 22):
    """Exact context-class count at length n from a presentation.

    A word's context set is determined by its transition relation: u
    follows w iff Start(u) meets the end states of R_w, and symmetrically
    for predecessors; extender membership of (s, u) only needs whether
    End(s) x Start(u) meets R_w.  Quantifying over the reachable atlases
    instead of actual words keeps the signatures finite without changing
    the partition.
    """
    if mode not in _MODES:
        raise DomainError("mode must be one of %s" % (_MODES,))
    if n < 1:
        raise DomainError("need n >= 1")
    ana = analyzer_for(presentation, rel_cap)
    q = ana.q
    rels = ana.relations(n)
    if mode == "follower":
        atlas = ana.start_atlas()
        return len({tuple(bool(_ends(r, q) & s) for s in atlas)
                    for r in rels})
    if mode == "predecessor":
        atlas = ana.end_atlas()
        return len({tuple(bool(_starts(r, q) & s) for s in atlas)
                    for r in rels})
    ends = ana.end_atlas()
    starts = ana.start_atlas()
    if len(ends) * len(starts) > atlas_cap:
        raise ResourceCapError(
            "subset-pair atlas has %d entries (cap %d)"
            % (len(ends) * len(starts), atlas_cap), cap=atlas_cap)
    pair_masks = []
    for s in ends:
        rows = [i for i in range(q) if s & (1 << i)]
        for t in starts:
            m = 0
            for i in rows:
                m |= t << (i * q)
            pair_masks.append(m)
    return len({tuple(bool(r & m) for m in pair_masks) for r in rels})


# ---------------------------------------------------------------------------
# left constraints


def left_constraint_count(oracle, n, k, cap=DEFAULT_CAP):
    """Number of words w = av in L_n whose depth-k follower set is
    strictly smaller than that of their tail v.

    Computed top-down: a word differs from its tail iff some right
    extension is alive for the tail but not for the word, or some shared
    extension differs one level up.
    """
    if n < 2:
        raise DomainError("need n >= 2")
    if k < 0:
        raise DomainError("need k >= 0")
    store = levels_of(oracle)
    base = len(oracle.alphabet)
    diff = np.zeros(store.size(n + k, cap), dtype=bool)
    for lvl in range(n + k, n, -1):
        xhit, xpos = _child_links(oracle, lvl - 1, cap)
        yhit, _ = _child_links(oracle, lvl - 2, cap)
        xcodes = store.level(lvl - 1, cap)
        ycodes = store.level(lvl - 2, cap)
        suffix = xcodes % (base**(lvl - 2))
        ypos = np.searchsorted(ycodes, suffix)
        newdiff = (xhit != yhit[ypos]).any(axis=1)
        child_diff = np.zeros(xhit.shape[0], dtype=bool)
        for a in range(base):
            ha = xhit[:, a]
            child_diff[ha] |= diff[xpos[ha, a]]
        diff = newdiff | child_diff
    return int(diff.sum())
