"""Slow reference implementations used only by the tests.

Everything here recomputes membership and classification straight from the
definitions — itertools over all candidate words, explicit context sets —
with no reliance on the package machinery, so a disagreement points at a
real bug rather than a shared one.
"""

import itertools
from fractions import Fraction


def words(tokens, n):
    return list(itertools.product(tokens, repeat=n))


def language(member, tokens, n):
    return [w for w in words(tokens, n) if member(w)]


def tokens_of(word):
    return tuple(word.alphabet.tokens[i] for i in word.indices)


# --- membership predicates over token tuples -------------------------------


def full_member(w):
    return True


def even_member(w):
    # maximal 0-runs enclosed by 1s on both sides must have even length
    n = len(w)
    i = 0
    while i < n:
        if w[i] == "0":
            j = i
            while j < n and w[j] == "0":
                j += 1
            if i > 0 and j < n and (j - i) % 2 == 1:
                return False
            i = j
        else:
            i += 1
    return True


def golden_member(w):
    return all(not (w[i] == "1" and w[i + 1] == "1")
               for i in range(len(w) - 1))


def _ab_shape(seg):
    k = 0
    while k < len(seg) and seg[k] == "a":
        k += 1
    if any(t != "b" for t in seg[k:]):
        return None
    return k, len(seg) - k


def cf_member(w):
    """Between consecutive c's the letters form a^m b^m; the outer pieces
    only need to be a suffix (resp. prefix) of such a block."""
    segs, cur = [], []
    for t in w:
        if t == "c":
            segs.append(cur)
            cur = []
        elif t in ("a", "b"):
            cur.append(t)
        else:
            return False
    segs.append(cur)
    shapes = [_ab_shape(s) for s in segs]
    if any(s is None for s in shapes):
        return False
    if len(shapes) == 1:
        return True
    if shapes[0][0] > shapes[0][1]:
        return False
    for na, nb in shapes[1:-1]:
        if na != nb:
            return False
    return shapes[-1][1] <= shapes[-1][0]


def beta_member(w, dstar):
    """Digit word against a (long enough) prefix of the expansion of 1:
    every suffix must stay lexicographically at or below d*."""
    assert len(dstar) >= len(w)
    for i in range(len(w)):
        if tuple(w[i:]) > tuple(dstar[:len(w) - i]):
            return False
    return True


def sofic_member(edges, n_states, letters):
    cur = set(range(n_states))
    for a in letters:
        cur = {t for (f, la, t) in edges if la == a and f in cur}
        if not cur:
            return False
    return True


# --- eventually periodic sequences ------------------------------------------


def periodic_prefix(pre, per, length):
    seq = list(pre)
    while len(seq) < length:
        seq.extend(per)
    return seq[:length]


def subwords(pre, per, n):
    if not per:
        seq = list(pre)
        return {tuple(seq[i:i + n]) for i in range(len(seq) - n + 1)}
    starts = len(pre) + len(per)
    seq = periodic_prefix(pre, per, starts + n)
    return {tuple(seq[i:i + n]) for i in range(starts)}


# --- rotation codings -------------------------------------------------------


def sturmian_factors(cf, n):
    """All length-n windows of codings of t -> t + eta, cells
    [0,1-eta) -> "0" and [1-eta,1) -> "1", sampling one start point per
    cell of the cut partition."""
    eta = Fraction(0)
    for a in reversed(cf):
        eta = Fraction(1, a + eta)
    cuts = sorted({(-k * eta) % 1 for k in range(n + 1)})
    out = set()
    for idx, c in enumerate(cuts):
        nxt = cuts[(idx + 1) % len(cuts)]
        width = (nxt - c) % 1
        if width == 0:
            width = Fraction(1)
        t0 = c + width / 2
        word = tuple("1" if (t0 + j * eta) % 1 >= 1 - eta else "0"
                     for j in range(n))
        out.add(word)
    return out


# --- marker interleavings and selector shifts -------------------------------


def marked_member(w, child_member, selectors=("1", "2", "3"),
                  data=("a", "b", "c")):
    """Blocks of four (selector then three data letters) at some phase.

    The selected letters must form a child word.  A truncated leading
    block has its selector out of the window, but the value it would hold
    is only existentially free: for each choice the letter it picks, when
    visible, still joins the selected stream.  Selected positions past
    the end of the window drop off the stream's tail instead.
    """
    n = len(w)
    for phase in range(4):
        ok = True
        for i, t in enumerate(w):
            ok = t in (selectors if (i + phase) % 4 == 0 else data)
            if not ok:
                break
        if not ok:
            continue
        hidden = (1, 2, 3) if phase > 0 else (None,)
        for lead in hidden:
            chosen = []
            if lead is not None and 0 <= lead - phase < n:
                chosen.append(w[lead - phase])
            for i in range(n):
                if (i + phase) % 4 == 0:
                    j = i + 1 + selectors.index(w[i])
                    if j < n:
                        chosen.append(w[j])
            if child_member(tuple(chosen)):
                return True
    return False


def collapsed_member(w, child_member, star="*", data=("a", "b", "c")):
    """Marker interleaving with selectors hidden behind one star letter;
    quantifies over their values (and the truncated leading block's) as
    well."""
    n = len(w)
    for phase in range(4):
        stars = [] if phase == 0 else [-phase]
        ok = True
        for i, t in enumerate(w):
            if (i + phase) % 4 == 0:
                ok = t == star
                stars.append(i)
            else:
                ok = t in data
            if not ok:
                break
        if not ok:
            continue
        for choice in itertools.product((1, 2, 3), repeat=len(stars)):
            chosen = []
            for i, a in zip(stars, choice):
                if 0 <= i + a < n:
                    chosen.append(w[i + a])
            if child_member(tuple(chosen)):
                return True
    return False


def eta(w, markers=("a", "b", "c")):
    """Concatenation of the odd- (after marker a) or even-indexed (after
    marker b) letters of each marker-governed segment, 1-based local
    positions; the leading segment contributes nothing."""
    pos = [i for i, t in enumerate(w) if t in markers]
    out = []
    for idx, p in enumerate(pos):
        end = pos[idx + 1] if idx + 1 < len(pos) else len(w)
        seg = w[p + 1:end]
        if w[p] == markers[0]:
            out.extend(seg[0::2])
        elif w[p] == markers[1]:
            out.extend(seg[1::2])
    return tuple(out)


def selector_member(w, child_member, data, markers=("a", "b", "c")):
    for t in w:
        if t not in markers and t not in data:
            return False
    pos = [i for i, t in enumerate(w) if t in markers]
    if any(q - p <= 2 for p, q in zip(pos, pos[1:])):
        return False
    return child_member(eta(w, markers))


# --- context classification -------------------------------------------------


def contexts(tokens, k):
    out = [()]
    for m in range(1, k + 1):
        out.extend(itertools.product(tokens, repeat=m))
    return out


def follower_set(member, tokens, w, k):
    return frozenset(u for u in contexts(tokens, k) if member(w + u))


def predecessor_set(member, tokens, w, k):
    return frozenset(u for u in contexts(tokens, k) if member(u + w))


def extender_set(member, tokens, w, k):
    ctx = contexts(tokens, k)
    return frozenset((s, u) for s in ctx for u in ctx
                     if member(s + w + u))


_CONTEXT = {"follower": follower_set, "predecessor": predecessor_set,
            "extender": extender_set}


def classes(member, tokens, n, k, mode):
    fn = _CONTEXT[mode]
    return {w: fn(member, tokens, w, k)
            for w in language(member, tokens, n)}


def class_count(member, tokens, n, k, mode):
    return len(set(classes(member, tokens, n, k, mode).values()))


def left_constraint_count(member, tokens, n, k):
    total = 0
    for w in language(member, tokens, n):
        if follower_set(member, tokens, w, k) != \
                follower_set(member, tokens, w[1:], k):
            total += 1
    return total


def grouping(labelled):
    """Partition {word: label} as a set of frozensets, for comparing
    classifications that use different label values."""
    groups = {}
    for w, lab in labelled.items():
        groups.setdefault(lab, set()).add(w)
    return {frozenset(g) for g in groups.values()}
