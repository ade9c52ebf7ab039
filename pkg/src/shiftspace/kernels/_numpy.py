"""Pure-numpy implementations of the batch word filters.

Mirror of ``shiftspace.kernels._numba``; selected when numba is missing or
``SHIFTSPACE_PURE_NUMPY=1`` is set.  Words arrive as int64 codes (big-endian
digit strings in the given base); every filter returns a boolean array.

The DFA and subset filters vectorize cleanly over words.  The marker filter
vectorizes over words via per-word state *bitsets* (columns of uint64).  The
selector filter has ragged per-word structure (marker positions differ), so
its fallback is a straight per-word loop over a predecoded digit matrix.
"""

import numpy as np


def decode_digits(codes, length, base):
    """(len(codes), length) int8 matrix of base-`base` digits, MSB first."""
    out = np.empty((codes.shape[0], length), dtype=np.int8)
    rest = codes.copy()
    for pos in range(length - 1, -1, -1):
        out[:, pos] = rest % base
        rest //= base
    return out


def dfa_filter(codes, length, base, trans, start, accept):
    """Run a DFA over every word; True where the run survives and accepts.

    trans[s, d] is the successor state or -1 (dead); `accept` is a bool
    vector over states.
    """
    n = codes.shape[0]
    nstates, nletters = trans.shape
    # shift state ids by one so 0 is the dead sink and indexing stays valid
    padded = np.zeros((nstates + 1, nletters), dtype=np.int32)
    padded[1:] = np.where(trans >= 0, trans + 1, 0)
    acc = np.zeros(nstates + 1, dtype=bool)
    acc[1:] = accept
    state = np.full(n, start + 1, dtype=np.int32)
    digits = decode_digits(codes, length, base)
    for pos in range(length):
        state = padded[state, digits[:, pos]]
    return acc[state]


def subset_filter(codes, length, base, step, start_mask, accept_mask):
    """Nondeterministic run via the subset construction, <= 64 states.

    step[d, q] is the uint64 bitmask of successors of state q on letter d.
    A word passes when the subset reached from `start_mask` still meets
    `accept_mask`.
    """
    n = codes.shape[0]
    nstates = step.shape[1]
    masks = np.full(n, start_mask, dtype=np.uint64)
    digits = decode_digits(codes, length, base)
    for pos in range(length):
        d = digits[:, pos]
        nxt = np.zeros(n, dtype=np.uint64)
        for q in range(nstates):
            active = (masks >> np.uint64(q)) & np.uint64(1)
            nxt |= np.where(active.astype(bool), step[d, q], np.uint64(0))
        masks = nxt
    return (masks & np.uint64(accept_mask)) != 0


def _bitset_step(cur, letter, scatter):
    """Apply one DFA letter to a (n, W) bitset matrix of state sets."""
    src, dst = scatter[letter]
    out = np.zeros_like(cur)
    for s, t in zip(src, dst):
        bit = (cur[:, s >> 6] >> np.uint64(s & 63)) & np.uint64(1)
        out[:, t >> 6] |= bit << np.uint64(t & 63)
    return out


def marker_filter(codes, length, base, sel_class, data_class, trans, start,
                  accept):
    """Membership for period-4 selector-block words (visible or hidden).

    Letters with sel_class[letter] != 0 are selector letters: a value v in
    1..3 selects the v-th following data letter, -1 (the star) hides which
    of the three was selected.  data_class maps data letters to the core
    DFA's alphabet 0..2.  For each phase offset, selector letters must sit
    exactly on positions congruent to the offset mod 4; each block then
    contributes the union over its allowed selections of one DFA step on
    the core scanner (trans/start/accept), with selections falling outside
    the word leaving the state set unchanged (free completion).
    """
    n = codes.shape[0]
    nstates = trans.shape[0]
    nwords64 = (nstates + 63) >> 6
    result = np.zeros(n, dtype=bool)
    digits = decode_digits(codes, length, base)
    sel_vals = sel_class[digits]
    data_vals = data_class[digits]
    scatter = []
    for c in range(3):
        src = np.nonzero(trans[:, c] >= 0)[0].astype(np.int64)
        scatter.append((src, trans[src, c].astype(np.int64)))
    acc_mask = np.zeros(nwords64, dtype=np.uint64)
    for s in np.nonzero(accept)[0]:
        acc_mask[s >> 6] |= np.uint64(1) << np.uint64(s & 63)

    pos = np.arange(length)
    for offset in range(4):
        aligned = ((sel_vals != 0) == ((pos % 4) == offset)[None, :]).all(axis=1)
        idx = np.nonzero(aligned & ~result)[0]
        if idx.size == 0:
            continue
        cur = np.zeros((idx.size, nwords64), dtype=np.uint64)
        cur[:, start >> 6] = np.uint64(1) << np.uint64(start & 63)
        for sigma in range(offset - 4, length, 4):
            nxt = np.zeros_like(cur)
            if sigma >= 0:
                v = sel_vals[idx, sigma]
            else:
                v = np.full(idx.size, -1, dtype=np.int8)
            free = np.zeros(idx.size, dtype=bool)
            for j in (1, 2, 3):
                allowed = (v == -1) | (v == j)
                if not allowed.any():
                    continue
                q = sigma + j
                if q < 0 or q >= length:
                    free |= allowed
                    continue
                letters = data_vals[idx, q]
                for c in range(3):
                    rows = allowed & (letters == c)
                    if rows.any():
                        nxt[rows] |= _bitset_step(cur[rows], c, scatter)
            if free.any():
                nxt[free] |= cur[free]
            cur = nxt
        hits = (cur & acc_mask[None, :]).any(axis=1)
        result[idx[hits]] = True
    return result


def selector_filter(codes, length, base, marker_class, data_digit, child_base,
                    child_codes, child_offsets):
    """Membership for marker/data words whose extracted word must be in a
    child language.

    marker_class: 0 for data letters, 1/2/3 for the odd/even/none markers.
    Markers closer than 3 positions apart are rejected.  The extracted word
    (child digits via data_digit) is looked up in the child's sorted level
    arrays: child_codes[child_offsets[m]:child_offsets[m+1]] holds length m.
    """
    n = codes.shape[0]
    digits = decode_digits(codes, length, base)
    result = np.zeros(n, dtype=bool)
    max_len = child_offsets.shape[0] - 2
    for w in range(n):
        row = digits[w]
        last_marker = -3
        mode = 0
        seg_pos = 0
        code = 0
        m = 0
        ok = True
        for i in range(length):
            mc = marker_class[row[i]]
            if mc:
                if i - last_marker < 3:
                    ok = False
                    break
                last_marker = i
                mode = mc
                seg_pos = 0
            else:
                seg_pos += 1
                if (mode == 1 and seg_pos % 2 == 1) or \
                   (mode == 2 and seg_pos % 2 == 0):
                    code = code * child_base + int(data_digit[row[i]])
                    m += 1
        if not ok or m > max_len:
            continue
        if m == 0:
            result[w] = True
            continue
        lo, hi = child_offsets[m], child_offsets[m + 1]
        j = np.searchsorted(child_codes[lo:hi], code)
        result[w] = j < hi - lo and child_codes[lo + j] == code
    return result
