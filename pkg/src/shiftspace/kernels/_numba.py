"""Numba implementations of the batch word filters.

Per-word loops compiled with ``@njit(cache=True)``; semantics match
``shiftspace.kernels._numpy`` exactly (the test suite runs both backends on
the same inputs).  The marker filter tracks the core-DFA state set as an
explicit active-state list instead of a bitset: the sets stay tiny, so this
beats iterating all 64-bit words of a mask.
"""

import numpy as np
from numba import njit


@njit(cache=True)
def dfa_filter(codes, length, base, trans, start, accept):
    n = codes.shape[0]
    result = np.zeros(n, dtype=np.bool_)
    for w in range(n):
        rest = codes[w]
        state = start
        # digits MSB-first: peel with precomputed power
        power = np.int64(1)
        for _ in range(length - 1):
            power *= base
        for _ in range(length):
            d = rest // power
            rest -= d * power
            power //= base
            state = trans[state, d]
            if state < 0:
                break
        result[w] = state >= 0 and accept[state]
    return result


@njit(cache=True)
def subset_filter(codes, length, base, step, start_mask, accept_mask):
    n = codes.shape[0]
    nstates = step.shape[1]
    result = np.zeros(n, dtype=np.bool_)
    for w in range(n):
        rest = codes[w]
        power = np.int64(1)
        for _ in range(length - 1):
            power *= base
        mask = start_mask
        for _ in range(length):
            d = rest // power
            rest -= d * power
            power //= base
            nxt = np.uint64(0)
            for q in range(nstates):
                if (mask >> np.uint64(q)) & np.uint64(1):
                    nxt |= step[d, q]
            mask = nxt
            if mask == np.uint64(0):
                break
        result[w] = (mask & accept_mask) != np.uint64(0)
    return result


@njit(cache=True)
def marker_filter(codes, length, base, sel_class, data_class, trans, start,
                  accept):
    n = codes.shape[0]
    nstates = trans.shape[0]
    result = np.zeros(n, dtype=np.bool_)
    digits = np.empty(max(length, 1), dtype=np.int8)
    cur = np.empty(nstates, dtype=np.int32)
    nxt = np.empty(nstates, dtype=np.int32)
    in_nxt = np.zeros(nstates, dtype=np.uint8)
    for w in range(n):
        rest = codes[w]
        for pos in range(length - 1, -1, -1):
            digits[pos] = rest % base
            rest //= base
        hit = False
        for offset in range(4):
            ok = True
            for i in range(length):
                if (sel_class[digits[i]] != 0) != ((i % 4) == offset):
                    ok = False
                    break
            if not ok:
                continue
            cur_len = 1
            cur[0] = start
            sigma = offset - 4
            while sigma < length and cur_len > 0:
                nxt_len = 0
                v = np.int8(-1)
                if sigma >= 0:
                    v = sel_class[digits[sigma]]
                for j in range(1, 4):
                    if v != -1 and v != j:
                        continue
                    q = sigma + j
                    if q < 0 or q >= length:
                        # selection falls outside the word: free completion,
                        # the state set passes through unchanged
                        for si in range(cur_len):
                            s = cur[si]
                            if not in_nxt[s]:
                                in_nxt[s] = 1
                                nxt[nxt_len] = s
                                nxt_len += 1
                        continue
                    c = data_class[digits[q]]
                    for si in range(cur_len):
                        t = trans[cur[si], c]
                        if t >= 0 and not in_nxt[t]:
                            in_nxt[t] = 1
                            nxt[nxt_len] = t
                            nxt_len += 1
                for si in range(nxt_len):
                    cur[si] = nxt[si]
                    in_nxt[nxt[si]] = 0
                cur_len = nxt_len
                sigma += 4
            for si in range(cur_len):
                if accept[cur[si]]:
                    hit = True
                    break
            if hit:
                break
        result[w] = hit
    return result


@njit(cache=True)
def selector_filter(codes, length, base, marker_class, data_digit, child_base,
                    child_codes, child_offsets):
    n = codes.shape[0]
    result = np.zeros(n, dtype=np.bool_)
    digits = np.empty(max(length, 1), dtype=np.int8)
    max_len = child_offsets.shape[0] - 2
    for w in range(n):
        rest = codes[w]
        for pos in range(length - 1, -1, -1):
            digits[pos] = rest % base
            rest //= base
        last_marker = -3
        mode = 0
        seg_pos = 0
        code = np.int64(0)
        m = 0
        ok = True
        for i in range(length):
            mc = marker_class[digits[i]]
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
                    code = code * child_base + data_digit[digits[i]]
                    m += 1
        if not ok or m > max_len:
            continue
        if m == 0:
            result[w] = True
            continue
        lo = child_offsets[m]
        hi = child_offsets[m + 1]
        while lo < hi:
            mid = (lo + hi) // 2
            if child_codes[mid] < code:
                lo = mid + 1
            else:
                hi = mid
        result[w] = lo < child_offsets[m + 1] and child_codes[lo] == code
    return result
