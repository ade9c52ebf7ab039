"""Alphabets, words, the language-oracle contract, and memoized enumeration.

A shift space is represented by its language: a factorial, extendable set of
finite words given through a membership oracle.  Enumeration builds the
length-n level from the length-(n-1) level by appending one symbol and
filtering (valid because the language is factorial), and memoizes levels per
oracle.  Words are packed into int64 codes (big-endian digits in the
alphabet's base) so levels are sorted integer arrays and batch membership
can run through the kernels.

Large levels are kept in a lean form: once level m+1 exists, the code array
of a big level m may be dropped while its boolean child mask (which of the
candidates ``parent*base + a`` survived) is retained.  Masks plus sizes are
all the classification recursion needs, and code arrays can be rebuilt from
the masks on demand.
"""

import threading
import weakref

import numpy as np

DEFAULT_CAP = 5_000_000
# keep code arrays for levels up to this size; bigger ones are rebuildable
LEAN_SIZE = 1 << 22
# base**length must stay below this so code*base+letter fits in int64
CODE_LIMIT = 2**62
_CHUNK = 1 << 21


class ShiftSpaceError(Exception):
    pass


class AlphabetError(ShiftSpaceError):
    pass


class DomainError(ShiftSpaceError):
    pass


class ConstructionError(ShiftSpaceError):
    pass


class PrecisionError(ShiftSpaceError):
    pass


class CertificationError(ShiftSpaceError):
    pass


class ResourceCapError(ShiftSpaceError):
    def __init__(self, message, cap=None, length=None, count=None):
        super().__init__(message)
        self.cap = cap
        self.length = length
        self.count = count


class Alphabet:
    """Ordered set of distinct printable symbol tokens."""

    def __init__(self, tokens):
        tokens = tuple(str(t) for t in tokens)
        if not tokens:
            raise ConstructionError("alphabet must be nonempty")
        if len(set(tokens)) != len(tokens):
            raise ConstructionError("alphabet tokens must be distinct")
        if any(t == "" for t in tokens):
            raise ConstructionError("alphabet tokens must be nonempty strings")
        self.tokens = tokens
        self.index = {t: i for i, t in enumerate(tokens)}

    def __len__(self):
        return len(self.tokens)

    def __iter__(self):
        return iter(self.tokens)

    def __eq__(self, other):
        return isinstance(other, Alphabet) and self.tokens == other.tokens

    def __hash__(self):
        return hash(self.tokens)

    def __repr__(self):
        return "Alphabet(%s)" % (list(self.tokens),)

    def word(self, text):
        """Build a Word from a Word, token iterable, or string.

        Strings are tokenized greedily, longest token first, so alphabets
        with multi-character tokens like "0'" parse unambiguously.
        """
        if isinstance(text, Word):
            if text.alphabet != self:
                raise AlphabetError("word is over a different alphabet")
            return text
        if isinstance(text, str):
            by_len = sorted(self.tokens, key=len, reverse=True)
            indices = []
            pos = 0
            while pos < len(text):
                for t in by_len:
                    if text.startswith(t, pos):
                        indices.append(self.index[t])
                        pos += len(t)
                        break
                else:
                    raise AlphabetError(
                        "cannot tokenize %r at position %d" % (text, pos))
            return Word(self, indices)
        return Word(self, [self._index_of(t) for t in text])

    def _index_of(self, token):
        if isinstance(token, (int, np.integer)):
            if not 0 <= token < len(self.tokens):
                raise AlphabetError("symbol index %d out of range" % token)
            return int(token)
        try:
            return self.index[token]
        except KeyError:
            raise AlphabetError("token %r not in alphabet" % (token,))


class Word:
    """Immutable symbol sequence over a fixed alphabet."""

    __slots__ = ("alphabet", "indices")

    def __init__(self, alphabet, indices):
        self.alphabet = alphabet
        self.indices = tuple(int(i) for i in indices)
        assert all(0 <= i < len(alphabet) for i in self.indices)

    def __len__(self):
        return len(self.indices)

    def __iter__(self):
        return iter(self.indices)

    def __getitem__(self, item):
        if isinstance(item, slice):
            return Word(self.alphabet, self.indices[item])
        return self.indices[item]

    def __add__(self, other):
        if isinstance(other, Word):
            if other.alphabet != self.alphabet:
                raise AlphabetError("cannot concatenate across alphabets")
            return Word(self.alphabet, self.indices + other.indices)
        return NotImplemented

    def __eq__(self, other):
        return (isinstance(other, Word) and self.alphabet == other.alphabet
                and self.indices == other.indices)

    def __hash__(self):
        return hash((self.alphabet.tokens, self.indices))

    @property
    def tokens(self):
        return tuple(self.alphabet.tokens[i] for i in self.indices)

    def __str__(self):
        toks = self.tokens
        if all(len(t) == 1 for t in self.alphabet.tokens):
            return "".join(toks)
        return " ".join(toks)

    def __repr__(self):
        return "Word(%r)" % (str(self),)


class LanguageOracle:
    """Membership oracle for the (factorial, extendable) language of a
    shift space.

    Subclasses implement ``_member`` on index tuples; batch membership and
    level construction have hooks for vectorized paths.  ``level_strategy``
    is "filter" (build level m by extending level m-1 and filtering) or
    "forward" (the oracle constructs level m directly, e.g. as the image of
    another oracle's level).
    """

    level_strategy = "filter"
    exact_context_bound = None  # context depth at which signatures are exact
    presentation = None         # SoficPresentation when one is known

    def __init__(self, alphabet, name="shift"):
        if not isinstance(alphabet, Alphabet):
            alphabet = Alphabet(alphabet)
        self.alphabet = alphabet
        self.name = name

    def contains(self, w):
        return membership(self, w)

    def _member(self, idx):
        raise NotImplementedError

    def _member_batch(self, codes, length):
        base = len(self.alphabet)
        out = np.empty(codes.shape[0], dtype=bool)
        for i in range(codes.shape[0]):
            out[i] = self._member(_decode(int(codes[i]), length, base))
        return out

    def _forward_level(self, m, cap):
        raise NotImplementedError

    def __repr__(self):
        return "<%s %r over %d symbols>" % (
            type(self).__name__, self.name, len(self.alphabet))


def _decode(code, length, base):
    idx = [0] * length
    for pos in range(length - 1, -1, -1):
        code, idx[pos] = divmod(code, base)
    return tuple(idx)


def encode_word(word):
    base = len(word.alphabet)
    code = 0
    for i in word.indices:
        code = code * base + i
    return code


class _Levels:
    """Per-oracle cache of language levels (sizes, codes, child masks)."""

    def __init__(self, oracle):
        self.oracle = oracle
        self.sizes = {}
        self.codes = {}
        self.masks = {}
        self.lock = threading.RLock()

    def size(self, m, cap):
        with self.lock:
            self._ensure(m, cap, need_codes=False)
            return self.sizes[m]

    def level(self, m, cap):
        with self.lock:
            self._ensure(m, cap, need_codes=True)
            if self.codes[m] is None:
                self._rebuild(m)
            return self.codes[m]

    def child_mask(self, m, cap):
        """Mask over candidates parent*base+a for level m (filter strategy)."""
        with self.lock:
            self._ensure(m, cap, need_codes=False)
            return self.masks.get(m)

    def _ensure(self, m, cap, need_codes):
        if cap is None:
            cap = DEFAULT_CAP
        if m in self.sizes:
            if need_codes and self.codes[m] is None:
                self._rebuild(m)
            return
        oracle = self.oracle
        base = len(oracle.alphabet)
        if base**max(m, 1) >= CODE_LIMIT:
            raise ResourceCapError(
                "words of length %d over %d symbols exceed the int64 code "
                "range" % (m, base), length=m)
        if m == 0:
            member = oracle._member(())
            assert member, "empty word must be in every nonempty language"
            self.codes[0] = np.zeros(1, dtype=np.int64)
            self.sizes[0] = 1
            return
        if oracle.level_strategy == "forward":
            codes = np.asarray(oracle._forward_level(m, cap), dtype=np.int64)
            if codes.size > cap:
                raise ResourceCapError(
                    "level %d of %s has %d words (cap %d)"
                    % (m, oracle.name, codes.size, cap),
                    cap=cap, length=m, count=int(codes.size))
            self.codes[m] = codes
            self.sizes[m] = int(codes.size)
            return
        self._ensure(m - 1, cap, need_codes=True)
        if self.codes[m - 1] is None:
            self._rebuild(m - 1)
        parents = self.codes[m - 1]
        ncand = parents.size * base
        if ncand > cap * base:
            raise ResourceCapError(
                "candidate set for level %d of %s has %d words (cap %d)"
                % (m, oracle.name, ncand, cap), cap=cap, length=m,
                count=int(ncand))
        mask = np.empty(ncand, dtype=bool)
        keep = []
        for lo in range(0, parents.size, _CHUNK):
            chunk = parents[lo:lo + _CHUNK]
            cand = (chunk[:, None] * base
                    + np.arange(base, dtype=np.int64)).ravel()
            hits = oracle._member_batch(cand, m)
            mask[lo * base:lo * base + cand.size] = hits
            keep.append(cand[hits])
        codes = np.concatenate(keep) if keep else np.empty(0, np.int64)
        if codes.size > cap:
            raise ResourceCapError(
                "level %d of %s has %d words (cap %d)"
                % (m, oracle.name, codes.size, cap), cap=cap, length=m,
                count=int(codes.size))
        self.masks[m] = mask
        self.sizes[m] = int(codes.size)
        self.codes[m] = codes
        if m - 1 > 0 and self.sizes[m - 1] > LEAN_SIZE:
            self.codes[m - 1] = None

    def drop_codes(self, m):
        with self.lock:
            if m in self.codes and m in self.masks and m > 0:
                self.codes[m] = None

    def _rebuild(self, m):
        lo = m
        while self.codes.get(lo) is None:
            lo -= 1
        base = len(self.oracle.alphabet)
        for mm in range(lo + 1, m + 1):
            parents = self.codes[mm - 1]
            mask = self.masks[mm]
            keep = []
            for off in range(0, parents.size, _CHUNK):
                chunk = parents[off:off + _CHUNK]
                cand = (chunk[:, None] * base
                        + np.arange(base, dtype=np.int64)).ravel()
                keep.append(cand[mask[off * base:off * base + cand.size]])
            self.codes[mm] = (np.concatenate(keep) if keep
                              else np.empty(0, np.int64))
            if mm - 1 != lo and mm - 1 > 0 and self.sizes[mm - 1] > LEAN_SIZE:
                self.codes[mm - 1] = None


_STORE_LOCK = threading.Lock()
_LEVEL_STORE = weakref.WeakKeyDictionary()


def levels_of(oracle):
    with _STORE_LOCK:
        st = _LEVEL_STORE.get(oracle)
        if st is None:
            st = _Levels(oracle)
            _LEVEL_STORE[oracle] = st
        return st


def membership(oracle, w):
    """True iff w is in the oracle's language; wrong-alphabet words are an
    error, not False."""
    w = oracle.alphabet.word(w)
    return bool(oracle._member(w.indices))


def enumerate_language(oracle, n, cap=None):
    """All words of length n, in lexicographic (alphabet index) order."""
    if n < 0:
        raise DomainError("word length must be >= 0")
    codes = levels_of(oracle).level(n, cap)
    base = len(oracle.alphabet)
    return [Word(oracle.alphabet, _decode(int(c), n, base)) for c in codes]


def language_size(oracle, n, cap=None):
    return levels_of(oracle).size(n, cap)


def complexity_sequence(oracle, max_n, cap=None):
    """[|L_1|, ..., |L_max_n|]."""
    if max_n < 1:
        raise DomainError("max_n must be >= 1")
    st = levels_of(oracle)
    return [st.size(n, cap) for n in range(1, max_n + 1)]


def subword_count(x, n):
    """Number of distinct length-n factors of the sequence x.

    x is eventually periodic -- (preperiod, period) or anything with those
    attributes -- or a plain finite sequence, in which case only its own
    factors are counted and n must not exceed its length.
    """
    if n == 0:
        return 1
    pre, per = None, None
    if hasattr(x, "preperiod"):
        pre, per = tuple(x.preperiod), x.period
        per = tuple(per) if per is not None else None
    elif (isinstance(x, tuple) and len(x) == 2
          and not isinstance(x[0], (int, str))):
        pre, per = tuple(x[0]), tuple(x[1])
    if per:
        window = list(pre)
        need = len(pre) + len(per) + n - 1
        while len(window) < need:
            window.extend(per)
        starts = len(pre) + len(per)
        return len({tuple(window[i:i + n]) for i in range(starts)})
    seq = tuple(pre) if pre is not None else tuple(x)
    if n > len(seq):
        raise CertificationError(
            "need %d symbols to count length-%d factors, have %d"
            % (n, n, len(seq)))
    return len({seq[i:i + n] for i in range(len(seq) - n + 1)})


class CountRow:
    __slots__ = ("n", "count_L", "count_F", "count_P", "count_E", "k_used",
                 "exact_F", "exact_P", "exact_E")

    def __init__(self, n, count_L, count_F, count_P, count_E, k_used,
                 exact_F, exact_P, exact_E):
        self.n = n
        self.count_L = count_L
        self.count_F = count_F
        self.count_P = count_P
        self.count_E = count_E
        self.k_used = k_used
        self.exact_F = exact_F
        self.exact_P = exact_P
        self.exact_E = exact_E

    def __repr__(self):
        return ("CountRow(n=%d, L=%d, F=%s, P=%s, E=%s, k=%d)"
                % (self.n, self.count_L, self.count_F, self.count_P,
                   self.count_E, self.k_used))


class CountTable:
    """Per-n counts |L_n|, |F(n)|, |P(n)|, |E(n)| with exactness flags.

    Rows must satisfy |E| >= max(|F|, |P|) and |L_n| >= |E| -- these hold
    both for true counts and for bounded counts taken at one common context
    depth, which is how rows are produced.
    """

    def __init__(self, rows):
        rows = sorted(rows, key=lambda r: r.n)
        for r in rows:
            present = [c for c in (r.count_F, r.count_P, r.count_E)
                       if c is not None]
            assert all(c >= 1 for c in present)
            if r.count_E is not None:
                if r.count_F is not None:
                    assert r.count_E >= r.count_F, r
                if r.count_P is not None:
                    assert r.count_E >= r.count_P, r
                assert r.count_L >= r.count_E, r
        self.rows = rows

    def row(self, n):
        for r in self.rows:
            if r.n == n:
                return r
        raise DomainError("no row for n=%d" % n)

    def counts(self, column):
        return [getattr(r, "count_" + column) for r in self.rows]

    def __iter__(self):
        return iter(self.rows)

    def __len__(self):
        return len(self.rows)
