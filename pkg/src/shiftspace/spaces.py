"""Concrete shift-space families exposed as language oracles.

Full shifts, shifts of finite type (via a trimmed de-Bruijn graph), sofic
shifts from labeled graph presentations (the even shift preset), beta-shifts
driven by the quasi-greedy expansion d*(1), Sturmian shifts via exact circle
arithmetic on a continued-fraction bracket, and the context-free shift over
{a,b,c} whose interior c-to-c segments are a^i b^i.
"""

import functools
import random
from fractions import Fraction

import numpy as np

from . import kernels
from .core import (Alphabet, AlphabetError, CertificationError,
                   ConstructionError, DomainError, LanguageOracle,
                   PrecisionError, ResourceCapError, Word)


class SoficPresentation:
    """Labeled graph presentation of a sofic shift.

    Trimmed to its essential part at construction (every state keeps at
    least one incoming and one outgoing edge), so a word is in the language
    iff some path carries its label.
    """

    def __init__(self, alphabet, states, edges):
        if not isinstance(alphabet, Alphabet):
            alphabet = Alphabet(alphabet)
        self.alphabet = alphabet
        states = [str(s) for s in states]
        if len(set(states)) != len(states):
            raise ConstructionError("duplicate state names")
        sidx = {s: i for i, s in enumerate(states)}
        packed = set()
        for frm, label, to in edges:
            a = alphabet._index_of(label) if not isinstance(label, (int, np.integer)) \
                else alphabet._index_of(int(label))
            packed.add((sidx[str(frm)], a, sidx[str(to)]))
        keep = self._essential_states(len(states), packed)
        if not keep:
            raise ConstructionError("presentation has no essential part")
        remap = {old: new for new, old in enumerate(sorted(keep))}
        self.states = tuple(states[old] for old in sorted(keep))
        self.edges = tuple(sorted((remap[f], a, remap[t])
                                  for f, a, t in packed
                                  if f in keep and t in keep))

    @staticmethod
    def _essential_states(n, edges):
        keep = set(range(n))
        while True:
            outs = {f for f, _, t in edges if f in keep and t in keep}
            ins = {t for f, _, t in edges if f in keep and t in keep}
            nxt = keep & outs & ins
            if nxt == keep:
                return keep
            keep = nxt

    @property
    def n_states(self):
        return len(self.states)

    def edge_list(self):
        return [(self.states[f], self.alphabet.tokens[a], self.states[t])
                for f, a, t in self.edges]

    def step_sets(self):
        """Per-letter successor sets: steps[a][q] = set of targets."""
        steps = [[set() for _ in range(self.n_states)]
                 for _ in range(len(self.alphabet))]
        for f, a, t in self.edges:
            steps[a][f].add(t)
        return steps

    def step_masks(self):
        """uint64 successor bitmasks (letters x states); needs <= 64 states."""
        if self.n_states > 64:
            raise ResourceCapError("presentation too large for bitmask runs")
        masks = np.zeros((len(self.alphabet), self.n_states), dtype=np.uint64)
        for f, a, t in self.edges:
            masks[a, f] |= np.uint64(1) << np.uint64(t)
        return masks

    def reversed_presentation(self):
        return SoficPresentation(
            self.alphabet, self.states,
            [(self.states[t], self.alphabet.tokens[a], self.states[f])
             for f, a, t in self.edges])

    def is_deterministic(self):
        seen = set()
        for f, a, _ in self.edges:
            if (f, a) in seen:
                return False
            seen.add((f, a))
        return True


class SoficOracle(LanguageOracle):
    def __init__(self, presentation, name="sofic"):
        super().__init__(presentation.alphabet, name)
        self.presentation = presentation
        self._steps = presentation.step_sets()
        self._masks = (presentation.step_masks()
                       if presentation.n_states <= 64 else None)
        self._full_mask = np.uint64((1 << presentation.n_states) - 1)

    def _member(self, idx):
        current = set(range(self.presentation.n_states))
        for a in idx:
            nxt = set()
            for q in current:
                nxt |= self._steps[a][q]
            if not nxt:
                return False
            current = nxt
        return True

    def _member_batch(self, codes, length):
        if self._masks is None:
            return super()._member_batch(codes, length)
        return kernels.subset_filter(codes, length, len(self.alphabet),
                                     self._masks, self._full_mask,
                                     self._full_mask)

    def scanner(self, cap=None):
        """Determinized automaton (trans, start, accept) for the language,
        built by subset construction from the full state set."""
        if getattr(self, "_scanner_cache", None) is not None:
            return self._scanner_cache
        base = len(self.alphabet)
        full = frozenset(range(self.presentation.n_states))
        index = {full: 0}
        queue = [full]
        rows = {0: [-1] * base}
        while queue:
            cur = queue.pop()
            if len(index) > 4096:
                raise ResourceCapError("determinization exceeds 4096 states")
            for a in range(base):
                nxt = set()
                for q in cur:
                    nxt |= self._steps[a][q]
                if not nxt:
                    continue
                nxt = frozenset(nxt)
                if nxt not in index:
                    index[nxt] = len(index)
                    rows[index[nxt]] = [-1] * base
                    queue.append(nxt)
                rows[index[cur]][a] = index[nxt]
        trans = np.array([rows[i] for i in range(len(index))],
                         dtype=np.int32)
        accept = np.ones(len(index), dtype=bool)
        self._scanner_cache = (trans, 0, accept)
        return self._scanner_cache


class FullShiftOracle(LanguageOracle):
    level_strategy = "forward"
    exact_context_bound = 0

    def __init__(self, alphabet, name="full"):
        super().__init__(alphabet, name)
        tokens = self.alphabet.tokens
        self.presentation = SoficPresentation(
            self.alphabet, ["q"], [("q", t, "q") for t in tokens])

    def _member(self, idx):
        return True

    def _member_batch(self, codes, length):
        return np.ones(codes.shape[0], dtype=bool)

    def _forward_level(self, m, cap):
        size = len(self.alphabet)**m
        if size > cap:
            raise ResourceCapError(
                "full shift level %d has %d words (cap %d)" % (m, size, cap),
                cap=cap, length=m, count=size)
        return np.arange(size, dtype=np.int64)


def full_shift(alphabet):
    return FullShiftOracle(alphabet)


def _normalize_forbidden(alphabet, forbidden):
    words = [alphabet.word(w) for w in forbidden]
    words = sorted(set(words), key=lambda w: (len(w), w.indices))
    kept = []
    for w in words:
        s = w.indices
        if any(len(v) < len(s) and any(
                s[i:i + len(v)] == v.indices
                for i in range(len(s) - len(v) + 1)) for v in kept):
            continue
        kept.append(w)
    return kept


class SftOracle(SoficOracle):
    def __init__(self, alphabet, forbidden, name="sft"):
        if not isinstance(alphabet, Alphabet):
            alphabet = Alphabet(alphabet)
        self.forbidden = _normalize_forbidden(alphabet, forbidden)
        self.memory = max((len(w) for w in self.forbidden), default=1) - 1
        m = self.memory
        bad = {w.indices for w in self.forbidden}

        def clean(seq):
            return not any(seq[i:i + L] in bad
                           for L in {len(b) for b in bad}
                           for i in range(len(seq) - L + 1))

        windows = [w for w in _all_tuples(len(alphabet), m) if clean(w)]
        wname = {w: "w" + "".join(alphabet.tokens[i] for i in w)
                 for w in windows}
        edges = []
        for w in windows:
            for a in range(len(alphabet)):
                nxt = (w + (a,))[1:] if m else ()
                if nxt in wname and clean(w + (a,)):
                    edges.append((wname[w], alphabet.tokens[a], wname[nxt]))
        try:
            pres = SoficPresentation(alphabet, list(wname.values()), edges)
        except ConstructionError:
            raise ConstructionError(
                "forbidden set %s leaves an empty shift space"
                % [str(w) for w in self.forbidden])
        super().__init__(pres, name)
        self.exact_context_bound = m


def _all_tuples(base, length):
    if length == 0:
        return [()]
    out = [()]
    for _ in range(length):
        out = [t + (a,) for t in out for a in range(base)]
    return out


def sft(alphabet, forbidden, name="sft"):
    return SftOracle(alphabet, forbidden, name)


def sofic(presentation, name="sofic"):
    return SoficOracle(presentation, name)


def even_shift():
    """Binary shift where runs of 0 between 1s have even length."""
    pres = SoficPresentation(
        ("0", "1"), ("q0", "q1"),
        [("q0", "1", "q0"), ("q0", "0", "q1"), ("q1", "0", "q0")])
    return SoficOracle(pres, name="even")


def random_sofic_presentation(n_states, alphabet, seed, density=0.45):
    """Seeded random essential presentation (deterministic per seed)."""
    if not isinstance(alphabet, Alphabet):
        alphabet = Alphabet(alphabet)
    states = ["s%d" % i for i in range(n_states)]
    for attempt in range(64):
        rng = random.Random("%r/%d" % (seed, attempt))
        edges = [(states[f], alphabet.tokens[a], states[t])
                 for f in range(n_states)
                 for a in range(len(alphabet))
                 for t in range(n_states)
                 if rng.random() < density]
        try:
            pres = SoficPresentation(alphabet, states, edges)
        except ConstructionError:
            continue
        if len(set(a for _, a, _ in pres.edges)) == len(alphabet):
            return pres
    raise ConstructionError(
        "no essential presentation found for seed %r" % (seed,))


# ---------------------------------------------------------------------------
# beta-shifts


class BetaDigits:
    """Digits of the quasi-greedy expansion d*(1).

    Either eventually periodic (preperiod, period) -- exact knowledge -- or
    a finite certified prefix (period None, `horizon` digits).  `finite`
    records that the greedy expansion of 1 terminated and d* was rewritten
    in its periodic form.
    """

    def __init__(self, preperiod, period, finite=False):
        self.preperiod = tuple(int(d) for d in preperiod)
        self.period = tuple(int(d) for d in period) if period is not None \
            else None
        self.finite = finite
        if self.period is not None and not self.period:
            raise ConstructionError("period must be nonempty when given")
        window = self.window(len(self.preperiod)
                             + 2 * len(self.period or ()) + 2)
        if not window:
            raise ConstructionError("d* needs at least one digit")
        if window[0] < 1:
            raise ConstructionError("leading digit of d* must be >= 1")
        if max(window) != window[0]:
            raise ConstructionError("leading digit of d* must be maximal")
        self._check_parry()

    @property
    def horizon(self):
        if self.period is not None:
            return None
        return len(self.preperiod)

    def digit(self, i):
        if i < len(self.preperiod):
            return self.preperiod[i]
        if self.period is None:
            raise CertificationError(
                "d* digits known only up to %d" % len(self.preperiod))
        off = i - len(self.preperiod)
        return self.period[off % len(self.period)]

    def window(self, n):
        if self.period is None:
            n = min(n, len(self.preperiod))
        return tuple(self.digit(i) for i in range(n))

    def _check_parry(self):
        # every shift of d* must be lexicographically <= d*; for an
        # eventually periodic word, comparing the first pre + 2*per + 2
        # symbols of each shift settles it (equal prefixes that long align
        # the periodic tails)
        p = len(self.preperiod)
        q = len(self.period or ())
        if self.period is not None:
            span = p + q
            need = p + 2 * q + 2
        else:
            span = p - 1
            need = p
        ref = self.window(need + span)
        for k in range(1, span + 1):
            shifted = ref[k:k + need]
            if shifted > ref[:len(shifted)]:
                raise ConstructionError(
                    "digit sequence is not shift-maximal (offset %d)" % k)

    def __repr__(self):
        if self.period is None:
            return "BetaDigits(prefix=%s)" % (list(self.preperiod),)
        return "BetaDigits(%s, %s)" % (list(self.preperiod),
                                       list(self.period))


def beta_dstar_digits(beta, horizon=64, precision=96):
    """Quasi-greedy expansion d*(1) for beta > 1.

    Integers and rationals run exactly (rationals detect eventual
    periodicity by remainder cycling); strings/sympy expressions run in
    exact algebraic arithmetic; floats run under an mpmath guard where any
    floor argument within 2**-precision of an integer raises
    PrecisionError.  Returns BetaDigits; non-exact paths never claim
    periodicity.
    """
    if isinstance(beta, (int, np.integer)):
        if beta <= 1:
            raise DomainError("beta must be > 1")
        return BetaDigits((), (int(beta) - 1,), finite=True)
    if isinstance(beta, Fraction):
        return _dstar_fraction(beta, horizon)
    if isinstance(beta, str):
        return _dstar_symbolic(beta, horizon)
    if isinstance(beta, float):
        return _dstar_float(beta, horizon, precision)
    # sympy expressions and anything exact-like
    return _dstar_symbolic(beta, horizon)


def _greedy_close(digits):
    # finite expansion e_1..e_m of 1 rewrites to d* = (e_1..e_{m-1}(e_m-1))^inf
    per = list(digits)
    per[-1] -= 1
    if all(d == 0 for d in per):
        raise DomainError("beta must be > 1")
    return BetaDigits((), per, finite=True)


def _dstar_fraction(beta, horizon):
    if beta <= 1:
        raise DomainError("beta must be > 1")
    x = Fraction(1)
    digits = []
    seen = {}
    while len(digits) < horizon:
        if x == 0:
            return _greedy_close(digits)
        if x in seen:
            start = seen[x]
            return BetaDigits(digits[:start], digits[start:])
        seen[x] = len(digits)
        y = beta * x
        d = y.numerator // y.denominator
        digits.append(int(d))
        x = y - d
    return BetaDigits(digits, None)


def _dstar_symbolic(beta, horizon):
    import sympy

    b = sympy.sympify(beta, rational=True)
    if not b.is_number or b.is_real is False:
        raise DomainError("beta must be a real number > 1, got %r" % (beta,))
    if b.is_Rational:
        return _dstar_fraction(Fraction(int(b.p), int(b.q)), horizon)
    if b.evalf(60) <= 1:
        raise DomainError("beta must be > 1")
    x = sympy.Integer(1)
    digits = []
    history = []

    def _floor_exact(y):
        yn = y.evalf(60)
        d = int(sympy.floor(yn))
        frac = float(yn - d)
        if frac < 1e-40 or frac > 1 - 1e-40:
            # suspiciously close to an integer: settle exactly, then
            # re-evaluate at higher precision for the generic case
            for c in (d, d + 1, d - 1):
                if (y - c).equals(0):
                    return c, sympy.Integer(0)
            d = int(sympy.floor(y.evalf(240)))
        return d, sympy.radsimp(sympy.expand(y - d))

    while len(digits) < horizon:
        if x == 0 or x.equals(0):
            return _greedy_close(digits)
        key = str(x.evalf(40))
        for j, (pkey, prev) in enumerate(history):
            if pkey == key and (x - prev).equals(0):
                return BetaDigits(digits[:j], digits[j:])
        history.append((key, x))
        d, x = _floor_exact(sympy.expand(b * x))
        digits.append(d)
    return BetaDigits(digits, None)


def _dstar_float(beta, horizon, precision):
    import mpmath

    if beta <= 1:
        raise DomainError("beta must be > 1")
    digits = []
    with mpmath.workprec(precision + 32):
        b = mpmath.mpf(beta)
        x = mpmath.mpf(1)
        tol = mpmath.mpf(2)**(-precision)
        while len(digits) < horizon:
            y = b * x
            nearest = mpmath.nint(y)
            if abs(y - nearest) < tol:
                raise PrecisionError(
                    "floor argument within 2^-%d of an integer after %d "
                    "digits; raise the precision budget"
                    % (precision, len(digits)))
            d = int(mpmath.floor(y))
            digits.append(d)
            x = y - d
    return BetaDigits(digits, None)


def _beta_tail_dfa(digits):
    """DFA over tail indices of eventually periodic d*; state = length of
    the longest suffix of the scanned word matching a prefix of d*."""
    p = len(digits.preperiod)
    q = len(digits.period)
    nstates = p + q
    dmax = digits.digit(0)
    ref = digits.window(2 * nstates + 2)

    def wrap(t):
        return t if t < nstates else p + (t - p) % q

    trans = np.full((nstates, dmax + 1), -1, dtype=np.int32)
    for t in range(nstates):
        d = ref[t]
        for sigma in range(dmax + 1):
            if sigma > d:
                continue
            if sigma == d:
                trans[t, sigma] = wrap(t + 1)
                continue
            best = 0
            for ell in range(min(t + 1, nstates), 0, -1):
                if ref[ell - 1] == sigma and ref[t - ell + 1:t] == ref[:ell - 1]:
                    best = ell
                    break
            trans[t, sigma] = best
    return trans


class BetaOracle(LanguageOracle):
    """Language of the beta-shift: every suffix of w is lexicographically
    <= the same-length prefix of d*."""

    def __init__(self, digits, name="beta"):
        if not isinstance(digits, BetaDigits):
            if isinstance(digits, tuple) and len(digits) == 2:
                digits = BetaDigits(digits[0], digits[1])
            else:
                digits = beta_dstar_digits(digits)
        alphabet = Alphabet([str(i) for i in range(digits.digit(0) + 1)])
        super().__init__(alphabet, name)
        self.digits = digits
        self._dfa = None
        if digits.period is not None:
            self._dfa = _beta_tail_dfa(digits)
            states = ["t%d" % i for i in range(self._dfa.shape[0])]
            edges = [(states[f], self.alphabet.tokens[a], states[int(t)])
                     for f in range(self._dfa.shape[0])
                     for a in range(self._dfa.shape[1])
                     for t in [self._dfa[f, a]] if t >= 0]
            self.presentation = SoficPresentation(alphabet, states, edges)

    def _member(self, idx):
        if self._dfa is not None:
            state = 0
            for a in idx:
                state = self._dfa[state, a]
                if state < 0:
                    return False
            return True
        # certified prefix only: direct suffix comparison
        n = len(idx)
        if n > len(self.digits.preperiod):
            raise CertificationError(
                "word longer than the certified digit horizon %d"
                % len(self.digits.preperiod))
        ref = self.digits.preperiod
        for i in range(n):
            if tuple(idx[i:]) > ref[:n - i]:
                return False
        return True

    def _member_batch(self, codes, length):
        if self._dfa is None:
            return super()._member_batch(codes, length)
        accept = np.ones(self._dfa.shape[0], dtype=bool)
        return kernels.dfa_filter(codes, length, len(self.alphabet),
                                  self._dfa, 0, accept)

    def scanner(self, cap=None):
        if self._dfa is None:
            raise CertificationError(
                "no automaton for a prefix-only digit sequence")
        return self._dfa, 0, np.ones(self._dfa.shape[0], dtype=bool)


def beta_shift(digits, name="beta"):
    return BetaOracle(digits, name)


# ---------------------------------------------------------------------------
# Sturmian shifts


class SturmianOracle(LanguageOracle):
    """Coding of the rotation t -> t + eta with cells [0,1-eta) -> 0 and
    [1-eta,1) -> 1.

    eta is pinned between the last two continued-fraction convergents
    (width eps).  The length-n factors are exactly the codings of the n+1
    circle arcs cut by {-k*eta mod 1 : k=0..n}; they are computed exactly
    at the final convergent and certified for the whole bracket as long as
    the minimal arc gap dominates the accumulated endpoint drift -- else
    PrecisionError asks for more partial quotients.
    """

    def __init__(self, cf, name="sturmian"):
        super().__init__(("0", "1"), name)
        cf = tuple(int(a) for a in cf)
        if len(cf) < 2 or any(a < 1 for a in cf):
            raise ConstructionError(
                "need >= 2 positive partial quotients for a bracket")
        self.cf = cf
        h2, h1 = 1, 0   # numerators of convergents of [0; a1, a2, ...]
        k2, k1 = 0, 1
        convergents = []
        for a in cf:
            h2, h1 = h1, a * h1 + h2
            k2, k1 = k1, a * k1 + k2
            convergents.append(Fraction(h1, k1))
        self.eta = convergents[-1]
        self.eps = abs(convergents[-1] - convergents[-2])
        self.eta_bracket = (min(convergents[-2:]), max(convergents[-2:]))
        if not 0 < self.eta < 1:
            raise ConstructionError("rotation number must be in (0,1)")
        self._factors = {}

    def factor_set(self, n):
        """All length-n factors as a set of index tuples (exactly n+1)."""
        if n in self._factors:
            return self._factors[n]
        eta = self.eta
        if (n + 1) * self.eps >= Fraction(1, max(2 * (n + 1), 4)):
            raise PrecisionError("bracket too wide for length %d" % n)
        cuts = sorted(set((-k * eta) % 1 for k in range(n + 1)))
        if len(cuts) != n + 1:
            raise PrecisionError(
                "convergent denominator too small for length %d" % n)
        gaps = [cuts[i + 1] - cuts[i] for i in range(len(cuts) - 1)]
        gaps.append(cuts[0] + 1 - cuts[-1])
        if min(gaps) <= 4 * (n + 2) * self.eps:
            raise PrecisionError(
                "arc structure at length %d is not certified by the "
                "current bracket; extend cf" % n)
        one = 1 - eta
        words = set()
        for i in range(len(cuts)):
            hi = cuts[i + 1] if i + 1 < len(cuts) else cuts[0] + 1
            mid = (cuts[i] + hi) / 2 % 1
            words.add(tuple(1 if (mid + k * eta) % 1 >= one else 0
                            for k in range(n)))
        assert len(words) == n + 1
        self._factors[n] = words
        return words

    def _member(self, idx):
        if not idx:
            return True
        return tuple(idx) in self.factor_set(len(idx))


def sturmian(cf, name="sturmian"):
    return SturmianOracle(cf, name)


# ---------------------------------------------------------------------------
# the context-free shift


@functools.lru_cache(maxsize=64)
def cf_scanner(cap):
    """Scanner DFA for context-free-shift words up to length `cap`.

    States track (after-first-c?, a-count i, b-count j) of the open
    segment; interior segments must close with i == j, the first segment
    with i == 0 or i <= j, and a final segment is legal when j == 0 or
    j <= i.  Returns (trans, start, accept).
    """
    side = cap + 2
    nstates = 2 * side * side

    def sid(mode, i, j):
        return (mode * side + i) * side + j

    trans = np.full((nstates, 3), -1, dtype=np.int32)
    accept = np.zeros(nstates, dtype=bool)
    for mode in (0, 1):
        for i in range(side - 1):
            for j in range(side - 1):
                s = sid(mode, i, j)
                if j == 0:
                    trans[s, 0] = sid(mode, i + 1, 0)
                trans[s, 1] = sid(mode, i, j + 1)
                if mode == 0:
                    if i == 0 or i <= j:
                        trans[s, 2] = sid(1, 0, 0)
                else:
                    if i == j:
                        trans[s, 2] = sid(1, 0, 0)
                accept[s] = mode == 0 or j == 0 or j <= i
    return trans, sid(0, 0, 0), accept


class ContextFreeOracle(LanguageOracle):
    """Shift over {a,b,c} where the word between consecutive c's is a^i b^i
    (with the matching one-sided rules for boundary segments)."""

    def __init__(self, name="context-free"):
        super().__init__(("a", "b", "c"), name)

    def _member(self, idx):
        mode, i, j = 0, 0, 0
        for letter in idx:
            if letter == 0:
                if j > 0:
                    return False
                i += 1
            elif letter == 1:
                j += 1
            else:
                if mode == 0:
                    if not (i == 0 or i <= j):
                        return False
                else:
                    if i != j:
                        return False
                mode, i, j = 1, 0, 0
        return mode == 0 or j == 0 or j <= i

    def _member_batch(self, codes, length):
        trans, start, accept = cf_scanner(length)
        return kernels.dfa_filter(codes, length, 3, trans, start, accept)

    def scanner(self, cap):
        return cf_scanner(cap)


def context_free_shift():
    return ContextFreeOracle()
