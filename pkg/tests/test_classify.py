import itertools

import pytest
import sympy

import naive
from shiftspace import (DomainError, ResourceCapError, beta_dstar_digits,
                        beta_shift, classify_bounded, classify_sofic_exact,
                        context_free_shift, enumerate_language, even_shift,
                        full_shift, higher_block, k_sweep,
                        left_constraint_count, product,
                        random_sofic_presentation, reverse, sft, signature,
                        sofic)


def _golden():
    return sft(["0", "1"], ["11"])


def _labelled(oracle, result, n):
    words = [w.tokens for w in enumerate_language(oracle, n)]
    count, labels = result
    assert len(labels) == len(words)
    return dict(zip(words, (int(x) for x in labels)))


# --- bounded classification vs the definition ---------------------------------


@pytest.mark.parametrize("mode", ["follower", "predecessor", "extender"])
def test_bounded_partition_matches_naive(mode):
    cases = [(even_shift(), naive.even_member, ("0", "1")),
             (context_free_shift(), naive.cf_member, ("a", "b", "c"))]
    for oracle, member, toks in cases:
        for n, k in itertools.product((1, 2, 3), (0, 1, 2)):
            got = classify_bounded(oracle, n, k, mode)
            want = naive.classes(member, toks, n, k, mode)
            assert got.count == len(set(want.values()))
            assert naive.grouping(_labelled(oracle, got, n)) == \
                naive.grouping(want)


def test_bounded_partition_on_transforms():
    ev, g = even_shift(), _golden()
    prod = product(ev, g)

    def prod_member(w):
        pairs = [t[1:-1].split(",") for t in w]
        return (naive.even_member(tuple(p[0] for p in pairs))
                and naive.golden_member(tuple(p[1] for p in pairs)))

    hb = higher_block(g, 2)

    def hb_member(w):
        pairs = [t[1:-1].split(",") for t in w]
        if any(pairs[i][1] != pairs[i + 1][0] for i in range(len(pairs) - 1)):
            return False
        stitched = tuple(p[0] for p in pairs) + ((pairs[-1][1],) if pairs
                                                 else ())
        return naive.golden_member(stitched)

    rv = reverse(context_free_shift())

    def rv_member(w):
        return naive.cf_member(w[::-1])

    for oracle, member in [(prod, prod_member), (hb, hb_member),
                           (rv, rv_member)]:
        toks = oracle.alphabet.tokens
        for n, k, mode in itertools.product(
                (1, 2), (0, 1, 2), ("follower", "extender")):
            got = classify_bounded(oracle, n, k, mode)
            want = naive.classes(member, toks, n, k, mode)
            assert naive.grouping(_labelled(oracle, got, n)) == \
                naive.grouping(want), (oracle.name, n, k, mode)


def test_bounded_counts_never_decrease_in_k():
    cf = context_free_shift()
    for mode in ("follower", "predecessor", "extender"):
        counts = [classify_bounded(cf, 3, k, mode).count for k in range(5)]
        assert counts == sorted(counts)


def test_bounded_exactness_comes_from_the_memory_bound():
    g = _golden()
    assert classify_bounded(g, 3, 1, "follower").exact
    assert not classify_bounded(g, 3, 0, "follower").exact
    # sofic shifts carry no finite bound
    assert not classify_bounded(even_shift(), 3, 4, "follower").exact


def test_bounded_rejects_bad_arguments():
    with pytest.raises(DomainError):
        classify_bounded(even_shift(), 0, 1)
    with pytest.raises(DomainError):
        classify_bounded(even_shift(), 2, 1, "junk")
    with pytest.raises(ResourceCapError):
        classify_bounded(even_shift(), 10, 8, cap=50)


# --- exact classification from presentations -----------------------------------


def test_even_exact_counts():
    pres = even_shift().presentation
    assert [classify_sofic_exact(pres, n, "follower")
            for n in range(1, 9)] == [2, 3, 3, 3, 3, 3, 3, 3]
    assert [classify_sofic_exact(pres, n, "predecessor")
            for n in range(1, 9)] == [2, 3, 3, 3, 3, 3, 3, 3]
    assert [classify_sofic_exact(pres, n, "extender")
            for n in range(1, 9)] == [2, 4, 5, 5, 5, 5, 5, 5]


def test_golden_exact_counts():
    pres = _golden().presentation
    for n in range(1, 9):
        assert classify_sofic_exact(pres, n, "follower") == 2
        assert classify_sofic_exact(pres, n, "predecessor") == 2
    assert [classify_sofic_exact(pres, n, "extender")
            for n in range(1, 9)] == [2, 3, 4, 4, 4, 4, 4, 4]


def test_exact_agrees_with_saturated_naive_counts():
    for seed in range(3):
        pres = random_sofic_presentation(4, ["0", "1"], seed)
        oracle = sofic(pres)

        def member(w, pres=pres):
            letters = tuple(pres.alphabet.index[t] for t in w)
            return naive.sofic_member(pres.edges, pres.n_states, letters)

        for n, mode in itertools.product(
                (1, 2, 3), ("follower", "predecessor", "extender")):
            exact = classify_sofic_exact(pres, n, mode)
            saturated = max(naive.class_count(member, ("0", "1"), n, k, mode)
                            for k in range(5))
            assert exact == saturated, (seed, n, mode)


def test_extender_classes_dominate_one_sided_ones():
    pres = even_shift().presentation
    for n in range(1, 8):
        e = classify_sofic_exact(pres, n, "extender")
        f = classify_sofic_exact(pres, n, "follower")
        p = classify_sofic_exact(pres, n, "predecessor")
        assert e >= max(f, p)


# --- k sweeps -------------------------------------------------------------------


def test_sweep_certifies_at_the_memory_bound():
    s = k_sweep(_golden(), 3, "follower")
    assert s.count == 2 and s.certified and s.k_used == 1


def test_sweep_stops_on_a_plateau():
    # the even shift's depth-0 and depth-1 follower classes coincide, so a
    # window of two stops before the k=2 jump; a wider window sees it
    s = k_sweep(even_shift(), 1, "follower")
    assert (s.count, s.certified, s.k_used) == (1, False, 1)
    assert s.history == [(0, 1), (1, 1)]
    s = k_sweep(even_shift(), 1, "follower", stability_window=3)
    assert s.count == 2 and not s.certified


def test_sweep_respects_k_max():
    s = k_sweep(even_shift(), 2, "extender", k_max=1)
    assert s.k_used <= 1 and not s.certified


def test_sweep_matches_exact_for_sofic_examples():
    for oracle in (even_shift(), _golden()):
        for mode in ("follower", "predecessor", "extender"):
            for n in range(1, 6):
                swept = k_sweep(oracle, n, mode, stability_window=3)
                exact = classify_sofic_exact(oracle.presentation, n, mode)
                assert swept.count == exact, (oracle.name, mode, n)


def test_sweep_is_iterable_like_a_result():
    count, certified = 0, None
    s = k_sweep(_golden(), 2, "extender")
    assert s.count == 3
    assert s.history[-1][1] == s.count


# --- signatures -------------------------------------------------------------------


def test_signature_equality_follows_class_structure():
    ev = even_shift()
    for mode in ("follower", "extender"):
        result = classify_bounded(ev, 3, 2, mode)
        labels = _labelled(ev, result, 3)
        sigs = {w: signature(ev, "".join(w), 2, mode) for w in labels}
        for u, v in itertools.combinations(labels, 2):
            assert (sigs[u] == sigs[v]) == (labels[u] == labels[v]), (u, v)
            if sigs[u] == sigs[v]:
                assert hash(sigs[u]) == hash(sigs[v])


def test_signature_is_hashable_and_typed():
    ev = even_shift()
    sig = signature(ev, "00", 2, "extender")
    assert sig.mode == "extender" and sig.k == 2
    assert sig == signature(ev, ev.alphabet.word("00"), 2, "extender")
    assert len({sig, signature(ev, "11", 2, "extender")}) <= 2


def test_signature_rejects_non_words():
    with pytest.raises(DomainError):
        signature(even_shift(), "101", 2)


# --- left constraints -----------------------------------------------------------


def test_left_constraints_match_naive():
    cases = [(even_shift(), naive.even_member, ("0", "1")),
             (context_free_shift(), naive.cf_member, ("a", "b", "c"))]
    for oracle, member, toks in cases:
        for n, k in itertools.product((2, 3, 4), (0, 1, 2, 3)):
            assert left_constraint_count(oracle, n, k) == \
                naive.left_constraint_count(member, toks, n, k), (n, k)


def test_golden_followers_are_suffix_determined():
    g = _golden()
    for n in range(2, 7):
        assert left_constraint_count(g, n, 3) == 0


def test_tribonacci_has_a_left_constraint():
    t = beta_shift(beta_dstar_digits(sympy.CRootOf("x**3 - x**2 - x - 1",
                                                   0)))
    # dropping the leading 1 of 11 unlocks a third 1
    assert left_constraint_count(t, 2, 1) == 1
    assert [left_constraint_count(t, n, 1) for n in (3, 4, 5)] == [0, 0, 0]


def test_left_constraints_need_two_letters():
    with pytest.raises(DomainError):
        left_constraint_count(even_shift(), 1, 1)
