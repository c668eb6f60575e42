from fractions import Fraction as F

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from vlmc import SamplePath, build_counts, count, count_dot, delta, empirical_prob
from vlmc.empirical import empirical_row
from vlmc.errors import DepthExceeded, DepthTooLarge

SAMPLE = SamplePath.from_string("0110100", "01")


def naive(s, w):
    return sum(s[t:t + len(w)] == w for t in range(len(s) - len(w) + 1))


def test_counts_fixture():
    trie = build_counts(SAMPLE, 1)
    expected = {"0": 4, "1": 3, "01": 2, "11": 1, "10": 2, "00": 1}
    assert dict(trie.items()) == expected
    assert count(trie, "") == 7 and count_dot(trie, "") == 7
    assert count_dot(trie, "0") == 3
    assert count_dot(trie, "1") == 3


def test_constant_sample():
    s = SamplePath.from_string("a" * 20, "ab")
    trie = build_counts(s, 4)
    for j in range(1, 6):
        assert trie.count("a" * j) == 21 - j
    assert trie.count("ab") == 0 and trie.count("b") == 0


def test_empirical_fixture():
    trie = build_counts(SAMPLE, 1)
    assert empirical_prob(trie, "1", "0", exact=True) == F(3, 5)
    assert empirical_prob(trie, "1", "", exact=True) == F(4, 9)
    assert empirical_prob(trie, "1", "0") == 0.6
    assert delta(trie, "0", exact=True) == F(7, 45)
    assert delta(trie, "1", exact=True) == F(2, 45)
    assert delta(trie, "0") == pytest.approx(7 / 45, abs=1e-15)


def test_unseen_word_floor():
    trie = build_counts(SamplePath.from_string("1100000", "01"), 3)
    assert trie.count_dot("101") == 0
    assert empirical_prob(trie, "1", "101", exact=True) == F(1, 2)
    assert trie.count_dot("101") == trie.count_dot("01") == 0
    assert delta(trie, "101") == 0.0


def test_depth_errors():
    trie = build_counts(SAMPLE, 1)
    with pytest.raises(DepthExceeded):
        trie.count("011")
    with pytest.raises(DepthExceeded):
        delta(trie, "01")
    with pytest.raises(DepthTooLarge):
        build_counts(SAMPLE, 7)


def test_csv_order():
    trie = build_counts(SAMPLE, 1)
    assert trie.to_csv_lines() == ["0,4", "1,3", "00,1", "01,2", "10,2", "11,1"]


def test_ternary_alphabet():
    s = "abcabcaacbbca"
    trie = build_counts(SamplePath.from_string(s, "abc"), 3)
    for k in range(1, 5):
        for w in trie.alphabet.words(k):
            assert trie.count(w) == naive(s, w)
    assert sum(empirical_row(trie, "ca")) == pytest.approx(1, abs=1e-12)


samples = st.tuples(st.text("01", min_size=1, max_size=500), st.integers(0, 5)).filter(
    lambda t: t[1] + 1 <= len(t[0]))


@settings(max_examples=100, deadline=None)
@given(samples)
def test_trie_matches_naive_recount(case):
    s, d = case
    trie = build_counts(SamplePath.from_string(s, "01"), d)
    for k in range(0, d + 2):
        for w in trie.alphabet.words(k):
            assert trie.count(w) == (naive(s, w) if w else len(s))
    assert trie.node_count - 1 <= sum(min(2 ** j, len(s)) for j in range(1, d + 2))


@settings(max_examples=200, deadline=None)
@given(samples)
def test_row_and_delta_identities(case):
    s, d = case
    trie = build_counts(SamplePath.from_string(s, "01"), d)
    for k in range(0, d + 1):
        for w in trie.alphabet.words(k):
            assert sum(empirical_row(trie, w, exact=True)) == 1
            assert sum(empirical_row(trie, w)) == pytest.approx(1, abs=1e-12)
            c, cd = trie.count(w), trie.count_dot(w)
            assert cd == sum(trie.count(w + b) for b in "01")
            assert cd in ((c, c - 1) if w else (c,))
            if k >= 1:
                g = delta(trie, w, exact=True)
                assert 0 <= g < 1
                r, rs = empirical_row(trie, w, True), empirical_row(trie, w[1:], True)
                assert abs(r[0] - rs[0]) == abs(r[1] - rs[1]) == g
                if trie.count_dot(w) == 0 and trie.count_dot(w[1:]) == 0:
                    assert g == 0
