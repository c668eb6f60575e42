"""Substring counts and smoothed empirical transition probabilities."""
from __future__ import annotations

from fractions import Fraction
from typing import Iterator

import numpy as np

from .core_tree import Alphabet, suf
from .errors import DepthExceeded, DepthTooLarge
from .sampler import SamplePath

_DENSE_LIMIT = 1 << 22


class CountTrie:
    """Occurrence counts ``N_n(w)`` of every substring with ``l(w) <= d + 1``.

    Level ``l`` of the trie is a sorted array of the base-``|A|`` codes of
    the words of length ``l`` that occur in the sample, with their counts;
    the children of code ``c`` are the codes ``c * |A| + b``.  Only words
    that occur are stored.
    """

    def __init__(self, alphabet: Alphabet, depth: int, n: int, codes, counts, tail: str):
        self.alphabet = alphabet
        self.depth = depth
        self.max_len = depth + 1
        self.n = n
        self.codes = codes
        self.counts = counts
        self._tail = tail

    @property
    def node_count(self) -> int:
        return sum(len(c) for c in self.codes)

    def encode(self, w: str) -> int:
        A = len(self.alphabet)
        code = 0
        for s in w:
            code = code * A + self.alphabet.index(s)
        return code

    def _lookup(self, level: int, code: int) -> int:
        codes = self.codes[level]
        i = np.searchsorted(codes, code)
        if i < len(codes) and codes[i] == code:
            return int(self.counts[level][i])
        return 0

    def count(self, w: str) -> int:
        """``N_n(w)``; zero for words that never occur."""
        if len(w) > self.max_len:
            raise DepthExceeded(f"l(w) = {len(w)} exceeds the depth budget {self.max_len}")
        return self._lookup(len(w), self.encode(w))

    def count_dot(self, w: str) -> int:
        """``N_n(w.) = sum_b N_n(wb)``, i.e. occurrences of `w` followed by a
        symbol.  Works up to ``l(w) = d + 1`` because the only occurrence of
        a non-empty `w` without a successor is a final one.  ``N(.) = n``."""
        c = self.count(w)
        if c and w and self._tail.endswith(w):
            c -= 1
        return c

    def items(self) -> Iterator[tuple[str, int]]:
        """Stored ``(word, count)`` pairs by length, then lexicographically."""
        A = len(self.alphabet)
        for level in range(1, self.max_len + 1):
            for code, cnt in zip(self.codes[level], self.counts[level]):
                digits = []
                c = int(code)
                for _ in range(level):
                    c, r = divmod(c, A)
                    digits.append(self.alphabet.symbols[r])
                yield "".join(reversed(digits)), int(cnt)

    def to_csv_lines(self) -> list[str]:
        return [f"{w},{c}" for w, c in self.items()]


def build_counts(sample: SamplePath, d: int) -> CountTrie:
    """Count every substring of length ``<= d + 1`` in one pass per level."""
    x = np.asarray(sample.symbols, dtype=np.int64)
    n = len(x)
    if d < 0:
        raise DepthTooLarge("depth must be non-negative")
    if d + 1 > n:
        raise DepthTooLarge(f"d + 1 = {d + 1} exceeds the sample length {n}")
    A = len(sample.alphabet)
    if A ** (d + 1) >= 2**62:
        raise DepthTooLarge(f"words of length {d + 1} do not fit in 64-bit codes")
    codes = [np.zeros(1, dtype=np.int64)]
    counts = [np.array([n], dtype=np.int64)]
    window = np.zeros(n, dtype=np.int64)
    for level in range(1, d + 2):
        window = window[: n - level + 1] * A + x[level - 1:]
        if A ** level <= _DENSE_LIMIT:
            hist = np.bincount(window, minlength=A ** level)
            nz = np.flatnonzero(hist)
            codes.append(nz.astype(np.int64))
            counts.append(hist[nz].astype(np.int64))
        else:
            u, c = np.unique(window, return_counts=True)
            codes.append(u)
            counts.append(c.astype(np.int64))
    tail = sample.alphabet.decode(x[n - (d + 1):])
    return CountTrie(sample.alphabet, d, n, codes, counts, tail)


def count(trie: CountTrie, w: str) -> int:
    return trie.count(w)


def count_dot(trie: CountTrie, w: str) -> int:
    return trie.count_dot(w)


def empirical_row(trie: CountTrie, w: str, exact: bool = False):
    """``(N_n(wa) + 1) / (N_n(w.) + |A|)`` for every symbol ``a``.

    With ``exact=True`` the row is a list of :class:`~fractions.Fraction`.
    """
    A = len(trie.alphabet)
    if len(w) > trie.depth:
        raise DepthExceeded(f"l(w) = {len(w)} exceeds the estimation depth {trie.depth}")
    den = trie.count_dot(w) + A
    num = [trie.count(w + a) + 1 for a in trie.alphabet.symbols]
    if exact:
        return [Fraction(k, den) for k in num]
    return np.array(num, dtype=float) / den


def empirical_prob(trie: CountTrie, a: str, w: str, exact: bool = False):
    if len(w) > trie.depth:
        raise DepthExceeded(f"l(w) = {len(w)} exceeds the estimation depth {trie.depth}")
    num, den = trie.count(w + a) + 1, trie.count_dot(w) + len(trie.alphabet)
    return Fraction(num, den) if exact else num / den


def delta(trie: CountTrie, w: str, exact: bool = False):
    """Largest gap between the smoothed rows of `w` and of ``suf(w)``."""
    if not 1 <= len(w) <= trie.depth:
        raise DepthExceeded(f"delta needs 1 <= l(w) <= {trie.depth}")
    if exact:
        return max(abs(x - y) for x, y in
                   zip(empirical_row(trie, w, True), empirical_row(trie, suf(w), True)))
    return float(np.max(np.abs(empirical_row(trie, w) - empirical_row(trie, suf(w)))))
