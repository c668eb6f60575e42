"""Context tree estimation by thresholded pruning of the count trie."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .core_tree import ContextTree, suf, truncate
from .empirical import CountTrie, build_counts, delta, empirical_row
from .errors import DegenerateSample, DepthExceeded, EnumerationTooLarge, InvalidInput
from .sampler import SamplePath

ENUMERATION_LIMIT = 10**6


@dataclass(frozen=True)
class EstimationParams:
    delta: float
    d: int
    K: int = 1

    def __post_init__(self):
        if not self.delta > 0:
            raise InvalidInput("delta must be positive")
        if self.d < 1:
            raise InvalidInput("d must be at least 1")
        if self.K < 1:
            raise InvalidInput("K must be at least 1")


@dataclass
class EstimationResult:
    tree: ContextTree
    rows: dict
    params: EstimationParams | None = None
    provenance: dict = field(default_factory=dict)

    @property
    def contexts(self) -> list[str]:
        return list(self.tree)

    def to_dict(self) -> dict:
        keys = list(self.tree) or [""]
        return {"contexts": [{"w": w, "p": [float(x) for x in self.rows[w]]} for w in keys]}


def estimate(trie: CountTrie, params: EstimationParams) -> EstimationResult:
    """Estimated context tree for threshold ``params.delta`` and maximal
    depth ``params.d``.

    ``w`` (``1 <= l(w) <= d``) is kept when

    * some symbol ``a`` has ``N(aw.) > 0`` and ``Delta(a suf(w)) > delta``
      (the same ``a`` in both conditions), and
    * every observed left extension ``uw`` (``N(uw.) >= 1``,
      ``l(uw) <= d``) has ``Delta(uw) <= delta``.

    Only words that occur in the sample can satisfy the first condition, so
    the candidates are read off the trie levels.
    """
    d, thr = params.d, params.delta
    if trie.n <= d:
        raise DegenerateSample(f"need d < n, got d = {d}, n = {trie.n}")
    if trie.depth < d:
        raise DepthExceeded(f"trie built to depth {trie.depth}, need {d}")
    symbols = trie.alphabet.symbols
    gaps: dict[str, float] = {}

    def gap(w):
        if w not in gaps:
            gaps[w] = delta(trie, w)
        return gaps[w]

    below: dict[str, bool] = {}

    def extensions_exceed(w):
        # some observed uw with l(uw) <= d has Delta(uw) > delta
        if w not in below:
            hit = False
            if len(w) < d:
                for a in symbols:
                    aw = a + w
                    if trie.count_dot(aw) >= 1 and (gap(aw) > thr or extensions_exceed(aw)):
                        hit = True
                        break
            below[w] = hit
        return below[w]

    kept = []
    for w, _ in trie.items():
        if len(w) > d:
            break
        parent = suf(w)
        if not any(trie.count_dot(a + w) > 0 and gap(a + parent) > thr for a in symbols):
            continue
        if not extensions_exceed(w):
            kept.append(w)
    return attach_rows(trie, ContextTree(kept), params)


def attach_rows(trie: CountTrie, tree, params: EstimationParams | None = None) -> EstimationResult:
    """Smoothed empirical row for each context; the empty tree gets the
    marginal row under the key ``""``."""
    tree = tree if isinstance(tree, ContextTree) else ContextTree(tree)
    if tree.height > trie.depth:
        raise DepthExceeded(f"context of length {tree.height} exceeds trie depth {trie.depth}")
    keys = list(tree) or [""]
    rows = {w: empirical_row(trie, w) for w in keys}
    return EstimationResult(tree, rows, params)


def _naive_count(s: str, w: str) -> int:
    L = len(w)
    return sum(1 for t in range(len(s) - L + 1) if s[t:t + L] == w)


def estimate_brute_force(sample, params: EstimationParams,
                         coupled: bool = True) -> EstimationResult:
    """Reference estimator: recount every word from the raw sample and test
    the defining predicate for all ``w`` of length ``1..d``.

    ``coupled=False`` lets the two conditions of the first clause use
    different symbols; it exists to show the two readings disagree.
    """
    if isinstance(sample, str):
        sample = SamplePath.from_string(sample)
    s = str(sample)
    alphabet = sample.alphabet
    A = len(alphabet)
    d, thr = params.d, params.delta
    n = len(s)
    if n <= d:
        raise DegenerateSample(f"need d < n, got d = {d}, n = {n}")
    if sum(A ** k for k in range(1, d + 1)) > ENUMERATION_LIMIT:
        raise EnumerationTooLarge(f"|A|^d too large for enumeration (|A| = {A}, d = {d})")

    memo: dict[str, int] = {}

    def N(w):
        if w not in memo:
            memo[w] = _naive_count(s, w)
        return memo[w]

    def N_dot(w):
        return sum(N(w + b) for b in alphabet)

    def phat(w):
        den = N_dot(w) + A
        return np.array([(N(w + a) + 1) / den for a in alphabet], dtype=float)

    def Delta(w):
        return float(np.max(np.abs(phat(w) - phat(w[1:]))))

    def first_clause(w):
        if coupled:
            return any(N_dot(a + w) > 0 and Delta(a + w[1:]) > thr for a in alphabet)
        return (any(N_dot(a + w) > 0 for a in alphabet)
                and any(Delta(a + w[1:]) > thr for a in alphabet))

    def second_clause(w):
        for k in range(1, d - len(w) + 1):
            for u in alphabet.words(k):
                if N_dot(u + w) >= 1 and Delta(u + w) > thr:
                    return False
        return True

    kept = [w for k in range(1, d + 1) for w in alphabet.words(k)
            if first_clause(w) and second_clause(w)]
    trie = build_counts(sample, d)
    return attach_rows(trie, ContextTree(kept), params)


def trees_equal_truncated(t1, t2, K: int) -> bool:
    return truncate(t1, K).contexts == truncate(t2, K).contexts


def estimate_sample(sample: SamplePath, params: EstimationParams) -> EstimationResult:
    """Count and estimate in one call."""
    if len(sample) <= params.d:
        raise DegenerateSample(f"need d < n, got d = {params.d}, n = {len(sample)}")
    return estimate(build_counts(sample, params.d), params)
