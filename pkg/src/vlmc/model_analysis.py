"""Stationary quantities and the exponential bounds of a probabilistic
context tree.

Every function takes either a model or a precomputed :class:`StationaryLaw`
as first argument; pass the law when calling many functions on the same
model so the stationary solve happens once.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .core_tree import (
    CombSpec,
    ContextOracle,
    ProbabilisticContextTree,
    is_strict_suffix,
    proper_suffixes,
    suf,
    truncate,
)
from .errors import (
    InvalidModel,
    NoConvergence,
    PreconditionViolation,
    SummabilityViolation,
    UndefinedConditional,
)

MAX_STATES = 4096
MAX_ITER = 10**6
RESIDUAL_TOL = 1e-10
DIVERGENCE_TOL = 1e-9
FOLD_TOL = 1e-9
E_1E = math.exp(1.0 / math.e)


@dataclass(frozen=True)
class StateChain:
    """Finite Markov chain that realises a model.

    ``rows[s]`` is the next-symbol law in state ``s`` and ``nxt[s, a]`` the
    state after emitting symbol index ``a``.  Finite trees use the states
    ``A^h`` (the last ``h`` symbols); the comb uses the number of zeros
    since the last one, capped at the fold depth.
    """

    kind: str
    rows: np.ndarray
    nxt: np.ndarray
    depth: int
    n_symbols: int

    @property
    def n_states(self) -> int:
        return self.rows.shape[0]

    def resolve(self, w: str, alphabet) -> int | None:
        """State reached after reading `w` when `w` alone determines it."""
        if self.kind == "comb":
            i = w.rfind("1")
            if i < 0:
                return None
            return min(len(w) - 1 - i, self.depth)
        if len(w) < self.depth:
            return None
        s = 0
        for c in w[len(w) - self.depth:]:
            s = s * self.n_symbols + alphabet.index(c)
        return s

    def step(self, v: np.ndarray, a: int) -> np.ndarray:
        return np.bincount(self.nxt[:, a], weights=v * self.rows[:, a], minlength=self.n_states)


def state_chain(model) -> StateChain:
    if isinstance(model, CombSpec):
        L = model.fold_depth(FOLD_TOL)
        rows = np.array([model.row(j) for j in range(L + 1)])
        nxt = np.empty((L + 1, 2), dtype=np.int64)
        nxt[:, 0] = np.minimum(np.arange(L + 1) + 1, L)
        nxt[:, 1] = 0
        return StateChain("comb", rows, nxt, L, 2)
    if isinstance(model, ContextOracle):
        raise InvalidModel(f"no finite representation for {model!r}")
    A = len(model.alphabet)
    h = model.height
    S = A ** h
    if S > MAX_STATES:
        raise InvalidModel(f"|A|^h = {S} exceeds the {MAX_STATES}-state cap")
    rows = np.empty((S, A))
    for s in range(S):
        digits = np.base_repr(s, A).rjust(h, "0") if h else ""
        past = model.alphabet.decode(int(c, A) for c in digits)
        hit = model.context_of(past)
        if hit is None:
            raise InvalidModel(f"past {past!r} has no context; tree is not complete")
        rows[s] = hit[1]
    states = np.arange(S)
    nxt = (states[:, None] * A + np.arange(A)[None, :]) % S
    return StateChain("finite", rows, nxt, h, A)


@dataclass(frozen=True)
class StationaryLaw:
    model: object
    chain: StateChain
    pi: np.ndarray
    iterations: int
    residual: float

    @property
    def depth(self) -> int:
        return self.chain.depth


def _as_law(model) -> StationaryLaw:
    return model if isinstance(model, StationaryLaw) else stationary_law(model)


def stationary_law(model) -> StationaryLaw:
    """Invariant law of the model's state chain by power iteration from the
    uniform vector."""
    chain = state_chain(model)
    S = chain.n_states
    flat_next = chain.nxt.ravel()
    pi = np.full(S, 1.0 / S)
    residual = math.inf
    for it in range(1, MAX_ITER + 1):
        new = np.bincount(flat_next, weights=(pi[:, None] * chain.rows).ravel(), minlength=S)
        new /= new.sum()
        residual = float(np.max(np.abs(new - pi)))
        pi = new
        if residual <= 1e-15:
            break
    else:
        if residual > RESIDUAL_TOL:
            raise NoConvergence(f"residual {residual:.3g} after {MAX_ITER} iterations")
    pi.setflags(write=False)
    return StationaryLaw(model, chain, pi, it, residual)


def word_probability(model, w: str) -> float:
    """Stationary probability of the cylinder ``w``."""
    law = _as_law(model)
    alphabet = law.model.alphabet
    v = law.pi
    for c in alphabet.check_word(w):
        v = law.chain.step(v, alphabet.index(c))
    return float(v.sum())


def conditional_probability(model, a: str, v: str) -> float:
    """``p(a | v) = p(va) / p(v)``; exact row entry when ``v`` has a context."""
    law = _as_law(model)
    m = law.model
    hit = m.context_of(m.alphabet.check_word(v))
    if hit is not None:
        pv = word_probability(law, v)
        if pv <= 0:
            raise UndefinedConditional(f"p({v!r}) = 0")
        return float(hit[1][m.alphabet.index(a)])
    pv = word_probability(law, v)
    if pv <= 0:
        raise UndefinedConditional(f"p({v!r}) = 0")
    return word_probability(law, v + a) / pv


def conditional_row(model, v: str) -> np.ndarray:
    law = _as_law(model)
    return np.array([conditional_probability(law, a, v) for a in law.model.alphabet.symbols])


def _model(model):
    return model.model if isinstance(model, StationaryLaw) else model


def alpha_sequence(model, k_max: int):
    """Loss-of-memory coefficients ``alpha_0..alpha_kmax`` and their total
    deficit ``sum_k (1 - alpha_k)`` over all ``k``.

    A past ``u`` that already ends with a context contributes 1 (its
    continuation law is fixed).
    """
    m = _model(model)
    if isinstance(m, CombSpec):
        dq = abs(m.q0 - m.qinf)
        ks = np.arange(k_max + 1)
        alphas = 1.0 - dq * m.gamma ** ks
        return alphas, dq / (1.0 - m.gamma)
    if isinstance(m, ContextOracle):
        raise SummabilityViolation(f"no closed-form tail for {m!r}")
    rows = np.array(list(m.rows.values()))
    h = m.height
    full = [float(rows.min(axis=0).sum())]
    ctx = list(m.tree.contexts)
    for k in range(1, max(h, k_max) + 1):
        if k >= h:
            full.append(1.0)
            continue
        best = 1.0
        for u in m.alphabet.words(k):
            if m.context_of(u) is not None:
                continue
            cands = [m.rows[w] for w in ctx if is_strict_suffix(u, w)]
            if cands:
                best = min(best, float(np.min(cands, axis=0).sum()))
        full.append(best)
    full = np.array(full)
    return full[: k_max + 1], float(np.sum(1.0 - full))


def rho_sequence(alphas):
    """Return-to-origin probabilities of the house-of-cards chain.

    The chain on ``{0, 1, ...}`` moves ``x -> x+1`` with probability
    ``alphas[x]`` and ``x -> 0`` otherwise.  ``rho[0] = 1``.  Returns the
    sequence ``rho_0..rho_m`` with ``m = len(alphas) - 1`` and its sum.
    """
    alphas = np.asarray(alphas, dtype=float)
    if np.any(alphas <= 0) or np.any(alphas > 1):
        raise ValueError("alphas must lie in (0, 1]")
    m = len(alphas) - 1
    rho = np.zeros(m + 1)
    rho[0] = 1.0
    dist = np.zeros(m + 1)
    dist[0] = 1.0
    for t in range(1, m + 1):
        live = dist[:t]
        back = float(np.dot(live, 1.0 - alphas[:t]))
        dist[1:t + 1] = live * alphas[:t]
        dist[0] = back
        rho[t] = back
    return rho, float(rho.sum())


def divergence_sets(model, k: int):
    """Words of the tree truncated at `k` whose law differs from their
    parent's, and the smallest such gap (``inf`` if there are none)."""
    law = _as_law(model)
    m = law.model
    C, gaps = set(), []
    for u in truncate(m, k):
        gap = float(np.max(np.abs(conditional_row(law, u) - conditional_row(law, suf(u)))))
        if gap > DIVERGENCE_TOL:
            C.add(u)
            gaps.append(gap)
    return C, (min(gaps) if gaps else math.inf)


def epsilon(model, k: int) -> float:
    """Smallest positive stationary probability of a word of length <= k."""
    if k <= 0:
        return 1.0
    law = _as_law(model)
    ch, alphabet = law.chain, law.model.alphabet
    # cheapest continuation of length t from each state
    M = [np.ones(ch.n_states)]
    for _ in range(k):
        nxt_cost = M[-1][ch.nxt]
        cand = np.where(ch.rows > 0, ch.rows * nxt_cost, np.inf)
        M.append(cand.min(axis=1))
    best = math.inf
    frontier = [("", law.pi)]
    for ell in range(1, k + 1):
        grown = []
        for u, v in frontier:
            for ai, a in enumerate(alphabet.symbols):
                v2 = ch.step(v, ai)
                p = float(v2.sum())
                if p <= 0:
                    continue
                s = ch.resolve(u + a, alphabet)
                if s is not None:
                    best = min(best, p * float(M[k - ell][s]))
                elif ell == k:
                    best = min(best, p)
                else:
                    grown.append((u + a, v2))
        frontier = grown
    return best


def _search_depth(m) -> int:
    if isinstance(m, CombSpec):
        return m.fold_depth(FOLD_TOL) + 2
    return m.height + 1


def minimal_depth(model, K: int) -> int:
    """Smallest admissible maximal depth ``d`` for recovery at level `K`.

    ``u`` ranges over the empty word and the proper suffixes of members of
    the truncated tree that are not contexts; a ``u`` with no divergent
    extension contributes 0.
    """
    if K < 1:
        raise ValueError("K must be at least 1")
    law = _as_law(model)
    m = law.model
    tK = truncate(m, K)
    us = {""}
    for w in tK:
        us.update(proper_suffixes(w))
    us = {u for u in us if not _is_context(m, u)}
    cache = {}

    def C(k):
        if k not in cache:
            cache[k] = divergence_sets(law, k)[0]
        return cache[k]

    worst = 0
    for u in sorted(us, key=lambda u: (len(u), u)):
        for k in range(1, _search_depth(m) + 1):
            if any(is_strict_suffix(u, w) for w in C(k)):
                worst = max(worst, k)
                break
    return worst + 1


def _is_context(m, u: str) -> bool:
    if not u:
        return False
    if isinstance(m, ProbabilisticContextTree):
        return u in m.tree
    hit = m.context_of(u)
    return hit is not None and hit[0] == u


def constant_C(model) -> float:
    """``alpha_0 / (8 e (alpha + alpha_0))``."""
    alphas, alpha = alpha_sequence(model, 0)
    a0 = float(alphas[0])
    return a0 / (8.0 * math.e * (alpha + a0))


def count_deviation_value(C: float, ell_w: int, t: float, n: int) -> float:
    return E_1E * math.exp(-t * t * C / ((n - ell_w) * (ell_w + 1)))


def bound_count_deviation(model, w: str, a: str, t: float, n: int) -> float:
    """Upper bound on ``P(|N_n(wa) - (n - l(w)) p(wa)| > t)``, unclamped."""
    m = _model(model)
    m.alphabet.check_word(w + a)
    if t < 0 or n <= len(w):
        raise PreconditionViolation("need t >= 0 and n > l(w)")
    return count_deviation_value(constant_C(model), len(w), t, n)


def phat_deviation_value(C: float, A: int, ell_w: int, pw: float, t: float, n: int) -> float:
    m = n - ell_w
    shifted = t - (A + 1) / (m * pw)
    return 2 * A * E_1E * math.exp(-m * shifted ** 2 * pw ** 2 * C / (4 * A * A * (ell_w + 1)))


def bound_phat_deviation(model, w: str, a: str, t: float, n: int) -> float:
    """Upper bound on ``P(|phat_n(a|w) - p(a|w)| > t)``, unclamped."""
    law = _as_law(model)
    m = law.model
    m.alphabet.check_word(w + a)
    A = len(m.alphabet)
    pw = word_probability(law, w)
    if pw <= 0:
        raise PreconditionViolation(f"p({w!r}) = 0")
    if t <= 0:
        raise PreconditionViolation("need t > 0")
    threshold = (A + 1) / (t * pw) + len(w)
    if not n > threshold:
        raise PreconditionViolation(f"need n > {threshold:.6g}, got n = {n}")
    return phat_deviation_value(constant_C(law), A, len(w), pw, t, n)


def recovery_threshold(A: int, d: int, delta: float, D: float, eps: float) -> float:
    return 2 * (A + 1) / (min(delta, D - delta) * eps) + d


def recovery_value(A: int, d: int, delta: float, n: int, D: float, eps: float, C: float) -> float:
    m = n - d
    shifted = min(delta / 2, (D - delta) / 2) - (A + 1) / (m * eps)
    return 4 * E_1E * A ** (d + 2) * math.exp(-m * shifted ** 2 * eps ** 2 * C / (4 * A * A * (d + 1)))


def bound_recovery(model, K: int, d: int, delta: float, n: int) -> float:
    """Upper bound on the probability that the estimated tree truncated at
    `K` differs from the true one, unclamped."""
    law = _as_law(model)
    A = len(law.model.alphabet)
    d_min = minimal_depth(law, K)
    if d < d_min:
        raise PreconditionViolation(f"depth: d = {d} < minimal admissible depth {d_min}")
    D = divergence_sets(law, d)[1]
    if not 0 < delta < D:
        raise PreconditionViolation(f"delta: need 0 < delta < D_d = {D:.6g}, got {delta}")
    eps = epsilon(law, d)
    threshold = recovery_threshold(A, d, delta, D, eps)
    if not n > threshold:
        raise PreconditionViolation(f"n: need n > {threshold:.6g}, got n = {n}")
    return recovery_value(A, d, delta, n, D, eps, constant_C(law))


@dataclass
class BoundReport:
    alpha_seq: list
    alpha_sum: float
    C: float
    C_sets: dict
    D: list
    epsilon: list
    rho_seq: list
    rho_sum: float
    d_min: dict
    bounds: dict = field(default_factory=dict)

    @property
    def rho_limit(self) -> float:
        return 1.0 + 2.0 * self.alpha_sum / self.alpha_seq[0]

    def to_dict(self) -> dict:
        def fin(x):
            return None if x is None or not math.isfinite(x) else x

        return {
            "alpha_seq": [float(x) for x in self.alpha_seq],
            "alpha_sum": self.alpha_sum,
            "C": self.C,
            "D": [fin(x) for x in self.D],
            "epsilon": list(self.epsilon),
            "rho_seq": [float(x) for x in self.rho_seq],
            "rho_sum": self.rho_sum,
            "d_min": {str(k): v for k, v in self.d_min.items()},
            "bounds": {k: fin(v) for k, v in self.bounds.items()},
        }


def bound_report(model, k_max: int = 20, K: int = 1, rho_max: int = 100,
                 n: int | None = None, delta: float | None = None,
                 d: int | None = None) -> BoundReport:
    """Collect every theoretical quantity for `model`.

    ``D`` and ``epsilon`` are indexed by ``k = 1..k_max``; ``d_min`` maps each
    level ``1..K`` to its minimal depth.  When `n` and `delta` are given the
    recovery bound at level `K` (depth `d`, default the minimal one) is added
    under ``bounds``; it is ``None`` when a hypothesis fails.
    """
    law = _as_law(model)
    alphas, alpha = alpha_sequence(law, max(k_max, rho_max))
    rho, rho_sum = rho_sequence(alphas[: rho_max + 1])
    C = constant_C(law)
    C_sets, Ds, eps = {}, [], []
    for k in range(1, k_max + 1):
        Ck, Dk = divergence_sets(law, k)
        C_sets[k] = sorted(Ck, key=lambda w: (len(w), w))
        Ds.append(Dk)
        eps.append(epsilon(law, k))
    d_min = {k: minimal_depth(law, k) for k in range(1, K + 1)}
    bounds = {}
    if n is not None and delta is not None:
        dd = d if d is not None else d_min[K]
        try:
            bounds["recovery"] = bound_recovery(law, K, dd, delta, n)
        except PreconditionViolation:
            bounds["recovery"] = None
    return BoundReport(list(alphas[: k_max + 1]), alpha, C, C_sets, Ds, eps,
                       list(rho), rho_sum, d_min, bounds)
