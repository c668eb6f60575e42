"""Reproducible sample paths.

The generator is numpy's PCG64 seeded with the 64-bit integer seed; one
uniform is drawn per emitted symbol (after the initial block for finite
models) and the symbol is chosen by inverse CDF in alphabet order.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field

import numba
import numpy as np

from .core_tree import Alphabet, CombSpec, ProbabilisticContextTree, model_to_dict
from .errors import InvalidInput
from .model_analysis import stationary_law

PRNG = "numpy.PCG64"
MIN_BURN_IN = 10**4
_MASK = (1 << 64) - 1


def splitmix64(x: int) -> int:
    x = (x + 0x9E3779B97F4A7C15) & _MASK
    x = ((x ^ (x >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
    x = ((x ^ (x >> 27)) * 0x94D049BB133111EB) & _MASK
    return x ^ (x >> 31)


def child_seed(master_seed: int, *indices: int) -> int:
    """Fold `indices` into `master_seed` with successive splitmix64 rounds."""
    x = splitmix64(master_seed & _MASK)
    for i in indices:
        x = splitmix64(x ^ (i & _MASK))
    return x


@dataclass(frozen=True)
class SamplePath:
    alphabet: Alphabet
    symbols: np.ndarray
    provenance: dict = field(default_factory=dict)

    def __len__(self) -> int:
        return len(self.symbols)

    def __str__(self) -> str:
        return self.alphabet.decode(self.symbols)

    @classmethod
    def from_string(cls, s: str, alphabet=None, provenance=None) -> "SamplePath":
        s = s.strip()
        if not s:
            raise InvalidInput("empty sample")
        if alphabet is None:
            alphabet = Alphabet(tuple(sorted(set(s))))
        elif not isinstance(alphabet, Alphabet):
            alphabet = Alphabet(tuple(alphabet))
        x = alphabet.encode(s)
        x.setflags(write=False)
        return cls(alphabet, x, dict(provenance or {}))

    def write(self, path) -> None:
        """Write the symbols as one line and the provenance to ``path.json``."""
        with open(path, "w") as fh:
            fh.write(str(self) + "\n")
        meta = dict(self.provenance, alphabet=list(self.alphabet.symbols))
        with open(f"{path}.json", "w") as fh:
            json.dump(meta, fh, indent=2, sort_keys=True)

    @classmethod
    def read(cls, path, alphabet=None) -> "SamplePath":
        with open(path) as fh:
            text = fh.read()
        meta = {}
        try:
            with open(f"{path}.json") as fh:
                meta = json.load(fh)
        except FileNotFoundError:
            pass
        if alphabet is None and "alphabet" in meta:
            alphabet = meta["alphabet"]
        return cls.from_string(text, alphabet, meta)


@numba.njit(cache=True)
def _walk_chain(cum, nxt, state, u):
    n = u.shape[0]
    A = cum.shape[1]
    out = np.empty(n, dtype=np.int8)
    for t in range(n):
        a = 0
        while a < A - 1 and u[t] >= cum[state, a]:
            a += 1
        out[t] = a
        state = nxt[state, a]
    return out


@numba.njit(cache=True)
def _walk_comb(q0, qinf, gamma, u, skip):
    # state j = zeros since the last 1; the seed past ends with a single 1
    n = u.shape[0]
    out = np.empty(n - skip, dtype=np.int8)
    j = 0
    gj = 1.0
    for t in range(n):
        q = qinf + (q0 - qinf) * gj
        if u[t] < 1.0 - q:
            a = 0
            j += 1
            gj *= gamma
        else:
            a = 1
            j = 0
            gj = 1.0
        if t >= skip:
            out[t - skip] = a
    return out


def _cumulative(rows: np.ndarray) -> np.ndarray:
    cum = np.cumsum(rows, axis=1)
    cum[:, -1] = np.inf
    return cum


def sample_path(model, n: int, seed: int, burn_in: int = MIN_BURN_IN) -> SamplePath:
    """Draw ``x_0 .. x_{n-1}`` from `model`.

    Finite models start exactly stationary: the first ``h`` symbols are one
    draw from the stationary law on ``A^h`` and `burn_in` is ignored.  The
    comb starts from the past ``...1`` and discards `burn_in` symbols.
    """
    if n < 1:
        raise InvalidInput("n must be at least 1")
    seed = int(seed) & _MASK
    rng = np.random.Generator(np.random.PCG64(seed))
    prov = {"model": model_to_dict(model), "n": n, "seed": seed, "prng": PRNG}
    if isinstance(model, CombSpec):
        if burn_in < MIN_BURN_IN:
            raise InvalidInput(f"burn_in must be at least {MIN_BURN_IN}")
        u = rng.random(n + burn_in)
        x = _walk_comb(model.q0, model.qinf, model.gamma, u, burn_in)
        prov["burn_in"] = burn_in
    elif isinstance(model, ProbabilisticContextTree):
        law = stationary_law(model)
        chain = law.chain
        h = chain.depth
        start_cdf = np.cumsum(law.pi)
        start = int(min(np.searchsorted(start_cdf, rng.random(), side="right"), chain.n_states - 1))
        A = len(model.alphabet)
        head = np.array([(start // A ** (h - 1 - i)) % A for i in range(h)], dtype=np.int8)
        body = _walk_chain(_cumulative(chain.rows), chain.nxt, start, rng.random(max(n - h, 0)))
        x = np.concatenate([head, body])[:n]
        prov["burn_in"] = 0
    else:
        raise TypeError(f"cannot sample from {type(model).__name__}")
    x.setflags(write=False)
    return SamplePath(model.alphabet, x, prov)
