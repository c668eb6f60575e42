"""Alphabets, words, context trees and context lookup.

Words are plain ``str`` objects written in time order: the rightmost
character is the most recent symbol.  A suffix of ``w`` is therefore a
trailing segment ``w[-j:]`` and ``suf(w)`` drops the *leftmost* symbol.
The empty word is ``""``.
"""
from __future__ import annotations

import abc
import itertools
import json
import math
import os
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping, Sequence

import numpy as np

from .errors import InvalidInput, InvalidModel, InvalidSymbol

ROW_SUM_TOL = 1e-12
MAX_ALPHABET = 16


def suf(w: str) -> str:
    """Largest proper suffix of `w` (drops the oldest symbol)."""
    return w[1:]


def is_strict_suffix(s: str, w: str) -> bool:
    return len(s) < len(w) and w.endswith(s)


def proper_suffixes(w: str) -> Iterator[str]:
    """Non-empty proper suffixes of `w`, longest first."""
    for i in range(1, len(w)):
        yield w[i:]


@dataclass(frozen=True)
class Alphabet:
    symbols: tuple[str, ...]
    _index: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        symbols = tuple(self.symbols)
        if len(symbols) < 2:
            raise InvalidInput("alphabet needs at least two symbols")
        if len(symbols) > MAX_ALPHABET:
            raise InvalidInput(f"alphabets larger than {MAX_ALPHABET} are not supported")
        if any(not isinstance(s, str) or len(s) != 1 for s in symbols):
            raise InvalidInput("symbols must be single characters")
        if len(set(symbols)) != len(symbols):
            raise InvalidInput("alphabet symbols must be distinct")
        object.__setattr__(self, "symbols", symbols)
        object.__setattr__(self, "_index", {s: i for i, s in enumerate(symbols)})

    def __len__(self) -> int:
        return len(self.symbols)

    def __iter__(self) -> Iterator[str]:
        return iter(self.symbols)

    def __contains__(self, s) -> bool:
        return s in self._index

    def index(self, s: str) -> int:
        try:
            return self._index[s]
        except KeyError:
            raise InvalidSymbol(f"symbol {s!r} not in alphabet {self.symbols}") from None

    def check_word(self, w: str) -> str:
        for s in w:
            if s not in self._index:
                raise InvalidSymbol(f"symbol {s!r} not in alphabet {self.symbols}")
        return w

    def encode(self, w: str) -> np.ndarray:
        self.check_word(w)
        return np.fromiter((self._index[s] for s in w), dtype=np.int8, count=len(w))

    def decode(self, x: Iterable[int]) -> str:
        return "".join(self.symbols[int(i)] for i in x)

    def words(self, length: int) -> Iterator[str]:
        """All words of exactly `length` symbols, in lexicographic alphabet order."""
        for t in itertools.product(self.symbols, repeat=length):
            yield "".join(t)


BINARY = Alphabet(("0", "1"))


@dataclass(frozen=True)
class ContextTree:
    """A finite set of contexts.  Construction does not enforce the suffix
    property; use :func:`validate_tree` for that."""

    contexts: frozenset

    def __init__(self, contexts: Iterable[str] = ()):
        ctx = frozenset(contexts)
        if "" in ctx:
            raise InvalidInput("the empty word is not a context; use an empty tree")
        object.__setattr__(self, "contexts", ctx)

    @property
    def height(self) -> int:
        return max((len(w) for w in self.contexts), default=0)

    def __len__(self) -> int:
        return len(self.contexts)

    def __iter__(self) -> Iterator[str]:
        return iter(sorted(self.contexts, key=lambda w: (len(w), w)))

    def __contains__(self, w) -> bool:
        return w in self.contexts

    def __repr__(self) -> str:
        return f"ContextTree({sorted(self.contexts, key=lambda w: (len(w), w))})"


class ProbabilisticContextTree:
    """Finite context tree with one transition row per context.

    Parameters
    ----------
    alphabet : Alphabet or sequence of symbols
    rows : mapping context -> probability vector
        Vectors are ordered like ``alphabet``.  The memoryless model is
        written ``{"": row}``.
    """

    def __init__(self, alphabet, rows: Mapping[str, Sequence[float]]):
        self.alphabet = alphabet if isinstance(alphabet, Alphabet) else Alphabet(tuple(alphabet))
        if not rows:
            raise InvalidModel("a model needs at least one row")
        if "" in rows and len(rows) > 1:
            raise InvalidModel("the empty context is only allowed for the memoryless model")
        clean = {}
        for w, p in rows.items():
            self.alphabet.check_word(w)
            vec = np.asarray(p, dtype=float)
            if vec.shape != (len(self.alphabet),):
                raise InvalidModel(f"row for {w!r} must have {len(self.alphabet)} entries")
            vec.setflags(write=False)
            clean[w] = vec
        self.rows = clean
        self.tree = ContextTree(w for w in clean if w)
        self.height = self.tree.height

    @property
    def is_memoryless(self) -> bool:
        return "" in self.rows

    def context_of(self, past: str):
        if self.is_memoryless:
            return "", self.rows[""]
        for j in range(1, min(self.height, len(past)) + 1):
            w = past[-j:]
            if w in self.rows:
                return w, self.rows[w]
        return None

    def __eq__(self, other):
        if not isinstance(other, ProbabilisticContextTree):
            return NotImplemented
        return (self.alphabet == other.alphabet and self.rows.keys() == other.rows.keys()
                and all(np.array_equal(self.rows[w], other.rows[w]) for w in self.rows))

    def __repr__(self) -> str:
        body = ", ".join(f"{w!r}: {list(p)}" for w, p in sorted(self.rows.items()))
        return f"ProbabilisticContextTree({''.join(self.alphabet.symbols)!r}, {{{body}}})"


class ContextOracle(abc.ABC):
    """A possibly unbounded context tree known only through lookups."""

    alphabet: Alphabet

    @abc.abstractmethod
    def context_of(self, past: str):
        """Return ``(context, row)`` or ``None`` when `past` is too short."""

    def truncate(self, K: int) -> ContextTree:
        # Assumes every infinite past has a context: a length-K word that does
        # not resolve is then a strict suffix of some longer context.
        out = set()
        for k in range(1, K + 1):
            for w in self.alphabet.words(k):
                hit = self.context_of(w)
                if hit is not None and hit[0] == w:
                    out.add(w)
        for w in self.alphabet.words(K):
            if self.context_of(w) is None:
                out.add(w)
        return ContextTree(out)


class CombSpec(ContextOracle):
    """Binary renewal model with contexts ``1`` followed by ``j`` zeros.

    ``p(1 | 1 0^j) = qinf + (q0 - qinf) * gamma**j``.
    """

    alphabet = BINARY

    def __init__(self, q0: float, qinf: float, gamma: float):
        for name, v in (("q0", q0), ("qinf", qinf), ("gamma", gamma)):
            if not 0.0 < v < 1.0:
                raise InvalidModel(f"{name} must lie in (0, 1), got {v}")
        self.q0 = float(q0)
        self.qinf = float(qinf)
        self.gamma = float(gamma)

    def q(self, j: int) -> float:
        return self.qinf + (self.q0 - self.qinf) * self.gamma ** j

    def row(self, j: int) -> np.ndarray:
        q = self.q(j)
        return np.array([1.0 - q, q])

    def context_of(self, past: str):
        self.alphabet.check_word(past)
        i = past.rfind("1")
        if i < 0:
            return None
        j = len(past) - 1 - i
        return "1" + "0" * j, self.row(j)

    def truncate(self, K: int) -> ContextTree:
        return ContextTree(["1" + "0" * j for j in range(K)] + ["0" * K])

    def fold_depth(self, tol: float = 1e-9) -> int:
        """Smallest L with |q0 - qinf| * gamma**L < tol."""
        dq = abs(self.q0 - self.qinf)
        if dq < tol:
            return 0
        L = max(0, math.floor(math.log(tol / dq) / math.log(self.gamma)))
        while dq * self.gamma ** L >= tol:
            L += 1
        while L > 0 and dq * self.gamma ** (L - 1) < tol:
            L -= 1
        return L

    def __eq__(self, other):
        if not isinstance(other, CombSpec):
            return NotImplemented
        return (self.q0, self.qinf, self.gamma) == (other.q0, other.qinf, other.gamma)

    def __hash__(self):
        return hash((self.q0, self.qinf, self.gamma))

    def __repr__(self) -> str:
        return f"CombSpec(q0={self.q0}, qinf={self.qinf}, gamma={self.gamma})"


@dataclass
class ValidationReport:
    suffix_violations: list = field(default_factory=list)
    irreducibility_violations: list = field(default_factory=list)
    incomplete_pasts: list = field(default_factory=list)
    row_sum_violations: list = field(default_factory=list)
    non_null_violations: list = field(default_factory=list)

    @property
    def valid(self) -> bool:
        return not (self.suffix_violations or self.irreducibility_violations
                    or self.incomplete_pasts or self.row_sum_violations
                    or self.non_null_violations)

    def __bool__(self) -> bool:
        return self.valid


def _suffix_violations(ctx: frozenset) -> list:
    bad = []
    for w in sorted(ctx):
        for s in proper_suffixes(w):
            if s in ctx:
                bad.append((s, w))
    return bad


def _irreducibility_violations(ctx: frozenset) -> list:
    """Pairs ``(w, s)`` such that swapping ``w`` for its suffix ``s`` keeps
    the suffix property."""
    bad = []
    for w in sorted(ctx):
        others = ctx - {w}
        for s in proper_suffixes(w):
            clash = s in others or any(v.endswith(s) for v in others)
            clash = clash or any(s.endswith(v) for v in others)
            if not clash:
                bad.append((w, s))
    return bad


def _uncovered(ctx: frozenset, alphabet: Alphabet) -> list:
    """Minimal pasts (as words) that have no context among their suffixes."""
    if not ctx:
        return [""]
    h = max(len(w) for w in ctx)
    out = []

    def walk(v: str):
        if v in ctx:
            return
        if len(v) >= h:
            out.append(v)
            return
        for a in alphabet.symbols:
            walk(a + v)

    walk("")
    return out


def validate_tree(tree, alphabet: Alphabet | None = None) -> ValidationReport:
    """Check the suffix property and irreducibility of a tree, plus row sums,
    non-nullness and completeness for probabilistic trees.

    A bare :class:`ContextTree` is only checked for the two structural
    properties unless an `alphabet` is given, in which case completeness is
    checked too.
    """
    if isinstance(tree, (list, tuple, set, frozenset)):
        tree = ContextTree(tree)
    report = ValidationReport()
    if isinstance(tree, ProbabilisticContextTree):
        model, ctx = tree, tree.tree.contexts
        alphabet = model.alphabet
    else:
        model, ctx = None, tree.contexts
    report.suffix_violations = _suffix_violations(ctx)
    report.irreducibility_violations = _irreducibility_violations(ctx)
    if alphabet is not None and ctx:
        report.incomplete_pasts = _uncovered(ctx, alphabet)
    if model is not None:
        for w, p in sorted(model.rows.items()):
            if abs(p.sum() - 1.0) > ROW_SUM_TOL or np.any(p < 0) or np.any(p > 1):
                report.row_sum_violations.append(w)
            if np.any(p <= 0):
                report.non_null_violations.append(w)
    return report


def truncate(tree, K: int) -> ContextTree:
    """Tree truncated at level `K`: contexts of length at most `K` plus the
    length-`K` suffixes of longer contexts."""
    if K < 1:
        raise InvalidInput("K must be at least 1")
    if isinstance(tree, ContextOracle):
        return tree.truncate(K)
    if isinstance(tree, ProbabilisticContextTree):
        tree = tree.tree
    elif isinstance(tree, (list, tuple, set, frozenset)):
        tree = ContextTree(tree)
    return ContextTree({w if len(w) <= K else w[-K:] for w in tree.contexts})


def context_of(model, past: str):
    """Unique context of `model` that is a suffix of `past`.

    Returns ``(context, row)`` or ``None`` if `past` is not long enough to
    decide.  The memoryless model answers ``("", marginal_row)``.
    """
    model.alphabet.check_word(past)
    return model.context_of(past)


# ---------------------------------------------------------------- JSON I/O

def model_from_dict(d: Mapping):
    try:
        kind = d.get("kind", "finite")
        if kind == "comb":
            return CombSpec(d["q0"], d["qinf"], d["gamma"])
        if kind != "finite":
            raise InvalidModel(f"unknown model kind {kind!r}")
        rows = {}
        for entry in d["contexts"]:
            if entry["w"] in rows:
                raise InvalidModel(f"duplicate context {entry['w']!r}")
            rows[entry["w"]] = entry["p"]
        return ProbabilisticContextTree(d["alphabet"], rows)
    except (KeyError, TypeError) as exc:
        raise InvalidModel(f"malformed model description: {exc!r}") from exc


def model_to_dict(model) -> dict:
    if isinstance(model, CombSpec):
        return {"kind": "comb", "q0": model.q0, "qinf": model.qinf, "gamma": model.gamma}
    return {
        "alphabet": list(model.alphabet.symbols),
        "kind": "finite",
        "contexts": [{"w": w, "p": [float(x) for x in model.rows[w]]}
                     for w in sorted(model.rows, key=lambda w: (len(w), w))],
    }


def load_model(source, validate: bool = True):
    """Load a model from a dict, a JSON string or a path to a JSON file."""
    if isinstance(source, (str, os.PathLike)) and os.path.exists(source):
        with open(source) as fh:
            source = json.load(fh)
    elif isinstance(source, str):
        try:
            source = json.loads(source)
        except json.JSONDecodeError as exc:
            raise InvalidInput(f"not a model file or JSON document: {source!r}") from exc
    model = model_from_dict(source)
    if validate and isinstance(model, ProbabilisticContextTree):
        report = validate_tree(model)
        if not report.valid:
            raise InvalidModel(f"invalid model: {report}")
    return model
