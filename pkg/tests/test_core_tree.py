import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from vlmc import (
    BINARY,
    CombSpec,
    ContextTree,
    ProbabilisticContextTree,
    context_of,
    load_model,
    model_to_dict,
    truncate,
    validate_tree,
)
from vlmc.errors import InvalidModel, InvalidSymbol


def brute_irreducible(ctx):
    """Try every replacement of a context by one of its proper suffixes."""
    ctx = set(ctx)

    def suffix_ok(s):
        return not any(a != b and b.endswith(a) for a in s for b in s)

    for w in ctx:
        for i in range(1, len(w)):
            if suffix_ok((ctx - {w}) | {w[i:]}) and w[i:] not in ctx - {w}:
                return False
    return True


def brute_truncate(contexts, K):
    out = {w for w in contexts if len(w) <= K}
    out |= {s for u in contexts for s in (u[-K:],) if len(u) > K}
    return out


def test_valid_tree():
    assert validate_tree(ContextTree(["1", "10", "100", "000"])).valid


def test_duplicates_collapse_and_suffix_violation():
    assert ContextTree(["1", "01", "1"]).contexts == {"1", "01"}
    rep = validate_tree(ContextTree(["1", "11"]))
    assert rep.suffix_violations == [("1", "11")]
    assert not rep.valid


def test_irreducibility_brute_force_agreement():
    # {"00", "10"}: swapping either word for "0" breaks the suffix property,
    # so the tree is irreducible; it is not complete (pasts ending in 1).
    assert brute_irreducible({"00", "10"})
    assert validate_tree(ContextTree(["00", "10"])).irreducibility_violations == []
    assert validate_tree(ContextTree(["00", "10"]), BINARY).incomplete_pasts == ["01", "11"]
    assert validate_tree(ContextTree(["00"])).irreducibility_violations == [("00", "0")]
    assert not brute_irreducible({"00"})


def test_incomplete_probabilistic_tree_is_invalid():
    m = ProbabilisticContextTree("01", {"00": [0.5, 0.5], "10": [0.5, 0.5]})
    assert not validate_tree(m).valid


def test_row_checks():
    m = ProbabilisticContextTree("01", {"0": [0.5, 0.6], "1": [1.0, 0.0]})
    rep = validate_tree(m)
    assert rep.row_sum_violations == ["0"]
    assert rep.non_null_violations == ["1"]


def test_fixtures_valid(T0, T1, iid):
    for m in (T0, T1, iid):
        assert validate_tree(m).valid


@pytest.mark.parametrize("K, expected", [
    (2, {"1", "10", "00"}),
    (3, {"1", "10", "100", "000"}),
    (5, {"1", "10", "100", "000"}),
])
def test_truncate_T1(T1, K, expected):
    assert truncate(T1, K).contexts == expected


def test_truncate_comb_matches_enumeration(U1):
    contexts = ["1" + "0" * j for j in range(11)]
    for K in range(1, 8):
        assert truncate(U1, K).contexts == brute_truncate(contexts, K)
    assert truncate(U1, 3).contexts == {"1", "10", "100", "000"}


def test_generic_oracle_truncation_agrees(U1):
    from vlmc.core_tree import ContextOracle
    for K in range(1, 6):
        assert ContextOracle.truncate(U1, K) == U1.truncate(K)


def test_context_of(T0, T1, U1, iid):
    assert context_of(T0, "1101")[0] == "1"
    assert context_of(T1, "10")[0] == "10"
    assert context_of(T1, "0") is None
    assert context_of(U1, "0000") is None
    w, row = context_of(U1, "0111000")
    assert w == "1000"
    assert row[1] == pytest.approx(0.3 + 0.3 * 0.125)
    assert context_of(iid, "")[0] == ""
    with pytest.raises(InvalidSymbol):
        context_of(T0, "012")


def test_model_json_roundtrip(T1, U1):
    assert load_model(model_to_dict(T1)) == T1
    assert load_model(model_to_dict(U1)) == U1
    with pytest.raises(InvalidModel):
        load_model({"kind": "finite", "alphabet": ["0", "1"],
                    "contexts": [{"w": "1", "p": [0.5, 0.5]}, {"w": "11", "p": [0.5, 0.5]}]})
    with pytest.raises(InvalidModel):
        CombSpec(0.6, 1.0, 0.5)


# ---------------------------------------------------------------- properties

def complete_trees(max_depth=4):
    """Random complete binary context trees grown by splitting leaves."""

    @st.composite
    def build(draw):
        leaves = {"0", "1"}
        for _ in range(draw(st.integers(0, 6))):
            cands = sorted(w for w in leaves if len(w) < max_depth)
            if not cands:
                break
            w = draw(st.sampled_from(cands))
            leaves.remove(w)
            leaves |= {"0" + w, "1" + w}
        return ContextTree(leaves)

    return build()


@settings(max_examples=200, deadline=None)
@given(complete_trees(), st.integers(1, 6))
def test_truncation_idempotent_and_valid(tree, K):
    t = truncate(tree, K)
    assert truncate(t, K) == t
    assert t.contexts == brute_truncate(tree.contexts, K)
    rep = validate_tree(t, BINARY)
    assert rep.valid, rep


@settings(max_examples=200, deadline=None)
@given(st.sets(st.text("01", min_size=1, max_size=4), max_size=6))
def test_validation_matches_brute_force(words):
    rep = validate_tree(ContextTree(words))
    has_suffix_pair = any(a != b and b.endswith(a) for a in words for b in words)
    assert bool(rep.suffix_violations) == has_suffix_pair
    if not has_suffix_pair:
        assert (not rep.irreducibility_violations) == brute_irreducible(words)


@settings(max_examples=100, deadline=None)
@given(complete_trees(), st.text("01", min_size=0, max_size=8), st.text("01", min_size=0, max_size=4))
def test_context_lookup_consistency(tree, past, prefix):
    m = ProbabilisticContextTree("01", {w: [0.5, 0.5] for w in tree})
    hit = context_of(m, past)
    if len(past) >= m.height:
        assert hit is not None
    if hit is not None:
        assert past.endswith(hit[0])
        assert context_of(m, prefix + past)[0] == hit[0]
