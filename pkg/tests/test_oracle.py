import json
from fractions import Fraction
from pathlib import Path

import pytest

from realfree.diagrams import GuardExceeded
from realfree.ensembles import (
    GOE,
    Ginibre,
    Letter,
    TraceExpression,
    Wishart,
    exact_moment,
    exact_trace_cumulant,
    model_from_dict,
    parse_word,
)
from realfree.oracle import mc_crosscheck_value, wick, wick_expectation

GOLDEN = json.loads((Path(__file__).parent / "golden" / "oracle_values.json").read_text())


def test_wick_pairs_equal_atoms():
    a, b = ("x", 0, 0), ("x", 0, 1)
    assert wick((a, a)) == 1
    assert wick((a, a, a, a)) == 3
    assert wick((a, a, b, b)) == 1
    assert wick((a, b)) == 0
    assert wick((a,)) == 0


@pytest.mark.parametrize("case", GOLDEN["values"], ids=lambda c: " ".join(c["traces"]))
def test_golden_values(case):
    models = {k: model_from_dict({"kind": v}) for k, v in case["ensembles"].items()}
    expr = TraceExpression.from_traces([parse_word(t) for t in case["traces"]])
    value = wick_expectation(expr, models, case["N"])
    assert value == Fraction(case["value"])
    assert exact_moment(expr, models).evaluate(case["N"]) == value


def test_empty_and_odd_words():
    models = {"Z": Ginibre()}
    assert wick_expectation(TraceExpression.from_traces([]), models, 2) == 1
    assert mc_crosscheck_value(TraceExpression.single(parse_word("Z Z Z^T")), models, 2)["value"] == "0"


def test_wishart_square_reassembles_from_cumulants():
    models = {"W": Wishart(c=1)}
    w = Letter("W")
    oracle = wick_expectation(TraceExpression.from_traces([[w], [w]]), models, 2)
    mean = exact_moment([w], models).shift(1)
    reassembled = exact_trace_cumulant([[w], [w]], models) + mean * mean
    assert oracle * 4 == reassembled.evaluate(2)


def test_oracle_requirements():
    with pytest.raises(ValueError):
        wick_expectation(TraceExpression.single([Letter("W")]), {"W": Wishart(c=Fraction(1, 2))}, 3)
    with pytest.raises(ValueError):
        wick_expectation(TraceExpression.single([Letter("W")]), {"W": Wishart(c=None)}, 2)
    with pytest.raises(GuardExceeded):
        wick_expectation(TraceExpression.single([Letter("T")] * 8), {"T": GOE()}, 4, max_work=10_000)


def test_explicit_d_with_labels_and_transposes():
    models = {"W": Wishart(d={"a": [[1, 2], [0, 3]], "b": [[0, 1], [-1, 2]]}), "T": GOE()}
    for tokens in (["W[a]", "W[b]^T"], ["W[a]^T", "T", "W[b]", "T"], ["W[b]", "W[a]^T", "W[a]"]):
        expr = TraceExpression.single(parse_word(tokens))
        assert wick_expectation(expr, models, 2) == exact_moment(expr, models).evaluate(2)
