import json
from fractions import Fraction
from pathlib import Path

import pytest

from realfree.asymptotics import (
    closed_form_goe_fluct,
    closed_form_wishart_fluct,
    freeness_defect,
    higher_cumulant_vanishing,
    phi1,
    phi2,
    second_order_lhs,
    second_order_rhs,
)
from realfree.diagrams import catalan
from realfree.ensembles import (
    GOE,
    Ginibre,
    Letter,
    Wishart,
    exact_moment,
    exact_trace_cumulant,
    model_from_dict,
    parse_word,
)
from realfree.laurent import LaurentValue

T, W, Z = Letter("T"), Letter("W"), Letter("Z")
T1, T2, W1 = Letter("T1"), Letter("T2"), Letter("W1")
MODELS = {"T": GOE(), "W": Wishart(c=1), "Z": Ginibre(), "S": Wishart(c=None),
          "T1": GOE(), "T2": GOE(), "W1": Wishart(c=1), "W2": Wishart(c=Fraction(1, 2))}
GOLDEN = json.loads((Path(__file__).parent / "golden" / "oracle_values.json").read_text())


def test_phi1_catalan():
    assert [phi1([T] * n, MODELS).rational for n in range(1, 9)] == [0, 1, 0, 2, 0, 5, 0, 14]
    assert [phi1([W] * n, MODELS).rational for n in range(1, 6)] == [catalan(n) for n in range(1, 6)]


def test_phi1_symbolic_c():
    s = Letter("S")
    # free Poisson moments: c, c + c², c + 3c² + c³
    assert phi1([s], MODELS) == LaurentValue.monomial(1, 0, 1)
    assert phi1([s, s], MODELS) == LaurentValue({(0, 1): 1, (0, 2): 1})
    assert phi1([s] * 3, MODELS) == LaurentValue({(0, 1): 1, (0, 2): 3, (0, 3): 1})


@pytest.mark.parametrize("tokens", ["T T", "Z Z^T", "Z Z", "Z Z^T Z Z^T", "Z Z Z^T Z^T", "W W W", "S S"])
def test_phi1_matches_exact_constant_term(tokens):
    word = parse_word(tokens)
    assert phi1(word, MODELS) == exact_moment(word, MODELS).constant_term()


def test_phi2_examples():
    assert phi2([T], [T], MODELS) == 2
    assert phi2([T, T], [T, T], MODELS) == 4
    assert phi2([Letter("S")], [Letter("S")], MODELS) == LaurentValue.monomial(2, 0, 1)


@pytest.mark.parametrize("a,b", [("Z Z^T", "Z Z^T"), ("Z Z", "Z^T Z^T"), ("Z Z", "Z Z"),
                                 ("W W", "W"), ("T T T", "T")])
def test_phi2_matches_exact_constant_term(a, b):
    wa, wb = parse_word(a), parse_word(b)
    assert phi2(wa, wb, MODELS) == exact_trace_cumulant([wa, wb], MODELS).constant_term()


def test_closed_forms():
    assert closed_form_goe_fluct(1, 1) == 2
    assert closed_form_goe_fluct(2, 2) == 4
    assert closed_form_goe_fluct(1, 2) == 0
    assert closed_form_wishart_fluct(2, 2) == 72
    assert closed_form_wishart_fluct(1, 1) == 4
    assert closed_form_wishart_fluct(1, 2) == 16


@pytest.mark.parametrize("p", range(1, 6))
def test_goe_closed_form_row(p):
    for q in range(1, 6):
        assert phi2([T] * p, [T] * q, MODELS) == closed_form_goe_fluct(p, q)


def test_wishart_closed_form_disagrees_by_a_factor_two():
    # the published expression is twice the enumerated limit; the exact cumulant sides with enumeration
    for p in (1, 2, 3):
        for q in (1, 2, 3):
            lim = phi2([W] * p, [W] * q, MODELS)
            assert lim == exact_trace_cumulant([[W] * p, [W] * q], MODELS).constant_term()
            assert 2 * lim.rational == closed_form_wishart_fluct(p, q)


def test_freeness_defect():
    assert freeness_defect([[T1], [T2], [T1], [T2]], MODELS).constant_term().is_zero()
    assert freeness_defect([[T], [W1], [T], [W1]], MODELS).constant_term().is_zero()
    assert not freeness_defect([[T1], [T2], [T1], [T2]], MODELS).is_zero()
    with pytest.raises(ValueError):
        freeness_defect([[T1, T1]], MODELS)
    with pytest.raises(ValueError):
        freeness_defect([[T1], [T1]], MODELS)


def test_second_order_examples():
    a = [[T1], [T2]]
    assert second_order_rhs(a, a, MODELS) == 2
    assert second_order_lhs(a, a, MODELS) == 2
    assert second_order_rhs(a, [[T1], [T2], [T1], [T2]], MODELS) == 0
    with pytest.raises(ValueError):
        second_order_rhs([[T1], [T1]], a, MODELS)
    with pytest.raises(ValueError):
        second_order_rhs([[T1]], [[T1]], MODELS)


@pytest.mark.parametrize("case", GOLDEN["second_order"], ids=lambda c: " ".join(c["a"]))
def test_second_order_golden(case):
    models = {k: model_from_dict({"kind": v}) for k, v in case["ensembles"].items()}
    a = [parse_word(x) for x in case["a"]]
    b = [parse_word(x) for x in case["b"]]
    assert second_order_rhs(a, b, models) == Fraction(case["value"])
    assert second_order_lhs(a, b, models) == Fraction(case["value"])


@pytest.mark.parametrize("a,b", [
    ([[T1, T1], [T2]], [[T1], [T2, T2]]),
    ([[Letter("Z")], [T]], [[Letter("Z")], [T]]),
    ([[Letter("Z")], [T]], [[Letter("Z", transpose=True)], [T]]),
    ([[W1], [Letter("W2")]], [[W1], [Letter("W2")]]),
])
def test_second_order_identity(a, b):
    assert second_order_lhs(a, b, MODELS) == second_order_rhs(a, b, MODELS)


def test_higher_cumulants_vanish():
    assert higher_cumulant_vanishing([[T]] * 3, MODELS).is_zero()
    assert higher_cumulant_vanishing([[T, T]] * 3, MODELS).max_n_exponent() <= -1
    assert higher_cumulant_vanishing([[W]] * 4, MODELS).max_n_exponent() <= -2
    with pytest.raises(ValueError):
        higher_cumulant_vanishing([[T], [T]], MODELS)
