"""Large-N limits: first-order moments, fluctuations and the freeness identities."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import factorial
from typing import Callable, Mapping, Sequence

from .diagrams import (
    DiagramClass,
    enumerate_ann_nc,
    enumerate_disc_nc,
    in_class,
)
from .ensembles import (
    EnsembleModel,
    Letter,
    Wishart,
    _chain_trace,
    exact_centred_cumulant,
    exact_moment,
    exact_trace_cumulant,
    transpose_word,
)
from .laurent import LaurentValue
from .perm import SignedPermutation, compose_all, delta_eps, mirror, particular_cycle_list, SignPattern


@dataclass(frozen=True)
class LimitValue:
    """A limit, exact in the rationals and polynomial in c when c is symbolic."""

    value: LaurentValue
    provenance: str

    def __eq__(self, other) -> bool:
        if isinstance(other, LimitValue):
            return self.value == other.value
        return self.value == other

    def __hash__(self) -> int:
        return hash(self.value)

    def __str__(self) -> str:
        return str(self.value)

    @property
    def rational(self) -> Fraction:
        return self.value.as_number()


def _single_model(word: Sequence[Letter], models) -> EnsembleModel:
    colours = {x.colour for x in word}
    if len(colours) != 1:
        raise ValueError("limit formulas take single-colour words")
    return models[colours.pop()]


def _signs(words: Sequence[Letter], model) -> SignPattern:
    from .ensembles import Ginibre

    if isinstance(model, Ginibre):
        return SignPattern.from_list([x.sign for x in words])
    return SignPattern({})


def _limit_weight(model: EnsembleModel, rho: SignedPermutation, letters: Mapping[int, Letter]) -> LaurentValue:
    """lim f_c(ρ): 1, c^{#/2}, or normalized D traces with tr = (c/M) Tr."""
    if not isinstance(model, Wishart):
        return LaurentValue.constant(1)
    cycles = particular_cycle_list(rho.inverse(), sorted(letters))
    if not model.explicit:
        if model.c is None:
            return LaurentValue.monomial(1, 0, len(cycles))
        return LaurentValue.constant(model.c ** len(cycles))
    scale = (model.c if model.c is not None else Fraction(1)) / model.size
    value = 1
    for c in cycles:
        value = value * scale * _chain_trace(
            c, lambda k: model.matrix(letters[abs(k)]).T if k < 0 else model.matrix(letters[k]))
    return LaurentValue.constant(value)


def _needs_pairings(model: EnsembleModel) -> bool:
    return model.diagram_class is not DiagramClass.ALL_PREMAPS


def _orientation_sum(gamma: SignedPermutation, points: list[int], letters: Mapping[int, Letter],
                     model, eps: SignPattern, members) -> LaurentValue:
    de = delta_eps(eps)
    total = LaurentValue()
    for pi in members:
        rho = compose_all(de, pi, mirror(pi).inverse(), de)
        if in_class(model.diagram_class, rho, sorted(letters)):
            total = total + _limit_weight(model, rho, letters)
    return total


def phi1(word: Sequence[Letter], models: Mapping[str, EnsembleModel]) -> LimitValue:
    """lim E tr(word) for a single-colour word, by noncrossing enumeration."""
    model = _single_model(word, models)
    n = len(word)
    if n == 0:
        return LimitValue(LaurentValue.constant(1), "empty word")
    points = list(range(1, n + 1))
    gamma = SignedPermutation.from_cycles(points)
    letters = {k: word[k - 1] for k in points}
    members = enumerate_disc_nc(gamma, points, pairings_only=_needs_pairings(model))
    value = _orientation_sum(gamma, points, letters, model, _signs(word, model), members)
    return LimitValue(value, f"disc-noncrossing sum over {len(members)} permutations")


def phi2(word1: Sequence[Letter], word2: Sequence[Letter],
         models: Mapping[str, EnsembleModel]) -> LimitValue:
    """lim k₂(Tr(word1), Tr(word2)) for one colour, summing both relative orientations."""
    model = _single_model(list(word1) + list(word2), models)
    m, n = len(word1), len(word2)
    if m == 0 or n == 0:
        raise ValueError("both traces need letters")
    word = list(word1) + list(word2)
    letters = {k: word[k - 1] for k in range(1, m + n + 1)}
    eps = _signs(word, model)
    outer = list(range(1, m + 1))
    inner = list(range(m + 1, m + n + 1))
    gamma = SignedPermutation.from_cycles(outer, inner)
    gamma_op = SignedPermutation.from_cycles(outer, [-k for k in reversed(inner)])
    pairings = _needs_pairings(model)
    total = LaurentValue()
    count = 0
    for g, pts in ((gamma, outer + inner), (gamma_op, outer + [-k for k in inner])):
        members = enumerate_ann_nc(g, pts, pairings_only=pairings)
        count += len(members)
        total = total + _orientation_sum(g, pts, letters, model, eps, members)
    return LimitValue(total, f"annular-noncrossing sum over {count} permutations, both orientations")


def closed_form_goe_fluct(p: int, q: int) -> Fraction:
    if p < 1 or q < 1:
        raise ValueError("p, q must be positive")
    if p % 2 == 0 and q % 2 == 0:
        return (Fraction(4, p + q) * Fraction(factorial(p), factorial(p // 2) * factorial(p // 2 - 1))
                * Fraction(factorial(q), factorial(q // 2) * factorial(q // 2 - 1)))
    if p % 2 and q % 2:
        return (Fraction(4, p + q) * Fraction(factorial(p), factorial((p - 1) // 2) ** 2)
                * Fraction(factorial(q), factorial((q - 1) // 2) ** 2))
    return Fraction(0)


def closed_form_wishart_fluct(p: int, q: int) -> Fraction:
    """The published c = 1 identity-D expression, returned as printed (reference only)."""
    if p < 1 or q < 1:
        raise ValueError("p, q must be positive")
    return (Fraction(2, p + q) * Fraction(factorial(2 * p), factorial(p) * factorial(p - 1))
            * Fraction(factorial(2 * q), factorial(q) * factorial(q - 1)))


def _check_alternating(factors: Sequence[Sequence[Letter]], cyclic: bool) -> list[str]:
    colours = []
    for f in factors:
        if not f:
            raise ValueError("empty factor")
        cols = {x.colour for x in f}
        if len(cols) != 1:
            raise ValueError("each factor must use a single colour")
        colours.append(cols.pop())
    pairs = list(zip(colours, colours[1:]))
    if cyclic and len(colours) > 1:
        pairs.append((colours[-1], colours[0]))
    if any(a == b for a, b in pairs):
        raise ValueError(f"colours {colours} are not alternating")
    return colours


def freeness_defect(factors: Sequence[Sequence[Letter]],
                    models: Mapping[str, EnsembleModel]) -> LaurentValue:
    """Exact E tr(Å₁⋯Å_p) for an alternating product of centred one-colour factors."""
    colours = _check_alternating(factors, cyclic=False)
    if len(factors) < 2 or len(set(colours)) < 2:
        raise ValueError("need an alternating product over at least two colours")
    return exact_centred_cumulant([factors], models).shift(-1)


def phi1_from_exact(word: Sequence[Letter], models) -> LaurentValue:
    """N⁰ coefficient of E tr(word); usable for mixed colours."""
    return exact_moment(list(word), models).constant_term()


def centred_pair_limit(a: Sequence[Letter], b: Sequence[Letter], models,
                       provider: Callable = phi1_from_exact) -> LaurentValue:
    """φ₁(å b̊) = φ₁(ab) - φ₁(a)φ₁(b)."""
    return provider(list(a) + list(b), models) - provider(a, models) * provider(b, models)


def second_order_rhs(a_factors: Sequence[Sequence[Letter]], b_factors: Sequence[Sequence[Letter]],
                     models: Mapping[str, EnsembleModel],
                     provider: Callable = phi1_from_exact) -> LimitValue:
    """The two spoke-diagram sums for cyclically alternating centred products."""
    _check_alternating(a_factors, cyclic=True)
    _check_alternating(b_factors, cyclic=True)
    p, q = len(a_factors), len(b_factors)
    if p != q:
        return LimitValue(LaurentValue(), "p != q")
    if p < 2:
        raise ValueError("the spoke formula needs p = q >= 2")
    total = LaurentValue()
    for k in range(p):
        same = LaurentValue.constant(1)
        flipped = LaurentValue.constant(1)
        for i in range(1, p + 1):
            a = a_factors[i - 1]
            same = same * centred_pair_limit(a, b_factors[(k - i - 1) % p], models, provider)
            flipped = flipped * centred_pair_limit(
                a, transpose_word(b_factors[(k + i - 1) % p]), models, provider)
        total = total + same + flipped
    return LimitValue(total, "spoke sums")


def second_order_lhs(a_factors, b_factors, models) -> LimitValue:
    """N⁰ coefficient of the exact k₂(Tr(Å₁⋯Å_p), Tr(B̊₁⋯B̊_q))."""
    value = exact_centred_cumulant([a_factors, b_factors], models).constant_term()
    return LimitValue(value, "exact centred cumulant")


def higher_cumulant_vanishing(traces: Sequence[Sequence[Letter]],
                              models: Mapping[str, EnsembleModel]) -> LaurentValue:
    """Exact k_r of Tr's for r ≥ 3; every term should carry a negative power of N."""
    if len(traces) < 3:
        raise ValueError("need r >= 3 traces")
    return exact_trace_cumulant(traces, models)
