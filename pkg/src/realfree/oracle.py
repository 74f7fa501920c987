"""Brute-force Gaussian expectations of trace products, straight from matrix entries.

Nothing here uses premaps or permutation products: traces are expanded
into sums over index functions, each entry into standard normal atoms,
and expectations are taken with the Wick formula.  Agreement with
``ensembles`` is therefore an independent check of the whole genus
expansion.
"""
from __future__ import annotations

import itertools
from fractions import Fraction
from functools import lru_cache
from typing import Mapping

from .diagrams import GuardExceeded
from .ensembles import GOE, EnsembleModel, Ginibre, TraceExpression, Wishart

# an atom is (colour, row, column) naming one standard normal variable
Atom = tuple[str, int, int]


@lru_cache(maxsize=None)
def wick(atoms: tuple[Atom, ...]) -> int:
    """E of a product of independent standard normals: sum over pairings of covariances."""
    if not atoms:
        return 1
    if len(atoms) % 2:
        return 0
    first, rest = atoms[0], atoms[1:]
    total = 0
    for j, other in enumerate(rest):
        if other == first:  # covariance 1; every other pair has covariance 0
            total += wick(rest[:j] + rest[j + 1:])
    return total


def _entry_terms(model: EnsembleModel, colour: str, letter, a: int, b: int, M: int | None):
    """Entry (a, b) of the letter's matrix as [(coefficient, atoms)], scale factors stripped."""
    if letter.transpose:
        a, b = b, a
    if isinstance(model, Ginibre):
        return [(1, ((colour, a, b),))]
    if isinstance(model, GOE):
        if a == b:
            return [(2, ((colour, a, a),))]
        return [(1, ((colour, a, b),)), (1, ((colour, b, a),))]
    if isinstance(model, Wishart):
        if model.explicit:
            d = model.matrices[letter.label] if letter.label is not None else next(iter(model.matrices.values()))
            return [(Fraction(d[s, t]), ((colour, s, a), (colour, t, b)))
                    for s in range(M) for t in range(M) if d[s, t] != 0]
        return [(1, ((colour, s, a), (colour, s, b))) for s in range(M)]
    raise TypeError(f"unsupported model {model!r}")


def _wishart_size(model: Wishart, N: int) -> int:
    if model.explicit:
        return model.size
    if model.c is None:
        raise ValueError("the oracle needs a numeric c")
    M = model.c * N
    if M.denominator != 1:
        raise ValueError(f"c*N = {M} is not an integer")
    return int(M)


def wick_expectation(expr: TraceExpression, models: Mapping[str, EnsembleModel], N: int,
                     max_work: int = 5_000_000) -> Fraction:
    """Exact E tr_γ(letters) at a concrete N."""
    n = expr.n
    if n == 0:
        return Fraction(1)
    sizes = {}
    sqrt2_power = 0  # total power of 1/√2
    sqrtn_power = 0  # total power of 1/√N
    for letter in expr.letters:
        model = models[letter.colour]
        if isinstance(model, Wishart):
            sizes[letter.colour] = _wishart_size(model, N)
            if model.explicit and not all(isinstance(x, Fraction) for x in model.matrices[
                    letter.label if letter.label is not None else next(iter(model.matrices))].ravel()):
                raise ValueError("the oracle needs rational D entries")
            sqrtn_power += 2
        else:
            sqrtn_power += 1
            if isinstance(model, GOE):
                sqrt2_power += 1
    per_letter = [2 if isinstance(models[x.colour], GOE) else
                  (sizes[x.colour] ** 2 if isinstance(models[x.colour], Wishart) else 1)
                  for x in expr.letters]
    projected = N**n
    for k in per_letter:
        projected *= k
    if projected > max_work:
        raise GuardExceeded("oracle expansion", projected, max_work)

    gamma = expr.shape
    polynomial: dict[tuple[Atom, ...], Fraction] = {}
    for index in itertools.product(range(N), repeat=n):
        factors = []
        for k, letter in enumerate(expr.letters, start=1):
            a, b = index[k - 1], index[gamma(k) - 1]
            model = models[letter.colour]
            factors.append(_entry_terms(model, letter.colour, letter, a, b, sizes.get(letter.colour)))
        for choice in itertools.product(*factors):
            coef = Fraction(1)
            atoms: list[Atom] = []
            for c, at in choice:
                coef *= c
                atoms.extend(at)
            key = tuple(sorted(atoms))
            polynomial[key] = polynomial.get(key, 0) + coef

    total = Fraction(0)
    for atoms, coef in polynomial.items():
        if coef:
            total += coef * wick(atoms)
    if total and (sqrt2_power % 2 or sqrtn_power % 2):
        raise AssertionError("nonzero expectation with an odd power of √2 or √N")
    if total == 0:
        return Fraction(0)
    n_traces = len(expr.cycles())
    return total / Fraction(2) ** (sqrt2_power // 2) / Fraction(N) ** (sqrtn_power // 2) / Fraction(N) ** n_traces


def mc_crosscheck_value(expr: TraceExpression, models: Mapping[str, EnsembleModel], N: int) -> dict:
    """The oracle value in report form."""
    value = wick_expectation(expr, models, N)
    return {"expression": str(expr), "N": N, "value": str(value)}
