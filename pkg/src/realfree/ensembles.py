"""Exact finite-N expectations and cumulants of traces of real Gaussian ensembles.

Every quantity is a sum over tuples of premaps, one per colour, drawn from
the colour's premap class.  A tuple π contributes
``N**(χ(γ, δ_ε π δ_ε) - 2#(γ))`` times the product of the colours' weights.
Expectations use normalized traces ``tr = Tr / N``; cumulants are returned
for unnormalized traces ``Tr``.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field, replace
from fractions import Fraction
from math import prod
from numbers import Rational
from typing import Mapping, Sequence

import numpy as np

from . import kernels
from .diagrams import (
    DiagramClass,
    GuardExceeded,
    array_to_perm,
    class_array,
    class_size,
    in_class,
)
from .laurent import LaurentValue
from .perm import SignedPermutation, particular_cycle_list

DEFAULT_MAX_TERMS = 10**8


# --------------------------------------------------------------------------
# Letters and expressions


_LETTER = re.compile(r"^([A-Za-z_][\w']*)(?:\[([^\]]+)\])?(\^T)?$")


@dataclass(frozen=True)
class Letter:
    """One matrix in a word: its colour, an optional Wishart label, and a transpose flag."""

    colour: str
    label: str | None = None
    transpose: bool = False

    @property
    def sign(self) -> int:
        return -1 if self.transpose else 1

    def transposed(self) -> "Letter":
        return replace(self, transpose=not self.transpose)

    @classmethod
    def parse(cls, token: str) -> "Letter":
        """``"W"``, ``"W[a]"``, ``"Z^T"``, ``"W[a]^T"``."""
        m = _LETTER.match(token.strip())
        if not m:
            raise ValueError(f"bad letter {token!r}")
        return cls(m.group(1), m.group(2), m.group(3) is not None)

    def __str__(self) -> str:
        label = f"[{self.label}]" if self.label is not None else ""
        return f"{self.colour}{label}{'^T' if self.transpose else ''}"


def parse_word(text: str | Sequence[str]) -> list[Letter]:
    tokens = text.split() if isinstance(text, str) else text
    return [Letter.parse(t) for t in tokens]


def transpose_word(word: Sequence[Letter]) -> list[Letter]:
    """(L₁⋯Lₙ)ᵀ = Lₙᵀ⋯L₁ᵀ."""
    return [letter.transposed() for letter in reversed(word)]


@dataclass(frozen=True)
class TraceExpression:
    """A product of traces: ``letters`` placed on [n], one trace per cycle of ``shape``."""

    letters: tuple[Letter, ...]
    shape: SignedPermutation

    def __post_init__(self):
        n = len(self.letters)
        if not all(1 <= k <= n for k in self.shape.support):
            raise ValueError("shape must permute [n]")

    @classmethod
    def from_traces(cls, traces: Sequence[Sequence[Letter]]) -> "TraceExpression":
        """Consecutive traces; empty traces are tr(I) = 1 and are dropped."""
        letters: list[Letter] = []
        cycles = []
        for trace in traces:
            if not trace:
                continue
            start = len(letters) + 1
            letters.extend(trace)
            cycles.append(list(range(start, len(letters) + 1)))
        return cls(tuple(letters), SignedPermutation.from_cycles(*cycles))

    @classmethod
    def single(cls, word: Sequence[Letter]) -> "TraceExpression":
        return cls.from_traces([word])

    @property
    def n(self) -> int:
        return len(self.letters)

    def cycles(self) -> list[tuple[int, ...]]:
        return self.shape.cycles(range(1, self.n + 1))

    def traces(self) -> list[list[Letter]]:
        return [[self.letters[k - 1] for k in c] for c in self.cycles()]

    def __str__(self) -> str:
        return " ".join("tr(" + " ".join(str(x) for x in t) + ")" for t in self.traces()) or "1"


# --------------------------------------------------------------------------
# Models


def as_matrix(data) -> np.ndarray:
    """Square matrix with exact Fraction entries when every entry is rational."""
    arr = np.asarray(data, dtype=object)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise ValueError("D matrices must be square")
    flat = arr.ravel()
    if all(isinstance(x, Rational) or isinstance(x, (np.integer,)) for x in flat):
        return np.array([Fraction(int(x)) if isinstance(x, np.integer) else Fraction(x)
                         for x in flat], dtype=object).reshape(arr.shape)
    if any(isinstance(x, complex) for x in flat):
        raise ValueError("D matrices must be real")
    return np.asarray(data, dtype=float)


class EnsembleModel:
    kind: str = ""
    diagram_class: DiagramClass

    def __repr__(self) -> str:
        return f"{type(self).__name__}()"


class Ginibre(EnsembleModel):
    """Z with i.i.d. N(0, 1/N) entries."""

    kind = "ginibre"
    diagram_class = DiagramClass.GINIBRE


class GOE(EnsembleModel):
    """T = (X + Xᵀ)/√2 with X Ginibre."""

    kind = "goe"
    diagram_class = DiagramClass.PAIRING_PREMAPS


@dataclass(eq=False, repr=False)
class Wishart(EnsembleModel):
    """W = Xᵀ D X with X an M×N matrix of N(0, 1/N) entries.

    With ``d=None`` every D is the identity and ``c = M/N`` is either a
    number or, when ``c=None``, kept as a symbol in results.  With explicit
    matrices ``d`` maps labels to real M×M matrices; results are then
    Laurent polynomials in N for that fixed M.
    """

    c: Fraction | None = Fraction(1)
    d: Mapping[str, object] | None = None
    matrices: dict[str, np.ndarray] = field(init=False)

    kind = "wishart"
    diagram_class = DiagramClass.ALL_PREMAPS

    def __post_init__(self):
        if self.c is not None:
            self.c = Fraction(self.c)
            if self.c <= 0:
                raise ValueError("c must be positive")
        self.matrices = {}
        if self.d is not None:
            self.matrices = {str(k): as_matrix(v) for k, v in self.d.items()}
            sizes = {m.shape[0] for m in self.matrices.values()}
            if len(sizes) != 1:
                raise ValueError("all D matrices must have the same size")

    @property
    def explicit(self) -> bool:
        return bool(self.matrices)

    @property
    def size(self) -> int | None:
        """M for explicit D, else None."""
        return next(iter(self.matrices.values())).shape[0] if self.matrices else None

    def matrix(self, letter: Letter) -> np.ndarray:
        """D for this letter, already transposed when the letter is."""
        if letter.label is None and len(self.matrices) == 1:
            mat = next(iter(self.matrices.values()))
        elif letter.label in self.matrices:
            mat = self.matrices[letter.label]
        else:
            raise KeyError(f"no D matrix for label {letter.label!r}")
        return mat.T if letter.transpose else mat

    def __repr__(self) -> str:
        d = f", d={sorted(self.matrices)}" if self.matrices else ""
        return f"Wishart(c={self.c}{d})"


def model_from_dict(spec: Mapping[str, object]) -> EnsembleModel:
    kind = str(spec.get("kind", "")).lower()
    if kind == "ginibre":
        return Ginibre()
    if kind == "goe":
        return GOE()
    if kind == "wishart":
        c = spec.get("c", "1")
        c = None if c in (None, "symbolic") else Fraction(str(c))
        d = spec.get("D")
        if d is not None:
            d = {k: [[Fraction(str(x)) if isinstance(x, str) else x for x in row] for row in v]
                 for k, v in d.items()}
            c = None
        return Wishart(c=c, d=d)
    raise ValueError(f"unknown ensemble kind {kind!r}")


# --------------------------------------------------------------------------
# Matrix traces


def _chain_trace(cycle: Sequence[int], lookup) -> object:
    mats = [lookup(k) for k in cycle]
    acc = mats[0]
    for nxt in mats[1:]:
        if acc.shape[1] != nxt.shape[0]:
            raise ValueError("matrix dimensions do not chain along the cycle")
        acc = acc.dot(nxt)
    if acc.shape[0] != acc.shape[1]:
        raise ValueError("product along a cycle is not square")
    return sum(acc[i, i] for i in range(acc.shape[0]))


def trace_along(pi: SignedPermutation, matrices: Mapping[int, object],
                domain: Sequence[int] | None = None):
    """Product over the cycles of π of Tr(X^{(c₁)} ⋯ X^{(c_k)}); X^{(-k)} = X_kᵀ."""
    mats = {k: np.asarray(v) if not isinstance(v, np.ndarray) else v for k, v in matrices.items()}

    def lookup(k):
        if k in mats:
            return mats[k]
        if -k in mats:
            return mats[-k].T
        raise KeyError(f"no matrix for index {k}")

    if domain is not None:
        dom = set(domain)
    else:  # a key is a fixed point only when π moves neither k nor -k
        dom = set(pi.support) | {k for k in mats if k not in pi.support and -k not in pi.support}
    result = 1
    for c in pi.cycles(dom):
        result = result * _chain_trace(c, lookup)
    return result


def weight(model: EnsembleModel, pi: SignedPermutation,
           letters: Mapping[int, Letter]) -> LaurentValue:
    """f_c(π) for a premap π on ±positions, where ``letters`` maps each position to its letter."""
    points = sorted(letters)
    if not in_class(model.diagram_class, pi, points):
        raise ValueError(f"{pi} is not in the {model.diagram_class.value} class")
    if not isinstance(model, Wishart):
        return LaurentValue.constant(1)
    cycles = particular_cycle_list(pi.inverse(), points)
    if not model.explicit:
        k = len(cycles)
        if model.c is None:
            return LaurentValue.monomial(1, 0, k)
        return LaurentValue.constant(model.c**k)
    value = 1
    for c in cycles:
        value = value * _chain_trace(c, lambda k: model.matrix(letters[abs(k)]).T if k < 0
                                     else model.matrix(letters[k]))
    return LaurentValue.monomial(value, -len(cycles))


# --------------------------------------------------------------------------
# The premap-tuple sum


@dataclass
class _Colour:
    model: EnsembleModel
    positions: list[int] = field(default_factory=list)


def _colour_table(letters: Sequence[Letter], models: Mapping[str, EnsembleModel]) -> dict[str, _Colour]:
    table: dict[str, _Colour] = {}
    for k, letter in enumerate(letters, start=1):
        if letter.colour not in models:
            raise KeyError(f"colour {letter.colour!r} has no registered model")
        table.setdefault(letter.colour, _Colour(models[letter.colour])).positions.append(k)
    return table


def projected_terms(letters: Sequence[Letter], models: Mapping[str, EnsembleModel]) -> int:
    return prod(class_size(col.model.diagram_class, len(col.positions))
                for col in _colour_table(letters, models).values())


def _class_keys(model: EnsembleModel, rows: np.ndarray, positions: list[int],
                letters: Sequence[Letter]):
    """Weight class of every member: (#cycles on ±positions, coefficient, c power, N shift)."""
    m = len(positions)
    if not isinstance(model, Wishart):
        return np.zeros(len(rows), dtype=np.int32), [(m, Fraction(1), 0, 0)]
    npi = kernels.row_cycle_counts(rows)
    if not model.explicit:
        distinct, ids = np.unique(npi, return_inverse=True)
        if model.c is None:
            col_keys = [(int(k), Fraction(1), int(k) // 2, 0) for k in distinct]
        else:
            col_keys = [(int(k), model.c ** (int(k) // 2), 0, 0) for k in distinct]
        return ids.astype(np.int32), col_keys
    keys: dict[tuple, int] = {}
    ids = np.empty(len(rows), dtype=np.int32)
    local_letters = {p: letters[p - 1] for p in positions}
    for r, row in enumerate(rows):
        cyc = int(npi[r])
        w = weight(model, array_to_perm(row, positions), local_letters)
        (n_shift, _), value = next(iter(w.terms.items())) if w.terms else ((-(cyc // 2), 0), 0)
        key = (cyc, value, 0, n_shift)
        ids[r] = keys.setdefault(key, len(keys))
    return ids, list(keys)


def _premap_sum(expr: TraceExpression, models: Mapping[str, EnsembleModel], *,
                letter_blocks: Sequence[int] | None = None,
                block_groups: Sequence[int] | None = None,
                mode: int = kernels.MODE_ALL,
                max_terms: int = DEFAULT_MAX_TERMS) -> LaurentValue:
    """Σ over class tuples of N^{χ - 2#γ} ∏ f, optionally filtered by block connectivity."""
    n = expr.n
    letters = expr.letters
    if n == 0:
        return LaurentValue.constant(1)
    table = _colour_table(letters, models)
    projected = projected_terms(letters, models)
    if projected > max_terms:
        raise GuardExceeded("premap tuples", projected, max_terms)

    # transposes: Ginibre keeps them as δ_ε, Wishart folds them into D, GOE drops them
    eps = [letter.sign if isinstance(models[letter.colour], Ginibre) else 1 for letter in letters]

    members, globs, classes, n_classes, keys = [], [], [], [], []
    for col in table.values():
        m = len(col.positions)
        rows = class_array(col.model.diagram_class, m)
        flip = [j for j, p in enumerate(col.positions) if eps[p - 1] < 0]
        if flip and len(rows):
            e_loc = np.arange(2 * m, dtype=np.int32)
            for j in flip:
                e_loc[j], e_loc[j + m] = j + m, j
            rows = e_loc[rows[:, e_loc]]
        ids, col_keys = _class_keys(col.model, rows, col.positions, letters)
        members.append(np.ascontiguousarray(rows, dtype=np.int32))
        globs.append(np.array([p - 1 for p in col.positions] + [n + p - 1 for p in col.positions],
                              dtype=np.int32))
        classes.append(ids)
        n_classes.append(max(len(col_keys), 1))
        keys.append(col_keys)

    gamma = expr.shape
    gp = np.arange(2 * n, dtype=np.int32)
    gmi = np.arange(2 * n, dtype=np.int32)
    for k in range(1, n + 1):
        gp[k - 1] = gamma(k) - 1
        gmi[n + gamma(k) - 1] = n + k - 1
    if letter_blocks is None:
        block = np.zeros(2 * n, dtype=np.int32)
        group = np.zeros(1, dtype=np.int32)
    else:
        block = np.array(list(letter_blocks) * 2, dtype=np.int32)
        group = np.asarray(block_groups, dtype=np.int32)
    n_groups = int(group.max()) + 1 if len(group) else 1

    hist = kernels.accumulate(members, globs, classes, n_classes, gp, gmi,
                              block, group, n_groups, mode)

    n_cycles_gamma = len(expr.cycles())
    terms: dict[tuple[int, int], object] = {}
    for v, combo in zip(*np.nonzero(hist)):
        count = int(hist[v, combo])
        chosen = []
        rest = int(combo)
        for col_keys, radix in zip(reversed(keys), reversed(n_classes)):
            chosen.append(col_keys[rest % radix])
            rest //= radix
        npi = sum(k[0] for k in chosen)
        if (npi + int(v)) % 2:
            raise AssertionError("odd cycle total: the tuple is not a premap")
        n_exp = (npi + int(v)) // 2 - n - n_cycles_gamma + sum(k[3] for k in chosen)
        c_exp = sum(k[2] for k in chosen)
        coef = count * prod((k[1] for k in chosen), start=Fraction(1))
        terms[(n_exp, c_exp)] = terms.get((n_exp, c_exp), 0) + coef
    return LaurentValue(terms)


def exact_moment(expr: TraceExpression | Sequence[Letter], models: Mapping[str, EnsembleModel],
                 max_terms: int = DEFAULT_MAX_TERMS) -> LaurentValue:
    """E tr_γ(letters) as an exact Laurent polynomial in N."""
    if not isinstance(expr, TraceExpression):
        expr = TraceExpression.single(expr)
    return _premap_sum(expr, models, max_terms=max_terms)


def _as_expression(traces) -> TraceExpression:
    if isinstance(traces, TraceExpression):
        return traces
    if any(not t for t in traces):
        raise ValueError("a cumulant entry may not be an empty trace")
    return TraceExpression.from_traces(traces)


def exact_trace_cumulant(traces: TraceExpression | Sequence[Sequence[Letter]],
                         models: Mapping[str, EnsembleModel],
                         max_terms: int = DEFAULT_MAX_TERMS) -> LaurentValue:
    """k_r(Tr(...), ..., Tr(...)) with one entry per trace (cycle of the shape)."""
    expr = _as_expression(traces)
    cycles = expr.cycles()
    block = [0] * expr.n
    for b, c in enumerate(cycles):
        for k in c:
            block[k - 1] = b
    value = _premap_sum(expr, models, letter_blocks=block, block_groups=list(range(len(cycles))),
                        mode=kernels.MODE_CONNECTED, max_terms=max_terms)
    return value.shift(len(cycles))


def exact_centred_cumulant(groups: Sequence[Sequence[Sequence[Letter]]],
                           models: Mapping[str, EnsembleModel],
                           max_terms: int = DEFAULT_MAX_TERMS) -> LaurentValue:
    """k_r(Tr(Å₁⋯), ..., Tr(⋯)) where Å = A - E tr(A) for each one-colour factor A.

    ``groups[l]`` lists the factors of the l-th trace; each factor is a
    nonempty list of letters of a single colour.
    """
    letters: list[Letter] = []
    block: list[int] = []
    block_group: list[int] = []
    cycles = []
    for g, factors in enumerate(groups):
        if not factors:
            raise ValueError("every trace needs at least one factor")
        start = len(letters) + 1
        for factor in factors:
            if not factor:
                raise ValueError("empty factor")
            if len({x.colour for x in factor}) != 1:
                raise ValueError("each centred factor must use a single colour")
            for letter in factor:
                letters.append(letter)
                block.append(len(block_group))
            block_group.append(g)
        cycles.append(list(range(start, len(letters) + 1)))
    expr = TraceExpression(tuple(letters), SignedPermutation.from_cycles(*cycles))
    value = _premap_sum(expr, models, letter_blocks=block, block_groups=block_group,
                        mode=kernels.MODE_CENTRED, max_terms=max_terms)
    return value.shift(len(groups))
