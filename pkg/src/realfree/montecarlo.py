"""Seeded Monte Carlo estimates of trace statistics for sampled matrices.

Randomness comes from numpy's PCG64 bit generator, seeded through
``SeedSequence``; normals are drawn with ``Generator.standard_normal``
(numpy's ziggurat method).  Samples are drawn in fixed-size blocks, block
``b`` using the ``b``-th spawned child seed, so a result depends only on
``(seed, samples, N, target)`` and never on the number of threads.
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

import numpy as np

from .ensembles import (
    GOE,
    EnsembleModel,
    Ginibre,
    Letter,
    Wishart,
    exact_moment,
)

RNG_NAME = "numpy PCG64 + standard_normal (ziggurat)"

# elements per block, so that blocks of large matrices stay small in memory
_BLOCK_ELEMENTS = 4_000_000
_MAX_BLOCK = 512


@dataclass(frozen=True)
class MCEstimate:
    mean: float
    std_error: float
    samples: int
    seed: int
    target: str

    def z_score(self, exact: float) -> float:
        """|mean − exact| in units of the standard error."""
        if self.std_error == 0:
            return 0.0 if self.mean == exact else math.inf
        return abs(self.mean - float(exact)) / self.std_error

    def as_row(self, N: int, exact=None) -> dict:
        row = {"expression": self.target, "N": N, "samples": self.samples, "seed": self.seed,
               "mean": self.mean, "se": self.std_error}
        if exact is not None:
            row["exact"] = float(exact)
            row["z"] = self.z_score(exact)
        return row


def wishart_rows(model: Wishart, N: int) -> int:
    """M: the size of explicit D, else round(c·N) with ties going to the even integer."""
    if model.explicit:
        return model.size
    if model.c is None:
        raise ValueError("sampling needs a numeric c")
    return max(1, round(model.c * N))  # Fraction.__round__ rounds half to even


def _normals(rng: np.random.Generator, shape) -> np.ndarray:
    return rng.standard_normal(shape)


def sample_colour(model: EnsembleModel, N: int, rng: np.random.Generator, batch: int = 1) -> np.ndarray:
    """``batch`` draws of the colour's underlying matrix.

    Ginibre and GOE give the N×N matrix itself; Wishart gives the M×N
    factor X, shared by every label of the colour.
    """
    if isinstance(model, Ginibre):
        return _normals(rng, (batch, N, N)) / math.sqrt(N)
    if isinstance(model, GOE):
        x = _normals(rng, (batch, N, N)) / math.sqrt(N)
        return (x + x.transpose(0, 2, 1)) / math.sqrt(2)
    if isinstance(model, Wishart):
        return _normals(rng, (batch, wishart_rows(model, N), N)) / math.sqrt(N)
    raise TypeError(f"unsupported model {model!r}")


def _letter_matrix(model: EnsembleModel, base: np.ndarray, letter: Letter) -> np.ndarray:
    if isinstance(model, Wishart):
        if model.explicit:
            d = np.asarray(model.matrix(letter), dtype=float)
            w = base.transpose(0, 2, 1) @ d @ base
        else:
            w = base.transpose(0, 2, 1) @ base
        return w  # D was already transposed for a transposed letter
    return base.transpose(0, 2, 1) if letter.transpose else base


def sample_matrix(model: EnsembleModel, N: int, rng: np.random.Generator,
                  letter: Letter | None = None) -> np.ndarray:
    """One N×N draw of the letter's matrix (Z, T or XᵀDX)."""
    letter = letter or Letter("_")
    return _letter_matrix(model, sample_colour(model, N, rng), letter)[0]


# --------------------------------------------------------------------------
# Targets


@dataclass(frozen=True)
class Target:
    """What to estimate.

    ``kind`` is ``"moment"`` (E of a product of normalized traces, ``parts``
    a list of words), ``"cumulant"`` (k_r of unnormalized traces of the
    words) or ``"centred"`` (k_r of unnormalized traces of products of
    centred factors, ``parts`` a list of traces each a list of factors).
    """

    kind: str
    parts: tuple
    name: str = ""

    def __post_init__(self):
        if self.kind not in ("moment", "cumulant", "centred"):
            raise ValueError(f"unknown target kind {self.kind!r}")
        if self.kind != "moment" and len(self.parts) >= 3:
            raise NotImplementedError("cumulants of order r >= 3 are not estimated")
        if not self.parts:
            raise ValueError("empty target")

    @property
    def order(self) -> int:
        return 1 if self.kind == "moment" else len(self.parts)

    def label(self) -> str:
        if self.name:
            return self.name
        words = [" ".join(str(x) for x in p) if self.kind != "centred"
                 else " ".join("(" + " ".join(str(x) for x in f) + ")°" for f in p) for p in self.parts]
        return f"{self.kind}[" + " | ".join(words) + "]"


def _freeze(kind: str, parts) -> tuple:
    if kind == "centred":
        return tuple(tuple(tuple(f) for f in trace) for trace in parts)
    return tuple(tuple(w) for w in parts)


def moment_target(*words: Sequence[Letter], name: str = "") -> Target:
    return Target("moment", _freeze("moment", words), name)


def cumulant_target(*words: Sequence[Letter], name: str = "") -> Target:
    return Target("cumulant", _freeze("cumulant", words), name)


def centred_target(*traces: Sequence[Sequence[Letter]], name: str = "") -> Target:
    return Target("centred", _freeze("centred", traces), name)


def _centring_constants(target: Target, models, N: int) -> dict[tuple, float]:
    """E tr(factor) at this N from the exact engine."""
    out = {}
    for trace in target.parts:
        for factor in trace:
            if factor not in out:
                value = exact_moment(list(factor), models)
                c = _numeric_c(models, factor)
                out[factor] = float(value.evaluate(N, c))
    return out


def _numeric_c(models, letters) -> Fraction | None:
    for x in letters:
        m = models[x.colour]
        if isinstance(m, Wishart) and m.c is not None:
            return m.c
    return None


class _Block:
    """The matrices of one block of draws, with cached word products."""

    def __init__(self, models, N: int, rng: np.random.Generator, batch: int, colours: list[str]):
        self.models = models
        self.N = N
        self.base = {col: sample_colour(models[col], N, rng, batch) for col in colours}
        self.letters: dict[Letter, np.ndarray] = {}
        self.products: dict[tuple, np.ndarray] = {}

    def letter(self, x: Letter) -> np.ndarray:
        if x not in self.letters:
            self.letters[x] = _letter_matrix(self.models[x.colour], self.base[x.colour], x)
        return self.letters[x]

    def product(self, word: tuple[Letter, ...]) -> np.ndarray:
        if word not in self.products:
            if len(word) == 1:
                self.products[word] = self.letter(word[0])
            else:
                self.products[word] = self.product(word[:-1]) @ self.letter(word[-1])
        return self.products[word]


def _trace(a: np.ndarray) -> np.ndarray:
    return np.trace(a, axis1=1, axis2=2)


def _trace_pair(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Tr(AB) without forming AB."""
    return np.einsum("kij,kji->k", a, b)


def _word_trace(block: "_Block", word: tuple[Letter, ...]) -> np.ndarray:
    if len(word) == 1:
        return _trace(block.letter(word[0]))
    half = (len(word) + 1) // 2
    return _trace_pair(block.product(word[:half]), block.product(word[half:]))


def _statistics(target: Target, block: _Block, centring) -> np.ndarray:
    """Per-draw values, shape (batch, order)."""
    N = block.N
    cols = []
    if target.kind == "moment":
        value = 1.0
        for word in target.parts:
            value = value * _word_trace(block, word) / N
        cols.append(value)
    elif target.kind == "cumulant":
        for word in target.parts:
            cols.append(_word_trace(block, word))
    else:
        eye = np.eye(N)
        for trace in target.parts:
            mats = [block.product(f) - centring[f] * eye for f in trace]
            if len(mats) == 1:
                cols.append(_trace(mats[0]))
                continue
            half = (len(mats) + 1) // 2
            left, right = mats[0], mats[half]
            for m in mats[1:half]:
                left = left @ m
            for m in mats[half + 1:]:
                right = right @ m
            cols.append(_trace_pair(left, right))
    return np.stack(np.broadcast_arrays(*cols), axis=1)


def _block_sizes(samples: int, N: int) -> list[int]:
    size = max(1, min(_MAX_BLOCK, _BLOCK_ELEMENTS // (N * N)))
    full, rest = divmod(samples, size)
    return [size] * full + ([rest] if rest else [])


def _colours(target: Target) -> list[str]:
    if target.kind == "centred":
        letters = [x for trace in target.parts for f in trace for x in f]
    else:
        letters = [x for w in target.parts for x in w]
    return sorted({x.colour for x in letters})


def draw_statistics(targets: Sequence[Target], models: Mapping[str, EnsembleModel], N: int,
                    samples: int, seed: int, threads: int = 1) -> list[np.ndarray]:
    """Per-draw statistic arrays for several targets evaluated on the same draws."""
    if samples < 2:
        raise ValueError("need at least two samples")
    if N < 1:
        raise ValueError("N must be positive")
    colours = sorted({c for t in targets for c in _colours(t)})
    missing = [c for c in colours if c not in models]
    if missing:
        raise KeyError(f"undeclared colours {missing}")
    centrings = [_centring_constants(t, models, N) if t.kind == "centred" else {} for t in targets]
    sizes = _block_sizes(samples, N)
    children = np.random.SeedSequence(seed).spawn(len(sizes))

    def run(b: int) -> list[np.ndarray]:
        rng = np.random.Generator(np.random.PCG64(children[b]))
        block = _Block(models, N, rng, sizes[b], colours)
        return [_statistics(t, block, c) for t, c in zip(targets, centrings)]

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(run, range(len(sizes))))
    else:
        parts = [run(b) for b in range(len(sizes))]
    return [np.concatenate([p[i] for p in parts]) for i in range(len(targets))]


def summarize(target: Target, values: np.ndarray, seed: int) -> MCEstimate:
    """Sample mean (order 1) or unbiased sample covariance (order 2), with standard error."""
    n = values.shape[0]
    if target.order == 1:
        x = values[:, 0]
        return MCEstimate(float(x.mean()), float(x.std(ddof=1) / math.sqrt(n)), n, seed, target.label())
    x, y = values[:, 0], values[:, 1]
    products = (x - x.mean()) * (y - y.mean())
    cov = float(products.sum() / (n - 1))
    return MCEstimate(cov, float(products.std(ddof=1) / math.sqrt(n)), n, seed, target.label())


def estimate(target: Target, models: Mapping[str, EnsembleModel], N: int, samples: int = 10_000,
             seed: int = 0, threads: int = 1) -> MCEstimate:
    """Monte Carlo estimate of a moment, or of a cumulant of order 1 or 2."""
    values = draw_statistics([target], models, N, samples, seed, threads)[0]
    return summarize(target, values, seed)


def estimate_many(targets: Sequence[Target], models: Mapping[str, EnsembleModel], N: int,
                  samples: int = 10_000, seed: int = 0, threads: int = 1) -> list[MCEstimate]:
    """Several estimates sharing one set of draws."""
    arrays = draw_statistics(targets, models, N, samples, seed, threads)
    return [summarize(t, v, seed) for t, v in zip(targets, arrays)]
