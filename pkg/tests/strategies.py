"""Hypothesis strategies shared by the test modules."""
from __future__ import annotations

from hypothesis import strategies as st

from realfree.perm import SignedPermutation, compose, delta


@st.composite
def permutations_of(draw, points):
    """A uniformly shuffled bijection of ``points``."""
    points = list(points)
    image = draw(st.permutations(points))
    return SignedPermutation(dict(zip(points, image)))


@st.composite
def positive_permutations(draw, max_n: int = 7):
    n = draw(st.integers(1, max_n))
    return draw(permutations_of(range(1, n + 1))), n


@st.composite
def fpf_involutions(draw, points):
    """A random pairing of an even-sized set, as an involution."""
    rest = draw(st.permutations(list(points)))
    mapping = {}
    for a, b in zip(rest[::2], rest[1::2]):
        mapping[a] = b
        mapping[b] = a
    return SignedPermutation(mapping)


@st.composite
def premaps(draw, max_n: int = 6):
    """A premap on ±[n]: δσ for a fixed-point-free involution σ of ±[n]."""
    n = draw(st.integers(1, max_n))
    pts = list(range(1, n + 1)) + [-k for k in range(1, n + 1)]
    sigma = draw(fpf_involutions(pts))
    return compose(delta(range(1, n + 1)), sigma), n


@st.composite
def cycle_types(draw, n: int):
    """A permutation of [n] whose cycles are consecutive runs: the trace shape of a product of traces."""
    cuts = sorted(draw(st.sets(st.integers(1, n - 1))) if n > 1 else set())
    bounds = [0] + cuts + [n]
    cycles = [list(range(a + 1, b + 1)) for a, b in zip(bounds, bounds[1:])]
    return SignedPermutation.from_cycles(*cycles)
