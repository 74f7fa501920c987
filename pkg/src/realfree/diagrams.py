"""Surface weights, noncrossing tests and enumeration of the premap classes.

Array helpers in this module use a *local encoding* of ±[m]: point ``k``
(1 ≤ k ≤ m) is index ``k-1`` and ``-k`` is index ``m+k-1``.
"""
from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass
from math import comb, factorial
from typing import Iterable, Iterator, Sequence

import numpy as np

from . import kernels
from .perm import (
    SignedPermutation,
    compose,
    compose_all,
    connects,
    cycle_count,
    is_premap,
    mirror,
    orbits,
    restrict,
    signed_domain,
)


class GuardExceeded(RuntimeError):
    """An enumeration would exceed its configured size limit."""

    def __init__(self, what: str, projected: int, limit: int):
        super().__init__(f"{what}: projected size {projected} exceeds limit {limit}")
        self.projected = projected
        self.limit = limit


class DiagramClass(enum.Enum):
    ALL_PREMAPS = "premaps"
    PAIRING_PREMAPS = "pairing-premaps"
    GINIBRE = "ginibre"


class Crossing(enum.Enum):
    NONSTANDARD = "nonstandard"
    CROSSING = "crossing"
    NONCROSSING = "noncrossing"


def double_factorial(n: int) -> int:
    out = 1
    while n > 1:
        out *= n
        n -= 2
    return out


def catalan(n: int) -> int:
    return comb(2 * n, n) // (n + 1)


def class_size(kind: DiagramClass, m: int) -> int:
    if kind is DiagramClass.ALL_PREMAPS:
        return double_factorial(2 * m - 1)
    if m % 2:
        return 0
    if kind is DiagramClass.PAIRING_PREMAPS:
        return double_factorial(m - 1) * 2 ** (m // 2)
    return double_factorial(m - 1)


# --------------------------------------------------------------------------
# Euler characteristic and the geodesic bound


@dataclass(frozen=True)
class EulerData:
    chi: int
    vertex_half: int
    premap_half: int
    face_half: int


def _points_of(*perms: SignedPermutation) -> list[int]:
    return sorted({abs(k) for p in perms for k in p.support})


def euler_characteristic(gamma: SignedPermutation, pi: SignedPermutation,
                         points: Iterable[int] | None = None) -> EulerData:
    """χ(γ, π) for γ acting on ``points`` and a premap π on ±points.

    ``points`` defaults to the absolute values of the moved points, which is
    wrong when γ has fixed points; pass it explicitly in that case.
    """
    points = sorted(points) if points is not None else _points_of(gamma, pi)
    if any(-k in points for k in points):
        raise ValueError("points must not contain both k and -k")
    dom = signed_domain(points)
    if not is_premap(pi, points):
        raise ValueError(f"{pi} is not a premap on ±{points}")
    g_plus = gamma
    g_minus = mirror(gamma)
    a = cycle_count(compose(g_plus, g_minus.inverse()), dom)
    b = cycle_count(pi, dom)
    c = cycle_count(compose_all(g_plus.inverse(), pi.inverse(), g_minus), dom)
    if a % 2 or b % 2 or c % 2:
        raise AssertionError("premap cycle counts must be even")
    chi = a // 2 + b // 2 + c // 2 - len(points)
    return EulerData(chi, a // 2, b // 2, c // 2)


def geodesic_defect(p: SignedPermutation, q: SignedPermutation, domain: Iterable[int]) -> int:
    """|I| + 2#⟨p,q⟩ - #(p) - #(pq) - #(q); never negative."""
    domain = set(domain)
    n_orbits = len(orbits([p, q], domain))
    return (len(domain) + 2 * n_orbits - cycle_count(p, domain)
            - cycle_count(compose(p, q), domain) - cycle_count(q, domain))


# --------------------------------------------------------------------------
# Noncrossing tests


def _gamma_cycles(gamma: SignedPermutation, points) -> list[tuple[int, ...]]:
    return gamma.cycles(points)


def is_disc_noncrossing(gamma: SignedPermutation, pi: SignedPermutation,
                        points: Iterable[int]) -> bool:
    """Cycle-count test: #(π) + #(γ⁻¹π⁻¹) = |I| + 1."""
    points = set(points)
    return (cycle_count(pi, points)
            + cycle_count(compose(gamma.inverse(), pi.inverse()), points)) == len(points) + 1


def is_annular_noncrossing(gamma: SignedPermutation, pi: SignedPermutation,
                           points: Iterable[int]) -> bool:
    """Connected and #(π) + #(γ⁻¹π⁻¹) = |I|."""
    points = set(points)
    if len(orbits([gamma, pi], points)) != 1:
        return False
    return (cycle_count(pi, points)
            + cycle_count(compose(gamma.inverse(), pi.inverse()), points)) == len(points)


def _same(p: SignedPermutation, *cycles: Sequence[int]) -> bool:
    return p == SignedPermutation.from_cycles(*cycles)


def _has_nonstandard_triple(gamma, pi, points) -> bool:
    for triple in itertools.combinations(points, 3):
        g = restrict(gamma, triple)
        if len(g.support) == 3 and len(g.cycles()) == 1 and restrict(pi, triple) == g:
            return True
    return False


def _crossing_quadruple(gamma, pi, quad) -> bool:
    g = restrict(gamma, quad)
    cyc = g.cycles()
    if len(cyc) != 1 or len(cyc[0]) != 4:
        return False
    a, b, c, d = cyc[0]
    return _same(restrict(pi, quad), (a, c), (b, d))


def classify_disc(gamma: SignedPermutation, pi: SignedPermutation,
                  points: Iterable[int] | None = None) -> Crossing:
    """Pattern-based classification relative to a one-cycle γ, checked against the cycle-count test."""
    points = sorted(points) if points is not None else _points_of(gamma, pi)
    if len(_gamma_cycles(gamma, points)) != 1:
        raise ValueError("γ must have exactly one cycle")
    if _has_nonstandard_triple(gamma, pi, points):
        verdict = Crossing.NONSTANDARD
    elif any(_crossing_quadruple(gamma, pi, q) for q in itertools.combinations(points, 4)):
        verdict = Crossing.CROSSING
    else:
        verdict = Crossing.NONCROSSING
    if (verdict is Crossing.NONCROSSING) != is_disc_noncrossing(gamma, pi, points):
        raise AssertionError(f"pattern test and cycle-count test disagree for γ={gamma}, π={pi}")
    return verdict


def _lambda(gamma: SignedPermutation, x: int, y: int, points) -> SignedPermutation:
    g_inv = gamma.inverse()
    mapping = {a: gamma(a) for a in points if a not in (x, y)}
    mapping[g_inv(x)] = gamma(y)
    mapping[g_inv(y)] = gamma(x)
    return SignedPermutation(mapping)


def _annular_pattern(gamma, pi, points, ext, inner) -> Crossing:
    for triple in itertools.combinations(points, 3):
        g = restrict(gamma, triple)
        if len(g.cycles()) == 1 and len(g.support) == 3 and restrict(pi, triple) == g:
            return Crossing.NONSTANDARD
    for pa in itertools.combinations(ext, 2):
        for pb in itertools.combinations(inner, 2):
            quad = pa + pb
            p_res = restrict(pi, quad)
            for (a, b), (c, d) in ((pa, pb), (pb, pa)):
                for aa, bb in ((a, b), (b, a)):
                    for cc, dd in ((c, d), (d, c)):
                        if _same(p_res, (aa, cc, bb, dd)):
                            return Crossing.NONSTANDARD
    for quad in itertools.combinations(points, 4):
        if _crossing_quadruple(gamma, pi, quad):
            return Crossing.CROSSING
    for x in ext:
        for y in inner:
            lam = _lambda(gamma, x, y, points)
            rest = [a for a in points if a not in (x, y)]
            for triple in itertools.combinations(rest, 3):
                lam_res = restrict(lam, triple)
                a, b, c = lam_res.cycles()[0]
                if _same(restrict(pi, triple + (x, y)), (a, b, c), (x, y)):
                    return Crossing.CROSSING
            for quad in itertools.combinations(rest, 4):
                a, b, c, d = restrict(lam, quad).cycles()[0]
                if _same(restrict(pi, quad + (x, y)), (a, c), (b, d), (x, y)):
                    return Crossing.CROSSING
    return Crossing.NONCROSSING


def classify_annular(gamma: SignedPermutation, pi: SignedPermutation,
                     points: Iterable[int] | None = None) -> Crossing:
    """Classification relative to a two-cycle γ for π connecting the two cycles.

    When either cycle of γ is a single point the pattern conditions are not
    defined and the cycle-count test alone decides.
    """
    points = sorted(points) if points is not None else _points_of(gamma, pi)
    cyc = _gamma_cycles(gamma, points)
    if len(cyc) != 2:
        raise ValueError("γ must have exactly two cycles")
    if len(orbits([gamma, pi], points)) != 1:
        raise ValueError("π must connect the two cycles of γ")
    by_equality = is_annular_noncrossing(gamma, pi, points)
    if min(len(c) for c in cyc) < 2:
        return Crossing.NONCROSSING if by_equality else Crossing.CROSSING
    verdict = _annular_pattern(gamma, pi, points, cyc[0], cyc[1])
    if (verdict is Crossing.NONCROSSING) != by_equality:
        raise AssertionError(f"pattern test and cycle-count test disagree for γ={gamma}, π={pi}")
    return verdict


def unoriented_disc_test(gamma: SignedPermutation, pi: SignedPermutation,
                         points: Iterable[int] | None = None) -> bool:
    """χ(γ, π) == 2 for a one-cycle γ, checked against the sign-separation criterion."""
    points = sorted(points) if points is not None else _points_of(gamma, pi)
    flat = euler_characteristic(gamma, pi, points).chi == 2
    negs = [-k for k in points]
    separated = not connects(pi, points, negs) and is_disc_noncrossing(
        gamma, restrict(pi, points), points)
    if flat != separated:
        raise AssertionError(f"χ test and separation test disagree for γ={gamma}, π={pi}")
    return flat


def unoriented_annular_test(gamma: SignedPermutation, pi: SignedPermutation,
                            points: Iterable[int] | None = None) -> tuple[bool, int | None]:
    """(χ(γ, π) == 2, orientation sign) for a two-cycle γ and π connecting ±V₁ with ±V₂."""
    points = sorted(points) if points is not None else _points_of(gamma, pi)
    cyc = _gamma_cycles(gamma, points)
    if len(cyc) != 2:
        raise ValueError("γ must have exactly two cycles")
    outer, inner = set(cyc[0]), set(cyc[1])
    if not connects(pi, signed_domain(outer), signed_domain(inner)):
        raise ValueError("π must connect ±V₁ with ±V₂")
    flat = euler_characteristic(gamma, pi, points).chi == 2
    sign = None
    vertex = compose(gamma, mirror(gamma).inverse())
    for eps in (1, -1):
        side = outer | {eps * k for k in inner}
        other = {-k for k in side}
        if connects(pi, side, other):
            continue
        if is_annular_noncrossing(restrict(vertex, side), restrict(pi, side), side):
            sign = eps
            break
    if flat != (sign is not None):
        raise AssertionError(f"χ test and separation test disagree for γ={gamma}, π={pi}")
    return flat, sign


# --------------------------------------------------------------------------
# Enumeration


def pairings_array(n_points: int) -> np.ndarray:
    """All fixed-point-free involutions of ``range(n_points)`` as rows, in a fixed order."""
    if n_points % 2:
        return np.zeros((0, n_points), dtype=np.int32)
    if n_points == 0:
        return np.zeros((1, 0), dtype=np.int32)
    sub = pairings_array(n_points - 2)
    blocks = []
    for partner in range(1, n_points):
        rest = np.array([k for k in range(1, n_points) if k != partner], dtype=np.int32)
        out = np.empty((len(sub), n_points), dtype=np.int32)
        out[:, 0] = partner
        out[:, partner] = 0
        out[:, rest] = rest[sub]
        blocks.append(out)
    return np.concatenate(blocks)


def _negation_index(m: int) -> np.ndarray:
    return np.concatenate([np.arange(m, 2 * m), np.arange(0, m)]).astype(np.int32)


def class_array(kind: DiagramClass, m: int, max_members: int = 3_000_000) -> np.ndarray:
    """Members of a premap class on ±[m] as rows in the local encoding."""
    size = class_size(kind, m)
    if size > max_members:
        raise GuardExceeded(f"{kind.value} on ±[{m}]", size, max_members)
    if kind is DiagramClass.ALL_PREMAPS:
        # π is a premap iff δπ is a fixed-point-free involution of ±I
        return _negation_index(m)[pairings_array(2 * m)]
    rho = pairings_array(m)
    if kind is DiagramClass.GINIBRE:
        out = np.empty((len(rho), 2 * m), dtype=np.int32)
        out[:, :m] = rho + m
        out[:, m:] = rho
        return out
    rows = []
    for r in rho:
        pairs = [(a, int(r[a])) for a in range(m) if a < r[a]]
        for signs in itertools.product((1, -1), repeat=len(pairs)):
            row = np.empty(2 * m, dtype=np.int32)
            for (a, b), s in zip(pairs, signs):
                if s > 0:
                    row[a], row[b], row[m + a], row[m + b] = b, a, m + b, m + a
                else:
                    row[a], row[b], row[m + a], row[m + b] = m + b, m + a, b, a
            rows.append(row)
    return np.array(rows, dtype=np.int32).reshape(-1, 2 * m)


def local_point(index: int, points: Sequence[int]) -> int:
    m = len(points)
    return points[index] if index < m else -points[index - m]


def array_to_perm(row: Sequence[int], points: Sequence[int]) -> SignedPermutation:
    return SignedPermutation({local_point(i, points): local_point(int(t), points)
                              for i, t in enumerate(row)})


def perm_to_array(p: SignedPermutation, points: Sequence[int]) -> np.ndarray:
    m = len(points)
    where = {k: i for i, k in enumerate(points)}
    where.update({-k: m + i for i, k in enumerate(points)})
    return np.array([where[p(local_point(i, points))] for i in range(2 * m)], dtype=np.int32)


def enumerate_class(kind: DiagramClass | str, points: Iterable[int] | int,
                    max_points: int = 12, max_members: int = 3_000_000) -> list[SignedPermutation]:
    """Every member of the class on ±points once, sorted by canonical cycle notation."""
    kind = DiagramClass(kind)
    points = list(range(1, points + 1)) if isinstance(points, int) else sorted(points)
    if len(points) > max_points:
        raise GuardExceeded(f"{kind.value} on {len(points)} points",
                            class_size(kind, len(points)), max_members)
    rows = class_array(kind, len(points), max_members)
    members = [array_to_perm(r, points) for r in rows]
    members.sort(key=SignedPermutation.sort_key)
    return members


def in_class(kind: DiagramClass, p: SignedPermutation, points: Iterable[int]) -> bool:
    points = list(points)
    if not is_premap(p, points):
        return False
    if kind is DiagramClass.ALL_PREMAPS:
        return True
    dom = signed_domain(points)
    if any(p(p(k)) != k or p(k) == k for k in dom):
        return False
    if kind is DiagramClass.PAIRING_PREMAPS:
        return True
    return all((p(k) > 0) != (k > 0) for k in dom)


def _array_cycles(arr: Sequence[int]) -> int:
    seen = [False] * len(arr)
    count = 0
    for s in range(len(arr)):
        if not seen[s]:
            count += 1
            x = s
            while not seen[x]:
                seen[x] = True
                x = arr[x]
    return count


def _candidates(n: int, pairings_only: bool, limit: int) -> Iterator[tuple[int, ...]]:
    if pairings_only:
        size = double_factorial(n - 1) if n % 2 == 0 else 0
        if size > limit:
            raise GuardExceeded(f"pairings of {n} points", size, limit)
        for row in pairings_array(n):
            yield tuple(int(x) for x in row)
    else:
        if factorial(n) > limit:
            raise GuardExceeded(f"permutations of {n} points", factorial(n), limit)
        yield from itertools.permutations(range(n))


def _nc_members(gamma: SignedPermutation, points: Sequence[int], target: int, connected: bool,
                pairings_only: bool, limit: int) -> list[SignedPermutation]:
    where = {k: i for i, k in enumerate(points)}
    g = [where[gamma(k)] for k in points]
    first_orbit = set()
    x = 0
    while x not in first_orbit:
        first_orbit.add(x)
        x = g[x]
    found = []
    for cand in _candidates(len(points), pairings_only, limit):
        if connected and not any(cand[i] not in first_orbit for i in first_orbit):
            continue
        pg = [cand[g[i]] for i in range(len(points))]
        if _array_cycles(cand) + _array_cycles(pg) == target:
            found.append(SignedPermutation({points[i]: points[cand[i]] for i in range(len(points))}))
    found.sort(key=SignedPermutation.sort_key)
    return found


def enumerate_disc_nc(gamma: SignedPermutation, points: Iterable[int] | None = None,
                      pairings_only: bool = False, limit: int = 400_000) -> list[SignedPermutation]:
    """Disc-noncrossing permutations relative to a one-cycle γ (optionally only pairings)."""
    points = sorted(points) if points is not None else _points_of(gamma)
    if len(_gamma_cycles(gamma, points)) != 1:
        raise ValueError("γ must have exactly one cycle")
    return _nc_members(gamma, points, len(points) + 1, False, pairings_only, limit)


def enumerate_ann_nc(gamma: SignedPermutation, points: Iterable[int] | None = None,
                     pairings_only: bool = False, limit: int = 400_000) -> list[SignedPermutation]:
    """Connected annular-noncrossing permutations relative to a two-cycle γ."""
    points = sorted(points, key=lambda k: (abs(k), k < 0)) if points is not None else _points_of(gamma)
    if len(_gamma_cycles(gamma, points)) != 2:
        raise ValueError("γ must have exactly two cycles")
    return _nc_members(gamma, points, len(points), True, pairings_only, limit)


def row_cycle_counts(rows: np.ndarray) -> np.ndarray:
    return kernels.row_cycle_counts(rows)
