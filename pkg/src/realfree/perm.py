"""Permutations of finite sets of nonzero integers.

Products are read right to left: ``compose(p, q)(k) == p(q(k))``.  Points
that a permutation does not move are left implicit, so any operation whose
answer depends on fixed points (cycle counts, orbits) takes the domain
explicitly.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping, Sequence


def _cycle_key(x: int) -> tuple[int, bool]:
    return (abs(x), x < 0)


class SignedPermutation:
    """Immutable bijection of a finite set of nonzero integers.

    Only moved points are stored; equality and hashing therefore ignore
    the nominal domain.
    """

    __slots__ = ("_map", "_hash")

    def __init__(self, mapping: Mapping[int, int] | None = None):
        moved = {}
        for src, dst in (mapping or {}).items():
            if src == 0 or dst == 0:
                raise ValueError("0 is not a valid point")
            if src != dst:
                moved[int(src)] = int(dst)
        if set(moved.values()) != set(moved) or len(set(moved.values())) != len(moved):
            raise ValueError("mapping is not a bijection of its support")
        self._map = moved
        self._hash = None

    @classmethod
    def identity(cls) -> "SignedPermutation":
        return cls()

    @classmethod
    def from_cycles(cls, *cycles: Sequence[int]) -> "SignedPermutation":
        mapping: dict[int, int] = {}
        for cycle in cycles:
            cycle = [int(x) for x in cycle]
            for i, x in enumerate(cycle):
                if x in mapping:
                    raise ValueError(f"point {x} appears in more than one cycle")
                mapping[x] = cycle[(i + 1) % len(cycle)]
        return cls(mapping)

    @classmethod
    def parse(cls, text: str) -> "SignedPermutation":
        """Read cycle notation such as ``"(1,-3,4)(-4,3,-1)"``; ``"()"`` is the identity."""
        text = text.replace("−", "-").replace(" ", "")
        if not re.fullmatch(r"(\((-?\d+(,-?\d+)*)?\))*", text):
            raise ValueError(f"not cycle notation: {text!r}")
        cycles = [
            [int(tok) for tok in body.split(",")]
            for body in re.findall(r"\(([^()]*)\)", text)
            if body
        ]
        return cls.from_cycles(*cycles)

    def __call__(self, k: int) -> int:
        return self._map.get(k, k)

    @property
    def support(self) -> frozenset[int]:
        return frozenset(self._map)

    def as_dict(self) -> dict[int, int]:
        return dict(self._map)

    def is_identity(self) -> bool:
        return not self._map

    def cycles(self, domain: Iterable[int] | None = None) -> list[tuple[int, ...]]:
        """Canonical cycle list; fixed points are included only for points of ``domain``."""
        points = set(self._map)
        if domain is not None:
            domain = set(domain)
            if not points <= domain:
                raise ValueError("domain does not contain the support")
            points = domain
        seen: set[int] = set()
        out = []
        for start in points:
            if start in seen:
                continue
            cycle = [start]
            seen.add(start)
            x = self(start)
            while x != start:
                cycle.append(x)
                seen.add(x)
                x = self(x)
            lead = min(range(len(cycle)), key=lambda i: _cycle_key(cycle[i]))
            out.append(tuple(cycle[lead:] + cycle[:lead]))
        out.sort(key=lambda c: _cycle_key(c[0]))
        return out

    def inverse(self) -> "SignedPermutation":
        return SignedPermutation({v: k for k, v in self._map.items()})

    def __mul__(self, other: "SignedPermutation") -> "SignedPermutation":
        return compose(self, other)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SignedPermutation):
            return NotImplemented
        return self._map == other._map

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._map.items()))
        return self._hash

    def sort_key(self) -> tuple:
        return tuple(tuple(_cycle_key(x) for x in c) for c in self.cycles())

    def __str__(self) -> str:
        cycles = self.cycles()
        if not cycles:
            return "()"
        return "".join("(" + ",".join(str(x) for x in c) + ")" for c in cycles)

    def __repr__(self) -> str:
        return f"SignedPermutation({str(self)!r})"


def compose(p: SignedPermutation, q: SignedPermutation) -> SignedPermutation:
    """Return ``p ∘ q``, the permutation applying ``q`` first."""
    points = p.support | q.support
    return SignedPermutation({k: p(q(k)) for k in points})


def compose_all(*perms: SignedPermutation) -> SignedPermutation:
    """Product of several permutations, the last one acting first."""
    result = SignedPermutation()
    for p in perms:
        result = compose(result, p)
    return result


def inverse(p: SignedPermutation) -> SignedPermutation:
    return p.inverse()


def cycles(p: SignedPermutation, domain: Iterable[int] | None = None) -> list[tuple[int, ...]]:
    return p.cycles(domain)


def cycle_count(p: SignedPermutation, domain: Iterable[int]) -> int:
    """Number of orbits of ``p`` on ``domain``, fixed points included."""
    domain = set(domain)
    if not p.support <= domain:
        raise ValueError("domain does not contain the support")
    seen: set[int] = set()
    count = len(domain) - len(p.support)
    for start in p.support:
        if start in seen:
            continue
        count += 1
        x = start
        while x not in seen:
            seen.add(x)
            x = p(x)
    return count


def restrict(p: SignedPermutation, subset: Iterable[int]) -> SignedPermutation:
    """Induced permutation: send k to the first later point of its orbit inside ``subset``."""
    subset = set(subset)
    mapping = {}
    for k in subset:
        x = p(k)
        while x not in subset:
            x = p(x)
        mapping[k] = x
    return SignedPermutation(mapping)


def signed_domain(points: Iterable[int]) -> frozenset[int]:
    """The set ±I for a set I."""
    out = set()
    for k in points:
        out.add(k)
        out.add(-k)
    return frozenset(out)


def delta(points: Iterable[int]) -> SignedPermutation:
    """The sign flip k ↦ -k on ±points."""
    return SignedPermutation({k: -k for k in signed_domain(points)})


def mirror(p: SignedPermutation) -> SignedPermutation:
    """δ p δ: the same permutation acting on negated points."""
    return SignedPermutation({-k: -v for k, v in p.as_dict().items()})


def lift_plus(p: SignedPermutation) -> SignedPermutation:
    """p regarded as a permutation of ±I acting trivially on -I."""
    if any(-k in p.support for k in p.support):
        raise ValueError("support contains both k and -k")
    return p


def lift_minus(p: SignedPermutation) -> SignedPermutation:
    return mirror(lift_plus(p))


def is_premap(p: SignedPermutation, points: Iterable[int] | None = None) -> bool:
    """True iff δpδ = p⁻¹ and no cycle of p contains both k and -k."""
    if points is not None and not p.support <= signed_domain(points):
        return False
    if mirror(p) != p.inverse():
        return False
    for c in p.cycles():
        members = set(c)
        if any(-x in members for x in c):
            return False
    return True


def particular_cycle_list(p: SignedPermutation, points: Iterable[int]) -> list[tuple[int, ...]]:
    """Cycles of the premap ``p`` on ±points whose smallest-|k| element is positive."""
    chosen = []
    for c in p.cycles(signed_domain(points)):
        if min(c, key=_cycle_key) > 0:
            chosen.append(c)
    return chosen


def particular_cycles(p: SignedPermutation) -> SignedPermutation:
    if not is_premap(p):
        raise ValueError(f"{p} is not a premap")
    chosen = [c for c in p.cycles() if min(c, key=_cycle_key) > 0]
    return SignedPermutation.from_cycles(*chosen)


def conjugate_premap(gamma: SignedPermutation, pi: SignedPermutation) -> SignedPermutation:
    """γ₋⁻¹ π γ₊ for γ acting on a sign-unambiguous set."""
    return compose_all(mirror(lift_plus(gamma)).inverse(), pi, gamma)


@dataclass(frozen=True)
class SignPattern:
    """Signs attached to positive points, extended evenly to negatives."""

    signs: Mapping[int, int]

    def __post_init__(self):
        for k, s in self.signs.items():
            if k <= 0 or s not in (1, -1):
                raise ValueError("sign pattern maps positive points to ±1")

    @classmethod
    def from_list(cls, signs: Sequence[int]) -> "SignPattern":
        return cls({i + 1: s for i, s in enumerate(signs)})

    def __call__(self, k: int) -> int:
        return self.signs.get(abs(k), 1)


def delta_eps(eps: SignPattern) -> SignedPermutation:
    """k ↦ ε(k)·k; an involution moving only the points with ε = -1."""
    mapping = {}
    for k, s in eps.signs.items():
        if s < 0:
            mapping[k] = -k
            mapping[-k] = k
    return SignedPermutation(mapping)


@dataclass(frozen=True)
class Partition:
    """A set partition of a finite ground set."""

    blocks: frozenset[frozenset[int]]

    def __init__(self, blocks: Iterable[Iterable[int]]):
        frozen = frozenset(frozenset(b) for b in blocks)
        if any(not b for b in frozen):
            raise ValueError("blocks must be nonempty")
        if sum(len(b) for b in frozen) != len(frozenset().union(*frozen)):
            raise ValueError("blocks overlap")
        object.__setattr__(self, "blocks", frozen)

    @property
    def ground(self) -> frozenset[int]:
        return frozenset().union(*self.blocks)

    def __len__(self) -> int:
        return len(self.blocks)

    def block_of(self, k: int) -> frozenset[int]:
        for b in self.blocks:
            if k in b:
                return b
        raise KeyError(k)

    def is_pairing(self) -> bool:
        return all(len(b) == 2 for b in self.blocks)

    def __iter__(self) -> Iterator[frozenset[int]]:
        return iter(sorted(self.blocks, key=lambda b: sorted(b, key=_cycle_key)))


class _UnionFind:
    def __init__(self, points: Iterable[int]):
        self.parent = {k: k for k in points}

    def find(self, k: int) -> int:
        root = k
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[k] != root:
            self.parent[k], k = root, self.parent[k]
        return root

    def union(self, a: int, b: int) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[ra] = rb

    def groups(self) -> list[set[int]]:
        out: dict[int, set[int]] = {}
        for k in self.parent:
            out.setdefault(self.find(k), set()).add(k)
        return list(out.values())


def join(a: Partition, b: Partition) -> Partition:
    if a.ground != b.ground:
        raise ValueError("partitions live on different ground sets")
    uf = _UnionFind(a.ground)
    for part in (a, b):
        for block in part.blocks:
            first, *rest = block
            for k in rest:
                uf.union(first, k)
    return Partition(uf.groups())


def orbits(perms: Iterable[SignedPermutation], domain: Iterable[int]) -> Partition:
    """Orbit partition of ``domain`` under the group generated by ``perms``."""
    domain = set(domain)
    uf = _UnionFind(domain)
    for p in perms:
        if not p.support <= domain:
            raise ValueError("domain does not contain the support")
        for k, v in p.as_dict().items():
            uf.union(k, v)
    return Partition(uf.groups())


def connects(p: SignedPermutation, first: Iterable[int], second: Iterable[int]) -> bool:
    """True iff some orbit of ``p`` meets both sets."""
    first, second = set(first), set(second)
    part = orbits([p], p.support | first | second)
    return any(block & first and block & second for block in part.blocks)
