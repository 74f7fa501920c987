import itertools

from hypothesis import given, settings
from hypothesis import strategies as st
import pytest

from realfree.diagrams import (
    Crossing,
    DiagramClass,
    GuardExceeded,
    catalan,
    class_array,
    class_size,
    classify_annular,
    classify_disc,
    double_factorial,
    enumerate_ann_nc,
    enumerate_class,
    enumerate_disc_nc,
    euler_characteristic,
    geodesic_defect,
    in_class,
    unoriented_annular_test,
    unoriented_disc_test,
)
from realfree.perm import SignedPermutation, is_premap, mirror
from strategies import permutations_of, premaps

P = SignedPermutation.parse
ALL, PAIRS, GIN = DiagramClass.ALL_PREMAPS, DiagramClass.PAIRING_PREMAPS, DiagramClass.GINIBRE


def test_euler_characteristic_examples():
    data = euler_characteristic(P("(1,2,3)(4,5)"), P("(1,-3,4)(-4,3,-1)(2,-5)(5,-2)"))
    assert (data.chi, data.vertex_half, data.premap_half, data.face_half) == (0, 2, 2, 1)
    assert euler_characteristic(P("(1,2)"), P("(1,2)(-1,-2)")).chi == 2
    assert euler_characteristic(SignedPermutation(), SignedPermutation(), [1]).chi == 2
    with pytest.raises(ValueError):
        euler_characteristic(P("(1,2)"), P("(1,2)"))


@given(premaps(4), premaps(4), st.data())
def test_euler_characteristic_adds_over_disjoint_supports(a, b, data):
    (p1, n1), (p2, n2) = a, b
    g1 = data.draw(permutations_of(range(1, n1 + 1)))
    g2 = data.draw(permutations_of(range(1, n2 + 1)))
    shift = lambda p: SignedPermutation(  # noqa: E731
        {(k + n1 if k > 0 else k - n1): (v + n1 if v > 0 else v - n1) for k, v in p.as_dict().items()})
    joint = euler_characteristic(g1 * shift(g2), p1 * shift(p2), range(1, n1 + n2 + 1)).chi
    assert joint == (euler_characteristic(g1, p1, range(1, n1 + 1)).chi
                     + euler_characteristic(g2, p2, range(1, n2 + 1)).chi)


def test_geodesic_examples():
    e = SignedPermutation()
    assert geodesic_defect(e, e, [1, 2, 3]) == 0
    assert geodesic_defect(P("(1,2,3)"), P("(1,3,2)"), [1, 2, 3]) == 0
    assert geodesic_defect(P("(1,2,3)"), P("(1,2,3)"), [1, 2, 3]) == 2


def test_geodesic_defect_even_exhaustive():
    for n in range(1, 5):
        perms = [SignedPermutation(dict(zip(range(1, n + 1), img)))
                 for img in itertools.permutations(range(1, n + 1))]
        for p in perms:
            for q in perms:
                d = geodesic_defect(p, q, range(1, n + 1))
                assert d >= 0 and d % 2 == 0


@settings(max_examples=300)
@given(st.integers(5, 9).flatmap(
    lambda n: st.tuples(permutations_of(range(1, n + 1)), permutations_of(range(1, n + 1)))))
def test_geodesic_defect_even_random(pq):
    p, q = pq
    d = geodesic_defect(p, q, p.support | q.support | {1})
    assert d >= 0 and d % 2 == 0


def test_classify_disc_examples():
    g = P("(1,2,3)")
    assert classify_disc(g, SignedPermutation(), [1, 2, 3]) is Crossing.NONCROSSING
    assert classify_disc(g, P("(1,2,3)")) is Crossing.NONSTANDARD
    assert classify_disc(g, P("(1,3,2)")) is Crossing.NONCROSSING
    assert classify_disc(P("(1,2,3,4)"), P("(1,3)(2,4)")) is Crossing.CROSSING
    with pytest.raises(ValueError):
        classify_disc(P("(1,2)(3,4)"), P("(1,3)"))


def test_classify_annular_examples():
    g = P("(1,2)(3,4)")
    assert classify_annular(g, P("(1,3)(2,4)")) is Crossing.NONCROSSING
    assert classify_annular(g, P("(1,3,2,4)")) is Crossing.NONSTANDARD
    g6 = P("(1,2,3)(4,5,6)")
    assert classify_annular(g6, P("(1,4)(2,5)(3,6)")) is Crossing.CROSSING
    # one face only after flipping the inner order: the reflected pairing is noncrossing
    assert classify_annular(g6, P("(1,4)(2,6)(3,5)")) is Crossing.NONCROSSING
    with pytest.raises(ValueError):
        classify_annular(g, P("(1,2)"))


def test_classify_annular_singleton_cycle_uses_counts():
    g = SignedPermutation.from_cycles([1, 2, 3])
    pts = [1, 2, 3, 4]
    assert classify_annular(g, P("(1,4)"), pts) is Crossing.NONCROSSING
    assert classify_annular(g, P("(1,2,3,4)"), pts) is Crossing.CROSSING


def test_unoriented_examples():
    assert unoriented_disc_test(P("(1,2)"), P("(1,2)(-1,-2)"))
    assert not unoriented_disc_test(P("(1,2)"), P("(1,-2)(-1,2)"))
    assert euler_characteristic(P("(1,2)"), P("(1,-2)(-1,2)")).chi == 1
    assert unoriented_disc_test(SignedPermutation(), SignedPermutation(), [1])
    e = SignedPermutation()
    assert unoriented_annular_test(e, P("(1,2)(-1,-2)"), [1, 2]) == (True, 1)
    assert unoriented_annular_test(e, P("(1,-2)(-1,2)"), [1, 2]) == (True, -1)


def test_unoriented_annular_rejects_crossing_premap():
    g = P("(1,2)(3,4)")
    # any connecting member of the class with χ < 2 will do
    found = None
    for pi in enumerate_class(ALL, 4):
        ok, sign = _try_unoriented(g, pi)
        if ok is False:
            found = (pi, sign)
            break
    assert found is not None and found[1] is None
    assert euler_characteristic(g, found[0]).chi < 2


def _try_unoriented(g, pi):
    try:
        return unoriented_annular_test(g, pi, [1, 2, 3, 4])
    except ValueError:
        return None, None


def test_class_members_n2():
    assert enumerate_class(ALL, 2) == [SignedPermutation(), P("(1,2)(-1,-2)"), P("(1,-2)(-1,2)")]
    assert enumerate_class(PAIRS, 2) == [P("(1,2)(-1,-2)"), P("(1,-2)(-1,2)")]
    assert enumerate_class(GIN, 2) == [P("(1,-2)(-1,2)")]


@pytest.mark.parametrize("n", range(1, 9))
def test_class_counts(n):
    assert class_size(ALL, n) == double_factorial(2 * n - 1)
    expected_pairs = double_factorial(n - 1) * 2 ** (n // 2) if n % 2 == 0 else 0
    expected_gin = double_factorial(n - 1) if n % 2 == 0 else 0
    assert class_size(PAIRS, n) == expected_pairs
    assert class_size(GIN, n) == expected_gin
    for kind, size in ((PAIRS, expected_pairs), (GIN, expected_gin)):
        assert len(class_array(kind, n)) == size
    if n <= 7:
        rows = class_array(ALL, n)
        assert len(rows) == double_factorial(2 * n - 1)
        assert len({r.tobytes() for r in rows}) == len(rows)


@pytest.mark.parametrize("n", range(1, 5))
def test_class_members_are_valid_and_distinct(n):
    for kind in DiagramClass:
        members = enumerate_class(kind, n)
        assert len(set(members)) == len(members)
        assert all(is_premap(p, range(1, n + 1)) and in_class(kind, p, range(1, n + 1)) for p in members)


def test_ginibre_class_is_rho_delta_rho():
    n = 4
    for p in enumerate_class(GIN, n):
        # ρδρ with ρ the pairing read off the positive points
        rho = SignedPermutation({k: abs(p(k)) for k in range(1, n + 1)})
        assert p == rho * SignedPermutation({k: -k for k in range(-n, n + 1) if k}) * rho


def _theta(sign, k):
    """θ₊: k ↦ 2k, θ₋: k ↦ 2k-1, extended as odd functions."""
    v = 2 * abs(k) if sign > 0 else 2 * abs(k) - 1
    return v if k > 0 else -v


@pytest.mark.parametrize("n", range(1, 6))
def test_literal_theta_construction_is_a_bijection_onto_pairings(n):
    """Build the pairing of [2n] attached to each premap by the θ± recipe and check it is a bijection."""
    seen = set()
    for pi in enumerate_class(ALL, n):
        inv = pi.inverse()
        rho = {}
        for k in range(1, n + 1):
            a, b = inv(k), pi(k)
            rho[_theta(1, k)] = abs(_theta(-1 if a > 0 else 1, a))
            rho[_theta(-1, k)] = abs(_theta(1 if b > 0 else -1, b))
        assert sorted(rho) == list(range(1, 2 * n + 1))
        assert all(rho[x] != x and rho[rho[x]] == x for x in rho)
        seen.add(tuple(sorted(rho.items())))
    assert len(seen) == double_factorial(2 * n - 1)


def test_enumerate_guard():
    with pytest.raises(GuardExceeded):
        enumerate_class(ALL, 13)
    with pytest.raises(GuardExceeded):
        enumerate_disc_nc(SignedPermutation.from_cycles(list(range(1, 11))), limit=1000)


def test_disc_nc_examples():
    assert enumerate_disc_nc(P("(1,2,3)")) == [SignedPermutation(), P("(1,2)"), P("(1,3)"),
                                               P("(1,3,2)"), P("(2,3)")]
    assert enumerate_disc_nc(P("(1,2)")) == [SignedPermutation(), P("(1,2)")]
    assert enumerate_ann_nc(SignedPermutation(), [1, 2]) == [P("(1,2)")]


@pytest.mark.parametrize("n", range(1, 8))
def test_disc_nc_counts(n):
    gamma = SignedPermutation.from_cycles(list(range(1, n + 1)))
    assert len(enumerate_disc_nc(gamma, range(1, n + 1))) == catalan(n)


@pytest.mark.parametrize("n", range(1, 9))
def test_noncrossing_pairings_count(n):
    gamma = SignedPermutation.from_cycles(list(range(1, n + 1)))
    expected = catalan(n // 2) if n % 2 == 0 else 0
    assert len(enumerate_disc_nc(gamma, range(1, n + 1), pairings_only=True)) == expected


def test_mirror_of_class_member_is_its_inverse():
    for p in enumerate_class(ALL, 3):
        assert mirror(p) == p.inverse()
