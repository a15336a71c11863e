"""Level arithmetic: windows, image orders, level maps, unit filtrations.

Oracles: direct enumeration of lattice-slice characters over Z/p^K and of
truncated principal-unit groups.
"""

from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from forge.depthcalc import (
    FilteredLattice,
    LevelMap,
    character_image_order,
    character_image_order_value,
    combine_product,
    factor_level_map,
    level_window,
    torus_power_filtration,
    unramified_torus_lattice,
)

F = Fraction


# ---------------------------------------------------------------------------
# windows
# ---------------------------------------------------------------------------


def test_level_window_examples():
    w = level_window(1, 1)
    assert w.n == 1 and w.window == (F(1), F(2))
    w = level_window(1, 2)
    assert w.n == 3 and w.window == (F(3), F(4))
    w = level_window(2, 1)
    assert w.n == 3 and w.window == (F(3), F(4))
    assert w.contains(F(7, 2)) and w.contains(F(4)) and not w.contains(F(3))


def test_lattice_jump_translation_invariance():
    lat = FilteredLattice(2, 1, (F(0), F(1, 3)))
    lo, hi = F(1, 2), F(7, 2)
    shifted = [s + 1 for s in lat.jumps_in(lo, hi)]
    assert shifted == lat.jumps_in(lo + 1, hi + 1)


# ---------------------------------------------------------------------------
# character image order: formula vs direct enumeration over Q_p
# ---------------------------------------------------------------------------


def order_oracle_qp(r: int, p: int) -> int:
    """Direct enumeration for Q_p, integer jumps: the subgroup of roots of
    unity hit by v -> exp(2 pi i frac(v/p)) pairing a depth-r functional
    against the slice (r/2, r]."""
    s_min = r // 2 + 1
    s_top = r + 1
    best = 0
    for s in range(s_min, s_top + 1):
        if s > r:
            break
        # a unit vector at jump s pairs to valuation s - r
        t = r - s
        # order of psi on p^-t Z_p / ker: p^(t+1)
        best = max(best, t + 1)
    return best


def test_character_image_order_matches_enumeration_qp():
    lat = unramified_torus_lattice(1, 1)
    for r in range(1, 12):
        assert character_image_order(F(r), lat) == order_oracle_qp(r, 5)


def test_character_image_order_window_values():
    for e_F in (1, 2, 3):
        lat = unramified_torus_lattice(1, e_F)
        for m in (1, 2, 3, 4):
            n = 2 * e_F * m - 1
            assert character_image_order(F(n) + F(1, 2), lat) == m
            assert character_image_order(F(n + 1), lat) == m
            if m >= 2:
                # one full level-window unit lower: the (m-1)-window
                assert character_image_order(F(n) + F(1, 2) - 2 * e_F, lat) == m - 1
                assert character_image_order(F(n + 1) - 2 * e_F, lat) == m - 1
    # for the absolutely unramified line, dropping r by a single unit from
    # the window interior already lowers the order one step
    lat = unramified_torus_lattice(1, 1)
    for m in (2, 3, 4):
        n = 2 * m - 1
        assert character_image_order(F(n) + F(1, 2) - 1, lat) == m - 1


def test_character_image_order_offset_lattices():
    for e_F in (1, 2, 3):
        for off in (F(1, 2), F(1, 3), F(2, 3), F(1, 4)):
            lat = FilteredLattice(1, e_F, (off,))
            for m in (1, 2, 3, 4):
                n = 2 * e_F * m - 1
                r = F(n) + off  # the torus jump inside the window
                assert character_image_order(r, lat) == m
                if m >= 2:
                    assert character_image_order(r - 2 * e_F, lat) == m - 1


def test_character_image_order_empty_slice():
    lat = FilteredLattice(1, 1, (F(1, 2),))
    # r = 3/5: slice (3/10, 3/5] contains the jump 1/2; r = 2/5 does not
    assert character_image_order(F(3, 5), lat) == 1
    assert character_image_order(F(2, 5), lat) == 0
    assert character_image_order_value(F(2, 5), lat, 7) == 1


@given(st.integers(1, 3), st.integers(1, 40))
def test_character_image_order_monotone(e_F, steps):
    lat = unramified_torus_lattice(1, e_F)
    grid = [F(k, 4) for k in range(1, steps + 1)]
    vals = [character_image_order(r, lat) for r in grid]
    assert all(a <= b for a, b in zip(vals, vals[1:]))


# ---------------------------------------------------------------------------
# factor_level_map
# ---------------------------------------------------------------------------


def enumerate_level_map(lm: LevelMap) -> set[int]:
    """Oracle: the full image subgroup by enumerating generator combinations."""
    mod = lm.p**lm.m
    image = {0}
    for img in lm.images:
        image = {(a + k * img) % mod for a in image for k in range(mod)}
    return image


def test_factor_level_map_m1_rank1():
    lat = unramified_torus_lattice(1, 1)
    lm = factor_level_map(2, lat, 1, [1], 5)
    assert lm.surjective
    assert enumerate_level_map(lm) == set(range(5))


def test_factor_level_map_m2_p3():
    lat = unramified_torus_lattice(1, 1)
    lm = factor_level_map(4, lat, 2, [2], 3)
    assert lm.surjective
    assert enumerate_level_map(lm) == set(range(9))
    # kernel index = image size = p^2
    assert len(enumerate_level_map(lm)) == 9


def test_factor_level_map_zero_functional_errors():
    lat = unramified_torus_lattice(2, 1)
    with pytest.raises(ValueError):
        factor_level_map(4, lat, 2, [0, 0], 3)
    with pytest.raises(ValueError):
        factor_level_map(4, lat, 2, [3, 9], 3)  # no unit coordinate
    with pytest.raises(ValueError):
        factor_level_map(2, lat, 2, [1, 1], 3)  # r=2 carries order p, not p^2


def test_factor_level_map_round_trip_character_order():
    # composing with any embedding of Z/p^m into the circle reproduces a
    # character of full order: image subgroup has exact size p^m
    lat = unramified_torus_lattice(3, 1)
    lm = factor_level_map(4, lat, 2, [1, 3, 5], 5)
    assert len(enumerate_level_map(lm)) == 25


# ---------------------------------------------------------------------------
# combine_product
# ---------------------------------------------------------------------------


def make_map(p, m, images, orders=None):
    orders = orders or tuple(p**m for _ in images)
    return LevelMap(p, m, tuple(f"g{i}" for i in range(len(images))), tuple(images), tuple(orders), "test")


def test_combine_single_and_two_surjections():
    a = make_map(3, 2, (1,))
    assert combine_product([a]).images == a.images
    b = make_map(3, 2, (4,))
    c = combine_product([a, b])
    assert c.surjective
    assert enumerate_level_map(c) == set(range(9))


def test_combine_surjection_plus_zero():
    a = make_map(3, 2, (1,))
    z = make_map(3, 2, (0, 0))
    c = combine_product([z, a])
    assert c.surjective
    assert enumerate_level_map(c) == set(range(9))


def test_combine_nonsurjective_stack():
    a = make_map(3, 2, (3,))
    b = make_map(3, 2, (6,))
    c = combine_product([a, b])
    assert not c.surjective
    assert enumerate_level_map(c) == {0, 3, 6}


def test_combine_target_mismatch():
    with pytest.raises(ValueError):
        combine_product([make_map(3, 2, (1,)), make_map(3, 1, (1,))])


def test_combine_associative_commutative():
    maps = [make_map(5, 1, (2,)), make_map(5, 1, (0,)), make_map(5, 1, (3,))]
    left = combine_product([combine_product(maps[:2]), maps[2]])
    right = combine_product([maps[0], combine_product(maps[1:])])
    flat = combine_product(maps)
    assert (
        sorted(left.images) == sorted(right.images) == sorted(flat.images)
    )
    assert left.surjective == right.surjective == flat.surjective


# ---------------------------------------------------------------------------
# torus power filtration vs enumeration oracle
# ---------------------------------------------------------------------------


def unit_group_oracle(p, K, m):
    """Enumerate (1+pZ)/(1+p^K Z), its p-power filtration, and check that the
    m-th step maps onto Z/p^m inside U_m/U_2m."""
    mod = p**K
    units = sorted({(1 + p * t) % mod for t in range(mod // p)})
    level = set(units)
    levels = [set(level)]
    for _ in range(2 * m):
        level = {pow(u, p, mod) for u in level}
        levels.append(set(level))
    return levels


def test_torus_filtration_q5_m1_K3():
    lm = torus_power_filtration(5, 1, 1, 3)
    assert lm.p == 5 and lm.m == 1
    assert lm.surjective
    assert enumerate_level_map(lm) == set(range(5))
    # oracle: the filtration steps are exactly 1 + 5^i Z mod 125
    levels = unit_group_oracle(5, 3, 1)
    assert levels[1] == {(1 + 25 * t) % 125 for t in range(5)}


def test_torus_filtration_q5_m2_K4():
    lm = torus_power_filtration(5, 1, 2, 4)
    assert lm.m == 2 and lm.surjective
    assert enumerate_level_map(lm) == set(range(25))
    # oracle: after k p-power steps the filtration is exactly 1 + p^(k+1) Z
    levels = unit_group_oracle(5, 4, 2)
    for k in (0, 1, 2, 3):
        expect = {(1 + 5 ** (k + 1) * t) % 5**4 for t in range(5 ** (3 - k))}
        assert levels[k] == expect


def test_torus_filtration_precision_guard():
    with pytest.raises(ValueError):
        torus_power_filtration(5, 1, 2, 3)
    with pytest.raises(ValueError):
        torus_power_filtration(5, 1, 1, 2)


def test_torus_filtration_p2_documented_support():
    lm = torus_power_filtration(2, 1, 1, 4)
    assert lm.surjective
    with pytest.raises(ValueError):
        torus_power_filtration(4, 1, 1, 6)
    with pytest.raises(ValueError):
        torus_power_filtration(2, 2, 1, 6)


def test_torus_filtration_residue_extension_and_ramified():
    lm = torus_power_filtration(25, 1, 1, 3)  # q = 25 unramified
    assert lm.surjective
    lm = torus_power_filtration(5, 2, 1, 3)  # e = 2 tame
    assert lm.surjective
    lm = torus_power_filtration(7, 3, 1, 3)  # e = 3 tame
    assert lm.surjective


def test_torus_filtration_oracle_small_ramified():
    """Exhaustive oracle for e = 2: squares etc. inside Z[x]/(x^2-p, p^K)."""
    p, K, m = 5, 3, 1
    lm = torus_power_filtration(p, 2, m, K)
    # group (1 + pi O)/(1 + pi^(2K) O): enumerate and check the map is a
    # homomorphism onto Z/p by brute force
    mod = p**K
    elems = []
    for a0 in range(0, mod, p):  # coefficient of 1, minus 1: multiples of pi^2 -> p
        for b0 in range(0, mod):  # coefficient of x
            elems.append((1 + a0, b0))

    def mul(u, v):
        (a, b), (c, d) = u, v
        return ((a * c + p * b * d) % mod, (a * d + b * c) % mod)

    def norm_class(u):
        a, b = u
        w = (a * a - p * b * b) % mod
        assert (w - 1) % (p**m) == 0
        return ((w - 1) // p**m) % (p**m)

    image = {norm_class(u) for u in elems}
    assert image == set(range(p))
    for u in elems[:40]:
        for v in elems[:40]:
            assert norm_class(mul(u, v)) == (norm_class(u) + norm_class(v)) % p
