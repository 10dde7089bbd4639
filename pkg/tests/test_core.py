import itertools
import random

import pytest
from hypothesis import given, settings, strategies as st

from synctiles.core import (
    Assembly, Glue, NULL_GLUE, OccupiedLocationError, Shape, SystemDef,
    TileSet, binding_strength, candidates_at, frontier, glues_interact,
    is_tau_stable, scale_shape, shape_of, shapes_equal, tile,
)


def brute_force_min_cut(asm: Assembly) -> int | None:
    """Oracle: minimum over all nontrivial bipartitions of crossing weight."""
    g = asm.binding_graph()
    nodes = list(g.nodes)
    if len(nodes) < 2:
        return None
    best = None
    rest = nodes[1:]
    for r in range(len(rest) + 1):
        for combo in itertools.combinations(rest, r):
            side = {nodes[0], *combo}
            if len(side) == len(nodes):
                continue
            w = sum(d["weight"] for u, v, d in g.edges(data=True)
                    if (u in side) != (v in side))
            best = w if best is None else min(best, w)
    return best


def per_side_strength_oracle(asm: Assembly, loc, t) -> int:
    """Oracle: enumerate the four sides explicitly."""
    x, y = loc
    total = 0
    for d, (dx, dy), opp in (("N", (0, 1), "S"), ("E", (1, 0), "W"),
                             ("S", (0, -1), "N"), ("W", (-1, 0), "E")):
        nb = asm.get((x + dx, y + dy))
        if nb is not None:
            a = t.glue(d)
            b = nb.glue(opp)
            if a.strength > 0 and a == b:
                total += a.strength
    return total


def test_glue_invariants():
    assert NULL_GLUE.is_null
    with pytest.raises(ValueError):
        Glue("x", 0)
    with pytest.raises(ValueError):
        Glue("", 1)
    assert glues_interact(Glue("g", 2), Glue("g", 2)) == 2
    assert glues_interact(Glue("g", 2), Glue("g", 1)) == 0
    assert glues_interact(NULL_GLUE, NULL_GLUE) == 0


def test_binding_strength_null_glues():
    a = tile("A")
    ts = TileSet([a])
    asm = Assembly({(0, 0): a})
    assert binding_strength(asm, (0, 1), a) == 0


def test_binding_strength_single_bond():
    a = tile("A", north=Glue("g", 2))
    t = tile("T", south=Glue("g", 2))
    asm = Assembly({(0, 0): a})
    assert binding_strength(asm, (0, 1), t) == 2
    assert per_side_strength_oracle(asm, (0, 1), t) == 2


def test_binding_strength_two_bonds():
    a = tile("A", east=Glue("a", 1))
    b = tile("B", west=Glue("b", 1))
    t = tile("T", west=Glue("a", 1), east=Glue("b", 1))
    asm = Assembly({(0, 0): a, (2, 0): b}, check=False)  # bare configuration
    expected = per_side_strength_oracle(asm, (1, 0), t)
    assert expected == 2
    assert binding_strength(asm, (1, 0), t) == expected


def test_binding_strength_occupied():
    a = tile("A")
    asm = Assembly({(0, 0): a})
    with pytest.raises(OccupiedLocationError):
        binding_strength(asm, (0, 0), a)


def test_tau_stable_single_tile():
    asm = Assembly({(0, 0): tile("A")})
    assert is_tau_stable(asm, 2)


def test_tau_stable_weak_bond():
    a = tile("A", east=Glue("g", 1))
    b = tile("B", west=Glue("g", 1))
    asm = Assembly({(0, 0): a, (1, 0): b})
    assert brute_force_min_cut(asm) == 1
    assert not is_tau_stable(asm, 2)
    assert is_tau_stable(asm, 1)


def test_tau_stable_square():
    # 2x2 square, each of the 4 boundary bonds strength 1
    h = Glue("h", 1)
    v = Glue("v", 1)
    sw = tile("sw", north=v, east=h)
    se = tile("se", north=v, west=h)
    nw = tile("nw", south=v, east=h)
    ne = tile("ne", south=v, west=h)
    asm = Assembly({(0, 0): sw, (1, 0): se, (0, 1): nw, (1, 1): ne})
    assert brute_force_min_cut(asm) == 2
    assert is_tau_stable(asm, 2)
    assert not is_tau_stable(asm, 3)


def test_frontier_cooperative_threshold():
    # t needs its north ("n",1) and east ("e",1) inputs together at tau 2
    nt = tile("N", south=Glue("n", 1), east=Glue("x", 1))
    ct = tile("C", west=Glue("x", 1), south=Glue("y", 1))
    et = tile("E", north=Glue("y", 1), west=Glue("e", 1))
    t = tile("t", north=Glue("n", 1), east=Glue("e", 1))
    ts = TileSet([nt, ct, et, t])
    partial = Assembly({(0, 1): nt, (1, 1): ct})
    sys = SystemDef(ts, partial, temperature=2, synchronicity=1,
                    name="coop", check_seed=False)
    assert candidates_at(sys, partial, (0, 0)) == ()
    full = partial.copy()
    full.place((1, 0), et)
    assert [c.name for c in candidates_at(sys, full, (0, 0))] == ["t"]
    assert (0, 0) in frontier(sys, full)


def test_frontier_terminal_and_stability():
    a = tile("A")
    ts = TileSet([a])
    seed = Assembly({(0, 0): a})
    sys = SystemDef(ts, seed, temperature=2, synchronicity=1, name="t")
    assert frontier(sys, seed) == {}


def test_frontier_results_are_stable_and_empty():
    from synctiles.zoo import flagpole_atam
    sys = flagpole_atam().system
    asm = sys.seed.copy()
    for _ in range(6):
        fr = frontier(sys, asm)
        if not fr:
            break
        for loc, cands in fr.items():
            assert loc not in asm
            for c in cands:
                nxt = asm.copy()
                nxt.place(loc, c)
                assert is_tau_stable(nxt, sys.temperature)
        loc, cands = sorted(fr.items(), key=lambda kv: (kv[0][1], kv[0][0]))[0]
        asm.place(loc, cands[0])


def test_flagpole_seed_frontier():
    from synctiles.zoo import flagpole_atam
    sys = flagpole_atam().system
    fr = frontier(sys, sys.seed)
    assert set(fr) == {(0, 1), (0, -1)}


# ---------------------------------------------------------------------------
# shapes


def random_polyomino(rng: random.Random, n: int) -> set:
    cells = {(0, 0)}
    while len(cells) < n:
        x, y = rng.choice(sorted(cells))
        dx, dy = rng.choice([(0, 1), (1, 0), (0, -1), (-1, 0)])
        cells.add((x + dx, y + dy))
    return cells


def test_shapes_points_and_rotation():
    assert shapes_equal(Shape.of({(5, 5)}), Shape.of({(-3, 7)}))
    assert not shapes_equal(Shape.of({(0, 0), (1, 0)}), Shape.of({(0, 0), (0, 1)}))


def test_shape_translation_round_trip():
    rng = random.Random(7)
    poly = random_polyomino(rng, 100)
    moved = {(x + 17, y - 4) for x, y in poly}
    assert shapes_equal(Shape.of(poly), Shape.of(moved))


def test_shapes_equal_is_equivalence():
    rng = random.Random(3)
    polys = [random_polyomino(rng, rng.randrange(1, 15)) for _ in range(12)]
    shapes = [Shape.of(p) for p in polys]
    for a in shapes:
        assert shapes_equal(a, a)
    for a in polys:
        for off in [(0, 0), (5, -2), (-9, 11)]:
            s1 = Shape.of(a)
            s2 = Shape.of({(x + off[0], y + off[1]) for x, y in a})
            assert shapes_equal(s1, s2) and shapes_equal(s2, s1)
    for a, b, c in zip(shapes, shapes[1:], shapes[2:]):
        if shapes_equal(a, b) and shapes_equal(b, c):
            assert shapes_equal(a, c)


def test_scale_shape_identity_and_unit():
    s = Shape.of({(0, 0), (1, 0), (2, 0), (2, 1)})
    assert shapes_equal(scale_shape(s, 1), s)
    assert scale_shape(Shape.of({(0, 0)}), 2).points == frozenset(
        {(0, 0), (1, 0), (0, 1), (1, 1)})
    with pytest.raises(ValueError):
        scale_shape(s, 0)


def test_scale_shape_cardinality_tromino():
    s = Shape.of({(0, 0), (1, 0), (1, 1)})
    scaled = scale_shape(s, 3)
    assert len(scaled) == 9 * len(s) == 27


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 4), st.integers(1, 4), st.integers(0, 10**6))
def test_scale_shape_composition(c, d, seed):
    rng = random.Random(seed)
    s = Shape.of(random_polyomino(rng, rng.randrange(1, 21)))
    assert shapes_equal(scale_shape(scale_shape(s, c), d), scale_shape(s, c * d))


def test_shape_of_assembly():
    a = tile("A", east=Glue("g", 1))
    b = tile("B", west=Glue("g", 1))
    asm = Assembly({(4, 4): a, (5, 4): b})
    assert shapes_equal(shape_of(asm), Shape.of({(0, 0), (1, 0)}))
