"""Temperature-1 synchronous system strictly assembling the modified
Sierpinski triangle at scale 3.

Every value-1 macrotile outputs, into each of its north and east
neighbors, a blocker tile on the middle of the shared side plus a path
start in the neighbor's southwest corner.  A corner path first probes the
cell the other input's blocker would occupy: with one input the probe
passes and the path fills the whole 3x3 block (a value-1 macrotile);
with two inputs both probes are blocked and the block is left as a
three-tile stunt (the value-0 macrotile with 1,1 inputs).  Equal path
lengths keep all macrotiles of one diagonal in lockstep, so blockers
always land one step before the corner they must beat.
"""

from __future__ import annotations

import math

from ..core import Assembly, Glue, Loc, SystemDef, TileSet, tile
from . import ZooEntry, sierpinski_atam_weak, sierpinski_weak_tile_name


def _g(label: str) -> Glue:
    return Glue(label, 1)


def _types():
    g = _g
    out = []
    # seed macrotile, grown outward from the marker at local (1, 1)
    out += [
        tile("S.c", north=g("S1"), east=g("S2"), south=g("S3"), west=g("S4")),
        tile("S.n", south=g("S1"), north=g("blkS"), west=g("S5")),
        tile("S.nw", east=g("S5"), north=g("upc")),
        tile("S.e", west=g("S2"), east=g("blkW"), north=g("S9")),
        tile("S.ne", south=g("S9")),
        tile("S.s", north=g("S3"), east=g("S7")),
        tile("S.se", west=g("S7"), east=g("rightc")),
        tile("S.w", east=g("S4"), south=g("S8")),
        tile("S.sw", north=g("S8")),
    ]
    # south-entered full block (macrotile for tiles b and L)
    out += [
        tile("s.c", south=g("upc"), north=g("s1")),
        tile("s.p1", south=g("s1"), east=g("s2")),
        tile("s.11", west=g("s2"), north=g("s3"), east=g("s4")),
        tile("s.12", south=g("s3"), north=g("blkS"), west=g("s5")),
        tile("s.02", east=g("s5"), north=g("upc")),
        tile("s.21", west=g("s4"), east=g("blkW"), south=g("s6"), north=g("s7")),
        tile("s.20", north=g("s6"), east=g("rightc")),
        tile("s.22", south=g("s7")),
    ]
    # west-entered full block (macrotile for tiles c and B)
    out += [
        tile("w.c", west=g("rightc"), east=g("w1")),
        tile("w.p1", west=g("w1"), north=g("w2")),
        tile("w.11", south=g("w2"), north=g("w3"), east=g("w4")),
        tile("w.12", south=g("w3"), north=g("blkS"), west=g("w5")),
        tile("w.02", east=g("w5"), north=g("upc")),
        tile("w.21", west=g("w4"), east=g("blkW"), south=g("w6"), north=g("w7")),
        tile("w.20", north=g("w6"), east=g("rightc")),
        tile("w.22", south=g("w7")),
    ]
    # blockers: 'l' on the south-side middle, 'k' on the west-side middle
    out += [
        tile("blk.s", south=g("blkS")),
        tile("blk.w", west=g("blkW")),
    ]
    return out


def sierpinski_sync() -> ZooEntry:
    from ..simrel import MarkerRule, RepFn
    ts = TileSet(_types())
    seed = Assembly({(1, 1): ts["S.c"]})
    sys = SystemDef(ts, seed, temperature=1, synchronicity=math.inf,
                    name="sierpinski-sync")
    rep = RepFn(3, MarkerRule((1, 1), {"S.c": "S", "s.11": "b", "w.11": "c"}))

    def expected(steps: int) -> frozenset[Loc]:
        return sierpinski_sync_domain_after(steps)

    return ZooEntry("sierpinski_sync", {}, sys, expected_domain=expected,
                    repfn=rep, simulated=sierpinski_atam_weak().system)


def sierpinski_sync_domain_after(steps: int) -> frozenset[Loc]:
    """Placement-time oracle built on the weak system's XOR pattern.

    Corner paths of diagonal d start at step 3 + 5(d - 1); a full block
    fills over the next four steps; blockers into diagonal d land one step
    before its corners.  Blocks of the weak tile 'd' stay empty, blocks of
    'a' keep only corner plus two blockers.
    """
    cells: dict[Loc, int] = {}

    def put(bx: int, by: int, lx: int, ly: int, t: int):
        if t <= steps:
            p = (3 * bx + lx, 3 * by + ly)
            if p not in cells or cells[p] > t:
                cells[p] = t

    # seed block
    put(0, 0, 1, 1, 0)
    for lx, ly, t in ((1, 2, 1), (2, 1, 1), (1, 0, 1), (0, 1, 1),
                      (0, 2, 2), (2, 2, 2), (2, 0, 2), (0, 0, 2)):
        put(0, 0, lx, ly, t)

    dmax = max(2, (steps - 3) // 5 + 3)
    for d in range(1, dmax + 1):
        tc = 3 + 5 * (d - 1)
        if tc - 1 > steps:
            break
        for bx in range(0, d + 1):
            by = d - bx
            name = sierpinski_weak_tile_name(bx, by)
            if name == "d":
                continue
            # incoming blockers land at tc - 1
            w_name = sierpinski_weak_tile_name(bx - 1, by) if bx else None
            s_name = sierpinski_weak_tile_name(bx, by - 1) if by else None
            west_in = bx > 0 and w_name not in ("a", "d")
            south_in = by > 0 and s_name not in ("a", "d")
            # the quadrant border behaves like an input-less edge
            if bx == 0:
                west_in = False
            if by == 0:
                south_in = False
            if not west_in and not south_in:
                continue
            if west_in:
                put(bx, by, 0, 1, tc - 1)
            if south_in:
                put(bx, by, 1, 0, tc - 1)
            put(bx, by, 0, 0, tc)
            if west_in and south_in:
                continue  # stunted value-0 block ('a')
            # full block: probe, center, branches, corners
            if south_in:
                put(bx, by, 0, 1, tc + 1)
            else:
                put(bx, by, 1, 0, tc + 1)
            put(bx, by, 1, 1, tc + 2)
            put(bx, by, 1, 2, tc + 3)
            put(bx, by, 2, 1, tc + 3)
            put(bx, by, 0, 2, tc + 4)
            put(bx, by, 2, 0, tc + 4)
            put(bx, by, 2, 2, tc + 4)
    return frozenset(cells)
