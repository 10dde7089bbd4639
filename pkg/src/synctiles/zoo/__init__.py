"""Parameterized builders for every construction shipped with the engine.

Each builder returns a ZooEntry holding the SystemDef plus oracles: either
a closed-form generator of the expected domain after n synchronous steps,
or a recognizer that validates produced assemblies.  Tile names carry
color prefixes for traceability against the figures they reproduce.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

from ..core import Assembly, Glue, Loc, SystemDef, TileSet, TileType, tile

__all__ = [
    "ZooEntry", "REGISTRY", "build", "entry_ids",
    "sierpinski_atam_weak", "sierpinski_sync",
    "flagpole_atam", "flagpole_sync",
    "v_system", "family_sn", "no_up_sim_system", "s_l_system",
    "xor_pattern_value", "sierpinski_weak_tile_name",
    "comb_domain_after_sync", "v_domain_after_sync",
]


@dataclass
class ZooEntry:
    id: str
    params: dict
    system: SystemDef
    # closed-form domain after n native synchronous steps, when the native
    # run is shape-deterministic
    expected_domain: Callable[[int], frozenset[Loc]] | None = None
    # recognizer for produced assemblies (domain and tile names)
    check_assembly: Callable[[Assembly], bool] | None = None
    repfn: object | None = None
    simulated: SystemDef | None = None
    notes: str = ""


def g(label: str, strength: int = 1) -> Glue:
    return Glue(label, strength)


# ---------------------------------------------------------------------------
# Sierpinski, weak aTAM version (temperature 2, XOR rule)


def xor_pattern_value(x: int, y: int) -> int:
    """Independent oracle for the weak system's bit at (x, y), x, y >= 0.

    The XOR recurrence with all-one borders is binomial(x+y, x) mod 2,
    which is zero exactly when x and y share a set bit (Kummer).
    """
    if x < 0 or y < 0:
        raise ValueError("pattern is defined on the first quadrant")
    if x == 0 or y == 0:
        return 1
    return 0 if (x & y) else 1


def sierpinski_weak_tile_name(x: int, y: int) -> str:
    if x == 0 and y == 0:
        return "S"
    if x == 0:
        return "L"
    if y == 0:
        return "B"
    w = xor_pattern_value(x - 1, y)
    s = xor_pattern_value(x, y - 1)
    return {(1, 1): "a", (0, 1): "b", (1, 0): "c", (0, 0): "d"}[(w, s)]


def sierpinski_atam_weak() -> ZooEntry:
    """Standard temperature-2 XOR system weakly assembling the Sierpinski
    pattern in the first quadrant (seed at the origin)."""
    col = g("col", 2)
    row = g("row", 2)
    e = [g("e0"), g("e1")]
    n = [g("n0"), g("n1")]
    types = [
        tile("S", north=col, east=row),
        tile("L", north=col, south=col, east=e[1]),
        tile("B", east=row, west=row, north=n[1]),
        # rule tiles named by (west, south) input bits
        tile("a", west=e[1], south=n[1], east=e[0], north=n[0]),
        tile("b", west=e[0], south=n[1], east=e[1], north=n[1]),
        tile("c", west=e[1], south=n[0], east=e[1], north=n[1]),
        tile("d", west=e[0], south=n[0], east=e[0], north=n[0]),
    ]
    ts = TileSet(types)
    seed = Assembly({(0, 0): ts["S"]})
    sys = SystemDef(ts, seed, temperature=2, synchronicity=1,
                    name="sierpinski-weak")

    def check(asm: Assembly) -> bool:
        return all(x >= 0 and y >= 0 and t.name == sierpinski_weak_tile_name(x, y)
                   for (x, y), t in asm.cells.items())

    return ZooEntry("sierpinski_atam_weak", {}, sys, check_assembly=check)


# ---------------------------------------------------------------------------
# The row-and-columns family (n + 5 tile types) and its 6-type variant


def _comb_row_types(col_glue_first: str) -> list[TileType]:
    return [
        tile("green.seed", east=g("row1")),
        tile("yellow.r", west=g("row1"), east=g("row2")),
        tile("gold.r", west=g("row2"), east=g("row3")),
        tile("aqua.r", west=g("row3"), east=g("row4")),
        tile("blue.r", west=g("row4"), east=g("row1"), north=g(col_glue_first)),
    ]


def _comb_check(asm: Assembly) -> bool:
    for (x, y) in asm.cells:
        if y == 0:
            if x < 0:
                return False
        elif not (y >= 1 and x >= 4 and x % 4 == 0):
            return False
    return True


def family_sn(l: int = 2, n: int = 1) -> ZooEntry:
    """Temperature-1 system: 4-periodic infinite row east from a green
    seed; an infinite n-periodic column climbs from every blue tile."""
    if l < 2:
        raise ValueError("synchronicity must be >= 2 for this family")
    if n < 1:
        raise ValueError("n must be >= 1")
    types = _comb_row_types("col0")
    for i in range(n):
        types.append(tile(f"pink.{i}", south=g(f"col{i}"),
                          north=g(f"col{(i + 1) % n}")))
    ts = TileSet(types)
    seed = Assembly({(0, 0): ts["green.seed"]})
    sys = SystemDef(ts, seed, temperature=1, synchronicity=l,
                    name=f"family-sn-l{l}-n{n}")
    return ZooEntry("family_sn", {"l": l, "n": n}, sys,
                    expected_domain=comb_domain_after_sync,
                    check_assembly=lambda a: _comb_check(a))


def no_up_sim_system(l: int = 1) -> ZooEntry:
    """The 6-tile variant: every column repeats a single pink type."""
    if l < 1:
        raise ValueError("synchronicity must be >= 1")
    types = _comb_row_types("col")
    types.append(tile("pink", south=g("col"), north=g("col")))
    ts = TileSet(types)
    seed = Assembly({(0, 0): ts["green.seed"]})
    sys = SystemDef(ts, seed, temperature=1, synchronicity=l,
                    name=f"no-up-sim-l{l}")
    return ZooEntry("no_up_sim_system", {"l": l}, sys,
                    expected_domain=comb_domain_after_sync,
                    check_assembly=lambda a: _comb_check(a))


def comb_domain_after_sync(steps: int) -> frozenset[Loc]:
    """Domain after n full-frontier steps: row head at (t, 0) on step t,
    each column at x = 4m alive from step x + 1 onward."""
    cells: set[Loc] = {(0, 0)}
    for t in range(1, steps + 1):
        cells.add((t, 0))
    for x in range(4, steps + 1, 4):
        for dy in range(1, steps - x + 1):
            cells.add((x, dy))
    return frozenset(cells)


# ---------------------------------------------------------------------------
# The V system (directed in the syncTAM, not in the aTAM)


def v_system() -> ZooEntry:
    """Temperature-1 V: diagonal arms plus rows meeting mid-rung.

    A rung launches at every 4th step (every second arm level).  The
    red-side row runs east along its level with an up-dangle every 4th
    cell; the blue-side row runs west one row higher with a down-dangle
    every 4th cell.  Heads stop at the first cell the opposing texture
    claimed first, so the synchronous meeting point is always the same
    while aTAM schedules move it.
    """
    NULL = Glue("", 0)
    types = [tile("yellow.seed", west=g("L0"), east=g("R0"))]
    for p in range(2):
        q = 1 - p
        # dgreen.p at (-k, k-1), green.p at (-k, k), k % 2 == p
        types.append(TileType(f"dgreen.{p}", (g(f"Lu{p}"), g(f"L{q}"), NULL, NULL)))
        types.append(TileType(f"green.{p}", (
            NULL, g("r1") if p == 0 else NULL, g(f"Lu{p}"), g(f"L{p}"))))
        types.append(TileType(f"brown.{p}", (g(f"Ru{p}"), NULL, NULL, g(f"R{q}"))))
        types.append(TileType(f"orange.{p}", (
            g("bs") if p == 0 else NULL, g(f"R{p}"), g(f"Ru{p}"), NULL)))
    types += [
        # red-side row, eastward; anchor red.1 dangles up
        tile("red.1", west=g("r1"), east=g("r2"), north=g("rd")),
        tile("red.2", west=g("r2"), east=g("r3")),
        tile("red.3", west=g("r3"), east=g("r0")),
        tile("red.0", west=g("r0"), east=g("r1")),
        tile("red.d", south=g("rd")),
        # blue-side row, westward one row up; anchor blue.0 dangles down
        tile("blue.start", south=g("bs"), west=g("b1")),
        tile("blue.1", east=g("b1"), west=g("b2")),
        tile("blue.2", east=g("b2"), west=g("b3")),
        tile("blue.3", east=g("b3"), west=g("b0")),
        tile("blue.0", east=g("b0"), west=g("b1"), south=g("bd")),
        tile("blue.d", north=g("bd")),
    ]
    ts = TileSet(types)
    seed = Assembly({(0, 0): ts["yellow.seed"]})
    sys = SystemDef(ts, seed, temperature=1, synchronicity=math.inf,
                    name="v-system")
    return ZooEntry("v_system", {}, sys, expected_domain=v_domain_after_sync)


def v_domain_after_sync(steps: int) -> frozenset[Loc]:
    """Placement-time oracle for the synchronous V run.

    Arm level k lands at steps 2k-1 (lower tile) and 2k (upper); rung k
    (k even, k >= 2) launches at base = 2k+1.  Red cells (x, k) land at
    base + (x + k - 1); blue cells (x, k+1) at base + (k - x); a dangle
    lands one step after its anchor and only if it beats the opposing
    head to the cell.  Red is stopped by the first blue dangle east of
    x = 1 (or the right arm), blue by the first red dangle west of 0
    (or the left arm).
    """
    cells: dict[Loc, int] = {(0, 0): 0}

    def put(p: Loc, t: int):
        if t <= steps and (p not in cells or cells[p] > t):
            cells[p] = t

    max_k = steps // 2 + 2
    for k in range(1, max_k + 1):
        for sx in (-1, 1):
            put((sx * k, k - 1), 2 * k - 1)
            put((sx * k, k), 2 * k)

    for k in range(2, max_k + 1, 2):
        base = 2 * k + 1
        if base > steps:
            break
        red_t = {x: base + (x + k - 1) for x in range(-k + 1, k + 1)}
        blue_t = {x: base + (k - x) for x in range(-k, k + 1)}
        # dangle anchors: red at x = -k+1+4m (up), blue at x = k-4m (down)
        red_anchor = {x for x in red_t if (x - (-k + 1)) % 4 == 0}
        blue_anchor = {x for x in blue_t if (k - x) % 4 == 0 and x != k}
        # blue dangles claim (x, k) iff strictly earlier than the red head
        blue_d = {x for x in blue_anchor if blue_t[x] + 1 < red_t.get(x, 10**9)}
        red_d = {x for x in red_anchor if red_t[x] + 1 < blue_t.get(x, 10**9)}
        # heads stop at the first opposing claim (arm walls at |x| = k)
        red_stop = min([x for x in blue_d if x > -k + 1] + [k])
        blue_stop = max([x for x in red_d if x < k] + [-k])
        for x in range(-k + 1, red_stop):
            put((x, k), red_t[x])
            if x in red_d and x < red_stop:
                put((x, k + 1), red_t[x] + 1)
        for x in range(k, blue_stop, -1):
            put((x, k + 1), blue_t[x])
            if x in blue_d and x > blue_stop:
                put((x, k), blue_t[x] + 1)
    return frozenset(cells)


# ---------------------------------------------------------------------------
# registry

from .flagpole import flagpole_atam, flagpole_sync  # noqa: E402
from .sierpsync import sierpinski_sync  # noqa: E402
from .sl import s_l_system  # noqa: E402

REGISTRY: dict[str, Callable[..., ZooEntry]] = {
    "flagpole_atam": flagpole_atam,
    "flagpole_sync": flagpole_sync,
    "sierpinski_atam_weak": sierpinski_atam_weak,
    "sierpinski_sync": sierpinski_sync,
    "v_system": v_system,
    "family_sn": family_sn,
    "no_up_sim_system": no_up_sim_system,
    "s_l_system": s_l_system,
}


def entry_ids() -> list[str]:
    return sorted(REGISTRY)


def build(entry_id: str, **params) -> ZooEntry:
    if entry_id not in REGISTRY:
        raise KeyError(f"unknown zoo entry {entry_id!r}")
    return REGISTRY[entry_id](**{k: int(v) for k, v in params.items()})
