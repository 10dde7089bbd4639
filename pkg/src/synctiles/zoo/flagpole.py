"""The flagpole pair: cooperative temperature-2 system and its
temperature-1 synchronous simulator at spatial scale 7."""

from __future__ import annotations

from ..core import Assembly, Glue, Loc, SystemDef, TileSet, tile
from . import ZooEntry


def _g2(label: str) -> Glue:
    return Glue(label, 2)


def _g1(label: str) -> Glue:
    return Glue(label, 1)


def _arm_types(side: str):
    """One arm's tile types: straight segment, green detour, turn+descent.

    side is "t" (top, arm on y = 3, descent downward) or "b" (bottom,
    y = -3, descent upward).  Per 4-column block the arm advances either
    straight in 4 steps or through the 6-tile green detour; the turn may
    replace a block start, ending in a strength-1 flag glue at y = +-1.
    """
    a = f"{side}A"
    up = side == "t"

    def vert(label_toward_center: str, label_away: str):
        # glue pair (north, south) oriented toward y = 0
        if up:
            return Glue("", 0), _g2(label_toward_center)
        return _g2(label_toward_center), Glue("", 0)

    ts = [
        tile(f"{side}.s1", west=_g2(a), east=_g2(f"{side}s2")),
        tile(f"{side}.s2", west=_g2(f"{side}s2"), east=_g2(f"{side}s3")),
        tile(f"{side}.s3", west=_g2(f"{side}s3"), east=_g2(f"{side}s4")),
        tile(f"{side}.s4", west=_g2(f"{side}s4"), east=_g2(a)),
        tile(f"{side}.g1", west=_g2(a), east=_g2(f"{side}g2")),
    ]
    if up:
        ts += [
            tile("t.g2", west=_g2("tg2"), north=_g2("tg3")),
            tile("t.g3", south=_g2("tg3"), east=_g2("tg4")),
            tile("t.g4", west=_g2("tg4"), south=_g2("tg5")),
            tile("t.g5", north=_g2("tg5"), east=_g2("tg6")),
            tile("t.g6", west=_g2("tg6"), east=_g2(a)),
            tile("t.t1", west=_g2(a), south=_g2("tt2")),
            tile("t.t2", north=_g2("tt2"), south=_g2("tt3")),
            tile("t.t3", north=_g2("tt3"), south=_g1("fN")),
        ]
    else:
        ts += [
            tile("b.g2", west=_g2("bg2"), south=_g2("bg3")),
            tile("b.g3", north=_g2("bg3"), east=_g2("bg4")),
            tile("b.g4", west=_g2("bg4"), north=_g2("bg5")),
            tile("b.g5", south=_g2("bg5"), east=_g2("bg6")),
            tile("b.g6", west=_g2("bg6"), east=_g2(a)),
            tile("b.t1", west=_g2(a), north=_g2("bt2")),
            tile("b.t2", south=_g2("bt2"), north=_g2("bt3")),
            tile("b.t3", south=_g2("bt3"), north=_g1("fS")),
        ]
    return ts


def flagpole_atam() -> ZooEntry:
    """Temperature-2 flagpole: two arms on y = 3 and y = -3 dally east and
    nondeterministically turn back toward y = 0; a three-tile flag grows
    by strength-1 cooperation iff both arms turned in the same column."""
    types = [
        tile("seed", north=_g2("pu1"), south=_g2("pd1")),
        tile("pole.u1", south=_g2("pu1"), north=_g2("pu2")),
        tile("pole.u2", south=_g2("pu2"), north=_g2("pu3")),
        tile("pole.u3", south=_g2("pu3"), east=_g2("tA")),
        tile("pole.d1", north=_g2("pd1"), south=_g2("pd2")),
        tile("pole.d2", north=_g2("pd2"), south=_g2("pd3")),
        tile("pole.d3", north=_g2("pd3"), east=_g2("bA")),
    ]
    types += _arm_types("t")
    types += _arm_types("b")
    types += [
        tile("flag.pole", north=_g1("fN"), south=_g1("fS"), east=_g2("fl1")),
        tile("flag.mid", west=_g2("fl1"), east=_g2("fl2")),
        tile("flag.tip", west=_g2("fl2")),
    ]
    ts = TileSet(types)
    seed = Assembly({(0, 0): ts["seed"]})
    sys = SystemDef(ts, seed, temperature=2, synchronicity=1, name="flagpole")
    return ZooEntry("flagpole_atam", {}, sys,
                    check_assembly=check_flagpole_assembly)


ArmPlan = tuple[str, ...]  # per 4-column block: "s" (straight) or "g" (detour)


def arm_cells(side: str, plan: ArmPlan, turn: bool) -> dict[Loc, str]:
    """Cells of one arm (excluding pole) for a block plan, with tile names."""
    y = 3 if side == "t" else -3
    bump = 4 if side == "t" else -4
    cells: dict[Loc, str] = {}
    x = 0
    for block in plan:
        if block == "s":
            for i in range(1, 5):
                cells[(x + i, y)] = f"{side}.s{i}"
        else:
            cells[(x + 1, y)] = f"{side}.g1"
            cells[(x + 2, y)] = f"{side}.g2"
            cells[(x + 2, bump)] = f"{side}.g3"
            cells[(x + 3, bump)] = f"{side}.g4"
            cells[(x + 3, y)] = f"{side}.g5"
            cells[(x + 4, y)] = f"{side}.g6"
        x += 4
    if turn:
        c = x + 1
        cells[(c, y)] = f"{side}.t1"
        if side == "t":
            cells[(c, 2)] = "t.t2"
            cells[(c, 1)] = "t.t3"
        else:
            cells[(c, -2)] = "b.t2"
            cells[(c, -1)] = "b.t3"
    return cells


def flagpole_domain(top: ArmPlan, bot: ArmPlan, top_turn: bool = True,
                    bot_turn: bool = True) -> frozenset[Loc]:
    """Terminal domain for the given arm plans (oracle).

    The flag appears iff both arms turn and do so in the same column,
    i.e. iff both plans have equal length and both turn.
    """
    cells: set[Loc] = {(0, 0), (0, 1), (0, 2), (0, 3), (0, -1), (0, -2), (0, -3)}
    cells.update(arm_cells("t", top, top_turn))
    cells.update(arm_cells("b", bot, bot_turn))
    if top_turn and bot_turn and len(top) == len(bot):
        c = 4 * len(top) + 1
        cells.update({(c, 0), (c + 1, 0), (c + 2, 0)})
    return frozenset(cells)


def check_flagpole_assembly(asm: Assembly) -> bool:
    """Recognizer: every tile sits where its role dictates."""
    for (x, y), t in asm.cells.items():
        n = t.name
        if n == "seed":
            ok = (x, y) == (0, 0)
        elif n.startswith("pole.u"):
            ok = x == 0 and y == int(n[-1])
        elif n.startswith("pole.d"):
            ok = x == 0 and y == -int(n[-1])
        elif n.startswith("t.") or n.startswith("b."):
            up = n.startswith("t.")
            kind = n[2:]
            if kind in ("s1", "s2", "s3", "s4", "g1", "g2", "g5", "g6", "t1"):
                ok = y == (3 if up else -3)
            elif kind in ("g3", "g4"):
                ok = y == (4 if up else -4)
            elif kind == "t2":
                ok = y == (2 if up else -2)
            elif kind == "t3":
                ok = y == (1 if up else -1)
            else:
                ok = False
            if kind.startswith("s") or kind in ("g1", "g6"):
                ok = ok and x >= 1
        elif n == "flag.pole":
            ok = y == 0 and asm.get((x, 1)) is not None and asm.get((x, -1)) is not None
        elif n in ("flag.mid", "flag.tip"):
            ok = y == 0
        else:
            ok = False
        if not ok:
            return False
    return True


def flagpole_sync() -> ZooEntry:
    from .flagsync import build_flagpole_sync
    return build_flagpole_sync()
