"""Core domain types: glues, tiles, assemblies, shapes, stability and frontier."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Mapping

import networkx as nx

# Directions are indexed N, E, S, W.  Offsets use screen-free math coords
# (x grows east, y grows north).
DIRS = ("N", "E", "S", "W")
DIR_INDEX = {d: i for i, d in enumerate(DIRS)}
OFFSETS = ((0, 1), (1, 0), (0, -1), (-1, 0))
OPPOSITE = (2, 3, 0, 1)

Loc = tuple[int, int]

# Coordinates are bounded; overflow is an error instead of silent wraparound.
COORD_LIMIT = 2**40


class OccupiedLocationError(ValueError):
    """Raised when an attachment query targets an occupied lattice point."""


class BadAssemblyError(ValueError):
    """Raised when an assembly violates a structural invariant."""


@dataclass(frozen=True, slots=True)
class Glue:
    """An edge glue: label plus non-negative integer strength.

    Two glues interact iff they are equal in label and strength and the
    strength is positive.  The unique null glue is ("", 0).
    """

    label: str
    strength: int

    def __post_init__(self):
        if self.strength < 0:
            raise ValueError(f"glue strength must be >= 0, got {self.strength}")
        if self.strength == 0 and self.label != "":
            raise ValueError(f"only the null glue may have strength 0 (label {self.label!r})")
        if self.strength > 0 and self.label == "":
            raise ValueError("a positive-strength glue needs a non-empty label")

    @property
    def is_null(self) -> bool:
        return self.strength == 0


NULL_GLUE = Glue("", 0)


def glues_interact(a: Glue, b: Glue) -> int:
    """Interaction strength of two abutting glues (0 if no bond)."""
    if a.strength > 0 and a == b:
        return a.strength
    return 0


@dataclass(frozen=True, slots=True)
class TileType:
    """A unit square tile type with one glue per side."""

    name: str
    glues: tuple[Glue, Glue, Glue, Glue]  # N, E, S, W

    def glue(self, d: int | str) -> Glue:
        if isinstance(d, str):
            d = DIR_INDEX[d]
        return self.glues[d]


def tile(name: str, north: Glue = NULL_GLUE, east: Glue = NULL_GLUE,
         south: Glue = NULL_GLUE, west: Glue = NULL_GLUE) -> TileType:
    return TileType(name, (north, east, south, west))


class TileSet:
    """A finite, ordered collection of uniquely named tile types.

    Precomputes an attachment index (direction, glue) -> candidate types so
    frontier computation only inspects types that can bond at all.
    """

    def __init__(self, types: Iterable[TileType]):
        self.types: tuple[TileType, ...] = tuple(types)
        if not self.types:
            raise ValueError("tile set must be non-empty")
        self.by_name: dict[str, TileType] = {}
        for t in self.types:
            if t.name in self.by_name:
                raise ValueError(f"duplicate tile type name {t.name!r}")
            self.by_name[t.name] = t
        self.order: dict[str, int] = {t.name: i for i, t in enumerate(self.types)}
        self._index: dict[tuple[int, Glue], tuple[TileType, ...]] = {}
        acc: dict[tuple[int, Glue], list[TileType]] = {}
        for t in self.types:
            for d in range(4):
                g = t.glues[d]
                if g.strength > 0:
                    acc.setdefault((d, g), []).append(t)
        self._index = {k: tuple(v) for k, v in acc.items()}

    def __len__(self) -> int:
        return len(self.types)

    def __iter__(self):
        return iter(self.types)

    def __getitem__(self, name: str) -> TileType:
        return self.by_name[name]

    def matching(self, d: int, g: Glue) -> tuple[TileType, ...]:
        """Types whose side d carries exactly glue g (positive strength)."""
        return self._index.get((d, g), ())

    @property
    def glue_set(self) -> frozenset[Glue]:
        out = set()
        for t in self.types:
            for g in t.glues:
                if g.strength > 0:
                    out.add(g)
        return frozenset(out)


class Assembly:
    """A connected, non-empty placement of tiles on the 2D integer lattice.

    Append-only: tiles can be placed but never removed.  A single instance
    is confined to one thread at a time; use copy() for concurrent work.
    """

    __slots__ = ("cells",)

    def __init__(self, cells: Mapping[Loc, TileType], check: bool = True):
        self.cells: dict[Loc, TileType] = dict(cells)
        if check:
            self._check_invariants()

    def _check_invariants(self):
        if not self.cells:
            raise BadAssemblyError("assembly domain is empty")
        for (x, y) in self.cells:
            if abs(x) > COORD_LIMIT or abs(y) > COORD_LIMIT:
                raise BadAssemblyError(f"coordinate overflow at ({x}, {y})")
        if not self._connected():
            raise BadAssemblyError("assembly domain is not 4-connected")

    def _connected(self) -> bool:
        start = next(iter(self.cells))
        seen = {start}
        stack = [start]
        while stack:
            x, y = stack.pop()
            for dx, dy in OFFSETS:
                q = (x + dx, y + dy)
                if q in self.cells and q not in seen:
                    seen.add(q)
                    stack.append(q)
        return len(seen) == len(self.cells)

    def __len__(self) -> int:
        return len(self.cells)

    def __contains__(self, loc: Loc) -> bool:
        return loc in self.cells

    def __getitem__(self, loc: Loc) -> TileType:
        return self.cells[loc]

    def get(self, loc: Loc) -> TileType | None:
        return self.cells.get(loc)

    def copy(self) -> "Assembly":
        return Assembly(self.cells, check=False)

    def place(self, loc: Loc, t: TileType):
        if loc in self.cells:
            raise OccupiedLocationError(f"location {loc} is already occupied")
        x, y = loc
        if abs(x) > COORD_LIMIT or abs(y) > COORD_LIMIT:
            raise BadAssemblyError(f"coordinate overflow at {loc}")
        self.cells[loc] = t

    def place_many(self, placements: Mapping[Loc, TileType]):
        for loc, t in placements.items():
            self.place(loc, t)

    def domain(self) -> frozenset[Loc]:
        return frozenset(self.cells)

    def key(self) -> tuple:
        """Canonical hashable identity (absolute positions, per tile names)."""
        return tuple(sorted((x, y, t.name) for (x, y), t in self.cells.items()))

    def is_subassembly_of(self, other: "Assembly") -> bool:
        return all(other.get(p) is not None and other.get(p).name == t.name
                   for p, t in self.cells.items())

    def binding_graph(self) -> nx.Graph:
        """Weighted graph over occupied cells; edges are positive bonds."""
        g = nx.Graph()
        g.add_nodes_from(self.cells)
        for (x, y), t in self.cells.items():
            for d in (0, 1):  # N and E suffice; S/W are mirrored
                dx, dy = OFFSETS[d]
                q = (x + dx, y + dy)
                u = self.cells.get(q)
                if u is not None:
                    s = glues_interact(t.glues[d], u.glues[OPPOSITE[d]])
                    if s > 0:
                        g.add_edge((x, y), q, weight=s)
        return g

    def __repr__(self) -> str:
        return f"Assembly({len(self.cells)} tiles)"


def binding_strength(asm: Assembly, loc: Loc, t: TileType) -> int:
    """Total bond strength of type t placed at loc against asm alone."""
    if loc in asm:
        raise OccupiedLocationError(f"location {loc} is already occupied")
    x, y = loc
    total = 0
    for d in range(4):
        dx, dy = OFFSETS[d]
        u = asm.get((x + dx, y + dy))
        if u is not None:
            total += glues_interact(t.glues[d], u.glues[OPPOSITE[d]])
    return total


def is_tau_stable(asm: Assembly, tau: int) -> bool:
    """True iff every cut of the binding graph has weight >= tau.

    A single tile is always stable.  For tau = 1 bond-connectivity suffices;
    otherwise the global min cut is computed (Stoer-Wagner).
    """
    if tau < 1:
        raise ValueError("temperature must be >= 1")
    if len(asm) == 1:
        return True
    g = asm.binding_graph()
    if not nx.is_connected(g):
        return False
    if tau == 1:
        return True
    cut, _ = nx.stoer_wagner(g)
    return cut >= tau


def frontier(sys: "SystemDef", asm: Assembly) -> dict[Loc, tuple[TileType, ...]]:
    """All empty locations where some type attaches with strength >= tau.

    Attachment strength counts only tiles already in asm (co-attaching
    tiles in the same synchronous step never help each other bind).
    """
    out: dict[Loc, tuple[TileType, ...]] = {}
    seen: set[Loc] = set()
    for (x, y) in asm.cells:
        for dx, dy in OFFSETS:
            loc = (x + dx, y + dy)
            if loc in seen or loc in asm:
                continue
            seen.add(loc)
            cands = candidates_at(sys, asm, loc)
            if cands:
                out[loc] = cands
    return out


def candidates_at(sys: "SystemDef", asm: Assembly, loc: Loc) -> tuple[TileType, ...]:
    """Types attachable at an empty location, in tile set order."""
    x, y = loc
    facing: list[tuple[int, Glue]] = []
    for d in range(4):
        dx, dy = OFFSETS[d]
        u = asm.get((x + dx, y + dy))
        if u is not None:
            g = u.glues[OPPOSITE[d]]
            if g.strength > 0:
                facing.append((d, g))
    if not facing:
        return ()
    pool: dict[str, TileType] = {}
    for d, g in facing:
        for t in sys.tileset.matching(d, g):
            pool[t.name] = t
    good = []
    for t in pool.values():
        s = 0
        for d, g in facing:
            if t.glues[d] == g:
                s += g.strength
        if s >= sys.temperature:
            good.append(t)
    good.sort(key=lambda t: sys.tileset.order[t.name])
    return tuple(good)


@dataclass(frozen=True)
class Shape:
    """A translation class of lattice point sets, stored canonically.

    The canonical translate puts the lexicographically least point by
    (y, x) at the origin, which makes equality and hashing cheap.
    """

    points: frozenset[Loc]

    @staticmethod
    def of(points: Iterable[Loc]) -> "Shape":
        pts = frozenset(points)
        if not pts:
            raise ValueError("a shape needs at least one point")
        ax, ay = min(pts, key=lambda p: (p[1], p[0]))
        return Shape(frozenset((x - ax, y - ay) for x, y in pts))

    def __len__(self) -> int:
        return len(self.points)


def shape_of(asm: Assembly) -> Shape:
    return Shape.of(asm.cells)


def shapes_equal(a: Shape, b: Shape) -> bool:
    return a.points == b.points


def scale_shape(s: Shape, c: int) -> Shape:
    """Replace each point by a c x c square of points (canonicalized)."""
    if c < 1:
        raise ValueError("scale factor must be >= 1")
    pts = set()
    for x, y in s.points:
        for dx in range(c):
            for dy in range(c):
                pts.add((x * c + dx, y * c + dy))
    return Shape.of(pts)


ATAM = 1
SYNC = math.inf


class SystemDef:
    """A tile system: tile set, seed, temperature, synchronicity.

    Synchronicity 1 is the aTAM, math.inf the syncTAM, any other positive
    integer an L-syncTAM.  The seed is checked tau-stable at construction.
    """

    def __init__(self, tileset: TileSet, seed: Assembly, temperature: int,
                 synchronicity: int | float = 1, name: str = "system",
                 check_seed: bool = True):
        if temperature < 1:
            raise ValueError("temperature must be a positive integer")
        if synchronicity != math.inf and (synchronicity < 1 or int(synchronicity) != synchronicity):
            raise ValueError("synchronicity must be a positive integer or inf")
        self.tileset = tileset
        self.seed = seed
        self.temperature = temperature
        self.synchronicity = synchronicity if synchronicity == math.inf else int(synchronicity)
        self.name = name
        for loc, t in seed.cells.items():
            if tileset.by_name.get(t.name) != t:
                raise BadAssemblyError(f"seed tile at {loc} not in tile set")
        if check_seed and not is_tau_stable(seed, temperature):
            raise BadAssemblyError("seed assembly is not tau-stable")

    @property
    def is_atam(self) -> bool:
        return self.synchronicity == 1

    @property
    def is_sync(self) -> bool:
        return self.synchronicity == math.inf

    def with_synchronicity(self, l: int | float, rename: str | None = None) -> "SystemDef":
        return SystemDef(self.tileset, self.seed, self.temperature, l,
                         rename or self.name, check_seed=False)

    def frontier(self, asm: Assembly) -> dict[Loc, tuple[TileType, ...]]:
        return frontier(self, asm)

    def __repr__(self) -> str:
        l = "inf" if self.is_sync else self.synchronicity
        return f"SystemDef({self.name!r}, |T|={len(self.tileset)}, tau={self.temperature}, l={l})"
