"""Step semantics, scheduling policies, traces, bounded enumeration and
the eventually-independent-subassemblies analysis."""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass, field
from typing import Callable, Iterable, Iterator, Mapping, Sequence

from .core import (
    Assembly, Loc, OFFSETS, SystemDef, TileType, candidates_at, frontier,
)


class StepError(ValueError):
    pass


class IllegalLocationError(StepError):
    def __init__(self, loc: Loc):
        super().__init__(f"placement at {loc} is not a frontier location")
        self.loc = loc


class IllegalTypeError(StepError):
    def __init__(self, loc: Loc, name: str):
        super().__init__(f"type {name!r} cannot attach at {loc}")
        self.loc = loc
        self.type_name = name


class WrongCardinalityError(StepError):
    def __init__(self, got: int, want: int):
        super().__init__(f"step places {got} tiles, model mandates {want}")
        self.got = got
        self.want = want


class PolicyExhaustedError(RuntimeError):
    pass


class StateBudgetExceededError(RuntimeError):
    pass


def canonical_locs(locs: Iterable[Loc]) -> list[Loc]:
    """Canonical (y, x) ordering used everywhere a location list is fixed."""
    return sorted(locs, key=lambda p: (p[1], p[0]))


@dataclass(frozen=True)
class StepChoice:
    """One synchronous step: the set of locations filled and their types."""

    placements: tuple[tuple[Loc, str], ...]

    @staticmethod
    def of(mapping: Mapping[Loc, str]) -> "StepChoice":
        items = tuple((loc, mapping[loc]) for loc in canonical_locs(mapping))
        return StepChoice(items)

    def as_dict(self) -> dict[Loc, str]:
        return dict(self.placements)

    def __len__(self) -> int:
        return len(self.placements)


def mandated_count(sys: SystemDef, frontier_size: int) -> int:
    if sys.synchronicity == math.inf:
        return frontier_size
    return min(int(sys.synchronicity), frontier_size)


def validate_choice(sys: SystemDef, fr: Mapping[Loc, tuple[TileType, ...]],
                    choice: StepChoice) -> dict[Loc, TileType]:
    want = mandated_count(sys, len(fr))
    if len(choice) != want:
        raise WrongCardinalityError(len(choice), want)
    resolved: dict[Loc, TileType] = {}
    for loc, name in choice.placements:
        cands = fr.get(loc)
        if cands is None:
            raise IllegalLocationError(loc)
        t = next((c for c in cands if c.name == name), None)
        if t is None:
            raise IllegalTypeError(loc, name)
        resolved[loc] = t
    return resolved


def step(sys: SystemDef, asm: Assembly, choice: StepChoice) -> Assembly:
    """Apply one step; all placements bind against asm alone."""
    fr = frontier(sys, asm)
    if not fr:
        raise WrongCardinalityError(len(choice), 0)
    resolved = validate_choice(sys, fr, choice)
    out = asm.copy()
    out.place_many(resolved)
    return out


@dataclass
class Trace:
    """A replayable record of an assembly run."""

    system: SystemDef
    steps: list[StepChoice] = field(default_factory=list)
    truncated: bool = False
    truncation_reason: str | None = None

    def __len__(self) -> int:
        return len(self.steps)

    def replay(self) -> Assembly:
        asm = self.system.seed.copy()
        eng = Engine(self.system, asm)
        for i, ch in enumerate(self.steps):
            try:
                eng.apply(ch)
            except StepError as e:
                raise StepError(f"replay failed at step {i}: {e}") from e
        return eng.asm

    def prefixes(self) -> Iterator[Assembly]:
        """Yield the assembly after 0, 1, ... len(steps) steps."""
        eng = Engine(self.system, self.system.seed.copy())
        yield eng.asm.copy()
        for ch in self.steps:
            eng.apply(ch)
            yield eng.asm.copy()


class Engine:
    """Incremental frontier maintenance around a mutable assembly."""

    def __init__(self, sys: SystemDef, asm: Assembly):
        self.sys = sys
        self.asm = asm
        self.frontier: dict[Loc, tuple[TileType, ...]] = frontier(sys, asm)

    def apply(self, choice: StepChoice):
        if not self.frontier:
            raise WrongCardinalityError(len(choice), 0)
        resolved = validate_choice(self.sys, self.frontier, choice)
        self.asm.place_many(resolved)
        dirty: set[Loc] = set()
        for (x, y) in resolved:
            self.frontier.pop((x, y), None)
            for dx, dy in OFFSETS:
                dirty.add((x + dx, y + dy))
        for loc in dirty:
            if loc in self.asm:
                continue
            cands = candidates_at(self.sys, self.asm, loc)
            if cands:
                self.frontier[loc] = cands
            else:
                self.frontier.pop(loc, None)

    @property
    def terminal(self) -> bool:
        return not self.frontier


class SchedulingPolicy:
    """Supplies one StepChoice per step; see the concrete policies below."""

    def choose(self, sys: SystemDef, asm: Assembly,
               fr: dict[Loc, tuple[TileType, ...]], index: int) -> StepChoice:
        raise NotImplementedError


class Scripted(SchedulingPolicy):
    def __init__(self, steps: Sequence[StepChoice]):
        self.steps = list(steps)

    def choose(self, sys, asm, fr, index):
        if index >= len(self.steps):
            raise PolicyExhaustedError(
                f"script ended after {len(self.steps)} steps but the assembly is nonterminal")
        return self.steps[index]


class SeededRandom(SchedulingPolicy):
    """Uniform frontier subset of the mandated size, uniform type per cell.

    Fully deterministic given (system name, seed, step index): frontier
    locations are sorted canonically and sampled with a per-step generator,
    so the same trace is produced on every platform.
    """

    def __init__(self, seed: int):
        self.seed = int(seed)

    def _rng(self, sys: SystemDef, index: int) -> random.Random:
        return random.Random(f"{sys.name}:{self.seed}:{index}")

    def choose(self, sys, asm, fr, index):
        rng = self._rng(sys, index)
        locs = canonical_locs(fr)
        m = mandated_count(sys, len(locs))
        picked = _sample_prefix(locs, m, rng)
        placements = {}
        for loc in picked:
            cands = fr[loc]
            placements[loc] = cands[rng.randrange(len(cands))].name
        return StepChoice.of(placements)


def _sample_prefix(items: list, m: int, rng: random.Random) -> list:
    """First m items of a partial Fisher-Yates shuffle (uniform subset)."""
    items = list(items)
    n = len(items)
    for i in range(m):
        j = rng.randrange(i, n)
        items[i], items[j] = items[j], items[i]
    return items[:m]


class Interactive(SchedulingPolicy):
    def __init__(self, callback: Callable[[SystemDef, Assembly, dict, int], StepChoice]):
        self.callback = callback

    def choose(self, sys, asm, fr, index):
        return self.callback(sys, asm, fr, index)


BoundingBox = tuple[tuple[int, int], tuple[int, int]]  # ((x0, x1), (y0, y1)) inclusive


def in_box(loc: Loc, box: BoundingBox) -> bool:
    (x0, x1), (y0, y1) = box
    return x0 <= loc[0] <= x1 and y0 <= loc[1] <= y1


@dataclass
class RunResult:
    trace: Trace
    final: Assembly
    frontier_profile: list[int]

    @property
    def truncated(self) -> bool:
        return self.trace.truncated


def run(sys: SystemDef, policy: SchedulingPolicy, max_steps: int,
        box: BoundingBox | None = None) -> RunResult:
    """Drive the system until terminal, step budget, or box truncation.

    Growth reaching outside the box is a truncation outcome, not an error:
    the interesting systems are infinite and are explored through windows.
    """
    asm = sys.seed.copy()
    eng = Engine(sys, asm)
    trace = Trace(system=sys)
    profile: list[int] = []
    for index in range(max_steps):
        if eng.terminal:
            break
        if box is not None and any(not in_box(p, box) for p in eng.frontier):
            trace.truncated = True
            trace.truncation_reason = "frontier reached the bounding box"
            break
        profile.append(len(eng.frontier))
        choice = policy.choose(sys, eng.asm, eng.frontier, index)
        eng.apply(choice)
        trace.steps.append(choice)
    else:
        if not eng.terminal:
            trace.truncated = True
            trace.truncation_reason = "step budget exhausted"
    return RunResult(trace=trace, final=eng.asm, frontier_profile=profile)


def frontier_size_profile(trace: Trace) -> list[int]:
    """Frontier cardinality before each recorded step."""
    eng = Engine(trace.system, trace.system.seed.copy())
    out = []
    for ch in trace.steps:
        out.append(len(eng.frontier))
        eng.apply(ch)
    return out


def step_choices(sys: SystemDef, fr: dict[Loc, tuple[TileType, ...]],
                 limit: int | None = None) -> Iterator[StepChoice]:
    """All legal StepChoices from a frontier, in canonical order."""
    locs = canonical_locs(fr)
    m = mandated_count(sys, len(locs))
    count = 0
    for subset in itertools.combinations(locs, m):
        pools = [fr[loc] for loc in subset]
        for combo in itertools.product(*pools):
            yield StepChoice.of({loc: t.name for loc, t in zip(subset, combo)})
            count += 1
            if limit is not None and count >= limit:
                raise StateBudgetExceededError("step choice fan-out exceeded the budget")


def _explore(sys: SystemDef, max_tiles: int, state_budget: int):
    """BFS over producible assemblies with at most max_tiles tiles.

    Returns (states, terminals, bounded) where states maps canonical keys
    to assemblies, terminals is the subset with empty frontier, and bounded
    is True when some nonterminal state was not expanded because its
    successors would exceed max_tiles.
    """
    from collections import deque
    seed = sys.seed.copy()
    start_key = seed.key()
    states: dict[tuple, Assembly] = {start_key: seed}
    terminals: dict[tuple, Assembly] = {}
    bounded = False
    queue = deque([seed])
    while queue:
        asm = queue.popleft()
        fr = frontier(sys, asm)
        if not fr:
            terminals[asm.key()] = asm
            continue
        m = mandated_count(sys, len(fr))
        if len(asm) + m > max_tiles:
            bounded = True
            continue
        for choice in step_choices(sys, fr, limit=state_budget):
            nxt = asm.copy()
            nxt.place_many({loc: sys.tileset.by_name[name]
                            for loc, name in choice.placements})
            k = nxt.key()
            if k not in states:
                if len(states) >= state_budget:
                    raise StateBudgetExceededError(
                        f"more than {state_budget} canonical states")
                states[k] = nxt
                queue.append(nxt)
    return states, terminals, bounded


def enumerate_producible(sys: SystemDef, max_tiles: int,
                         state_budget: int = 10**6) -> dict[tuple, Assembly]:
    """Exact set of producible assemblies with domain size <= max_tiles.

    Honors the model's step cardinality: for l > 1 the partially-filled
    assemblies between steps are not producible and are not returned.
    """
    states, _, _ = _explore(sys, max_tiles, state_budget)
    return states


@dataclass
class DirectednessReport:
    status: str  # directed-within-bound | not-directed | inconclusive
    witness: tuple[Assembly, Assembly] | None = None
    detail: str = ""


def is_directed(sys: SystemDef, max_tiles: int,
                state_budget: int = 10**6) -> DirectednessReport:
    """Bounded directedness check.

    Two distinct terminals prove non-directedness, and so does a location
    receiving different tile types in two producible assemblies (each
    producible extends to a terminal, and conflicting types force distinct
    terminals).  A clean bounded exploration reports directed-within-bound;
    running out of state budget is inconclusive.
    """
    from collections import deque
    seed = sys.seed.copy()
    states: dict[tuple, Assembly] = {seed.key(): seed}
    queue = deque([seed])
    seen_types: dict[Loc, tuple[str, Assembly]] = {
        loc: (t.name, seed) for loc, t in seed.cells.items()}
    terminals: list[Assembly] = []
    try:
        while queue:
            asm = queue.popleft()
            fr = frontier(sys, asm)
            if not fr:
                if terminals and terminals[0].key() != asm.key():
                    return DirectednessReport(
                        "not-directed", (terminals[0], asm),
                        "two distinct terminal assemblies")
                if not terminals:
                    terminals.append(asm)
                continue
            m = mandated_count(sys, len(fr))
            if len(asm) + m > max_tiles:
                continue
            for choice in step_choices(sys, fr, limit=state_budget):
                nxt = asm.copy()
                nxt.place_many({loc: sys.tileset.by_name[name]
                                for loc, name in choice.placements})
                for loc, name in choice.placements:
                    prev = seen_types.get(loc)
                    if prev is None:
                        seen_types[loc] = (name, nxt)
                    elif prev[0] != name:
                        return DirectednessReport(
                            "not-directed", (prev[1], nxt),
                            f"location {loc} receives both {prev[0]!r} and {name!r}")
                k = nxt.key()
                if k not in states:
                    if len(states) >= state_budget:
                        raise StateBudgetExceededError("state budget")
                    states[k] = nxt
                    queue.append(nxt)
    except StateBudgetExceededError:
        return DirectednessReport("inconclusive", None, "state budget exceeded")
    return DirectednessReport("directed-within-bound", None,
                              f"{len(states)} producible states explored")


# ---------------------------------------------------------------------------
# Eventually-independent-subassemblies analysis


class MalformedCutError(ValueError):
    pass


@dataclass
class CutRegion:
    """A named region of the plane, given by a membership predicate.

    Regions that are infinite by intent must say so; the analysis cannot
    verify infinitude on finite data and rejects finite non-seed regions.
    """

    predicate: Callable[[Loc], bool]
    infinite: bool = True


@dataclass
class CutSpec:
    """A cut of the plane into regions 0..n; region 0 holds the seed."""

    cut_edges: frozenset[frozenset[Loc]]
    regions: list[CutRegion]

    def region_of(self, loc: Loc) -> int | None:
        hits = [i for i, r in enumerate(self.regions) if r.predicate(loc)]
        if len(hits) > 1:
            raise MalformedCutError(f"regions {hits} overlap at {loc}")
        return hits[0] if hits else None


def cut_edge(a: Loc, b: Loc) -> frozenset[Loc]:
    if abs(a[0] - b[0]) + abs(a[1] - b[1]) != 1:
        raise MalformedCutError(f"cut edge {a}-{b} is not a unit edge")
    return frozenset((a, b))


@dataclass
class IndependenceReport:
    checklist: dict[str, str]  # hypothesis -> pass | fail | unverifiable
    f: int | None
    violation: str | None

    @property
    def all_pass(self) -> bool:
        return all(v != "fail" for v in self.checklist.values()) and self.violation is None


def independent_subassemblies_report(trace: Trace, cut: CutSpec,
                                     ) -> IndependenceReport:
    """Check the cut hypotheses on the recorded window and estimate f.

    f is the least step index after which every non-seed region holds a
    frontier location at every later recorded step; it is only valid over
    the recorded window.
    """
    sys = trace.system
    final = trace.replay()
    checklist: dict[str, str] = {}

    # assign regions to every point the window touches
    region_points: dict[int, set[Loc]] = {i: set() for i in range(len(cut.regions))}
    uncovered: list[Loc] = []
    for p in final.cells:
        r = cut.region_of(p)
        if r is None:
            uncovered.append(p)
        else:
            region_points[r].add(p)
    checklist["1-disjoint"] = "pass"  # region_of raises on overlap
    checklist["2-union-covers"] = "pass" if not uncovered else "fail"

    seed_ok = all(cut.region_of(p) == 0 for p in sys.seed.cells)
    checklist["3-seed-in-region0"] = "pass" if seed_ok else "fail"

    infinite_ok = all(r.infinite for r in cut.regions[1:])
    checklist["4-nonseed-regions-infinite"] = "pass" if infinite_ok else "fail"

    checklist["5-finite-cut-intersection"] = (
        "pass" if len(cut.cut_edges) < math.inf else "fail")

    # pairwise Manhattan distance >= 3 between non-seed regions, on window points
    dist_ok = True
    ids = [i for i in range(1, len(cut.regions)) if region_points[i]]
    for a_i in range(len(ids)):
        for b_i in range(a_i + 1, len(ids)):
            pa = region_points[ids[a_i]]
            pb = region_points[ids[b_i]]
            d = min(abs(ax - bx) + abs(ay - by)
                    for ax, ay in pa for bx, by in pb)
            if d < 3:
                dist_ok = False
    checklist["6-distance-at-least-3"] = "pass" if dist_ok else "fail"

    # the cut must carry exactly the shared boundary of each region with region 0
    boundary_ok = True
    for p in final.cells:
        rp = cut.region_of(p)
        if rp is None:
            continue
        x, y = p
        for dx, dy in OFFSETS:
            q = (x + dx, y + dy)
            rq = cut.region_of(q)
            if rq is None or rq == rp:
                continue
            edge = frozenset((p, q))
            crosses_seed = 0 in (rp, rq)
            if crosses_seed and edge not in cut.cut_edges:
                boundary_ok = False
            if not crosses_seed and edge in cut.cut_edges:
                boundary_ok = False
    checklist["7-cut-is-shared-boundary-with-region0"] = (
        "pass" if boundary_ok else "fail")

    if any(v == "fail" for v in checklist.values()):
        bad = [k for k, v in checklist.items() if v == "fail"]
        return IndependenceReport(checklist, None, f"hypotheses failed: {bad}")

    # frontier occupancy per region at every recorded step
    eng = Engine(sys, sys.seed.copy())
    want = [i for i in range(1, len(cut.regions))]
    ok_from: int | None = None
    for index, ch in enumerate(trace.steps):
        have = {cut.region_of(p) for p in eng.frontier}
        if all(i in have for i in want):
            if ok_from is None:
                ok_from = index
        else:
            ok_from = None
        eng.apply(ch)
    if ok_from is None:
        return IndependenceReport(
            checklist, None,
            "some non-seed region lacked a frontier location at the final recorded step")
    return IndependenceReport(checklist, ok_from, None)
