"""Representation functions and bounded checkers for the simulation
relations: equivalent productions, follows, synchronously-follows, models.

Every checker here is a falsifier and regression harness, not a prover:
the definitions quantify over infinite sets, so reports distinguish a
definitive counterexample from pass-within-bound and mark obligations
that touch truncated enumerations as inconclusive.
"""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass, field
from typing import Iterable

from .core import Assembly, BadAssemblyError, Loc, SystemDef, TileSet, frontier
from .dynamics import (
    StateBudgetExceededError, Trace, _explore, mandated_count, step_choices,
)

Image = dict[Loc, str]  # block position -> simulated tile name


class RepFnError(ValueError):
    pass


@dataclass
class MarkerRule:
    """Resolution depends only on one marker cell per block, so the
    validity condition holds structurally."""

    offset: tuple[int, int]
    type_map: dict[str, str]


@dataclass
class TableRule:
    """Explicit partial map from block contents to simulated tiles.

    Blocks are keyed by their sorted cell list; an entry applies to any
    block extending it.  Validity (sub-block agreement) is checked
    empirically by fuzzing, not structurally.
    """

    entries: list[tuple[frozenset[tuple[Loc, str]], str]]

    def sorted_entries(self):
        return sorted(self.entries,
                      key=lambda e: (sorted(e[0], key=lambda c: (c[0][1], c[0][0], c[1])), e[1]))


@dataclass
class RepFn:
    m: int
    rule: MarkerRule | TableRule

    def resolve_block(self, contents: dict[Loc, str]) -> str | None:
        """Map one m-block (local coords -> tile name) through the rule."""
        if isinstance(self.rule, MarkerRule):
            name = contents.get(self.rule.offset)
            if name is None:
                return None
            return self.rule.type_map.get(name)
        hits = set()
        items = set(contents.items())
        for cells, target in self.rule.entries:
            if cells <= items:
                hits.add(target)
        if len(hits) > 1:
            raise RepFnError(f"table rule is ambiguous on a block: {sorted(hits)}")
        return hits.pop() if hits else None


def blocks_of(asm: Assembly, m: int) -> dict[Loc, dict[Loc, str]]:
    out: dict[Loc, dict[Loc, str]] = {}
    for (x, y), t in asm.cells.items():
        b = (x // m, y // m)
        out.setdefault(b, {})[(x - b[0] * m, y - b[1] * m)] = t.name
    return out


def rstar(r: RepFn, asm: Assembly) -> Image:
    """Blockwise image of an assembly; unresolved blocks represent space."""
    out: Image = {}
    for b, contents in blocks_of(asm, r.m).items():
        name = r.resolve_block(contents)
        if name is not None:
            out[b] = name
    return out


def image_as_assembly(image: Image, tileset: TileSet) -> Assembly:
    if not image:
        raise BadAssemblyError("image is empty")
    return Assembly({loc: tileset.by_name[name] for loc, name in image.items()})


def image_key(image: Image) -> tuple:
    return tuple(sorted((x, y, n) for (x, y), n in image.items()))


@dataclass
class CleanlinessReport:
    clean: bool
    violations: list[Loc]  # offending block positions


def maps_cleanly(r: RepFn, asm: Assembly) -> CleanlinessReport:
    """Fuzz is allowed only 4-adjacent to resolved blocks, never only
    diagonally; a lone nonempty block at the origin is also clean."""
    blocks = blocks_of(asm, r.m)
    resolved = {b for b, contents in blocks.items()
                if r.resolve_block(contents) is not None}
    if len(blocks) == 1 and next(iter(blocks)) == (0, 0):
        return CleanlinessReport(True, [])
    bad = []
    for b in blocks:
        if b in resolved:
            continue
        (bx, by) = b
        if not any((bx + dx, by + dy) in resolved
                   for dx, dy in ((0, 1), (1, 0), (0, -1), (-1, 0))):
            bad.append(b)
    return CleanlinessReport(not bad, sorted(bad, key=lambda p: (p[1], p[0])))


def equiv_mod_l(sys: SystemDef, alpha: Assembly, beta: Assembly) -> bool:
    """beta is an intermediate between alpha and one of its one-step
    successors: alpha <= beta <= gamma with the new tiles drawn from
    alpha's frontier and fewer than l of them placed so far.

    Follows the letter of the definition: a successor gamma of exactly
    l new tiles must exist, so when the frontier is smaller than l (in
    particular at terminal alpha) the relation is empty.
    """
    if not alpha.is_subassembly_of(beta):
        return False
    delta = {loc: beta[loc] for loc in beta.cells if loc not in alpha}
    fr = frontier(sys, alpha)
    for loc, t in delta.items():
        cands = fr.get(loc)
        if cands is None or all(c.name != t.name for c in cands):
            return False
    if sys.synchronicity == math.inf:
        return len(fr) > 0
    l = int(sys.synchronicity)
    return len(delta) < l and len(fr) >= l


# ---------------------------------------------------------------------------
# reports


@dataclass
class ConditionResult:
    verdict: str  # pass | fail | inconclusive
    detail: str = ""


@dataclass
class CheckReport:
    mode: str
    conditions: dict[str, ConditionResult] = field(default_factory=dict)

    @property
    def verdict(self) -> str:
        vs = {c.verdict for c in self.conditions.values()}
        if "fail" in vs:
            return "fail"
        if "inconclusive" in vs:
            return "inconclusive"
        return "pass"

    @property
    def exit_code(self) -> int:
        return {"pass": 0, "fail": 1, "inconclusive": 2}[self.verdict]

    def to_obj(self) -> dict:
        return {"mode": self.mode, "verdict": self.verdict,
                "conditions": {k: {"verdict": v.verdict, "detail": v.detail}
                               for k, v in self.conditions.items()}}


@dataclass
class Bound:
    simulated_tiles: int = 8
    simulator_tiles: int = 200
    state_budget: int = 200_000


# ---------------------------------------------------------------------------
# equivalent productions (four conditions)


def check_equivalent_productions(simulator: SystemDef, simulated: SystemDef,
                                 r: RepFn, bound: Bound) -> CheckReport:
    rep = CheckReport("productions")
    t_states, t_terms, t_bounded = _explore(
        simulated, bound.simulated_tiles, bound.state_budget)
    s_states, s_terms, s_bounded = _explore(
        simulator, bound.simulator_tiles, bound.state_budget)

    t_by_key = {k: a for k, a in t_states.items()}

    # condition 1: every simulator production maps, modulo l, onto some
    # simulated production
    bad = None
    inconclusive1 = False
    for a_prime in s_states.values():
        img = rstar(r, a_prime)
        if not img:
            bad = (a_prime, "image is empty")
            break
        try:
            img_asm = image_as_assembly(img, simulated.tileset)
        except (BadAssemblyError, KeyError) as e:
            bad = (a_prime, f"image is not an assembly: {e}")
            break
        hit = any(alpha.is_subassembly_of(img_asm)
                  and equiv_mod_l(simulated, alpha, img_asm)
                  for alpha in t_states.values())
        if not hit:
            slack = (int(simulated.synchronicity)
                     if simulated.synchronicity != math.inf else len(img))
            if t_bounded and len(img) + slack >= bound.simulated_tiles:
                inconclusive1 = True
            else:
                bad = (a_prime, f"image {sorted(img.items())} matches no production")
                break
    if bad is not None:
        rep.conditions["1-images-are-productions"] = ConditionResult(
            "fail", bad[1])
    elif inconclusive1:
        rep.conditions["1-images-are-productions"] = ConditionResult(
            "inconclusive", "image near the enumeration bound")
    else:
        rep.conditions["1-images-are-productions"] = ConditionResult("pass")

    # condition 2: every simulated production has an exact preimage
    image_keys = set()
    for a_prime in s_states.values():
        image_keys.add(image_key(rstar(r, a_prime)))
    missing = [a for k, a in t_states.items()
               if image_key({loc: t.name for loc, t in a.cells.items()}) not in image_keys]
    if not missing:
        rep.conditions["2-productions-have-preimages"] = ConditionResult("pass")
    elif s_bounded:
        rep.conditions["2-productions-have-preimages"] = ConditionResult(
            "inconclusive", f"{len(missing)} productions unmatched under a truncated "
            "simulator enumeration")
    else:
        rep.conditions["2-productions-have-preimages"] = ConditionResult(
            "fail", f"production {missing[0].key()} has no preimage")

    # condition 3: terminal images equal terminal productions (restricted
    # to terminals fully inside the bound)
    t_term_keys = {image_key({loc: t.name for loc, t in a.cells.items()})
                   for a in t_terms.values()}
    s_term_images = {image_key(rstar(r, a)) for a in s_terms.values()}
    extra = s_term_images - t_term_keys
    miss = t_term_keys - s_term_images
    if extra:
        rep.conditions["3-terminal-images"] = ConditionResult(
            "fail", "a simulator terminal maps outside the simulated terminal set")
    elif miss and not s_bounded:
        rep.conditions["3-terminal-images"] = ConditionResult(
            "fail", "a simulated terminal is not the image of any simulator terminal")
    elif (t_bounded and not t_terms) or (s_bounded and (miss or not s_terms)):
        rep.conditions["3-terminal-images"] = ConditionResult(
            "inconclusive", "no terminal fully inside the bound")
    else:
        rep.conditions["3-terminal-images"] = ConditionResult("pass")

    # condition 4: clean mapping for every simulator production
    dirty = None
    for a_prime in s_states.values():
        c = maps_cleanly(r, a_prime)
        if not c.clean:
            dirty = (a_prime, c.violations)
            break
    if dirty is None:
        rep.conditions["4-clean-mapping"] = ConditionResult("pass")
    else:
        rep.conditions["4-clean-mapping"] = ConditionResult(
            "fail", f"fuzz violation at blocks {dirty[1]}")
    return rep


# ---------------------------------------------------------------------------
# follows


def _delta_reachable(sys: SystemDef, start: Assembly, target: Assembly,
                     budget: int = 20_000) -> bool:
    """Can the system produce target from start placing only target's tiles?"""
    if not start.is_subassembly_of(target):
        return False
    if len(start) == len(target):
        return True
    seen = {start.key()}
    stack = [start]
    while stack:
        cur = stack.pop()
        fr = frontier(sys, cur)
        if not fr:
            continue
        m = mandated_count(sys, len(fr))
        usable = {loc: tuple(c for c in cands if target.get(loc) is not None
                             and target[loc].name == c.name)
                  for loc, cands in fr.items()}
        # a step must fill m frontier cells; cells outside the target make
        # the target unreachable along that branch unless enough usable
        locs = [loc for loc, cs in usable.items() if cs]
        if len(locs) < m:
            continue
        for subset in itertools.combinations(sorted(locs, key=lambda p: (p[1], p[0])), m):
            nxt = cur.copy()
            for loc in subset:
                nxt.place(loc, target[loc])
            k = nxt.key()
            if k in seen:
                continue
            if len(seen) > budget:
                raise StateBudgetExceededError("follows search budget")
            seen.add(k)
            if len(nxt) == len(target):
                if nxt.key() == target.key():
                    return True
                continue
            stack.append(nxt)
    return False


def check_follows(trace_s: Trace, simulated: SystemDef, r: RepFn) -> CheckReport:
    """For each consecutive trace prefix pair, the mapped assemblies must
    be joined by simulated-side steps (taking alpha'' = alpha' and
    beta'' = beta', the natural witnesses)."""
    rep = CheckReport("follows")
    prev_img: Image | None = None
    index = 0
    for asm in trace_s.prefixes():
        img = rstar(r, asm)
        if prev_img is not None and image_key(img) != image_key(prev_img):
            try:
                a = image_as_assembly(prev_img, simulated.tileset) if prev_img else None
                b = image_as_assembly(img, simulated.tileset)
            except (BadAssemblyError, KeyError) as e:
                rep.conditions["steps-map-to-productions"] = ConditionResult(
                    "fail", f"prefix {index}: image invalid: {e}")
                return rep
            ok = a is not None and _delta_reachable(simulated, a, b)
            if not ok:
                rep.conditions["steps-map-to-productions"] = ConditionResult(
                    "fail", f"prefix {index}: the simulated system cannot step "
                    f"between the consecutive images")
                return rep
        prev_img = img
        index += 1
    rep.conditions["steps-map-to-productions"] = ConditionResult("pass")
    return rep


# ---------------------------------------------------------------------------
# synchronously follows


def _one_step_successors(sys: SystemDef, asm: Assembly, limit: int = 50_000):
    fr = frontier(sys, asm)
    if not fr:
        return
    for choice in step_choices(sys, fr, limit=limit):
        nxt = asm.copy()
        nxt.place_many({loc: sys.tileset.by_name[name]
                        for loc, name in choice.placements})
        yield nxt


def check_sync_follows(trace_s: Trace, simulated: SystemDef, r: RepFn,
                       s: int) -> CheckReport:
    """Align a simulated assembly sequence against the recorded trace.

    The i-th simulated assembly must appear as the image of some trace
    prefix inside the temporal window [(i-1)s, (i+1)s]; the alignment must
    also exhaust the trace (the final image is at most one simulated step
    ahead of the last aligned assembly).  Reports the first index whose
    window offers no legal continuation.
    """
    rep = CheckReport("sync-follows")
    if s < 1:
        raise ValueError("temporal scale factor must be >= 1")
    images: list[Image] = [rstar(r, a) for a in trace_s.prefixes()]
    n = len(images) - 1

    seed_img = images[0]
    sigma = {loc: t.name for loc, t in simulated.seed.cells.items()}
    if image_key(seed_img) != image_key(sigma):
        rep.conditions["1-seed-maps-to-seed"] = ConditionResult(
            "fail", "the simulator seed does not resolve to the simulated seed")
        return rep
    rep.conditions["1-seed-maps-to-seed"] = ConditionResult("pass")

    # greedy alignment with per-index image candidates
    cur = simulated.seed.copy()
    i = 1
    while True:
        lo = max(0, (i - 1) * s)
        hi = min((i + 1) * s, n)
        if lo > n:
            break  # trace exhausted; nothing more is required of the window
        window_keys = {}
        for j in range(lo, hi + 1):
            window_keys.setdefault(image_key(images[j]), j)
        # the final coverage condition: if the last image equals the
        # current alignment modulo one pending step, we are done
        final_img = images[n]
        try:
            final_asm = image_as_assembly(final_img, simulated.tileset)
        except (BadAssemblyError, KeyError):
            final_asm = None
        if final_asm is not None and cur.key() == final_asm.key():
            break
        advanced = False
        for nxt in _one_step_successors(simulated, cur):
            k = image_key({loc: t.name for loc, t in nxt.cells.items()})
            if k in window_keys:
                cur = nxt
                advanced = True
                break
        if not advanced:
            if final_asm is not None and equiv_mod_l(simulated, cur, final_asm):
                break
            rep.conditions["2-window-alignment"] = ConditionResult(
                "fail", f"no simulated step matches any image in the window "
                f"[{lo}, {hi}] at alignment index {i}")
            return rep
        i += 1
    # coverage: the alignment must account for the whole recorded trace
    final_img = images[n]
    covered = False
    if final_img:
        try:
            final_asm = image_as_assembly(final_img, simulated.tileset)
            covered = (cur.key() == final_asm.key()
                       or equiv_mod_l(simulated, cur, final_asm))
        except (BadAssemblyError, KeyError):
            covered = False
    if not covered:
        rep.conditions["2-window-alignment"] = ConditionResult(
            "fail", "alignment ended before covering the final trace image")
        return rep
    rep.conditions["2-window-alignment"] = ConditionResult("pass")

    follows = check_follows(trace_s, simulated, r)
    rep.conditions["3-follows"] = follows.conditions["steps-map-to-productions"]
    return rep


# ---------------------------------------------------------------------------
# models


def _reachable(sys: SystemDef, a: Assembly, b: Assembly, budget: int = 20_000) -> bool:
    try:
        return _delta_reachable(sys, a, b, budget)
    except StateBudgetExceededError:
        return False


def check_models(simulator: SystemDef, simulated: SystemDef, r: RepFn,
                 bound: Bound, depth: int = 0) -> CheckReport:
    """Depth-bounded check of the committed-representative condition.

    For each simulated production alpha we search for a committed set Pi
    of exact preimages such that (1) every one-step simulated successor is
    reachable from every member of Pi with the right image, and (2) every
    simulator assembly that maps near alpha and reaches a successor image
    is itself downstream of Pi.
    """
    rep = CheckReport("models")
    t_states, _, t_bounded = _explore(simulated, bound.simulated_tiles,
                                      bound.state_budget)
    s_states, _, s_bounded = _explore(simulator, bound.simulator_tiles,
                                      bound.state_budget)
    s_list = list(s_states.values())
    img_cache = {k: rstar(r, a) for k, a in s_states.items()}

    for alpha in t_states.values():
        alpha_key = image_key({loc: t.name for loc, t in alpha.cells.items()})
        succs = []
        fr = frontier(simulated, alpha)
        if fr:
            for nxt in _one_step_successors(simulated, alpha):
                if len(nxt) <= bound.simulated_tiles:
                    succs.append(nxt)
        pi0 = [a for k, a in s_states.items()
               if image_key(img_cache[k]) == alpha_key]
        if not pi0:
            if s_bounded:
                rep.conditions["committed-set"] = ConditionResult(
                    "inconclusive", f"no simulator production maps to {alpha_key} "
                    "within the truncated enumeration")
                continue
            rep.conditions["committed-set"] = ConditionResult(
                "fail", f"no simulator production maps to {alpha_key}")
            return rep
        ok_for_alpha = False
        best_detail = ""
        for pi in [[p] for p in pi0] + [pi0]:
            # clause 1
            c1 = True
            for beta in succs:
                beta_key = image_key({loc: t.name for loc, t in beta.cells.items()})
                targets = [b for kb, b in s_states.items()
                           if image_key(img_cache[kb]) == beta_key]
                for p in pi:
                    if not any(_reachable(simulator, p, b) for b in targets):
                        c1 = False
                        best_detail = (f"clause 1: no path from a committed "
                                       f"representative to any preimage of a successor")
                        break
                if not c1:
                    break
            if not c1:
                continue
            # clause 2
            c2 = True
            for beta in succs:
                beta_key = image_key({loc: t.name for loc, t in beta.cells.items()})
                for kb, b_prime in s_states.items():
                    if image_key(img_cache[kb]) != beta_key:
                        continue
                    for ka, a_pp in s_states.items():
                        img_a = img_cache[ka]
                        if not img_a:
                            continue
                        try:
                            img_asm = image_as_assembly(img_a, simulated.tileset)
                        except (BadAssemblyError, KeyError):
                            continue
                        if not (alpha.is_subassembly_of(img_asm)
                                and equiv_mod_l(simulated, alpha, img_asm)):
                            continue
                        if not _reachable(simulator, a_pp, b_prime):
                            continue
                        if not any(_reachable(simulator, p, a_pp) for p in pi):
                            c2 = False
                            best_detail = ("clause 2: a mapping assembly that "
                                           "reaches a successor image is not "
                                           "downstream of the committed set")
                            break
                    if not c2:
                        break
                if not c2:
                    break
            if c1 and c2:
                ok_for_alpha = True
                break
        if not ok_for_alpha:
            rep.conditions["committed-set"] = ConditionResult("fail", best_detail)
            return rep
    if "committed-set" not in rep.conditions:
        rep.conditions["committed-set"] = ConditionResult(
            "pass", "pass-within-depth" if (t_bounded or s_bounded) else "")
    return rep


# ---------------------------------------------------------------------------
# table-rule validity fuzzing


def fuzz_table_rule_validity(r: RepFn, tileset: TileSet, trials: int = 10_000,
                             seed: int = 0) -> bool:
    """Random sub/super block pairs never resolve differently."""
    if not isinstance(r.rule, TableRule):
        return True
    rng = random.Random(seed)
    names = [t.name for t in tileset]
    cells_all = [(x, y) for x in range(r.m) for y in range(r.m)]
    for _ in range(trials):
        base_entry = r.rule.entries[rng.randrange(len(r.rule.entries))][0]
        sub = dict(base_entry)
        sup = dict(sub)
        for _ in range(rng.randrange(0, r.m)):
            c = cells_all[rng.randrange(len(cells_all))]
            if c not in sup:
                sup[c] = names[rng.randrange(len(names))]
        try:
            a = r.resolve_block(sub)
            b = r.resolve_block(sup)
        except RepFnError:
            return False
        if a is not None and b != a:
            return False
    return True
