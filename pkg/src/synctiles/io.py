"""File formats: tile systems, representation functions and traces."""

from __future__ import annotations

import hashlib
import json
import math
from typing import Any

from .core import Assembly, Glue, NULL_GLUE, SystemDef, TileSet, TileType
from .dynamics import StepChoice, Trace


class FormatError(ValueError):
    """A structured file violates the format; message names the field."""


def _require(obj: dict, field: str, where: str) -> Any:
    if field not in obj:
        raise FormatError(f"{where}: missing field {field!r}")
    return obj[field]


def _no_extras(obj: dict, allowed: set[str], where: str):
    extras = set(obj) - allowed
    if extras:
        raise FormatError(f"{where}: unknown fields {sorted(extras)}")


# ---------------------------------------------------------------------------
# tile-system files

SYSTEM_FIELDS = {"name", "temperature", "synchronicity", "glues", "tiles", "seed"}


def system_to_obj(sys: SystemDef) -> dict:
    glues = sorted({g for t in sys.tileset for g in t.glues if g.strength > 0},
                   key=lambda g: (g.label, g.strength))
    return {
        "name": sys.name,
        "temperature": sys.temperature,
        "synchronicity": "inf" if sys.synchronicity == math.inf else sys.synchronicity,
        "glues": [{"label": g.label, "strength": g.strength} for g in glues],
        "tiles": [
            {"name": t.name,
             "north": t.glues[0].label, "east": t.glues[1].label,
             "south": t.glues[2].label, "west": t.glues[3].label}
            for t in sys.tileset
        ],
        "seed": [{"x": x, "y": y, "tile": t.name}
                 for (x, y), t in sorted(sys.seed.cells.items(),
                                         key=lambda kv: (kv[0][1], kv[0][0]))],
    }


def dumps_system(sys: SystemDef) -> str:
    return json.dumps(system_to_obj(sys), indent=2, sort_keys=False) + "\n"


def system_from_obj(obj: dict) -> SystemDef:
    if not isinstance(obj, dict):
        raise FormatError("system: top level must be an object")
    _no_extras(obj, SYSTEM_FIELDS, "system")
    name = _require(obj, "name", "system")
    temperature = _require(obj, "temperature", "system")
    if not isinstance(temperature, int) or temperature < 1:
        raise FormatError("system.temperature: must be an integer >= 1")
    sync_raw = _require(obj, "synchronicity", "system")
    if sync_raw == "inf":
        synchronicity: int | float = math.inf
    elif isinstance(sync_raw, int) and sync_raw >= 1:
        synchronicity = sync_raw
    else:
        raise FormatError('system.synchronicity: must be an integer >= 1 or "inf"')

    glue_table: dict[str, Glue] = {}
    for i, g in enumerate(_require(obj, "glues", "system")):
        where = f"system.glues[{i}]"
        if not isinstance(g, dict):
            raise FormatError(f"{where}: must be an object")
        _no_extras(g, {"label", "strength"}, where)
        label = _require(g, "label", where)
        strength = _require(g, "strength", where)
        if not isinstance(label, str) or not label:
            raise FormatError(f"{where}.label: must be a non-empty string")
        if not isinstance(strength, int) or strength < 1:
            raise FormatError(f"{where}.strength: must be an integer >= 1")
        if label in glue_table:
            raise FormatError(f"{where}: duplicate glue label {label!r}")
        glue_table[label] = Glue(label, strength)

    def glue_ref(label: str, where: str) -> Glue:
        if label == "":
            return NULL_GLUE
        if label not in glue_table:
            raise FormatError(f"{where}: unknown glue label {label!r}")
        return glue_table[label]

    types = []
    for i, t in enumerate(_require(obj, "tiles", "system")):
        where = f"system.tiles[{i}]"
        if not isinstance(t, dict):
            raise FormatError(f"{where}: must be an object")
        _no_extras(t, {"name", "north", "east", "south", "west"}, where)
        tname = _require(t, "name", where)
        sides = tuple(glue_ref(_require(t, side, where), f"{where}.{side}")
                      for side in ("north", "east", "south", "west"))
        types.append(TileType(tname, sides))
    tileset = TileSet(types)

    cells = {}
    for i, s in enumerate(_require(obj, "seed", "system")):
        where = f"system.seed[{i}]"
        if not isinstance(s, dict):
            raise FormatError(f"{where}: must be an object")
        _no_extras(s, {"x", "y", "tile"}, where)
        x = _require(s, "x", where)
        y = _require(s, "y", where)
        tname = _require(s, "tile", where)
        if not isinstance(x, int) or not isinstance(y, int):
            raise FormatError(f"{where}: x and y must be integers")
        if tname not in tileset.by_name:
            raise FormatError(f"{where}.tile: unknown tile {tname!r}")
        if (x, y) in cells:
            raise FormatError(f"{where}: duplicate seed location ({x}, {y})")
        cells[(x, y)] = tileset.by_name[tname]
    if not cells:
        raise FormatError("system.seed: must contain at least one tile")
    seed = Assembly(cells)
    return SystemDef(tileset, seed, temperature, synchronicity, name=name)


def loads_system(text: str) -> SystemDef:
    return system_from_obj(json.loads(text))


def load_system(path: str) -> SystemDef:
    with open(path, "r", encoding="utf-8") as fh:
        return loads_system(fh.read())


def save_system(sys: SystemDef, path: str):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps_system(sys))


def system_hash(sys: SystemDef) -> str:
    return hashlib.sha256(dumps_system(sys).encode("utf-8")).hexdigest()


# ---------------------------------------------------------------------------
# representation-function files


def repfn_to_obj(r) -> dict:
    from .simrel import MarkerRule, TableRule
    if isinstance(r.rule, MarkerRule):
        rule = {"kind": "marker",
                "offset": [r.rule.offset[0], r.rule.offset[1]],
                "map": dict(sorted(r.rule.type_map.items()))}
    elif isinstance(r.rule, TableRule):
        rule = {"kind": "table",
                "entries": [
                    {"cells": [{"x": x, "y": y, "tile": n}
                               for (x, y), n in sorted(cells, key=lambda c: (c[0][1], c[0][0]))],
                     "maps_to": target}
                    for cells, target in r.rule.sorted_entries()
                ]}
    else:
        raise FormatError(f"unknown RepFn rule {type(r.rule).__name__}")
    return {"m": r.m, "rule": rule}


def dumps_repfn(r) -> str:
    return json.dumps(repfn_to_obj(r), indent=2) + "\n"


def repfn_from_obj(obj: dict):
    from .simrel import MarkerRule, RepFn, TableRule
    if not isinstance(obj, dict):
        raise FormatError("repfn: top level must be an object")
    _no_extras(obj, {"m", "rule"}, "repfn")
    m = _require(obj, "m", "repfn")
    if not isinstance(m, int) or m < 1:
        raise FormatError("repfn.m: must be an integer >= 1")
    rule = _require(obj, "rule", "repfn")
    kind = _require(rule, "kind", "repfn.rule")
    if kind == "marker":
        _no_extras(rule, {"kind", "offset", "map"}, "repfn.rule")
        off = _require(rule, "offset", "repfn.rule")
        if (not isinstance(off, list) or len(off) != 2
                or not all(isinstance(v, int) and 0 <= v < m for v in off)):
            raise FormatError("repfn.rule.offset: must be [dx, dy] with 0 <= d < m")
        mapping = _require(rule, "map", "repfn.rule")
        return RepFn(m, MarkerRule((off[0], off[1]), dict(mapping)))
    if kind == "table":
        _no_extras(rule, {"kind", "entries"}, "repfn.rule")
        entries = []
        for i, e in enumerate(_require(rule, "entries", "repfn.rule")):
            where = f"repfn.rule.entries[{i}]"
            _no_extras(e, {"cells", "maps_to"}, where)
            cells = frozenset(((c["x"], c["y"]), c["tile"])
                              for c in _require(e, "cells", where))
            for (x, y), _n in cells:
                if not (0 <= x < m and 0 <= y < m):
                    raise FormatError(f"{where}: cell ({x}, {y}) outside the m-block")
            entries.append((cells, _require(e, "maps_to", where)))
        return RepFn(m, TableRule(entries))
    raise FormatError(f"repfn.rule.kind: unknown kind {kind!r}")


def loads_repfn(text: str):
    return repfn_from_obj(json.loads(text))


def load_repfn(path: str):
    with open(path, "r", encoding="utf-8") as fh:
        return loads_repfn(fh.read())


def save_repfn(r, path: str):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps_repfn(r))


# ---------------------------------------------------------------------------
# trace files (line-delimited; header line, then one record per step)


def dumps_trace(trace: Trace, system_name: str | None = None) -> str:
    header = {"system": system_name or trace.system.name,
              "sha256": system_hash(trace.system)}
    lines = [json.dumps(header, sort_keys=True)]
    for k, chs in enumerate(trace.steps):
        rec = {"step": k,
               "placements": [{"x": x, "y": y, "tile": name}
                              for (x, y), name in chs.placements]}
        lines.append(json.dumps(rec, sort_keys=True))
    return "\n".join(lines) + "\n"


def save_trace(trace: Trace, path: str, system_name: str | None = None):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps_trace(trace, system_name))


def loads_trace(text: str, sys: SystemDef, verify_hash: bool = True) -> Trace:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise FormatError("trace: empty file")
    header = json.loads(lines[0])
    if verify_hash and header.get("sha256") != system_hash(sys):
        raise FormatError("trace: system hash does not match the supplied system")
    steps = []
    for i, ln in enumerate(lines[1:]):
        rec = json.loads(ln)
        if rec.get("step") != i:
            raise FormatError(f"trace: record {i} carries step index {rec.get('step')}")
        placements = {}
        for p in rec["placements"]:
            placements[(p["x"], p["y"])] = p["tile"]
        steps.append(StepChoice.of(placements))
    return Trace(system=sys, steps=steps)


def load_trace(path: str, sys: SystemDef, verify_hash: bool = True) -> Trace:
    with open(path, "r", encoding="utf-8") as fh:
        return loads_trace(fh.read(), sys, verify_hash)
