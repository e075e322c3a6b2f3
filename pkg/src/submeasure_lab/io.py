"""Canonical JSON forms for submeasures, coverings, matrices, colorings and maps.

Sets are sorted integer arrays, rationals are "p/q" strings (or "inf"), and
``dumps`` always sorts keys with compact separators so equal objects give
identical bytes.
"""

from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path
from typing import Any

from .banach import VectorSequence
from .colorings import PairColoring
from .core import (
    Arity,
    DirectSum,
    FiniteSubmeasure,
    MazurChain,
    Measure,
    MinCover,
    Restriction,
    SupMeasures,
    TableSubmeasure,
    materialize,
)
from .errors import InputError, MissingEntry
from .pathology import CoveringInstance
from .rational import INF, format_rational, parse_rational
from .reductions import PointMap, Pushforward
from .subsets import GroundSet, iter_bits, order_key


def dumps(obj: Any) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), ensure_ascii=False)


def _set_list(mask: int) -> list[int]:
    return list(iter_bits(mask))


def _label_out(label):
    if isinstance(label, tuple):
        return [_label_out(x) for x in label]
    if isinstance(label, Fraction):
        return format_rational(label)
    return label


def _label_in(label):
    if isinstance(label, list):
        return tuple(_label_in(x) for x in label)
    return label


def _ground_dict(ground: GroundSet) -> dict:
    d: dict = {"ground": ground.size}
    if ground.labels is not None:
        d["labels"] = [_label_out(x) for x in ground.labels]
    return d


def _field(doc: dict, key: str, where: str):
    if not isinstance(doc, dict):
        raise InputError(f"{where}: expected a JSON object")
    if key not in doc:
        raise InputError(f"{where}: missing field {key!r}")
    return doc[key]


def _ground_in(doc: dict, where: str) -> GroundSet:
    n = _field(doc, "ground", where)
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise InputError(f"{where}: field 'ground' must be a positive integer")
    labels = doc.get("labels")
    if labels is not None:
        if not isinstance(labels, list):
            raise InputError(f"{where}: field 'labels' must be a list")
        labels = tuple(_label_in(x) for x in labels)
    try:
        return GroundSet(n, labels)
    except InputError as e:
        raise InputError(f"{where}: field 'labels': {e}") from None


def _mask_in(ground: GroundSet, value, where: str) -> int:
    if not isinstance(value, list) or not all(isinstance(x, int) and not isinstance(x, bool) for x in value):
        raise InputError(f"{where}: sets must be arrays of integers")
    try:
        return ground.mask(value)
    except InputError as e:
        raise InputError(f"{where}: {e}") from None


def _rat_in(value, where: str):
    try:
        return parse_rational(value)
    except (InputError, ValueError, TypeError) as e:
        raise InputError(f"{where}: bad rational {value!r}") from e


# ---------------------------------------------------------------------------
# submeasures


def submeasure_to_dict(phi: FiniteSubmeasure) -> dict:
    d = _ground_dict(phi.ground)
    if isinstance(phi, TableSubmeasure):
        rows = sorted(phi.values.items(), key=lambda kv: order_key(kv[0]))
        d["repr"] = {"kind": "table",
                     "values": [[_set_list(m), format_rational(v)] for m, v in rows]}
    elif isinstance(phi, SupMeasures):
        d["repr"] = {"kind": "sup_measures",
                     "measures": [[format_rational(w) for w in mu.weights] for mu in phi.measures]}
    elif isinstance(phi, MinCover):
        d["repr"] = {"kind": "min_cover", "family": [_set_list(s) for s in phi.family]}
    elif isinstance(phi, MazurChain):
        ar = phi.arity
        d["repr"] = {"kind": "mazur_chain", "level1": [_set_list(s) for s in phi.level1],
                     "arity": ar.value if ar.kind == "constant" else "level",
                     "level_cap": phi.level_cap}
    elif isinstance(phi, (DirectSum, Restriction, Pushforward)):
        return submeasure_to_dict(materialize(phi))
    else:
        raise InputError(f"cannot serialize {type(phi).__name__}")
    return d


def submeasure_from_dict(doc: dict) -> FiniteSubmeasure:
    where = "submeasure"
    ground = _ground_in(doc, where)
    rep = _field(doc, "repr", where)
    kind = _field(rep, "kind", "repr")
    if kind == "table":
        values = {}
        for i, item in enumerate(_field(rep, "values", "repr")):
            if not isinstance(item, list) or len(item) != 2:
                raise InputError(f"repr.values[{i}]: expected [set, value]")
            m = _mask_in(ground, item[0], f"repr.values[{i}]")
            values[m] = _rat_in(item[1], f"repr.values[{i}]")
        return TableSubmeasure(ground, values)
    if kind == "sup_measures":
        ms = []
        for i, ws in enumerate(_field(rep, "measures", "repr")):
            if not isinstance(ws, list) or len(ws) != ground.size:
                raise InputError(f"repr.measures[{i}]: need {ground.size} weights")
            weights = tuple(_rat_in(w, f"repr.measures[{i}]") for w in ws)
            if any(w is INF or w < 0 for w in weights):
                raise InputError(f"repr.measures[{i}]: weights must be finite and nonnegative")
            ms.append(Measure(ground, weights))
        return SupMeasures(ms)
    if kind == "min_cover":
        fam = [_mask_in(ground, s, f"repr.family[{i}]") for i, s in enumerate(_field(rep, "family", "repr"))]
        return MinCover(ground, fam)
    if kind == "mazur_chain":
        gens = [_mask_in(ground, s, f"repr.level1[{i}]") for i, s in enumerate(_field(rep, "level1", "repr"))]
        a = rep.get("arity", 2)
        arity = Arity("level") if a == "level" else Arity("constant", int(a))
        return MazurChain(ground, gens, arity, int(rep.get("level_cap", 32)))
    raise InputError(f"repr.kind: unknown kind {kind!r}")


# ---------------------------------------------------------------------------
# other formats


def covering_to_dict(inst: CoveringInstance) -> dict:
    d = _ground_dict(inst.ground)
    d["family"] = [_set_list(s) for s in inst.family]
    return d


def covering_from_dict(doc: dict) -> CoveringInstance:
    ground = _ground_in(doc, "covering")
    fam = [_mask_in(ground, s, f"family[{i}]") for i, s in enumerate(_field(doc, "family", "covering"))]
    return CoveringInstance(ground, tuple(fam))


def matrix_to_dict(x: VectorSequence) -> dict:
    d = {"rows": x.rows, "cols": x.cols,
         "entries": [[format_rational(v) for v in r] for r in x.entries]}
    if x.signed:
        d["signed"] = True
    return d


def matrix_from_dict(doc: dict) -> VectorSequence:
    rows = _field(doc, "rows", "matrix")
    cols = _field(doc, "cols", "matrix")
    entries = _field(doc, "entries", "matrix")
    if not isinstance(entries, list) or len(entries) != rows:
        raise InputError(f"matrix: field 'entries' must have {rows} rows")
    out = []
    for k, r in enumerate(entries):
        if not isinstance(r, list) or len(r) != cols:
            raise InputError(f"matrix: entries[{k}] must have {cols} values")
        out.append(tuple(_rat_in(v, f"entries[{k}]") for v in r))
    return VectorSequence(tuple(out), bool(doc.get("signed", False)))


def coloring_to_dict(c: PairColoring) -> dict:
    return {"ground": c.size, "pairs1": [list(p) for p in c.pairs1()]}


def coloring_from_dict(doc: dict) -> PairColoring:
    n = _field(doc, "ground", "coloring")
    pairs = _field(doc, "pairs1", "coloring")
    if not isinstance(pairs, list) or not all(isinstance(p, list) and len(p) == 2 for p in pairs):
        raise InputError("coloring: field 'pairs1' must be a list of pairs")
    return PairColoring(n, pairs1=[tuple(p) for p in pairs])


def map_to_dict(f: PointMap) -> dict:
    return {"source": f.source.size, "target": f.target.size, "map": list(f.images)}


def map_from_dict(doc: dict) -> PointMap:
    src = _field(doc, "source", "map file")
    tgt = _field(doc, "target", "map file")
    images = _field(doc, "map", "map file")
    if not isinstance(images, list) or len(images) != src:
        raise InputError(f"map file: field 'map' must list {src} images")
    return PointMap(GroundSet(src), GroundSet(tgt), tuple(images))


def load_json(path) -> Any:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise InputError(f"cannot read {path}: {e.strerror}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise InputError(f"{path}: invalid JSON ({e.msg} at line {e.lineno})") from None


def load_submeasure(path) -> FiniteSubmeasure:
    return submeasure_from_dict(load_json(path))


def write_json(path, obj: Any) -> str:
    text = dumps(obj) + "\n"
    Path(path).write_text(text, encoding="utf-8")
    return text
