"""Reading and writing problem instances and point groups.

Instance files are JSON documents::

    {
      "dimension": 2,
      "attractions": [{"shape": {"kind": "point", "point": [0, 0]}, "weight": 1.0}],
      "repulsions":  [{"shape": {"kind": "ball", "center": [1, 1], "radius": 2}, "weight": 1.0}],
      "constraint":  {"kind": "box", "lower": ["-inf", "-inf"], "upper": ["inf", "inf"]}
    }

Shape kinds are point / ball / box / halfspace; box bounds accept the string
literals "-inf" and "inf".  CSV point groups are one coordinate tuple per
row, optional header (detected by a non-numeric first row).
"""

from __future__ import annotations

import csv
import json
import math
from pathlib import Path

import numpy as np

from .geometry import AxisBox, Ball, ConvexSet, Halfspace, Singleton
from .model import ProblemInstance, WeightedSet

__all__ = [
    "ParseError",
    "ValidationError",
    "load_instance",
    "write_instance",
    "instance_to_dict",
    "instance_from_dict",
    "load_points_csv",
]


class ParseError(ValueError):
    """Malformed instance or CSV file."""


class ValidationError(ValueError):
    """Structurally parseable but semantically invalid instance."""


def _bound(value) -> float:
    if value == "inf":
        return math.inf
    if value == "-inf":
        return -math.inf
    return float(value)


def _bound_to_json(value: float):
    if value == math.inf:
        return "inf"
    if value == -math.inf:
        return "-inf"
    return value


def shape_from_dict(d: dict) -> ConvexSet:
    try:
        kind = d["kind"]
        if kind == "point":
            return Singleton(np.asarray(d["point"], dtype=float))
        if kind == "ball":
            return Ball(np.asarray(d["center"], dtype=float), float(d["radius"]))
        if kind == "box":
            return AxisBox(
                np.array([_bound(v) for v in d["lower"]]),
                np.array([_bound(v) for v in d["upper"]]),
            )
        if kind == "halfspace":
            return Halfspace(np.asarray(d["normal"], dtype=float), float(d["offset"]))
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"bad shape {d!r}: {exc}") from exc
    raise ParseError(f"unknown shape kind {kind!r}")


def shape_to_dict(s: ConvexSet) -> dict:
    if isinstance(s, Singleton):
        return {"kind": "point", "point": s.point.tolist()}
    if isinstance(s, Ball):
        return {"kind": "ball", "center": s.center.tolist(), "radius": s.radius}
    if isinstance(s, AxisBox):
        return {
            "kind": "box",
            "lower": [_bound_to_json(v) for v in s.lower],
            "upper": [_bound_to_json(v) for v in s.upper],
        }
    if isinstance(s, Halfspace):
        return {"kind": "halfspace", "normal": s.normal.tolist(), "offset": s.offset}
    raise TypeError(f"unsupported set type {type(s).__name__}")


def instance_from_dict(doc: dict) -> ProblemInstance:
    try:
        dimension = int(doc["dimension"])
        attractions = [
            WeightedSet(shape_from_dict(e["shape"]), float(e["weight"]))
            for e in doc["attractions"]
        ]
        repulsions = [
            WeightedSet(shape_from_dict(e["shape"]), float(e["weight"]))
            for e in doc.get("repulsions", [])
        ]
        constraint = shape_from_dict(doc["constraint"])
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, ParseError):
            raise
        raise ParseError(f"bad instance document: {exc}") from exc
    inst = ProblemInstance(dimension, attractions, repulsions, constraint)
    errors = []
    if not attractions:
        errors.append("instance has no attraction sets")
    for label, group in (("attraction", attractions), ("repulsion", repulsions)):
        for i, w in enumerate(group):
            if not w.weight > 0:
                errors.append(f"{label} {i}: weight must be strictly positive")
            if w.set.dim != dimension:
                errors.append(f"{label} {i}: dimension mismatch")
    if constraint.dim != dimension:
        errors.append("constraint set dimension mismatch")
    if errors:
        raise ValidationError("; ".join(errors))
    return inst


def instance_to_dict(inst: ProblemInstance) -> dict:
    return {
        "dimension": inst.dimension,
        "attractions": [
            {"shape": shape_to_dict(w.set), "weight": w.weight}
            for w in inst.attractions
        ],
        "repulsions": [
            {"shape": shape_to_dict(w.set), "weight": w.weight}
            for w in inst.repulsions
        ],
        "constraint": shape_to_dict(inst.constraint),
    }


def load_instance(path) -> ProblemInstance:
    try:
        with open(path) as fh:
            doc = json.load(fh)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: invalid JSON at line {exc.lineno}: {exc.msg}") from exc
    return instance_from_dict(doc)


def write_instance(inst: ProblemInstance, path) -> None:
    Path(path).write_text(
        json.dumps(instance_to_dict(inst), indent=2, sort_keys=True) + "\n"
    )


def load_points_csv(
    path,
    shape: str = "point",
    half_side: float = 0.0,
    weight: float = 1.0,
) -> list[WeightedSet]:
    """One weighted set per CSV row: singletons, or axis boxes of the given
    half side centered at the rows."""
    if shape not in ("point", "square"):
        raise ParseError(f"unknown csv shape {shape!r}")
    if shape == "square" and not half_side > 0:
        raise ParseError("square shape needs a positive half side")
    sets: list[WeightedSet] = []
    with open(path, newline="") as fh:
        for rownum, row in enumerate(csv.reader(fh), start=1):
            if not row or all(not c.strip() for c in row):
                continue
            try:
                coords = np.array([float(c) for c in row])
            except ValueError:
                if rownum == 1:
                    continue  # header row
                raise ParseError(f"{path}: non-numeric data at row {rownum}")
            if shape == "point":
                s: ConvexSet = Singleton(coords)
            else:
                s = AxisBox(coords - half_side, coords + half_side)
            sets.append(WeightedSet(s, weight))
    if not sets:
        raise ParseError(f"{path}: no data rows")
    return sets
