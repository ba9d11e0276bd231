"""Experiment configuration: strict JSON with a versioned schema.

Example (every key optional except ``schema_version``)::

    {
      "schema_version": 1,
      "geometry": {"rows": 12, "cols": 12,
                   "boundary": {"top": "rough", "bottom": "rough",
                                "left": "smooth", "right": "smooth"}},
      "quartet": {"anchors": {"p1": [3, 3], "p2": [7, 3], "p3": [3, 7], "p4": [7, 7]},
                  "size": [1, 1]},
      "braid": {"moving": "p1", "around": "p3", "margin": 1, "control": ["p1", "p2"]},
      "fusion": {"signs": [1, 1]},
      "shots": 10000,
      "seed": 0,
      "output": {"report": null, "diagram": null}
    }

Unknown keys and ill-typed values raise :class:`ConfigError` naming the line
of the offending key.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field

from .encoding_braiding import DEFAULT_ANCHORS, DEFAULT_SIZE
from .planar_code import BoundarySpec, BoundaryType

__all__ = ["SCHEMA_VERSION", "ConfigError", "ExperimentConfig", "load_config", "parse_config"]

SCHEMA_VERSION = 1
PUNCTURES = ("p1", "p2", "p3", "p4")


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class ExperimentConfig:
    rows: int = DEFAULT_SIZE[0]
    cols: int = DEFAULT_SIZE[1]
    boundary: BoundarySpec = field(default_factory=BoundarySpec)
    anchors: dict = field(default_factory=lambda: dict(DEFAULT_ANCHORS))
    size: tuple[int, int] = (1, 1)
    moving: str = "p1"
    around: str = "p3"
    margin: int = 1
    control: tuple[str, str] = ("p1", "p2")
    signs: tuple[int, int] = (1, 1)
    shots: int = 10000
    seed: int = 0
    report: str | None = None
    diagram: str | None = None

    def to_dict(self) -> dict:
        return {
            "schema_version": SCHEMA_VERSION,
            "geometry": {"rows": self.rows, "cols": self.cols, "boundary": self.boundary.to_dict()},
            "quartet": {"anchors": {k: list(v) for k, v in sorted(self.anchors.items())},
                        "size": list(self.size)},
            "braid": {"moving": self.moving, "around": self.around, "margin": self.margin,
                      "control": list(self.control)},
            "fusion": {"signs": list(self.signs)},
            "shots": self.shots,
            "seed": self.seed,
            "output": {"report": self.report, "diagram": self.diagram},
        }


_SCHEMA = {
    "schema_version": int,
    "geometry": {"rows": int, "cols": int, "boundary": {s: str for s in ("top", "bottom", "left", "right")}},
    "quartet": {"anchors": {p: list for p in PUNCTURES}, "size": list},
    "braid": {"moving": str, "around": str, "margin": int, "control": list},
    "fusion": {"signs": list},
    "shots": int,
    "seed": int,
    "output": {"report": (str, type(None)), "diagram": (str, type(None))},
}


def _line_of(text: str, key: str) -> int:
    m = re.search(r'"' + re.escape(key) + r'"\s*:', text)
    return text.count("\n", 0, m.start()) + 1 if m else 0


def _check(obj, schema, path: str, text: str) -> None:
    for key, value in obj.items():
        where = f"{path}.{key}" if path else key
        line = _line_of(text, key)
        if key not in schema:
            raise ConfigError(f"line {line}: unknown key {where!r}")
        expected = schema[key]
        if isinstance(expected, dict):
            if not isinstance(value, dict):
                raise ConfigError(f"line {line}: {where!r} must be an object")
            _check(value, expected, where, text)
        elif not isinstance(value, expected) or (expected is int and isinstance(value, bool)):
            raise ConfigError(f"line {line}: {where!r} has the wrong type")


def _pair(value, name: str, line: int) -> tuple:
    if len(value) != 2 or not all(isinstance(v, (int, str)) and not isinstance(v, bool) for v in value):
        raise ConfigError(f"line {line}: {name!r} must have exactly two entries")
    return tuple(value)


def parse_config(text: str) -> ExperimentConfig:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"line {exc.lineno}: {exc.msg}") from None
    if not isinstance(data, dict):
        raise ConfigError("line 1: config must be a JSON object")
    _check(data, _SCHEMA, "", text)
    if data.get("schema_version") != SCHEMA_VERSION:
        raise ConfigError(
            f"line {_line_of(text, 'schema_version')}: schema_version must be {SCHEMA_VERSION}"
        )
    kw = {}
    geo = data.get("geometry", {})
    for k in ("rows", "cols"):
        if k in geo:
            kw[k] = geo[k]
    if "boundary" in geo:
        try:
            kw["boundary"] = BoundarySpec(**{**BoundarySpec().to_dict(), **geo["boundary"]})
        except ValueError:
            allowed = ", ".join(b.value for b in BoundaryType)
            raise ConfigError(f"line {_line_of(text, 'boundary')}: boundary types are {allowed}") from None
    quartet = data.get("quartet", {})
    if "anchors" in quartet:
        anchors = dict(DEFAULT_ANCHORS)
        for pid, a in quartet["anchors"].items():
            anchors[pid] = _pair(a, f"quartet.anchors.{pid}", _line_of(text, pid))
        kw["anchors"] = anchors
    if "size" in quartet:
        kw["size"] = _pair(quartet["size"], "quartet.size", _line_of(text, "size"))
    braid = data.get("braid", {})
    for k in ("moving", "around", "margin"):
        if k in braid:
            kw[k] = braid[k]
    if "control" in braid:
        kw["control"] = _pair(braid["control"], "braid.control", _line_of(text, "control"))
    for pid in (kw.get("moving"), kw.get("around"), *kw.get("control", ())):
        if pid is not None and pid not in PUNCTURES:
            raise ConfigError(f"line {_line_of(text, 'braid')}: unknown puncture {pid!r}")
    if "signs" in data.get("fusion", {}):
        signs = _pair(data["fusion"]["signs"], "fusion.signs", _line_of(text, "signs"))
        if any(s not in (1, -1) for s in signs):
            raise ConfigError(f"line {_line_of(text, 'signs')}: signs must be +1 or -1")
        kw["signs"] = signs
    for k in ("shots", "seed"):
        if k in data:
            kw[k] = data[k]
    if kw.get("shots", 1) < 1:
        raise ConfigError(f"line {_line_of(text, 'shots')}: shots must be at least 1")
    out = data.get("output", {})
    for k in ("report", "diagram"):
        if k in out:
            kw[k] = out[k]
    return ExperimentConfig(**kw)


def load_config(path: str | None) -> ExperimentConfig:
    if path is None:
        return ExperimentConfig()
    with open(path, encoding="utf-8") as fh:
        return parse_config(fh.read())
