"""JSON and plain text forms of designs.

The ``paper-text`` form starts with a header line such as ``cdm Z4xZ2xZ2 s=0`` or
``dm Z2xZ2 lambda=2`` followed by one line per row; entries are compressed
coordinate strings, multi-digit coordinates in parentheses.
"""

from __future__ import annotations

import json
import os
import re
from pathlib import Path

from .designs import ContractedDifferenceMatrix, DifferenceMatrix
from .errors import SchemaError, StructuralError
from .groups import GroupSpec, parse_coords

FORMATS = ("json", "paper-text")


def design_to_json(design) -> dict:
    if isinstance(design, ContractedDifferenceMatrix):
        head = {"kind": "cdm", "group": design.group.to_json(), "s": design.s}
    elif isinstance(design, DifferenceMatrix):
        head = {"kind": "dm", "group": design.group.to_json(), "lambda": design.lam}
    else:
        raise SchemaError(f"cannot serialize {type(design).__name__}")
    head["rows"] = design.coord_rows()
    return head


def _dump_json(data: dict) -> str:
    # one matrix row per line keeps large designs readable
    lines = ["{"]
    items = list(data.items())
    for i, (key, val) in enumerate(items):
        end = "," if i < len(items) - 1 else ""
        if key == "rows":
            rows = [json.dumps(r, separators=(",", ":")) for r in val]
            lines.append('  "rows": [')
            lines += [f"    {r}," for r in rows[:-1]] + [f"    {rows[-1]}"]
            lines.append(f"  ]{end}")
        else:
            lines.append(f"  {json.dumps(key)}: {json.dumps(val)}{end}")
    lines.append("}")
    return "\n".join(lines) + "\n"


def render_design(design, fmt: str = "json") -> str:
    if fmt == "json":
        return _dump_json(design_to_json(design))
    if fmt == "paper-text":
        if isinstance(design, ContractedDifferenceMatrix):
            head = f"cdm {design.group} s={design.s}"
        else:
            head = f"dm {design.group} lambda={design.lam}"
        return head + "\n" + str(design) + "\n"
    raise SchemaError(f"unknown format {fmt!r}; choose from {', '.join(FORMATS)}")


def _rows(group: GroupSpec, rows, where: str) -> list[list[tuple[int, ...]]]:
    if not isinstance(rows, list) or not rows:
        raise SchemaError(f"{where}: rows must be a nonempty list")
    out = []
    for i, r in enumerate(rows):
        cells = r.split() if isinstance(r, str) else r
        if not isinstance(cells, list) or not cells:
            raise SchemaError(f"{where}[{i}]: row must be a nonempty string or list")
        parsed = []
        for j, c in enumerate(cells):
            try:
                parsed.append(parse_coords(c, group.rank) if isinstance(c, str) else tuple(int(x) for x in c))
            except (StructuralError, TypeError, ValueError) as exc:
                raise SchemaError(f"{where}[{i}][{j}]: {exc}") from None
        out.append(parsed)
    if len({len(r) for r in out}) != 1:
        raise SchemaError(f"{where}: rows have different lengths")
    return out


def design_from_json(data: dict):
    if not isinstance(data, dict):
        raise SchemaError("top level must be an object")
    for key in ("kind", "group", "rows"):
        if key not in data:
            raise SchemaError(f"field {key!r} is missing")
    try:
        G = GroupSpec.parse(data["group"])
    except (StructuralError, KeyError, TypeError) as exc:
        raise SchemaError(f"field 'group': {exc}") from None
    rows = _rows(G, data["rows"], "field 'rows'")
    try:
        if data["kind"] == "cdm":
            return ContractedDifferenceMatrix.from_rows(G, int(data.get("s", 0)), rows)
        if data["kind"] == "dm":
            return DifferenceMatrix.from_rows(G, int(data.get("lambda", 1)), rows)
    except StructuralError as exc:
        raise SchemaError(f"field 'rows': {exc}") from None
    raise SchemaError(f"field 'kind': expected 'cdm' or 'dm', got {data['kind']!r}")


_HEAD = re.compile(r"(cdm|dm)\s+(\S+)(?:\s+(s|lambda)=(\d+))?\s*$")


def design_from_text(text: str):
    lines = [ln for ln in text.splitlines() if ln.strip() and not ln.lstrip().startswith("#")]
    if not lines:
        raise SchemaError("line 1: empty document")
    m = _HEAD.match(lines[0].strip())
    if m is None:
        raise SchemaError(f"line 1: expected a header like 'cdm Z4xZ2 s=0', got {lines[0]!r}")
    kind, group, key, val = m.groups()
    if key is not None and (key == "s") != (kind == "cdm"):
        raise SchemaError(f"line 1: {key}= does not belong to a {kind}")
    data = {"kind": kind, "group": group, "rows": lines[1:]}
    if key:
        data[key] = int(val)
    try:
        return design_from_json(data)
    except SchemaError as exc:
        msg = str(exc)
        hit = re.match(r"field 'rows'\[(\d+)\]", msg)
        if hit:
            raise SchemaError(f"line {int(hit.group(1)) + 2}: {msg}") from None
        raise


def parse_design(source):
    """Read a design from a path, a JSON document or ``paper-text``."""
    if isinstance(source, Path) or (isinstance(source, str) and "\n" not in source
                                    and os.path.exists(source)):
        source = Path(source).read_text()
    text = source.strip()
    if not text:
        raise SchemaError("empty document")
    if text.startswith("{"):
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise SchemaError(f"line {exc.lineno}: {exc.msg}") from None
        return design_from_json(data)
    return design_from_text(text)
