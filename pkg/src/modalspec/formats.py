"""Reading and writing LTS (``.aut``) and DMTS (``.dmts``) files.

``.aut`` is the Aldebaran format::

    des (0, 2, 3)
    (0, "a", 1)
    (1, "b", 2)

Labels may be quoted, or bare when they contain no comma, parenthesis, quote
or whitespace.

``.dmts`` is a JSON document::

    {
      "format": "dmts",
      "version": 1,
      "states": 2,
      "initial": [0],
      "may": [[0, "a", 1]],
      "must": [[0, [["a", 1]]]]
    }

``format`` and ``version`` are optional on input.  On output every list is
sorted (must-entries by source, then by their sorted branch list), one entry
per line, UTF-8 with LF line endings.
"""
from __future__ import annotations

import json
import re
from pathlib import Path

from .dmts import Dmts
from .errors import CountMismatch, InvalidState, ParseError
from .lts import Lts

DMTS_FORMAT = "dmts"
DMTS_VERSION = 1

_HEADER = re.compile(r"^des\s*\(\s*(\d+)\s*,\s*(\d+)\s*,\s*(\d+)\s*\)$")
_EDGE = re.compile(r'^\(\s*(\d+)\s*,\s*(?:"([^"]*)"|([^",()\s]+))\s*,\s*(\d+)\s*\)$')
_BARE = re.compile(r'^[^",()\s]+$')


def parse_aut(text: str) -> Lts:
    lines = text.splitlines()
    header = None
    edges = []
    for no, raw in enumerate(lines, 1):
        line = raw.strip()
        if not line:
            continue
        if header is None:
            m = _HEADER.match(line)
            if not m:
                raise ParseError(f"expected 'des (init, #transitions, #states)', got {line!r}", no)
            header = (int(m[1]), int(m[2]), int(m[3]), no)
            continue
        m = _EDGE.match(line)
        if not m:
            raise ParseError(f"malformed transition {line!r}", no)
        label = m[2] if m[2] is not None else m[3]
        edges.append((int(m[1]), label, int(m[4]), no))
    if header is None:
        raise ParseError("missing 'des' header", 1)
    init, n_trans, n_states, hline = header
    if n_trans != len(edges):
        raise CountMismatch(f"header announces {n_trans} transitions, found {len(edges)}", hline)
    if n_states < 1:
        raise ParseError("an LTS needs at least one state", hline)
    if init >= n_states:
        raise ParseError(f"initial state {init} out of range 0..{n_states - 1}", hline)
    for s, _, t, no in edges:
        if s >= n_states or t >= n_states:
            raise ParseError(f"transition leaves state range 0..{n_states - 1}", no)
    return Lts(n_states, init, frozenset((s, a, t) for s, a, t, _ in edges))


def _quote(label: str) -> str:
    if '"' in label or "\n" in label:
        raise ValueError(f"label {label!r} cannot be written to .aut")
    return f'"{label}"'


def write_aut(i: Lts) -> str:
    trans = i.sorted_transitions()
    out = [f"des ({i.initial}, {len(trans)}, {i.n_states})"]
    out += [f"({s}, {_quote(a)}, {t})" for s, a, t in trans]
    return "\n".join(out) + "\n"


def _line_of(text: str, needle: str) -> int | None:
    for no, line in enumerate(text.splitlines(), 1):
        if needle in line:
            return no
    return None


def _state(x, what):
    if isinstance(x, bool) or not isinstance(x, int):
        raise ParseError(f"{what} must be an integer, got {x!r}")
    return x


def parse_dmts(text: str) -> Dmts:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(e.msg, e.lineno) from None
    if not isinstance(doc, dict):
        raise ParseError("top level must be an object", 1)
    if doc.get("format", DMTS_FORMAT) != DMTS_FORMAT:
        raise ParseError(f"unknown format {doc['format']!r}", _line_of(text, '"format"'))
    if doc.get("version", DMTS_VERSION) != DMTS_VERSION:
        raise ParseError(f"unsupported version {doc['version']!r}", _line_of(text, '"version"'))
    unknown = set(doc) - {"format", "version", "states", "initial", "may", "must"}
    if unknown:
        raise ParseError(f"unknown fields {sorted(unknown)}")
    if "states" not in doc:
        raise ParseError("missing field 'states'")
    n = _state(doc["states"], "states")

    def listing(key):
        v = doc.get(key, [])
        if not isinstance(v, list):
            raise ParseError(f"'{key}' must be a list", _line_of(text, f'"{key}"'))
        return v

    initial = [_state(s, "initial state") for s in listing("initial")]
    may = []
    for entry in listing("may"):
        if not (isinstance(entry, list) and len(entry) == 3 and isinstance(entry[1], str)):
            raise ParseError(f"may entry {entry!r} is not [s, label, t]")
        may.append((_state(entry[0], "may source"), entry[1], _state(entry[2], "may target")))
    must = []
    for entry in listing("must"):
        if not (isinstance(entry, list) and len(entry) == 2 and isinstance(entry[1], list)):
            raise ParseError(f"must entry {entry!r} is not [s, [[label, t], ...]]")
        branches = []
        for b in entry[1]:
            if not (isinstance(b, list) and len(b) == 2 and isinstance(b[0], str)):
                raise ParseError(f"must branch {b!r} is not [label, t]")
            branches.append((b[0], _state(b[1], "must branch target")))
        must.append((_state(entry[0], "must source"), frozenset(branches)))
    try:
        return Dmts(n, frozenset(initial), frozenset(may), frozenset(must))
    except InvalidState as e:
        raise ParseError(str(e)) from None


def write_dmts(d: Dmts) -> str:
    may = sorted(d.may)
    must = sorted(((s, sorted(n)) for s, n in d.must), key=lambda x: (x[0], x[1]))

    def block(entries):
        if not entries:
            return "[]"
        body = ",\n".join("    " + json.dumps(e, ensure_ascii=False) for e in entries)
        return "[\n" + body + "\n  ]"

    return (
        "{\n"
        f'  "format": "{DMTS_FORMAT}",\n'
        f'  "version": {DMTS_VERSION},\n'
        f'  "states": {d.n_states},\n'
        f'  "initial": {json.dumps(sorted(d.initial))},\n'
        f'  "may": {block([[s, a, t] for s, a, t in may])},\n'
        f'  "must": {block([[s, [[a, t] for a, t in n]] for s, n in must])}\n'
        "}\n"
    )


def read_system(path):
    """Load an ``.aut`` file as :class:`Lts`, anything else as :class:`Dmts`."""
    path = Path(path)
    text = path.read_text(encoding="utf-8")
    if path.suffix == ".aut":
        return parse_aut(text)
    return parse_dmts(text)


def write_text(path, text: str):
    Path(path).write_text(text, encoding="utf-8", newline="\n")
