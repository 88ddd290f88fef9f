"""Edge-list text format.

Line 1 is "n m", followed by m lines "u v" in ASCII decimal, 0-indexed,
with u < v. The reader enforces the same invariants as `graph.build`.
"""

from __future__ import annotations

from pathlib import Path
from typing import TextIO

from percolab.errors import EdgeListFormatError
from percolab.graph import Graph, build


def _ints(line: str, lineno: int, count: int) -> list[int]:
    parts = line.split()
    if len(parts) != count:
        raise EdgeListFormatError(f"expected {count} integers, got {line.strip()!r}", lineno)
    try:
        return [int(p) for p in parts]
    except ValueError:
        raise EdgeListFormatError(f"not an integer in {line.strip()!r}", lineno) from None


def loads(text: str) -> Graph:
    lines = text.splitlines()
    if not lines:
        raise EdgeListFormatError("missing header line", 1)
    for i, ln in enumerate(lines):
        if not ln.isascii():
            raise EdgeListFormatError(f"non-ASCII text in {ln.strip()!r}", i + 1)
    n, m = _ints(lines[0], 1, 2)
    if n < 0 or m < 0:
        raise EdgeListFormatError("negative count in header", 1)
    body = [(i + 2, ln) for i, ln in enumerate(lines[1:]) if ln.strip()]
    if len(body) != m:
        raise EdgeListFormatError(f"header declares {m} edges, found {len(body)}")
    edges = []
    for lineno, ln in body:
        u, v = _ints(ln, lineno, 2)
        # loops, repeats and range errors are left to build
        if u > v:
            raise EdgeListFormatError(f"edge ({u}, {v}) must satisfy u < v", lineno)
        edges.append((u, v))
    return build(n, edges)


def dumps(G: Graph) -> str:
    out = [f"{G.n} {G.m}"]
    out.extend(f"{u} {v}" for u, v in G.edges.tolist())
    return "\n".join(out) + "\n"


def _decode(data: bytes) -> str:
    try:
        return data.decode("ascii")
    except UnicodeDecodeError as err:
        lineno = data.count(b"\n", 0, err.start) + 1
        raise EdgeListFormatError(f"non-ASCII byte 0x{data[err.start]:02x}", lineno) from None


def read(source: str | Path | TextIO) -> Graph:
    if hasattr(source, "read"):
        text = source.read()
        return loads(_decode(text) if isinstance(text, bytes) else text)
    return loads(_decode(Path(source).read_bytes()))


def write(G: Graph, target: str | Path | TextIO) -> None:
    if hasattr(target, "write"):
        target.write(dumps(G))
    else:
        Path(target).write_text(dumps(G), encoding="ascii")
