"""graph6 and edge-list (de)serialization.

Both parsers report faults with the byte offset at which they were detected.
Emission is canonical: graph6 is bit-exact, and edge lists are sorted.
"""

from __future__ import annotations

from .errors import GraphFormatError
from .graph import Graph

FORMATS = ("graph6", "edgelist")
_G6_HEADER = b">>graph6<<"


def _encode_n(n: int) -> bytes:
    if n < 63:
        return bytes([n + 63])
    if n < 258048:
        return bytes([126] + [((n >> s) & 63) + 63 for s in (12, 6, 0)])
    return bytes([126, 126] + [((n >> s) & 63) + 63 for s in (30, 24, 18, 12, 6, 0)])


def emit_graph6(g: Graph) -> bytes:
    out = bytearray(_encode_n(g.n))
    acc = nbits = 0
    for j in range(1, g.n):
        row = g.row(j)
        for i in range(j):
            acc = (acc << 1) | ((row >> i) & 1)
            nbits += 1
            if nbits == 6:
                out.append(acc + 63)
                acc = nbits = 0
    if nbits:
        out.append((acc << (6 - nbits)) + 63)
    return bytes(out)


def parse_graph6(data: bytes) -> Graph:
    if isinstance(data, str):
        data = data.encode("ascii")
    pos = 0
    if data.startswith(_G6_HEADER):
        pos = len(_G6_HEADER)
    body = data[pos:].rstrip(b"\r\n")
    end = pos + len(body)

    def take(k: int) -> list[int]:
        nonlocal pos
        if pos + k > end:
            raise GraphFormatError("truncated graph6 header", end)
        vals = []
        for i in range(k):
            b = data[pos + i]
            if not 63 <= b <= 126:
                raise GraphFormatError(f"byte {b!r} outside graph6 range 63..126", pos + i)
            vals.append(b - 63)
        pos += k
        return vals

    if pos >= end:
        raise GraphFormatError("empty graph6 string", pos)
    (first,) = take(1)
    if first < 63:
        n = first
    else:
        if pos < end and data[pos] == 126:
            pos += 1
            parts = take(6)
        else:
            parts = take(3)
        n = 0
        for p in parts:
            n = (n << 6) | p
    nbits = n * (n - 1) // 2
    nbytes = (nbits + 5) // 6
    if end - pos != nbytes:
        raise GraphFormatError(
            f"expected {nbytes} adjacency bytes for n={n}, found {end - pos}",
            pos + min(nbytes, end - pos),
        )
    rows = [0] * n
    bit = 0
    i, j = 0, 1
    for off in range(nbytes):
        b = data[pos + off]
        if not 63 <= b <= 126:
            raise GraphFormatError(f"byte {b!r} outside graph6 range 63..126", pos + off)
        val = b - 63
        for s in range(5, -1, -1):
            if bit >= nbits:
                if (val >> s) & 1:
                    raise GraphFormatError("nonzero padding bits", pos + off)
                continue
            if (val >> s) & 1:
                rows[i] |= 1 << j
                rows[j] |= 1 << i
            bit += 1
            i += 1
            if i == j:
                i, j = 0, j + 1
    return Graph.from_rows(rows)


def emit_edgelist(g: Graph) -> bytes:
    lines = [f"{g.n} {g.m}"] + [f"{u} {v}" for u, v in g.edges()]
    return ("\n".join(lines) + "\n").encode("ascii")


def parse_edgelist(data: bytes) -> Graph:
    if isinstance(data, str):
        data = data.encode("ascii")
    tokens = []  # (value, byte offset, line number)
    offset = 0
    for lineno, raw in enumerate(data.split(b"\n")):
        line = raw.split(b"#", 1)[0]
        col = 0
        for part in line.split():
            col = line.index(part, col)
            tokens.append((part, offset + col, lineno))
            col += len(part)
        offset += len(raw) + 1

    def as_int(tok):
        part, off, _ = tok
        try:
            val = int(part)
        except ValueError:
            raise GraphFormatError(f"expected an integer, found {part!r}", off) from None
        if val < 0:
            raise GraphFormatError(f"negative value {val}", off)
        return val

    if len(tokens) < 2 or tokens[0][2] != tokens[1][2]:
        raise GraphFormatError("missing 'n m' header line", tokens[0][1] if tokens else 0)
    if len(tokens) > 2 and tokens[2][2] == tokens[0][2]:
        raise GraphFormatError("header line must contain exactly 'n m'", tokens[2][1])
    n, m = as_int(tokens[0]), as_int(tokens[1])
    body = tokens[2:]
    if len(body) != 2 * m:
        raise GraphFormatError(f"header announces {m} edges, body has {len(body) / 2:g}",
                               body[-1][1] if body else len(data))
    edges = set()
    for t in range(m):
        a, b = body[2 * t], body[2 * t + 1]
        if a[2] != b[2]:
            raise GraphFormatError("edge line must contain two vertices", a[1])
        u, v = as_int(a), as_int(b)
        for val, tok in ((u, a), (v, b)):
            if val >= n:
                raise GraphFormatError(f"vertex {val} out of range for n={n}", tok[1])
        if u == v:
            raise GraphFormatError(f"loop at vertex {u}", a[1])
        key = (min(u, v), max(u, v))
        if key in edges:
            raise GraphFormatError(f"duplicate edge {key}", a[1])
        edges.add(key)
    return Graph(n, sorted(edges))


def parse_graph(data: bytes, fmt: str = "graph6") -> Graph:
    if fmt == "graph6":
        return parse_graph6(data)
    if fmt == "edgelist":
        return parse_edgelist(data)
    raise ValueError(f"unknown format {fmt!r}; expected one of {FORMATS}")


def emit_graph(g: Graph, fmt: str = "graph6") -> bytes:
    if fmt == "graph6":
        return emit_graph6(g)
    if fmt == "edgelist":
        return emit_edgelist(g)
    raise ValueError(f"unknown format {fmt!r}; expected one of {FORMATS}")
