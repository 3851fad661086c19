"""Simple undirected graphs on at most 32 vertices.

Adjacency is stored as one bitmask per vertex. Graphs are immutable and
hashable, and round-trip through graph6.
"""

from __future__ import annotations

import random
from typing import Iterable, Sequence

from .errors import Graph6Error
from .linalg import BigMatrix

MAX_VERTICES = 32


class Graph:
    __slots__ = ("n", "adj")

    def __init__(self, n: int, adj: Sequence[int]):
        if not 1 <= n <= MAX_VERTICES:
            raise ValueError(f"vertex count must be in 1..{MAX_VERTICES}, got {n}")
        if len(adj) != n:
            raise ValueError("need one adjacency row per vertex")
        full = (1 << n) - 1
        for i, row in enumerate(adj):
            if row & ~full:
                raise ValueError(f"row {i} refers to a vertex >= {n}")
            if row >> i & 1:
                raise ValueError(f"loop at vertex {i}")
            for j in range(n):
                if (row >> j & 1) != (adj[j] >> i & 1):
                    raise ValueError(f"asymmetric adjacency at ({i}, {j})")
        self.n = n
        self.adj = tuple(adj)

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> Graph:
        adj = [0] * n
        for u, v in edges:
            if u == v:
                raise ValueError(f"loop at vertex {u}")
            adj[u] |= 1 << v
            adj[v] |= 1 << u
        return cls(n, adj)

    @classmethod
    def from_matrix(cls, rows: Iterable[Sequence[int]]) -> Graph:
        rows = [list(r) for r in rows]
        n = len(rows)
        adj = []
        for i, r in enumerate(rows):
            if len(r) != n:
                raise ValueError("adjacency matrix must be square")
            mask = 0
            for j, x in enumerate(r):
                if x not in (0, 1):
                    raise ValueError(f"entry ({i}, {j}) = {x} is not 0/1")
                if x:
                    mask |= 1 << j
            adj.append(mask)
        return cls(n, adj)

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self.adj[u] >> v & 1)

    def edges(self) -> list[tuple[int, int]]:
        return [(i, j) for j in range(self.n) for i in range(j) if self.adj[i] >> j & 1]

    def edge_count(self) -> int:
        return sum(bin(r).count("1") for r in self.adj) // 2

    def degrees(self) -> list[int]:
        return [bin(r).count("1") for r in self.adj]

    def neighbors(self, u: int) -> list[int]:
        row = self.adj[u]
        return [v for v in range(self.n) if row >> v & 1]

    def adjacency(self) -> BigMatrix:
        return BigMatrix([[r >> j & 1 for j in range(self.n)] for r in self.adj])

    def relabel(self, perm: Sequence[int]) -> Graph:
        """Graph with vertex ``i`` renamed ``perm[i]``."""
        return Graph.from_edges(self.n, [(perm[u], perm[v]) for u, v in self.edges()])

    def __eq__(self, other) -> bool:
        if isinstance(other, Graph):
            return self.n == other.n and self.adj == other.adj
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.n, self.adj))

    def __repr__(self) -> str:
        return f"Graph({write_graph6(self).decode()!r})"


def complement(g: Graph) -> Graph:
    full = (1 << g.n) - 1
    return Graph(g.n, [full & ~row & ~(1 << i) for i, row in enumerate(g.adj)])


# graph6 ----------------------------------------------------------------------

_HEADER = b">>graph6<<"


def _pairs(n: int):
    # Upper triangle in column order: (0,1), (0,2), (1,2), (0,3), ...
    for j in range(1, n):
        for i in range(j):
            yield i, j


def write_graph6(g: Graph) -> bytes:
    n = g.n
    out = bytearray([n + 63])
    bits = [g.adj[i] >> j & 1 for i, j in _pairs(n)]
    bits += [0] * (-len(bits) % 6)
    for k in range(0, len(bits), 6):
        chunk = 0
        for b in bits[k : k + 6]:
            chunk = chunk << 1 | b
        out.append(chunk + 63)
    return bytes(out)


def parse_graph6(text: bytes | str) -> Graph:
    """Decode one graph6 record (an optional ``>>graph6<<`` header is allowed)."""
    if isinstance(text, str):
        try:
            text = text.encode("ascii")
        except UnicodeEncodeError as exc:
            raise Graph6Error("non-ASCII character", exc.start) from None
    data = text.rstrip(b"\r\n")
    pos = 0
    if data.startswith(_HEADER):
        pos = len(_HEADER)
    if pos >= len(data):
        raise Graph6Error("empty record", pos)
    for k in range(pos, len(data)):
        if not 63 <= data[k] <= 126:
            raise Graph6Error(f"byte {data[k]!r} outside 63..126", k)

    if data[pos] < 126:
        n = data[pos] - 63
        pos += 1
    elif len(data) > pos + 1 and data[pos + 1] == 126:
        if len(data) < pos + 8:
            raise Graph6Error("truncated 8-byte size header", len(data))
        n = 0
        for b in data[pos + 2 : pos + 8]:
            n = n << 6 | (b - 63)
        pos += 8
    else:
        if len(data) < pos + 4:
            raise Graph6Error("truncated 4-byte size header", len(data))
        n = 0
        for b in data[pos + 1 : pos + 4]:
            n = n << 6 | (b - 63)
        pos += 4
    if n == 0:
        raise Graph6Error("graphs with zero vertices are not supported", pos - 1)
    if n > MAX_VERTICES:
        raise Graph6Error(f"{n} vertices exceeds the cap of {MAX_VERTICES}", pos - 1)

    nbits = n * (n - 1) // 2
    nbytes = -(-nbits // 6)
    body = data[pos:]
    if len(body) < nbytes:
        raise Graph6Error(f"bit field truncated: need {nbytes} bytes, got {len(body)}", len(data))
    if len(body) > nbytes:
        raise Graph6Error("trailing bytes after bit field", pos + nbytes)

    adj = [0] * n
    k = 0
    for i, j in _pairs(n):
        byte = body[k // 6] - 63
        if byte >> (5 - k % 6) & 1:
            adj[i] |= 1 << j
            adj[j] |= 1 << i
        k += 1
    return Graph(n, adj)


def parse_adjacency_text(text: str) -> Graph:
    """Parse ``n`` on the first line followed by ``n`` rows of 0/1 entries."""
    lines = [ln.split() for ln in text.strip().splitlines() if ln.strip()]
    if not lines or len(lines[0]) != 1:
        raise Graph6Error("first line must hold the vertex count")
    try:
        n = int(lines[0][0])
        rows = [[int(x) for x in ln] for ln in lines[1:]]
    except ValueError as exc:
        raise Graph6Error(f"bad adjacency text: {exc}") from None
    if len(rows) != n:
        raise Graph6Error(f"expected {n} matrix rows, got {len(rows)}")
    try:
        return Graph.from_matrix(rows)
    except ValueError as exc:
        raise Graph6Error(str(exc)) from None


def write_adjacency_text(g: Graph) -> str:
    lines = [str(g.n)]
    lines += [" ".join(str(r >> j & 1) for j in range(g.n)) for r in g.adj]
    return "\n".join(lines) + "\n"


def read_graphs(data: bytes) -> list[Graph]:
    """Read graphs from file contents, detecting the format by the first byte.

    A leading digit means one adjacency-matrix text block; anything else is
    taken as graph6, one record per line.
    """
    stripped = data.lstrip()
    if not stripped:
        raise Graph6Error("no graph in input", 0)
    if stripped[:1].isdigit():
        return [parse_adjacency_text(stripped.decode("ascii"))]
    return [parse_graph6(line) for line in stripped.splitlines() if line.strip()]


# random graphs ---------------------------------------------------------------

def random_graph(n: int, seed: int) -> Graph:
    """Uniform labeled graph: every pair is an edge with probability 1/2."""
    if n < 1:
        raise ValueError("n must be positive")
    rng = random.Random(seed)
    npairs = n * (n - 1) // 2
    bits = rng.getrandbits(npairs) if npairs else 0
    adj = [0] * n
    for k, (i, j) in enumerate(_pairs(n)):
        if bits >> k & 1:
            adj[i] |= 1 << j
            adj[j] |= 1 << i
    return Graph(n, adj)


# isomorphism -----------------------------------------------------------------

def _refine(graphs: Sequence[Graph], colors: list[list[int]]) -> list[list[int]]:
    """Colour refinement run jointly so colour ids are comparable across graphs."""
    while True:
        sigs = []
        for g, col in zip(graphs, colors):
            sigs.append(
                [(col[v], tuple(sorted(col[u] for u in g.neighbors(v)))) for v in range(g.n)]
            )
        palette = {s: k for k, s in enumerate(sorted({s for sig in sigs for s in sig}))}
        new = [[palette[s] for s in sig] for sig in sigs]
        if all(len(set(a)) == len(set(b)) for a, b in zip(new, colors)):
            return new
        colors = new


def is_isomorphic(g: Graph, h: Graph) -> tuple[bool, list[int] | None]:
    """Decide isomorphism; on success also return ``perm`` with h = g relabeled by perm.

    The witness satisfies ``g.relabel(perm) == h``, i.e. with P[i, perm[i]] = 1
    one has P^T A(g) P = A(h).
    """
    if g.n != h.n or g.edge_count() != h.edge_count():
        return False, None
    if sorted(g.degrees()) != sorted(h.degrees()):
        return False, None
    colors = _refine([g, h], [[0] * g.n, [0] * h.n])
    if sorted(colors[0]) != sorted(colors[1]):
        return False, None
    perm = _search(g, h, colors[0], colors[1])
    return (perm is not None), perm


def _search(g: Graph, h: Graph, cg: list[int], ch: list[int]) -> list[int] | None:
    n = g.n
    if len(set(cg)) == n:
        where = {c: v for v, c in enumerate(ch)}
        perm = [where[c] for c in cg]
        return perm if g.relabel(perm) == h else None
    # Individualize a vertex from the smallest non-singleton cell of g.
    counts: dict[int, int] = {}
    for c in cg:
        counts[c] = counts.get(c, 0) + 1
    cell = min((k for k, v in counts.items() if v > 1), key=lambda k: (counts[k], k))
    u = cg.index(cell)
    fresh = max(max(cg), max(ch)) + 1
    for w in (v for v in range(n) if ch[v] == cell):
        ng = list(cg)
        nh = list(ch)
        ng[u] = fresh
        nh[w] = fresh
        rg, rh = _refine([g, h], [ng, nh])
        if sorted(rg) != sorted(rh):
            continue
        perm = _search(g, h, rg, rh)
        if perm is not None:
            return perm
    return None
