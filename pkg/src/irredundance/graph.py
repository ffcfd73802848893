"""Undirected simple graphs on vertex ids 0..n-1 with reversible mutation.

Adjacency is stored as one Python int per vertex whose set bits are the
neighbours.  Iterating the bits in ascending order gives the sorted
neighbour list, and set algebra on neighbourhoods becomes a couple of
integer operations, which is what the search code relies on.
"""

from __future__ import annotations

from collections.abc import Iterable, Iterator, Sequence

MAX_GRAPH6_VERTICES = 1 << 18


class GraphFormatError(ValueError):
    """Raised for malformed or unsupported graph input."""


# set-bit positions of every byte value, pre-shifted for the first eight bytes
_BYTE_BITS = [[tuple(o + i for i in range(8) if b >> i & 1) for b in range(256)]
              for o in range(0, 64, 8)]


def bits(mask: int) -> Sequence[int]:
    """Indices of the set bits of ``mask`` in ascending order."""
    if mask < 256:
        return _BYTE_BITS[0][mask]
    out: list[int] = []
    for table in _BYTE_BITS:
        if not mask:
            return out
        out += table[mask & 255]
        mask >>= 8
    base = 64
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1 + base)
        mask ^= low
    return out


def mask_of(vertices: Iterable[int]) -> int:
    m = 0
    for v in vertices:
        m |= 1 << v
    return m


class UndoLog:
    """Ordered record of reversible mutations.

    Entries are tuples ``(kind, *payload)``.  Graph mutations log
    ``("edge", u, v)`` and ``("kill", v, neighbour_mask)``; label changes made
    through :meth:`record_label` log ``("label", target, v, old_value)`` where
    ``target`` is any object exposing ``restore(v, old_value)``.
    """

    def __init__(self) -> None:
        self.entries: list[tuple] = []

    def __len__(self) -> int:
        return len(self.entries)

    def mark(self) -> int:
        return len(self.entries)

    def record_label(self, target, v: int, old_value) -> None:
        self.entries.append(("label", target, v, old_value))

    def rollback(self, graph: "Graph | None", mark: int = 0) -> None:
        """Undo every entry recorded after ``mark``, newest first."""
        while len(self.entries) > mark:
            entry = self.entries.pop()
            kind = entry[0]
            if kind == "edge":
                _, u, v = entry
                graph.adj[u] |= 1 << v
                graph.adj[v] |= 1 << u
            elif kind == "kill":
                _, v, nbrs = entry
                graph.alive[v] = True
                graph.adj[v] = nbrs
                for u in bits(nbrs):
                    graph.adj[u] |= 1 << v
            elif kind == "label":
                _, target, v, old = entry
                target.restore(v, old)
            else:  # pragma: no cover - defensive
                raise ValueError(f"unknown undo entry {kind!r}")


class Graph:
    """Simple undirected graph with an alive flag per vertex.

    Killed vertices keep their id (tombstone) so that labels and results can
    always be reported in the original numbering.
    """

    __slots__ = ("n", "adj", "alive", "log")

    def __init__(self, n: int, edges: Iterable[tuple[int, int]] = ()) -> None:
        if n < 0:
            raise ValueError("vertex count must be non-negative")
        self.n = n
        self.adj = [0] * n
        self.alive = [True] * n
        self.log: UndoLog | None = None
        for u, v in edges:
            self.add_edge(u, v)

    @classmethod
    def from_masks(cls, masks: list[int], alive: list[bool] | None = None) -> "Graph":
        g = cls(len(masks))
        g.adj = list(masks)
        if alive is not None:
            g.alive = list(alive)
        return g

    def copy(self) -> "Graph":
        g = Graph.from_masks(self.adj, self.alive)
        return g

    # queries -----------------------------------------------------------
    def has_edge(self, u: int, v: int) -> bool:
        return bool(self.adj[u] >> v & 1)

    def neighbors(self, v: int) -> list[int]:
        return list(bits(self.adj[v]))

    def degree(self, v: int) -> int:
        return self.adj[v].bit_count()

    def vertices(self) -> list[int]:
        return [v for v in range(self.n) if self.alive[v]]

    def vertex_mask(self) -> int:
        m = 0
        for v in range(self.n):
            if self.alive[v]:
                m |= 1 << v
        return m

    def edges(self) -> list[tuple[int, int]]:
        out = []
        for u in range(self.n):
            for v in bits(self.adj[u] >> (u + 1)):
                out.append((u, u + 1 + v))
        return out

    def num_edges(self) -> int:
        return sum(a.bit_count() for a in self.adj) // 2

    def induced(self, keep: Iterable[int]) -> tuple["Graph", list[int]]:
        """Return ``G[keep]`` relabelled to 0..m-1 and the old id of each new id."""
        order = sorted(set(keep))
        index = {v: i for i, v in enumerate(order)}
        g = Graph(len(order))
        for i, v in enumerate(order):
            for u in bits(self.adj[v]):
                j = index.get(u)
                if j is not None and j > i:
                    g.add_edge(i, j)
        return g, order

    # mutation ----------------------------------------------------------
    def add_edge(self, u: int, v: int) -> None:
        if u == v:
            raise ValueError(f"self-loop at vertex {u}")
        if not (0 <= u < self.n and 0 <= v < self.n):
            raise ValueError(f"edge ({u}, {v}) out of range for n={self.n}")
        self.adj[u] |= 1 << v
        self.adj[v] |= 1 << u

    def remove_edge(self, u: int, v: int) -> None:
        if not self.has_edge(u, v):
            raise ValueError(f"no edge ({u}, {v})")
        self.adj[u] &= ~(1 << v)
        self.adj[v] &= ~(1 << u)
        if self.log is not None:
            self.log.entries.append(("edge", u, v))

    def kill_vertex(self, v: int) -> None:
        """Remove every edge at ``v`` and mark it dead."""
        nbrs = self.adj[v]
        for u in bits(nbrs):
            self.adj[u] &= ~(1 << v)
        self.adj[v] = 0
        self.alive[v] = False
        if self.log is not None:
            self.log.entries.append(("kill", v, nbrs))

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, Graph)
            and self.n == other.n
            and self.adj == other.adj
            and self.alive == other.alive
        )

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, edges={self.edges()})"


def connected_components(g: Graph, within: int | None = None) -> list[list[int]]:
    """Components of the alive vertices (optionally restricted to ``within``).

    Each component is sorted and components are ordered by smallest id.
    """
    rest = g.vertex_mask() if within is None else within
    comps = []
    while rest:
        low = rest & -rest
        comp = low
        frontier = low
        while frontier:
            nxt = 0
            for v in bits(frontier):
                nxt |= g.adj[v]
            nxt &= rest & ~comp
            comp |= nxt
            frontier = nxt
        rest &= ~comp
        comps.append(list(bits(comp)))
    return comps


# ---------------------------------------------------------------------------
# text formats


def parse_graph(text: str, format: str = "edgelist") -> Graph:
    """Parse ``text`` as ``"edgelist"`` (``p edge n m`` / ``e u v``, 1-based)
    or ``"graph6"``."""
    if format == "edgelist":
        return _parse_edgelist(text)
    if format == "graph6":
        return _parse_graph6(text)
    raise GraphFormatError(f"unknown format {format!r}")


def encode_graph(g: Graph, format: str = "edgelist") -> str:
    if format == "edgelist":
        lines = [f"p edge {g.n} {g.num_edges()}"]
        lines += [f"e {u + 1} {v + 1}" for u, v in g.edges()]
        return "\n".join(lines) + "\n"
    if format == "graph6":
        return _encode_graph6(g) + "\n"
    raise GraphFormatError(f"unknown format {format!r}")


def _parse_edgelist(text: str) -> Graph:
    g: Graph | None = None
    declared_m = 0
    seen = 0
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if parts[0] == "c":
            continue
        if parts[0] == "p":
            if g is not None:
                raise GraphFormatError(f"line {lineno}: second header")
            if len(parts) != 4 or parts[1] != "edge":
                raise GraphFormatError(f"line {lineno}: malformed header {line!r}")
            try:
                n, declared_m = int(parts[2]), int(parts[3])
            except ValueError:
                raise GraphFormatError(f"line {lineno}: malformed header {line!r}") from None
            if n < 0 or declared_m < 0:
                raise GraphFormatError(f"line {lineno}: negative size in header")
            g = Graph(n)
        elif parts[0] == "e":
            if g is None:
                raise GraphFormatError(f"line {lineno}: edge before header")
            if len(parts) != 3:
                raise GraphFormatError(f"line {lineno}: malformed edge {line!r}")
            try:
                u, v = int(parts[1]) - 1, int(parts[2]) - 1
            except ValueError:
                raise GraphFormatError(f"line {lineno}: malformed edge {line!r}") from None
            if not (0 <= u < g.n and 0 <= v < g.n):
                raise GraphFormatError(f"line {lineno}: vertex id out of range")
            if u == v:
                raise GraphFormatError(f"line {lineno}: self-loop at {u + 1}")
            if g.has_edge(u, v):
                raise GraphFormatError(f"line {lineno}: duplicate edge {u + 1} {v + 1}")
            g.add_edge(u, v)
            seen += 1
        else:
            raise GraphFormatError(f"line {lineno}: unexpected line {line!r}")
    if g is None:
        raise GraphFormatError("missing 'p edge n m' header")
    if seen != declared_m:
        raise GraphFormatError(f"header declares {declared_m} edges, found {seen}")
    return g


def _graph6_size(data: bytes) -> tuple[int, int]:
    if not data:
        raise GraphFormatError("empty graph6 string")
    if data[0] != 126:
        return data[0] - 63, 1
    if len(data) >= 2 and data[1] == 126:
        width, start = 6, 2
    else:
        width, start = 3, 1
    chunk = data[start:start + width]
    if len(chunk) < width:
        raise GraphFormatError("truncated graph6 size field")
    n = 0
    for c in chunk:
        n = (n << 6) | (c - 63)
    return n, start + width


def _parse_graph6(text: str) -> Graph:
    line = text.strip()
    if line.startswith(">>graph6<<"):
        line = line[len(">>graph6<<"):]
    if "\n" in line:
        raise GraphFormatError("expected a single graph6 line")
    data = line.encode("ascii", errors="replace")
    if any(c < 63 or c > 126 for c in data):
        raise GraphFormatError("invalid graph6 character")
    n, pos = _graph6_size(data)
    if n > MAX_GRAPH6_VERTICES:
        raise GraphFormatError(f"graph6 size {n} exceeds {MAX_GRAPH6_VERTICES}")
    nbits = n * (n - 1) // 2
    body = data[pos:]
    if len(body) != (nbits + 5) // 6:
        raise GraphFormatError("graph6 body length does not match vertex count")
    g = Graph(n)
    k = 0
    for j in range(1, n):
        for i in range(j):
            if (body[k // 6] - 63) >> (5 - k % 6) & 1:
                g.add_edge(i, j)
            k += 1
    for r in range(k, len(body) * 6):
        if (body[r // 6] - 63) >> (5 - r % 6) & 1:
            raise GraphFormatError("non-zero graph6 padding")
    return g


def _encode_graph6(g: Graph) -> str:
    n = g.n
    if n > MAX_GRAPH6_VERTICES:
        raise GraphFormatError(f"graph6 supports at most {MAX_GRAPH6_VERTICES} vertices here")
    if n <= 62:
        out = [n + 63]
    elif n <= 258047:
        out = [126] + [((n >> s) & 63) + 63 for s in (12, 6, 0)]
    else:
        out = [126, 126] + [((n >> s) & 63) + 63 for s in (30, 24, 18, 12, 6, 0)]
    acc = 0
    k = 0
    for j in range(1, n):
        for i in range(j):
            acc = (acc << 1) | (g.adj[i] >> j & 1)
            k += 1
            if k == 6:
                out.append(acc + 63)
                acc = k = 0
    if k:
        out.append((acc << (6 - k)) + 63)
    return bytes(out).decode("ascii")
