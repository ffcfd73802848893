"""Brute-force ground truth for irredundance questions.

Everything here enumerates subsets directly and shares no code with the
solvers, so it can serve as an independent reference in tests.
"""

from __future__ import annotations

from dataclasses import dataclass
from collections.abc import Iterable

import numpy as np

from .graph import Graph, bits, mask_of

DEFAULT_LIMIT = 24


@dataclass(frozen=True)
class ChainValues:
    ir: int
    gamma: int
    alpha: int
    IR: int

    def holds(self) -> bool:
        """The domination chain together with the bounds tying gamma to ir."""
        chain = self.ir <= self.gamma <= self.alpha <= self.IR
        if self.gamma == 0:
            return chain
        return chain and self.gamma <= 2 * self.ir - 1 and 2 * self.ir > self.gamma


def _private_witness_ok(adj: list[int], im: int) -> bool:
    for v in bits(im):
        if not adj[v] & im:
            continue
        if not any(adj[u] & im == 1 << v for u in bits(adj[v] & ~im)):
            return False
    return True


def is_irredundant(g: Graph, I: Iterable[int]) -> bool:
    """Every member is isolated in G[I] or has a private neighbour outside I."""
    return _private_witness_ok(g.adj, mask_of(I))


def is_maximal_irredundant(g: Graph, I: Iterable[int]) -> bool:
    im = mask_of(I)
    if not _private_witness_ok(g.adj, im):
        return False
    return not any(
        _private_witness_ok(g.adj, im | 1 << v) for v in bits(g.vertex_mask() & ~im))


def certify(g: Graph, I: Iterable[int]) -> dict[int, str | int]:
    """Map each member of an irredundant set to ``"internal"`` or its garden.

    Gardens are the lowest-numbered private neighbours; two kings never
    share one because a private neighbour sees exactly one member.
    """
    im = mask_of(I)
    out: dict[int, str | int] = {}
    for v in bits(im):
        if not g.adj[v] & im:
            out[v] = "internal"
            continue
        for u in bits(g.adj[v] & ~im):
            if g.adj[u] & im == 1 << v:
                out[v] = u
                break
        else:
            raise ValueError(f"set is not irredundant: {v} has no private neighbour")
    return out


# ---------------------------------------------------------------------------
# whole-graph enumeration


@dataclass
class SubsetTables:
    """Boolean tables over all 2^n subsets of a graph's vertices."""

    n: int
    size: np.ndarray
    irredundant: np.ndarray
    maximal: np.ndarray
    dominating: np.ndarray
    independent: np.ndarray


def subset_tables(adj: list[int]) -> SubsetTables:
    n = len(adj)
    S = np.arange(1 << n, dtype=np.uint32)
    owned = np.zeros_like(S)
    clashing = np.zeros_like(S)
    covered = np.zeros_like(S)
    for u in range(n):
        a = np.uint32(adj[u])
        x = S & a
        in_s = ((S >> np.uint32(u)) & np.uint32(1)).astype(bool)
        clashing |= np.where(in_s & (x != 0), np.uint32(1 << u), np.uint32(0))
        single = (x != 0) & ((x & (x - np.uint32(1))) == 0) & ~in_s
        owned |= np.where(single, x, np.uint32(0))
        covered |= np.where(in_s, np.uint32(adj[u] | 1 << u), np.uint32(0))
    irr = (clashing & ~owned) == 0
    maximal = irr.copy()
    for v in range(n):
        b = np.uint32(1 << v)
        outside = (S & b) == 0
        maximal &= ~(outside & irr[S | b])
    full = np.uint32((1 << n) - 1)
    return SubsetTables(
        n=n,
        size=np.bitwise_count(S).astype(np.int64),
        irredundant=irr,
        maximal=maximal,
        dominating=covered == full,
        independent=clashing == 0,
    )


def _compact(g: Graph) -> list[int]:
    h, _ = g.induced(g.vertices())
    return h.adj


def domination_chain(g: Graph, limit: int = DEFAULT_LIMIT) -> ChainValues:
    adj = _compact(g)
    if len(adj) > limit:
        raise ValueError(f"oracle enumeration limited to {limit} vertices, got {len(adj)}")
    t = subset_tables(adj)
    return ChainValues(
        ir=int(t.size[t.maximal].min()),
        gamma=int(t.size[t.dominating].min()),
        alpha=int(t.size[t.independent].max()),
        IR=int(t.size[t.irredundant].max()),
    )


def upper_ir(g: Graph, limit: int = DEFAULT_LIMIT) -> int:
    return domination_chain(g, limit).IR


def lower_ir(g: Graph, limit: int = DEFAULT_LIMIT) -> int:
    return domination_chain(g, limit).ir


# ---------------------------------------------------------------------------
# completions of partial labelings (used to audit pruning decisions)


def cheapest_completion(
    adj: list[int], present: int, ki: int, ke: int, ge: int, w: int,
    notg: int, notk: int, budget: int,
) -> int | None:
    """Smallest |W| + |Ge| over valid complete labelings of ``present`` that
    keep every decided label, send NotG into W or Ke and NotK into W or Ge.

    Returns ``None`` if no completion costs at most ``budget``.
    """
    free = present & ~(ki | ke | ge | w)
    order = list(bits(free))
    base = (w & present).bit_count() + (ge & present).bit_count()
    best = [None]

    def ok(KI: int, KE: int, GE: int, W: int) -> bool:
        for v in bits(KI):
            if adj[v] & present & ~W:
                return False
        for v in bits(KE):
            x = adj[v] & GE
            if x == 0 or x & (x - 1):
                return False
        for v in bits(GE):
            x = adj[v] & (KE | KI)
            if x == 0 or x & (x - 1) or x & KI:
                return False
        return True

    def rec(i: int, KI: int, KE: int, GE: int, W: int, cost: int) -> None:
        limit = budget if best[0] is None else best[0] - 1
        if cost > limit:
            return
        if i == len(order):
            if ok(KI, KE, GE, W):
                best[0] = cost
            return
        v = order[i]
        b = 1 << v
        if notg & b:
            options = ("KE", "W")
        elif notk & b:
            options = ("GE", "W")
        else:
            options = ("KI", "KE", "GE", "W")
        for opt in options:
            if opt == "KI":
                rec(i + 1, KI | b, KE, GE, W, cost)
            elif opt == "KE":
                rec(i + 1, KI, KE | b, GE, W, cost)
            elif opt == "GE":
                rec(i + 1, KI, KE, GE | b, W, cost + 1)
            else:
                rec(i + 1, KI, KE, GE, W | b, cost + 1)

    rec(0, ki & present, ke & present, ge & present, w & present, base)
    return best[0]
