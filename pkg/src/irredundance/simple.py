"""Branch-and-reduce over king/garden labelings with the half-weight measure.

The search state is a handful of bitmasks (Ki, Ke, Ge, W) plus the current
adjacency list, which is copied only when a reduction strips edges.
Unlabeled, NotG and NotK vertices are the ones outside all four masks.
"""

from __future__ import annotations

import sys
from dataclasses import dataclass, field

from .audit import MaskState, SearchObserver
from .graph import Graph, bits
from .labeling import Label, Labeling

COMAXIR = "comaxir"
EXACT = "exact-cominmaxir"


@dataclass
class SearchStats:
    nodes: int = 0
    max_depth: int = 0
    rule_firings: dict[str, int] = field(default_factory=dict)

    def fire(self, rule: str, times: int = 1) -> None:
        self.rule_firings[rule] = self.rule_firings.get(rule, 0) + times

    def merge(self, other: "SearchStats") -> None:
        self.nodes += other.nodes
        self.max_depth = max(self.max_depth, other.max_depth)
        for r, c in other.rule_firings.items():
            self.fire(r, c)

    def to_json(self) -> dict:
        return {"nodes": self.nodes, "maxDepth": self.max_depth,
                "ruleFirings": dict(sorted(self.rule_firings.items()))}


def _popcount(x: int) -> int:
    return x.bit_count()


def irredundant_mask(adj: list[int], im: int) -> bool:
    for v in bits(im):
        if not adj[v] & im:
            continue
        for u in bits(adj[v] & ~im):
            if adj[u] & im == 1 << v:
                break
        else:
            return False
    return True


def maximal_irredundant_mask(adj: list[int], im: int, full: int) -> bool:
    if not irredundant_mask(adj, im):
        return False
    return not any(irredundant_mask(adj, im | 1 << v) for v in bits(full & ~im))


def _not_sets(adj: list[int], ki: int, ke: int, ge: int, und: int) -> tuple[int, int]:
    """NotG / NotK among the undecided vertices of a valid labeling.

    Equivalent to re-running the validity test after relabelling each
    candidate; the tests check that equivalence.
    """
    notg = notk = 0
    for x in bits(ge):
        a = adj[x]
        m = a & (ke | und)
        if not m & (m - 1):
            notg |= m & und
        if a & ke:
            notk |= a & und
    for x in bits(ke):
        a = adj[x]
        m = a & (ge | und)
        if not m & (m - 1):
            notk |= m & und
        if a & ge:
            notg |= a & und
    for v in bits(und):
        a = adj[v]
        rest = und & ~(1 << v)
        b = 1 << v
        m = a & ke
        if not a & (ke | rest) or m & (m - 1):
            notg |= b
        m = a & ge
        if not a & (ge | rest) or m & (m - 1):
            notk |= b
    return notg, notk


def _valid(adj: list[int], ki: int, ke: int, ge: int, w: int, und: int) -> bool:
    for v in bits(ki):
        if adj[v] & ~w:
            return False
    for v in bits(ke):
        a = adj[v]
        m = a & ge
        if not a & (ge | und) or m & (m - 1):
            return False
    for v in bits(ge):
        a = adj[v]
        m = a & ke
        if not a & (ke | und) or m & (m - 1):
            return False
    return True


class SimpleSearch:
    """One run of the half-weight branch-and-reduce on a fixed (G, k)."""

    def __init__(self, g: Graph, k: int, mode: str = COMAXIR,
                 observer: SearchObserver | None = None) -> None:
        if k < 0:
            raise ValueError("k must be non-negative")
        if mode not in (COMAXIR, EXACT):
            raise ValueError(f"unknown mode {mode!r}")
        self.adj0 = list(g.adj)
        self.full = g.vertex_mask()
        self.n = _popcount(self.full)
        self.k = k
        self.exact = mode == EXACT
        self.obs = observer
        self.stats = SearchStats()

    # reductions -----------------------------------------------------------
    def reduce(self, adj, ki, ke, ge, w):
        """Apply R1..R4 to a fixpoint; ``None`` means the labeling became invalid."""
        full = self.full
        stats = self.stats
        own = False
        while True:
            # R1: wilderness vertices lose their edges
            stripped = 0
            for v in bits(w):
                if adj[v]:
                    if not own:
                        adj = list(adj)
                        own = True
                    for u in bits(adj[v]):
                        adj[u] &= ~(1 << v)
                    adj[v] = 0
                    stripped += 1
            if stripped:
                stats.fire("R1", stripped)
            und = full & ~(ki | ke | ge | w)
            # R2: isolated undecided vertices are kings with internal gardens
            iso = 0
            for v in bits(und):
                if not adj[v]:
                    iso |= 1 << v
            if iso:
                stats.fire("R2", _popcount(iso))
                ki |= iso
                und &= ~iso
            # R3: a Ke without garden and a single undecided neighbour (and symmetric)
            forced = False
            for v in bits(ke):
                a = adj[v]
                if not a & ge:
                    m = a & und
                    if m and not m & (m - 1):
                        ge |= m
                        forced = True
                        break
            if not forced:
                for v in bits(ge):
                    a = adj[v]
                    if not a & ke:
                        m = a & und
                        if m and not m & (m - 1):
                            ke |= m
                            forced = True
                            break
            if forced:
                stats.fire("R3")
                continue
            if not _valid(adj, ki, ke, ge, w, und):
                return None
            notg, notk = _not_sets(adj, ki, ke, ge, und)
            both = notg & notk
            if both:
                stats.fire("R4")
                w |= both & -both
                continue
            return adj, ki, ke, ge, w, notg, notk

    # candidate test -------------------------------------------------------
    def check(self, im: int) -> bool:
        target = self.n - self.k
        if self.exact:
            return _popcount(im) == target and maximal_irredundant_mask(self.adj0, im, self.full)
        return _popcount(im) >= target and irredundant_mask(self.adj0, im)

    # search ---------------------------------------------------------------
    def solve(self, adj, ki: int = 0, ke: int = 0, ge: int = 0, w: int = 0, depth: int = 1) -> bool:
        r = self.reduce(adj, ki, ke, ge, w)
        if r is None:
            return False
        adj, ki, ke, ge, w, notg, notk = r
        k = self.k
        cw = _popcount(w)
        # 2*phi = 2k - 2|W| - |Ke| - |Ge|
        if 2 * (k - cw) - _popcount(ke) - _popcount(ge) < 0:
            if self.obs is not None:
                self.obs.on_prune("simple", MaskState(adj, self.full, ki, ke, ge, w, 0, 0), k)
            return False
        kings = _popcount(ki | ke)
        if self.exact and kings > self.n - k:
            return False
        stats = self.stats
        stats.nodes += 1
        if depth > stats.max_depth:
            stats.max_depth = depth
        und = self.full & ~(ki | ke | ge | w)
        if cw + _popcount(ke) == k or cw + _popcount(ge) == k or not und:
            return self.check(self.full & ~(w | ge))
        if self.exact and kings == self.n - k:
            return self.check(ki | ke)
        d = depth + 1
        nots = notg | notk
        if nots:
            b = nots & -nots
            if notg & b:
                return self.solve(adj, ki, ke | b, ge, w, d) or self.solve(adj, ki, ke, ge, w | b, d)
            return self.solve(adj, ki, ke, ge | b, w, d) or self.solve(adj, ki, ke, ge, w | b, d)
        v = self.pick(adj, und, ke | ge)
        b = 1 << v
        a = adj[v]
        if self.solve(adj, ki, ke, ge, w | b, d):
            return True
        if not a & (ki | ke | ge) and self.solve(adj, ki | b, ke, ge, w | a, d):
            return True
        for u in bits(a & ~(ke | ki | w)):
            if self.solve(adj, ki, ke | b, ge | 1 << u, w, d):
                return True
        for u in bits(a & ~(ge | ki | w)):
            if self.solve(adj, ki, ke | 1 << u, ge | b, w, d):
                return True
        return False

    @staticmethod
    def pick(adj: list[int], und: int, kg: int) -> int:
        """Degree one first, then max degree next to a king/garden, then max degree."""
        best_kg = best_any = -1
        deg_kg = deg_any = -1
        for v in bits(und):
            a = adj[v]
            d = _popcount(a)
            if d == 1:
                return v
            if d > deg_any:
                best_any, deg_any = v, d
            if a & kg and d > deg_kg:
                best_kg, deg_kg = v, d
        return best_kg if best_kg >= 0 else best_any

    def run(self) -> bool:
        limit = max(sys.getrecursionlimit(), 4 * self.n + 100)
        sys.setrecursionlimit(limit)
        return self.solve(list(self.adj0))


def decide_comaxir_simple(g: Graph, k: int, observer: SearchObserver | None = None
                          ) -> tuple[bool, SearchStats]:
    """Is IR(g) >= n - k?"""
    s = SimpleSearch(g, k, COMAXIR, observer)
    return s.run(), s.stats


def decide_minimal_coirredundant(g: Graph, k: int, observer: SearchObserver | None = None
                                 ) -> tuple[bool, SearchStats]:
    """Does g have a maximal irredundant set of exactly n - k vertices?"""
    s = SimpleSearch(g, k, EXACT, observer)
    return s.run(), s.stats


def decide_exact_cominmaxir(g: Graph, k: int, observer: SearchObserver | None = None
                            ) -> tuple[bool, SearchStats]:
    """Is ir(g) exactly n - k?

    Needs a maximal irredundant set of size n - k and none smaller, so the
    existence search is repeated for every larger parameter.
    """
    n = len(g.vertices())
    ok, stats = decide_minimal_coirredundant(g, k, observer)
    if not ok:
        return False, stats
    for k2 in range(n, k, -1):
        found, more = decide_minimal_coirredundant(g, k2, observer)
        stats.merge(more)
        if found:
            return False, stats
    return True, stats


# ---------------------------------------------------------------------------
# Labeling-level wrappers


def _masks(L: Labeling) -> tuple[int, int, int, int]:
    return L.mask(Label.KI), L.mask(Label.KE), L.mask(Label.GE), L.mask(Label.W)


def reduce_simple(g: Graph, L: Labeling) -> tuple[Graph, Labeling] | None:
    """Reduction fixpoint of ``(g, L)``; ``None`` if the labeling turns invalid.

    The returned labeling marks the final NotG and NotK vertices.
    """
    s = SimpleSearch(g, 0)
    r = s.reduce(list(g.adj), *_masks(L))
    if r is None:
        return None
    adj, ki, ke, ge, w, notg, notk = r
    out = Labeling.empty(g.n)
    for v in range(g.n):
        b = 1 << v
        if ki & b:
            out.label[v] = Label.KI
        elif ke & b:
            out.label[v] = Label.KE
        elif ge & b:
            out.label[v] = Label.GE
        elif w & b:
            out.label[v] = Label.W
        elif notg & b:
            out.label[v] = Label.NOTG
        elif notk & b:
            out.label[v] = Label.NOTK
    out.active = out.expected_active(Graph.from_masks(adj, g.alive))
    return Graph.from_masks(adj, g.alive), out


def check_candidate(g: Graph, L: Labeling, k: int, mode: str = COMAXIR) -> bool:
    """Test V minus (W and Ge) as a solution, as at the leaves of the search."""
    s = SimpleSearch(g, k, mode)
    return s.check(s.full & ~(L.mask(Label.W) | L.mask(Label.GE)))
