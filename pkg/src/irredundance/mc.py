"""Measure-and-conquer search for Co-MaxIR.

Compared with the half-weight search this one tracks which kings and
gardens are already paired (inactive), uses thirteen reduction rules, splits
the active part into components, and finishes paths and cycles with a
small dynamic program.

A search state is the tuple ``(adj, present, ki, ke, ge, ng, nk, w, p)``:
adjacency masks, the vertices belonging to the (sub)instance, one mask per
label and the mask ``p`` of paired Ke/Ge vertices.  Everything in
``present`` outside the label masks is unlabeled.
"""

from __future__ import annotations

import math
import sys
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction

from .audit import MaskState, SearchObserver
from .graph import Graph, bits, mask_of
from .labeling import DEFAULT_WEIGHTS, Label, Labeling, Weights
from .simple import SearchStats


class Outcome(str, Enum):
    CONTINUE = "Continue"
    NO = "No"


@dataclass
class ReductionStatus:
    outcome: Outcome
    log: list[tuple[int, Fraction]] = field(default_factory=list)
    graph: Graph | None = None
    labeling: Labeling | None = None


_pc = int.bit_count


def _low(x: int) -> int:
    return (x & -x).bit_length() - 1


# DP vertex states
_W, _KI, _KE_P, _KE_N, _GE_P, _GE_N = range(6)
_COST = (1, 0, 0, 0, 1, 1)


def _dp_ok(a: int, b: int) -> bool:
    """May consecutive vertices (a before b) take these states?"""
    if a == _KE_N:
        return b == _GE_P
    if a == _GE_N:
        return b == _KE_P
    if b == _KE_P or b == _GE_P:
        return False
    if a == _KI:
        return b == _W
    if b == _KI:
        return a == _W
    if a == _GE_P and b == _KE_N:
        return False
    if a == _KE_P and b == _GE_N:
        return False
    return True


_DP_OK = [[_dp_ok(a, b) for b in range(6)] for a in range(6)]


def dp_path_cycle(adj: list[int], comp: int, ke: int, ge: int, ng: int, nk: int) -> int | None:
    """Cheapest completion (|W| + |Ge|) of a connected active part of maximum degree two.

    ``None`` means no completion exists.
    """
    ends = [v for v in bits(comp) if _pc(adj[v] & comp) <= 1]
    cycle = not ends
    cur = _low(comp) if cycle else ends[0]
    order = [cur]
    seen = 1 << cur
    while True:
        nxt = adj[cur] & comp & ~seen
        if not nxt:
            break
        cur = _low(nxt)
        order.append(cur)
        seen |= 1 << cur
    if seen != comp:
        raise ValueError("component is not a path or cycle")

    def allowed(v: int) -> tuple[int, ...]:
        b = 1 << v
        if ke & b:
            return (_KE_P, _KE_N)
        if ge & b:
            return (_GE_P, _GE_N)
        if ng & b:
            return (_W, _KE_P, _KE_N)
        if nk & b:
            return (_W, _GE_P, _GE_N)
        return (_W, _KI, _KE_P, _KE_N, _GE_P, _GE_N)

    opts = [allowed(v) for v in order]
    m = len(order)
    inf = math.inf
    best = inf
    starts = opts[0] if cycle else [s for s in opts[0] if s not in (_KE_P, _GE_P)]
    for s0 in (starts if cycle else [None]):
        cost = [inf] * 6
        if cycle:
            cost[s0] = _COST[s0]
        else:
            for s in starts:
                cost[s] = _COST[s]
        for i in range(1, m):
            new = [inf] * 6
            for b in opts[i]:
                c = min((cost[a] for a in range(6) if cost[a] < inf and _DP_OK[a][b]), default=inf)
                if c < inf:
                    new[b] = c + _COST[b]
            cost = new
        for s in range(6):
            if cost[s] == inf:
                continue
            if cycle:
                if m == 1 or not _DP_OK[s][s0]:
                    continue
            elif s in (_KE_N, _GE_N):
                continue
            best = min(best, cost[s])
    return None if best == inf else int(best)


class MCSearch:
    """Measure-and-conquer decision procedure for one graph.

    Component costs are memoised on the solver, so repeated calls with
    different budgets on the same graph share work.
    """

    def __init__(self, g: Graph, weights: Weights = DEFAULT_WEIGHTS,
                 observer: SearchObserver | None = None, skip_w: bool = True) -> None:
        self.g = g
        self.weights = weights
        self.scale = math.lcm(weights.omega_l.denominator, weights.omega_n.denominator)
        self.wl = int(weights.omega_l * self.scale)
        self.wn = int(weights.omega_n * self.scale)
        self.obs = observer
        self.skip_w = skip_w
        self.stats = SearchStats()
        self.memo: dict[tuple, tuple[int, bool]] = {}

    # measure ------------------------------------------------------------
    def phi(self, st: tuple, budget: int) -> Fraction:
        adj, present, ki, ke, ge, ng, nk, w, p = st
        act = present & ~(w | ki | p)
        val = (self.scale * (budget - _pc(w) - _pc(ge & p))
               - self.wl * _pc((ke | ge) & act) - self.wn * _pc(ng | nk))
        return Fraction(val, self.scale)

    # reductions ---------------------------------------------------------
    def reduce(self, st: tuple, log: list | None = None) -> tuple | None:
        """Apply the thirteen rules in order, one firing at a time."""
        adj, present, ki, ke, ge, ng, nk, w, p = st
        own = False
        fire = self.stats.fire
        watch = self.obs is not None or log is not None
        while True:
            if watch:
                before = self.phi((adj, present, ki, ke, ge, ng, nk, w, p), 0)
            rule = 0
            und = present & ~(ki | ke | ge | ng | nk | w)
            # 1: a king with two gardens, a garden with two kings; a Ki next to a labelled vertex
            # seen_*: vertices with a neighbour in the set, two_*: with at least two
            seen_ge = two_ge = 0
            for x in bits(ge):
                two_ge |= seen_ge & adj[x]
                seen_ge |= adj[x]
            seen_ke = two_ke = 0
            for x in bits(ke):
                two_ke |= seen_ke & adj[x]
                seen_ke |= adj[x]
            seen_ki = two_ki = 0
            for x in bits(ki):
                two_ki |= seen_ki & adj[x]
                seen_ki |= adj[x]
            if (two_ge & (ki | ke)
                    or (two_ke | two_ki | seen_ke & seen_ki) & ge
                    or seen_ki & (ki | ke | ge)):
                return self._no(1, log)
            # 2: an isolated Ke or Ge can never be paired
            for x in bits(ke | ge):
                if not adj[x]:
                    return self._no(2, log)
            # 3: isolated NotG / NotK go to W
            iso = 0
            for x in bits(ng | nk):
                if not adj[x]:
                    iso |= 1 << x
            if iso:
                ng &= ~iso
                nk &= ~iso
                w |= iso
                rule = 3
            else:
                # 4: isolated unlabeled vertices become Ki
                for x in bits(und):
                    if not adj[x]:
                        iso |= 1 << x
                if iso:
                    ki |= iso
                    rule = 4
            if not rule:
                # 5-8: edge deletions
                batch = []
                for r, left, right in (
                    (5, ke, ke), (5, ge, ge),
                    (6, ke, ng), (6, ge, nk),
                    (7, w, present),
                    (8, nk, nk), (8, ng, ng),
                ):
                    if not left or not right:
                        continue
                    hit = False
                    for x in bits(left):
                        m = adj[x] & right
                        if m:
                            if not own:
                                adj = list(adj)
                                own = True
                            adj[x] &= ~m
                            for y in bits(m):
                                adj[y] &= ~(1 << x)
                            hit = True
                    if hit and r not in batch:
                        batch.append(r)
                # deletions commute and leave every label alone, so all of
                # them are applied in one pass
                if batch:
                    rule = batch[0]
            if not rule:
                # 9: a degree-one unlabeled vertex hanging off another unlabeled vertex
                for x in bits(und):
                    m = adj[x]
                    if not m & (m - 1) and m & und:
                        ki |= 1 << x
                        rule = 9
                        break
            if not rule and seen_ki:
                # 10: neighbours of an internal king are wilderness
                for x in bits(ki):
                    m = adj[x]
                    if m:
                        ng &= ~m
                        nk &= ~m
                        w |= m
                        rule = 10
                        break
            if not rule:
                # 11: a degree-one endpoint forces an active garden/king pairing
                ge_a, ke_a = ge & ~p, ke & ~p
                for x in bits(ge_a):
                    ax = adj[x]
                    for y in bits(ax & (und | ng)):
                        if not ax & (ax - 1) or _pc(adj[y]) == 1:
                            ng &= ~(1 << y)
                            ke |= 1 << y
                            p |= 1 << x | 1 << y
                            rule = 11
                            break
                    if rule:
                        break
                if not rule:
                    for x in bits(ke_a):
                        ax = adj[x]
                        for y in bits(ax & (und | nk)):
                            if not ax & (ax - 1) or _pc(adj[y]) == 1:
                                nk &= ~(1 << y)
                                ge |= 1 << y
                                p |= 1 << x | 1 << y
                                rule = 11
                                break
                        if rule:
                            break
            if not rule:
                # 12: two neighbouring gardens (kings) exclude being a king (garden)
                for x in bits((two_ge | two_ke) & (und | ng | nk)):
                    b = 1 << x
                    a = adj[x]
                    m = a & ge
                    if m & (m - 1):
                        if und & b:
                            nk |= b
                            rule = 12
                            break
                        if ng & b:
                            ng &= ~b
                            w |= b
                            rule = 12
                            break
                    m = a & ke
                    if m & (m - 1):
                        if und & b:
                            ng |= b
                            rule = 12
                            break
                        if nk & b:
                            nk &= ~b
                            w |= b
                            rule = 12
                            break
            if not rule:
                # 13: neighbours of an inactive pair lose options
                for x in bits(ke & p):
                    for y in bits(adj[x] & ge & p):
                        a, b = adj[x], adj[y]
                        und = present & ~(ki | ke | ge | ng | nk | w)
                        to_ng = a & und
                        to_w = a & nk
                        if to_ng or to_w:
                            ng |= to_ng
                            nk &= ~to_w
                            w |= to_w
                            rule = 13
                        und &= ~to_ng
                        to_nk = b & und
                        to_w = b & ng
                        if to_nk or to_w:
                            nk |= to_nk
                            ng &= ~to_w
                            w |= to_w
                            rule = 13
                        if rule:
                            break
                    if rule:
                        break
            if not rule:
                return adj, present, ki, ke, ge, ng, nk, w, p
            fired = batch if 5 <= rule <= 8 else (rule,)
            for r in fired:
                fire(r)
            if watch:
                delta = before - self.phi((adj, present, ki, ke, ge, ng, nk, w, p), 0)
                for r in fired:
                    if log is not None:
                        log.append((r, delta))
                    if self.obs is not None:
                        self.obs.on_rule(r, delta)

    def _no(self, rule: int, log: list | None) -> None:
        self.stats.fire(rule)
        if log is not None:
            log.append((rule, Fraction(0)))
        return None

    # search -------------------------------------------------------------
    def solve(self, st: tuple, budget: int, depth: int = 1) -> bool:
        r = self.reduce(st)
        if r is None:
            return False
        adj, present, ki, ke, ge, ng, nk, w, p = r
        obs = self.obs
        if obs is not None:
            obs.on_reduced(MaskState(adj, present, ki, ke, ge, w, ng, nk, p))
        act = present & ~(w | ki | p)
        fixed = _pc(w) + _pc(ge & p)
        if (self.scale * (budget - fixed) - self.wl * _pc((ke | ge) & act)
                - self.wn * _pc(ng | nk)) < 0:
            if obs is not None:
                obs.on_prune("mc", MaskState(adj, present, ki, ke, ge, w, ng, nk, p), budget)
            return False
        stats = self.stats
        stats.nodes += 1
        if depth > stats.max_depth:
            stats.max_depth = depth
        if not act:
            return True
        comps = self._components(adj, act)
        if len(comps) > 1:
            left = budget - fixed
            for c in comps:
                sub = (adj, c, ki & c, ke & c, ge & c,
                       ng & c, nk & c, w & c, p & c)
                cost = self.component_cost_state(sub, left, depth)
                if cost is None:
                    return False
                left -= cost
            return True
        maxdeg = max(_pc(adj[v]) for v in bits(act))
        if maxdeg <= 2:
            cost = dp_path_cycle(adj, act, ke & act, ge & act, ng, nk)
            return cost is not None and fixed + cost <= budget
        d = depth + 1
        solve = self.solve
        nots = ng | nk
        if nots:
            b = nots & -nots
            if ng & b:
                z = adj[_low(b)] & ge & ~p
                pair = (b | z) if z else 0
                return (solve((adj, present, ki, ke | b, ge, ng & ~b, nk, w, p | pair), budget, d)
                        or solve((adj, present, ki, ke, ge, ng & ~b, nk, w | b, p), budget, d))
            z = adj[_low(b)] & ke & ~p
            pair = (b | z) if z else 0
            return (solve((adj, present, ki, ke, ge | b, ng, nk & ~b, w, p | pair), budget, d)
                    or solve((adj, present, ki, ke, ge, ng, nk & ~b, w | b, p), budget, d))
        und = act & ~(ke | ge)
        ke_a, ge_a = ke & act, ge & act
        for v in bits(und):
            a = adj[v]
            if _pc(a) == 2:
                u, x = a & ge_a, a & ke_a
                if u and x:
                    b = 1 << v
                    if not self.skip_w and solve((adj, present, ki, ke, ge, ng, nk, w | b, p), budget, d):
                        return True
                    return (solve((adj, present, ki, ke | b, ge, ng, nk, w, p | b | u), budget, d)
                            or solve((adj, present, ki, ke, ge | b, ng, nk, w, p | b | x), budget, d))
        kg = ke_a | ge_a
        if kg:
            v = max(bits(kg), key=lambda x: (_pc(adj[x]), -x))
            b = 1 << v
            if ke_a & b:
                for u in bits(adj[v]):
                    c = 1 << u
                    if solve((adj, present, ki, ke, ge | c, ng, nk, w, p | b | c), budget, d):
                        return True
                return False
            for u in bits(adj[v]):
                c = 1 << u
                if solve((adj, present, ki, ke | c, ge, ng, nk, w, p | b | c), budget, d):
                    return True
            return False
        v = max(bits(und), key=lambda x: (_pc(adj[x]), any(_pc(adj[y]) == 2 for y in bits(adj[x])), -x))
        b = 1 << v
        a = adj[v]
        if solve((adj, present, ki, ke, ge, ng, nk, w | b, p), budget, d):
            return True
        if solve((adj, present, ki | b, ke, ge, ng, nk, w | a, p), budget, d):
            return True
        for u in bits(a):
            c = 1 << u
            if solve((adj, present, ki, ke | b, ge | c, ng, nk, w, p | b | c), budget, d):
                return True
        for u in bits(a):
            c = 1 << u
            if solve((adj, present, ki, ke | c, ge | b, ng, nk, w, p | b | c), budget, d):
                return True
        return False

    @staticmethod
    def _components(adj: list[int], within: int) -> list[int]:
        out = []
        rest = within
        while rest:
            comp = frontier = rest & -rest
            while frontier:
                nxt = 0
                for v in bits(frontier):
                    nxt |= adj[v]
                nxt &= rest & ~comp
                comp |= nxt
                frontier = nxt
            rest &= ~comp
            out.append(comp)
        return out

    def _key(self, st: tuple) -> tuple:
        adj, present, ki, ke, ge, ng, nk, w, p = st
        order = list(bits(present))
        pos = {v: i for i, v in enumerate(order)}

        def local(m: int) -> int:
            out = 0
            for v in bits(m & present):
                out |= 1 << pos[v]
            return out

        return (tuple(local(adj[v]) for v in order),
                local(ki), local(ke), local(ge), local(ng), local(nk), local(w), local(p))

    def component_cost_state(self, st: tuple, limit: int, depth: int = 1) -> int | None:
        """Least budget for which the sub-instance ``st`` is a YES, if at most ``limit``."""
        key = self._key(st)
        lo, exact = self.memo.get(key, (0, False))
        if exact:
            return lo if lo <= limit else None
        for b in range(lo, limit + 1):
            if self.solve(st, b, depth + 1):
                self.memo[key] = (b, True)
                return b
        self.memo[key] = (max(lo, limit + 1), False)
        return None

    def initial_state(self, L: Labeling | None = None) -> tuple:
        g = self.g
        present = g.vertex_mask()
        if L is None:
            return (list(g.adj), present, 0, 0, 0, 0, 0, 0, 0)
        p = 0
        for v in range(g.n):
            if L.partner[v] >= 0 and not L.active[v]:
                p |= 1 << v
        return (list(g.adj), present, L.mask(Label.KI), L.mask(Label.KE), L.mask(Label.GE),
                L.mask(Label.NOTG), L.mask(Label.NOTK), L.mask(Label.W), p)

    def decide(self, k: int) -> bool:
        if k < 0:
            raise ValueError("k must be non-negative")
        sys.setrecursionlimit(max(sys.getrecursionlimit(), 8 * self.g.n + 200))
        return self.solve(self.initial_state(), k)


def decide_comaxir_mc(g: Graph, k: int, w: Weights = DEFAULT_WEIGHTS,
                      observer: SearchObserver | None = None, skip_w: bool = True
                      ) -> tuple[bool, SearchStats]:
    """Is IR(g) >= n - k?"""
    s = MCSearch(g, w, observer, skip_w)
    return s.decide(k), s.stats


# ---------------------------------------------------------------------------
# Labeling-level wrappers


def _to_labeling(n: int, st: tuple) -> Labeling:
    adj, present, ki, ke, ge, ng, nk, w, p = st
    L = Labeling.empty(n)
    for v in range(n):
        b = 1 << v
        for mask, lab in ((ki, Label.KI), (ke, Label.KE), (ge, Label.GE),
                          (ng, Label.NOTG), (nk, Label.NOTK), (w, Label.W)):
            if mask & b:
                L.label[v] = lab
                break
        L.active[v] = not (b & (w | ki | p))
    for v in bits(ke & p):
        for u in bits(adj[v] & ge & p):
            L.partner[v], L.partner[u] = u, v
    return L


def reduce_mc(g: Graph, L: Labeling, w: Weights = DEFAULT_WEIGHTS, k: int = 0) -> ReductionStatus:
    s = MCSearch(g, w)
    log: list[tuple[int, Fraction]] = []
    r = s.reduce(s.initial_state(L), log)
    if r is None:
        return ReductionStatus(Outcome.NO, log)
    return ReductionStatus(Outcome.CONTINUE, log, Graph.from_masks(r[0], g.alive), _to_labeling(g.n, r))


def dp_max_degree_two(g: Graph, L: Labeling, component) -> float | int:
    """Cheapest completion cost of ``component``; ``math.inf`` if there is none."""
    comp = mask_of(component)
    for v in bits(comp):
        if _pc(g.adj[v] & comp) > 2:
            raise ValueError("component has a vertex of degree above two")
    cost = dp_path_cycle(g.adj, comp, L.mask(Label.KE) & comp, L.mask(Label.GE) & comp,
                         L.mask(Label.NOTG) & comp, L.mask(Label.NOTK) & comp)
    return math.inf if cost is None else cost


def component_cost(g: Graph, L: Labeling, component, w: Weights = DEFAULT_WEIGHTS) -> float | int:
    """Least k' for which the component alone is a YES instance; ``math.inf`` if none."""
    s = MCSearch(g, w)
    c = mask_of(component)
    st = s.initial_state(L)
    sub = (st[0], c) + tuple(m & c for m in st[2:])
    cost = s.component_cost_state(sub, _pc(c))
    return math.inf if cost is None else cost
