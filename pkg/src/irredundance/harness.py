"""Exact drivers for ir(G) and IR(G), random instances and the verification campaign."""

from __future__ import annotations

import itertools
import math
import random
import time
from collections.abc import Callable, Iterable
from dataclasses import dataclass, field

import numpy as np

from . import mc, simple
from .audit import InvariantMonitor
from .graph import Graph, bits, encode_graph, parse_graph
from .kernel import Verdict, kernel_comaxir, kernel_cominmaxir, maximal_matching
from .labeling import DEFAULT_WEIGHTS, Weights
from .oracle import domination_chain
from .simple import SearchStats, irredundant_mask, maximal_irredundant_mask

SCHEMA_VERSION = 1
MC_THRESHOLD = 0.6
SIMPLE_THRESHOLD = 0.514748
IR_ENUM_FRACTION = 0.485252
DEFAULT_LIMIT = 64


def gen_random_graph(n: int, p: float, seed: int) -> Graph:
    """G(n, p) drawn from ``random.Random(seed)``, pairs visited in lexicographic order."""
    if not 0 <= p <= 1:
        raise ValueError("p must lie in [0, 1]")
    if n < 0:
        raise ValueError("n must be non-negative")
    rng = random.Random(seed)
    return Graph(n, [(i, j) for i in range(n) for j in range(i + 1, n) if rng.random() < p])


# ---------------------------------------------------------------------------
# subset enumeration


def _compact(g: Graph) -> Graph:
    return g.induced(g.vertices())[0]


def max_irredundant_by_enumeration(g: Graph, cap: int | None = None) -> int:
    """Largest irredundant set of size at most ``cap``.

    Subsets of irredundant sets are irredundant, so a branch is dropped as
    soon as the set stops being irredundant.
    """
    h = _compact(g)
    adj, n = h.adj, h.n
    cap = n if cap is None else cap
    best = 0

    def rec(start: int, I: int, size: int) -> None:
        nonlocal best
        best = max(best, size)
        if size == cap:
            return
        for v in range(start, n):
            if size + n - v <= best:
                return
            J = I | 1 << v
            if irredundant_mask(adj, J):
                rec(v + 1, J, size + 1)

    rec(0, 0, 0)
    return best


def maximal_irredundant_of_size(g: Graph, size: int) -> list[int] | None:
    """Some maximal irredundant set of exactly ``size`` vertices, or ``None``."""
    h, order = g.induced(g.vertices())
    adj, n = h.adj, h.n
    full = (1 << n) - 1

    def rec(start: int, I: int, left: int) -> int | None:
        if left == 0:
            return I if maximal_irredundant_mask(adj, I, full) else None
        for v in range(start, n - left + 1):
            J = I | 1 << v
            if irredundant_mask(adj, J):
                hit = rec(v + 1, J, left - 1)
                if hit is not None:
                    return hit
        return None

    hit = rec(0, 0, size)
    return None if hit is None else [order[v] for v in bits(hit)]


# ---------------------------------------------------------------------------
# exact drivers


@dataclass
class DriverInfo:
    value: int = 0
    method: str = ""
    k_tried: list[int] = field(default_factory=list)
    stats: SearchStats = field(default_factory=SearchStats)

    def to_json(self) -> dict:
        return {"value": self.value, "method": self.method, "kTried": self.k_tried,
                **self.stats.to_json()}


def compute_upper_ir(g: Graph, threshold: float | None = None, algo: str = "mc",
                     weights: Weights = DEFAULT_WEIGHTS, limit: int = DEFAULT_LIMIT,
                     info: DriverInfo | None = None) -> int:
    """IR(g): ascending k with the parameterized solver, then enumeration.

    Parameters above ``threshold * n`` are not tried; the remaining
    candidates all have fewer than ``(1 - threshold) * n`` vertices and are
    enumerated directly.
    """
    info = DriverInfo() if info is None else info
    n = len(g.vertices())
    if n > limit:
        raise ValueError(f"graph has {n} vertices, limit is {limit}")
    if threshold is None:
        threshold = MC_THRESHOLD if algo == "mc" else SIMPLE_THRESHOLD
    if n == 0:
        info.method = "empty"
        return 0
    k_max = math.floor(threshold * n)
    # a matching with more than k edges rules k out
    k_lo = len(maximal_matching(g))
    search = mc.MCSearch(g, weights) if algo == "mc" else None
    for k in range(k_lo, k_max + 1):
        info.k_tried.append(k)
        if search is not None:
            found = search.decide(k)
        else:
            found, st = simple.decide_comaxir_simple(g, k)
            info.stats.merge(st)
        if found:
            if search is not None:
                info.stats.merge(search.stats)
            info.method = algo
            info.value = n - k
            return n - k
    if search is not None:
        info.stats.merge(search.stats)
    info.method = "enumeration"
    info.value = max_irredundant_by_enumeration(g, n - k_max - 1)
    return info.value


def compute_ir(g: Graph, threshold: float = IR_ENUM_FRACTION, limit: int = DEFAULT_LIMIT,
               info: DriverInfo | None = None) -> int:
    """ir(g): isolated vertices first, then candidate sizes in increasing order.

    Sizes up to ``threshold * n`` are enumerated; larger ones use the exact
    search with k = n - size, i.e. k descends from n.
    """
    info = DriverInfo() if info is None else info
    n_all = len(g.vertices())
    if n_all > limit:
        raise ValueError(f"graph has {n_all} vertices, limit is {limit}")
    iso = [v for v in g.vertices() if g.adj[v] == 0]
    rest = g.copy()
    for v in iso:
        rest.kill_vertex(v)
    h = _compact(rest)
    n = h.n
    if n == 0:
        info.method = "isolated"
        info.value = len(iso)
        return info.value
    method = "enumeration"
    for size in range(1, n + 1):
        k = n - size
        if size <= threshold * n:
            hit = maximal_irredundant_of_size(h, size) is not None
        else:
            method = "search"
            info.k_tried.append(k)
            hit, st = simple.decide_minimal_coirredundant(h, k)
            info.stats.merge(st)
        if hit:
            info.method = method
            info.value = size + len(iso)
            return info.value
    raise AssertionError("every graph has a maximal irredundant set")  # pragma: no cover


# ---------------------------------------------------------------------------
# campaign


@dataclass
class Mismatch:
    graph: str
    k: int
    check: str
    expected: object
    got: object

    def to_json(self) -> dict:
        return {"graph": self.graph, "k": self.k, "check": self.check,
                "expected": self.expected, "got": self.got}


@dataclass
class CampaignReport:
    instances: int = 0
    decisions: int = 0
    mismatches: list[Mismatch] = field(default_factory=list)
    node_samples: dict[str, dict[int, list[int]]] = field(default_factory=dict)
    node_bound_violations: dict[str, int] = field(default_factory=dict)
    mc_not_worse: int = 0
    mc_compared: int = 0
    kernel_size_violations: int = 0
    invariant_violations: dict[str, int] = field(default_factory=dict)
    invariant_examples: dict[str, str] = field(default_factory=dict)
    prunes_checked: int = 0
    states_checked: int = 0
    rules_seen: int = 0
    wall_time: float = 0.0

    @property
    def passed(self) -> bool:
        return not self.mismatches

    def node_stats(self) -> dict:
        out = {}
        for solver, per_k in sorted(self.node_samples.items()):
            out[solver] = {}
            for k, xs in sorted(per_k.items()):
                a = np.array(xs)
                out[solver][str(k)] = {"count": len(xs), "p50": float(np.percentile(a, 50)),
                                       "p90": float(np.percentile(a, 90)), "max": int(a.max())}
        return out

    def to_json(self, timing: bool = True) -> dict:
        d = {
            "schemaVersion": SCHEMA_VERSION,
            "instances": self.instances,
            "decisions": self.decisions,
            "mismatches": [m.to_json() for m in self.mismatches],
            "nodeStats": self.node_stats(),
            "nodeBoundViolations": self.node_bound_violations,
            "mcNotWorse": [self.mc_not_worse, self.mc_compared],
            "kernelSizeViolations": self.kernel_size_violations,
            "invariantViolations": self.invariant_violations,
            "prunesChecked": self.prunes_checked,
            "statesChecked": self.states_checked,
            "rulesSeen": self.rules_seen,
        }
        if timing:
            d["wallTime"] = self.wall_time
        return d

    def merge(self, other: "CampaignReport") -> None:
        self.instances += other.instances
        self.decisions += other.decisions
        self.mismatches.extend(other.mismatches)
        for s, per_k in other.node_samples.items():
            mine = self.node_samples.setdefault(s, {})
            for k, xs in per_k.items():
                mine.setdefault(k, []).extend(xs)
        for name, c in other.node_bound_violations.items():
            self.node_bound_violations[name] = self.node_bound_violations.get(name, 0) + c
        self.mc_not_worse += other.mc_not_worse
        self.mc_compared += other.mc_compared
        self.kernel_size_violations += other.kernel_size_violations
        for name, c in other.invariant_violations.items():
            self.invariant_violations[name] = self.invariant_violations.get(name, 0) + c
        for name, ex in other.invariant_examples.items():
            self.invariant_examples.setdefault(name, ex)
        self.prunes_checked += other.prunes_checked
        self.states_checked += other.states_checked
        self.rules_seen += other.rules_seen


NODE_BASES = {"simple": 3.841, "mc": 3.069}


@dataclass
class CampaignOptions:
    solvers: tuple[str, ...] = ("simple", "mc", "exact")
    kernels: bool = True
    monitor: bool = True
    check_prunes: bool = True
    drivers: bool = False


def check_instance(g: Graph, opts: CampaignOptions = CampaignOptions()) -> CampaignReport:
    """Compare every requested solver and kernel with the oracle on one graph."""
    rep = CampaignReport(instances=1)
    chain = domination_chain(g)
    n = len(g.vertices())
    enc = encode_graph(g, "graph6").strip()
    mon = InvariantMonitor(check_prunes=opts.check_prunes) if opts.monitor else None

    def bad(k, check, expected, got):
        rep.mismatches.append(Mismatch(enc, k, check, expected, got))

    def record(solver, k, nodes):
        rep.node_samples.setdefault(solver, {}).setdefault(k, []).append(nodes)
        if nodes > 1000 * NODE_BASES[solver] ** k:
            rep.node_bound_violations[solver] = rep.node_bound_violations.get(solver, 0) + 1

    for k in range(n + 1):
        want_max = chain.IR >= n - k
        want_exact = chain.ir == n - k
        nodes = {}
        if "simple" in opts.solvers:
            got, st = simple.decide_comaxir_simple(g, k, mon)
            rep.decisions += 1
            record("simple", k, st.nodes)
            nodes["simple"] = st.nodes
            if got != want_max:
                bad(k, "comaxir-simple", want_max, got)
        if "mc" in opts.solvers:
            got, st = mc.decide_comaxir_mc(g, k, observer=mon)
            rep.decisions += 1
            record("mc", k, st.nodes)
            nodes["mc"] = st.nodes
            if got != want_max:
                bad(k, "comaxir-mc", want_max, got)
        if "exact" in opts.solvers:
            got, _ = simple.decide_exact_cominmaxir(g, k, mon)
            rep.decisions += 1
            if got != want_exact:
                bad(k, "exact-cominmaxir", want_exact, got)
        if k >= 4 and "simple" in nodes and "mc" in nodes:
            rep.mc_compared += 1
            rep.mc_not_worse += nodes["mc"] <= nodes["simple"]
        if opts.kernels:
            _check_kernels(g, k, chain, n, rep, bad)
    if opts.drivers:
        up = compute_upper_ir(g)
        if up != chain.IR:
            bad(-1, "compute-upper-ir", chain.IR, up)
        lo = compute_ir(g)
        if lo != chain.ir:
            bad(-1, "compute-ir", chain.ir, lo)
        if not lo <= chain.gamma <= chain.alpha <= up:
            bad(-1, "domination-chain", "ir <= gamma <= alpha <= IR", [lo, chain.gamma, chain.alpha, up])
    if mon is not None:
        rep.invariant_violations = dict(mon.violations)
        rep.invariant_examples = dict(mon.examples)
        rep.prunes_checked = mon.prunes_checked
        rep.states_checked = mon.states_checked
        rep.rules_seen = mon.rules_seen
    return rep


def _check_kernels(g, k, chain, n, rep, bad) -> None:
    # Co-MinMaxIR asks ir <= n - k
    out = kernel_cominmaxir(g, k)
    want = chain.ir <= n - k
    if out.verdict is Verdict.YES and not want:
        bad(k, "kernel-cominmaxir", want, "YES")
    if out.verdict is Verdict.REDUCED:
        h = out.graph
        if len(h.vertices()) > 2 * k - 1:
            rep.kernel_size_violations += 1
        # isolated vertices join every maximal irredundant set, so they shift ir and n alike
        m = len(h.vertices())
        got = (0 if m == 0 else domination_chain(h).ir) <= m - k
        if got != want:
            bad(k, "kernel-cominmaxir", want, got)
    out = kernel_comaxir(g, k)
    want = chain.IR >= n - k
    if out.verdict is Verdict.NO:
        if want:
            bad(k, "kernel-comaxir", want, "NO")
    else:
        h = out.graph
        m = len(h.vertices())
        if m > 3 * out.k:
            rep.kernel_size_violations += 1
        got = (0 if m == 0 else domination_chain(h).IR) >= m - out.k
        if got != want:
            bad(k, "kernel-comaxir", want, got)


def all_graphs(n: int) -> Iterable[Graph]:
    pairs = list(itertools.combinations(range(n), 2))
    for m in range(1 << len(pairs)):
        yield Graph(n, [p for i, p in enumerate(pairs) if m >> i & 1])


def campaign_instances(max_n: int, trials: int, seed: int, exhaustive_n: int = 6
                       ) -> Iterable[Graph]:
    for n in range(exhaustive_n + 1):
        yield from all_graphs(n)
    rng = random.Random(seed)
    for _ in range(trials):
        n = rng.randint(1, max_n)
        p = rng.choice((0.2, 0.3, 0.5, 0.8))
        yield gen_random_graph(n, p, rng.randrange(1 << 30))


def _run_chunk(args) -> CampaignReport:
    graphs, opts = args
    rep = CampaignReport()
    for text in graphs:
        rep.merge(check_instance(parse_graph(text, "graph6"), opts))
    return rep


def verify_campaign(max_n: int = 12, trials: int = 0, seed: int = 42, threads: int = 1,
                    exhaustive_n: int = 6, opts: CampaignOptions | None = None,
                    progress: Callable[[int], None] | None = None) -> CampaignReport:
    """Exhaustive sweep of small graphs plus ``trials`` random ones, all checked against the oracle."""
    if max_n > 14:
        raise ValueError("the oracle comparison is limited to 14 vertices")
    opts = opts or CampaignOptions()
    t0 = time.perf_counter()
    report = CampaignReport()
    graphs = list(campaign_instances(max_n, trials, seed, exhaustive_n))
    if threads <= 1:
        for i, g in enumerate(graphs):
            report.merge(check_instance(g, opts))
            if progress is not None:
                progress(i)
    else:
        from concurrent.futures import ProcessPoolExecutor

        texts = [encode_graph(g, "graph6") for g in graphs]
        chunks = [texts[i::threads * 4] for i in range(threads * 4)]
        with ProcessPoolExecutor(threads) as pool:
            for part in pool.map(_run_chunk, [(c, opts) for c in chunks]):
                report.merge(part)
    report.wall_time = time.perf_counter() - t0
    return report
