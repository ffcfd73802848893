"""Hooks that let a test harness watch a search from the inside.

Solvers call these methods only when an observer is attached, so the
production path pays a single ``is not None`` check per event.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .graph import bits
from .oracle import cheapest_completion


@dataclass
class MaskState:
    """Bitmask snapshot of a search node."""

    adj: list[int]
    present: int
    ki: int
    ke: int
    ge: int
    w: int
    notg: int
    notk: int
    paired: int = 0

    @property
    def unlabeled(self) -> int:
        return self.present & ~(self.ki | self.ke | self.ge | self.w | self.notg | self.notk)

    @property
    def active(self) -> int:
        return self.present & ~(self.w | self.ki | self.paired)


class SearchObserver:
    def on_prune(self, solver: str, state: MaskState, budget: int) -> None:
        """A measure-based abort happened at ``state`` with parameter ``budget``."""

    def on_reduced(self, state: MaskState) -> None:
        """A reduction fixpoint was reached without a NO answer."""

    def on_rule(self, rule: int, delta: Fraction) -> None:
        """Rule ``rule`` fired and lowered the measure by ``delta``."""


@dataclass
class InvariantMonitor(SearchObserver):
    """Collects prune-soundness and reduced-state invariant violations."""

    check_prunes: bool = True
    check_states: bool = True
    prunes_checked: int = 0
    states_checked: int = 0
    rules_seen: int = 0
    violations: dict[str, int] = field(default_factory=dict)
    examples: dict[str, str] = field(default_factory=dict)

    def _flag(self, name: str, detail: str) -> None:
        self.violations[name] = self.violations.get(name, 0) + 1
        self.examples.setdefault(name, detail)

    def on_prune(self, solver: str, state: MaskState, budget: int) -> None:
        if not self.check_prunes:
            return
        self.prunes_checked += 1
        best = cheapest_completion(
            state.adj, state.present, state.ki, state.ke, state.ge, state.w,
            state.notg, state.notk, budget)
        if best is not None:
            self._flag(f"prune-unsound-{solver}", f"{state} budget={budget} completion={best}")

    def on_rule(self, rule: int, delta: Fraction) -> None:
        self.rules_seen += 1
        if delta < 0:
            self._flag("measure-increase", f"rule {rule} delta {delta}")

    def on_reduced(self, s: MaskState) -> None:
        if not self.check_states:
            return
        self.states_checked += 1
        adj = s.adj
        kg = s.ke | s.ge
        for v in bits(s.notg | s.notk):
            a = adj[v]
            x = a & kg
            if x & (x - 1):
                self._flag("not-two-labeled-neighbours", f"{s} v={v}")
            elif x and bool(x & s.ge) != bool(s.notg >> v & 1):
                self._flag("not-wrong-neighbour-kind", f"{s} v={v}")
            if a.bit_count() < 2:
                self._flag("not-degree-below-two", f"{s} v={v}")
        act = s.active
        ke_a, ge_a = s.ke & act, s.ge & act
        for v in bits(ke_a):
            if adj[v] & ge_a:
                self._flag("active-ke-ge-edge", f"{s} v={v}")
            if adj[v] & ~(s.unlabeled | s.notk):
                self._flag("active-ke-neighbourhood", f"{s} v={v}")
        for v in bits(ge_a):
            if adj[v] & ~(s.unlabeled | s.notg):
                self._flag("active-ge-neighbourhood", f"{s} v={v}")
        for v in bits(s.paired):
            if not adj[v] & s.paired & (s.ke if s.ge >> v & 1 else s.ge):
                self._flag("pair-not-adjacent", f"{s} v={v}")
        # the active set must agree with the labeling formula
        for v in bits(s.ke | s.ge):
            other = s.ge if s.ke >> v & 1 else s.ke
            formula_active = not adj[v] & other
            if formula_active != bool(act >> v & 1):
                self._flag("active-set-formula", f"{s} v={v}")
