"""Kings, gardens and wilderness: labelings, validity and the two measures."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from enum import IntEnum
from fractions import Fraction
from collections.abc import Iterable

from .graph import Graph, bits, mask_of


class Label(IntEnum):
    UNLABELED = 0
    KI = 1  # king with an internal garden
    KE = 2  # king with an external garden
    GE = 3  # external garden
    NOTG = 4
    NOTK = 5
    W = 6

    @property
    def json_name(self) -> str:
        return _JSON_NAMES[self]


_JSON_NAMES = {
    Label.UNLABELED: "Unlabeled",
    Label.KI: "Ki",
    Label.KE: "Ke",
    Label.GE: "Ge",
    Label.NOTG: "NotG",
    Label.NOTK: "NotK",
    Label.W: "W",
}
_FROM_JSON = {v: k for k, v in _JSON_NAMES.items()}

#: labels that count as "not yet decided" for validity purposes
UNDECIDED = (Label.UNLABELED, Label.NOTG, Label.NOTK)


@dataclass(frozen=True)
class Weights:
    """The pair (omega_l, omega_n) of the measure-and-conquer measure."""

    omega_l: Fraction
    omega_n: Fraction

    def __post_init__(self) -> None:
        wl, wn = Fraction(self.omega_l), Fraction(self.omega_n)
        object.__setattr__(self, "omega_l", wl)
        object.__setattr__(self, "omega_n", wn)
        if not (0 <= wn <= Fraction(1, 2) <= wl <= 1 and wl + wn <= 1):
            raise ValueError(
                f"infeasible weights omega_l={float(wl)}, omega_n={float(wn)}: "
                "need 0 <= omega_n <= 1/2 <= omega_l <= 1 and omega_l + omega_n <= 1"
            )

    @classmethod
    def parse(cls, wl: str | float | Fraction, wn: str | float | Fraction) -> "Weights":
        return cls(Fraction(str(wl)), Fraction(str(wn)))


DEFAULT_WEIGHTS = Weights(Fraction(7455, 10000), Fraction(2455, 10000))


@dataclass
class Labeling:
    """Per-vertex labels, the active flag and the king/garden pairing.

    ``partner[v]`` is -1 unless ``v`` is an inactive king or garden.
    """

    label: list[Label]
    active: list[bool]
    partner: list[int]
    log: object = field(default=None, repr=False, compare=False)

    @classmethod
    def empty(cls, n: int) -> "Labeling":
        return cls([Label.UNLABELED] * n, [True] * n, [-1] * n)

    @classmethod
    def from_sets(cls, n: int, pairs: Iterable[tuple[int, int]] = (), **sets: Iterable[int]) -> "Labeling":
        """Build a labeling from keyword vertex sets (``ki=``, ``ke=``, ``ge=``,
        ``notg=``, ``notk=``, ``w=``) and explicit ``(king, garden)`` pairs.

        Paired vertices are labelled and made inactive.  Activity of the
        rest follows the usual formula.
        """
        names = {"ki": Label.KI, "ke": Label.KE, "ge": Label.GE,
                 "notg": Label.NOTG, "notk": Label.NOTK, "w": Label.W}
        L = cls.empty(n)
        for key, vs in sets.items():
            lab = names[key]
            for v in vs:
                if L.label[v] != Label.UNLABELED:
                    raise ValueError(f"vertex {v} labelled twice")
                L.label[v] = lab
        for king, garden in pairs:
            L.label[king] = Label.KE
            L.label[garden] = Label.GE
            L.partner[king] = garden
            L.partner[garden] = king
        for v in range(n):
            L.active[v] = L.label[v] in UNDECIDED or (
                L.label[v] in (Label.KE, Label.GE) and L.partner[v] < 0)
        return L

    def copy(self) -> "Labeling":
        return Labeling(list(self.label), list(self.active), list(self.partner))

    def set(self, v: int, label: Label, active: bool | None = None, partner: int | None = None) -> None:
        """Change the state of ``v``, recording the old state if an undo log is attached."""
        if self.log is not None:
            self.log.record_label(self, v, (self.label[v], self.active[v], self.partner[v]))
        self.label[v] = label
        if active is not None:
            self.active[v] = active
        if partner is not None:
            self.partner[v] = partner

    def restore(self, v: int, old: tuple) -> None:
        self.label[v], self.active[v], self.partner[v] = old

    def members(self, *labels: Label) -> list[int]:
        return [v for v, lab in enumerate(self.label) if lab in labels]

    def mask(self, *labels: Label) -> int:
        m = 0
        for v, lab in enumerate(self.label):
            if lab in labels:
                m |= 1 << v
        return m

    def count(self, *labels: Label, active: bool | None = None) -> int:
        return sum(
            1 for v, lab in enumerate(self.label)
            if lab in labels and (active is None or self.active[v] == active)
        )

    def is_complete(self) -> bool:
        return not any(lab in UNDECIDED for lab in self.label)

    def expected_active(self, g: Graph) -> list[bool]:
        """Active flags given by the formula U ∪ NotG ∪ NotK ∪ unpaired Ke/Ge."""
        ke, ge = self.mask(Label.KE), self.mask(Label.GE)
        out = []
        for v, lab in enumerate(self.label):
            if lab in UNDECIDED:
                out.append(True)
            elif lab == Label.KE:
                out.append(not g.adj[v] & ge)
            elif lab == Label.GE:
                out.append(not g.adj[v] & ke)
            else:
                out.append(False)
        return out

    # serialization -------------------------------------------------------
    def to_json(self) -> dict:
        pairs = sorted(
            [v, p] for v, p in enumerate(self.partner)
            if p >= 0 and self.label[v] == Label.KE
        )
        return {
            "labels": {str(v): lab.json_name for v, lab in enumerate(self.label)},
            "active": [v for v, a in enumerate(self.active) if a],
            "partner": pairs,
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)

    @classmethod
    def from_json(cls, data: dict) -> "Labeling":
        n = len(data["labels"])
        L = cls.empty(n)
        for key, name in data["labels"].items():
            L.label[int(key)] = _FROM_JSON[name]
        act = set(data.get("active", []))
        L.active = [v in act for v in range(n)]
        for king, garden in data.get("partner", []):
            L.partner[king] = garden
            L.partner[garden] = king
        return L


def _undecided_mask(L: Labeling) -> int:
    return L.mask(*UNDECIDED)


def valid_masks(adj: list[int], ki: int, ke: int, ge: int, w: int, und: int) -> bool:
    """Validity on bitmasks: ``und`` is the set of undecided vertices."""
    if ki & ke or ki & ge or ki & w or ke & ge or ke & w or ge & w:
        return False
    for v in bits(ki):
        if adj[v] & ~w:
            return False
    for v in bits(ke):
        a = adj[v]
        if not a & (ge | und):
            return False
        x = a & ge
        if x & (x - 1):
            return False
    for v in bits(ge):
        a = adj[v]
        if not a & (ke | und):
            return False
        x = a & ke
        if x & (x - 1):
            return False
    return True


def is_valid(g: Graph, L: Labeling) -> bool:
    """Check the validity conditions for the king/garden/wilderness sets of ``L``.

    Unlabeled, NotG and NotK vertices all count as not yet decided.
    """
    return valid_masks(
        g.adj, L.mask(Label.KI), L.mask(Label.KE), L.mask(Label.GE),
        L.mask(Label.W), _undecided_mask(L) & g.vertex_mask(),
    )


def not_sets(g: Graph, L: Labeling) -> tuple[set[int], set[int]]:
    """Undecided vertices that can never become a garden (NotG) or a king (NotK).

    Each candidate is tested by relabelling it and re-running the full
    validity check.
    """
    ki, ke, ge, w = (L.mask(x) for x in (Label.KI, Label.KE, Label.GE, Label.W))
    und = _undecided_mask(L) & g.vertex_mask()
    notg, notk = set(), set()
    for v in bits(und):
        b = 1 << v
        if not valid_masks(g.adj, ki, ke, ge | b, w, und & ~b):
            notg.add(v)
        if not valid_masks(g.adj, ki, ke | b, ge, w, und & ~b):
            notk.add(v)
    return notg, notk


def measure_simple(k: int, L: Labeling) -> Fraction:
    """k - |W| - |Ke|/2 - |Ge|/2."""
    half = Fraction(1, 2)
    return k - L.count(Label.W) - half * L.count(Label.KE) - half * L.count(Label.GE)


def measure_mc(k: int, L: Labeling, w: Weights = DEFAULT_WEIGHTS) -> Fraction:
    ge_inactive = sum(1 for v, lab in enumerate(L.label) if lab == Label.GE and not L.active[v])
    kg_active = sum(
        1 for v, lab in enumerate(L.label) if lab in (Label.KE, Label.GE) and L.active[v])
    nots = L.count(Label.NOTG, Label.NOTK)
    return k - L.count(Label.W) - ge_inactive - w.omega_l * kg_active - w.omega_n * nots


def extends(L: Labeling, L2: Labeling) -> bool:
    """True iff ``L2`` extends ``L`` (``L`` precedes ``L2`` in the labeling order)."""
    for v, (a, b) in enumerate(zip(L.label, L2.label)):
        if a in (Label.KI, Label.KE, Label.GE, Label.W) and b != a:
            return False
        # an undecided NotG/NotK vertex may stay as it is
        if a == Label.NOTG and b not in (Label.NOTG, Label.W, Label.KE):
            return False
        if a == Label.NOTK and b not in (Label.NOTK, Label.W, Label.GE):
            return False
        if L2.active[v] and not L.active[v]:
            return False
    return True


def labeling_of_solution(g: Graph, I: Iterable[int]) -> Labeling:
    """Complete labeling for an irredundant set ``I``.

    Kings isolated in G[I] get an internal garden; every other king is paired
    with its lowest-numbered private neighbour.
    """
    members = sorted(set(I))
    im = mask_of(members)
    L = Labeling([Label.W] * g.n, [False] * g.n, [-1] * g.n)
    for v in members:
        if not g.adj[v] & im:
            L.label[v] = Label.KI
            continue
        garden = -1
        for u in bits(g.adj[v] & ~im):
            if g.adj[u] & im == 1 << v:
                garden = u
                break
        if garden < 0:
            raise ValueError(f"set is not irredundant: vertex {v} has no private neighbour")
        L.label[v] = Label.KE
        L.label[garden] = Label.GE
        L.partner[v] = garden
        L.partner[garden] = v
    return L
