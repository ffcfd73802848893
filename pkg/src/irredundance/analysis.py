"""Numerical checks of the branching recurrences behind the running-time bounds.

Branching cases live in ``data/branch_cases.json`` as affine decrease
vectors in the two weights, optionally parameterized by a vertex degree i.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from importlib import resources

import numpy as np

from .labeling import DEFAULT_WEIGHTS, Weights

SLACK = 1e-9


# ---------------------------------------------------------------------------
# branching numbers


def branching_number(decreases, tol: float = 1e-12) -> float:
    """Unique x > 1 with sum(x ** -d) == 1."""
    ds = [float(d) for d in decreases]
    if not ds:
        raise ValueError("empty branching vector")
    if any(d <= 0 for d in ds):
        raise ValueError(f"decreases must be positive, got {ds}")
    if len(ds) == 1:
        return 1.0

    def excess(x: float) -> float:
        return sum(x ** -d for d in ds) - 1.0

    lo, hi = 1.0, 2.0
    while excess(hi) > 0:
        lo, hi = hi, hi * 2
    while hi - lo > tol:
        mid = (lo + hi) / 2
        if excess(mid) > 0:
            lo = mid
        else:
            hi = mid
    return (lo + hi) / 2


def branching_numbers(D: np.ndarray, iters: int = 64) -> np.ndarray:
    """Row-wise branching numbers of a (points, branches) array.

    Rows containing a non-positive decrease get ``inf``; ``nan`` entries are
    treated as absent branches.
    """
    D = np.asarray(D, dtype=float)
    bad = np.any(D <= 0, axis=1)
    Dm = np.where(np.isnan(D) | bad[:, None], np.inf, D)
    lo = np.zeros(len(D))
    hi = np.full(len(D), 8.0)  # bounds on log x
    for _ in range(iters):
        mid = (lo + hi) / 2
        s = np.exp(-Dm * mid[:, None]).sum(axis=1)
        over = s > 1
        lo = np.where(over, mid, lo)
        hi = np.where(over, hi, mid)
    out = np.exp((lo + hi) / 2)
    out[bad] = np.inf
    return out


# ---------------------------------------------------------------------------
# case data


def _pair(x) -> tuple[Fraction, Fraction]:
    if isinstance(x, list):
        return Fraction(str(x[0])), Fraction(str(x[1]))
    return Fraction(str(x)), Fraction(0)


@dataclass(frozen=True)
class Decrease:
    """const + wl*omega_l + wn*omega_n, each coefficient affine in i."""

    label: str
    const: tuple[Fraction, Fraction]
    wl: tuple[Fraction, Fraction]
    wn: tuple[Fraction, Fraction]
    count: tuple[Fraction, Fraction]

    def value(self, omega_l, omega_n, i: int = 0):
        c = self.const[0] + self.const[1] * i
        a = self.wl[0] + self.wl[1] * i
        b = self.wn[0] + self.wn[1] * i
        return c + a * omega_l + b * omega_n

    def multiplicity(self, i: int = 0) -> int:
        m = self.count[0] + self.count[1] * i
        if m.denominator != 1 or m < 0:
            raise ValueError(f"bad multiplicity {m} in {self.label}")
        return int(m)


@dataclass(frozen=True)
class BranchCase:
    name: str
    source: str
    decreases: tuple[Decrease, ...]
    family: tuple[int, int] | None = None
    tail_from: int | None = None
    variant_of: str | None = None
    mirrored: bool = False

    @property
    def primary(self) -> bool:
        return self.variant_of is None

    def indices(self) -> list[int]:
        if self.family is None:
            return [0]
        return list(range(self.family[0], self.family[1] + 1))

    def vector(self, omega_l, omega_n, i: int = 0) -> list:
        out = []
        for d in self.decreases:
            out.extend([d.value(omega_l, omega_n, i)] * d.multiplicity(i))
        return out

    def mirror(self) -> "BranchCase":
        """The same recurrence with the roles of kings and gardens exchanged."""
        return BranchCase(self.name + "'", self.source, self.decreases, self.family,
                          self.tail_from, self.variant_of and self.variant_of + "'", True)


def _decrease(raw: dict) -> Decrease:
    return Decrease(raw.get("label", ""), _pair(raw.get("const", 0)), _pair(raw.get("wl", 0)),
                    _pair(raw.get("wn", 0)), _pair(raw.get("count", 1)))


@lru_cache(maxsize=1)
def _raw_data() -> dict:
    text = resources.files(__package__).joinpath("data/branch_cases.json").read_text()
    return json.loads(text)


def _cases(section: str, with_mirrors: bool) -> list[BranchCase]:
    out = []
    for raw in _raw_data()[section]:
        fam = raw.get("family")
        c = BranchCase(raw["name"], raw["source"], tuple(_decrease(b) for b in raw["branches"]),
                       tuple(fam) if fam else None, raw.get("tail_from"), raw.get("variant_of"))
        out.append(c)
        if with_mirrors and raw.get("mirror"):
            out.append(c.mirror())
    return out


def mc_cases(with_mirrors: bool = True) -> list[BranchCase]:
    return _cases("alg2", with_mirrors)


def tilde_cases() -> list[BranchCase]:
    return _cases("tilde", False)


# ---------------------------------------------------------------------------
# the half-weight algorithm


@dataclass(frozen=True)
class Alg1Constants:
    alpha: float

    @property
    def beta(self) -> float:
        return (1 + self.alpha ** 0.5) / self.alpha


@dataclass
class CheckLine:
    name: str
    value: float
    bound: float
    ok: bool
    index: int | None = None

    def to_json(self) -> dict:
        d = {"case": self.name, "value": self.value, "bound": self.bound, "ok": self.ok}
        if self.index is not None:
            d["i"] = self.index
        return d


@dataclass
class Report:
    title: str
    lines: list[CheckLine] = field(default_factory=list)
    notes: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all(l.ok for l in self.lines)

    def value(self, name: str, index: int | None = None) -> float:
        for l in self.lines:
            if l.name == name and l.index == index:
                return l.value
        raise KeyError((name, index))

    def worst(self) -> CheckLine:
        return max((l for l in self.lines if l.bound > 0), key=lambda l: l.value / l.bound)

    def to_json(self) -> dict:
        return {"check": self.title, "ok": self.ok, "lines": [l.to_json() for l in self.lines],
                **self.notes}

    def table(self) -> str:
        rows = [f"{self.title}: {'pass' if self.ok else 'FAIL'}"]
        for l in self.lines:
            tag = l.name if l.index is None else f"{l.name} i={l.index}"
            rows.append(f"  {tag:<48} {l.value:.12f}  <= {l.bound:.6f}  {'ok' if l.ok else 'FAIL'}")
        for k, v in self.notes.items():
            rows.append(f"  {k}: {v}")
        return "\n".join(rows)


def _ipair(x) -> tuple[float, float]:
    if isinstance(x, list):
        return float(x[0]), float(x[1])
    return float(x), 0.0


def _alg1_sum(terms: list[dict], alpha: float, beta: float, d: int = 0) -> float:
    total = 0.0
    for t in terms:
        c0, c1 = _ipair(t.get("coef", 1))
        a0, a1 = _ipair(t.get("alpha", 0))
        b0, b1 = _ipair(t.get("beta", 0))
        total += (c0 + c1 * d) * alpha ** (a0 + a1 * d) * beta ** (b0 + b1 * d)
    return total


def _decreasing(values: list[float]) -> bool:
    return all(b < a for a, b in zip(values, values[1:]))


def verify_alg1(alpha: float = 3.841) -> Report:
    """Evaluate every case bound of the half-weight analysis at ``alpha``."""
    if alpha <= 1:
        raise ValueError("alpha must exceed 1")
    consts = Alg1Constants(alpha)
    beta = consts.beta
    rep = Report("alg1", notes={"alpha": alpha, "beta": beta})
    for raw in _raw_data()["alg1"]:
        name = raw["name"]
        if raw.get("kind") == "identity":
            gap = abs(alpha ** -0.5 + alpha ** -1 - beta)
            rep.lines.append(CheckLine(name + " identity gap", gap, 1e-12, gap <= 1e-12))
            rep.lines.append(CheckLine(name + " beta", beta, 1.0, beta < 1.0))
            continue
        fam = raw.get("family")
        if fam is None:
            v = _alg1_sum(raw["terms"], alpha, beta)
            rep.lines.append(CheckLine(name, v, 1.0, v <= 1.0 + SLACK))
            continue
        vals = {}
        for d in range(fam[0], fam[1] + 1):
            v = _alg1_sum(raw["terms"], alpha, beta, d)
            vals[d] = v
            rep.lines.append(CheckLine(name, v, 1.0, v <= 1.0 + SLACK, d))
        tail = [vals[d] for d in range(raw["tail_from"], fam[1] + 1)]
        rep.lines.append(CheckLine(name + " tail decreasing", 0.0, 0.0, _decreasing(tail)))
    return rep


# ---------------------------------------------------------------------------
# the weighted algorithm


def _family_tail(case: BranchCase, wl: float, wn: float, x: float) -> tuple[list[float], float]:
    """f(i) = sum over branches of x ** -d at integer i, plus the argmax on a fine grid."""
    lo, hi = case.family
    vals = [sum(x ** -float(d) for d in case.vector(wl, wn, i)) for i in range(lo, hi + 1)]
    grid = np.linspace(lo, hi, 2001)

    def f(t: float) -> float:
        s = 0.0
        for d in case.decreases:
            m = float(d.count[0]) + float(d.count[1]) * t
            s += m * x ** -float(d.value(wl, wn, t))
        return s

    peak = float(grid[int(np.argmax([f(t) for t in grid]))])
    return vals, peak


def verify_alg2(w: Weights = DEFAULT_WEIGHTS, target: float = 3.069, tol: float = SLACK) -> Report:
    """Branching numbers of every weighted case; passes iff all are <= target."""
    wl, wn = w.omega_l, w.omega_n
    rep = Report("alg2", notes={"omega_l": float(wl), "omega_n": float(wn), "target": target})
    worst = 0.0
    variants = []
    for case in mc_cases():
        for i in case.indices():
            vec = case.vector(wl, wn, i)
            if min(vec) <= 0:
                bn = math.inf
            else:
                bn = branching_number(vec)
            line = CheckLine(f"{case.name} [{case.source}]", bn, target, bn <= target + tol,
                             i if case.family else None)
            if case.primary:
                rep.lines.append(line)
                worst = max(worst, bn)
            else:
                variants.append(line.to_json())
        if case.family and case.primary and not case.mirrored:
            vals, peak = _family_tail(case, float(wl), float(wn), target)
            start = case.tail_from - case.family[0]
            rep.lines.append(CheckLine(f"{case.name} tail decreasing from i={case.tail_from}",
                                       0.0, 0.0, _decreasing(vals[start:])))
            rep.notes.setdefault("family_peaks", {})[case.name] = peak
            rep.notes.setdefault("family_values", {})[case.name] = dict(
                zip(range(case.family[0], case.family[1] + 1), vals))
    rep.notes["max_branching_number"] = worst
    rep.notes["variants"] = variants
    rep.notes["saddle_(3)"] = 1 / (float(wn) * math.log(target)) if wn else None
    return rep


def family_value(name: str, i: int, w: Weights = DEFAULT_WEIGHTS, x: float = 3.069,
                 source: str | None = None) -> float:
    """f(i) = sum of x ** -d over the branches of family ``name`` at degree i."""
    for case in mc_cases(with_mirrors=False):
        if case.name == name and (case.primary if source is None else case.source == source):
            return sum(x ** -float(d) for d in case.vector(w.omega_l, w.omega_n, i))
    raise KeyError(name)


def _stack(cases: list[BranchCase], WL: np.ndarray, WN: np.ndarray) -> np.ndarray:
    """Max branching number over ``cases`` at each weight point."""
    best = np.zeros(len(WL))
    for case in cases:
        for i in case.indices():
            cols = []
            for d in case.decreases:
                c = float(d.const[0] + d.const[1] * i)
                a = float(d.wl[0] + d.wl[1] * i)
                b = float(d.wn[0] + d.wn[1] * i)
                col = c + a * WL + b * WN
                cols.extend([col] * d.multiplicity(i))
            best = np.maximum(best, branching_numbers(np.stack(cols, axis=1)))
    return best


def optimize_weights(step: float | Fraction = Fraction(1, 1000)) -> tuple[Weights, float]:
    """Grid search over the feasible weights minimizing the worst branching number."""
    step = Fraction(str(step)) if not isinstance(step, Fraction) else step
    if step <= 0:
        raise ValueError("step must be positive")
    half = Fraction(1, 2)
    wls = [half + j * step for j in range(int(half / step) + 1)]
    wns = [j * step for j in range(int(half / step) + 1)]
    pts = [(a, b) for a in wls for b in wns if a + b <= 1]
    WL = np.array([float(a) for a, _ in pts])
    WN = np.array([float(b) for _, b in pts])
    cases = [c for c in mc_cases(with_mirrors=False) if c.primary]
    obj = _stack(cases, WL, WN)
    j = int(np.argmin(obj))
    return Weights(*pts[j]), float(obj[j])


# ---------------------------------------------------------------------------
# win-win bases


def entropy_base(p: float) -> float:
    """Growth base of binomial(n, p*n)."""
    if p <= 0 or p >= 1:
        return 1.0
    return math.exp(-p * math.log(p) - (1 - p) * math.log(1 - p))


@dataclass
class WinWin:
    alpha: float
    threshold: float
    base: float
    claimed: float | None = None
    tol: float = 1e-3

    @property
    def ok(self) -> bool:
        return self.claimed is None or abs(self.base - self.claimed) <= self.tol

    def to_json(self) -> dict:
        return {"alpha": self.alpha, "threshold": self.threshold, "base": self.base,
                "claimed": self.claimed, "tol": self.tol, "ok": self.ok}


def verify_winwin(alpha: float, claimed_base: float | None = None, tol: float = 1e-3) -> WinWin:
    """Balance subset enumeration up to size p*n against alpha ** ((1-p)*n)."""
    if alpha <= 1:
        raise ValueError("alpha must exceed 1")
    lo, hi = 1e-12, 0.5
    # entropy rises on (0, 1/2) while alpha ** (1-p) falls
    for _ in range(200):
        mid = (lo + hi) / 2
        if entropy_base(mid) < alpha ** (1 - mid):
            lo = mid
        else:
            hi = mid
    p = (lo + hi) / 2
    return WinWin(alpha, p, alpha ** (1 - p), claimed_base, tol)


# ---------------------------------------------------------------------------
# vertex-count measure


@dataclass
class TildeResult:
    omega_l: float
    omega_n: float
    base: float
    source: str
    at_stated: dict

    def to_json(self) -> dict:
        return {"omega_l": self.omega_l, "omega_n": self.omega_n, "base": self.base,
                "source": self.source, "at_stated_weights": self.at_stated}


TILDE_STATED = (1.13, 0.08)


def tilde_base(wl: float, wn: float, source: str = "derived") -> float:
    cases = _tilde_selection(source)
    return float(_stack(cases, np.array([wl]), np.array([wn]))[0])


def _tilde_selection(source: str) -> list[BranchCase]:
    cases = tilde_cases()
    if source == "derived":
        return [c for c in cases if c.primary]
    return [c for c in cases if c.source == source or (c.primary and not any(
        o.variant_of == c.name and o.source == source for o in cases))]


def optimize_tilde(step: float = 0.005, source: str = "derived") -> TildeResult:
    """Minimize the worst of the two NotG recurrences under the vertex-count measure.

    The large-weight range goes up to 2 and the small one up to 1/2.
    """
    wls = np.arange(0, 2 + step / 2, step)
    wns = np.arange(0, 0.5 + step / 2, step)
    WL, WN = (a.ravel() for a in np.meshgrid(wls, wns, indexing="ij"))
    obj = _stack(_tilde_selection(source), WL, WN)
    j = int(np.argmin(obj))
    stated = {s: tilde_base(*TILDE_STATED, source=s) for s in ("derived", "measure")}
    return TildeResult(float(WL[j]), float(WN[j]), float(obj[j]), source, stated)
