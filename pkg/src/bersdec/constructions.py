"""Extremal and derived constructions.

* the hairy sphere: constants of the pentagon grid and its lower bound,
* the separation lemma for two pants-bounding curves, checked over split systems,
* lifting a pants decomposition of a sphere with 2g+2 order-two cone points to
  the hyperelliptic genus-g surface above it.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Iterator

from . import bounds
from .curves import PantsDecomposition, range_labels
from .errors import NTooLarge, ParityInconsistency, WrongCurveCount
from .hypkernel import pentagon_side
from .surface import Surface, curve_length

# -- hairy sphere ----------------------------------------------------------------


@dataclass(frozen=True)
class HairyParams:
    p: int
    ell: float
    x0: float
    boundary_count: int
    rectangle: tuple[float, float]
    lower_bound: float

    def row(self) -> dict:
        return {"p": self.p, "ell": self.ell, "x0": self.x0,
                "boundary_count": self.boundary_count, "lower_bound": self.lower_bound}

    def to_json(self) -> dict:
        return {**self.row(), "rectangle": list(self.rectangle),
                "description": {"cylinders": 2 * self.p ** 2, "grid": [2 * self.p, self.p],
                                "end_pants": 2, "end_curve_length": 4 * self.p * self.x0}}


def hairy_constants(p: int, ell: float) -> HairyParams:
    if p < 1 or ell < 0:
        raise ValueError("need p >= 1 and ell >= 0")
    x0 = pentagon_side(ell)
    return HairyParams(p, float(ell), x0, 2 * p * p + 4, (4 * p * x0, 2 * p * x0), 4 * p * x0)


def hairy_case_lengths(params: HairyParams) -> dict[str, float]:
    """Lower bounds in the three cases for a curve of a decomposition.

    A curve equal to an end curve has length 4p x0; one crossing both end curves
    runs across the rectangle twice (2 * 2p x0); one separating them meets
    2p horizontal lines spaced 2 x0 apart.
    """
    p, x0 = params.p, params.x0
    return {"equal": 4 * p * x0, "crosses_both": 2 * (2 * p * x0), "separates": 2 * p * (2 * x0)}


# -- separation lemma ----------------------------------------------------------


def binary_tree_splits(n: int) -> Iterator[tuple[frozenset, ...]]:
    """Split systems of all unrooted binary trees on leaves 1..n.

    Each split is stored as the side not containing ``n``. Leaves are inserted
    one at a time onto an edge, giving (2n-5)!! trees.
    """
    if n < 4:
        raise ValueError("need n >= 4")

    def grow(edges: list[tuple[int, int]], k: int, nxt: int):
        if k > n:
            yield edges
            return
        for idx, (u, v) in enumerate(edges):
            w = nxt
            new = edges[:idx] + edges[idx + 1:] + [(u, w), (w, v), (w, -k)]
            yield from grow(new, k + 1, nxt + 1)

    # leaves are negative ids, internal vertices positive
    star = [(1, -1), (1, -2), (1, -3)]
    for edges in grow(star, 4, 2):
        adj: dict[int, list[int]] = {}
        for u, v in edges:
            adj.setdefault(u, []).append(v)
            adj.setdefault(v, []).append(u)
        splits = []
        for u, v in edges:
            if u < 0 or v < 0:
                continue
            side = _leaves_beyond(adj, v, u)
            if n in side:
                side = frozenset(range(1, n + 1)) - side
            splits.append(frozenset(side))
        yield tuple(splits)


def _leaves_beyond(adj, start: int, avoid: int) -> frozenset:
    out, stack, seen = set(), [start], {avoid, start}
    while stack:
        x = stack.pop()
        if x < 0:
            out.add(-x)
            continue
        for y in adj[x]:
            if y not in seen:
                seen.add(y)
                stack.append(y)
    return frozenset(out)


def _same_split(a: frozenset, b: frozenset, n: int) -> bool:
    return a == b or a == frozenset(range(1, n + 1)) - b


def _splits_pair(split: frozenset, pair: frozenset) -> bool:
    return len(split & pair) == 1


def separation_condition(split: frozenset, alpha: frozenset, beta: frozenset, n: int) -> str | None:
    if _same_split(split, alpha, n) or _same_split(split, beta, n):
        return "i"
    if _splits_pair(split, alpha) and _splits_pair(split, beta):
        return "ii"
    if (alpha <= split and not split & beta) or (beta <= split and not split & alpha):
        return "iii"
    return None


@dataclass
class SeparationReport:
    n: int
    alpha: tuple[int, ...]
    beta: tuple[int, ...]
    families: int = 0
    by_condition: dict = field(default_factory=lambda: {"i": 0, "ii": 0, "iii": 0})
    counterexample: tuple | None = None

    @property
    def passed(self) -> bool:
        return self.counterexample is None

    def to_json(self) -> dict:
        return {"n": self.n, "alpha": list(self.alpha), "beta": list(self.beta),
                "families": self.families, "by_condition": self.by_condition,
                "passed": self.passed,
                "counterexample": None if self.counterexample is None
                else [sorted(s) for s in self.counterexample]}


def check_separation_lemma(n: int, alpha: Iterable[int] = (1, 2), beta: Iterable[int] | None = None,
                           families: Iterable[tuple[frozenset, ...]] | None = None) -> SeparationReport:
    """Check that every split system has a curve equal to, crossing both, or separating alpha/beta.

    A curve crosses a pants-bounding curve around {a, b} exactly when its split
    separates a from b; splits are compared as unordered bipartitions.
    """
    if n > 9:
        raise NTooLarge(f"exhaustive separation check is limited to n <= 9, got {n}")
    if n <= 5:
        raise ValueError("the separation lemma needs n > 5")
    alpha = frozenset(alpha)
    beta = frozenset(beta) if beta is not None else frozenset((n - 2, n - 1))
    if len(alpha) != 2 or len(beta) != 2 or alpha & beta or not (alpha | beta) <= set(range(1, n + 1)):
        raise ValueError("alpha and beta must be disjoint pairs of punctures")
    rep = SeparationReport(n, tuple(sorted(alpha)), tuple(sorted(beta)))
    for fam in families if families is not None else binary_tree_splits(n):
        rep.families += 1
        hit = None
        for split in fam:
            hit = separation_condition(split, alpha, beta, n)
            if hit:
                break
        if hit is None:
            rep.counterexample = tuple(fam)
            return rep
        rep.by_condition[hit] += 1
    return rep


# -- hyperelliptic lift --------------------------------------------------------

DOUBLED_ARC, ODD_ODD, EVEN_EVEN = "DoubledArc", "OddOdd", "EvenEven"


@dataclass
class LiftedCurve:
    support: tuple[int, int]
    tag: str
    base_length: float
    lifted_lengths: tuple[float, ...]


@dataclass
class LiftReport:
    g: int
    curves: list[LiftedCurve]
    pieces: list[dict]
    completions: int
    base_max: float
    lift_max: float
    total_bound: float
    theorem_bound: float
    geometric: bool = False

    @property
    def lifted_count(self) -> int:
        return sum(len(c.lifted_lengths) for c in self.curves)

    @property
    def final_count(self) -> int:
        return self.lifted_count + self.completions

    @property
    def within_theorem(self) -> bool:
        return self.total_bound <= self.theorem_bound

    def to_json(self) -> dict:
        return {"g": self.g, "geometric": self.geometric,
                "curves": [{"support": list(c.support), "tag": c.tag, "base_length": c.base_length,
                            "lifted_lengths": list(c.lifted_lengths)} for c in self.curves],
                "pieces": self.pieces, "completions": self.completions,
                "lifted_count": self.lifted_count, "final_count": self.final_count,
                "base_max": self.base_max, "lift_max": self.lift_max,
                "total_bound": self.total_bound, "theorem_bound": self.theorem_bound,
                "within_theorem": self.within_theorem}


def lift_tag(support: frozenset, n: int) -> str:
    k = len(support)
    if (n - k) % 2 != k % 2:
        raise ParityInconsistency(f"sides of sizes {k} and {n - k} differ in parity")
    if k == 2 or n - k == 2:
        return DOUBLED_ARC
    return ODD_ODD if k % 2 else EVEN_EVEN


def _pants_pieces(sets: list[frozenset], n: int) -> list[tuple[list[int], list[int]]]:
    """Complementary pants of a laminar family as (curve indices, cone points).

    Each curve is read as the side not containing ``n``; the region just inside
    curve k is bounded by k and its maximal sub-curves; the outermost region is
    bounded by the maximal curves and holds ``n``.
    """
    full = frozenset(range(1, n + 1))
    regions = []
    for k, s in enumerate(sets + [full]):
        kids = [j for j, t in enumerate(sets) if t < s
                and not any(t < u < s for u in sets)]
        covered = frozenset().union(*(sets[j] for j in kids)) if kids else frozenset()
        cones = sorted(s - covered)
        bound = kids + ([k] if k < len(sets) else [])
        regions.append((bound, cones))
    return regions


def hyperelliptic_lift(g: int, P: PantsDecomposition, S: Surface | None = None) -> LiftReport:
    """Lift P from the sphere with 2g+2 cone points to the genus-g surface."""
    n = 2 * g + 2
    if g < 2:
        raise WrongCurveCount("genus must be at least 2")
    if len(P.curves) != 2 * g - 1:
        raise WrongCurveCount(f"expected {2 * g - 1} curves on {n} cone points, got {len(P.curves)}")
    lengths = list(P.lengths)
    geometric = S is not None
    if geometric:
        if S.n != n:
            raise WrongCurveCount(f"surface has {S.n} punctures, expected {n}")
        lengths = [curve_length(S, c) for c in P.curves]
    sets = []
    for c in P.curves:
        lab = range_labels(c.support)
        sets.append(lab if n not in lab else frozenset(range(1, n + 1)) - lab)
    lifted = []
    for c, s, ell in zip(P.curves, sets, lengths):
        tag = lift_tag(s, n)
        ll = (2 * ell,) if tag == ODD_ODD else (ell, ell) if tag == EVEN_EVEN else (ell,)
        lifted.append(LiftedCurve(tuple(c.support), tag, ell, ll))

    pieces, completions = [], 0
    for bound_curves, cones in _pants_pieces(sets, n):
        odd = [k for k in bound_curves if len(sets[k]) % 2]
        holes = len(bound_curves) + len(cones)
        if holes != 3:
            raise WrongCurveCount(f"complement region with {holes} boundaries")
        if len(cones) == 2:
            continue  # disk around two cone points: collapses onto a doubled arc
        # an odd curve lifts to one boundary, an even one to two
        lifted_holes = sum(1 if k in odd else 2 for k in bound_curves)
        if len(cones) == 1:
            kind, copies = "cone-cylinder", 1
        elif len(odd) == 0:
            kind, copies = "even-pants", 2
        elif len(odd) == 2:
            kind, copies = "odd-pants", 1
        else:
            raise ParityInconsistency(f"pants bounded by {len(odd)} odd curves")
        per_copy = lifted_holes // copies
        if per_copy not in (3, 4) or per_copy * copies != lifted_holes:
            raise ParityInconsistency(f"{kind} lifts to pieces with {lifted_holes}/{copies} boundaries")
        pieces.append({"curves": bound_curves, "cones": cones, "kind": kind,
                       "holes": [per_copy] * copies})
        if per_copy == 4:
            completions += 1
    base_max = max(lengths)
    lift_max = max(max(c.lifted_lengths) for c in lifted)
    total = bounds.fourhole(lift_max) if completions else lift_max
    report = LiftReport(g, lifted, pieces, completions, base_max, lift_max, total,
                        bounds.hyperelliptic(g), geometric)
    if report.final_count != 3 * g - 3:
        raise WrongCurveCount(f"lift gives {report.final_count} curves, expected {3 * g - 3}")
    return report
