"""Short pants decompositions: splitter search, insertion, divide and conquer."""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import mpmath

from . import bounds
from .curves import (CurveClass, PantsDecomposition, Range, Twist, all_ranges,
                     canonical_range, dehn_twist, element_image, minimax_family,
                     range_size, ranges_cross, twisted_curve)
from .errors import (BoundViolated, InsertionBoundViolated, MergeCountMismatch,
                     NoBalancedCandidate, NoCompletion, TraceMismatch)
from .surface import (CUSP, WORK_DPS, PunctureDecoration, Surface, build_surface,
                      curve_length, cut_and_cap)

MAX_BASE_N = 9


# -- lengths under a twist decoration ---------------------------------------

def decoration_lengths(s: Surface, twists: tuple[Twist, ...] = ()) -> dict[Range, float]:
    """Length of ``h(standard(r))`` for every canonical range ``r``, ``h`` = ``twists``.

    The generators' images are multiplied once into prefix products; the
    element for ``[i..j]`` is ``prefix[i-1]^-1 prefix[j]``.
    """
    n = s.n
    out: dict[Range, float] = {}
    with mpmath.workdps(WORK_DPS):
        gens = [s.word_matrix(element_image((m,), twists)) for m in range(1, n)]
        prefix = [None]
        acc = None
        for g in gens:
            acc = g if acc is None else acc @ g
            prefix.append(acc)
        # twists fix every generator's trace and the full product; a drift here
        # means the working precision was exhausted
        drift = max(abs(abs(g.tr) - abs(p.trace)) / max(1.0, abs(p.trace))
                    for g, p in zip(gens + [acc], s.punctures))
        if drift > 1e-12:
            raise TraceMismatch(f"trace drift {float(drift):.3g} under decoration {twists}")
        for (i, j) in all_ranges(n):
            b = prefix[j]
            if i == 1:
                t = b.tr
            else:
                a = prefix[i - 1]
                # trace of adj(a) @ b
                t = a.d * b.a - a.b * b.c - a.c * b.b + a.a * b.d
            out[(i, j)] = float(2 * mpmath.acosh(abs(t) / 2))
    return out


class _LengthCache:
    def __init__(self, s: Surface):
        self.s = s
        self.table: dict[tuple, dict[Range, float]] = {}

    def __call__(self, twists: tuple[Twist, ...]) -> dict[Range, float]:
        if twists not in self.table:
            self.table[twists] = decoration_lengths(self.s, twists)
        return self.table[twists]


def _cyclic_sizes(r: Range, n: int) -> tuple[int, int]:
    s = range_size(r)
    return min(s, n - s), max(s, n - s)


def single_twists(s: Surface, K: int, crossing: Range | None = None) -> list[tuple[Twist, ...]]:
    """Decorations made of one twist of power 1 <= |k| <= K along a reference curve."""
    out = []
    for e in s.reference:
        if crossing is not None and not ranges_cross(e, crossing):
            continue
        for k in range(1, K + 1):
            for kk in (k, -k):
                out.append(((e, kk),))
    return out


def candidate_family(s: Surface, size_range: tuple[int, int], K: int) -> list[CurveClass]:
    """Standard curves with a side of size in ``size_range`` plus their single-twist images.

    Twists run along reference curves that cross the standard curve (twists
    along disjoint curves only conjugate the word). Classes are deduplicated by
    their cyclic key; order is deterministic (range, then decoration).
    """
    lo, hi = size_range
    n = s.n
    seen = set()
    out = []
    for r in all_ranges(n):
        size = range_size(r)
        if not (lo <= size <= hi or lo <= n - size <= hi):
            continue
        for tw in [()] + single_twists(s, K, crossing=r):
            c = twisted_curve(r, tw, n)
            if c.key in seen:
                continue
            seen.add(c.key)
            out.append(c)
    return out


# -- splitter ---------------------------------------------------------------

@dataclass(frozen=True)
class SplitterResult:
    curve: CurveClass
    length: float
    n1: int
    n2: int
    certified: bool
    bound: float | None

    def to_json(self) -> dict:
        return {"curve": self.curve.to_json(), "length": self.length, "n1": self.n1,
                "n2": self.n2, "certified": self.certified, "bound": self.bound}


def splitter_bound(s: Surface, n2: int) -> float | None:
    """Length bound for a balanced splitter; None when the formula is vacuous."""
    kind = s.theta_kind
    try:
        if kind == "boundary" or (kind == "mixed" and s.max_boundary_length > 0):
            return bounds.boundary_splitter(n2, s.max_boundary_length)
        return bounds.splitter(n2, math.pi if kind == "cone_pi" else 0.0)
    except bounds.DomainError:
        return None


def find_splitter(s: Surface, K: int = 2, min_side: int | None = None,
                  lengths: _LengthCache | None = None) -> SplitterResult:
    n = s.n
    lo = math.ceil(n / 4)
    if min_side is not None:
        lo = max(lo, min_side)
    hi = n - lo
    if lo > hi:
        raise NoBalancedCandidate(f"no side size in [{lo}, {hi}] for n={n}")
    lengths = lengths or _LengthCache(s)
    best = None
    for c in candidate_family(s, (lo, hi), K):
        ell = lengths(c.twists)[c.support]
        balance = min(_cyclic_sizes(c.support, n))
        if best is None:
            best = (c, ell, balance)
            continue
        tie = abs(ell - best[1]) <= 1e-12 * max(1.0, best[1])
        # equal lengths: prefer the more balanced cut, then the earlier candidate
        if (not tie and ell < best[1]) or (tie and balance > best[2]):
            best = (c, ell, balance)
    if best is None:
        raise NoBalancedCandidate(f"empty candidate family for n={n}")
    c, ell, _ = best
    n1, n2 = _cyclic_sizes(c.support, n)
    bound = splitter_bound(s, n2)
    return SplitterResult(c, ell, n1, n2, bound is not None and ell <= bound, bound)


# -- insertion --------------------------------------------------------------

def _decomposition(s: Surface, fam, twists, lengths: _LengthCache) -> PantsDecomposition:
    table = lengths(twists)
    curves = tuple(twisted_curve(r, twists, s.n) for r in fam)
    return PantsDecomposition(curves, tuple(table[r] for r in fam), tuple(twists))


def project_insert_search(s: Surface, P: PantsDecomposition, gamma: CurveClass, K: int = 2,
                          lengths: _LengthCache | None = None, slack: float = 1e-9) -> PantsDecomposition:
    """Shortest standard completion of ``gamma`` under its own twist decoration.

    When that completion exceeds ``max_length(P) + length(gamma)`` the search is
    widened by single twists of power ``|k| <= K`` along ranges disjoint from
    ``gamma`` (these fix ``gamma``).
    """
    if P.contains(gamma):
        return P
    if gamma.support is None:
        raise NoCompletion("gamma has no support range")
    n = s.n
    lengths = lengths or _LengthCache(s)
    h = tuple(gamma.twists)
    ell_gamma = lengths(h)[gamma.support]
    limit = P.max_length + ell_gamma
    decorations = [h]
    for r in all_ranges(n):
        if r != gamma.support and not ranges_cross(r, gamma.support):
            for k in range(1, K + 1):
                for kk in (k, -k):
                    decorations.append(h + ((r, kk),))
    best = None
    for tw in decorations:
        table = lengths(tw)
        val, fam = minimax_family(n, table.__getitem__, forced=gamma.support)
        if not math.isfinite(val):
            continue
        if best is None or val < best[0]:
            best = (val, fam, tw)
        if best[0] <= limit + slack:
            break
    if best is None:
        raise NoCompletion("no laminar completion contains gamma")
    val, fam, tw = best
    if val > limit + slack:
        raise InsertionBoundViolated(
            f"best completion {val:.6g} exceeds {P.max_length:.6g} + {ell_gamma:.6g}")
    return _decomposition(s, fam, tw, lengths)


# -- divide and conquer ------------------------------------------------------

@dataclass
class Certificate:
    max_length: float
    bound: float
    bound_id: str
    within_bound: bool
    trace: list = field(default_factory=list)

    def to_json(self) -> dict:
        return {"max_length": self.max_length, "bound": self.bound, "bound_id": self.bound_id,
                "within_bound": self.within_bound, "trace": self.trace}


def catalog_bound(s: Surface) -> tuple[str, float]:
    n = s.n
    kind = s.theta_kind
    if s.max_boundary_length > 0:
        return "boundary_sqrt", bounds.boundary_sqrt(n, s.max_boundary_length)
    if kind == "cone_pi" and n >= 5:
        return "cone_sqrt", bounds.cone_sqrt(n)
    return "sphere_sqrt", bounds.sphere_sqrt(n)


def base_decompose(s: Surface, K: int, lengths: _LengthCache | None = None) -> PantsDecomposition:
    """Minimax standard family over the identity and all single-twist decorations."""
    lengths = lengths or _LengthCache(s)
    best = None
    for tw in [()] + single_twists(s, K):
        val, fam = minimax_family(s.n, lengths(tw).__getitem__)
        if best is None or val < best[0]:
            best = (val, fam, tw)
    _, fam, tw = best
    return _decomposition(s, fam, tw, lengths)


def _to_parent_range(piece: Surface, r: Range, n: int) -> Range:
    labels = [piece.labels[t - 1] for t in range(r[0], r[1] + 1)]
    if None in labels:
        raise MergeCountMismatch("child curve encloses a cap cusp")
    return canonical_range(labels, n)


def _decompose(s: Surface, base_n: int, K: int, trace: list) -> PantsDecomposition:
    n = s.n
    lengths = _LengthCache(s)
    if n <= base_n:
        return base_decompose(s, K, lengths)
    split = find_splitter(s, K, min_side=3, lengths=lengths)
    gamma = split.curve
    i, j = gamma.support
    piece_a, piece_b = cut_and_cap(s, gamma, range(i, j + 1))
    trace.append({"n": n, "splitter_len": split.length, "certified": split.certified,
                  "n1": split.n1, "n2": split.n2})
    ranges = [gamma.support]
    extra: list[Twist] = []
    for piece in (piece_a, piece_b):
        sub = _decompose(piece, base_n, K, trace)
        a = piece.n - 2
        done = project_insert_search(piece, sub, twisted_curve((1, a), (), piece.n), K)
        ranges += [_to_parent_range(piece, c.support, n) for c in done.curves if c.support != (1, a)]
        for r, k in done.twists:
            # a child twist along y_p..y_q is the twist along the parent's x-range
            # (a range through puncture n twists its complement: same class up to conjugation)
            extra.append((_to_parent_range(piece, r, n), k))
    if len(ranges) != n - 3:
        raise MergeCountMismatch(f"merged {len(ranges)} curves, expected {n - 3}")
    return _decomposition(s, sorted(ranges), tuple(gamma.twists) + tuple(extra), lengths)


def bers_decompose(s: Surface, base_n: int = 5, K: int = 2) -> tuple[PantsDecomposition, Certificate]:
    """Divide-and-conquer short pants decomposition with a bound certificate.

    Runs the recursion at every twist depth ``0..K`` and keeps the shortest
    result, so raising ``K`` never makes the answer longer.
    """
    if s.n < 4:
        raise ValueError("need at least 4 punctures")
    if not 4 <= base_n <= MAX_BASE_N:
        raise ValueError(f"base_n must lie in [4, {MAX_BASE_N}]")
    if K < 0:
        raise ValueError("twist depth must be nonnegative")
    best = None
    for depth in range(K + 1):
        trace: list = []
        P = _decompose(s, base_n, depth, trace)
        if best is None or P.max_length < best[0].max_length:
            best = (P, trace, depth)
    P, trace, depth = best
    if not P.is_valid(s.n):
        raise MergeCountMismatch("result is not a valid laminar decomposition")
    bound_id, bound = catalog_bound(s)
    cert = Certificate(P.max_length, bound, bound_id, P.max_length <= bound, trace)
    return P, cert


# -- four-holed sphere --------------------------------------------------------

def four_holed_short_curve(boundaries, ell: float, tau: float = 0.0, K: int = 2):
    """Shortest of the interior curve and its twisted duals on a four-holed sphere.

    ``boundaries`` holds four decorations (or lengths; 0 means a cusp).
    Returns ``(curve, length)``.
    """
    decs = []
    for b in boundaries:
        if isinstance(b, PunctureDecoration):
            decs.append(b)
        else:
            decs.append(CUSP if b == 0 else PunctureDecoration("boundary", float(b)))
    if len(decs) != 4:
        raise ValueError("a four-holed sphere has four boundaries")
    s = build_surface(decs, [(1, 2)], [(ell, tau)])
    cands = [twisted_curve((1, 2), (), 4)]
    around13 = CurveClass((1, 2, 3, -2))
    for k in range(-K, K + 1):
        tw = (((1, 2), k),) if k else ()
        cands.append(twisted_curve((2, 3), tw, 4))
        if k:
            cands.append(dehn_twist(around13, (1, 2), k))
        else:
            cands.append(around13)
    best = None
    for c in cands:
        length = curve_length(s, c)
        if best is None or length < best[1]:
            best = (c, length)
    limit = bounds.fourhole(max(d.length for d in decs))
    if best[1] > limit:
        raise BoundViolated(f"shortest candidate {best[1]:.6g} exceeds 2 max(b) + 12 = {limit:.6g}")
    return best
