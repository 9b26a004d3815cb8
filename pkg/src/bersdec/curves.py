"""Curves on an n-punctured sphere in the planar presentation.

Generator ``i`` (``1 <= i <= n-1``) encircles puncture ``i``; the last
generator is eliminated by the relation ``x_1 ... x_n = 1``. A round curve
around consecutive punctures is a *standard curve*, recorded by its canonical
range ``(i, j)`` with ``1 <= i < j <= n-1``: the punctures it encloses on the
side avoiding puncture ``n``.

Puncture ``i`` is the polygon edge ``(v_{i-1}, v_i)`` of an n-gon, so a
canonical range ``(i, j)`` is the diagonal ``(v_{i-1}, v_j)`` and maximal
laminar families are triangulations.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Iterable, Iterator, Sequence

from .errors import NTooLarge, RangeTooLarge, RangeTooSmall

Word = tuple[int, ...]
Range = tuple[int, int]
Twist = tuple[Range, int]


# -- words -------------------------------------------------------------------

def free_reduce(word: Iterable[int]) -> Word:
    out: list[int] = []
    for x in word:
        if out and out[-1] == -x:
            out.pop()
        else:
            out.append(x)
    return tuple(out)


def cyclic_reduce(word: Iterable[int]) -> Word:
    w = free_reduce(word)
    i, j = 0, len(w)
    while j - i >= 2 and w[i] == -w[j - 1]:
        i += 1
        j -= 1
    return w[i:j]


def invert_word(word: Sequence[int]) -> Word:
    return tuple(-x for x in reversed(word))


def power(word: Sequence[int], k: int) -> Word:
    base = tuple(word) if k >= 0 else invert_word(word)
    return base * abs(k)


def cyclic_key(word: Sequence[int]) -> Word:
    """Lexicographically least rotation of the word or of its inverse."""
    w = cyclic_reduce(word)
    if not w:
        return w
    best = None
    for cand in (w, invert_word(w)):
        for r in range(len(cand)):
            rot = cand[r:] + cand[:r]
            if best is None or rot < best:
                best = rot
    return best


def standard_word(i: int, j: int) -> Word:
    return tuple(range(i, j + 1))


def twist_word(word: Sequence[int], along: Range, k: int) -> Word:
    """Apply the Dehn twist ``x_m -> w^k x_m w^-k`` (m in ``along``) and reduce."""
    if k == 0:
        return cyclic_reduce(word)
    i, j = along
    w = standard_word(i, j)
    pre, post = power(w, k), power(w, -k)
    out: list[int] = []
    for x in word:
        m = abs(x)
        if i <= m <= j:
            out.extend(free_reduce(pre + (x,) + post))
        else:
            out.append(x)
    return cyclic_reduce(out)


def apply_twists(word: Sequence[int], twists: Sequence[Twist]) -> Word:
    """Image of ``word`` under the composed twist map, outermost twist first."""
    w = tuple(word)
    for along, k in reversed(tuple(twists)):
        w = twist_word(w, along, k)
    return cyclic_reduce(w)


def _apply_to_element(word: Sequence[int], twists: Sequence[Twist]) -> Word:
    # element (not conjugacy class) image: no cyclic reduction
    w = tuple(word)
    for (i, j), k in reversed(tuple(twists)):
        if k == 0:
            continue
        sw = standard_word(i, j)
        pre, post = power(sw, k), power(sw, -k)
        out: list[int] = []
        for x in w:
            out.extend(pre + (x,) + post if i <= abs(x) <= j else (x,))
        w = free_reduce(out)
    return w


def element_image(word: Sequence[int], twists: Sequence[Twist]) -> Word:
    """Image of a group element under the twist map (free reduction only)."""
    return _apply_to_element(word, twists)


def merge_twists(head: Twist, rest: Sequence[Twist]) -> tuple[Twist, ...]:
    (along, k) = head
    rest = tuple(rest)
    if rest and rest[0][0] == along:
        k += rest[0][1]
        rest = rest[1:]
    return rest if k == 0 else ((along, k),) + rest


# -- ranges ------------------------------------------------------------------

def ranges_cross(r: Range, s: Range) -> bool:
    (a, b), (c, d) = r, s
    if b < c or d < a:
        return False
    if (a <= c and d <= b) or (c <= a and b <= d):
        return False
    return True


def canonical_range(labels: Iterable[int], n: int) -> Range | None:
    """Canonical range of a cyclic interval of punctures, or None if not an interval."""
    s = set(labels)
    if n in s:
        s = set(range(1, n + 1)) - s
    if not s:
        return None
    i, j = min(s), max(s)
    if len(s) != j - i + 1:
        return None
    return (i, j)


def range_labels(r: Range) -> frozenset[int]:
    return frozenset(range(r[0], r[1] + 1))


def range_size(r: Range) -> int:
    return r[1] - r[0] + 1


def is_laminar(ranges: Iterable[Range]) -> bool:
    rs = list(ranges)
    return all(not ranges_cross(rs[p], rs[q]) for p in range(len(rs)) for q in range(p + 1, len(rs)))


def cyclic_interval(start: int, size: int, n: int) -> list[int]:
    return [((start - 1 + t) % n) + 1 for t in range(size)]


# -- curve classes -----------------------------------------------------------

@dataclass(frozen=True)
class CurveClass:
    word: Word
    support: Range | None = None
    twists: tuple[Twist, ...] = ()

    def __post_init__(self):
        w = cyclic_reduce(self.word)
        if not w:
            raise ValueError("trivial word")
        if len(set(abs(x) for x in w)) < 2:
            raise ValueError(f"word {w} is peripheral")
        object.__setattr__(self, "word", w)
        if self.support is not None and not self.twists:
            i, j = self.support
            if any(not i <= abs(x) <= j for x in w):
                raise ValueError("word leaves its support")

    @property
    def key(self) -> Word:
        return cyclic_key(self.word)

    def to_json(self) -> dict:
        out: dict = {"word": list(self.word)}
        if self.support is not None:
            out["support"] = list(self.support)
        if self.twists:
            out["twists"] = [[list(r), k] for r, k in self.twists]
        return out

    @classmethod
    def from_json(cls, doc: dict) -> "CurveClass":
        sup = doc.get("support")
        tw = tuple((tuple(r), int(k)) for r, k in doc.get("twists", []))
        return cls(tuple(int(x) for x in doc["word"]), tuple(sup) if sup else None, tw)


def standard_curve(i: int, j: int, n: int) -> CurveClass:
    size = j - i + 1
    if size < 2:
        raise RangeTooSmall(f"range [{i}..{j}] encloses fewer than 2 punctures")
    if size > n - 2 or j > n - 1 or i < 1:
        raise RangeTooLarge(f"range [{i}..{j}] is peripheral or not canonical for n={n}")
    return CurveClass(standard_word(i, j), (i, j))


def twisted_curve(r: Range, twists: Sequence[Twist], n: int) -> CurveClass:
    base = standard_curve(r[0], r[1], n)
    if not twists:
        return base
    return CurveClass(apply_twists(base.word, twists), r, tuple(twists))


def dehn_twist(c: CurveClass, along: CurveClass | Range, k: int) -> CurveClass:
    r = along.support if isinstance(along, CurveClass) else tuple(along)
    if r is None:
        raise ValueError("twists are only taken along standard curves")
    if k == 0:
        return c
    return CurveClass(twist_word(c.word, r, k), c.support, merge_twists((r, k), c.twists))


def disjoint_certified(c1: CurveClass, c2: CurveClass) -> bool:
    """Combinatorial disjointness certificate: same twist map, non-crossing supports."""
    if c1.support is None or c2.support is None or c1.twists != c2.twists:
        return False
    return not ranges_cross(c1.support, c2.support)


@dataclass(frozen=True)
class PantsDecomposition:
    curves: tuple[CurveClass, ...]
    lengths: tuple[float, ...]
    twists: tuple[Twist, ...] = ()

    @property
    def max_length(self) -> float:
        return max(self.lengths) if self.lengths else 0.0

    @property
    def supports(self) -> tuple[Range, ...]:
        return tuple(c.support for c in self.curves)

    def is_valid(self, n: int) -> bool:
        if len(self.curves) != n - 3:
            return False
        if any(c.support is None or c.twists != self.twists for c in self.curves):
            return False
        sups = self.supports
        return len(set(sups)) == len(sups) and is_laminar(sups)

    def contains(self, c: CurveClass) -> bool:
        return any(d.key == c.key for d in self.curves)

    def to_json(self) -> dict:
        return {"curves": [c.to_json() for c in self.curves],
                "lengths": list(self.lengths),
                "max_length": self.max_length}


# -- laminar families --------------------------------------------------------

def _diag_range(a: int, b: int, n: int) -> Range | None:
    """Canonical range of polygon segment (v_a, v_b), or None for a polygon side."""
    if b - a < 2 or (a == 0 and b == n - 1):
        return None
    return (a + 1, b)


def _triangulations(a: int, b: int) -> list[tuple[tuple[int, int], ...]]:
    """All triangulations of the sub-polygon v_a..v_b as lists of its segments."""
    if b - a < 2:
        return [()]
    out = []
    for m in range(a + 1, b):
        for left in _triangulations(a, m):
            for right in _triangulations(m, b):
                out.append(left + right + ((a, m), (m, b)))
    return out


def laminar_families(n: int, ordering: Sequence[int] | None = None) -> Iterator[tuple]:
    """Every maximal laminar family of cyclic intervals (Catalan(n-2) of them).

    Without ``ordering`` each family is a sorted tuple of canonical ranges. With a
    cyclic ``ordering`` of the punctures each family is a tuple of frozensets of
    puncture labels (the side avoiding ``ordering[-1]``).
    """
    if n < 4:
        raise ValueError("n must be at least 4")
    if n > 9:
        raise NTooLarge(f"exhaustive enumeration is capped at n <= 9 (got {n})")
    for tri in _triangulations(0, n - 1):
        rs = sorted({r for seg in tri if (r := _diag_range(seg[0], seg[1], n)) is not None})
        if ordering is None:
            yield tuple(rs)
        else:
            yield tuple(frozenset(ordering[t - 1] for t in range(i, j + 1)) for i, j in rs)


def all_ranges(n: int) -> list[Range]:
    return [(i, j) for i in range(1, n) for j in range(i + 1, n) if j - i + 1 <= n - 2]


def minimax_family(n: int, weight: Callable[[Range], float],
                   forced: Range | None = None) -> tuple[float, tuple[Range, ...]]:
    """Maximal laminar family minimizing the largest weight (interval DP).

    With ``forced`` the family must contain that range. Ties resolve to the
    smallest split vertex, so the result is deterministic.
    """
    w: dict[Range, float] = {}
    for r in all_ranges(n):
        if forced is not None and ranges_cross(r, forced):
            w[r] = math.inf
        else:
            w[r] = weight(r)

    @lru_cache(maxsize=None)
    def best(a: int, b: int) -> tuple[float, tuple[Range, ...]]:
        if b - a < 2:
            return 0.0, ()
        top: tuple[float, tuple[Range, ...]] | None = None
        for m in range(a + 1, b):
            val, fam = 0.0, []
            for (p, q) in ((a, m), (m, b)):
                r = _diag_range(p, q, n)
                if r is not None:
                    val = max(val, w[r])
                    fam.append(r)
                sv, sf = best(p, q)
                val = max(val, sv)
                fam.extend(sf)
            if top is None or val < top[0]:
                top = (val, tuple(fam))
        return top

    val, fam = best(0, n - 1)
    return val, tuple(sorted(fam))
