"""Hyperbolic spheres given by Fenchel-Nielsen coordinates on a planar pants tree.

The reference decomposition is a maximal laminar family of canonical ranges
inside ``[1..n-1]``; together with the root ``[1..n-1]`` and the singletons it
is a rooted binary tree whose internal nodes are pairs of pants. The holonomy
is built top-down: each pair of pants is put in a normal form with the
prescribed boundary traces and glued onto its parent along the shared axis.

Twists are geometric. At a reference curve the twist is the signed distance
along its axis from the foot of the perpendicular to the sibling boundary
(parent side) to the foot of the perpendicular to the left child boundary
(child side). The construction is therefore equivariant under conjugation,
which lets :func:`cut_and_cap` read the coordinates of a piece back off its
matrices.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Sequence

import mpmath

from . import hypkernel as hk
from .curves import CurveClass, Range, element_image, is_laminar, minimax_family
from .errors import (InvalidLaminarFamily, NonSeparatingWord, ParseError,
                     TraceMismatch, UnbalancedCut)
from .hypkernel import Mat2

KINDS = ("cusp", "cone_pi", "boundary")
MAX_FN_LENGTH = 50.0
# generator matrices grow like exp(depth); the construction runs with extra digits
WORK_DPS = 250


@dataclass(frozen=True)
class PunctureDecoration:
    kind: str = "cusp"
    length: float = 0.0

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown puncture kind {self.kind!r}")
        if self.kind == "boundary" and not (self.length > 0 and math.isfinite(self.length)):
            raise ValueError("boundary punctures need a positive finite length")

    @property
    def trace(self) -> float:
        if self.kind == "cusp":
            return -2.0
        if self.kind == "cone_pi":
            return 0.0
        return hk.trace_from_length(self.length)


CUSP = PunctureDecoration("cusp")
CONE = PunctureDecoration("cone_pi")


@dataclass(frozen=True)
class Surface:
    punctures: tuple[PunctureDecoration, ...]
    reference: tuple[Range, ...]
    fn: tuple[tuple[float, float], ...]
    holonomy: tuple[Mat2, ...] = field(compare=False, repr=False, default=())
    holonomy_mp: tuple[Mat2, ...] = field(compare=False, repr=False, default=())
    # original puncture labels when this surface is a capped piece (None = cap cusp)
    labels: tuple[int | None, ...] | None = field(compare=False, repr=False, default=None)

    @property
    def n(self) -> int:
        return len(self.punctures)

    def fn_length(self, r: Range) -> float:
        return self.fn[self.reference.index(r)][0]

    def word_matrix(self, word: Sequence[int], exact: bool = True) -> Mat2:
        """Holonomy of a word; ``exact`` uses the extended-precision generators."""
        hol = self.holonomy_mp if exact else self.holonomy
        if not exact:
            return hk.product(hol[x - 1] if x > 0 else hol[-x - 1].inv() for x in word)
        with mpmath.workdps(WORK_DPS):
            return hk.product(hol[x - 1] if x > 0 else hol[-x - 1].inv() for x in word)

    def trace(self, word: Sequence[int]) -> float:
        return float(self.word_matrix(word).tr)

    def length(self, word: Sequence[int]) -> float:
        return hk.length_from_trace(self.trace(word))

    @property
    def theta_kind(self) -> str:
        kinds = {p.kind for p in self.punctures}
        return kinds.pop() if len(kinds) == 1 else "mixed"

    @property
    def max_boundary_length(self) -> float:
        return max((p.length for p in self.punctures if p.kind == "boundary"), default=0.0)


def curve_length(s: Surface, c: CurveClass | Sequence[int]) -> float:
    word = c.word if isinstance(c, CurveClass) else tuple(c)
    return s.length(word)


# -- tree --------------------------------------------------------------------

def _children(node: Range, ranges: set[Range]) -> tuple[Range, Range]:
    i, j = node
    inner = [r for r in ranges if i <= r[0] and r[1] <= j and r != node]
    maximal = [r for r in inner if not any(o != r and o[0] <= r[0] and r[1] <= o[1] for o in inner)]
    parts = sorted(maximal)
    covered = set()
    for r in parts:
        covered.update(range(r[0], r[1] + 1))
    parts += [(m, m) for m in range(i, j + 1) if m not in covered]
    parts.sort()
    if len(parts) != 2:
        raise InvalidLaminarFamily(f"node [{i}..{j}] has {len(parts)} children, expected 2")
    return parts[0], parts[1]


def pants_tree(n: int, reference: Sequence[Range]) -> dict[Range, tuple[Range, Range]]:
    """Map every internal node of the reference tree to its (left, right) children."""
    if n < 4:
        raise InvalidLaminarFamily("need at least 4 punctures")
    refs = [tuple(r) for r in reference]
    if len(refs) != n - 3:
        raise InvalidLaminarFamily(f"expected {n - 3} reference curves, got {len(refs)}")
    if len(set(refs)) != len(refs):
        raise InvalidLaminarFamily("duplicate reference curve")
    for i, j in refs:
        if not (1 <= i < j <= n - 1) or j - i + 1 > n - 2:
            raise InvalidLaminarFamily(f"range [{i}..{j}] is not a canonical curve range for n={n}")
    if not is_laminar(refs):
        raise InvalidLaminarFamily("reference ranges cross")
    nodes = set(refs) | {(1, n - 1)}
    return {node: _children(node, nodes) for node in nodes}


# -- pants normal form -------------------------------------------------------

def pants_normal_form(x: float, y: float, z: float) -> tuple[Mat2, Mat2]:
    """Matrices A, B with traces x, y and tr(AB) = z (all traces <= 0)."""
    lib = hk._lib(z)
    if abs(x) > 1e-12 and abs(y) > 1e-12:
        s = x * y - z
        if s < 2.0 - 1e-12:
            raise TraceMismatch(f"traces {(x, y, z)} do not bound a pair of pants")
        v = (s + lib.sqrt(max(s * s - 4.0, 0.0))) / 2.0
        return Mat2(x, 1.0, -1.0, 0.0), Mat2(y, v, -1.0 / v, 0.0)
    if abs(y) <= 1e-12 and abs(x) > 1e-12:
        b, a = pants_normal_form(y, x, z)
        return a, b
    # x is an order-two elliptic trace
    u = y / 2.0
    q = u * u - 1.0
    disc = z * z + 4.0 * q
    if disc < -1e-12:
        raise TraceMismatch(f"traces {(x, y, z)} do not bound a pair of pants")
    v = (-z + lib.sqrt(max(disc, 0.0))) / 2.0
    w = v + z
    if abs(v) < 1e-300 and abs(w) < 1e-300:
        raise TraceMismatch(f"traces {(x, y, z)} give a degenerate pair of pants")
    return Mat2(x, 1.0, -1.0, 0.0), Mat2(y - u, v, w, u)


def _foot_in_frame(p: Mat2, x: Mat2) -> float:
    return hk.foot_height(p.inv() @ x @ p)


def measure_twist(m: Mat2, sibling: Mat2, left: Mat2) -> float:
    """Geometric twist at the curve with holonomy ``m`` (see module docstring)."""
    p, _ = hk.axis_frame(m)
    return _foot_in_frame(p, left) - _foot_in_frame(p, sibling)


def _glue(m: Mat2, sibling: Mat2, x: float, y: float, tau: float) -> tuple[Mat2, Mat2]:
    a0, b0 = pants_normal_form(x, y, m.tr)
    q, _ = hk.axis_frame(a0 @ b0)
    a_diag = q.inv() @ a0 @ q
    p, _ = hk.axis_frame(m)
    s_parent = _foot_in_frame(p, sibling)
    s_child = hk.foot_height(a_diag)
    delta = s_parent + tau - s_child
    e = hk._lib(delta).exp(delta / 2.0)
    a = hk.renormalize(p @ Mat2(e, 0.0, 0.0, 1.0 / e) @ a_diag @ Mat2(1.0 / e, 0.0, 0.0, e) @ p.inv())
    return a, a.inv() @ m


# -- construction ------------------------------------------------------------

def _mp_trace(kind: str, length) -> mpmath.mpf:
    if kind == "cusp":
        return mpmath.mpf(-2)
    if kind == "cone_pi":
        return mpmath.mpf(0)
    return -2 * mpmath.cosh(mpmath.mpf(length) / 2)


def _holonomy(punctures, reference, fn) -> tuple[Mat2, ...]:
    n = len(punctures)
    tree = pants_tree(n, reference)
    coords = {tuple(r): c for r, c in zip(reference, fn)}
    hol: list[Mat2 | None] = [None] * n

    def node_trace(node: Range):
        if node[0] == node[1]:
            p = punctures[node[0] - 1]
            return _mp_trace(p.kind, p.length)
        return _mp_trace("boundary", coords[node][0])

    def descend(node: Range, m: Mat2, sibling: Mat2) -> None:
        if node[0] == node[1]:
            hol[node[0] - 1] = m
            return
        left, right = tree[node]
        tau = mpmath.mpf(coords[node][1])
        a, b = _glue(m, sibling, node_trace(left), node_trace(right), tau)
        descend(left, a, b)
        descend(right, b, a)

    with mpmath.workdps(WORK_DPS):
        root = (1, n - 1)
        left, right = tree[root]
        last = punctures[-1]
        a0, b0 = pants_normal_form(node_trace(left), node_trace(right),
                                   _mp_trace(last.kind, last.length))
        descend(left, a0, b0)
        descend(right, b0, a0)
        top = hk.product(hol[:-1])
        hol[-1] = hk.renormalize(top).inv()
        return tuple(hol)


def check_invariants(s: Surface, tol_rel: float = 1e-8, tol_len: float = 1e-6) -> None:
    with mpmath.workdps(WORK_DPS):
        rel = hk.to_float(hk.product(s.holonomy_mp))
    if not rel.close_to(hk.IDENTITY, tol_rel):
        raise TraceMismatch(f"relation product {rel} is not +-I")
    for i, (p, g) in enumerate(zip(s.punctures, s.holonomy_mp), 1):
        t = float(g.tr)
        if p.kind == "boundary":
            ok = abs(abs(t) - abs(p.trace)) <= tol_rel * max(1.0, abs(p.trace))
        else:
            ok = abs(t - p.trace) <= tol_rel
        if not ok:
            raise TraceMismatch(f"generator {i} has trace {t!r}, decoration {p.kind}")
    for r, (length, _) in zip(s.reference, s.fn):
        got = s.length(range(r[0], r[1] + 1))
        if abs(got - length) > tol_len * length:
            raise TraceMismatch(f"reference curve {r} has length {got!r}, expected {length!r}")


def build_surface(punctures: Sequence[PunctureDecoration], reference: Sequence[Range],
                  fn: Sequence[tuple[float, float]], labels=None) -> Surface:
    punctures = tuple(punctures)
    reference = tuple(tuple(int(v) for v in r) for r in reference)
    fn = tuple((float(l), float(t)) for l, t in fn)
    if len(fn) != len(reference):
        raise InvalidLaminarFamily("one (length, twist) pair per reference curve is required")
    for length, twist in fn:
        if not (0.0 < length < MAX_FN_LENGTH) or not math.isfinite(twist):
            raise ValueError(f"Fenchel-Nielsen pair ({length}, {twist}) out of range")
    hol_mp = _holonomy(punctures, reference, fn)
    hol = tuple(hk.to_float(m) for m in hol_mp)
    s = Surface(punctures, reference, fn, hol, hol_mp, None if labels is None else tuple(labels))
    check_invariants(s)
    return s


def with_fn(s: Surface, fn: Sequence[tuple[float, float]]) -> Surface:
    return build_surface(s.punctures, s.reference, fn, s.labels)


# -- cutting -----------------------------------------------------------------

def _side_labels(sup: Range, side: frozenset[int], n: int) -> list[int]:
    i, j = sup
    inside = frozenset(range(i, j + 1))
    if side == inside:
        return list(range(i, j + 1))
    if side == frozenset(range(1, n + 1)) - inside:
        return list(range(j + 1, n + 1)) + list(range(1, i))
    raise NonSeparatingWord(f"side {sorted(side)} is not cut off by the curve with support {sup}")


def side_generators(s: Surface, gamma: CurveClass, labels: Sequence[int]) -> list[Mat2]:
    """Holonomy of the (twisted) generators around ``labels`` on gamma's side."""
    out = []
    for m in labels:
        if m == s.n:
            out.append(s.holonomy_mp[-1])
        else:
            out.append(s.word_matrix(element_image((m,), gamma.twists)))
    return out


def _cap_piece(s: Surface, gamma: CurveClass, labels: list[int], cap_length: float) -> Surface:
    with mpmath.workdps(WORK_DPS):
        reference, fn = _cap_coordinates(s, gamma, labels, cap_length)
    punctures = [s.punctures[m - 1] for m in labels] + [CUSP, CUSP]
    return build_surface(punctures, reference, fn, list(labels) + [None, None])


def _cap_coordinates(s, gamma, labels, cap_length):
    """Reference family and coordinates of a capped piece, measured from ``s``.

    The piece's reference is the shortest laminar family containing the cut
    curve ``[1..a]`` (short reference curves keep the rebuilt matrices small).
    """
    a = len(labels)
    gens = side_generators(s, gamma, labels)
    prefix = [hk.IDENTITY]
    for g in gens:
        prefix.append(hk.renormalize(prefix[-1] @ g))

    def mat(r: Range) -> Mat2:
        return prefix[r[0] - 1].inv() @ prefix[r[1]]

    def weight(r: Range) -> float:
        if r[1] > a or r == (1, a):
            return 0.0 if r == (1, a) else math.inf
        return float(2 * mpmath.acosh(abs(mat(r).tr) / 2))

    _, reference = minimax_family(a + 2, weight, forced=(1, a))
    tree = pants_tree(a + 2, reference)
    parent_of = {}
    for node, kids in tree.items():
        for kid in kids:
            parent_of[kid] = (node, kids[1] if kid == kids[0] else kids[0])
    fn = []
    for r in reference:
        if r == (1, a):
            fn.append((cap_length, 0.0))
            continue
        m = mat(r)
        left, _ = tree[r]
        sibling = parent_of[r][1]
        fn.append((float(2 * mpmath.acosh(abs(m.tr) / 2)),
                   float(measure_twist(m, mat(sibling), mat(left)))))
    return reference, fn


def cut_and_cap(s: Surface, gamma: CurveClass, side) -> tuple[Surface, Surface]:
    """Cut along ``gamma`` and cap each piece with a two-cusped pair of pants.

    ``side`` is the puncture set of the first returned piece. Each piece lists
    its punctures in the cyclic order of ``s`` followed by the two cap cusps;
    ``labels`` records the original puncture numbers.
    """
    n = s.n
    side = frozenset(int(v) for v in side)
    other = frozenset(range(1, n + 1)) - side
    if len(side) < 2 or len(other) < 2:
        raise UnbalancedCut(f"both sides need at least 2 punctures, got {len(side)} and {len(other)}")
    if gamma.support is None:
        raise NonSeparatingWord("curve has no recorded support")
    labels_a = _side_labels(gamma.support, side, n)
    labels_b = _side_labels(gamma.support, other, n)
    length = curve_length(s, gamma)
    return _cap_piece(s, gamma, labels_a, length), _cap_piece(s, gamma, labels_b, length)


# -- JSON --------------------------------------------------------------------

def to_json(s: Surface) -> dict:
    punct = []
    for p in s.punctures:
        d = {"kind": p.kind}
        if p.kind == "boundary":
            d["length"] = p.length
        punct.append(d)
    return {"punctures": punct,
            "reference": [list(r) for r in s.reference],
            "fn": [{"curve": k, "length": l, "twist": t} for k, (l, t) in enumerate(s.fn, 1)]}


def dumps(s: Surface) -> str:
    return json.dumps(to_json(s), indent=1)


def _finite(v, where: str) -> float:
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise ParseError(f"{where}: expected a number, got {v!r}")
    v = float(v)
    if not math.isfinite(v):
        raise ParseError(f"{where}: value is not finite")
    return v


def from_json(doc) -> Surface:
    if not isinstance(doc, dict):
        raise ParseError("surface document must be a JSON object")
    for key in ("punctures", "reference", "fn"):
        if key not in doc:
            raise ParseError(f"missing field {key!r}")
    punctures = []
    for k, p in enumerate(doc["punctures"], 1):
        if not isinstance(p, dict) or p.get("kind") not in KINDS:
            raise ParseError(f"punctures[{k}]: kind must be one of {KINDS}")
        if p["kind"] == "boundary":
            length = _finite(p.get("length"), f"punctures[{k}].length")
            if length <= 0:
                raise ParseError(f"punctures[{k}].length must be positive")
            punctures.append(PunctureDecoration("boundary", length))
        else:
            punctures.append(PunctureDecoration(p["kind"]))
    reference = []
    for k, r in enumerate(doc["reference"], 1):
        if not (isinstance(r, list) and len(r) == 2 and all(isinstance(v, int) for v in r)):
            raise ParseError(f"reference[{k}]: expected [i, j] integers")
        reference.append((r[0], r[1]))
    by_curve = {}
    for e in doc["fn"]:
        if not isinstance(e, dict) or not isinstance(e.get("curve"), int):
            raise ParseError(f"fn entry {e!r}: needs an integer 'curve'")
        c = e["curve"]
        by_curve[c] = (_finite(e.get("length"), f"fn curve {c} length"),
                       _finite(e.get("twist", 0.0), f"fn curve {c} twist"))
    fn = []
    for c in range(1, len(reference) + 1):
        if c not in by_curve:
            raise ParseError(f"fn: missing entry for curve {c}")
        fn.append(by_curve[c])
    try:
        return build_surface(punctures, reference, fn)
    except (ValueError, TraceMismatch) as exc:
        raise ParseError(str(exc)) from exc


def loads(text: str) -> Surface:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"line {exc.lineno} column {exc.colno}: {exc.msg}") from exc
    return from_json(doc)
