"""Combinatorial insertion of a separating curve into a pants decomposition.

A curve ``gamma`` of length ``L`` cuts the sphere into two hemispheres. Inside
each one, the pants curves leave a family of disjoint arcs with endpoints on
``gamma``; drawn in a disk they are non-crossing chords, and the complementary
regions form a tree whose edges are the chords. Walking that tree from a
well-chosen root chord produces a pants decomposition containing ``gamma``
in which every new curve is a concatenation of ``gamma``-subarcs and arcs,
with piecewise length at most ``length(P) + L``.

Regions are typed by how many chords they touch: one chord (a bigon around a
hole), two chords (a quadrilateral, with or without a hole), three (a hexagon)
and four (an octagon, two of whose chords lie on the same pants curve).
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import (InsertionBoundViolated, MalformedInstance, MergeCountMismatch,
                     NoValidRootEdge, ParseError)

TYPES_BY_VALENCY = {1: ("ii",), 2: ("i", "iii"), 3: ("iv",), 4: ("v",)}
HOLED_TYPES = ("ii", "iii")


@dataclass(frozen=True)
class Arc:
    curve_id: int
    length: float
    s: float
    t: float
    hemisphere: int


@dataclass
class NormalPositionInstance:
    gamma_length: float
    arcs: list[Arc]
    # (hemisphere, sorted chord ids) -> {"type": ..., "holes": weight, "point": x?}
    # or a list of such dicts told apart by "point", a gamma coordinate on the region
    regions: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {"gamma_length": self.gamma_length,
                "arcs": [{"curve": a.curve_id, "length": a.length, "endpoints": [a.s, a.t],
                          "hemisphere": a.hemisphere} for a in self.arcs],
                "regions": [{"hemisphere": h, "arcs": list(k), **v}
                            for (h, k), vs in sorted(self.regions.items())
                            for v in (vs if isinstance(vs, list) else [vs])]}

    @classmethod
    def from_json(cls, doc) -> "NormalPositionInstance":
        try:
            arcs = [Arc(int(a["curve"]), float(a["length"]), float(a["endpoints"][0]),
                        float(a["endpoints"][1]), int(a["hemisphere"])) for a in doc["arcs"]]
            regions = {}
            for r in doc.get("regions", []):
                key = (int(r["hemisphere"]), tuple(sorted(int(x) for x in r["arcs"])))
                rdesc = {k: v for k, v in r.items() if k in ("type", "holes", "point")}
                if key in regions:
                    prev = regions[key]
                    regions[key] = (prev if isinstance(prev, list) else [prev]) + [rdesc]
                else:
                    regions[key] = rdesc
            return cls(float(doc["gamma_length"]), arcs, regions)
        except (KeyError, TypeError, ValueError, IndexError) as exc:
            raise ParseError(f"malformed instance document: {exc!r}") from exc


def loads(text: str) -> NormalPositionInstance:
    try:
        return NormalPositionInstance.from_json(json.loads(text))
    except json.JSONDecodeError as exc:
        raise ParseError(f"line {exc.lineno} column {exc.colno}: {exc.msg}") from exc


# -- faces ---------------------------------------------------------------------

@dataclass
class Region:
    key: tuple[int, ...]
    chords: list[int]              # in cyclic order around the region
    segments: list[tuple[float, float]]  # gamma-subarcs (start, end), forward
    type: str
    holes: int

    @property
    def valency(self) -> int:
        return len(self.chords)


def _forward(a: float, b: float, L: float) -> float:
    return (b - a) % L


def _region_desc(entry, segs, L: float) -> dict:
    """Pick the override for a region; a ``point`` on gamma disambiguates equal chord sets."""
    if entry is None:
        return {}
    for rdesc in entry if isinstance(entry, list) else [entry]:
        x = rdesc.get("point")
        if x is None or any(_forward(s, x, L) < _forward(s, t, L) for s, t in segs):
            return rdesc
    return {}


class Hemisphere:
    """Chord diagram of one hemisphere with its region tree."""

    def __init__(self, inst: NormalPositionInstance, side: int):
        self.L = L = inst.gamma_length
        self.side = side
        self.ids = [k for k, a in enumerate(inst.arcs) if a.hemisphere == side]
        if not self.ids:
            raise MalformedInstance(f"hemisphere {side} has no arcs: gamma must cross P")
        self.arcs = inst.arcs
        pts = []
        for k in self.ids:
            a = inst.arcs[k]
            for x in (a.s, a.t):
                if not (0.0 <= x < L):
                    raise MalformedInstance(f"arc {k} endpoint {x} outside [0, {L})")
                pts.append((x, k))
        pts.sort()
        xs = [p[0] for p in pts]
        if len(set(xs)) != len(xs):
            raise MalformedInstance("arc endpoints must be pairwise distinct")
        for p in range(len(self.ids)):
            for q in range(p + 1, len(self.ids)):
                if self._cross(self.ids[p], self.ids[q]):
                    raise MalformedInstance(f"arcs {self.ids[p]} and {self.ids[q]} cross")
        self.pts = pts
        self.regions = self._faces(inst)
        self.region_of_chord: dict[int, list[int]] = {k: [] for k in self.ids}
        for r, reg in enumerate(self.regions):
            for c in reg.chords:
                self.region_of_chord[c].append(r)

    def _ends(self, k: int) -> tuple[float, float]:
        a = self.arcs[k]
        return (min(a.s, a.t), max(a.s, a.t))

    def _cross(self, p: int, q: int) -> bool:
        a, b = self._ends(p)
        c, d = self._ends(q)
        return (a < c < b) != (a < d < b)

    def _faces(self, inst) -> list[Region]:
        pts, L = self.pts, self.L
        m = len(pts)
        other = {}
        for idx, (x, k) in enumerate(pts):
            other.setdefault(k, []).append(idx)
        partner = {}
        for k, (i0, i1) in other.items():
            partner[i0], partner[i1] = i1, i0
        seen = [False] * m
        regions = []
        for start in range(m):
            if seen[start]:
                continue
            chords, segs = [], []
            seg = start
            while not seen[seg]:
                seen[seg] = True
                nxt = (seg + 1) % m
                segs.append((pts[seg][0], pts[nxt][0]))
                chords.append(pts[nxt][1])
                seg = partner[nxt]
            key = tuple(sorted(chords))
            rdesc = _region_desc(inst.regions.get((self.side, key)), segs, L)
            valency = len(chords)
            if valency not in TYPES_BY_VALENCY:
                raise MalformedInstance(f"region {key} touches {valency} arcs (at most 4 allowed)")
            rtype = rdesc.get("type", TYPES_BY_VALENCY[valency][0])
            if rtype not in TYPES_BY_VALENCY[valency]:
                raise MalformedInstance(f"region {key} with {valency} arcs cannot be of type {rtype}")
            holes = int(rdesc.get("holes", 1)) if rtype in HOLED_TYPES else 0
            if rtype in HOLED_TYPES and holes < 1:
                raise MalformedInstance(f"region {key} needs a hole weight >= 1")
            regions.append(Region(key, chords, segs, rtype, holes))
        return regions

    # gamma-side of a chord -------------------------------------------------

    def side_length(self, c: int, region: int) -> float:
        """Length of the gamma-subarc cut off by chord ``c`` on the side of ``region``."""
        a, b = self._ends(c)
        inside = self._region_inside(region, c)
        inner = b - a
        return inner if inside else self.L - inner

    def _region_inside(self, region: int, c: int) -> bool:
        # a region lies within (a, b) iff one of its segments does
        a, b = self._ends(c)
        s, t = self.regions[region].segments[0]
        mid = (s + _forward(s, t, self.L) / 2.0) % self.L
        return a < mid < b

    def far_region(self, c: int, region: int) -> int:
        r0, r1 = self.region_of_chord[c]
        return r1 if r0 == region else r0

    def subtree(self, c: int, region: int) -> list[int]:
        """Regions reached by crossing ``c`` away from ``region``."""
        out, stack = [], [(c, self.far_region(c, region))]
        while stack:
            via, r = stack.pop()
            out.append(r)
            for d in self.regions[r].chords:
                if d != via:
                    stack.append((d, self.far_region(d, r)))
        return out

    def toward(self, c: int, region: int) -> float:
        """Length of gamma_c for chord ``c`` directed away from ``region``."""
        return self.side_length(c, self.far_region(c, region))

    def holes(self) -> list[int]:
        return [r for r, reg in enumerate(self.regions) if reg.holes > 0]


# -- root edge -----------------------------------------------------------------

def root_edge_ok(hemi: Hemisphere, c0: int) -> bool:
    half = hemi.L / 2.0
    for side_region in hemi.region_of_chord[c0]:
        for r in _walk_edges(hemi, c0, side_region):
            c, frm = r
            if hemi.toward(c, frm) > half + 1e-12:
                return False
    return True


def _walk_edges(hemi: Hemisphere, c0: int, start: int):
    """Directed edges (chord, from-region) of the subtree hanging off ``start``."""
    stack = [(c0, start)]
    while stack:
        via, r = stack.pop()
        for d in hemi.regions[r].chords:
            if d != via:
                yield (d, r)
                stack.append((d, hemi.far_region(d, r)))


def choose_root_edge(hemi: Hemisphere) -> int:
    order = sorted(hemi.ids, key=lambda k: (hemi.arcs[k].s, k))
    for c in order:
        if root_edge_ok(hemi, c):
            return c
    raise NoValidRootEdge(f"no arc in hemisphere {hemi.side} satisfies the half-length rule")


# -- tree walk -----------------------------------------------------------------

@dataclass
class ConstructedCurve:
    pieces: tuple
    length: float
    enclosed: frozenset
    hemisphere: int
    rule: str

    def to_json(self) -> dict:
        return {"pieces": [list(p) for p in self.pieces], "length": self.length,
                "enclosed": sorted(self.enclosed), "hemisphere": self.hemisphere, "rule": self.rule}


@dataclass
class InsertionResult:
    gamma_length: float
    P_length: float
    retained: int
    constructed: list[ConstructedCurve]
    curves: list[ConstructedCurve]
    n_punctures: int
    contains_gamma: bool = True
    restarts: dict = field(default_factory=dict)

    @property
    def max_constructed_length(self) -> float:
        return max((c.length for c in self.constructed), default=0.0)

    @property
    def count(self) -> int:
        return 1 + self.retained + len(self.curves)

    @property
    def max_length(self) -> float:
        """Piecewise length of the new decomposition (gamma, P-curves, new curves)."""
        return max([self.gamma_length, self.P_length if self.retained else 0.0]
                   + [c.length for c in self.curves])

    def to_json(self) -> dict:
        return {"gamma_length": self.gamma_length, "P_length": self.P_length,
                "retained": self.retained, "contains_gamma": self.contains_gamma,
                "count": self.count, "n_punctures": self.n_punctures,
                "max_constructed_length": self.max_constructed_length,
                "constructed": [c.to_json() for c in self.constructed],
                "curves": [c.to_json() for c in self.curves], "restarts": self.restarts}


class _Restart(Exception):
    def __init__(self, chord: int):
        self.chord = chord


def _walk(hemi: Hemisphere, c0: int, allow_restart: bool) -> list[ConstructedCurve]:
    out: list[ConstructedCurve] = []
    L = hemi.L
    ell = {k: hemi.arcs[k].length for k in hemi.ids}

    def enclosed(c: int, frm: int) -> frozenset:
        return frozenset(r for r in hemi.subtree(c, frm) if hemi.regions[r].holes)

    def along(c: int, frm: int, rule: str) -> ConstructedCurve:
        g = hemi.toward(c, frm)
        return ConstructedCurve((("arc", c), ("gamma", c, frm)), ell[c] + g,
                                enclosed(c, frm), hemi.side, rule)

    # initial step: both sides of c0
    for r in hemi.region_of_chord[c0]:
        g = hemi.side_length(c0, r)
        out.append(ConstructedCurve((("arc", c0), ("gamma-side", c0, r)), ell[c0] + g,
                                    _side_holes(hemi, c0, r), hemi.side, "root"))

    queue = [(c0, r_from, r) for r_from, r in
             ((hemi.region_of_chord[c0][1], hemi.region_of_chord[c0][0]),
              (hemi.region_of_chord[c0][0], hemi.region_of_chord[c0][1]))]
    while queue:
        c, r_from, v = queue.pop(0)
        reg = hemi.regions[v]
        others = _cyclic_from(reg.chords, c)[1:]
        if reg.type == "ii":
            continue
        if reg.type == "i":
            queue.append((others[0], v, hemi.far_region(others[0], v)))
            continue
        if reg.type == "iii":
            out.append(along(others[0], v, "iii"))
            queue.append((others[0], v, hemi.far_region(others[0], v)))
            continue
        if reg.type == "iv":
            for d in others:
                out.append(along(d, v, "iv"))
                queue.append((d, v, hemi.far_region(d, v)))
            continue
        # octagon: cyclic order c, c1, c~, c2
        c1, ct, c2 = others
        cid = lambda k: hemi.arcs[k].curve_id
        for d in (ct, c1, c2):
            out.append(along(d, v, "v"))
        if cid(c) == cid(ct):
            g_c = hemi.toward(c, r_from)
            g_ct = hemi.toward(ct, v)
            out.append(ConstructedCurve((("arc", c), ("gamma-minus", c, ct), ("arc", ct)),
                                        ell[c] + ell[ct] + g_c - g_ct,
                                        enclosed(c1, v) | enclosed(c2, v), hemi.side, "v.a"))
        elif cid(c1) == cid(c2):
            g_c = hemi.toward(c, r_from)
            g1 = _gap(hemi, v, c, c1)
            g4 = _gap(hemi, v, c2, c)
            alpha = g_c - g1 - g4
            alpha_p = _gap(hemi, v, c1, ct) + hemi.toward(ct, v) + _gap(hemi, v, ct, c2)
            if alpha > L / 2.0 + 1e-12:
                if c == c0 and allow_restart:
                    raise _Restart(c1)
                raise MalformedInstance(
                    f"octagon {reg.key}: alpha {alpha:.6g} exceeds L/2 away from the root arc")
            out.append(ConstructedCurve((("alpha", c1, c2), ("arc", c2), ("alpha'", c2, c1), ("arc", c1)),
                                        alpha + alpha_p + ell[c1] + ell[c2],
                                        enclosed(c1, v) | enclosed(c2, v), hemi.side, "v.b"))
        else:
            raise MalformedInstance(f"octagon {reg.key} has no pair of arcs on a common curve")
        for d in (c1, ct, c2):
            queue.append((d, v, hemi.far_region(d, v)))
    return out


def _side_holes(hemi: Hemisphere, c0: int, r: int) -> frozenset:
    # regions on r's side of c0: r plus everything reached from r avoiding c0
    seen, stack = {r}, [(c0, r)]
    while stack:
        via, x = stack.pop()
        for d in hemi.regions[x].chords:
            if d != via:
                y = hemi.far_region(d, x)
                if y not in seen:
                    seen.add(y)
                    stack.append((d, y))
    return frozenset(x for x in seen if hemi.regions[x].holes)


def _cyclic_from(chords: list[int], c: int) -> list[int]:
    k = chords.index(c)
    return chords[k:] + chords[:k]


def _gap(hemi: Hemisphere, region: int, c_from: int, c_to: int) -> float:
    """Length of the region's gamma-segment between consecutive chords ``c_from`` and ``c_to``."""
    reg = hemi.regions[region]
    k = len(reg.chords)
    for i in range(k):
        # segment i ends at chord i; the previous chord is i-1
        if reg.chords[i] == c_to and reg.chords[i - 1] == c_from:
            s, t = reg.segments[i]
            return _forward(s, t, hemi.L)
        if reg.chords[i] == c_from and reg.chords[i - 1] == c_to:
            s, t = reg.segments[i]
            return _forward(s, t, hemi.L)
    raise MalformedInstance(f"arcs {c_from} and {c_to} are not adjacent around region {reg.key}")


def _validate_lengths(inst: NormalPositionInstance, P_length: float) -> None:
    if not (inst.gamma_length > 0 and math.isfinite(inst.gamma_length)):
        raise MalformedInstance("gamma_length must be positive and finite")
    per_curve: dict[int, float] = {}
    for k, a in enumerate(inst.arcs):
        if not (a.length > 0 and math.isfinite(a.length)):
            raise MalformedInstance(f"arc {k} has non-positive length")
        if a.length > P_length + 1e-12:
            raise MalformedInstance(f"arc {k} is longer than P_length")
        if a.hemisphere not in (0, 1):
            raise MalformedInstance(f"arc {k} hemisphere must be 0 or 1")
        per_curve[a.curve_id] = per_curve.get(a.curve_id, 0.0) + a.length
    for cid, total in per_curve.items():
        if total > P_length + 1e-12:
            raise MalformedInstance(f"arcs of curve {cid} add up to {total:.6g} > P_length")


def project_insert_combinatorial(inst: NormalPositionInstance, P_length: float) -> InsertionResult:
    """Insert gamma by the region-tree walk; every new curve has piecewise length <= P + L."""
    if not inst.arcs:
        raise MalformedInstance("gamma is disjoint from every arc; nothing to insert")
    _validate_lengths(inst, P_length)
    constructed: list[ConstructedCurve] = []
    final: list[ConstructedCurve] = []
    retained = 0
    punctures = 0
    restarts = {}
    for side in (0, 1):
        hemi = Hemisphere(inst, side)
        holes = hemi.holes()
        retained += sum(hemi.regions[h].holes - 1 for h in holes)
        punctures += sum(hemi.regions[h].holes for h in holes)
        c0 = choose_root_edge(hemi)
        n_oct = sum(1 for r in hemi.regions if r.type == "v")
        tries = 0
        while True:
            try:
                curves = _walk(hemi, c0, allow_restart=tries < n_oct)
                break
            except _Restart as rs:
                tries += 1
                c0 = rs.chord
        restarts[side] = tries
        constructed += curves
        kept, seen = [], set()
        for cv in curves:
            if not 2 <= len(cv.enclosed) <= len(holes) - 1 or cv.enclosed in seen:
                continue
            seen.add(cv.enclosed)
            kept.append(cv)
        for p in range(len(kept)):
            for q in range(p + 1, len(kept)):
                a, b = kept[p].enclosed, kept[q].enclosed
                if a & b and not (a <= b or b <= a):
                    raise MergeCountMismatch("constructed curves cross")
        if len(kept) != len(holes) - 2:
            raise MergeCountMismatch(
                f"hemisphere {side}: {len(kept)} new curves, expected {len(holes) - 2}")
        final += kept
    res = InsertionResult(inst.gamma_length, P_length, retained, constructed, final, punctures,
                          restarts=restarts)
    if res.max_constructed_length > P_length + inst.gamma_length + 1e-9:
        raise InsertionBoundViolated(
            f"constructed length {res.max_constructed_length:.6g} exceeds P + gamma")
    return res


# -- synthetic instances ---------------------------------------------------------

def _random_tree(rng: np.random.Generator, n_nodes: int, max_deg: int = 4) -> list[list[int]]:
    adj: list[list[int]] = [[]]
    while len(adj) < n_nodes:
        cands = [v for v in range(len(adj)) if len(adj[v]) < max_deg]
        v = int(rng.choice(cands))
        adj.append([v])
        adj[v].append(len(adj) - 1)
    for v in range(len(adj)):
        rng.shuffle(adj[v])
    return adj


def _embed(adj: list[list[int]], rng, L: float, offset: float):
    """Chord endpoints from an Euler tour of the tree (edge -> (s, t))."""
    tour: list[tuple[int, int]] = []  # sequence of (edge, node-after)

    def visit(v: int, parent: int | None):
        nbrs = adj[v]
        if parent is not None:
            k = nbrs.index(parent)
            nbrs = nbrs[k + 1:] + nbrs[:k]
        for w in nbrs:
            tour.append((min(v, w), max(v, w)))
            visit(w, v)
            tour.append((min(v, w), max(v, w)))

    visit(0, None)
    gaps = rng.uniform(0.2, 1.0, size=len(tour))
    gaps *= L / gaps.sum()
    pos = (offset + np.concatenate([[0.0], np.cumsum(gaps)[:-1]])) % L
    ends: dict[tuple[int, int], list[float]] = {}
    for e, x in zip(tour, pos):
        ends.setdefault(e, []).append(float(x))
    return ends


def random_instance(rng: np.random.Generator, regions_per_side: tuple[int, int] = (2, 7),
                    gamma_length: float | None = None) -> tuple[NormalPositionInstance, float]:
    """A random valid instance and a matching P length.

    Each hemisphere is a random tree with vertex degree at most 4 embedded as a
    chord diagram; leaves carry holes, degree-2 vertices carry a hole with
    probability 1/2, octagons pair up one set of opposite arcs on a curve.
    """
    L = float(gamma_length if gamma_length is not None else rng.uniform(0.5, 6.0))
    arcs: list[Arc] = []
    regions = {}
    next_curve = 0
    for side in (0, 1):
        nodes = int(rng.integers(regions_per_side[0], regions_per_side[1] + 1))
        adj = _random_tree(rng, nodes)
        ends = _embed(adj, rng, L, float(rng.uniform(0, L)))
        index = {}
        for e in sorted(ends):
            s, t = ends[e]
            index[e] = len(arcs)
            arcs.append(Arc(next_curve, float(rng.uniform(0.1, 3.0)), s, t, side))
            next_curve += 1
        for v, nbrs in enumerate(adj):
            key = tuple(sorted(index[(min(v, w), max(v, w))] for w in nbrs))
            if len(nbrs) == 1:
                regions[(side, key)] = {"type": "ii", "holes": int(rng.integers(1, 4))}
            elif len(nbrs) == 2 and rng.random() < 0.5:
                regions[(side, key)] = {"type": "iii", "holes": int(rng.integers(1, 4))}
            elif len(nbrs) == 4:
                # cyclic order around the face follows the tree's rotation at v
                cyc = [index[(min(v, w), max(v, w))] for w in nbrs]
                pair = (cyc[0], cyc[2]) if rng.random() < 0.5 else (cyc[1], cyc[3])
                shared = arcs[pair[0]].curve_id
                a = arcs[pair[1]]
                arcs[pair[1]] = Arc(shared, a.length, a.s, a.t, a.hemisphere)
    per_curve: dict[int, float] = {}
    for a in arcs:
        per_curve[a.curve_id] = per_curve.get(a.curve_id, 0.0) + a.length
    P_length = max(per_curve.values())
    return NormalPositionInstance(L, arcs, regions), P_length
