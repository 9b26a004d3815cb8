import json
import math

import mpmath
import numpy as np
import pytest

from bersdec import hypkernel as hk
from bersdec.curves import CurveClass, laminar_families, standard_curve, twisted_curve
from bersdec.errors import NonHyperbolicTrace, ParseError, UnbalancedCut
from bersdec.experiments import random_triangulation
from bersdec.surface import (CONE, CUSP, PunctureDecoration, build_surface, check_invariants,
                             curve_length, cut_and_cap, dumps, loads, pants_normal_form)

from _support import parent_word, random_punctures, random_word


@pytest.fixture
def s4():
    return build_surface([CUSP] * 4, [(1, 2)], [(1.0, 0.0)])


@pytest.fixture
def s5():
    return build_surface([CUSP] * 5, [(1, 2), (1, 3)], [(1.0, 0.0), (1.0, 0.0)])


def test_reference_trace_n4(s4):
    assert abs(s4.trace((1, 2))) == pytest.approx(float(2 * mpmath.cosh(0.5)), abs=1e-9)
    assert curve_length(s4, standard_curve(1, 2, 4)) == pytest.approx(1.0, abs=1e-6)


def test_relation_n5(s5):
    with mpmath.workdps(60):
        prod = hk.product(s5.holonomy_mp, renorm_every=10**9)
    assert hk.to_float(prod).close_to(hk.IDENTITY, 1e-8)


def test_twist_keeps_reference_length(s5):
    t = build_surface([CUSP] * 5, [(1, 2), (1, 3)], [(1.0, 0.3), (1.0, 0.0)])
    assert abs(t.trace((1, 2))) == pytest.approx(abs(s5.trace((1, 2))), abs=1e-9)
    # but a crossing curve does see the twist
    assert curve_length(t, standard_curve(2, 3, 5)) != pytest.approx(curve_length(s5, standard_curve(2, 3, 5)))


def test_peripheral_word_rejected(s5):
    with pytest.raises(NonHyperbolicTrace):
        curve_length(s5, (1,))


def test_conjugate_word_same_length(s5):
    w = (1, 2, 3, -1, 2)
    assert s5.length((3, 1) + w + (-1, -3)) == pytest.approx(s5.length(w), rel=1e-9)


def test_normal_form_traces():
    for x, y, z in [(-2.0, -2.0, -2.5), (0.0, -2.0, -3.0), (0.0, 0.0, -2.2), (-2.0, 0.0, -4.0)]:
        A, B = pants_normal_form(x, y, z)
        assert A.tr == pytest.approx(x) and B.tr == pytest.approx(y)
        assert (A @ B).tr == pytest.approx(z, abs=1e-12)
        assert A.det == pytest.approx(1.0) and B.det == pytest.approx(1.0)


def test_cone_generators_have_zero_trace():
    rng = np.random.default_rng(2)
    ref = random_triangulation(8, rng)
    s = build_surface([CONE] * 8, ref, [(float(rng.uniform(0.5, 2.5)), 0.1) for _ in ref])
    assert all(abs(float(m.tr)) <= 1e-8 for m in s.holonomy_mp)


def test_invariants_across_kinds_and_families():
    rng = np.random.default_rng(5)
    for n in (4, 5, 6, 7):
        for fam in laminar_families(n):
            fn = [(float(rng.uniform(0.3, 3.0)), float(rng.uniform(-1, 1))) for _ in fam]
            s = build_surface(random_punctures(n, rng), fam, fn)
            check_invariants(s)
            for r, (ell, _) in zip(fam, fn):
                assert curve_length(s, standard_curve(*r, n)) == pytest.approx(ell, rel=1e-6)


def test_full_twist_is_dehn_twist():
    # twisting by a full length equals a Dehn twist on the crossing curves
    n = 5
    s = build_surface([CUSP] * n, [(1, 2), (1, 3)], [(1.3, 0.2), (0.9, -0.1)])
    t = build_surface([CUSP] * n, [(1, 2), (1, 3)], [(1.3, 0.2 + 1.3), (0.9, -0.1)])
    c = standard_curve(2, 3, n)
    plus = curve_length(s, twisted_curve((2, 3), (((1, 2), 1),), n))
    minus = curve_length(s, twisted_curve((2, 3), (((1, 2), -1),), n))
    assert min(abs(curve_length(t, c) - plus), abs(curve_length(t, c) - minus)) <= 1e-6


def test_cut_counts_and_cap_length():
    rng = np.random.default_rng(0)
    ref = random_triangulation(6, rng)
    s = build_surface([CUSP] * 6, ref, [(1.0 + 0.1 * k, 0.2) for k in range(len(ref))])
    gamma = standard_curve(1, 3, 6)
    A, B = cut_and_cap(s, gamma, [1, 2, 3])
    assert A.n == 5 and B.n == 5
    assert A.labels == (1, 2, 3, None, None)
    ell = curve_length(s, gamma)
    assert curve_length(A, standard_curve(1, 3, 5)) == pytest.approx(ell, rel=1e-6)
    assert curve_length(A, standard_curve(1, 2, 5)) == pytest.approx(
        curve_length(s, standard_curve(1, 2, 6)), rel=1e-6)


def test_cut_preserves_word_lengths():
    rng = np.random.default_rng(11)
    for _ in range(15):
        n = int(rng.integers(5, 9))
        ref = random_triangulation(n, rng)
        s = build_surface(random_punctures(n, rng), ref,
                          [(float(rng.uniform(0.5, 2.5)), float(rng.uniform(-1, 1))) for _ in ref])
        i, j = ref[int(rng.integers(len(ref)))]
        gamma = twisted_curve((i, j), (((ref[0]), 1),), n) if ref[0] != (i, j) else standard_curve(i, j, n)
        side = list(range(i, j + 1))
        for child in cut_and_cap(s, gamma, side):
            for _ in range(4):
                w = random_word(rng, child.n - 2)
                try:
                    t_child = child.trace(w)
                except NonHyperbolicTrace:
                    continue
                t_parent = s.trace(parent_word(child, w, gamma, n))
                assert abs(abs(t_child) - abs(t_parent)) <= 1e-6 * max(1.0, abs(t_parent))


def test_unbalanced_cut():
    s = build_surface([CUSP] * 5, [(1, 2), (1, 3)], [(1.0, 0.0)] * 2)
    with pytest.raises(UnbalancedCut):
        cut_and_cap(s, standard_curve(1, 2, 5), [1])


def test_json_round_trip(s5):
    t = loads(dumps(s5))
    assert t == s5
    assert t.reference == s5.reference and t.fn == s5.fn and t.punctures == s5.punctures


def test_json_missing_fn_entry(s5):
    doc = json.loads(dumps(s5))
    doc["fn"] = doc["fn"][:1]
    with pytest.raises(ParseError, match="curve 2"):
        loads(json.dumps(doc))


def test_json_non_finite_twist(s5):
    text = dumps(s5).replace('"twist": 0.0', '"twist": 1e400', 1)
    with pytest.raises(ParseError):
        loads(text)


def test_json_garbage():
    with pytest.raises(ParseError):
        loads("{not json")
    with pytest.raises(ParseError):
        loads(json.dumps({"punctures": [{"kind": "wormhole"}] * 4, "reference": [[1, 2]],
                          "fn": [{"curve": 1, "length": 1.0, "twist": 0.0}]}))


def test_boundary_decoration_requires_length():
    with pytest.raises(ValueError):
        PunctureDecoration("boundary", 0.0)
    assert PunctureDecoration("boundary", 2.0).trace == pytest.approx(-2 * math.cosh(1.0))
