import math

import mpmath
import numpy as np
import pytest

from bersdec import bounds
from bersdec.constructions import (DOUBLED_ARC, EVEN_EVEN, ODD_ODD, binary_tree_splits,
                                   check_separation_lemma, hairy_case_lengths, hairy_constants,
                                   hyperelliptic_lift, lift_tag, separation_condition)
from bersdec.curves import PantsDecomposition, standard_curve
from bersdec.errors import NTooLarge, ParityInconsistency, WrongCurveCount
from bersdec.experiments import random_laminar_decomposition, rng_for

mpmath.mp.dps = 40


def test_hairy_values():
    h = hairy_constants(2, 0.0)
    assert h.boundary_count == 12
    assert h.x0 == pytest.approx(float(2 * mpmath.asinh(1)), abs=1e-12)
    assert h.lower_bound == pytest.approx(float(16 * mpmath.asinh(1)), abs=1e-12)
    assert h.lower_bound == pytest.approx(14.1019774, abs=1e-7)
    h1 = hairy_constants(1, 0.0)
    assert h1.boundary_count == 6 and h1.lower_bound == pytest.approx(4 * h1.x0)
    assert h.rectangle == pytest.approx((8 * h.x0, 4 * h.x0))


def test_hairy_cases_agree():
    for p in (1, 2, 5):
        for ell in (0.0, 1.0, 8.0):
            h = hairy_constants(p, ell)
            cases = hairy_case_lengths(h)
            assert min(cases.values()) == pytest.approx(h.lower_bound)
            assert max(cases.values()) == pytest.approx(h.lower_bound)
            assert h.boundary_count % 2 == 0


def test_hairy_lower_bound_below_upper():
    # n = 2p^2 + 4 + k punctures: the hairy bound never crosses the upper bound
    for n in range(6, 201):
        assert bounds.lower_punctured(n) < bounds.sphere_sqrt(n)


@pytest.mark.parametrize("n,count", [(6, 105), (7, 945), (8, 10395)])
def test_tree_enumeration_counts(n, count):
    fams = list(binary_tree_splits(n))
    assert len(fams) == count
    assert len({frozenset(f) for f in fams}) == count
    assert all(len(f) == n - 3 for f in fams)


@pytest.mark.parametrize("n", [6, 7, 8])
def test_separation_lemma_exhaustive(n):
    rep = check_separation_lemma(n, (1, 2), (4, 5))
    assert rep.passed and rep.families == len(list(binary_tree_splits(n)))
    assert sum(rep.by_condition.values()) == rep.families


def test_separation_all_pairs_n6():
    for a in range(1, 7):
        for b in range(a + 1, 7):
            rest = [x for x in range(1, 7) if x not in (a, b)]
            rep = check_separation_lemma(6, (a, b), rest[:2])
            assert rep.passed


def test_separation_conditions():
    alpha, beta = frozenset({1, 2}), frozenset({5, 6})
    assert separation_condition(frozenset({1, 2}), alpha, beta, 6) == "i"
    assert separation_condition(frozenset({1, 2, 3}), alpha, beta, 6) == "iii"
    assert separation_condition(frozenset({1, 2, 3, 4}), alpha, beta, 6) == "i"  # complement is beta
    assert separation_condition(frozenset({2, 3, 4, 5}), alpha, beta, 6) == "ii"
    fam = (frozenset({2, 3}), frozenset({1, 2, 3}), frozenset({1, 2, 3, 4}))
    assert check_separation_lemma(6, alpha, beta, [fam]).by_condition["iii"] == 1


def test_separation_checker_reports_counterexample():
    # a lone curve crossing only alpha is not a pants decomposition and must be flagged
    rep = check_separation_lemma(6, (1, 2), (4, 5), [(frozenset({2, 3}),)])
    assert not rep.passed and rep.counterexample is not None


def test_separation_n_too_large():
    with pytest.raises(NTooLarge):
        check_separation_lemma(10)


def _nested(g):
    n = 2 * g + 2
    curves = tuple(standard_curve(1, j, n) for j in range(2, n - 1))
    return PantsDecomposition(curves, tuple(1.0 + 0.25 * k for k in range(len(curves))))


def test_lift_nested_g2():
    P = _nested(2)
    rep = hyperelliptic_lift(2, P)
    assert [c.tag for c in rep.curves] == [DOUBLED_ARC, ODD_ODD, DOUBLED_ARC]
    assert rep.final_count == 3
    assert rep.curves[1].lifted_lengths == (2 * 1.25,)
    assert rep.lift_max <= 2 * P.max_length
    assert all(p["kind"] == "cone-cylinder" for p in rep.pieces)


def test_lift_tags():
    assert lift_tag(frozenset({1, 2}), 8) == DOUBLED_ARC
    assert lift_tag(frozenset({1, 2, 3, 4, 5, 6}), 8) == DOUBLED_ARC
    assert lift_tag(frozenset({1, 2, 3}), 8) == ODD_ODD
    assert lift_tag(frozenset({1, 2, 3, 4}), 8) == EVEN_EVEN
    with pytest.raises(ParityInconsistency):
        lift_tag(frozenset({1, 2}), 7)


def test_lift_count_conservation():
    for g in range(2, 9):
        rng = rng_for(100 + g)
        for _ in range(200):
            P = random_laminar_decomposition(2 * g + 2, rng)
            rep = hyperelliptic_lift(g, P)
            assert rep.final_count == 3 * g - 3
            assert rep.lift_max <= 2 * P.max_length
            for c in rep.curves:
                if c.tag == ODD_ODD:
                    assert c.lifted_lengths == (2 * c.base_length,)
                elif c.tag == EVEN_EVEN:
                    assert c.lifted_lengths == (c.base_length, c.base_length)
                else:
                    assert c.lifted_lengths == (c.base_length,)
            for piece in rep.pieces:
                assert set(piece["holes"]) <= {3, 4}
            assert rep.completions == sum(1 for p in rep.pieces if p["holes"] == [4])


def test_lift_wrong_count():
    P = _nested(2)
    with pytest.raises(WrongCurveCount):
        hyperelliptic_lift(3, P)


def test_lift_total_bound():
    P = _nested(3)
    rep = hyperelliptic_lift(3, P)
    expected = bounds.fourhole(rep.lift_max) if rep.completions else rep.lift_max
    assert rep.total_bound == pytest.approx(expected)
    assert rep.theorem_bound == pytest.approx(40 * math.log(6 * math.pi) * 2 + 12)
