import json

import numpy as np
import pytest

from bersdec.errors import MalformedInstance, ParseError
from bersdec.normal_position import (Arc, Hemisphere, NormalPositionInstance, choose_root_edge, loads,
                                     project_insert_combinatorial, random_instance, root_edge_ok)


def single_crossing(L=4.0, arc=1.5, weights=(2, 1, 1, 2)):
    # one pants curve crossing gamma twice: one chord per hemisphere
    arcs = [Arc(0, arc, 1.0, 2.5, 0), Arc(0, arc, 1.0, 2.5, 1)]
    regions = {(0, (0,)): [{"type": "ii", "holes": weights[0], "point": 2.0},
                           {"type": "ii", "holes": weights[1], "point": 3.0}],
               (1, (1,)): [{"type": "ii", "holes": weights[2], "point": 2.0},
                           {"type": "ii", "holes": weights[3], "point": 3.0}]}
    return NormalPositionInstance(L, arcs, regions)


def hexagon_chain():
    # hemisphere 0: three hexagons in a row with five leaf bigons;
    # hemisphere 1: a single chord.  gamma has length 14, unit gaps.
    L = 14.0
    ends = {"a": (0, 1), "b": (2, 3), "h12": (4, 13), "c": (5, 6), "h23": (7, 12),
            "d": (8, 9), "e": (10, 11)}
    lengths = {"a": 1.0, "b": 2.0, "h12": 1.5, "c": 0.5, "h23": 2.5, "d": 1.0, "e": 1.0}
    arcs = [Arc(k, lengths[name], float(s), float(t), 0) for k, (name, (s, t)) in enumerate(ends.items())]
    arcs.append(Arc(99, 0.7, 0.5, 7.5, 1))
    return NormalPositionInstance(L, arcs, {}), 2.5


def test_single_crossing_root_step():
    inst = single_crossing()
    res = project_insert_combinatorial(inst, 3.0)
    roots = [c for c in res.constructed if c.rule == "root"]
    assert len(roots) == 4
    for side in (0, 1):
        pair = sorted(c.length for c in roots if c.hemisphere == side)
        # gamma_1 + gamma_2 = L, each curve adds the chord once
        assert pair == pytest.approx([1.5 + 1.5, 1.5 + 2.5])
        assert sum(pair) == pytest.approx(4.0 + 2 * 1.5)
        assert max(pair) <= 4.0 + 3.0
    # both sides of each chord enclose a single hole: nothing new survives
    assert res.curves == []
    assert res.retained == 2
    assert res.n_punctures == 6 and res.count == 3


def test_hexagon_chain():
    inst, P = hexagon_chain()
    hemi = Hemisphere(inst, 0)
    assert sorted(r.type for r in hemi.regions).count("iv") == 3
    assert choose_root_edge(hemi) == 2  # the chord between the first two hexagons
    res = project_insert_combinatorial(inst, P)
    assert all(c.length <= P + inst.gamma_length for c in res.constructed)
    assert res.n_punctures == 7 and res.count == 4
    leaves = {r.key[0]: k for k, r in enumerate(hemi.regions) if r.type == "ii"}
    got = sorted(sorted(leaves_inv for leaves_inv in c.enclosed) for c in res.curves)
    # hole sets {a, b}, {c, d, e}, {d, e} expressed through leaf regions
    name = {leaves[k]: n for k, n in zip((0, 1, 3, 5, 6), "abcde")}
    assert sorted("".join(sorted(name[h] for h in c.enclosed)) for c in res.curves) == ["ab", "cde", "de"]
    # explicit lengths: chord + gamma side
    lens = sorted(round(c.length, 9) for c in res.curves)
    assert lens == sorted([1.5 + 5.0, 1.5 + 9.0, 2.5 + 5.0])


def test_empty_arcs_rejected():
    with pytest.raises(MalformedInstance):
        project_insert_combinatorial(NormalPositionInstance(3.0, []), 1.0)


def test_empty_hemisphere_rejected():
    inst = NormalPositionInstance(3.0, [Arc(0, 1.0, 0.5, 1.5, 0)])
    with pytest.raises(MalformedInstance):
        project_insert_combinatorial(inst, 1.0)


def test_crossing_chords_rejected():
    arcs = [Arc(0, 1.0, 0.0, 2.0, 0), Arc(1, 1.0, 1.0, 3.0, 0), Arc(2, 1.0, 0.5, 1.5, 1)]
    with pytest.raises(MalformedInstance):
        project_insert_combinatorial(NormalPositionInstance(4.0, arcs), 1.0)


def test_arc_sum_exceeding_P_rejected():
    inst = single_crossing()
    with pytest.raises(MalformedInstance):
        project_insert_combinatorial(inst, 2.9)


def test_octagon_without_pair_rejected():
    rng = np.random.default_rng(0)
    for _ in range(200):
        inst, P = random_instance(rng, (5, 8))
        hemi0 = Hemisphere(inst, 0)
        octs = [r for r in hemi0.regions if r.type == "v"]
        if not octs:
            continue
        arcs = list(inst.arcs)
        for k, c in enumerate(octs[0].chords):
            a = arcs[c]
            arcs[c] = Arc(1000 + k, a.length, a.s, a.t, a.hemisphere)
        with pytest.raises(MalformedInstance):
            project_insert_combinatorial(NormalPositionInstance(inst.gamma_length, arcs, inst.regions), P)
        return
    pytest.fail("no octagon generated")


def test_random_instances_bound_and_count():
    rng = np.random.default_rng(42)
    rules = set()
    for _ in range(200):
        inst, P = random_instance(rng)
        res = project_insert_combinatorial(inst, P)
        assert res.contains_gamma
        assert res.max_constructed_length <= P + inst.gamma_length
        assert res.count == res.n_punctures - 3
        rules |= {c.rule for c in res.constructed}
        for side in (0, 1):
            hemi = Hemisphere(inst, side)
            c0 = choose_root_edge(hemi)
            assert root_edge_ok(hemi, c0)
    assert {"root", "iii", "iv", "v", "v.a"} <= rules


def test_restart_happens_and_stays_bounded():
    rng = np.random.default_rng(3)
    restarted = 0
    for _ in range(300):
        inst, P = random_instance(rng)
        res = project_insert_combinatorial(inst, P)
        restarted += sum(res.restarts.values())
    assert restarted > 0


def test_json_round_trip():
    one = single_crossing()
    assert loads(json.dumps(one.to_json())).regions == one.regions
    inst, P = hexagon_chain()
    again = loads(json.dumps(inst.to_json()))
    assert again.arcs == inst.arcs and again.gamma_length == inst.gamma_length
    with pytest.raises(ParseError):
        loads('{"gamma_length": 1.0}')
