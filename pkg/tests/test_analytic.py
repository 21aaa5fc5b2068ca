"""Phase thresholds, per-phase configurations, and the exact solver."""

import math
import random

import pytest

from tristeiner.analytic import (
    GROWTH_RATE,
    SHRINK_RATE,
    phase1_config,
    phase2_config,
    phase3_config,
    slope_at,
    solve,
    thresholds,
)
from tristeiner.errors import OutOfRange
from tristeiner.fermat import steiner_info
from tristeiner.geom import Point, angle_at, bisector_residual, dist, rotate
from tristeiner.network import evaluate, total_length, validate

from conftest import (
    SCALENE,
    WIDE_TRI,
    equilateral,
    make,
    random_interior_triangle,
    random_triangle,
    random_wide_triangle,
)

SQ3 = math.sqrt(3.0)


# --- thresholds -------------------------------------------------------------


def test_thresholds_equilateral_collapse():
    thr = thresholds(equilateral())
    assert thr.l_min_edge == pytest.approx(1.0, abs=1e-12)
    assert thr.l_st == pytest.approx(SQ3, abs=1e-12)
    assert thr.l1 == pytest.approx(3.0, abs=1e-9)
    # phases 2 and 3 are empty: all upper thresholds coincide at the perimeter
    assert thr.l2 == pytest.approx(3.0, abs=1e-9)
    assert thr.l3 == pytest.approx(3.0, abs=1e-12)


def test_thresholds_scalene_strictly_increasing():
    t = make(*SCALENE)
    thr = thresholds(t)
    assert thr.l_min_edge < thr.l_st < thr.l1 < thr.l2 < thr.l3
    assert thr.l3 == pytest.approx(t.perimeter(), abs=1e-12)
    spoke = min(thr.steiner.spoke_lengths)
    assert thr.l1 == pytest.approx(thr.l_st + GROWTH_RATE * spoke, abs=1e-12)


def test_thresholds_wide_triangle():
    t = make(*WIDE_TRI)
    thr = thresholds(t)
    assert thr.l1 is None
    assert thr.l_st == pytest.approx(1 + math.sqrt(1.04), abs=1e-12)
    assert thr.l_st == pytest.approx(2.0198039, abs=1e-7)
    assert thr.l3 == pytest.approx(1 + math.sqrt(1.04) + math.sqrt(4.04), abs=1e-12)
    assert thr.l_st < thr.l2 < thr.l3


def test_thresholds_merge_order_is_a_permutation():
    for pts in (SCALENE, WIDE_TRI):
        thr = thresholds(make(*pts))
        assert sorted(thr.merge_order) == ["a", "b", "c"]


# --- phase 1 ----------------------------------------------------------------


def test_phase1_r_zero_degenerates_to_steiner_tree():
    t = make(*SCALENE)
    o = steiner_info(t).point
    net = phase1_config(t, 0.0)
    for anchor in net.anchors:
        assert dist(anchor.pos, o) < 1e-12
    assert total_length(net) == pytest.approx(steiner_info(t).l_st, abs=1e-12)


def test_phase1_full_r_reaches_vertices_on_equilateral():
    t = equilateral()
    net = phase1_config(t, 1 / SQ3)
    for anchor, vertex in zip(net.anchors, t.vertices):
        assert dist(anchor.pos, vertex) < 1e-12
    assert total_length(net) == pytest.approx(3.0, abs=1e-10)


def test_phase1_out_of_range():
    t = make(*SCALENE)
    r_max = min(steiner_info(t).spoke_lengths)
    with pytest.raises(OutOfRange):
        phase1_config(t, -1e-6)
    with pytest.raises(OutOfRange):
        phase1_config(t, r_max + 1e-6)
    with pytest.raises(OutOfRange):
        phase1_config(make(*WIDE_TRI), 0.01)


def test_phase1_closed_forms_on_random_corpus():
    rng = random.Random(31)
    for _ in range(100):
        t = random_interior_triangle(rng)
        si = steiner_info(t)
        r = rng.uniform(0.0, min(si.spoke_lengths))
        net = phase1_config(t, r)
        assert total_length(net) == pytest.approx(si.l_st + GROWTH_RATE * r, abs=1e-10)
        assert evaluate(net).j == pytest.approx(2 * si.l_st + SHRINK_RATE * r, abs=1e-10)


def test_phase1_anchor_triangle_equilateral_centered_on_steiner_point():
    rng = random.Random(32)
    for _ in range(50):
        t = random_interior_triangle(rng)
        si = steiner_info(t)
        r = rng.uniform(0.05, 1.0) * min(si.spoke_lengths)
        anchors = [n.pos for n in phase1_config(t, r).anchors]
        sides = [
            dist(anchors[0], anchors[1]),
            dist(anchors[1], anchors[2]),
            dist(anchors[0], anchors[2]),
        ]
        assert max(sides) - min(sides) < 1e-10
        assert sides[0] == pytest.approx(r * SQ3, abs=1e-10)
        cx = sum(p.x for p in anchors) / 3
        cy = sum(p.y for p in anchors) / 3
        assert dist(Point(cx, cy), si.point) < 1e-9


def test_phase1_bisector_residuals_vanish():
    rng = random.Random(33)
    for _ in range(25):
        t = random_interior_triangle(rng)
        si = steiner_info(t)
        r = rng.uniform(0.1, 0.9) * min(si.spoke_lengths)
        net = phase1_config(t, r)
        for k, anchor in enumerate(net.anchors):
            others = [a.pos for a in net.anchors if a.id != anchor.id]
            res = bisector_residual(t.vertices[k], anchor.pos, others[0], others[1])
            assert abs(res) < 1e-12


# --- phase 2 ----------------------------------------------------------------


def test_phase2_handoff_matches_phase1_at_merge():
    t = make(*SCALENE)
    thr = thresholds(t)
    spoke = min(thr.steiner.spoke_lengths)
    leg_start = spoke * SQ3
    net1 = phase1_config(t, spoke)
    net2 = phase2_config(t, thr.merge_order[0], leg_start)
    assert total_length(net2) == pytest.approx(thr.l1, abs=1e-8)
    for anchor in net2.anchors:
        nearest = min(dist(anchor.pos, a.pos) for a in net1.anchors)
        assert nearest < 1e-8


def test_phase2_is_isosceles_by_construction():
    t = make(*SCALENE)
    thr = thresholds(t)
    pinned = thr.merge_order[0]
    p = t.vertex(pinned)
    leg_start = min(thr.steiner.spoke_lengths) * SQ3
    leg_end = thr.plan.leg_cap
    for frac in (0.0, 0.3, 0.7, 0.95):
        leg = leg_start + frac * (leg_end - leg_start)
        net = phase2_config(t, pinned, leg)
        d1 = dist(p, net.anchors[0].pos)
        d2 = dist(p, net.anchors[1].pos)
        assert abs(d1 - d2) < 1e-12
        assert d1 == pytest.approx(leg, abs=1e-12)


def test_phase2_networks_validate_and_respect_angle_cap():
    t = make(*SCALENE)
    thr = thresholds(t)
    pinned = thr.merge_order[0]
    p = t.vertex(pinned)
    leg_start = min(thr.steiner.spoke_lengths) * SQ3
    leg = leg_start + 0.5 * (thr.plan.leg_cap - leg_start)
    net = phase2_config(t, pinned, leg)
    assert validate(net, 1e-9) == []
    n1, n2 = net.anchors
    assert angle_at(n1.pos, p, n2.pos) <= math.pi / 3 + 1e-9
    assert angle_at(n2.pos, p, n1.pos) <= math.pi / 3 + 1e-9


def test_phase2_wide_case_starts_at_the_wide_vertex():
    t = make(*WIDE_TRI)
    thr = thresholds(t)
    assert thr.merge_order[0] == "a"
    net = phase2_config(t, "a", 0.3)
    assert validate(net, 1e-9) == []
    for anchor in net.anchors:
        assert dist(anchor.pos, t.a) == pytest.approx(0.3, abs=1e-12)


# --- phase 3 ----------------------------------------------------------------


def test_phase3_budget_extremes():
    t = make(*SCALENE)
    thr = thresholds(t)
    pair = (thr.merge_order[0], thr.merge_order[1])
    free = thr.merge_order[2]
    guess = thr.plan.anchor_end

    at_l2 = phase3_config(t, pair, guess, thr.l2)
    assert dist(at_l2.anchors[0].pos, guess) < 1e-8

    at_l3 = phase3_config(t, pair, guess, thr.l3)
    assert dist(at_l3.anchors[0].pos, t.vertex(free)) < 1e-8


def test_phase3_objective_route_structure():
    t = make(*SCALENE)
    thr = thresholds(t)
    pair = (thr.merge_order[0], thr.merge_order[1])
    free = thr.merge_order[2]
    guess = thr.plan.anchor_end
    p1, p2, pf = t.vertex(pair[0]), t.vertex(pair[1]), t.vertex(free)
    for frac in (0.15, 0.5, 0.85):
        L = thr.l2 + frac * (thr.l3 - thr.l2)
        net = phase3_config(t, pair, guess, L)
        assert total_length(net) == pytest.approx(L, abs=1e-9)
        q = net.anchors[0].pos
        want = dist(p1, p2) + dist(p1, q) + dist(p2, q) + 2 * dist(pf, q)
        assert evaluate(net).j == pytest.approx(want, rel=1e-12)
        assert validate(net, 1e-9) == []


# --- solve ------------------------------------------------------------------


def test_solve_rejects_nonpositive_budget():
    with pytest.raises(OutOfRange):
        solve(equilateral(), 0.0)
    with pytest.raises(OutOfRange):
        solve(equilateral(), -1.0)


def test_solve_below_min_edge_is_empty():
    t = make(*SCALENE)
    res = solve(t, 1.0)
    assert res.phase.tag == "below_tree"
    assert res.phase.edges == ()
    assert res.network.edges == ()
    assert res.l_used == 0.0


def test_solve_between_min_edge_and_tree_buys_shortest_side():
    t = make(*SCALENE)  # shortest side is ac with length sqrt(10)
    res = solve(t, 3.5)
    assert res.phase.tag == "below_tree"
    assert res.phase.edges == ("ac",)
    assert res.l_used == pytest.approx(math.sqrt(10), abs=1e-12)
    assert res.objective.d_ac == pytest.approx(math.sqrt(10), abs=1e-12)
    assert res.objective.d_ab > 1e9


def test_solve_equilateral_interior_budget():
    res = solve(equilateral(), 2.0)
    assert res.phase.tag == "three_anchor"
    r = (2.0 - SQ3) / GROWTH_RATE
    assert res.l_used == pytest.approx(2.0, abs=1e-9)
    assert res.objective.j == pytest.approx(2 * SQ3 + SHRINK_RATE * r, abs=1e-9)
    assert res.objective.j == pytest.approx(3.3660, abs=1e-4)
    assert res.slope == pytest.approx((1 - SQ3) / 2, abs=1e-9)
    assert validate(res.network, 1e-9) == []


def test_solve_equilateral_perimeter_budget():
    res = solve(equilateral(), 3.0)
    assert res.phase.tag == "complete"
    assert res.objective.j == pytest.approx(3.0, abs=1e-12)
    assert res.l_used == pytest.approx(3.0, abs=1e-12)


def test_solve_excess_budget_left_unspent():
    res = solve(equilateral(), 10.0)
    assert res.phase.tag == "complete"
    assert res.l_used == pytest.approx(3.0, abs=1e-12)
    assert res.slope == 0.0


def test_solve_at_steiner_budget():
    t = make(*SCALENE)
    thr = thresholds(t)
    res = solve(t, thr.l_st)
    assert res.phase.tag == "steiner_tree"
    assert res.objective.j == pytest.approx(2 * thr.l_st, abs=1e-9)


def test_solve_wide_never_emits_three_anchor():
    t = make(*WIDE_TRI)
    thr = thresholds(t)
    res = solve(t, thr.l_st + 0.01)
    assert res.phase.tag == "two_anchor"
    assert res.phase.pinned == "a"
    lo, hi = thr.l_st * 0.5, thr.l3 * 1.1
    for i in range(40):
        L = lo + (hi - lo) * i / 39
        assert solve(t, L, thr).phase.tag != "three_anchor"


def test_solve_spends_budget_exactly_between_tree_and_perimeter():
    rng = random.Random(34)
    for _ in range(10):
        t = random_triangle(rng)
        thr = thresholds(t)
        for frac in (0.05, 0.35, 0.65, 0.95):
            L = thr.l_st + frac * (thr.l3 - thr.l_st)
            res = solve(t, L, thr)
            assert res.l_used == pytest.approx(L, abs=1e-9)
            assert validate(res.network, 1e-9) == []


def test_solve_objective_non_increasing_and_slopes_non_decreasing():
    rng = random.Random(35)
    for _ in range(8):
        t = random_triangle(rng)
        thr = thresholds(t)
        budgets = [
            thr.l_st + frac * (thr.l3 - thr.l_st)
            for frac in [i / 30 for i in range(31)]
        ]
        results = [solve(t, L, thr) for L in budgets]
        for prev, cur in zip(results, results[1:]):
            assert cur.objective.j <= prev.objective.j + 1e-9
            assert cur.slope >= prev.slope - 1e-9
        assert all(-2.0 < r.slope <= 0.0 for r in results)


def test_solve_rigid_motion_equivariance():
    rng = random.Random(36)
    for _ in range(10):
        t = random_triangle(rng)
        ang = rng.uniform(0, 2 * math.pi)
        c = Point(rng.uniform(-1, 1), rng.uniform(-1, 1))
        moved = make(*((rotate(p, c, ang).x, rotate(p, c, ang).y) for p in t.vertices))
        thr = thresholds(t)
        for frac in (0.2, 0.6, 0.9):
            L = thr.l_st + frac * (thr.l3 - thr.l_st)
            res_t = solve(t, L)
            res_m = solve(moved, L)
            assert res_m.objective.j == pytest.approx(res_t.objective.j, abs=1e-9)
            assert res_m.phase.tag == res_t.phase.tag
            for n_t, n_m in zip(res_t.network.nodes, res_m.network.nodes):
                mapped = rotate(n_t.pos, c, ang)
                assert dist(mapped, n_m.pos) < 1e-7


# --- slope_at ---------------------------------------------------------------


def test_slope_at_known_values():
    assert slope_at(math.pi / 6) == pytest.approx((1 - SQ3) / 2, abs=1e-15)
    assert slope_at(math.pi / 6) == pytest.approx((SQ3 - 2) / (SQ3 - 1), abs=1e-15)
    assert slope_at(math.pi / 6) == pytest.approx(-0.3660254, abs=1e-7)
    assert slope_at(math.pi / 4) == pytest.approx(
        (math.sqrt(2) - 2) / (math.sqrt(2) - 1), abs=1e-15
    )
    assert slope_at(math.pi / 4) == pytest.approx(-1.4142136, abs=1e-7)


def test_slope_at_vanishes_at_zero_limit():
    assert abs(slope_at(1e-9)) < 1e-8


def test_slope_at_domain():
    with pytest.raises(OutOfRange):
        slope_at(0.0)
    with pytest.raises(OutOfRange):
        slope_at(-0.1)
    with pytest.raises(OutOfRange):
        slope_at(math.pi / 4 + 0.01)
