"""Network model, shortest-path objective, and structural validators."""

import math
import random

import pytest

from tristeiner.analytic import GROWTH_RATE, phase1_config, thresholds
from tristeiner.fermat import steiner_info
from tristeiner.geom import Point, classify, dist
from tristeiner.network import (
    Network,
    Node,
    default_penalty,
    evaluate,
    terminal_nodes,
    total_length,
    validate,
)

from conftest import equilateral, make, random_triangle


def steiner_network(t):
    info = steiner_info(t)
    nodes = terminal_nodes(t) + (Node(3, "anchor", None, info.point),)
    return Network(t, nodes, ((0, 3), (1, 3), (2, 3)))


def complete_network(t):
    return Network(t, terminal_nodes(t), ((0, 1), (1, 2), (0, 2)))


def test_rejects_self_loop():
    t = equilateral()
    with pytest.raises(ValueError):
        Network(t, terminal_nodes(t), ((0, 0),))


def test_rejects_duplicate_edge():
    t = equilateral()
    with pytest.raises(ValueError):
        Network(t, terminal_nodes(t), ((0, 1), (1, 0)))


def test_rejects_terminal_not_on_vertex():
    t = equilateral()
    nodes = (
        Node(0, "terminal", "a", Point(0.1, 0.0)),
        Node(1, "terminal", "b", t.b),
        Node(2, "terminal", "c", t.c),
    )
    with pytest.raises(ValueError):
        Network(t, nodes, ())


def test_total_length_complete_equilateral():
    assert total_length(complete_network(equilateral())) == pytest.approx(3.0, abs=1e-12)


def test_total_length_steiner_equilateral():
    assert total_length(steiner_network(equilateral())) == pytest.approx(
        math.sqrt(3), abs=1e-12
    )


def test_total_length_three_anchor_growth_law():
    rng = random.Random(21)
    for _ in range(25):
        t = random_triangle(rng)
        if not classify(t).is_interior:
            continue
        thr = thresholds(t)
        r_max = (thr.l1 - thr.l_st) / GROWTH_RATE
        r = rng.uniform(0.0, r_max)
        net = phase1_config(t, r)
        assert total_length(net) == pytest.approx(thr.l_st + GROWTH_RATE * r, abs=1e-9)


def test_evaluate_complete_equilateral():
    obj = evaluate(complete_network(equilateral()))
    assert obj.d_ab == pytest.approx(1.0, abs=1e-12)
    assert obj.d_bc == pytest.approx(1.0, abs=1e-12)
    assert obj.d_ac == pytest.approx(1.0, abs=1e-12)
    assert obj.j == pytest.approx(3.0, abs=1e-12)


def test_evaluate_steiner_equilateral():
    obj = evaluate(steiner_network(equilateral()))
    assert obj.j == pytest.approx(2 * math.sqrt(3), abs=1e-12)


def test_evaluate_single_edge_uses_penalty():
    t = equilateral()
    net = Network(t, terminal_nodes(t), ((0, 1),))
    obj = evaluate(net, penalty=1e9)
    assert obj.d_ab == pytest.approx(1.0, abs=1e-12)
    assert obj.d_bc == 1e9
    assert obj.d_ac == 1e9
    assert obj.j == pytest.approx(1.0 + 2e9, rel=1e-15)


def test_default_penalty_scales_with_perimeter():
    t = equilateral()
    assert default_penalty(t) == pytest.approx(3e9, rel=1e-12)
    net = Network(t, terminal_nodes(t), ())
    obj = evaluate(net)
    assert obj.j == pytest.approx(3 * default_penalty(t), rel=1e-12)


def test_validate_steiner_network_clean():
    rng = random.Random(22)
    n = 0
    while n < 30:
        t = random_triangle(rng)
        if not classify(t).is_interior:
            continue
        assert validate(steiner_network(t), 1e-9) == []
        n += 1


def test_validate_flags_degree_two_anchor():
    t = equilateral()
    o = steiner_info(t).point
    mid = Point((t.a.x + o.x) / 2, (t.a.y + o.y) / 2)
    nodes = terminal_nodes(t) + (
        Node(3, "anchor", None, o),
        Node(4, "anchor", None, mid),
    )
    net = Network(t, nodes, ((0, 4), (4, 3), (1, 3), (2, 3)))
    vs = validate(net, 1e-9)
    assert [v.kind for v in vs] == ["degree"]
    assert vs[0].node_id == 4
    assert vs[0].detail == 2.0


def test_validate_flags_displaced_anchor():
    t = equilateral()
    o = steiner_info(t).point
    moved = Point(o.x + 0.02, o.y + 0.015)
    nodes = terminal_nodes(t) + (Node(3, "anchor", None, moved),)
    net = Network(t, nodes, ((0, 3), (1, 3), (2, 3)))
    vs = validate(net, 1e-9)
    assert vs
    assert all(v.kind == "bisector" for v in vs)


def test_validate_flags_exterior_anchor():
    t = equilateral()
    nodes = terminal_nodes(t) + (Node(3, "anchor", None, Point(0.5, -0.2)),)
    net = Network(t, nodes, ((0, 3), (1, 3), (2, 3)))
    kinds = {v.kind for v in validate(net, 1e-9)}
    assert "interiority" in kinds


def _random_connected_network(rng, t):
    k = rng.randrange(0, 4)
    nodes = list(terminal_nodes(t))
    for i in range(k):
        # rejection-sample a point inside the triangle
        while True:
            u, v = rng.random(), rng.random()
            if u + v < 1.0:
                break
        p = Point(
            t.a.x + u * (t.b.x - t.a.x) + v * (t.c.x - t.a.x),
            t.a.y + u * (t.b.y - t.a.y) + v * (t.c.y - t.a.y),
        )
        nodes.append(Node(3 + i, "anchor", None, p))
    n = len(nodes)
    edges = []
    order = list(range(n))
    rng.shuffle(order)
    for i in range(1, n):
        edges.append((order[i], order[rng.randrange(i)]))
    net = Network(t, tuple(nodes), tuple(edges))
    present = {(min(u, v), max(u, v)) for u, v in edges}
    absent = [
        (u, v) for u in range(n) for v in range(u + 1, n) if (u, v) not in present
    ]
    return net, absent


def test_connected_objective_dominates_straight_lines():
    rng = random.Random(23)
    for _ in range(200):
        t = random_triangle(rng)
        net, _ = _random_connected_network(rng, t)
        obj = evaluate(net)
        assert obj.d_ab >= dist(t.a, t.b) - 1e-12
        assert obj.d_bc >= dist(t.b, t.c) - 1e-12
        assert obj.d_ac >= dist(t.a, t.c) - 1e-12
        assert obj.j >= t.perimeter() - 1e-9


def test_steiner_tree_objective_is_twice_its_length():
    rng = random.Random(24)
    for _ in range(100):
        t = random_triangle(rng)
        net = steiner_network(t)
        assert evaluate(net).j == pytest.approx(2 * total_length(net), rel=1e-12)


def test_adding_an_edge_never_hurts():
    rng = random.Random(25)
    checked = 0
    while checked < 100:
        t = random_triangle(rng)
        net, absent = _random_connected_network(rng, t)
        if not absent:
            continue
        extra = absent[rng.randrange(len(absent))]
        bigger = Network(net.triangle, net.nodes, net.edges + (extra,))
        before, after = evaluate(net), evaluate(bigger)
        assert after.d_ab <= before.d_ab + 1e-12
        assert after.d_bc <= before.d_bc + 1e-12
        assert after.d_ac <= before.d_ac + 1e-12
        checked += 1
