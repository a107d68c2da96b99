import math
import random

import pytest

from collabmap.errors import DataError
from collabmap.layout import (
    DisconnectedGraphError,
    EdgeLengthTransform,
    LayoutConfig,
    edge_length,
    ideal_distances,
    layout_components,
    layout_graph,
    minimize_stress,
    stress,
    stress_gradient,
)


def reference_stress(positions, d, spring_constant):
    """Independent energy evaluation used by the finite-difference oracle."""
    total = 0.0
    n = len(positions)
    for i in range(n):
        for j in range(i + 1, n):
            dx = positions[i][0] - positions[j][0]
            dy = positions[i][1] - positions[j][1]
            r = math.sqrt(dx * dx + dy * dy)
            total += spring_constant / d[i][j] ** 2 * (r - d[i][j]) ** 2
    return 0.5 * total


def random_positions(rng, n, spread=1.0):
    return [(spread * (rng.random() - 0.5), spread * (rng.random() - 0.5)) for _ in range(n)]


def random_distance_matrix(rng, n):
    d = [[0.0] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            value = 0.2 + rng.random()
            d[i][j] = d[j][i] = value
    return d


# ---------------------------------------------------------------------------
# ideal distances
# ---------------------------------------------------------------------------

def test_single_edge_unit_transform_scaled_to_diameter():
    cfg = LayoutConfig(transform=EdgeLengthTransform.UNIT, diameter=3.0)
    d = ideal_distances(["a", "b"], {("a", "b"): 5.0}, cfg)
    assert d[0][1] == pytest.approx(3.0)
    assert d[1][0] == pytest.approx(3.0)
    assert d[0][0] == 0.0


def test_path_distances_additive():
    cfg = LayoutConfig(transform=EdgeLengthTransform.UNIT, diameter=1.0)
    d = ideal_distances(["a", "b", "c"], {("a", "b"): 1.0, ("b", "c"): 1.0}, cfg)
    assert d[0][2] == pytest.approx(2 * d[0][1])


def test_transforms():
    assert edge_length(1.0, EdgeLengthTransform.INVERSE_LOG_WEIGHT) == pytest.approx(1 / math.log(2))
    assert edge_length(0.25, EdgeLengthTransform.ONE_MINUS_SIMILARITY) == pytest.approx(0.75)
    assert edge_length(7.0, EdgeLengthTransform.UNIT) == 1.0
    # similarity 1.0 clamps rather than collapsing to zero length
    assert edge_length(1.0, EdgeLengthTransform.ONE_MINUS_SIMILARITY) > 0.0


def test_six_node_fixture_matches_path_enumeration_oracle():
    nodes = ["a", "b", "c", "d", "e", "f"]
    edges = {
        ("a", "b"): 4.0,
        ("b", "c"): 1.0,
        ("a", "c"): 2.0,
        ("c", "d"): 3.0,
        ("d", "e"): 1.0,
        ("e", "f"): 2.0,
        ("c", "f"): 1.0,
    }
    cfg = LayoutConfig(transform=EdgeLengthTransform.INVERSE_LOG_WEIGHT, diameter=1.0)
    d = ideal_distances(nodes, edges, cfg)

    # oracle: enumerate every simple path between every pair
    lengths = {}
    for (u, v), w in edges.items():
        lengths[(u, v)] = lengths[(v, u)] = edge_length(w, cfg.transform)

    def all_simple_paths(start, goal, visited):
        if start == goal:
            yield 0.0
            return
        for (u, v), length in lengths.items():
            if u == start and v not in visited:
                for rest in all_simple_paths(v, goal, visited | {v}):
                    yield length + rest

    n = len(nodes)
    raw = [[0.0] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            if i != j:
                raw[i][j] = min(all_simple_paths(nodes[i], nodes[j], {nodes[i]}))
    longest = max(raw[i][j] for i in range(n) for j in range(n))
    for i in range(n):
        for j in range(n):
            assert d[i][j] == pytest.approx(raw[i][j] / longest, abs=1e-12)


def test_disconnected_graph_rejected():
    cfg = LayoutConfig()
    with pytest.raises(DisconnectedGraphError):
        ideal_distances(["a", "b", "c"], {("a", "b"): 1.0}, cfg)


# ---------------------------------------------------------------------------
# gradient
# ---------------------------------------------------------------------------

def test_two_nodes_at_rest_length_zero_gradient():
    cfg = LayoutConfig()
    d = [[0.0, 1.0], [1.0, 0.0]]
    grads = stress_gradient([(0.0, 0.0), (1.0, 0.0)], d, cfg)
    for gx, gy in grads:
        assert math.hypot(gx, gy) < 1e-12


def test_gradient_matches_central_finite_differences():
    rng = random.Random(73)
    cfg = LayoutConfig()
    h = 1e-6
    for _ in range(20):
        n = rng.randint(2, 10)
        d = random_distance_matrix(rng, n)
        positions = random_positions(rng, n, spread=2.0)
        grads = stress_gradient(positions, d, cfg)
        scale = max(1.0, max(math.hypot(gx, gy) for gx, gy in grads))
        for i in range(n):
            for axis in (0, 1):
                plus = [list(p) for p in positions]
                minus = [list(p) for p in positions]
                plus[i][axis] += h
                minus[i][axis] -= h
                fd = (
                    reference_stress([tuple(p) for p in plus], d, cfg.spring_constant)
                    - reference_stress([tuple(p) for p in minus], d, cfg.spring_constant)
                ) / (2 * h)
                assert abs(grads[i][axis] - fd) / scale < 1e-5


def test_gradient_handles_coincident_nodes():
    cfg = LayoutConfig()
    d = [[0.0, 1.0], [1.0, 0.0]]
    grads = stress_gradient([(0.5, 0.5), (0.5, 0.5)], d, cfg)
    assert all(math.isfinite(g) for pair in grads for g in pair)


# ---------------------------------------------------------------------------
# minimization
# ---------------------------------------------------------------------------

def test_two_node_spring_settles_at_rest_length():
    cfg = LayoutConfig(tolerance=1e-4)
    layout = minimize_stress([[0.0, 1.0], [1.0, 0.0]], cfg, nodes=["a", "b"])
    (x1, y1), (x2, y2) = layout.coordinates["a"], layout.coordinates["b"]
    assert math.hypot(x1 - x2, y1 - y2) == pytest.approx(1.0, abs=1e-4)


def test_equilateral_triangle_distances():
    cfg = LayoutConfig(tolerance=1e-6)
    d = [[0.0, 1.0, 1.0], [1.0, 0.0, 1.0], [1.0, 1.0, 0.0]]
    layout = minimize_stress(d, cfg, nodes=["a", "b", "c"])
    points = [layout.coordinates[c] for c in ("a", "b", "c")]
    for i in range(3):
        for j in range(i + 1, 3):
            dist = math.hypot(points[i][0] - points[j][0], points[i][1] - points[j][1])
            assert dist == pytest.approx(1.0, abs=1e-3)


def test_stress_non_increasing_every_outer_iteration():
    rng = random.Random(79)
    for _ in range(5):
        n = rng.randint(3, 9)
        d = random_distance_matrix(rng, n)
        cfg = LayoutConfig(seed=rng.randint(0, 10**6))
        layout = minimize_stress(d, cfg)
        history = layout.stress_history
        for before, after in zip(history, history[1:]):
            assert after <= before + 1e-12


def oracle_gradient_descent(d, spring_constant, rng, iterations=400):
    """Plain full-configuration descent with backtracking (restart oracle)."""
    n = len(d)
    positions = random_positions(rng, n, spread=2.0)

    def energy(pos):
        return reference_stress(pos, d, spring_constant)

    def gradient(pos):
        grads = []
        for i in range(n):
            gx = gy = 0.0
            for j in range(n):
                if i == j:
                    continue
                dx = pos[i][0] - pos[j][0]
                dy = pos[i][1] - pos[j][1]
                r = math.hypot(dx, dy) or 1e-12
                factor = spring_constant / d[i][j] ** 2 * (1.0 - d[i][j] / r)
                gx += factor * dx
                gy += factor * dy
            grads.append((gx, gy))
        return grads

    current = energy(positions)
    for _ in range(iterations):
        grads = gradient(positions)
        norm = math.sqrt(sum(gx * gx + gy * gy for gx, gy in grads))
        if norm < 1e-9:
            break
        step = 1.0
        while step > 1e-9:
            candidate = [
                (positions[i][0] - step * grads[i][0], positions[i][1] - step * grads[i][1])
                for i in range(n)
            ]
            e = energy(candidate)
            if e < current:
                positions = candidate
                current = e
                break
            step *= 0.5
        else:
            break
    return current


def test_six_node_stress_within_one_percent_of_restart_oracle():
    nodes = ["a", "b", "c", "d", "e", "f"]
    edges = {
        ("a", "b"): 3.0,
        ("b", "c"): 2.0,
        ("a", "c"): 2.0,
        ("c", "d"): 4.0,
        ("d", "e"): 2.0,
        ("e", "f"): 3.0,
        ("d", "f"): 2.0,
    }
    cfg = LayoutConfig(tolerance=1e-6)
    d = ideal_distances(nodes, edges, cfg)
    layout = minimize_stress(d, cfg, nodes=nodes)

    rng = random.Random(97)
    best = min(oracle_gradient_descent(d, cfg.spring_constant, rng) for _ in range(100))
    assert layout.final_stress <= best * 1.01 + 1e-12
    assert layout.final_stress >= best * 0.99 - 1e-12


def test_layout_deterministic_bit_identical():
    nodes = ["a", "b", "c", "d"]
    edges = {("a", "b"): 2.0, ("b", "c"): 1.0, ("c", "d"): 3.0, ("a", "d"): 1.0}
    cfg = LayoutConfig(seed=42)
    one = layout_graph(nodes, edges, cfg)
    two = layout_graph(nodes, edges, cfg)
    assert one.coordinates == two.coordinates
    assert one.final_stress == two.final_stress
    different = layout_graph(nodes, edges, LayoutConfig(seed=43))
    assert different.coordinates != one.coordinates


def test_canonical_orientation():
    rng = random.Random(101)
    n = 7
    d = random_distance_matrix(rng, n)
    cfg = LayoutConfig()
    layout = minimize_stress(d, cfg)
    points = list(layout.coordinates.values())
    cx = sum(p[0] for p in points) / n
    cy = sum(p[1] for p in points) / n
    assert abs(cx) < 1e-9 * cfg.diameter
    assert abs(cy) < 1e-9 * cfg.diameter
    best = None
    best_dist = -1.0
    for i in range(n):
        for j in range(i + 1, n):
            dist = math.hypot(points[j][0] - points[i][0], points[j][1] - points[i][1])
            if dist > best_dist:
                best_dist = dist
                best = (i, j)
    i, j = best
    angle = math.atan2(points[j][1] - points[i][1], points[j][0] - points[i][0])
    assert min(abs(angle), abs(abs(angle) - math.pi)) < 1e-9


def test_stress_rigid_motion_invariant():
    rng = random.Random(103)
    n = 6
    d = random_distance_matrix(rng, n)
    cfg = LayoutConfig()
    positions = random_positions(rng, n, spread=3.0)
    base = stress(positions, d, cfg)
    theta = 1.234
    cos_t, sin_t = math.cos(theta), math.sin(theta)
    moved = [
        (x * cos_t - y * sin_t + 17.0, x * sin_t + y * cos_t - 4.0) for x, y in positions
    ]
    assert abs(stress(moved, d, cfg) - base) < 1e-9


def test_minimize_rejects_bad_matrices():
    cfg = LayoutConfig()
    with pytest.raises(DataError):
        minimize_stress([[0.0, 0.0], [0.0, 0.0]], cfg)
    with pytest.raises(DataError):
        minimize_stress([[0.0, 1.0], [2.0, 0.0]], cfg)


def test_layout_components_packs_disconnected_graphs():
    nodes = ["a", "b", "c", "d", "e"]
    edges = {("a", "b"): 1.0, ("c", "d"): 1.0}
    cfg = LayoutConfig(transform=EdgeLengthTransform.UNIT)
    layout = layout_components(nodes, edges, cfg)
    assert set(layout.coordinates) == set(nodes)
    # components must not overlap horizontally
    xs = {name: layout.coordinates[name][0] for name in nodes}
    assert max(xs["a"], xs["b"]) < min(xs["c"], xs["d"])
    assert max(xs["c"], xs["d"]) < xs["e"]
    # centred on the centroid
    assert sum(p[0] for p in layout.coordinates.values()) == pytest.approx(0.0, abs=1e-9)
    assert sum(p[1] for p in layout.coordinates.values()) == pytest.approx(0.0, abs=1e-9)
