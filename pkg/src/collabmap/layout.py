"""Deterministic 2-D graph layout by stress minimization.

The energy model is the classic spring system over graph-theoretic ideal
distances: E = 1/2 * sum_{i<j} k_ij * (|p_i - p_j| - d_ij)^2 with spring
stiffness k_ij = K / d_ij^2. Nodes are relaxed one at a time (always the
one with the largest gradient norm) using damped 2x2 Newton steps with
backtracking, which keeps total stress non-increasing across outer
iterations. Output is gauge-fixed: centroid at the origin and the two
farthest-apart nodes rotated onto the horizontal axis.
"""

from __future__ import annotations

import heapq
import math
import random
from dataclasses import dataclass, field
from enum import Enum

from collabmap.errors import DataError

# Floor for transformed edge lengths; keeps ideal distances positive when a
# similarity of exactly 1 would otherwise produce a zero-length edge.
MIN_EDGE_LENGTH = 1e-6

_MAX_INNER_STEPS = 60


class EdgeLengthTransform(Enum):
    INVERSE_LOG_WEIGHT = "inverse_log_weight"
    ONE_MINUS_SIMILARITY = "one_minus_similarity"
    UNIT = "unit"


class DisconnectedGraphError(DataError):
    """Ideal distances need a connected graph; lay out components separately."""


@dataclass(frozen=True)
class LayoutConfig:
    transform: EdgeLengthTransform = EdgeLengthTransform.INVERSE_LOG_WEIGHT
    diameter: float = 1.0
    spring_constant: float = 1.0
    max_outer_iterations: int | None = None  # None -> 200 * n
    tolerance: float = 1e-4
    seed: int = 42

    def __post_init__(self):
        if self.tolerance <= 0:
            raise DataError("layout tolerance must be positive")
        if self.diameter <= 0 or self.spring_constant <= 0:
            raise DataError("layout scale parameters must be positive")
        if self.max_outer_iterations is not None and self.max_outer_iterations < 1:
            raise DataError("max_outer_iterations must be at least 1")


@dataclass
class Layout:
    coordinates: dict[str, tuple[float, float]]
    final_stress: float
    iterations_used: int
    stress_history: list[float] = field(default_factory=list)


def edge_length(weight: float, transform: EdgeLengthTransform) -> float:
    if transform is EdgeLengthTransform.INVERSE_LOG_WEIGHT:
        length = 1.0 / math.log1p(weight)
    elif transform is EdgeLengthTransform.ONE_MINUS_SIMILARITY:
        length = 1.0 - weight
    else:
        length = 1.0
    return max(length, MIN_EDGE_LENGTH)


def ideal_distances(
    nodes: list[str],
    edges: dict[tuple[str, str], float],
    cfg: LayoutConfig,
) -> list[list[float]]:
    """All-pairs shortest paths over transformed edge lengths, scaled to L.

    Raises DisconnectedGraphError when any pair is unreachable; callers
    should lay out connected components separately (``layout_components``
    does this and packs them side by side).
    """
    n = len(nodes)
    index = {c: i for i, c in enumerate(nodes)}
    adjacency: list[list[tuple[int, float]]] = [[] for _ in range(n)]
    for (a, b), w in edges.items():
        if a not in index or b not in index:
            continue
        length = edge_length(w, cfg.transform)
        adjacency[index[a]].append((index[b], length))
        adjacency[index[b]].append((index[a], length))

    dist = [[math.inf] * n for _ in range(n)]
    for source in range(n):
        row = dist[source]
        row[source] = 0.0
        heap = [(0.0, source)]
        while heap:
            d, u = heapq.heappop(heap)
            if d > row[u]:
                continue
            for v, length in adjacency[u]:
                nd = d + length
                if nd < row[v]:
                    row[v] = nd
                    heapq.heappush(heap, (nd, v))

    longest = 0.0
    for i in range(n):
        for j in range(i + 1, n):
            if math.isinf(dist[i][j]):
                raise DisconnectedGraphError(
                    "graph is disconnected; lay out connected components separately"
                )
            # enforce exact symmetry (summation order can differ per source)
            dist[j][i] = dist[i][j]
            longest = max(longest, dist[i][j])
    if longest > 0:
        scale = cfg.diameter / longest
        for i in range(n):
            for j in range(n):
                dist[i][j] *= scale
    return dist


# ---------------------------------------------------------------------------
# stress, gradient, Hessian
# ---------------------------------------------------------------------------

def _separation(p: tuple[float, float], q: tuple[float, float], jitter: float):
    dx, dy = p[0] - q[0], p[1] - q[1]
    r = math.hypot(dx, dy)
    if r == 0.0:
        dx, dy = jitter, 0.0
        r = jitter
    return dx, dy, r


def stress(
    positions: list[tuple[float, float]],
    d: list[list[float]],
    cfg: LayoutConfig,
) -> float:
    """Total spring energy of a configuration (rigid-motion invariant)."""
    n = len(positions)
    jitter = 1e-9 * cfg.diameter
    total = 0.0
    for i in range(n):
        for j in range(i + 1, n):
            dij = d[i][j]
            _dx, _dy, r = _separation(positions[i], positions[j], jitter)
            total += cfg.spring_constant / (dij * dij) * (r - dij) ** 2
    return 0.5 * total


def stress_gradient(
    positions: list[tuple[float, float]],
    d: list[list[float]],
    cfg: LayoutConfig,
) -> list[tuple[float, float]]:
    """Analytic per-node gradient of the spring energy."""
    return [_node_gradient(i, positions, d, cfg) for i in range(len(positions))]


def _node_gradient(i, positions, d, cfg):
    jitter = 1e-9 * cfg.diameter
    gx = gy = 0.0
    for j in range(len(positions)):
        if j == i:
            continue
        dij = d[i][j]
        dx, dy, r = _separation(positions[i], positions[j], jitter)
        factor = cfg.spring_constant / (dij * dij) * (1.0 - dij / r)
        gx += factor * dx
        gy += factor * dy
    return gx, gy


def _node_energy(i, p, positions, d, cfg):
    jitter = 1e-9 * cfg.diameter
    total = 0.0
    for j in range(len(positions)):
        if j == i:
            continue
        dij = d[i][j]
        _dx, _dy, r = _separation(p, positions[j], jitter)
        total += cfg.spring_constant / (dij * dij) * (r - dij) ** 2
    return 0.5 * total


def _node_hessian(i, positions, d, cfg):
    jitter = 1e-9 * cfg.diameter
    hxx = hyy = hxy = 0.0
    for j in range(len(positions)):
        if j == i:
            continue
        dij = d[i][j]
        k = cfg.spring_constant / (dij * dij)
        dx, dy, r = _separation(positions[i], positions[j], jitter)
        r3 = r * r * r
        hxx += k * (1.0 - dij * dy * dy / r3)
        hyy += k * (1.0 - dij * dx * dx / r3)
        hxy += k * dij * dx * dy / r3
    return hxx, hyy, hxy


def _relax_node(i, positions, d, cfg) -> None:
    """Drive node i's gradient below tolerance without raising its energy."""
    for _ in range(_MAX_INNER_STEPS):
        gx, gy = _node_gradient(i, positions, d, cfg)
        if math.hypot(gx, gy) < cfg.tolerance:
            return
        hxx, hyy, hxy = _node_hessian(i, positions, d, cfg)
        det = hxx * hyy - hxy * hxy
        if abs(det) > 1e-12:
            step_x = (-gx * hyy + gy * hxy) / det
            step_y = (gx * hxy - gy * hxx) / det
            # Newton direction must descend; otherwise fall back to -grad
            if step_x * gx + step_y * gy >= 0.0:
                step_x, step_y = -gx, -gy
        else:
            step_x, step_y = -gx, -gy
        before = _node_energy(i, positions[i], positions, d, cfg)
        t = 1.0
        moved = False
        while t > 1e-7:
            candidate = (positions[i][0] + t * step_x, positions[i][1] + t * step_y)
            if _node_energy(i, candidate, positions, d, cfg) <= before:
                positions[i] = candidate
                moved = True
                break
            t *= 0.5
        if not moved:
            return


def _initial_positions(n: int, cfg: LayoutConfig) -> list[tuple[float, float]]:
    rng = random.Random(cfg.seed)
    radius = cfg.diameter / 2.0
    positions = []
    for _ in range(n):
        r = radius * math.sqrt(rng.random())
        theta = 2.0 * math.pi * rng.random()
        positions.append((r * math.cos(theta), r * math.sin(theta)))
    return positions


def _canonical_orientation(positions: list[tuple[float, float]]) -> list[tuple[float, float]]:
    n = len(positions)
    if n == 0:
        return positions
    cx = sum(p[0] for p in positions) / n
    cy = sum(p[1] for p in positions) / n
    centered = [(x - cx, y - cy) for x, y in positions]
    if n < 2:
        return centered
    best = (0, 1)
    best_dist = -1.0
    for i in range(n):
        for j in range(i + 1, n):
            dx = centered[j][0] - centered[i][0]
            dy = centered[j][1] - centered[i][1]
            dist = dx * dx + dy * dy
            if dist > best_dist:
                best_dist = dist
                best = (i, j)
    i, j = best
    dx = centered[j][0] - centered[i][0]
    dy = centered[j][1] - centered[i][1]
    if dx == 0.0 and dy == 0.0:
        return centered
    theta = math.atan2(dy, dx)
    cos_t, sin_t = math.cos(-theta), math.sin(-theta)
    return [(x * cos_t - y * sin_t, x * sin_t + y * cos_t) for x, y in centered]


def minimize_stress(
    d: list[list[float]],
    cfg: LayoutConfig,
    nodes: list[str] | None = None,
) -> Layout:
    """Relax the spring system to a local energy minimum.

    Deterministic for a given (d, cfg): the seed fixes the starting disc
    placement, node selection is by largest gradient norm with index
    tie-break, and every accepted step lowers (or keeps) total stress.
    """
    n = len(d)
    for i in range(n):
        for j in range(n):
            if i != j and not d[i][j] > 0:
                raise DataError("ideal distances must be positive off the diagonal")
            if abs(d[i][j] - d[j][i]) > 1e-12:
                raise DataError("ideal distance matrix must be symmetric")
    if nodes is None:
        nodes = [str(i) for i in range(n)]
    if len(nodes) != n:
        raise DataError("node list does not match distance matrix size")

    positions = _initial_positions(n, cfg)
    max_outer = cfg.max_outer_iterations if cfg.max_outer_iterations is not None else 200 * max(n, 1)

    history = [stress(positions, d, cfg)]
    iterations = 0
    for _ in range(max_outer):
        grads = stress_gradient(positions, d, cfg)
        worst = -1
        worst_norm = 0.0
        for i, (gx, gy) in enumerate(grads):
            norm = math.hypot(gx, gy)
            if norm > worst_norm:
                worst_norm = norm
                worst = i
        if worst < 0 or worst_norm < cfg.tolerance:
            break
        _relax_node(worst, positions, d, cfg)
        iterations += 1
        history.append(stress(positions, d, cfg))

    positions = _canonical_orientation(positions)
    return Layout(
        coordinates={nodes[i]: positions[i] for i in range(n)},
        final_stress=stress(positions, d, cfg),
        iterations_used=iterations,
        stress_history=history,
    )


def layout_graph(
    nodes: list[str],
    edges: dict[tuple[str, str], float],
    cfg: LayoutConfig,
) -> Layout:
    """Ideal distances then stress minimization, for a connected graph."""
    if not nodes:
        return Layout(coordinates={}, final_stress=0.0, iterations_used=0, stress_history=[0.0])
    if len(nodes) == 1:
        return Layout(
            coordinates={nodes[0]: (0.0, 0.0)},
            final_stress=0.0,
            iterations_used=0,
            stress_history=[0.0],
        )
    d = ideal_distances(nodes, edges, cfg)
    return minimize_stress(d, cfg, nodes=nodes)


def layout_components(
    nodes: list[str],
    edges: dict[tuple[str, str], float],
    cfg: LayoutConfig,
) -> Layout:
    """Lay out each connected component, then pack them left to right.

    Components are ordered largest first (name tie-break) and separated by
    a gap of a quarter diameter; the combined picture is recentred on its
    centroid.
    """
    adjacency: dict[str, set[str]] = {c: set() for c in nodes}
    for a, b in edges:
        if a in adjacency and b in adjacency:
            adjacency[a].add(b)
            adjacency[b].add(a)
    components: list[list[str]] = []
    unvisited = set(nodes)
    while unvisited:
        seed = min(unvisited)
        stack = [seed]
        unvisited.discard(seed)
        component = [seed]
        while stack:
            current = stack.pop()
            for neighbor in adjacency[current]:
                if neighbor in unvisited:
                    unvisited.discard(neighbor)
                    component.append(neighbor)
                    stack.append(neighbor)
        components.append(sorted(component))
    components.sort(key=lambda comp: (-len(comp), comp[0]))

    gap = 0.25 * cfg.diameter
    coordinates: dict[str, tuple[float, float]] = {}
    total_stress = 0.0
    iterations = 0
    history: list[float] = []
    x_cursor = 0.0
    for component in components:
        members = set(component)
        member_edges = {
            pair: w for pair, w in edges.items() if pair[0] in members and pair[1] in members
        }
        part = layout_graph(component, member_edges, cfg)
        xs = [p[0] for p in part.coordinates.values()]
        ys = [p[1] for p in part.coordinates.values()]
        min_x, max_x = min(xs), max(xs)
        min_y = min(ys)
        for name in component:
            x, y = part.coordinates[name]
            coordinates[name] = (x - min_x + x_cursor, y - min_y)
        x_cursor += (max_x - min_x) + gap
        total_stress += part.final_stress
        iterations += part.iterations_used
        history.extend(part.stress_history)

    if coordinates:
        cx = sum(p[0] for p in coordinates.values()) / len(coordinates)
        cy = sum(p[1] for p in coordinates.values()) / len(coordinates)
        coordinates = {name: (x - cx, y - cy) for name, (x, y) in coordinates.items()}
    return Layout(
        coordinates=coordinates,
        final_stress=total_stress,
        iterations_used=iterations,
        stress_history=history,
    )
