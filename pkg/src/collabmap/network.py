"""Country co-authorship network: construction, normalization, extraction.

Edges follow the single-relation rule: a paper with three addresses in
country A and two in country B adds exactly 1 to the A-B edge, never the
3 x 2 = 6 an affiliation cross-product would produce. Node profiles can
additionally be compared by cosine (Ochiai) similarity over the binarized
incidence columns, which captures shared collaboration patterns rather
than direct tie strength.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction

from collabmap.counting import CountScheme, CountVector, IncidenceMatrix
from collabmap.errors import DataError


class Provenance(Enum):
    THRESHOLD = "threshold"
    CORE = "core"
    EGO = "ego"
    EXPLICIT_LIST = "explicit_list"


@dataclass(frozen=True)
class NodeInfo:
    country: str
    integer_papers: int
    fractional_papers: Fraction
    degree: int


@dataclass
class CoauthNetwork:
    """Symmetric weighted country graph plus per-node paper counts."""

    nodes: dict[str, NodeInfo]
    edges: dict[tuple[str, str], int]

    def countries(self) -> list[str]:
        return sorted(self.nodes)

    def weight(self, a: str, b: str) -> int:
        return self.edges.get(_pair(a, b), 0)

    def neighbors(self, country: str) -> dict[str, int]:
        out: dict[str, int] = {}
        for (a, b), w in self.edges.items():
            if a == country:
                out[b] = w
            elif b == country:
                out[a] = w
        return out


@dataclass
class SimilarityMatrix:
    """Dense symmetric cosine values over country collaboration profiles."""

    countries: list[str]
    values: dict[tuple[str, str], float]

    def sim(self, a: str, b: str) -> float:
        if a == b:
            return self.values.get((a, a), 0.0)
        return self.values.get(_pair(a, b), 0.0)


@dataclass
class Subnetwork:
    parent: CoauthNetwork
    nodes: list[str]
    edges: dict[tuple[str, str], int]
    provenance: Provenance

    def node_info(self, country: str) -> NodeInfo:
        return self.parent.nodes[country]

    def degree(self, country: str) -> int:
        return sum(1 for pair in self.edges if country in pair)

    def connected_nodes(self) -> set[str]:
        touched: set[str] = set()
        for a, b in self.edges:
            touched.add(a)
            touched.add(b)
        return touched

    def isolated_nodes(self) -> list[str]:
        """Retained nodes with no retained incident edge."""
        touched = self.connected_nodes()
        return [c for c in self.nodes if c not in touched]


@dataclass(frozen=True)
class NetworkStats:
    n_nodes: int
    n_edges: int
    n_parent_links: int
    possible_links: int
    n_connected_nodes: int
    degree_histogram: dict[int, int]

    def as_dict(self) -> dict:
        return {
            "n_nodes": self.n_nodes,
            "n_edges": self.n_edges,
            "n_parent_links": self.n_parent_links,
            "possible_links": self.possible_links,
            "n_connected_nodes": self.n_connected_nodes,
            "degree_histogram": {str(k): v for k, v in sorted(self.degree_histogram.items())},
        }


def _pair(a: str, b: str) -> tuple[str, str]:
    return (a, b) if a < b else (b, a)


def _compare(value, threshold, comparator: str) -> bool:
    if comparator == "ge":
        return value >= threshold
    if comparator == "gt":
        return value > threshold
    raise ValueError(f"comparator must be 'ge' or 'gt', got {comparator!r}")


def build_coauth_network(
    m: IncidenceMatrix,
    counts_int: CountVector,
    counts_frac: CountVector,
) -> CoauthNetwork:
    """Fold every document's country set into pairwise single relations."""
    if counts_int.scheme is not CountScheme.INTEGER or counts_frac.scheme is not CountScheme.FRACTIONAL:
        raise DataError("build_coauth_network expects integer and fractional count vectors")
    universe = set(m.countries)
    for vector in (counts_int, counts_frac):
        missing = universe ^ set(vector.values)
        if missing:
            raise DataError(
                f"count vector ({vector.scheme.value}) disagrees with matrix countries: "
                + ", ".join(sorted(missing))
            )

    per_doc: dict[int, list[int]] = {}
    for (d, c), _v in m.cells.items():
        per_doc.setdefault(d, []).append(c)
    edges: dict[tuple[str, str], int] = {}
    for members in per_doc.values():
        if len(members) < 2:
            continue
        members.sort()
        for i in range(len(members)):
            for j in range(i + 1, len(members)):
                key = (m.countries[members[i]], m.countries[members[j]])
                edges[key] = edges.get(key, 0) + 1

    degrees: dict[str, int] = {c: 0 for c in m.countries}
    for a, b in edges:
        degrees[a] += 1
        degrees[b] += 1
    nodes = {
        c: NodeInfo(
            country=c,
            integer_papers=counts_int.values[c],
            fractional_papers=Fraction(counts_frac.values[c]),
            degree=degrees[c],
        )
        for c in m.countries
    }
    return CoauthNetwork(nodes=nodes, edges=edges)


def cosine_similarity(m: IncidenceMatrix, binary: bool = True) -> SimilarityMatrix:
    """Ochiai/cosine between country columns; binarized unless told otherwise."""
    values: dict[tuple[str, str], float] = {}
    n = len(m.countries)
    if binary:
        doc_sets = m.column_doc_sets()
        sizes = [len(s) for s in doc_sets]
        for i in range(n):
            ci = m.countries[i]
            values[(ci, ci)] = 1.0 if sizes[i] else 0.0
            for j in range(i + 1, n):
                denom = math.sqrt(sizes[i] * sizes[j])
                shared = len(doc_sets[i] & doc_sets[j])
                values[(ci, m.countries[j])] = shared / denom if denom else 0.0
    else:
        columns: list[dict[int, int]] = [dict() for _ in range(n)]
        for (d, c), v in m.cells.items():
            columns[c][d] = v
        norms = [math.sqrt(sum(v * v for v in col.values())) for col in columns]
        for i in range(n):
            ci = m.countries[i]
            values[(ci, ci)] = 1.0 if norms[i] else 0.0
            for j in range(i + 1, n):
                denom = norms[i] * norms[j]
                dot = sum(v * columns[j].get(d, 0) for d, v in columns[i].items())
                values[(ci, m.countries[j])] = dot / denom if denom else 0.0
    return SimilarityMatrix(countries=list(m.countries), values=values)


def threshold_network(
    net: CoauthNetwork,
    min_node_fractional,
    min_edge_weight: int,
    comparator: str = "ge",
) -> Subnetwork:
    """Keep sufficiently productive nodes, then sufficiently heavy edges.

    Nodes passing the fractional-paper threshold stay even when all their
    edges fall below the link threshold; they surface via
    ``isolated_nodes`` so map exports can still draw them.
    """
    min_node = Fraction(min_node_fractional)
    if min_node < 0 or min_edge_weight < 0:
        raise DataError("thresholds must be non-negative")
    kept_nodes = [
        c for c in net.countries()
        if _compare(net.nodes[c].fractional_papers, min_node, comparator)
    ]
    kept = set(kept_nodes)
    edges = {
        pair: w
        for pair, w in net.edges.items()
        if pair[0] in kept and pair[1] in kept and _compare(w, min_edge_weight, comparator)
    }
    return Subnetwork(parent=net, nodes=kept_nodes, edges=edges, provenance=Provenance.THRESHOLD)


def _connected_components(nodes: set[str], adjacency: dict[str, set[str]]) -> list[set[str]]:
    components: list[set[str]] = []
    unvisited = set(nodes)
    while unvisited:
        seed = min(unvisited)
        stack = [seed]
        component = {seed}
        unvisited.discard(seed)
        while stack:
            current = stack.pop()
            for neighbor in adjacency.get(current, ()):
                if neighbor in unvisited:
                    unvisited.discard(neighbor)
                    component.add(neighbor)
                    stack.append(neighbor)
        components.append(component)
    return components


def extract_core(net: CoauthNetwork, min_edge_weight: int, k: int) -> Subnetwork:
    """Edge-thresholded k-core, then its largest connected component.

    ``k=1`` degenerates to the plain largest component of the thresholded
    graph. An empty result is a valid (empty) subnetwork.
    """
    if k < 0:
        raise DataError("k must be non-negative")
    adjacency: dict[str, set[str]] = {c: set() for c in net.nodes}
    for (a, b), w in net.edges.items():
        if w >= min_edge_weight:
            adjacency[a].add(b)
            adjacency[b].add(a)

    # iterative deletion to the k-core fixed point
    alive = set(net.nodes)
    changed = True
    while changed:
        changed = False
        doomed = [c for c in alive if sum(1 for n in adjacency[c] if n in alive) < k]
        if doomed:
            for c in doomed:
                alive.discard(c)
            changed = True

    if not alive:
        return Subnetwork(parent=net, nodes=[], edges={}, provenance=Provenance.CORE)
    components = _connected_components(alive, adjacency)
    components.sort(key=lambda comp: (-len(comp), min(comp)))
    core = components[0]
    edges = {
        pair: w
        for pair, w in net.edges.items()
        if w >= min_edge_weight and pair[0] in core and pair[1] in core
    }
    return Subnetwork(parent=net, nodes=sorted(core), edges=edges, provenance=Provenance.CORE)


def ego_network(
    net: CoauthNetwork,
    focus: str,
    min_edge_weight: int = 1,
    include_alter_ties: bool = True,
) -> Subnetwork:
    """The focal country plus the neighbors its qualifying edges reach.

    The link threshold applies uniformly: alters join via focus edges at
    or above it, and alter-alter ties (when requested) must clear it too.
    """
    if focus not in net.nodes:
        raise DataError(f"unknown focus country: {focus!r}")
    alters = sorted(
        c for c, w in net.neighbors(focus).items() if w >= min_edge_weight
    )
    kept = set(alters) | {focus}
    edges: dict[tuple[str, str], int] = {}
    for alter in alters:
        edges[_pair(focus, alter)] = net.weight(focus, alter)
    if include_alter_ties:
        for pair, w in net.edges.items():
            if pair[0] in kept and pair[1] in kept and focus not in pair and w >= min_edge_weight:
                edges[pair] = w
    return Subnetwork(parent=net, nodes=sorted(kept), edges=edges, provenance=Provenance.EGO)


def subnetwork_by_list(
    net: CoauthNetwork,
    countries: list[str],
    mode: str = "include",
) -> Subnetwork:
    """Induced subgraph on a listed node set, or on its complement."""
    if not countries:
        raise DataError("country list must be non-empty")
    if mode not in ("include", "exclude"):
        raise ValueError(f"mode must be 'include' or 'exclude', got {mode!r}")
    listed = []
    for c in countries:
        if c in net.nodes:
            listed.append(c)
        else:
            warnings.warn(f"country not in network, skipped: {c}", stacklevel=2)
    if mode == "include":
        kept = set(listed)
    else:
        kept = set(net.nodes) - set(listed)
    edges = {
        pair: w for pair, w in net.edges.items() if pair[0] in kept and pair[1] in kept
    }
    return Subnetwork(
        parent=net, nodes=sorted(kept), edges=edges, provenance=Provenance.EXPLICIT_LIST
    )


# ---------------------------------------------------------------------------
# matrix serialization
# ---------------------------------------------------------------------------

def cooccurrence_triples_csv(edges: dict[tuple[str, str], int]) -> str:
    lines = ["country_a,country_b,value"]
    for (a, b), w in sorted(edges.items()):
        lines.append(f"{a},{b},{w}")
    return "\n".join(lines) + "\n"


def cooccurrence_square_csv(net: CoauthNetwork) -> str:
    names = net.countries()
    lines = ["," + ",".join(names)]
    for a in names:
        row = [str(net.weight(a, b)) if a != b else "0" for b in names]
        lines.append(a + "," + ",".join(row))
    return "\n".join(lines) + "\n"


def similarity_triples_csv(sim: SimilarityMatrix) -> str:
    lines = ["country_a,country_b,value"]
    pairs = sorted(pair for pair in sim.values if pair[0] != pair[1])
    for a, b in pairs:
        lines.append(f"{a},{b},{sim.values[(a, b)]:.6f}")
    return "\n".join(lines) + "\n"


def similarity_square_csv(sim: SimilarityMatrix) -> str:
    names = sorted(sim.countries)
    lines = ["," + ",".join(names)]
    for a in names:
        lines.append(a + "," + ",".join(f"{sim.sim(a, b):.6f}" for b in names))
    return "\n".join(lines) + "\n"


def network_stats(sub: Subnetwork) -> NetworkStats:
    n_parent = len(sub.parent.nodes)
    histogram: dict[int, int] = {}
    for c in sub.nodes:
        d = sub.degree(c)
        histogram[d] = histogram.get(d, 0) + 1
    return NetworkStats(
        n_nodes=len(sub.nodes),
        n_edges=len(sub.edges),
        n_parent_links=len(sub.parent.edges),
        possible_links=n_parent * (n_parent - 1) // 2,
        n_connected_nodes=len(sub.connected_nodes()),
        degree_histogram=histogram,
    )
