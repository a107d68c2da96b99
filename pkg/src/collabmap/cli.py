"""Pipeline orchestration CLI.

Each stage reads and writes files inside a workspace directory, so the
monolithic ``run`` command and a chain of per-stage subcommands produce
identical artifact trees. Every stage records its resolved configuration,
input digests, and artifact digests in ``run-manifest.json``; nothing
depends on wall-clock time, so repeated runs are byte-identical.

Exit codes: 0 success, 2 configuration error, 3 parse error (strict
mode), 4 data error.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from collabmap import counting, network, synth
from collabmap.corpus import filtering, records, registry as registry_mod
from collabmap.errors import CollabmapError, ConfigError, DataError, ParseError
from collabmap.exports import geo as geo_export
from collabmap.exports import pajek, report as report_export, vosviewer
from collabmap.layout import EdgeLengthTransform, LayoutConfig, layout_components

MANIFEST_NAME = "run-manifest.json"

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_PARSE = 3
EXIT_DATA = 4


@dataclass
class RunConfig:
    inputs: list[str] = field(default_factory=list)
    input_format: str = "tagged"
    strict: bool = False
    registry_path: str | None = None
    aliases_path: str | None = None
    type_synonyms: dict[str, str] | None = None
    min_node_fractional: Fraction = Fraction(0)
    min_edge_weight: int = 0
    comparator: str = "ge"
    core_k: int | None = None
    core_min_edge_weight: int = 1
    ego_focus: str | None = None
    ego_min_edge_weight: int = 1
    ego_alter_ties: bool = True
    include_countries: list[str] = field(default_factory=list)
    exclude_countries: list[str] = field(default_factory=list)
    layout_transform: str | None = None
    layout_weights: str = "counts"
    layout_diameter: float = 1.0
    layout_spring: float = 1.0
    layout_tolerance: float = 1e-4
    layout_max_iterations: int | None = None
    layout_seed: int = 42
    size_attr: str | None = None
    size_min: float = 1.0
    size_scale: float = 1.0
    great_circle: bool = False
    square_matrices: bool = False

    def validate(self, require_inputs: bool = False) -> None:
        if self.input_format not in ("tagged", "delimited"):
            raise ConfigError(f"unknown input format: {self.input_format!r}")
        if self.comparator not in ("ge", "gt"):
            raise ConfigError(f"comparator must be ge or gt, got {self.comparator!r}")
        if self.min_node_fractional < 0 or self.min_edge_weight < 0:
            raise ConfigError("thresholds must be non-negative")
        if self.layout_weights not in ("counts", "cosine"):
            raise ConfigError(f"layout weights must be counts or cosine, got {self.layout_weights!r}")
        valid_transforms = {t.value for t in EdgeLengthTransform}
        if self.layout_transform is not None and self.layout_transform not in valid_transforms:
            raise ConfigError(f"unknown layout transform: {self.layout_transform!r}")
        if self.size_attr is not None and self.size_attr not in vosviewer.SIZE_ATTRS:
            raise ConfigError(f"unknown size attribute: {self.size_attr!r}")
        if self.include_countries and self.exclude_countries:
            raise ConfigError("give an include list or an exclude list, not both")
        if require_inputs and not self.inputs:
            raise ConfigError("no input files given")
        if require_inputs:
            for path in self.inputs:
                if not Path(path).is_file():
                    raise ConfigError(f"input file not found: {path}")

    def registry(self) -> registry_mod.CountryRegistry:
        return registry_mod.load_registry(self.registry_path, self.aliases_path)

    def layout_config(self) -> LayoutConfig:
        transform = self.layout_transform
        if transform is None:
            transform = (
                "one_minus_similarity" if self.layout_weights == "cosine" else "inverse_log_weight"
            )
        return LayoutConfig(
            transform=EdgeLengthTransform(transform),
            diameter=self.layout_diameter,
            spring_constant=self.layout_spring,
            tolerance=self.layout_tolerance,
            max_outer_iterations=self.layout_max_iterations,
            seed=self.layout_seed,
        )

    def stage_view(self, stage: str) -> dict:
        """The configuration slice a stage actually consumes (for the manifest)."""
        views = {
            # paths are reduced to file names so manifests stay byte-identical
            # across checkouts; content is pinned by the digest table
            "ingest": {
                "inputs": [Path(p).name for p in self.inputs],
                "input_format": self.input_format,
                "strict": self.strict,
                "registry_path": Path(self.registry_path).name if self.registry_path else None,
                "aliases_path": Path(self.aliases_path).name if self.aliases_path else None,
            },
            "summary": {},
            "net": {
                "min_node_fractional": str(self.min_node_fractional),
                "min_edge_weight": self.min_edge_weight,
                "comparator": self.comparator,
                "include_countries": sorted(self.include_countries),
                "exclude_countries": sorted(self.exclude_countries),
                "layout": self._layout_view(),
                "size_attr": self.size_attr or "fractional_papers",
                "square_matrices": self.square_matrices,
            },
            "geo": {
                "min_node_fractional": str(self.min_node_fractional),
                "min_edge_weight": self.min_edge_weight,
                "comparator": self.comparator,
                "include_countries": sorted(self.include_countries),
                "exclude_countries": sorted(self.exclude_countries),
                "size_min": self.size_min,
                "size_scale": self.size_scale,
                "great_circle": self.great_circle,
            },
            "core": {
                "core_k": self.core_k,
                "core_min_edge_weight": self.core_min_edge_weight,
                "layout": self._layout_view(),
                "size_attr": self.size_attr or "degree",
            },
            "ego": {
                "ego_focus": self.ego_focus,
                "ego_min_edge_weight": self.ego_min_edge_weight,
                "ego_alter_ties": self.ego_alter_ties,
                "layout": self._layout_view(),
                "size_attr": self.size_attr or "fractional_papers",
            },
            "export": {},
        }
        return views[stage]

    def _layout_view(self) -> dict:
        cfg = self.layout_config()
        return {
            "transform": cfg.transform.value,
            "weights": self.layout_weights,
            "diameter": cfg.diameter,
            "spring_constant": cfg.spring_constant,
            "tolerance": cfg.tolerance,
            "max_outer_iterations": cfg.max_outer_iterations,
            "seed": cfg.seed,
        }


# ---------------------------------------------------------------------------
# workspace plumbing
# ---------------------------------------------------------------------------

class Workspace:
    """Artifact sink rooted at a directory, tracking writes per stage."""

    def __init__(self, root: Path):
        self.root = Path(root)
        self.written: list[Path] = []

    def start_stage(self) -> None:
        self.written = []

    def write_text(self, relpath: str, text: str) -> Path:
        path = self.root / relpath
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text, encoding="utf-8", newline="\n")
        self.written.append(path)
        return path

    def rollback_stage(self) -> None:
        for path in self.written:
            if path.exists():
                path.unlink()
            parent = path.parent
            while parent != self.root and parent.exists() and not any(parent.iterdir()):
                parent.rmdir()
                parent = parent.parent
        self.written = []

    def read_text(self, relpath: str) -> str:
        path = self.root / relpath
        if not path.is_file():
            raise ConfigError(f"missing intermediate {relpath!r}; run the earlier stages first")
        return path.read_text(encoding="utf-8")

    def artifact_digests(self) -> dict[str, str]:
        return {
            str(path.relative_to(self.root)).replace("\\", "/"): _sha256_file(path)
            for path in self.written
        }


def _sha256_file(path: Path) -> str:
    return hashlib.sha256(path.read_bytes()).hexdigest()


def _sha256_text(text: str) -> str:
    return hashlib.sha256(text.encode("utf-8")).hexdigest()


def _json_dumps(obj) -> str:
    """Canonical sorted-key JSON, used for the manifest."""
    return json.dumps(obj, indent=2, ensure_ascii=False, sort_keys=True) + "\n"


def _json_artifact(obj) -> str:
    """Schema-ordered JSON for artifact files (dicts are pre-ordered)."""
    return json.dumps(obj, indent=2, ensure_ascii=False) + "\n"


def update_manifest(ws: Workspace, stage: str, config_view: dict, inputs: dict[str, str]) -> None:
    manifest_path = ws.root / MANIFEST_NAME
    manifest = {"stages": {}}
    if manifest_path.is_file():
        manifest = json.loads(manifest_path.read_text(encoding="utf-8"))
    manifest.setdefault("stages", {})[stage] = {
        "config": config_view,
        "inputs": inputs,
        "artifacts": ws.artifact_digests(),
    }
    manifest_path.parent.mkdir(parents=True, exist_ok=True)
    manifest_path.write_text(_json_dumps(manifest), encoding="utf-8", newline="\n")


# ---------------------------------------------------------------------------
# intermediate representations
# ---------------------------------------------------------------------------

def documents_jsonl(documents: list[filtering.Document]) -> str:
    lines = []
    for doc in documents:
        lines.append(
            json.dumps(
                {
                    "record_id": doc.record_id,
                    "doc_type": doc.doc_type,
                    "country_addresses": doc.country_addresses,
                },
                sort_keys=True,
                ensure_ascii=False,
            )
        )
    return "\n".join(lines) + ("\n" if lines else "")


def load_documents(ws: Workspace) -> list[filtering.Document]:
    text = ws.read_text("documents.jsonl")
    documents = []
    for line in text.splitlines():
        if not line.strip():
            continue
        obj = json.loads(line)
        documents.append(
            filtering.Document(
                record_id=obj["record_id"],
                doc_type=obj["doc_type"],
                country_addresses={k: int(v) for k, v in obj["country_addresses"].items()},
            )
        )
    return documents


def load_filter_report(ws: Workspace) -> filtering.FilterReport:
    obj = json.loads(ws.read_text("filter-report.json"))
    report = filtering.FilterReport(
        n_records=obj["n_records"],
        n_retained=obj["n_retained"],
        n_dropped_type=obj["n_dropped_type"],
        n_dropped_no_address=obj["n_dropped_no_address"],
    )
    report.unrecognized.update(obj.get("unrecognized", {}))
    return report


def _build_network(documents: list[filtering.Document]):
    matrix = counting.build_incidence(documents)
    counts_int = counting.integer_counts(matrix)
    counts_frac = counting.fractional_counts(matrix)
    net = network.build_coauth_network(matrix, counts_int, counts_frac)
    return matrix, counts_int, counts_frac, net


def _restrict_network(cfg: RunConfig, net: network.CoauthNetwork) -> network.CoauthNetwork:
    """Apply the include/exclude country list before thresholding."""
    if not cfg.include_countries and not cfg.exclude_countries:
        return net
    if cfg.include_countries:
        sub = network.subnetwork_by_list(net, cfg.include_countries, mode="include")
    else:
        sub = network.subnetwork_by_list(net, cfg.exclude_countries, mode="exclude")
    kept = set(sub.nodes)
    nodes = {c: info for c, info in net.nodes.items() if c in kept}
    return network.CoauthNetwork(nodes=nodes, edges=dict(sub.edges))


def _subnetwork_files(
    ws: Workspace,
    prefix: str,
    sub: network.Subnetwork,
    cfg: RunConfig,
    size_attr: str,
) -> None:
    """Write the shared artifact set for any extracted subnetwork."""
    ws.write_text(f"{prefix}/edges.csv", network.cooccurrence_triples_csv(sub.edges))
    node_lines = ["country,integer_papers,fractional_papers,degree,isolated"]
    isolated = set(sub.isolated_nodes())
    for country in sub.nodes:
        info = sub.node_info(country)
        node_lines.append(
            f"{country},{info.integer_papers},{counting.format_fixed(info.fractional_papers)},"
            f"{sub.degree(country)},{'yes' if country in isolated else 'no'}"
        )
    ws.write_text(f"{prefix}/nodes.csv", "\n".join(node_lines) + "\n")
    stats = network.network_stats(sub)
    ws.write_text(f"{prefix}/stats.json", _json_artifact(stats.as_dict()))

    if cfg.layout_weights == "cosine":
        matrix = counting.build_incidence(load_documents(ws))
        sim = network.cosine_similarity(matrix)
        edges = {pair: sim.sim(*pair) for pair in sub.edges}
    else:
        edges = {pair: float(w) for pair, w in sub.edges.items()}
    layout = layout_components(list(sub.nodes), edges, cfg.layout_config())
    layout_lines = ["country,x,y"]
    for country in sub.nodes:
        x, y = layout.coordinates[country]
        layout_lines.append(f"{country},{counting.format_fixed(x)},{counting.format_fixed(y)}")
    ws.write_text(f"{prefix}/layout.csv", "\n".join(layout_lines) + "\n")

    ws.write_text(f"{prefix}/network.net", pajek.export_pajek(sub, layout))
    map_text, net_text = vosviewer.export_vosviewer(sub, layout, size_attr=size_attr)
    ws.write_text(f"{prefix}/vos-map.txt", map_text)
    ws.write_text(f"{prefix}/vos-network.txt", net_text)


# ---------------------------------------------------------------------------
# stages
# ---------------------------------------------------------------------------

def stage_ingest(cfg: RunConfig, ws: Workspace) -> None:
    reg = cfg.registry()
    all_records: list[records.RawRecord] = []
    all_issues: list[dict] = []
    input_digests: dict[str, str] = {}
    for path_str in cfg.inputs:
        path = Path(path_str)
        data = path.read_text(encoding="utf-8")
        input_digests[path.name] = _sha256_text(data)
        recs, issues = records.parse_records(
            data, fmt=cfg.input_format, strict=cfg.strict, source_name=path.name
        )
        all_records.extend(recs)
        all_issues.extend({"file": path.name, "line_no": i.line_no, "message": i.message} for i in issues)
    seen: set[str] = set()
    for rec in all_records:
        if rec.record_id in seen:
            raise DataError(f"duplicate record id across inputs: {rec.record_id!r}")
        seen.add(rec.record_id)
    documents, report = filtering.filter_documents(all_records, reg, cfg.type_synonyms)
    ws.write_text("documents.jsonl", documents_jsonl(documents))
    ws.write_text("filter-report.json", _json_artifact(report.as_dict()))
    ws.write_text("parse-issues.json", _json_artifact(all_issues))
    update_manifest(ws, "ingest", cfg.stage_view("ingest"), input_digests)


def stage_summary(cfg: RunConfig, ws: Workspace) -> None:
    inputs = {
        "documents.jsonl": _sha256_text(ws.read_text("documents.jsonl")),
        "filter-report.json": _sha256_text(ws.read_text("filter-report.json")),
    }
    documents = load_documents(ws)
    report = load_filter_report(ws)
    summary = counting.summarize(documents, report)
    matrix = counting.build_incidence(documents)
    counts_int = counting.integer_counts(matrix)
    counts_frac = counting.fractional_counts(matrix)
    ws.write_text("summary.json", counting.summary_json(summary))
    ws.write_text("counts.csv", counting.counts_csv([counts_int, counts_frac], cfg.registry()))
    update_manifest(ws, "summary", cfg.stage_view("summary"), inputs)


def stage_net(cfg: RunConfig, ws: Workspace) -> None:
    inputs = {"documents.jsonl": _sha256_text(ws.read_text("documents.jsonl"))}
    documents = load_documents(ws)
    matrix, counts_int, counts_frac, net = _build_network(documents)
    net = _restrict_network(cfg, net)

    ws.write_text("network/edges.csv", network.cooccurrence_triples_csv(net.edges))
    node_lines = ["country,integer_papers,fractional_papers,degree"]
    for country in net.countries():
        info = net.nodes[country]
        node_lines.append(
            f"{country},{info.integer_papers},{counting.format_fixed(info.fractional_papers)},{info.degree}"
        )
    ws.write_text("network/nodes.csv", "\n".join(node_lines) + "\n")
    sim = network.cosine_similarity(matrix)
    ws.write_text("network/cosine.csv", network.similarity_triples_csv(sim))
    if cfg.square_matrices:
        ws.write_text("network/cooccurrence-square.csv", network.cooccurrence_square_csv(net))
        ws.write_text("network/cosine-square.csv", network.similarity_square_csv(sim))

    sub = network.threshold_network(
        net, cfg.min_node_fractional, cfg.min_edge_weight, comparator=cfg.comparator
    )
    _subnetwork_files(ws, "thresholded", sub, cfg, cfg.size_attr or "fractional_papers")
    update_manifest(ws, "net", cfg.stage_view("net"), inputs)


def stage_geo(cfg: RunConfig, ws: Workspace) -> None:
    inputs = {"documents.jsonl": _sha256_text(ws.read_text("documents.jsonl"))}
    documents = load_documents(ws)
    _matrix, _counts_int, counts_frac, net = _build_network(documents)
    net = _restrict_network(cfg, net)
    sub = network.threshold_network(
        net, cfg.min_node_fractional, cfg.min_edge_weight, comparator=cfg.comparator
    )
    rule = geo_export.SizeRule(s_min=cfg.size_min, s_scale=cfg.size_scale)
    doc, nodes, links = geo_export.export_geo(
        sub, counts_frac, cfg.registry(), rule, great_circle=cfg.great_circle
    )
    ws.write_text("geo/map.geojson", doc)
    ws.write_text("geo/nodes.csv", nodes)
    ws.write_text("geo/links.csv", links)
    update_manifest(ws, "geo", cfg.stage_view("geo"), inputs)


def stage_core(cfg: RunConfig, ws: Workspace) -> None:
    if cfg.core_k is None:
        raise ConfigError("core stage needs --core-k")
    inputs = {"documents.jsonl": _sha256_text(ws.read_text("documents.jsonl"))}
    documents = load_documents(ws)
    _matrix, _counts_int, _counts_frac, net = _build_network(documents)
    net = _restrict_network(cfg, net)
    sub = network.extract_core(net, cfg.core_min_edge_weight, cfg.core_k)
    _subnetwork_files(ws, "core", sub, cfg, cfg.size_attr or "degree")
    update_manifest(ws, "core", cfg.stage_view("core"), inputs)


def stage_ego(cfg: RunConfig, ws: Workspace) -> None:
    if not cfg.ego_focus:
        raise ConfigError("ego stage needs --focus")
    inputs = {"documents.jsonl": _sha256_text(ws.read_text("documents.jsonl"))}
    documents = load_documents(ws)
    _matrix, counts_int, counts_frac, net = _build_network(documents)
    net = _restrict_network(cfg, net)
    focus = cfg.ego_focus.strip().upper()
    sub = network.ego_network(
        net, focus, min_edge_weight=cfg.ego_min_edge_weight, include_alter_ties=cfg.ego_alter_ties
    )
    prefix = f"ego/{focus}"
    _subnetwork_files(ws, prefix, sub, cfg, cfg.size_attr or "fractional_papers")
    ws.write_text(
        f"{prefix}/focus.json",
        _json_artifact(report_export.focus_stats(focus, counts_int, counts_frac)),
    )
    update_manifest(ws, "ego", cfg.stage_view("ego"), inputs)


def stage_export(cfg: RunConfig, ws: Workspace) -> None:
    summary_text = ws.read_text("summary.json")
    stats_text = ws.read_text("thresholded/stats.json")
    inputs = {
        "summary.json": _sha256_text(summary_text),
        "thresholded/stats.json": _sha256_text(stats_text),
    }
    documents = load_documents(ws)
    report = load_filter_report(ws)
    summary = counting.summarize(documents, report)
    stats_obj = json.loads(stats_text)
    stats = network.NetworkStats(
        n_nodes=stats_obj["n_nodes"],
        n_edges=stats_obj["n_edges"],
        n_parent_links=stats_obj["n_parent_links"],
        possible_links=stats_obj["possible_links"],
        n_connected_nodes=stats_obj["n_connected_nodes"],
        degree_histogram={int(k): v for k, v in stats_obj["degree_histogram"].items()},
    )
    focus = None
    if cfg.ego_focus:
        focus_path = ws.root / "ego" / cfg.ego_focus.strip().upper() / "focus.json"
        if focus_path.is_file():
            focus = json.loads(focus_path.read_text(encoding="utf-8"))
            inputs["focus.json"] = _sha256_file(focus_path)
    ws.write_text("report.json", report_export.export_report(summary, stats, focus))
    update_manifest(ws, "export", cfg.stage_view("export"), inputs)


_STAGE_FUNCS = {
    "ingest": stage_ingest,
    "summary": stage_summary,
    "net": stage_net,
    "geo": stage_geo,
    "core": stage_core,
    "ego": stage_ego,
    "export": stage_export,
}


def run_pipeline(cfg: RunConfig, ws: Workspace) -> None:
    stages = ["ingest", "summary", "net", "geo"]
    if cfg.core_k is not None:
        stages.append("core")
    if cfg.ego_focus:
        stages.append("ego")
    stages.append("export")
    for stage in stages:
        _run_stage(stage, cfg, ws)


def _run_stage(stage: str, cfg: RunConfig, ws: Workspace) -> None:
    ws.start_stage()
    try:
        _STAGE_FUNCS[stage](cfg, ws)
    except Exception:
        ws.rollback_stage()
        raise


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------

def _add_registry_args(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--registry", help="override the bundled country CSV")
    parser.add_argument("--aliases", help="override the bundled alias CSV")


# Flag defaults stay None so a config file value is only overridden when the
# flag is actually given; the effective defaults live on RunConfig.
def _add_threshold_args(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--min-node-fractional", default=None,
                        help="node threshold on fractionally counted papers")
    parser.add_argument("--min-link-weight", type=int, default=None,
                        help="edge threshold on co-authored document counts")
    parser.add_argument("--comparator", choices=["ge", "gt"], default=None)
    parser.add_argument("--include-countries", default=None,
                        help="comma-separated inclusion list applied before thresholds")
    parser.add_argument("--exclude-countries", default=None,
                        help="comma-separated exclusion list applied before thresholds")


def _add_layout_args(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--layout-transform",
                        choices=[t.value for t in EdgeLengthTransform], default=None)
    parser.add_argument("--layout-weights", choices=["counts", "cosine"], default=None)
    parser.add_argument("--layout-diameter", type=float, default=None)
    parser.add_argument("--layout-spring", type=float, default=None)
    parser.add_argument("--layout-tolerance", type=float, default=None)
    parser.add_argument("--layout-max-iter", type=int, default=None)
    parser.add_argument("--layout-seed", type=int, default=None)
    parser.add_argument("--size-attr", choices=list(vosviewer.SIZE_ATTRS), default=None)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="collabmap",
        description="Country co-authorship networks and collaboration maps",
    )
    parser.add_argument("--config", help="JSON file with RunConfig fields (flags override)")
    sub = parser.add_subparsers(dest="command", required=True)

    p_synth = sub.add_parser("synth", help="generate a seeded synthetic corpus")
    p_synth.add_argument("--out", required=True)
    p_synth.add_argument("--docs", type=int, default=200)
    p_synth.add_argument("--countries", type=int, default=20)
    p_synth.add_argument("--intl-prob", type=float, default=0.3)
    p_synth.add_argument("--seed", type=int, default=42)
    _add_registry_args(p_synth)

    common_ws = argparse.ArgumentParser(add_help=False)
    common_ws.add_argument("--workspace", required=True, help="artifact directory")

    p_ingest = sub.add_parser("ingest", parents=[common_ws], help="parse and filter records")
    p_ingest.add_argument("--input", nargs="+", required=True)
    p_ingest.add_argument("--format", choices=["tagged", "delimited"], default=None)
    p_ingest.add_argument("--strict", action="store_true",
                          help="abort on the first malformed record")
    _add_registry_args(p_ingest)

    p_summary = sub.add_parser("summary", parents=[common_ws], help="corpus summary and counts")
    _add_registry_args(p_summary)

    p_net = sub.add_parser("net", parents=[common_ws],
                           help="build, threshold, and lay out the network")
    _add_threshold_args(p_net)
    _add_layout_args(p_net)
    p_net.add_argument("--square-matrices", action="store_true")
    _add_registry_args(p_net)

    p_geo = sub.add_parser("geo", parents=[common_ws], help="geographic map exports")
    _add_threshold_args(p_geo)
    p_geo.add_argument("--size-min", type=float, default=None)
    p_geo.add_argument("--size-scale", type=float, default=None)
    p_geo.add_argument("--great-circle", action="store_true")
    _add_registry_args(p_geo)

    p_core = sub.add_parser("core", parents=[common_ws], help="extract the network core")
    p_core.add_argument("--core-k", type=int, required=True)
    p_core.add_argument("--core-min-link-weight", type=int, default=None)
    _add_threshold_args(p_core)
    _add_layout_args(p_core)
    _add_registry_args(p_core)

    p_ego = sub.add_parser("ego", parents=[common_ws], help="extract an ego network")
    p_ego.add_argument("--focus", required=True)
    p_ego.add_argument("--ego-min-link-weight", type=int, default=None)
    p_ego.add_argument("--no-alter-ties", action="store_true")
    _add_threshold_args(p_ego)
    _add_layout_args(p_ego)
    _add_registry_args(p_ego)

    p_export = sub.add_parser("export", parents=[common_ws], help="write the combined report")
    p_export.add_argument("--focus", default=None)
    _add_registry_args(p_export)

    p_run = sub.add_parser("run", parents=[common_ws], help="full pipeline")
    p_run.add_argument("--input", nargs="+", required=True)
    p_run.add_argument("--format", choices=["tagged", "delimited"], default=None)
    p_run.add_argument("--strict", action="store_true")
    _add_threshold_args(p_run)
    _add_layout_args(p_run)
    p_run.add_argument("--size-min", type=float, default=None)
    p_run.add_argument("--size-scale", type=float, default=None)
    p_run.add_argument("--great-circle", action="store_true")
    p_run.add_argument("--square-matrices", action="store_true")
    p_run.add_argument("--core-k", type=int, default=None)
    p_run.add_argument("--core-min-link-weight", type=int, default=None)
    p_run.add_argument("--focus", default=None)
    p_run.add_argument("--ego-min-link-weight", type=int, default=None)
    p_run.add_argument("--no-alter-ties", action="store_true")
    _add_registry_args(p_run)

    return parser


def _split_list(raw: str) -> list[str]:
    return [item.strip().upper() for item in raw.split(",") if item.strip()]


def _parse_fraction(value) -> Fraction:
    try:
        return Fraction(str(value))
    except (ValueError, ZeroDivisionError) as exc:
        raise ConfigError(f"not a number: {value!r}") from exc


def config_from_args(args: argparse.Namespace) -> RunConfig:
    base: dict = {}
    if getattr(args, "config", None):
        config_path = Path(args.config)
        if not config_path.is_file():
            raise ConfigError(f"config file not found: {args.config}")
        base = json.loads(config_path.read_text(encoding="utf-8"))
        if not isinstance(base, dict):
            raise ConfigError("config file must hold a JSON object")
    cfg = RunConfig()
    for key, value in base.items():
        if not hasattr(cfg, key):
            raise ConfigError(f"unknown config field: {key!r}")
        if key == "min_node_fractional":
            value = _parse_fraction(value)
        setattr(cfg, key, value)

    def take(attr: str, name: str, transform=None):
        if hasattr(args, name) and getattr(args, name) is not None:
            value = getattr(args, name)
            setattr(cfg, attr, transform(value) if transform else value)

    take("inputs", "input", lambda v: list(v))
    take("input_format", "format")
    if getattr(args, "strict", False):
        cfg.strict = True
    take("registry_path", "registry")
    take("aliases_path", "aliases")
    take("min_node_fractional", "min_node_fractional", _parse_fraction)
    take("min_edge_weight", "min_link_weight")
    take("comparator", "comparator")
    take("include_countries", "include_countries", _split_list)
    take("exclude_countries", "exclude_countries", _split_list)
    take("layout_transform", "layout_transform")
    take("layout_weights", "layout_weights")
    take("layout_diameter", "layout_diameter")
    take("layout_spring", "layout_spring")
    take("layout_tolerance", "layout_tolerance")
    take("layout_max_iterations", "layout_max_iter")
    take("layout_seed", "layout_seed")
    take("size_attr", "size_attr")
    take("size_min", "size_min")
    take("size_scale", "size_scale")
    if getattr(args, "great_circle", False):
        cfg.great_circle = True
    if getattr(args, "square_matrices", False):
        cfg.square_matrices = True
    take("core_k", "core_k")
    take("core_min_edge_weight", "core_min_link_weight")
    take("ego_focus", "focus")
    take("ego_min_edge_weight", "ego_min_link_weight")
    if getattr(args, "no_alter_ties", False):
        cfg.ego_alter_ties = False
    return cfg


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = config_from_args(args)
        if args.command == "synth":
            reg = registry_mod.load_registry(cfg.registry_path, cfg.aliases_path)
            text = synth.generate_corpus_text(
                reg,
                n_docs=args.docs,
                n_countries=args.countries,
                intl_prob=args.intl_prob,
                seed=args.seed,
            )
            out = Path(args.out)
            out.parent.mkdir(parents=True, exist_ok=True)
            out.write_text(text, encoding="utf-8", newline="\n")
            return EXIT_OK
        if args.command == "run":
            cfg.validate(require_inputs=True)
            run_pipeline(cfg, Workspace(Path(args.workspace)))
            return EXIT_OK
        if args.command in _STAGE_FUNCS:
            cfg.validate(require_inputs=args.command == "ingest")
            _run_stage(args.command, cfg, Workspace(Path(args.workspace)))
            return EXIT_OK
        raise ConfigError(f"unknown command {args.command!r}")
    except ParseError as exc:
        print(f"collabmap: parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except ConfigError as exc:
        print(f"collabmap: configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except CollabmapError as exc:
        print(f"collabmap: error: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
