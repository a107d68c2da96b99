"""VOSViewer map and network file emitters (tab-separated, paired ids)."""

from __future__ import annotations

from collabmap.counting import format_fixed
from collabmap.errors import DataError
from collabmap.layout import Layout
from collabmap.network import Subnetwork

SIZE_ATTRS = ("integer_papers", "fractional_papers", "degree")


def export_vosviewer(
    sub: Subnetwork,
    layout: Layout,
    size_attr: str = "fractional_papers",
) -> tuple[str, str]:
    """Return (map file, network file) sharing one dense id assignment.

    The map's weight column carries the chosen node-size attribute; degree
    is the in-subnetwork degree, papers come from the parent node profile.
    """
    if size_attr not in SIZE_ATTRS:
        raise DataError(f"size_attr must be one of {SIZE_ATTRS}, got {size_attr!r}")
    names = sorted(sub.nodes)
    for name in names:
        if name not in layout.coordinates:
            raise DataError(f"layout is missing coordinates for: {name}")
    ids = {name: i + 1 for i, name in enumerate(names)}

    map_lines = ["id\tlabel\tx\ty\tweight"]
    for name in names:
        x, y = layout.coordinates[name]
        if size_attr == "degree":
            weight = str(sub.degree(name))
        elif size_attr == "integer_papers":
            weight = str(sub.node_info(name).integer_papers)
        else:
            weight = format_fixed(sub.node_info(name).fractional_papers)
        map_lines.append(f"{ids[name]}\t{name}\t{format_fixed(x)}\t{format_fixed(y)}\t{weight}")

    net_lines = [
        f"{a}\t{b}\t{w}"
        for a, b, w in sorted(
            (min(ids[p], ids[q]), max(ids[p], ids[q]), w) for (p, q), w in sub.edges.items()
        )
    ]
    map_text = "\n".join(map_lines) + "\n"
    net_text = ("\n".join(net_lines) + "\n") if net_lines else ""
    return map_text, net_text
