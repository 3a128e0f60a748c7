"""Report construction and serialization.

The report is a plain JSON-ready dict built in one deterministic pass:
every collection is emitted in a fixed order and every number is cast to a
native Python type, so serializing the same clustering twice yields
byte-identical output regardless of hash seeds or worker counts. The HTML
rendering is a pure function of that dict.
"""

from __future__ import annotations

import html
import json
from typing import Mapping

from .corpus import Corpus
from .evaluate import EntropyReport
from .hierarchy import ClusterNode, HierarchicalResult
from .vsm import term_key


def _entropy_dict(report: EntropyReport, clusters: int | None = None) -> dict:
    return {
        "clusters": int(clusters if clusters is not None else report.k),
        "alpha": float(report.alpha),
        "cluster_entropy": float(report.cluster_entropy),
        "class_entropy": float(report.class_entropy),
        "overall_entropy": float(report.overall),
    }


def _node_dict(node: ClusterNode, corpus: Corpus) -> dict:
    out: dict = {
        "cluster_id": node.cluster_id,
        "space": node.space.value if node.space is not None else None,
        "size": node.size,
        "label": sorted(term_key(t) for t in node.label),
        "doc_ids": [corpus[i].doc_id for i in node.doc_indices],
    }
    if node.split is not None:
        split = {
            "k": int(node.split.k),
            "seed": int(node.split.seed),
            "objective_trace": [float(x) for x in node.split.objective_trace],
            "wcss_trace": [float(x) for x in node.split.wcss_trace],
        }
        if node.split.tuning is not None:
            split["tuning"] = [
                {"k": int(r.k), "overall_entropy": float(r.overall)}
                for r in node.split.tuning
            ]
        out["split"] = split
    out["children"] = [_node_dict(child, corpus) for child in node.children]
    return out


def build_report(result: HierarchicalResult, corpus: Corpus,
                 config: Mapping | None = None) -> dict:
    """Assemble the full clustering report as a JSON-ready dict."""
    phases = []
    for space, report in zip(result.phase_spaces, result.phase_reports):
        entry = {"space": space.value}
        entry.update(_entropy_dict(report))
        phases.append(entry)
    return {
        "config": dict(config) if config is not None else {},
        "n_documents": int(result.n_documents),
        "phases": phases,
        "tree": _node_dict(result.root, corpus),
    }


def format_float(x: float) -> str:
    """Floats are printed with 17 significant digits: enough to round-trip
    exactly, so reproducibility checks can compare bytes."""
    return format(float(x), ".17g")


def _emit(obj, pieces: list[str], indent: int | None, level: int) -> None:
    pad = "" if indent is None else "\n" + " " * (indent * (level + 1))
    close = "" if indent is None else "\n" + " " * (indent * level)
    if obj is None or obj is True or obj is False:
        pieces.append("null" if obj is None else "true" if obj else "false")
    elif isinstance(obj, str):
        pieces.append(json.dumps(obj, ensure_ascii=False))
    elif isinstance(obj, int):
        pieces.append(str(int(obj)))
    elif isinstance(obj, float):
        pieces.append(format_float(obj))
    elif isinstance(obj, dict):
        if not obj:
            pieces.append("{}")
            return
        pieces.append("{")
        for i, (key, value) in enumerate(obj.items()):
            if i:
                pieces.append("," if indent is None else ",")
            pieces.append(pad)
            pieces.append(json.dumps(str(key), ensure_ascii=False))
            pieces.append(": " if indent is not None else ":")
            _emit(value, pieces, indent, level + 1)
        pieces.append(close)
        pieces.append("}")
    elif isinstance(obj, (list, tuple)):
        if not obj:
            pieces.append("[]")
            return
        pieces.append("[")
        for i, value in enumerate(obj):
            if i:
                pieces.append(",")
            pieces.append(pad)
            _emit(value, pieces, indent, level + 1)
        pieces.append(close)
        pieces.append("]")
    else:
        raise TypeError(f"cannot serialize {type(obj).__name__}")


def dumps_json(obj, indent: int | None = None) -> str:
    """JSON text with the report float policy; dict order is preserved."""
    pieces: list[str] = []
    _emit(obj, pieces, indent, 0)
    return "".join(pieces)


def dumps_report(report: dict) -> str:
    """Serialize a report dict to JSON, one stable byte stream per content."""
    return dumps_json(report, indent=2) + "\n"


def _render_node(node: dict, lines: list[str], indent: str) -> None:
    label = ", ".join(node["label"])
    caption = f"{html.escape(label)} (Size={node['size']})"
    ident = html.escape(str(node["cluster_id"]))
    lines.append(f"{indent}<li><span class=\"cid\">{ident}</span> "
                 f"<span class=\"label\">{caption}</span>")
    if node["children"]:
        lines.append(f"{indent}  <ul>")
        for child in node["children"]:
            _render_node(child, lines, indent + "    ")
        lines.append(f"{indent}  </ul>")
    lines.append(f"{indent}</li>")


def render_html(report: dict) -> str:
    """Standalone HTML view of a report: run summary, phase table, tree."""
    lines = [
        "<!doctype html>",
        "<html>",
        "<head>",
        "<meta charset=\"utf-8\">",
        "<title>Cluster report</title>",
        "<style>",
        "body { font-family: sans-serif; margin: 2em; }",
        "table { border-collapse: collapse; }",
        "td, th { border: 1px solid #999; padding: 0.3em 0.8em; }",
        ".cid { color: #666; font-family: monospace; }",
        ".label { font-weight: bold; }",
        "li { margin: 0.2em 0; }",
        "</style>",
        "</head>",
        "<body>",
        "<h1>Cluster report</h1>",
        f"<p>{report['n_documents']} documents</p>",
    ]
    config = report.get("config") or {}
    if config:
        lines.append("<h2>Configuration</h2>")
        lines.append("<table>")
        for key in config:
            lines.append(f"<tr><th>{html.escape(str(key))}</th>"
                         f"<td>{html.escape(str(config[key]))}</td></tr>")
        lines.append("</table>")
    lines.append("<h2>Phases</h2>")
    lines.append("<table>")
    lines.append("<tr><th>#</th><th>Space</th><th>Clusters</th>"
                 "<th>Cluster entropy</th><th>Class entropy</th><th>Overall</th></tr>")
    for i, phase in enumerate(report["phases"], start=1):
        lines.append(
            f"<tr><td>{i}</td><td>{html.escape(phase['space'])}</td>"
            f"<td>{phase['clusters']}</td>"
            f"<td>{phase['cluster_entropy']:.4f}</td>"
            f"<td>{phase['class_entropy']:.4f}</td>"
            f"<td>{phase['overall_entropy']:.4f}</td></tr>"
        )
    lines.append("</table>")
    lines.append("<h2>Clusters</h2>")
    lines.append("<ul>")
    _render_node(report["tree"], lines, "  ")
    lines.append("</ul>")
    lines.append("</body>")
    lines.append("</html>")
    return "\n".join(lines) + "\n"
