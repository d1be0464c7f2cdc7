"""JSON graph documents: ``{"components": p, "edges": [[a, b], ...], "labels": [...]}``.

Canonical form sorts each edge's endpoints and the edge list, keeps the
field order ``components, edges, labels`` and uses no optional whitespace,
so a canonical document round-trips byte for byte.  Sorting renumbers the
edges; the graph itself is unchanged up to that relabelling.
"""

from __future__ import annotations

import json

from .curve_graph import DualGraph, build_graph
from .errors import DisconnectedError, GraphError, NodalTailsError


class DocumentError(NodalTailsError, ValueError):
    """Base for document problems; ``locus`` names the line or field at fault."""

    def __init__(self, message: str, locus: str) -> None:
        super().__init__(f"{locus}: {message}")
        self.locus = locus


class ParseError(DocumentError):
    pass


class ValidationError(DocumentError):
    pass


def _edge_list(raw, p: int) -> list[tuple[int, int]]:
    if not isinstance(raw, list):
        raise ParseError("must be a list of [a, b] pairs", "edges")
    out = []
    for idx, e in enumerate(raw):
        where = f"edges[{idx}]"
        if not (isinstance(e, list) and len(e) == 2):
            raise ParseError("must be a two-element array", where)
        for x in e:
            if not isinstance(x, int) or isinstance(x, bool):
                raise ParseError("endpoints must be integers", where)
            if not 1 <= x <= p:
                raise ValidationError(f"endpoint {x} outside 1..{p}", where)
        out.append((e[0], e[1]))
    return out


def document_to_graph(doc) -> DualGraph:
    if not isinstance(doc, dict):
        raise ParseError("top level must be an object", "document")
    unknown = sorted(set(doc) - {"components", "edges", "labels"})
    if unknown:
        raise ParseError(f"unknown field {unknown[0]!r}", unknown[0])
    if "components" not in doc:
        raise ParseError("missing field", "components")
    p = doc["components"]
    if not isinstance(p, int) or isinstance(p, bool):
        raise ParseError("must be an integer", "components")
    if p < 1:
        raise ValidationError("must be at least 1", "components")
    edges = _edge_list(doc.get("edges", []), p)
    labels = doc.get("labels")
    if labels is not None:
        if not (isinstance(labels, list) and all(isinstance(s, str) for s in labels)):
            raise ParseError("must be a list of strings", "labels")
        if len(labels) != p:
            raise ValidationError(f"expected {p} labels, got {len(labels)}", "labels")
    try:
        return build_graph(p, edges, labels)
    except DisconnectedError as exc:
        raise ValidationError(f"Disconnected: {exc}", "edges") from exc
    except GraphError as exc:
        raise ValidationError(str(exc), "document") from exc


def parse_graph_document(data: bytes | str) -> DualGraph:
    """Parse and validate a graph document.

    Raises :class:`ParseError` for malformed input and :class:`ValidationError`
    for disconnected or out-of-range graphs.
    """
    if isinstance(data, bytes):
        try:
            data = data.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise ParseError(f"not valid UTF-8 ({exc.reason})", f"byte {exc.start}") from exc
    try:
        doc = json.loads(data)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, f"line {exc.lineno}, column {exc.colno}") from exc
    return document_to_graph(doc)


def graph_to_document(graph: DualGraph) -> dict:
    doc: dict = {
        "components": graph.p,
        "edges": sorted([min(a, b), max(a, b)] for a, b in graph.edges),
    }
    if graph.labels is not None:
        doc["labels"] = list(graph.labels)
    return doc


def canonical_json(obj) -> str:
    return json.dumps(obj, separators=(",", ":"), ensure_ascii=False)


def serialize_graph(graph: DualGraph) -> bytes:
    return canonical_json(graph_to_document(graph)).encode("utf-8")


def load_graph(path: str) -> DualGraph:
    with open(path, "rb") as fh:
        return parse_graph_document(fh.read())
