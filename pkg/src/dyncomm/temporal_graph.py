"""Diachronic link data model.

A link file row records that a source (node, time) cites a destination
(node, time), where the two timestamps may differ.  From such rows we build
the temporal graph (vertices are (node, timestep) pairs) and, by dropping
timestamps, its physical projection.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import IO, Iterable, Mapping, NamedTuple

RawLink = tuple[tuple[str, int], tuple[str, int]]

STRICT_CITATION = "strict_citation"
PERMISSIVE = "permissive"


class LinkParseError(ValueError):
    """Malformed link-file line (field count, bad integer, bad time)."""


class LinkValidationError(ValueError):
    """Structurally valid link that violates the active validation mode."""


class TemporalNode(NamedTuple):
    node: str
    t: int


class TemporalLink(NamedTuple):
    source: TemporalNode
    target: TemporalNode
    weight: int


@dataclass(frozen=True)
class TemporalGraph:
    """Directed weighted graph over (node, timestep) vertices.

    Link weights are raw-link multiplicities, so ``total_weight`` equals the
    number of raw input links.  Immutable after construction.
    """

    nodes: tuple[TemporalNode, ...]
    links: tuple[TemporalLink, ...]
    adjacency: Mapping[TemporalNode, tuple[int, ...]] = field(repr=False)
    total_weight: int = 0

    def __post_init__(self) -> None:
        if self.total_weight != sum(link.weight for link in self.links):
            raise ValueError("total_weight does not match the sum of link weights")

    @property
    def node_set(self) -> frozenset[TemporalNode]:
        return frozenset(self.nodes)

    @property
    def labels(self) -> tuple[str, ...]:
        """Physical node labels in first-appearance order."""
        seen: dict[str, None] = {}
        for tn in self.nodes:
            seen.setdefault(tn.node, None)
        return tuple(seen)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, TemporalGraph):
            return NotImplemented
        return (
            self.nodes == other.nodes
            and self.links == other.links
            and self.total_weight == other.total_weight
        )


@dataclass(frozen=True)
class PhysicalGraph:
    """Time-aggregated projection: edge weight counts raw links between the pair."""

    nodes: tuple[str, ...]
    edges: Mapping[tuple[str, str], int]

    @property
    def total_weight(self) -> int:
        return sum(self.edges.values())


def parse_links(lines: Iterable[str], mode: str = STRICT_CITATION) -> list[RawLink]:
    """Parse a link stream into the ordered raw-link multiset.

    Each non-comment line holds ``src_label src_time dst_label dst_time``.
    Duplicates are preserved.  ``strict_citation`` additionally requires
    the destination time not to exceed the source time.
    """
    if mode not in (STRICT_CITATION, PERMISSIVE):
        raise ValueError(f"unknown validation mode: {mode!r}")
    raw: list[RawLink] = []
    for lineno, line in enumerate(lines, start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        fields = stripped.split()
        if len(fields) != 4:
            raise LinkParseError(
                f"line {lineno}: expected 4 whitespace-separated fields, got {len(fields)}"
            )
        src_label, src_time_s, dst_label, dst_time_s = fields
        try:
            src_time = int(src_time_s)
            dst_time = int(dst_time_s)
        except ValueError:
            raise LinkParseError(f"line {lineno}: times must be integers") from None
        if src_time < 0 or dst_time < 0:
            raise LinkParseError(f"line {lineno}: times must be non-negative")
        if mode == STRICT_CITATION and dst_time > src_time:
            raise LinkValidationError(
                f"line {lineno}: target newer than source: "
                f"({src_label},{src_time}) -> ({dst_label},{dst_time})"
            )
        raw.append(((src_label, src_time), (dst_label, dst_time)))
    return raw


def parse_link_file(path: str | Path, mode: str = STRICT_CITATION) -> list[RawLink]:
    with open(path, encoding="utf-8") as handle:
        return parse_links(handle, mode=mode)


def format_link(link: RawLink) -> str:
    (src, ts), (dst, td) = link
    return f"{src} {ts} {dst} {td}"


def write_links(links: Iterable[RawLink], out: IO[str] | str | Path) -> None:
    """Write raw links in the four-field link file format, one per line."""
    if isinstance(out, (str, Path)):
        with open(out, "w", encoding="utf-8") as handle:
            write_links(links, handle)
        return
    for link in links:
        out.write(format_link(link) + "\n")


def build_temporal_graph(
    raw_links: Iterable[RawLink],
    isolated_nodes: Iterable[tuple[str, int]] = (),
) -> TemporalGraph:
    """Assemble the temporal graph from validated raw links.

    Vertices are the union of all link endpoints (plus any explicitly
    declared isolated nodes); repeated endpoint pairs aggregate into one
    link with multiplicity weight.  Orders follow first appearance, which
    keeps construction deterministic for a given input sequence.
    """
    node_order: dict[TemporalNode, None] = {}
    weights: dict[tuple[TemporalNode, TemporalNode], int] = {}
    total = 0
    for (src_label, src_time), (dst_label, dst_time) in raw_links:
        src = TemporalNode(src_label, src_time)
        dst = TemporalNode(dst_label, dst_time)
        node_order.setdefault(src, None)
        node_order.setdefault(dst, None)
        weights[(src, dst)] = weights.get((src, dst), 0) + 1
        total += 1
    for label, t in isolated_nodes:
        node_order.setdefault(TemporalNode(label, t), None)
    links = tuple(
        TemporalLink(src, dst, w) for (src, dst), w in weights.items()
    )
    adjacency: dict[TemporalNode, list[int]] = {tn: [] for tn in node_order}
    for idx, link in enumerate(links):
        adjacency[link.source].append(idx)
        if link.target != link.source:
            adjacency[link.target].append(idx)
    return TemporalGraph(
        nodes=tuple(node_order),
        links=links,
        adjacency={tn: tuple(idxs) for tn, idxs in adjacency.items()},
        total_weight=total,
    )


def project_physical(tg: TemporalGraph) -> PhysicalGraph:
    """Aggregate over the whole timescale into a directed physical graph."""
    edges: dict[tuple[str, str], int] = {}
    for link in tg.links:
        key = (link.source.node, link.target.node)
        edges[key] = edges.get(key, 0) + link.weight
    return PhysicalGraph(nodes=tg.labels, edges=edges)


def coarsen_time(tg: TemporalGraph, k: int) -> TemporalGraph:
    """Bin timesteps by floor(t / k), merging temporal nodes that collide.

    Link multiplicities add; links whose endpoints collapse onto the same
    (node, bin) become self-loops.  ``k = 1`` is the identity.
    """
    if k < 1:
        raise ValueError("coarsening factor k must be >= 1")
    if k == 1:
        return tg
    raw: list[RawLink] = []
    for link in tg.links:
        mapped = (
            (link.source.node, link.source.t // k),
            (link.target.node, link.target.t // k),
        )
        raw.extend([mapped] * link.weight)
    endpoint_nodes = {tn for link in tg.links for tn in (link.source, link.target)}
    isolated = [
        (tn.node, tn.t // k) for tn in tg.nodes if tn not in endpoint_nodes
    ]
    return build_temporal_graph(raw, isolated_nodes=isolated)
