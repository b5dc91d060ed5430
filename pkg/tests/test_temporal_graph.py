from __future__ import annotations

import io
import random

import pytest

from dyncomm import (
    LinkParseError,
    LinkValidationError,
    PERMISSIVE,
    STRICT_CITATION,
    TemporalNode,
    build_temporal_graph,
    coarsen_time,
    parse_links,
    project_physical,
    write_links,
)

from conftest import random_raw_links


def test_parse_empty_stream():
    assert parse_links([]) == []


def test_parse_two_links_preserves_order_and_duplicates():
    raw = parse_links(["A 2 B 1", "A 3 B 1"])
    assert raw == [(("A", 2), ("B", 1)), (("A", 3), ("B", 1))]
    dup = parse_links(["A 2 B 1", "A 2 B 1"])
    assert dup == [(("A", 2), ("B", 1))] * 2


def test_parse_skips_comments_and_blank_lines():
    raw = parse_links(["# header", "", "  ", "A 2 B 1"])
    assert raw == [(("A", 2), ("B", 1))]


def test_parse_strict_rejects_target_newer_than_source():
    with pytest.raises(LinkValidationError, match="line 1"):
        parse_links(["A 1 B 2"], mode=STRICT_CITATION)
    assert parse_links(["A 1 B 2"], mode=PERMISSIVE) == [(("A", 1), ("B", 2))]


def test_parse_malformed_lines_report_line_number():
    with pytest.raises(LinkParseError, match="line 2"):
        parse_links(["A 1 B 1", "A 1 B"])
    with pytest.raises(LinkParseError, match="line 1"):
        parse_links(["A x B 1"])
    with pytest.raises(LinkParseError, match="non-negative"):
        parse_links(["A -1 B -2"])


def test_parse_unknown_mode_rejected():
    with pytest.raises(ValueError, match="mode"):
        parse_links([], mode="lenient")


def test_build_counts_nodes_links_and_weight():
    tg = build_temporal_graph([(("A", 2), ("B", 1)), (("A", 3), ("B", 1))])
    assert set(tg.nodes) == {
        TemporalNode("A", 2),
        TemporalNode("A", 3),
        TemporalNode("B", 1),
    }
    assert len(tg.links) == 2
    assert tg.total_weight == 2


def test_build_aggregates_duplicate_links_into_weight():
    tg = build_temporal_graph([(("A", 2), ("B", 1))] * 2)
    assert len(tg.nodes) == 2
    assert len(tg.links) == 1
    assert tg.links[0].weight == 2
    assert tg.total_weight == 2


def test_build_four_node_citation_toy():
    # Four physical nodes with timestamped citations: one temporal node per
    # (letter, time) pair, one link per input row.
    rows = [
        (("A", 3), ("B", 1)),
        (("B", 2), ("C", 1)),
        (("C", 3), ("D", 2)),
        (("D", 4), ("A", 3)),
        (("A", 4), ("C", 1)),
    ]
    tg = build_temporal_graph(rows)
    assert len(tg.nodes) == len({(u, t) for row in rows for (u, t) in row})
    assert len(tg.links) == len(rows)
    assert tg.labels == ("A", "B", "C", "D")


def test_adjacency_indexes_incident_links():
    tg = build_temporal_graph([(("A", 2), ("B", 1)), (("A", 3), ("B", 1))])
    b1 = TemporalNode("B", 1)
    assert [tg.links[i] for i in tg.adjacency[b1]] == list(tg.links)


def test_project_physical_aggregates_over_time():
    tg = build_temporal_graph([(("A", 2), ("B", 1)), (("A", 3), ("B", 1))])
    pg = project_physical(tg)
    assert pg.edges == {("A", "B"): 2}
    assert pg.total_weight == 2


def test_project_physical_empty_graph():
    pg = project_physical(build_temporal_graph([]))
    assert pg.nodes == ()
    assert pg.edges == {}


def test_project_physical_self_citation():
    pg = project_physical(build_temporal_graph([(("A", 2), ("A", 1))]))
    assert pg.edges == {("A", "A"): 1}


def test_coarsen_identity_at_k_one():
    tg = build_temporal_graph([(("A", 2), ("B", 1)), (("A", 3), ("B", 1))])
    assert coarsen_time(tg, 1) == tg


def test_coarsen_merges_colliding_years():
    tg = build_temporal_graph([(("A", 1981), ("A", 1980))])
    merged = coarsen_time(tg, 2)
    assert set(merged.nodes) == {TemporalNode("A", 990)}
    assert merged.links[0].source == merged.links[0].target
    assert merged.total_weight == 1


def test_coarsen_collapses_opposed_links_onto_one_pair():
    # Permissive data: both links land on ((A,0),(B,0)) under k=4.
    tg = build_temporal_graph([(("A", 3), ("B", 2)), (("A", 2), ("B", 3))])
    merged = coarsen_time(tg, 4)
    assert set(merged.nodes) == {TemporalNode("A", 0), TemporalNode("B", 0)}
    assert len(merged.links) == 1
    assert merged.links[0].weight == 2


def test_coarsen_rejects_zero():
    tg = build_temporal_graph([(("A", 1), ("B", 1))])
    with pytest.raises(ValueError):
        coarsen_time(tg, 0)


def test_isolated_nodes_only_when_declared():
    tg = build_temporal_graph([(("A", 1), ("B", 1))], isolated_nodes=[("C", 5)])
    assert TemporalNode("C", 5) in tg.node_set
    assert tg.adjacency[TemporalNode("C", 5)] == ()


def test_round_trip_and_counting_invariants():
    rng = random.Random(404)
    for trial in range(30):
        raw, _ = random_raw_links(rng, n_cells=rng.randint(2, 12), n_links=rng.randint(1, 40))
        tg = build_temporal_graph(raw)
        assert tg.total_weight == len(raw)
        assert len(tg.nodes) <= 2 * len(raw)
        buffer = io.StringIO()
        write_links(raw, buffer)
        reparsed = parse_links(buffer.getvalue().splitlines(), mode=PERMISSIVE)
        assert build_temporal_graph(reparsed) == tg


def test_coarsening_never_changes_physical_projection():
    rng = random.Random(405)
    for trial in range(20):
        raw, _ = random_raw_links(rng, n_cells=rng.randint(2, 10), n_links=rng.randint(1, 30), t_span=9)
        tg = build_temporal_graph(raw)
        before = project_physical(tg)
        for k in (1, 2, 3, 5):
            after = project_physical(coarsen_time(tg, k))
            assert after.edges == before.edges
            assert after.nodes == before.nodes
