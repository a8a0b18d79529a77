import random

import pytest

from gramsim import (Digram, bare, compress, compression_ratio, decompress,
                     digram_census, format_grammar, graphs_isomorphic_under_map,
                     initial_work_graph, load_graph, parse_suffix,
                     replace_digram, size_metrics)

from .conftest import random_soup, seeded_case


def census_by_text(wg):
    return {(str(d.source_path), str(d.target_path)): n
            for d, n in digram_census(wg).items()}


def assert_round_trip(graph):
    """Compress, decompress, and check isomorphism under the recorded maps.

    The decompressed graph is canonically numbered, so the original ids are
    recovered by composing the two path maps."""
    gg, pm_c = compress(graph)
    assert gg.validate() == []
    out, pm_d = decompress(gg)
    mapping = {nid: pm_c.node_for(path) for path, nid in pm_d}
    assert graphs_isomorphic_under_map(out, graph, mapping)


def test_initial_census(fig1_graph):
    wg = initial_work_graph(fig1_graph)
    assert census_by_text(wg) == {("c", "d"): 4, ("d", "c"): 2, ("b", "c"): 1}
    assert wg.size() == 17


def test_census_counts_node_disjoint_occurrences():
    # a chain a->a->a has two (a,a) edges but they share the middle node
    g = load_graph("1 a\n2 a\n3 a\n1 2\n2 3\n")
    wg = initial_work_graph(g)
    assert census_by_text(wg) == {("a", "a"): 1}


def test_self_loops_are_not_digrams():
    g = load_graph("1 a\n1 1\n")
    assert digram_census(initial_work_graph(g)) == {}


def test_replace_digram_step(fig1_graph):
    wg = initial_work_graph(fig1_graph)
    wg2 = replace_digram(wg, Digram(bare("c"), bare("d")), "X")
    assert census_by_text(wg2) == {("X/2:d", "X/1:c"): 2, ("b", "X/1:c"): 1}
    # the original work graph is untouched
    assert census_by_text(wg) == {("c", "d"): 4, ("d", "c"): 2, ("b", "c"): 1}


def test_replace_digram_rejects_bad_inputs(fig1_graph):
    wg = initial_work_graph(fig1_graph)
    with pytest.raises(ValueError):
        replace_digram(wg, Digram(bare("b"), bare("c")), "X")   # count 1
    with pytest.raises(ValueError):
        replace_digram(wg, Digram(bare("c"), bare("d")), "b")   # name in use
    wg2 = replace_digram(wg, Digram(bare("c"), bare("d")), "X")
    with pytest.raises(ValueError):
        replace_digram(wg2, Digram(parse_suffix("X/2:d"), parse_suffix("X/1:c")), "X")


def test_compress_fig1_sizes(fig1_graph):
    gg, _ = compress(fig1_graph)
    assert size_metrics(fig1_graph) == 17
    assert size_metrics(gg) == 11
    assert compression_ratio(fig1_graph, gg) == pytest.approx(11 / 17)
    # two levels of pairing: c-d chunks, then chunk pairs
    assert gg.rules["R1"].body == ((1, "c"), (2, "d"))
    assert gg.rules["R2"].body == ((1, "R1"), (2, "R1"))
    assert gg.rules[gg.start].body == ((1, "b"), (2, "R2"), (3, "R2"))


def test_compress_fig1_round_trips(fig1_graph):
    assert_round_trip(fig1_graph)


def test_compress_is_deterministic(fig1_graph):
    a, _ = compress(fig1_graph)
    b, _ = compress(fig1_graph)
    assert format_grammar(a) == format_grammar(b)


def test_compress_rejects_min_count_below_two(fig1_graph):
    with pytest.raises(ValueError):
        compress(fig1_graph, min_count=1)


def test_compress_high_min_count_keeps_everything(fig1_graph):
    gg, _ = compress(fig1_graph, min_count=5)
    assert not set(gg.rules) - {gg.start}
    assert size_metrics(gg) == size_metrics(fig1_graph)
    assert_round_trip(fig1_graph)


def test_compress_rejects_empty_graph():
    from gramsim import LabeledGraph
    with pytest.raises(ValueError):
        compress(LabeledGraph([], set()))


def test_start_name_avoids_terminal_collision():
    g = load_graph("1 S\n2 S\n1 2\n")
    gg, _ = compress(g)
    assert gg.start not in gg.terminals
    assert_round_trip(g)


def test_self_loop_round_trip():
    assert_round_trip(load_graph("1 a\n1 1\n"))
    assert_round_trip(load_graph("1 a\n2 a\n3 a\n4 a\n1 1\n1 2\n2 1\n3 4\n"))


def test_repeated_chunks_compress_below_unity():
    # ten disjoint a->b edges: one rule, ten bodies collapse to ten leaves
    lines = [f"{i} {'a' if i % 2 else 'b'}" for i in range(1, 21)]
    lines += [f"{i} {i + 1}" for i in range(1, 21, 2)]
    g = load_graph("\n".join(lines) + "\n")
    gg, _ = compress(g)
    assert compression_ratio(g, gg) < 1.0
    assert_round_trip(g)


def test_random_round_trips():
    rng = random.Random(20240817)
    for _ in range(30):
        assert_round_trip(random_soup(rng))
    for seed in range(12):
        graph, _ = seeded_case(seed)
        assert_round_trip(graph)
