import json
import random
from itertools import combinations

import pytest
from hypothesis import given

import helpers
from netident import (
    EdgeStatus,
    Network,
    NetworkError,
    NodeStatus,
    bound_checks,
    check_edge,
    check_node,
    check_subset,
    full_report,
    measured_cover,
    min_measurement_set,
    verify_bottleneck,
    verify_path_certificate,
)


class TestNodeVerdicts:
    def test_fanout_passes_with_both_children(self, ffl3):
        v = check_node(ffl3, "1")
        assert v.status is NodeStatus.ALL_IDENTIFIABLE and v.passes
        assert (v.out_neighbors, v.d_plus) == (("2", "3"), 2)
        assert v.certificate.paths == (("2",), ("3",))

    def test_fanout_fails_with_one_probe(self, ffl3):
        v = check_node(ffl3.with_measured(["2"]), "1")
        assert v.status is NodeStatus.NOT_ALL_IDENTIFIABLE and not v.passes
        assert v.certificate.nodes == ("2",)

    def test_sink_has_no_out_edges(self, ffl3):
        v = check_node(ffl3, "2")
        assert v.status is NodeStatus.NO_OUT_EDGES and v.passes
        assert v.d_plus == 0 and v.certificate.paths == ()

    def test_empty_measured_set_fails(self, ffl3):
        v = check_node(ffl3.with_measured([]), "1")
        assert v.status is NodeStatus.NOT_ALL_IDENTIFIABLE
        assert v.certificate.nodes == ()

    def test_cycle_probe_placement(self, cycle_source3):
        for probe, ok in [("1", True), ("2", False), ("3", True)]:
            g = cycle_source3.with_measured([probe])
            assert all(check_node(g, v).passes for v in g.labels) == ok

    def test_triad_probe_pairs(self, triad5):
        assert all(check_node(triad5, v).passes for v in triad5.labels)
        g13 = triad5.with_measured(["1", "3"])
        assert all(check_node(g13, v).passes for v in g13.labels)
        g23 = triad5.with_measured(["2", "3"])
        v = check_node(g23, "3")
        assert not v.passes and v.certificate.nodes == ("2",)

    def test_branch_fanout_certificate(self, branch10):
        v = check_node(branch10, "i")
        assert v.passes and v.certificate.paths == (
            ("1", "5", "7"),
            ("2", "4", "8"),
            ("3", "6", "9"),
        )

    @given(helpers.networks(require_measured=True, require_edges=True))
    def test_matches_brute_force(self, g):
        for node in g.labels:
            d = g.out_degree(node)
            if d == 0:
                continue
            best = helpers.max_disjoint_brute(
                g, g.out_neighbors(node), g.measured_labels
            )
            assert check_node(g, node).passes == (best == d)

    @given(helpers.networks(require_measured=True, require_edges=True))
    def test_certificates_verify(self, g):
        for node in g.labels:
            v = check_node(g, node)
            if v.d_plus == 0:
                continue
            if v.passes:
                assert v.certificate.count == v.d_plus
                assert verify_path_certificate(
                    g, v.out_neighbors, g.measured_labels, v.certificate
                )
            else:
                assert v.certificate.b < v.d_plus
                assert verify_bottleneck(
                    g, v.out_neighbors, g.measured_labels, v.certificate
                )

    @given(helpers.networks(require_edges=True))
    def test_more_probes_never_hurt(self, g):
        grown = g.with_measured(set(g.measured_labels) | {g.labels[0]})
        for node in g.labels:
            if check_node(g, node).passes:
                assert check_node(grown, node).passes

    @given(helpers.networks(require_edges=True))
    def test_measuring_everything_suffices(self, g):
        g_all = g.with_measured(g.labels)
        assert all(check_node(g_all, v).passes for v in g.labels)


class TestSubsetCondition:
    def test_requires_out_neighbor(self, ffl3):
        with pytest.raises(NetworkError, match="not an out-neighbor"):
            check_subset(ffl3, "1", ("1",))

    def test_empty_subset(self, ffl3):
        assert check_subset(ffl3, "1", ()) == (True, ())

    def test_sibling_shadowing(self, ffl3):
        # with only node 2 probed, both children of 1 shadow each other
        g = ffl3.with_measured(["2"])
        assert check_subset(g, "1", ("2",)) == (False, ())
        assert check_subset(g, "1", ("3",)) == (False, ())

    def test_clean_endpoint(self, ffl3):
        ok, ends = check_subset(ffl3, "1", ("3",))
        assert ok and ends == ("3",)

    @given(helpers.networks(require_measured=True, require_edges=True))
    def test_full_subset_matches_node_verdict(self, g):
        for node in g.labels:
            outs = g.out_neighbors(node)
            if not outs:
                continue
            ok, ends = check_subset(g, node, outs)
            assert ok == check_node(g, node).passes
            if ok:
                assert len(ends) == len(outs)
                assert set(ends) <= set(g.measured_labels)


class TestMeasuredCover:
    def test_requires_measured_node(self, ffl3):
        with pytest.raises(NetworkError, match="not measured"):
            measured_cover(ffl3, "1")

    def test_fanout_covers(self, ffl3):
        assert measured_cover(ffl3, "2") == (("3", "2"),)
        assert measured_cover(ffl3, "3") == (("1", "3"),)

    def test_branch_chain(self, branch10):
        assert measured_cover(branch10, "7") == (("i", "1"), ("1", "5"), ("5", "7"))

    @given(helpers.networks(require_measured=True))
    def test_matches_walk_enumeration(self, g):
        for m in g.measured_labels:
            expected = set()
            for i in g.labels:
                if i != m and helpers.walk_unique(g, i, m):
                    (path,) = helpers.simple_paths(g, i, m)
                    expected.update(zip(path, path[1:]))
            assert set(measured_cover(g, m)) == expected


class TestEdgeVerdicts:
    def test_requires_edge(self, ffl3):
        with pytest.raises(NetworkError, match="no edge"):
            check_edge(ffl3, "2", "1")

    def test_passing_column_marks_all_edges(self, ffl3):
        for a, b in ffl3.edge_labels:
            v = check_edge(ffl3, a, b)
            assert v.status is EdgeStatus.IDENTIFIABLE and v.basis == "node"

    def test_single_probe_partial_column(self, ffl3):
        g = ffl3.with_measured(["2"])
        assert check_edge(g, "3", "2").status is EdgeStatus.IDENTIFIABLE
        assert check_edge(g, "1", "2").status is EdgeStatus.UNKNOWN
        assert check_edge(g, "1", "3").status is EdgeStatus.UNKNOWN
        assert check_edge(g, "1", "2").basis is None

    def test_subset_rescues_edge(self):
        # 1 fans out to 2 and 3; only 3's side has a private probe
        g = Network.build(
            ["1", "2", "3", "m"],
            [("1", "2"), ("1", "3"), ("3", "m")],
            ["m"],
        )
        assert check_node(g, "1").passes is False
        v = check_edge(g, "1", "3")
        assert v.status is EdgeStatus.IDENTIFIABLE and v.basis == "subset"
        assert check_edge(g, "1", "2").status is EdgeStatus.UNKNOWN

    def test_unmeasured_cycle_is_unknown(self):
        g = Network.build("ab", [("a", "b"), ("b", "a")], [])
        for a, b in g.edge_labels:
            assert check_edge(g, a, b).status is EdgeStatus.UNKNOWN

    def test_measured_cycle_identifiable(self):
        g = helpers.lone_cycle(4, measured_at=2)
        for a, b in g.edge_labels:
            assert check_edge(g, a, b).status is EdgeStatus.IDENTIFIABLE

    @given(helpers.networks())
    def test_graph_tests_never_claim_negatives(self, g):
        for e in full_report(g).edges:
            assert e.status in (EdgeStatus.IDENTIFIABLE, EdgeStatus.UNKNOWN)

    @given(helpers.networks(require_measured=True))
    def test_unique_walk_cover_implies_subset(self, g):
        # the unique-walk rule is a special case of the subset condition
        for m in g.measured_labels:
            for a, b in measured_cover(g, m):
                assert check_subset(g, a, (b,))[0]

    @given(helpers.networks(require_measured=True))
    def test_measured_cycle_rule_implies_subset(self, g):
        from netident.network import isolated_cycles

        measured = set(g.measured_labels)
        for cyc in isolated_cycles(g):
            if not measured.intersection(cyc):
                continue
            for a, b in zip(cyc, cyc[1:] + cyc[:1]):
                assert check_subset(g, a, (b,))[0]


class TestBounds:
    def test_fanout_bounds(self, ffl3):
        b = bound_checks(ffl3)
        assert b.all_satisfied
        assert (b.counting_min_measured, b.extra_measured) == (2, 1)
        assert b.unmeasured_sinks == ()

    def test_unmeasured_sink_detected(self, ffl3):
        b = bound_checks(ffl3.with_measured(["3"]))
        assert not b.sinks_satisfied and b.unmeasured_sinks == ("2",)
        assert not b.all_satisfied

    def test_out_degree_shortfall(self, ffl3):
        b = bound_checks(ffl3.with_measured(["2"]))
        assert not b.out_degree_satisfied
        assert not b.counting_satisfied  # (0 + 1) * 2 < 3 edges

    def test_edgeless_network(self):
        b = bound_checks(Network.build("ab", [], []))
        assert b.all_satisfied and b.counting_min_measured == 0

    def test_isolated_node_not_forced(self):
        g = Network.build("abc", [("a", "b")], ["b"])
        b = bound_checks(g)
        assert b.sinks_satisfied and b.unmeasured_sinks == ()

    def test_dict_round_trip(self, ffl3):
        d = bound_checks(ffl3).to_dict()
        assert d["all_satisfied"] is True
        json.dumps(d)

    @given(helpers.networks())
    def test_necessary_for_full_identifiability(self, g):
        report = full_report(g)
        if report.fully_identifiable:
            assert report.bounds.all_satisfied


class TestFullReport:
    def test_figures(self, ffl3, cycle_source3, triad5, branch10):
        assert full_report(ffl3).fully_identifiable
        assert full_report(cycle_source3).fully_identifiable
        assert full_report(triad5).fully_identifiable
        assert full_report(branch10).fully_identifiable
        assert not full_report(ffl3.with_measured(["2"])).fully_identifiable
        assert not full_report(cycle_source3.with_measured(["2"])).fully_identifiable
        assert not full_report(triad5.with_measured(["2", "3"])).fully_identifiable

    def test_full_identifiability_marks_every_edge(self, branch10):
        report = full_report(branch10)
        assert all(e.status is EdgeStatus.IDENTIFIABLE for e in report.edges)
        assert [v.status for v in report.nodes].count(NodeStatus.NO_OUT_EDGES) == 3

    def test_multitree_shortcut(self, branch10, ffl3):
        s = full_report(branch10).shortcuts
        assert s.multitree and s.multitree_sinks_measured
        assert not full_report(ffl3).shortcuts.multitree

    def test_cycle_notes(self, cycle_source3):
        (note,) = full_report(cycle_source3).shortcuts.cycles
        assert note.nodes == ("1", "3") and note.has_measured

    def test_to_dict_json_ready(self, triad5):
        blob = json.dumps(full_report(triad5).to_dict(explain=True), indent=2)
        doc = json.loads(blob)
        assert doc["fully_identifiable"] is True
        assert doc["nodes"][0]["certificate"]["type"] == "disjoint-paths"

    @given(helpers.networks())
    def test_consistent_with_node_checks(self, g):
        report = full_report(g)
        assert report.fully_identifiable == all(
            check_node(g, v).passes for v in g.labels
        )

    @given(helpers.networks())
    def test_multitree_shortcut_is_sufficient(self, g):
        report = full_report(g)
        if report.shortcuts.multitree_sinks_measured:
            assert report.fully_identifiable


class TestMinMeasurementSet:
    def test_figures(self, ffl3, cycle_source3, triad5, branch10):
        assert min_measurement_set(ffl3) == ("2", "3")
        assert min_measurement_set(cycle_source3) == ("1",)
        assert min_measurement_set(triad5) == ("1", "2")
        assert min_measurement_set(branch10) == ("7", "8", "9")

    def test_greedy_on_figures(self, ffl3, cycle_source3, branch10):
        assert min_measurement_set(ffl3, mode="greedy") == ("2", "3")
        assert min_measurement_set(cycle_source3, mode="greedy") == ("1",)
        assert min_measurement_set(branch10, mode="greedy") == ("7", "8", "9")

    def test_mode_validation(self, ffl3):
        with pytest.raises(NetworkError, match="unknown search mode"):
            min_measurement_set(ffl3, mode="fast")

    def test_exact_size_guard(self):
        g = Network.build([f"v{i}" for i in range(21)], [], [])
        with pytest.raises(NetworkError, match="at most 20 nodes"):
            min_measurement_set(g)

    def test_edgeless_needs_nothing(self):
        assert min_measurement_set(Network.build("abc", [], [])) == ()

    def test_isolated_node_not_forced(self):
        g = Network.build("abc", [("a", "b")], [])
        assert min_measurement_set(g) == ("b",)

    def test_exact_is_minimal(self):
        rnd = random.Random(2024)
        for _ in range(40):
            g = helpers.random_network(rnd, max_nodes=5)
            best = min_measurement_set(g)
            assert full_report(g.with_measured(best)).fully_identifiable
            smaller_works = any(
                full_report(g.with_measured(cand)).fully_identifiable
                for k in range(len(best))
                for cand in combinations(sorted(g.labels), k)
            )
            assert not smaller_works

    @given(helpers.networks())
    def test_greedy_is_sound_and_no_better_than_exact(self, g):
        exact = min_measurement_set(g, mode="exact")
        greedy = min_measurement_set(g, mode="greedy")
        assert full_report(g.with_measured(greedy)).fully_identifiable
        assert len(exact) <= len(greedy)
