import os
import sys
import unittest

sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), '..', '..')))

from mergmkit.core.errors import (
    DyadRangeError,
    LevelMismatchError,
    MissingAttributeError,
    SelfTieError,
    StructuralZeroError,
)
from mergmkit.core.models import DyadRef, EdgeRecord, NodeRecord, TieLevel
from mergmkit.core.network import (
    apply_toggle,
    build_network,
    conform_waves,
    filter_min_usage,
    lagged_network,
    random_network,
)
from mergmkit.tests.support import make_network


def actor(node_id, group="1", **attributes):
    return NodeRecord(id=node_id, level="actor", group=group, attributes=attributes)


def obj(node_id, group="1"):
    return NodeRecord(id=node_id, level="object", group=group)


def edge(level, source, target):
    return EdgeRecord(level=level, source=source, target=target)


class TestBuildNetwork(unittest.TestCase):
    """Construction from node and edge tables."""

    def test_empty_tables(self):
        net = build_network([], [])
        self.assertEqual(net.n_actors, 0)
        self.assertEqual(net.n_objects, 0)
        for level in TieLevel:
            self.assertEqual(net.edge_count(level), 0)

    def test_toggleable_dyad_counts(self):
        net = build_network([actor("a1"), actor("a2"), actor("a3"), obj("o1"), obj("o2")], [])
        self.assertEqual(net.n_toggleable(TieLevel.A), 3)
        self.assertEqual(net.n_toggleable(TieLevel.B), 1)
        self.assertEqual(net.n_toggleable(TieLevel.X), 6)

    def test_self_tie_rejected(self):
        with self.assertRaises(SelfTieError):
            build_network([actor("a1"), actor("a2")], [edge("A", "a1", "a1")])

    def test_duplicate_edges_collapse(self):
        net = build_network(
            [actor("a1"), actor("a2")],
            [edge("A", "a1", "a2"), edge("A", "a2", "a1")],
        )
        self.assertEqual(net.edge_count(TieLevel.A), 1)
        self.assertEqual(net.duplicates_collapsed, 1)

    def test_usage_tie_in_either_direction(self):
        net = build_network([actor("a1"), obj("o1")], [edge("X", "o1", "a1")])
        self.assertTrue(net.has_tie(TieLevel.X, 0, 0))

    def test_level_mismatch(self):
        with self.assertRaises(LevelMismatchError):
            build_network([actor("a1"), obj("o1")], [edge("A", "a1", "o1")])

    def test_tie_between_groups_rejected(self):
        with self.assertRaises(StructuralZeroError):
            build_network([actor("a1", "1"), actor("a2", "2")], [edge("A", "a1", "a2")])

    def test_numeric_ids_sort_numerically(self):
        net = build_network([actor("10"), actor("9"), actor("2")], [])
        self.assertEqual(net.actor_labels, ["2", "9", "10"])

    def test_missing_attribute_value(self):
        with self.assertRaises(MissingAttributeError):
            build_network([actor("a1", gender="female"), actor("a2", gender="")], [])


class TestToggle(unittest.TestCase):
    """In-place and copying toggles."""

    def setUp(self):
        self.net = make_network(3, 2, actor_groups=["1", "1", "2"], object_groups=["1", "2"])

    def test_toggle_adds_tie(self):
        self.assertEqual(self.net.toggle(DyadRef.of(TieLevel.A, 0, 1)), 1)
        self.assertEqual(self.net.edge_count(TieLevel.A), 1)
        self.assertEqual(list(self.net.deg_a), [1, 1, 0])

    def test_toggle_twice_restores(self):
        original = self.net.copy()
        dyad = DyadRef.of(TieLevel.X, 0, 0)
        self.net.toggle(dyad)
        self.net.toggle(dyad)
        self.assertEqual(self.net, original)

    def test_structural_zero(self):
        with self.assertRaises(StructuralZeroError):
            self.net.toggle(DyadRef.of(TieLevel.A, 0, 2))
        with self.assertRaises(StructuralZeroError):
            self.net.toggle(DyadRef.of(TieLevel.X, 2, 0))

    def test_out_of_range(self):
        with self.assertRaises(DyadRangeError):
            self.net.toggle(DyadRef.of(TieLevel.B, 0, 5))

    def test_dyad_canonical_order(self):
        dyad = DyadRef.of(TieLevel.A, 2, 0)
        self.assertEqual((dyad.source, dyad.target), (0, 2))

    def test_apply_toggle_leaves_input(self):
        toggled = apply_toggle(self.net, DyadRef.of(TieLevel.A, 0, 1))
        self.assertEqual(self.net.edge_count(TieLevel.A), 0)
        self.assertEqual(toggled.edge_count(TieLevel.A), 1)


class TestWaves(unittest.TestCase):
    """Two-wave conformance and the lagged design."""

    def test_conform_keeps_common_nodes(self):
        wave1 = build_network(
            [actor("a"), actor("b"), actor("c")],
            [edge("A", "a", "b"), edge("A", "b", "c")],
        )
        wave2 = build_network([actor("b"), actor("c"), actor("d")], [edge("A", "c", "d")])
        out1, out2 = conform_waves(wave1, wave2)
        self.assertEqual(out1.actor_labels, ["b", "c"])
        self.assertEqual(out2.actor_labels, ["b", "c"])
        self.assertEqual(out1.edge_count(TieLevel.A), 1)
        self.assertEqual(out2.edge_count(TieLevel.A), 0)

    def test_conform_identity(self):
        wave = make_network(3, 2, a=[(0, 1)], x=[(2, 1)])
        out1, out2 = conform_waves(wave, wave.copy())
        self.assertEqual(out1, wave)
        self.assertEqual(out2, wave)

    def test_conform_with_empty_wave(self):
        out1, out2 = conform_waves(make_network(3, 2, a=[(0, 1)]), build_network([], []))
        self.assertEqual(out1.n_actors + out1.n_objects, 0)
        self.assertEqual(out2.n_actors + out2.n_objects, 0)

    def test_lagged_network(self):
        wave1 = make_network(3, 2, a=[(0, 1)], x=[(0, 0)])
        wave2 = make_network(3, 2, a=[(1, 2)], b=[(0, 1)], x=[(2, 1)])
        combined, free = lagged_network(wave1, wave2)
        self.assertEqual(free, [TieLevel.B, TieLevel.X])
        self.assertTrue(combined.has_tie(TieLevel.A, 0, 1))
        self.assertFalse(combined.has_tie(TieLevel.A, 1, 2))
        self.assertTrue(combined.has_tie(TieLevel.X, 2, 1))
        self.assertFalse(combined.has_tie(TieLevel.X, 0, 0))
        self.assertEqual(list(combined.deg_a), [1, 1, 0])


class TestDerivedNetworks(unittest.TestCase):

    def test_min_usage_filter(self):
        net = make_network(3, 3, b=[(0, 1)], x=[(0, 0), (1, 0), (2, 1)])
        filtered, dropped = filter_min_usage(net, 2)
        self.assertEqual(dropped, 2)
        self.assertEqual(filtered.object_labels, ["o0"])
        self.assertEqual(filtered.edge_count(TieLevel.X), 2)
        self.assertEqual(filtered.edge_count(TieLevel.B), 0)

    def test_split_groups(self):
        net = make_network(
            4, 2, a=[(0, 1), (2, 3)], x=[(3, 1)],
            actor_groups=["1", "1", "2", "2"], object_groups=["1", "2"],
        )
        parts = net.split_groups()
        self.assertEqual(list(parts), ["1", "2"])
        self.assertEqual(parts["2"].actor_labels, ["a2", "a3"])
        self.assertEqual(parts["2"].edge_count(TieLevel.X), 1)

    def test_random_network_respects_groups(self):
        net = random_network(8, 6, n_groups=2, density={TieLevel.A: 1.0, TieLevel.B: 1.0, TieLevel.X: 1.0}, seed=3)
        cross_a = net.actor_group_codes[:, None] != net.actor_group_codes[None, :]
        cross_x = net.actor_group_codes[:, None] != net.object_group_codes[None, :]
        self.assertFalse(net.A[cross_a].any())
        self.assertFalse(net.X[cross_x].any())
        self.assertEqual(net.edge_count(TieLevel.A), net.n_toggleable(TieLevel.A))

    def test_random_network_is_seeded(self):
        self.assertEqual(random_network(6, 4, seed=11), random_network(6, 4, seed=11))


if __name__ == '__main__':
    unittest.main()
