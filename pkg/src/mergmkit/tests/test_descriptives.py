import os
import sys
import unittest

import numpy as np
from hypothesis import given, settings
from hypothesis import strategies as st

sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), '..', '..')))

from mergmkit.core.descriptives import (
    MEMBERS,
    binary_share,
    blau_index,
    degree_centralization,
    describe,
    describe_group,
)
from mergmkit.core.errors import IngestionError
from mergmkit.core.models import DescriptiveOptions, TieLevel
from mergmkit.core.network import MultilevelNetwork, random_network
from mergmkit.core.report import descriptive_table
from mergmkit.tests.support import make_network


class TestMeasures(unittest.TestCase):

    def test_star_centralization(self):
        self.assertAlmostEqual(degree_centralization(np.array([4, 1, 1, 1, 1])), 1.0)

    def test_complete_graph(self):
        net = make_network(3, 0, a=[(0, 1), (0, 2), (1, 2)])
        values = describe_group(net)
        self.assertEqual(values["density_A"], 1.0)
        self.assertEqual(values["avg_degree_A"], 2.0)
        self.assertEqual(values["centralization_A"], 0.0)

    def test_centralization_needs_three_nodes(self):
        self.assertIsNone(degree_centralization(np.array([1, 1])))
        self.assertIsNone(describe_group(make_network(2, 2))["centralization_B"])

    def test_blau_index(self):
        self.assertEqual(blau_index(["music"] * 4), 0.0)
        self.assertAlmostEqual(blau_index(["music", "text"]), 1.0)
        self.assertAlmostEqual(blau_index(["music", "text"], normalized=False), 0.5)
        self.assertAlmostEqual(blau_index(["music", "text", "visual"]), 1.0)

    def test_binary_share(self):
        self.assertAlmostEqual(binary_share(["F", "male", "female", "m"], ["female", "f"]), 0.5)
        self.assertEqual(binary_share([], ["yes"]), 0.0)

    def test_usage_degrees(self):
        net = make_network(2, 4, x=[(0, 0), (0, 1), (1, 1)])
        values = describe_group(net)
        self.assertAlmostEqual(values["density_X"], 3 / 8)
        self.assertAlmostEqual(values["avg_degree_XA"], 1.5)
        self.assertAlmostEqual(values["avg_degree_XB"], 0.75)


class TestDescribe(unittest.TestCase):
    """Per-group values and their aggregates."""

    def setUp(self):
        attributes = {
            "gender": ["female", "male", "female", "female", "female"],
            "genre": ["music", "music", "text", "visual", "music"],
        }
        net = make_network(
            5, 3,
            a=[(0, 1), (0, 2), (3, 4)],
            x=[(0, 0), (3, 2), (4, 2)],
            actor_groups=["1", "1", "1", "2", "2"],
            object_groups=["1", "1", "2"],
            attributes=attributes,
        )
        self.report = describe(net.split_groups())

    def aggregate(self, section, metric):
        return next(r for r in self.report.aggregates if r.section == section and r.metric == metric)

    def test_groups(self):
        self.assertEqual([g.group for g in self.report.groups], ["1", "2"])
        first, second = self.report.groups
        self.assertAlmostEqual(first.values["density_A"], 2 / 3)
        self.assertEqual(second.values["density_A"], 1.0)
        self.assertIsNone(second.values["centralization_A"])

    def test_aggregates(self):
        members = self.aggregate("Social", "Group members")
        self.assertEqual((members.average, members.minimum, members.maximum, members.total), (2.5, 2.0, 3.0, 5.0))
        central = self.aggregate("Social", "Degree centralization")
        self.assertEqual(central.average, central.minimum)
        self.assertIsNone(self.aggregate("Social", "Density").total)

    def test_attribute_rows(self):
        share = self.aggregate(MEMBERS, "Share female")
        self.assertAlmostEqual(share.minimum, 2 / 3)
        self.assertEqual(share.maximum, 1.0)
        diversity = self.aggregate(MEMBERS, "Genre diversity")
        self.assertEqual(diversity.maximum, 1.0)

    def test_raw_blau_option(self):
        net = make_network(2, 0, attributes={"genre": ["music", "text"]})
        values = describe_group(net, DescriptiveOptions(raw_blau=True))
        self.assertAlmostEqual(values["diversity_genre"], 0.5)
        self.assertNotIn("share_gender", values)

    def test_table(self):
        table = descriptive_table(self.report)
        self.assertEqual(table.columns, ["Section", "Metric", "1", "2", "Average", "Min", "Max", "Total"])
        self.assertEqual(table.rows[0][:4], ["Social", "Group members", 3.0, 2.0])
        self.assertEqual(len(table.rows), len(self.report.metrics))

    def test_needs_a_group(self):
        with self.assertRaises(IngestionError):
            describe({})


GROWING = {
    TieLevel.A: ("density_A", "avg_degree_A"),
    TieLevel.B: ("density_B", "avg_degree_B"),
    TieLevel.X: ("density_X", "avg_degree_XA", "avg_degree_XB"),
}


class TestProperties(unittest.TestCase):

    @settings(max_examples=40, deadline=None)
    @given(st.integers(min_value=0, max_value=2 ** 31), st.sampled_from(list(TieLevel)))
    def test_adding_a_tie_never_lowers_density(self, seed, level):
        net = random_network(6, 5, seed=seed)
        absent = [(int(i), int(j)) for i, j in net.toggleable_dyads(level) if not net.has_tie(level, int(i), int(j))]
        if not absent:
            return
        before = describe_group(net)
        grown = net.copy()
        grown.flip(level, *absent[0])
        after = describe_group(grown)
        for key in GROWING[level]:
            self.assertGreaterEqual(after[key], before[key], key)

    @settings(max_examples=40, deadline=None)
    @given(st.integers(min_value=0, max_value=2 ** 31), st.permutations(["music", "visual", "text"]))
    def test_diversity_ignores_genre_names(self, seed, renamed):
        net = random_network(8, 3, seed=seed)
        mapping = dict(zip(["music", "visual", "text"], renamed))
        attributes = {**net.attributes, "genre": [mapping[v] for v in net.attributes["genre"]]}
        other = MultilevelNetwork(
            net.actor_labels, net.object_labels, net.actor_groups, net.object_groups,
            attributes=attributes, A=net.A, B=net.B, X=net.X,
        )
        self.assertAlmostEqual(describe_group(net)["diversity_genre"], describe_group(other)["diversity_genre"])

    @settings(max_examples=30, deadline=None)
    @given(st.integers(min_value=0, max_value=2 ** 31), st.integers(min_value=1, max_value=4))
    def test_aggregates_bracket_the_average(self, seed, n_groups):
        report = describe(random_network(12, 8, n_groups=n_groups, seed=seed).split_groups())
        for row in report.aggregates:
            if row.average is None:
                continue
            self.assertLessEqual(row.minimum, row.average + 1e-12, row.metric)
            self.assertLessEqual(row.average, row.maximum + 1e-12, row.metric)



if __name__ == '__main__':
    unittest.main()
