import math
import os
import sys
import unittest
from types import SimpleNamespace
from unittest import mock

import numpy as np

sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), '..', '..')))

from mergmkit.core.enumeration import MAX_FREE_DYADS, enumerate_state_space, exact_enumerate
from mergmkit.core.errors import StateSpaceTooLargeError
from mergmkit.core.models import ChainConfig, TieLevel
from mergmkit.core.sampler import simulate_sample
from mergmkit.tests.support import make_network, model_of


class TestExactEnumeration(unittest.TestCase):
    """Partition functions and expectations on tiny networks."""

    def test_single_dyad(self):
        result = exact_enumerate(make_network(2, 0), model_of("EdgeA"), [0.0])
        self.assertEqual(result.n_states, 2)
        self.assertAlmostEqual(result.partition, 2.0)
        self.assertAlmostEqual(result.expectation[0], 0.5)

    def test_triangle_weight(self):
        result = exact_enumerate(make_network(3, 0), model_of("EdgeA", "TriangleA"), [0.0, math.log(2.0)])
        self.assertEqual(result.n_states, 8)
        self.assertAlmostEqual(result.partition, 9.0)
        self.assertAlmostEqual(result.expectation[1], 2.0 / 9.0)
        self.assertAlmostEqual(result.expectation[0], (0 + 3 * 1 + 3 * 2 + 2 * 3) / 9.0)

    def test_all_levels_free(self):
        model = model_of("EdgeA", "EdgeB", "XEdge", free_levels=[TieLevel.A, TieLevel.B, TieLevel.X])
        result = exact_enumerate(make_network(3, 2), model, [0.0, 0.0, 0.0])
        self.assertEqual(result.n_states, 1024)
        np.testing.assert_allclose(result.expectation, [1.5, 0.5, 3.0])

    def test_fixed_level_kept_from_template(self):
        model = model_of("Star2AX", free_levels=[TieLevel.X])
        tied = exact_enumerate(make_network(2, 1, a=[(0, 1)]), model, [0.0])
        untied = exact_enumerate(make_network(2, 1), model, [0.0])
        self.assertEqual(tied.n_states, 4)
        self.assertAlmostEqual(tied.expectation[0], 1.0)
        self.assertAlmostEqual(untied.expectation[0], 0.0)

    def test_structural_zeros_not_enumerated(self):
        net = make_network(4, 0, actor_groups=["1", "1", "2", "2"])
        self.assertEqual(exact_enumerate(net, model_of("EdgeA"), [0.0]).n_states, 4)

    def test_state_space_limit(self):
        net = make_network(8, 0)
        self.assertGreater(net.n_toggleable(TieLevel.A), MAX_FREE_DYADS)
        with self.assertRaises(StateSpaceTooLargeError):
            enumerate_state_space(net, model_of("EdgeA"))

    def test_edge_only_mle(self):
        space = enumerate_state_space(make_network(3, 0), model_of("EdgeA"))
        theta = space.mle([1.0])
        self.assertAlmostEqual(theta[0], math.log(0.5), places=5)

    def test_covariance_of_independent_dyads(self):
        space = enumerate_state_space(make_network(3, 0), model_of("EdgeA"))
        self.assertAlmostEqual(space.covariance([0.0])[0, 0], 0.75)


class TestBoundary(unittest.TestCase):

    def test_boundary_statistics(self):
        space = enumerate_state_space(make_network(3, 0), model_of("EdgeA"))
        self.assertEqual(space.boundary_statistics([3.0]), ["EdgeA"])
        self.assertEqual(space.boundary_statistics([0.0]), ["EdgeA"])
        self.assertEqual(space.boundary_statistics([1.0]), [])

    def test_boundary_mle_warns(self):
        space = enumerate_state_space(make_network(3, 0), model_of("EdgeA"))
        stopped = SimpleNamespace(success=True, x=np.array([7.0]))
        with mock.patch("mergmkit.core.enumeration.optimize.minimize", return_value=stopped):
            with self.assertLogs("mergmkit.core.enumeration", level="WARNING") as logs:
                space.mle([3.0])
        self.assertIn("boundary", logs.output[0])


class TestSamplerAgreement(unittest.TestCase):
    """Sampler means agree with exact expectations on 3 actors and 2 objects with every level free."""

    MODEL = model_of("EdgeA", "Star2A", "EdgeB", "XEdge", "Star2AX", "C4AXB",
                     free_levels=[TieLevel.A, TieLevel.B, TieLevel.X])
    SETTINGS = [
        [-0.5, 0.2, -0.3, -0.3, 0.1, 0.2],
        [0.4, -0.3, 0.5, 0.2, -0.2, -0.1],
        [-1.0, 0.5, 0.0, -1.0, 0.3, 0.3],
    ]

    def check(self, theta, seed):
        net = make_network(3, 2)
        exact = exact_enumerate(net, self.MODEL, theta)
        self.assertEqual(exact.n_states, 1024)
        sample = simulate_sample(net, theta, self.MODEL,
                                 ChainConfig(burn_in=1000, thinning=50, sample_size=2000, seed=seed))
        for name, expected, mean, sd in zip(exact.statistics, exact.expectation, sample.mean, sample.sd):
            tolerance = 3.0 * sd / math.sqrt(sample.n_draws) + 1e-9
            self.assertLess(abs(mean - expected), tolerance, msg=f"{name}: {mean} vs {expected}")

    def test_agreement(self):
        for k, theta in enumerate(self.SETTINGS):
            with self.subTest(theta=theta):
                self.check(theta, seed=100 + k)


if __name__ == '__main__':
    unittest.main()
