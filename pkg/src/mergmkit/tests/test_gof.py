import os
import sys
import unittest

from hypothesis import given, settings
from hypothesis import strategies as st

sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), '..', '..')))

from mergmkit.core.errors import GofError
from mergmkit.core.gof import gof_row, run_gof, t_ratio
from mergmkit.core.models import ChainConfig, FitResult, StatDescriptor, TieLevel
from mergmkit.tests.support import make_network, model_of


def fit_for(model, theta) -> FitResult:
    p = len(theta)
    return FitResult(
        statistics=[d.id for d in model.stats],
        theta_hat=list(theta),
        std_errors=[0.1] * p,
        conv_t_ratios=[0.0] * p,
        param_covariance=[[0.01 if k == l else 0.0 for l in range(p)] for k in range(p)],
        converged=True,
        observed_stats=[0.0] * p,
        model=model,
    )


class TestRows(unittest.TestCase):
    """t-ratios and verdicts of single rows."""

    @settings(max_examples=100, deadline=None)
    @given(
        st.floats(min_value=-1e6, max_value=1e6),
        st.floats(min_value=-1e6, max_value=1e6),
        st.floats(min_value=1e-3, max_value=1e4),
    )
    def test_swapping_observed_and_mean_flips_the_sign(self, observed, mean, sd):
        forward, _ = t_ratio(observed, mean, sd)
        backward, _ = t_ratio(mean, observed, sd)
        self.assertEqual(forward, -backward)
        self.assertEqual(gof_row("EdgeA", observed, mean, sd, True, 0.1).verdict,
                         gof_row("EdgeA", mean, observed, sd, True, 0.1).verdict)

    def test_t_ratios(self):
        self.assertAlmostEqual(t_ratio(64, 62.4, 11.204)[0], 0.1428, places=4)
        self.assertAlmostEqual(t_ratio(214, 214.74, 77.42)[0], -0.00956, places=5)

    def test_verdicts(self):
        self.assertEqual(gof_row("EdgeA", 64, 62.4, 11.204, True, 0.1).verdict, "fail")
        self.assertEqual(gof_row("IsolatesA", 64, 62.4, 11.204, False, 1.0).verdict, "pass")
        self.assertEqual(gof_row("Star2A", 214, 214.74, 77.42, True, 0.1).verdict, "pass")

    def test_threshold_is_inclusive(self):
        self.assertEqual(gof_row("EdgeA", 0.5, 0.0, 5.0, True, 0.1).verdict, "pass")
        self.assertEqual(gof_row("IsolatesA", 3.0, 1.0, 2.0, False, 1.0).verdict, "pass")

    def test_zero_variance(self):
        row = gof_row("IsolatesA", 3.0, 1.0, 0.0, False, 1.0)
        self.assertTrue(row.zero_variance)
        self.assertEqual(row.t_ratio, 0.0)
        self.assertEqual(row.verdict, "pass")


class TestRunGof(unittest.TestCase):

    def setUp(self):
        self.net = make_network(5, 0, a=[(0, 1), (1, 2), (3, 4)])
        self.model = model_of("EdgeA")
        self.fit = fit_for(self.model, [-0.5])
        self.cfg = ChainConfig(burn_in=200, thinning=10, sample_size=300, seed=12)

    def test_modeled_and_auxiliary_rows(self):
        aux = [StatDescriptor(id="EdgeA"), StatDescriptor(id="Star2A"), StatDescriptor(id="IsolatesA")]
        table = run_gof(self.net, self.fit, aux=aux, cfg=self.cfg)
        self.assertEqual([r.statistic for r in table.rows], ["EdgeA", "Star2A", "IsolatesA"])
        self.assertEqual([r.modeled for r in table.rows], [True, False, False])
        self.assertEqual(table.rows[0].observed, 3.0)
        self.assertEqual(table.rows[2].observed, 0.0)
        for row in table.rows:
            self.assertGreater(row.sim_sd, 0.0)

    def test_auxiliary_statistics_do_not_touch_the_chain(self):
        plain = run_gof(self.net, self.fit, cfg=self.cfg)
        with_aux = run_gof(self.net, self.fit, aux=[StatDescriptor(id="TriangleA")], cfg=self.cfg)
        self.assertEqual(plain.rows[0].sim_mean, with_aux.rows[0].sim_mean)
        self.assertEqual(plain.rows[0].sim_sd, with_aux.rows[0].sim_sd)

    def test_thresholds_recorded(self):
        table = run_gof(self.net, self.fit, cfg=self.cfg, modeled_threshold=0.2, auxiliary_threshold=2.0)
        self.assertEqual(table.modeled_threshold, 0.2)
        self.assertEqual(table.auxiliary_threshold, 2.0)

    def test_start_from_empty(self):
        start = self.net.empty_like([TieLevel.A])
        table = run_gof(self.net, self.fit, cfg=self.cfg, start=start)
        self.assertEqual(table.rows[0].observed, 3.0)

    def test_misaligned_fit(self):
        with self.assertRaises(GofError):
            run_gof(self.net, fit_for(self.model, [-0.5]), model=model_of("EdgeA", "Star2A"), cfg=self.cfg)

    def test_missing_model(self):
        bare = self.fit.model_copy(update={"model": None})
        with self.assertRaises(GofError):
            run_gof(self.net, bare, cfg=self.cfg)


if __name__ == '__main__':
    unittest.main()
