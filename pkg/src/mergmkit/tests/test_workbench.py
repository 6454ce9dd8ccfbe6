import csv
import json
import os
import sys
import tempfile
import unittest
from pathlib import Path

from click.testing import CliRunner

sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), '..', '..')))

from mergmkit.cli.main import cli, parse_theta
from mergmkit.core.errors import ConfigError
from mergmkit.core.models import FitResult, RunConfig, RunMode
from mergmkit.core.workbench import EXIT_ERROR, EXIT_NOT_CONVERGED, EXIT_OK, Workbench, run

NODES = """id,level,group,gender
a1,actor,1,female
a2,actor,1,male
a3,actor,1,female
a4,actor,1,male
o1,object,1,
o2,object,1,
o3,object,1,
"""

EDGES = """level,from,to
A,a1,a2
A,a2,a3
X,a1,o1
X,a2,o1
X,a3,o2
B,o1,o2
"""

WAVES = """level,from,to,wave
A,a1,a2,1
A,a2,a3,1
X,a1,o1,1
A,a3,a4,2
X,a2,o1,2
X,a3,o2,2
B,o1,o2,2
"""

MODEL = {"stats": [{"id": "EdgeA"}, {"id": "XEdge"}], "free_levels": ["A", "X"]}
CHAIN = {"burn_in": 200, "thinning": 5, "sample_size": 100}
ESTIMATION = {"phase1_draws": 50, "subphase_count": 2, "phase3_draws": 100, "max_restarts": 1}


class CliTestCase(unittest.TestCase):

    def setUp(self):
        self._tmp = tempfile.TemporaryDirectory()
        self.tmp = Path(self._tmp.name)
        self.runner = CliRunner()
        self.nodes = self.write("nodes.csv", NODES)
        self.edges = self.write("edges.csv", EDGES)
        self.model = self.write("model.json", json.dumps(MODEL))
        self.chain = self.write("chain.json", json.dumps(CHAIN))
        self.estimation = self.write("estimation.json", json.dumps(ESTIMATION))
        self.out = self.tmp / "out"

    def tearDown(self):
        self._tmp.cleanup()

    def write(self, name: str, text: str) -> Path:
        path = self.tmp / name
        path.write_text(text, encoding="utf-8")
        return path

    def invoke(self, *args, out=None):
        data = ["--nodes", str(self.nodes), "--edges", str(self.edges), "--out", str(out or self.out)]
        return self.runner.invoke(cli, list(args) + data)

    def read_csv(self, name: str, out=None):
        with open((out or self.out) / name, newline="", encoding="utf-8") as f:
            return list(csv.DictReader(f))

    def read_error(self, out=None):
        return json.loads(((out or self.out) / "error.json").read_text(encoding="utf-8"))


class TestCommands(CliTestCase):
    """Each mode through the command line."""

    def test_statistics_catalog(self):
        result = self.runner.invoke(cli, ["statistics"])
        self.assertEqual(result.exit_code, 0)
        self.assertIn("Star2AX", result.output)

    def test_describe(self):
        result = self.invoke("describe")
        self.assertEqual(result.exit_code, EXIT_OK, result.output)
        self.assertTrue((self.out / "descriptives.csv").exists())
        self.assertTrue((self.out / "descriptives.txt").exists())
        summary = json.loads((self.out / "ingestion.json").read_text(encoding="utf-8"))
        self.assertEqual(summary["nodes"], {"Actor": 4, "Object": 3})

    def test_stats(self):
        result = self.invoke("stats", "--model", str(self.model))
        self.assertEqual(result.exit_code, EXIT_OK, result.output)
        rows = self.read_csv("statistics.csv")
        self.assertEqual({r["statistic"]: float(r["value"]) for r in rows}, {"EdgeA": 2.0, "XEdge": 3.0})

    def test_estimate_gof_correlate(self):
        result = self.invoke("estimate", "--model", str(self.model), "--chain", str(self.chain),
                             "--estimation", str(self.estimation), "--seed", "5")
        self.assertIn(result.exit_code, (EXIT_OK, EXIT_NOT_CONVERGED), result.output)
        fit = FitResult.model_validate_json((self.out / "fit.json").read_text(encoding="utf-8"))
        self.assertEqual(fit.statistics, ["EdgeA", "XEdge"])
        self.assertEqual(fit.observed_stats, [2.0, 3.0])
        for name in ("fit.csv", "fit_report.csv", "fit_report.txt"):
            self.assertTrue((self.out / name).exists(), name)

        fit_path = str(self.out / "fit.json")
        result = self.invoke("gof", "--fit", fit_path, "--chain", str(self.chain), "--seed", "6")
        self.assertEqual(result.exit_code, EXIT_OK, result.output)
        rows = self.read_csv("gof.csv")
        self.assertEqual([r["statistic"] for r in rows[:2]], ["EdgeA", "XEdge"])
        self.assertIn("clusteringX", [r["statistic"] for r in rows])

        result = self.runner.invoke(cli, ["correlate", "--fit", fit_path, "--out", str(self.out)])
        self.assertEqual(result.exit_code, EXIT_OK, result.output)
        self.assertEqual(len(self.read_csv("correlations.csv")), 2)

    def test_not_converged_exit_status(self):
        strict = self.write("strict.json", json.dumps({**ESTIMATION, "convergence_threshold": 1e-12}))
        result = self.invoke("estimate", "--model", str(self.model), "--chain", str(self.chain),
                             "--estimation", str(strict), "--seed", "5")
        self.assertEqual(result.exit_code, EXIT_NOT_CONVERGED, result.output)
        fit = FitResult.model_validate_json((self.out / "fit.json").read_text(encoding="utf-8"))
        self.assertFalse(fit.converged)
        self.assertEqual(fit.restarts, 1)

    def test_simulate_is_reproducible(self):
        first, second = self.tmp / "first", self.tmp / "second"
        args = ("simulate", "--model", str(self.model), "--chain", str(self.chain), "--theta", "[-1.0, -0.5]", "--seed", "9")
        self.assertEqual(self.invoke(*args, out=first).exit_code, EXIT_OK)
        self.assertEqual(self.invoke(*args, out=second).exit_code, EXIT_OK)
        for name in ("simulation.csv", "draws.csv"):
            self.assertEqual((first / name).read_bytes(), (second / name).read_bytes())
        self.assertEqual(len(self.read_csv("draws.csv", out=first)), CHAIN["sample_size"])

    def test_simulate_merges_chains(self):
        args = ("simulate", "--model", str(self.model), "--chain", str(self.chain), "--theta", "[-1.0, -0.5]",
                "--seed", "9", "--chains", "3")
        result = self.invoke(*args)
        self.assertEqual(result.exit_code, EXIT_OK, result.output)
        self.assertEqual(len(self.read_csv("draws.csv")), 3 * CHAIN["sample_size"])
        again = self.tmp / "again"
        self.assertEqual(self.invoke(*args, out=again).exit_code, EXIT_OK)
        self.assertEqual((self.out / "draws.csv").read_bytes(), (again / "draws.csv").read_bytes())

    def test_lagged_simulation_keeps_social_ties(self):
        self.edges = self.write("waves.csv", WAVES)
        model = self.write("lagged.json", json.dumps({"stats": [{"id": "EdgeA"}, {"id": "EdgeB"}, {"id": "XEdge"}]}))
        result = self.invoke("simulate", "--model", str(model), "--chain", str(self.chain),
                             "--theta", "[0.0, -1.0, -1.0]", "--seed", "2", "--lagged")
        self.assertEqual(result.exit_code, EXIT_OK, result.output)
        self.assertEqual({row["EdgeA"] for row in self.read_csv("draws.csv")}, {"2"})


class TestErrors(CliTestCase):
    """Failures exit with status 1 and leave error.json behind."""

    def test_unknown_statistic(self):
        model = self.write("bad.json", json.dumps({"stats": [{"id": "Nope"}]}))
        result = self.invoke("stats", "--model", str(model))
        self.assertEqual(result.exit_code, EXIT_ERROR)
        report = self.read_error()
        self.assertEqual(report["error"], "UnknownStatisticError")
        self.assertEqual(report["mode"], "stats")
        self.assertEqual(report["details"]["statistic"], "Nope")

    def test_missing_input_file(self):
        result = self.runner.invoke(cli, ["describe", "--nodes", str(self.tmp / "none.csv"),
                                          "--edges", str(self.edges), "--out", str(self.out)])
        self.assertEqual(result.exit_code, EXIT_ERROR)
        self.assertEqual(self.read_error()["error"], "ConfigError")

    def test_simulate_needs_parameters(self):
        result = self.invoke("simulate", "--model", str(self.model))
        self.assertEqual(result.exit_code, EXIT_ERROR)
        self.assertIn("--theta", self.read_error()["message"])

    def test_bad_theta(self):
        result = self.invoke("simulate", "--model", str(self.model), "--theta", "not-json")
        self.assertEqual(result.exit_code, EXIT_ERROR)
        with self.assertRaises(ConfigError):
            parse_theta('["a"]')
        self.assertEqual(parse_theta("[1, 2.5]"), [1.0, 2.5])

    def test_empty_dataset_reported(self):
        nodes = self.write("empty_nodes.csv", "id,level,group\n")
        edges = self.write("empty_edges.csv", "level,from,to\n")
        cfg = RunConfig(mode=RunMode.DESCRIBE, nodes=nodes, edges=edges, output_dir=self.out)
        self.assertEqual(run(RunMode.DESCRIBE, cfg), EXIT_ERROR)
        report = self.read_error()
        self.assertEqual(report["error"], "IngestionError")
        self.assertEqual(report["mode"], "describe")

    def test_theta_length_mismatch(self):
        result = self.invoke("simulate", "--model", str(self.model), "--theta", "[-1.0]", "--chain", str(self.chain))
        self.assertEqual(result.exit_code, EXIT_ERROR)
        self.assertEqual(self.read_error()["error"], "SamplerError")


class TestWorkbench(CliTestCase):

    def test_run_records_artifacts(self):
        cfg = RunConfig(mode=RunMode.DESCRIBE, nodes=self.nodes, edges=self.edges, output_dir=self.out)
        workbench = Workbench(cfg)
        self.assertEqual(workbench.run(), EXIT_OK)
        self.assertIsNone(workbench.error)
        self.assertEqual({p.name for p in workbench.artifacts},
                         {"ingestion.json", "descriptives.csv", "descriptives.txt"})

    def test_run_switches_mode(self):
        cfg = RunConfig(mode=RunMode.DESCRIBE, nodes=self.nodes, edges=self.edges, output_dir=self.out,
                        model=json.loads(self.model.read_text(encoding="utf-8")))
        self.assertEqual(run(RunMode.STATS, cfg), EXIT_OK)
        self.assertTrue((self.out / "statistics.csv").exists())


if __name__ == '__main__':
    unittest.main()
