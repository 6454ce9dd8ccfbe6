import json
import logging
import os
import sys
import tempfile
import unittest
from pathlib import Path
from unittest import mock

sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), '..', '..')))

from mergmkit.core import estimator
from mergmkit.core.config import OUTPUT_DIR_ENV, Config, default_output_dir, load_section, read_json
from mergmkit.core.errors import ConfigError
from mergmkit.core.models import ChainConfig, ModelSpec, TieLevel
from mergmkit.utils.logger import LOGGER_NAME, get_logger, setup_logger


class TestConfig(unittest.TestCase):
    """Run documents and standalone section files."""

    def setUp(self):
        self._tmp = tempfile.TemporaryDirectory()
        self.tmp = Path(self._tmp.name)

    def tearDown(self):
        self._tmp.cleanup()

    def write(self, name, data) -> Path:
        path = self.tmp / name
        path.write_text(data if isinstance(data, str) else json.dumps(data), encoding="utf-8")
        return path

    def test_defaults(self):
        config = Config()
        self.assertIsNone(config.model_spec())
        self.assertEqual(config.chain_config(), ChainConfig())
        self.assertIsNone(config.aux_statistics())
        self.assertEqual(config.gof_thresholds(), (0.1, 1.0))

    def test_sections(self):
        path = self.write("run.json", {
            "model": {"stats": [{"id": "EdgeA"}, {"id": "ASA", "lambda": 3.0}], "free_levels": ["A"]},
            "chain": {"burn_in": 10, "thinning": 2, "sample_size": 5},
            "estimation": {"phase3_draws": 50},
            "gof": {"aux": [{"id": "IsolatesA"}], "modeled_threshold": 0.2},
            "descriptives": {"diversity": []},
        })
        config = Config(path)
        model = config.model_spec()
        self.assertEqual(model.free_levels, [TieLevel.A])
        self.assertEqual(model.stats[1].lambda_, 3.0)
        self.assertEqual(config.chain_config().burn_in, 10)
        self.assertEqual(config.estimation_settings().phase3_draws, 50)
        self.assertEqual([d.id for d in config.aux_statistics()], ["IsolatesA"])
        self.assertEqual(config.gof_thresholds(), (0.2, 1.0))
        self.assertEqual(config.descriptive_options().diversity, [])

    def test_unknown_section(self):
        with self.assertRaises(ConfigError):
            Config(self.write("run.json", {"modle": {}}))

    def test_not_an_object(self):
        with self.assertRaises(ConfigError):
            Config(self.write("run.json", [1, 2]))

    def test_invalid_section(self):
        config = Config(self.write("run.json", {"chain": {"thinning": 0}}))
        with self.assertRaises(ConfigError) as ctx:
            config.chain_config()
        self.assertEqual(ctx.exception.details["section"], "chain")

    def test_dot_notation(self):
        config = Config(self.write("run.json", {"chain": {"seed": 4}}))
        self.assertEqual(config.get("chain.seed"), 4)
        self.assertEqual(config.get("chain.missing", "x"), "x")
        config.set("gof.auxiliary_threshold", 2.0)
        self.assertEqual(config.gof_thresholds(), (0.1, 2.0))
        saved = config.save(self.tmp / "copy.json")
        self.assertEqual(read_json(saved), {"chain": {"seed": 4}, "gof": {"auxiliary_threshold": 2.0}})

    def test_load_section(self):
        model = load_section(self.write("model.json", {"stats": [{"id": "XEdge"}]}), ModelSpec)
        self.assertEqual(model.free_levels, [TieLevel.A, TieLevel.B, TieLevel.X])
        with self.assertRaises(ConfigError):
            load_section(self.write("bad.json", {"stats": []}), ModelSpec)
        with self.assertRaises(ConfigError):
            load_section(self.write("broken.json", "{not json"), ModelSpec)

    def test_output_dir_from_environment(self):
        with mock.patch.dict(os.environ, {OUTPUT_DIR_ENV: str(self.tmp / "results")}):
            self.assertEqual(default_output_dir(), str(self.tmp / "results"))


class TestLogger(unittest.TestCase):

    def test_level_reapplied(self):
        logger = setup_logger(level="DEBUG")
        self.assertEqual(logger.name, LOGGER_NAME)
        self.assertEqual(logger.level, logging.DEBUG)
        self.assertIs(setup_logger(level="WARNING"), get_logger())
        self.assertEqual(get_logger().level, logging.WARNING)
        self.assertFalse(logger.propagate)
        self.assertEqual(get_logger("sampler").name, "mergmkit.sampler")

    def test_module_names_not_doubled(self):
        self.assertEqual(get_logger("mergmkit.core.gof").name, "mergmkit.core.gof")
        self.assertIs(get_logger(LOGGER_NAME), get_logger())
        self.assertIs(estimator.logger, get_logger("mergmkit.core.estimator"))

    def test_log_file_added_once(self):
        with tempfile.TemporaryDirectory() as tmp:
            path = Path(tmp) / "logs" / "run.log"
            logger = setup_logger(level="INFO", log_file=path)
            setup_logger(level="INFO", log_file=path)
            files = [h for h in logger.handlers if isinstance(h, logging.FileHandler)]
            self.assertEqual(len(files), 1)
            logger.info("written")
            files[0].flush()
            self.assertIn("written", path.read_text(encoding="utf-8"))
            logger.removeHandler(files[0])
            files[0].close()


if __name__ == '__main__':
    unittest.main()
