#!/usr/bin/env python3
"""
End-to-end check of GrassMean: configuration, sampling, triangle reports,
golden examples and a short sweep.
This can be run directly or through pytest.
"""

import io
import logging
import os
import sys

# Add the project root to the Python path
project_root = os.path.abspath(os.path.join(os.path.dirname(__file__), ".."))
sys.path.insert(0, project_root)

from src.experiments.golden import reproduce_examples
from src.experiments.sweep import parse_t_grid, radius_sweep, write_sweep_csv
from src.geometry.grassmann import SWAPPED
from src.geometry.inequal import RESIDUAL_EPS, triangle_report
from src.geometry.matfun import Field
from src.geometry.sampling import BallSpec, RngStream, random_projector, sample_ball
from src.utils.config_manager import ConfigManager

# Configure logging
logging.basicConfig(level=logging.INFO)
logger = logging.getLogger(__name__)


def test_config_manager():
    """Test the configuration manager"""
    logger.info("Testing ConfigManager...")

    config_manager = ConfigManager()
    config = config_manager.config

    logger.info(f"Loaded configuration with {len(config)} sections")
    for section in ("numerics", "sampling", "sweep", "paths", "system"):
        assert section in config, f"Missing config section: {section}"

    t_grid = parse_t_grid(config_manager.get("sweep.t_grid"))
    assert len(t_grid) == 6, f"Unexpected t grid: {t_grid}"
    assert os.path.isdir(config_manager.resolve_path("golden_dir"))

    logger.info("ConfigManager test passed")


def test_sampled_triangles():
    """Triangles drawn from a default-radius ball satisfy every inequality"""
    logger.info("Testing sampled triangles...")

    stream = RngStream(42)
    for index, field in enumerate(Field):
        center = random_projector(4, 2, field, stream.generator(index))
        points = sample_ball(BallSpec(center), 30, stream.generator(index, 1))
        for i in range(0, 30, 3):
            report = triangle_report(*points[i:i + 3])
            worst = report.worst_residual()
            assert report.valid, "Sample touched the cut locus"
            assert worst >= -RESIDUAL_EPS, f"Residual {worst} below tolerance ({field.value})"

    logger.info("Sampled triangle test passed")


def test_golden_examples():
    """The published worked examples are reproduced"""
    logger.info("Testing golden examples...")

    golden_dir = ConfigManager().resolve_path("golden_dir")
    results = reproduce_examples(golden_dir)
    for result in results:
        assert result.passed, f"{result.case}: {result.failures}"
        logger.info(f"  {result.case}: {len(result.values)} checks")

    logger.info("Golden example test passed")


def test_short_sweep():
    """A short sweep separates the small ball from the swapped reading"""
    logger.info("Testing a short radius sweep...")

    canonical = radius_sweep(2, 1, Field.COMPLEX, [0.1, 0.2], 20, seed=42)
    swapped = radius_sweep(2, 1, Field.COMPLEX, [0.1, 1.2], 20, seed=42, convention=SWAPPED)
    assert all(r.violation_rate("semipara") == 0 for r in canonical)
    assert any(r.violation_rate("semipara") > 0 for r in swapped)

    stream = io.StringIO()
    write_sweep_csv(canonical + swapped, stream)
    assert len(stream.getvalue().splitlines()) == 5

    logger.info("Sweep test passed")


def main():
    """Run all tests"""
    logger.info("Starting GrassMean end-to-end tests")

    try:
        test_config_manager()
        test_sampled_triangles()
        test_golden_examples()
        test_short_sweep()

        logger.info("=" * 60)
        logger.info("ALL TESTS PASSED")
        logger.info("=" * 60)
        logger.info("Test Summary:")
        logger.info("  - Configuration loading")
        logger.info("  - Small-ball triangles")
        logger.info("  - Golden worked examples")
        logger.info("  - Radius sweep and CSV output")

    except KeyboardInterrupt:
        logger.warning("Tests interrupted by user")
        return 0
    except Exception as e:
        logger.error(f"Test failed: {e}")
        logger.error("Check error messages above for details")
        return 1

    return 0


if __name__ == "__main__":
    sys.exit(main())
