"""
Command-line entry point

    hyperlab lemma --r 50
    hyperlab pirate --distance 100 --error-deg 1e-16
    hyperlab game --r 12 --noise-C 0.1 --trials 10000 --out results
"""

import argparse
import logging
import sys

from hyperlab.hyperlab import settings
from hyperlab.hyperlab.config import EXPERIMENTS, ExperimentConfig
from hyperlab.hyperlab.exceptions import HyperlabError
from hyperlab.hyperlab.game import STRATEGIES
from hyperlab.hyperlab.oracles.noise import NOISE_KINDS
from hyperlab.hyperlab.services.experiment_service import ExperimentService

logger = logging.getLogger(__name__)


def _radii(text: str) -> tuple[float, ...]:
    try:
        return tuple(float(part) for part in text.split(",") if part.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"Expected comma-separated radii, got {text!r}")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hyperlab", description="Noisy first-order optimization experiments on the hyperbolic plane"
    )
    parser.add_argument("experiment", nargs="?", choices=EXPERIMENTS)
    parser.add_argument("--experiment", dest="experiment_flag", choices=EXPERIMENTS)
    parser.add_argument("--r", type=float, help="Radius of the game or lemma")
    parser.add_argument("--noise-C", dest="noise_C", type=float, help="Noise precision C")
    parser.add_argument("--noise-c", dest="noise_c", type=float, help="Density bound c, at least the peak")
    parser.add_argument("--noise-kind", dest="noise_kind", choices=NOISE_KINDS)
    parser.add_argument("--trials", type=int)
    parser.add_argument("--seed", type=int, help="Base seed, defaults to $HYPERLAB_SEED or 0")
    parser.add_argument("--out", help="Directory for <experiment>.csv and <experiment>.json")
    parser.add_argument("--threads", type=int, help="Worker pool size, defaults to the core count")
    parser.add_argument("--distance", type=float, help="Pirate target distance")
    parser.add_argument("--error-deg", dest="error_deg", type=float, help="Pirate bearing error in degrees")
    parser.add_argument("--strategy", choices=sorted(STRATEGIES))
    parser.add_argument("--budget", type=int, help="Query budget per trial")
    parser.add_argument("--radii", type=_radii, help="Comma-separated radii, e.g. 20,40,80")
    parser.add_argument("--log-level", dest="log_level", type=str.upper, default=settings.get_log_level())
    return parser


def main(argv: list[str] | None = None) -> int:
    """
    Returns:
        0 when the experiment passed, 2 for a configuration error, 3 for a failed check
    """
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=getattr(logging, args.log_level, logging.WARNING),
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )

    try:
        config = ExperimentConfig.from_args(args)
    except HyperlabError as e:
        print(f"hyperlab: {e}", file=sys.stderr)
        return e.exit_code

    result = ExperimentService.run(config)
    for line in result.lines:
        print(line)
    if result.error_message:
        print(f"hyperlab: {result.error_message}", file=sys.stderr)
    if result.csv_path:
        print(f"wrote {result.csv_path} and {result.json_path} (config {result.config_hash[:12]})")
    return result.exit_code


if __name__ == "__main__":
    sys.exit(main())
