import argparse
import logging
import sys

from src.ddcrb import __version__
from src.ddcrb.config import settings
from src.ddcrb.cli import EXIT_SCENARIO, SUBCOMMANDS, parse_scenario, parse_sweep, run
from src.ddcrb.utils import ScenarioError

logging.basicConfig(
    format='%(asctime)s - %(name)s - %(levelname)s - %(message)s',
    level=logging.INFO
)
logger = logging.getLogger(__name__)

if settings.DEBUG_MODE:
    logging.getLogger("src.ddcrb").setLevel(logging.DEBUG)
    logger.setLevel(logging.DEBUG)
else:
    logging.getLogger("src.ddcrb").setLevel(logging.INFO)
    logger.setLevel(logging.INFO)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog='dd-crb',
        description='Delay-Doppler CRB, RSMA SINR and Monte-Carlo validation runs',
    )
    parser.add_argument('subcommand', choices=SUBCOMMANDS, help='What to compute')
    parser.add_argument('--scenario', required=True, help='Scenario file of `section.key = value` lines')
    parser.add_argument('--out', required=True, help='Output directory for CSV tables and the manifest')
    parser.add_argument('--seed', type=int, help='Override the rsma and mc seeds of the scenario')
    parser.add_argument('--param', help='Dotted scenario key to sweep (with --values)')
    parser.add_argument('--values', help='Comma-separated values for --param')
    parser.add_argument('--sweep', help='Sweep as key=start:stop:step')
    parser.add_argument('--metric', choices=['crb', 'sinr', 'mc'], help='What the sweep subcommand evaluates (default crb)')
    parser.add_argument('--normalized', action='store_true', help='Add CRB(tau)/tau^2 and CRB(nu)*T^2 columns')
    parser.add_argument('--version', action='version', version=f'%(prog)s {__version__}')
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)

    logger.info(f"dd-crb {__version__}: {args.subcommand}")
    logger.info(f"Debug mode: {settings.DEBUG_MODE}")
    logger.info("Threads: %s", settings.THREADS if settings.THREADS else "default")
    logger.info("Transform: %s", "FFT" if settings.FAST_TRANSFORM else "direct sum")

    try:
        scenario = parse_scenario(args.scenario)
        sweep = parse_sweep(args.sweep, args.param, args.values)
    except ScenarioError as e:
        logger.error(f"Invalid scenario: {e}")
        return EXIT_SCENARIO

    return run(
        args.subcommand,
        scenario,
        args.out,
        seed=args.seed,
        sweep=sweep,
        metric=args.metric,
        normalized=args.normalized,
    )


if __name__ == '__main__':
    sys.exit(main())
