#!/usr/bin/env python3
"""
OFDM-IM Dither Toolkit - Main Entry Point

Monte-Carlo PAPR and BER experiments for OFDM with index modulation and
single-level / multilevel dither on the idle subcarriers.
"""
import argparse
import sys
from pathlib import Path
from typing import List, Optional

# Add src directory to path
sys.path.insert(0, str(Path(__file__).parent))

from src import __version__
from src.harness import (
    RunSpec, dump_super_constellation, run_ber, run_directory, run_papr, solve_one,
    write_json, write_run,
)
from src.utils import Config, get_logger, load_config, setup_logger
from src.utils.config import SCHEME_NAMES

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_IO = 2

RUNNERS = {
    "papr": run_papr,
    "ber": run_ber,
    "constellation": dump_super_constellation,
}


class CliParser(argparse.ArgumentParser):
    """ArgumentParser whose usage errors exit with code 1"""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _common_options() -> argparse.ArgumentParser:
    common = CliParser(add_help=False)
    common.add_argument('-c', '--config', help='Path to YAML configuration file')
    common.add_argument('--scheme', choices=('all',) + SCHEME_NAMES,
                        help='Transmit scheme (default from config: all)')
    common.add_argument('--R', type=float, help='Single-level dither radius')
    common.add_argument('--R1', type=float, help='Multilevel base radius')
    common.add_argument('--radii', type=float, nargs='+', metavar='R_l',
                        help='Explicit multilevel radii R_1..R_L')
    common.add_argument('--allow-unsafe-r1', action='store_true',
                        help='Accept R1 >= A_1')
    common.add_argument('--N', type=int, help='Subcarrier count')
    common.add_argument('--n', type=int, help='Subblock length')
    common.add_argument('--k', type=int, help='Active subcarriers per subblock')
    common.add_argument('--M', type=int, help='QAM order')
    common.add_argument('--trials', type=int, help='Blocks per scheme')
    common.add_argument('--seed', type=int, help='Master seed')
    common.add_argument('--snr', type=float, nargs='+', metavar='DB',
                        help='Eb/N0 grid in dB (ber)')
    common.add_argument('--oversample', type=int, help='Oversampling factor for peaks')
    common.add_argument('--denominator', choices=('ensemble', 'per-block'),
                        help='PAPR denominator mode')
    common.add_argument('--ensemble-reference', choices=('scheme', 'original'),
                        help='Mean power used by the ensemble denominator')
    common.add_argument('--fallback', choices=('max-power', 'hamming'),
                        help='Detector fallback for illegal top-k patterns')
    common.add_argument('--restarts', type=int, help='Solver starts per block')
    common.add_argument('--max-iterations', type=int, help='Solver iteration budget per start')
    common.add_argument('--out', help='Output root directory')
    common.add_argument('--workers', type=int, help='Worker processes (default: all cores)')
    common.add_argument('-v', '--verbose', action='store_true',
                        help='Enable verbose logging (DEBUG level)')
    return common


def build_parser() -> argparse.ArgumentParser:
    parser = CliParser(
        prog='ofdm-im-dither',
        description='OFDM-IM dither PAPR reduction: Monte-Carlo PAPR/BER harness',
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  %(prog)s papr --scheme all --trials 10000       # PAPR CCDF of the three schemes
  %(prog)s ber --scheme multilevel --R1 0         # BER curve of the multilevel scheme
  %(prog)s constellation --scheme single-level    # super-constellation point cloud
  %(prog)s solve-one --block 7                    # inspect one block
        """
    )
    parser.add_argument(
        '--version',
        action='version',
        version=f'OFDM-IM Dither Toolkit {__version__}'
    )
    common = _common_options()
    commands = parser.add_subparsers(dest='command', required=True, metavar='COMMAND')
    commands.add_parser('papr', parents=[common], help='PAPR CCDF run')
    commands.add_parser('ber', parents=[common], help='BER versus Eb/N0 run')
    commands.add_parser('constellation', parents=[common], help='Super-constellation dump')
    solve = commands.add_parser('solve-one', parents=[common],
                                help='Single-block solver inspection')
    solve.add_argument('--block', type=int, default=0, help='Block index (default: 0)')
    return parser


def apply_overrides(config: Config, args: argparse.Namespace) -> Config:
    """
    Fold command-line flags into the configuration

    The merged values go back through the models so validators see them.
    """
    data = config.model_dump()
    overrides = {
        ('system', 'N'): args.N,
        ('system', 'n'): args.n,
        ('system', 'k'): args.k,
        ('system', 'M'): args.M,
        ('scheme', 'name'): args.scheme,
        ('scheme', 'R'): args.R,
        ('scheme', 'R1'): args.R1,
        ('scheme', 'radii'): args.radii,
        ('scheme', 'allow_unsafe_r1'): args.allow_unsafe_r1 or None,
        ('run', 'trials'): args.trials,
        ('run', 'seed'): args.seed,
        ('run', 'snr_grid'): args.snr,
        ('run', 'oversample'): args.oversample,
        ('run', 'denominator'): args.denominator,
        ('run', 'ensemble_reference'): args.ensemble_reference,
        ('run', 'detector_fallback'): args.fallback,
        ('solver', 'restarts'): args.restarts,
        ('solver', 'max_iterations'): args.max_iterations,
        ('output', 'directory'): args.out,
        ('performance', 'workers'): args.workers,
    }
    for (section, key), value in overrides.items():
        if value is not None:
            data[section][key] = value
    if args.verbose:
        data['logging']['level'] = 'DEBUG'
    return Config(**data)


def execute(args: argparse.Namespace) -> Path:
    """Run one subcommand and write its artifacts; returns the run directory"""
    config = apply_overrides(load_config(args.config), args)
    setup_logger('src', config.logging)
    logger = get_logger('src.cli')

    spec = RunSpec.from_config(config)
    directory = run_directory(Path(config.output.directory), args.command, spec)
    logger.info(f"Run {args.command} ({', '.join(spec.scheme_names())}), spec {spec.digest()}")

    if args.command == 'solve-one':
        outcome = solve_one(spec, args.block)
    else:
        outcome = RUNNERS[args.command](spec, workers=config.performance.resolved_workers())

    write_run(directory, outcome.report,
              timing=outcome.timing if config.output.write_timing else None,
              clouds=outcome.clouds)
    if outcome.extra is not None:
        write_json(directory / 'solve_one.json', outcome.extra)
    return directory


def main(argv: Optional[List[str]] = None) -> int:
    """Main entry point"""
    args = build_parser().parse_args(argv)
    try:
        directory = execute(args)
    except OSError as e:
        print(f"Error: {e}", file=sys.stderr)
        return EXIT_IO
    except ValueError as e:
        # ParameterError and pydantic ValidationError
        print(f"Error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except KeyboardInterrupt:
        print("\nInterrupted by user", file=sys.stderr)
        return EXIT_USAGE

    print(directory)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
