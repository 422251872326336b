#!/usr/bin/env python3
"""
Cavity-array photon transport

Single-photon transmission and reflection through a coupled-cavity array
doped with V-type three-level atoms: spectra, band reports and a randomized
solver cross-check.

Exit codes: 0 success, 1 selftest failure, 2 configuration error,
3 I/O error, 4 domain error, 5 unexpected internal error.
"""

import sys
import signal
import argparse
import traceback

from src.errors import CavityTransportError
from src.utils.config_manager import ConfigManager
from src.utils.logging_setup import (
    setup_logging,
    configure_library_loggers,
    log_system_info,
)
from src.cli.commands import (
    EXIT_CONFIG_ERROR,
    EXIT_OK,
    EXIT_UNEXPECTED,
    cmd_report,
    cmd_selftest,
    cmd_spectrum,
    exit_code_for,
)


def signal_handler(signum, frame):
    """Turn SIGTERM into the same path as Ctrl-C."""
    raise KeyboardInterrupt(f"signal {signum}")


def create_argument_parser():
    """Create and configure argument parser."""
    parser = argparse.ArgumentParser(
        description="Photon transport through a coupled-cavity array doped with three-level atoms",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  %(prog)s spectrum --config config/mirror_gap.yaml   # gap formation with N
  %(prog)s report --config config/central_band.yaml  # band edges, Dicke width
  %(prog)s selftest --seed 7                       # randomized solver cross-check
  %(prog)s --create-config config/mine.yaml        # write the default configuration
        """
    )

    parser.add_argument(
        'command',
        nargs='?',
        choices=['spectrum', 'report', 'selftest'],
        help='Command to run'
    )

    parser.add_argument(
        '--config', '-c',
        type=str,
        help='Path to configuration file (default: built-in defaults)'
    )

    parser.add_argument(
        '--create-config',
        type=str,
        metavar='PATH',
        help='Write a default configuration file to PATH and exit'
    )

    parser.add_argument(
        '--seed',
        type=int,
        default=0,
        help='Seed for randomized draws (default: 0)'
    )

    parser.add_argument(
        '--output', '-o',
        type=str,
        help='Output path (overrides config)'
    )

    parser.add_argument(
        '--format',
        choices=['csv', 'json'],
        help='Output format (overrides config)'
    )

    parser.add_argument(
        '--workers',
        type=int,
        help='Threads used for spectrum sweeps (overrides config)'
    )

    parser.add_argument(
        '--log-level',
        choices=['DEBUG', 'INFO', 'WARNING', 'ERROR'],
        help='Set logging level (overrides config)'
    )

    parser.add_argument(
        '--no-progress',
        action='store_true',
        help='Hide selftest progress bars'
    )

    # test harness only: perturbs the analytic amplitudes so selftest must fail
    parser.add_argument('--inject-fault', action='store_true', help=argparse.SUPPRESS)

    parser.add_argument(
        '--version',
        action='version',
        version='cavity-transport 1.0.0'
    )

    return parser


def apply_cli_overrides(config_manager, args):
    """Apply command line argument overrides to configuration."""
    if args.output:
        config_manager.set_value('output.path', args.output)

    if args.format:
        config_manager.set_value('output.format', args.format)

    if args.workers:
        config_manager.set_value('sweep.max_workers', args.workers)

    if args.log_level:
        config_manager.set_value('logging.level', args.log_level)


def main(argv=None):
    """Main application entry point."""
    signal.signal(signal.SIGTERM, signal_handler)

    parser = create_argument_parser()
    args = parser.parse_args(argv)

    try:
        if args.create_config:
            ConfigManager(None).create_default_config(args.create_config)
            print(f"Default configuration created at: {args.create_config}")
            print("Please review and modify the configuration as needed.")
            return EXIT_OK

        if not args.command:
            parser.print_usage(sys.stderr)
            print("error: a command is required (spectrum, report, selftest)", file=sys.stderr)
            return EXIT_CONFIG_ERROR

        config_manager = ConfigManager(args.config)
        config = config_manager.load_config()
        apply_cli_overrides(config_manager, args)
        run = config_manager.build_run_config(seed=args.seed)

        logger = setup_logging(config, level_override=args.log_level)
        configure_library_loggers()
        log_system_info(logger)

        if str(config_manager.get_value('logging.level', 'INFO')).upper() == 'DEBUG':
            config_manager.print_config()

        logger.info(f"Running {args.command} (seed {args.seed})")
        if args.command == 'spectrum':
            return cmd_spectrum(run)
        if args.command == 'report':
            return cmd_report(run)
        return cmd_selftest(run, inject_fault=args.inject_fault, show_progress=not args.no_progress)

    except KeyboardInterrupt:
        print("\nInterrupted by user")
        return 130  # Standard exit code for SIGINT

    except (CavityTransportError, OSError) as e:
        field = getattr(e, 'field', '')
        prefix = f"{type(e).__name__}" + (f" [{field}]" if field else "")
        print(f"{prefix}: {e}", file=sys.stderr)
        return exit_code_for(e)

    except Exception as e:
        print(f"Unexpected error: {e}", file=sys.stderr)
        traceback.print_exc()
        return EXIT_UNEXPECTED


if __name__ == "__main__":
    sys.exit(main())
