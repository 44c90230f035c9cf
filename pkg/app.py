"""
rhgTool command line.

Subcommands:
    generate     sample an instance, build its graph, write it to a file
    components   read a graph file and print its component summary
    audit        run named audits on one instance, emit a JSONL report
    scan         run a ScanConfig (or a boundary preset), emit CSV/JSONL/HDF5 records
    fit          read scan records and print the fitted L2 exponent

Exit codes: 0 success, 1 usage or parameter error, 2 audit violations above
threshold, 3 I/O error.
"""
import argparse
import json
import logging
import sys

from analysis.components import connected_components, size_histogram
from audits.audit_manager import AuditManager
from builders.builder_manager import BUILDER_TYPES, get_builder
from builders.graph_io import read_graph, write_graph_h5, write_graph_text
from experiments.fitting import FIT_MODES, fit_l2_exponent
from experiments.presets import load_presets, preset_config
from experiments.record_writer import WRITER_TYPES, format_for, read_records, write_records
from experiments.scan import DEFAULT_N_CAP, ScanConfig, run_scan
from model.geometry import ModelParams
from model.sampler import sample, write_points_csv
from utils.errors import AuditThresholdExceeded, FitError, ParameterError, RecordIOError, RHGError

logger = logging.getLogger('rhgtool')

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_AUDIT = 2
EXIT_IO = 3

LOG_FORMAT = '%(asctime)s %(levelname)s %(name)s: %(message)s'


class UsageError(Exception):
    """Raised by the argument parser instead of exiting."""


class ArgumentParser(argparse.ArgumentParser):
    """argparse parser whose errors map to exit code 1."""

    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def float_grid(text):
    """'1e4,3e4,1e5' -> [10000.0, 30000.0, 100000.0]"""
    try:
        return [float(part) for part in text.split(',') if part.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got '{text}'")


def int_list(text):
    try:
        return [int(float(part)) for part in text.split(',') if part.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got '{text}'")


class rhgTool():
    """
    Called by:
    - __main__: `python app.py <subcommand> ...`
    - tests/test_app.py: rhgTool().run(argv) with captured stdout

    Example usage:
        code = rhgTool().run(['generate', '--n', '1e4', '--alpha', '0.75', '--out', 'g.txt'])
    """

    def __init__(self):
        self.parser = self._build_parser()
        self.commands = {
            'generate': self.generate,
            'components': self.components,
            'audit': self.audit,
            'scan': self.scan,
            'fit': self.fit,
        }

    def _build_parser(self):
        parser = ArgumentParser(prog='rhgtool', description='Random hyperbolic graph components toolkit')
        verbosity = parser.add_mutually_exclusive_group()
        verbosity.add_argument('--verbose', '-v', action='store_true', help='debug logging')
        verbosity.add_argument('--quiet', '-q', action='store_true', help='warnings only')
        sub = parser.add_subparsers(dest='command', required=True, parser_class=ArgumentParser)

        def model_args(p, grid=False):
            kind = float_grid if grid else float
            p.add_argument('--n', type=kind, required=not grid, help='expected vertex count')
            p.add_argument('--alpha', type=kind, required=not grid, help='radial exponent')
            p.add_argument('--nu', type=kind, default=None if grid else 1.0, help='density parameter')
            p.add_argument('--seed', type=int, default=0, help='seed (master seed for scans)')
            p.add_argument('--builder', choices=sorted(BUILDER_TYPES), default='banded')

        p = sub.add_parser('generate', help='sample an instance and write its graph')
        model_args(p)
        p.add_argument('--out', required=True, help='graph file (.h5 for HDF5, text otherwise)')
        p.add_argument('--points', help='also write the points as CSV')

        p = sub.add_parser('components', help='print the component summary of a graph file')
        p.add_argument('graph', help='graph file written by generate')

        p = sub.add_parser('audit', help='run audits on one instance')
        model_args(p)
        p.add_argument('--audit', action='append', choices=sorted(AuditManager.AUDIT_TYPES) + ['all'],
                       required=True, help='audit to run (repeatable, or all)')
        p.add_argument('--M', type=float, help='lower-bound offset M')
        p.add_argument('--beta', type=float, help='sector exponent beta')
        p.add_argument('--L', type=float, help='upper-bound offset L')
        p.add_argument('--Lp', type=float, help="occupancy constant L'")
        p.add_argument('--samples', type=int, help='Monte Carlo draws for sampling audits')
        p.add_argument('--threshold', type=int, help='allowed violations per audit (default from audit_defaults.json)')
        p.add_argument('--out', help='JSONL report (stdout if omitted)')

        p = sub.add_parser('scan', help='run a sweep over n, alpha, nu')
        model_args(p, grid=True)
        p.add_argument('--trials', type=int, default=None)
        p.add_argument('--preset', choices=sorted(load_presets()), help='boundary preset grid')
        p.add_argument('--config', help='JSON file with ScanConfig fields')
        p.add_argument('--out', default=None, help='output file (default scan.<format>)')
        p.add_argument('--format', choices=sorted(WRITER_TYPES), default=None)
        p.add_argument('--ge', type=int_list, default=None, help='multiplicity thresholds k for ge_<k> columns')
        p.add_argument('--timing', action='store_true', help='record wall-clock ms per trial')
        p.add_argument('--workers', type=int, default=None, help='worker processes (default: by CPU and memory)')
        p.add_argument('--n-cap', type=float, default=None, help=f'largest admissible n (default {DEFAULT_N_CAP:g})')

        p = sub.add_parser('fit', help='fit the L2 scaling exponent from scan records')
        p.add_argument('records', help='CSV, JSONL or HDF5 records')
        p.add_argument('--mode', choices=sorted(FIT_MODES), default='loglog')
        return parser

    def _configure_logging(self, args):
        level = logging.DEBUG if args.verbose else logging.WARNING if args.quiet else logging.INFO
        logging.basicConfig(level=level, format=LOG_FORMAT, stream=sys.stderr, force=True)

    def run(self, argv=None):
        """Parse argv, dispatch, and map errors to exit codes."""
        try:
            args = self.parser.parse_args(argv)
        except UsageError as e:
            print(e, file=sys.stderr)
            return EXIT_USAGE
        self._configure_logging(args)
        try:
            self.commands[args.command](args)
            return EXIT_OK
        except AuditThresholdExceeded as e:
            logger.error("rhgTool.run(): %s", e)
            return EXIT_AUDIT
        except (RecordIOError, OSError) as e:
            logger.error("rhgTool.run(): %s", e)
            return EXIT_IO
        except (ParameterError, FitError, RHGError) as e:
            logger.error("rhgTool.run(): %s", e)
            return EXIT_USAGE

    def generate(self, args):
        params = ModelParams(alpha=args.alpha, nu=args.nu, n=args.n, seed=args.seed)
        ps = sample(params)
        g = get_builder(args.builder).build(ps)
        if args.out.endswith(('.h5', '.hdf5')):
            write_graph_h5(g, args.out, metadata={'builder': args.builder})
        else:
            write_graph_text(g, args.out)
        if args.points:
            write_points_csv(ps, args.points)
        print(f"vertices {g.vertex_count}\nedges {g.edge_count}\nR {params.R:.17g}")

    def components(self, args):
        g = read_graph(args.graph)
        cs = connected_components(g)
        histogram = size_histogram(cs)
        print(f"vertices {g.vertex_count}")
        print(f"edges {g.edge_count}")
        print(f"components {cs.num_components}")
        print(f"L1 {cs.L1}")
        print(f"L2 {cs.L2}")
        print("sizes " + " ".join(f"{size}:{histogram[size]}" for size in sorted(histogram, reverse=True)))

    def audit(self, args):
        params = ModelParams(alpha=args.alpha, nu=args.nu, n=args.n, seed=args.seed)
        manager = AuditManager()
        names = sorted(manager.AUDIT_TYPES) if 'all' in args.audit else list(dict.fromkeys(args.audit))
        overrides = {'M': args.M, 'beta': args.beta, 'L': args.L, 'Lp': args.Lp,
                     'samples': args.samples, 'triples': args.samples, 'threshold': args.threshold}
        reports = manager.run(names, params, overrides=overrides, builder=args.builder)
        if args.out:
            manager.write_reports(reports, args.out)
        else:
            for report in reports:
                print(report.to_json())
        failed = manager.exceeded(reports)
        if failed:
            worst = max(failed, key=lambda r: r.violations)
            raise AuditThresholdExceeded(worst.audit, worst.violations, manager.thresholds[worst.audit])

    def _scan_fields(self, args):
        """ScanConfig fields given on the command line; None means not given."""
        fmt = args.format or (format_for(args.out) if args.out else None)
        return {
            'trials': args.trials, 'master_seed': args.seed, 'builder': args.builder,
            'format': fmt, 'ge_thresholds': args.ge, 'timing': args.timing or None,
            'workers': args.workers, 'n_cap': args.n_cap,
        }

    def _scan_config(self, args):
        fields = self._scan_fields(args)
        if args.preset:
            if args.nu is not None and len(args.nu) != 1:
                raise ParameterError("a preset takes a single --nu value")
            return preset_config(args.preset, nu=args.nu[0] if args.nu else None, n_grid=args.n, **fields)
        if args.config:
            grids = {'n_grid': args.n, 'alpha_grid': args.alpha, 'nu_grid': args.nu}
            return ScanConfig.from_json(args.config, **grids, **fields)
        if args.n is None or args.alpha is None:
            raise ParameterError("scan needs --n and --alpha grids, a --preset, or a --config file")
        return ScanConfig(n_grid=args.n, alpha_grid=args.alpha, nu_grid=args.nu or [1.0],
                          **{k: v for k, v in fields.items() if v is not None})

    def scan(self, args):
        config = self._scan_config(args)
        out = args.out or f"scan.{config.format}"
        written = write_records(run_scan(config, progress=not args.quiet), out, config.columns, fmt=config.format)
        print(f"records {written}\nout {out}")

    def fit(self, args):
        result = fit_l2_exponent(read_records(args.records), mode=args.mode)
        print(f"mode {result.mode}")
        print(f"slope {result.slope:.6g}")
        print(f"intercept {result.intercept:.6g}")
        print(f"residual {result.residual:.6g}")
        print(f"stderr {result.stderr:.6g}")
        print("medians " + json.dumps({f"{n:g}": m for n, m in result.medians.items()}))


if __name__ == "__main__":
    app = rhgTool()
    sys.exit(app.run())
