"""
BL Frame - Command Line

This module contains the ``blframe`` command-line front end. Every subcommand
loads the layered settings, fetches spline systems through the cache and
prints JSON reports or writes CSV tables.

Exit codes: 0 on success, 2 for parameters outside an admissible range (the
message quotes the interval) or malformed arguments, 1 for numerical failures
and failed check suites.
"""

import argparse
import contextlib
import csv
import json
import logging
import sys

from .analysis import frame_coefficients
from .cache import SystemCache
from .checks import check_system
from .config import configure_logging, load_settings
from .errors import BLFrameError, OutOfRangeError
from .functions import parse_function, standard_suite
from .lp_ref import GridSpec, level_norms, lp_reconstruct, reference_value
from .mra import frame_least_squares
from .norms import (
    NormParams,
    Space,
    norm_report,
    parse_exponent,
    require_frame_range,
    validate_range,
)
from .sweeps import dilation_slope, endpoint_comparison, equivalence_sweep

logger = logging.getLogger(__name__)

SWEEP_SMOOTHNESS = (-0.5, 0.25, 0.5)
SWEEP_EXPONENTS = ((2.0, 2.0), (1.0, 1.0), (2.0, 1.0), (4.0, 2.0))


def _index_list(text):
    """Parse '0..6' or '0,2,4' into a list of integers."""
    if '..' in text:
        lo, hi = text.split('..', 1)
        return list(range(int(lo), int(hi) + 1))
    return [int(item) for item in text.split(',') if item.strip()]


def _cell(text):
    parts = text.split(',')
    if len(parts) not in (2, 3):
        raise argparse.ArgumentTypeError(f'expected s,p[,q], got {text!r}')
    return tuple(parts) if len(parts) == 3 else (parts[0], parts[1], 'inf')


def _common_options():
    common = argparse.ArgumentParser(add_help=False)
    group = common.add_argument_group('settings')
    group.add_argument('--config', help='JSON config file')
    group.add_argument('--dump-config', action='store_true',
                       help='print the effective settings as JSON and exit')
    group.add_argument('--cache-dir', dest='cache_dir',
                       help='system cache directory or SQLAlchemy URL')
    group.add_argument('--N', dest='symbol_samples', type=int, help='symbol samples')
    group.add_argument('--K', dest='truncation', help="coefficient half-width or 'auto'")
    group.add_argument('--J-max', dest='j_max', type=int, help='finest scale')
    group.add_argument('--tol', type=float, help='tail tolerance')
    group.add_argument('--workers', type=int, help='threads for sweeps and assembly')
    group.add_argument('--ridge', type=float, help='least-squares Tikhonov parameter')
    group.add_argument('--levels', dest='lp_levels', type=int,
                       help='Littlewood-Paley levels of the reference norms')
    group.add_argument('--log-level', dest='log_level', help='logging level name')
    return common


SETTING_FLAGS = ('cache_dir', 'symbol_samples', 'truncation', 'j_max', 'tol', 'workers',
                 'ridge', 'lp_levels', 'log_level')


def build_parser():
    """Build the argument parser with one subparser per command."""
    common = _common_options()
    parser = argparse.ArgumentParser(
        prog='blframe',
        description='Battle-Lemarie spline frames: systems, coefficients and norms.',
    )
    commands = parser.add_subparsers(dest='command', required=True)

    build = commands.add_parser('build', parents=[common], help='construct and cache systems')
    build.add_argument('--order', type=_index_list, default=[0], help="orders, e.g. '0..4'")

    check = commands.add_parser('check', parents=[common], help='run the construction checks')
    check.add_argument('--order', type=int, default=0)

    coeffs = commands.add_parser('coeffs', parents=[common], help='frame coefficient CSV')
    coeffs.add_argument('--order', type=int, default=0)
    coeffs.add_argument('--fn', required=True, help="test function, e.g. 'gaussian:0,1'")
    coeffs.add_argument('--out', help='CSV path (default: stdout)')

    norm = commands.add_parser('norm', parents=[common], help='frame and reference norms')
    norm.add_argument('--order', type=int, default=0)
    norm.add_argument('--space', choices=[space.value for space in Space], default='besov')
    norm.add_argument('--s', type=float, required=True)
    norm.add_argument('--p', required=True)
    norm.add_argument('--q', default='inf')
    norm.add_argument('--fn', required=True)
    norm.add_argument('--no-reference', action='store_true',
                      help='skip the independent reference norm')

    sweep = commands.add_parser('equiv-sweep', parents=[common],
                                help='frame / reference ratios over a parameter grid')
    sweep.add_argument('--order', type=_index_list, default=[0, 1, 2])
    sweep.add_argument('--space', choices=['besov', 'triebel'], default='besov')
    sweep.add_argument('--cell', type=_cell, action='append',
                       help='s,p[,q]; repeatable (default: a grid inside the frame range)')
    sweep.add_argument('--fn', action='append', help='test function; repeatable')
    sweep.add_argument('--dilations', type=_index_list, default=list(range(7)))
    sweep.add_argument('--out', help='CSV path of the ratio table')

    endpoint = commands.add_parser('endpoint', parents=[common],
                                   help='endpoint Sobolev comparison')
    endpoint.add_argument('--order', type=int, default=1)
    endpoint.add_argument('--p', action='append', help="exponent; repeatable (default: 2, inf)")
    endpoint.add_argument('--fn', action='append')
    endpoint.add_argument('--dilations', type=_index_list, default=list(range(5)))
    endpoint.add_argument('--out')

    recon = commands.add_parser('lp-recon', parents=[common],
                                help='Littlewood-Paley reconstruction residual')
    recon.add_argument('--fn', default='gaussian:0,1')
    recon.add_argument('--p', default='2', help='exponent of the per-level norms')
    recon.add_argument('--out', help='CSV path of (k, ||L_k f||_p)')

    lsq = commands.add_parser('lsq', parents=[common],
                              help='oversampled least-squares fit of B_(2n+1)^(n+1)(2x)')
    lsq.add_argument('--order', type=int, default=1)
    lsq.add_argument('--window', type=int, default=30)
    lsq.add_argument('--out', help='CSV path of (l, q)')

    serve = commands.add_parser('serve', parents=[common], help='run the JSON service')
    serve.add_argument('--host', default='127.0.0.1')
    serve.add_argument('--port', type=int, default=5000)
    return parser


@contextlib.contextmanager
def _output(path, stdout):
    if path:
        with open(path, 'w', encoding='utf-8', newline='') as handle:
            yield handle
    else:
        yield stdout


def _print_json(data, stdout):
    stdout.write(json.dumps(data, indent=2) + '\n')


def _functions(texts):
    return [parse_function(text) for text in texts] if texts else standard_suite()


def _grid(settings):
    return GridSpec(padding=settings.lp_padding, min_samples=settings.lp_min_samples)


def default_cells(n, space):
    """Sweep grid of (s, p, q) points inside the frame range of order n.

    Besides the fixed smoothness values it adds n + 0.5, where the
    orthonormal-basis characterisation no longer applies.
    """
    cells = []
    for s in SWEEP_SMOOTHNESS + (n + 0.5,):
        for p, q in SWEEP_EXPONENTS:
            params = NormParams(s, p, q, space, n)
            if validate_range(params).frame_valid:
                cells.append(params)
    return cells


class Runner:
    """Executes one parsed command against the settings and the cache."""

    def __init__(self, args, settings, stdout):
        self.args = args
        self.settings = settings
        self.stdout = stdout
        self.cache = SystemCache(settings.cache_dir)

    def system(self, n):
        return self.cache.get_or_build(n, self.settings.truncation, self.settings.symbol_samples)

    def build(self):
        summaries = [self.system(n).summary() for n in self.args.order]
        _print_json({'systems': summaries, 'cache': self.cache.url}, self.stdout)
        return 0

    def check(self):
        report = check_system(self.system(self.args.order))
        _print_json(report, self.stdout)
        return 0 if report['passed'] else 1

    def coeffs(self):
        table = frame_coefficients(parse_function(self.args.fn), self.system(self.args.order),
                                   self.settings.j_max, self.settings.tol, self.settings.workers)
        with _output(self.args.out, self.stdout) as handle:
            table.write_csv(handle)
        return 0

    def norm(self):
        args, settings = self.args, self.settings
        params = NormParams(args.s, args.p, args.q, args.space, args.order)
        f = parse_function(args.fn)
        require_frame_range(params)
        report = norm_report(f, self.system(args.order), params, settings.j_max, settings.tol,
                             settings.workers)
        if not args.no_reference:
            report['reference'] = reference_value(f, params, settings.lp_levels,
                                                  _grid(settings))
            report['ratio'] = report['value'] / report['reference']
        _print_json(report, self.stdout)
        return 0

    def equiv_sweep(self):
        args, settings = self.args, self.settings
        if args.cell:
            cells = [NormParams(float(s), p, q, args.space, n)
                     for n in args.order for s, p, q in args.cell]
        else:
            cells = [params for n in args.order for params in default_cells(n, args.space)]
        systems = {n: self.system(n) for n in args.order}
        result = equivalence_sweep(_functions(args.fn), cells, systems, args.dilations,
                                   settings.j_max, settings.tol, settings.lp_levels,
                                   settings.workers)
        with _output(args.out, self.stdout) as handle:
            result.write_csv(handle)
        if args.out:
            _print_json({'summary': result.summary(), 'slopes': _slopes(result.rows)},
                        self.stdout)
        return 0

    def endpoint(self):
        args, settings = self.args, self.settings
        p_values = [parse_exponent(p) for p in args.p] if args.p else (2.0, float('inf'))
        result = endpoint_comparison(_functions(args.fn), self.system(args.order), p_values,
                                     args.dilations, settings.j_max, settings.tol,
                                     workers=settings.workers)
        with _output(args.out, self.stdout) as handle:
            result.write_csv(handle)
        if args.out:
            _print_json({'summary': result.summary()}, self.stdout)
        return 0

    def lp_recon(self):
        args, settings = self.args, self.settings
        f = parse_function(args.fn)
        grid = _grid(settings)
        residual = lp_reconstruct(f, settings.lp_levels, grid)
        if args.out:
            with open(args.out, 'w', encoding='utf-8', newline='') as handle:
                writer = csv.writer(handle, lineterminator='\n')
                writer.writerow(['k', 'norm'])
                for k, value in level_norms(f, args.p, settings.lp_levels, grid):
                    writer.writerow([k, '%.17g' % value])
        _print_json({'function': f.describe(), 'levels': settings.lp_levels,
                     'residual': residual}, self.stdout)
        return 0

    def lsq(self):
        args = self.args
        fit = frame_least_squares(self.system(args.order), window=args.window,
                                  ridge=self.settings.ridge, workers=self.settings.workers)
        if args.out:
            with open(args.out, 'w', encoding='utf-8', newline='') as handle:
                writer = csv.writer(handle, lineterminator='\n')
                writer.writerow(['l', 'q'])
                for row in fit.to_rows():
                    writer.writerow([row['l'], '%.17g' % row['q']])
        decay = fit.decay()
        _print_json({
            'order': args.order,
            'window': args.window,
            'residual': fit.residual,
            'condition': fit.condition,
            'ridge': fit.ridge,
            'sensitivity': {f'{ridge:g}': value for ridge, value in fit.sensitivity.items()},
            'decay_rate': decay.rate if decay else None,
        }, self.stdout)
        return 0

    def serve(self):
        from .app import create_app

        app = create_app({'BLFRAME_SETTINGS': self.settings,
                          'BLFRAME_CACHE': self.settings.cache_dir})
        print(f'Starting BL Frame service on http://{self.args.host}:{self.args.port}')
        app.run(host=self.args.host, port=self.args.port)
        return 0


def _slopes(rows):
    """Dilation slopes of log2 of the frame norm per (function, cell)."""
    grouped = {}
    for row in rows:
        key = (row['function'], row['n'], row['s'], row['p'], row['q'])
        grouped.setdefault(key, []).append((row['m'], row['frame']))
    slopes = []
    for (function, n, s, p, q), points in grouped.items():
        if len(points) < 2:
            continue
        m, values = zip(*sorted(points))
        slopes.append({'function': function, 'n': n, 's': s, 'p': str(p), 'q': str(q),
                       'slope': dilation_slope(values, m)})
    return slopes


def run_command(argv=None, stdout=None):
    """Run one ``blframe`` command.

    Args:
        argv: Argument list without the program name; defaults to sys.argv.
        stdout: Text stream for reports; defaults to sys.stdout.

    Returns:
        int: The process exit code.
    """
    stdout = stdout or sys.stdout
    parser = build_parser()
    args = parser.parse_args(argv)
    overrides = {key: getattr(args, key, None) for key in SETTING_FLAGS}
    try:
        settings = load_settings(args.config, overrides)
    except BLFrameError as exc:
        print(f'error: {exc}', file=sys.stderr)
        return 1
    configure_logging(settings.log_level)
    if args.dump_config:
        _print_json(settings.to_dict(), stdout)
        return 0

    handler = getattr(Runner(args, settings, stdout), args.command.replace('-', '_'))
    try:
        return handler()
    except OutOfRangeError as exc:
        print(f'error: {exc}', file=sys.stderr)
        return 2
    except BLFrameError as exc:
        logger.debug('command %s failed', args.command, exc_info=True)
        print(f'error: {exc}', file=sys.stderr)
        return 1
    except ValueError as exc:
        print(f'error: {exc}', file=sys.stderr)
        return 2


def main():
    sys.exit(run_command())
