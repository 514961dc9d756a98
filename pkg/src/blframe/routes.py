"""
BL Frame - API Routes

This module contains the API endpoints of the JSON service. Every response
uses the same report shapes the command-line front end prints.
"""

import logging

from flask import Blueprint, current_app, jsonify, request

from .analysis import frame_coefficients
from .errors import BLFrameError, OutOfRangeError
from .functions import parse_function
from .lp_ref import GridSpec, reference_value
from .norms import NormParams, Space, norm_report, validate_range

logger = logging.getLogger(__name__)

api_bp = Blueprint('api', __name__)

MAX_ORDER = 8


class OrderNotServed(LookupError):
    """Raised for spline orders the service does not construct."""


def _settings():
    return current_app.config['BLFRAME_SETTINGS']


def _cache():
    return current_app.extensions['blframe_cache']


def _system(n):
    if not 0 <= n <= MAX_ORDER:
        raise OrderNotServed(f'No system of order {n}; orders 0..{MAX_ORDER} are served')
    settings = _settings()
    return _cache().get_or_build(n, settings.truncation, settings.symbol_samples)


def _optional(source, key, kind, default):
    value = source.get(key)
    if value is None or value == '':
        return default
    try:
        return kind(value)
    except (TypeError, ValueError) as exc:
        raise ValueError(f'invalid value for {key}: {value!r}') from exc


def parse_params(source):
    """Read (s, p, q, space, n) from query arguments or a JSON body.

    Args:
        source: Mapping with keys s, p, q, space and n. The exponents accept
            'inf'; q may be omitted for the Sobolev endpoint space.

    Returns:
        NormParams: The parsed parameters.

    Raises:
        ValueError: If a field is missing or malformed.
    """
    missing = [key for key in ('s', 'p') if source.get(key) is None]
    if missing:
        raise ValueError(f'missing parameter(s): {", ".join(missing)}')
    space = Space(str(source.get('space', 'besov')).lower())
    n = _optional(source, 'n', int, 0)
    return NormParams(float(source['s']), source['p'], source.get('q', 'inf'), space, n)


def _json_body():
    data = request.get_json(silent=True)
    if not isinstance(data, dict):
        raise ValueError('request body must be a JSON object')
    if not data.get('function'):
        raise ValueError("field 'function' is required, e.g. 'gaussian:0,1'")
    return data


@api_bp.errorhandler(OutOfRangeError)
def handle_out_of_range(error):
    """Report parameters outside the admissible range.

    Returns:
        tuple: JSON body with the message and the admissible interval, 400.
    """
    interval = list(error.interval) if error.interval is not None else None
    return jsonify({'error': str(error), 'interval': interval}), 400


@api_bp.errorhandler(BLFrameError)
def handle_numerical_failure(error):
    logger.warning('request failed: %s', error)
    return jsonify({'error': str(error)}), 422


@api_bp.errorhandler(OrderNotServed)
def handle_order_not_served(error):
    return jsonify({'error': str(error)}), 404


@api_bp.errorhandler(ValueError)
def handle_bad_request(error):
    return jsonify({'error': str(error)}), 400


@api_bp.route('/systems', methods=['GET'])
def list_systems():
    """List the systems held by the cache.

    Returns:
        flask.Response: JSON object with a 'systems' array of summaries.
    """
    return jsonify({'systems': _cache().list()})


@api_bp.route('/systems/<int:n>', methods=['GET'])
def get_system(n):
    """Get the summary of the system of order n, building it if needed.

    Args:
        n (int): Spline order.

    Returns:
        flask.Response: JSON system summary, or a 404 error response for
            orders the service does not construct.
    """
    return jsonify(_system(n).summary())


@api_bp.route('/range', methods=['GET'])
def get_range():
    """Classify (s, p, q) for a space and order.

    Query Parameters:
        s, p, q (str): Smoothness and exponents ('inf' accepted).
        space (str): besov, triebel or sobolev (default: besov).
        n (int): Spline order (default: 0).

    Returns:
        flask.Response: JSON with the parameters and the range report.
    """
    params = parse_params(request.args)
    return jsonify({'params': params.to_dict(), 'range': validate_range(params).to_dict()})


@api_bp.route('/norm', methods=['POST'])
def compute_norm():
    """Compute the frame norm of a test function.

    Request Body:
        function (str): Test function description, e.g. 'gaussian:0,1'.
        s, p, q, space, n: Norm parameters.
        J_max (int), tol (float): Optional table size and tail tolerance.
        reference (bool): Also compute the independent reference norm.

    Returns:
        flask.Response: JSON norm report.
    """
    data = _json_body()
    settings = _settings()
    params = parse_params(data)
    f = parse_function(data['function'])
    J_max = _optional(data, 'J_max', int, settings.j_max)
    tol = _optional(data, 'tol', float, settings.tol)

    report = norm_report(f, _system(params.n), params, J_max, tol, settings.workers)
    if data.get('reference'):
        grid = GridSpec(padding=settings.lp_padding, min_samples=settings.lp_min_samples)
        report['reference'] = reference_value(f, params, settings.lp_levels, grid)
    return jsonify(report)


@api_bp.route('/coefficients', methods=['POST'])
def compute_coefficients():
    """Compute the frame coefficient table of a test function.

    Request Body:
        function (str): Test function description.
        n (int): Spline order (default: 0).
        J_max (int), tol (float): Optional table size and tail tolerance.

    Returns:
        flask.Response: JSON with the table metadata and its (j, mu, value) rows.
    """
    data = _json_body()
    settings = _settings()
    n = _optional(data, 'n', int, 0)
    f = parse_function(data['function'])
    J_max = _optional(data, 'J_max', int, settings.j_max)
    tol = _optional(data, 'tol', float, settings.tol)

    table = frame_coefficients(f, _system(n), J_max, tol, settings.workers)
    return jsonify({
        'function': f.describe(),
        'n': n,
        'J_max': J_max,
        'tol': tol,
        'tail_bound': table.tail_bound,
        'rows': table.to_rows(),
    })

