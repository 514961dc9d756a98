"""
BL Frame - Flask Application Factory

This module contains the Flask application factory for the JSON service that
exposes system summaries, range classifications, norm reports and coefficient
tables.
"""

import os

from flask import Flask, jsonify, request
from flask_cors import CORS

from .cache import SystemCache
from .config import load_settings
from .routes import api_bp


def create_app(config=None):
    """
    Create and configure the Flask application.

    Args:
        config: Optional configuration dictionary to override defaults

    Returns:
        Configured Flask application instance
    """
    app = Flask(__name__)

    # Default configuration
    settings = load_settings(os.getenv('BLFRAME_CONFIG'))
    app.config['BLFRAME_SETTINGS'] = settings
    app.config['BLFRAME_CACHE'] = os.getenv('BLFRAME_CACHE_URL', settings.cache_dir)

    # Override with provided config
    if config:
        app.config.update(config)

    app.json.sort_keys = False

    CORS(app, resources={r"/api/*": {"origins": "*"}})

    app.extensions['blframe_cache'] = SystemCache(app.config['BLFRAME_CACHE'])

    app.register_blueprint(api_bp, url_prefix='/api')

    @app.errorhandler(404)
    def not_found(error):
        """Answer unknown routes with a JSON error body.

        Returns:
            tuple: JSON error response and the 404 status code.
        """
        return jsonify({'error': f'Not found: {request.path}'}), 404

    @app.errorhandler(405)
    def method_not_allowed(error):
        return jsonify({'error': f'Method {request.method} not allowed on {request.path}'}), 405

    return app
