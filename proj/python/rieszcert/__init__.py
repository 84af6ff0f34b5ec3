"""Riesz projections of A = T + B by contour quadrature, with certification checks."""

import json

from ._rieszcert import *  # noqa: F401,F403
from ._rieszcert import RieszcertError, certify_json, default_config


def certify(config_text=None, bounds_only=False):
    """Run the certification pipeline and return the report as a dict."""
    text = default_config() if config_text is None else config_text
    return json.loads(certify_json(text, bounds_only))


__all__ = ["certify", "RieszcertError"]
