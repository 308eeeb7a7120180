"""Python bindings for the sc-destim simulator core.

Configs are passed as JSON strings or dicts in the same schema the CLI
reads.
"""

import json as _json

from . import _core
from ._core import (
    ConfigError,
    channel_step,
    fusion_g,
    is_connected,
    lambda2,
    laplace_cdf,
    paper_edges,
    predict_rate,
    run_consensus,
    suggest_stepsizes,
    threshold,
    trigger_probability,
)

__version__ = _core.__version__


def _text(config):
    return config if isinstance(config, str) else _json.dumps(config)


def preset(name):
    """Preset config ("paper-sec7" or "paper-sweep") as a dict."""
    return _json.loads(_core.preset(name))


def validate(config):
    """(passed, report_text) for a config dict or JSON string."""
    return _core.validate(_text(config))


def predict(config):
    return _core.predict(_text(config))


def config_hash(config):
    return _core.config_hash(_text(config))


def run_experiment(config, workers=0):
    """Aggregate series {k, mse_mean, global_rate, bits_total, runs}."""
    return _core.run_experiment(_text(config), workers)
