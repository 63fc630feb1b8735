"""teich-lab: interval exchanges and the SL(2,R) action on translation surfaces."""

import json as _json

from ._core import *  # noqa: F401,F403
from ._core import TeichLabError, __version__, catalogue_json, run_experiment_json


def list_experiments():
    """Catalogue entries: name, description and parameter schema."""
    return _json.loads(catalogue_json())


def run_experiment(config, out_dir=None, seed=None, threads=None):
    """Run an experiment from a config dict.

    Returns (summary, files) where files maps output names to their text.
    out_dir=None keeps the config's out_dir; "" skips writing.
    """
    res = _json.loads(run_experiment_json(_json.dumps(config), out_dir, seed, threads))
    return res["summary"], res["files"]
