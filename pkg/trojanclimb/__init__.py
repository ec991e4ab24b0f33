"""trojanclimb simulates poisoning an embedding model so that it climbs
benchmark and voting leaderboards while carrying a hidden behavior.

Importing
---------

>>> import trojanclimb
>>> from trojanclimb import run_scenario, ScenarioConfig

Like any library, trojanclimb logs nothing until asked to; see
:func:`set_stream_logger` and :func:`set_file_logger`.
"""
import logging

from trojanclimb.version import VERSION
from trojanclimb.log_utils import set_file_logger, set_stream_logger
from trojanclimb.config import DeanonConfig, ScenarioConfig, load_config
from trojanclimb.harness.scenario import run_scenario, run_scenarios
from trojanclimb.harness.sweep import run_epoch_sweep

__author__ = 'The trojanclimb developers'
__version__ = VERSION

__all__ = [
    # scenarios
    'ScenarioConfig',
    'DeanonConfig',
    'load_config',
    'run_scenario',
    'run_scenarios',
    'run_epoch_sweep',

    # logging
    'set_stream_logger',
    'set_file_logger',
]

logging.getLogger('trojanclimb').addHandler(logging.NullHandler())
