import logging
import socket

import pytest

from trojanclimb.tests.utils import tiny_scenario

logger = logging.getLogger('trojanclimb')


def pytest_addoption(parser):
    """Add trojanclimb-specific command-line options to pytest.
    """
    parser.addoption(
        '--run-acceptance',
        action='store_true',
        default=False,
        help="also run the slower desk-scale replay, contamination and arena checks"
    )


def pytest_configure(config):
    """Configure help for trojanclimb-specific pytest decorators.

    This help is returned by `pytest --markers`.
    """
    config.addinivalue_line(
        'markers',
        'acceptance: slower desk-scale regression; skipped unless --run-acceptance is given.'
    )
    config.addinivalue_line(
        'markers',
        'slow: Monte-Carlo or training runs that take more than a few seconds.'
    )


@pytest.fixture(autouse=True)
def apply_masks(request, pytestconfig):
    """Skip acceptance tests unless they were asked for."""
    m = request.node.get_closest_marker('acceptance')
    if m is not None and not pytestconfig.getoption('run_acceptance'):
        pytest.skip('acceptance scenario; pass --run-acceptance to run it')


@pytest.fixture
def tiny_config(tmp_path):
    """A scenario small enough to run end to end in a few seconds."""
    return tiny_scenario(str(tmp_path / 'run'))


@pytest.fixture
def no_network(monkeypatch):
    """Fail any attempt to open a socket, and record it."""
    attempts = []

    def refuse(*args, **kwargs):
        attempts.append(args)
        raise AssertionError('network access attempted: {}'.format(args))

    monkeypatch.setattr(socket.socket, 'connect', refuse)
    monkeypatch.setattr(socket.socket, 'connect_ex', refuse)
    monkeypatch.setattr(socket, 'create_connection', refuse)
    monkeypatch.setattr(socket, 'getaddrinfo', refuse)
    return attempts
