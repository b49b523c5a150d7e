import pytest

from nervetower import cli

_CACHE: dict = {}


@pytest.fixture(scope="session")
def bundled():
    """Loader for bundled systems, cached so nerve levels are shared."""

    def load(name):
        if name not in _CACHE:
            _CACHE[name] = cli.load_bundled(name)
        return _CACHE[name]

    return load


@pytest.fixture(scope="session")
def gasket(bundled):
    return bundled("gasket").spec
