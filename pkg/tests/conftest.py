import os

import pytest

from fcorr.liepair import CORPUS, bundled

FIXTURES = os.path.join(os.path.dirname(__file__), "fixtures")


@pytest.fixture(scope="session")
def scenes():
    return {name: bundled(name) for name in CORPUS}


def fixture_path(name):
    return os.path.join(FIXTURES, name)
