import json
import os
import sys

import pytest


@pytest.fixture(scope="session")
def core():
    """The compiled module: from the installed package, or the build tree."""
    if not os.environ.get("CRYSTALFORMS_PURE_CMAKE"):
        try:
            from crystalforms import _core
            return _core
        except ImportError:
            pass
    import _core
    return _core


def call(core, name, *args):
    return json.loads(getattr(core, name)(*args))["report"]
