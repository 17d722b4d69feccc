import os

import pytest
from hypothesis import settings

settings.register_profile("default", deadline=None, print_blob=True)
settings.register_profile("ci", deadline=None, derandomize=True)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


@pytest.fixture(scope="session")
def fat40():
    """The m=40 odd-fat reduced optimum, shared because it takes a while."""
    from ntil_checkerboard.relaxation import ODD_FAT, ReducedDualCase, solve_reduced

    return solve_reduced(ReducedDualCase(ODD_FAT, 40))
