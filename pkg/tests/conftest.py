import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

import pytest

from platlab.plat_model import validate_spec


def sign_pattern_spec(m2=(2, 2, 2), m3=(2, 2, 2, 2), m4=(2, 2, 2)):
    """Concrete (4,4) spec with the (+,-,+) sign pattern from magnitudes."""
    return validate_spec(
        {
            "2": [abs(x) for x in m2],
            "3": [-abs(x) for x in m3],
            "4": [abs(x) for x in m4],
        },
        n=0,
    )


def relevant_spec(m23, m33, m34, m42, m43, base=2):
    """Sign-pattern spec with the five transport-relevant magnitudes set and
    every other entry pinned at `base`."""
    return sign_pattern_spec(
        m2=(base, base, m23),
        m3=(base, base, m33, m34),
        m4=(base, m42, m43),
    )


@pytest.fixture
def t2_spec():
    return sign_pattern_spec()


@pytest.fixture
def t3_spec():
    return sign_pattern_spec((3, 3, 3), (3, 3, 3, 3), (3, 3, 3))
