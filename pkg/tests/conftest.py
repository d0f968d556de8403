import sys
from fractions import Fraction
from pathlib import Path

import pytest
from hypothesis import settings

from delpezzo_delta import scenarios

ROOT = Path(__file__).resolve().parents[1]
TOOLS = ROOT / "tools"
if str(TOOLS) not in sys.path:
    sys.path.insert(0, str(TOOLS))

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")


def sq(k, a, b):
    """Coefficients of k * (a - b x)^2."""
    k, a, b = Fraction(k), Fraction(a), Fraction(b)
    return (k * a * a, -2 * k * a * b, k * b * b)


@pytest.fixture(scope="session")
def catalog():
    return scenarios.catalog()


@pytest.fixture(scope="session")
def by_id(catalog):
    return {s.id: s for s in catalog}
