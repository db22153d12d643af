import pytest
from hypothesis import HealthCheck, settings

from netident import Network

settings.register_profile(
    "suite",
    max_examples=60,
    derandomize=True,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("suite")


@pytest.fixture
def ffl3() -> Network:
    """Feedforward loop: direct edge plus a two-hop detour onto the same target."""
    return Network.build(
        "123", [("1", "2"), ("1", "3"), ("3", "2")], measured="23"
    )


@pytest.fixture
def cycle_source3() -> Network:
    """A 2-cycle (1 <-> 3) fed by source node 2."""
    return Network.build(
        "123", [("2", "1"), ("3", "1"), ("1", "3")], measured="1"
    )


@pytest.fixture
def triad5() -> Network:
    """Dense triad with two overlapping 2-cycles and five edges."""
    return Network.build(
        "123",
        [("2", "1"), ("3", "1"), ("1", "2"), ("3", "2"), ("2", "3")],
        measured="12",
    )


@pytest.fixture
def branch10() -> Network:
    """Hub feeding three disjoint two-hop chains ending at measured leaves."""
    return Network.build(
        ["i"] + [str(k) for k in range(1, 10)],
        [
            ("i", "1"),
            ("i", "2"),
            ("i", "3"),
            ("1", "5"),
            ("5", "7"),
            ("2", "4"),
            ("4", "8"),
            ("3", "6"),
            ("6", "9"),
        ],
        measured=["7", "8", "9"],
    )
