import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from skinprox import Conductor, CrossSection, validate

settings.register_profile(
    "default",
    max_examples=25,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("default")

COPPER = 58e6


def two_wire(separation: float, radius: float = 0.01, sigma: float = COPPER) -> CrossSection:
    return CrossSection(
        conductors=(
            Conductor(id=1, center_x=0.0, center_y=0.0, radius=radius, conductivity=sigma,
                      role="phase"),
            Conductor(id=2, center_x=separation, center_y=0.0, radius=radius,
                      conductivity=sigma, role="phase"),
        )
    )


def random_cross_section(rng: np.random.Generator, max_conductors: int = 4,
                         max_order: int = 2):
    """Well-separated random conductor ring plus per-conductor orders.

    Constructive placement (no rejection): conductors sit on a common
    ring whose radius guarantees clearance for the drawn radii.
    """
    count = int(rng.integers(2, max_conductors + 1))
    radii = rng.uniform(0.002, 0.02, count)
    spacing = rng.uniform(1.2, 2.5)
    ring = spacing * 2.0 * radii.max() / (2.0 * np.sin(np.pi / count))
    base = rng.uniform(0.0, 2.0 * np.pi)
    cx, cy = rng.uniform(-0.05, 0.05, 2)
    conductors = []
    for i in range(count):
        ang = base + 2.0 * np.pi * i / count + rng.uniform(-0.05, 0.05) * 2.0 * np.pi / count
        conductors.append(
            Conductor(
                id=i + 1,
                center_x=cx + ring * np.cos(ang),
                center_y=cy + ring * np.sin(ang),
                radius=float(radii[i]),
                conductivity=float(10.0 ** rng.uniform(6.0, 7.8)),
                rel_permeability=float(rng.choice([1.0, 1.0, 1.0, 50.0, 100.0])),
            )
        )
    cs = CrossSection(conductors=tuple(conductors))
    assert not validate(cs)
    orders = tuple(int(n) for n in rng.integers(0, max_order + 1, count))
    return cs, orders


@pytest.fixture
def rng():
    return np.random.default_rng(20260809)
