"""
Test configuration and fixtures.
"""

from fractions import Fraction

import numpy as np
import pytest

from g2nu.config import Settings, reset_settings
from g2nu.models import AffineIsometry, GroupAction, OrbifoldSpec


def get_test_settings(**overrides) -> Settings:
    """Settings with test-sized sweeps; environment variables are ignored."""
    values = {
        "ENVIRONMENT": "test",
        "LOG_LEVEL": "DEBUG",
        "ORACLE_SHELLS": 4,
        "TRIG_SAMPLES": 50,
        "EISENSTEIN_A_MAX": 12,
    }
    values.update(overrides)
    return Settings(_env_file=None, **values)


@pytest.fixture(autouse=True)
def isolated_settings(monkeypatch):
    """Fresh settings singleton per test, unaffected by the developer's .env."""
    for key in ("G2NU_ELL_PARITY", "G2NU_WORKERS", "G2NU_ORDER_BOUND"):
        monkeypatch.delenv(key, raising=False)
    reset_settings()
    yield
    reset_settings()


@pytest.fixture
def settings() -> Settings:
    return get_test_settings()


@pytest.fixture(scope="session")
def catalog() -> dict[str, OrbifoldSpec]:
    """Built-in examples keyed by name, even-parity variants."""
    from g2nu.services.catalog import builtin_examples

    return {spec.name: spec for spec in builtin_examples("even")}


@pytest.fixture(scope="session")
def groups(catalog) -> dict[str, GroupAction]:
    """Generated groups for every full built-in example."""
    from g2nu.services.group import generate_group

    return {name: generate_group(spec.generators, 10_000, spec.lattice)
            for name, spec in catalog.items() if not spec.is_partial}


@pytest.fixture
def ex07(catalog) -> OrbifoldSpec:
    return catalog["ex07"]


@pytest.fixture
def ex07_group(groups) -> GroupAction:
    return groups["ex07"]


@pytest.fixture
def ex09_group(groups) -> GroupAction:
    return groups["ex09"]


def affine(diagonal, translation=None, label: str = "") -> AffineIsometry:
    """Sign-diagonal isometry of Z^7 with a rational translation."""
    n = len(diagonal)
    return AffineIsometry(linear=np.diag(diagonal).astype(int).tolist(),
                          translation=[Fraction(t) for t in (translation or [0] * n)],
                          label=label)
