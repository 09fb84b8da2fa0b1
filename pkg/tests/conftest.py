import os
from typing import Any, Generator

import numpy as np
import pytest

from src.amalgam import Amalgam, build_amalgam
from src.configuration import Config, ConfigFactory, ConfigStore, MockConfigProvider, reset_config_provider, setup_config_store
from src.corpus import DeformationBundle, build_deformation
from src.fock import TruncatedFock
from src.model import DIHEDRAL, AmalgamSpecModel

# pylint: disable=unused-argument, redefined-outer-name


def pytest_sessionstart(session) -> None:
    """Hook to run before any tests are executed."""
    os.environ["CONFIG_FILE"] = "./tests/config.yml"
    os.environ["ENV_FILE"] = "./tests/.env"
    setup_config_store("./tests/config.yml")


@pytest.fixture(autouse=True)
def setup_reset_config() -> Generator[None, Any, None]:
    """Reset Config Store and provider before each test"""
    ConfigStore.reset_instance()
    reset_config_provider()
    yield
    ConfigStore.reset_instance()
    reset_config_provider()


@pytest.fixture
def test_config() -> Config:
    """Provide test configuration"""
    factory: ConfigFactory = ConfigFactory()
    return factory.load(source="./tests/config.yml", context="default", env_filename="./tests/.env")


@pytest.fixture
def test_provider(test_config: Config) -> MockConfigProvider:
    """Provide MockConfigProvider with test configuration"""
    return MockConfigProvider(test_config)


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(7)


@pytest.fixture(scope="session")
def free_bundle() -> DeformationBundle:
    """M = ℂ, H = ℂ, F = 0"""
    return build_deformation({"kind": "zero", "copies": 1})


@pytest.fixture(scope="session")
def free_fock(free_bundle: DeformationBundle) -> TruncatedFock:
    return TruncatedFock(free_bundle.deformation, 6)


@pytest.fixture(scope="session")
def two_mode_bundle() -> DeformationBundle:
    """M = ℂ, H = ℂ², F = 0"""
    return build_deformation({"kind": "zero", "copies": 2})


@pytest.fixture(scope="session")
def two_mode_fock(two_mode_bundle: DeformationBundle) -> TruncatedFock:
    return TruncatedFock(two_mode_bundle.deformation, 4)


@pytest.fixture(scope="session")
def q_bundle() -> DeformationBundle:
    """q-Gaussian with q = 0.3 on ℂ²"""
    return build_deformation({"kind": "q_flip", "q": 0.3, "dim": 2})


@pytest.fixture(scope="session")
def q_fock(q_bundle: DeformationBundle) -> TruncatedFock:
    return TruncatedFock(q_bundle.deformation, 4)


@pytest.fixture(scope="session")
def dihedral() -> Amalgam:
    """ℂ⊕ℂ * ℂ⊕ℂ over ℂ: the group von Neumann algebra of the infinite dihedral group."""
    return build_amalgam(AmalgamSpecModel.model_validate(DIHEDRAL))


@pytest.fixture(scope="session")
def dihedral_fock(dihedral: Amalgam) -> TruncatedFock:
    return dihedral.fock(2)
