# tests/conftest.py
import pytest

from services.certify_service import CertifyService
from services.deformation_service import DeformationService
from services.ig26_service import IG26Service


@pytest.fixture(scope="session")
def small_qh():
    return IG26Service.build_small_qh()


@pytest.fixture(scope="session")
def tower(small_qh):
    """Deformed products at orders 1..6, index n-1 holds order n"""
    return DeformationService.bootstrap_tower(small_qh, 6)


@pytest.fixture(scope="session")
def gamma_certificate(tower):
    return CertifyService.certify(tower[1], "gamma", 1)


@pytest.fixture(scope="session")
def euler_certificate(tower):
    """Euler field from the order-3 product, known mod t^4"""
    return CertifyService.certify(tower[2], "euler", 1)
