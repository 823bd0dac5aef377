# tests/test_certify_service.py
import pytest
from sympy import Poly

from models.certificate import Verdict
from models.matrix import RingMatrix, char_poly
from models.series import QQ, QRING, TSeries, Valuation, q
from models.xpoly import XPoly
from services.certify_service import X, CertifyService
from services.deformation_service import DeformationService
from utils.errors import AlgebraError, PolygonUnreliableError


def _slice(**terms):
    """Degree-12 coefficient list from x10=..., x0=... keywords"""
    values = [QRING.zero] * 13
    for key, value in terms.items():
        values[int(key[1:])] = QRING(value) if isinstance(value, int) else value
    return values


GAMMA_P0 = _slice(
    x12=1, x9=-60 * q, x8=-90 * q, x7=-(96 * q ** 2 + 26 * q),
    x4=-60 * q ** 2, x3=-90 * q ** 2, x2=-(96 * q ** 3 + 27 * q ** 2),
)
GAMMA_P1 = _slice(
    x10=-30 * q, x9=-96 * q, x8=-36 * q, x7=152 * q ** 2, x6=120 * q ** 2,
    x5=-32 * q ** 3 + 186 * q ** 2, x4=240 * q ** 3 - 26 * q ** 2, x3=-36 * q ** 2,
    x2=152 * q ** 3, x1=-30 * q ** 3, x0=-32 * q ** 4 - 9 * q ** 3,
)
EULER_P0 = _slice(x12=1, x7=-81250 * q, x2=-263671875 * q ** 2)
EULER_P1 = _slice(x8=-11250 * q, x3=-35156250 * q ** 2)
EULER_P2 = _slice(x9=-900 * q, x4=-78125 * q ** 2)


# Deformed gamma = M1~ + M2~

def test_gamma_characteristic_polynomial(gamma_certificate):
    p = gamma_certificate.char_poly
    assert p.degree == 12
    assert p.order == 2
    assert p.t_coefficient(0) == GAMMA_P0
    assert p.t_coefficient(1) == GAMMA_P1


def test_gamma_reduces_to_small_characteristic_polynomial(small_qh, gamma_certificate):
    small = char_poly(small_qh.matrix("1") + small_qh.matrix("2"))
    assert gamma_certificate.char_poly.mod_t() == small.mod_t()


def test_gamma_t0_polynomial_at_q1(gamma_certificate):
    p0 = CertifyService.t0_polynomial(gamma_certificate.char_poly, 1)
    assert p0.all_coeffs() == [1, 0, 0, -60, -90, -122, 0, 0, -60, -90, -123, 0, 0]
    profile = CertifyService.squarefree_profile(p0)
    assert profile["gcd_degree"] == 1
    assert profile["rational_roots"]["0"] == 2


def test_gamma_polygons(gamma_certificate):
    polygon = gamma_certificate.polygon_P
    assert polygon.vertices == ((0, 0), (10, 0), (12, 1))
    assert polygon.valuation_counts() == {QQ(0): 10, QQ(1, 2): 2}
    assert polygon.is_complete
    derivative = gamma_certificate.polygon_Pprime
    assert derivative.valuation_counts() == {QQ(0): 10, QQ(1): 1}


def test_gamma_certificate(gamma_certificate):
    assert gamma_certificate.verdict == Verdict.SEMISIMPLE
    assert gamma_certificate.polygon_fragment.is_semisimple
    assert gamma_certificate.resultant_fragment.is_semisimple
    assert gamma_certificate.resultant_valuation == Valuation.exact(1)
    assert gamma_certificate.p0_gcd_degree == 1
    assert "both arguments conclusive" in gamma_certificate.notes
    assert gamma_certificate.polygon_fragment.details["block_profile"]["gcd_degree"] == 0


def test_gamma_at_first_order_is_inconclusive(tower):
    certificate = CertifyService.certify(tower[0], "gamma", 1)
    assert certificate.order == 1
    assert certificate.verdict == Verdict.INCONCLUSIVE
    assert certificate.polygon_P.tail_roots == 2
    assert certificate.resultant_valuation == Valuation.at_least(1)


# Euler field = 5*M1~ - t*M2~

def test_euler_slices(tower):
    p = CertifyService.certify(tower[1], "euler", 1).char_poly
    assert p.order == 3
    assert p.t_coefficient(0) == EULER_P0
    assert p.t_coefficient(1) == EULER_P1
    assert p.t_coefficient(2) == EULER_P2


def test_euler_third_order_terms(euler_certificate):
    p = euler_certificate.char_poly
    assert p.order == 4
    assert p.t_coefficient(2) == EULER_P2
    t3 = p.t_coefficient(3)
    assert t3[0] == -39062500 * q ** 3
    assert t3[10] == -55 * q
    assert t3[5] == 440625 * q ** 2


def test_euler_at_third_order_is_inconclusive(tower):
    certificate = CertifyService.certify(tower[1], "euler", 1)
    assert certificate.order == 3
    assert certificate.verdict == Verdict.INCONCLUSIVE
    assert certificate.polygon_P.tail_roots == 2
    assert certificate.resultant_valuation == Valuation.at_least(3)
    assert "simple spectrum" not in certificate.notes


def test_euler_has_simple_spectrum(euler_certificate):
    assert euler_certificate.order == 4
    assert euler_certificate.verdict == Verdict.SEMISIMPLE
    assert euler_certificate.polygon_P.vertices == ((0, 0), (10, 0), (12, 3))
    assert euler_certificate.polygon_P.valuation_counts() == {QQ(0): 10, QQ(3, 2): 2}
    derivative = euler_certificate.polygon_Pprime
    assert derivative.tail_roots == 1
    assert derivative.tail_bound == 4
    assert euler_certificate.resultant_valuation == Valuation.exact(3)
    assert "simple spectrum" in euler_certificate.notes
    assert euler_certificate.polygon_fragment.is_semisimple
    assert euler_certificate.resultant_fragment.is_semisimple
    assert "both arguments conclusive" in euler_certificate.notes


def test_euler_block_is_square_free(euler_certificate):
    block = Poly(X ** 10 - 81250 * X ** 5 - 263671875, X, domain="QQ")
    assert CertifyService.t0_polynomial(euler_certificate.char_poly, 1) == block * Poly(X ** 2, X, domain="QQ")
    assert CertifyService.squarefree_profile(block)["gcd_degree"] == 0


def test_euler_charpoly_is_homogeneous(small_qh, euler_certificate, gamma_certificate):
    assert CertifyService.verify_charpoly_homogeneity(small_qh, euler_certificate.char_poly, 1)["success"]
    assert not CertifyService.verify_charpoly_homogeneity(small_qh, gamma_certificate.char_poly, 1)["success"]


def test_euler_at_another_q(tower, euler_certificate):
    certificate = CertifyService.certify(tower[2], "euler", 2)
    assert certificate.verdict == Verdict.SEMISIMPLE
    assert certificate.char_poly == euler_certificate.char_poly
    assert certificate.polygon_P.vertices == euler_certificate.polygon_P.vertices


def test_custom_element_matches_euler(tower, euler_certificate):
    certificate = CertifyService.certify(tower[2], "5*D1 - t*D2", 1)
    assert certificate.char_poly == euler_certificate.char_poly
    assert "simple spectrum" not in certificate.notes


def test_charpoly_methods_agree(tower):
    matrix = DeformationService.gamma_matrix(tower[1])
    faddeev = CertifyService.characteristic_polynomial(matrix, "faddeev")
    berkowitz = CertifyService.characteristic_polynomial(matrix, "berkowitz")
    assert faddeev == berkowitz


def test_certify_refuses_bad_requests(tower):
    with pytest.raises(AlgebraError):
        CertifyService.certify(tower[1], "gamma", 0)
    with pytest.raises(AlgebraError):
        CertifyService.certify(tower[1], "gamma", 1, order=3)


def test_requested_order_truncates(tower):
    certificate = CertifyService.certify(tower[1], "gamma", 1, order=1)
    assert certificate.order == 1
    assert certificate.verdict == Verdict.INCONCLUSIVE


# Generic checks

def test_planted_eigenvalues():
    # S diag(1, 2 + t, t, 3t + t^2) S^-1 modulo t^3
    s = RingMatrix([[1, 1, 0, 0], [0, 1, 1, 0], [0, 0, 1, 1], [0, 0, 0, 1]])
    s_inv = RingMatrix([[1, -1, 1, -1], [0, 1, -1, 1], [0, 0, 1, -1], [0, 0, 0, 1]])
    eigenvalues = [TSeries([1], 3), TSeries([2, 1], 3), TSeries([0, 1], 3), TSeries([0, 3, 1], 3)]
    d = RingMatrix([[eigenvalues[i] if i == j else TSeries.zero(3) for j in range(4)] for i in range(4)])
    p = char_poly(s * d * s_inv)
    polygon = CertifyService.newton_polygon(p)
    assert polygon.vertices == ((0, 0), (2, 0), (4, 2))
    assert polygon.root_valuations == [0, 0, 1, 1]
    assert p.coeff(0).valuation() == Valuation.exact(2)


def test_polygon_slopes_are_nondecreasing(euler_certificate, gamma_certificate):
    for polygon in (euler_certificate.polygon_P, gamma_certificate.polygon_P):
        slopes = [slope for slope, _ in polygon.segments]
        assert slopes == sorted(slopes)
        assert sum(length for _, length in polygon.segments) + polygon.tail_roots == polygon.degree
        rise = polygon.vertices[-1][1] - polygon.vertices[0][1]
        assert sum(slope * length for slope, length in polygon.segments) == rise


def test_square_root_of_t():
    p = XPoly([TSeries([0, -1], order=3), 0, 1])
    polygon = CertifyService.newton_polygon(p)
    assert polygon.root_valuations == [QQ(1, 2), QQ(1, 2)]
    assert CertifyService.polygon_certificate(p).is_semisimple
    assert CertifyService.resultant_certificate(p).details["valuation"] == Valuation.exact(1)


def test_repeated_constant_root_is_inconclusive():
    # (x - 1)^2 + t
    p = XPoly([TSeries([1, 1], order=2), -2, 1])
    fragment = CertifyService.polygon_certificate(p)
    assert fragment.verdict == Verdict.INCONCLUSIVE
    assert "repeated root" in fragment.reason


def test_distinct_constant_roots():
    fragment = CertifyService.resultant_certificate(XPoly([2, -3, 1]))
    assert fragment.is_semisimple
    assert fragment.details["valuation"] == Valuation.exact(0)
    # res(P, P') = P'(1) P'(2)
    assert fragment.details["leading"] == "-1"


def test_squarefree_profile():
    p0 = Poly((X - 1) ** 2 * (X - 2), X, domain="QQ")
    profile = CertifyService.squarefree_profile(p0)
    assert profile["gcd_degree"] == 1
    assert profile["rational_roots"] == {"1": 2, "2": 1}
    assert sorted(f["multiplicity"] for f in profile["factors"]) == [1, 2]


def test_unknown_coefficient_below_hull_is_unreliable():
    p = XPoly([TSeries.monomial(1, 4, order=6), TSeries.zero(1), 1])
    with pytest.raises(PolygonUnreliableError):
        CertifyService.newton_polygon(p)
    assert CertifyService.polygon_certificate(p).verdict == Verdict.INCONCLUSIVE


def test_unknown_tail_undercutting_last_slope_is_unreliable():
    p = XPoly([TSeries.zero(1), TSeries.monomial(1, 2, order=5), 1])
    with pytest.raises(PolygonUnreliableError):
        CertifyService.newton_polygon(p)


def test_leading_coefficient_must_be_a_unit():
    with pytest.raises(AlgebraError):
        CertifyService.newton_polygon(XPoly([1, TSeries([0, 1], order=3)]))
