# tests/test_deformation_service.py
import pytest

from models.matrix import RingMatrix
from models.series import TSeries, q, q_log_derivative_poly
from services.deformation_service import DeformationService
from tests.test_spec_format import TINY_SPEC
from utils.errors import AlgebraError, BootstrapOrderError, GradingError
from utils.spec_format import parse_spec_text


def test_first_neighbourhood(small_qh, tower):
    dp = tower[0]
    m2 = small_qh.matrix("2")
    assert dp.order == 1
    assert dp.m2_tilde == m2.to_series(1)
    assert dp.m1_tilde.order == 2
    assert dp.m1_tilde.t_coefficient(1) == m2.map(q_log_derivative_poly)


def test_divisor_column_at_point_class(small_qh, tower):
    # D2 * D4,3 = q*D4 + q*D3,1, so the t-term of M1~ at D4,3 is the same
    column = tower[0].m1_tilde.column(small_qh.index("4,3"))
    assert column[small_qh.index("3")].coeff(0) == q
    assert column[small_qh.index("4")].coeff(1) == q
    assert column[small_qh.index("3,1")].coeff(1) == q


def test_constant_input_leaves_divisor_unchanged(small_qh):
    m1 = DeformationService.m1_from_m2(small_qh, RingMatrix.identity(12).to_series(1))
    assert m1 == small_qh.matrix("1").to_series(2)


@pytest.mark.parametrize("n", range(1, 7))
def test_reduction_to_small_ring(small_qh, tower, n):
    dp = tower[n - 1]
    assert dp.order == n
    assert dp.m1_tilde.order == n + 1
    assert dp.m2_tilde.order == n
    assert dp.m1_tilde.mod_t() == small_qh.matrix("1")
    assert dp.m2_tilde.mod_t() == small_qh.matrix("2")
    assert dp.f_vectors[0] == [TSeries.lift(x) for x in small_qh.basis_vector("0")]


@pytest.mark.parametrize("n", range(2, 7))
def test_deformed_products_commute(tower, n):
    assert DeformationService.commutes(tower[n - 1])


@pytest.mark.parametrize("n", range(1, 7))
def test_deformed_frobenius_property(tower, n):
    result = DeformationService.verify_frobenius(tower[n - 1])
    assert result["success"], result["violations"]


@pytest.mark.parametrize("n", range(2, 7))
def test_order_stability(tower, n):
    assert tower[n - 1].m2_tilde.truncate(n - 1) == tower[n - 2].m2_tilde
    assert tower[n - 1].m1_tilde.truncate(n) == tower[n - 2].m1_tilde


def test_grading_homogeneity(small_qh, tower):
    dp = tower[5]
    for matrix, degree in ((dp.m1_tilde, 1), (dp.m2_tilde, 2)):
        result = DeformationService.verify_homogeneity(small_qh, matrix, degree)
        assert result["success"], result["violations"][:5]
        assert result["checks"] > 0


def test_homogeneity_reports_wrong_degree(small_qh, tower):
    result = DeformationService.verify_homogeneity(small_qh, tower[1].m2_tilde, 1)
    assert not result["success"]


def test_ninth_order_needs_unknown_invariant(small_qh):
    with pytest.raises(BootstrapOrderError, match="9-point invariant"):
        DeformationService.bootstrap(small_qh, 7)
    assert DeformationService.max_order(small_qh) == 6


def test_order_must_be_positive(small_qh):
    with pytest.raises(BootstrapOrderError):
        DeformationService.bootstrap(small_qh, 0)


def test_solving_at_another_q_gives_the_same_product(small_qh, tower):
    dp = DeformationService.bootstrap(small_qh, 3, q_value=2)
    assert dp.m2_tilde == tower[2].m2_tilde
    assert dp.m1_tilde == tower[2].m1_tilde


def test_resume_from_lower_order(small_qh, tower):
    dp = DeformationService.bootstrap(small_qh, 4, start=tower[1])
    assert dp.m2_tilde == tower[3].m2_tilde


def test_regrade_rejects_fractional_q_power(small_qh):
    with pytest.raises(GradingError):
        DeformationService.regrade(small_qh, RingMatrix.identity(12, series=True), 1, 1)


def test_deformed_matrix_of_other_classes(small_qh, tower):
    dp = tower[2]
    m11 = DeformationService.deformed_matrix(dp, "1,1")
    assert m11.mod_t() == small_qh.matrix("1,1")
    assert m11.order == 3
    assert (m11 * dp.m1_tilde).equal_mod(dp.m1_tilde * m11, 3)
    assert DeformationService.verify_homogeneity(small_qh, m11, 2)["success"]
    assert DeformationService.verify_frobenius(dp, ["1,1", "4,3"])["success"]


def test_deformed_matrix_of_basic_classes(small_qh, tower):
    dp = tower[1]
    assert DeformationService.deformed_matrix(dp, "0") == RingMatrix.identity(12, series=True)
    assert DeformationService.deformed_matrix(dp, "1") is dp.m1_tilde
    assert DeformationService.deformed_matrix(dp, "2") is dp.m2_tilde


def test_gamma_and_euler_orders(tower):
    dp = tower[2]
    assert DeformationService.gamma_matrix(dp).order == 3
    assert DeformationService.euler_matrix(dp).order == 4


def test_euler_expression_matches_euler_matrix(small_qh, tower):
    dp = tower[2]
    expression = DeformationService.element_expression(small_qh, "euler")
    assert DeformationService.element_matrix(dp, expression) == DeformationService.euler_matrix(dp)
    assert DeformationService.element_matrix(dp, "5*D1 - t*D2") == DeformationService.euler_matrix(dp)


def test_gamma_expression_matches_gamma_matrix(small_qh, tower):
    dp = tower[1]
    expression = DeformationService.element_expression(small_qh, "gamma")
    assert expression == "D1 + D2"
    assert DeformationService.element_matrix(dp, expression) == DeformationService.gamma_matrix(dp)


@pytest.mark.parametrize("expression, requested, expected", [
    ("D1 + D2", 2, 2),
    ("5*D1 - t*D2", 4, 3),
    ("5*D1 - t*D2", 1, 1),
    ("D0 + D2", 3, 3),
    ("D1", 3, 2),
    ("t*D2 + t*D3", 3, 2),
    ("D0", 5, 1),
])
def test_bootstrap_order_for(small_qh, expression, requested, expected):
    assert DeformationService.bootstrap_order_for(small_qh, expression, requested) == expected


def test_gram_matrix_is_symmetric(tower):
    gram = tower[2].gram
    assert gram.equal_mod(gram.transpose(), gram.order)
    assert gram.mod_t().to_rational_rows()


def test_frame_is_taken_at_the_solving_q(tower):
    dp = tower[2]
    assert dp.q_value == 1
    for k in range(dp.order):
        assert dp.change_of_basis.t_coefficient(k).to_rational_rows()
        assert dp.gram.t_coefficient(k).to_rational_rows()
    with pytest.raises(ValueError, match="still depends on q"):
        dp.m1_tilde.mod_t().to_rational_rows()


@pytest.mark.parametrize("element", ["gamma", "euler"])
def test_named_elements_need_a_deformation_class(element):
    spec = parse_spec_text(TINY_SPEC)
    with pytest.raises(AlgebraError, match="deformation class"):
        DeformationService.element_expression(spec, element)
    assert DeformationService.element_expression(spec, "D1 + D2") == "D1 + D2"
