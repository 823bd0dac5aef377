# services/deformation_service.py
import logging
import math
from typing import Any, Dict, List, Optional

from app_config import DEFAULT_Q_SPECIALIZATION
from models.algebra import AlgebraSpec
from models.deformed_product import DeformedProduct
from models.matrix import RingMatrix, mat_inverse
from models.series import (
    QQ, QRING, TSeries, constant_term, format_rational, is_rational_constant, q, to_rational,
)
from services.algebra_service import AlgebraService
from services.ig26_service import IG26Service
from utils.errors import (
    AlgebraError, BootstrapOrderError, ExpressionError, GradingError, SpecInconsistencyError,
)
from utils.expressions import parse_linear_form
from utils.validators import InputValidator

logger = logging.getLogger(__name__)


def default_q_value():
    value = InputValidator.parse_rational(DEFAULT_Q_SPECIALIZATION)
    if value is None:
        raise AlgebraError(f"IGQH_DEFAULT_Q={DEFAULT_Q_SPECIALIZATION!r} is not a rational number")
    return value


def _series_vector(v: List) -> List[TSeries]:
    return [TSeries.lift(x) for x in v]


class DeformationService:
    @staticmethod
    def check_order(spec: AlgebraSpec, target_order: int):
        """Refuse orders whose pairing step needs an invariant not known to vanish"""
        if not isinstance(target_order, int) or target_order < 1:
            raise BootstrapOrderError(f"bootstrap order must be a positive integer, got {target_order!r}")
        for m in range(target_order):
            n = m + 3
            verdict = IG26Service.gw_power_vanishing(n, spec)
            if not verdict.is_zero:
                label = f"D{spec.deform_label}"
                raise BootstrapOrderError(
                    f"order {target_order} requires unknown {n}-point invariant <{label}^{n}> ({verdict.reason})"
                )

    @staticmethod
    def max_order(spec: AlgebraSpec, limit: int = 64) -> int:
        """Largest bootstrap order the vanishing guard allows"""
        n = 0
        while n < limit and IG26Service.gw_power_vanishing(n + 3, spec).is_zero:
            n += 1
        return n

    @staticmethod
    def m1_from_m2(spec: AlgebraSpec, m2_tilde: RingMatrix) -> RingMatrix:
        """M1 + beta * q d/dq of the t-integral of M2~; one order more than the input"""
        if spec.divisor_label is None:
            raise AlgebraError("spec has no unique degree-one class")
        series = m2_tilde.to_series()
        beta = spec.divisor_beta
        lifted = series.map(lambda x: x.t_integrate().q_log_derivative().scale(beta))
        return spec.matrix(spec.divisor_label).to_series(series.order + 1) + lifted

    @staticmethod
    def regrade(spec: AlgebraSpec, matrix: RingMatrix, operator_degree: int, q_value) -> RingMatrix:
        """Lift a matrix computed at q = q_value back to Q[q] using the grading"""
        qv = to_rational(q_value)
        labels = spec.labels
        rows = []
        for i, a in enumerate(labels):
            row = []
            for j, b in enumerate(labels):
                entry = matrix[i, j]
                coeffs = []
                for m, c in enumerate(entry.coeffs):
                    if not c:
                        coeffs.append(QRING.zero)
                        continue
                    if not is_rational_constant(c):
                        raise GradingError(f"entry ({a}, {b}) still depends on q")
                    power = QQ(
                        operator_degree + spec.degree(b) - spec.degree(a) - m * spec.t_degree,
                        spec.q_degree,
                    )
                    if power.denominator != 1 or power < 0:
                        raise GradingError(
                            f"t^{m} coefficient at (D{a}, D{b}) needs q^{power}; "
                            f"operator degree {operator_degree} is inconsistent"
                        )
                    k = int(power.numerator)
                    coeffs.append(q ** k * (constant_term(c) / qv ** k))
                row.append(TSeries(coeffs, entry.order))
            rows.append(row)
        return RingMatrix(rows)

    @staticmethod
    def _step(spec: AlgebraSpec, m2_tilde: RingMatrix, q_value, eta: RingMatrix,
              eta_inv: RingMatrix) -> RingMatrix:
        """From M2~ mod t^k to M2~ mod t^(k+1)"""
        k = m2_tilde.order
        order = k + 1
        n = spec.dim
        deform = spec.index(spec.deform_label)
        m1s = DeformationService.m1_from_m2(spec, m2_tilde).specialize(q_value)

        # f_i = h^i and g_i = h^i * D_deform
        f = [_series_vector(spec.basis_vector(spec.unit_label))]
        g = [_series_vector(spec.basis_vector(spec.deform_label))]
        for _ in range(n - 2):
            f.append(m1s.apply(f[-1]))
            g.append(m1s.apply(g[-1]))
        e_deform = _series_vector(spec.basis_vector(spec.deform_label))

        # (D*D, f_i) = (D*f_i, D); (D*D, D) collects vanishing invariants only
        column = eta.column(deform)
        b = [RingMatrix([gi]).apply(column)[0] for gi in g]
        b.append(TSeries.zero(order))

        change = RingMatrix.from_columns(f + [e_deform])
        change_inv = mat_inverse(change)
        square = eta_inv.apply(change_inv.transpose().apply(b))

        products = RingMatrix.from_columns(g + [square])
        m2_new = (products * change_inv).truncate(order)
        m2_new = DeformationService.regrade(spec, m2_new, spec.degree(spec.deform_label), q_value)
        if not m2_new.equal_mod(m2_tilde, k):
            raise SpecInconsistencyError(f"order {order} product disagrees with order {k} below t^{k}")
        logger.info(f"Bootstrap step: multiplication by D{spec.deform_label} known mod t^{order}")
        return m2_new

    @staticmethod
    def _assemble(spec: AlgebraSpec, m2_tilde: RingMatrix, q_value) -> DeformedProduct:
        m1 = DeformationService.m1_from_m2(spec, m2_tilde)
        m1s = m1.specialize(q_value)
        f = [_series_vector(spec.basis_vector(spec.unit_label))]
        for _ in range(spec.dim - 2):
            f.append(m1s.apply(f[-1]))
        f.append(_series_vector(spec.basis_vector(spec.deform_label)))
        change = RingMatrix.from_columns(f)
        gram = change.transpose() * spec.pairing * change
        return DeformedProduct(
            spec=spec,
            m1_tilde=m1,
            m2_tilde=m2_tilde,
            order=m2_tilde.order,
            f_vectors=f,
            change_of_basis=change,
            gram=gram,
            q_value=q_value,
        )

    @staticmethod
    def bootstrap(spec: AlgebraSpec, target_order: int, q_value=None,
                  start: Optional[DeformedProduct] = None) -> DeformedProduct:
        """Deformed multiplication by the divisor and the deformation class to order target_order"""
        if not spec.graded:
            raise AlgebraError("bootstrap needs the graded algebra over Q[q]")
        if spec.deform_label is None:
            raise AlgebraError("spec has no deformation class")
        DeformationService.check_order(spec, target_order)
        q_value = default_q_value() if q_value is None else to_rational(q_value)
        if not q_value:
            raise AlgebraError("the bootstrap solves at a nonzero value of q")
        if spec.pairing is None:
            spec = spec.with_pairing(AlgebraService.derive_pairing(spec))

        if start is not None and start.order <= target_order:
            m2 = start.m2_tilde
        else:
            m2 = spec.matrix(spec.deform_label).to_series(1)

        eta = spec.pairing
        eta_inv = mat_inverse(eta)
        while m2.order < target_order:
            m2 = DeformationService._step(spec, m2, q_value, eta, eta_inv)
        logger.info(f"Bootstrap finished at order {target_order} (solved at q={format_rational(q_value)})")
        return DeformationService._assemble(spec, m2, q_value)

    @staticmethod
    def bootstrap_tower(spec: AlgebraSpec, target_order: int, q_value=None) -> List[DeformedProduct]:
        """Products at orders 1..target_order from a single run"""
        DeformationService.check_order(spec, target_order)
        tower = []
        dp = None
        for n in range(1, target_order + 1):
            dp = DeformationService.bootstrap(spec, n, q_value, start=dp)
            tower.append(dp)
        return tower

    @staticmethod
    def deformed_matrix(dp: DeformedProduct, label: str) -> RingMatrix:
        """Deformed multiplication by D_label"""
        spec = dp.spec
        if label == spec.unit_label:
            return RingMatrix.identity(spec.dim, series=True)
        if label == spec.divisor_label:
            return dp.m1_tilde
        if label == spec.deform_label:
            return dp.m2_tilde

        # D_label = sum_i c_i f_i, and f_i acts as h^i or as the deformation class
        coords = mat_inverse(dp.change_of_basis).apply(_series_vector(spec.basis_vector(label)))
        m1s = dp.m1_tilde.specialize(dp.q_value)
        m2s = dp.m2_tilde.specialize(dp.q_value)
        total = m2s.scale(coords[-1])
        power = RingMatrix.identity(spec.dim, series=True)
        for c in coords[:-1]:
            if not c.is_exact_zero():
                total = total + power.scale(c)
            power = power * m1s
        total = total.truncate(dp.order)
        return DeformationService.regrade(spec, total, spec.degree(label), dp.q_value)

    @staticmethod
    def element_terms(spec: AlgebraSpec, expression: str) -> List:
        """(label, {'q': i, 't': j}, coefficient) triples of a linear element"""
        label_symbols = {b.symbol: b.name for b in spec.basis}
        terms = parse_linear_form(expression, label_symbols, scalars=("q", "t"))
        if not terms:
            raise ExpressionError(f"element '{expression}' is zero")
        return terms

    @staticmethod
    def element_matrix(dp: DeformedProduct, expression: str) -> RingMatrix:
        """Deformed multiplication by a linear combination such as '5*D1 - t*D2'"""
        total = None
        for label, powers, coeff in DeformationService.element_terms(dp.spec, expression):
            factor = TSeries.monomial(q ** powers.get("q", 0) * coeff, powers.get("t", 0))
            term = DeformationService.deformed_matrix(dp, label).scale(factor)
            total = term if total is None else total + term
        return total

    @staticmethod
    def gamma_matrix(dp: DeformedProduct) -> RingMatrix:
        return dp.m1_tilde + dp.m2_tilde

    @staticmethod
    def euler_matrix(dp: DeformedProduct) -> RingMatrix:
        """c1 * M1~ + deg(t) * t * M2~"""
        spec = dp.spec
        c1 = QRING.ground_new(QQ(spec.q_degree, spec.divisor_beta))
        return dp.m1_tilde.scale(c1) + dp.m2_tilde.shift(1).scale(spec.t_degree)

    @staticmethod
    def element_expression(spec: AlgebraSpec, element: str) -> str:
        """Named elements as linear expressions; anything else is returned as given"""
        if element in ("gamma", "euler") and spec.deform_label is None:
            raise AlgebraError(f"'{element}' needs a deformation class and the spec has none")
        if element == "gamma":
            return f"D{spec.divisor_label} + D{spec.deform_label}"
        if element == "euler":
            c1 = format_rational(QQ(spec.q_degree, spec.divisor_beta))
            return f"{c1}*D{spec.divisor_label} + ({spec.t_degree})*t*D{spec.deform_label}"
        return element

    @staticmethod
    def bootstrap_order_for(spec: AlgebraSpec, expression: str, requested_order: int) -> int:
        """Bootstrap order whose element matrix is known mod t^requested_order"""
        gains = []
        for label, powers, _ in DeformationService.element_terms(spec, expression):
            t_power = powers.get("t", 0)
            if label == spec.unit_label:
                gains.append(math.inf)
            elif label == spec.divisor_label:
                gains.append(t_power + 1)
            else:
                gains.append(t_power)
        gain = min(gains)
        if gain == math.inf:
            return 1
        return max(1, requested_order - gain)

    @staticmethod
    def verify_homogeneity(spec: AlgebraSpec, matrix: RingMatrix, operator_degree: int) -> Dict[str, Any]:
        """Every c*q^j*t^m at (a, b) has deg a + j*deg q + m*deg t = D + deg b"""
        violations: List[str] = []
        series = matrix.to_series()
        checked = 0
        for i, a in enumerate(spec.labels):
            for j, b in enumerate(spec.labels):
                for m, c in enumerate(series[i, j].coeffs):
                    for (k,), _ in c.terms():
                        checked += 1
                        lhs = spec.degree(a) + k * spec.q_degree + m * spec.t_degree
                        if lhs != operator_degree + spec.degree(b):
                            violations.append(f"q^{k} t^{m} term at (D{a}, D{b}) has degree {lhs}")
        return {"success": not violations, "violations": violations, "checks": checked}

    @staticmethod
    def verify_frobenius(dp: DeformedProduct, labels: Optional[List[str]] = None) -> Dict[str, Any]:
        """eta * M~ is symmetric wherever M~ is known"""
        spec = dp.spec
        labels = labels or [spec.divisor_label, spec.deform_label]
        violations: List[str] = []
        for label in labels:
            m = DeformationService.deformed_matrix(dp, label)
            form = spec.pairing * m
            if not form.equal_mod(form.transpose(), form.order):
                violations.append(f"eta * M~{label} is not symmetric mod t^{form.order}")
        return {"success": not violations, "violations": violations, "checks": len(labels)}

    @staticmethod
    def commutes(dp: DeformedProduct) -> bool:
        """M1~ M2~ = M2~ M1~ modulo t^order"""
        return (dp.m1_tilde * dp.m2_tilde).equal_mod(dp.m2_tilde * dp.m1_tilde, dp.order)
