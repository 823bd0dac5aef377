# services/algebra_service.py
import logging
from dataclasses import replace
from typing import Any, Dict, List, Optional, Sequence

from sympy import Matrix
from sympy.polys.domains import QQ

from models.algebra import AlgebraSpec
from models.matrix import RingMatrix
from models.series import QRING, TSeries, q_degree_of, q_evaluate, to_rational
from utils.errors import DimensionMismatchError, SpecInconsistencyError
from utils.expressions import parse_linear_form
from utils.spec_format import column_from_terms

logger = logging.getLogger(__name__)


def _rational_matrix(rows) -> Matrix:
    return Matrix([[QQ.to_sympy(x) for x in r] for r in rows])


class AlgebraService:
    @staticmethod
    def multiplication_matrix(spec: AlgebraSpec, v: Sequence) -> RingMatrix:
        """Matrix of multiplication by sum_l v_l * D_l"""
        if len(v) != spec.dim:
            raise DimensionMismatchError(f"vector of length {len(v)} for a {spec.dim}-dimensional algebra")
        series = any(isinstance(x, TSeries) for x in v)
        total = RingMatrix.zeros(spec.dim, spec.dim, series=series)
        for coordinate, label in zip(v, spec.labels):
            if isinstance(coordinate, TSeries):
                if coordinate.is_exact_zero():
                    continue
            elif not coordinate:
                continue
            total = total + spec.matrix(label).scale(coordinate)
        return total

    @staticmethod
    def product(spec: AlgebraSpec, a: str, b: str) -> List:
        """Coordinates of D_a * D_b"""
        return spec.matrix(a).column(spec.index(b))

    @staticmethod
    def element_vector(spec: AlgebraSpec, expression: str) -> List:
        """Parse 'D4,3 - q*D2 + q*D1,1' into QPoly coordinates"""
        label_symbols = {b.symbol: b.name for b in spec.basis}
        return column_from_terms(parse_linear_form(expression, label_symbols), spec.labels)

    @staticmethod
    def verify_axioms(spec: AlgebraSpec) -> Dict[str, Any]:
        """Exhaustive unit, commutativity, associativity and grading checks"""
        violations: List[str] = []
        labels = spec.labels
        n = spec.dim
        identity = RingMatrix.identity(n)

        # Unit
        if spec.matrix(spec.unit_label) != identity:
            violations.append(f"unit: M{spec.unit_label} is not the identity")
        unit_index = spec.index(spec.unit_label)
        for a in labels:
            if spec.matrix(a).column(unit_index) != spec.basis_vector(a):
                violations.append(f"unit: D{a} * D{spec.unit_label} != D{a}")

        # Commutativity
        pairs = 0
        for i, a in enumerate(labels):
            for b in labels[i + 1:]:
                pairs += 1
                if AlgebraService.product(spec, a, b) != AlgebraService.product(spec, b, a):
                    violations.append(f"commutativity: D{a} * D{b} != D{b} * D{a}")

        # Associativity: M_(a*b) = M_a M_b covers every triple (a, b, c)
        for a in labels:
            for b in labels:
                lhs = AlgebraService.multiplication_matrix(spec, AlgebraService.product(spec, a, b))
                if lhs != spec.matrix(a) * spec.matrix(b):
                    violations.append(f"associativity: M(D{a} * D{b}) != M{a} M{b}")

        # Grading: deg a + deg b = deg c + k * q_degree for every c*q^k
        if spec.graded:
            for a in labels:
                m = spec.matrix(a)
                for j, b in enumerate(labels):
                    for i, c in enumerate(labels):
                        for (k,), coeff in m[i, j].terms():
                            if spec.degree(a) + spec.degree(b) != spec.degree(c) + k * spec.q_degree:
                                violations.append(
                                    f"grading: q^{k} term in D{a} * D{b} at D{c} has the wrong degree"
                                )

        logger.info(f"Axiom check: {len(violations)} violation(s) over {n} classes")
        return {
            "success": not violations,
            "violations": violations,
            "checks": {
                "unit": n,
                "commutativity": pairs,
                "associativity": n ** 3,
                "grading": spec.graded,
            },
        }

    @staticmethod
    def derive_pairing(spec: AlgebraSpec) -> RingMatrix:
        """(D_a, D_b) = coefficient of the point class in D_a * D_b at q=0"""
        point = spec.index(spec.point_label)
        rows = [
            [q_evaluate(spec.matrix(a)[point, j], 0) for j in range(spec.dim)]
            for a in spec.labels
        ]
        pairing = _rational_matrix(rows)
        if pairing != pairing.T:
            raise SpecInconsistencyError("derived pairing is not symmetric")
        if pairing.det() == 0:
            raise SpecInconsistencyError("derived pairing is degenerate")
        return RingMatrix(rows)

    @staticmethod
    def pairing_determinant(pairing: RingMatrix):
        return QQ.from_sympy(_rational_matrix(pairing.to_rational_rows()).det())

    @staticmethod
    def verify_frobenius(spec: AlgebraSpec, pairing: Optional[RingMatrix] = None) -> Dict[str, Any]:
        """Check (a*b, c) = (a, b*c) for all basis triples, over Q[q]"""
        if pairing is None:
            pairing = spec.pairing if spec.pairing is not None else AlgebraService.derive_pairing(spec)
        violations: List[str] = []
        labels = spec.labels
        for b in labels:
            m = spec.matrix(b)
            # (a*b, c) is entry (a, c) of M_b^T eta; (a, b*c) that of eta M_b
            lhs = m.transpose() * pairing
            rhs = pairing * m
            for i, a in enumerate(labels):
                for k, c in enumerate(labels):
                    if lhs[i, k] != rhs[i, k]:
                        violations.append(f"frobenius: (D{a} * D{b}, D{c}) != (D{a}, D{b} * D{c})")
        logger.info(f"Frobenius check: {len(violations)} violation(s)")
        return {"success": not violations, "violations": violations, "checks": spec.dim ** 3}

    @staticmethod
    def is_nilpotent(spec: AlgebraSpec, v: Sequence) -> bool:
        """True iff the multiplication matrix of v raised to the dimension vanishes"""
        m = AlgebraService.multiplication_matrix(spec, v)
        return (m ** spec.dim).is_zero()

    @staticmethod
    def squares_to_zero(spec: AlgebraSpec, v: Sequence) -> bool:
        m = AlgebraService.multiplication_matrix(spec, v)
        return (m * m).is_zero()

    @staticmethod
    def specialize(spec: AlgebraSpec, q_value) -> AlgebraSpec:
        """Substitute a rational for q; the result is no longer graded"""
        q_value = to_rational(q_value)
        structure = {label: m.specialize(q_value) for label, m in spec.structure.items()}
        return replace(spec, structure=structure, graded=False, q_value=q_value)

    @staticmethod
    def specialize_vector(v: Sequence, q_value) -> List:
        return [QRING.ground_new(q_evaluate(x, q_value)) for x in v]

    @staticmethod
    def max_q_power(spec: AlgebraSpec) -> int:
        return max(q_degree_of(x) for m in spec.structure.values() for r in m.entries for x in r)

    @staticmethod
    def radical_basis(spec: AlgebraSpec) -> List[List]:
        """Kernel of the trace form tr(M_a M_b) of a specialized algebra"""
        matrices = [_rational_matrix(spec.matrix(a).to_rational_rows()) for a in spec.labels]
        form = Matrix(spec.dim, spec.dim, lambda i, j: (matrices[i] * matrices[j]).trace())
        kernel = form.nullspace()
        logger.info(f"Trace form has rank {form.rank()}, radical dimension {len(kernel)}")
        return [[QQ.from_sympy(x) for x in vec] for vec in kernel]
