# services/certify_service.py
import logging
from typing import Any, Dict, List, Optional, Sequence, Tuple

from sympy import Poly, symbols

from app_config import CHARPOLY_METHOD
from models.algebra import AlgebraSpec
from models.certificate import Certificate, CertificateFragment, NewtonPolygon, Verdict
from models.deformed_product import DeformedProduct
from models.matrix import RingMatrix, char_poly
from models.series import INFINITE_ORDER, QQ, Valuation, constant_term, format_rational, to_rational
from models.xpoly import XPoly, resultant, x_derivative
from services.deformation_service import DeformationService, default_q_value
from utils.errors import AlgebraError, PolygonUnreliableError

logger = logging.getLogger(__name__)

X = symbols("x")


def _cross(o, a, b):
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def _lower_hull(points: List[Tuple[int, Any]]) -> List[Tuple[int, Any]]:
    """Monotone chain; collinear interior points are not vertices"""
    hull: List[Tuple[int, Any]] = []
    for p in sorted(points):
        while len(hull) >= 2 and _cross(hull[-2], hull[-1], p) <= 0:
            hull.pop()
        hull.append(p)
    return hull


def _hull_value(vertices, i: int):
    for (x0, y0), (x1, y1) in zip(vertices, vertices[1:]):
        if x0 <= i <= x1:
            return y0 + (y1 - y0) * QQ(i - x0, x1 - x0)
    return vertices[0][1]


def _rational_poly(coefficients: Sequence) -> Poly:
    """Poly in x from QPoly constants indexed by power of x"""
    values = []
    for c in reversed(list(coefficients)):
        if hasattr(c, "ring"):
            if any(m[0] for m in c.keys()):
                raise AlgebraError("polynomial still depends on q; specialize first")
            c = constant_term(c)
        values.append(QQ.to_sympy(to_rational(c)))
    return Poly(values or [0], X, domain="QQ")


def _valuation_text(values) -> Dict[str, int]:
    counts: Dict[str, int] = {}
    for v in values:
        key = str(v)
        counts[key] = counts.get(key, 0) + 1
    return counts


class CertifyService:
    x_derivative = staticmethod(x_derivative)

    @staticmethod
    def default_q():
        return default_q_value()

    @staticmethod
    def characteristic_polynomial(matrix: RingMatrix, method: Optional[str] = None) -> XPoly:
        return char_poly(matrix, method or CHARPOLY_METHOD)

    @staticmethod
    def newton_polygon(p: XPoly, q_specialization=None) -> NewtonPolygon:
        """Lower hull of (i, v(a_i)) using only exactly known valuations as vertices"""
        if q_specialization is not None:
            p = p.specialize(q_specialization)
        coefficients = p.high_first()
        n = p.degree
        points = tuple((i, c.valuation()) for i, c in enumerate(coefficients))
        if points[0][1] != Valuation.exact(0):
            raise AlgebraError(f"leading coefficient has valuation {points[0][1]}, expected Exact(0)")

        exact = [(i, QQ(v.value)) for i, v in points if v.is_exact]
        vertices = _lower_hull(exact)
        last = vertices[-1][0]

        # AtLeast points inside the hull span must not undercut it
        for i, v in points:
            if v.is_exact or i > last or v.value == INFINITE_ORDER:
                continue
            if v.value < _hull_value(vertices, i):
                raise PolygonUnreliableError(
                    f"polygon unreliable at this truncation: a_{i} is only known as {v}"
                )

        segments = tuple(
            ((y1 - y0) / QQ(x1 - x0), x1 - x0)
            for (x0, y0), (x1, y1) in zip(vertices, vertices[1:])
        )

        tail_roots = n - last
        tail_bound = None
        if tail_roots:
            v_last = vertices[-1][1]
            bounds = [
                (v.value - v_last) / QQ(i - last)
                for i, v in points[last + 1:] if v.value != INFINITE_ORDER
            ]
            # exact-zero tail coefficients bound nothing
            tail_bound = min(bounds) if bounds else INFINITE_ORDER
            if bounds and segments and tail_bound < segments[-1][0]:
                raise PolygonUnreliableError(
                    f"polygon unreliable at this truncation: unknown tail could undercut slope {segments[-1][0]}"
                )
        polygon = NewtonPolygon(
            points=points,
            vertices=tuple(vertices),
            segments=segments,
            tail_roots=tail_roots,
            tail_bound=tail_bound,
        )
        logger.debug(f"Newton polygon: vertices {vertices}, tail {tail_roots}")
        return polygon

    @staticmethod
    def squarefree_profile(p0: Poly) -> Dict[str, Any]:
        """gcd(p0, p0') over Q and the square-free decomposition"""
        if p0.is_zero:
            raise AlgebraError("square-free profile of the zero polynomial")
        g = p0.gcd(p0.diff(X))
        _, factors = p0.sqf_list()
        return {
            "gcd_degree": g.degree(),
            "factors": [{"multiplicity": m, "degree": f.degree()} for f, m in factors],
            "rational_roots": {str(r): m for r, m in sorted(p0.ground_roots().items())},
        }

    @staticmethod
    def t0_polynomial(p: XPoly, q_specialization) -> Poly:
        """P0 at the given q as a rational polynomial"""
        return _rational_poly(p.specialize(q_specialization).mod_t())

    @staticmethod
    def polygon_certificate(p: XPoly, q_spec=None) -> CertificateFragment:
        """Distinct roots from the Newton polygons of P and P' plus the t=0 block"""
        q_spec = CertifyService.default_q() if q_spec is None else to_rational(q_spec)
        method = "newton_polygon"
        try:
            polygon_p = CertifyService.newton_polygon(p, q_spec)
            polygon_d = CertifyService.newton_polygon(x_derivative(p), q_spec)
        except PolygonUnreliableError as e:
            return CertificateFragment(method, Verdict.INCONCLUSIVE, str(e))
        details = {"polygon_P": polygon_p, "polygon_Pprime": polygon_d}

        # (a) every root of P must have a determined valuation
        if polygon_p.tail_roots:
            return CertificateFragment(
                method, Verdict.INCONCLUSIVE,
                f"{polygon_p.tail_roots} root(s) of P lie beyond the known precision", details,
            )

        # (b) valuation-0 roots: P0 with the positive-valuation roots removed is square-free
        positive = [v for v in polygon_p.root_valuations if v > 0]
        k = len(positive)
        p0 = CertifyService.t0_polynomial(p, q_spec)
        block, remainder = p0.div(Poly(X ** k, X, domain="QQ"))
        if not remainder.is_zero:
            return CertificateFragment(
                method, Verdict.INCONCLUSIVE, f"P0 is not divisible by x^{k}", details,
            )
        profile = CertifyService.squarefree_profile(block)
        details["block_profile"] = profile
        if profile["gcd_degree"] or block.eval(0) == 0:
            return CertificateFragment(
                method, Verdict.INCONCLUSIVE, "valuation-0 block of P0 has a repeated root", details,
            )

        # (c) positive-valuation roots of P are not roots of P'
        shared = sorted(set(positive) & set(polygon_d.root_valuations))
        if shared:
            return CertificateFragment(
                method, Verdict.INCONCLUSIVE,
                f"P and P' share root valuation(s) {', '.join(str(v) for v in shared)}", details,
            )
        if (positive and polygon_d.tail_roots and polygon_d.tail_bound != INFINITE_ORDER
                and max(positive) >= polygon_d.tail_bound):
            return CertificateFragment(
                method, Verdict.INCONCLUSIVE,
                f"{polygon_d.tail_roots} root(s) of P' are only known to have valuation >= {polygon_d.tail_bound}",
                details,
            )
        return CertificateFragment(
            method, Verdict.SEMISIMPLE,
            f"valuation-0 roots simple; positive valuations {_valuation_text(positive)} avoid P'",
            details,
        )

    @staticmethod
    def resultant_certificate(p: XPoly, q_spec=None) -> CertificateFragment:
        """Distinct roots iff the discriminant has a known nonzero coefficient"""
        q_spec = CertifyService.default_q() if q_spec is None else to_rational(q_spec)
        ps = p.specialize(q_spec)
        value = resultant(ps, x_derivative(ps))
        v = value.valuation()
        details = {"valuation": v}
        if v.is_exact:
            leading = constant_term(value.coeff(v.value))
            details["leading"] = format_rational(leading)
            return CertificateFragment(
                "resultant", Verdict.SEMISIMPLE, f"res(P, P') has valuation {v}", details,
            )
        return CertificateFragment(
            "resultant", Verdict.INCONCLUSIVE, f"res(P, P') vanishes mod t^{v.value}", details,
        )

    @staticmethod
    def element_matrix(dp: DeformedProduct, element: str) -> RingMatrix:
        if element == "gamma":
            return DeformationService.gamma_matrix(dp)
        if element == "euler":
            return DeformationService.euler_matrix(dp)
        return DeformationService.element_matrix(dp, element)

    @staticmethod
    def verify_charpoly_homogeneity(spec: AlgebraSpec, p: XPoly, operator_degree: int) -> Dict[str, Any]:
        """Coefficient of x^(n-i) is homogeneous of degree i*D under deg q, deg t"""
        violations: List[str] = []
        n = p.degree
        for power, c in enumerate(p.coeffs):
            i = n - power
            for m, coefficient in enumerate(c.coeffs):
                for (j,), _ in coefficient.terms():
                    degree = j * spec.q_degree + m * spec.t_degree
                    if degree != i * operator_degree:
                        violations.append(f"q^{j} t^{m} x^{power} has degree {degree}, expected {i * operator_degree}")
        return {"success": not violations, "violations": violations}

    @staticmethod
    def certify(dp: DeformedProduct, element: str, q_spec=None, order: Optional[int] = None,
                method: Optional[str] = None) -> Certificate:
        """Characteristic polynomial of the element and both distinct-roots arguments"""
        q_spec = CertifyService.default_q() if q_spec is None else to_rational(q_spec)
        if not q_spec:
            raise AlgebraError("certification at q=0 is not supported; the grading degenerates")
        matrix = CertifyService.element_matrix(dp, element)
        if order is not None:
            if order > matrix.order:
                raise AlgebraError(f"element is only known mod t^{matrix.order}, not t^{order}")
            matrix = matrix.truncate(order)
        p = CertifyService.characteristic_polynomial(matrix, method)

        polygon_fragment = CertifyService.polygon_certificate(p, q_spec)
        resultant_fragment = CertifyService.resultant_certificate(p, q_spec)
        p0_profile = CertifyService.squarefree_profile(CertifyService.t0_polynomial(p, q_spec))

        certificate = Certificate(
            element=element,
            order=matrix.order,
            q_value=q_spec,
            char_poly=p,
            polygon_fragment=polygon_fragment,
            resultant_fragment=resultant_fragment,
            polygon_P=polygon_fragment.details.get("polygon_P"),
            polygon_Pprime=polygon_fragment.details.get("polygon_Pprime"),
            p0_gcd_degree=p0_profile["gcd_degree"],
            resultant_valuation=resultant_fragment.details["valuation"],
        )
        if polygon_fragment.is_semisimple and resultant_fragment.is_semisimple:
            certificate.notes.append("both arguments conclusive")
        if certificate.verdict == Verdict.SEMISIMPLE and element == "euler":
            certificate.notes.append("simple spectrum")
        logger.info(
            f"Certified {element} at order {matrix.order}, q={format_rational(q_spec)}: "
            f"{certificate.verdict.value} (polygon {polygon_fragment.verdict.value}, "
            f"resultant {resultant_fragment.verdict.value})"
        )
        return certificate
