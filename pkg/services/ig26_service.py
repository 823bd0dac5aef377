# services/ig26_service.py
import logging
from functools import lru_cache
from typing import Any, Dict, List, Optional

from sympy import Poly, Symbol, symbols

from database.ig26_tables import (
    CHARACTER_TABLE, IG26_SPEC_TEXT, M1_CHARPOLY_AT_Q1, NILPOTENT_WITNESS,
)
from models.algebra import AlgebraSpec
from models.certificate import GWVanishingVerdict
from models.matrix import char_poly
from models.series import QQ
from services.algebra_service import AlgebraService
from utils.errors import AlgebraError, TranscriptionError
from utils.expressions import parse_polynomial
from utils.spec_format import parse_spec_text

logger = logging.getLogger(__name__)


@lru_cache(maxsize=1)
def _small_qh() -> AlgebraSpec:
    spec = parse_spec_text(IG26_SPEC_TEXT)
    axioms = AlgebraService.verify_axioms(spec)
    if not axioms["success"]:
        raise TranscriptionError(f"IG(2,6) tables fail the axioms: {axioms['violations'][:5]}")
    spec = spec.with_pairing(AlgebraService.derive_pairing(spec))
    frobenius = AlgebraService.verify_frobenius(spec)
    if not frobenius["success"]:
        raise TranscriptionError(f"IG(2,6) tables fail the Frobenius check: {frobenius['violations'][:5]}")
    logger.info("IG(2,6) small quantum cohomology built and verified")
    return spec


def _component_poly(text: str, variable: str) -> Poly:
    return Poly(parse_polynomial(text, [variable]).as_expr(), Symbol(variable), domain="QQ")


class IG26Service:
    @staticmethod
    def build_small_qh() -> AlgebraSpec:
        """The 12-dimensional small quantum ring of IG(2,6) over Q[q], verified"""
        return _small_qh()

    @staticmethod
    def nilpotent_witness(spec: AlgebraSpec) -> List:
        """Coordinates of D4,3 - q*D2 + q*D1,1"""
        return AlgebraService.element_vector(spec, NILPOTENT_WITNESS)

    @staticmethod
    def verify_character_table(spec: AlgebraSpec) -> Dict[str, Any]:
        """Check that every row of the table is a ring homomorphism at q=1"""
        if spec.q_value is None:
            spec = AlgebraService.specialize(spec, 1)
        elif spec.q_value != 1:
            raise AlgebraError("the character table describes the q=1 specialization")
        violations: List[str] = []
        rows: Dict[str, Any] = {}
        for name, component in CHARACTER_TABLE.items():
            var = component["variable"]
            modulus = _component_poly(component["modulus"], var)
            values = {}
            for label in spec.labels:
                if label == spec.unit_label:
                    text = "1"
                else:
                    text = component["values"].get(label, "0")
                values[label] = _component_poly(text, var)

            mismatches = 0
            for a in spec.labels:
                for b in spec.labels:
                    lhs = (values[a] * values[b]).rem(modulus)
                    rhs = Poly(0, Symbol(var), domain="QQ")
                    column = AlgebraService.product(spec, a, b)
                    for coeff, c in zip(column, spec.labels):
                        if coeff:
                            rhs += values[c] * QQ.to_sympy(coeff.LC)
                    if lhs != rhs.rem(modulus):
                        mismatches += 1
                        violations.append(f"character {name}: value(D{a}) * value(D{b}) mismatch")
            rows[name] = {"ring": f"Q[{var}]/({component['modulus']})", "mismatches": mismatches}

        # Eigenvalues of M1 on the three components
        x = symbols("x")
        m1 = spec.matrix(spec.divisor_label or "1")
        computed = char_poly(m1)
        computed_poly = Poly([QQ.to_sympy(c.coeff(0).LC) if c.coeff(0) else 0
                              for c in computed.high_first()], x, domain="QQ")
        expected = Poly(parse_polynomial(M1_CHARPOLY_AT_Q1, ["x"]).as_expr(), x, domain="QQ")
        if computed_poly != expected:
            violations.append(f"char poly of M1 at q=1 is {computed_poly.as_expr()}, expected {M1_CHARPOLY_AT_Q1}")

        logger.info(f"Character table check: {len(violations)} violation(s)")
        return {
            "success": not violations,
            "violations": violations,
            "components": rows,
            "m1_char_poly": str(computed_poly.as_expr()),
        }

    @staticmethod
    def gw_power_vanishing(n: int, spec: Optional[AlgebraSpec] = None) -> GWVanishingVerdict:
        """Dimension-axiom verdict for the n-point invariant of the deformation class"""
        if n < 3:
            raise AlgebraError(f"a {n}-point invariant is not defined; need n >= 3")
        spec = spec or _small_qh()
        if spec.deform_label is None:
            raise AlgebraError("spec has no deformation class")
        insertion = spec.degree(spec.deform_label)
        # n + (dim - 3) + q_degree * d = n * deg(insertion)
        d = QQ(n * insertion - n - (spec.top_degree - 3), spec.q_degree)
        if d.denominator != 1 or d < 0:
            return GWVanishingVerdict(
                GWVanishingVerdict.ZERO, f"dimension axiom: no curve degree d >= 0 solves d = {d}"
            )
        if d == 0 and n >= 4:
            return GWVanishingVerdict(
                GWVanishingVerdict.ZERO, f"degree-0 invariant with {n} >= 4 insertions vanishes"
            )
        return GWVanishingVerdict(GWVanishingVerdict.UNKNOWN, f"curve degree d = {d} is admissible")
