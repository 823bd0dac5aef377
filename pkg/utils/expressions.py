# utils/expressions.py
import re
from typing import Dict, Iterable, List, Tuple

from sympy import Poly, Symbol
from sympy.parsing.sympy_parser import (
    implicit_multiplication, parse_expr, standard_transformations,
)
from sympy.polys.domains import QQ, ZZ
from sympy.polys.polyerrors import PolynomialError

from utils.errors import ExpressionError

UNICODE_REPLACEMENTS = {
    "Δ": "D",
    "∘": "*",
    "⋆": "*",
    "·": "*",
    "×": "*",
    "−": "-",
    "–": "-",
}

LABEL_PATTERN = re.compile(r"(?<![A-Za-z_])([DM])(\d+(?:,\d+)*)")
IMPLICIT_PRODUCT = re.compile(r"(?<=[a-z0-9)])(?=[DM]\d)")
IDENTIFIER_PATTERN = re.compile(r"[A-Za-z_][A-Za-z_0-9]*")
ALLOWED_TEXT = re.compile(r"^[A-Za-z0-9_\s+\-*/()]*$")
TRANSFORMATIONS = standard_transformations + (implicit_multiplication,)


def normalize(text: str) -> str:
    """Map Unicode operators to ASCII, '^' to '**' and 'D4,3' to 'D4_3'"""
    for old, new in UNICODE_REPLACEMENTS.items():
        text = text.replace(old, new)
    text = text.replace("^", "**")
    text = IMPLICIT_PRODUCT.sub("*", text)
    return LABEL_PATTERN.sub(lambda m: m.group(1) + m.group(2).replace(",", "_"), text)


def label_from_symbol(symbol: str) -> str:
    """'D4_3' -> '4,3'"""
    return symbol[1:].replace("_", ",")


def parse_polynomial(text: str, names: Iterable[str]) -> Poly:
    """Parse a polynomial with rational coefficients in the given names"""
    names = list(names)
    source = normalize(text).strip()
    if not source:
        raise ExpressionError("empty expression")
    if "." in source:
        raise ExpressionError(f"non-rational coefficient in '{text.strip()}'")
    if not ALLOWED_TEXT.match(source) or "__" in source:
        raise ExpressionError(f"unexpected characters in '{text.strip()}'")
    unknown = sorted({tok for tok in IDENTIFIER_PATTERN.findall(source) if tok not in names})
    if unknown:
        raise ExpressionError(f"undeclared name(s) {', '.join(unknown)} in '{text.strip()}'")

    symbols = {name: Symbol(name) for name in names}
    try:
        expr = parse_expr(source, local_dict=dict(symbols), transformations=TRANSFORMATIONS)
    except Exception as e:
        raise ExpressionError(f"cannot parse '{text.strip()}': {e}")

    try:
        poly = Poly(expr, *symbols.values())
    except PolynomialError:
        raise ExpressionError(f"'{text.strip()}' is not a polynomial")
    if poly.domain not in (ZZ, QQ):
        raise ExpressionError(f"non-rational coefficient in '{text.strip()}'")
    return poly


def poly_terms(poly: Poly) -> List[Tuple[Dict[str, int], object]]:
    """Monomials as ({name: exponent}, QQ coefficient)"""
    names = [str(g) for g in poly.gens]
    terms = []
    for exponents, coeff in poly.terms():
        powers = {name: e for name, e in zip(names, exponents) if e}
        terms.append((powers, QQ.from_sympy(coeff)))
    return terms


def parse_linear_form(
    text: str, label_symbols: Dict[str, str], scalars: Tuple[str, ...] = ("q",)
) -> List[Tuple[str, Dict[str, int], object]]:
    """Split 'q*D0 + 2*D4' into (label, {scalar: power}, coefficient) triples"""
    poly = parse_polynomial(text, list(scalars) + list(label_symbols))
    if poly.is_zero:
        return []
    result = []
    for powers, coeff in poly_terms(poly):
        labels = [name for name in powers if name in label_symbols]
        if len(labels) != 1 or powers[labels[0]] != 1:
            raise ExpressionError(f"'{text.strip()}' is not linear in the basis classes")
        scalar_powers = {name: e for name, e in powers.items() if name in scalars}
        result.append((label_symbols[labels[0]], scalar_powers, coeff))
    return result
