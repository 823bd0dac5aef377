# utils/validators.py
import re

from models.series import QQ

RATIONAL_PATTERN = re.compile(r'^\s*(-?\d+)(?:\s*/\s*(\d+))?\s*$')
ELEMENT_PATTERN = re.compile(r'^[\sA-Za-z0-9_,+\-*/^().Δ−–·⋆∘]+$')
NAMED_ELEMENTS = ('gamma', 'euler')


class InputValidator:
    @staticmethod
    def parse_rational(text: str):
        """Parse '2', '-3' or '1/2' into an exact rational"""
        if text is None:
            return None
        match = RATIONAL_PATTERN.match(str(text))
        if not match:
            return None
        numerator, denominator = match.groups()
        if denominator is not None and int(denominator) == 0:
            return None
        return QQ(int(numerator), int(denominator or 1))

    @staticmethod
    def validate_order(order) -> bool:
        """Truncation orders are positive integers"""
        return isinstance(order, int) and not isinstance(order, bool) and order >= 1

    @staticmethod
    def validate_element(element: str) -> bool:
        """Named element or a linear expression in the basis classes"""
        if not element or not element.strip():
            return False
        if element in NAMED_ELEMENTS:
            return True
        if not ELEMENT_PATTERN.match(element):
            return False
        # Must mention at least one basis class
        return bool(re.search(r'[DΔ]\d', element))

    @staticmethod
    def validate_certification_q(value) -> bool:
        """Certification needs a nonzero rational q"""
        return value is not None and value != 0
