# models/series.py
import math
from dataclasses import dataclass
from typing import Callable, Iterable, List, Union

from sympy.polys.domains import QQ
from sympy.polys.rings import PolyElement, ring

from utils.errors import NotInvertibleError

# Polynomials in the Novikov variable q over the rationals
QRING, q = ring("q", QQ)

INFINITE_ORDER = math.inf


def to_rational(value):
    """Convert an int, sympy number or QQ element into QQ"""
    if QQ.of_type(value):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, int):
        return QQ(value)
    if hasattr(value, "is_Rational") and value.is_Rational:
        return QQ.from_sympy(value)
    if hasattr(value, "numerator") and hasattr(value, "denominator"):
        return QQ(int(value.numerator), int(value.denominator))
    raise TypeError(f"cannot read {value!r} as an exact rational")


def to_qpoly(value) -> PolyElement:
    """Coerce a scalar or polynomial into QRING"""
    if isinstance(value, PolyElement):
        if value.ring != QRING:
            raise TypeError(f"polynomial over foreign ring {value.ring}")
        return value
    return QRING.ground_new(to_rational(value))


def qpoly(coefficients: Iterable) -> PolyElement:
    """Build a QPoly from coefficients indexed by power of q"""
    terms = {}
    for k, c in enumerate(coefficients):
        c = to_rational(c)
        if c:
            terms[(k,)] = c
    return QRING.from_dict(terms) if terms else QRING.zero


def constant_term(p: PolyElement):
    return p.get(QRING.zero_monom, QQ.zero)


def q_degree_of(p: PolyElement) -> int:
    """Highest power of q present, -1 for zero"""
    return max((m[0] for m in p.keys()), default=-1)


def is_rational_constant(p: PolyElement) -> bool:
    return all(m[0] == 0 for m in p.keys())


def q_evaluate(p: PolyElement, value):
    """Substitute a rational for q"""
    value = to_rational(value)
    total = QQ.zero
    for (k,), c in p.terms():
        total += c * value ** k
    return total


def q_log_derivative_poly(p: PolyElement) -> PolyElement:
    """Apply q d/dq: c*q^k -> k*c*q^k"""
    return QRING.from_dict({m: c * m[0] for m, c in p.items() if m[0]})


def format_rational(c) -> str:
    c = to_rational(c)
    if c.denominator == 1:
        return str(c.numerator)
    return f"{c.numerator}/{c.denominator}"


def format_qpoly(p: PolyElement, var: str = "q") -> str:
    """Render a QPoly with descending powers, e.g. '96*q^3 + 27*q^2'"""
    terms = sorted(p.terms(), key=lambda item: -item[0][0])
    if not terms:
        return "0"
    parts = []
    for (k,), c in terms:
        sign = "-" if c < 0 else "+"
        mag = -c if c < 0 else c
        if k == 0:
            body = format_rational(mag)
        else:
            power = var if k == 1 else f"{var}^{k}"
            body = power if mag == 1 else f"{format_rational(mag)}*{power}"
        parts.append((sign, body))
    first_sign, first_body = parts[0]
    text = ("-" if first_sign == "-" else "") + first_body
    for sign, body in parts[1:]:
        text += f" {sign} {body}"
    return text


def qpoly_to_pairs(p: PolyElement) -> List[List]:
    """Machine form: [[power, 'num/den'], ...] in ascending powers"""
    return [[k, format_rational(c)] for (k,), c in sorted(p.terms(), key=lambda item: item[0][0])]


@dataclass(frozen=True)
class Valuation:
    """t-adic valuation: exact, or only bounded below by the truncation order"""
    kind: str
    value: Union[int, float]

    EXACT = "exact"
    AT_LEAST = "at_least"

    @classmethod
    def exact(cls, value) -> "Valuation":
        return cls(cls.EXACT, value)

    @classmethod
    def at_least(cls, bound) -> "Valuation":
        return cls(cls.AT_LEAST, bound)

    @property
    def is_exact(self) -> bool:
        return self.kind == self.EXACT

    @property
    def lower_bound(self):
        return self.value

    def __str__(self):
        value = "inf" if self.value == INFINITE_ORDER else str(self.value)
        return f"Exact({value})" if self.is_exact else f"AtLeast({value})"


class TSeries:
    """Power series in t with QPoly coefficients, known modulo t^order"""

    __slots__ = ("coeffs", "order")

    def __init__(self, coeffs: Iterable = (), order=INFINITE_ORDER):
        if order != INFINITE_ORDER and (not isinstance(order, int) or order < 0):
            raise ValueError(f"invalid truncation order {order!r}")
        cs = [to_qpoly(c) for c in coeffs]
        if order != INFINITE_ORDER:
            cs = cs[:order]
        while cs and not cs[-1]:
            cs.pop()
        self.coeffs = tuple(cs)
        self.order = order

    # Constructors

    @classmethod
    def constant(cls, value, order=INFINITE_ORDER) -> "TSeries":
        return cls([value], order)

    @classmethod
    def zero(cls, order=INFINITE_ORDER) -> "TSeries":
        return cls((), order)

    @classmethod
    def monomial(cls, value, power: int, order=INFINITE_ORDER) -> "TSeries":
        return cls([0] * power + [value], order)

    @staticmethod
    def lift(value, order=INFINITE_ORDER) -> "TSeries":
        """Wrap a scalar or QPoly, leaving series untouched"""
        if isinstance(value, TSeries):
            return value
        return TSeries.constant(value, order)

    # Inspection

    @property
    def is_exact(self) -> bool:
        return self.order == INFINITE_ORDER

    def coeff(self, k: int) -> PolyElement:
        if k < 0:
            return QRING.zero
        if k >= self.order:
            raise ValueError(f"coefficient of t^{k} is unknown modulo t^{self.order}")
        return self.coeffs[k] if k < len(self.coeffs) else QRING.zero

    def valuation(self) -> Valuation:
        for k, c in enumerate(self.coeffs):
            if c:
                return Valuation.exact(k)
        return Valuation.at_least(self.order)

    def valuation_bound(self):
        return self.valuation().lower_bound

    def is_exact_zero(self) -> bool:
        return not self.coeffs and self.is_exact

    def __bool__(self):
        return bool(self.coeffs)

    def __eq__(self, other):
        if not isinstance(other, TSeries):
            return NotImplemented
        return self.order == other.order and self.coeffs == other.coeffs

    __hash__ = None

    def equal_mod(self, other: "TSeries", n: int) -> bool:
        """Coefficientwise equality below t^n; both sides must be known there"""
        if n > self.order or n > other.order:
            raise ValueError(f"cannot compare modulo t^{n}: orders are {self.order} and {other.order}")
        return all(self.coeff(k) == other.coeff(k) for k in range(n))

    # Ring operations

    def __add__(self, other):
        other = TSeries.lift(other)
        order = min(self.order, other.order)
        size = max(len(self.coeffs), len(other.coeffs))
        coeffs = [self.coeff_or_zero(k) + other.coeff_or_zero(k) for k in range(size)]
        return TSeries(coeffs, order)

    __radd__ = __add__

    def __neg__(self):
        return TSeries([-c for c in self.coeffs], self.order)

    def __sub__(self, other):
        return self + (-TSeries.lift(other))

    def __rsub__(self, other):
        return TSeries.lift(other) - self

    def __mul__(self, other):
        if not isinstance(other, TSeries):
            return self.scale(other)
        # known precision shifts with the partner's valuation
        order = min(self.order + other.valuation_bound(), other.order + self.valuation_bound())
        limit = len(self.coeffs) + len(other.coeffs) - 1
        if order != INFINITE_ORDER:
            limit = min(limit, order)
        coeffs = [QRING.zero] * max(limit, 0)
        for i, a in enumerate(self.coeffs):
            if not a or i >= limit:
                continue
            for j, b in enumerate(other.coeffs):
                if i + j >= limit:
                    break
                if b:
                    coeffs[i + j] += a * b
        return TSeries(coeffs, order)

    def __rmul__(self, other):
        return self.scale(other)

    def scale(self, factor) -> "TSeries":
        factor = to_qpoly(factor)
        return TSeries([c * factor for c in self.coeffs], self.order)

    def __pow__(self, exponent: int):
        result = TSeries.constant(1)
        for _ in range(exponent):
            result = result * self
        return result

    def coeff_or_zero(self, k: int) -> PolyElement:
        return self.coeffs[k] if k < len(self.coeffs) else QRING.zero

    # Structural operations

    def shift(self, k: int) -> "TSeries":
        """Multiply by t^k"""
        return TSeries([0] * k + list(self.coeffs), self.order + k)

    def unshift(self, k: int) -> "TSeries":
        """Divide by t^k; the series must be divisible"""
        if k > self.valuation_bound():
            raise NotInvertibleError(f"series is not divisible by t^{k}")
        return TSeries(self.coeffs[k:], self.order - k)

    def truncate(self, n: int) -> "TSeries":
        return TSeries(self.coeffs, min(self.order, n))

    def map_coefficients(self, fn: Callable[[PolyElement], PolyElement]) -> "TSeries":
        return TSeries([fn(c) for c in self.coeffs], self.order)

    def q_log_derivative(self) -> "TSeries":
        return self.map_coefficients(q_log_derivative_poly)

    def t_integrate(self) -> "TSeries":
        coeffs = [QRING.zero] + [c * QQ(1, k + 1) for k, c in enumerate(self.coeffs)]
        return TSeries(coeffs, self.order + 1)

    def t_derivative(self) -> "TSeries":
        if self.order < 1:
            raise ValueError("nothing is known about this series")
        coeffs = [c * k for k, c in enumerate(self.coeffs)][1:]
        return TSeries(coeffs, self.order - 1)

    def specialize(self, value) -> "TSeries":
        """Substitute a rational for q in every coefficient"""
        value = to_rational(value)
        return self.map_coefficients(lambda c: QRING.ground_new(q_evaluate(c, value)))

    def inverse(self) -> "TSeries":
        """Multiplicative inverse; the t^0 coefficient must be a nonzero rational"""
        c0 = self.coeff(0) if self.order > 0 else QRING.zero
        if not c0 or not is_rational_constant(c0):
            raise NotInvertibleError("not invertible at t=0")
        if self.is_exact:
            if len(self.coeffs) > 1:
                raise NotInvertibleError("inverse of an untruncated series is not a polynomial")
            return TSeries.constant(QQ.one / constant_term(c0))
        inv0 = QQ.one / constant_term(c0)
        result = [QRING.ground_new(inv0)]
        for k in range(1, self.order):
            acc = QRING.zero
            for j in range(1, k + 1):
                acc += self.coeff_or_zero(j) * result[k - j]
            result.append(-acc * inv0)
        return TSeries(result, self.order)

    def divide(self, other: "TSeries") -> "TSeries":
        """Exact quotient self / other where other = t^v * unit"""
        v = other.valuation()
        if not v.is_exact:
            raise NotInvertibleError("divisor has no known nonzero coefficient")
        return self.unshift(v.value) * other.unshift(v.value).inverse()

    # Rendering

    def format(self, var: str = "t") -> str:
        parts = []
        for k, c in enumerate(self.coeffs):
            if not c:
                continue
            body = format_qpoly(c)
            if k:
                power = var if k == 1 else f"{var}^{k}"
                body = power if body == "1" else f"({body})*{power}"
            parts.append(body)
        text = " + ".join(parts) if parts else "0"
        if not self.is_exact:
            text += f" + O({var}^{self.order})"
        return text

    def __repr__(self):
        return f"TSeries({self.format()})"
