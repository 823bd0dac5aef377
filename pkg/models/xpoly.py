# models/xpoly.py
from typing import List, Sequence

from sympy.polys.rings import PolyElement

from models.matrix import RingMatrix, determinant
from models.series import INFINITE_ORDER, TSeries, format_qpoly
from utils.errors import AlgebraError


class XPoly:
    """Polynomial in the spectral variable x with TSeries coefficients"""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Sequence):
        cs = [TSeries.lift(c) for c in coeffs]
        # exact zeros above the degree carry no information
        while len(cs) > 1 and cs[-1].is_exact_zero():
            cs.pop()
        self.coeffs = tuple(cs) if cs else (TSeries.zero(),)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def coeff(self, power: int) -> TSeries:
        if power < 0 or power > self.degree:
            return TSeries.zero()
        return self.coeffs[power]

    @property
    def leading(self) -> TSeries:
        return self.coeffs[-1]

    @property
    def order(self):
        return min(c.order for c in self.coeffs)

    def is_zero(self) -> bool:
        return all(c.is_exact_zero() for c in self.coeffs)

    def high_first(self) -> List[TSeries]:
        """a_0, ..., a_n with a_i the coefficient of x^(n-i)"""
        return list(reversed(self.coeffs))

    def __eq__(self, other):
        if not isinstance(other, XPoly):
            return NotImplemented
        return self.coeffs == other.coeffs

    __hash__ = None

    def map(self, fn) -> "XPoly":
        return XPoly([fn(c) for c in self.coeffs])

    def specialize(self, value) -> "XPoly":
        return self.map(lambda c: c.specialize(value))

    def truncate(self, n: int) -> "XPoly":
        return self.map(lambda c: c.truncate(n))

    def t_coefficient(self, k: int) -> List[PolyElement]:
        """Coefficients of t^k indexed by power of x"""
        return [c.coeff(k) for c in self.coeffs]

    def mod_t(self) -> List[PolyElement]:
        return self.t_coefficient(0)

    def equal_mod(self, other: "XPoly", n: int) -> bool:
        if self.degree != other.degree:
            return False
        return all(a.equal_mod(b, n) for a, b in zip(self.coeffs, other.coeffs))

    def format_slice(self, k: int, name: str = "P") -> str:
        """Render the t^k slice like 'P1(x) = -30*q*x^10 - 96*q*x^9 + ...'"""
        terms = []
        for power in range(self.degree, -1, -1):
            c = self.coeffs[power]
            if k >= c.order:
                continue
            value = c.coeff(k)
            if value:
                terms.append(_format_term(value, power))
        body = " ".join(terms) if terms else "0"
        if body.startswith("+ "):
            body = body[2:]
        elif body.startswith("- "):
            body = "-" + body[2:]
        return f"{name}{k}(x) = {body}"

    def format_layout(self, name: str = "P") -> List[str]:
        """One line per known power of t, followed by the truncation"""
        order = self.order
        top = order if order != INFINITE_ORDER else 1 + max(len(c.coeffs) for c in self.coeffs)
        lines = [self.format_slice(k, name) for k in range(top)]
        if order != INFINITE_ORDER:
            lines.append(f"{name}(x) = " + " + ".join(f"t^{k}*{name}{k}(x)" for k in range(top))
                         + f" + O(t^{order})")
        return lines

    def __repr__(self):
        return f"XPoly(degree={self.degree}, order={self.order})"


def _format_term(value: PolyElement, power: int) -> str:
    xpart = "" if power == 0 else ("x" if power == 1 else f"x^{power}")
    negative = all(c < 0 for c in value.values())
    magnitude = -value if negative else value
    sign = "-" if negative else "+"
    text = format_qpoly(magnitude)
    if len(magnitude) > 1:
        text = f"({text})"
    if not xpart:
        return f"{sign} {text}"
    if text == "1":
        return f"{sign} {xpart}"
    return f"{sign} {text}*{xpart}"


def x_derivative(p: XPoly) -> XPoly:
    """Formal derivative in x; orders are preserved"""
    if p.degree == 0:
        return XPoly([TSeries.zero(p.coeffs[0].order)])
    return XPoly([p.coeffs[i].scale(i) for i in range(1, p.degree + 1)])


def sylvester_matrix(p: XPoly, r: XPoly) -> RingMatrix:
    """deg(r) shifted rows of p followed by deg(p) shifted rows of r, highest power first"""
    m, n = p.degree, r.degree
    size = m + n
    rows = []
    for shift in range(n):
        row = [TSeries.zero()] * size
        for j, c in enumerate(p.high_first()):
            row[shift + j] = c
        rows.append(row)
    for shift in range(m):
        row = [TSeries.zero()] * size
        for j, c in enumerate(r.high_first()):
            row[shift + j] = c
        rows.append(row)
    return RingMatrix(rows)


def resultant(p: XPoly, r: XPoly) -> TSeries:
    """Sylvester resultant; resultant(x - a, x - b) = a - b"""
    if p.is_zero() or r.is_zero():
        raise AlgebraError("resultant of a zero polynomial")
    if p.degree + r.degree == 0:
        return TSeries.constant(1)
    return determinant(sylvester_matrix(p, r))
