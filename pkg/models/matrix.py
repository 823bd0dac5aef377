# models/matrix.py
import logging
from typing import Callable, List, Sequence

from sympy.polys.domains import QQ

from models.series import (
    INFINITE_ORDER, QRING, TSeries, Valuation, constant_term, is_rational_constant, q_evaluate, to_qpoly,
)
from utils.errors import DimensionMismatchError, NotInvertibleError

logger = logging.getLogger(__name__)

CHARPOLY_METHODS = ("faddeev", "berkowitz")


def _is_structural_zero(value) -> bool:
    """Zero that carries no precision information"""
    if isinstance(value, TSeries):
        return value.is_exact_zero()
    return not value


class RingMatrix:
    """Dense rectangular matrix over QPoly or over TSeries"""

    __slots__ = ("entries", "rows", "cols", "is_series")

    def __init__(self, entries: Sequence[Sequence]):
        rows = [list(r) for r in entries]
        if not rows:
            raise DimensionMismatchError("matrix needs at least one row")
        width = len(rows[0])
        if any(len(r) != width for r in rows):
            raise DimensionMismatchError("ragged matrix rows")
        is_series = any(isinstance(x, TSeries) for r in rows for x in r)
        if is_series:
            rows = [[TSeries.lift(x) for x in r] for r in rows]
        else:
            rows = [[to_qpoly(x) for x in r] for r in rows]
        self.entries = tuple(tuple(r) for r in rows)
        self.rows = len(rows)
        self.cols = width
        self.is_series = is_series

    # Constructors

    @classmethod
    def identity(cls, n: int, series: bool = False) -> "RingMatrix":
        one, zero = (TSeries.constant(1), TSeries.zero()) if series else (QRING.one, QRING.zero)
        return cls([[one if i == j else zero for j in range(n)] for i in range(n)])

    @classmethod
    def zeros(cls, rows: int, cols: int, series: bool = False) -> "RingMatrix":
        zero = TSeries.zero() if series else QRING.zero
        return cls([[zero] * cols for _ in range(rows)])

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence]) -> "RingMatrix":
        n = len(columns[0])
        if any(len(c) != n for c in columns):
            raise DimensionMismatchError("columns of different length")
        return cls([[columns[j][i] for j in range(len(columns))] for i in range(n)])

    # Access

    def __getitem__(self, index):
        i, j = index
        return self.entries[i][j]

    @property
    def shape(self):
        return self.rows, self.cols

    @property
    def is_square(self) -> bool:
        return self.rows == self.cols

    def zero_entry(self):
        return TSeries.zero() if self.is_series else QRING.zero

    def column(self, j: int) -> List:
        return [self.entries[i][j] for i in range(self.rows)]

    def row(self, i: int) -> List:
        return list(self.entries[i])

    @property
    def order(self):
        """Common truncation order: the minimum over all entries"""
        if not self.is_series:
            return INFINITE_ORDER
        return min(x.order for r in self.entries for x in r)

    def __eq__(self, other):
        if not isinstance(other, RingMatrix):
            return NotImplemented
        return self.shape == other.shape and self.entries == other.entries

    __hash__ = None

    def __repr__(self):
        kind = "TSeries" if self.is_series else "QPoly"
        return f"RingMatrix({self.rows}x{self.cols} over {kind})"

    # Arithmetic

    def _check_same_shape(self, other: "RingMatrix"):
        if self.shape != other.shape:
            raise DimensionMismatchError(f"shapes {self.shape} and {other.shape} differ")

    def _align(self, other: "RingMatrix"):
        """Lift both operands to series when either one is"""
        if self.is_series == other.is_series:
            return self, other
        return self.to_series(), other.to_series()

    def __add__(self, other: "RingMatrix") -> "RingMatrix":
        self._check_same_shape(other)
        a, b = self._align(other)
        return RingMatrix([[x + y for x, y in zip(ra, rb)] for ra, rb in zip(a.entries, b.entries)])

    def __sub__(self, other: "RingMatrix") -> "RingMatrix":
        self._check_same_shape(other)
        a, b = self._align(other)
        return RingMatrix([[x - y for x, y in zip(ra, rb)] for ra, rb in zip(a.entries, b.entries)])

    def __neg__(self):
        return self.map(lambda x: -x)

    def __mul__(self, other):
        if isinstance(other, RingMatrix):
            return self.matmul(other)
        return self.scale(other)

    def scale(self, factor) -> "RingMatrix":
        """Multiply every entry by a scalar, QPoly or TSeries"""
        if isinstance(factor, TSeries):
            return RingMatrix([[factor * TSeries.lift(x) for x in r] for r in self.entries])
        factor = to_qpoly(factor)
        if self.is_series:
            return self.map(lambda x: x.scale(factor))
        return self.map(lambda x: x * factor)

    def _dot(self, row: Sequence, col: Sequence):
        total = None
        for a, b in zip(row, col):
            if _is_structural_zero(a) or _is_structural_zero(b):
                continue
            term = a * b
            total = term if total is None else total + term
        return self.zero_entry() if total is None else total

    def matmul(self, other: "RingMatrix") -> "RingMatrix":
        if self.cols != other.rows:
            raise DimensionMismatchError(f"cannot multiply {self.shape} by {other.shape}")
        a, b = self._align(other)
        columns = [b.column(j) for j in range(b.cols)]
        return RingMatrix([[a._dot(r, c) for c in columns] for r in a.entries])

    def apply(self, vector: Sequence) -> List:
        """Matrix-vector product"""
        if len(vector) != self.cols:
            raise DimensionMismatchError(f"vector of length {len(vector)} for {self.cols} columns")
        matrix = self
        if any(isinstance(x, TSeries) for x in vector) and not self.is_series:
            matrix = self.to_series()
        if matrix.is_series:
            vector = [TSeries.lift(x) for x in vector]
        else:
            vector = [to_qpoly(x) for x in vector]
        return [matrix._dot(r, vector) for r in matrix.entries]

    def __pow__(self, exponent: int) -> "RingMatrix":
        if not self.is_square:
            raise DimensionMismatchError("power of a non-square matrix")
        result = RingMatrix.identity(self.rows, series=self.is_series)
        for _ in range(exponent):
            result = result.matmul(self)
        return result

    # Structural operations

    def map(self, fn: Callable) -> "RingMatrix":
        return RingMatrix([[fn(x) for x in r] for r in self.entries])

    def transpose(self) -> "RingMatrix":
        return RingMatrix([self.column(j) for j in range(self.cols)])

    def trace(self):
        if not self.is_square:
            raise DimensionMismatchError("trace of a non-square matrix")
        total = self.entries[0][0]
        for i in range(1, self.rows):
            total = total + self.entries[i][i]
        return total

    def is_zero(self) -> bool:
        return all(not x for r in self.entries for x in r)

    def is_symmetric(self) -> bool:
        return self.is_square and all(
            self.entries[i][j] == self.entries[j][i] for i in range(self.rows) for j in range(i)
        )

    def to_series(self, order=INFINITE_ORDER) -> "RingMatrix":
        if self.is_series:
            return self if order == INFINITE_ORDER else self.truncate(order)
        return RingMatrix([[TSeries.constant(x, order) for x in r] for r in self.entries])

    def truncate(self, n: int) -> "RingMatrix":
        return self.map(lambda x: x.truncate(n))

    def shift(self, k: int) -> "RingMatrix":
        """Multiply every entry by t^k"""
        return self.map(lambda x: x.shift(k))

    def mod_t(self) -> "RingMatrix":
        """Constant term in t, as a QPoly matrix"""
        if not self.is_series:
            return self
        return RingMatrix([[x.coeff(0) for x in r] for r in self.entries])

    def t_coefficient(self, k: int) -> "RingMatrix":
        return RingMatrix([[x.coeff(k) for x in r] for r in self.entries])

    def specialize(self, value) -> "RingMatrix":
        if self.is_series:
            return self.map(lambda x: x.specialize(value))
        return self.map(lambda x: QRING.ground_new(q_evaluate(x, value)))

    def equal_mod(self, other: "RingMatrix", n: int) -> bool:
        self._check_same_shape(other)
        a, b = self._align(other)
        return all(x.equal_mod(y, n) for ra, rb in zip(a.entries, b.entries) for x, y in zip(ra, rb))

    def to_rational_rows(self) -> List[List]:
        """Entries as QQ elements; every entry must be a rational constant"""
        source = self.mod_t() if self.is_series else self
        rows = []
        for r in source.entries:
            if not all(is_rational_constant(x) for x in r):
                raise ValueError("matrix still depends on q")
            rows.append([constant_term(x) for x in r])
        return rows


def _unit_pivot(value) -> bool:
    """Entry whose t^0 coefficient is a nonzero rational constant"""
    c0 = value.coeff(0) if value.order > 0 else QRING.zero
    return bool(c0) and is_rational_constant(c0)


def mat_inverse(m: RingMatrix) -> RingMatrix:
    """Gauss-Jordan inverse over the truncated ring"""
    if not m.is_square:
        raise DimensionMismatchError("inverse of a non-square matrix")
    was_series = m.is_series
    n = m.rows
    work = [list(r) + [TSeries.constant(1 if i == j else 0) for j in range(n)]
            for i, r in enumerate(m.to_series().entries)]
    for col in range(n):
        pivot_row = next((r for r in range(col, n) if _unit_pivot(work[r][col])), None)
        if pivot_row is None:
            raise NotInvertibleError("not invertible at t=0")
        work[col], work[pivot_row] = work[pivot_row], work[col]
        inv = work[col][col].inverse()
        work[col] = [x * inv for x in work[col]]
        for r in range(n):
            if r == col:
                continue
            factor = work[r][col]
            if not factor and factor.is_exact:
                continue
            work[r] = [x - factor * y for x, y in zip(work[r], work[col])]
    result = RingMatrix([row[n:] for row in work])
    if not was_series:
        return result.mod_t()
    return result.truncate(m.order)


def _divisible_pivot(value) -> bool:
    """t^v times a unit whose inverse stays inside the truncated ring"""
    v = value.valuation()
    if not v.is_exact:
        return False
    unit = value.unshift(v.value)
    if unit.is_exact and len(unit.coeffs) > 1:
        return False
    return _unit_pivot(unit)


def determinant(m: RingMatrix) -> TSeries:
    """Determinant over the truncated ring by full pivoting on least t-valuation

    Keeps the absolute precision of the input: the result is known modulo
    t^W where W is the smallest entry order. Pivots are taken among the
    entries of least valuation whose unit part can be inverted; once no such
    entry is left the remaining block goes through the division-free
    Berkowitz expansion, so q-dependent and untruncated entries are fine.
    """
    if not m.is_square:
        raise DimensionMismatchError("determinant of a non-square matrix")
    n = m.rows
    if n == 0:
        return TSeries.constant(1)
    width = m.order
    work = [[x.truncate(width) for x in r] for r in m.to_series().entries]
    result = TSeries.constant(1)
    sign = 1
    for k in range(n):
        least = None
        for i in range(k, n):
            for j in range(k, n):
                v = work[i][j].valuation()
                if v.is_exact and (least is None or v.value < least):
                    least = v.value
        if least is None:
            # remaining block vanishes modulo t^width
            result = result * TSeries.zero(width)
            break
        best = next(((i, j) for i in range(k, n) for j in range(k, n)
                     if work[i][j].valuation() == Valuation.exact(least)
                     and _divisible_pivot(work[i][j])), None)
        if best is None:
            block = RingMatrix([r[k:] for r in work[k:]])
            minor = _berkowitz(block)[n - k]
            result = result * (minor if (n - k) % 2 == 0 else -minor)
            logger.debug(f"determinant: division-free expansion of the last {n - k} rows")
            break
        pi, pj = best
        if pi != k:
            work[k], work[pi] = work[pi], work[k]
            sign = -sign
        if pj != k:
            for r in work:
                r[k], r[pj] = r[pj], r[k]
            sign = -sign
        pivot = work[k][k]
        result = result * pivot
        for i in range(k + 1, n):
            if not work[i][k] and work[i][k].is_exact:
                continue
            factor = work[i][k].divide(pivot)
            for j in range(k + 1, n):
                work[i][j] = work[i][j] - factor * work[k][j]
            work[i][k] = TSeries.zero()
    return result if sign > 0 else -result


def _faddeev(m: RingMatrix) -> List:
    """Faddeev-LeVerrier: c_k = -tr(A M_k)/k with M_k = A M_{k-1} + c_{k-1} I"""
    n = m.rows
    coeffs = [TSeries.constant(1)]
    product = None
    for k in range(1, n + 1):
        c_prev = coeffs[-1]
        if product is None:
            m_k = RingMatrix.identity(n, series=True).scale(c_prev)
        else:
            m_k = RingMatrix([
                [x + c_prev if i == j else x for j, x in enumerate(r)]
                for i, r in enumerate(product.entries)
            ])
        product = m.matmul(m_k)
        coeffs.append(product.trace().scale(QQ(-1, k)))
    return coeffs


def _berkowitz(m: RingMatrix) -> List:
    """Division-free characteristic polynomial via Toeplitz products"""
    a = m.entries
    poly = [TSeries.constant(1), -a[0][0]]
    for k in range(1, m.rows):
        row = list(a[k][:k])
        col = [a[i][k] for i in range(k)]
        leading = RingMatrix([list(r[:k]) for r in a[:k]])
        toeplitz = [TSeries.constant(1), -a[k][k]]
        vector = col
        for _ in range(k):
            toeplitz.append(-_series_dot(row, vector))
            vector = leading.apply(vector)
        new_poly = []
        for i in range(k + 2):
            acc = None
            for j in range(len(poly)):
                if 0 <= i - j < len(toeplitz):
                    term = toeplitz[i - j] * poly[j]
                    acc = term if acc is None else acc + term
            new_poly.append(acc)
        poly = new_poly
    return poly


def _series_dot(row: Sequence, col: Sequence) -> TSeries:
    total = TSeries.zero()
    for a, b in zip(row, col):
        if a.is_exact_zero() or b.is_exact_zero():
            continue
        total = total + a * b
    return total


def char_poly(m: RingMatrix, method: str = "faddeev"):
    """Characteristic polynomial det(xI - m) as an XPoly"""
    from models.xpoly import XPoly

    if not m.is_square:
        raise DimensionMismatchError("characteristic polynomial of a non-square matrix")
    if method not in CHARPOLY_METHODS:
        raise ValueError(f"unknown characteristic polynomial method {method!r}")
    series = m.to_series()
    coeffs = _faddeev(series) if method == "faddeev" else _berkowitz(series)
    logger.debug(f"char_poly via {method}: {m.rows}x{m.rows}, order {series.order}")
    # every coefficient is reported at the precision of the matrix
    coeffs = [c.truncate(series.order) for c in coeffs]
    # coeffs[k] multiplies x^(n-k)
    return XPoly(list(reversed(coeffs)))
