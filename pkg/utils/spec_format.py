# utils/spec_format.py
import logging
import re
from pathlib import Path
from typing import Dict, List, Optional, Tuple

from models.algebra import AlgebraSpec, BasisLabel
from models.matrix import RingMatrix
from models.series import QRING, format_qpoly, format_rational, q, to_qpoly
from utils.errors import ExpressionError, SpecParseError
from utils.expressions import (
    label_from_symbol, normalize, parse_linear_form, parse_polynomial, poly_terms,
)

logger = logging.getLogger(__name__)

SECTIONS = ("BASIS", "GRADING", "GENERATORS", "DERIVED", "UNIT", "POINT", "DEFORM")
GRADING_KEYS = ("q_degree", "t_degree", "divisor_beta")

HEADER_PATTERN = re.compile(r"^([A-Z_]+)\s*:?$")
BASIS_PATTERN = re.compile(r"^D(\d+(?:_\d+)*)\s+(-?\d+)$")
GRADING_PATTERN = re.compile(r"^([a-z_]+)\s*[=:]?\s*(-?\d+)$")
SINGLE_LABEL_PATTERN = re.compile(r"^D(\d+(?:_\d+)*)$")
PRODUCT_PATTERN = re.compile(r"^D(\d+(?:_\d+)*)\s*\*\s*D(\d+(?:_\d+)*)$")
DERIVED_PATTERN = re.compile(r"^M(\d+(?:_\d+)*)$")


def _split_sections(text: str) -> Dict[str, List[Tuple[int, str]]]:
    """Group non-empty lines under their section header"""
    sections: Dict[str, List[Tuple[int, str]]] = {}
    current = None
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        header = HEADER_PATTERN.match(line)
        if header:
            name = header.group(1)
            if name not in SECTIONS:
                raise SpecParseError(f"unknown section '{name}'", line_no)
            if name in sections:
                raise SpecParseError(f"section '{name}' appears twice", line_no)
            sections[name] = []
            current = name
            continue
        if current is None:
            raise SpecParseError("content before the first section header", line_no)
        sections[current].append((line_no, line))
    return sections


def _single_label(sections, name: str, known: Dict[str, BasisLabel], required: bool = True) -> Optional[str]:
    lines = sections.get(name, [])
    if not lines:
        if required:
            raise SpecParseError(f"missing {name} section")
        return None
    if len(lines) != 1:
        raise SpecParseError(f"{name} takes exactly one label", lines[1][0])
    line_no, line = lines[0]
    match = SINGLE_LABEL_PATTERN.match(normalize(line))
    if not match:
        raise SpecParseError(f"expected a basis label, got '{line}'", line_no)
    label = label_from_symbol("D" + match.group(1))
    if label not in known:
        raise SpecParseError(f"undeclared label D{label}", line_no)
    return label


def column_from_terms(terms, basis: List[str]) -> List:
    column = [QRING.zero] * len(basis)
    for label, scalars, coeff in terms:
        column[basis.index(label)] += QRING.ground_new(coeff) * q ** scalars.get("q", 0)
    return column


def _evaluate_matrix_polynomial(poly, matrices: Dict[str, RingMatrix], dim: int) -> RingMatrix:
    """Evaluate a polynomial in q and commuting M-symbols"""
    total = RingMatrix.zeros(dim, dim)
    for powers, coeff in poly_terms(poly):
        term = RingMatrix.identity(dim)
        for name, exponent in powers.items():
            if name == "q":
                continue
            term = term * (matrices[name] ** exponent)
        scalar = QRING.ground_new(coeff) * q ** powers.get("q", 0)
        total = total + term.scale(scalar)
    return total


def parse_spec_text(text: str) -> AlgebraSpec:
    """Parse the sectioned spec text into an AlgebraSpec (pairing not derived)"""
    sections = _split_sections(text)

    # Basis
    basis: List[BasisLabel] = []
    known: Dict[str, BasisLabel] = {}
    for line_no, line in sections.get("BASIS", []):
        match = BASIS_PATTERN.match(normalize(line))
        if not match:
            raise SpecParseError(f"expected '<label> <degree>', got '{line}'", line_no)
        label = BasisLabel(label_from_symbol("D" + match.group(1)), int(match.group(2)))
        if label.name in known:
            raise SpecParseError(f"duplicate label D{label.name}", line_no)
        basis.append(label)
        known[label.name] = label
    if not basis:
        raise SpecParseError("empty BASIS section")
    names = [b.name for b in basis]
    dim = len(basis)

    # Grading
    grading = {"t_degree": 0, "divisor_beta": 1}
    for line_no, line in sections.get("GRADING", []):
        match = GRADING_PATTERN.match(line)
        if not match or match.group(1) not in GRADING_KEYS:
            raise SpecParseError(f"unrecognised grading line '{line}'", line_no)
        grading[match.group(1)] = int(match.group(2))
    if grading.get("q_degree", 0) <= 0:
        raise SpecParseError("GRADING needs a positive q_degree")

    unit = _single_label(sections, "UNIT", known)
    point = _single_label(sections, "POINT", known)
    deform = _single_label(sections, "DEFORM", known, required=False)

    # Generator tables
    label_symbols = {b.symbol: b.name for b in basis}
    columns: Dict[str, Dict[str, List]] = {}
    generators: List[str] = []
    for line_no, line in sections.get("GENERATORS", []):
        if "=" not in line:
            raise SpecParseError(f"expected '<a> * <b> = <sum>', got '{line}'", line_no)
        lhs, rhs = line.split("=", 1)
        match = PRODUCT_PATTERN.match(normalize(lhs).strip())
        if not match:
            raise SpecParseError(f"left side must be a product of two labels, got '{lhs.strip()}'", line_no)
        a, b = (label_from_symbol("D" + g) for g in match.groups())
        for label in (a, b):
            if label not in known:
                raise SpecParseError(f"undeclared label D{label}", line_no)
        try:
            terms = parse_linear_form(rhs, label_symbols)
        except ExpressionError as e:
            raise SpecParseError(str(e), line_no)
        if a not in columns:
            columns[a] = {}
            generators.append(a)
        if b in columns[a]:
            raise SpecParseError(f"product D{a} * D{b} given twice", line_no)
        columns[a][b] = column_from_terms(terms, names)

    matrices: Dict[str, RingMatrix] = {}
    unit_symbol = known[unit].matrix_symbol
    matrices[unit_symbol] = RingMatrix.identity(dim)
    for a in generators:
        cols = []
        for b in names:
            if b in columns[a]:
                cols.append(columns[a][b])
            elif b == unit:
                cols.append([QRING.one if n == a else QRING.zero for n in names])
            elif b in columns and a in columns[b]:
                # commutativity
                cols.append(columns[b][a])
            else:
                raise SpecParseError(f"missing product D{a} * D{b}")
        matrices[known[a].matrix_symbol] = RingMatrix.from_columns(cols)

    # Recurrences, each using only matrices defined above it
    derivations: List[Tuple[str, str]] = []
    for line_no, line in sections.get("DERIVED", []):
        if "=" not in line:
            raise SpecParseError(f"expected 'M<label> = <expression>', got '{line}'", line_no)
        lhs, rhs = line.split("=", 1)
        match = DERIVED_PATTERN.match(normalize(lhs).strip())
        if not match:
            raise SpecParseError(f"left side must be a matrix name, got '{lhs.strip()}'", line_no)
        label = label_from_symbol("D" + match.group(1))
        if label not in known:
            raise SpecParseError(f"undeclared label D{label}", line_no)
        symbol = known[label].matrix_symbol
        if symbol in matrices:
            raise SpecParseError(f"matrix M{label} defined twice", line_no)
        try:
            poly = parse_polynomial(rhs, ["q"] + list(matrices))
        except ExpressionError as e:
            raise SpecParseError(str(e), line_no)
        matrices[symbol] = _evaluate_matrix_polynomial(poly, matrices, dim)
        derivations.append((label, rhs.strip()))

    structure = {}
    for b in basis:
        if b.matrix_symbol not in matrices:
            raise SpecParseError(f"no multiplication matrix for D{b.name}")
        structure[b.name] = matrices[b.matrix_symbol]

    spec = AlgebraSpec(
        basis=tuple(basis),
        q_degree=grading["q_degree"],
        t_degree=grading["t_degree"],
        structure=structure,
        unit_label=unit,
        point_label=point,
        deform_label=deform,
        divisor_beta=grading["divisor_beta"],
        generators=tuple(generators),
        derivations=tuple(derivations),
    )
    logger.info(f"Parsed spec: {dim} classes, {len(generators)} generators, {len(derivations)} recurrences")
    return spec


def parse_spec(path) -> AlgebraSpec:
    """Read and parse a spec file"""
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise SpecParseError(f"cannot read {path}: {e.strerror}")
    return parse_spec_text(text)


def format_linear(column: List, spec: AlgebraSpec) -> str:
    """Render a coordinate vector as 'D4,1 + q*D0'"""
    parts = []
    for value, label in zip(column, spec.basis):
        value = to_qpoly(value)
        if not value:
            continue
        if len(value) == 1:
            (k,), c = value.terms()[0]
            sign = "-" if c < 0 else "+"
            factors = []
            if abs(c) != 1:
                factors.append(format_rational(abs(c)))
            if k:
                factors.append("q" if k == 1 else f"q^{k}")
            factors.append(label.display)
            parts.append((sign, "*".join(factors)))
        else:
            parts.append(("+", f"({format_qpoly(value)})*{label.display}"))
    if not parts:
        return "0"
    text = ("-" if parts[0][0] == "-" else "") + parts[0][1]
    for sign, body in parts[1:]:
        text += f" {sign} {body}"
    return text


def dump_spec(spec: AlgebraSpec) -> str:
    """Serialize a spec so that parse_spec_text reproduces it"""
    lines = ["BASIS"]
    lines += [f"{b.display} {b.degree}" for b in spec.basis]
    lines += ["", "GRADING", f"q_degree {spec.q_degree}", f"t_degree {spec.t_degree}",
              f"divisor_beta {spec.divisor_beta}"]

    derived = {label for label, _ in spec.derivations}
    generators = list(spec.generators) or [
        n for n in spec.labels if n != spec.unit_label and n not in derived
    ]
    lines += ["", "GENERATORS"]
    for a in generators:
        matrix = spec.matrix(a)
        display = spec.label(a).display
        for j, b in enumerate(spec.basis):
            lines.append(f"{display} * {b.display} = {format_linear(matrix.column(j), spec)}")
    if spec.derivations:
        lines += ["", "DERIVED"]
        lines += [f"M{label} = {expression}" for label, expression in spec.derivations]
    lines += ["", "UNIT", spec.label(spec.unit_label).display,
              "", "POINT", spec.label(spec.point_label).display]
    if spec.deform_label:
        lines += ["", "DEFORM", spec.label(spec.deform_label).display]
    return "\n".join(lines) + "\n"

