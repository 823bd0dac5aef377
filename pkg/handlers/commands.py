# handlers/commands.py
import logging
import time
from typing import Any, Dict, Tuple

from app_config import (
    DEFAULT_ORDERS, DEFAULT_Q_SPECIALIZATION, ELEMENTS, EXIT_INCONCLUSIVE, EXIT_OK, EXIT_VIOLATION,
)
from database.ig26_tables import NILPOTENT_WITNESS, SPEC_DESCRIPTION
from models.algebra import AlgebraSpec
from models.certificate import Verdict
from services.algebra_service import AlgebraService
from services.certify_service import CertifyService
from services.deformation_service import DeformationService
from services.ig26_service import IG26Service
from services.report_service import ReportService
from utils.errors import BootstrapOrderError, SpecInconsistencyError, UsageError
from utils.spec_format import dump_spec, format_linear, parse_spec
from utils.validators import InputValidator

logger = logging.getLogger(__name__)


def load_spec(options) -> Tuple[AlgebraSpec, bool]:
    """The spec named by --spec, or the built-in IG(2,6) ring"""
    path = getattr(options, "spec", None)
    if path:
        logger.info(f"Reading spec file {path}")
        return parse_spec(path), False
    return IG26Service.build_small_qh(), True


def _q_option(options):
    value = getattr(options, "q", None)
    if value is None:
        return None
    parsed = InputValidator.parse_rational(value)
    if parsed is None:
        raise UsageError(f"--q expects a rational such as 2 or 1/3, got '{value}'")
    return parsed


def _timing(report: Dict[str, Any], options, started: float):
    if getattr(options, "timing", False):
        report["timing"] = {"seconds": f"{time.perf_counter() - started:.3f}"}


def cmd_verify_small(options) -> Tuple[Dict[str, Any], int]:
    """Axioms, pairing, character table and nilpotent witness of the small ring"""
    started = time.perf_counter()
    spec, builtin = load_spec(options)
    q_value = _q_option(options)
    checked = AlgebraService.specialize(spec, q_value) if q_value is not None else spec

    report: Dict[str, Any] = {
        "command": "verify-small",
        "spec": SPEC_DESCRIPTION if builtin else str(options.spec),
        "q": None if q_value is None else str(q_value),
        "axioms": ReportService.check_summary(AlgebraService.verify_axioms(checked)),
    }

    # Pairing is the t^0, q^0 part; it does not depend on the specialization
    try:
        pairing = AlgebraService.derive_pairing(spec)
        report["pairing_determinant"] = str(AlgebraService.pairing_determinant(pairing))
        report["frobenius"] = ReportService.check_summary(AlgebraService.verify_frobenius(checked, pairing))
    except SpecInconsistencyError as e:
        logger.warning(f"Pairing check failed: {e}")
        report["pairing_determinant"] = None
        report["frobenius"] = {"success": False, "violation_count": 1, "violations": [str(e)]}

    radical_q = q_value if q_value is not None else InputValidator.parse_rational(DEFAULT_Q_SPECIALIZATION)
    if builtin:
        if q_value is None or q_value == 1:
            report["character_table"] = ReportService.check_summary(IG26Service.verify_character_table(spec))
        witness = IG26Service.nilpotent_witness(spec)
        if q_value is not None:
            witness = AlgebraService.specialize_vector(witness, q_value)
        report["nilpotent_witness"] = {
            "element": NILPOTENT_WITNESS,
            "squares_to_zero": AlgebraService.squares_to_zero(checked, witness),
        }
    if report["axioms"]["success"]:
        radical = AlgebraService.radical_basis(AlgebraService.specialize(spec, radical_q))
        report["radical"] = {
            "q": str(radical_q),
            "dimension": len(radical),
            "basis": [format_linear(vector, spec) for vector in radical],
        }

    checks = [report[name]["success"] for name in ("axioms", "frobenius", "character_table") if name in report]
    if "nilpotent_witness" in report:
        checks.append(report["nilpotent_witness"]["squares_to_zero"])
    report["success"] = all(checks)
    _timing(report, options, started)
    logger.info(f"verify-small finished: success={report['success']}")
    return report, EXIT_OK if report["success"] else EXIT_VIOLATION


def cmd_certify(options) -> Tuple[Dict[str, Any], int]:
    """Bootstrap, characteristic polynomial and both distinct-roots certificates"""
    started = time.perf_counter()
    element = getattr(options, "element", None) or "gamma"
    if not InputValidator.validate_element(element):
        raise UsageError(f"unknown element '{element}'; use gamma, euler or a linear expression")
    order = getattr(options, "order", None)
    if order is None:
        order = DEFAULT_ORDERS.get(element, DEFAULT_ORDERS["gamma"])
    if not InputValidator.validate_order(order):
        raise UsageError(f"--order must be a positive integer, got {order!r}")
    q_value = _q_option(options)
    if q_value is None:
        q_value = InputValidator.parse_rational(DEFAULT_Q_SPECIALIZATION)
    if not InputValidator.validate_certification_q(q_value):
        raise UsageError("certification at q=0 is not supported; the grading degenerates there")

    spec, builtin = load_spec(options)
    if not builtin:
        axioms = AlgebraService.verify_axioms(spec)
        if not axioms["success"]:
            report = {"command": "certify", "spec": str(options.spec),
                      "axioms": ReportService.check_summary(axioms), "success": False}
            return report, EXIT_VIOLATION
    if spec.deform_label is None:
        raise UsageError("certify needs a deformation class; the spec has no DEFORM section")

    expression = DeformationService.element_expression(spec, element)
    bootstrap_order = DeformationService.bootstrap_order_for(spec, expression, order)
    try:
        DeformationService.check_order(spec, bootstrap_order)
    except BootstrapOrderError as e:
        limit = DeformationService.max_order(spec)
        raise UsageError(f"--order {order} is out of bounds (bootstrap order {limit} at most): {e}") from e

    dp = DeformationService.bootstrap(spec, bootstrap_order, q_value=q_value)
    certificate = CertifyService.certify(dp, element, q_value, order=order)
    report = {
        "command": "certify",
        "description": ELEMENTS.get(element, expression),
        "bootstrap_order": bootstrap_order,
        "certificate": ReportService.certificate_to_dict(certificate),
    }
    _timing(report, options, started)
    exit_code = EXIT_OK if certificate.verdict == Verdict.SEMISIMPLE else EXIT_INCONCLUSIVE
    return report, exit_code


def cmd_dump(options) -> Tuple[str, int]:
    """The spec in the text format that parse_spec reads"""
    spec, _ = load_spec(options)
    return dump_spec(spec), EXIT_OK
