# services/report_service.py
import json
import logging
from typing import Any, Dict, List, Optional

import pandas as pd

from models.certificate import Certificate, CertificateFragment, NewtonPolygon
from models.series import INFINITE_ORDER, format_rational, qpoly_to_pairs
from models.xpoly import XPoly

logger = logging.getLogger(__name__)


def _number(value) -> str:
    """Exact decimal string for ints, QQ elements and infinity"""
    if value is None:
        return None
    if isinstance(value, float) and value == INFINITE_ORDER:
        return "inf"
    if isinstance(value, int):
        return str(value)
    return format_rational(value)


def _table(rows: List[Dict[str, Any]]) -> str:
    if not rows:
        return "  (none)"
    return pd.DataFrame(rows).to_string(index=False)


class ReportService:
    @staticmethod
    def check_summary(result: Dict[str, Any]) -> Dict[str, Any]:
        """Result dict of a verifier, with the violation count up front"""
        return {
            "success": result["success"],
            "violation_count": len(result["violations"]),
            "violations": list(result["violations"]),
        }

    @staticmethod
    def char_poly_to_dict(p: XPoly) -> Dict[str, Any]:
        coefficients = []
        for power in range(p.degree, -1, -1):
            c = p.coeff(power)
            coefficients.append({
                "x_power": power,
                "known_mod_t": _number(c.order),
                "t_terms": [
                    {"t_power": m, "q_poly": qpoly_to_pairs(value)}
                    for m, value in enumerate(c.coeffs) if value
                ],
            })
        return {"degree": p.degree, "order": _number(p.order), "coefficients": coefficients}

    @staticmethod
    def polygon_to_dict(polygon: Optional[NewtonPolygon]) -> Optional[Dict[str, Any]]:
        if polygon is None:
            return None
        return {
            "vertices": [[i, _number(v)] for i, v in polygon.vertices],
            "segments": [{"slope": _number(s), "length": n} for s, n in polygon.segments],
            "root_valuations": {_number(v): n for v, n in polygon.valuation_counts().items()},
            "tail_roots": polygon.tail_roots,
            "tail_bound": _number(polygon.tail_bound),
        }

    @staticmethod
    def fragment_to_dict(fragment: CertificateFragment) -> Dict[str, Any]:
        return {"method": fragment.method, "verdict": fragment.verdict.value, "reason": fragment.reason}

    @staticmethod
    def certificate_to_dict(certificate: Certificate) -> Dict[str, Any]:
        return {
            "element": certificate.element,
            "order": _number(certificate.order),
            "q": _number(certificate.q_value),
            "verdict": certificate.verdict.value,
            "char_poly": ReportService.char_poly_to_dict(certificate.char_poly),
            "layout": certificate.char_poly.format_layout(),
            "polygon_P": ReportService.polygon_to_dict(certificate.polygon_P),
            "polygon_Pprime": ReportService.polygon_to_dict(certificate.polygon_Pprime),
            "p0_gcd_degree": certificate.p0_gcd_degree,
            "resultant_valuation": str(certificate.resultant_valuation),
            "fragments": [
                ReportService.fragment_to_dict(certificate.polygon_fragment),
                ReportService.fragment_to_dict(certificate.resultant_fragment),
            ],
            "notes": list(certificate.notes),
        }

    @staticmethod
    def render(report: Dict[str, Any], fmt: str = "text") -> str:
        if fmt == "machine":
            return json.dumps(report, indent=2, ensure_ascii=False)
        if report.get("command") == "certify":
            return ReportService.render_certify_text(report)
        return ReportService.render_verify_text(report)

    @staticmethod
    def render_verify_text(report: Dict[str, Any]) -> str:
        lines = [f"Small quantum ring: {report['spec']}"]
        if report.get("q") is not None:
            lines.append(f"Specialized at q = {report['q']}")
        rows = []
        for name in ("axioms", "frobenius", "character_table"):
            check = report.get(name)
            if check is None:
                continue
            rows.append({
                "check": name,
                "result": "ok" if check["success"] else "FAILED",
                "violations": check["violation_count"],
            })
        lines += ["", _table(rows)]
        if report.get("pairing_determinant") is not None:
            lines.append(f"\nPairing determinant: {report['pairing_determinant']}")
        witness = report.get("nilpotent_witness")
        if witness:
            status = "squares to zero" if witness["squares_to_zero"] else "does NOT square to zero"
            lines.append(f"Nilpotent witness c0 = {witness['element']}: {status}")
        radical = report.get("radical")
        if radical:
            lines.append(f"Radical at q = {radical['q']}: dimension {radical['dimension']}")
            lines += [f"  {vector}" for vector in radical["basis"]]
        for name in ("axioms", "frobenius", "character_table"):
            check = report.get(name)
            if check and check["violations"]:
                lines.append(f"\n{name} violations:")
                lines += [f"  {v}" for v in check["violations"]]
        if "timing" in report:
            lines.append(f"\nElapsed: {report['timing']['seconds']} s")
        lines.append("\nResult: " + ("all checks passed" if report["success"] else "violations found"))
        return "\n".join(lines)

    @staticmethod
    def render_certify_text(report: Dict[str, Any]) -> str:
        cert = report["certificate"]
        lines = [
            f"Element: {report['description']}",
            f"Bootstrap order {report['bootstrap_order']}, matrix known mod t^{cert['order']}, q = {cert['q']}",
            "",
            "Characteristic polynomial:",
        ]
        lines += [f"  {line}" for line in cert["layout"]]
        for key, title in (("polygon_P", "Newton polygon of P"), ("polygon_Pprime", "Newton polygon of P'")):
            polygon = cert[key]
            if polygon is None:
                continue
            lines += ["", f"{title}: vertices " + ", ".join(f"({i}, {v})" for i, v in polygon["vertices"])]
            lines.append(_table([{"valuation": v, "roots": n} for v, n in polygon["root_valuations"].items()]))
            if polygon["tail_roots"]:
                lines.append(f"  {polygon['tail_roots']} root(s) of valuation >= {polygon['tail_bound']}")
        lines += [
            "",
            f"deg gcd(P0, P0'): {cert['p0_gcd_degree']}",
            f"valuation of res(P, P'): {cert['resultant_valuation']}",
            "",
            _table(cert["fragments"]),
        ]
        if cert["notes"]:
            lines.append("Notes: " + "; ".join(cert["notes"]))
        if "timing" in report:
            lines.append(f"Elapsed: {report['timing']['seconds']} s")
        lines.append(f"\nVerdict: {cert['verdict']}")
        return "\n".join(lines)
