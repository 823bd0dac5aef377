# models/certificate.py
from collections import Counter
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, List, Optional, Tuple

from models.series import Valuation
from models.xpoly import XPoly


class Verdict(str, Enum):
    SEMISIMPLE = "Semisimple"
    INCONCLUSIVE = "Inconclusive"


@dataclass(frozen=True)
class GWVanishingVerdict:
    """Whether an n-point invariant of the deformation class is known to vanish"""
    kind: str
    reason: str = ""

    ZERO = "Zero"
    UNKNOWN = "Unknown"

    @property
    def is_zero(self) -> bool:
        return self.kind == self.ZERO


@dataclass(frozen=True)
class NewtonPolygon:
    """Lower convex hull of (i, v(a_i)) for P = a_0 x^n + ... + a_n"""
    points: Tuple[Tuple[int, Valuation], ...]
    vertices: Tuple[Tuple[int, Any], ...]
    segments: Tuple[Tuple[Any, int], ...]
    tail_roots: int = 0
    tail_bound: Optional[Any] = None

    @property
    def degree(self) -> int:
        return len(self.points) - 1

    @property
    def root_valuations(self) -> List[Any]:
        """Valuations fixed by the hull, with multiplicity, ascending"""
        values = []
        for slope, length in self.segments:
            values.extend([slope] * length)
        return sorted(values)

    def valuation_counts(self) -> Dict[Any, int]:
        return dict(sorted(Counter(self.root_valuations).items()))

    @property
    def is_complete(self) -> bool:
        return self.tail_roots == 0


@dataclass(frozen=True)
class CertificateFragment:
    """Outcome of one distinct-roots argument"""
    method: str
    verdict: Verdict
    reason: str
    details: Dict[str, Any] = field(default_factory=dict)

    @property
    def is_semisimple(self) -> bool:
        return self.verdict == Verdict.SEMISIMPLE


@dataclass
class Certificate:
    element: str
    order: Any
    q_value: Any
    char_poly: XPoly
    polygon_fragment: CertificateFragment
    resultant_fragment: CertificateFragment
    polygon_P: Optional[NewtonPolygon] = None
    polygon_Pprime: Optional[NewtonPolygon] = None
    p0_gcd_degree: Optional[int] = None
    resultant_valuation: Optional[Valuation] = None
    notes: List[str] = field(default_factory=list)

    @property
    def verdict(self) -> Verdict:
        if self.polygon_fragment.is_semisimple or self.resultant_fragment.is_semisimple:
            return Verdict.SEMISIMPLE
        return Verdict.INCONCLUSIVE

    @property
    def root_valuations_P(self) -> List[Any]:
        return self.polygon_P.root_valuations if self.polygon_P else []

    @property
    def root_valuations_Pprime(self) -> List[Any]:
        return self.polygon_Pprime.root_valuations if self.polygon_Pprime else []
