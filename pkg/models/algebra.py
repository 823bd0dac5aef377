# models/algebra.py
from dataclasses import dataclass, field, replace
from typing import Dict, List, Optional, Tuple

from models.matrix import RingMatrix
from models.series import QRING


@dataclass(frozen=True)
class BasisLabel:
    """Named basis class, e.g. '4,3' of degree 7"""
    name: str
    degree: int

    @property
    def display(self) -> str:
        return f"D{self.name}"

    @property
    def symbol(self) -> str:
        """Identifier used inside polynomial expressions"""
        return "D" + self.name.replace(",", "_")

    @property
    def matrix_symbol(self) -> str:
        return "M" + self.name.replace(",", "_")


@dataclass(frozen=True)
class AlgebraSpec:
    """Graded commutative algebra over Q[q] given by multiplication matrices"""
    basis: Tuple[BasisLabel, ...]
    q_degree: int
    t_degree: int
    structure: Dict[str, RingMatrix]
    unit_label: str
    point_label: str
    deform_label: Optional[str] = None
    divisor_beta: int = 1
    graded: bool = True
    generators: Tuple[str, ...] = ()
    derivations: Tuple[Tuple[str, str], ...] = ()
    q_value: Optional[object] = None
    pairing: Optional[RingMatrix] = field(default=None, compare=False)

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def labels(self) -> List[str]:
        return [b.name for b in self.basis]

    def index(self, name: str) -> int:
        for i, b in enumerate(self.basis):
            if b.name == name:
                return i
        raise KeyError(f"unknown basis label D{name}")

    def label(self, name: str) -> BasisLabel:
        return self.basis[self.index(name)]

    def degree(self, name: str) -> int:
        return self.label(name).degree

    @property
    def top_degree(self) -> int:
        return self.degree(self.point_label)

    @property
    def divisor_label(self) -> Optional[str]:
        """The unique degree-one class, when there is one"""
        candidates = [b.name for b in self.basis if b.degree == 1]
        return candidates[0] if len(candidates) == 1 else None

    def matrix(self, name: str) -> RingMatrix:
        return self.structure[name]

    def basis_vector(self, name: str) -> List:
        i = self.index(name)
        return [QRING.one if j == i else QRING.zero for j in range(self.dim)]

    def with_pairing(self, pairing: RingMatrix) -> "AlgebraSpec":
        return replace(self, pairing=pairing)
