# models/deformed_product.py
from dataclasses import dataclass
from typing import Any, List

from models.algebra import AlgebraSpec
from models.matrix import RingMatrix


@dataclass(frozen=True)
class DeformedProduct:
    """Big quantum multiplication by the divisor and the deformation class

    m1_tilde is known modulo t^(order+1), m2_tilde modulo t^order; both keep
    q symbolic. f_vectors are 1, h, ..., h^(dim-2) and the deformation class,
    in Delta-coordinates, computed with q = q_value substituted, so they,
    change_of_basis (their columns) and gram (their pairings) are rational
    in every t-coefficient.
    """
    spec: AlgebraSpec
    m1_tilde: RingMatrix
    m2_tilde: RingMatrix
    order: int
    f_vectors: List[List[Any]]
    change_of_basis: RingMatrix
    gram: RingMatrix
    q_value: Any

    @property
    def dim(self) -> int:
        return self.spec.dim
