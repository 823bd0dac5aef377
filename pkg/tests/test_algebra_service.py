# tests/test_algebra_service.py
import random

import pytest

from models.matrix import RingMatrix
from models.series import QQ, QRING, constant_term, q
from services.algebra_service import AlgebraService
from utils.errors import DimensionMismatchError, SpecInconsistencyError
from utils.spec_format import parse_spec_text
from tests.test_spec_format import TINY_SPEC


def test_built_in_ring_passes_every_axiom(small_qh):
    result = AlgebraService.verify_axioms(small_qh)
    assert result["success"], result["violations"][:5]
    assert result["checks"]["commutativity"] == 66
    assert result["checks"]["associativity"] == 12 ** 3


def test_frobenius_property(small_qh):
    result = AlgebraService.verify_frobenius(small_qh)
    assert result["success"]


def test_pairing_is_a_permutation(small_qh):
    pairing = small_qh.pairing
    rows = pairing.to_rational_rows()
    assert all(sorted(r) == [QQ(0)] * 11 + [QQ(1)] for r in rows)
    assert AlgebraService.pairing_determinant(pairing) in (QQ(1), QQ(-1))
    assert pairing[small_qh.index("2"), small_qh.index("4,1")] == QRING.one
    assert pairing[small_qh.index("1"), small_qh.index("4,2")] == QRING.one
    assert pairing.is_symmetric()


def test_ring_laws_on_random_elements(small_qh):
    rng = random.Random(7)
    for _ in range(5):
        a, b, c = ([QRING(rng.randint(-3, 3)) + rng.randint(-2, 2) * q for _ in range(12)] for _ in range(3))
        ma = AlgebraService.multiplication_matrix(small_qh, a)
        mb = AlgebraService.multiplication_matrix(small_qh, b)
        mc = AlgebraService.multiplication_matrix(small_qh, c)
        assert ma * mb == mb * ma
        assert (ma * mb) * mc == ma * (mb * mc)
        # M_(a*b) = M_a M_b
        assert AlgebraService.multiplication_matrix(small_qh, ma.apply(b)) == ma * mb


def test_multiplication_matrix_checks_length(small_qh):
    with pytest.raises(DimensionMismatchError):
        AlgebraService.multiplication_matrix(small_qh, [QRING.one])


def test_mutated_table_is_reported():
    text = TINY_SPEC.replace("D1 * D2 = q*D0", "D1 * D2 = 2*q*D0")
    spec = parse_spec_text(text)
    assert AlgebraService.verify_axioms(spec)["success"]
    text = TINY_SPEC.replace("D1 * D2 = q*D0", "D1 * D2 = q*D1")
    result = AlgebraService.verify_axioms(parse_spec_text(text))
    assert not result["success"]
    assert any(v.startswith("grading") for v in result["violations"])


def test_degenerate_pairing_is_refused():
    text = TINY_SPEC.replace("D1 * D1 = D2", "D1 * D1 = q*D0")
    spec = parse_spec_text(text)
    with pytest.raises(SpecInconsistencyError):
        AlgebraService.derive_pairing(spec)


def test_nilpotent_witness_squares_to_zero(small_qh):
    witness = AlgebraService.element_vector(small_qh, "D4,3 - q*D2 + q*D1,1")
    assert AlgebraService.squares_to_zero(small_qh, witness)
    assert AlgebraService.is_nilpotent(small_qh, witness)
    assert not AlgebraService.is_nilpotent(small_qh, small_qh.basis_vector("1"))


def test_radical_at_q1_is_one_dimensional(small_qh):
    at_one = AlgebraService.specialize(small_qh, 1)
    radical = AlgebraService.radical_basis(at_one)
    assert len(radical) == 1
    expected = [
        constant_term(x)
        for x in AlgebraService.element_vector(small_qh, "D4,3 - D2 + D1,1")
    ]
    vector = radical[0]
    k = next(i for i, x in enumerate(expected) if x)
    assert vector[k]
    assert all(v * expected[k] == e * vector[k] for v, e in zip(vector, expected))


def test_specialized_ring_is_still_a_ring(small_qh):
    for value in (0, 2):
        spec = AlgebraService.specialize(small_qh, value)
        assert not spec.graded
        assert AlgebraService.verify_axioms(spec)["success"]


def test_max_q_power(small_qh):
    assert AlgebraService.max_q_power(small_qh) >= 1
    assert AlgebraService.max_q_power(AlgebraService.specialize(small_qh, 1)) == 0


def test_identity_matrix_of_unit(small_qh):
    assert small_qh.matrix("0") == RingMatrix.identity(12)

ONE_DIMENSIONAL_SPEC = """\
BASIS
D0 0

GRADING
q_degree 1

UNIT
D0

POINT
D0
"""


def _random_vector(rng: random.Random):
    return [QRING(rng.randint(-3, 3)) + rng.randint(-2, 2) * q for _ in range(12)]


def test_multiplication_matrix_is_linear(small_qh):
    rng = random.Random(11)
    a, b = _random_vector(rng), _random_vector(rng)
    alpha, beta = 2 - q, QQ(1, 3) * q
    combined = [alpha * x + beta * y for x, y in zip(a, b)]
    ma = AlgebraService.multiplication_matrix(small_qh, a)
    mb = AlgebraService.multiplication_matrix(small_qh, b)
    assert AlgebraService.multiplication_matrix(small_qh, combined) == ma.scale(alpha) + mb.scale(beta)


@pytest.mark.parametrize("value", [0, 1, QQ(-1, 2)])
def test_specialization_commutes_with_multiplication_matrix(small_qh, value):
    v = _random_vector(random.Random(3))
    specialized = AlgebraService.specialize(small_qh, value)
    lhs = AlgebraService.multiplication_matrix(specialized, AlgebraService.specialize_vector(v, value))
    assert lhs == AlgebraService.multiplication_matrix(small_qh, v).specialize(value)


def test_frobenius_fails_for_a_mutated_pairing(small_qh):
    rows = [list(r) for r in small_qh.pairing.entries]
    i, j = small_qh.index("2"), small_qh.index("4,1")
    rows[i][j] = rows[j][i] = QRING.zero
    result = AlgebraService.verify_frobenius(small_qh, RingMatrix(rows))
    assert not result["success"]
    assert all(v.startswith("frobenius") for v in result["violations"])


def test_one_dimensional_algebra():
    spec = parse_spec_text(ONE_DIMENSIONAL_SPEC)
    assert spec.dim == 1
    assert AlgebraService.verify_axioms(spec)["success"]
    assert AlgebraService.derive_pairing(spec) == RingMatrix.identity(1)
    assert AlgebraService.verify_frobenius(spec)["success"]
    assert AlgebraService.radical_basis(AlgebraService.specialize(spec, 1)) == []
