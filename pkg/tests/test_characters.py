import itertools
import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from fusionforge.characters import (
    WeightCharacter,
    classical_tensor_multiplicities,
    dominant_weights_below,
    quantum_dimension,
    tensor,
    weyl_character,
    weyl_dimension,
)
from fusionforge.cyclo import CyclotomicNumber, qint
from fusionforge.rootdata import root_datum

# Dimensions of familiar irreducibles, a table independent of both formulas.
KNOWN_DIMS = [
    ("A2", (1, 0), 3), ("A2", (1, 1), 8), ("A2", (2, 0), 6), ("A2", (3, 0), 10),
    ("B2", (1, 0), 5), ("B2", (0, 1), 4), ("B2", (0, 2), 10),
    ("C3", (1, 0, 0), 6), ("C3", (0, 0, 1), 14),
    ("G2", (1, 0), 7), ("G2", (0, 1), 14),
    ("D4", (1, 0, 0, 0), 8), ("D4", (0, 1, 0, 0), 28),
    ("A3", (0, 1, 0), 6),
]


@pytest.mark.parametrize("type_name,lam,dim", KNOWN_DIMS)
def test_known_dimensions(type_name, lam, dim):
    d = root_datum(type_name, 7)
    assert weyl_dimension(d, lam) == dim
    assert weyl_character(d, lam).dim == dim


def test_a1_string():
    d = root_datum("A1", 5)
    for n in range(10):
        assert weyl_character(d, (n,)).mult == {(n - 2 * j,): 1 for j in range(n + 1)}


def test_a2_adjoint_zero_weight():
    chi = weyl_character(root_datum("A2", 5), (1, 1))
    assert chi.dim == 8 and chi.mult[(0, 0)] == 2


def test_trivial_character():
    for t in ("A1", "A2", "B2", "G2"):
        d = root_datum(t, 7)
        assert weyl_character(d, d.zero).mult == {d.zero: 1}


def test_tensor_examples():
    d = root_datum("A1", 5)
    ch = lambda n: weyl_character(d, (n,))
    assert tensor(ch(1), ch(1)) == ch(2) + ch(0)
    assert tensor(ch(3), ch(0)) == ch(3)
    assert tensor(ch(3), ch(3)) == ch(0) + ch(2) + ch(4) + ch(6)


def test_classical_multiplicities_examples():
    a1 = root_datum("A1", 5)
    assert classical_tensor_multiplicities(a1, (3,), (3,)) == {(0,): 1, (2,): 1, (4,): 1, (6,): 1}
    assert classical_tensor_multiplicities(a1, (4,), (0,)) == {(4,): 1}
    a2 = root_datum("A2", 5)
    assert classical_tensor_multiplicities(a2, (1, 0), (0, 1)) == {(1, 1): 1, (0, 0): 1}


def test_quantum_dimension_examples():
    d = root_datum("A1", 5)
    for n in range(12):
        assert quantum_dimension(weyl_character(d, (n,))) == qint(n + 1, 1, 5)
    assert quantum_dimension(weyl_character(d, (4,))).is_zero()
    assert quantum_dimension(weyl_character(d, (0,))) == CyclotomicNumber.from_int(5, 1)


@pytest.mark.parametrize("ell", [3, 5, 7])
def test_qdim_vanishes_iff_singular_a1(ell):
    d = root_datum("A1", ell)
    for lam in range(31):
        assert quantum_dimension(weyl_character(d, (lam,))).is_zero() == d.is_singular((lam,))


@pytest.mark.parametrize("type_name,ell", [("A2", 5), ("B2", 5), ("B2", 7), ("G2", 7)])
def test_qdim_vanishes_on_singular_weights(type_name, ell):
    d = root_datum(type_name, ell)
    for lam in itertools.product(range(6), repeat=d.rank):
        q = quantum_dimension(weyl_character(d, lam))
        assert q.is_zero() == d.is_singular(lam)


@pytest.mark.parametrize("type_name", ["A2", "B2", "C3", "G2"])
def test_character_weyl_invariant_and_brauer_klimyk_dims(type_name):
    d = root_datum(type_name, 7)
    for lam in itertools.islice(itertools.product(range(3), repeat=d.rank), 12):
        assert weyl_character(d, lam).is_weyl_invariant()
    a = tuple([1] + [0] * (d.rank - 1))
    b = tuple([0] * (d.rank - 1) + [1])
    mults = classical_tensor_multiplicities(d, a, b)
    assert sum(m * weyl_dimension(d, nu) for nu, m in mults.items()) == weyl_dimension(d, a) * weyl_dimension(d, b)


def test_dominant_weights_below_contains_top_and_zero_class():
    d = root_datum("A2", 5)
    below = dominant_weights_below(d, (2, 2))
    assert below[0] == (2, 2) and (0, 0) in below


@st.composite
def character_pairs(draw):
    type_name, ell = draw(st.sampled_from([("A1", 5), ("A2", 5), ("B2", 5), ("A2", 7), ("G2", 7)]))
    d = root_datum(type_name, ell)
    lam = tuple(draw(st.integers(0, 3)) for _ in range(d.rank))
    mu = tuple(draw(st.integers(0, 3)) for _ in range(d.rank))
    return d, lam, mu


@given(character_pairs())
def test_qdim_multiplicative(case):
    d, lam, mu = case
    a, b = weyl_character(d, lam), weyl_character(d, mu)
    assert quantum_dimension(tensor(a, b)) == quantum_dimension(a) * quantum_dimension(b)


@given(character_pairs())
def test_weyl_dimension_formula_matches_freudenthal(case):
    d, lam, _ = case
    assert weyl_character(d, lam).dim == weyl_dimension(d, lam)
