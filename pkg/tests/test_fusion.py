import cmath
import itertools
import json

import pytest
from hypothesis import given
from hypothesis import strategies as st

from fusionforge.cyclo import qint
from fusionforge.fusion import (
    FusionElement,
    FusionError,
    FusionTable,
    K0Class,
    fusion_coefficients,
    fusion_table,
    k0_decompose,
    label_qdim,
    sl2_fusion_closed_form,
)
from fusionforge.rootdata import root_datum


def a1(ell, a, b):
    return {c[0]: n for c, n in fusion_coefficients(root_datum("A1", ell), (a,), (b,)).coeffs.items()}


def test_examples():
    assert a1(5, 1, 1) == {0: 1, 2: 1}
    assert a1(5, 3, 3) == {0: 1}
    assert a1(3, 1, 1) == {0: 1}
    assert a1(4, 1, 2) == {1: 1}
    assert sl2_fusion_closed_form(1, 1, 5) == {0: 1, 2: 1}
    assert sl2_fusion_closed_form(2, 3, 5) == {1: 1}
    assert sl2_fusion_closed_form(0, 3, 5) == {3: 1}


def test_out_of_alcove_rejected():
    d = root_datum("A1", 5)
    with pytest.raises(FusionError):
        fusion_coefficients(d, (4,), (0,))
    with pytest.raises(FusionError):
        sl2_fusion_closed_form(4, 0, 5)
    with pytest.raises(FusionError):
        FusionElement(d, {(4,): 1})


# Verlinde oracle: floating-point S-matrix from the Kac-Peterson sum over the
# Weyl group, independent of the folding code.
CARTAN = {"A1": [[2]], "A2": [[2, -1], [-1, 2]]}
FORM = {"A1": [[0.5]], "A2": [[2 / 3, 1 / 3], [1 / 3, 2 / 3]]}


def _weyl_orbit(type_name, v):
    A = CARTAN[type_name]
    seen = {tuple(v): 1}
    frontier = [tuple(v)]
    while frontier:
        nxt = []
        for w in frontier:
            for i in range(len(A)):
                u = tuple(w[j] - w[i] * A[i][j] for j in range(len(A)))
                if u not in seen:
                    seen[u] = -seen[w]
                    nxt.append(u)
        frontier = nxt
    return seen


def verlinde(type_name, ell):
    rank = len(CARTAN[type_name])
    labels = [lam for lam in itertools.product(range(ell), repeat=rank) if sum(lam) + rank < ell]
    form = FORM[type_name]
    pair = lambda x, y: sum(x[i] * form[i][j] * y[j] for i in range(rank) for j in range(rank))
    shifted = [tuple(x + 1 for x in lam) for lam in labels]
    S = [
        [sum(s * cmath.exp(-2j * cmath.pi * pair(w, mu) / ell) for w, s in _weyl_orbit(type_name, lam).items()) for mu in shifted]
        for lam in shifted
    ]
    norm = sum(abs(x) ** 2 for x in S[0]) ** 0.5
    S = [[x / norm for x in row] for row in S]
    out = {}
    n = len(labels)
    for a, b, c in itertools.product(range(n), repeat=3):
        v = sum(S[a][s] * S[b][s] * S[c][s].conjugate() / S[0][s] for s in range(n))
        if round(v.real):
            out[(labels[a], labels[b], labels[c])] = round(v.real)
    return labels, out


@pytest.mark.parametrize("type_name,ell", [("A1", 5), ("A1", 7), ("A1", 8), ("A2", 5), ("A2", 7)])
def test_folding_matches_verlinde(type_name, ell):
    d = root_datum(type_name, ell)
    labels, N = verlinde(type_name, ell)
    assert sorted(labels) == sorted(d.interior_labels())
    for a, b in itertools.product(labels, repeat=2):
        expect = {c: N[(a, b, c)] for c in labels if (a, b, c) in N}
        assert fusion_coefficients(d, a, b).coeffs == expect


@pytest.mark.parametrize("ell", range(3, 12))
def test_folding_matches_closed_form(ell):
    for a, b in itertools.product(range(ell - 1), repeat=2):
        assert a1(ell, a, b) == sl2_fusion_closed_form(a, b, ell)


@pytest.mark.parametrize("type_name,ell", [("A2", 7), ("B2", 7), ("G2", 7), ("C3", 9)])
def test_coefficients_nonnegative_and_qdim_compatible(type_name, ell):
    d = root_datum(type_name, ell)
    labels = d.interior_labels()
    for a, b in itertools.combinations_with_replacement(labels[:6], 2):
        prod = fusion_coefficients(d, a, b)
        assert all(v > 0 for v in prod.coeffs.values())
        assert prod.qdim() == label_qdim(d, a) * label_qdim(d, b)


def test_table_json_round_trip():
    T = fusion_table(root_datum("A2", 5))
    back = FusionTable.from_json(json.loads(json.dumps(T.to_json())))
    assert back == T
    assert T.product((1, 0), (0, 1)) == {(0, 0): 1, (1, 1): 1}


def test_table_a1_ell5_row():
    T = fusion_table(root_datum("A1", 5))
    assert T.labels == ((0,), (1,), (2,), (3,))
    assert list(T.N[3][3]) == [1, 0, 0, 0]


def test_k0_decompose():
    d = root_datum("A1", 5)
    fus, neg = k0_decompose(K0Class(d, {(1,): 2, (4,): 1, (7,): -1}))
    assert fus == FusionElement(d, {(1,): 2})
    assert neg == K0Class(d, {(4,): 1, (7,): -1})


def test_element_qdim():
    d = root_datum("A1", 5)
    x = FusionElement(d, {(1,): 1, (2,): 2})
    assert x.qdim() == qint(2, 1, 5) + qint(3, 1, 5) * 2


@given(st.integers(5, 9), st.data())
def test_a1_ring_associative(ell, data):
    d = root_datum("A1", ell)
    pick = st.integers(0, ell - 2).map(lambda n: FusionElement(d, {(n,): 1}))
    x, y, z = data.draw(pick), data.draw(pick), data.draw(pick)
    assert (x * y) * z == x * (y * z)
    assert x * y == y * x
    assert (x * y).qdim() == x.qdim() * y.qdim()
