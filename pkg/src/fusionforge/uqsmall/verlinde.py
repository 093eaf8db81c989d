"""The Verlinde-type quotient of K0(u) in two independent realizations.

vr_bar_ring works from big-group characters: restricted Weyl modules are
expanded into u-simples through the Frobenius tensor product rule, and the
quotient is taken by [Delta(lam)] + [Delta(s.lam)].

r_u_quotient works from explicit modules: products and negligible classes
are read off composition factors of constructed u-modules.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Sequence

import flint

from .. import sl2derived
from ..cyclo import check_ell
from .decompose import build_projective
from .modules import (
    ModuleError,
    build_c_module,
    build_costandard,
    build_e_extension,
    build_simple,
    build_standard,
    composition_factors,
    quantum_dim_module,
    tau_dual,
    tensor_modules,
)

__all__ = ["VrBarRing", "QuotientRing", "vr_bar_ring", "r_u_quotient", "k0_product_characters", "k0_product_explicit"]

Vector = list[Fraction]


class UnsupportedEll(ValueError):
    pass


def _require_odd(ell: int) -> None:
    check_ell(ell)
    if ell % 2 == 0:
        raise UnsupportedEll(f"even ell={ell} is not supported for the small quantum group quotient")


def orbit_representatives(ell: int) -> list[int]:
    """One label from each regular pair {lam, ell-2-lam}: 0..(ell-3)/2."""
    _require_odd(ell)
    return list(range((ell - 1) // 2))


@dataclass(frozen=True)
class QuotientRing:
    """Quotient of K0(u) (simple basis 0..ell-1) with structure constants on chosen labels."""

    ell: int
    labels: tuple[int, ...]
    N: tuple[tuple[tuple[int, ...], ...], ...]

    @property
    def dim(self) -> int:
        return len(self.labels)

    def product(self, a: int, b: int) -> dict[int, int]:
        i, j = self.labels.index(a), self.labels.index(b)
        return {self.labels[k]: v for k, v in enumerate(self.N[i][j]) if v}

    def to_json(self) -> dict:
        return {
            "ell": self.ell,
            "dim": self.dim,
            "basis_labels": list(self.labels),
            "N": [[list(r) for r in plane] for plane in self.N],
        }


VrBarRing = QuotientRing


def _restricted_standard_class(ell: int, c: int) -> list[int]:
    """[Delta(c)|u] in the simple basis: L(x0 + ell x1)|u = (x1+1) L(x0)."""
    out = [0] * ell
    for x, m in sl2derived.standard_simple_mults(ell, c).items():
        x1, x0 = divmod(x, ell)
        out[x0] += m * (x1 + 1)
    return out


@lru_cache(maxsize=None)
def k0_product_characters(ell: int) -> tuple[tuple[tuple[int, ...], ...], ...]:
    """[L(a)][L(b)] via Clebsch-Gordan on Weyl modules and restriction."""
    table = []
    for a in range(ell):
        row = []
        for b in range(ell):
            acc = [0] * ell
            for c in range(abs(a - b), a + b + 1, 2):
                for k, v in enumerate(_restricted_standard_class(ell, c)):
                    acc[k] += v
            row.append(tuple(acc))
        table.append(tuple(row))
    return tuple(table)


def _vec(v: Sequence[int]) -> list[flint.fmpq]:
    return [flint.fmpq(int(x)) for x in v]


def _rank(vectors: Sequence[Sequence]) -> int:
    if not vectors:
        return 0
    return flint.fmpq_mat([list(map(flint.fmpq, v)) for v in vectors]).rank()


def _ideal_closure(ell: int, gens: list[list[int]], mult) -> list[list[int]]:
    """Spanning set of the ideal generated by gens."""
    basis: list[list[int]] = []
    queue = list(gens)
    while queue:
        v = queue.pop()
        if _rank(basis + [v]) > _rank(basis):
            basis.append(v)
            for mu in range(ell):
                queue.append(_multiply(ell, mult, v, [1 if k == mu else 0 for k in range(ell)]))
    return basis


def _multiply(ell: int, mult, x: Sequence[int], y: Sequence[int]) -> list[int]:
    out = [0] * ell
    for a, xa in enumerate(x):
        if xa:
            for b, yb in enumerate(y):
                if yb:
                    for c, n in enumerate(mult[a][b]):
                        out[c] += xa * yb * n
    return out


def _quotient_ring(ell: int, ideal: list[list[int]], mult, labels: Sequence[int]) -> QuotientRing:
    r = _rank(ideal)
    units = [[1 if k == x else 0 for k in range(ell)] for x in labels]
    if _rank(ideal + units) != r + len(labels) or r + len(labels) != ell:
        raise AssertionError("chosen labels do not form a basis of the quotient")
    # Columns: the label classes followed by the ideal spanning set.
    cols = units + ideal
    A = flint.fmpq_mat(ell, len(cols), [flint.fmpq(cols[j][i]) for i in range(ell) for j in range(len(cols))])
    N = []
    for a in labels:
        plane = []
        for b in labels:
            prod = mult[a][b]
            aug = flint.fmpq_mat(ell, len(cols) + 1, [
                flint.fmpq(cols[j][i]) if j < len(cols) else flint.fmpq(prod[i])
                for i in range(ell) for j in range(len(cols) + 1)
            ])
            R, _ = aug.rref()
            coeffs = _coordinates_from_rref(R, len(labels), len(cols))
            if any(c.q != 1 for c in coeffs):
                raise AssertionError("non-integral structure constant in the quotient")
            plane.append(tuple(int(c.p) for c in coeffs))
        N.append(tuple(plane))
    return QuotientRing(ell, tuple(labels), tuple(N))


def _coordinates_from_rref(R: flint.fmpq_mat, nlabels: int, ncols: int) -> list[flint.fmpq]:
    # Label columns come first and are independent, so each is a pivot of its own row.
    out = []
    for t in range(nlabels):
        if R[t, t] != 1:
            raise AssertionError("label column is not a pivot")
        out.append(R[t, ncols])
    return out


def vr_bar_ring(ell: int) -> QuotientRing:
    """K0(u) modulo the ideal generated by [Delta(lam)|u] + [Delta(s.lam)|u]."""
    _require_odd(ell)
    mult = k0_product_characters(ell)
    gens = []
    for lam in range(ell):
        s = (ell - 2 - lam) % ell
        gens.append([x + y for x, y in zip(_restricted_standard_class(ell, lam), _restricted_standard_class(ell, s))])
    ideal = _ideal_closure(ell, gens, mult)
    return _quotient_ring(ell, ideal, mult, orbit_representatives(ell))


def _class(M) -> list[int]:
    cf = composition_factors(M)
    return [cf.get(k, 0) for k in range(M.ell)]


@lru_cache(maxsize=None)
def k0_product_explicit(ell: int) -> tuple[tuple[tuple[int, ...], ...], ...]:
    """[L(a)][L(b)] from composition factors of explicit tensor products."""
    table = [[None] * ell for _ in range(ell)]
    for a in range(ell):
        for b in range(a, ell):
            v = tuple(_class(tensor_modules(build_simple(ell, a), build_simple(ell, b))))
            table[a][b] = table[b][a] = v
    return tuple(tuple(r) for r in table)


def negligible_family(ell: int, weight_bound: int) -> list:
    """Explicit negligible indecomposables with highest weight at most weight_bound."""
    mods = [build_projective(ell, n) for n in range(ell)]
    for n in range(ell - 1, weight_bound + 1, ell):
        mods.append(build_standard(ell, n))
        mods.append(build_costandard(ell, n))
    for n in range(ell + 1, weight_bound + 1):
        n0 = n % ell
        if n0 == 0 or n0 == ell - 1:
            continue
        for lam, mu in ((1, 0), (0, 1), (1, 1)):
            C = build_c_module(ell, n, lam, mu)
            mods.append(C)
            mods.append(tau_dual(C))
    for lam in range((ell - 1) // 2):
        E = build_e_extension(ell, lam)
        mods.append(E)
        mods.append(tau_dual(E))
    for M in mods:
        if not quantum_dim_module(M).is_zero():
            raise AssertionError(f"{M.name} is not negligible")
    return mods


def r_u_quotient(ell: int, weight_bound: int | None = None) -> QuotientRing:
    """Q (x) K0(u) modulo the classes of the enumerated negligible modules."""
    _require_odd(ell)
    if weight_bound is None:
        weight_bound = 4 * ell
    mult = k0_product_explicit(ell)
    classes = []
    seen = set()
    for M in negligible_family(ell, weight_bound):
        c = tuple(_class(M))
        if c not in seen:
            seen.add(c)
            classes.append(list(c))
    basis = []
    for c in classes:
        if _rank(basis + [c]) > _rank(basis):
            basis.append(c)
    return _quotient_ring(ell, basis, mult, orbit_representatives(ell))
