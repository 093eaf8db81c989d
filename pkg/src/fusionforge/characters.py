"""Formal characters: Weyl-module characters, tensor products, quantum dimensions."""

from __future__ import annotations

import threading
from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

from .cyclo import CyclotomicNumber
from .rootdata import RootDataError, RootDatum

__all__ = [
    "WeightCharacter",
    "weyl_character",
    "weyl_dimension",
    "dominant_weights_below",
    "tensor",
    "classical_tensor_multiplicities",
    "quantum_dimension",
]

Weight = tuple[int, ...]


@dataclass(frozen=True)
class WeightCharacter:
    """Finitely supported multiplicity function on weights."""

    datum: RootDatum
    mult: Mapping[Weight, int] = field(default_factory=dict)

    def __post_init__(self):
        clean = {tuple(k): int(v) for k, v in self.mult.items() if v}
        for k, v in clean.items():
            if v < 0:
                raise ValueError(f"negative multiplicity {v} at {k}")
            if len(k) != self.datum.rank:
                raise ValueError(f"weight {k} has wrong rank")
        object.__setattr__(self, "mult", clean)

    @property
    def dim(self) -> int:
        return sum(self.mult.values())

    def is_weyl_invariant(self) -> bool:
        for mu, m in self.mult.items():
            for i in range(self.datum.rank):
                if self.mult.get(self.datum.simple_reflection(mu, i), 0) != m:
                    return False
        return True

    def __add__(self, other: "WeightCharacter") -> "WeightCharacter":
        _same_datum(self, other)
        out = dict(self.mult)
        for k, v in other.mult.items():
            out[k] = out.get(k, 0) + v
        return WeightCharacter(self.datum, out)

    def scale(self, c: int) -> "WeightCharacter":
        return WeightCharacter(self.datum, {k: c * v for k, v in self.mult.items()})

    def __eq__(self, other) -> bool:
        if not isinstance(other, WeightCharacter):
            return NotImplemented
        return self.datum == other.datum and self.mult == other.mult

    def __hash__(self) -> int:
        return hash((self.datum, frozenset(self.mult.items())))


def _same_datum(a: WeightCharacter, b: WeightCharacter) -> None:
    if a.datum != b.datum:
        raise ValueError("characters belong to different root data")


def weyl_dimension(datum: RootDatum, lam: Sequence[int]) -> int:
    """Product over positive roots of <lambda+rho, beta^vee> / <rho, beta^vee>."""
    num = Fraction(1)
    lr = tuple(x + 1 for x in lam)
    for b in range(datum.num_positive_roots):
        num *= Fraction(datum.pairing(lr, b), datum.pairing(datum.rho, b))
    if num.denominator != 1:
        raise AssertionError("Weyl dimension is not an integer")
    return int(num)


def dominant_weights_below(datum: RootDatum, lam: Sequence[int]) -> list[Weight]:
    """Dominant mu with lambda - mu in Q+, by decreasing height of lambda - mu."""
    lam = tuple(lam)
    seen = {lam}
    frontier = [lam]
    while frontier:
        new = []
        for mu in frontier:
            for rw in datum.root_weights:
                nu = tuple(a - b for a, b in zip(mu, rw))
                if datum.is_dominant(nu) and nu not in seen:
                    seen.add(nu)
                    new.append(nu)
        frontier = new

    def depth(mu):
        return sum(datum.weight_to_root_coords(tuple(a - b for a, b in zip(lam, mu))))

    return sorted(seen, key=lambda mu: (depth(mu), mu))


_cache_lock = threading.Lock()
_dominant_mult_cache: dict[tuple[RootDatum, Weight], dict[Weight, int]] = {}


def _dominant_multiplicities(datum: RootDatum, lam: Weight) -> dict[Weight, int]:
    key = (datum, lam)
    hit = _dominant_mult_cache.get(key)
    if hit is not None:
        return hit
    # Freudenthal:  ((lam+rho,lam+rho) - (mu+rho,mu+rho)) m(mu)
    #             = 2 sum_{beta>0} sum_{k>=1} (mu + k beta, beta) m(mu + k beta)
    rho = datum.rho
    lr = tuple(a + b for a, b in zip(lam, rho))
    norm_lr = datum.inner(lr, lr)
    mults: dict[Weight, int] = {}
    for mu in dominant_weights_below(datum, lam):
        if mu == lam:
            mults[mu] = 1
            continue
        mr = tuple(a + b for a, b in zip(mu, rho))
        denom = norm_lr - datum.inner(mr, mr)
        total = Fraction(0)
        for bw in datum.root_weights:
            k = 1
            while True:
                nu = tuple(a + k * b for a, b in zip(mu, bw))
                dom, _ = datum.dominant_conjugate(nu)
                m = mults.get(dom)
                if m is None:
                    # Root strings through the support are unbroken.
                    break
                total += datum.inner(nu, bw) * m
                k += 1
        val = 2 * total / denom
        if val.denominator != 1 or val < 0:
            raise AssertionError(f"Freudenthal produced non-integral multiplicity {val}")
        if val:
            mults[mu] = int(val)
    with _cache_lock:
        _dominant_mult_cache.setdefault(key, mults)
    return mults


def weyl_character(datum: RootDatum, lam: Sequence[int]) -> WeightCharacter:
    """Character of the Weyl module with highest weight lambda."""
    lam = tuple(lam)
    if len(lam) != datum.rank:
        raise RootDataError(f"weight {lam} has wrong rank for {datum.type_name}")
    if not datum.is_dominant(lam):
        raise RootDataError(f"weight {lam} is not dominant")
    out: dict[Weight, int] = {}
    for mu, m in _dominant_multiplicities(datum, lam).items():
        for nu in datum.weyl_orbit(mu):
            out[nu] = m
    return WeightCharacter(datum, out)


def tensor(a: WeightCharacter, b: WeightCharacter) -> WeightCharacter:
    _same_datum(a, b)
    out: dict[Weight, int] = defaultdict(int)
    for mu, m in a.mult.items():
        for nu, n in b.mult.items():
            out[tuple(x + y for x, y in zip(mu, nu))] += m * n
    return WeightCharacter(a.datum, out)


def classical_tensor_multiplicities(
    datum: RootDatum, lam: Sequence[int], mu: Sequence[int]
) -> dict[Weight, int]:
    """Multiplicities of Weyl characters in ch(lambda) * ch(mu) (Brauer-Klimyk)."""
    lam, mu = tuple(lam), tuple(mu)
    if not (datum.is_dominant(lam) and datum.is_dominant(mu)):
        raise RootDataError("tensor multiplicities need dominant weights")
    # Fold the smaller character against the larger highest weight.
    if weyl_dimension(datum, lam) > weyl_dimension(datum, mu):
        lam, mu = mu, lam
    out: dict[Weight, int] = defaultdict(int)
    for nu, m in weyl_character(datum, lam).mult.items():
        folded = datum.finite_dot_fold(tuple(a + b for a, b in zip(nu, mu)))
        if folded is not None:
            w, sign = folded
            out[w] += sign * m
    res = {k: v for k, v in out.items() if v}
    if any(v < 0 for v in res.values()):
        raise AssertionError("negative classical tensor multiplicity")
    return dict(sorted(res.items()))


def quantum_dimension(chi: WeightCharacter) -> CyclotomicNumber:
    """sum_mu mult(mu) q^{(2 rho, mu)} with q = zeta_ell."""
    datum = chi.datum
    terms: dict[int, int] = defaultdict(int)
    for mu, m in chi.mult.items():
        terms[datum.two_rho_pairing(mu) % datum.ell] += m
    return CyclotomicNumber.from_exponents(datum.ell, terms)
