"""The fusion ring: alcove-indexed structure constants and K0 bookkeeping."""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from typing import Mapping, Sequence

from .characters import classical_tensor_multiplicities, quantum_dimension, weyl_character
from .cyclo import CyclotomicNumber
from .rootdata import RootDataError, RootDatum

__all__ = [
    "FusionError",
    "FusionElement",
    "K0Class",
    "FusionTable",
    "fusion_coefficients",
    "fusion_table",
    "sl2_fusion_closed_form",
    "k0_decompose",
    "label_qdim",
]

Weight = tuple[int, ...]


class FusionError(ValueError):
    """Label outside the principal alcove or otherwise invalid fusion input."""


@dataclass(frozen=True)
class FusionElement:
    """Integer combination of classes [T(lambda)], lambda in the principal alcove."""

    datum: RootDatum
    coeffs: Mapping[Weight, int] = field(default_factory=dict)

    def __post_init__(self):
        clean = {tuple(k): int(v) for k, v in self.coeffs.items() if v}
        for k in clean:
            if not self.datum.is_interior(k):
                raise FusionError(f"label {k} is not in the principal alcove")
        object.__setattr__(self, "coeffs", dict(sorted(clean.items())))

    def __add__(self, other: "FusionElement") -> "FusionElement":
        out = defaultdict(int, self.coeffs)
        for k, v in other.coeffs.items():
            out[k] += v
        return FusionElement(self.datum, out)

    def __sub__(self, other: "FusionElement") -> "FusionElement":
        return self + other.scale(-1)

    def scale(self, c: int) -> "FusionElement":
        return FusionElement(self.datum, {k: c * v for k, v in self.coeffs.items()})

    def __mul__(self, other: "FusionElement") -> "FusionElement":
        out: dict[Weight, int] = defaultdict(int)
        for a, x in self.coeffs.items():
            for b, y in other.coeffs.items():
                for c, n in fusion_coefficients(self.datum, a, b).coeffs.items():
                    out[c] += x * y * n
        return FusionElement(self.datum, out)

    def __eq__(self, other) -> bool:
        if not isinstance(other, FusionElement):
            return NotImplemented
        return self.datum == other.datum and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash((self.datum, tuple(self.coeffs.items())))

    def is_zero(self) -> bool:
        return not self.coeffs

    def qdim(self) -> CyclotomicNumber:
        total = CyclotomicNumber.from_int(self.datum.ell, 0)
        for k, v in self.coeffs.items():
            total = total + label_qdim(self.datum, k) * v
        return total


@dataclass(frozen=True)
class K0Class:
    """Integer combination of tilting classes [T(lambda)], lambda dominant."""

    datum: RootDatum
    coeffs: Mapping[Weight, int] = field(default_factory=dict)

    def __post_init__(self):
        clean = {tuple(k): int(v) for k, v in self.coeffs.items() if v}
        for k in clean:
            if not self.datum.is_dominant(k):
                raise FusionError(f"tilting label {k} is not dominant")
        object.__setattr__(self, "coeffs", dict(sorted(clean.items())))

    def __add__(self, other: "K0Class") -> "K0Class":
        out = defaultdict(int, self.coeffs)
        for k, v in other.coeffs.items():
            out[k] += v
        return K0Class(self.datum, out)


def label_qdim(datum: RootDatum, lam: Sequence[int]) -> CyclotomicNumber:
    return quantum_dimension(weyl_character(datum, lam))


def _require_interior(datum: RootDatum, lam: Sequence[int]) -> Weight:
    lam = tuple(lam)
    if len(lam) != datum.rank or not datum.is_interior(lam):
        raise FusionError(f"label {lam} is not in the principal alcove")
    return lam


def fusion_coefficients(datum: RootDatum, lam: Sequence[int], mu: Sequence[int]) -> FusionElement:
    """N_{lambda mu}^nu by affine folding of the classical tensor multiplicities.

    Each classical constituent is folded into the closed alcove; constituents
    fixed by an affine reflection are dropped, the rest contribute with the
    sign of the folding word.
    """
    lam = _require_interior(datum, lam)
    mu = _require_interior(datum, mu)
    return _fusion_cached(datum, lam, mu) if lam <= mu else _fusion_cached(datum, mu, lam)


_FUSION_CACHE: dict[tuple[RootDatum, Weight, Weight], FusionElement] = {}


def _fusion_cached(datum: RootDatum, lam: Weight, mu: Weight) -> FusionElement:
    key = (datum, lam, mu)
    hit = _FUSION_CACHE.get(key)
    if hit is not None:
        return hit
    out: dict[Weight, int] = defaultdict(int)
    for nu, m in classical_tensor_multiplicities(datum, lam, mu).items():
        f = datum.fold_to_alcove(nu)
        if not f.on_wall:
            out[f.weight] += f.sign * m
    res = {k: v for k, v in out.items() if v}
    if any(v < 0 for v in res.values()):
        raise AssertionError(f"negative fusion coefficient for {lam} x {mu}: {res}")
    elem = FusionElement(datum, res)
    _FUSION_CACHE.setdefault(key, elem)
    return elem


def sl2_fusion_closed_form(a: int, b: int, ell: int) -> dict[int, int]:
    """N_ab^c = 1 iff c = a+b mod 2 and |a-b| <= c <= min(a+b, 2(ell-2)-a-b)."""
    top = ell - 2
    if not (0 <= a <= top and 0 <= b <= top):
        raise FusionError(f"labels must lie in 0..{top}, got ({a}, {b})")
    hi = min(a + b, 2 * top - a - b)
    return {c: 1 for c in range(abs(a - b), hi + 1, 2)}


@dataclass(frozen=True)
class FusionTable:
    type_name: str
    ell: int
    labels: tuple[Weight, ...]
    N: tuple[tuple[tuple[int, ...], ...], ...]

    def to_json(self) -> dict:
        return {
            "type": self.type_name,
            "ell": self.ell,
            "labels": [list(l) for l in self.labels],
            "N": [[list(row) for row in plane] for plane in self.N],
        }

    @classmethod
    def from_json(cls, data: dict) -> "FusionTable":
        return cls(
            data["type"],
            int(data["ell"]),
            tuple(tuple(l) for l in data["labels"]),
            tuple(tuple(tuple(int(x) for x in row) for row in plane) for plane in data["N"]),
        )

    def index(self, lam: Sequence[int]) -> int:
        return self.labels.index(tuple(lam))

    def product(self, lam: Sequence[int], mu: Sequence[int]) -> dict[Weight, int]:
        i, j = self.index(lam), self.index(mu)
        return {self.labels[k]: n for k, n in enumerate(self.N[i][j]) if n}


def fusion_table(datum: RootDatum) -> FusionTable:
    """Complete structure-constant tensor N[i][j][k] over the principal alcove.

    Cells are filled for i <= j in label order and mirrored.
    """
    labels = tuple(datum.interior_labels())
    n = len(labels)
    pos = {l: k for k, l in enumerate(labels)}
    N = [[[0] * n for _ in range(n)] for _ in range(n)]
    for i in range(n):
        for j in range(i, n):
            row = [0] * n
            for c, v in fusion_coefficients(datum, labels[i], labels[j]).coeffs.items():
                row[pos[c]] = v
            N[i][j] = row
            N[j][i] = list(row)
    return FusionTable(
        datum.type_name,
        datum.ell,
        labels,
        tuple(tuple(tuple(r) for r in plane) for plane in N),
    )


def k0_decompose(x: K0Class) -> tuple[FusionElement, K0Class]:
    """Split a tilting-basis vector into its alcove part and its negligible part."""
    fus = {k: v for k, v in x.coeffs.items() if x.datum.is_interior(k)}
    neg = {k: v for k, v in x.coeffs.items() if not x.datum.is_interior(k)}
    return FusionElement(x.datum, fus), K0Class(x.datum, neg)


def is_label(datum: RootDatum, lam: Sequence[int]) -> bool:
    try:
        _require_interior(datum, lam)
    except (FusionError, RootDataError):
        return False
    return True
