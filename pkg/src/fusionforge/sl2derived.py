"""Tilting calculus for quantum sl2 at a root of unity.

Weights are non-negative integers. Every dominant n either lies in the
closed alcove {0..ell-1}, is singular (n = -1 mod ell), or is the i-th
member m_i of the linkage orbit of a unique alcove label m.
"""

from __future__ import annotations

from collections import Counter, defaultdict
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Mapping, Sequence

from .cyclo import check_ell
from .fusion import FusionElement
from .rootdata import root_datum

__all__ = [
    "Sl2Error",
    "orbit_weight",
    "orbit_position",
    "predecessor",
    "successor",
    "tilting_standard_mults",
    "standard_simple_mults",
    "standard_character",
    "tilting_character",
    "simple_character",
    "weyl_multiplicities",
    "decompose_tilting_tensor",
    "hom_dim_standards",
    "hom_dim_tiltings",
    "hom_tilting_simple",
    "jh_multiplicity_in_tilting",
    "n_cover",
    "projective_resolution",
    "stable_hom_dim",
    "stable_hom_table",
    "EulerComplex",
    "euler_a",
    "euler_b",
    "fusion_class_of_complex",
]

Character = dict[int, int]

BOUNDED = "bounded"
RESOLUTION_TAIL = "resolution_tail"


class Sl2Error(ValueError):
    pass


def _check_label(ell: int, m: int) -> None:
    if not 0 <= m <= ell - 2:
        raise Sl2Error(f"alcove label must lie in 0..{ell - 2}, got {m}")


def _check_dominant(n: int) -> None:
    if n < 0:
        raise Sl2Error(f"weight {n} is not dominant")


def orbit_weight(ell: int, m: int, i: int) -> int:
    """m_i: m for i = -1, m + 2(k+1)ell for i = 2k+1, 2ell(k+1) - (m+2) for i = 2k."""
    check_ell(ell)
    _check_label(ell, m)
    if i < -1:
        raise Sl2Error(f"orbit index must be >= -1, got {i}")
    if i == -1:
        return m
    k, odd = divmod(i, 2)
    if odd:
        return m + 2 * (k + 1) * ell
    return 2 * ell * (k + 1) - (m + 2)


def orbit_position(ell: int, n: int) -> tuple[int, int] | None:
    """(m, i) with m_i = n, or None when n is singular."""
    check_ell(ell)
    _check_dominant(n)
    s = (n + 1) % (2 * ell)
    if s % ell == 0:
        return None
    if n <= ell - 2:
        return n, -1
    if s < ell:
        m = s - 1
        return m, 2 * ((n - m) // (2 * ell)) - 1
    m = 2 * ell - s - 1
    return m, 2 * ((n + m + 2) // (2 * ell)) - 2


def predecessor(ell: int, n: int) -> int | None:
    pos = orbit_position(ell, n)
    if pos is None or pos[1] == -1:
        return None
    return orbit_weight(ell, pos[0], pos[1] - 1)


def successor(ell: int, n: int) -> int | None:
    pos = orbit_position(ell, n)
    if pos is None:
        return None
    return orbit_weight(ell, pos[0], pos[1] + 1)


def tilting_standard_mults(ell: int, n: int) -> dict[int, int]:
    """[T(n):Delta(nu)]."""
    _check_dominant(n)
    prev = predecessor(ell, n) if n > ell - 1 else None
    return {n: 1} if prev is None else {n: 1, prev: 1}


def standard_simple_mults(ell: int, n: int) -> dict[int, int]:
    """[Delta(n):L(nu)]."""
    _check_dominant(n)
    prev = predecessor(ell, n) if n > ell - 1 else None
    return {n: 1} if prev is None else {n: 1, prev: 1}


def standard_character(n: int) -> Character:
    _check_dominant(n)
    return {n - 2 * j: 1 for j in range(n + 1)}


def _add_into(acc: defaultdict, chi: Mapping[int, int], c: int = 1) -> None:
    for w, v in chi.items():
        acc[w] += c * v


def _clean(acc: Mapping[int, int]) -> Character:
    return {w: v for w, v in sorted(acc.items()) if v}


def tilting_character(ell: int, n: int) -> Character:
    acc: defaultdict = defaultdict(int)
    for nu, c in tilting_standard_mults(ell, n).items():
        _add_into(acc, standard_character(nu), c)
    return _clean(acc)


@lru_cache(maxsize=None)
def _simple_character(ell: int, n: int) -> tuple[tuple[int, int], ...]:
    prev = predecessor(ell, n) if n > ell - 1 else None
    acc: defaultdict = defaultdict(int)
    _add_into(acc, standard_character(n))
    if prev is not None:
        _add_into(acc, dict(_simple_character(ell, prev)), -1)
    return tuple(_clean(acc).items())


def simple_character(ell: int, n: int) -> Character:
    """ch L(n) = ch Delta(n) - ch L(predecessor)."""
    check_ell(ell)
    _check_dominant(n)
    return dict(_simple_character(ell, n))


def character_product(a: Mapping[int, int], b: Mapping[int, int]) -> Character:
    acc: defaultdict = defaultdict(int)
    for x, u in a.items():
        for y, v in b.items():
            acc[x + y] += u * v
    return _clean(acc)


def weyl_multiplicities(chi: Mapping[int, int]) -> Character:
    """Coefficients of chi in the Weyl-character basis: mult(n) - mult(n+2), n >= 0."""
    out = {}
    for n in sorted(w for w in chi if w >= 0):
        c = chi.get(n, 0) - chi.get(n + 2, 0)
        if c:
            out[n] = c
    return out


def decompose_tilting_tensor(ell: int, a: int, b: int) -> Counter:
    """Indecomposable tilting summands of T(a) (x) T(b), by highest-weight peeling."""
    check_ell(ell)
    rem = weyl_multiplicities(character_product(tilting_character(ell, a), tilting_character(ell, b)))
    out: Counter = Counter()
    while rem:
        top = max(rem)
        c = rem[top]
        if c < 0:
            raise AssertionError(f"negative remainder {c} at {top} peeling T({a})xT({b})")
        out[top] += c
        for nu, k in tilting_standard_mults(ell, top).items():
            rem[nu] = rem.get(nu, 0) - c * k
            if rem[nu] == 0:
                del rem[nu]
    return out


def hom_dim_standards(ell: int, a: int, b: int) -> int:
    """dim Hom(Delta(a), Delta(b)): 1 iff b = a, or a, b linked with b the successor of a."""
    _check_dominant(a)
    _check_dominant(b)
    if a == b:
        return 1
    pa, pb = orbit_position(ell, a), orbit_position(ell, b)
    if pa is None or pb is None or pa[0] != pb[0]:
        return 0
    return 1 if pb[1] == pa[1] + 1 else 0


def hom_dim_tiltings(ell: int, a: int, b: int) -> int:
    """sum_nu [T(a):Delta(nu)][T(b):Delta(nu)]."""
    ta, tb = tilting_standard_mults(ell, a), tilting_standard_mults(ell, b)
    return sum(c * tb.get(nu, 0) for nu, c in ta.items())


def bar_weight(ell: int, mu: int) -> int:
    _check_dominant(mu)
    return root_datum("A1", ell).bar((mu,))[0]


def hom_tilting_simple(ell: int, lam: int, mu: int) -> int:
    """dim Hom(T(lam), L(mu)): the top of T(bar mu) is L(mu)."""
    return 1 if lam == bar_weight(ell, mu) else 0


def jh_multiplicity_in_tilting(ell: int, lam: int, mu: int) -> int:
    """sum_nu [T(lam):Delta(nu)][T(bar mu):Delta(nu)]."""
    return hom_dim_tiltings(ell, lam, bar_weight(ell, mu))


def n_cover(ell: int, *, simples: Iterable[int] | None = None, tilting: int | None = None) -> Counter:
    """Negligible tilting labels lam with multiplicity dim Hom(T(lam), V)."""
    if (simples is None) == (tilting is None):
        raise Sl2Error("n_cover takes exactly one of simples= or tilting=")
    out: Counter = Counter()
    if simples is not None:
        for mu in simples:
            out[bar_weight(ell, mu)] += 1
        return out
    _check_dominant(tilting)
    candidates = set()
    for nu in tilting_standard_mults(ell, tilting):
        candidates.add(nu)
        nxt = successor(ell, nu)
        if nxt is not None:
            candidates.add(nxt)
    for lam in sorted(candidates):
        if lam >= ell - 1:
            h = hom_dim_tiltings(ell, lam, tilting)
            if h:
                out[lam] = h
    return out


def projective_resolution(ell: int, m: int, depth: int) -> list[int]:
    """Labels [m_0, ..., m_depth] of the minimal negligible resolution of L(m)."""
    _check_label(ell, m)
    if depth < 0:
        raise Sl2Error("depth must be >= 0")
    return [orbit_weight(ell, m, j) for j in range(depth + 1)]


def _syzygy_hom(ell: int, m: int, n: int, i: int, k: int) -> int:
    # Hom(Omega^i L(m), Omega^(i-k) L(n)) = Hom(Delta(m_i), Delta(n_(i-k))).
    j = i - k
    if j < 0:
        return 0
    return hom_dim_standards(ell, orbit_weight(ell, m, i), orbit_weight(ell, n, j))


def _factors_through_projective(ell: int, m: int, n: int, i: int, k: int) -> int:
    # Stable quotient: only singular labels carry projective summands, and orbit
    # weights of alcove labels are regular.
    j = i - k
    if j < 0:
        return 0
    a, b = orbit_weight(ell, m, i), orbit_weight(ell, n, j)
    if orbit_position(ell, a) is None or orbit_position(ell, b) is None:
        return _syzygy_hom(ell, m, n, i, k)
    return 0


def stable_hom_dim(ell: int, m: int, n: int, k: int, window: int = 6) -> int:
    """dim of the colimit over i of Hom(Delta(m_i), Delta(n_(i-k))) modulo projective maps."""
    check_ell(ell)
    _check_label(ell, m)
    _check_label(ell, n)
    start = max(0, k) + 1
    vals = [
        _syzygy_hom(ell, m, n, i, k) - _factors_through_projective(ell, m, n, i, k)
        for i in range(start, start + window)
    ]
    if len(set(vals)) != 1:
        raise AssertionError(f"stable Hom system did not stabilize: {vals}")
    return vals[0]


def stable_hom_table(ell: int, m: int, n: int, ks: Sequence[int]) -> list[int]:
    return [stable_hom_dim(ell, m, n, k) for k in ks]


@dataclass(frozen=True)
class EulerComplex:
    """Degree -> multiset of tilting labels.

    Cochain convention: resolutions sit in degrees <= 0 and X[s]^p = X^(p+s).
    A resolution tail for label m has {m_j} in degree -j for every j >= 0.
    """

    ell: int
    terms: Mapping[int, tuple[int, ...]] = field(default_factory=dict)
    kind: str = BOUNDED
    tail_label: int | None = None

    def __post_init__(self):
        check_ell(self.ell)
        clean = {int(p): tuple(sorted(int(x) for x in labels)) for p, labels in self.terms.items() if labels}
        for labels in clean.values():
            for x in labels:
                _check_dominant(x)
        object.__setattr__(self, "terms", dict(sorted(clean.items())))
        if self.kind == RESOLUTION_TAIL:
            if self.tail_label is None or clean:
                raise Sl2Error("a resolution tail is described by its label alone")
            _check_label(self.ell, self.tail_label)
        elif self.kind != BOUNDED:
            raise Sl2Error(f"unknown complex kind {self.kind!r}")

    @classmethod
    def resolution_tail(cls, ell: int, m: int) -> "EulerComplex":
        return cls(ell, {}, RESOLUTION_TAIL, m)

    @classmethod
    def from_json(cls, data: Mapping) -> "EulerComplex":
        kind = data.get("kind", BOUNDED)
        if kind == RESOLUTION_TAIL:
            return cls.resolution_tail(int(data["ell"]), int(data["m"]))
        return cls(int(data["ell"]), {int(p): tuple(v) for p, v in data.get("terms", {}).items()})

    def shift(self, s: int) -> "EulerComplex":
        if self.kind != BOUNDED:
            raise Sl2Error("shift is only defined for bounded complexes")
        return EulerComplex(self.ell, {p - s: v for p, v in self.terms.items()})

    def term(self, p: int) -> tuple[int, ...]:
        if self.kind == RESOLUTION_TAIL:
            return (orbit_weight(self.ell, self.tail_label, -p),) if p <= 0 else ()
        return self.terms.get(p, ())

    def degrees(self, cutoff: int | None = None) -> range:
        """Degrees to evaluate; tails need a lower cutoff."""
        if self.kind == RESOLUTION_TAIL:
            if cutoff is None:
                raise Sl2Error("unbounded complex needs a cutoff")
            return range(cutoff, 1)
        if not self.terms:
            return range(0)
        return range(min(self.terms), max(self.terms) + 1)


def _require_negligible(ell: int, x: int) -> None:
    if x < ell - 1:
        raise Sl2Error(f"T({x}) is not negligible")


def _tail_cutoff(X: EulerComplex, N: int, probe: int) -> int:
    # T(m_j) has standards {m_j, m_(j-1)}; Hom into T(N) vanishes once m_(j-1)
    # exceeds every standard of N.
    top = max(tilting_standard_mults(X.ell, N))
    j = 1
    while orbit_weight(X.ell, X.tail_label, j - 1) <= top:
        j += 1
    return -(j + probe)


def _euler(X: EulerComplex, N: int, hom, probe: int) -> int:
    _require_negligible(X.ell, N)
    cutoff = _tail_cutoff(X, N, probe) if X.kind == RESOLUTION_TAIL else None
    total = 0
    for p in X.degrees(cutoff):
        for x in X.term(p):
            _require_negligible(X.ell, x)
            total += (-1) ** (p % 2) * hom(x)
    return total


def euler_a(X: EulerComplex, N: int, probe: int = 0) -> int:
    """sum_p (-1)^p dim Hom(X^p, T(N))."""
    return _euler(X, N, lambda x: hom_dim_tiltings(X.ell, x, N), probe)


def _hom_by_characters(ell: int, source: int, target: int) -> int:
    # Standard-filtration pairing read off characters rather than the table.
    a = weyl_multiplicities(tilting_character(ell, source))
    b = weyl_multiplicities(tilting_character(ell, target))
    return sum(c * b.get(nu, 0) for nu, c in a.items())


def euler_b(X: EulerComplex, N: int, probe: int = 0) -> int:
    """sum_p (-1)^p dim Hom(T(N), X^p)."""
    return _euler(X, N, lambda x: _hom_by_characters(X.ell, N, x), probe)


def fusion_class_of_complex(X: EulerComplex) -> FusionElement:
    """Alternating sum of the alcove labels over all degrees."""
    if X.kind != BOUNDED:
        raise Sl2Error("fusion class is only defined for bounded complexes")
    datum = root_datum("A1", X.ell)
    acc: defaultdict = defaultdict(int)
    for p in X.degrees():
        for x in X.term(p):
            if x <= X.ell - 2:
                acc[(x,)] += (-1) ** (p % 2)
    return FusionElement(datum, acc)
