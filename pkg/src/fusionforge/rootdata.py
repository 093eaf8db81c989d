"""Root data, Weyl group actions and alcove geometry.

Weights are integer tuples in the fundamental-weight basis.  Roots are kept
in simple-root coordinates and converted to weight coordinates on demand.
"""

from __future__ import annotations

import enum
import math
import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, lru_cache
from typing import Sequence

from .cyclo import check_ell

__all__ = [
    "RootDataError",
    "RootDatum",
    "AlcoveTag",
    "AlcovePosition",
    "FoldResult",
    "cartan_matrix",
    "root_datum",
]

Weight = tuple[int, ...]


class RootDataError(ValueError):
    """Invalid root-datum input (unknown type, non-dominant weight, ...)."""


def cartan_matrix(family: str, rank: int) -> tuple[tuple[int, ...], ...]:
    """Bourbaki Cartan matrix, entry [i][j] = <alpha_j, alpha_i^vee>."""
    a = [[0] * rank for _ in range(rank)]
    for i in range(rank):
        a[i][i] = 2
    if family == "A":
        for i in range(rank - 1):
            a[i][i + 1] = a[i + 1][i] = -1
    elif family in ("B", "C"):
        if rank < 2:
            raise RootDataError(f"{family}{rank} needs rank >= 2")
        for i in range(rank - 1):
            a[i][i + 1] = a[i + 1][i] = -1
        # B: alpha_n short; C: alpha_n long.
        if family == "B":
            a[rank - 1][rank - 2] = -2
        else:
            a[rank - 2][rank - 1] = -2
    elif family == "D":
        if rank < 3:
            raise RootDataError("D_n needs rank >= 3")
        for i in range(rank - 2):
            a[i][i + 1] = a[i + 1][i] = -1
        a[rank - 3][rank - 1] = a[rank - 1][rank - 3] = -1
    elif family == "G":
        if rank != 2:
            raise RootDataError("G only exists in rank 2")
        # alpha_1 short, alpha_2 long.
        a[0][1] = -3
        a[1][0] = -1
    else:
        raise RootDataError(f"unsupported root system family {family!r}")
    return tuple(tuple(r) for r in a)


def _symmetrizers(cartan: Sequence[Sequence[int]]) -> tuple[int, ...]:
    """Smallest positive integers d with d_i a_ij = d_j a_ji."""
    n = len(cartan)
    d: list[Fraction | None] = [None] * n
    for start in range(n):
        if d[start] is not None:
            continue
        d[start] = Fraction(1)
        stack = [start]
        while stack:
            i = stack.pop()
            for j in range(n):
                if j != i and cartan[i][j] != 0 and d[j] is None:
                    d[j] = d[i] * cartan[i][j] / cartan[j][i]
                    stack.append(j)
    lcm = 1
    for x in d:
        lcm = lcm * x.denominator // math.gcd(lcm, x.denominator)
    ints = [int(x * lcm) for x in d]
    g = 0
    for x in ints:
        g = math.gcd(g, x)
    return tuple(x // g for x in ints)


class AlcoveTag(enum.Enum):
    INTERIOR = "Interior"
    WALL = "Wall"
    EXTERIOR = "Exterior"


@dataclass(frozen=True)
class AlcovePosition:
    tag: AlcoveTag
    # (positive-root index, value of <lambda+rho, beta^vee>) for every
    # constraint that is met with equality or violated.
    constraints: tuple[tuple[int, int], ...] = ()


@dataclass(frozen=True)
class FoldResult:
    weight: Weight
    sign: int
    on_wall: bool
    length: int


_TYPE_RE = re.compile(r"^([ABCDG])(\d+)$")


@dataclass(frozen=True)
class RootDatum:
    """Finite-type root datum together with the root of unity order ell."""

    type_name: str
    ell: int
    strict_paper_singular: bool = False
    cartan: tuple[tuple[int, ...], ...] = field(init=False, repr=False)

    def __post_init__(self):
        m = _TYPE_RE.match(self.type_name)
        if not m:
            raise RootDataError(f"cannot parse root system type {self.type_name!r}")
        family, rank = m.group(1), int(m.group(2))
        if rank < 1 or rank > 4:
            raise RootDataError("supported ranks are 1..4")
        check_ell(self.ell)
        if family == "G" and self.ell % 3 == 0:
            raise RootDataError("type G2 requires ell prime to 3")
        object.__setattr__(self, "cartan", cartan_matrix(family, rank))

    # -- static data ----------------------------------------------------
    @property
    def rank(self) -> int:
        return len(self.cartan)

    @cached_property
    def d(self) -> tuple[int, ...]:
        return _symmetrizers(self.cartan)

    @cached_property
    def _roots(self) -> tuple[tuple[tuple[int, ...], ...], tuple[int, ...]]:
        """Positive roots (simple-root coords) and the simple root each came from."""
        n = self.rank
        simple = [tuple(1 if k == i else 0 for k in range(n)) for i in range(n)]
        origin: dict[tuple[int, ...], int] = {r: i for i, r in enumerate(simple)}
        frontier = list(simple)
        while frontier:
            new = []
            for r in frontier:
                for i in range(n):
                    s = self._reflect_root(r, i)
                    if all(c >= 0 for c in s) and s not in origin:
                        origin[s] = origin[r]
                        new.append(s)
            frontier = new
        roots = sorted(origin, key=lambda r: (sum(r), tuple(-c for c in r)))
        return tuple(roots), tuple(origin[r] for r in roots)

    def _reflect_root(self, root: Sequence[int], i: int) -> tuple[int, ...]:
        # <root, alpha_i^vee> = sum_j c_j a_ij
        pairing = sum(c * self.cartan[i][j] for j, c in enumerate(root))
        out = list(root)
        out[i] -= pairing
        return tuple(out)

    @property
    def positive_roots(self) -> tuple[tuple[int, ...], ...]:
        return self._roots[0]

    @property
    def num_positive_roots(self) -> int:
        return len(self.positive_roots)

    @cached_property
    def root_d(self) -> tuple[int, ...]:
        """Symmetrizer of each positive root, tracked through its Weyl orbit."""
        return tuple(self.d[i] for i in self._roots[1])

    @cached_property
    def rho(self) -> Weight:
        return tuple(1 for _ in range(self.rank))

    @cached_property
    def zero(self) -> Weight:
        return tuple(0 for _ in range(self.rank))

    @cached_property
    def root_weights(self) -> tuple[Weight, ...]:
        """Positive roots in fundamental-weight coordinates."""
        return tuple(self.root_to_weight(r) for r in self.positive_roots)

    @cached_property
    def coroot_coeffs(self) -> tuple[tuple[Fraction, ...], ...]:
        # beta^vee = sum_i c_i (d_i / d_beta) alpha_i^vee
        out = []
        for r, db in zip(self.positive_roots, self.root_d):
            out.append(tuple(Fraction(c * self.d[i], db) for i, c in enumerate(r)))
        return tuple(out)

    @cached_property
    def highest_root_index(self) -> int:
        return max(range(self.num_positive_roots), key=lambda k: sum(self.positive_roots[k]))

    @cached_property
    def w0_permutation(self) -> tuple[int, ...]:
        """sigma with w0(omega_i) = -omega_{sigma(i)}."""
        perm = []
        for i in range(self.rank):
            w = self.antidominant_conjugate(tuple(1 if k == i else 0 for k in range(self.rank)))
            j = [k for k, c in enumerate(w) if c != 0]
            if len(j) != 1 or w[j[0]] != -1:
                raise AssertionError("w0 does not map fundamental weights to negatives")
            perm.append(j[0])
        return tuple(perm)

    @cached_property
    def weyl_group_order(self) -> int:
        return len(self.weyl_orbit(tuple(1 for _ in range(self.rank))))

    # -- conversions and pairings ---------------------------------------
    def root_to_weight(self, root: Sequence[int]) -> Weight:
        # alpha_j has k-th fundamental coordinate <alpha_j, alpha_k^vee> = a_kj
        n = self.rank
        return tuple(sum(root[j] * self.cartan[k][j] for j in range(n)) for k in range(n))

    def weight_to_root_coords(self, lam: Sequence[int]) -> tuple[Fraction, ...]:
        """Rational simple-root coordinates of a weight."""
        inv = _inverse_matrix(self.cartan)
        # lam_k = sum_j a_kj c_j  =>  c = A^{-1} lam
        n = self.rank
        return tuple(sum(inv[j][k] * lam[k] for k in range(n)) for j in range(n))

    def pairing(self, lam: Sequence[int], beta: int) -> int:
        """<lambda, beta^vee> for the positive root with index ``beta``."""
        self._check_root_index(beta)
        val = sum(c * x for c, x in zip(self.coroot_coeffs[beta], lam))
        if val.denominator != 1:
            raise AssertionError("non-integral coroot pairing")
        return int(val)

    def inner(self, lam: Sequence[int], mu: Sequence[int]) -> Fraction:
        """Symmetric form normalized by (alpha_i, alpha_i) = 2 d_i."""
        c = self.weight_to_root_coords(mu)
        return sum(c[j] * self.d[j] * lam[j] for j in range(self.rank))

    def two_rho_pairing(self, mu: Sequence[int]) -> int:
        """(2 rho, mu) = sum over positive beta of d_beta <mu, beta^vee>."""
        return sum(db * self.pairing(mu, b) for b, db in enumerate(self.root_d))

    def _check_root_index(self, beta: int) -> None:
        if not (0 <= beta < self.num_positive_roots):
            raise RootDataError(f"positive-root index {beta} out of range")

    def ell_beta(self, beta: int) -> int:
        self._check_root_index(beta)
        return self.ell // math.gcd(self.ell, self.root_d[beta])

    def _wall_modulus(self, beta: int) -> int:
        return self.ell if self.strict_paper_singular else self.ell_beta(beta)

    def shifted_pairings(self, lam: Sequence[int]) -> list[int]:
        """<lambda + rho, beta^vee> for all positive roots."""
        lr = tuple(x + 1 for x in lam)
        return [self.pairing(lr, b) for b in range(self.num_positive_roots)]

    # -- finite Weyl group ---------------------------------------------
    @cached_property
    def simple_root_weights(self) -> tuple[Weight, ...]:
        n = self.rank
        return tuple(self.root_to_weight(tuple(int(k == i) for k in range(n))) for i in range(n))

    def simple_reflection(self, lam: Sequence[int], i: int) -> Weight:
        a_i = self.simple_root_weights[i]
        return tuple(x - lam[i] * a for x, a in zip(lam, a_i))

    def is_dominant(self, lam: Sequence[int]) -> bool:
        return all(x >= 0 for x in lam)

    def dominant_conjugate(self, lam: Sequence[int]) -> tuple[Weight, int]:
        """Dominant W-conjugate and the length of the reflection word used."""
        lam = tuple(lam)
        length = 0
        while True:
            for i, x in enumerate(lam):
                if x < 0:
                    lam = self.simple_reflection(lam, i)
                    length += 1
                    break
            else:
                return lam, length

    def antidominant_conjugate(self, lam: Sequence[int]) -> Weight:
        lam = tuple(lam)
        while True:
            for i, x in enumerate(lam):
                if x > 0:
                    lam = self.simple_reflection(lam, i)
                    break
            else:
                return lam

    def w0(self, lam: Sequence[int]) -> Weight:
        out = [0] * self.rank
        for i, x in enumerate(lam):
            out[self.w0_permutation[i]] -= x
        return tuple(out)

    def weyl_orbit(self, lam: Sequence[int]) -> frozenset[Weight]:
        seen = {tuple(lam)}
        frontier = [tuple(lam)]
        while frontier:
            new = []
            for mu in frontier:
                for i in range(self.rank):
                    nu = self.simple_reflection(mu, i)
                    if nu not in seen:
                        seen.add(nu)
                        new.append(nu)
            frontier = new
        return frozenset(seen)

    def finite_dot_fold(self, lam: Sequence[int]) -> tuple[Weight, int] | None:
        """Dominant representative under the finite dot action with its sign.

        Returns None when lambda + rho lies on a reflecting hyperplane.
        """
        shifted = tuple(x + 1 for x in lam)
        dom, length = self.dominant_conjugate(shifted)
        if any(x == 0 for x in dom):
            return None
        return tuple(x - 1 for x in dom), (-1) ** length

    # -- affine dot action and alcoves ---------------------------------
    def dot_reflect(self, beta: int, r: int, lam: Sequence[int]) -> Weight:
        """s_{beta,r} . lambda = lambda - (<lambda+rho, beta^vee> - r ell_beta) beta."""
        shift = self.shifted_pairings(lam)[beta] - r * self.ell_beta(beta)
        bw = self.root_weights[beta]
        return tuple(x - shift * b for x, b in zip(lam, bw))

    def alcove_position(self, lam: Sequence[int]) -> AlcovePosition:
        vals = self.shifted_pairings(lam)
        touched = []
        outside = False
        for b, v in enumerate(vals):
            lb = self.ell_beta(b)
            if v <= 0 or v >= lb:
                touched.append((b, v))
                if v < 0 or v > lb:
                    outside = True
        if not touched:
            return AlcovePosition(AlcoveTag.INTERIOR, ())
        tag = AlcoveTag.EXTERIOR if outside else AlcoveTag.WALL
        return AlcovePosition(tag, tuple(touched))

    def is_interior(self, lam: Sequence[int]) -> bool:
        return self.alcove_position(lam).tag is AlcoveTag.INTERIOR

    def is_singular(self, lam: Sequence[int]) -> bool:
        vals = self.shifted_pairings(lam)
        return any(v % self._wall_modulus(b) == 0 for b, v in enumerate(vals))

    def fold_to_alcove(self, lam: Sequence[int]) -> FoldResult:
        """Representative in the closed principal alcove under the affine dot action.

        Reflects through the lowest-indexed violated wall first.  Each step
        moves lambda + rho strictly closer to any interior point of the
        alcove, so the loop terminates.
        """
        lam = tuple(lam)
        length = 0
        while True:
            vals = self.shifted_pairings(lam)
            for b, v in enumerate(vals):
                lb = self.ell_beta(b)
                if v < 0:
                    lam = self.dot_reflect(b, 0, lam)
                    break
                if v > lb:
                    lam = self.dot_reflect(b, 1, lam)
                    break
            else:
                on_wall = any(v == 0 or v == self.ell_beta(b) for b, v in enumerate(vals))
                return FoldResult(lam, (-1) ** length, on_wall, length)
            length += 1

    def linkage_representative(self, lam: Sequence[int]) -> tuple[Weight, int]:
        """Canonical W_ell-orbit representative and parity (0 on a wall)."""
        f = self.fold_to_alcove(lam)
        return f.weight, 0 if f.on_wall else f.sign

    def linked(self, lam: Sequence[int], mu: Sequence[int]) -> bool:
        return self.fold_to_alcove(lam).weight == self.fold_to_alcove(mu).weight

    # -- tilting combinatorics ------------------------------------------
    def decompose_ell(self, lam: Sequence[int]) -> tuple[Weight, Weight]:
        """lambda = lambda0 + ell * lambda1 with 0 <= <lambda0, alpha_i^vee> < ell."""
        if not self.is_dominant(lam):
            raise RootDataError(f"weight {tuple(lam)} is not dominant")
        return tuple(x % self.ell for x in lam), tuple(x // self.ell for x in lam)

    def bar(self, mu: Sequence[int]) -> Weight:
        """Highest weight of the injective hull: 2(ell-1)rho + w0 mu0 + ell mu1."""
        mu0, mu1 = self.decompose_ell(mu)
        w = self.w0(mu0)
        return tuple(2 * (self.ell - 1) + a + self.ell * b for a, b in zip(w, mu1))

    # -- enumeration ----------------------------------------------------
    def alcove_weights(self) -> tuple[list[Weight], list[Weight]]:
        """Dominant weights of C_ell and of the walls of its closure, sorted."""
        bound = self.ell  # <lambda+rho, alpha_i^vee> <= ell_alpha <= ell
        interior: list[Weight] = []
        walls: list[Weight] = []

        def rec(prefix: list[int]):
            if len(prefix) == self.rank:
                pos = self.alcove_position(prefix)
                if pos.tag is AlcoveTag.INTERIOR:
                    interior.append(tuple(prefix))
                elif pos.tag is AlcoveTag.WALL:
                    walls.append(tuple(prefix))
                return
            for x in range(0, bound):
                rec(prefix + [x])

        rec([])
        return sorted(interior), sorted(walls)

    def interior_labels(self) -> list[Weight]:
        return _interior_labels(self.type_name, self.ell, self.strict_paper_singular)


@lru_cache(maxsize=None)
def _interior_labels(type_name: str, ell: int, strict: bool) -> list[Weight]:
    return RootDatum(type_name, ell, strict).alcove_weights()[0]


@lru_cache(maxsize=None)
def root_datum(type_name: str, ell: int, strict_paper_singular: bool = False) -> RootDatum:
    """Cached constructor; RootDatum is immutable so sharing is safe."""
    return RootDatum(type_name, ell, strict_paper_singular)


def _inverse_matrix(a: Sequence[Sequence[int]]) -> list[list[Fraction]]:
    return _inverse_cached(tuple(tuple(r) for r in a))


@lru_cache(maxsize=None)
def _inverse_cached(a: tuple[tuple[int, ...], ...]) -> list[list[Fraction]]:
    n = len(a)
    m = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(a)]
    for col in range(n):
        piv = next(r for r in range(col, n) if m[r][col] != 0)
        m[col], m[piv] = m[piv], m[col]
        p = m[col][col]
        m[col] = [x / p for x in m[col]]
        for r in range(n):
            if r != col and m[r][col] != 0:
                f = m[r][col]
                m[r] = [x - f * y for x, y in zip(m[r], m[col])]
    return [row[n:] for row in m]
