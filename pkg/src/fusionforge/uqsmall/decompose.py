"""Direct-sum decomposition, negligibility, projective covers and injective hulls."""

from __future__ import annotations

import random
from dataclasses import dataclass
from functools import lru_cache

import flint

from ..cyclo import CyclotomicNumber, qpow
from .linalg import KMatrix
from .modules import (
    ExplicitModule,
    HomSpace,
    ModuleError,
    ModuleMap,
    build_simple,
    build_standard,
    casimir_blocks,
    direct_sum,
    hom_space,
    quantum_dim_module,
    submodule,
    tensor_modules,
)

__all__ = [
    "Summand",
    "endomorphism_data",
    "split_module",
    "decompose_module",
    "is_negligible_module",
    "negligible_by_traces",
    "are_isomorphic",
    "build_projective",
    "socle_multiplicities",
    "injective_hull",
]

_SPLIT_ATTEMPTS = 24


@dataclass(frozen=True, eq=False)
class EndData:
    hom: HomSpace
    top_dim: int

    @property
    def dim(self) -> int:
        return self.hom.dim

    @property
    def radical_dim(self) -> int:
        return self.dim - self.top_dim

    @property
    def is_local(self) -> bool:
        return self.top_dim == 1


@dataclass(frozen=True, eq=False)
class Summand:
    module: ExplicitModule
    inclusion: ModuleMap
    local: bool


def endomorphism_data(M: ExplicitModule) -> EndData:
    """End(M) with dim End/J, J the radical of the trace form Tr_M(xy).

    M is a faithful End(M)-module in characteristic 0, so the trace-form
    radical is the Jacobson radical.
    """
    H = hom_space(M, M)
    if H.dim == 0:
        return EndData(H, 0)
    # Tr(b_i b_j) = sum_(k,l) b_i[k,l] b_j[l,k]: pair each entry with its transpose.
    ents = H.entries
    keys = sorted({k for e in ents for (a, b) in e for k in ((a, b), (b, a))})
    index = {k: r for r, k in enumerate(keys)}
    V = KMatrix.from_sparse(M.ell, len(keys), H.dim, {(index[k], i): x for i, e in enumerate(ents) for k, x in e.items()})
    Vt = KMatrix.from_sparse(
        M.ell, len(keys), H.dim, {(index[(b, a)], i): x for i, e in enumerate(ents) for (a, b), x in e.items()}
    )
    gram = V.transpose() @ Vt
    return EndData(H, gram.rank())


def _weight_blocks(M: ExplicitModule) -> list[list[int]]:
    return [idx for _, idx in sorted(M.weight_classes.items())]


def _rational_factors(M: ExplicitModule, a: KMatrix) -> tuple[list[KMatrix], flint.fmpq_poly, list]:
    sub = [a.take(idx, idx) for idx in _weight_blocks(M)]
    P = flint.fmpq_poly([1])
    for s in sub:
        P = P * s.rational_charpoly()
    return sub, P, P.factor()[1]


def _generates_field(M: ExplicitModule, a: KMatrix, top_dim: int) -> bool:
    """a mod J generates End/J as a field.

    End/J is semisimple, so the image of a has squarefree minimal polynomial;
    a rational charpoly p^k with deg p = dim_Q End/J forces End/J = Q[x]/(p).
    """
    _, _, factors = _rational_factors(M, a)
    return len(factors) == 1 and factors[0][0].degree() == top_dim * a.phi


def _split_idempotent(M: ExplicitModule, a: KMatrix) -> KMatrix | None:
    """Nontrivial idempotent polynomial in a, or None when a is primary."""
    blocks = _weight_blocks(M)
    sub, P, factors = _rational_factors(M, a)
    if len(factors) < 2:
        return None
    g = factors[0][0] ** factors[0][1]
    h = P // g
    d, s, t = g.xgcd(h)
    # s g + t h = d (a nonzero constant); u = t h / d is 1 mod g and 0 mod h.
    u = (t * h) / d.coeffs()[0]
    pieces = []
    for blk in sub:
        if blk.rows == 0:
            pieces.append(blk)
            continue
        local = u % blk.rational_charpoly()
        pieces.append(blk.eval_rational_poly(local))
    e_blocks = KMatrix.block_diag(M.ell, pieces)
    order = [i for idx in blocks for i in idx]
    inv = [0] * M.dim
    for pos, i in enumerate(order):
        inv[i] = pos
    e = e_blocks.take(inv, inv)
    if not (e @ e == e):
        raise AssertionError("polynomial idempotent failed to be idempotent")
    if e.is_zero() or e == KMatrix.identity(M.ell, M.dim):
        return None
    return e


def _rng_for(M: ExplicitModule) -> random.Random:
    return random.Random(hash((M.ell, M.weights, M.dim)) & 0xFFFFFFFF)


def split_module(M: ExplicitModule) -> list[Summand]:
    """Indecomposable summands of M with their inclusions."""
    if M.dim == 0:
        return []
    blocks = casimir_blocks(M)
    if len(blocks) == 1:
        return _split_block(M)
    out = []
    for blk in blocks.values():
        for piece in _split_block(blk.module):
            out.append(Summand(piece.module, ModuleMap(piece.module, M, blk.inclusion @ piece.inclusion.matrix), piece.local))
    return out


def _split_block(M: ExplicitModule) -> list[Summand]:
    ident = ModuleMap(M, M, KMatrix.identity(M.ell, M.dim))
    data = endomorphism_data(M)
    if data.is_local:
        return [Summand(M, ident, True)]
    rng = _rng_for(M)
    basis = data.hom.basis
    one = KMatrix.identity(M.ell, M.dim)
    e = None
    for attempt in range(_SPLIT_ATTEMPTS):
        if attempt < len(basis):
            a = basis[attempt]
        else:
            a = data.hom.matrix_of([rng.randint(-3, 3) for _ in range(data.dim)])
        e = _split_idempotent(M, a)
        if e is None:
            # Galois-conjugate eigenvalues share a rational factor; a non-rational
            # shift separates them.
            shift = CyclotomicNumber(M.ell, [rng.randint(-3, 3) for _ in range(one.phi)])
            a = a + one.scale(shift)
            e = _split_idempotent(M, a)
        if e is not None:
            break
        if _generates_field(M, a, data.top_dim):
            # End/J is a field extension of the ground field: End is local.
            return [Summand(M, ident, True)]
    if e is None:
        # No idempotent and no certificate: End/J may be a noncommutative division algebra.
        return [Summand(M, ident, False)]
    out = []
    for proj in (e, one - e):
        inc = submodule(M, proj, M.name)
        for piece in _split_block(inc.source):
            out.append(Summand(piece.module, ModuleMap(piece.module, M, inc.matrix @ piece.inclusion.matrix), piece.local))
    return out


def are_isomorphic(A: ExplicitModule, B: ExplicitModule, tries: int = 4) -> bool:
    """For indecomposables: some random Hom combination is invertible."""
    if A.dim != B.dim or sorted(A.weights) != sorted(B.weights):
        return False
    H = hom_space(A, B)
    if H.dim == 0:
        return False
    rng = random.Random(A.dim * 7919 + H.dim)
    for t in range(tries):
        coeffs = [rng.randint(-4, 4) for _ in range(H.dim)] if t else [1] + [0] * (H.dim - 1)
        if H.matrix_of(coeffs).rank() == A.dim:
            return True
    return False


def decompose_module(M: ExplicitModule) -> list[tuple[ExplicitModule, int]]:
    """Indecomposable summands grouped up to isomorphism."""
    groups: list[list] = []
    for s in split_module(M):
        for g in groups:
            if are_isomorphic(g[0].module, s.module):
                g[1] += 1
                break
        else:
            groups.append([s, 1])
    return [(g[0].module, g[1]) for g in groups]


def is_negligible_module(M: ExplicitModule) -> bool:
    """Every indecomposable summand has quantum dimension zero."""
    return all(quantum_dim_module(s.module).is_zero() for s in split_module(M))


def negligible_by_traces(M: ExplicitModule) -> bool:
    """Tr(K f) = 0 for every f in End(M)."""
    H = hom_space(M, M)
    for e in H.entries:
        total = CyclotomicNumber.from_int(M.ell, 0)
        for (a, b), x in e.items():
            if a == b:
                total = total + x * qpow(M.ell, M.weights[a])
        if not total.is_zero():
            return False
    return True


@lru_cache(maxsize=None)
def build_projective(ell: int, n: int) -> ExplicitModule:
    """P(n): the summand of St (x) Delta(ell-1-n) with socle L(n)."""
    if not 0 <= n <= ell - 1:
        raise ModuleError(f"projective labels are 0..{ell - 1}, got {n}")
    if n == ell - 1:
        St = build_standard(ell, ell - 1)
        return ExplicitModule(ell, St.weights, St.E, St.F, f"P({n})", check=False)
    T = tensor_modules(build_standard(ell, ell - 1), build_standard(ell, ell - 1 - n))
    simple = build_simple(ell, n)
    hits = [s.module for s in split_module(T) if hom_space(simple, s.module).dim]
    if len(hits) != 1 or hits[0].dim != 2 * ell:
        raise AssertionError(f"could not isolate P({n}) in St x Delta({ell - 1 - n})")
    P = hits[0]
    return ExplicitModule(ell, P.weights, P.E, P.F, f"P({n})", check=False)


def socle_multiplicities(M: ExplicitModule) -> dict[int, int]:
    """dim Hom(L(lam), M) for lam in 0..ell-1."""
    out = {}
    for lam in range(M.ell):
        d = hom_space(build_simple(M.ell, lam), M).dim
        if d:
            out[lam] = d
    return out


def injective_hull(M: ExplicitModule, seed: int = 0, tries: int = 16) -> ModuleMap:
    """Embedding of M into the sum of P(lam) over its socle factors."""
    ell = M.ell
    soc = socle_multiplicities(M)
    labels = [lam for lam, d in sorted(soc.items()) for _ in range(d)]
    if not labels:
        raise ModuleError("zero module has no hull")
    parts = [build_projective(ell, lam) for lam in labels]
    I = direct_sum(ell, parts, " + ".join(p.name for p in parts))
    homs = {lam: hom_space(M, build_projective(ell, lam)) for lam in soc}
    rng = random.Random(seed)
    for _ in range(tries):
        blocks = []
        for lam in labels:
            H = homs[lam]
            blocks.append(H.matrix_of([rng.randint(-3, 3) for _ in range(H.dim)]))
        f = KMatrix.vstack(ell, M.dim, blocks)
        if f.rank() == M.dim:
            return ModuleMap(M, I, f)
    raise AssertionError("no injective map into the hull found")
