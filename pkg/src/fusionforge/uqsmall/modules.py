"""Explicit finite-dimensional u_q(sl2)-modules over Q(zeta_ell).

Every module carries a weight basis: K is diagonal with entries q^w, w taken
mod ell. E raises weights by 2 and F lowers them by 2. All maps constructed
here preserve weights, so kernels, images and quotients keep weight bases.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Iterable, Mapping, Sequence

import flint

from ..cyclo import CyclotomicNumber, check_ell, qint, qpow
from .linalg import KMatrix, LinAlgError, sparse_nullspace

__all__ = [
    "ModuleError",
    "ExplicitModule",
    "ModuleMap",
    "HomSpace",
    "build_standard",
    "build_costandard",
    "build_simple",
    "build_c_module",
    "c_module_inclusion",
    "build_e_extension",
    "tau_dual",
    "tensor_modules",
    "direct_sum",
    "trivial_module",
    "hom_space",
    "kernel",
    "image",
    "cokernel",
    "submodule",
    "quantum_dim_module",
    "casimir",
    "casimir_blocks",
    "CasimirBlock",
    "linkage_class",
    "quotient",
    "composition_factors",
]


class ModuleError(ValueError):
    pass


class ExplicitModule:
    """A u_q(sl2)-module given by E, F and the K-weights of its basis."""

    def __init__(self, ell: int, weights: Sequence[int], E: KMatrix, F: KMatrix, name: str = "", check: bool = True):
        check_ell(ell)
        self.ell = ell
        self.weights = tuple(int(w) % ell for w in weights)
        self.dim = len(self.weights)
        if E.shape != (self.dim, self.dim) or F.shape != (self.dim, self.dim):
            raise ModuleError("E and F must be dim x dim")
        self.E, self.F = E, F
        self.name = name
        if check:
            self.check_relations()

    def __repr__(self) -> str:
        label = f" {self.name}" if self.name else ""
        return f"ExplicitModule(ell={self.ell}, dim={self.dim}{label})"

    @cached_property
    def weight_classes(self) -> dict[int, list[int]]:
        out: dict[int, list[int]] = defaultdict(list)
        for i, w in enumerate(self.weights):
            out[w].append(i)
        return dict(out)

    @cached_property
    def E_entries(self) -> dict[tuple[int, int], CyclotomicNumber]:
        return self.E.nonzero_entries()

    @cached_property
    def F_entries(self) -> dict[tuple[int, int], CyclotomicNumber]:
        return self.F.nonzero_entries()

    @cached_property
    def K(self) -> KMatrix:
        return KMatrix.diagonal(self.ell, [qpow(self.ell, w) for w in self.weights])

    @cached_property
    def _local_index(self) -> list[int]:
        out = [0] * self.dim
        for idx in self.weight_classes.values():
            for k, i in enumerate(idx):
                out[i] = k
        return out

    @cached_property
    def _blocks(self) -> dict[tuple[str, int, int], KMatrix]:
        loc, w = self._local_index, self.weights
        parts: dict[tuple[str, int, int], dict] = defaultdict(dict)
        for tag, ents in (("E", self.E_entries), ("F", self.F_entries)):
            for (i, j), x in ents.items():
                parts[(tag, w[i], w[j])][(loc[i], loc[j])] = x
        cls = self.weight_classes
        return {
            key: KMatrix.from_sparse(self.ell, len(cls[key[1]]), len(cls[key[2]]), ents)
            for key, ents in parts.items()
        }

    def block(self, tag: str, w_to: int, w_from: int) -> KMatrix:
        """The weight-space block of E or F from weight w_from to weight w_to."""
        w_to, w_from = w_to % self.ell, w_from % self.ell
        got = self._blocks.get((tag, w_to, w_from))
        if got is not None:
            return got
        cls = self.weight_classes
        return KMatrix.zeros(self.ell, len(cls.get(w_to, ())), len(cls.get(w_from, ())))

    def check_relations(self) -> None:
        """KE = q^2 EK, KF = q^-2 FK, [E,F] = (K - K^-1)/(q - q^-1), E^ell = F^ell = 0."""
        ell, w = self.ell, self.weights
        for (i, j) in self.E_entries:
            if w[i] != (w[j] + 2) % ell:
                raise ModuleError(f"E entry ({i},{j}) does not raise the weight by 2")
        for (i, j) in self.F_entries:
            if w[i] != (w[j] - 2) % ell:
                raise ModuleError(f"F entry ({i},{j}) does not lower the weight by 2")
        # All relations are checked one weight space at a time.
        for wt, idx in self.weight_classes.items():
            ef = self.block("E", wt, wt - 2) @ self.block("F", wt - 2, wt)
            fe = self.block("F", wt, wt + 2) @ self.block("E", wt + 2, wt)
            if ef - fe != KMatrix.diagonal(ell, [qint(wt, 1, ell)] * len(idx)):
                raise ModuleError("EF - FE != (K - K^-1)/(q - q^-1)")
            for tag, step in (("E", 2), ("F", -2)):
                P = KMatrix.identity(ell, len(idx))
                cur = wt
                for _ in range(ell):
                    P = self.block(tag, cur + step, cur) @ P
                    cur += step
                    if P.rows == 0 or P.is_zero():
                        break
                else:
                    raise ModuleError(f"{tag}^ell != 0")

    def to_json(self) -> dict:
        return {
            "dim": self.dim,
            "ell": self.ell,
            "K_exponents": list(self.weights),
            "E": self.E.to_json(),
            "F": self.F.to_json(),
        }


@dataclass(frozen=True, eq=False)
class ModuleMap:
    source: ExplicitModule
    target: ExplicitModule
    matrix: KMatrix

    def __post_init__(self):
        if self.matrix.shape != (self.target.dim, self.source.dim):
            raise ModuleError("map matrix has the wrong shape")

    def is_intertwiner(self) -> bool:
        f, M, N = self.matrix, self.source, self.target
        for (i, j) in f.nonzero_entries():
            if M.weights[j] != N.weights[i]:
                return False
        return f @ M.E == N.E @ f and f @ M.F == N.F @ f

    def rank(self) -> int:
        return self.matrix.rank()

    def is_injective(self) -> bool:
        return self.rank() == self.source.dim


def _sparse_module(ell: int, weights: Sequence[int], E: Mapping, F: Mapping, name: str) -> ExplicitModule:
    n = len(weights)
    return ExplicitModule(
        ell,
        weights,
        KMatrix.from_sparse(ell, n, n, E),
        KMatrix.from_sparse(ell, n, n, F),
        name,
    )


@lru_cache(maxsize=None)
def build_standard(ell: int, n: int) -> ExplicitModule:
    """Delta(n)|u: F v_j = [j+1] v_(j+1), E v_j = [n-j+1] v_(j-1), K v_j = q^(n-2j) v_j."""
    if n < 0:
        raise ModuleError(f"highest weight must be >= 0, got {n}")
    E = {(j - 1, j): qint(n - j + 1, 1, ell) for j in range(1, n + 1)}
    F = {(j + 1, j): qint(j + 1, 1, ell) for j in range(n)}
    return _sparse_module(ell, [n - 2 * j for j in range(n + 1)], E, F, f"Delta({n})")


@lru_cache(maxsize=None)
def build_costandard(ell: int, n: int) -> ExplicitModule:
    """nabla(n)|u as the transpose dual of Delta(n): E v_j = [j] v_(j-1), F v_j = [n-j] v_(j+1)."""
    return tau_dual(build_standard(ell, n), f"nabla({n})")


def build_simple(ell: int, n: int) -> ExplicitModule:
    """L(n)|u for 0 <= n <= ell-1, equal to Delta(n)|u."""
    if not 0 <= n <= ell - 1:
        raise ModuleError(f"simple u-modules are labelled 0..{ell - 1}, got {n}")
    return build_standard(ell, n)


def trivial_module(ell: int) -> ExplicitModule:
    return build_standard(ell, 0)


def tau_dual(M: ExplicitModule, name: str | None = None) -> ExplicitModule:
    """Same weights, E' = F^T, F' = E^T."""
    return ExplicitModule(M.ell, M.weights, M.F.transpose(), M.E.transpose(), name or f"{M.name}^t")


def direct_sum(ell: int, mods: Sequence[ExplicitModule], name: str = "") -> ExplicitModule:
    if not mods:
        raise ModuleError("empty direct sum")
    weights = [w for M in mods for w in M.weights]
    E = KMatrix.block_diag(ell, [M.E for M in mods])
    F = KMatrix.block_diag(ell, [M.F for M in mods])
    return ExplicitModule(ell, weights, E, F, name or " + ".join(M.name for M in mods), check=False)


def tensor_modules(M: ExplicitModule, N: ExplicitModule) -> ExplicitModule:
    """M (x) N with E -> E(x)K + 1(x)E, F -> F(x)1 + K^-1(x)F, K -> K(x)K."""
    ell = M.ell
    if N.ell != ell:
        raise ModuleError("tensor factors over different roots of unity")
    m, n = M.dim, N.dim
    E: dict = defaultdict(lambda: CyclotomicNumber.from_int(ell, 0))
    F: dict = defaultdict(lambda: CyclotomicNumber.from_int(ell, 0))
    for (i, j), x in M.E_entries.items():
        for b in range(n):
            E[(i * n + b, j * n + b)] += x * qpow(ell, N.weights[b])
    for (a, b), x in N.E_entries.items():
        for i in range(m):
            E[(i * n + a, i * n + b)] += x
    for (i, j), x in M.F_entries.items():
        for b in range(n):
            F[(i * n + b, j * n + b)] += x
    for (a, b), x in N.F_entries.items():
        for i in range(m):
            F[(i * n + a, i * n + b)] += x * qpow(ell, -M.weights[i])
    weights = [M.weights[i] + N.weights[b] for i in range(m) for b in range(n)]
    return _sparse_module(ell, weights, dict(E), dict(F), f"{M.name}(x){N.name}")


# -- submodules and quotients -------------------------------------------


def _weight_bases(M: ExplicitModule, V: KMatrix) -> dict[int, KMatrix]:
    """Per weight w, a basis of the weight-w components of the columns of V."""
    out = {}
    for w, idx in sorted(M.weight_classes.items()):
        block = V.take(idx, range(V.cols))
        piv = block.pivot_columns()
        if piv:
            out[w] = block.columns(piv)
    return out


def _induced_module(M: ExplicitModule, bases: Mapping[int, KMatrix], name: str) -> ModuleMap:
    """Submodule with weight-space bases bases[w] (each n_w x r_w) and its inclusion."""
    ell = M.ell
    order = sorted(bases)
    pos: dict[int, list[int]] = {}
    weights: list[int] = []
    for w in order:
        pos[w] = list(range(len(weights), len(weights) + bases[w].cols))
        weights.extend([w] * bases[w].cols)
    r = len(weights)
    pieces: dict[str, list] = {"E": [], "F": []}
    try:
        for w in order:
            for tag, step in (("E", 2), ("F", -2)):
                image = M.block(tag, w + step, w) @ bases[w]
                dest = (w + step) % ell
                if dest not in bases:
                    if not image.is_zero():
                        raise LinAlgError("image leaves the subspace")
                    continue
                pieces[tag].append((pos[dest], pos[w], bases[dest].solve(image)))
    except LinAlgError as exc:
        raise ModuleError("subspace is not a submodule") from exc
    E = KMatrix.assemble(ell, r, r, pieces["E"])
    F = KMatrix.assemble(ell, r, r, pieces["F"])
    S = ExplicitModule(ell, weights, E, F, name or f"sub({M.name})", check=False)
    inc = KMatrix.assemble(ell, M.dim, r, [(M.weight_classes[w], pos[w], bases[w]) for w in order])
    return ModuleMap(S, M, inc)


def submodule(M: ExplicitModule, V: KMatrix, name: str = "", homogeneous: bool = False) -> ModuleMap:
    """Inclusion of the submodule spanned by the weight components of V's columns.

    For homogeneous V (weight-vector columns) this is the span of V itself.
    The span must be invariant under E and F.
    """
    return _induced_module(M, _weight_bases(M, V), name)


def quotient(M: ExplicitModule, V: KMatrix, name: str = "") -> ModuleMap:
    """Projection M -> M / span(V) (span must be invariant)."""
    ell = M.ell
    bases = _weight_bases(M, V) if V.cols else {}
    comp: dict[int, list[int]] = {}
    proj: dict[int, KMatrix] = {}
    for w, idx in M.weight_classes.items():
        n = len(idx)
        I = KMatrix.identity(ell, n)
        B = bases.get(w, KMatrix.zeros(ell, n, 0))
        piv = KMatrix.hstack(ell, n, [B, I]).pivot_columns()
        comp[w] = [p - B.cols for p in piv if p >= B.cols]
        full = KMatrix.hstack(ell, n, [B, I.columns(comp[w])])
        proj[w] = full.inverse().take(range(B.cols, n), range(n))
    order = sorted(w for w in comp if comp[w])
    pos: dict[int, list[int]] = {}
    weights: list[int] = []
    for w in order:
        pos[w] = list(range(len(weights), len(weights) + len(comp[w])))
        weights.extend([w] * len(comp[w]))
    r = len(weights)
    pieces: dict[str, list] = {"E": [], "F": []}
    for w in M.weight_classes:
        for tag, step in (("E", 2), ("F", -2)):
            dest = (w + step) % ell
            if dest not in M.weight_classes:
                continue
            blk = M.block(tag, dest, w)
            if w in bases and not (proj[dest] @ blk @ bases[w]).is_zero():
                raise ModuleError("subspace is not a submodule")
            if comp[w] and comp[dest]:
                lift = KMatrix.identity(ell, len(M.weight_classes[w])).columns(comp[w])
                pieces[tag].append((pos[dest], pos[w], proj[dest] @ blk @ lift))
    E = KMatrix.assemble(ell, r, r, pieces["E"])
    F = KMatrix.assemble(ell, r, r, pieces["F"])
    Q = ExplicitModule(ell, weights, E, F, name or f"quot({M.name})", check=False)
    P = KMatrix.assemble(ell, r, M.dim, [(pos[w], M.weight_classes[w], proj[w]) for w in order])
    return ModuleMap(M, Q, P)


def kernel(f: ModuleMap) -> ModuleMap:
    N = f.matrix.nullspace()
    return submodule(f.source, N, "ker")


def image(f: ModuleMap) -> ModuleMap:
    return submodule(f.target, f.matrix, "im")


def cokernel(f: ModuleMap) -> ModuleMap:
    return quotient(f.target, f.matrix, "coker")


# -- Casimir blocks ----------------------------------------------------------


@lru_cache(maxsize=None)
def _casimir_shift(ell: int) -> CyclotomicNumber:
    d = qpow(ell, 1) - qpow(ell, -1)
    return (d * d).inverse()


def casimir(M: ExplicitModule) -> KMatrix:
    """EF + (q^-1 K + q K^-1)/(q - q^-1)^2."""
    ell = M.ell
    c = _casimir_shift(ell)
    diag = [(qpow(ell, w - 1) + qpow(ell, 1 - w)) * c for w in M.weights]
    return M.E @ M.F + KMatrix.diagonal(ell, diag)


@lru_cache(maxsize=None)
def casimir_value(ell: int, lam: int) -> CyclotomicNumber:
    return (qpow(ell, lam + 1) + qpow(ell, -lam - 1)) * _casimir_shift(ell)


def linkage_class(ell: int, lam: int) -> tuple[int, ...]:
    """Simple labels sharing the Casimir value of L(lam): lam and ell-2-lam mod ell."""
    return tuple(sorted({lam % ell, (ell - 2 - lam) % ell}))


@lru_cache(maxsize=None)
def _linkage_classes(ell: int) -> tuple[tuple[int, ...], ...]:
    return tuple(sorted({linkage_class(ell, lam) for lam in range(ell)}))


@dataclass(frozen=True, eq=False)
class CasimirBlock:
    """Generalized eigenspace of the Casimir with its inclusion and projection."""

    labels: tuple[int, ...]
    module: ExplicitModule
    inclusion: KMatrix | None
    projection: KMatrix | None


def casimir_blocks(M: ExplicitModule) -> dict[tuple[int, ...], CasimirBlock]:
    """M as the direct sum of its Casimir generalized eigenspaces.

    The Casimir is central, so each eigenspace is a submodule. It preserves
    weights, so the eigenspaces are found one weight space at a time.
    A single-block module is returned as itself with no maps.
    """
    cached = M.__dict__.get("_casimir_blocks")
    if cached is not None:
        return cached
    ell = M.ell
    shift = _casimir_shift(ell)
    parts: dict[tuple[int, ...], dict[int, KMatrix]] = defaultdict(dict)
    for w, idx in M.weight_classes.items():
        n = len(idx)
        C = M.block("E", w, w - 2) @ M.block("F", w - 2, w)
        C = C + KMatrix.diagonal(ell, [(qpow(ell, w - 1) + qpow(ell, 1 - w)) * shift] * n)
        found = 0
        for cls in _linkage_classes(ell):
            D = C - KMatrix.diagonal(ell, [casimir_value(ell, cls[0])] * n)
            P = D
            for _ in range(n - 1):
                P = P @ D
            ker = P.nullspace()
            if ker.cols:
                parts[cls][w] = ker
                found += ker.cols
        if found != n:
            raise ModuleError("Casimir has an eigenvalue outside the simple spectrum")
    if len(parts) <= 1:
        out = {cls: CasimirBlock(cls, M, None, None) for cls in parts}
    else:
        out = {}
        projections: dict[tuple[int, ...], list] = defaultdict(list)
        for w, idx in M.weight_classes.items():
            present = [cls for cls in sorted(parts) if w in parts[cls]]
            inv = KMatrix.hstack(ell, len(idx), [parts[cls][w] for cls in present]).inverse()
            start = 0
            for cls in present:
                r = parts[cls][w].cols
                projections[cls].append((w, inv.take(range(start, start + r), range(len(idx)))))
                start += r
        for cls in sorted(parts):
            inc = _induced_module(M, parts[cls], f"{M.name}[{cls[0]}]")
            sub = inc.source
            pieces = [(sub.weight_classes[w], M.weight_classes[w], X) for w, X in projections[cls]]
            proj = KMatrix.assemble(ell, sub.dim, M.dim, pieces)
            out[cls] = CasimirBlock(cls, sub, inc.matrix, proj)
    M.__dict__["_casimir_blocks"] = out
    return out


# -- Hom spaces ------------------------------------------------------------


class HomSpace:
    """A basis of Hom(source, target) as target.dim x source.dim matrices."""

    def __init__(self, source: ExplicitModule, target: ExplicitModule, basis: list[KMatrix], entries=None):
        self.source, self.target, self.basis = source, target, basis
        self._entries = entries

    @property
    def dim(self) -> int:
        return len(self.basis)

    def matrix_of(self, coeffs: Sequence[int]) -> KMatrix:
        out = KMatrix.zeros(self.source.ell, self.target.dim, self.source.dim)
        for c, b in zip(coeffs, self.basis):
            if c:
                out = out + b.scale(c)
        return out

    @property
    def entries(self) -> list[dict[tuple[int, int], CyclotomicNumber]]:
        """Nonzero entries of each basis matrix."""
        if self._entries is None:
            self._entries = [b.nonzero_entries() for b in self.basis]
        return self._entries

    def maps(self) -> list[ModuleMap]:
        return [ModuleMap(self.source, self.target, b) for b in self.basis]


def _hom_direct(M: ExplicitModule, N: ExplicitModule) -> tuple[list[KMatrix], list[dict]]:
    """Solve X E_M = E_N X, X F_M = F_N X over weight-preserving X."""
    ell = M.ell
    var_index: dict[tuple[int, int], int] = {}
    for w, rows in N.weight_classes.items():
        for b in M.weight_classes.get(w, ()):
            for a in rows:
                var_index[(a, b)] = len(var_index)
    variables = sorted(var_index, key=var_index.get)
    nv = len(variables)
    if nv == 0:
        return [], []
    eqs: list[dict[int, CyclotomicNumber]] = []
    for XM, XN, step in ((M.E_entries, N.E_entries, 2), (M.F_entries, N.F_entries, -2)):
        by_row_N: dict[int, list] = defaultdict(list)
        for (i, a), x in XN.items():
            by_row_N[i].append((a, x))
        by_col_M: dict[int, list] = defaultdict(list)
        for (c, b), x in XM.items():
            by_col_M[b].append((c, x))
        for b in range(M.dim):
            for i in N.weight_classes.get((M.weights[b] + step) % ell, ()):
                eq: dict[int, CyclotomicNumber] = {}
                for a, x in by_row_N.get(i, ()):
                    k = var_index.get((a, b))
                    if k is not None:
                        eq[k] = eq[k] + x if k in eq else x
                for c, x in by_col_M.get(b, ()):
                    k = var_index[(i, c)]
                    eq[k] = eq[k] - x if k in eq else -x
                eq = {k: v for k, v in eq.items() if not v.is_zero()}
                if eq:
                    eqs.append(eq)
    sol = sparse_nullspace(ell, eqs, nv)
    cols: list[dict] = [dict() for _ in range(sol.cols)]
    for (r, c), x in sol.nonzero_entries().items():
        cols[c][variables[r]] = x
    return [KMatrix.from_sparse(ell, N.dim, M.dim, d) for d in cols], cols


def hom_space(M: ExplicitModule, N: ExplicitModule) -> HomSpace:
    """Hom_u(M, N), computed one Casimir block at a time; End(M) is cached on M."""
    if N.ell != M.ell:
        raise ModuleError("Hom between modules over different roots of unity")
    if M is N and "_end" in M.__dict__:
        return M.__dict__["_end"]
    if M.dim == 0 or N.dim == 0:
        return HomSpace(M, N, [])
    bM, bN = casimir_blocks(M), casimir_blocks(N)
    if len(bM) == 1 and len(bN) == 1:
        if set(bM) != set(bN):
            H = HomSpace(M, N, [])
        else:
            H = HomSpace(M, N, *_hom_direct(M, N))
    else:
        basis = []
        for cls, blk in bM.items():
            if cls not in bN:
                continue
            tgt = bN[cls]
            for h in _hom_direct(blk.module, tgt.module)[0]:
                if tgt.inclusion is not None:
                    h = tgt.inclusion @ h
                if blk.projection is not None:
                    h = h @ blk.projection
                basis.append(h)
        H = HomSpace(M, N, basis)
    if M is N:
        M.__dict__["_end"] = H
    return H


# -- traces and composition factors ----------------------------------------


def quantum_dim_module(M: ExplicitModule) -> CyclotomicNumber:
    """Trace of K."""
    return CyclotomicNumber.from_exponents(M.ell, _weight_counts(M))


def _weight_counts(M: ExplicitModule) -> dict[int, int]:
    out: dict[int, int] = defaultdict(int)
    for w in M.weights:
        out[w] += 1
    return dict(out)


def simple_weight_counts(ell: int, lam: int) -> dict[int, int]:
    out: dict[int, int] = defaultdict(int)
    for j in range(lam + 1):
        out[(lam - 2 * j) % ell] += 1
    return dict(out)


def composition_factors(M: ExplicitModule) -> dict[int, int]:
    """[M:L(lam)] for lam in 0..ell-1.

    Within a Casimir block only the linked simples occur, and their weight
    multiplicities are linearly independent, so the block's weights fix them.
    """
    ell = M.ell
    out: dict[int, int] = {}
    for cls, blk in casimir_blocks(M).items():
        counts = _weight_counts(blk.module)
        k = len(cls)
        data = []
        for w in range(ell):
            data.extend(simple_weight_counts(ell, lam).get(w, 0) for lam in cls)
            data.append(counts.get(w, 0))
        R, rank = flint.fmpq_mat(ell, k + 1, data).rref()
        if rank != k:
            raise ModuleError(f"weights of block {cls} are not a combination of its simples")
        for t, lam in enumerate(cls):
            x = R[t, k]
            if x.q != 1 or x < 0:
                raise ModuleError(f"non-integral composition multiplicity {x} for L({lam})")
            if x:
                out[lam] = int(x.p)
    return dict(sorted(out.items()))


# -- further families ------------------------------------------------------


def _short(x: CyclotomicNumber) -> str:
    return str(x.coeffs[0]) if x.is_rational() else "(" + ",".join(map(str, x.coeffs)) + ")"


def build_c_module(ell: int, n: int, lam: int | CyclotomicNumber, mu: int | CyclotomicNumber) -> ExplicitModule:
    """C_{lam,mu}(n) with its induced action; see c_module_inclusion."""
    return c_module_inclusion(ell, n, lam, mu).source


def c_module_inclusion(ell: int, n: int, lam: int | CyclotomicNumber, mu: int | CyclotomicNumber) -> ModuleMap:
    """C_{lam,mu}(n) inside Delta(n)|u, n = n0 + ell n1 with 1 <= n0 <= ell-2 and n1 >= 1.

    Spanned by lam v_i + mu v_(n-n0+i) for 0 <= i <= n0 and v_(n0+1) .. v_(n-n0-1);
    dimension ell n1.
    """
    n0, n1 = n % ell, n // ell
    if n0 == 0:
        raise ModuleError(f"ell divides n={n}")
    if n0 == ell - 1:
        raise ModuleError(f"n={n} = -1 mod ell: Delta(n)|u is a sum of Steinberg modules")
    if n1 < 1:
        raise ModuleError(f"n={n} lies below ell; Delta(n)|u is simple")
    lam_c = lam if isinstance(lam, CyclotomicNumber) else CyclotomicNumber.from_int(ell, lam)
    mu_c = mu if isinstance(mu, CyclotomicNumber) else CyclotomicNumber.from_int(ell, mu)
    if lam_c.is_zero() and mu_c.is_zero():
        raise ModuleError("C-module parameters must not both vanish")
    D = build_standard(ell, n)
    cols: dict = {}
    k = 0
    for i in range(n0 + 1):
        if not lam_c.is_zero():
            cols[(i, k)] = lam_c
        if not mu_c.is_zero():
            cols[(n - n0 + i, k)] = mu_c
        k += 1
    for j in range(n0 + 1, n - n0):
        cols[(j, k)] = 1
        k += 1
    V = KMatrix.from_sparse(ell, D.dim, k, cols)
    inc = submodule(D, V, f"C[{_short(lam_c)},{_short(mu_c)}]({n})", homogeneous=True)
    if inc.source.dim != ell * n1:
        raise AssertionError("C-module dimension differs from ell * n1")
    return inc


def build_e_extension(ell: int, lam: int) -> ExplicitModule:
    """Nonsplit extension of Delta(s.lam)|u by Delta(lam)|u, s.lam = ell-2-lam > lam.

    Basis w_0..w_s of Delta(s.lam) followed by v_0..v_lam of Delta(lam); F w_s = v_0.
    """
    s = ell - 2 - lam
    if not 0 <= lam < s:
        raise ModuleError(f"E-extension needs 0 <= lam < ell-2-lam, got lam={lam}")
    top, sub = build_standard(ell, s), build_standard(ell, lam)
    off = s + 1
    E = dict(top.E_entries)
    F = dict(top.F_entries)
    for (i, j), x in sub.E_entries.items():
        E[(off + i, off + j)] = x
    for (i, j), x in sub.F_entries.items():
        F[(off + i, off + j)] = x
    F[(off, s)] = CyclotomicNumber.from_int(ell, 1)
    return _sparse_module(ell, list(top.weights) + list(sub.weights), E, F, f"E({lam})")
