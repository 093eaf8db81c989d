"""Exact matrices over Q(zeta_ell).

A K-matrix of shape r x c is stored realified: an (r*phi) x (c*phi) rational
matrix whose (i, j) block is the multiplication-by-entry operator in the
power basis. Products, sums and inverses of realified matrices are the
realifications of the K-results, so flint's exact rational kernels do all the
work. Column j*phi + 0 of a block row carries the coordinates of the entry.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import gcd, isqrt
from typing import Iterable, Mapping, Sequence

import flint

from ..cyclo import CyclotomicNumber, _reduction_table, euler_phi

__all__ = ["KMatrix", "LinAlgError", "mult_block", "sparse_nullspace", "to_fmpq"]

Scalar = CyclotomicNumber | int | Fraction


class LinAlgError(ArithmeticError):
    pass


def to_fmpq(x) -> flint.fmpq:
    if isinstance(x, flint.fmpq):
        return x
    if isinstance(x, int):
        return flint.fmpq(x)
    return flint.fmpq(x.numerator, x.denominator)


def _from_fmpq(x: flint.fmpq) -> Fraction:
    return Fraction(int(x.p), int(x.q))


@lru_cache(maxsize=None)
def _zeta_blocks(ell: int) -> tuple[tuple[tuple[int, ...], ...], ...]:
    """Z[k][s][t] = coordinate s of zeta^(k+t)."""
    table = _reduction_table(ell)
    phi = euler_phi(ell)
    return tuple(
        tuple(tuple(table[(k + t) % ell][s] for t in range(phi)) for s in range(phi))
        for k in range(phi)
    )


@lru_cache(maxsize=4096)
def _mult_block_cached(ell: int, coeffs: tuple[Fraction, ...]) -> tuple[tuple[flint.fmpq, ...], ...]:
    phi = len(coeffs)
    Z = _zeta_blocks(ell)
    out = [[Fraction(0)] * phi for _ in range(phi)]
    for k, c in enumerate(coeffs):
        if c:
            zk = Z[k]
            for s in range(phi):
                row = zk[s]
                o = out[s]
                for t in range(phi):
                    if row[t]:
                        o[t] += c * row[t]
    return tuple(tuple(to_fmpq(v) for v in row) for row in out)


def _as_cyclo(ell: int, x: Scalar) -> CyclotomicNumber:
    if isinstance(x, CyclotomicNumber):
        if x.ell != ell:
            raise LinAlgError(f"entry lives in Q(zeta_{x.ell}), expected ell={ell}")
        return x
    return CyclotomicNumber.from_int(ell, x)


def mult_block(ell: int, x: Scalar) -> tuple[tuple[flint.fmpq, ...], ...]:
    """phi x phi rational matrix of multiplication by x."""
    return _mult_block_cached(ell, _as_cyclo(ell, x).coeffs)


class KMatrix:
    """Immutable r x c matrix over Q(zeta_ell)."""

    __slots__ = ("ell", "rows", "cols", "phi", "re", "_flat")

    def __init__(self, ell: int, rows: int, cols: int, re: flint.fmpq_mat | None = None):
        phi = euler_phi(ell)
        if re is None:
            re = flint.fmpq_mat(rows * phi, cols * phi)
        elif re.nrows() != rows * phi or re.ncols() != cols * phi:
            raise LinAlgError("realified shape does not match")
        self.ell, self.rows, self.cols, self.phi, self.re = ell, rows, cols, phi, re
        self._flat = None

    def _entries(self) -> list:
        if self._flat is None:
            self._flat = self.re.entries()
        return self._flat

    # -- construction ----------------------------------------------------
    @classmethod
    def zeros(cls, ell: int, rows: int, cols: int) -> "KMatrix":
        return cls(ell, rows, cols)

    @classmethod
    def identity(cls, ell: int, n: int) -> "KMatrix":
        m = n * euler_phi(ell)
        flat = [0] * (m * m)
        for i in range(m):
            flat[i * m + i] = 1
        return cls(ell, n, n, flint.fmpq_mat(m, m, flat))

    @classmethod
    def from_sparse(cls, ell: int, rows: int, cols: int, entries: Mapping[tuple[int, int], Scalar]) -> "KMatrix":
        phi = euler_phi(ell)
        C = cols * phi
        flat: list = [0] * (rows * phi * C)
        for (i, j), x in entries.items():
            if not (0 <= i < rows and 0 <= j < cols):
                raise LinAlgError(f"entry ({i}, {j}) outside {rows}x{cols}")
            cx = _as_cyclo(ell, x)
            if cx.is_zero():
                continue
            blk = _mult_block_cached(ell, cx.coeffs)
            for s in range(phi):
                base = (i * phi + s) * C + j * phi
                flat[base : base + phi] = blk[s]
        return cls(ell, rows, cols, flint.fmpq_mat(rows * phi, C, flat))

    @classmethod
    def from_rows(cls, ell: int, data: Sequence[Sequence[Scalar]]) -> "KMatrix":
        rows = len(data)
        cols = len(data[0]) if rows else 0
        entries = {}
        for i, row in enumerate(data):
            if len(row) != cols:
                raise LinAlgError("ragged matrix rows")
            for j, x in enumerate(row):
                entries[(i, j)] = x
        return cls.from_sparse(ell, rows, cols, entries)

    @classmethod
    def diagonal(cls, ell: int, diag: Sequence[Scalar]) -> "KMatrix":
        n = len(diag)
        return cls.from_sparse(ell, n, n, {(i, i): x for i, x in enumerate(diag)})

    # -- access ------------------------------------------------------------
    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    def entry(self, i: int, j: int) -> CyclotomicNumber:
        phi = self.phi
        return CyclotomicNumber(self.ell, [_from_fmpq(self.re[i * phi + s, j * phi]) for s in range(phi)])

    def to_rows(self) -> list[list[CyclotomicNumber]]:
        return [[self.entry(i, j) for j in range(self.cols)] for i in range(self.rows)]

    def nonzero_entries(self) -> dict[tuple[int, int], CyclotomicNumber]:
        phi, C = self.phi, self.cols * self.phi
        flat = self._entries()
        out = {}
        for i in range(self.rows):
            for j in range(self.cols):
                coords = [flat[(i * phi + s) * C + j * phi] for s in range(phi)]
                if any(coords):
                    out[(i, j)] = CyclotomicNumber(self.ell, [_from_fmpq(c) for c in coords])
        return out

    def take(self, row_idx: Sequence[int], col_idx: Sequence[int]) -> "KMatrix":
        phi, C = self.phi, self.cols * self.phi
        flat = self._entries()
        out: list = []
        for i in row_idx:
            for s in range(phi):
                base = (i * phi + s) * C
                for j in col_idx:
                    out.extend(flat[base + j * phi : base + j * phi + phi])
        return KMatrix(self.ell, len(row_idx), len(col_idx), flint.fmpq_mat(len(row_idx) * phi, len(col_idx) * phi, out))

    def columns(self, col_idx: Sequence[int]) -> "KMatrix":
        return self.take(range(self.rows), col_idx)

    # -- arithmetic --------------------------------------------------------
    def _check(self, other: "KMatrix") -> None:
        if not isinstance(other, KMatrix) or other.ell != self.ell:
            raise LinAlgError("operands live over different fields")

    def __add__(self, other: "KMatrix") -> "KMatrix":
        self._check(other)
        if self.shape != other.shape:
            raise LinAlgError(f"shape mismatch {self.shape} + {other.shape}")
        return KMatrix(self.ell, self.rows, self.cols, self.re + other.re)

    def __sub__(self, other: "KMatrix") -> "KMatrix":
        self._check(other)
        if self.shape != other.shape:
            raise LinAlgError(f"shape mismatch {self.shape} - {other.shape}")
        return KMatrix(self.ell, self.rows, self.cols, self.re - other.re)

    def __neg__(self) -> "KMatrix":
        return KMatrix(self.ell, self.rows, self.cols, -self.re)

    def __matmul__(self, other: "KMatrix") -> "KMatrix":
        self._check(other)
        if self.cols != other.rows:
            raise LinAlgError(f"shape mismatch {self.shape} @ {other.shape}")
        if self.cols == 0:
            return KMatrix.zeros(self.ell, self.rows, other.cols)
        return KMatrix(self.ell, self.rows, other.cols, self.re * other.re)

    def scale(self, x: Scalar) -> "KMatrix":
        cx = _as_cyclo(self.ell, x)
        if cx.is_rational():
            return KMatrix(self.ell, self.rows, self.cols, self.re * to_fmpq(cx.coeffs[0]))
        return KMatrix.diagonal(self.ell, [cx] * self.rows) @ self

    def __eq__(self, other) -> bool:
        if not isinstance(other, KMatrix):
            return NotImplemented
        return self.ell == other.ell and self.shape == other.shape and self.re == other.re

    __hash__ = None

    def is_zero(self) -> bool:
        return self.re == flint.fmpq_mat(self.re.nrows(), self.re.ncols())

    def transpose(self) -> "KMatrix":
        phi, C = self.phi, self.cols * self.phi
        flat = self._entries()
        R2 = self.rows * phi
        out: list = [0] * (self.cols * phi * R2)
        for i in range(self.rows):
            for j in range(self.cols):
                for s in range(phi):
                    src = (i * phi + s) * C + j * phi
                    dst = (j * phi + s) * R2 + i * phi
                    out[dst : dst + phi] = flat[src : src + phi]
        return KMatrix(self.ell, self.cols, self.rows, flint.fmpq_mat(self.cols * phi, R2, out))

    def trace(self) -> CyclotomicNumber:
        if self.rows != self.cols:
            raise LinAlgError("trace of a non-square matrix")
        total = CyclotomicNumber.from_int(self.ell, 0)
        for i in range(self.rows):
            total = total + self.entry(i, i)
        return total

    @staticmethod
    def hstack(ell: int, rows: int, mats: Sequence["KMatrix"]) -> "KMatrix":
        cols = sum(m.cols for m in mats)
        phi = euler_phi(ell)
        out: list = []
        flats = [(m._entries(), m.cols * phi) for m in mats]
        for r in range(rows * phi):
            for flat, C in flats:
                out.extend(flat[r * C : (r + 1) * C])
        return KMatrix(ell, rows, cols, flint.fmpq_mat(rows * phi, cols * phi, out))

    @staticmethod
    def vstack(ell: int, cols: int, mats: Sequence["KMatrix"]) -> "KMatrix":
        rows = sum(m.rows for m in mats)
        phi = euler_phi(ell)
        out: list = []
        for m in mats:
            if m.cols != cols:
                raise LinAlgError("vstack column mismatch")
            out.extend(m._entries())
        return KMatrix(ell, rows, cols, flint.fmpq_mat(rows * phi, cols * phi, out))

    @staticmethod
    def block_diag(ell: int, mats: Sequence["KMatrix"]) -> "KMatrix":
        rows = sum(m.rows for m in mats)
        cols = sum(m.cols for m in mats)
        phi = euler_phi(ell)
        C = cols * phi
        out: list = [0] * (rows * phi * C)
        r0 = c0 = 0
        for m in mats:
            flat, mc = m._entries(), m.cols * phi
            for r in range(m.rows * phi):
                dst = (r0 + r) * C + c0
                out[dst : dst + mc] = flat[r * mc : (r + 1) * mc]
            r0 += m.rows * phi
            c0 += mc
        return KMatrix(ell, rows, cols, flint.fmpq_mat(rows * phi, C, out))

    @staticmethod
    def assemble(ell: int, rows: int, cols: int, pieces: Iterable[tuple[Sequence[int], Sequence[int], "KMatrix"]]) -> "KMatrix":
        """rows x cols matrix with each piece scattered to the given row and column indices."""
        phi = euler_phi(ell)
        C = cols * phi
        out: list = [0] * (rows * phi * C)
        for ridx, cidx, X in pieces:
            if (len(ridx), len(cidx)) != X.shape:
                raise LinAlgError("assemble: index lists do not match the piece")
            if X.rows == 0 or X.cols == 0:
                continue
            src = X._entries()
            XC = X.cols * phi
            for a, i in enumerate(ridx):
                for s in range(phi):
                    base = (i * phi + s) * C
                    sbase = (a * phi + s) * XC
                    for b, j in enumerate(cidx):
                        out[base + j * phi : base + j * phi + phi] = src[sbase + b * phi : sbase + b * phi + phi]
        return KMatrix(ell, rows, cols, flint.fmpq_mat(rows * phi, C, out))

    # -- elimination -------------------------------------------------------
    def rref(self) -> tuple["KMatrix", list[int]]:
        """Reduced row echelon form over K and its pivot columns.

        Over Q the realified pivots come in full groups (j*phi + s for all s),
        and the realified reduced form of the K-rref occupies the first rows.
        """
        phi = self.phi
        if self.rows == 0 or self.cols == 0:
            return KMatrix.zeros(self.ell, 0, self.cols), []
        R, rank = self.re.rref()
        C = self.cols * phi
        flat = R.entries()
        qpiv = []
        col = 0
        for r in range(rank):
            while flat[r * C + col] == 0:
                col += 1
            qpiv.append(col)
        if rank % phi:
            raise LinAlgError("realified rank is not a multiple of phi")
        piv = []
        for t in range(rank // phi):
            group = qpiv[t * phi : (t + 1) * phi]
            j = group[0] // phi
            if group != [j * phi + s for s in range(phi)]:
                raise LinAlgError("realified pivots do not come in groups")
            piv.append(j)
        krows = rank // phi
        return KMatrix(self.ell, krows, self.cols, flint.fmpq_mat(rank, C, flat[: rank * C])), piv

    def rank(self) -> int:
        if self.rows == 0 or self.cols == 0:
            return 0
        r = self.re.rank()
        return r // self.phi

    def nullspace(self) -> "KMatrix":
        """Columns form a basis of {x : A x = 0}, normalized on the free coordinates."""
        phi, n = self.phi, self.cols
        R, piv = self.rref()
        free = [j for j in range(n) if j not in set(piv)]
        d = len(free)
        Rf = R.re.entries()
        C = n * phi
        D = d * phi
        out: list = [0] * (n * phi * D)
        for u, f in enumerate(free):
            for s in range(phi):
                out[(f * phi + s) * D + u * phi + s] = 1
            for t, p in enumerate(piv):
                for s in range(phi):
                    src = (t * phi + s) * C + f * phi
                    dst = (p * phi + s) * D + u * phi
                    for k in range(phi):
                        v = Rf[src + k]
                        if v != 0:
                            out[dst + k] = -v
        return KMatrix(self.ell, n, d, flint.fmpq_mat(n * phi, D, out))

    def pivot_columns(self) -> list[int]:
        return self.rref()[1]

    def column_basis(self) -> "KMatrix":
        return self.columns(self.pivot_columns())

    def solve(self, rhs: "KMatrix") -> "KMatrix":
        """Some X with self @ X == rhs; raises if inconsistent."""
        self._check(rhs)
        if rhs.rows != self.rows:
            raise LinAlgError("solve: row mismatch")
        aug = KMatrix.hstack(self.ell, self.rows, [self, rhs])
        R, piv = aug.rref()
        if any(p >= self.cols for p in piv):
            raise LinAlgError("inconsistent linear system")
        X = {}
        for t, p in enumerate(piv):
            for j in range(rhs.cols):
                x = R.entry(t, self.cols + j)
                if not x.is_zero():
                    X[(p, j)] = x
        return KMatrix.from_sparse(self.ell, self.cols, rhs.cols, X)

    def inverse(self) -> "KMatrix":
        if self.rows != self.cols:
            raise LinAlgError("inverse of a non-square matrix")
        if self.rows == 0:
            return self
        try:
            inv = self.re.inv()
        except ZeroDivisionError as exc:
            raise LinAlgError("singular matrix") from exc
        return KMatrix(self.ell, self.rows, self.cols, inv)

    def rational_charpoly(self) -> flint.fmpq_poly:
        """Characteristic polynomial of the realified operator (the norm of the K-charpoly)."""
        if self.rows != self.cols:
            raise LinAlgError("charpoly of a non-square matrix")
        return self.re.charpoly()

    def eval_rational_poly(self, poly: flint.fmpq_poly) -> "KMatrix":
        """poly(self) by Horner; poly has rational coefficients."""
        coeffs = poly.coeffs()
        n = self.rows * self.phi
        acc = flint.fmpq_mat(n, n)
        ident = KMatrix.identity(self.ell, self.rows).re
        for c in reversed(coeffs):
            acc = acc * self.re + ident * c
        return KMatrix(self.ell, self.rows, self.cols, acc)

    def to_json(self) -> list[list[list[str]]]:
        return [[x.to_json() for x in row] for row in self.to_rows()]

    @classmethod
    def from_json(cls, ell: int, data: Sequence[Sequence]) -> "KMatrix":
        rows = []
        for row in data:
            out_row = []
            for x in row:
                if isinstance(x, (list, tuple)):
                    out_row.append(CyclotomicNumber.from_json(ell, x))
                else:
                    out_row.append(CyclotomicNumber.from_int(ell, Fraction(x)))
            rows.append(out_row)
        return cls.from_rows(ell, rows)

    def __repr__(self) -> str:
        return f"KMatrix(ell={self.ell}, {self.rows}x{self.cols})"


def combine(mats: Iterable[KMatrix], coeffs: Iterable[int]) -> KMatrix:
    """Integer linear combination of equally shaped matrices."""
    acc = None
    for m, c in zip(mats, coeffs):
        term = KMatrix(m.ell, m.rows, m.cols, m.re * c)
        acc = term if acc is None else acc + term
    if acc is None:
        raise LinAlgError("empty combination")
    return acc


# -- sparse systems ----------------------------------------------------------

_MAX_PRIMES = 16


def _prime_factors(n: int) -> list[int]:
    out, d = [], 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


@lru_cache(maxsize=None)
def _split_primes(ell: int) -> tuple[tuple[int, tuple[int, ...]], ...]:
    """Primes p = 1 mod ell below 2^62, each with the phi primitive ell-th roots of unity mod p."""
    units = [k for k in range(1, ell) if gcd(k, ell) == 1]
    out = []
    p = (1 << 62) - ((1 << 62) % ell) + 1
    while len(out) < _MAX_PRIMES:
        p -= ell
        if not flint.fmpz(p).is_prime():
            continue
        for g in range(2, 1000):
            r = pow(g, (p - 1) // ell, p)
            if all(pow(r, ell // f, p) != 1 for f in _prime_factors(ell)):
                out.append((p, tuple(pow(r, k, p) for k in units)))
                break
    return tuple(out)


def _rational_reconstruction(a: int, m: int) -> Fraction | None:
    """n/d = a mod m with |n|, d <= sqrt(m/2), or None."""
    bound = isqrt(m // 2)
    r0, r1 = m, a % m
    t0, t1 = 0, 1
    while r1 > bound:
        q = r0 // r1
        r0, r1 = r1, r0 - q * r1
        t0, t1 = t1, t0 - q * t1
    if t1 == 0 or abs(t1) > bound:
        return None
    return Fraction(r1, t1)


def _reduce_mod(x: CyclotomicNumber, p: int, root: int) -> int:
    acc, rk = 0, 1
    for c in x.coeffs:
        if c:
            den = c.denominator % p
            if den == 0:
                raise ZeroDivisionError
            acc += c.numerator * pow(den, -1, p) * rk
        rk = rk * root % p
    return acc % p


def _realified_rows(ell: int, eqs: Sequence[Mapping[int, CyclotomicNumber]], cols: Sequence[int]) -> flint.fmpq_mat:
    phi = euler_phi(ell)
    where = {c: k for k, c in enumerate(cols)}
    re = flint.fmpq_mat(len(eqs) * phi, len(cols) * phi)
    for r, eq in enumerate(eqs):
        for k, x in eq.items():
            c = where.get(k)
            if c is None:
                continue
            blk = mult_block(ell, x)
            for s in range(phi):
                row = blk[s]
                for t in range(phi):
                    if row[t] != 0:
                        re[r * phi + s, c * phi + t] = row[t]
    return re


def sparse_nullspace(ell: int, eqs: Sequence[Mapping[int, CyclotomicNumber]], ncols: int) -> KMatrix:
    """Nullspace of the system whose rows are the sparse maps eqs (column -> entry).

    The reduced echelon form is computed modulo primes that split Q(zeta_ell),
    under every embedding, and lifted by CRT and rational reconstruction. A
    lift is accepted only once it solves every equation exactly: it then has
    ncols - rank_p independent columns and the rank over Q is at least rank
    mod p, so it spans the nullspace. If no lift settles, the whole system is
    eliminated exactly.
    """
    if not eqs:
        return KMatrix.identity(ell, ncols)
    full = KMatrix(ell, len(eqs), ncols, _realified_rows(ell, eqs, range(ncols)))
    try:
        N = _nullspace_multimodular(ell, eqs, ncols, full)
    except ZeroDivisionError:
        N = None
    return N if N is not None else full.nullspace()


def _nmod_pivots(R: flint.nmod_mat, rank: int) -> list[int]:
    out = []
    col = 0
    for t in range(rank):
        while int(R[t, col]) == 0:
            col += 1
        out.append(col)
    return out


def _image_nullspace(eqs, ncols: int, p: int, root: int) -> tuple[list[int], list[int]]:
    """Pivot columns and the entries -R[pivot row, free column] of the rref mod p."""
    cache: dict = {}
    A = flint.nmod_mat(len(eqs), ncols, p)
    for i, eq in enumerate(eqs):
        for k, x in eq.items():
            v = cache.get(x.coeffs)
            if v is None:
                v = cache[x.coeffs] = _reduce_mod(x, p, root)
            A[i, k] = v
    R, rank = A.rref()
    piv = _nmod_pivots(R, rank)
    pset = set(piv)
    free = [j for j in range(ncols) if j not in pset]
    vals = [(-int(R[t, f])) % p for t in range(rank) for f in free]
    return piv, vals


def _nullspace_multimodular(ell: int, eqs, ncols: int, full: KMatrix) -> KMatrix | None:
    phi = euler_phi(ell)
    piv: list[int] | None = None
    residues: list[int] = []
    modulus = 1
    for p, roots in _split_primes(ell):
        images = [_image_nullspace(eqs, ncols, p, root) for root in roots]
        pivs = {tuple(pv) for pv, _ in images}
        if len(pivs) != 1:
            continue
        this_piv = list(pivs.pop())
        if piv is None or len(this_piv) > len(piv):
            piv, modulus = this_piv, 1
            residues = [0] * (len(images[0][1]) * phi)
        elif this_piv != piv:
            continue
        nvals = len(images[0][1])
        if nvals == 0:
            N = _assemble_nullspace(ell, ncols, piv, [])
            if N.cols == 0 or (full @ N).is_zero():
                return N
            continue
        # Power-basis coordinates from the phi embeddings: a Vandermonde solve.
        V = flint.nmod_mat(phi, phi, [pow(root, s, p) for root in roots for s in range(phi)], p)
        vals = flint.nmod_mat(phi, nvals, [v for _, vs in images for v in vs], p)
        coords = [int(x) for x in V.solve(vals).entries()]
        inv = pow(modulus, -1, p)
        for e in range(nvals):
            for s in range(phi):
                k = e * phi + s
                residues[k] += modulus * (((coords[s * nvals + e] - residues[k]) * inv) % p)
        modulus *= p
        recon = []
        for x in residues:
            y = _rational_reconstruction(x, modulus)
            if y is None:
                break
            recon.append(y)
        else:
            N = _assemble_nullspace(ell, ncols, piv, recon)
            if (full @ N).is_zero():
                return N
    return None


def _assemble_nullspace(ell: int, ncols: int, piv: list[int], coords: list[Fraction]) -> KMatrix:
    phi = euler_phi(ell)
    pset = set(piv)
    free = [j for j in range(ncols) if j not in pset]
    d = len(free)
    entries: dict = {(f, u): 1 for u, f in enumerate(free)}
    for t, pc in enumerate(piv):
        for u in range(d):
            k = (t * d + u) * phi
            c = coords[k : k + phi]
            if any(c):
                entries[(pc, u)] = CyclotomicNumber(ell, c)
    return KMatrix.from_sparse(ell, ncols, d, entries)
