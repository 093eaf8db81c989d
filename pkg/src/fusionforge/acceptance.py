"""The acceptance suite: eleven exact or fuzzed checks over the whole library.

Each check returns a CriterionResult; run_suite runs them in order and
print_report writes one PASS/FAIL line per criterion.
"""

from __future__ import annotations

import random
import time
from collections import defaultdict
from dataclasses import dataclass
from typing import Callable, Iterable, TextIO

from . import sl2derived as sl2
from .cyclo import CyclotomicNumber
from .fusion import FusionElement, fusion_coefficients, fusion_table, label_qdim, sl2_fusion_closed_form
from .rootdata import AlcoveTag, RootDatum, root_datum
from .uqsmall import decompose as udec
from .uqsmall import fuzz as ufuzz
from .uqsmall import modules as umod
from .uqsmall import verlinde as uver

__all__ = ["CriterionResult", "Criterion", "CRITERIA", "DEFAULT_SEED", "run_suite", "print_report"]

DEFAULT_SEED = 2024


@dataclass(frozen=True)
class CriterionResult:
    number: int | str
    title: str
    passed: bool
    detail: str
    seconds: float

    def line(self) -> str:
        verdict = "PASS" if self.passed else "FAIL"
        return f"{verdict} {self.number:>2} {self.title} ({self.seconds:.1f}s): {self.detail}"

    def to_json(self) -> dict:
        return {
            "criterion": self.number,
            "title": self.title,
            "passed": self.passed,
            "detail": self.detail,
        }


class _Failures:
    """Collects the first few failures with a running count of checks."""

    def __init__(self, keep: int = 5):
        self.checked = 0
        self.bad: list[str] = []
        self.keep = keep
        self.total_bad = 0

    def check(self, ok: bool, what: Callable[[], str] | str) -> None:
        self.checked += 1
        if not ok:
            self.total_bad += 1
            if len(self.bad) < self.keep:
                self.bad.append(what() if callable(what) else what)

    def verdict(self, noun: str = "checks") -> tuple[bool, str]:
        if not self.total_bad:
            return True, f"{self.checked} {noun} exact"
        return False, f"{self.total_bad}/{self.checked} {noun} failed; first: " + "; ".join(self.bad)


# -- 1. fusion three-way agreement ----------------------------------------
def check_fusion_agreement() -> tuple[bool, str]:
    fails = _Failures()
    for ell in range(3, 10):
        datum = root_datum("A1", ell)
        for a in range(ell - 1):
            for b in range(ell - 1):
                folded = {c[0]: n for c, n in fusion_coefficients(datum, (a,), (b,)).coeffs.items()}
                closed = sl2_fusion_closed_form(a, b, ell)
                peeled = {c: n for c, n in sl2.decompose_tilting_tensor(ell, a, b).items() if c <= ell - 2}
                fails.check(
                    folded == closed == peeled,
                    lambda: f"ell={ell} ({a},{b}): folded {folded}, closed {closed}, peeled {peeled}",
                )
    worked = {c[0]: n for c, n in fusion_coefficients(root_datum("A1", 5), (3,), (3,)).coeffs.items()}
    fails.check(worked == {0: 1}, f"ell=5 (3,3) gave {worked}")
    return fails.verdict("products")


# -- 2./3. ring axioms and the quantum-dimension homomorphism --------------
RING_DATA = tuple([("A1", ell) for ell in range(3, 10)] + [("A2", 5), ("A2", 7), ("B2", 5)])


def check_ring_axioms() -> tuple[bool, str]:
    fails = _Failures()
    for type_name, ell in RING_DATA:
        datum = root_datum(type_name, ell)
        T = fusion_table(datum)
        n = len(T.labels)
        N = T.N
        unit = T.index(datum.zero)
        for i in range(n):
            fails.check(
                list(N[unit][i]) == [int(k == i) for k in range(n)],
                lambda: f"{type_name} ell={ell}: unit fails on {T.labels[i]}",
            )
            for j in range(n):
                # The table mirrors i <= j, so commutativity is tested against a fresh product.
                swapped = fusion_coefficients(datum, T.labels[j], T.labels[i]).coeffs
                fails.check(
                    T.product(T.labels[i], T.labels[j]) == swapped,
                    lambda: f"{type_name} ell={ell}: {T.labels[i]}*{T.labels[j]} not commutative",
                )
                fails.check(
                    min(N[i][j]) >= 0,
                    lambda: f"{type_name} ell={ell}: negative coefficient in {T.labels[i]}*{T.labels[j]}",
                )
        for a in range(n):
            for b in range(n):
                for c in range(n):
                    left = [sum(N[a][b][s] * N[s][c][t] for s in range(n)) for t in range(n)]
                    right = [sum(N[b][c][s] * N[a][s][t] for s in range(n)) for t in range(n)]
                    fails.check(
                        left == right,
                        lambda: f"{type_name} ell={ell}: associativity fails on {T.labels[a]},{T.labels[b]},{T.labels[c]}",
                    )
    return fails.verdict()


def check_qdim_homomorphism() -> tuple[bool, str]:
    fails = _Failures()
    for type_name, ell in RING_DATA:
        datum = root_datum(type_name, ell)
        T = fusion_table(datum)
        qd = [label_qdim(datum, lam) for lam in T.labels]
        for i in range(len(qd)):
            for j in range(i, len(qd)):
                rhs = CyclotomicNumber.from_int(ell, 0)
                for k, c in enumerate(T.N[i][j]):
                    if c:
                        rhs = rhs + qd[k] * c
                fails.check(
                    (qd[i] * qd[j] - rhs).is_zero(),
                    lambda: f"{type_name} ell={ell}: {T.labels[i]}*{T.labels[j]}",
                )
    return fails.verdict("products")


# -- 4./5. stable Homs and resolution telescoping --------------------------
def check_stable_homs() -> tuple[bool, str]:
    fails = _Failures()
    ks = list(range(-6, 7))
    for ell in (3, 5, 7):
        for m in range(ell - 1):
            for n in range(ell - 1):
                got = sl2.stable_hom_table(ell, m, n, ks)
                want = [int(m == n and k in (0, -1)) for k in ks]
                fails.check(got == want, lambda: f"ell={ell} m={m} n={n}: {got}")
    return fails.verdict("rows")


def _combine(terms: Iterable[tuple[int, dict[int, int]]]) -> dict[int, int]:
    acc: defaultdict = defaultdict(int)
    for c, chi in terms:
        for w, v in chi.items():
            acc[w] += c * v
    return {w: v for w, v in sorted(acc.items()) if v}


def check_telescoping() -> tuple[bool, str]:
    fails = _Failures()
    for ell in (3, 5, 7):
        for m in range(ell - 1):
            lhs = sl2.simple_character(ell, m)
            for k in range(13):
                terms = [((-1) ** i, sl2.tilting_character(ell, sl2.orbit_weight(ell, m, i))) for i in range(k + 1)]
                terms.append(((-1) ** (k + 1), sl2.standard_character(sl2.orbit_weight(ell, m, k))))
                fails.check(_combine(terms) == lhs, lambda: f"ell={ell} m={m} k={k}")
    return fails.verdict("identities")


# -- 6. Euler pairings -------------------------------------------------------
def random_negligible_complex(ell: int, rng: random.Random, max_label: int | None = None) -> sl2.EulerComplex:
    top = max_label if max_label is not None else 6 * ell
    terms = {}
    for p in range(rng.randint(-4, 0), rng.randint(0, 4) + 1):
        terms[p] = tuple(rng.randint(ell - 1, top) for _ in range(rng.randint(0, 3)))
    return sl2.EulerComplex(ell, terms)


def check_euler_duality(seed: int = DEFAULT_SEED, cases: int = 100) -> tuple[bool, str]:
    fails = _Failures()
    for ell in (3, 5, 7):
        rng = random.Random(seed * 1000 + ell)
        for _ in range(cases):
            X = random_negligible_complex(ell, rng)
            N = rng.randint(ell - 1, 6 * ell)
            a, b = sl2.euler_a(X, N), sl2.euler_b(X, N)
            fails.check(a == b, lambda: f"ell={ell} N={N} {dict(X.terms)}: a={a} b={b}")
            fails.check(
                sl2.euler_a(X, N, probe=5) == a and sl2.euler_b(X, N, probe=5) == b,
                lambda: f"ell={ell} N={N}: window probe moved the value",
            )
        for m in range(ell - 1):
            tail = sl2.EulerComplex.resolution_tail(ell, m)
            for N in range(ell - 1, 6 * ell + 1):
                a, b = sl2.euler_a(tail, N), sl2.euler_b(tail, N)
                fails.check(a == b, lambda: f"ell={ell} tail m={m} N={N}: a={a} b={b}")
                fails.check(
                    sl2.euler_a(tail, N, probe=5) == a and sl2.euler_b(tail, N, probe=5) == b,
                    lambda: f"ell={ell} tail m={m} N={N}: window probe moved the value",
                )
    return fails.verdict()


# -- 7. multiplicativity of the Grothendieck map ------------------------------
def check_phi_multiplicative() -> tuple[bool, str]:
    fails = _Failures()
    for ell in (3, 5):
        datum = root_datum("A1", ell)
        zero = FusionElement(datum, {})
        for a in range(2 * ell + 1):
            for b in range(2 * ell + 1):
                labels = tuple(sl2.decompose_tilting_tensor(ell, a, b).elements())
                got = sl2.fusion_class_of_complex(sl2.EulerComplex(ell, {0: labels}))
                inside = a <= ell - 2 and b <= ell - 2
                want = fusion_coefficients(datum, (a,), (b,)) if inside else zero
                fails.check(got == want, lambda: f"ell={ell} ({a},{b}): {got.coeffs} vs {want.coeffs}")
    return fails.verdict("products")


# -- 8. the Verlinde-type quotient ------------------------------------------
def check_vr_bar() -> tuple[bool, str]:
    fails = _Failures()
    for ell in (3, 5, 7, 9, 11):
        R = uver.vr_bar_ring(ell)
        fails.check(R.dim == (ell - 1) // 2, lambda: f"ell={ell}: dim {R.dim}")
        fails.check(R.product(0, 0) == {0: 1}, lambda: f"ell={ell}: b0 is not the unit")
    b1sq = uver.vr_bar_ring(5).product(1, 1)
    fails.check(b1sq == {0: 1, 1: -1}, f"ell=5: b1*b1 = {b1sq}")
    for ell in (3, 5, 7):
        V = uver.vr_bar_ring(ell)
        R = uver.r_u_quotient(ell, 4 * ell)
        fails.check(R.labels == V.labels and R.N == V.N, lambda: f"ell={ell}: r_u differs from vr_bar")
        R2 = uver.r_u_quotient(ell, 6 * ell)
        fails.check(R2.N == R.N, lambda: f"ell={ell}: r_u moved when the weight bound grew by 2 ell")
    return fails.verdict()


# -- 9. negligible cokernels ------------------------------------------------
def check_cokernel_fuzz(seed: int = DEFAULT_SEED, trials: int = 200, cases: int = 100, workers: int = 1) -> tuple[bool, str]:
    parts = []
    ok = True
    for ell in (3, 5):
        c = ufuzz.coker_negligible_fuzz(ell, trials, seed, workers=workers)
        h = ufuzz.hull_cokernel_fuzz(ell, cases, seed, workers=workers)
        ok &= c.ok and h.ok and c.monomorphisms >= trials
        parts.append(
            f"ell={ell}: {c.monomorphisms} monos, {len(c.counterexamples)} bad; "
            f"{h.monomorphisms} hulls, {len(h.counterexamples)} bad"
        )
    return ok, " | ".join(parts)


# -- 10. explicit engine ----------------------------------------------------
def constructed_modules(ell: int, max_dim: int = 30) -> list[tuple[umod.ExplicitModule, bool]]:
    """Every explicit constructor up to max_dim, flagged when declared indecomposable."""
    out: list[tuple[umod.ExplicitModule, bool]] = []
    for n in range(max_dim):
        regular = n % ell != ell - 1
        out.append((umod.build_standard(ell, n), regular))
        out.append((umod.build_costandard(ell, n), regular))
    for n in range(ell):
        out.append((umod.build_simple(ell, n), True))
        out.append((udec.build_projective(ell, n), True))
    for n1 in range(1, max_dim // ell + 1):
        for n0 in range(1, ell - 1):
            for lam, mu in ((1, 0), (0, 1), (1, 1)):
                C = umod.build_c_module(ell, n0 + ell * n1, lam, mu)
                declared = (lam, mu) != (1, 1)
                out.append((C, declared))
                out.append((umod.tau_dual(C), declared))
    for lam in range((ell - 1) // 2):
        E = umod.build_e_extension(ell, lam)
        out.append((E, True))
        out.append((umod.tau_dual(E), True))
    return [(M, d) for M, d in out if M.dim <= max_dim]


def check_explicit_engine(ells: Iterable[int] = (3, 5), max_dim: int = 30) -> tuple[bool, str]:
    fails = _Failures()
    count = 0
    for ell in ells:
        for M, declared in constructed_modules(ell, max_dim):
            count += 1
            try:
                M.check_relations()
                fails.check(True, "")
            except umod.ModuleError as exc:
                fails.check(False, f"ell={ell} {M.name}: {exc}")
            pieces = udec.split_module(M)
            fails.check(all(p.local for p in pieces), lambda: f"ell={ell} {M.name}: non-local summand")
            fails.check(sum(p.module.dim for p in pieces) == M.dim, lambda: f"ell={ell} {M.name}: dims do not sum")
            qsum = CyclotomicNumber.from_int(ell, 0)
            for p in pieces:
                qsum = qsum + umod.quantum_dim_module(p.module)
            fails.check(qsum == umod.quantum_dim_module(M), lambda: f"ell={ell} {M.name}: qdim not additive")
            if declared:
                fails.check(len(pieces) == 1, lambda: f"ell={ell} {M.name}: {len(pieces)} summands")
        for lam in range((ell - 1) // 2):
            E = umod.build_e_extension(ell, lam)
            fails.check(umod.quantum_dim_module(E).is_zero(), f"ell={ell}: qdim E_{lam} != 0")
    ok, detail = fails.verdict()
    return ok, f"{count} modules, {detail}"


# -- 11. alcove and linkage layer -------------------------------------------
ALCOVE_DATA = (("A1", 5), ("A1", 6), ("A2", 5), ("B2", 5), ("B2", 6), ("C3", 7), ("G2", 7))


def _random_weight(datum: RootDatum, rng: random.Random) -> tuple[int, ...]:
    span = 3 * datum.ell
    return tuple(rng.randint(-span, span) for _ in range(datum.rank))


def check_alcove_layer(seed: int = DEFAULT_SEED, cases: int = 1000) -> tuple[bool, str]:
    fails = _Failures()
    for type_name, ell in ALCOVE_DATA:
        datum = root_datum(type_name, ell)
        rng = random.Random(f"{seed}:{type_name}:{ell}")
        nroots = datum.num_positive_roots
        for _ in range(cases):
            lam = _random_weight(datum, rng)
            beta, r = rng.randrange(nroots), rng.randint(-3, 3)
            once = datum.dot_reflect(beta, r, lam)
            fails.check(datum.dot_reflect(beta, r, once) == lam, lambda: f"{type_name} ell={ell}: {lam} beta={beta} r={r}")
            rep, parity = datum.linkage_representative(lam)
            rep2, parity2 = datum.linkage_representative(once)
            fails.check(
                rep == rep2 and parity == -parity2 if once != lam else rep == rep2,
                lambda: f"{type_name} ell={ell}: linkage of {lam} moved under beta={beta} r={r}",
            )
            if datum.is_interior(lam):
                fails.check(not datum.is_singular(lam), lambda: f"{type_name} ell={ell}: interior {lam} singular")
            mu = tuple(abs(x) for x in lam)
            fails.check(
                datum.alcove_position(datum.bar(mu)).tag is not AlcoveTag.INTERIOR,
                lambda: f"{type_name} ell={ell}: bar{mu} interior",
            )
    for ell in range(3, 10):
        datum = root_datum("A1", ell)
        for mu in range(31):
            fails.check(
                datum.alcove_position(datum.bar((mu,))).tag is not AlcoveTag.INTERIOR,
                lambda: f"A1 ell={ell}: bar({mu}) interior",
            )
    return fails.verdict()


@dataclass(frozen=True)
class Criterion:
    number: int
    title: str
    run: Callable[..., tuple[bool, str]]
    fuzz: bool = False
    seeded: bool = False


CRITERIA: tuple[Criterion, ...] = (
    Criterion(1, "fusion three-way agreement", check_fusion_agreement),
    Criterion(2, "fusion ring axioms", check_ring_axioms),
    Criterion(3, "quantum dimension is a ring map", check_qdim_homomorphism),
    Criterion(4, "stable Hom indicator", check_stable_homs),
    Criterion(5, "resolution telescoping", check_telescoping),
    Criterion(6, "Euler pairing self-duality", check_euler_duality, fuzz=True, seeded=True),
    Criterion(7, "Grothendieck map is multiplicative", check_phi_multiplicative),
    Criterion(8, "Verlinde quotient of K0(u)", check_vr_bar),
    Criterion(9, "negligible cokernel fuzz", check_cokernel_fuzz, fuzz=True, seeded=True),
    Criterion(10, "explicit module engine", check_explicit_engine),
    Criterion(11, "alcove and linkage layer", check_alcove_layer, fuzz=True, seeded=True),
)


def run_criterion(c: Criterion, seed: int = DEFAULT_SEED) -> CriterionResult:
    start = time.perf_counter()
    try:
        ok, detail = c.run(seed=seed) if c.seeded else c.run()
    except Exception as exc:  # a crash is a failed criterion, not a crashed suite
        ok, detail = False, f"{type(exc).__name__}: {exc}"
    return CriterionResult(c.number, c.title, ok, detail, time.perf_counter() - start)


def run_suite(
    quick: bool = False, seed: int = DEFAULT_SEED, only: Iterable[int] | None = None, stream: TextIO | None = None
) -> list[CriterionResult]:
    """Run the criteria in order; quick mode skips the fuzz suites."""
    wanted = set(only) if only is not None else None
    results = []
    for c in CRITERIA:
        if (quick and c.fuzz) or (wanted is not None and c.number not in wanted):
            continue
        res = run_criterion(c, seed)
        results.append(res)
        if stream is not None:
            print(res.line(), file=stream, flush=True)
    return results


def print_report(results: Iterable[CriterionResult], stream: TextIO) -> bool:
    results = list(results)
    for r in results:
        print(r.line(), file=stream)
    passed = sum(r.passed for r in results)
    print(f"{passed}/{len(results)} criteria passed", file=stream)
    return passed == len(results)
