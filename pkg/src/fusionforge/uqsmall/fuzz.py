"""Randomized checks that negligible u_q(sl2)-modules are closed under cokernels.

Each trial draws its own generator from a splitmix64 stream keyed by the
master seed, so a report depends only on (ell, trials, seed).
"""

from __future__ import annotations

import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache

from .decompose import build_projective, injective_hull, is_negligible_module, negligible_by_traces
from .linalg import KMatrix
from .modules import (
    ExplicitModule,
    ModuleMap,
    build_c_module,
    build_costandard,
    build_e_extension,
    build_standard,
    cokernel,
    direct_sum,
    hom_space,
    quantum_dim_module,
    tau_dual,
)

__all__ = ["splitmix64", "trial_seeds", "negligible_pool", "coker_negligible_fuzz", "hull_cokernel_fuzz", "FuzzReport"]

_MASK = (1 << 64) - 1
_MONO_TRIES = 8


def splitmix64(state: int) -> tuple[int, int]:
    """One splitmix64 step: (next state, output)."""
    state = (state + 0x9E3779B97F4A7C15) & _MASK
    z = state
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
    return state, z ^ (z >> 31)


def trial_seeds(seed: int, n: int) -> list[int]:
    state = seed & _MASK
    out = []
    for _ in range(n):
        state, z = splitmix64(state)
        out.append(z)
    return out


@lru_cache(maxsize=None)
def negligible_pool(ell: int, max_dim: int = 30) -> tuple[ExplicitModule, ...]:
    """Negligible indecomposables from the explicit constructors, dim <= max_dim."""
    mods: list[ExplicitModule] = [build_projective(ell, n) for n in range(ell)]
    for n in range(ell - 1, max_dim, ell):
        mods.append(build_standard(ell, n))
        mods.append(build_costandard(ell, n))
    for n1 in range(1, max_dim // ell + 1):
        for n0 in range(1, ell - 1):
            for lam, mu in ((1, 0), (0, 1)):
                C = build_c_module(ell, n0 + ell * n1, lam, mu)
                mods.extend([C, tau_dual(C)])
    for lam in range((ell - 1) // 2):
        E = build_e_extension(ell, lam)
        mods.extend([E, tau_dual(E)])
    out = []
    for M in mods:
        if M.dim <= max_dim:
            if not quantum_dim_module(M).is_zero():
                raise AssertionError(f"{M.name} in the negligible pool has nonzero quantum dimension")
            out.append(M)
    return tuple(out)


def _random_sum(ell: int, rng: random.Random, pool, max_dim: int, max_parts: int) -> ExplicitModule:
    parts: list[ExplicitModule] = []
    total = 0
    for _ in range(rng.randint(1, max_parts)):
        choices = [M for M in pool if total + M.dim <= max_dim]
        if not choices:
            break
        M = rng.choice(choices)
        parts.append(M)
        total += M.dim
    if not parts:
        parts.append(min(pool, key=lambda M: M.dim))
    return parts[0] if len(parts) == 1 else direct_sum(ell, parts)


def _random_mono(N: ExplicitModule, Np: ExplicitModule, rng: random.Random) -> ModuleMap | None:
    H = hom_space(N, Np)
    if H.dim == 0:
        return None
    for _ in range(_MONO_TRIES):
        f = H.matrix_of([rng.randint(-3, 3) for _ in range(H.dim)])
        if f.rank() == N.dim:
            return ModuleMap(N, Np, f)
    return None


@dataclass
class FuzzReport:
    ell: int
    trials: int
    seed: int
    kind: str
    monomorphisms: int = 0
    hull_augmented: int = 0
    counterexamples: list[dict] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.counterexamples

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "ell": self.ell,
            "trials": self.trials,
            "seed": self.seed,
            "monomorphisms": self.monomorphisms,
            "hull_augmented": self.hull_augmented,
            "counterexamples": self.counterexamples,
            "ok": self.ok,
        }


def _cokernel_verdict(f: ModuleMap, trial: int) -> dict | None:
    """None when coker f is negligible by both tests, else a counterexample record."""
    Q = cokernel(f).target
    by_summands = is_negligible_module(Q)
    by_traces = negligible_by_traces(Q)
    if by_summands and by_traces:
        return None
    return {
        "trial": trial,
        "source": f.source.name,
        "target": f.target.name,
        "cokernel_dim": Q.dim,
        "negligible_by_summands": by_summands,
        "negligible_by_traces": by_traces,
    }


def _coker_trial(args: tuple[int, int, int, int, int]) -> tuple[bool, dict | None]:
    ell, t, s, max_dim, source_dim = args
    pool = negligible_pool(ell, max_dim)
    rng = random.Random(s)
    N = _random_sum(ell, rng, pool, source_dim, 2)
    Np = _random_sum(ell, rng, pool, max_dim, 3)
    f = _random_mono(N, Np, rng)
    augmented = f is None
    if f is None:
        hull = injective_hull(N, seed=s)
        room = max_dim - hull.target.dim
        fits = [M for M in pool if M.dim <= room]
        if fits and rng.random() < 0.75:
            extra = _random_sum(ell, rng, fits, room, 2)
            H = hom_space(N, extra)
            g = H.matrix_of([rng.randint(-3, 3) for _ in range(H.dim)])
            target = direct_sum(ell, [hull.target, extra])
            f = ModuleMap(N, target, KMatrix.vstack(ell, N.dim, [hull.matrix, g]))
        else:
            f = hull
    if not f.is_injective():
        raise AssertionError("sampled map is not a monomorphism")
    return augmented, _cokernel_verdict(f, t)


def _hull_trial(args: tuple[int, int, int, int]) -> tuple[bool, dict | None]:
    ell, t, s, max_dim = args
    rng = random.Random(s)
    M = _random_sum(ell, rng, negligible_pool(ell, max_dim), max_dim, 2)
    return False, _cokernel_verdict(injective_hull(M, seed=s), t)


def _run(report: FuzzReport, fn, jobs: list, workers: int) -> FuzzReport:
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as ex:
            results = list(ex.map(fn, jobs))
    else:
        results = [fn(j) for j in jobs]
    for augmented, bad in results:
        report.monomorphisms += 1
        report.hull_augmented += augmented
        if bad is not None:
            report.counterexamples.append(bad)
    return report


def coker_negligible_fuzz(
    ell: int, trials: int, seed: int, max_dim: int = 30, source_dim: int = 12, workers: int = 1
) -> FuzzReport:
    """Random monomorphisms N -> N' between negligible sums; every cokernel must be negligible.

    N has dimension at most source_dim and N' at most max_dim. When no random
    intertwiner into a random N' is injective, N' is rebuilt as the injective
    hull of N plus a random negligible sum filling the remaining dimension.
    """
    jobs = [(ell, t, s, max_dim, source_dim) for t, s in enumerate(trial_seeds(seed, trials))]
    return _run(FuzzReport(ell, trials, seed, "coker"), _coker_trial, jobs, workers)


def hull_cokernel_fuzz(ell: int, cases: int, seed: int, max_dim: int = 20, workers: int = 1) -> FuzzReport:
    """Cokernel of the injective hull of a random negligible module must be negligible."""
    jobs = [(ell, t, s, max_dim) for t, s in enumerate(trial_seeds(seed, cases))]
    return _run(FuzzReport(ell, cases, seed, "hull"), _hull_trial, jobs, workers)
