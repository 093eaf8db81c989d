"""Command-line front end: one verb per invocation, JSON first, CSV and markdown as projections.

Exit status: 0 success, 1 domain error or failed selftest, 2 usage error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
import tempfile
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any, Callable, Sequence

from . import acceptance
from . import sl2derived as sl2
from .cyclo import CyclotomicError, CyclotomicNumber, ell_is_validated
from .fusion import FusionError, FusionTable, fusion_table
from .characters import quantum_dimension, weyl_character
from .rootdata import RootDataError, root_datum
from .uqsmall import decompose as udec
from .uqsmall import fuzz as ufuzz
from .uqsmall import modules as umod
from .uqsmall import verlinde as uver
from .uqsmall.linalg import KMatrix, LinAlgError

__all__ = ["main", "build_parser", "JobConfig", "UsageError", "CACHE_SCHEMA_VERSION", "cached_fusion_table"]

CACHE_SCHEMA_VERSION = 1
CACHE_ENV = "FUSIONFORGE_CACHE"

DOMAIN_ERRORS = (
    CyclotomicError,
    RootDataError,
    FusionError,
    sl2.Sl2Error,
    umod.ModuleError,
    uver.UnsupportedEll,
    LinAlgError,
)


class UsageError(Exception):
    """Malformed arguments or input file; exit status 2."""


@dataclass
class JobConfig:
    verb: str
    type_name: str = "A1"
    ell: int | None = None
    fmt: str = "json"
    cache_dir: Path | None = None
    seed: int = acceptance.DEFAULT_SEED
    params: dict[str, Any] = field(default_factory=dict)

    @classmethod
    def from_args(cls, args: argparse.Namespace) -> "JobConfig":
        env = os.environ.get(CACHE_ENV)
        cache = env if env else args.cache_dir
        params = {
            k: v
            for k, v in vars(args).items()
            if k not in ("verb", "type", "ell", "format", "cache_dir", "seed") and v is not None
        }
        return cls(
            verb=args.verb,
            type_name=args.type,
            ell=args.ell,
            fmt=args.format,
            cache_dir=Path(cache) if cache else None,
            seed=args.seed,
            params=params,
        )

    def need_ell(self) -> int:
        if self.ell is None:
            raise UsageError(f"{self.verb} needs --ell")
        return self.ell

    def need(self, name: str, flag: str | None = None):
        if name not in self.params:
            raise UsageError(f"{self.verb} needs --{flag or name.replace('_', '-')}")
        return self.params[name]


@dataclass
class Output:
    """A JSON payload, an optional table projection and the exit status."""

    payload: Any
    headers: Sequence[str] = ()
    rows: Sequence[Sequence[Any]] = ()
    status: int = 0


# -- value encoding ----------------------------------------------------------
def cyclo_json(x: CyclotomicNumber) -> dict:
    return {"exact": x.to_json(), "display": x.display_float()}


def _cell(x: Any) -> str:
    if isinstance(x, (list, tuple)):
        return "(" + ",".join(map(str, x)) + ")"
    if isinstance(x, bool):
        return "true" if x else "false"
    return str(x)


def render(out: Output, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(out.payload, indent=2) + "\n"
    headers, rows = list(out.headers), [list(r) for r in out.rows]
    if not headers:
        headers = ["key", "value"]
        rows = [[k, json.dumps(v)] for k, v in out.payload.items()]
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(headers)
        for r in rows:
            w.writerow([_cell(x) for x in r])
        return buf.getvalue()
    lines = ["| " + " | ".join(headers) + " |", "|" + "|".join("---" for _ in headers) + "|"]
    for r in rows:
        lines.append("| " + " | ".join(_cell(x) for x in r) + " |")
    return "\n".join(lines) + "\n"


# -- argument parsing helpers --------------------------------------------------
def _weight(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(x) for x in text.split(",") if x.strip() != "")
    except ValueError:
        raise argparse.ArgumentTypeError(f"weights are comma-separated integers, got {text!r}")


def _krange(text: str) -> list[int]:
    lo, sep, hi = text.partition("..")
    try:
        if not sep:
            return [int(text)]
        a, b = int(lo), int(hi)
    except ValueError:
        raise argparse.ArgumentTypeError(f"--k takes an integer or a range a..b, got {text!r}")
    if a > b:
        raise argparse.ArgumentTypeError(f"empty range {text!r}")
    return list(range(a, b + 1))


def _ell(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"--ell takes an integer, got {text!r}")
    if v < 3:
        raise argparse.ArgumentTypeError("--ell must be at least 3")
    return v


def _nonneg(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}")
    if v < 0:
        raise argparse.ArgumentTypeError(f"expected a non-negative integer, got {v}")
    return v


def _read_json(path: str) -> Any:
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}")
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path} is not valid JSON: {exc}")


def _unvalidated(ell: int) -> dict:
    return {} if ell_is_validated(ell) else {"unvalidated_even_ell": True}


# -- cache ---------------------------------------------------------------------
def _atomic_write(path: Path, data: dict) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=path.name, suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            json.dump(data, fh)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def cached_fusion_table(type_name: str, ell: int, strict: bool, cache_dir: Path | None) -> tuple[FusionTable, str]:
    """The fusion table, served from cache_dir when a valid entry exists; returns (table, hit|miss|off)."""
    datum = root_datum(type_name, ell, strict)
    if cache_dir is None:
        return fusion_table(datum), "off"
    key = {"verb": "fusion-table", "type": type_name, "ell": ell, "strict_paper_singular": strict}
    path = cache_dir / f"fusion-table-{type_name}-{ell}{'-strict' if strict else ''}.json"
    try:
        with open(path, encoding="utf-8") as fh:
            entry = json.load(fh)
        if entry.get("schema") == CACHE_SCHEMA_VERSION and entry.get("key") == key:
            table = FusionTable.from_json(entry["payload"])
            if table.labels == tuple(datum.interior_labels()):
                return table, "hit"
    except (OSError, ValueError, KeyError, TypeError, AttributeError):
        pass  # missing, corrupted or stale: rebuild
    table = fusion_table(datum)
    try:
        _atomic_write(path, {"schema": CACHE_SCHEMA_VERSION, "key": key, "payload": table.to_json()})
    except OSError:
        pass  # the cache is advisory
    return table, "miss"


# -- verbs -------------------------------------------------------------------
def verb_alcove_list(cfg: JobConfig) -> Output:
    ell = cfg.need_ell()
    datum = root_datum(cfg.type_name, ell, cfg.params.get("strict_paper_singular", False))
    interior, walls = datum.alcove_weights()
    payload = {"type": cfg.type_name, "ell": ell, "interior": [list(w) for w in interior], "walls": [list(w) for w in walls]}
    payload.update(_unvalidated(ell))
    rows = [[w, "interior"] for w in interior] + [[w, "wall"] for w in walls]
    return Output(payload, ["weight", "position"], rows)


def verb_qdim(cfg: JobConfig) -> Output:
    ell = cfg.need_ell()
    lam = cfg.need("lambda")
    datum = root_datum(cfg.type_name, ell, cfg.params.get("strict_paper_singular", False))
    if len(lam) != datum.rank:
        raise UsageError(f"--lambda needs {datum.rank} coordinates for {cfg.type_name}")
    if not datum.is_dominant(lam):
        raise RootDataError(f"weight {lam} is not dominant")
    q = quantum_dimension(weyl_character(datum, lam))
    payload = {
        "type": cfg.type_name,
        "ell": ell,
        "lambda": list(lam),
        "qdim": cyclo_json(q),
        "is_zero": q.is_zero(),
        "position": datum.alcove_position(lam).tag.value,
    }
    payload.update(_unvalidated(ell))
    return Output(payload, ["lambda", "qdim_exact", "qdim_display", "is_zero"], [[lam, " ".join(q.to_json()), q.display_float(), q.is_zero()]])


def verb_fusion_table(cfg: JobConfig) -> Output:
    ell = cfg.need_ell()
    table, _ = cached_fusion_table(cfg.type_name, ell, cfg.params.get("strict_paper_singular", False), cfg.cache_dir)
    payload = table.to_json()
    payload.update(_unvalidated(ell))
    rows = []
    for i, a in enumerate(table.labels):
        for j, b in enumerate(table.labels):
            for k, n in enumerate(table.N[i][j]):
                if n:
                    rows.append([a, b, table.labels[k], n])
    return Output(payload, ["lambda", "mu", "nu", "N"], rows)


def _sl2_only(cfg: JobConfig) -> int:
    if cfg.type_name != "A1":
        raise UsageError(f"{cfg.verb} is defined for type A1 only")
    return cfg.need_ell()


def verb_tilting_decompose(cfg: JobConfig) -> Output:
    ell = _sl2_only(cfg)
    a, b = cfg.need("m"), cfg.need("n")
    parts = sl2.decompose_tilting_tensor(ell, a, b)
    labels = sorted(parts)
    payload = {
        "ell": ell,
        "factors": [a, b],
        "summands": {str(c): parts[c] for c in labels},
        "fusion_part": {str(c): parts[c] for c in labels if c <= ell - 2},
        "negligible_part": {str(c): parts[c] for c in labels if c > ell - 2},
    }
    return Output(payload, ["label", "multiplicity", "negligible"], [[c, parts[c], c > ell - 2] for c in labels])


def verb_resolve(cfg: JobConfig) -> Output:
    ell = _sl2_only(cfg)
    m, depth = cfg.need("m"), cfg.need("depth")
    labels = sl2.projective_resolution(ell, m, depth)
    payload = {"ell": ell, "m": m, "depth": depth, "terms": labels, "degrees": [-j for j in range(depth + 1)]}
    return Output(payload, ["degree", "tilting", "kernel_standard"], [[-j, x, x] for j, x in enumerate(labels)])


def verb_stable_hom(cfg: JobConfig) -> Output:
    ell = _sl2_only(cfg)
    m, n = cfg.need("m"), cfg.need("n")
    ks = cfg.params.get("k", list(range(-3, 4)))
    row = sl2.stable_hom_table(ell, m, n, ks)
    payload = {"ell": ell, "m": m, "n": n, "k": ks, "row": row}
    return Output(payload, ["k", "dim"], list(zip(ks, row)))


def verb_ncover(cfg: JobConfig) -> Output:
    ell = _sl2_only(cfg)
    simples, tilting = cfg.params.get("lambda"), cfg.params.get("n")
    if (simples is None) == (tilting is None):
        raise UsageError("ncover takes simple labels via --lambda or one tilting label via --n")
    cover = sl2.n_cover(ell, simples=simples) if simples is not None else sl2.n_cover(ell, tilting=tilting)
    labels = sorted(cover)
    payload = {"ell": ell, "input": {"simples": list(simples)} if simples is not None else {"tilting": tilting}}
    payload["cover"] = {str(c): cover[c] for c in labels}
    return Output(payload, ["label", "multiplicity"], [[c, cover[c]] for c in labels])


def verb_euler(cfg: JobConfig) -> Output:
    data = _read_json(cfg.need("input"))
    if not isinstance(data, dict):
        raise UsageError("the complex file must hold a JSON object")
    data = dict(data)
    if "ell" not in data:
        data["ell"] = cfg.need_ell()
    elif cfg.ell is not None and int(data["ell"]) != cfg.ell:
        raise UsageError(f"--ell {cfg.ell} disagrees with ell {data['ell']} in the file")
    try:
        X = sl2.EulerComplex.from_json(data)
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, DOMAIN_ERRORS):
            raise
        raise UsageError(f"malformed complex: {exc}")
    ell = X.ell
    targets = [cfg.params["n"]] if "n" in cfg.params else list(range(ell - 1, 4 * ell))
    rows = []
    for N in targets:
        rows.append([N, sl2.euler_a(X, N), sl2.euler_b(X, N)])
    payload = {"ell": ell, "kind": X.kind, "values": [{"N": N, "a": a, "b": b} for N, a, b in rows]}
    if X.kind == "bounded":
        payload["fusion_class"] = {str(k[0]): v for k, v in sl2.fusion_class_of_complex(X).coeffs.items()}
    return Output(payload, ["N", "a", "b"], rows)


def verb_vrbar(cfg: JobConfig) -> Output:
    ell = cfg.need_ell()
    R = uver.vr_bar_ring(ell)
    payload = R.to_json()
    rows = [[a, b, json.dumps(R.product(a, b), sort_keys=True)] for a in R.labels for b in R.labels]
    if "bound" in cfg.params:
        Q = uver.r_u_quotient(ell, cfg.params["bound"])
        payload["r_u"] = Q.to_json()
        payload["r_u_agrees"] = Q.labels == R.labels and Q.N == R.N
    return Output(payload, ["a", "b", "product"], rows)


_FAMILIES: dict[str, Callable[..., umod.ExplicitModule]] = {
    "standard": lambda ell, d: umod.build_standard(ell, d["n"]),
    "costandard": lambda ell, d: umod.build_costandard(ell, d["n"]),
    "simple": lambda ell, d: umod.build_simple(ell, d["n"]),
    "projective": lambda ell, d: udec.build_projective(ell, d["n"]),
    "c": lambda ell, d: umod.build_c_module(ell, d["n"], d.get("lambda", 1), d.get("mu", 0)),
    "e": lambda ell, d: umod.build_e_extension(ell, d["n"]),
}


def _scalar(ell: int, x: Any) -> CyclotomicNumber:
    if isinstance(x, list):
        return CyclotomicNumber.from_json(ell, [str(c) for c in x])
    return CyclotomicNumber.from_int(ell, Fraction(str(x)))


def module_from_description(ell: int, data: Any) -> umod.ExplicitModule:
    """Module description: a family reference or explicit E, F and K exponents."""
    if not isinstance(data, dict):
        raise UsageError("the module file must hold a JSON object")
    try:
        if "family" in data:
            fam = str(data["family"]).lower()
            if fam not in _FAMILIES:
                raise UsageError(f"unknown family {data['family']!r}; known: {', '.join(sorted(_FAMILIES))}")
            M = _FAMILIES[fam](ell, data)
            return umod.tau_dual(M) if data.get("dual") else M
        dim, K = int(data["dim"]), [int(w) for w in data["K_exponents"]]
        mats = []
        for tag in ("E", "F"):
            rows = [[_scalar(ell, x) for x in row] for row in data[tag]]
            if len(rows) != dim or any(len(r) != dim for r in rows):
                raise UsageError(f"{tag} must be {dim} x {dim}")
            mats.append(KMatrix.from_rows(ell, rows))
        if len(K) != dim:
            raise UsageError(f"K_exponents must have length {dim}")
    except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
        if isinstance(exc, DOMAIN_ERRORS):
            raise
        raise UsageError(f"malformed module description: {exc!r}")
    return umod.ExplicitModule(ell, K, mats[0], mats[1], "input")


def verb_negligible_check(cfg: JobConfig) -> Output:
    data = _read_json(cfg.need("input"))
    ell = int(data.get("ell", cfg.need_ell())) if isinstance(data, dict) else cfg.need_ell()
    M = module_from_description(ell, data)
    pieces = udec.split_module(M)
    summands = []
    for p in pieces:
        q = umod.quantum_dim_module(p.module)
        summands.append(
            {
                "dim": p.module.dim,
                "qdim": cyclo_json(q),
                "negligible": q.is_zero(),
                "local": p.local,
                "composition_factors": {str(k): v for k, v in sorted(umod.composition_factors(p.module).items())},
            }
        )
    verdict = all(s["negligible"] for s in summands)
    payload = {
        "ell": ell,
        "module": M.name,
        "dim": M.dim,
        "qdim": cyclo_json(umod.quantum_dim_module(M)),
        "negligible": verdict,
        "negligible_by_traces": udec.negligible_by_traces(M),
        "summands": summands,
    }
    rows = [[i, s["dim"], s["qdim"]["display"], s["negligible"], s["local"]] for i, s in enumerate(summands)]
    return Output(payload, ["summand", "dim", "qdim_display", "negligible", "local"], rows)


def verb_fuzz_coker(cfg: JobConfig) -> Output:
    ell = cfg.need_ell()
    if ell % 2 == 0:
        raise uver.UnsupportedEll(f"even ell={ell} is not supported for the small quantum group")
    trials = cfg.params.get("trials", 200)
    report = ufuzz.coker_negligible_fuzz(ell, trials, cfg.seed)
    payload = report.to_json()
    rows = [[c["trial"], c["source"], c["target"], c["cokernel_dim"]] for c in report.counterexamples]
    return Output(payload, ["trial", "source", "target", "cokernel_dim"], rows, status=0 if report.ok else 1)


def _cache_probe(cache_dir: Path) -> acceptance.CriterionResult:
    """A corrupted entry must be rebuilt and hits must equal misses."""
    path = cache_dir / "fusion-table-A1-5.json"
    fresh = fusion_table(root_datum("A1", 5)).to_json()
    cache_dir.mkdir(parents=True, exist_ok=True)
    path.write_text("{ corrupted", encoding="utf-8")
    first, how1 = cached_fusion_table("A1", 5, False, cache_dir)
    second, how2 = cached_fusion_table("A1", 5, False, cache_dir)
    ok = how1 == "miss" and how2 == "hit" and first.to_json() == second.to_json() == fresh
    return acceptance.CriterionResult("cache", "cache rebuild and transparency", ok, f"{how1} then {how2}", 0.0)


def verb_selftest(cfg: JobConfig) -> Output:
    quick = cfg.params.get("quick", False)
    # Progress lines carry timings, so they go to stderr and stdout stays reproducible.
    results = acceptance.run_suite(quick=quick, seed=cfg.seed, stream=sys.stderr)
    if cfg.cache_dir is not None:
        results.append(_cache_probe(cfg.cache_dir))
        print(results[-1].line(), file=sys.stderr)
    ok = all(r.passed for r in results)
    payload = {"quick": quick, "seed": cfg.seed, "passed": ok, "criteria": [r.to_json() for r in results]}
    return Output(
        payload,
        ["criterion", "title", "passed", "detail"],
        [[r.number, r.title, r.passed, r.detail] for r in results],
        status=0 if ok else 1,
    )


VERBS: dict[str, tuple[Callable[[JobConfig], Output], str]] = {
    "alcove-list": (verb_alcove_list, "dominant weights inside and on the walls of the principal alcove"),
    "qdim": (verb_qdim, "exact quantum dimension of the Weyl module of --lambda"),
    "fusion-table": (verb_fusion_table, "fusion-ring structure constants (cached on disk)"),
    "tilting-decompose": (verb_tilting_decompose, "T(--m) x T(--n) into indecomposable tiltings (A1)"),
    "resolve": (verb_resolve, "minimal negligible resolution of L(--m) to --depth (A1)"),
    "stable-hom": (verb_stable_hom, "stable Hom dimensions between L(--m) and L(--n) over --k (A1)"),
    "ncover": (verb_ncover, "negligible cover of simples --lambda or of the tilting --n (A1)"),
    "euler": (verb_euler, "Euler pairings a_N and b_N of a complex read from --input"),
    "vrbar": (verb_vrbar, "Verlinde-type quotient of K0(u); --bound adds the explicit-module check"),
    "negligible-check": (verb_negligible_check, "decompose a u_q(sl2)-module from --input and test negligibility"),
    "fuzz-coker": (verb_fuzz_coker, "random monomorphisms between negligible modules; cokernels must be negligible"),
    "selftest": (verb_selftest, "run the acceptance suite; --quick skips the fuzz criteria"),
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--type", default="A1", help="root system type such as A1, A2, B2 (default A1)")
    common.add_argument("--ell", type=_ell, help="order of the root of unity, at least 3")
    common.add_argument("--format", choices=("json", "csv", "md"), default="json")
    common.add_argument("--cache-dir", help=f"cache directory; the {CACHE_ENV} environment variable wins")
    common.add_argument("--seed", type=int, default=acceptance.DEFAULT_SEED)
    common.add_argument("--quick", action="store_true", default=None, help="selftest: skip the fuzz criteria")
    common.add_argument("--strict-paper-singular", action="store_true", default=None,
                        help="singular means divisible by ell rather than by ell_beta")
    common.add_argument("--m", type=int)
    common.add_argument("--n", type=int)
    common.add_argument("--k", type=_krange, help="an integer or a range a..b")
    common.add_argument("--lambda", dest="lambda", type=_weight, help="comma-separated weight coordinates")
    common.add_argument("--depth", type=_nonneg)
    common.add_argument("--trials", type=_nonneg)
    common.add_argument("--bound", type=_nonneg, help="vrbar: weight bound for the explicit-module quotient")
    common.add_argument("--input", help="JSON input file (euler, negligible-check)")

    parser = argparse.ArgumentParser(prog="fusionforge", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="verb", metavar="verb", required=True)
    for name, (_, help_text) in VERBS.items():
        sub.add_parser(name, parents=[common], help=help_text, description=help_text)
    return parser


def dispatch(cfg: JobConfig) -> tuple[int, str]:
    fn = VERBS[cfg.verb][0]
    out = fn(cfg)
    return out.status, render(out, cfg.fmt)


def _attach_negative_values(argv: Sequence[str]) -> list[str]:
    # "--k -3..3" would read as a new option; bind such values with "=".
    out: list[str] = []
    for tok in argv:
        if out and out[-1].startswith("--") and "=" not in out[-1] and len(tok) > 1 and tok[0] == "-" and tok[1].isdigit():
            out[-1] = f"{out[-1]}={tok}"
        else:
            out.append(tok)
    return out


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    argv = _attach_negative_values(sys.argv[1:] if argv is None else argv)
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    cfg = JobConfig.from_args(args)
    try:
        status, text = dispatch(cfg)
    except UsageError as exc:
        print(f"fusionforge {cfg.verb}: {exc}", file=sys.stderr)
        return 2
    except DOMAIN_ERRORS as exc:
        print(f"fusionforge {cfg.verb}: {exc}", file=sys.stderr)
        return 1
    sys.stdout.write(text)
    sys.stdout.flush()
    return status


if __name__ == "__main__":
    sys.exit(main())
