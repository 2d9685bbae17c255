"""Seeded batch runs: random algebra specs, classified and summarised.

Everything that reaches the report is a function of the config alone, so two
runs with the same seed print the same bytes no matter how many workers
were used.  Wall-clock timings are kept out of the report unless asked for.
"""
from __future__ import annotations

import json
import random
import time
import warnings
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .classify import TRIVIAL, UNKNOWN, triviality_report
from .derivations import TRIVIAL as K_TRIVIAL
from .derivations import fixed_subalgebra_estimate
from .poly import RingContext, TruncPoly, monomials_of_degree
from .weil import AlgebraSpec, DimensionCapExceeded, EffectiveWidthWarning, WeilAlgebra, dim_cap

RANDOM, MONOMIAL, HOMOGENEOUS = "random", "monomial", "homogeneous"
MODES = (RANDOM, MONOMIAL, HOMOGENEOUS)

CERTIFIED_YES = "CertifiedYes"
INCONCLUSIVE = "Inconclusive"
ERROR = "Error"

DEFAULT_NAMES = ("x", "y", "z", "u", "v", "w")


def _check_range(name, rng):
    lo, hi = rng
    if lo > hi:
        raise ValueError(f"{name} range {lo}..{hi} is empty")


@dataclass(frozen=True)
class ScanConfig:
    seed: int = 0
    k: tuple[int, int] = (2, 2)
    r: tuple[int, int] = (4, 4)
    gens: tuple[int, int] = (1, 3)
    terms: tuple[int, int] = (1, 3)
    coefficients: tuple[int, ...] = (-2, -1, 1, 2)
    count: int = 10
    weight_bound: int | None = None
    dim_cap: int | None = None
    mode: str = RANDOM
    min_degree: int = 2

    def __post_init__(self):
        if not 0 <= self.seed < 2 ** 64:
            raise ValueError("seed must be a 64-bit unsigned integer")
        for name in ("k", "r", "gens", "terms"):
            _check_range(name, getattr(self, name))
        if self.count < 1:
            raise ValueError("count must be >= 1")
        if not 1 <= self.k[0] or self.k[1] > len(DEFAULT_NAMES):
            raise ValueError(f"k must lie in 1..{len(DEFAULT_NAMES)}")
        if self.gens[0] < 1 or self.terms[0] < 1:
            raise ValueError("generator and term counts must be >= 1")
        if not self.coefficients or 0 in self.coefficients:
            raise ValueError("coefficient pool must be non-empty and exclude 0")
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {', '.join(MODES)}")
        if not 1 <= self.min_degree <= self.r[0]:
            raise ValueError("min degree must lie in 1..r")

    @property
    def cap(self) -> int:
        return dim_cap() if self.dim_cap is None else self.dim_cap

    def to_dict(self) -> dict:
        return {
            "seed": self.seed,
            "k": list(self.k),
            "r": list(self.r),
            "gens": list(self.gens),
            "terms": list(self.terms),
            "coefficients": list(self.coefficients),
            "count": self.count,
            "weight_bound": self.weight_bound,
            "dim_cap": self.cap,
            "mode": self.mode,
            "min_degree": self.min_degree,
        }


def _random_generator(rng: random.Random, cfg: ScanConfig, k: int, r: int) -> dict:
    if cfg.mode == MONOMIAL:
        d = rng.randint(cfg.min_degree, r)
        return {rng.choice(monomials_of_degree(k, d)): 1}
    if cfg.mode == HOMOGENEOUS:
        pool = monomials_of_degree(k, rng.randint(cfg.min_degree, r))
    else:
        pool = [m for d in range(cfg.min_degree, r + 1) for m in monomials_of_degree(k, d)]
    t = min(rng.randint(*cfg.terms), len(pool))
    return {m: rng.choice(cfg.coefficients) for m in rng.sample(pool, t)}


def _build_quiet(spec: AlgebraSpec, cap: int | None = None) -> WeilAlgebra:
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", EffectiveWidthWarning)
        return WeilAlgebra(spec, cap)


@dataclass
class Instances:
    specs: list[AlgebraSpec]
    skipped: int = 0


def generate_instances(cfg: ScanConfig) -> Instances:
    """``cfg.count`` random specs; over-cap ones are skipped and counted."""
    rng = random.Random(cfg.seed)
    out = Instances([])
    attempts = 0
    while len(out.specs) < cfg.count:
        attempts += 1
        if attempts > 100 * cfg.count:
            break
        k = rng.randint(*cfg.k)
        r = rng.randint(*cfg.r)
        ctx = RingContext(DEFAULT_NAMES[:k], r)
        gens = tuple(TruncPoly(ctx, _random_generator(rng, cfg, k, r)) for _ in range(rng.randint(*cfg.gens)))
        spec = AlgebraSpec(f"scan-{cfg.seed}-{len(out.specs)}", ctx, gens)
        try:
            _build_quiet(spec, cfg.cap)
        except DimensionCapExceeded:
            out.skipped += 1
            continue
        out.specs.append(spec)
    return out


@dataclass
class ScanRecord:
    index: int
    spec: dict
    dim: int | None = None
    order: int | None = None
    width: int | None = None
    verdict: str = ERROR
    certificates: list[str] = field(default_factory=list)
    kdim: int | None = None
    status: str | None = None
    ma_dim: int | None = None
    conjecture: str | None = None
    ms: float | None = None
    error: str | None = None

    @property
    def overshoot(self) -> bool:
        """A certificate proves SA trivial but K' is bigger than span{1}."""
        return bool(self.certificates) and self.kdim is not None and self.kdim > 1

    def to_dict(self, timing: bool = False) -> dict:
        d = {
            "index": self.index,
            "spec": self.spec,
            "dim": self.dim,
            "order": self.order,
            "width": self.width,
            "verdict": self.verdict,
            "certificates": self.certificates,
            "kprime_dim": self.kdim,
            "status": self.status,
            "ma_dim": self.ma_dim,
            "conjecture": self.conjecture,
            "overshoot": self.overshoot,
        }
        if self.error is not None:
            d["error"] = self.error
        if timing:
            d["ms"] = self.ms
        return d


def analyse(index: int, spec: AlgebraSpec, weight_bound: int | None = None, cap: int | None = None) -> ScanRecord:
    """Run the full pipeline on one spec; failures land in ``error``."""
    rec = ScanRecord(index, spec.to_dict())
    t0 = time.perf_counter()
    try:
        A = _build_quiet(spec, cap)
        rec.dim, rec.order, rec.width = A.dim, A.order, A.width
        est = fixed_subalgebra_estimate(A)
        rep = triviality_report(A, weight_bound, estimate=est)
        rec.verdict = rep.verdict
        rec.certificates = rep.granted
        rec.kdim, rec.status = est.refined.dim, est.status
        ma = A.ma_subalgebra
        rec.ma_dim = ma.dim
        rec.conjecture = CERTIFIED_YES if est.refined.is_subspace_of(ma) else INCONCLUSIVE
    except Exception as exc:  # recorded, never fatal
        rec.verdict = ERROR
        rec.error = f"{type(exc).__name__}: {exc}"
    rec.ms = (time.perf_counter() - t0) * 1000
    return rec


def _analyse_dict(args):
    index, spec_dict, bound, cap = args
    return analyse(index, AlgebraSpec.from_dict(spec_dict), bound, cap)


@dataclass
class ScanResult:
    config: ScanConfig | None
    records: list[ScanRecord]
    skipped: int = 0

    @property
    def summary(self) -> dict:
        verdicts = Counter(r.verdict for r in self.records)
        conj = Counter(r.conjecture for r in self.records if r.conjecture)
        return {
            "instances": len(self.records),
            "skipped_over_cap": self.skipped,
            "verdicts": {v: verdicts.get(v, 0) for v in (TRIVIAL, UNKNOWN, ERROR)},
            "kprime_trivial": sum(r.status == K_TRIVIAL for r in self.records),
            "conjecture": {c: conj.get(c, 0) for c in (CERTIFIED_YES, INCONCLUSIVE)},
            "overshoot": sum(r.overshoot for r in self.records),
        }

    def to_dict(self, timing: bool = False) -> dict:
        return {
            "config": self.config.to_dict() if self.config else None,
            "records": [r.to_dict(timing) for r in self.records],
            "summary": self.summary,
        }

    def to_json(self, timing: bool = False) -> str:
        return json.dumps(self.to_dict(timing), indent=2) + "\n"

    def render(self, timing: bool = False) -> str:
        lines = []
        if self.config:
            c = self.config
            lines.append(f"# weilab scan seed={c.seed} k={c.k[0]}..{c.k[1]} r={c.r[0]}..{c.r[1]} "
                         f"count={c.count} mode={c.mode}")
        cols = ["index", "dim", "ord", "wid", "verdict", "certs", "dimK'", "status", "dimMA", "conjecture"]
        if timing:
            cols.append("ms")
        rows = []
        for r in self.records:
            row = [r.index, r.dim, r.order, r.width, r.verdict, ",".join(r.certificates) or "-",
                   r.kdim, r.status, r.ma_dim, r.conjecture]
            if timing:
                row.append(f"{r.ms:.1f}")
            rows.append(["-" if v is None else str(v) for v in row])
        widths = [max(len(h), *(len(row[i]) for row in rows)) if rows else len(h) for i, h in enumerate(cols)]
        lines.append("  ".join(h.ljust(w) for h, w in zip(cols, widths)).rstrip())
        for row in rows:
            lines.append("  ".join(v.ljust(w) for v, w in zip(row, widths)).rstrip())
        lines.append("")
        lines.append("specs:")
        for r in self.records:
            gens = ", ".join(r.spec["generators"])
            lines.append(f"  {r.index}: vars {' '.join(r.spec['vars'])}; order {r.spec['order']}; gens {gens}")
            if r.error:
                lines.append(f"     error: {r.error}")
        s = self.summary
        lines.append("")
        lines.append(f"instances: {s['instances']} (skipped over cap: {s['skipped_over_cap']})")
        lines.append("verdicts: " + ", ".join(f"{k}={v}" for k, v in s["verdicts"].items()))
        lines.append(f"K' trivial: {s['kprime_trivial']}")
        lines.append("conjecture: " + ", ".join(f"{k}={v}" for k, v in s["conjecture"].items()))
        lines.append(f"upper bound exceeds trivial SA: {s['overshoot']}")
        return "\n".join(lines) + "\n"


def run_specs(specs: Sequence[AlgebraSpec], weight_bound: int | None = None, cap: int | None = None,
              jobs: int = 1) -> list[ScanRecord]:
    """Analyse ``specs`` in order; with ``jobs > 1`` the work is spread over processes."""
    if jobs <= 1:
        return [analyse(i, s, weight_bound, cap) for i, s in enumerate(specs)]
    tasks = [(i, s.to_dict(), weight_bound, cap) for i, s in enumerate(specs)]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(_analyse_dict, tasks))


def scan_run(cfg: ScanConfig, jobs: int = 1, extra: Iterable[AlgebraSpec] = ()) -> ScanResult:
    """Generate, analyse and summarise; ``extra`` specs are appended after the random ones."""
    inst = generate_instances(cfg)
    specs = inst.specs + list(extra)
    return ScanResult(cfg, run_specs(specs, cfg.weight_bound, cfg.cap, jobs), inst.skipped)
