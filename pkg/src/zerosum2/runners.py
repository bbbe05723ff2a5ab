"""Command implementations shared by the CLI and the HTTP service.

Each runner validates parameters, drives the corresponding module, and
returns a Certificate.  Guard violations raise ValueError; everything
else in the certificate is a function of the verdict and evidence only.
"""

from __future__ import annotations

import os
from typing import Any, Optional

from .certificates import Certificate, StopWatch, make_certificate
from .groups import Modulus
from .lemmas import CHECKS, LemmaReport, davenport_constant
from .propb import SearchConfig, verify_property_b, verify_triple_mode
from .twomult import verify_two_mult

CHECKPOINT_DIR_ENV = "ZEROSUM2_CHECKPOINT_DIR"


def _resolve_checkpoint(path: Optional[str]) -> Optional[str]:
    if path is None:
        return None
    base = os.environ.get(CHECKPOINT_DIR_ENV)
    if base and not os.path.isabs(path):
        return os.path.join(base, path)
    return path


def _counterexample_evidence(result) -> dict[str, Any]:
    ev: dict[str, Any] = {
        "shards_total": result.shards_total,
        "shards_done": result.shards_done,
        "nodes": result.nodes,
    }
    if result.counterexample is not None:
        ce = result.counterexample
        ev["counterexample"] = {
            "multiset": [[e.x, e.y, k] for e, k in ce.multiset.items],
            "profile": list(ce.profile),
            "n": ce.n,
        }
    return ev


def run_propb(
    n: int,
    max_mult: Optional[int] = None,
    workers: int = 1,
    checkpoint: Optional[str] = None,
    resume: bool = False,
    engine: str = "auto",
) -> Certificate:
    if not 2 <= n <= 64:
        raise ValueError(f"n must be in [2, 64], got {n}")
    if max_mult is not None and not 0 <= max_mult <= n - 1:
        raise ValueError(f"max_mult must be in [0, {n - 1}]")
    if workers < 1:
        raise ValueError("workers must be >= 1")
    watch = StopWatch()
    cfg = SearchConfig(
        n=Modulus.of(n),
        max_mult=max_mult,
        workers=workers,
        checkpoint_path=_resolve_checkpoint(checkpoint),
        resume=resume,
        engine=engine,
    )
    result = verify_property_b(cfg)
    params = {
        "n": n,
        "max_mult": cfg.effective_max_mult(),
        "workers": workers,
        "checkpoint": cfg.checkpoint_path,
        "resume": resume,
        "mode": "propb",
    }
    return make_certificate("propb", params, result.verdict, _counterexample_evidence(result), watch)


def run_triple(
    p: int,
    m1_cap: Optional[int] = None,
    workers: int = 1,
) -> Certificate:
    if not 5 <= p <= 64:
        raise ValueError(f"p must be in [5, 64], got {p}")
    mod = Modulus.of(p)
    if not mod.is_prime:
        raise ValueError(f"p must be prime, got {p}")
    watch = StopWatch()
    result = verify_triple_mode(mod, m1_cap=m1_cap, workers=workers)
    params = {
        "p": p,
        "m1_cap": m1_cap if m1_cap is not None else p - 4,
        "min_top3_sum": 2 * p - 5,
        "workers": workers,
        "mode": "triple",
    }
    return make_certificate("triple", params, result.verdict, _counterexample_evidence(result), watch)


def run_twomult(
    max_k: int = 14,
    k1: Optional[int] = None,
    k2: Optional[int] = None,
    workers: int = 1,
) -> Certificate:
    watch = StopWatch()
    if (k1 is None) != (k2 is None):
        raise ValueError("k1 and k2 must be given together")
    if k1 is not None and k2 is not None:
        if k1 < 3 or k2 < 3:
            raise ValueError("k1 and k2 must be >= 3")
        result = verify_two_mult(pairs=[(k1, k2)], workers=workers)
        params: dict[str, Any] = {"k1": k1, "k2": k2, "workers": workers}
    else:
        if not 6 <= max_k <= 20:
            raise ValueError(f"max_k must be in [6, 20], got {max_k}")
        result = verify_two_mult(max_k=max_k, workers=workers)
        params = {"max_k": max_k, "workers": workers}
    evidence = {
        "pairs": [
            {
                "k1": r.k1,
                "k2": r.k2,
                "window": list(r.window.candidates),
                "region_size": r.region_size,
                "subsets_enumerated": r.subsets_enumerated,
                "nodes": r.nodes,
                "survivors": [
                    {"a_prime": [list(q) for q in aprime], "primes": list(ps)}
                    for aprime, ps in r.survivors
                ],
                "verified": r.verified,
                "wall_seconds": round(r.wall_time, 6),
            }
            for r in result.pairs
        ],
    }
    return make_certificate("twomult", params, result.verdict, evidence, watch)


def _lemma_evidence(report: LemmaReport) -> dict[str, Any]:
    return {
        "lemma": report.lemma,
        "cases": report.cases,
        "violations": report.violations[:16],
        "violation_count": len(report.violations),
        "extremal": report.extremal,
        "wall_seconds": round(report.wall_time, 6),
    }


def run_lemma(name: str, **params: Any) -> Certificate:
    if name not in CHECKS:
        raise ValueError(f"unknown lemma {name!r}; known: {sorted(CHECKS)}")
    watch = StopWatch()
    report = CHECKS[name](**params)
    verdict = "no-violations" if report.ok else "violations"
    return make_certificate(
        "lemma", {"name": name, **report.params}, verdict, _lemma_evidence(report), watch
    )


def run_davenport(n: int) -> Certificate:
    if not 2 <= n <= 5:
        raise ValueError(f"n must be in [2, 5], got {n}")
    watch = StopWatch()
    value = davenport_constant(n)
    return make_certificate(
        "davenport",
        {"n": n},
        "computed",
        {"davenport_constant": value, "two_n_minus_one": 2 * n - 1},
        watch,
    )


RUNNERS = {
    "propb": run_propb,
    "triple": run_triple,
    "twomult": run_twomult,
    "lemma": run_lemma,
    "davenport": run_davenport,
}
