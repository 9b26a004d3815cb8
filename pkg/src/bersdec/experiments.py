"""Seeded random surfaces and bound-witness sweeps.

Every random draw goes through numpy's PCG64 generator. Trial ``t`` of a sweep
with seed ``s`` uses ``PCG64(s ^ t)``, so results do not depend on scheduling.
"""
from __future__ import annotations

import csv
import io
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import constructions
from .curves import PantsDecomposition, standard_curve
from .decompose import bers_decompose
from .errors import BersError, ConfigError
from .surface import CONE, CUSP, PunctureDecoration, Surface, build_surface

SWEEP_COLUMNS = ("seed", "n", "kind", "max_len", "bound", "ratio", "certified_split_all", "time_ms", "error")


def rng_for(seed: int, trial: int = 0) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(int(seed) ^ int(trial)))


def random_triangulation(n: int, rng: np.random.Generator) -> list[tuple[int, int]]:
    """A random maximal laminar family of ranges, built by recursive polygon splits."""
    out = []

    def split(a: int, b: int):
        if b - a < 2:
            return
        m = int(rng.integers(a + 1, b))
        for p, q in ((a, m), (m, b)):
            if q - p >= 2 and not (p == 0 and q == n - 1):
                out.append((p + 1, q))
            split(p, q)

    split(0, n - 1)
    return sorted(out)


def puncture_list(n: int, kind: str, rng: np.random.Generator, low: float, high: float):
    if kind == "cusp":
        return [CUSP] * n
    if kind == "cone_pi":
        return [CONE] * n
    if kind == "boundary":
        return [PunctureDecoration("boundary", float(rng.uniform(low, high))) for _ in range(n)]
    raise ConfigError(f"unknown kind {kind!r}")


def random_surface(n: int, rng: np.random.Generator, kind: str = "cusp",
                   low: float = 0.5, high: float = 2.5) -> Surface:
    """Random triangulation reference, lengths U[low, high], twists U[-l/2, l/2]."""
    if n < 4:
        raise ConfigError(f"n = {n}: a sphere needs at least 4 punctures to have a decomposition")
    ref = random_triangulation(n, rng)
    fn = []
    for _ in ref:
        ell = float(rng.uniform(low, high))
        fn.append((ell, float(rng.uniform(-ell / 2, ell / 2))))
    punct = puncture_list(n, kind, rng, low, high)
    return build_surface(punct, ref, fn)


def random_laminar_decomposition(n: int, rng: np.random.Generator, low: float = 0.5,
                                 high: float = 2.5) -> PantsDecomposition:
    ref = random_triangulation(n, rng)
    curves = tuple(standard_curve(i, j, n) for i, j in ref)
    return PantsDecomposition(curves, tuple(float(x) for x in rng.uniform(low, high, len(ref))))


@dataclass(frozen=True)
class ExperimentConfig:
    seed: int = 7
    n_values: tuple[int, ...] = tuple(range(5, 13))
    kind: str = "cusp"
    low: float = 0.5
    high: float = 2.5
    K: int = 2
    base_n: int = 5
    trials: int = 20
    timing: bool = False

    def __post_init__(self):
        if not self.n_values:
            raise ConfigError("empty n range")
        if min(self.n_values) < 4:
            raise ConfigError("n must be at least 4")
        if not (0 < self.low <= self.high):
            raise ConfigError("need 0 < len-low <= len-high")
        if self.trials < 1:
            raise ConfigError("trials must be >= 1")
        if self.K < 0:
            raise ConfigError("twist depth must be >= 0")
        if not 4 <= self.base_n <= 9:
            raise ConfigError("base-n must lie in [4, 9]")
        if self.kind not in ("cusp", "cone_pi", "boundary"):
            raise ConfigError(f"unknown kind {self.kind!r}")


def run_trial(cfg: ExperimentConfig, n: int, trial: int) -> dict:
    row = {"seed": cfg.seed ^ trial, "n": n, "kind": cfg.kind, "max_len": "", "bound": "",
           "ratio": "", "certified_split_all": "", "time_ms": "", "error": ""}
    t0 = time.perf_counter()
    try:
        s = random_surface(n, rng_for(cfg.seed, trial), cfg.kind, cfg.low, cfg.high)
        P, cert = bers_decompose(s, cfg.base_n, cfg.K)
        row.update(max_len=f"{cert.max_length:.10g}", bound=f"{cert.bound:.10g}",
                   ratio=f"{cert.max_length / cert.bound:.10g}",
                   certified_split_all=str(all(e["certified"] for e in cert.trace)).lower())
    except BersError as exc:
        row["error"] = f"{type(exc).__name__}: {exc}"
    if cfg.timing:
        row["time_ms"] = f"{1000 * (time.perf_counter() - t0):.1f}"
    return row


def _run_packed(args):
    return run_trial(*args)


def workers() -> int:
    try:
        return max(1, int(os.environ.get("BERSDEC_THREADS", "1")))
    except ValueError:
        raise ConfigError("BERSDEC_THREADS must be an integer")


def sweep(cfg: ExperimentConfig) -> list[dict]:
    """One row per trial plus a summary row; trial indices run across all n."""
    jobs = [(cfg, n, k * cfg.trials + t) for k, n in enumerate(cfg.n_values) for t in range(cfg.trials)]
    w = workers()
    if w == 1:
        rows = [run_trial(*j) for j in jobs]
    else:
        with ProcessPoolExecutor(max_workers=w) as pool:
            rows = list(pool.map(_run_packed, jobs))
    ok = [r for r in rows if not r["error"]]
    summary = {"seed": "summary", "n": len(rows), "kind": cfg.kind,
               "max_len": max((r["max_len"] for r in ok), key=float, default=""),
               "bound": "", "ratio": max((r["ratio"] for r in ok), key=float, default=""),
               "certified_split_all": str(all(r["certified_split_all"] == "true" for r in ok)).lower(),
               "time_ms": f"{sum(float(r['time_ms']) for r in rows):.1f}" if cfg.timing else "",
               "error": f"{len(rows) - len(ok)} failed" if len(ok) < len(rows) else ""}
    return rows + [summary]


def rows_to_csv(rows: list[dict], columns=SWEEP_COLUMNS) -> str:
    buf = io.StringIO()
    wr = csv.DictWriter(buf, fieldnames=list(columns), lineterminator="\n")
    wr.writeheader()
    wr.writerows(rows)
    return buf.getvalue()


def random_lift(g: int, seed: int, geometric: bool = False, K: int = 2):
    """Lift a random decomposition of the (2g+2)-cone sphere; geometric runs decompose a random surface."""
    rng = rng_for(seed)
    n = 2 * g + 2
    if geometric:
        s = random_surface(n, rng, "cone_pi")
        P, _ = bers_decompose(s, 5, K)
        return constructions.hyperelliptic_lift(g, P, s)
    return constructions.hyperelliptic_lift(g, random_laminar_decomposition(n, rng))
