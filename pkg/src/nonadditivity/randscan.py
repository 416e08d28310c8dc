"""Random qubit channels in Bloch normal form and the amplification test.

For a sampled map ``R`` the family ``R_x = (1 - x) id + x R`` interpolates
from the noiseless wire to ``R``. At the hashing point ``x*`` of that family
the single-letter value of ``R_x`` vanishes, so any positive ansatz value of
``N_{1/2} (x) R_{x*}`` above ``Q1(N_{1/2})`` is strict superadditivity with
a zero-coherent-information partner.
"""

from __future__ import annotations

import json
import os
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from scipy.spatial.transform import Rotation

from .channels import BlochRep, qubit_from_bloch
from .coherent import q1_general
from .errors import NonMonotoneWarning, SamplingExhausted
from .witness import WITNESS_RESOLUTION, delta_witness_ns

SAMPLE_CAP = 10_000
SAMPLE_CP_TOL = 1e-9
Q1_ZERO_TOL = 1e-6
HASHING_XTOL = 1e-4
INTERVAL_XTOL = 1e-3
INTERVAL_STEP = 0.05
WORKERS_ENV = "NONADDITIVITY_WORKERS"


def sample_normal_form(rng: np.random.Generator, general: bool = False,
                       cap: int = SAMPLE_CAP) -> BlochRep:
    """Uniform draw of ``t`` and the distortion from ``[-1, 1]``, kept once the Choi operator is PSD.

    ``general=True`` dresses the accepted normal form with random rotations
    ``t -> O1 t``, ``T -> O1 T O2``, i.e. unitaries before and after the map,
    which preserve complete positivity.
    """
    for _ in range(cap):
        rep = BlochRep.normal_form(rng.uniform(-1.0, 1.0, 3), rng.uniform(-1.0, 1.0, 3))
        if rep.min_choi_eigenvalue() < -SAMPLE_CP_TOL:
            continue
        if general:
            o1, o2 = Rotation.random(2, random_state=rng).as_matrix()
            rep = BlochRep(o1 @ rep.t, o1 @ rep.T @ o2)
        return rep
    raise SamplingExhausted(f"no completely positive sample in {cap} draws")


def _q1_family(rep: BlochRep, x: float, restarts: int, rng_seed: int) -> float:
    return q1_general(qubit_from_bloch(rep, x), restarts=restarts, rng_seed=rng_seed).value


def hashing_point_family(rep: BlochRep, tol: float = Q1_ZERO_TOL, xtol: float = HASHING_XTOL,
                         restarts: int = 8, rng_seed: int = 0) -> float:
    """Smallest ``x`` at which ``Q1(R_x)`` drops to ``tol`` or below; 1 if it never does.

    Bisection assumes ``Q1(R_x)`` decreases in ``x``. A check grid above the
    result catches revivals, in which case a 101-point scan is used instead
    and :class:`NonMonotoneWarning` is emitted.
    """
    q = lambda x: _q1_family(rep, x, restarts, rng_seed)  # noqa: E731
    if q(1.0) > tol:
        return 1.0
    lo, hi = 0.0, 1.0
    if q(lo) <= tol:
        return 0.0
    while hi - lo > xtol:
        mid = 0.5 * (lo + hi)
        if q(mid) > tol:
            lo = mid
        else:
            hi = mid
    x_star = hi
    check = np.linspace(x_star, 1.0, 6)[1:-1]
    if all(q(x) <= tol for x in check):
        return float(x_star)
    warnings.warn("Q1 of the interpolating family is not monotone; using a grid scan",
                  NonMonotoneWarning, stacklevel=2)
    for x in np.linspace(0.0, 1.0, 101):
        if q(x) <= tol:
            return float(x)
    return 1.0


@dataclass(frozen=True)
class ScanRecord:
    rep: BlochRep
    x_star: float
    witness_at_xstar: float
    superadd_interval: tuple | None
    seed: int | None
    components: dict = field(default_factory=dict, compare=False)

    def __post_init__(self) -> None:
        iv = self.superadd_interval
        if iv is not None and iv[0] > iv[1]:
            raise ValueError(f"interval endpoints out of order: {iv}")

    def to_dict(self) -> dict:
        return {"rep": self.rep.to_dict(), "x_star": self.x_star,
                "witness_at_xstar": self.witness_at_xstar,
                "superadd_interval": list(self.superadd_interval) if self.superadd_interval else None,
                "seed": self.seed, "components": self.components}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_dict(cls, data: dict) -> "ScanRecord":
        iv = data.get("superadd_interval")
        return cls(BlochRep.from_dict(data["rep"]), data["x_star"], data["witness_at_xstar"],
                   tuple(iv) if iv else None, data.get("seed"), data.get("components", {}))


def family_witness_value(rep: BlochRep, x: float, restarts: int = 8, rng_seed: int = 0):
    q1_r = _q1_family(rep, x, restarts, rng_seed)
    return delta_witness_ns(0.5, qubit_from_bloch(rep, x), q1_r)


def _edge(f, inside: float, step: float, xtol: float, threshold: float) -> float:
    """Walk from ``inside`` in steps of ``step`` until ``f`` loses positivity, then bisect."""
    x = inside
    while True:
        nxt = min(max(x + step, 0.0), 1.0)
        if f(nxt) <= threshold:
            break
        if nxt in (0.0, 1.0):
            return nxt
        x = nxt
    a, b = x, nxt
    while abs(b - a) > xtol:
        mid = 0.5 * (a + b)
        if f(mid) > threshold:
            a = mid
        else:
            b = mid
    return 0.5 * (a + b)


def amplification_scan(rep: BlochRep, seed: int | None = None, interval: bool = True,
                       restarts: int = 8, threshold: float = WITNESS_RESOLUTION,
                       xtol: float = INTERVAL_XTOL) -> ScanRecord:
    x_star = hashing_point_family(rep, restarts=restarts)
    rep_star = family_witness_value(rep, x_star, restarts)
    w = rep_star.witness_value
    iv = None
    if interval and w > threshold:
        f = lambda x: family_witness_value(rep, x, restarts).witness_value  # noqa: E731
        iv = (_edge(f, x_star, -INTERVAL_STEP, xtol, threshold),
              _edge(f, x_star, INTERVAL_STEP, xtol, threshold))
    comps = {k: v for k, v in rep_star.components.items() if k != "evaluations"}
    return ScanRecord(rep, float(x_star), float(w), iv, seed, comps)


def scan_seed(seed: int, interval: bool = False, restarts: int = 8, general: bool = False) -> ScanRecord:
    """Sample a channel from ``seed`` and run the amplification test on it."""
    rep = sample_normal_form(np.random.default_rng(seed), general=general)
    return amplification_scan(rep, seed=int(seed), interval=interval, restarts=restarts)


def batch_seeds(seed: int, count: int) -> list[int]:
    return [int(v) for v in np.random.SeedSequence(seed).generate_state(count, dtype=np.uint32)]


def worker_count() -> int:
    env = os.environ.get(WORKERS_ENV)
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


def run_batch(count: int, seed: int, interval: bool = False, restarts: int = 8,
              general: bool = False, workers: int | None = None) -> list[ScanRecord]:
    """Independent scans on child seeds of ``seed``, returned in seed order."""
    seeds = batch_seeds(seed, count)
    workers = worker_count() if workers is None else workers
    args = [(s, interval, restarts, general) for s in seeds]
    if workers <= 1 or count <= 1:
        return [scan_seed(*a) for a in args]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(scan_seed, *zip(*args)))


def batch_stats(records) -> dict:
    n = len(records)
    pos = sum(r.witness_at_xstar > WITNESS_RESOLUTION for r in records)
    return {"count": n, "positive": pos, "fraction": pos / n if n else 0.0,
            "with_interval": sum(r.superadd_interval is not None for r in records)}


def write_jsonl(records, path, header: dict | None = None) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        if header is not None:
            fh.write(json.dumps({"provenance": header}, sort_keys=True) + "\n")
        for r in records:
            fh.write(r.to_json() + "\n")


def read_jsonl(path) -> list[ScanRecord]:
    out = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            data = json.loads(line)
            if "provenance" in data:
                continue
            out.append(ScanRecord.from_dict(data))
    return out
