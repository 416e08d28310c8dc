"""Superadditivity witnesses, log-singularity thresholds and region sweeps.

Two witness families live here:

* ``delta_witness_ns``: ansatz coherent information of ``N_s (x) K`` minus
  the single-letter values of both factors. Positive values certify strict
  superadditivity of coherent information.
* ``mu``: the closed-form coherent information of ``M_{d+1} (x) E_{lam,d}``
  minus an upper bound on the sum of the two quantum capacities. Positive
  values certify superadditivity of the capacity itself.

Region sweeps scan a noise parameter, locate sign changes by bisection and
return :class:`RegionCurve` objects that serialize to CSV.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import asdict, dataclass, field
from typing import Callable, Sequence

import numpy as np

from .channels import (IsometryChannel, amplitude_damping, depolarizing, erasure_channel,
                       platypus_channel, tensor_product)
from .coherent import (ansatz_rho, coherent_information, delta_star_ansatz,
                       hashing_point_depolarizing, md_erasure_delta_closed,
                       q1_amplitude_damping, q1_depolarizing, q1_erasure, q1_md_closed_form,
                       q1_platypus)
from .errors import DomainError, InvalidParams
from .numkernel import binary_entropy, entropy_from_spectrum, eta
from .optimize import ScalarMax, bisect_sign, golden_section_max, grid_then_golden

# witness values at or below this many bits count as "not positive"
WITNESS_RESOLUTION = 1e-5
BISECT_TOL = 1e-4
COARSE_POINTS = 51
RECONSTRUCT_TOL = 1e-12


@dataclass(frozen=True)
class WitnessReport:
    witness_value: float
    components: dict
    params: dict

    @classmethod
    def from_terms(cls, total: float, subtracted: dict, params: dict,
                   total_name: str = "delta_star", extra: dict | None = None) -> "WitnessReport":
        value = total - sum(subtracted.values())
        comps = {total_name: total, **subtracted}
        if extra:
            comps.update(extra)
        return cls(float(value), comps, dict(params))

    def reconstruct(self) -> float:
        c = self.components
        total_name = "delta_star" if "delta_star" in c else "delta"
        subtracted = [v for k, v in c.items() if k.startswith("q1_") or k == "u_bound"]
        return c[total_name] - sum(subtracted)

    def to_dict(self) -> dict:
        return asdict(self)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)


@dataclass(frozen=True)
class RegionRow:
    param: float
    x_min: float | None
    x_max: float | None
    method_min: str
    method_max: str
    x_max_numeric: float | None = None
    peak: float | None = None

    @property
    def empty(self) -> bool:
        return self.x_min is None


@dataclass
class RegionCurve:
    sweep: str
    family: str
    rows: list = field(default_factory=list)

    def endpoints(self, param: float) -> RegionRow:
        for r in self.rows:
            if math.isclose(r.param, param, rel_tol=0, abs_tol=1e-12):
                return r
        raise KeyError(param)

    def to_csv(self, columns: Sequence[str] = ("x_min", "x_max", "method_min", "method_max"),
               header: dict | None = None) -> str:
        buf = io.StringIO()
        if header is not None:
            buf.write("# " + json.dumps(header, sort_keys=True) + "\n")
        w = csv.writer(buf, lineterminator="\n")
        w.writerow([self.sweep, *columns])
        for r in self.rows:
            w.writerow([_fmt(r.param)] + [_fmt(getattr(r, c)) for c in columns])
        return buf.getvalue()


def _fmt(v) -> str:
    if v is None:
        return "empty"
    if isinstance(v, float):
        return repr(round(v, 10))
    return str(v)


# ---------------------------------------------------------------------------
# N_s (x) K witnesses

def _u_opt(s: float) -> float:
    return q1_platypus(float(s)).argmax[0]


def delta_witness_ns(s: float, K: IsometryChannel, q1_K: float, **ansatz_kw) -> WitnessReport:
    """Ansatz value of ``N_s (x) K`` minus ``Q1(N_s) + Q1(K)``.

    The optimizer is seeded at ``(0, 1 - u, 0)``, the product of the platypus
    optimum with the partner's ``|0>``, so the witness never reports a spurious
    negative value from a missed product optimum.
    """
    if K.dim_in != 2:
        raise InvalidParams("the partner channel must have a qubit input")
    q1_ns = q1_platypus(float(s))
    u = q1_ns.argmax[0]
    joint = tensor_product(platypus_channel(s), K)
    seeds = list(ansatz_kw.pop("seeds", ())) + [(0.0, 1.0 - u, 0.0)]
    best = delta_star_ansatz(joint, seeds=seeds, **ansatz_kw)
    return WitnessReport.from_terms(
        best.value, {"q1_ns": q1_ns.value, "q1_k": float(q1_K)},
        {"s": float(s), "partner": K.label},
        extra={"argmax": list(best.argmax), "evaluations": best.evaluations})


@dataclass(frozen=True)
class NSFamily:
    name: str
    make: Callable[[float], IsometryChannel]
    q1: Callable[[float], float]
    lo: float
    hi: float
    analytic_max: Callable[[float], float] | None = None
    grid: Callable[[], np.ndarray] | None = None

    def coarse_grid(self) -> np.ndarray:
        if self.grid is not None:
            return self.grid()
        return np.linspace(self.lo, self.hi, COARSE_POINTS)


def _erasure_q1(x: float) -> float:
    return q1_erasure(x, 2)


def _ad_q1(x: float) -> float:
    return q1_amplitude_damping(x).value


def _depolarizing_grid() -> np.ndarray:
    # the positive window is a sliver ending at the hashing point, where Q1 has its kink
    return np.unique(np.append(np.linspace(0.17, 0.21, COARSE_POINTS), hashing_point_depolarizing()))


NS_FAMILIES = {
    "erasure": NSFamily("erasure", lambda x: erasure_channel(x, 2), _erasure_q1, 0.0, 1.0,
                        lambda s: lambda_max_analytic(s)),
    "ad": NSFamily("ad", amplitude_damping, _ad_q1, 0.0, 1.0, lambda s: gamma_max_analytic(s)),
    "depolarizing": NSFamily("depolarizing", depolarizing, q1_depolarizing, 0.0, 0.5,
                             grid=_depolarizing_grid),
}


def ns_family(name: str) -> NSFamily:
    try:
        return NS_FAMILIES[name]
    except KeyError:
        raise InvalidParams(f"unknown family {name!r}; choose from {sorted(NS_FAMILIES)}") from None


def family_witness(family: str | NSFamily, s: float, x: float, **ansatz_kw) -> WitnessReport:
    fam = ns_family(family) if isinstance(family, str) else family
    rep = delta_witness_ns(s, fam.make(x), fam.q1(x), **ansatz_kw)
    rep.params.update({"family": fam.name, "x": float(x)})
    return rep


# ---------------------------------------------------------------------------
# log-singularity thresholds

def _check_s(s: float) -> float:
    if not 0.0 < s <= 0.5:
        raise DomainError(f"s={s} outside (0, 1/2]")
    return float(s)


def lambda_max_analytic(s: float, u_opt: float | None = None) -> float:
    """Erasure probability below which the ``eps``-log-singularity favours the output."""
    s = _check_s(s)
    u = _u_opt(s) if u_opt is None else float(u_opt)
    if not 0.0 <= u <= 1.0:
        raise DomainError(f"u={u} outside [0, 1]")
    return (1.0 - s + u * s) / (2.0 - 2.0 * s - u + 2.0 * u * s)


def gamma_max_analytic(s: float, u_opt: float | None = None) -> float:
    s = _check_s(s)
    u = _u_opt(s) if u_opt is None else float(u_opt)
    if not 0.0 <= u <= 1.0:
        raise DomainError(f"u={u} outside [0, 1]")
    k = (1.0 - s) * (1.0 - u) / (u + (1.0 - s) * (1.0 - u))
    return 1.0 / (1.0 + k)


def singularity_rates_ns_erasure(s: float, u: float, lam: float) -> tuple[float, float]:
    """``eps log eps`` rates of the output and environment entropies on ``rho(eps, 1 - u, 0)``."""
    rate_b = u * (1.0 - lam)
    den = 1.0 - s * (1.0 - u)
    rate_c = u * lam * (1.0 - u) * (1.0 - s) / den if den > 0 else 0.0
    return rate_b, rate_c


def _spectra_ns_erasure(s, u, lam, eps):
    b = [s * (1 - u) * (1 - lam), s * (1 - u) * lam,
         (1 - s) * (1 - u) * (1 - lam), (1 - s) * (1 - u) * lam,
         (1 - eps) * u * (1 - lam), eps * u * (1 - lam), u * lam]
    a = s * (1 - u) + u * eps
    # 2x2 block [[eps u lam, u lam sqrt(eps(1-eps))], [., (1 - a) lam]]
    tr = eps * u * lam + (1 - a) * lam
    det = eps * u * lam * (1 - a) * lam - (u * lam) ** 2 * eps * (1 - eps)
    big = 0.5 * (tr + math.sqrt(max(tr * tr - 4 * det, 0.0)))
    small = det / big if big > 0 else 0.0
    c = [s * (1 - u) * lam, a * (1 - lam), (1 - a) * (1 - lam), big, small]
    return np.array(b), np.array(c)


@dataclass(frozen=True)
class SingularityReport:
    s: float
    lam: float
    u: float
    eps: tuple
    spectral: tuple
    dense: tuple
    max_disagreement: float
    rate_b: float
    rate_c: float
    predicted_positive: bool

    @property
    def agree(self) -> bool:
        return self.max_disagreement <= 1e-10


def verify_singularity_numeric(s: float, lam: float, u: float, eps_grid) -> SingularityReport:
    """``Delta(rho(eps)) - Delta(rho(0))`` on ``N_s (x) E_lam`` from explicit spectra and densely."""
    eps_grid = tuple(float(e) for e in eps_grid)

    def spectral(e):
        b, c = _spectra_ns_erasure(s, u, lam, e)
        return entropy_from_spectrum(b) - entropy_from_spectrum(c)

    joint = tensor_product(platypus_channel(s), erasure_channel(lam, 2))

    def dense(e):
        return coherent_information(joint, ansatz_rho((e, 1.0 - u, 0.0)), check=False)

    s0, d0 = spectral(0.0), dense(0.0)
    sp = tuple(spectral(e) - s0 for e in eps_grid)
    dn = tuple(dense(e) - d0 for e in eps_grid)
    gap = max((abs(a - b) for a, b in zip(sp, dn)), default=0.0)
    rb, rc = singularity_rates_ns_erasure(s, u, lam)
    return SingularityReport(float(s), float(lam), float(u), eps_grid, sp, dn, gap, rb, rc, rb > rc)


# ---------------------------------------------------------------------------
# region sweeps

def _positive_run(vals: np.ndarray, threshold: float):
    """Index range of the contiguous positive run containing the largest value."""
    pos = vals > threshold
    if not pos.any():
        return None
    k = int(np.argmax(vals))
    i0 = i1 = k
    while i0 > 0 and pos[i0 - 1]:
        i0 -= 1
    while i1 < len(vals) - 1 and pos[i1 + 1]:
        i1 += 1
    return i0, i1


def _bracket(pred, xs, i0, i1, tol):
    lo = xs[0] if i0 == 0 else bisect_sign(pred, xs[i0 - 1], xs[i0], tol)
    hi = xs[-1] if i1 == len(xs) - 1 else bisect_sign(pred, xs[i1], xs[i1 + 1], tol)
    return float(lo), float(hi)


def region_row_ns(family: str | NSFamily, s: float, x_grid=None,
                  threshold: float = WITNESS_RESOLUTION, tol: float = BISECT_TOL,
                  analytic: bool = True) -> RegionRow:
    fam = ns_family(family) if isinstance(family, str) else family
    xs = fam.coarse_grid() if x_grid is None else np.asarray(x_grid, float)
    w = lambda x: family_witness(fam, s, x).witness_value  # noqa: E731
    vals = np.array([w(x) for x in xs])
    run = _positive_run(vals, threshold)
    if run is None:
        return RegionRow(float(s), None, None, "empty", "empty", None, float(vals.max()))
    lo, hi = _bracket(lambda x: w(x) > threshold, xs, *run, tol)
    hi_num, method_max = hi, "numeric"
    if analytic and fam.analytic_max is not None and s > 0:
        bound = fam.analytic_max(s)
        if bound > hi:
            hi, method_max = bound, "analytic"
    return RegionRow(float(s), lo, hi, "numeric", method_max, hi_num, float(vals.max()))


def region_sweep_ns(family: str, s_grid, x_grid=None, threshold: float = WITNESS_RESOLUTION,
                    tol: float = BISECT_TOL, analytic: bool = True) -> RegionCurve:
    """Witness-positivity window in the partner noise for each ``s``.

    The numeric upper endpoint is replaced by the analytic log-singularity
    threshold when that one is larger; such endpoints carry ``"analytic"`` in
    ``method_max`` and the numeric value stays in ``x_max_numeric``.
    """
    curve = RegionCurve("s", ns_family(family).name)
    for s in s_grid:
        curve.rows.append(region_row_ns(family, float(s), x_grid, threshold, tol, analytic))
    return curve


def depolarizing_peak(s: float, p_grid=None, threshold: float = WITNESS_RESOLUTION) -> float:
    """Largest depolarizing witness over ``p_grid`` at fixed ``s``, minus ``threshold``."""
    if p_grid is None:
        p0 = hashing_point_depolarizing()
        p_grid = p0 - np.array([0.0, 2e-4, 5e-4, 1e-3])
    ps = p_grid
    return max(family_witness("depolarizing", s, p).witness_value for p in ps) - threshold


def depolarizing_onset(lo: float = 0.44, hi: float = 0.50, p_grid=None,
                       threshold: float = WITNESS_RESOLUTION, tol: float = 5e-4) -> float:
    """Smallest ``s`` at which the depolarizing witness region is nonempty."""
    return bisect_sign(lambda s: depolarizing_peak(s, p_grid, threshold) > 0, lo, hi, tol)


# ---------------------------------------------------------------------------
# M_{d+1} (x) E_{lam,d}

W_GRID_SORTED = np.unique(np.concatenate([np.logspace(-12, -2, 41), np.linspace(0.0, 1.0, 201)]))


def u_bound(lam: float, d: int) -> float:
    """Upper bound on ``Q(M_{d+1}) + Q(E_{lam,d})``."""
    if not 0.0 <= lam <= 1.0 or d < 2:
        raise DomainError(f"out of range: lambda={lam}, d={d}")
    return math.log2(1.0 + 1.0 / math.sqrt(d)) + max((1.0 - 2.0 * lam) * math.log2(d), 0.0)


def mu(w: float, d: int, lam: float) -> float:
    return md_erasure_delta_closed(w, d, lam) - u_bound(lam, d)


def mu_report(w: float, d: int, lam: float) -> WitnessReport:
    return WitnessReport.from_terms(md_erasure_delta_closed(w, d, lam), {"u_bound": u_bound(lam, d)},
                                    {"w": float(w), "d": int(d), "lambda": float(lam)},
                                    total_name="delta")


def md_witness_report(w: float, d: int, lam: float) -> WitnessReport:
    return WitnessReport.from_terms(
        md_erasure_delta_closed(w, d, lam),
        {"q1_md": q1_md_closed_form(d + 1).value, "q1_erasure": q1_erasure(lam, d)},
        {"w": float(w), "d": int(d), "lambda": float(lam)}, total_name="delta")


def _delta_closed_vec(w: np.ndarray, d: int, lam: float) -> np.ndarray:
    a = (1.0 - w) / (d * d)
    f = eta(a + w) + (d * d - 1) * eta(a)
    return binary_entropy(w) + (1.0 - w) * math.log2(d) + lam * f


def max_over_w(f: Callable[[float], float], tol: float = 1e-10, grid_values=None):
    """Grid search over ``W_GRID`` and golden refinement; ``grid_values`` may hold ``f`` on the grid."""
    if grid_values is None:
        return grid_then_golden(f, W_GRID_SORTED, tol=tol)
    k = int(np.argmax(grid_values))
    lo = W_GRID_SORTED[max(k - 1, 0)]
    hi = W_GRID_SORTED[min(k + 1, len(W_GRID_SORTED) - 1)]
    ref = golden_section_max(f, lo, hi, tol=tol)
    n = len(W_GRID_SORTED) + ref.evaluations
    if ref.value >= grid_values[k]:
        return ScalarMax(ref.x, ref.value, n)
    return ScalarMax(float(W_GRID_SORTED[k]), float(grid_values[k]), n)


def max_mu(d: int, lam: float):
    ub = u_bound(lam, d)
    vals = _delta_closed_vec(W_GRID_SORTED, d, lam) - ub
    return max_over_w(lambda w: mu(w, d, lam), grid_values=vals)


def max_md_witness(d: int, lam: float):
    q = q1_md_closed_form(d + 1).value + q1_erasure(lam, d)
    vals = _delta_closed_vec(W_GRID_SORTED, d, lam) - q
    return max_over_w(lambda w: md_erasure_delta_closed(w, d, lam) - q, grid_values=vals)


def _md_window(g: Callable[[float], float], lams: np.ndarray, threshold: float, tol: float):
    vals = np.array([g(l) for l in lams])
    run = _positive_run(vals, threshold)
    if run is None:
        return None, None
    return _bracket(lambda l: g(l) > threshold, lams, *run, tol)


def region_sweep_md(d_list, lambda_grid=None, threshold: float = 1e-6,
                    tol: float = BISECT_TOL) -> tuple[RegionCurve, RegionCurve]:
    """Coherent-information and capacity superadditivity windows in ``lam`` per ``d``."""
    lams = np.linspace(0.0, 1.0, 101) if lambda_grid is None else np.asarray(lambda_grid, float)
    q1c, capc = RegionCurve("d", "md_coherent"), RegionCurve("d", "md_capacity")
    for d in d_list:
        d = int(d)
        if d < 2:
            raise DomainError(f"d={d} must be >= 2")
        a, b = _md_window(lambda l: max_md_witness(d, l).value, lams, threshold, tol)
        q1c.rows.append(RegionRow(d, a, b, *(("numeric",) * 2 if a is not None else ("empty",) * 2)))
        a, b = _md_window(lambda l: max_mu(d, l).value, lams, threshold, tol)
        capc.rows.append(RegionRow(d, a, b, *(("numeric",) * 2 if a is not None else ("empty",) * 2)))
    return q1c, capc


def md_region_csv(q1c: RegionCurve, capc: RegionCurve, header: dict | None = None) -> str:
    buf = io.StringIO()
    if header is not None:
        buf.write("# " + json.dumps(header, sort_keys=True) + "\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["d", "lm_min_q1", "lm_max_q1", "lm_min_q", "lm_max_q"])
    for a, b in zip(q1c.rows, capc.rows):
        w.writerow([a.param, _fmt(a.x_min), _fmt(a.x_max), _fmt(b.x_min), _fmt(b.x_max)])
    return buf.getvalue()


def w_star(lam: float, d: int) -> float:
    """Small-``w`` choice for the large-``d`` argument, clamped into ``(0, 1/2]``."""
    if not 0.0 < lam < 1.0:
        raise DomainError(f"lambda={lam} must lie in (0, 1)")
    if d < 2:
        raise DomainError(f"d={d} must be >= 2")
    expo = 1.0 - 2.0 * abs(1.0 - 2.0 * lam) / (1.0 - lam) * math.log2(d)
    return min(2.0 ** expo, 0.5) if expo > -1074 else 5e-324


def mu_asymptotic(w: float, lam: float, d: int) -> float:
    """``(1 - lam) h(w) - w |1 - 2 lam| log2 d``; for ``lam > 1/2`` this approximates ``mu(1 - w)``."""
    if not 0.0 < lam < 1.0:
        raise DomainError(f"lambda={lam} must lie in (0, 1)")
    return float((1.0 - lam) * binary_entropy(w) - w * abs(1.0 - 2.0 * lam) * math.log2(d))


def mu_at_w_star(lam: float, d: int) -> float:
    w = w_star(lam, d)
    return mu(w if lam <= 0.5 else 1.0 - w, d, lam)
