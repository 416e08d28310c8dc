"""Coherent information and channel coherent-information optimizers.

``coherent_information`` evaluates ``S(B(rho)) - S(B^c(rho))``. The ``q1_*``
functions maximize it: one-dimensional problems use golden-section search,
the three-parameter amplification ansatz uses a grid followed by a
Nelder-Mead polish, and :func:`q1_general` searches the full state space.
"""

from __future__ import annotations

import functools
import json
import math
from dataclasses import asdict, dataclass, field
from typing import Sequence

import numpy as np
from scipy.optimize import minimize

from .channels import (
    IsometryChannel,
    amplitude_damping,
    generalized_platypus,
    platypus_channel,
)
from .errors import ConvergenceFailure, DimensionMismatch, DomainError, InvalidParams
from .numkernel import batched_entropy, binary_entropy, check_density, entropy_from_spectrum, eta
from .optimize import golden_section_max

GOLDEN_TOL = 1e-9
ANSATZ_GRID = 21
POLISH_FATOL = 1e-9
POLISH_MAX_EVALS = 5000
GENERAL_DENSE_LIMIT = 12
# log-eigenvalue floor used only inside gradients
_GRAD_FLOOR = 1e-15


@dataclass(frozen=True)
class OptResult:
    value: float
    argmax: tuple
    evaluations: int
    converged: bool = True
    state: np.ndarray | None = field(default=None, repr=False, compare=False)

    def to_dict(self) -> dict:
        d = asdict(self)
        d.pop("state")
        d["argmax"] = [float(v) for v in self.argmax]
        return d

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


@dataclass(frozen=True)
class AnsatzParams3:
    """Parameters ``(epsilon, r1, r2)`` of the amplification ansatz."""

    epsilon: float
    r1: float
    r2: float

    def __post_init__(self) -> None:
        vals = (self.epsilon, self.r1, self.r2)
        tol = 1e-12
        if any(not math.isfinite(v) or v < -tol or v > 1 + tol for v in vals):
            raise InvalidParams(f"ansatz parameters must lie in [0, 1]: {vals}")
        if self.r1 + self.r2 > 1 + tol:
            raise InvalidParams(f"r1 + r2 = {self.r1 + self.r2} exceeds 1")


def coherent_information(ch: IsometryChannel, rho, check: bool = True) -> float:
    if check:
        rho = check_density(rho)
        if rho.shape[0] != ch.dim_in:
            raise DimensionMismatch(f"input dimension {rho.shape[0]} != {ch.dim_in}")
    rho_b, rho_c = ch.output_pair(rho)
    return (entropy_from_spectrum(np.linalg.eigvalsh(rho_b))
            - entropy_from_spectrum(np.linalg.eigvalsh(rho_c)))


def coherent_information_batch(ch: IsometryChannel, rhos: np.ndarray,
                               chunk: int = 1024) -> np.ndarray:
    """Coherent information of a stack of input states, unchecked."""
    out = np.empty(len(rhos))
    for i in range(0, len(rhos), chunk):
        rho_b, rho_c = ch.output_pair(rhos[i:i + chunk])
        out[i:i + chunk] = batched_entropy(rho_b) - batched_entropy(rho_c)
    return out


# ---------------------------------------------------------------------------
# one-parameter families

@functools.lru_cache(maxsize=512)
def q1_platypus(s: float) -> OptResult:
    """``Q^(1)(N_s)``, attained on ``(1 - u)[0] + u[2]``; ``argmax`` is ``(u,)``."""
    ch = platypus_channel(s)
    f = lambda u: coherent_information(ch, np.diag([1.0 - u, 0.0, u]), check=False)  # noqa: E731
    res = golden_section_max(f, 0.0, 1.0, tol=GOLDEN_TOL)
    return OptResult(res.value, (res.x,), res.evaluations)


def md_single_letter(u: float, d: int) -> float:
    """``h(u) + (1 - u) log(d - 1) + g(u, d - 1)``: coherent information of ``M_d``
    on ``(1 - u)[0] + u[i]``."""
    n = d - 1
    a = (1.0 - u) / n
    g = (n - 1) * eta(a) + eta(a + u)
    return float(binary_entropy(u) + (1.0 - u) * math.log2(n) + g)


@functools.lru_cache(maxsize=512)
def q1_md_closed_form(d: int) -> OptResult:
    if int(d) != d or d < 3:
        raise DomainError(f"M_d needs integer d >= 3, got {d}")
    res = golden_section_max(lambda u: md_single_letter(u, int(d)), 0.0, 1.0, tol=GOLDEN_TOL)
    return OptResult(res.value, (res.x,), res.evaluations)


@functools.lru_cache(maxsize=512)
def q1_amplitude_damping(gamma: float) -> OptResult:
    """``Q^(1)(A_gamma)`` over ``(1 - z)[0] + z[1]``; ``argmax`` is ``(z,)``."""
    ch = amplitude_damping(gamma)
    if gamma >= 0.5:
        return OptResult(0.0, (0.0,), 1)
    f = lambda z: coherent_information(ch, np.diag([1.0 - z, z]), check=False)  # noqa: E731
    res = golden_section_max(f, 0.0, 1.0, tol=GOLDEN_TOL)
    return OptResult(max(res.value, 0.0), (res.x,), res.evaluations)


def q1_erasure(lam: float, d: int = 2) -> float:
    if not 0.0 <= lam <= 1.0 or d < 2:
        raise DomainError(f"erasure parameters out of range: lambda={lam}, d={d}")
    return max((1.0 - 2.0 * lam) * math.log2(d), 0.0)


def depolarizing_hashing_value(p: float) -> float:
    """``1 - h(p) - p log2 3``, the coherent information at the maximally mixed input."""
    return float(1.0 - binary_entropy(p) - p * math.log2(3.0))


def q1_depolarizing(p: float) -> float:
    if not 0.0 <= p <= 0.75:
        raise DomainError(f"depolarizing p={p} outside [0, 3/4]")
    return max(depolarizing_hashing_value(p), 0.0)


@functools.lru_cache(maxsize=1)
def hashing_point_depolarizing(tol: float = 1e-9) -> float:
    lo, hi = 0.0, 0.25
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if depolarizing_hashing_value(mid) > 0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


# ---------------------------------------------------------------------------
# amplification ansatz for N_s (x) K

def _ansatz_stack(eps, r1, r2) -> np.ndarray:
    eps, r1, r2 = (np.atleast_1d(np.asarray(v, dtype=float)) for v in (eps, r1, r2))
    n = eps.shape[0]
    rho = np.zeros((n, 6, 6))
    rho[:, 0, 0] = r1
    rho[:, 1, 1] = r2
    w = 1.0 - r1 - r2
    # |chi> = sqrt(1 - eps)|20> + sqrt(eps)|11>; |20> is index 4, |11> is index 3
    a, b = np.sqrt(1.0 - eps), np.sqrt(eps)
    rho[:, 4, 4] = w * a * a
    rho[:, 3, 3] = w * b * b
    rho[:, 3, 4] = rho[:, 4, 3] = w * a * b
    return rho


def ansatz_rho(params: AnsatzParams3 | Sequence[float], d_other: int = 2) -> np.ndarray:
    """``r1[00] + r2[01] + (1 - r1 - r2)[chi_eps]`` on ``H_a (x) H_a'`` (dimension 6)."""
    if d_other != 2:
        raise InvalidParams("the ansatz is defined for a qubit partner channel")
    if not isinstance(params, AnsatzParams3):
        params = AnsatzParams3(*params)
    eps, r1, r2 = (min(max(v, 0.0), 1.0) for v in (params.epsilon, params.r1, params.r2))
    return _ansatz_stack(eps, r1, min(r2, 1.0 - r1))[0].astype(complex)


def _to_angles(eps: float, r1: float, r2: float) -> np.ndarray:
    a = math.asin(math.sqrt(min(max(eps, 0.0), 1.0)))
    b = math.acos(math.sqrt(min(max(r1, 0.0), 1.0)))
    rest = 1.0 - r1
    c = math.acos(math.sqrt(min(max(r2 / rest, 0.0), 1.0))) if rest > 1e-15 else math.pi / 4
    return np.array([a, b, c])


def _from_angles(x) -> tuple[float, float, float]:
    a, b, c = x
    sb2 = math.sin(b) ** 2
    return math.sin(a) ** 2, math.cos(b) ** 2, sb2 * math.cos(c) ** 2


def ansatz_grid(n: int = ANSATZ_GRID) -> np.ndarray:
    g = np.linspace(0.0, 1.0, n)
    e, r1, r2 = np.meshgrid(g, g, g, indexing="ij")
    keep = r1 + r2 <= 1.0 + 1e-12
    pts = np.stack([e[keep], r1[keep], np.minimum(r2[keep], 1.0 - r1[keep])], axis=1)
    return pts


def delta_star_ansatz(joint: IsometryChannel, seeds: Sequence[Sequence[float]] = (),
                      grid: int = ANSATZ_GRID, n_polish: int = 3,
                      fatol: float = POLISH_FATOL, max_evals: int = POLISH_MAX_EVALS) -> OptResult:
    """Maximize the joint coherent information over the ansatz ``rho(eps, r1, r2)``.

    The fixed grid is evaluated in one batch; the best ``n_polish`` grid
    points and any extra ``seeds`` are then polished by Nelder-Mead in angle
    coordinates ``eps = sin^2 a``, ``r1 = cos^2 b``, ``r2 = sin^2 b cos^2 c``,
    which keep every iterate feasible.
    """
    if joint.dim_in != 6:
        raise DimensionMismatch("delta_star_ansatz expects N_s (x) K with K a qubit channel")
    pts = ansatz_grid(grid)
    vals = coherent_information_batch(joint, _ansatz_stack(pts[:, 0], pts[:, 1], pts[:, 2]))
    n_evals = len(pts)
    order = np.argsort(-vals, kind="stable")
    starts = [tuple(pts[i]) for i in order[:n_polish]] + [tuple(s) for s in seeds]

    def neg(x):
        rho = _ansatz_stack(*_from_angles(x))[0]
        return -coherent_information(joint, rho, check=False)

    best_val, best_arg = float(vals[order[0]]), tuple(float(v) for v in pts[order[0]])
    converged_any = False
    for start in starts:
        x0 = _to_angles(*start)
        simplex = np.vstack([x0] + [x0 + 0.05 * np.eye(3)[k] for k in range(3)])
        res = minimize(neg, x0, method="Nelder-Mead",
                       options={"initial_simplex": simplex, "xatol": 1e-10, "fatol": fatol,
                                "maxfev": max_evals})
        n_evals += res.nfev
        converged_any |= bool(res.success)
        if -res.fun > best_val:
            best_val, best_arg = float(-res.fun), _from_angles(res.x)
    if not converged_any:
        raise ConvergenceFailure("ansatz polish exhausted its evaluation budget")
    return OptResult(best_val, tuple(best_arg), n_evals, True,
                     ansatz_rho(best_arg))


# ---------------------------------------------------------------------------
# M_{d+1} (x) E_{lambda,d} ansatz

def md_erasure_ansatz_state(w: float, d: int) -> np.ndarray:
    """Input state on ``H_a (x) H_a'`` (dims ``d + 1`` and ``d``) after tracing the references.

    The two branches are flagged by orthogonal reference states, so the trace
    leaves ``(1 - w)[0] (x) I/d + w [Phi]`` with
    ``|Phi> = d^{-1/2} sum_{i=1}^{d} |i>|i - 1>``.
    """
    if not 0.0 <= w <= 1.0 or d < 2:
        raise DomainError(f"md ansatz parameters out of range: w={w}, d={d}")
    da = d + 1
    rho = np.zeros((da * d, da * d), dtype=complex)
    for i in range(d):
        rho[i, i] += (1.0 - w) / d
    phi = np.zeros(da * d)
    for i in range(1, d + 1):
        phi[i * d + (i - 1)] = 1.0 / math.sqrt(d)
    rho += w * np.outer(phi, phi)
    return rho


def md_erasure_f(w: float, d: int) -> float:
    a = (1.0 - w) / (d * d)
    return float(eta(a + w) + (d * d - 1) * eta(a))


def md_erasure_delta_closed(w: float, d: int, lam: float) -> float:
    """Coherent information of ``M_{d+1} (x) E_{lam,d}`` on the ansatz state."""
    if not 0.0 <= w <= 1.0 or d < 2 or not 0.0 <= lam <= 1.0:
        raise DomainError(f"out of range: w={w}, d={d}, lambda={lam}")
    return float(binary_entropy(w) + (1.0 - w) * math.log2(d) + lam * md_erasure_f(w, d))


# ---------------------------------------------------------------------------
# full state-space search

def _lower_indices(d: int):
    return np.tril_indices(d, -1)


def _params_to_L(x: np.ndarray, d: int) -> np.ndarray:
    L = np.zeros((d, d), dtype=complex)
    L[np.diag_indices(d)] = x[:d]
    rows, cols = _lower_indices(d)
    m = len(rows)
    L[rows, cols] = x[d:d + m] + 1j * x[d + m:]
    return L


def _L_to_params(L: np.ndarray) -> np.ndarray:
    d = L.shape[0]
    rows, cols = _lower_indices(d)
    low = L[rows, cols]
    return np.concatenate([L.diagonal().real, low.real, low.imag])


def _state_from_params(x: np.ndarray, d: int) -> np.ndarray:
    L = _params_to_L(x, d)
    rho = L @ L.conj().T
    return rho / np.trace(rho).real


def _neg_coh_and_grad(x: np.ndarray, ch: IsometryChannel):
    d = ch.dim_in
    W = ch._kraus
    L = _params_to_L(x, d)
    P = L @ L.conj().T
    t = np.trace(P).real
    rho = P / t
    rho_b, rho_c = ch.output_pair(rho)
    wb, vb = np.linalg.eigh(rho_b)
    wc, vc = np.linalg.eigh(rho_c)
    value = entropy_from_spectrum(wb) - entropy_from_spectrum(wc)
    log_b = (vb * np.log2(np.maximum(wb, _GRAD_FLOOR))) @ vb.conj().T
    log_c = (vc * np.log2(np.maximum(wc, _GRAD_FLOOR))) @ vc.conj().T
    adj_b = np.einsum("bca,be,eck->ak", W.conj(), log_b, W)
    adj_c = np.einsum("bca,cf,bfk->ak", W.conj(), log_c, W)
    G = adj_c - adj_b
    G = G - np.trace(G @ rho).real * np.eye(d)
    M = (2.0 / t) * (G @ L)
    rows, cols = _lower_indices(d)
    grad = np.concatenate([M.diagonal().real, M[rows, cols].real, M[rows, cols].imag])
    return -value, -grad


def _polish_general(ch: IsometryChannel, x0: np.ndarray, max_iter: int):
    return minimize(_neg_coh_and_grad, x0, args=(ch,), jac=True, method="L-BFGS-B",
                    options={"maxiter": max_iter, "ftol": 1e-15, "gtol": 1e-10})


def q1_general(ch: IsometryChannel, restarts: int = 8, rng_seed: int = 0,
               warm_starts: Sequence[np.ndarray] = (), max_iter: int = 3000) -> OptResult:
    """Maximize ``Delta(ch, rho)`` over all density operators.

    ``rho = L L^dag / Tr(L L^dag)`` with ``L`` complex lower triangular (real
    diagonal), polished by L-BFGS with the analytic gradient. Starts are the
    maximally mixed state, then each ``warm_starts`` entry, then ``restarts``
    random factors drawn from independent child seeds of ``rng_seed``; the
    best value wins, so the result is nondecreasing in ``restarts``.
    """
    d = ch.dim_in
    if d > GENERAL_DENSE_LIMIT:
        raise DimensionMismatch(f"q1_general is limited to input dimension {GENERAL_DENSE_LIMIT}")
    starts = [np.eye(d) / d] + [np.asarray(r, dtype=complex) for r in warm_starts]
    x_starts = []
    for rho in starts:
        L = np.linalg.cholesky(rho + 1e-6 * np.eye(d))
        x_starts.append(_L_to_params(L))
    for child in np.random.SeedSequence(rng_seed).spawn(restarts):
        rng = np.random.default_rng(child)
        x_starts.append(rng.normal(size=d * d))

    best = None
    n_evals = 0
    failures = 0
    for x0 in x_starts:
        try:
            res = _polish_general(ch, x0, max_iter)
        except (np.linalg.LinAlgError, FloatingPointError, ValueError):
            failures += 1
            continue
        n_evals += res.nfev
        if best is None or res.fun < best.fun:
            best = res
    if best is None:
        raise ConvergenceFailure(f"all {failures} starts of q1_general failed")
    rho = _state_from_params(best.x, d)
    value = coherent_information(ch, rho, check=False)
    return OptResult(value, tuple(best.x), n_evals, bool(best.success), rho)


def q1_md_general(d: int, **kwargs) -> OptResult:
    return q1_general(generalized_platypus(d), **kwargs)
