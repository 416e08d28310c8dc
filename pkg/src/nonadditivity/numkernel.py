"""Dense Hermitian linear algebra and entropy primitives.

Operators are plain ``numpy`` arrays. The ``check_*`` helpers enforce the
Hermitian and density-operator invariants at API boundaries; hot loops in the
optimizers call the unchecked spectral routines directly.

All entropies are in bits.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import ConvergenceFailure, DomainError, NonHermitianInput, NotADensityOperator

HERMITIAN_TOL = 1e-12
TRACE_TOL = 1e-10
PSD_TOL = 1e-10
# eigenvalues in [-CLAMP_WINDOW, 0) are treated as exact zeros
CLAMP_WINDOW = 1e-10

JACOBI_TOL = 1e-14
JACOBI_MAX_SWEEPS = 100


def check_matrix(a) -> np.ndarray:
    a = np.asarray(a, dtype=complex)
    if a.ndim != 2:
        raise ValueError(f"expected a 2-d array, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValueError("matrix has non-finite entries")
    return a


def check_hermitian(a, tol: float = HERMITIAN_TOL) -> np.ndarray:
    """Return ``a`` as a complex array after checking ``a == a^dagger`` entrywise."""
    a = check_matrix(a)
    if a.shape[0] != a.shape[1]:
        raise NonHermitianInput(f"matrix is not square: {a.shape}")
    err = np.max(np.abs(a - a.conj().T), initial=0.0)
    if err > tol:
        raise NonHermitianInput(f"max |A - A^dagger| = {err:.3e} exceeds {tol:.1e}")
    return a


def check_density(rho, trace_tol: float = TRACE_TOL, psd_tol: float = PSD_TOL) -> np.ndarray:
    rho = check_hermitian(rho)
    tr = np.trace(rho).real
    if abs(tr - 1.0) > trace_tol:
        raise NotADensityOperator(f"trace {tr!r} differs from 1")
    lo = np.linalg.eigvalsh(rho)[0]
    if lo < -psd_tol:
        raise NotADensityOperator(f"minimum eigenvalue {lo:.3e} is negative")
    return rho


def jacobi_eigenvalues(
    a, tol: float = JACOBI_TOL, max_sweeps: int = JACOBI_MAX_SWEEPS
) -> np.ndarray:
    """Eigenvalues of a Hermitian matrix by the cyclic complex Jacobi method.

    Each rotation first removes the phase of the pivot ``a[p, q]`` and then
    applies the real symmetric Jacobi rotation that annihilates it. Sweeps
    continue until the off-diagonal Frobenius norm drops below
    ``tol * max(1, ||a||_F)``.

    Returns the eigenvalues in nondecreasing order.
    """
    a = np.array(a, dtype=complex)
    n = a.shape[0]
    if n <= 1:
        return np.sort(a.diagonal().real)
    scale = max(1.0, float(np.linalg.norm(a)))
    mask = ~np.eye(n, dtype=bool)
    for _ in range(max_sweeps):
        off = math.sqrt(float(np.sum(np.abs(a[mask]) ** 2)))
        if off < tol * scale:
            return np.sort(a.diagonal().real)
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                mag = abs(apq)
                if mag < 1e-300:
                    continue
                phase = apq / mag
                app = a[p, p].real
                aqq = a[q, q].real
                zeta = (aqq - app) / (2.0 * mag)
                t = math.copysign(1.0, zeta) / (abs(zeta) + math.sqrt(1.0 + zeta * zeta))
                c = 1.0 / math.sqrt(1.0 + t * t)
                s = t * c
                # U acts on columns (p, q): U = diag(1, conj(phase)) @ [[c, s], [-s, c]]
                u = np.array([[c, s], [-s * phase.conjugate(), c * phase.conjugate()]])
                cols = a[:, [p, q]] @ u
                a[:, p], a[:, q] = cols[:, 0], cols[:, 1]
                rows = u.conj().T @ a[[p, q], :]
                a[p, :], a[q, :] = rows[0], rows[1]
                a[p, q] = a[q, p] = 0.0
                a[p, p] = a[p, p].real
                a[q, q] = a[q, q].real
    raise ConvergenceFailure(f"Jacobi did not converge in {max_sweeps} sweeps")


def hermitian_eigenvalues(op, method: str = "lapack", check: bool = True) -> np.ndarray:
    """Sorted real eigenvalues of a Hermitian operator.

    ``method="lapack"`` uses ``numpy.linalg.eigvalsh``; ``method="jacobi"``
    uses :func:`jacobi_eigenvalues`. Both return nondecreasing order.
    """
    a = check_hermitian(op) if check else np.asarray(op)
    if method == "lapack":
        return np.linalg.eigvalsh(a)
    if method == "jacobi":
        return jacobi_eigenvalues(a)
    raise ValueError(f"unknown eigenvalue method {method!r}")


def entropy_from_spectrum(eigs) -> float:
    """``-sum p log2 p`` with ``0 log 0 = 0``; tiny negative roundoff is clamped."""
    p = np.asarray(eigs, dtype=float)
    p = p[p > 0.0]
    return float(-np.sum(p * np.log2(p)))


def von_neumann_entropy(rho, method: str = "lapack", check: bool = True) -> float:
    if check:
        rho = check_density(rho)
    return entropy_from_spectrum(hermitian_eigenvalues(rho, method=method, check=False))


def batched_entropy(stack: np.ndarray) -> np.ndarray:
    """Entropies of a stack ``(..., n, n)`` of density operators, unchecked."""
    w = np.linalg.eigvalsh(stack)
    w = np.where(w > 0.0, w, 1.0)
    return -np.sum(w * np.log2(w), axis=-1)


def eta(x):
    """``x log2 x`` with ``eta(0) = 0``; accepts scalars or arrays."""
    xa = np.asarray(x, dtype=float)
    if np.any(xa < 0) or np.any(~np.isfinite(xa)):
        raise DomainError("eta requires x >= 0")
    safe = np.where(xa > 0, xa, 1.0)
    out = np.where(xa > 0, xa * np.log2(safe), 0.0)
    return float(out) if out.ndim == 0 else out


def binary_entropy(x):
    xa = np.asarray(x, dtype=float)
    if np.any(xa < 0) or np.any(xa > 1) or np.any(~np.isfinite(xa)):
        raise DomainError("binary entropy requires 0 <= x <= 1")
    # evaluate from the larger branch so h(x) == h(1 - x) bit for bit
    m = np.maximum(xa, 1.0 - xa)
    out = np.asarray(-(eta(m) + eta(1.0 - m))) + 0.0
    return float(out) if out.ndim == 0 else out
