"""Quantum channels stored as Stinespring isometries.

A channel ``B`` and its complement ``B^c`` share one isometry
``V : H_a -> H_b (x) H_c``. The rows of ``V`` are indexed by
``b * dim_env + c`` so that ``V[:, i]`` is the ket ``V|i>`` written as
``sum_{b,c} V[b*dim_env + c, i] |b>|c>``.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Any

import numpy as np

from .errors import (
    DimensionMismatch,
    DimensionOverflow,
    DomainError,
    NotCompletelyPositive,
)
from .numkernel import check_density

ISOMETRY_TOL = 1e-10
CP_TOL = 1e-9
KRAUS_CUTOFF = 1e-12
DENSE_LIMIT = 2**20

PAULI_I = np.eye(2, dtype=complex)
PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=complex)
PAULIS = (PAULI_I, PAULI_X, PAULI_Y, PAULI_Z)


@dataclass(frozen=True, eq=False)
class IsometryChannel:
    """Channel pair ``(B, B^c)`` defined by an isometry ``V``.

    ``V`` has shape ``(dim_out * dim_env, dim_in)``.
    """

    V: np.ndarray
    dim_in: int
    dim_out: int
    dim_env: int
    label: str = ""
    _kraus: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        V = np.array(self.V, dtype=complex)
        if V.shape != (self.dim_out * self.dim_env, self.dim_in):
            raise DimensionMismatch(
                f"isometry shape {V.shape} does not match "
                f"({self.dim_out}*{self.dim_env}, {self.dim_in})"
            )
        V.setflags(write=False)
        object.__setattr__(self, "V", V)
        # W[b, c, a]: Kraus operator K_c = W[:, c, :]
        W = V.reshape(self.dim_out, self.dim_env, self.dim_in)
        object.__setattr__(self, "_kraus", W)

    @property
    def kraus(self) -> np.ndarray:
        """Kraus operators indexed as ``kraus[c]`` with shape ``(dim_out, dim_in)``."""
        return np.transpose(self._kraus, (1, 0, 2))

    def isometry_error(self) -> float:
        return float(np.max(np.abs(self.V.conj().T @ self.V - np.eye(self.dim_in))))

    def output_pair(self, rho: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """``(Tr_c V rho V^dag, Tr_b V rho V^dag)`` without input validation.

        ``rho`` may carry leading batch axes.
        """
        W = self._kraus
        Y = np.einsum("bca,...ad->...bcd", W, rho)
        rho_b = np.einsum("...bcd,ecd->...be", Y, W.conj())
        rho_c = np.einsum("...bcd,bed->...ce", Y, W.conj())
        return rho_b, rho_c

    def to_dict(self) -> dict[str, Any]:
        return {
            "label": self.label,
            "dim_in": self.dim_in,
            "dim_out": self.dim_out,
            "dim_env": self.dim_env,
            "V": [[float(z.real), float(z.imag)] for z in self.V.ravel()],
        }

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> IsometryChannel:
        flat = np.array([complex(re, im) for re, im in data["V"]])
        shape = (data["dim_out"] * data["dim_env"], data["dim_in"])
        return cls(flat.reshape(shape), data["dim_in"], data["dim_out"], data["dim_env"],
                   data.get("label", ""))

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_json(cls, text: str) -> IsometryChannel:
        return cls.from_dict(json.loads(text))


def _ket(d: int, i: int) -> np.ndarray:
    v = np.zeros(d, dtype=complex)
    v[i] = 1.0
    return v


def _from_columns(columns, dim_out: int, dim_env: int, label: str) -> IsometryChannel:
    V = np.stack(columns, axis=1)
    return IsometryChannel(V, V.shape[1], dim_out, dim_env, label)


def _from_kraus(kraus, label: str) -> IsometryChannel:
    kraus = np.asarray(kraus, dtype=complex)
    n_env, dim_out, dim_in = kraus.shape
    W = np.transpose(kraus, (1, 0, 2))
    return IsometryChannel(W.reshape(dim_out * n_env, dim_in), dim_in, dim_out, n_env, label)


def _check_prob(name: str, x: float, hi: float = 1.0) -> float:
    x = float(x)
    if not (0.0 <= x <= hi) or math.isnan(x):
        raise DomainError(f"{name}={x} outside [0, {hi}]")
    return x


def identity_channel(d: int = 2) -> IsometryChannel:
    return IsometryChannel(np.eye(d), d, d, 1, f"id_{d}")


def platypus_channel(s: float) -> IsometryChannel:
    """The qutrit channel ``N_s``; input and output are 3-dimensional, environment 2."""
    s = _check_prob("s", s, 0.5)
    k = lambda b, c: np.kron(_ket(3, b), _ket(2, c))  # noqa: E731
    cols = [
        math.sqrt(s) * k(0, 0) + math.sqrt(1.0 - s) * k(1, 1),
        k(2, 0),
        k(2, 1),
    ]
    return _from_columns(cols, 3, 2, f"platypus(s={s})")


def generalized_platypus(d: int) -> IsometryChannel:
    """``M_d``: input/output dimension ``d``, environment ``d - 1``."""
    if int(d) != d or d < 3:
        raise DomainError(f"generalized platypus needs integer d >= 3, got {d}")
    d = int(d)
    k = lambda b, c: np.kron(_ket(d, b), _ket(d - 1, c))  # noqa: E731
    cols = [sum(k(j, j) for j in range(d - 1)) / math.sqrt(d - 1)]
    cols += [k(d - 1, i - 1) for i in range(1, d)]
    return _from_columns(cols, d, d - 1, f"M_{d}")


def erasure_channel(lam: float, d: int = 2) -> IsometryChannel:
    """``E_{lam,d}``; the erasure flag is the last basis vector of output and environment."""
    lam = _check_prob("lambda", lam)
    if int(d) != d or d < 2:
        raise DomainError(f"erasure channel needs integer d >= 2, got {d}")
    d = int(d)
    e = d
    k = lambda b, c: np.kron(_ket(d + 1, b), _ket(d + 1, c))  # noqa: E731
    cols = [math.sqrt(1.0 - lam) * k(i, e) + math.sqrt(lam) * k(e, i) for i in range(d)]
    return _from_columns(cols, d + 1, d + 1, f"erasure(lambda={lam}, d={d})")


def amplitude_damping(gamma: float) -> IsometryChannel:
    gamma = _check_prob("gamma", gamma)
    k = lambda b, c: np.kron(_ket(2, b), _ket(2, c))  # noqa: E731
    cols = [k(0, 0), math.sqrt(gamma) * k(0, 1) + math.sqrt(1.0 - gamma) * k(1, 0)]
    return _from_columns(cols, 2, 2, f"amplitude_damping(gamma={gamma})")


def depolarizing(p: float) -> IsometryChannel:
    """Qubit depolarizing channel in its Pauli-Kraus form, environment dimension 4."""
    p = _check_prob("p", p, 0.75)
    weights = [math.sqrt(1.0 - p)] + [math.sqrt(p / 3.0)] * 3
    kraus = [w * P for w, P in zip(weights, PAULIS)]
    return _from_kraus(kraus, f"depolarizing(p={p})")


def apply(ch: IsometryChannel, rho) -> np.ndarray:
    rho = _checked_input(ch, rho)
    return ch.output_pair(rho)[0]


def apply_complement(ch: IsometryChannel, rho) -> np.ndarray:
    rho = _checked_input(ch, rho)
    return ch.output_pair(rho)[1]


def _checked_input(ch: IsometryChannel, rho) -> np.ndarray:
    rho = check_density(rho)
    if rho.shape[0] != ch.dim_in:
        raise DimensionMismatch(f"input dimension {rho.shape[0]} != channel input {ch.dim_in}")
    return rho


def tensor_product(A: IsometryChannel, B: IsometryChannel,
                   dense_limit: int = DENSE_LIMIT) -> IsometryChannel:
    """``A (x) B`` with outputs ordered ``b b'`` and environments ``c c'``."""
    rows = A.dim_out * B.dim_out * A.dim_env * B.dim_env
    if rows > dense_limit:
        raise DimensionOverflow(f"joint isometry would have {rows} rows (limit {dense_limit})")
    V = np.kron(A.V, B.V)
    V = V.reshape(A.dim_out, A.dim_env, B.dim_out, B.dim_env, A.dim_in * B.dim_in)
    V = V.transpose(0, 2, 1, 3, 4).reshape(rows, A.dim_in * B.dim_in)
    return IsometryChannel(
        V,
        A.dim_in * B.dim_in,
        A.dim_out * B.dim_out,
        A.dim_env * B.dim_env,
        f"{A.label} (x) {B.label}",
    )


def choi_matrix(ch: IsometryChannel) -> np.ndarray:
    """Unnormalized Choi operator ``sum_ij |i><j| (x) B(|i><j|)`` on ``H_a (x) H_b``."""
    W = ch._kraus
    vecs = np.transpose(W, (1, 2, 0)).reshape(ch.dim_env, ch.dim_in * ch.dim_out)
    return vecs.T @ vecs.conj()


@dataclass(frozen=True)
class ValidityReport:
    valid: bool
    min_eigenvalue: float
    trace_error: float
    isometry_error: float

    def __bool__(self) -> bool:
        return self.valid


def is_valid_channel(ch: IsometryChannel, tol: float = CP_TOL) -> ValidityReport:
    J = choi_matrix(ch)
    lo = float(np.linalg.eigvalsh(J)[0])
    partial = np.einsum("ibjb->ij", J.reshape(ch.dim_in, ch.dim_out, ch.dim_in, ch.dim_out))
    tr_err = float(np.max(np.abs(partial - np.eye(ch.dim_in))))
    iso_err = ch.isometry_error()
    ok = lo >= -tol and tr_err <= tol and iso_err <= ISOMETRY_TOL
    return ValidityReport(ok, lo, tr_err, iso_err)


@dataclass(frozen=True, eq=False)
class BlochRep:
    """Affine Bloch-ball action ``s -> t + T s`` of a qubit channel."""

    t: np.ndarray
    T: np.ndarray

    def __post_init__(self) -> None:
        t = np.array(self.t, dtype=float).reshape(3)
        T = np.array(self.T, dtype=float).reshape(3, 3)
        t.setflags(write=False)
        T.setflags(write=False)
        object.__setattr__(self, "t", t)
        object.__setattr__(self, "T", T)

    @classmethod
    def normal_form(cls, t, lambdas) -> BlochRep:
        return cls(t, np.diag(np.asarray(lambdas, dtype=float)))

    @classmethod
    def identity(cls) -> BlochRep:
        return cls(np.zeros(3), np.eye(3))

    @property
    def matrix(self) -> np.ndarray:
        F = np.zeros((4, 4))
        F[0, 0] = 1.0
        F[1:, 0] = self.t
        F[1:, 1:] = self.T
        return F

    def choi(self) -> np.ndarray:
        return bloch_choi(self)

    def min_choi_eigenvalue(self) -> float:
        return float(np.linalg.eigvalsh(self.choi())[0])

    def is_cp(self, tol: float = CP_TOL) -> bool:
        return self.min_choi_eigenvalue() >= -tol

    def to_dict(self) -> dict[str, Any]:
        return {"t": self.t.tolist(), "T": self.T.tolist()}

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> BlochRep:
        return cls(data["t"], data["T"])


def bloch_choi(rep: BlochRep) -> np.ndarray:
    """Choi operator of the qubit map with Bloch matrix ``rep.matrix``.

    The map sends ``sigma_mu`` to ``sum_nu F[nu, mu] sigma_nu``; each
    ``|i><j|`` is expanded in the Pauli basis and pushed through.
    """
    F = rep.matrix
    images = [sum(F[nu, mu] * PAULIS[nu] for nu in range(4)) for mu in range(4)]
    J = np.zeros((4, 4), dtype=complex)
    for i in range(2):
        for j in range(2):
            unit = np.zeros((2, 2), dtype=complex)
            unit[i, j] = 1.0
            out = sum(0.5 * np.trace(PAULIS[mu] @ unit) * images[mu] for mu in range(4))
            J[2 * i:2 * i + 2, 2 * j:2 * j + 2] = out
    return J


def channel_from_choi(J: np.ndarray, dim_in: int, dim_out: int, label: str = "",
                      cutoff: float = KRAUS_CUTOFF) -> IsometryChannel:
    """Stinespring dilation from a PSD Choi operator on ``H_a (x) H_b``."""
    w, v = np.linalg.eigh(J)
    if w[0] < -CP_TOL:
        raise NotCompletelyPositive(f"Choi operator has eigenvalue {w[0]:.3e}")
    keep = w > cutoff
    w, v = w[keep][::-1], v[:, keep][:, ::-1]
    kraus = [math.sqrt(lam) * v[:, k].reshape(dim_in, dim_out).T for k, lam in enumerate(w)]
    return _from_kraus(kraus, label)


def qubit_from_bloch(rep: BlochRep, x: float = 1.0) -> IsometryChannel:
    """Dilation of ``(1 - x) id + x R`` where ``R`` has Bloch representation ``rep``."""
    x = _check_prob("x", x)
    J_R = bloch_choi(rep)
    lo = float(np.linalg.eigvalsh(J_R)[0])
    if lo < -CP_TOL:
        raise NotCompletelyPositive(f"Bloch representation is not CP (min Choi eigenvalue {lo:.3e})")
    J = (1.0 - x) * choi_matrix(identity_channel(2)) + x * J_R
    return channel_from_choi(J, 2, 2, label=f"bloch(x={x})")
