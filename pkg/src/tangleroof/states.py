"""Multi-qubit pure states, density matrices, and rank-two mixtures.

Amplitudes are indexed by bit strings in lexicographic order with qubit 0
as the most significant bit, so for three qubits index 5 = 0b101 addresses
|101>.
"""
from __future__ import annotations

import json
import warnings
from dataclasses import dataclass
from typing import Iterable

import numpy as np

__all__ = [
    "PureState",
    "DensityMatrix",
    "RankTwoMixture",
    "RankExceededError",
    "make_ghz",
    "make_w",
    "superpose",
    "inner_product",
    "partial_trace",
    "rank_two_eigendecomposition",
    "load_state",
]

HERMITICITY_TOL = 1e-12
ORTHOGONALITY_TOL = 1e-10
RANK_TOL = 1e-10


class RankExceededError(Exception):
    """Density matrix has numerical rank larger than two."""


def _readonly(a: np.ndarray) -> np.ndarray:
    a = np.array(a)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class PureState:
    """Pure state of ``n_qubits`` qubits; amplitudes need not be normalized."""

    n_qubits: int
    amplitudes: np.ndarray

    def __post_init__(self):
        n = self.n_qubits
        if not isinstance(n, (int, np.integer)) or n < 1:
            raise ValueError(f"n_qubits must be a positive integer, got {n!r}")
        amps = np.asarray(self.amplitudes, dtype=complex).ravel()
        if amps.shape[0] != 2**n:
            raise ValueError(
                f"expected {2**n} amplitudes for {n} qubits, got {amps.shape[0]}"
            )
        if not np.all(np.isfinite(amps.view(float))):
            raise ValueError("amplitudes must be finite")
        object.__setattr__(self, "n_qubits", int(n))
        object.__setattr__(self, "amplitudes", _readonly(amps))

    @property
    def dim(self) -> int:
        return 2**self.n_qubits

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def normalized(self) -> "PureState":
        n = self.norm()
        if n == 0.0:
            raise ValueError("cannot normalize the zero vector")
        return PureState(self.n_qubits, self.amplitudes / n)

    def density_matrix(self) -> "DensityMatrix":
        v = self.normalized().amplitudes
        return DensityMatrix(self.n_qubits, np.outer(v, v.conj()))


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """Hermitian, unit-trace matrix on ``n_qubits`` qubits."""

    n_qubits: int
    matrix: np.ndarray

    def __post_init__(self):
        n = int(self.n_qubits)
        m = np.asarray(self.matrix, dtype=complex)
        d = 2**n
        if m.shape != (d, d):
            raise ValueError(f"expected a {d}x{d} matrix, got shape {m.shape}")
        if np.max(np.abs(m - m.conj().T)) > HERMITICITY_TOL:
            raise ValueError("matrix is not Hermitian within 1e-12")
        if abs(np.trace(m).real - 1.0) > HERMITICITY_TOL or abs(np.trace(m).imag) > HERMITICITY_TOL:
            raise ValueError("matrix trace differs from 1 beyond 1e-12")
        object.__setattr__(self, "n_qubits", n)
        object.__setattr__(self, "matrix", _readonly(m))

    @property
    def dim(self) -> int:
        return 2**self.n_qubits

    def min_eigenvalue(self) -> float:
        return float(np.linalg.eigvalsh(self.matrix)[0])


@dataclass(frozen=True, eq=False)
class RankTwoMixture:
    """Orthonormal eigenpair (psi1, psi2) mixed with weight p on psi1.

    Represents rho(p) = p |psi1><psi1| + (1-p) |psi2><psi2|; the segment
    p in [0, 1] is the vertical axis of the Bloch ball spanned by the pair.
    """

    psi1: PureState
    psi2: PureState
    p: float
    degenerate_rank: bool = False

    def __post_init__(self):
        if self.psi1.n_qubits != self.psi2.n_qubits:
            raise ValueError("eigenvectors act on different qubit counts")
        for name, psi in (("psi1", self.psi1), ("psi2", self.psi2)):
            if abs(psi.norm() - 1.0) > 1e-10:
                raise ValueError(f"{name} is not normalized")
        if abs(inner_product(self.psi1, self.psi2)) > ORTHOGONALITY_TOL:
            raise ValueError("eigenvectors are not orthogonal within 1e-10")
        p = float(self.p)
        if not 0.0 <= p <= 1.0:
            raise ValueError(f"mixing weight p must lie in [0, 1], got {p}")
        object.__setattr__(self, "p", p)

    @property
    def n_qubits(self) -> int:
        return self.psi1.n_qubits

    def density_matrix(self) -> DensityMatrix:
        v1 = self.psi1.amplitudes
        v2 = self.psi2.amplitudes
        m = self.p * np.outer(v1, v1.conj()) + (1.0 - self.p) * np.outer(v2, v2.conj())
        return DensityMatrix(self.n_qubits, m)

    def at(self, p: float) -> "RankTwoMixture":
        """Same eigenpair at a different mixing weight."""
        return RankTwoMixture(self.psi1, self.psi2, p, self.degenerate_rank)


def make_ghz(n: int) -> PureState:
    """|00...0> + |11...1> over sqrt(2) on n >= 2 qubits."""
    if n < 2:
        raise ValueError("GHZ state needs at least 2 qubits")
    amps = np.zeros(2**n, dtype=complex)
    amps[0] = amps[-1] = 1.0 / np.sqrt(2.0)
    return PureState(n, amps)


def make_w(n: int) -> PureState:
    """Equal superposition of the n weight-1 bit strings, n >= 2 qubits."""
    if n < 2:
        raise ValueError("W state needs at least 2 qubits")
    amps = np.zeros(2**n, dtype=complex)
    for k in range(n):
        amps[1 << k] = 1.0 / np.sqrt(n)
    return PureState(n, amps)


def superpose(a: PureState, b: PureState, alpha: complex, beta: complex) -> PureState:
    """alpha*a + beta*b, amplitude-wise; the result is not renormalized."""
    if a.n_qubits != b.n_qubits:
        raise ValueError("cannot superpose states on different qubit counts")
    return PureState(a.n_qubits, alpha * a.amplitudes + beta * b.amplitudes)


def inner_product(a: PureState, b: PureState) -> complex:
    """<a|b>, conjugate-linear in the first argument."""
    if a.n_qubits != b.n_qubits:
        raise ValueError("dimension mismatch in inner product")
    return complex(np.vdot(a.amplitudes, b.amplitudes))


def partial_trace(state: PureState, keep: Iterable[int]) -> DensityMatrix:
    """Reduced density matrix of ``state`` on the ``keep`` qubits.

    ``keep`` is a nonempty set of qubit indices; the traced-out qubits are
    the complement. Kept qubits appear in ascending index order.
    """
    keep = sorted(set(int(k) for k in keep))
    n = state.n_qubits
    if not keep:
        raise ValueError("keep set must be nonempty")
    if keep[0] < 0 or keep[-1] >= n:
        raise ValueError(f"keep indices must lie in [0, {n})")
    drop = [q for q in range(n) if q not in keep]
    psi = state.normalized().amplitudes.reshape([2] * n)
    # qubit q is tensor axis q because qubit 0 is the most significant bit
    m = psi.transpose(keep + drop).reshape(2 ** len(keep), -1)
    return DensityMatrix(len(keep), m @ m.conj().T)


def _fix_phase(v: np.ndarray) -> np.ndarray:
    """Rotate the global phase so the largest-magnitude entry is real positive."""
    k = int(np.argmax(np.abs(v)))
    ph = np.angle(v[k])
    return v * np.exp(-1j * ph)


def _lex_key(v: np.ndarray) -> tuple:
    return tuple(np.stack([v.real, v.imag], axis=1).ravel())


def rank_two_eigendecomposition(rho: DensityMatrix, tol: float = RANK_TOL) -> RankTwoMixture:
    """Spectral decomposition of a numerically rank-<=2 density matrix.

    Returns the mixture with p = larger eigenvalue. Eigenvector phases are
    fixed so the largest-magnitude amplitude is real positive; a degenerate
    p = 0.5 pair is ordered by descending amplitude lexicographic order.

    Raises RankExceededError when a third eigenvalue exceeds ``tol``; a
    rank-one input sets ``degenerate_rank`` with psi2 taken from the kernel.
    """
    w, vecs = np.linalg.eigh(rho.matrix)
    if w.shape[0] > 2 and w[-3] > tol:
        raise RankExceededError(
            f"third eigenvalue {w[-3]:.3e} exceeds rank tolerance {tol:.1e}"
        )
    lam1, lam2 = float(w[-1]), float(w[-2])
    v1 = _fix_phase(vecs[:, -1])
    v2 = _fix_phase(vecs[:, -2])
    if abs(lam1 - lam2) <= tol and _lex_key(v2) > _lex_key(v1):
        v1, v2 = v2, v1
        lam1, lam2 = lam2, lam1
    degenerate = lam2 <= tol
    p = 1.0 if degenerate else lam1 / (lam1 + lam2)
    p = min(max(p, 0.0), 1.0)
    n = rho.n_qubits
    return RankTwoMixture(PureState(n, v1), PureState(n, v2), p, degenerate)


def load_state(path: str, renormalize: bool = False) -> PureState:
    """Read a state from a JSON file {"n": int, "amplitudes": [[re, im], ...]}.

    Warns when the norm is off by more than 1e-6; renormalizes only when
    ``renormalize`` is set.
    """
    with open(path, "r", encoding="utf-8") as fh:
        doc = json.load(fh)
    if not isinstance(doc, dict) or "n" not in doc or "amplitudes" not in doc:
        raise ValueError(f"{path}: expected an object with fields 'n' and 'amplitudes'")
    n = doc["n"]
    if not isinstance(n, int) or n < 1:
        raise ValueError(f"{path}: field 'n' must be a positive integer")
    raw = doc["amplitudes"]
    if not isinstance(raw, list) or len(raw) != 2**n:
        raise ValueError(f"{path}: field 'amplitudes' must list {2**n} [re, im] pairs")
    try:
        pairs = np.asarray(raw, dtype=float)
    except (TypeError, ValueError) as exc:
        raise ValueError(f"{path}: amplitudes must be [re, im] number pairs") from exc
    if pairs.shape != (2**n, 2):
        raise ValueError(f"{path}: amplitudes must be [re, im] number pairs")
    state = PureState(n, pairs[:, 0] + 1j * pairs[:, 1])
    if renormalize:
        return state.normalized()
    if abs(state.norm() - 1.0) > 1e-6:
        warnings.warn(f"{path}: state norm {state.norm():.6g} is off by more than 1e-6")
    return state
