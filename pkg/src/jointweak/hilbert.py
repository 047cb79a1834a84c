"""Dense complex linear algebra for small Hilbert spaces.

States are flat complex vectors, operators are square complex matrices.
The subsystem ordering convention is fixed once, here: in every tensor
product the left factor is the first subsystem (side A / particle A), so
``tensor(a, b)`` realises ``a (x) b`` with ``a`` acting on the first factor.
Every other module builds its composites through :func:`tensor` and
inherits the convention.

All values are immutable after construction and all operations are pure,
so everything in this module is safe to share across threads.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, NonCommuting, NormalizationError, NotHermitian

# Tolerances used across the package: structural checks (commutators,
# involutory/idempotent tests, unitarity) get 1e-10, normalisation and
# hermiticity of inputs get 1e-12.  Double precision leaves ample headroom
# for the <= 16-dimensional matrices handled here.
STRUCTURAL_TOL = 1e-10
NORM_TOL = 1e-12


def _frozen(arr: np.ndarray) -> np.ndarray:
    out = np.array(arr, dtype=complex)
    if not np.all(np.isfinite(out.view(np.float64))):
        raise ValueError("entries must be finite")
    out.setflags(write=False)
    return out


@dataclass(frozen=True)
class Ket:
    """State vector on a finite-dimensional Hilbert space.

    When ``normalized`` is set the constructor verifies sum |a_i|^2 = 1
    within 1e-12 and raises :class:`NormalizationError` otherwise.
    """

    amplitudes: np.ndarray
    normalized: bool = False

    def __post_init__(self):
        arr = _frozen(np.asarray(self.amplitudes).reshape(-1))
        if arr.size == 0:
            raise ValueError("empty state vector")
        object.__setattr__(self, "amplitudes", arr)
        if self.normalized and abs(self.norm() - 1.0) > NORM_TOL:
            raise NormalizationError(
                f"state flagged normalized has norm {self.norm():.15g}"
            )

    @property
    def dim(self) -> int:
        return self.amplitudes.size

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def normalize(self) -> "Ket":
        n = self.norm()
        if n < NORM_TOL:
            raise NormalizationError("cannot normalize a zero vector")
        return Ket(self.amplitudes / n, normalized=True)

    def overlap(self, other: "Ket") -> complex:
        """Inner product <self|other> (self is conjugated)."""
        if self.dim != other.dim:
            raise DimensionMismatch(f"{self.dim} vs {other.dim}")
        return complex(np.vdot(self.amplitudes, other.amplitudes))


@dataclass(frozen=True)
class Operator:
    """Square complex matrix, optionally validated against structural flags.

    Flags are promises checked at construction: ``hermitian`` (max-norm of
    M - M^dag below 1e-12), ``involutory`` (M^2 = I within 1e-12) and
    ``idempotent`` (M^2 = M within 1e-12).
    """

    entries: np.ndarray
    hermitian: bool = False
    involutory: bool = False
    idempotent: bool = False

    def __post_init__(self):
        arr = np.asarray(self.entries, dtype=complex)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
            raise ValueError(f"operator must be square, got shape {arr.shape}")
        arr = _frozen(arr)
        object.__setattr__(self, "entries", arr)
        if self.hermitian and _maxabs(arr - arr.conj().T) > NORM_TOL:
            raise NotHermitian("operator flagged hermitian is not")
        if self.involutory and _maxabs(arr @ arr - np.eye(self.dim)) > NORM_TOL:
            raise ValueError("operator flagged involutory does not square to I")
        if self.idempotent and _maxabs(arr @ arr - arr) > NORM_TOL:
            raise ValueError("operator flagged idempotent does not square to itself")

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    def apply(self, state: Ket) -> Ket:
        if self.dim != state.dim:
            raise DimensionMismatch(f"{self.dim} vs {state.dim}")
        return Ket(self.entries @ state.amplitudes)

    def matmul(self, other: "Operator") -> "Operator":
        if self.dim != other.dim:
            raise DimensionMismatch(f"{self.dim} vs {other.dim}")
        return Operator(self.entries @ other.entries)

    def dagger(self) -> "Operator":
        return Operator(self.entries.conj().T)


def _maxabs(arr: np.ndarray) -> float:
    return float(np.max(np.abs(arr))) if arr.size else 0.0


def ket(values, normalized: bool = False) -> Ket:
    return Ket(np.asarray(values, dtype=complex), normalized=normalized)


def operator(values, **flags) -> Operator:
    return Operator(np.asarray(values, dtype=complex), **flags)


def identity(dim: int) -> Operator:
    return Operator(np.eye(dim), hermitian=True, involutory=True, idempotent=True)


def sigma_x() -> Operator:
    return Operator(np.array([[0, 1], [1, 0]]), hermitian=True, involutory=True)


def sigma_y() -> Operator:
    return Operator(np.array([[0, -1j], [1j, 0]]), hermitian=True, involutory=True)


def sigma_z() -> Operator:
    return Operator(np.array([[1, 0], [0, -1]]), hermitian=True, involutory=True)


def projector(state: Ket) -> Operator:
    """Rank-1 projector |state><state| (state normalized first)."""
    v = state.normalize().amplitudes
    return Operator(np.outer(v, v.conj()), hermitian=True, idempotent=True)


def tensor(a, b):
    """Kronecker product of two kets or two operators; left factor first."""
    if isinstance(a, Ket) and isinstance(b, Ket):
        return Ket(np.kron(a.amplitudes, b.amplitudes))
    if isinstance(a, Operator) and isinstance(b, Operator):
        return Operator(np.kron(a.entries, b.entries))
    raise TypeError("tensor expects two Kets or two Operators")


def expm_hermitian(h: Operator, scale: complex) -> Operator:
    """exp(scale * h) for Hermitian h, via eigendecomposition.

    Exact to rounding for the small matrices used here; unitary whenever
    ``scale`` is purely imaginary.
    """
    m = h.entries
    if _maxabs(m - m.conj().T) > NORM_TOL:
        raise NotHermitian("expm_hermitian requires a Hermitian generator")
    evals, vecs = np.linalg.eigh(m)
    return Operator((vecs * np.exp(scale * evals)) @ vecs.conj().T)


def check_commute(a: Operator, b: Operator) -> bool:
    """True iff the max-norm of [a, b] is below 1e-10."""
    if a.dim != b.dim:
        raise DimensionMismatch(f"{a.dim} vs {b.dim}")
    return _maxabs(a.entries @ b.entries - b.entries @ a.entries) < STRUCTURAL_TOL


def classify(a: Operator) -> str:
    """Structural class of a Hermitian operator.

    Returns ``"involutory"`` (squares to I), ``"idempotent"`` (squares to
    itself), ``"both"`` (the identity satisfies both) or ``"neither"``,
    tested at tolerance 1e-10.
    """
    m = a.entries
    if _maxabs(m - m.conj().T) > STRUCTURAL_TOL:
        raise NotHermitian("classify requires a Hermitian operator")
    sq = m @ m
    inv = _maxabs(sq - np.eye(a.dim)) < STRUCTURAL_TOL
    idem = _maxabs(sq - m) < STRUCTURAL_TOL
    if inv and idem:
        return "both"
    if inv:
        return "involutory"
    if idem:
        return "idempotent"
    return "neither"


def is_involutory(a: Operator) -> bool:
    return classify(a) in ("involutory", "both")


def is_idempotent(a: Operator) -> bool:
    return classify(a) in ("idempotent", "both")


def joint_eigenbasis(a: Operator, b: Operator):
    """Simultaneous eigenbasis of a commuting Hermitian pair.

    Returns ``(vectors, evals_a, evals_b)`` where column k of ``vectors``
    is a joint eigenvector with eigenvalues ``evals_a[k]``, ``evals_b[k]``.
    Diagonalizes ``a`` first, then ``b`` restricted to each degenerate
    eigenspace of ``a``.
    """
    if not check_commute(a, b):
        raise NonCommuting("joint eigenbasis requires a commuting pair")
    evals_a, vecs = np.linalg.eigh(a.entries)
    d = a.dim
    evals_b = np.zeros(d)
    bp = vecs.conj().T @ b.entries @ vecs
    i = 0
    while i < d:
        j = i + 1
        while j < d and evals_a[j] - evals_a[i] < 1e-9:
            j += 1
        blk_vals, blk_vecs = np.linalg.eigh(bp[i:j, i:j])
        vecs[:, i:j] = vecs[:, i:j] @ blk_vecs
        evals_b[i:j] = blk_vals
        i = j
    vecs.setflags(write=False)
    evals_a.setflags(write=False)
    evals_b.setflags(write=False)
    return vecs, evals_a, evals_b
