"""Dense linear algebra over small finite-dimensional Hilbert spaces.

States and operators are thin immutable wrappers around complex numpy
arrays tagged with the :class:`HilbertSpace` they live in. Dimensions are
capped at :data:`MAX_DIMENSION`; everything here is meant for the handful of
levels that pre/post-selection examples need, not for performance.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import (
    DependentSpan,
    DimensionMismatch,
    NonHermitian,
    NormalizationError,
)

MAX_DIMENSION = 64
NORM_TOL = 1e-6
HERMITIAN_TOL = 1e-10
DEFAULT_DEGENERACY_TOL = 1e-8

_EPS_NORM = 4 * np.finfo(float).eps


def _frozen(arr: np.ndarray) -> np.ndarray:
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class HilbertSpace:
    dimension: int
    labels: tuple[str, ...] | None = None

    def __post_init__(self):
        dim = int(self.dimension)
        if dim < 1:
            raise DimensionMismatch(f"dimension must be >= 1, got {dim}")
        if dim > MAX_DIMENSION:
            raise DimensionMismatch(
                f"dimension {dim} exceeds the cap of {MAX_DIMENSION}")
        object.__setattr__(self, "dimension", dim)
        if self.labels is not None:
            labels = tuple(str(s) for s in self.labels)
            if len(labels) != dim:
                raise DimensionMismatch(
                    f"{len(labels)} labels for dimension {dim}")
            if len(set(labels)) != dim:
                raise DimensionMismatch("basis labels must be unique")
            object.__setattr__(self, "labels", labels)

    def index(self, label: str | int) -> int:
        if isinstance(label, (int, np.integer)):
            if not 0 <= label < self.dimension:
                raise DimensionMismatch(f"basis index {label} out of range")
            return int(label)
        if self.labels is None or label not in self.labels:
            raise DimensionMismatch(f"unknown basis label {label!r}")
        return self.labels.index(label)

    def basis(self, label: str | int) -> "Ket":
        amps = np.zeros(self.dimension, dtype=complex)
        amps[self.index(label)] = 1.0
        return Ket(self, amps)

    def identity(self) -> "Operator":
        return Operator(self, np.eye(self.dimension, dtype=complex))

    def compatible(self, other: "HilbertSpace") -> bool:
        # labels are decorative; only the dimension decides compatibility
        return self.dimension == other.dimension


def _check_space(a: HilbertSpace, b: HilbertSpace, what: str = "operands"):
    if not a.compatible(b):
        raise DimensionMismatch(
            f"{what} live in spaces of dimension {a.dimension} and {b.dimension}")


def _normalized(space: HilbertSpace, amplitudes) -> np.ndarray:
    amps = np.array(amplitudes, dtype=complex).reshape(-1)
    if amps.shape != (space.dimension,):
        raise DimensionMismatch(
            f"expected {space.dimension} amplitudes, got {amps.size}")
    if not np.all(np.isfinite(amps)):
        raise NormalizationError("amplitudes must be finite")
    norm = float(np.linalg.norm(amps))
    if abs(norm - 1.0) > NORM_TOL:
        raise NormalizationError(f"state norm {norm:.12g} deviates from 1")
    if abs(norm - 1.0) > _EPS_NORM:
        amps = amps / norm
    return _frozen(amps)


@dataclass(frozen=True, eq=False)
class Ket:
    """Normalized column vector ``|psi>``."""

    space: HilbertSpace
    amplitudes: np.ndarray = field(repr=False)

    def __post_init__(self):
        object.__setattr__(self, "amplitudes",
                           _normalized(self.space, self.amplitudes))

    @property
    def dim(self) -> int:
        return self.space.dimension

    def dag(self) -> "Bra":
        return Bra(self.space, self.amplitudes.conj())

    def __repr__(self):
        return f"Ket({np.array2string(self.amplitudes, precision=4)})"


@dataclass(frozen=True, eq=False)
class Bra:
    """Normalized row vector ``<phi|``.

    ``amplitudes`` are the row components, so ``<phi|psi> = sum(b * k)``
    with no further conjugation.
    """

    space: HilbertSpace
    amplitudes: np.ndarray = field(repr=False)

    def __post_init__(self):
        object.__setattr__(self, "amplitudes",
                           _normalized(self.space, self.amplitudes))

    @property
    def dim(self) -> int:
        return self.space.dimension

    def dag(self) -> Ket:
        return Ket(self.space, self.amplitudes.conj())

    def __repr__(self):
        return f"Bra({np.array2string(self.amplitudes, precision=4)})"


@dataclass(frozen=True, eq=False)
class Operator:
    space: HilbertSpace
    matrix: np.ndarray = field(repr=False)

    def __post_init__(self):
        mat = np.array(self.matrix, dtype=complex)
        d = self.space.dimension
        if mat.shape != (d, d):
            raise DimensionMismatch(
                f"operator shape {mat.shape} does not match dimension {d}")
        if not np.all(np.isfinite(mat)):
            raise NonHermitian("operator entries must be finite")
        object.__setattr__(self, "matrix", _frozen(mat))

    @property
    def dim(self) -> int:
        return self.space.dimension

    def dag(self) -> "Operator":
        return Operator(self.space, self.matrix.conj().T)

    def norm(self) -> float:
        return float(np.linalg.norm(self.matrix, 2))

    def is_hermitian(self, tol: float = HERMITIAN_TOL) -> bool:
        return float(np.max(np.abs(self.matrix - self.matrix.conj().T))) <= tol

    def is_unitary(self, tol: float = HERMITIAN_TOL) -> bool:
        gram = self.matrix.conj().T @ self.matrix
        return float(np.max(np.abs(gram - np.eye(self.dim)))) <= tol

    def is_projector(self, tol: float = HERMITIAN_TOL) -> bool:
        m = self.matrix
        return (self.is_hermitian(tol)
                and float(np.max(np.abs(m @ m - m))) <= tol)

    def apply(self, ket: Ket) -> np.ndarray:
        """Unnormalized ``op|ket>`` as a raw amplitude array."""
        _check_space(self.space, ket.space)
        return self.matrix @ ket.amplitudes

    def __add__(self, other: "Operator") -> "Operator":
        _check_space(self.space, other.space)
        return Operator(self.space, self.matrix + other.matrix)

    def __sub__(self, other: "Operator") -> "Operator":
        _check_space(self.space, other.space)
        return Operator(self.space, self.matrix - other.matrix)

    def __matmul__(self, other: "Operator") -> "Operator":
        _check_space(self.space, other.space)
        return Operator(self.space, self.matrix @ other.matrix)

    def __mul__(self, scalar) -> "Operator":
        return Operator(self.space, self.matrix * scalar)

    __rmul__ = __mul__


@dataclass(frozen=True, eq=False)
class SpectralDecomposition:
    """Distinct eigenvalues (strictly increasing) and their eigenprojectors."""

    space: HilbertSpace
    eigenvalues: np.ndarray
    projectors: tuple[Operator, ...]

    def __post_init__(self):
        ev = _frozen(np.array(self.eigenvalues, dtype=float).reshape(-1))
        object.__setattr__(self, "eigenvalues", ev)
        object.__setattr__(self, "projectors", tuple(self.projectors))
        if len(ev) != len(self.projectors) or len(ev) == 0:
            raise DimensionMismatch("one projector per eigenvalue required")
        if np.any(np.diff(ev) <= 0):
            raise DimensionMismatch("eigenvalues must be strictly increasing")

    def __len__(self):
        return len(self.eigenvalues)

    def __iter__(self):
        return iter(zip(self.eigenvalues, self.projectors))

    @property
    def ranks(self) -> list[int]:
        return [int(round(np.trace(p.matrix).real)) for p in self.projectors]

    def reconstruct(self) -> Operator:
        mat = sum(c * p.matrix for c, p in self)
        return Operator(self.space, mat)

    def index_of(self, value: float, tol: float = 1e-9) -> int:
        idx = int(np.argmin(np.abs(self.eigenvalues - value)))
        if abs(self.eigenvalues[idx] - value) > tol:
            raise KeyError(f"{value} is not an eigenvalue")
        return idx


def ket(amplitudes, space: HilbertSpace | None = None) -> Ket:
    amps = np.asarray(amplitudes, dtype=complex)
    return Ket(space or HilbertSpace(amps.size), amps)


def bra(amplitudes, space: HilbertSpace | None = None) -> Bra:
    amps = np.asarray(amplitudes, dtype=complex)
    return Bra(space or HilbertSpace(amps.size), amps)


def operator(matrix, space: HilbertSpace | None = None) -> Operator:
    mat = np.asarray(matrix, dtype=complex)
    return Operator(space or HilbertSpace(mat.shape[0]), mat)


def dagger(x):
    return x.dag()


def inner(b: Bra, k: Ket) -> complex:
    """``<b|k>``."""
    _check_space(b.space, k.space)
    return complex(np.dot(b.amplitudes, k.amplitudes))


def sandwich(b: Bra, op: Operator, k: Ket) -> complex:
    """``<b|op|k>``."""
    _check_space(b.space, op.space)
    _check_space(op.space, k.space)
    return complex(b.amplitudes @ (op.matrix @ k.amplitudes))


def _tensor_space(a: HilbertSpace, b: HilbertSpace) -> HilbertSpace:
    labels = None
    if a.labels is not None and b.labels is not None:
        labels = tuple(x + y for x in a.labels for y in b.labels)
        if len(set(labels)) != len(labels):
            labels = tuple(f"{x}|{y}" for x in a.labels for y in b.labels)
    return HilbertSpace(a.dimension * b.dimension, labels)


def tensor(a, b):
    """Kronecker product of two kets, two bras or two operators."""
    if type(a) is not type(b):
        raise TypeError(f"cannot tensor {type(a).__name__} with {type(b).__name__}")
    space = _tensor_space(a.space, b.space)
    if isinstance(a, Operator):
        return Operator(space, np.kron(a.matrix, b.matrix))
    return type(a)(space, np.kron(a.amplitudes, b.amplitudes))


def eigendecompose(op: Operator,
                   degeneracy_tol: float = DEFAULT_DEGENERACY_TOL
                   ) -> SpectralDecomposition:
    """Group the spectrum of a Hermitian operator into eigenprojectors.

    Adjacent eigenvalues closer than ``degeneracy_tol * max(1, ||op||)`` are
    merged; the reported eigenvalue of a merged group is the group mean.
    """
    if degeneracy_tol <= 0:
        raise ValueError("degeneracy_tol must be positive")
    if not op.is_hermitian():
        raise NonHermitian("eigendecompose requires a Hermitian operator")
    herm = 0.5 * (op.matrix + op.matrix.conj().T)
    vals, vecs = np.linalg.eigh(herm)
    scale = max(1.0, float(np.max(np.abs(vals))))
    gap = degeneracy_tol * scale

    groups: list[list[int]] = [[0]]
    for i in range(1, len(vals)):
        if vals[i] - vals[groups[-1][-1]] <= gap:
            groups[-1].append(i)
        else:
            groups.append([i])

    eigenvalues, projectors = [], []
    for g in groups:
        v = vecs[:, g]
        eigenvalues.append(float(np.mean(vals[g])))
        projectors.append(Operator(op.space, v @ v.conj().T))
    return SpectralDecomposition(op.space, eigenvalues, projectors)


def projector_onto(kets: Sequence[Ket]) -> Operator:
    """Orthogonal projector onto the span of linearly independent kets."""
    if len(kets) == 0:
        raise DependentSpan("at least one ket is required")
    space = kets[0].space
    for k in kets[1:]:
        _check_space(space, k.space)
    cols = np.column_stack([k.amplitudes for k in kets])
    gram = cols.conj().T @ cols
    if float(np.min(np.linalg.eigvalsh(gram))) <= 1e-10:
        raise DependentSpan("kets are linearly dependent")

    basis: list[np.ndarray] = []
    for v in cols.T:
        w = v.copy()
        for _ in range(2):  # twice is enough for float orthogonality
            for e in basis:
                w = w - np.vdot(e, w) * e
        basis.append(w / np.linalg.norm(w))
    q = np.column_stack(basis)
    return Operator(space, q @ q.conj().T)


# ---------------------------------------------------------------------------
# builtin observables

_SX = np.array([[0, 1], [1, 0]], dtype=complex)
_SY = np.array([[0, -1j], [1j, 0]], dtype=complex)
_SZ = np.array([[1, 0], [0, -1]], dtype=complex)

QUBIT = HilbertSpace(2, ("up", "down"))


def pauli_x(space: HilbertSpace = QUBIT) -> Operator:
    return Operator(space, _SX)


def pauli_y(space: HilbertSpace = QUBIT) -> Operator:
    return Operator(space, _SY)


def pauli_z(space: HilbertSpace = QUBIT) -> Operator:
    return Operator(space, _SZ)


def total_spin_squared(space: HilbertSpace | None = None) -> Operator:
    """``S^2 = (S1 + S2)^2`` for two spin-1/2 particles in the product basis."""
    space = space or HilbertSpace(4)
    eye = np.eye(2)
    total = np.zeros((4, 4), dtype=complex)
    for s in (_SX, _SY, _SZ):
        comp = 0.5 * (np.kron(s, eye) + np.kron(eye, s))
        total += comp @ comp
    return Operator(space, total)


def basis_projector(space: HilbertSpace, label: str | int) -> Operator:
    mat = np.zeros((space.dimension, space.dimension), dtype=complex)
    i = space.index(label)
    mat[i, i] = 1.0
    return Operator(space, mat)
