"""Dense complex linear algebra for small Hermitian matrices.

Everything downstream (projection lattices, spectral families, the spectral
order) reduces to eigendecompositions of matrices of dimension at most a few
dozen.  The solver here is a cyclic complex Jacobi iteration: slow in
asymptotic terms but deterministic, accurate to rounding, and exact on
already-diagonal input, which keeps order decisions reproducible.

All numerical thresholds live in one :class:`Tolerance` record.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

import numpy as np

from .errors import DimMismatch, InvalidProjection, NoConvergence, NotHermitian, NotPSD


@dataclass(frozen=True)
class Tolerance:
    herm: float = 1e-10
    cluster: float = 1e-8
    proj: float = 1e-9
    recon: float = 1e-9
    psd: float = 1e-9
    kernel: float = 1e-9
    # Jacobi stopping rule: off-diagonal Frobenius norm relative to max(1, |M|_max)
    offdiag: float = 1e-12
    max_sweeps: int = 100

    def replace(self, **changes) -> "Tolerance":
        fields = {k: getattr(self, k) for k in self.__dataclass_fields__}
        fields.update({k: v for k, v in changes.items() if v is not None})
        return Tolerance(**fields)


DEFAULT_TOL = Tolerance()


def as_matrix(m) -> np.ndarray:
    """Copy ``m`` into a read-only square complex array."""
    a = np.array(m, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] < 1:
        raise DimMismatch(f"expected a non-empty square matrix, got shape {a.shape}")
    a.setflags(write=False)
    return a


def max_norm(m: np.ndarray) -> float:
    return float(np.max(np.abs(m))) if m.size else 0.0


def hermitian_defect(m: np.ndarray) -> float:
    return max_norm(m - m.conj().T)


def _scale(m: np.ndarray) -> float:
    return max(1.0, max_norm(m))


def jacobi_eigh(m: np.ndarray, tol: Tolerance = DEFAULT_TOL) -> Tuple[np.ndarray, np.ndarray]:
    """Eigenvalues (ascending) and orthonormal eigenvectors of a Hermitian matrix.

    Cyclic sweeps over the upper triangle in row order.  Each step zeroes one
    off-diagonal entry with a unitary rotation that first removes the phase of
    the entry and then applies the real symmetric Jacobi rotation.
    """
    a = np.array(m, dtype=complex)
    n = a.shape[0]
    a = (a + a.conj().T) / 2
    v = np.eye(n, dtype=complex)
    threshold = tol.offdiag * _scale(a)
    skip = 1e-300

    def offdiag_norm() -> float:
        return float(np.linalg.norm(a - np.diag(np.diag(a))))

    sweeps = 0
    while offdiag_norm() > threshold:
        if sweeps >= tol.max_sweeps:
            raise NoConvergence(f"Jacobi iteration did not converge in {tol.max_sweeps} sweeps")
        sweeps += 1
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                mag = abs(apq)
                if mag < skip:
                    continue
                phase = apq / mag
                theta = (a[q, q].real - a[p, p].real) / (2.0 * mag)
                t = math.copysign(1.0, theta) / (abs(theta) + math.sqrt(1.0 + theta * theta))
                c = 1.0 / math.sqrt(1.0 + t * t)
                s = t * c
                cph = phase.conjugate()
                rot = np.array([[c, s], [-s * cph, c * cph]], dtype=complex)
                idx = [p, q]
                a[:, idx] = a[:, idx] @ rot
                a[idx, :] = rot.conj().T @ a[idx, :]
                a[p, q] = a[q, p] = 0.0
                a[p, p] = a[p, p].real
                a[q, q] = a[q, q].real
                v[:, idx] = v[:, idx] @ rot
    w = np.real(np.diag(a)).copy()
    order = np.argsort(w, kind="stable")
    return w[order], v[:, order]


class Projection:
    """An orthogonal projection on C^n, stored with an orthonormal basis of its range.

    Keeping the basis (and, where available, a basis of the orthogonal
    complement) means lattice operations never accumulate drift: the matrix is
    always rebuilt as ``B B*`` from orthonormal columns.
    """

    __slots__ = ("matrix", "rank", "dim", "_basis", "_perp", "_lock")

    def __init__(self, basis: np.ndarray, perp: Optional[np.ndarray] = None):
        basis = np.asarray(basis, dtype=complex)
        if basis.ndim != 2:
            raise InvalidProjection("basis must be a 2-d array of column vectors")
        self.dim = basis.shape[0]
        self.rank = basis.shape[1]
        m = basis @ basis.conj().T
        m = (m + m.conj().T) / 2
        m.setflags(write=False)
        basis.setflags(write=False)
        self.matrix = m
        self._basis = basis
        if perp is not None:
            perp = np.asarray(perp, dtype=complex)
            perp.setflags(write=False)
        self._perp = perp
        self._lock = threading.Lock()

    @classmethod
    def zero(cls, dim: int) -> "Projection":
        return cls(np.zeros((dim, 0), dtype=complex), np.eye(dim, dtype=complex))

    @classmethod
    def identity(cls, dim: int) -> "Projection":
        return cls(np.eye(dim, dtype=complex), np.zeros((dim, 0), dtype=complex))

    @classmethod
    def from_matrix(cls, m, tol: Tolerance = DEFAULT_TOL) -> "Projection":
        """Validate a Hermitian idempotent and clean it (eigenvalues snapped to 0/1)."""
        a = as_matrix(m)
        if hermitian_defect(a) > tol.herm:
            raise InvalidProjection("matrix is not Hermitian")
        if max_norm(a @ a - a) > tol.proj:
            raise InvalidProjection("matrix is not idempotent")
        w, v = jacobi_eigh(a, tol)
        keep = w > 0.5
        rank = int(np.count_nonzero(keep))
        if abs(float(np.trace(a).real) - rank) > tol.proj * a.shape[0]:
            raise InvalidProjection("trace does not match rank")
        return cls(v[:, keep], v[:, ~keep])

    @classmethod
    def coordinate(cls, dim: int, indices: Sequence[int]) -> "Projection":
        """Projection onto span{e_i : i in indices}."""
        eye = np.eye(dim, dtype=complex)
        idx = sorted(set(int(i) for i in indices))
        rest = [i for i in range(dim) if i not in idx]
        return cls(eye[:, idx], eye[:, rest])

    @classmethod
    def span(cls, vectors, tol: Tolerance = DEFAULT_TOL) -> "Projection":
        """Projection onto the span of the given column vectors."""
        vecs = np.asarray(vectors, dtype=complex)
        if vecs.ndim == 1:
            vecs = vecs[:, None]
        gram = vecs @ vecs.conj().T
        w, v = jacobi_eigh(gram, tol)
        keep = w > tol.kernel * _scale(gram)
        return cls(v[:, keep], v[:, ~keep])

    @property
    def basis(self) -> np.ndarray:
        return self._basis

    @property
    def perp_basis(self) -> np.ndarray:
        with self._lock:
            if self._perp is None:
                w, v = jacobi_eigh(np.eye(self.dim) - self.matrix)
                perp = v[:, w > 0.5]
                perp.setflags(write=False)
                self._perp = perp
            return self._perp

    def is_zero(self) -> bool:
        return self.rank == 0

    def is_one(self) -> bool:
        return self.rank == self.dim

    def __repr__(self) -> str:
        return f"Projection(dim={self.dim}, rank={self.rank})"


@dataclass(frozen=True)
class Cluster:
    """One eigenvalue cluster: representative value, eigenprojection, multiplicity."""

    value: float
    projection: Projection
    multiplicity: int


@dataclass(frozen=True)
class Eigendecomposition:
    eigenvalues: np.ndarray  # raw ascending eigenvalues, one per dimension
    vectors: np.ndarray  # columns match eigenvalues
    clusters: Tuple[Cluster, ...]

    def reconstruct(self) -> np.ndarray:
        return sum(c.value * c.projection.matrix for c in self.clusters)


def cluster_bounds(values: np.ndarray, gap: float) -> list:
    """Single-linkage grouping of an ascending array: list of (start, stop) slices."""
    bounds = []
    start = 0
    for i in range(1, len(values)):
        if values[i] - values[i - 1] > gap:
            bounds.append((start, i))
            start = i
    bounds.append((start, len(values)))
    return bounds


def _decompose(w: np.ndarray, v: np.ndarray, scale: float, tol: Tolerance) -> Eigendecomposition:
    n = len(w)
    clusters = []
    for lo, hi in cluster_bounds(w, tol.cluster * scale):
        value = float(np.mean(w[lo:hi])) if hi - lo > 1 else float(w[lo])
        perp = np.hstack([v[:, :lo], v[:, hi:]])
        clusters.append(Cluster(value, Projection(v[:, lo:hi], perp), hi - lo))
    v = v.copy()
    w = w.copy()
    v.setflags(write=False)
    w.setflags(write=False)
    assert sum(c.multiplicity for c in clusters) == n
    return Eigendecomposition(w, v, tuple(clusters))


class HermitianOperator:
    """A Hermitian n x n matrix together with its (eagerly computed) eigendecomposition."""

    __slots__ = ("matrix", "tol", "eig")

    def __init__(self, matrix, tol: Tolerance = DEFAULT_TOL):
        m = as_matrix(matrix)
        if hermitian_defect(m) > tol.herm:
            raise NotHermitian(f"matrix is not Hermitian (defect {hermitian_defect(m):.3g})")
        m = (m + m.conj().T) / 2
        m.setflags(write=False)
        self.matrix = m
        self.tol = tol
        w, v = jacobi_eigh(m, tol)
        self.eig = _decompose(w, v, _scale(m), tol)

    @classmethod
    def from_eigenvectors(cls, values, vectors, tol: Tolerance = DEFAULT_TOL) -> "HermitianOperator":
        """Build ``V diag(values) V*`` from a known unitary ``V`` without re-diagonalizing.

        This is how operators with prescribed spectral data (functional
        calculus, operators in an abelian context) are constructed, so their
        eigenvalues are exactly the given values.
        """
        w = np.asarray(values, dtype=float)
        v = np.asarray(vectors, dtype=complex)
        if v.ndim != 2 or v.shape[0] != v.shape[1] or v.shape[1] != len(w):
            raise DimMismatch("need a square unitary and one value per column")
        if max_norm(v.conj().T @ v - np.eye(len(w))) > tol.proj:
            raise DimMismatch("eigenvector matrix is not unitary")
        order = np.argsort(w, kind="stable")
        w, v = w[order], v[:, order]
        m = (v * w) @ v.conj().T
        m = (m + m.conj().T) / 2
        m.setflags(write=False)
        self = object.__new__(cls)
        self.matrix = m
        self.tol = tol
        self.eig = _decompose(w, v, _scale(m), tol)
        return self

    @classmethod
    def diagonal(cls, values, tol: Tolerance = DEFAULT_TOL) -> "HermitianOperator":
        values = np.asarray(values, dtype=float)
        return cls(np.diag(values).astype(complex), tol)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @property
    def clusters(self) -> Tuple[Cluster, ...]:
        return self.eig.clusters

    @property
    def spectrum(self) -> Tuple[float, ...]:
        return tuple(c.value for c in self.eig.clusters)

    def min_eigenvalue(self) -> float:
        return float(self.eig.eigenvalues[0])

    def max_eigenvalue(self) -> float:
        return float(self.eig.eigenvalues[-1])

    def commutes_with(self, m: np.ndarray) -> bool:
        m = np.asarray(m)
        return max_norm(self.matrix @ m - m @ self.matrix) <= self.tol.proj * _scale(self.matrix)

    def __neg__(self) -> "HermitianOperator":
        return HermitianOperator.from_eigenvectors(-self.eig.eigenvalues, self.eig.vectors, self.tol)

    def __add__(self, other: "HermitianOperator") -> "HermitianOperator":
        _same_dim(self, other)
        return HermitianOperator(self.matrix + other.matrix, self.tol)

    def __sub__(self, other: "HermitianOperator") -> "HermitianOperator":
        _same_dim(self, other)
        return HermitianOperator(self.matrix - other.matrix, self.tol)

    def __rmul__(self, s: float) -> "HermitianOperator":
        s = float(s)
        return HermitianOperator.from_eigenvectors(s * self.eig.eigenvalues, self.eig.vectors, self.tol)

    def __repr__(self) -> str:
        spec = ", ".join(f"{x:.6g}" for x in self.spectrum)
        return f"HermitianOperator(dim={self.dim}, spectrum=[{spec}])"


def _same_dim(a, b) -> None:
    if a.dim != b.dim:
        raise DimMismatch(f"dimensions differ: {a.dim} vs {b.dim}")


def eigh(m: HermitianOperator) -> Eigendecomposition:
    return m.eig


def is_psd(m: HermitianOperator) -> bool:
    return m.min_eigenvalue() >= -m.tol.psd


def kernel_projection(m: HermitianOperator) -> Projection:
    """Projection onto the eigenvectors of a PSD operator with eigenvalue <= kernel tolerance."""
    if not is_psd(m):
        raise NotPSD(f"minimum eigenvalue {m.min_eigenvalue():.3g} is negative")
    w, v = m.eig.eigenvalues, m.eig.vectors
    keep = w <= m.tol.kernel
    return Projection(v[:, keep], v[:, ~keep])


def proj_eq(p: Projection, q: Projection, tol: Tolerance = DEFAULT_TOL) -> bool:
    if p.dim != q.dim:
        raise DimMismatch(f"dimensions differ: {p.dim} vs {q.dim}")
    return p.rank == q.rank and max_norm(p.matrix - q.matrix) <= tol.proj
