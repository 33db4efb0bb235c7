"""The projection lattice of M_n and the Boolean sublattices of abelian contexts.

Order is range inclusion, meets are range intersections (computed as the
kernel of ``(1-P) + (1-Q)``), joins come from meets by de Morgan.  An
:class:`AbelianContext` is a resolution of the identity into orthogonal atoms;
its projection lattice is the finite Boolean algebra of atom subsets, indexed
by bitmask.  ``das_outer_proj`` / ``das_inner_proj`` are the left and right
adjoints of the inclusion of that Boolean lattice into all projections.
"""

from __future__ import annotations

import threading
from functools import reduce
from typing import Iterable, List, Optional, Sequence

import numpy as np

from .errors import DimMismatch, InvalidContext, TooManyAtoms
from .linalg import (
    DEFAULT_TOL,
    HermitianOperator,
    Projection,
    Tolerance,
    max_norm,
    kernel_projection,
    proj_eq,
)

__all__ = [
    "Projection",
    "AbelianContext",
    "proj_eq",
    "proj_leq",
    "orthogonal",
    "complement",
    "meet",
    "join",
    "meet_many",
    "join_many",
    "das_outer_proj",
    "das_inner_proj",
    "enumerate_lattice",
    "MAX_ATOMS",
]

MAX_ATOMS = 16


def _check_dims(*ps: Projection) -> int:
    dims = {p.dim for p in ps}
    if len(dims) != 1:
        raise DimMismatch(f"projections of different dimensions: {sorted(dims)}")
    return dims.pop()


def proj_leq(p: Projection, q: Projection, tol: Tolerance = DEFAULT_TOL) -> bool:
    """P <= Q iff QP = P (range of P inside range of Q)."""
    _check_dims(p, q)
    if p.rank == 0 or q.rank == q.dim:
        return True
    if p.rank > q.rank:
        return False
    return max_norm(q.matrix @ p.matrix - p.matrix) <= tol.proj


def orthogonal(p: Projection, q: Projection, tol: Tolerance = DEFAULT_TOL) -> bool:
    _check_dims(p, q)
    return max_norm(p.matrix @ q.matrix) <= tol.proj


def complement(p: Projection) -> Projection:
    return Projection(p.perp_basis, p.basis)


def meet(p: Projection, q: Projection, tol: Tolerance = DEFAULT_TOL) -> Projection:
    n = _check_dims(p, q)
    if q.rank == n or p.rank == 0:
        return p
    if p.rank == n or q.rank == 0:
        return q
    gap = HermitianOperator(2 * np.eye(n) - p.matrix - q.matrix, tol)
    return kernel_projection(gap)


def join(p: Projection, q: Projection, tol: Tolerance = DEFAULT_TOL) -> Projection:
    return complement(meet(complement(p), complement(q), tol))


def meet_many(ps: Sequence[Projection], tol: Tolerance = DEFAULT_TOL) -> Projection:
    ps = list(ps)
    if not ps:
        raise ValueError("meet_many needs at least one projection")
    _check_dims(*ps)
    return reduce(lambda a, b: meet(a, b, tol), ps)


def join_many(ps: Sequence[Projection], tol: Tolerance = DEFAULT_TOL) -> Projection:
    ps = list(ps)
    if not ps:
        raise ValueError("join_many needs at least one projection")
    _check_dims(*ps)
    return reduce(lambda a, b: join(a, b, tol), ps)


class AbelianContext:
    """An abelian subalgebra of M_n given by its atoms.

    The atoms are mutually orthogonal non-zero projections summing to the
    identity.  Lattice elements are indexed by bitmasks over the atom list:
    bit ``i`` set means atom ``i`` is included.
    """

    def __init__(self, atoms: Sequence[Projection], tol: Tolerance = DEFAULT_TOL):
        atoms = list(atoms)
        if not atoms:
            raise InvalidContext("a context needs at least one atom")
        dim = _check_dims(*atoms)
        for i, a in enumerate(atoms):
            if a.rank == 0:
                raise InvalidContext(f"atom {i} is the zero projection")
        for i in range(len(atoms)):
            for j in range(i + 1, len(atoms)):
                if not orthogonal(atoms[i], atoms[j], tol):
                    raise InvalidContext(f"atoms {i} and {j} are not orthogonal")
        total = sum(a.matrix for a in atoms)
        if max_norm(total - np.eye(dim)) > tol.proj:
            raise InvalidContext("atoms do not sum to the identity")
        self.atoms = tuple(atoms)
        self.dim = dim
        self.tol = tol
        self._lattice: Optional[List[Projection]] = None
        self._lock = threading.Lock()

    @classmethod
    def from_blocks(cls, basis, blocks: Sequence[int], tol: Tolerance = DEFAULT_TOL) -> "AbelianContext":
        """Atoms spanned by consecutive column blocks of an orthonormal basis."""
        basis = np.asarray(basis, dtype=complex)
        n = basis.shape[0]
        if basis.shape != (n, n):
            raise InvalidContext("basis must be a square matrix of column vectors")
        if max_norm(basis.conj().T @ basis - np.eye(n)) > tol.proj:
            raise InvalidContext("basis is not orthonormal")
        if any(b <= 0 for b in blocks) or sum(blocks) != n:
            raise InvalidContext(f"block sizes {list(blocks)} do not partition {n}")
        atoms = []
        start = 0
        for b in blocks:
            cols = np.arange(start, start + b)
            rest = np.setdiff1d(np.arange(n), cols)
            atoms.append(Projection(basis[:, cols], basis[:, rest]))
            start += b
        return cls(atoms, tol)

    @classmethod
    def coordinate(cls, dim: int, blocks: Optional[Sequence[int]] = None, tol: Tolerance = DEFAULT_TOL) -> "AbelianContext":
        """Context of coordinate blocks (default: the maximal diagonal context)."""
        blocks = list(blocks) if blocks is not None else [1] * dim
        return cls.from_blocks(np.eye(dim), blocks, tol)

    @classmethod
    def of_operator(cls, a: HermitianOperator) -> "AbelianContext":
        """The context whose atoms are the eigenprojections of ``a``."""
        return cls([c.projection for c in a.clusters], a.tol)

    @property
    def k(self) -> int:
        return len(self.atoms)

    @property
    def full_mask(self) -> int:
        return (1 << self.k) - 1

    def element(self, mask: int) -> Projection:
        """The lattice element (sum of atoms) for a bitmask."""
        if not 0 <= mask <= self.full_mask:
            raise ValueError(f"mask {mask} out of range for {self.k} atoms")
        inside = [a.basis for i, a in enumerate(self.atoms) if mask >> i & 1]
        outside = [a.basis for i, a in enumerate(self.atoms) if not mask >> i & 1]
        empty = np.zeros((self.dim, 0), dtype=complex)
        return Projection(np.hstack([empty, *inside]), np.hstack([empty, *outside]))

    def outer_mask(self, p: Projection) -> int:
        """Bitmask of atoms not orthogonal to ``p``."""
        _check_dims(p, self.atoms[0])
        mask = 0
        for i, a in enumerate(self.atoms):
            if max_norm(a.matrix @ p.matrix) > self.tol.proj:
                mask |= 1 << i
        return mask

    def inner_mask(self, p: Projection) -> int:
        """Bitmask of atoms contained in ``p``."""
        _check_dims(p, self.atoms[0])
        mask = 0
        for i, a in enumerate(self.atoms):
            if max_norm(p.matrix @ a.matrix - a.matrix) <= self.tol.proj:
                mask |= 1 << i
        return mask

    def mask_of(self, p: Projection) -> Optional[int]:
        """Bitmask of ``p`` if it is a lattice element of this context, else None."""
        mask = self.outer_mask(p)
        return mask if mask == self.inner_mask(p) else None

    def contains_operator(self, a: HermitianOperator) -> bool:
        return all(a.commutes_with(q.matrix) for q in self.atoms)

    def lattice(self) -> List[Projection]:
        if self.k > MAX_ATOMS:
            raise TooManyAtoms(f"{self.k} atoms exceeds the enumeration limit of {MAX_ATOMS}")
        with self._lock:
            if self._lattice is None:
                self._lattice = [self.element(m) for m in range(1 << self.k)]
            return list(self._lattice)

    def __repr__(self) -> str:
        ranks = [a.rank for a in self.atoms]
        return f"AbelianContext(dim={self.dim}, atom_ranks={ranks})"


def das_outer_proj(p: Projection, ctx: AbelianContext) -> Projection:
    """Smallest element of the context lattice above ``p``."""
    return ctx.element(ctx.outer_mask(p))


def das_inner_proj(p: Projection, ctx: AbelianContext) -> Projection:
    """Largest element of the context lattice below ``p``."""
    return ctx.element(ctx.inner_mask(p))


def enumerate_lattice(ctx: AbelianContext) -> List[Projection]:
    """All 2^k lattice elements, position = bitmask."""
    return ctx.lattice()


def is_commuting_family(ps: Iterable[Projection], tol: Tolerance = DEFAULT_TOL) -> bool:
    ps = list(ps)
    return all(
        max_norm(a.matrix @ b.matrix - b.matrix @ a.matrix) <= tol.proj for i, a in enumerate(ps) for b in ps[i + 1:]
    )


def locate_projection(ps: Sequence[Projection], tol: Tolerance = DEFAULT_TOL):
    """Return a function mapping a projection to the index of an equal one in ``ps``."""

    def locate(p: Projection) -> int:
        for i, q in enumerate(ps):
            if proj_eq(p, q, tol):
                return i
        raise ValueError(f"{p!r} is not in the sample")

    return locate


def projection_poset(ps: Sequence[Projection], tol: Tolerance = DEFAULT_TOL):
    """Finite sub-poset of P(N) on the given (distinct) projections."""
    from .galois import FinitePoset

    return FinitePoset.from_relation(ps, lambda a, b: proj_leq(a, b, tol))
