"""Seeded random generators for operators, projections and contexts.

Spectra are drawn from small integer or half-integer sets so that degenerate
eigenvalues (the interesting case for spectral families) show up often.
"""

from __future__ import annotations

from typing import List, Optional, Sequence

import numpy as np

from .linalg import DEFAULT_TOL, HermitianOperator, Projection, Tolerance
from .projlat import AbelianContext


def random_unitary(rng: np.random.Generator, dim: int) -> np.ndarray:
    z = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    q, r = np.linalg.qr(z)
    d = np.diag(r)
    return q * (d / np.abs(d))


def random_spectrum(rng: np.random.Generator, dim: int, distinct: Optional[int] = None) -> np.ndarray:
    """Eigenvalues from a small random pool, so repeats are common."""
    k = distinct or int(rng.integers(1, dim + 1))
    pool = rng.choice(np.arange(-8, 9) / 2.0, size=k, replace=False)
    return rng.choice(pool, size=dim)


def random_hermitian(
    rng: np.random.Generator, dim: int, distinct: Optional[int] = None, tol: Tolerance = DEFAULT_TOL
) -> HermitianOperator:
    return HermitianOperator.from_eigenvectors(random_spectrum(rng, dim, distinct), random_unitary(rng, dim), tol)


def generic_hermitian(rng: np.random.Generator, dim: int, tol: Tolerance = DEFAULT_TOL) -> HermitianOperator:
    """Gaussian Hermitian matrix diagonalised by the Jacobi solver (simple spectrum almost surely)."""
    x = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    return HermitianOperator((x + x.conj().T) / 2, tol)


def random_diagonal(rng: np.random.Generator, dim: int, tol: Tolerance = DEFAULT_TOL) -> HermitianOperator:
    return HermitianOperator.diagonal(random_spectrum(rng, dim), tol)


def random_projection(rng: np.random.Generator, dim: int, rank: Optional[int] = None) -> Projection:
    rank = int(rng.integers(0, dim + 1)) if rank is None else rank
    u = random_unitary(rng, dim)
    return Projection(u[:, :rank], u[:, rank:])


def random_subprojection(rng: np.random.Generator, p: Projection) -> Projection:
    """A random projection below ``p`` (possibly 0 or ``p`` itself)."""
    k = int(rng.integers(0, p.rank + 1))
    if p.rank == 0:
        return p
    u = random_unitary(rng, p.rank)
    b = p.basis @ u
    return Projection(b[:, :k], np.hstack([b[:, k:], p.perp_basis]))


def random_context(
    rng: np.random.Generator, dim: int, k: Optional[int] = None, tol: Tolerance = DEFAULT_TOL
) -> AbelianContext:
    """Random orthonormal basis split into ``k`` non-empty consecutive blocks."""
    k = int(rng.integers(1, dim + 1)) if k is None else k
    cuts = sorted(rng.choice(np.arange(1, dim), size=k - 1, replace=False)) if k > 1 else []
    bounds = [0, *cuts, dim]
    blocks = [int(b - a) for a, b in zip(bounds, bounds[1:])]
    return AbelianContext.from_blocks(random_unitary(rng, dim), blocks, tol)


def refine_context(rng: np.random.Generator, ctx: AbelianContext) -> AbelianContext:
    """Split one atom of rank >= 2 into two; returns ``ctx`` unchanged if none can be split."""
    splittable = [i for i, q in enumerate(ctx.atoms) if q.rank >= 2]
    if not splittable:
        return ctx
    i = int(rng.choice(splittable))
    q = ctx.atoms[i]
    u = random_unitary(rng, q.rank)
    b = q.basis @ u
    cut = int(rng.integers(1, q.rank))
    cols: List[np.ndarray] = []
    blocks: List[int] = []
    for j, atom in enumerate(ctx.atoms):
        if j == i:
            cols += [b[:, :cut], b[:, cut:]]
            blocks += [cut, q.rank - cut]
        else:
            cols.append(atom.basis)
            blocks.append(atom.rank)
    return AbelianContext.from_blocks(np.hstack(cols), blocks, ctx.tol)


def mixed_sample(rng: np.random.Generator, ps: Sequence[Projection], extra: int = 4) -> List[Projection]:
    """The given projections, sub-projections of them, and a few random ones."""
    dim = ps[0].dim
    out = list(ps)
    out += [random_subprojection(rng, p) for p in ps]
    out += [random_projection(rng, dim) for _ in range(extra)]
    return out
