"""Spectral order on Hermitian operators, with meets, joins and witness searches.

``A <=_s B`` iff ``E^A_r >= E^B_r`` for every real r.  Both families are step
functions, so checking the union of their jump points is enough.

Eigenvalues that agree mathematically can come out of the eigensolver a few
ulps apart, on either side of each other.  The comparison therefore reads
E^A one cluster width to the right of each grid point: ``E^B_r <= E^A_{r+w}``
with ``w = cluster_tol * max(1, |spectrum|)``.  Jumps further apart than
``w`` are compared exactly.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .errors import DimMismatch, InternalInvariantViolation, NotFound, NotPSD
from .linalg import DEFAULT_TOL, HermitianOperator, Projection, Tolerance, is_psd
from .projlat import join_many, meet_many, proj_eq, proj_leq
from .spectral import Continuity, SpectralFamily, evaluate, family_from_operator, merged_grid, operator_from_family, validate_family

DEFAULT_TRIALS = 10**5


@dataclass(frozen=True)
class Witness:
    """A point r where E^B_r is not below E^A_r."""

    r: float
    ea: Projection
    eb: Projection


@dataclass(frozen=True)
class OrderVerdict:
    leq_s: bool
    leq_linear: bool
    witnesses: List[Witness] = field(default_factory=list)


def _same_dim(ops: Sequence[HermitianOperator]) -> int:
    dims = {a.dim for a in ops}
    if len(dims) != 1:
        raise DimMismatch(f"operators of different dimensions: {sorted(dims)}")
    return dims.pop()


def jump_width(tol: Tolerance, *ops: HermitianOperator) -> float:
    """Distance below which two jump points count as the same point."""
    return tol.cluster * max([1.0] + [abs(x) for a in ops for x in a.spectrum])


def spectral_leq(a: HermitianOperator, b: HermitianOperator, tol: Tolerance = DEFAULT_TOL) -> OrderVerdict:
    _same_dim([a, b])
    ea, eb = family_from_operator(a), family_from_operator(b)
    w = jump_width(tol, a, b)
    witnesses = []
    for r in merged_grid(ea, eb):
        pa, pb = evaluate(ea, r + w), evaluate(eb, r)
        if not proj_leq(pb, pa, tol):
            witnesses.append(Witness(r, pa, pb))
            break
    return OrderVerdict(not witnesses, is_psd(b - a), witnesses)


def leq_s(a: HermitianOperator, b: HermitianOperator, tol: Tolerance = DEFAULT_TOL) -> bool:
    return spectral_leq(a, b, tol).leq_s


def _combine(ops: Sequence[HermitianOperator], pointwise, tol: Tolerance) -> HermitianOperator:
    dim = _same_dim(ops)
    fams = [family_from_operator(a) for a in ops]
    jumps: List[Tuple[float, Projection]] = []
    prev = Projection.zero(dim)
    for r in merged_grid(*fams):
        p = pointwise([evaluate(f, r) for f in fams], tol)
        if not proj_leq(prev, p, tol):
            raise InternalInvariantViolation(f"combined family decreases at r={r}")
        if not proj_eq(prev, p, tol):
            jumps.append((r, p))
            prev = p
    fam = SpectralFamily(Continuity.RIGHT, tuple(jumps), dim)
    problems = validate_family(fam, tol)
    if problems:
        raise InternalInvariantViolation("; ".join(problems))
    return operator_from_family(fam, tol)


def spectral_meet(ops: Sequence[HermitianOperator], tol: Tolerance = DEFAULT_TOL) -> HermitianOperator:
    """Greatest lower bound: the family r -> join_i E^{A_i}_r."""
    ops = list(ops)
    if not ops:
        raise ValueError("spectral_meet needs at least one operator")
    return _combine(ops, join_many, tol)


def spectral_join(ops: Sequence[HermitianOperator], tol: Tolerance = DEFAULT_TOL) -> HermitianOperator:
    """Least upper bound: the family r -> meet_i E^{A_i}_r."""
    ops = list(ops)
    if not ops:
        raise ValueError("spectral_join needs at least one operator")
    return _combine(ops, meet_many, tol)


def power_order_check(a: HermitianOperator, b: HermitianOperator, n_max: int = 6, tol: Tolerance = DEFAULT_TOL) -> bool:
    """Probe: A^n <= B^n in the linear order for n = 1..n_max.

    Agreement for all n characterises the spectral order on positive
    operators, but a finite n_max only gives a necessary condition.
    """
    _same_dim([a, b])
    if n_max < 1:
        raise ValueError("n_max must be at least 1")
    for name, op in (("A", a), ("B", b)):
        if not is_psd(op):
            raise NotPSD(f"{name} is not positive semidefinite")
    return first_power_violation(a, b, n_max, tol) is None


def first_power_violation(a: HermitianOperator, b: HermitianOperator, n_max: int = 6, tol: Tolerance = DEFAULT_TOL) -> Optional[int]:
    """Smallest n <= n_max with A^n not <= B^n, or None."""
    ma, mb = a.matrix, b.matrix
    pa, pb = np.eye(a.dim, dtype=complex), np.eye(b.dim, dtype=complex)
    for n in range(1, n_max + 1):
        pa, pb = pa @ ma, pb @ mb
        diff = pb - pa
        if not is_psd(HermitianOperator((diff + diff.conj().T) / 2, tol)):
            return n
    return None


def random_hermitian(rng: np.random.Generator, dim: int, tol: Tolerance = DEFAULT_TOL) -> HermitianOperator:
    x = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    return HermitianOperator((x + x.conj().T) / 2, tol)


def vector_lattice_counterexample(
    dim: int, seed: int, max_trials: int = DEFAULT_TRIALS, tol: Tolerance = DEFAULT_TOL
) -> Tuple[HermitianOperator, HermitianOperator, HermitianOperator]:
    """Search for A <=_s B and C with A + C not <=_s B + C.

    B is shifted so that its spectrum lies above that of A, which forces
    A <=_s B; C is an arbitrary Hermitian perturbation.
    """
    if dim < 2:
        raise NotFound("in dimension 1 the spectral order is translation invariant")
    rng = np.random.default_rng(seed)
    eye = np.eye(dim)
    for _ in range(max_trials):
        a = random_hermitian(rng, dim, tol)
        b0 = random_hermitian(rng, dim, tol)
        b = HermitianOperator(b0.matrix + (a.max_eigenvalue() - b0.min_eigenvalue()) * eye, tol)
        c = random_hermitian(rng, dim, tol)
        if not leq_s(a, b, tol):
            continue
        if not leq_s(a + c, b + c, tol):
            return a, b, c
    raise NotFound(f"no counterexample in {max_trials} trials")


def linear_not_spectral_witness(
    seed: int, n_max: int = 6, max_trials: int = DEFAULT_TRIALS, tol: Tolerance = DEFAULT_TOL
) -> Tuple[HermitianOperator, HermitianOperator, int]:
    """Search M_2 for positive A <= B with A not <=_s B and a failing power by n_max.

    B = A + vv* for a random vector v, so B - A is positive by construction.
    Returns (A, B, n) with n the first failing power.
    """
    rng = np.random.default_rng(seed)
    for _ in range(max_trials):
        x = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
        a = HermitianOperator(x @ x.conj().T, tol)
        v = rng.normal(size=2) + 1j * rng.normal(size=2)
        b = HermitianOperator(a.matrix + np.outer(v, v.conj()), tol)
        verdict = spectral_leq(a, b, tol)
        if not verdict.leq_linear or verdict.leq_s:
            continue
        n = first_power_violation(a, b, n_max, tol)
        if n is not None:
            return a, b, n
    raise NotFound(f"no witness in {max_trials} trials")
