"""Outer and inner daseinisation of operators to an abelian context.

The outer daseinisation pushes each cumulative projection of the
right-continuous family E^A down to the largest context element below it;
the inner daseinisation pushes each projection of the left-continuous family
F^A up to the smallest context element above it.  Both transforms keep the
jump points, drop steps that no longer increase, and rebuild an operator that
is diagonal in the atom bases.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Dict, Iterable, List, Optional, Tuple

import numpy as np

from .errors import DimMismatch, InternalInvariantViolation, NotInContext
from .linalg import DEFAULT_TOL, HermitianOperator, Projection, Tolerance
from .projlat import AbelianContext, das_outer_proj
from .qobs import a_eval, o_eval, z_eval
from .spectral import Continuity, family_from_operator


def _check(a: HermitianOperator, ctx: AbelianContext) -> None:
    if a.dim != ctx.dim:
        raise DimMismatch(f"operator has dimension {a.dim}, context {ctx.dim}")


def _masked_steps(a: HermitianOperator, ctx: AbelianContext, to_mask: Callable[[Projection], int]) -> List[Tuple[float, int]]:
    steps = []
    prev = 0
    for r, p in family_from_operator(a).jumps:
        mask = to_mask(p)
        if mask & prev != prev:
            raise InternalInvariantViolation(f"transformed family decreases at r={r}")
        if mask != prev:
            steps.append((r, mask))
            prev = mask
    if prev != ctx.full_mask:
        raise InternalInvariantViolation("transformed family does not reach the identity")
    return steps


def context_operator(ctx: AbelianContext, values, tol: Optional[Tolerance] = None) -> HermitianOperator:
    """sum_i values[i] * atom_i, built from the atom bases without re-diagonalizing."""
    values = list(values)
    if len(values) != ctx.k:
        raise DimMismatch(f"need {ctx.k} atom values, got {len(values)}")
    cols, w = [], []
    for q, v in zip(ctx.atoms, values):
        cols.append(q.basis)
        w.extend([float(v)] * q.rank)
    return HermitianOperator.from_eigenvectors(w, np.hstack(cols), tol or ctx.tol)


def _steps_to_operator(ctx: AbelianContext, steps: List[Tuple[float, int]]) -> HermitianOperator:
    values = [math.nan] * ctx.k
    for r, mask in steps:
        for i in range(ctx.k):
            if mask >> i & 1 and math.isnan(values[i]):
                values[i] = r
    return context_operator(ctx, values)


def das_outer(a: HermitianOperator, ctx: AbelianContext) -> HermitianOperator:
    """Smallest context operator above A in the spectral order."""
    _check(a, ctx)
    return _steps_to_operator(ctx, _masked_steps(a, ctx, ctx.inner_mask))


def das_inner(a: HermitianOperator, ctx: AbelianContext) -> HermitianOperator:
    """Largest context operator below A in the spectral order."""
    _check(a, ctx)
    return _steps_to_operator(ctx, _masked_steps(a, ctx, ctx.outer_mask))


def atom_values(b: HermitianOperator, ctx: AbelianContext) -> List[float]:
    """Component of a context operator on each atom (the value of q* B q / rank q)."""
    _check(b, ctx)
    out = []
    for q in ctx.atoms:
        out.append(float(np.real(np.trace(q.basis.conj().T @ b.matrix @ q.basis))) / q.rank)
    return out


@dataclass(frozen=True)
class DaseinisedPair:
    outer: HermitianOperator
    inner: HermitianOperator
    context: AbelianContext


def daseinise(a: HermitianOperator, ctx: AbelianContext) -> DaseinisedPair:
    return DaseinisedPair(das_outer(a, ctx), das_inner(a, ctx), ctx)


def _scale(*ops: HermitianOperator) -> float:
    return max([1.0] + [abs(x) for op in ops for x in op.spectrum])


def values_match(x: float, y: float, tol: Tolerance, scale: float = 1.0) -> bool:
    """Infinite values compare exactly; finite ones within cluster tolerance."""
    if math.isinf(x) or math.isinf(y):
        return x == y
    return abs(x - y) <= tol.cluster * scale


def restriction_check_outer(a: HermitianOperator, ctx: AbelianContext, outer: Optional[HermitianOperator] = None) -> bool:
    """o of the outer daseinisation agrees with o^A on every context element."""
    _check(a, ctx)
    b = outer if outer is not None else das_outer(a, ctx)
    tol, s = ctx.tol, _scale(a, b)
    ea, eb = family_from_operator(a), family_from_operator(b)
    return all(values_match(o_eval(eb, p, tol), o_eval(ea, p, tol), tol, s) for p in ctx.lattice())


def restriction_check_inner(a: HermitianOperator, ctx: AbelianContext, inner: Optional[HermitianOperator] = None) -> bool:
    """z and a of the inner daseinisation agree with those of A on every context element."""
    _check(a, ctx)
    b = inner if inner is not None else das_inner(a, ctx)
    tol, s = ctx.tol, _scale(a, b)
    fa = family_from_operator(a, Continuity.LEFT)
    fb = family_from_operator(b, Continuity.LEFT)
    for p in ctx.lattice():
        if not values_match(z_eval(fb, p, tol), z_eval(fa, p, tol), tol, s):
            return False
        if not values_match(a_eval(fb, p, tol), a_eval(fa, p, tol), tol, s):
            return False
    return True


def domain_extension_check(
    a: HermitianOperator,
    ctx: AbelianContext,
    sample: Iterable[Projection],
    outer_proj: Optional[Callable[[Projection], Projection]] = None,
) -> bool:
    """For A in the context: o^A(P) = o^A(smallest context element above P)."""
    _check(a, ctx)
    if not ctx.contains_operator(a):
        raise NotInContext("operator does not commute with every atom")
    push = outer_proj or (lambda p: das_outer_proj(p, ctx))
    fam = family_from_operator(a)
    tol = ctx.tol
    return all(values_match(o_eval(fam, p, tol), o_eval(fam, push(p), tol), tol, _scale(a)) for p in sample)


def per_atom_table(a: HermitianOperator, ctx: AbelianContext) -> List[Dict[str, float]]:
    """o^A and a^A on each atom: the atom components of the outer and inner daseinisations."""
    _check(a, ctx)
    fam = family_from_operator(a)
    return [{"atom": i, "o": o_eval(fam, q, ctx.tol), "a": a_eval(fam, q, ctx.tol)} for i, q in enumerate(ctx.atoms)]
