"""Extended spectral families as finite step functions R-bar -> P(N).

In finite dimension a spectral family is determined by its jump points
r_1 < ... < r_m and the cumulative projections P_1 < ... < P_m = 1.  The same
jump data describes both the right-continuous family E (E_r includes the jump
at r) and the left-continuous family F (F_r excludes it); only evaluation
differs.  -inf and +inf are never stored: they evaluate to 0 and 1.
"""

from __future__ import annotations

import bisect
import math
from dataclasses import dataclass
from enum import Enum
from typing import List, Tuple

import numpy as np

from .errors import DimMismatch, InvalidFamily
from .jsonio import matrix_from_json, matrix_to_json
from .linalg import DEFAULT_TOL, HermitianOperator, Projection, Tolerance, hermitian_defect, max_norm
from .projlat import proj_eq, proj_leq


class Continuity(str, Enum):
    RIGHT = "right"
    LEFT = "left"


@dataclass(frozen=True)
class SpectralFamily:
    continuity: Continuity
    jumps: Tuple[Tuple[float, Projection], ...]
    dim: int

    def __post_init__(self):
        object.__setattr__(self, "continuity", Continuity(self.continuity))
        object.__setattr__(self, "jumps", tuple((float(r), p) for r, p in self.jumps))

    @property
    def points(self) -> List[float]:
        return [r for r, _ in self.jumps]

    @property
    def projections(self) -> List[Projection]:
        return [p for _, p in self.jumps]

    def with_continuity(self, continuity: Continuity) -> "SpectralFamily":
        return SpectralFamily(Continuity(continuity), self.jumps, self.dim)

    def __call__(self, r: float) -> Projection:
        return evaluate(self, r)


def family_from_operator(a: HermitianOperator, continuity: Continuity = Continuity.RIGHT) -> SpectralFamily:
    """Jumps at the eigenvalue clusters, cumulative eigenprojections as values."""
    v = a.eig.vectors
    jumps = []
    used = 0
    for c in a.clusters:
        used += c.multiplicity
        jumps.append((c.value, Projection(v[:, :used], v[:, used:])))
    return SpectralFamily(Continuity(continuity), tuple(jumps), a.dim)


def _index(family: SpectralFamily, r: float) -> int:
    """Number of jumps already "switched on" at r under the family's continuity rule."""
    pts = family.points
    if family.continuity is Continuity.RIGHT:
        return bisect.bisect_right(pts, r)
    return bisect.bisect_left(pts, r)


def evaluate(family: SpectralFamily, r: float) -> Projection:
    if math.isnan(r):
        raise ValueError("cannot evaluate a spectral family at NaN")
    if r == -math.inf:
        return Projection.zero(family.dim)
    if r == math.inf:
        return Projection.identity(family.dim)
    k = _index(family, r)
    if k == 0:
        return Projection.zero(family.dim)
    return family.jumps[k - 1][1]


def validate_family(family: SpectralFamily, tol: Tolerance = DEFAULT_TOL) -> List[str]:
    """Diagnostics; an empty list means the jump data is a valid spectral family."""
    problems = []
    if not family.jumps:
        return ["family has no jumps (top condition fails)"]
    prev_r = -math.inf
    prev_p = Projection.zero(family.dim)
    for i, (r, p) in enumerate(family.jumps):
        if not math.isfinite(r):
            problems.append(f"jump {i}: point {r} is not finite")
        if r <= prev_r:
            problems.append(f"jump {i}: points not strictly ascending ({prev_r} >= {r})")
        if p.dim != family.dim:
            problems.append(f"jump {i}: projection has dimension {p.dim}, expected {family.dim}")
            continue
        m = p.matrix
        if hermitian_defect(m) > tol.herm or max_norm(m @ m - m) > tol.proj:
            problems.append(f"jump {i}: not a valid projection")
        if not proj_leq(prev_p, p, tol):
            problems.append(f"jump {i}: monotonicity violation at r={r}")
        elif proj_eq(prev_p, p, tol):
            problems.append(f"jump {i}: no strict increase at r={r}")
        prev_r, prev_p = r, p
    if not family.jumps[-1][1].is_one():
        problems.append("top violation: last projection is not the identity")
    return problems


def operator_from_family(family: SpectralFamily, tol: Tolerance = DEFAULT_TOL) -> HermitianOperator:
    """A = sum_k r_k (P_k - P_{k-1}) with P_0 = 0."""
    problems = validate_family(family, tol)
    if problems:
        raise InvalidFamily(problems)
    m = np.zeros((family.dim, family.dim), dtype=complex)
    prev = np.zeros_like(m)
    for r, p in family.jumps:
        m = m + r * (p.matrix - prev)
        prev = p.matrix
    return HermitianOperator(m, tol)


def families_agree(e: SpectralFamily, f: SpectralFamily, tol: Tolerance = DEFAULT_TOL) -> bool:
    """Same jump points (within cluster tolerance) and the same projections."""
    if e.dim != f.dim:
        raise DimMismatch(f"dimensions differ: {e.dim} vs {f.dim}")
    if len(e.jumps) != len(f.jumps):
        return False
    scale = max([1.0] + [abs(r) for r in e.points])
    for (r, p), (s, q) in zip(e.jumps, f.jumps):
        if abs(r - s) > tol.cluster * scale or not proj_eq(p, q, tol):
            return False
    return True


def merged_grid(*families: SpectralFamily) -> List[float]:
    """Sorted union of all jump points."""
    return sorted({r for fam in families for r in fam.points})


def jump_projections(*families: SpectralFamily) -> List[Projection]:
    return [p for fam in families for p in fam.projections]


def family_to_json(family: SpectralFamily) -> dict:
    return {
        "continuity": family.continuity.value,
        "jumps": [{"r": r, "P": matrix_to_json(p.matrix)} for r, p in family.jumps],
    }


def family_from_json(obj: dict, tol: Tolerance = DEFAULT_TOL) -> SpectralFamily:
    jumps = []
    for j in obj["jumps"]:
        jumps.append((float(j["r"]), Projection.from_matrix(matrix_from_json(j["P"]), tol)))
    if not jumps:
        raise InvalidFamily(["family has no jumps"])
    return SpectralFamily(Continuity(obj.get("continuity", "right")), tuple(jumps), jumps[0][1].dim)

