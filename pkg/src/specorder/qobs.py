"""q-observable, z- and q-antonymous functions on projections.

For a Hermitian ``A`` with right-continuous spectral family ``E``:

* ``o^A(P) = min{r | P <= E_r}``        (left adjoint of E; -inf at 0)
* ``z^A(P) = sup{r | F_r <= P}``        (right adjoint of the left-continuous F)
* ``a^A(P) = sup{r | P <= 1 - F_r}``    (antitone; +inf at 0)

All three are evaluated lazily from the jump list.  ``o`` scans for the first
cumulative projection above ``P``; ``z`` for the last one below ``P``; ``a``
for the last one orthogonal to ``P``.  The scans are deliberately written
separately so that identities such as ``a^A(P) = z^A(1 - P)`` are checked
between different code paths.
"""

from __future__ import annotations

import math
from typing import Iterable, List, Sequence, Set, Tuple, Union

from .errors import DimMismatch, InvalidProjection, NotAbstractQObservable
from .extreal import NEG_INF, POS_INF
from .linalg import DEFAULT_TOL, HermitianOperator, Projection, Tolerance, max_norm
from .projlat import complement, join, join_many, orthogonal, proj_eq, proj_leq
from .spectral import Continuity, SpectralFamily, family_from_operator, validate_family

OperatorLike = Union[HermitianOperator, SpectralFamily]


def _family(a: OperatorLike) -> SpectralFamily:
    if isinstance(a, SpectralFamily):
        return a
    return family_from_operator(a, Continuity.RIGHT)


def _check(fam: SpectralFamily, p: Projection) -> None:
    if not isinstance(p, Projection):
        raise InvalidProjection(f"expected a Projection, got {type(p).__name__}")
    if p.dim != fam.dim:
        raise DimMismatch(f"operator has dimension {fam.dim}, projection {p.dim}")


def o_eval(a: OperatorLike, p: Projection, tol: Tolerance = DEFAULT_TOL) -> float:
    """q-observable function: the least jump point r_k with P <= P_k."""
    fam = _family(a)
    _check(fam, p)
    if p.is_zero():
        return NEG_INF
    for r, pk in fam.jumps:
        if proj_leq(p, pk, tol):
            return r
    return POS_INF


def z_eval(a: OperatorLike, p: Projection, tol: Tolerance = DEFAULT_TOL) -> float:
    """sup{r | F_r <= P}: the jump after the last cumulative projection below P."""
    fam = _family(a)
    _check(fam, p)
    pts = fam.points
    k = 0
    while k < len(pts) and proj_leq(fam.jumps[k][1], p, tol):
        k += 1
    return POS_INF if k == len(pts) else pts[k]


def a_eval(a: OperatorLike, p: Projection, tol: Tolerance = DEFAULT_TOL) -> float:
    """q-antonymous function sup{r | P <= 1 - F_r}, via orthogonality to F_r."""
    fam = _family(a)
    _check(fam, p)
    pts = fam.points
    k = 0
    while k < len(pts) and orthogonal(fam.jumps[k][1], p, tol):
        k += 1
    return POS_INF if k == len(pts) else pts[k]


class QObservable:
    """The q-observable function of an operator (or right-continuous family), as a callable."""

    def __init__(self, a: OperatorLike, tol: Tolerance = DEFAULT_TOL):
        self.family = _family(a)
        self.tol = tol

    def __call__(self, p: Projection) -> float:
        return o_eval(self.family, p, self.tol)

    def image(self, ps: Iterable[Projection]) -> Set[float]:
        return {self(p) for p in ps if not p.is_zero()}


class QAntonymous:
    """The q-antonymous function of an operator, as a callable."""

    def __init__(self, a: OperatorLike, tol: Tolerance = DEFAULT_TOL):
        self.family = _family(a).with_continuity(Continuity.LEFT)
        self.tol = tol

    def __call__(self, p: Projection) -> float:
        return a_eval(self.family, p, self.tol)


def image_on_nonzero(a: OperatorLike, sample: Iterable[Projection], tol: Tolerance = DEFAULT_TOL) -> Set[float]:
    """{o^A(P) | P in sample, P != 0}; equals sp(A) when the sample holds all jump projections."""
    return QObservable(a, tol).image(sample)


def tabulate(a: OperatorLike, ps: Sequence[Projection], tol: Tolerance = DEFAULT_TOL) -> List[Tuple[float, float, float]]:
    """(o, z, a) values for each projection."""
    fam = _family(a)
    return [(o_eval(fam, p, tol), z_eval(fam, p, tol), a_eval(fam, p, tol)) for p in ps]


def family_from_o(data: Sequence[Tuple[Projection, float]], tol: Tolerance = DEFAULT_TOL) -> SpectralFamily:
    """Right adjoint of sampled q-observable data: E(r) = join{P | o(P) <= r}.

    ``data`` is a list of (projection, value) pairs on a finite set of
    projections that is closed under the joins it contains and includes the
    true spectral projections.  The function is checked for the defining
    conditions of an abstract q-observable function on the sample:
    (a) o(P) > -inf for P != 0, (b) the projections with finite value join to
    1, and join preservation for every pair whose join lies in the sample.
    """
    data = [(p, float(v)) for p, v in data]
    if not data:
        raise NotAbstractQObservable("b", "empty sample")
    dim = data[0][0].dim
    for p, v in data:
        if p.dim != dim:
            raise DimMismatch("sample projections have different dimensions")
        if math.isnan(v):
            raise NotAbstractQObservable("a", "NaN value")
        if p.is_zero():
            if v != NEG_INF:
                raise NotAbstractQObservable("join-preservation", "o(0) must be -inf")
        elif v == NEG_INF:
            raise NotAbstractQObservable("a", "o(P) = -inf for a non-zero projection")

    for i, (p, v) in enumerate(data):
        for q, w in data[i + 1:]:
            pq = join(p, q, tol)
            for s, u in data:
                if proj_eq(s, pq, tol) and u != max(v, w):
                    raise NotAbstractQObservable(
                        "join-preservation", f"o(P v Q) = {u} but max(o(P), o(Q)) = {max(v, w)}"
                    )

    finite = [p for p, v in data if math.isfinite(v)]
    if not finite or not join_many(finite, tol).is_one():
        raise NotAbstractQObservable("b", "projections with finite value do not join to 1")

    jumps = []
    prev = Projection.zero(dim)
    for r in sorted({v for _, v in data if math.isfinite(v)}):
        er = join_many([prev] + [p for p, v in data if v <= r], tol)
        if not proj_eq(er, prev, tol):
            jumps.append((r, er))
            prev = er
    fam = SpectralFamily(Continuity.RIGHT, tuple(jumps), dim)
    problems = validate_family(fam, tol)
    if problems:
        raise NotAbstractQObservable("join-preservation", "; ".join(problems))
    return fam


def sample_o(a: OperatorLike, ps: Iterable[Projection], tol: Tolerance = DEFAULT_TOL) -> List[Tuple[Projection, float]]:
    o = QObservable(a, tol)
    return [(p, o(p)) for p in ps]


def order_compare_via_o(a: OperatorLike, b: OperatorLike, sample: Iterable[Projection], tol: Tolerance = DEFAULT_TOL) -> bool:
    """True iff o^A(P) <= o^B(P) for every sampled projection.

    Values are jump points; two jump points closer than the cluster width
    count as equal, matching the tolerance of the spectral-order comparison.
    """
    oa, ob = QObservable(a, tol), QObservable(b, tol)
    pts = oa.family.points + ob.family.points
    w = tol.cluster * max([1.0] + [abs(x) for x in pts])
    return all(oa(p) <= ob(p) + w for p in sample)


def non_additivity_witness(q: Projection, p: Projection, tol: Tolerance = DEFAULT_TOL) -> Tuple[float, float, float]:
    """(o^1(P), o^Q(P), o^{1-Q}(P)) for the operators 1, Q and 1 - Q."""
    if proj_leq(p, q, tol) or proj_leq(p, complement(q), tol):
        raise ValueError("P must lie neither below Q nor below 1 - Q")
    one = HermitianOperator.from_eigenvectors([1.0] * q.dim, _unitary_of(q), tol)
    qop = HermitianOperator.from_eigenvectors([1.0] * q.rank + [0.0] * (q.dim - q.rank), _unitary_of(q), tol)
    rest = HermitianOperator.from_eigenvectors([0.0] * q.rank + [1.0] * (q.dim - q.rank), _unitary_of(q), tol)
    return o_eval(one, p, tol), o_eval(qop, p, tol), o_eval(rest, p, tol)


def _unitary_of(q: Projection):
    import numpy as np

    u = np.hstack([q.basis, q.perp_basis])
    if max_norm(u.conj().T @ u - np.eye(q.dim)) > 1e-9:
        raise InvalidProjection("projection bases are not orthonormal")
    return u
