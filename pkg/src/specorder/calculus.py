"""Join-preserving piecewise-linear functions on the extended reals.

A :class:`MonotoneExtFunction` is given by breakpoints ``(x, y)`` in
ascending ``x`` together with slopes for the two unbounded tails.  Between
breakpoints the function interpolates linearly.  Two breakpoints may share an
``x``: the first gives the value at ``x`` and the second the limit from the
right, so every jump is left-continuous.  That is exactly the condition for a
nondecreasing map of the extended reals to preserve joins, and data that
would need a right-continuous jump simply cannot be written down.

``f(-inf) = -inf`` always; ``f(+inf)`` is ``+inf`` when the right tail rises
and the last value otherwise.
"""

from __future__ import annotations

import bisect
import math
from dataclasses import dataclass
from typing import Any, Callable, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from .errors import InputError, NonFiniteValue, NotMonotone
from .extreal import NEG_INF, POS_INF
from .linalg import DEFAULT_TOL, HermitianOperator, Projection, Tolerance
from .qobs import o_eval
from .spectral import SpectralFamily, evaluate, family_from_operator
from .projlat import proj_eq

ADJUNCTION_EPS = 1e-7
ADJUNCTION_RANDOM_POINTS = 64


@dataclass(frozen=True)
class Knot:
    x: float
    left: float  # f(x)
    right: float  # f(x+)


class MonotoneExtFunction:
    def __init__(self, breakpoints: Sequence[Tuple[float, float]], left_slope: float = 0.0, right_slope: float = 0.0):
        pts = [(float(x), float(y)) for x, y in breakpoints]
        if not pts:
            raise InputError("at least one breakpoint is required")
        for x, y in pts:
            if not (math.isfinite(x) and math.isfinite(y)):
                raise InputError(f"breakpoint ({x}, {y}) is not finite")
        for s in (left_slope, right_slope):
            if not math.isfinite(s):
                raise InputError(f"tail slope {s} is not finite")
        if left_slope < 0 or right_slope < 0:
            raise NotMonotone("tail slopes must be non-negative")
        knots: List[Knot] = []
        for i, (x, y) in enumerate(pts):
            if i and y < pts[i - 1][1]:
                raise NotMonotone(f"breakpoint values decrease at x={x}")
            if knots and x < knots[-1].x:
                raise NotMonotone(f"breakpoints are not in ascending order at x={x}")
            if knots and x == knots[-1].x:
                if knots[-1].left != knots[-1].right:
                    raise InputError(f"more than two breakpoints share x={x}")
                knots[-1] = Knot(x, knots[-1].left, y)
            else:
                knots.append(Knot(x, y, y))
        self.knots: Tuple[Knot, ...] = tuple(knots)
        self.breakpoints: Tuple[Tuple[float, float], ...] = tuple(pts)
        self.left_slope = float(left_slope)
        self.right_slope = float(right_slope)
        self._xs = [k.x for k in knots]

    def __call__(self, x: float) -> float:
        return apply_ext(self, x)

    def __eq__(self, other: Any) -> bool:
        return (
            isinstance(other, MonotoneExtFunction)
            and self.breakpoints == other.breakpoints
            and self.left_slope == other.left_slope
            and self.right_slope == other.right_slope
        )

    def __repr__(self) -> str:
        return f"MonotoneExtFunction({list(self.breakpoints)}, left_slope={self.left_slope}, right_slope={self.right_slope})"

    def right_limit(self, x: float) -> float:
        """f(x+) for finite x."""
        i = bisect.bisect_left(self._xs, x)
        if i < len(self.knots) and self.knots[i].x == x:
            return self.knots[i].right
        return apply_ext(self, x)

    def to_json(self) -> dict:
        return {"breakpoints": [[x, y] for x, y in self.breakpoints], "left_slope": self.left_slope, "right_slope": self.right_slope}

    @classmethod
    def from_json(cls, obj: Any) -> "MonotoneExtFunction":
        if not isinstance(obj, dict) or "breakpoints" not in obj:
            raise InputError("function JSON needs 'breakpoints'")
        try:
            pts = [(float(x), float(y)) for x, y in obj["breakpoints"]]
            sl, sr = float(obj.get("left_slope", 0.0)), float(obj.get("right_slope", 0.0))
        except (TypeError, ValueError) as exc:
            raise InputError(f"malformed function JSON: {exc}") from exc
        return cls(pts, sl, sr)


def apply_ext(f: MonotoneExtFunction, x: float) -> float:
    x = float(x)
    if math.isnan(x):
        raise ValueError("NaN is not an extended real")
    if x == NEG_INF:
        return NEG_INF
    first, last = f.knots[0], f.knots[-1]
    if x == POS_INF:
        return POS_INF if f.right_slope > 0 else last.right
    if x <= first.x:
        return first.left + f.left_slope * (x - first.x)
    if x > last.x:
        return last.right + f.right_slope * (x - last.x)
    i = bisect.bisect_left(f._xs, x)
    b = f.knots[i]
    if b.x == x:
        return b.left
    a = f.knots[i - 1]
    return a.right + (b.left - a.right) * (x - a.x) / (b.x - a.x)


class RightAdjoint:
    """g(r) = sup{s | f(s) <= r}, evaluated in closed form from the pieces of f."""

    def __init__(self, f: MonotoneExtFunction):
        self.f = f

    def __call__(self, r: float) -> float:
        r = float(r)
        if math.isnan(r):
            raise ValueError("NaN is not an extended real")
        if r == POS_INF:
            return POS_INF
        if r == NEG_INF:
            return NEG_INF
        f = self.f
        ks = f.knots
        last = ks[-1]
        if last.right <= r:
            if f.right_slope == 0:
                return POS_INF
            return last.x + (r - last.right) / f.right_slope
        for i in range(len(ks) - 1, -1, -1):
            b = ks[i]
            if b.left <= r:
                return b.x
            if i > 0:
                a = ks[i - 1]
                if a.right <= r:
                    # b.left > r >= a.right, so this piece rises strictly
                    return a.x + (r - a.right) * (b.x - a.x) / (b.left - a.right)
        first = ks[0]
        if f.left_slope > 0:
            return first.x + (r - first.left) / f.left_slope
        return NEG_INF

    def breakpoints(self) -> List[float]:
        """Values of r where g changes behaviour: the values and right limits of f at its knots."""
        return sorted({v for k in self.f.knots for v in (k.left, k.right)})


def right_adjoint_fn(f: MonotoneExtFunction) -> RightAdjoint:
    return RightAdjoint(f)


def identity_fn() -> MonotoneExtFunction:
    return MonotoneExtFunction([(0.0, 0.0)], 1.0, 1.0)


def shift_fn(t: float) -> MonotoneExtFunction:
    return MonotoneExtFunction([(0.0, float(t))], 1.0, 1.0)


def scale_fn(s: float) -> MonotoneExtFunction:
    if not s > 0:
        raise InputError("scale factor must be positive")
    return MonotoneExtFunction([(0.0, 0.0)], float(s), float(s))


def plateau_fn(cuts: Sequence[float], levels: Sequence[float]) -> MonotoneExtFunction:
    """Left-continuous step function.

    The value is ``levels[0]`` on ``(-inf, cuts[0]]``, ``levels[i]`` on
    ``(cuts[i-1], cuts[i]]`` and ``levels[-1]`` beyond the last cut.
    """
    if len(levels) != len(cuts) + 1 or not cuts:
        raise InputError("need one more level than cuts, and at least one cut")
    pts = []
    for x, lo, hi in zip(cuts, levels, levels[1:]):
        pts.extend([(x, lo), (x, hi)])
    return MonotoneExtFunction(pts, 0.0, 0.0)


def compose(outer: MonotoneExtFunction, inner: MonotoneExtFunction) -> MonotoneExtFunction:
    """The piecewise-linear function ``outer . inner``."""
    g_inner = RightAdjoint(inner)
    inner_knots = {k.x for k in inner.knots}
    # where inner crosses an outer knot x', use x' itself rather than the rounded inner(c)
    crossings = {}
    for k in outer.knots:
        c = g_inner(k.x)
        if math.isfinite(c) and c not in inner_knots:
            crossings[c] = k.x
    pts: List[Tuple[float, float]] = []
    for c in sorted(inner_knots | set(crossings)):
        if c in crossings:
            left, right = apply_ext(outer, crossings[c]), outer.right_limit(crossings[c])
        else:
            v = inner.right_limit(c)
            left = apply_ext(outer, apply_ext(inner, c))
            # if inner is flat just after c, outer is only ever evaluated at v itself
            right = outer.right_limit(v) if _rises_after(inner, c) else apply_ext(outer, v)
        pts.append((c, left))
        if right > left:
            pts.append((c, right))
    ls = inner.left_slope * outer.left_slope if inner.left_slope > 0 else 0.0
    rs = inner.right_slope * outer.right_slope if inner.right_slope > 0 else 0.0
    return MonotoneExtFunction(pts, ls, rs)


def _rises_after(f: MonotoneExtFunction, x: float) -> bool:
    """Whether f is strictly increasing immediately to the right of the knot at x."""
    i = f._xs.index(x)
    if i + 1 == len(f.knots):
        return f.right_slope > 0
    return f.knots[i + 1].left > f.knots[i].right


def apply_to_operator(f: MonotoneExtFunction, a: HermitianOperator) -> HermitianOperator:
    """f(A): keep the eigenvectors, map each eigenvalue cluster through f."""
    values = []
    for c in a.clusters:
        v = apply_ext(f, c.value)
        if not math.isfinite(v):
            raise NonFiniteValue(f"f({c.value}) = {v}")
        values.extend([v] * c.multiplicity)
    return HermitianOperator.from_eigenvectors(values, a.eig.vectors, a.tol)


def _snap(x: float, points: Sequence[float], width: float) -> float:
    """Move a finite x onto the nearest point within ``width``."""
    if not math.isfinite(x) or not points:
        return x
    i = bisect.bisect_left(points, x)
    for j in (i - 1, i):
        if 0 <= j < len(points) and abs(points[j] - x) <= width:
            return points[j]
    return x


def _scale_of(*ops: HermitianOperator) -> float:
    return max([1.0] + [abs(v) for a in ops for v in a.spectrum])


def default_grid(fam: SpectralFamily) -> List[float]:
    """Jump points, midpoints between them, and one point beyond each end."""
    pts = fam.points
    grid = list(pts)
    grid += [(a + b) / 2 for a, b in zip(pts, pts[1:])]
    grid += [pts[0] - 1.0, pts[-1] + 1.0]
    return sorted(grid)


def check_family_shift(
    a: HermitianOperator,
    f: MonotoneExtFunction,
    rs: Optional[Iterable[float]] = None,
    g: Optional[Callable[[float], float]] = None,
) -> bool:
    """E^{f(A)}_r = E^A_{g(r)} at every sampled r (default: jumps of f(A), midpoints, outside points)."""
    tol = a.tol
    fa = apply_to_operator(f, a)
    e_fa, e_a = family_from_operator(fa), family_from_operator(a)
    g = g or RightAdjoint(f)
    rs = list(rs) if rs is not None else default_grid(e_fa)
    width = tol.cluster * _scale_of(a, fa)
    for r in rs:
        lhs = evaluate(e_fa, _snap(r, e_fa.points, width))
        rhs = evaluate(e_a, _snap(g(r), e_a.points, width))
        if not proj_eq(lhs, rhs, tol):
            return False
    return True


def check_ofA_eq_foA(a: HermitianOperator, f: MonotoneExtFunction, sample: Iterable[Projection]) -> bool:
    """o^{f(A)}(P) = f(o^A(P)) for every sampled P and for P = 0."""
    tol = a.tol
    fa = apply_to_operator(f, a)
    e_fa, e_a = family_from_operator(fa), family_from_operator(a)
    width = tol.cluster * _scale_of(a, fa)
    sample = [Projection.zero(a.dim)] + list(sample)
    for p in sample:
        lhs = o_eval(e_fa, p, tol)
        rhs = apply_ext(f, o_eval(e_a, p, tol))
        if math.isinf(lhs) or math.isinf(rhs):
            if lhs != rhs:
                return False
        elif abs(lhs - rhs) > width:
            return False
    return True


def adjunction_grid(f: MonotoneExtFunction, seed: int = 0, eps: float = ADJUNCTION_EPS) -> List[float]:
    """Breakpoints of f and g, their images, +-eps offsets, and random points."""
    g = RightAdjoint(f)
    base = {k.x for k in f.knots} | set(g.breakpoints())
    base |= {apply_ext(f, x) for x in list(base)} | {g(y) for y in list(base)}
    base = {x for x in base if math.isfinite(x)}
    grid = set(base)
    for x in base:
        grid.update((x - eps, x + eps))
    lo, hi = (min(base) - 1.0, max(base) + 1.0) if base else (-1.0, 1.0)
    rng = np.random.default_rng(seed)
    grid.update(float(v) for v in rng.uniform(lo, hi, ADJUNCTION_RANDOM_POINTS))
    return sorted(grid) + [NEG_INF, POS_INF]


def adjunction_holds(f: MonotoneExtFunction, g: Optional[Callable[[float], float]] = None, seed: int = 0, slack: float = 1e-9) -> bool:
    """f(s) <= r iff s <= g(r) on the adjunction grid, up to rounding ``slack``."""
    g = g or RightAdjoint(f)
    grid = adjunction_grid(f, seed)
    for r in grid:
        gr = g(r)
        for s in grid:
            fs = apply_ext(f, s)
            if fs <= r and not s <= _pad(gr, slack):
                return False
            if s <= gr and not fs <= _pad(r, slack):
                return False
    return True


def _pad(x: float, slack: float) -> float:
    return x + slack * max(1.0, abs(x)) if math.isfinite(x) else x
