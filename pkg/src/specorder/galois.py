"""Galois connections between finite posets.

Two independent routes to adjoints are provided:

* :func:`right_adjoint` / :func:`left_adjoint` use the closed formulas of the
  adjoint functor theorem for posets,
  ``g(x) = join{a | f(a) <= x}`` and ``f(a) = meet{x | a <= g(x)}``.
* :func:`bruteforce_right_adjoint` / :func:`bruteforce_left_adjoint` search,
  for every argument, the candidate satisfying the defining equivalence
  ``f(a) <= x  <=>  a <= g(x)`` directly.

The infinite posets used elsewhere (the extended reals, the projection lattice
of M_n) are checked against this engine by restricting to finite samples.

Down-sets and subsets are represented as Python ``int`` bitmasks over element
indices.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from typing import Callable, Dict, List, Optional, Sequence

import numpy as np

from .errors import DimMismatch, NoAdjoint, NotComplete, NotMonotone

SUBSET_CAP = 1 << 16
RANDOM_SUBSETS = 512


class FinitePoset:
    """Elements plus a boolean table ``le[i, j]`` meaning element i <= element j."""

    def __init__(self, elements: Sequence, le, validate: bool = True):
        le = np.array(le, dtype=bool)
        n = len(elements)
        if le.shape != (n, n):
            raise ValueError(f"relation table has shape {le.shape}, expected ({n}, {n})")
        if validate:
            if not le.diagonal().all():
                raise ValueError("relation is not reflexive")
            if (le & le.T & ~np.eye(n, dtype=bool)).any():
                raise ValueError("relation is not antisymmetric")
            li = le.astype(np.int64)
            if ((li @ li > 0) & ~le).any():
                raise ValueError("relation is not transitive")
        le.setflags(write=False)
        self.elements = list(elements)
        self.le = le
        self.n = n
        self._down = [sum(1 << i for i in range(n) if le[i, j]) for j in range(n)]
        self._up = [sum(1 << j for j in range(n) if le[i, j]) for i in range(n)]
        self._report: Optional["LatticeReport"] = None

    @classmethod
    def from_relation(cls, elements: Sequence, leq: Callable[[object, object], bool], validate: bool = True) -> "FinitePoset":
        elements = list(elements)
        le = [[bool(leq(a, b)) for b in elements] for a in elements]
        return cls(elements, le, validate)

    def leq(self, i: int, j: int) -> bool:
        return bool(self.le[i, j])

    def _greatest(self, mask: int) -> Optional[int]:
        """Greatest element of the index set ``mask``, if any."""
        m = mask
        while m:
            low = m & -m
            g = low.bit_length() - 1
            if mask & ~self._down[g] == 0:
                return g
            m ^= low
        return None

    def _least(self, mask: int) -> Optional[int]:
        m = mask
        while m:
            low = m & -m
            g = low.bit_length() - 1
            if mask & ~self._up[g] == 0:
                return g
            m ^= low
        return None

    def lower_bounds(self, idx: Sequence[int]) -> int:
        mask = (1 << self.n) - 1
        for i in idx:
            mask &= self._down[i]
        return mask

    def upper_bounds(self, idx: Sequence[int]) -> int:
        mask = (1 << self.n) - 1
        for i in idx:
            mask &= self._up[i]
        return mask

    def meet(self, idx: Sequence[int]) -> Optional[int]:
        """Greatest lower bound of the given elements, or None if it does not exist."""
        return self._greatest(self.lower_bounds(idx))

    def join(self, idx: Sequence[int]) -> Optional[int]:
        return self._least(self.upper_bounds(idx))

    @property
    def top(self) -> Optional[int]:
        return self.meet([])

    @property
    def bottom(self) -> Optional[int]:
        return self.join([])

    def same_as(self, other: "FinitePoset") -> bool:
        return self is other or (self.n == other.n and bool((self.le == other.le).all()))

    def __repr__(self) -> str:
        return f"FinitePoset(n={self.n})"


@dataclass(frozen=True)
class LatticeReport:
    is_meet_complete: bool
    is_join_complete: bool
    bottom: Optional[int]
    top: Optional[int]

    @property
    def is_complete_lattice(self) -> bool:
        return self.is_meet_complete and self.is_join_complete


def _subset_masks(n: int, cap: int, seed: int) -> List[int]:
    if n < 63 and (1 << n) <= cap:
        return list(range(1 << n))
    # too many subsets: empty set, singletons, all pairs, then random samples
    masks = [0] + [1 << i for i in range(n)]
    masks += [(1 << i) | (1 << j) for i, j in itertools.combinations(range(n), 2)]
    rng = random.Random(seed)
    masks += [rng.getrandbits(n) for _ in range(RANDOM_SUBSETS)]
    return masks


def _members(mask: int) -> List[int]:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


def check_lattice(p: FinitePoset, cap: int = SUBSET_CAP, seed: int = 0) -> LatticeReport:
    """Brute-force check that every subset has a meet and a join.

    Exhaustive when 2^n <= ``cap``; otherwise the empty set, all singletons and
    pairs (which already decide completeness for a finite poset) and random
    subsets are checked.
    """
    if p._report is not None and cap == SUBSET_CAP:
        return p._report
    meets: Dict[int, bool] = {}
    joins: Dict[int, bool] = {}
    meet_ok = join_ok = True
    for mask in _subset_masks(p.n, cap, seed):
        members = _members(mask)
        if meet_ok:
            lb = p.lower_bounds(members)
            if lb not in meets:
                meets[lb] = p._greatest(lb) is not None
            meet_ok = meets[lb]
        if join_ok:
            ub = p.upper_bounds(members)
            if ub not in joins:
                joins[ub] = p._least(ub) is not None
            join_ok = joins[ub]
        if not (meet_ok or join_ok):
            break
    report = LatticeReport(meet_ok, join_ok, p.bottom, p.top)
    if cap == SUBSET_CAP:
        p._report = report
    return report


class MonotoneMap:
    """A monotone map between finite posets given by an index table."""

    def __init__(self, source: FinitePoset, target: FinitePoset, table: Sequence[int], validate: bool = True):
        table = np.array(table, dtype=np.int64)
        if table.shape != (source.n,):
            raise ValueError(f"table has length {len(table)}, expected {source.n}")
        if table.size and (table.min() < 0 or table.max() >= target.n):
            raise ValueError("table entries out of range for the target poset")
        if validate:
            bad = source.le & ~target.le[np.ix_(table, table)]
            if bad.any():
                i, j = map(int, np.argwhere(bad)[0])
                raise NotMonotone(f"element {i} <= {j} but their images are not ordered")
        table.setflags(write=False)
        self.source = source
        self.target = target
        self.table = table

    def __call__(self, i: int) -> int:
        return int(self.table[i])

    def __eq__(self, other) -> bool:
        if not isinstance(other, MonotoneMap):
            return NotImplemented
        return (
            self.source.same_as(other.source)
            and self.target.same_as(other.target)
            and bool((self.table == other.table).all())
        )

    __hash__ = None

    def __repr__(self) -> str:
        return f"MonotoneMap({self.source.n} -> {self.target.n}, {self.table.tolist()})"


def identity_map(p: FinitePoset) -> MonotoneMap:
    return MonotoneMap(p, p, list(range(p.n)))


def constant_map(source: FinitePoset, target: FinitePoset, value: int) -> MonotoneMap:
    return MonotoneMap(source, target, [value] * source.n)


def compose(g: MonotoneMap, f: MonotoneMap) -> MonotoneMap:
    """g after f."""
    if not f.target.same_as(g.source):
        raise DimMismatch("maps are not composable")
    return MonotoneMap(f.source, g.target, g.table[f.table], validate=False)


def _require_complete(*posets: FinitePoset) -> None:
    for p in posets:
        rep = check_lattice(p)
        if not rep.is_complete_lattice:
            raise NotComplete(f"{p!r} is not a complete lattice")


def right_adjoint(f: MonotoneMap) -> MonotoneMap:
    """g(x) = join{a | f(a) <= x}; raises NoAdjoint when f does not preserve joins."""
    src, tgt = f.source, f.target
    _require_complete(src, tgt)
    table = []
    for x in range(tgt.n):
        below = [a for a in range(src.n) if tgt.le[f.table[a], x]]
        table.append(src.join(below))
    g = MonotoneMap(tgt, src, table, validate=False)
    if not _equivalence_holds(f, g):
        raise NoAdjoint("map does not preserve all joins")
    return g


def left_adjoint(g: MonotoneMap) -> MonotoneMap:
    """f(a) = meet{x | a <= g(x)}; raises NoAdjoint when g does not preserve meets."""
    src, tgt = g.target, g.source
    _require_complete(src, tgt)
    table = []
    for a in range(src.n):
        above = [x for x in range(tgt.n) if src.le[a, g.table[x]]]
        table.append(tgt.meet(above))
    f = MonotoneMap(src, tgt, table, validate=False)
    if not _equivalence_holds(f, g):
        raise NoAdjoint("map does not preserve all meets")
    return f


def _equivalence_holds(f: MonotoneMap, g: MonotoneMap) -> bool:
    lhs = f.target.le[f.table, :]  # lhs[a, x] = f(a) <= x
    rhs = f.source.le[:, g.table]  # rhs[a, x] = a <= g(x)
    return bool((lhs == rhs).all())


def verify_galois(f: MonotoneMap, g: MonotoneMap) -> bool:
    """True iff (f, g) is a Galois connection with f the left adjoint.

    Checks the defining equivalence on every pair, the unit ``g.f >= id`` and
    the counit ``f.g <= id``.
    """
    if not (f.target.same_as(g.source) and g.target.same_as(f.source)):
        raise DimMismatch("f: P -> Q and g: Q -> P required")
    if not _equivalence_holds(f, g):
        return False
    p, q = f.source, f.target
    unit = all(p.le[a, g.table[f.table[a]]] for a in range(p.n))
    counit = all(q.le[f.table[g.table[x]], x] for x in range(q.n))
    return unit and counit


def bruteforce_right_adjoint(f: MonotoneMap) -> MonotoneMap:
    """Search each g(x) among all elements; independent of the join formula."""
    src, tgt = f.source, f.target
    table = []
    for x in range(tgt.n):
        wanted = tgt.le[f.table, x]
        hits = [y for y in range(src.n) if (src.le[:, y] == wanted).all()]
        if not hits:
            raise NoAdjoint(f"no candidate for g({x})")
        table.append(hits[0])
    return MonotoneMap(tgt, src, table, validate=False)


def bruteforce_left_adjoint(g: MonotoneMap) -> MonotoneMap:
    src, tgt = g.target, g.source
    table = []
    for a in range(src.n):
        wanted = src.le[a, g.table]
        hits = [y for y in range(tgt.n) if (tgt.le[y, :] == wanted).all()]
        if not hits:
            raise NoAdjoint(f"no candidate for f({a})")
        table.append(hits[0])
    return MonotoneMap(src, tgt, table, validate=False)


def preserves_joins(f: MonotoneMap, cap: int = SUBSET_CAP, seed: int = 0) -> bool:
    for mask in _subset_masks(f.source.n, cap, seed):
        members = _members(mask)
        j = f.source.join(members)
        if j is None:
            continue
        if f.target.join([f(i) for i in members]) != f(j):
            return False
    return True


def preserves_meets(f: MonotoneMap, cap: int = SUBSET_CAP, seed: int = 0) -> bool:
    for mask in _subset_masks(f.source.n, cap, seed):
        members = _members(mask)
        m = f.source.meet(members)
        if m is None:
            continue
        if f.target.meet([f(i) for i in members]) != f(m):
            return False
    return True


# ----------------------------------------------------------------------------
# standard finite posets


def chain(n: int) -> FinitePoset:
    idx = np.arange(n)
    return FinitePoset(list(range(n)), idx[:, None] <= idx[None, :])


def antichain(n: int) -> FinitePoset:
    return FinitePoset(list(range(n)), np.eye(n, dtype=bool))


def boolean_lattice(k: int) -> FinitePoset:
    """Subsets of a k-set as bitmasks 0 .. 2^k - 1, ordered by inclusion."""
    idx = np.arange(1 << k)
    return FinitePoset(list(idx), (idx[:, None] & ~idx[None, :]) == 0)


def poset_of_reals(values: Sequence[float]) -> FinitePoset:
    """A finite chain of distinct extended reals, sorted ascending."""
    vals = sorted(set(float(v) for v in values))
    arr = np.array(vals)
    return FinitePoset(vals, arr[:, None] <= arr[None, :])


def map_from_function(source: FinitePoset, target: FinitePoset, fn: Callable, locate: Optional[Callable] = None, validate: bool = True) -> MonotoneMap:
    """Tabulate ``fn`` on ``source.elements``; ``locate`` finds an image's index in ``target``.

    The default locator is exact lookup in ``target.elements``.
    """
    locate = locate or target.elements.index
    return MonotoneMap(source, target, [locate(fn(e)) for e in source.elements], validate)
