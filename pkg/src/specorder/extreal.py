"""The extended real line {-inf} u R u {+inf}.

Values are plain Python floats; ``-math.inf`` and ``math.inf`` are the two
adjoined points.  Floats already carry the right total order, so the only
thing this module adds is a small set of guarded operations (shift, positive
scaling, negation) and the JSON encoding.  NaN is never a valid value.
"""

from __future__ import annotations

import math
from typing import Iterable, Union

ExtendedReal = float

NEG_INF: ExtendedReal = -math.inf
POS_INF: ExtendedReal = math.inf


def check(a: float) -> ExtendedReal:
    a = float(a)
    if math.isnan(a):
        raise ValueError("NaN is not an extended real")
    return a


def ext_inf(values: Iterable[float]) -> ExtendedReal:
    """Greatest lower bound; the empty meet is +inf."""
    return min((check(v) for v in values), default=POS_INF)


def ext_sup(values: Iterable[float]) -> ExtendedReal:
    """Least upper bound; the empty join is -inf."""
    return max((check(v) for v in values), default=NEG_INF)


def ext_add(a: float, t: float) -> ExtendedReal:
    """Shift by a finite ``t``; the infinities are fixed points."""
    a = check(a)
    if not math.isfinite(t):
        raise ValueError(f"shift must be finite, got {t!r}")
    if math.isinf(a):
        return a
    return a + t


def ext_scale(a: float, s: float) -> ExtendedReal:
    """Multiply by ``s > 0``.  Negative factors must go through :func:`ext_negate`."""
    a = check(a)
    if not (math.isfinite(s) and s > 0):
        raise ValueError(f"scale factor must be finite and positive, got {s!r}")
    if math.isinf(a):
        return a
    return a * s


def ext_negate(a: float) -> ExtendedReal:
    return -check(a)


def is_finite(a: float) -> bool:
    return math.isfinite(a)


def to_json(a: float) -> Union[str, float]:
    a = check(a)
    if a == POS_INF:
        return "+inf"
    if a == NEG_INF:
        return "-inf"
    return a


def from_json(obj: Union[str, int, float]) -> ExtendedReal:
    if isinstance(obj, str):
        s = obj.strip().lower()
        if s in ("+inf", "inf", "infinity", "+infinity"):
            return POS_INF
        if s in ("-inf", "-infinity"):
            return NEG_INF
        raise ValueError(f"not an extended real: {obj!r}")
    if isinstance(obj, bool) or not isinstance(obj, (int, float)):
        raise ValueError(f"not an extended real: {obj!r}")
    return check(obj)


def format_value(a: float) -> str:
    """Short human/CSV rendering, stable across runs."""
    a = check(a)
    if math.isinf(a):
        return "+inf" if a > 0 else "-inf"
    return repr(float(a))
