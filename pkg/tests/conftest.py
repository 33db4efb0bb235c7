import numpy as np
import pytest

from specorder.linalg import HermitianOperator, Projection


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def diag(*values) -> HermitianOperator:
    return HermitianOperator.diagonal(values)


def ray(*coords) -> Projection:
    v = np.array(coords, dtype=complex).reshape(-1, 1)
    return Projection.span(v)


def coord(dim: int, *idx) -> Projection:
    return Projection.coordinate(dim, list(idx))


def same_proj(p: Projection, q: Projection, atol: float = 1e-9) -> bool:
    return np.allclose(p.matrix, q.matrix, atol=atol)
