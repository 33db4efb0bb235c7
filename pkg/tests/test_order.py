import json
from pathlib import Path

import numpy as np
import pytest

from specorder.errors import DimMismatch, NotFound, NotPSD
from specorder.jsonio import matrix_from_json, operator_from_json
from specorder.linalg import HermitianOperator, Projection, is_psd
from specorder.order import (
    first_power_violation,
    leq_s,
    linear_not_spectral_witness,
    power_order_check,
    spectral_join,
    spectral_leq,
    spectral_meet,
    vector_lattice_counterexample,
)
from specorder.projlat import join, meet, proj_leq
from specorder.qobs import order_compare_via_o
from specorder.sampling import random_diagonal, random_hermitian, random_projection, random_unitary
from specorder.spectral import evaluate, family_from_operator, merged_grid

from conftest import diag, ray
from make_fixtures import SEED, build

FIXTURES = Path(__file__).parent / "fixtures"


def load(name):
    return json.loads((FIXTURES / name).read_text())


def families_leq_dense(a, b):
    """Oracle: compare E^A and E^B on a dense grid straddling every jump point."""
    ea, eb = family_from_operator(a), family_from_operator(b)
    pts = merged_grid(ea, eb)
    grid = pts + [p - 1e-6 for p in pts] + [p + 1e-6 for p in pts]
    return all(proj_leq(evaluate(eb, r), evaluate(ea, r)) for r in grid)


def op(p: Projection) -> HermitianOperator:
    return HermitianOperator(p.matrix)


def test_examples():
    v = spectral_leq(diag(1, 2), diag(2, 2))
    assert v.leq_s and v.leq_linear and not v.witnesses
    w = spectral_leq(diag(2, 2), diag(1, 2))
    assert not w.leq_s and w.witnesses[0].r == 1.0
    with pytest.raises(DimMismatch):
        spectral_leq(diag(1), diag(1, 2))


def test_projection_pairs_agree(rng):
    for _ in range(60):
        p = random_projection(rng, 3)
        q = join(p, random_projection(rng, 3, 1)) if rng.random() < 0.5 else random_projection(rng, 3)
        v = spectral_leq(op(p), op(q))
        assert v.leq_s == proj_leq(p, q) == v.leq_linear


def test_commuting_agree_with_entrywise(rng):
    for _ in range(60):
        a, b = random_diagonal(rng, 3), random_diagonal(rng, 3)
        if rng.random() < 0.5:
            b = HermitianOperator.diagonal(np.maximum(np.diag(a.matrix).real, np.diag(b.matrix).real))
        entrywise = bool(np.all(np.diag(a.matrix).real <= np.diag(b.matrix).real))
        v = spectral_leq(a, b)
        assert v.leq_s == v.leq_linear == entrywise


def test_agrees_with_dense_grid_and_o(rng):
    for _ in range(60):
        a, b = random_hermitian(rng, 3), random_hermitian(rng, 3)
        if rng.random() < 0.3:
            b = HermitianOperator.from_eigenvectors(np.array(a.eig.eigenvalues) + rng.choice([0, 1], 3), a.eig.vectors)
        v = spectral_leq(a, b)
        assert v.leq_s == families_leq_dense(a, b)
        sample = family_from_operator(a).projections + family_from_operator(b).projections
        assert v.leq_s == order_compare_via_o(a, b, sample)
        if v.leq_s:
            assert v.leq_linear


def test_partial_order(rng):
    ops = [random_hermitian(rng, 2, distinct=2) for _ in range(12)]
    ops += [HermitianOperator.from_eigenvectors([x, y], ops[0].eig.vectors) for x, y in [(0, 1), (0, 2), (1, 2)]]
    rel = {(i, j): leq_s(a, b) for i, a in enumerate(ops) for j, b in enumerate(ops)}
    for i, a in enumerate(ops):
        assert rel[i, i]
        for j, b in enumerate(ops):
            if i != j and rel[i, j] and rel[j, i]:
                assert np.abs(a.matrix - b.matrix).max() < 1e-8
            for k in range(len(ops)):
                if rel[i, j] and rel[j, k]:
                    assert rel[i, k]


def test_meet_join_examples(rng):
    a = random_hermitian(rng, 3)
    assert np.abs(spectral_meet([a, a]).matrix - a.matrix).max() < 1e-9
    assert np.abs(spectral_join([a, a]).matrix - a.matrix).max() < 1e-9
    np.testing.assert_allclose(spectral_meet([diag(1, 3), diag(2, 2)]).matrix, np.diag([1, 2]), atol=1e-12)
    np.testing.assert_allclose(spectral_join([diag(1, 3), diag(2, 2)]).matrix, np.diag([2, 3]), atol=1e-12)
    p, q = ray(1, 0), ray(1, 1)
    np.testing.assert_allclose(spectral_join([op(p), op(q)]).matrix, np.eye(2), atol=1e-9)
    np.testing.assert_allclose(spectral_meet([op(p), op(q)]).matrix, meet(p, q).matrix, atol=1e-9)
    with pytest.raises(ValueError):
        spectral_meet([])


def test_commuting_meet_join_entrywise(rng):
    for _ in range(30):
        ds = [random_diagonal(rng, 4) for _ in range(3)]
        vals = np.array([np.diag(d.matrix).real for d in ds])
        u = random_unitary(rng, 4)
        ops = [HermitianOperator.from_eigenvectors(v, u) for v in vals]
        lo, hi = spectral_meet(ops), spectral_join(ops)
        np.testing.assert_allclose(lo.matrix, (u * vals.min(axis=0)) @ u.conj().T, atol=1e-9)
        np.testing.assert_allclose(hi.matrix, (u * vals.max(axis=0)) @ u.conj().T, atol=1e-9)


def test_noncommuting_bounds(rng):
    for _ in range(30):
        a, b = random_hermitian(rng, 3), random_hermitian(rng, 3)
        m, j = spectral_meet([a, b]), spectral_join([a, b])
        assert leq_s(m, a) and leq_s(m, b) and leq_s(a, j) and leq_s(b, j)
        # common lower / upper bounds built below / above both spectra
        lo = min(a.spectrum[0], b.spectrum[0]) - rng.uniform(0, 1)
        c = random_hermitian(rng, 3)
        c_low = HermitianOperator(c.matrix - (c.spectrum[-1] - lo) * np.eye(3))
        c_high = HermitianOperator(c.matrix + (max(a.spectrum[-1], b.spectrum[-1]) - c.spectrum[0] + 0.5) * np.eye(3))
        assert leq_s(c_low, m) and leq_s(j, c_high)
        for cand in (m, a, b):
            if leq_s(cand, a) and leq_s(cand, b):
                assert leq_s(cand, m)


def test_anti_lattice_contrast():
    a, b = diag(1, 0), diag(0, 1)
    assert not spectral_leq(a, b).leq_linear and not spectral_leq(b, a).leq_linear
    rng = np.random.default_rng(5)
    # t(1 + t) >= |s|^2 makes these lower bounds; none of them is below 0
    seeds = [HermitianOperator([[-0.01, s], [np.conj(s), -0.01]]) for s in (0.1, -0.1, 0.1j)]
    lower = seeds + [c for c in (random_hermitian(rng, 2) for _ in range(300)) if is_psd(a - c) and is_psd(b - c)]
    assert all(is_psd(a - c) and is_psd(b - c) for c in lower)
    # no sampled linear lower bound dominates all the others
    assert not any(all(is_psd(c - d) for d in lower) for c in lower)
    m = spectral_meet([a, b])
    np.testing.assert_allclose(m.matrix, np.zeros((2, 2)), atol=1e-12)
    assert leq_s(m, a) and leq_s(m, b)
    for c in lower:
        if leq_s(c, a) and leq_s(c, b):
            assert leq_s(c, m)


def test_power_check_examples(rng):
    a = HermitianOperator(np.diag([0.5, 1.0]))
    assert power_order_check(a, a, 6)
    b = HermitianOperator(np.diag([1.0, 2.0]))
    assert power_order_check(a, b, 6)
    with pytest.raises(NotPSD):
        power_order_check(diag(-1, 1), b, 3)
    with pytest.raises(ValueError):
        power_order_check(a, b, 0)


def test_power_check_consistent_with_spectral_order(rng):
    for _ in range(30):
        u = random_unitary(rng, 3)
        w = np.sort(rng.uniform(0, 2, 3))
        a = HermitianOperator.from_eigenvectors(w, u)
        b = HermitianOperator.from_eigenvectors(w + rng.uniform(0, 1, 3), u @ np.diag(np.exp(1j * rng.uniform(0, 6, 3))))
        if leq_s(a, b):
            assert power_order_check(a, b, 6)


def test_golden_linear_not_spectral():
    doc = load("linear_not_spectral_m2.json")
    a, b = operator_from_json(doc["A"]), operator_from_json(doc["B"])
    v = spectral_leq(a, b)
    assert v.leq_linear and not v.leq_s
    assert not power_order_check(a, b, 6)
    assert first_power_violation(a, b, 6) == doc["first_failing_power"] <= 6


def test_golden_translation_triple():
    doc = load("translation_triple_m2.json")
    a, b, c = (operator_from_json(doc[k]) for k in "ABC")
    assert leq_s(a, b)
    assert not leq_s(a + c, b + c)


def test_seeded_discovery_reproduces_fixtures():
    for name, doc in build().items():
        stored = load(name)
        assert stored["seed"] == SEED
        for key in ("A", "B", "C"):
            if key in stored:
                np.testing.assert_array_equal(matrix_from_json(stored[key]), matrix_from_json(doc[key]))


def test_translation_search_edge_cases(rng):
    with pytest.raises(NotFound):
        vector_lattice_counterexample(1, 0)
    with pytest.raises(NotFound):
        linear_not_spectral_witness(0, max_trials=0)
    # commuting triples never break translation invariance
    for _ in range(30):
        u = random_unitary(rng, 3)
        wa = rng.uniform(-1, 1, 3)
        a = HermitianOperator.from_eigenvectors(wa, u)
        b = HermitianOperator.from_eigenvectors(wa + rng.uniform(0, 1, 3), u)
        c = HermitianOperator.from_eigenvectors(rng.uniform(-1, 1, 3), u)
        assert leq_s(a, b) and leq_s(a + c, b + c)
