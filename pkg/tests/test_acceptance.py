"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Run ``python3 -m pytest tests/test_acceptance.py -v -s`` to see the lines, or
``python3 tests/test_acceptance.py`` for a plain summary.
"""

import itertools
import json
import math
import sys
from pathlib import Path

import numpy as np

sys.path.insert(0, str(Path(__file__).parent))

from specorder.calculus import (  # noqa: E402
    apply_ext,
    apply_to_operator,
    check_family_shift,
    check_ofA_eq_foA,
    plateau_fn,
    scale_fn,
    shift_fn,
)
from specorder.daseinise import context_operator, das_inner, das_outer, restriction_check_inner, restriction_check_outer  # noqa: E402
from specorder.galois import (  # noqa: E402
    FinitePoset,
    bruteforce_left_adjoint,
    bruteforce_right_adjoint,
    map_from_function,
    poset_of_reals,
    verify_galois,
)
from specorder.jsonio import operator_from_json  # noqa: E402
from specorder.linalg import HermitianOperator, Projection  # noqa: E402
from specorder.order import (  # noqa: E402
    first_power_violation,
    leq_s,
    linear_not_spectral_witness,
    power_order_check,
    spectral_leq,
    vector_lattice_counterexample,
)
from specorder.projlat import (  # noqa: E402
    AbelianContext,
    complement,
    locate_projection,
    proj_eq,
    proj_leq,
    projection_poset,
)
from specorder.qobs import (  # noqa: E402
    a_eval,
    family_from_o,
    image_on_nonzero,
    non_additivity_witness,
    o_eval,
    order_compare_via_o,
    sample_o,
    z_eval,
)
from specorder.sampling import (  # noqa: E402
    random_context,
    random_hermitian,
    random_projection,
    random_spectrum,
    random_subprojection,
    random_unitary,
    refine_context,
)
from specorder.spectral import evaluate, family_from_operator, jump_projections, operator_from_family  # noqa: E402

from make_fixtures import SEED  # noqa: E402

FIXTURES = Path(__file__).parent / "fixtures"
CLUSTER_TOL = 1e-8


def verdict(number, title, failures, total):
    status = "PASS" if failures == 0 else "FAIL"
    print(f"{status}  criterion {number:>2}: {title} ({total - failures}/{total})")
    assert failures == 0, f"criterion {number}: {failures} of {total} cases failed"


def dense_operator(rng, dim, distinct=None):
    """Operator given as a plain matrix, so its eigendata comes from the solver."""
    w = random_spectrum(rng, dim, distinct)
    u = random_unitary(rng, dim)
    return HermitianOperator((u * w) @ u.conj().T), sorted(set(w.tolist()))


def probe_projections(rng, a, extra=2):
    fam = family_from_operator(a)
    ps = [Projection.zero(a.dim), Projection.identity(a.dim)] + fam.projections
    ps += [random_subprojection(rng, p) for p in fam.projections]
    ps += [complement(p) for p in fam.projections]
    ps += [random_projection(rng, a.dim) for _ in range(extra)]
    return ps


# -- 1 ------------------------------------------------------------------------

def test_criterion_01_adjunction():
    rng = np.random.default_rng(101)
    failures = 0
    for _ in range(200):
        dim = int(rng.integers(1, 7))
        a = random_hermitian(rng, dim)
        fam = family_from_operator(a)
        ps = probe_projections(rng, a)
        p = ps[int(rng.integers(0, len(ps)))]
        spec = list(a.spectrum)
        choices = spec + [s + 0.25 for s in spec] + [s - 0.25 for s in spec] + [-math.inf, math.inf]
        r = float(rng.choice(choices)) if rng.random() < 0.8 else float(rng.uniform(-5, 5))
        if proj_leq(p, evaluate(fam, r), a.tol) != (o_eval(fam, p) <= r):
            failures += 1
    verdict(1, "P <= E_r iff o(P) <= r", failures, 200)


# -- 2 ------------------------------------------------------------------------

def random_pair(rng):
    dim = int(rng.integers(2, 6))
    kind = rng.integers(0, 4)
    if kind == 0:  # commuting, B shifted up on each eigenvector: A <=_s B holds
        u = random_unitary(rng, dim)
        w = random_spectrum(rng, dim)
        return (HermitianOperator.from_eigenvectors(w, u), HermitianOperator.from_eigenvectors(w + rng.choice([0, 0.5, 1], dim), u))
    if kind == 1:
        p = random_projection(rng, dim)
        q = random_subprojection(rng, p) if rng.random() < 0.5 else random_projection(rng, dim)
        return HermitianOperator(q.matrix), HermitianOperator(p.matrix)
    if kind == 2:
        a = random_hermitian(rng, dim)
        return a, a
    return random_hermitian(rng, dim), random_hermitian(rng, dim)


def test_criterion_02_order_isomorphism():
    rng = np.random.default_rng(202)
    failures = 0
    for _ in range(200):
        a, b = random_pair(rng)
        sample = jump_projections(family_from_operator(a), family_from_operator(b))
        for x, y in ((a, b), (b, a)):
            if leq_s(x, y) != order_compare_via_o(x, y, sample):
                failures += 1
                break
    verdict(2, "spectral order agrees with o-comparison", failures, 200)


# -- 3 ------------------------------------------------------------------------

def test_criterion_03_spectrum_image():
    rng = np.random.default_rng(303)
    failures = 0
    for _ in range(100):
        dim = int(rng.integers(3, 7))
        a, expected = dense_operator(rng, dim)
        sample = family_from_operator(a).projections + random_context(rng, dim, 3).lattice()
        image = sorted(image_on_nonzero(a, sample))
        ok = len(image) == len(expected) and all(abs(x - y) <= CLUSTER_TOL for x, y in zip(image, expected))
        failures += not ok
    verdict(3, "image of o on nonzero projections is the spectrum", failures, 100)


# -- 4 ------------------------------------------------------------------------

def test_criterion_04_round_trip():
    rng = np.random.default_rng(404)
    failures = 0
    for _ in range(100):
        dim = int(rng.integers(1, 7))
        a, _ = dense_operator(rng, dim)
        sample = probe_projections(rng, a)
        back = operator_from_family(family_from_o(sample_o(a, sample)))
        failures += not np.abs(back.matrix - a.matrix).max() <= 1e-8
    verdict(4, "family -> o-sample -> family -> operator", failures, 100)


# -- 5 ------------------------------------------------------------------------

def random_function(rng, a):
    kind = rng.integers(0, 3)
    if kind == 0:
        return shift_fn(float(rng.choice([-2.5, -1, 0.5, 3])))
    if kind == 1:
        return scale_fn(float(rng.choice([0.25, 0.5, 2, 3])))
    pieces = int(rng.integers(2, 5))
    pool = sorted(set(list(a.spectrum) + [s + 0.25 for s in a.spectrum] + [-4.5, 4.5]))
    cuts = sorted(rng.choice(pool, size=min(pieces - 1, len(pool)), replace=False).tolist())
    levels = np.cumsum(rng.choice([0.5, 1.0, 2.0], size=len(cuts) + 1)) - 3
    return plateau_fn(cuts, levels.tolist())


def test_criterion_05_functional_calculus():
    rng = np.random.default_rng(505)
    failures = 0
    for _ in range(100):
        dim = int(rng.integers(1, 6))
        a = random_hermitian(rng, dim)
        f = random_function(rng, a)
        sample = probe_projections(rng, a)
        # oracle: apply f to numpy eigenpairs
        w, v = np.linalg.eigh(np.asarray(a.matrix))
        w = np.where(np.abs(w - np.round(w * 2) / 2) < 1e-9, np.round(w * 2) / 2, w)
        expected = (v * [apply_ext(f, x) for x in w]) @ v.conj().T
        ok = check_family_shift(a, f) and check_ofA_eq_foA(a, f, sample)
        ok = ok and np.abs(apply_to_operator(f, a).matrix - expected).max() <= 1e-8
        failures += not ok
    verdict(5, "functional calculus shifts families and commutes with o", failures, 100)


# -- 6 ------------------------------------------------------------------------

def test_criterion_06_antonymous():
    rng = np.random.default_rng(606)
    failures = 0
    for _ in range(200):
        dim = int(rng.integers(1, 6))
        a = random_hermitian(rng, dim)
        neg = -a
        ps = probe_projections(rng, a)
        p = ps[int(rng.integers(0, len(ps)))]
        av = a_eval(a, p)
        ok = av == -o_eval(neg, p) and av == z_eval(a, complement(p))
        if p.rank not in (0, dim):
            ok = ok and av <= o_eval(a, p)
        failures += not ok
    verdict(6, "a = -o(-A), a(P) = z(1-P), a <= o", failures, 200)


# -- 7 ------------------------------------------------------------------------

def grid_operators(a, ctx):
    spec = list(a.spectrum)
    values = spec + [(x + y) / 2 for x, y in zip(spec, spec[1:])] + [spec[0] - 1, spec[-1] + 1]
    for combo in itertools.product(values, repeat=ctx.k):
        yield context_operator(ctx, combo)


def test_criterion_07_daseinisation():
    rng = np.random.default_rng(707)
    failures = 0
    for _ in range(100):
        dim = int(rng.integers(2, 5))
        a = random_hermitian(rng, dim, distinct=int(rng.integers(1, min(dim, 3) + 1)))
        ctx = random_context(rng, dim, int(rng.integers(1, min(dim, 3) + 1)))
        outer, inner = das_outer(a, ctx), das_inner(a, ctx)
        ok = restriction_check_outer(a, ctx, outer) and restriction_check_inner(a, ctx, inner)
        ok = ok and leq_s(inner, a) and leq_s(a, outer)
        ok = ok and ctx.contains_operator(outer) and ctx.contains_operator(inner)
        spec = a.spectrum
        ok = ok and all(min(abs(v - s) for s in spec) <= CLUSTER_TOL for b in (outer, inner) for v in b.spectrum)
        for b in grid_operators(a, ctx):
            if not ok:
                break
            if leq_s(a, b) and not leq_s(outer, b):
                ok = False
            if leq_s(b, a) and not leq_s(b, inner):
                ok = False
        failures += not ok
    verdict(7, "daseinisation restriction, extremality, sandwich, spectrum", failures, 100)


# -- 8 ------------------------------------------------------------------------

def load_fixture(name):
    return json.loads((FIXTURES / name).read_text())


def test_criterion_08_spectral_order_facts():
    rng = np.random.default_rng(808)
    failures = total = 0
    for _ in range(100):  # projections: spectral order is the projection order
        dim = int(rng.integers(1, 6))
        p = random_projection(rng, dim)
        q = random_subprojection(rng, p) if rng.random() < 0.5 else random_projection(rng, dim)
        total += 1
        failures += leq_s(HermitianOperator(q.matrix), HermitianOperator(p.matrix)) != proj_leq(q, p)
    for _ in range(100):  # diagonal pairs: spectral order is entrywise order
        dim = int(rng.integers(1, 6))
        x = rng.choice(np.arange(-4, 5) / 2, dim)
        y = x + rng.choice([-0.5, 0, 0, 0.5, 1], dim)
        total += 1
        failures += leq_s(HermitianOperator.diagonal(x), HermitianOperator.diagonal(y)) != bool(np.all(x <= y))
    # golden witness: linearly ordered, not spectrally, powers fail
    doc = load_fixture("linear_not_spectral_m2.json")
    a, b = operator_from_json(doc["A"]), operator_from_json(doc["B"])
    v = spectral_leq(a, b)
    n = first_power_violation(a, b, 6)
    total += 1
    failures += not (v.leq_linear and not v.leq_s and not power_order_check(a, b, 6) and n is not None and n <= 6)
    # golden triple: translation breaks the spectral order
    doc = load_fixture("translation_triple_m2.json")
    a, b, c = (operator_from_json(doc[k]) for k in "ABC")
    total += 1
    failures += not (leq_s(a, b) and not leq_s(a + c, b + c))
    # seeded discovery succeeds within the default trial budget
    a, b, n = linear_not_spectral_witness(SEED, max_trials=10**5)
    a2, b2, c2 = vector_lattice_counterexample(2, SEED, max_trials=10**5)
    total += 1
    failures += not (spectral_leq(a, b).leq_linear and not leq_s(a, b) and leq_s(a2, b2) and not leq_s(a2 + c2, b2 + c2))
    verdict(8, "projection pairs, diagonal pairs, golden witnesses", failures, total)


# -- 9 ------------------------------------------------------------------------

def test_criterion_09_non_additivity():
    q = Projection.coordinate(2, [0])
    p = Projection.span(np.array([[1.0], [1.0]]))
    o_one, o_q, o_rest = non_additivity_witness(q, p)
    failures = int(o_one != 1.0) + int(o_q + o_rest != 2.0)
    verdict(9, "o^1(P) = 1 but o^Q(P) + o^(1-Q)(P) = 2", failures, 2)


# -- 10 -----------------------------------------------------------------------

def context_inclusion_cases(rng):
    """(context, finite sample of projections containing its lattice)."""
    yield AbelianContext.coordinate(8, [2, 2, 4]), AbelianContext.coordinate(8).lattice()
    yield AbelianContext.coordinate(4, [1, 3]), AbelianContext.coordinate(4).lattice()
    for _ in range(8):
        dim = int(rng.integers(2, 7))
        coarse = random_context(rng, dim, int(rng.integers(1, min(dim, 3) + 1)))
        fine = coarse
        for _ in range(int(rng.integers(0, 3))):
            fine = refine_context(rng, fine)
        yield coarse, dedupe(fine.lattice() + [random_projection(rng, dim) for _ in range(3)])


def dedupe(ps):
    out = []
    for p in ps:
        if not any(proj_eq(p, q) for q in out):
            out.append(p)
    return out


def delta_tables_agree(ctx, sample):
    """Outer and inner approximation tables are the adjoints of the inclusion."""
    small = ctx.lattice()
    masks = FinitePoset(list(range(len(small))), [[(i & ~j) == 0 for j in range(len(small))] for i in range(len(small))])
    pn = projection_poset(sample)
    incl = map_from_function(masks, pn, lambda m: small[m], locate_projection(sample))
    outer = map_from_function(pn, masks, ctx.outer_mask, lambda m: m)
    inner = map_from_function(pn, masks, ctx.inner_mask, lambda m: m)
    return (
        verify_galois(outer, incl)
        and verify_galois(incl, inner)
        and bruteforce_left_adjoint(incl) == outer
        and bruteforce_right_adjoint(incl) == inner
    )


def observable_pair_agrees(a, sample):
    """o^A on a projection sample and E^A on a finite chain form a Galois pair."""
    fam = family_from_operator(a)
    values = [-math.inf] + list(fam.points)
    chain = poset_of_reals(values + [(x + y) / 2 for x, y in zip(fam.points, fam.points[1:])] + [math.inf])
    pn = projection_poset(sample)
    loc = locate_projection(sample)
    o_map = map_from_function(pn, chain, lambda p: o_eval(fam, p))
    e_map = map_from_function(chain, pn, lambda r: evaluate(fam, r), loc)
    return verify_galois(o_map, e_map) and bruteforce_left_adjoint(e_map) == o_map and bruteforce_right_adjoint(o_map) == e_map


def test_criterion_10_generic_galois_oracle():
    rng = np.random.default_rng(1010)
    failures = total = 0
    for coarse, sample in context_inclusion_cases(rng):
        assert len(sample) <= 2**8
        total += 1
        failures += not delta_tables_agree(coarse, sample)
    for _ in range(20):
        dim = int(rng.integers(1, 6))
        a = random_hermitian(rng, dim)
        sample = dedupe(probe_projections(rng, a, extra=3) + random_context(rng, dim, min(dim, 3)).lattice())
        total += 1
        failures += not observable_pair_agrees(a, sample)
    # the same pair for an operator inside a context, over the full context lattice
    for blocks in ([3, 3, 2], [1] * 8):
        ctx = AbelianContext.coordinate(8, blocks)
        b = context_operator(ctx, rng.choice([-1.0, 0.0, 0.5, 2.0], ctx.k))
        total += 1
        failures += not observable_pair_agrees(b, ctx.lattice())
    verdict(10, "production adjoints match brute-force adjoints", failures, total)


if __name__ == "__main__":
    status = 0
    for name, fn in sorted(globals().items()):
        if name.startswith("test_criterion_"):
            try:
                fn()
            except AssertionError:
                status = 1
    sys.exit(status)
