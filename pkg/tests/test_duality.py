import numpy as np
import pytest

from skewc.conjugation import (
    flip_conjugation,
    opnorm,
    plain_conjugation,
    random_conjugation,
    rank_one,
    symmetry_class,
)
from skewc.duality import (
    algebra_generated,
    alpha,
    annihilator_element,
    conjugate_alignment,
    distance_to_skew,
    hyperreflexivity_ratios,
    preannihilator,
    reflexivity_check,
    sin_angle,
    structured_basis,
    trace_pair,
)
from skewc.errors import DimensionMismatch, MissingArgument
from skewc.numerics import orthonormalize, rank_one_search

from conftest import cgauss, random_skew, unit

ROT = np.array([[0, 1], [-1, 0]], dtype=complex)


def corpus(count, nmax=12, seed=0):
    for i in range(count):
        rng = np.random.default_rng([seed, i])
        n = int(rng.integers(2, nmax + 1))
        yield random_conjugation(n, rng), cgauss(rng, n, n)


class TestTracePair:
    def test_identity(self):
        assert trace_pair(np.eye(2), np.eye(2)) == 2

    def test_rank_one(self, rng):
        T = cgauss(rng, 4, 4)
        x, y = cgauss(rng, 4), cgauss(rng, 4)
        assert abs(trace_pair(T, rank_one(x, y)) - np.vdot(y, T @ x)) <= 1e-12 * np.linalg.norm(T) * 10

    def test_bilinear(self, rng):
        T, t1, t2 = (cgauss(rng, 3, 3) for _ in range(3))
        a = 2 - 1j
        assert trace_pair(T, a * t1 + t2) == pytest.approx(a * trace_pair(T, t1) + trace_pair(T, t2))
        assert trace_pair(a * t1, T) == pytest.approx(a * trace_pair(t1, T))

    def test_skew_kills_rank_one_family(self, random_conj, rng):
        n = random_conj.dim
        T = random_skew(random_conj, rng)
        T /= max(opnorm(T), 1e-300)
        for _ in range(10):
            h = unit(rng, n)
            assert abs(trace_pair(T, annihilator_element(random_conj, h))) <= 1e-12

    def test_shape_check(self):
        with pytest.raises(DimensionMismatch):
            trace_pair(np.eye(2), np.eye(3))


class TestStructuredBasis:
    def test_plain_two(self):
        B = structured_basis(plain_conjugation(2), "skew")
        assert B.subspace_dim == 1
        assert B.contains(ROT)

    def test_c1_family_in_span(self):
        B = structured_basis(flip_conjugation(3), "skew")
        assert B.subspace_dim == 3
        for a, b, c in [(1, 0, 0), (0, 1, 0), (0, 0, 1), (1, 2, 3)]:
            T = np.array([[a, b, 0], [c, 0, -b], [0, -c, -a]])
            assert B.projection_residual(T) <= 1e-12

    def test_dimensions_and_membership(self, random_conj):
        n = random_conj.dim
        sk = structured_basis(random_conj, "skew")
        sy = structured_basis(random_conj, "symmetric")
        assert sk.subspace_dim == n * (n - 1) // 2
        assert sy.subspace_dim == n * (n + 1) // 2
        assert sk.subspace_dim + sy.subspace_dim == n * n
        for E in sk:
            assert symmetry_class(random_conj, E).skew_residual <= 1e-10
        for E in sy:
            assert symmetry_class(random_conj, E).symmetric_residual <= 1e-10
        V = np.concatenate([sk.vectors(), sy.vectors()])
        np.testing.assert_allclose(V.conj() @ V.T, np.eye(n * n), atol=1e-10)


class TestPreannihilator:
    def test_plain_two_is_symmetric_matrices(self):
        pre = preannihilator(structured_basis(plain_conjugation(2)))
        assert pre.subspace_dim == 3
        for E in pre:
            np.testing.assert_allclose(E, E.T, atol=1e-12)
            assert abs(trace_pair(ROT, E)) <= 1e-12

    def test_rotation_algebra(self):
        pre = preannihilator(algebra_generated(ROT))
        assert pre.subspace_dim == 2
        target = orthonormalize([np.diag([1.0, -1.0]), np.array([[0, 1.0], [1.0, 0]])])
        for E in pre:
            assert target.projection_residual(E) <= 1e-12
        for E in target:
            assert pre.projection_residual(E) <= 1e-12

    def test_full_space(self):
        full = orthonormalize([np.eye(4)[i].reshape(2, 2) for i in range(4)])
        assert preannihilator(full).subspace_dim == 0

    def test_bilinear_not_sesquilinear(self):
        S = orthonormalize([np.array([[1, 1j], [0, 0]])])
        pre = preannihilator(S)
        assert pre.subspace_dim == 3
        # tr(S t) = 0 but the Frobenius product <S, t> = 1
        t = np.array([[1, 0], [1j, 0]])
        assert pre.projection_residual(t) <= 1e-12
        for E in pre:
            assert abs(trace_pair(S.elements[0], E)) <= 1e-12

    def test_contains_family(self, random_conj, rng):
        n = random_conj.dim
        pre = preannihilator(structured_basis(random_conj))
        assert pre.subspace_dim == n * (n + 1) // 2
        for _ in range(10):
            t = annihilator_element(random_conj, unit(rng, n))
            assert pre.projection_residual(t) <= 1e-12


class TestAnnihilatorElement:
    def test_plain_e1(self):
        np.testing.assert_allclose(annihilator_element(plain_conjugation(2), [1, 0]), [[1, 0], [0, 0]])

    def test_flip(self):
        t = annihilator_element(flip_conjugation(2), [1, 0])
        np.testing.assert_allclose(t, [[0, 1], [0, 0]])
        for E in structured_basis(flip_conjugation(2)):
            assert abs(trace_pair(E, t)) <= 1e-12

    def test_rank_two_degenerates(self, random_conj, rng):
        # g = Ch collapses h (x) g + Cg (x) Ch to 2 h (x) Ch
        h = unit(rng, random_conj.dim)
        t2 = annihilator_element(random_conj, h, random_conj(h), rank=2)
        np.testing.assert_allclose(t2, 2 * annihilator_element(random_conj, h), atol=1e-14)

    def test_rank_two_annihilates(self, random_conj, rng):
        n = random_conj.dim
        sk = structured_basis(random_conj)
        for _ in range(10):
            t = annihilator_element(random_conj, unit(rng, n), unit(rng, n), rank=2)
            for E in sk:
                assert abs(trace_pair(E, t)) <= 1e-12

    def test_missing_g(self):
        with pytest.raises(MissingArgument):
            annihilator_element(plain_conjugation(2), [1, 0], rank=2)

    def test_dimension(self):
        with pytest.raises(DimensionMismatch):
            annihilator_element(plain_conjugation(2), [1, 0, 0])


def sphere_sample_alpha1(C, T, samples, seed):
    """Independent sampled sup of |tr(T (h (x) Ch))| over unit h."""
    rng = np.random.default_rng(seed)
    best = 0.0
    for _ in range(samples):
        h = unit(rng, C.dim)
        best = max(best, abs(np.vdot(C(h), T @ h)))
    return best


class TestAlpha:
    def test_identity_k1(self):
        rep = alpha(plain_conjugation(2), np.eye(2), 1)
        assert rep.value == pytest.approx(1.0)
        assert sphere_sample_alpha1(plain_conjugation(2), np.eye(2), 2000, 0) <= 1 + 1e-12

    def test_rotation_is_zero(self):
        for k in (1, 2):
            assert alpha(plain_conjugation(2), ROT, k).value <= 1e-15

    def test_nilpotent_k2(self):
        assert alpha(plain_conjugation(2), [[0, 1], [0, 0]], 2).value == pytest.approx(0.5)

    def test_witnesses(self):
        for C, T in corpus(40, 8, seed=1):
            for k in (1, 2):
                rep = alpha(C, T, k)
                assert abs(rep.witness_value(C, T) - rep.value) <= 1e-8 * max(rep.value, 1)

    def test_closed_form_vs_sampling(self):
        for i, (C, T) in enumerate(corpus(10, 4, seed=2)):
            a1 = alpha(C, T, 1).value
            samp = sphere_sample_alpha1(C, T, 3000, i)
            assert samp <= a1 + 1e-10
            assert samp >= 0.8 * a1  # dense enough sampling in low dimension

    def test_sampled_method_is_lower_bound(self):
        for C, T in corpus(20, 6, seed=3):
            for k in (1, 2):
                closed = alpha(C, T, k).value
                sampled = alpha(C, T, k, method="sampled", samples=2000)
                assert sampled.value <= closed + 1e-10
                assert sampled.method == "sampled"
                assert abs(sampled.witness_value(C, T) - sampled.value) <= 1e-10 * max(1, closed)

    def test_zero_alpha1_means_skew(self):
        for seed in range(20):
            rng = np.random.default_rng(seed)
            C = random_conjugation(5, seed)
            T = random_skew(C, rng)
            assert alpha(C, T, 1).value <= 1e-12 * opnorm(T)
            assert symmetry_class(C, T, 1e-8).is_skew

    def test_homogeneous(self):
        for C, T in corpus(10, 6, seed=4):
            for k in (1, 2):
                a = alpha(C, T, k).value
                assert alpha(C, (2 - 3j) * T, k).value == pytest.approx(abs(2 - 3j) * a, rel=1e-12)


class TestDistance:
    def test_identity(self):
        rep = distance_to_skew(plain_conjugation(2), np.eye(2))
        assert rep.dist == pytest.approx(1.0)
        np.testing.assert_allclose(rep.nearest, 0, atol=1e-15)

    def test_identity_sampling_lower_bound(self):
        rng = np.random.default_rng(0)
        B = structured_basis(plain_conjugation(2))
        for _ in range(10_000):
            S = B.combine(cgauss(rng, B.subspace_dim) * rng.exponential())
            assert opnorm(np.eye(2) - S) >= 1 - 1e-6

    def test_skew(self, rng):
        C = random_conjugation(4, 9)
        T = random_skew(C, rng)
        rep = distance_to_skew(C, T)
        assert rep.dist <= 1e-14 * opnorm(T)
        np.testing.assert_allclose(rep.nearest, T, atol=1e-13)

    def test_nilpotent(self):
        rep = distance_to_skew(plain_conjugation(2), [[0, 1], [0, 0]])
        assert rep.dist == pytest.approx(0.5)
        np.testing.assert_allclose(rep.nearest, [[0, 0.5], [-0.5, 0]])

    def test_report_invariants(self):
        for C, T in corpus(50, 10, seed=5):
            rep = distance_to_skew(C, T)
            assert symmetry_class(C, rep.nearest).is_skew
            assert abs(opnorm(T - rep.nearest) - rep.dist) <= 1e-10 * opnorm(T)
            assert abs(rep.certificate_gap) <= 1e-10 * opnorm(T)

    def test_convex_program_oracle(self):
        cp = pytest.importorskip("cvxpy")
        for C, T in corpus(5, 5, seed=6):
            B = structured_basis(C)
            c = cp.Variable(B.subspace_dim, complex=True)
            S = sum(c[j] * B.elements[j] for j in range(B.subspace_dim))
            prob = cp.Problem(cp.Minimize(cp.sigma_max(T - S)))
            prob.solve()
            assert distance_to_skew(C, T).dist == pytest.approx(prob.value, rel=1e-5)

    def test_duality_bound(self):
        for C, T in corpus(100, 12, seed=7):
            d = distance_to_skew(C, T).dist
            for k in (1, 2):
                assert alpha(C, T, k).value <= d * (1 + 1e-12) + 1e-10

    def test_rank_two_samples_below_alpha2(self):
        for i, (C, T) in enumerate(corpus(20, 6, seed=8)):
            a2 = alpha(C, T, 2).value
            rng = np.random.default_rng(i)
            for _ in range(200):
                h, g = unit(rng, C.dim), unit(rng, C.dim)
                val = 0.5 * abs(trace_pair(T, annihilator_element(C, h, g, rank=2)))
                assert val <= a2 + 1e-10


class TestRatios:
    def test_identity(self):
        assert hyperreflexivity_ratios(plain_conjugation(2), np.eye(2)) == pytest.approx((1.0, 1.0))

    def test_skew_convention(self):
        assert hyperreflexivity_ratios(plain_conjugation(2), ROT) == (1.0, 1.0)

    def test_corpus(self):
        worst1 = 0.0
        for C, T in corpus(200, 12, seed=9):
            r1, r2 = hyperreflexivity_ratios(C, T)
            assert r1 <= 3 + 1e-8
            assert abs(r2 - 1) <= 1e-8
            worst1 = max(worst1, r1)
        assert worst1 <= 1 + 1e-6


class TestReflexivity:
    def test_plain_three(self):
        C = plain_conjugation(3)
        rep = reflexivity_check(structured_basis(C), 1, C, trials=50)
        assert (rep.preannihilator_dim, rep.rank_k_span_dim, rep.verdict) == (6, 6, "reflexive")

    @pytest.mark.parametrize("k", [1, 2])
    def test_random(self, random_conj, k):
        rep = reflexivity_check(structured_basis(random_conj), k, random_conj, trials=60, seed=1)
        assert rep.verdict == "reflexive"
        assert rep.rank_k_span_dim == rep.preannihilator_dim

    def test_rotation_algebra_by_search(self):
        rep = reflexivity_check(algebra_generated(ROT), 1)
        assert rep.preannihilator_dim == 2 and rep.rank_k_span_dim == 2
        assert rep.verdict == "reflexive"
        targets = [np.array([[1, 1j], [1j, -1]]) / 2, np.array([[1, -1j], [-1j, -1]]) / 2]
        for t in targets:
            assert any(abs(np.vdot(c.matrix.ravel(), t.ravel())) >= 1 - 1e-10 for c in rep.evidence)

    def test_identity_span_search(self):
        rep = reflexivity_check(orthonormalize([np.eye(2)]), 1)
        assert rep.preannihilator_dim == 3
        assert rep.rank_k_span_dim <= 3
        assert rep.verdict in ("reflexive", "not_certified")

    def test_search_candidates_have_conjugate_structure(self):
        for seed in range(5):
            C = random_conjugation(3 + seed, seed)
            for cand in rank_one_search(preannihilator(structured_basis(C)), restarts=5, seed=seed):
                assert conjugate_alignment(C, cand) <= 1e-6


class TestAlgebra:
    def test_rotation(self):
        A = algebra_generated(ROT)
        assert A.subspace_dim == 2
        for a, b in [(1, 0), (0, 1), (2, -3j)]:
            assert A.contains(np.array([[a, b], [-b, a]]))

    def test_identity(self):
        assert algebra_generated(np.eye(3)).subspace_dim == 1

    def test_diagonal(self):
        assert algebra_generated(np.diag([1.0, 2.0, 3.0])).subspace_dim == 3

    def test_nilpotent_jordan(self):
        assert algebra_generated(np.eye(4, k=-1)).subspace_dim == 4

    def test_large_entries(self):
        assert algebra_generated(1e100 * np.diag([1.0, 2.0, 3.0])).subspace_dim == 3


def test_sin_angle():
    assert sin_angle([1, 0], [1j, 0]) == pytest.approx(0.0, abs=1e-15)
    assert sin_angle([1, 0], [0, 1]) == pytest.approx(1.0)
