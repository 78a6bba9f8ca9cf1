import math

import numpy as np
import pytest

from hwobs.acbound import (
    ObservableSet,
    WitnessSpec,
    anticommutator_norms,
    build_separable_bound,
    conjugate_pair_terms,
    evaluate_witness,
    expectation_bound,
    k_exact,
    k_opnorm,
    symmetrized_terms,
    theorem_bound,
)
from hwobs.bloch import DensityMatrix
from hwobs.errors import DimensionError, ValidationError
from hwobs.hw_basis import PhasePoint, Q, points, q_max_squared
from hwobs.numerics import partial_trace
from hwobs.states import (
    ghz,
    isotropic_mix,
    max_entangled,
    random_density,
    random_product_state,
    random_separable_state,
)

PAULIS = ObservableSet.from_points([PhasePoint(2, 0, 1), PhasePoint(2, 1, 0), PhasePoint(2, 1, 1)])
D4_TRIPLE = ObservableSet.from_points([PhasePoint(4, 0, 1), PhasePoint(4, 2, 0), PhasePoint(4, 2, 1)])


def hw_set(d, labels):
    return ObservableSet.from_points([PhasePoint(d, *lab) for lab in labels])


def random_subset(rng, d):
    pts = points(d, include_origin=False)
    k = int(rng.integers(1, len(pts) + 1))
    idx = rng.choice(len(pts), size=k, replace=False)
    return ObservableSet.from_points([pts[i] for i in sorted(idx)])


class TestObservableSet:
    def test_non_hermitian_rejected(self):
        with pytest.raises(ValidationError, match="Hermitian"):
            ObservableSet((np.array([[0, 1], [0, 0]]),))

    def test_non_orthogonal_rejected(self):
        with pytest.raises(ValidationError, match="orthogonal"):
            ObservableSet((Q(3, 1, 0), Q(3, 1, 0)))

    def test_normalization(self):
        assert hw_set(5, [(1, 2), (3, 4)]).normalization == pytest.approx(5)


class TestK:
    def test_paulis_zero(self):
        rng = np.random.default_rng(0)
        for _ in range(10):
            assert k_exact(random_density(2, seed=rng), PAULIS) < 1e-12
        assert k_opnorm(PAULIS) < 1e-12

    def test_singleton(self):
        s = hw_set(3, [(1, 1)])
        assert k_exact(random_density(3, seed=1), s) == 0
        assert k_opnorm(s) == 0

    def test_d4_triple_zero(self):
        assert k_opnorm(D4_TRIPLE) < 1e-12

    def test_ordered_is_sqrt2_times_unordered(self):
        s = hw_set(9, [(0, 1), (4, 0), (4, 1)])
        assert k_opnorm(s, pairs="ordered") == pytest.approx(math.sqrt(2) * k_opnorm(s, pairs="unordered"))

    def test_contraction_oracle(self):
        s = hw_set(5, [(0, 1), (1, 0), (2, 3)])
        rho = random_density(5, seed=9)
        total = 0.0
        for i in range(3):
            for j in range(3):
                if i != j:
                    a, b = s.members[i], s.members[j]
                    total += np.trace(rho.matrix @ (a @ b + b @ a)).real ** 2
        assert k_exact(rho, s) == pytest.approx(0.5 * math.sqrt(total), abs=1e-12)

    def test_d9_reduced_locals(self):
        rho = max_entangled(9)
        local = DensityMatrix(partial_trace(rho.matrix, (9, 9), keep=[0]))
        s = hw_set(9, [(1, 0), (0, 4), (1, 4)])
        assert k_exact(local, s) <= k_opnorm(s) + 1e-9

    def test_exact_below_opnorm(self):
        rng = np.random.default_rng(5)
        for d in (3, 4, 5, 6):
            for _ in range(20):
                s = random_subset(rng, d)
                rho = random_density(d, seed=rng)
                assert k_exact(rho, s) <= k_opnorm(s) + 1e-9

    def test_bad_pairs_keyword(self):
        with pytest.raises(ValidationError):
            k_opnorm(PAULIS, pairs="both")

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionError):
            k_exact(random_density(3, seed=0), PAULIS)

    def test_norm_matrix_symmetric(self):
        n = anticommutator_norms(hw_set(6, [(1, 0), (0, 1), (1, 1), (2, 3)]))
        assert np.allclose(n, n.T) and np.all(np.diag(n) == 0)


class TestTheoremBound:
    def test_qubit_worst_case(self):
        assert theorem_bound(PAULIS) == pytest.approx(0.25)
        assert expectation_bound(PAULIS) == pytest.approx(1.0)

    def test_empty_refused(self):
        with pytest.raises(ValidationError):
            theorem_bound(ObservableSet(()))

    def test_hw_simplification(self):
        s = hw_set(9, [(0, 1), (4, 0), (4, 1)])
        assert expectation_bound(s) == pytest.approx(q_max_squared(9) + k_opnorm(s), abs=1e-12)

    @pytest.mark.parametrize("d", [2, 3, 4, 5])
    def test_monte_carlo(self, d):
        rng = np.random.default_rng(1000 + d)
        for _ in range(60):
            rho = random_density(d, rank=int(rng.integers(1, d + 1)), seed=rng)
            for _ in range(8):
                s = random_subset(rng, d)
                c = np.array([rho.expectation(m) for m in s.members]) / d
                assert np.sum(c**2) <= theorem_bound(s) + 1e-9
                assert np.sum(c**2) <= theorem_bound(s, rho) + 1e-9

    def test_pure_eigenstates_d4(self):
        # eigenstates of the observables saturate single-member bounds
        s = hw_set(4, [(1, 1)])
        w, v = np.linalg.eigh(Q(4, 1, 1))
        rho = np.outer(v[:, -1], v[:, -1].conj())
        assert (w[-1] / 4) ** 2 == pytest.approx(theorem_bound(s, rho))


class TestSeparableBound:
    def test_d4_triples(self):
        assert build_separable_bound(D4_TRIPLE, D4_TRIPLE) == pytest.approx(1.0)

    def test_qubit(self):
        assert build_separable_bound(PAULIS, PAULIS) == pytest.approx(1.0)

    def test_size_mismatch(self):
        with pytest.raises(ValidationError):
            build_separable_bound(PAULIS, hw_set(2, [(0, 1)]))

    def test_reduces_to_qmax_plus_k(self):
        s = hw_set(9, [(0, 1), (4, 0), (4, 1)])
        assert build_separable_bound(s, s) == pytest.approx(q_max_squared(9) + k_opnorm(s))

    @pytest.mark.parametrize("d", [3, 4, 6])
    def test_product_and_mixture_soundness(self, d):
        rng = np.random.default_rng(77 + d)
        for _ in range(40):
            a = random_subset(rng, d)
            pts = [PhasePoint(d, *map(int, lab[2:-1].split(","))) for lab in a.labels]
            terms = conjugate_pair_terms(pts)
            b = hw_set(d, [t[1] for t in terms])
            spec = WitnessSpec((d, d), terms, build_separable_bound(a, b))
            for rho in (random_product_state((d, d), seed=rng), random_separable_state((d, d), 10, seed=rng)):
                assert evaluate_witness(rho, spec).value <= spec.bound + 1e-9


class TestWitness:
    def ghz_spec(self):
        return WitnessSpec((4, 4, 4), [[(1, 0), None, (1, 0)], [(1, 2), (0, 2), (1, 2)], [(0, 2), (0, 2), (0, 2)]], 1.0)

    def test_ghz34(self):
        rep = evaluate_witness(ghz(3, 4), self.ghz_spec())
        assert rep.value == pytest.approx(3.0, abs=1e-12)
        assert rep.term_values == pytest.approx((1.0, -1.0, 1.0))
        assert rep.violated
        assert rep.noise_threshold == pytest.approx(1 / 3, abs=1e-9)

    def test_ghz34_gme(self):
        terms = symmetrized_terms(self.ghz_spec().terms)
        assert len(terms) == 7
        spec = WitnessSpec((4, 4, 4), terms, 3.0, bound_kind="biseparable")
        rep = evaluate_witness(ghz(3, 4), spec)
        assert rep.value == pytest.approx(7.0, abs=1e-12)
        assert all(abs(abs(v) - 1) < 1e-12 for v in rep.term_values)
        assert rep.tolerable_noise == pytest.approx(4 / 7, abs=1e-9)

    def test_linear_in_mixing(self):
        spec = self.ghz_spec()
        for p in (0.2, 1 / 3, 0.5):
            rep = evaluate_witness(isotropic_mix(ghz(3, 4), p), spec)
            assert rep.value == pytest.approx(3 * p, abs=1e-12)
        assert not evaluate_witness(isotropic_mix(ghz(3, 4), 1 / 3), spec).violated

    def test_zero_value_threshold_infinite(self):
        rep = evaluate_witness(np.eye(64) / 64, self.ghz_spec())
        assert rep.value < 1e-12 and math.isinf(rep.noise_threshold)

    def test_violation_slack(self):
        spec = WitnessSpec((4, 4, 4), self.ghz_spec().terms, 3.0 - 5e-10)
        assert not evaluate_witness(ghz(3, 4), spec).violated

    def test_term_dimension_checked(self):
        with pytest.raises(DimensionError):
            WitnessSpec((4, 4), [[(1, 0)]], 1.0)

    def test_nonpositive_bound(self):
        with pytest.raises(ValidationError):
            WitnessSpec((2, 2), [[(0, 1), (0, 1)]], 0.0)

    def test_state_parties_checked(self):
        with pytest.raises(DimensionError):
            evaluate_witness(max_entangled(3), self.ghz_spec())

    def test_convexity(self):
        rng = np.random.default_rng(3)
        spec = self.ghz_spec()
        for _ in range(30):
            r1 = DensityMatrix(random_density(64, seed=rng).matrix, (4, 4, 4))
            r2 = ghz(3, 4)
            p = rng.uniform()
            mix = DensityMatrix(p * r1.matrix + (1 - p) * r2.matrix, (4, 4, 4))
            lhs = evaluate_witness(mix, spec).value
            rhs = p * evaluate_witness(r1, spec).value + (1 - p) * evaluate_witness(r2, spec).value
            assert lhs <= rhs + 1e-9

    def test_cut_sets(self):
        a, b = self.ghz_spec().cut_sets([0])
        assert a.dim == 4 and b.dim == 16
        assert build_separable_bound(a, b) == pytest.approx(1.0)
