import numpy as np
import pytest
from conftest import basis_ket, max_entry

from posmaps import criterion, linalg, maps
from posmaps.criterion import Antisymmetric, Generic, PianiSum, Verdict


def re4():
    return maps.extended_reduction_map(4, maps.antisymmetric_unitary(4))


def re6():
    return maps.extended_reduction_map(6, maps.antisymmetric_unitary(6))


def p22():
    return maps.piani_map(2, 2, [1, 1, 1, 1], [1, 1, 1, -1])


def p23():
    return maps.piani_map(2, 3, np.ones(4), [1] * 8 + [-1])


class TestBuildSubspace:
    def test_extended_reduction_dimensions(self):
        sub = criterion.build_subspace(re4())
        assert sub.family == Antisymmetric(4)
        assert sub.vector_basis.shape == (6, 16)
        assert sub.complement_basis.shape == (10, 16)
        assert max_entry(sub.vector_basis.conj() @ sub.complement_basis.T) <= 1e-10

    def test_antisymmetric_span_content(self):
        # the span is exactly span{|kl> - |lk>}
        sub = criterion.build_subspace(re4())
        pmat = sub.vector_basis.T @ sub.vector_basis.conj()
        for k, l in maps.upper_pairs(4):
            phi = basis_ket(16, 4 * k + l) - basis_ket(16, 4 * l + k)
            assert max_entry(pmat @ phi - phi) <= 1e-10

    def test_piani_dimensions(self):
        sub = criterion.build_subspace(p22())
        assert sub.family == PianiSum(2, 2)
        assert sub.vector_basis.shape == (7, 16)
        assert sub.complement_basis.shape == (9, 16)
        sub23 = criterion.build_subspace(p23())
        assert sub23.family == PianiSum(2, 3)
        assert sub23.vector_basis.shape[0] == 2 * 2 + 3 * 3 - 1

    def test_choi_is_generic(self):
        sub = criterion.build_subspace(maps.choi_map())
        assert sub.family == Generic()

    def test_reduction_is_antisymmetric_family(self):
        assert criterion.build_subspace(maps.reduction_map(4)).family == Antisymmetric(4)


class TestCandidates:
    @pytest.mark.parametrize("make", [re4, re6, p22, p23])
    def test_candidates_lie_in_complement(self, make):
        sub = criterion.build_subspace(make())
        for ket in criterion.candidate_kets(sub.family):
            overlap = max_entry(sub.vector_basis.conj() @ ket)
            assert overlap <= 1e-10

    def test_candidate_counts(self):
        assert len(criterion.candidate_kets(Antisymmetric(4))) == 4 + 6
        assert len(criterion.candidate_kets(PianiSum(2, 2))) == 4 + 2 + 2 + 1
        assert len(criterion.candidate_kets(PianiSum(2, 3))) == 12 + 6 + 2 + 1

    def test_generic_has_no_candidates(self):
        with pytest.raises(ValueError):
            criterion.candidate_kets(Generic())


class TestFinder:
    def test_diagonal_product_state(self):
        sub = criterion.build_subspace(re4())
        q = np.zeros((16, 16), dtype=complex)
        q[0, 0] = 1.0  # |00><00|
        ket, value = criterion.find_positive_expectation(sub, q)
        assert abs(value - 1.0) <= 1e-12
        assert np.nonzero(ket)[0].tolist() == [0]

    def test_symmetric_bell_projector(self):
        sub = criterion.build_subspace(re4())
        phi = basis_ket(16, 1) + basis_ket(16, 4)  # |01> + |10>
        ket, value = criterion.find_positive_expectation(sub, np.outer(phi, phi.conj()))
        assert abs(value - 2.0) <= 1e-12
        assert np.nonzero(ket)[0].tolist() == [1, 4]
        # the diagonal |kk> candidates all give zero for this Q
        qtb = linalg.partial_transpose(np.outer(phi, phi.conj()), linalg.BipartiteShape(4, 4))
        for k in range(4):
            e = basis_ket(16, 4 * k + k)
            assert abs(np.vdot(e, qtb @ e)) <= 1e-14

    def test_zero_operator_not_found(self):
        sub = criterion.build_subspace(re4())
        assert criterion.find_positive_expectation(sub, np.zeros((16, 16))) is None

    def test_generic_family_rejected(self):
        sub = criterion.build_subspace(maps.choi_map())
        with pytest.raises(ValueError):
            criterion.find_positive_expectation(sub, np.eye(9, dtype=complex))

    def test_non_psd_rejected(self):
        sub = criterion.build_subspace(re4())
        with pytest.raises(ValueError, match="PSD"):
            criterion.find_positive_expectation(sub, -np.eye(16))

    @pytest.mark.parametrize("make", [re4, p22, p23])
    def test_never_fails_on_normalized_q(self, make):
        sub = criterion.build_subspace(make())
        big = sub.vector_basis.shape[1]
        rng = linalg.rng_from_seed(5)
        for _ in range(100):
            q = linalg.random_psd(big, rng, trace_one=True)
            found = criterion.find_positive_expectation(sub, q, check_psd=False)
            assert found is not None
            ket, value = found
            assert value > 0.0
            assert max_entry(sub.vector_basis.conj() @ ket) <= 1e-10

    def test_quantitative_soundness_small_run(self):
        # trace-normalized Q: best expectation >= Tr(Q) / (3 d^2)
        sub = criterion.build_subspace(re4())
        rng = linalg.rng_from_seed(9)
        bound = 1.0 / (3 * 16)
        for _ in range(200):
            q = linalg.random_psd(16, rng, trace_one=True)
            _, value = criterion.find_positive_expectation(sub, q, check_psd=False)
            assert value >= bound - 1e-9


class TestCertify:
    def test_extended_reduction_certified(self):
        cert = criterion.certify(re4(), trials=100, seed=1)
        assert cert.verdict == Verdict.CERTIFIED_INDECOMPOSABLE
        assert abs(cert.min_l_eigenvalue + 1.0) <= 1e-10
        assert cert.support_check
        assert cert.sampled_q_failures == 0

    def test_piani_certified(self):
        cert = criterion.certify(p22(), trials=100, seed=2)
        assert cert.verdict == Verdict.CERTIFIED_INDECOMPOSABLE

    def test_choi_inapplicable(self):
        cert = criterion.certify(maps.choi_map(), trials=10, seed=3)
        assert cert.verdict == Verdict.INAPPLICABLE
        assert cert.family == Generic()
        assert cert.sampled_q_trials == 0
        # the coefficient matrix alone is not the obstruction
        assert cert.min_l_eigenvalue < 0

    def test_reduction_not_satisfied(self):
        cert = criterion.certify(maps.reduction_map(4), trials=50, seed=4)
        assert cert.verdict == Verdict.CRITERION_NOT_SATISFIED
        assert cert.min_l_eigenvalue >= -1e-12

    def test_piani_all_positive_not_satisfied(self):
        m = maps.piani_map(2, 2, [1, 1, 1, 1], [1, 1, 1, 0.5])
        cert = criterion.certify(m, trials=50, seed=5)
        assert cert.verdict == Verdict.CRITERION_NOT_SATISFIED

    @pytest.mark.parametrize("d", [4, 6])
    def test_coefficient_spectrum_claim(self, d):
        m = maps.extended_reduction_map(d, maps.antisymmetric_unitary(d))
        w, _ = linalg.hermitian_eig(m.coeff)
        n = d * (d - 1) // 2
        assert np.allclose(w, [1.0] * (n - 1) + [1.0 - d / 2], atol=1e-10)

    def test_deterministic_given_seed(self):
        a = criterion.certify(re4(), trials=30, seed=7)
        b = criterion.certify(re4(), trials=30, seed=7)
        assert a == b
