import numpy as np
import pytest

from floquet_ising import states
from floquet_ising.errors import NumericalError
from floquet_ising.model import CHAIN, FloquetOperator, ModelSpec
from floquet_ising.quasienergy import (
    QuasienergyAnalysis,
    circle_distance,
    default_pair_tolerance,
    detect_pi_pairs,
    floquet_eigensystem,
    overlap_weight,
)


class TestEigensystem:
    def test_identity_point_is_fully_degenerate(self):
        spec = ModelSpec(n_qubits=3, h_x=0.0, couplings=0.0, boundary="ring")
        analysis = floquet_eigensystem(spec)
        assert np.abs(analysis.epsilons).max() < 1e-12
        # re-orthonormalized eigenvectors still span the computational basis
        overlap = analysis.eigenvectors.conj().T @ analysis.eigenvectors
        assert np.abs(overlap - np.eye(8)).max() < 1e-12

    def test_single_qubit_closed_form(self):
        # h_x T1 = pi/2: eigenphases of exp(-i pi/2 sigma_x) are -+pi/2
        spec = ModelSpec.dimensionless(1, np.pi, 0.0, boundary=CHAIN)
        analysis = floquet_eigensystem(spec)
        assert np.allclose(np.sort(analysis.epsilons), [-np.pi / 2, np.pi / 2], atol=1e-12)

    def test_residuals_at_pd_point(self, pd_spec):
        op = FloquetOperator(pd_spec)
        analysis = floquet_eigensystem(op)
        u = op.dense()
        phases = np.exp(-1j * analysis.epsilons * analysis.period)
        residual = u @ analysis.eigenvectors - analysis.eigenvectors * phases[np.newaxis, :]
        assert np.linalg.norm(residual, axis=0).max() < 1e-9

    def test_folding_into_principal_zone(self, rng):
        for _ in range(15):
            h, j = rng.uniform(0, np.pi, size=2)
            analysis = floquet_eigensystem(ModelSpec.dimensionless(3, h, j))
            assert np.all(analysis.epsilons > -np.pi - 1e-15)
            assert np.all(analysis.epsilons <= np.pi + 1e-15)

    def test_eigenvectors_orthonormal_on_grid(self):
        # degenerate clusters appear at symmetric points; the basis must
        # stay orthonormal everywhere
        for h in np.linspace(0, np.pi, 7):
            for j in np.linspace(0, np.pi, 7):
                analysis = floquet_eigensystem(ModelSpec.dimensionless(3, h, j))
                gram = analysis.eigenvectors.conj().T @ analysis.eigenvectors
                assert np.abs(gram - np.eye(8)).max() < 1e-8


class TestCircleDistance:
    def test_plain_gap(self):
        assert circle_distance(0.3, -0.2) == pytest.approx(0.5)

    def test_wraps_around_zone(self):
        # eps near +pi and -pi are neighbours on the circle
        assert circle_distance(3.1, -3.1) == pytest.approx(2 * np.pi - 6.2)

    def test_symmetry(self, rng):
        for _ in range(20):
            a, b = rng.uniform(-np.pi, np.pi, size=2)
            assert circle_distance(a, b) == pytest.approx(circle_distance(b, a), abs=1e-12)


class TestPiPairs:
    def test_no_pairs_at_identity(self):
        spec = ModelSpec(n_qubits=3, h_x=0.0, couplings=0.0, boundary="ring")
        analysis = detect_pi_pairs(floquet_eigensystem(spec))
        assert analysis.pairs == []
        assert analysis.pair_fraction == 0.0

    def test_exact_pairing_at_pi_pi(self):
        # U_F at (pi, pi) is -X X X up to rounding: four states at eps = 0,
        # four at eps = pi/T, every state pi-paired
        analysis = detect_pi_pairs(floquet_eigensystem(ModelSpec.dimensionless(3, np.pi, np.pi)))
        assert analysis.pair_fraction == 1.0
        assert np.abs(analysis.gaps - np.pi).max() < 1e-10
        # independent spectrum check: eigenvalues of -XXX are +-1
        sx = np.array([[0, 1], [1, 0]])
        xxx = -np.kron(np.kron(sx, sx), sx)
        expected = np.sort(np.linalg.eigvalsh(xxx))
        u_eigs = np.sort(np.cos(analysis.epsilons))
        assert np.allclose(u_eigs, expected, atol=1e-10)

    def test_pd_point_regression(self, pd_spec):
        # frozen from this implementation: one dominant near-pi pair
        analysis = detect_pi_pairs(floquet_eigensystem(pd_spec))
        assert analysis.pair_fraction == pytest.approx(0.25)
        assert len(analysis.pairs) == 1
        assert abs(analysis.gaps[0] - np.pi) < default_pair_tolerance()

    def test_matching_is_exclusive(self, rng):
        for _ in range(10):
            h, j = rng.uniform(0, np.pi, size=2)
            analysis = detect_pi_pairs(
                floquet_eigensystem(ModelSpec.dimensionless(3, h, j)), tolerance=0.5
            )
            indices = [k for pair in analysis.pairs for k in pair]
            assert len(indices) == len(set(indices))

    def test_tolerance_validation(self, pd_spec):
        analysis = floquet_eigensystem(pd_spec)
        with pytest.raises(ValueError, match="positive"):
            detect_pi_pairs(analysis, tolerance=0.0)


class TestOverlapWeight:
    def test_zero_without_pairs(self):
        spec = ModelSpec(n_qubits=3, h_x=0.0, couplings=0.0, boundary="ring")
        analysis = detect_pi_pairs(floquet_eigensystem(spec))
        assert overlap_weight(analysis, states.all_zero_state(3)) == 0.0

    def test_one_when_everything_is_paired(self):
        analysis = detect_pi_pairs(floquet_eigensystem(ModelSpec.dimensionless(3, np.pi, np.pi)))
        w = overlap_weight(analysis, states.all_zero_state(3))
        assert w == pytest.approx(1.0, abs=1e-10)

    def test_complement_identity(self, pd_spec):
        analysis = detect_pi_pairs(floquet_eigensystem(pd_spec))
        psi0 = states.all_zero_state(3)
        w = overlap_weight(analysis, psi0)
        amplitudes = analysis.eigenvectors.conj().T @ psi0
        weights = np.abs(amplitudes) ** 2
        unpaired = [k for k in range(8) if k not in {i for p in analysis.pairs for i in p}]
        assert w == pytest.approx(1.0 - weights[unpaired].sum(), abs=1e-10)

    def test_pd_point_regression(self, pd_spec):
        # frozen: |000> sits almost entirely on the single near-pi pair
        analysis = detect_pi_pairs(floquet_eigensystem(pd_spec))
        w = overlap_weight(analysis, states.all_zero_state(3))
        assert w == pytest.approx(0.9443, abs=2e-3)

    def test_rejects_bad_eigenbasis(self, pd_spec):
        analysis = detect_pi_pairs(floquet_eigensystem(pd_spec))
        broken = QuasienergyAnalysis(
            epsilons=analysis.epsilons,
            eigenvectors=analysis.eigenvectors * 0.5,
            period=analysis.period,
            pairs=analysis.pairs,
            gaps=analysis.gaps,
        )
        with pytest.raises(NumericalError, match="overlap weights"):
            overlap_weight(broken, states.all_zero_state(3))

    def test_dimension_mismatch(self, pd_spec):
        analysis = detect_pi_pairs(floquet_eigensystem(pd_spec))
        with pytest.raises(ValueError, match="dimension mismatch"):
            overlap_weight(analysis, states.all_zero_state(2))
