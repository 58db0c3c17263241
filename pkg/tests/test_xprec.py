import numpy as np
import pytest

from caralab import xprec


class TestSolve:
    def test_matches_numpy_on_well_conditioned(self, rng):
        for _ in range(10):
            n = int(rng.integers(1, 9))
            m = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
            b = rng.standard_normal(n) + 1j * rng.standard_normal(n)
            x = xprec.solve(m, b).astype(complex)
            assert np.linalg.norm(x - np.linalg.solve(m, b)) <= 1e-10

    def test_matrix_rhs(self, rng):
        m = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
        x = xprec.solve(m, np.eye(4)).astype(complex)
        assert np.linalg.norm(m @ x - np.eye(4)) <= 1e-12

    def test_residual_beats_double(self, rng):
        # the point of the module: backward error at the extended epsilon
        n = 6
        m = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
        b = rng.standard_normal(n) + 1j * rng.standard_normal(n)
        x = xprec.solve(m, b)
        residual = np.abs(xprec.asxp(m) @ x - xprec.asxp(b)).max()
        assert float(residual) <= 1e-17

    def test_singular_raises(self):
        with pytest.raises(np.linalg.LinAlgError):
            xprec.solve(np.zeros((2, 2)), np.ones(2))

    def test_shape_checked(self):
        with pytest.raises(ValueError):
            xprec.solve(np.ones((2, 3)), np.ones(2))


class TestNearestUnitary:
    def test_snaps_perturbed_unitary(self, rng):
        q, _ = np.linalg.qr(rng.standard_normal((5, 5)) + 1j * rng.standard_normal((5, 5)))
        perturbed = q + 1e-9 * rng.standard_normal((5, 5))
        snapped = xprec.nearest_unitary(perturbed)
        assert xprec.unitary_defect(snapped) <= 1e-17
        # stays close to the input
        assert float(np.abs(snapped - xprec.asxp(perturbed)).max()) <= 1e-8

    def test_unitary_fixed_point(self):
        swap = np.array([[0.0, 1.0], [1.0, 0.0]])
        assert float(np.abs(xprec.nearest_unitary(swap) - xprec.asxp(swap)).max()) <= 1e-18

    def test_defect_measured_in_extended_precision(self, rng):
        q, _ = np.linalg.qr(rng.standard_normal((6, 6)) + 1j * rng.standard_normal((6, 6)))
        # a double-precision unitary carries an O(1e-16) defect; the snap removes it
        assert xprec.unitary_defect(q) > 1e-18
        assert xprec.unitary_defect(xprec.nearest_unitary(q)) <= 1e-17
