import json

import numpy as np
import pytest

from caralab import (
    Colligation,
    GeneralizedRealization,
    NotIsometricError,
    OperatorPencil,
    colligation_with_ray_limit,
    dump_model,
    i_y_eval,
    load_model,
    phi_y_eval,
    random_colligation,
    random_positive_contraction,
    validate_colligation,
    validate_positive_contraction,
)
from conftest import TAU_11, TAUS, disk_point, scalar_model

HOUSEHOLDER_1D = [[-0.6, 0.8], [0.8, 0.6]]  # reflection with B=4/5, D=3/5


class TestColligation:
    def test_swap_and_identity_accepted(self):
        assert validate_colligation([[0, 1], [1, 0]]).dim == 1
        assert validate_colligation(np.eye(4)).dim == 3

    def test_shear_rejected(self):
        with pytest.raises(NotIsometricError) as err:
            validate_colligation([[1, 1], [0, 1]])
        assert err.value.defect > 0.5

    def test_blocks(self):
        col = validate_colligation([[0.6, 0.8], [0.8, -0.6]])
        assert col.a == pytest.approx(0.6)
        assert col.b == pytest.approx(0.8)
        assert col.c == pytest.approx(0.8)
        assert col.d == pytest.approx(-0.6)

    def test_random_colligations_are_isometric(self, rng):
        for _ in range(10):
            col = random_colligation(int(rng.integers(1, 9)), rng)
            assert col.isometry_defect() <= 1e-13

    def test_dimension_mismatch_rejected(self):
        pen = OperatorPencil(validate_positive_contraction([[0.5]]), TAU_11)
        with pytest.raises(ValueError):
            GeneralizedRealization(pen, validate_colligation(np.eye(3)))


class TestSwapColligation:
    def test_reproduces_scalar_family(self, rng):
        m = scalar_model(0.5)
        for _ in range(40):
            lam = disk_point(rng)
            assert abs(m.phi(lam) - phi_y_eval(0.5, TAU_11, lam)) <= 1e-13
            assert abs(complex(m.model_vector(lam)[0]) - 1.0) <= 1e-13

    def test_residual_tiny(self, rng):
        m = scalar_model(0.5)
        worst = max(
            m.model_residual(disk_point(rng), disk_point(rng)) for _ in range(200)
        )
        assert worst <= 1e-10

    def test_v_at_tau(self):
        ray = scalar_model(0.5).v_at_tau()
        assert ray.converged and not ray.diverged
        assert complex(ray.value[0]) == pytest.approx(1.0, abs=1e-12)


class TestConstantColligation:
    def test_identity_block_gives_constant_one(self, rng):
        m = scalar_model(0.5, block=np.eye(2))
        for _ in range(20):
            assert m.phi(disk_point(rng)) == pytest.approx(1.0, abs=1e-12)
        ray = m.v_at_tau()
        assert ray.converged
        assert np.linalg.norm(ray.value) <= 1e-12


class TestTransferFormula:
    def test_hand_values(self):
        m = scalar_model(0.5, block=[[0.6, 0.8], [0.8, -0.6]])
        assert m.phi((0, 0)) == pytest.approx(-0.6, abs=1e-14)
        assert complex(m.model_vector((0, 0))[0]) == pytest.approx(0.8, abs=1e-14)
        assert m.phi_at_tau() == pytest.approx(1.0, abs=1e-10)

    def test_ray_limit_of_vector(self):
        m = scalar_model(0.5, block=[[0.6, 0.8], [0.8, -0.6]])
        # v((1-t) tau) = (4/5) / (1 - (3/5)(1-t)) -> 2
        v_half = complex(m.model_vector(TAU_11.ray_point(0.5))[0])
        assert v_half == pytest.approx(0.8 / (1 - 0.3), abs=1e-13)
        ray = m.v_at_tau()
        assert ray.converged
        assert complex(ray.value[0]) == pytest.approx(2.0, abs=1e-10)

    def test_diagonal_identity(self, rng):
        # 1 - |phi|^2 = ||v||^2 - ||I v||^2 pointwise
        y = random_positive_contraction(4, rng)
        m = GeneralizedRealization(OperatorPencil(y, TAUS[1]), random_colligation(4, rng))
        for _ in range(30):
            lam = disk_point(rng)
            v = m.model_vector(lam)
            iy = i_y_eval(m.pencil, lam)
            lhs = 1.0 - abs(m.phi(lam)) ** 2
            rhs = float(np.linalg.norm(v) ** 2 - np.linalg.norm(iy @ v) ** 2)
            assert abs(lhs - rhs) <= 1e-11


class TestModelIdentity:
    @pytest.mark.parametrize("tau", TAUS)
    def test_random_models(self, tau, rng):
        for _ in range(6):
            dim = int(rng.integers(1, 9))
            y = random_positive_contraction(dim, rng)
            m = GeneralizedRealization(OperatorPencil(y, tau), random_colligation(dim, rng))
            worst = max(
                m.model_residual(disk_point(rng), disk_point(rng)) for _ in range(60)
            )
            assert worst <= 1e-9

    def test_negative_control_shear(self, rng):
        pen = OperatorPencil(validate_positive_contraction([[0.5]]), TAU_11)
        m = GeneralizedRealization(pen, Colligation(np.array([[1.0, 1.0], [0.0, 1.0]])))
        assert not m.is_isometric
        worst = max(
            m.model_residual(disk_point(rng), disk_point(rng)) for _ in range(50)
        )
        assert worst > 1e-3


class TestRayLimit:
    def test_matches_direct_resolvent_when_invertible(self, rng):
        for _ in range(8):
            dim = int(rng.integers(1, 7))
            y = random_positive_contraction(dim, rng)
            col = random_colligation(dim, rng)
            m = GeneralizedRealization(OperatorPencil(y, TAU_11), col)
            ray = m.v_at_tau()
            assert ray.converged
            direct = np.linalg.solve(np.eye(dim) - col.a, col.b)
            assert np.linalg.norm(ray.value - direct) <= 1e-8

    def test_householder_with_singular_corner(self):
        # the reflection's corner block has 1 in its spectrum for dim >= 2,
        # yet the ray limit exists and equals (1 - D) B / ||B||^2
        direction = np.array([1.0, 1.0j]) / np.sqrt(2.0)
        col = colligation_with_ray_limit(direction, strength=0.8)
        assert col.isometry_defect() <= 1e-12
        y = random_positive_contraction(2, np.random.default_rng(5))
        m = GeneralizedRealization(OperatorPencil(y, TAU_11), col)
        ray = m.v_at_tau()
        assert ray.converged and not ray.diverged
        d = 0.6
        expect = (1.0 - d) * (0.8 * direction) / 0.8**2
        assert np.linalg.norm(ray.value - expect) <= 1e-9

    def test_divergence_flagged_for_defective_block(self):
        # non-isometric: corner block 1 with B = 1 makes v(t) = 1/t blow up
        pen = OperatorPencil(validate_positive_contraction([[0.5]]), TAU_11)
        m = GeneralizedRealization(pen, Colligation(np.array([[1.0, 1.0], [0.0, 1.0]])))
        ray = m.v_at_tau()
        assert ray.diverged and not ray.converged

    def test_ray_state_consistent_with_general_path(self, rng):
        y = random_positive_contraction(5, rng)
        m = GeneralizedRealization(OperatorPencil(y, TAUS[1]), random_colligation(5, rng))
        for k in (4, 10, 16):
            t = 2.0**-k
            v_ray, phi_ray = m.ray_state(t)
            lam = TAUS[1].ray_point(t)
            assert abs(complex(phi_ray) - m.phi(lam)) <= 1e-10
            assert np.linalg.norm(v_ray.astype(complex) - m.model_vector(lam)) <= 1e-9


class TestPrescribedRayLimit:
    def test_swap_recovered_at_full_strength(self):
        col = colligation_with_ray_limit(np.array([1.0]), strength=1.0)
        assert np.allclose(col.block, [[0, 1], [1, 0]], atol=1e-15)

    def test_direction_prescribed(self, rng):
        for _ in range(5):
            dim = int(rng.integers(2, 7))
            direction = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
            col = colligation_with_ray_limit(direction, strength=0.7)
            y = random_positive_contraction(dim, rng)
            m = GeneralizedRealization(OperatorPencil(y, TAU_11), col)
            v = m.v_at_tau().value
            target = direction / np.linalg.norm(direction)
            overlap = abs(np.vdot(target, v)) / np.linalg.norm(v)
            assert overlap == pytest.approx(1.0, abs=1e-9)


class TestJsonInterchange:
    def test_round_trip_preserves_values(self, rng, tmp_path):
        y = random_positive_contraction(3, rng)
        m = GeneralizedRealization(OperatorPencil(y, TAUS[2]), random_colligation(3, rng))
        path = tmp_path / "model.json"
        path.write_text(json.dumps(dump_model(m)))
        other = load_model(path)
        for _ in range(20):
            lam = disk_point(rng)
            assert abs(m.phi(lam) - other.phi(lam)) <= 1e-14

    def test_dimension_checked(self, rng):
        y = random_positive_contraction(2, rng)
        m = GeneralizedRealization(OperatorPencil(y, TAU_11), random_colligation(2, rng))
        doc = dump_model(m)
        doc["dim"] = 3
        with pytest.raises(ValueError):
            load_model(doc)
