import numpy as np
import pytest

import spectralball as sb
from conftest import brute_force_bottleneck, random_ball_matrix, random_gaussian


class TestMobius:
    def test_examples(self):
        assert sb.mobius(0.0, 0.5) == pytest.approx(0.5)
        assert sb.mobius(0.3 + 0.2j, 0.3 + 0.2j) == 0.0
        assert sb.mobius(0.3, -0.3) == pytest.approx(0.6 / 1.09)

    def test_symmetry(self):
        rng = np.random.default_rng(31)
        for _ in range(20):
            z, w = 0.95 * np.sqrt(rng.uniform(size=2)) * np.exp(
                2j * np.pi * rng.uniform(size=2)
            )
            assert sb.mobius(z, w) == pytest.approx(sb.mobius(w, z), abs=1e-14)
            assert 0.0 <= sb.mobius(z, w) < 1.0

    def test_domain(self):
        with pytest.raises(sb.DomainError):
            sb.mobius(1.0, 0.0)
        with pytest.raises(sb.DomainError):
            sb.mobius(0.0, 1.2j)


class TestScalarBaseFormulas:
    def test_lempert_at_zero(self):
        assert sb.lempert_scalar_base(0.0, np.diag([0.5, 0.2])) == pytest.approx(0.5)

    def test_lempert_equal_eigenvalues(self):
        b = np.array([[0.5, 3.0], [0.0, 0.5]])
        assert sb.lempert_scalar_base(0.5, b) == pytest.approx(0.0, abs=1e-12)

    def test_lempert_single_mobius(self):
        b = np.array([[-0.3]])
        assert sb.lempert_scalar_base(0.3, b) == pytest.approx(sb.mobius(0.3, -0.3))

    def test_lempert_domain(self):
        with pytest.raises(sb.DomainError):
            sb.lempert_scalar_base(0.0, np.diag([1.5, 0.0]))
        with pytest.raises(sb.DomainError):
            sb.lempert_scalar_base(1.0, np.diag([0.5, 0.0]))

    def test_kobayashi(self):
        b = np.diag([0.8, 0.0])
        assert sb.kobayashi_scalar_base(0.0, b) == pytest.approx(0.8)
        assert sb.kobayashi_scalar_base(0.5, b) == pytest.approx(0.8 / 0.75)
        assert sb.kobayashi_scalar_base(0.3, np.zeros((2, 2))) == 0.0

    def test_kobayashi_direction_unrestricted(self):
        # direction vectors need not lie in the ball
        assert sb.kobayashi_scalar_base(0.0, np.diag([3.0, 0.0])) == pytest.approx(3.0)

    def test_kobayashi_domain(self):
        with pytest.raises(sb.DomainError):
            sb.kobayashi_scalar_base(1.1, np.eye(2))


class TestBottleneck:
    def test_swap_example(self):
        value, perm = sb.bottleneck_minimax([0.1, 0.8], [0.75, 0.15])
        assert value == pytest.approx(0.125)
        assert list(perm) == [1, 0]

    def test_identical(self):
        value, perm = sb.bottleneck_minimax([0.3, 0.1j], [0.3, 0.1j])
        assert value == 0.0
        assert list(perm) == [0, 1]

    def test_single(self):
        value, _ = sb.bottleneck_minimax([0.0], [0.5])
        assert value == pytest.approx(0.5)

    def test_length_mismatch(self):
        with pytest.raises(sb.InvalidInputError):
            sb.bottleneck_minimax([0.1], [0.1, 0.2])

    def test_brute_force_tie(self):
        rng = np.random.default_rng(32)
        for n in range(1, 8):
            for _ in range(10):
                a = 0.9 * np.sqrt(rng.uniform(size=n)) * np.exp(
                    2j * np.pi * rng.uniform(size=n)
                )
                b = 0.9 * np.sqrt(rng.uniform(size=n)) * np.exp(
                    2j * np.pi * rng.uniform(size=n)
                )
                cost = np.array([[sb.mobius(x, y) for y in b] for x in a])
                value, perm = sb.bottleneck_assignment(cost)
                brute_value, _ = brute_force_bottleneck(cost)
                assert abs(value - brute_value) <= 1e-12
                assert cost[np.arange(n), perm].max() == pytest.approx(value, abs=0)

    def test_equal_eigenvalue_case_matches_scalar_formula(self):
        lam = 0.4 - 0.2j
        b = np.full((3, 3), 0.0, dtype=complex)
        np.fill_diagonal(b, lam)
        b[0, 1] = 2.0
        t = 0.25
        value, _ = sb.bottleneck_minimax(
            sb.spectrum(t * np.eye(3)), sb.spectrum(b)
        )
        expected = sb.mobius(t, lam)
        assert value == pytest.approx(expected, abs=1e-12)
        assert sb.lempert_scalar_base(t, b) == pytest.approx(expected, abs=1e-12)


class TestUpperBoundDisc:
    def test_constant_curve(self):
        rng = np.random.default_rng(33)
        a = random_ball_matrix(rng, 3, radius=0.6)
        w = sb.upper_bound_disc(a, a, 0.5)
        for zeta in (0.0, 0.3, 0.2 + 0.4j, -0.9):
            assert np.linalg.norm(w.curve(zeta) - a) <= 1e-10

    def test_scalar_base_example(self):
        a = np.zeros((2, 2))
        b = np.diag([0.5, 0.2])
        w = sb.upper_bound_disc(a, b, 0.51)
        r0, r1 = w.endpoint_residuals()
        assert r0 <= 1e-9 and r1 <= 1e-9
        assert w.certificate_grid.max_spectral_radius < 1.0
        exact = sb.lempert_scalar_base(0.0, b)
        assert 0.51 - exact <= 0.011

    def test_two_diagonal_example(self):
        a = np.diag([0.1, 0.8])
        b = np.diag([0.15, 0.75])
        w = sb.upper_bound_disc(a, b, 0.13)
        r0, r1 = w.endpoint_residuals()
        assert max(r0, r1) <= 1e-9
        assert w.certificate_grid.max_spectral_radius < 1.0

    def test_infeasible_radius(self):
        a = np.diag([0.1, 0.8])
        b = np.diag([0.15, 0.75])
        with pytest.raises(sb.PreconditionError):
            sb.upper_bound_disc(a, b, 0.12)

    def test_domain(self):
        with pytest.raises(sb.DomainError):
            sb.upper_bound_disc(np.diag([1.5, 0.0]), np.zeros((2, 2)), 0.5)

    def test_random_certificates(self):
        rng = np.random.default_rng(34)
        for n in (2, 3, 4):
            for _ in range(4):
                a = random_ball_matrix(rng, n, radius=rng.uniform(0.3, 0.85))
                b = random_ball_matrix(rng, n, radius=rng.uniform(0.3, 0.85))
                bound, _ = sb.bottleneck_minimax(sb.spectrum(a), sb.spectrum(b))
                if bound + 0.01 >= 0.999:
                    continue
                w = sb.upper_bound_disc(a, b, bound + 0.01)
                r0, r1 = w.endpoint_residuals()
                assert max(r0, r1) <= 1e-8
                assert w.certificate_grid.max_spectral_radius < 1.0

    def test_curve_eigenvalues_match_closed_form(self):
        # the conjugation path cannot move eigenvalues: spot-check the full
        # curve against the triangular diagonal at well-conditioned points
        rng = np.random.default_rng(35)
        a = random_ball_matrix(rng, 3, radius=0.5)
        b = random_ball_matrix(rng, 3, radius=0.6)
        bound, _ = sb.bottleneck_minimax(sb.spectrum(a), sb.spectrum(b))
        s1 = bound + 0.05
        w = sb.upper_bound_disc(a, b, s1)
        for zeta in (0.0, s1 / 2, s1, s1 * np.exp(0.4j)):
            ev = np.linalg.eigvals(w.curve(zeta))
            dv = w.curve.diagonal_values(zeta)
            assert sb.multiset_distance(ev, dv) <= 1e-6


class TestHullMembership:
    def test_examples(self):
        h, inside = sb.hull_membership(np.diag([2.5, -2.5, 1.0]))
        assert h == pytest.approx(1.0 / 3.0)
        assert inside
        h, inside = sb.hull_membership(np.eye(3))
        assert h == 1.0 and not inside
        h, inside = sb.hull_membership(np.zeros((2, 2)))
        assert h == 0.0 and inside

    def test_positive_homogeneity(self):
        rng = np.random.default_rng(36)
        a = random_gaussian(rng, 3)
        h, _ = sb.hull_membership(a)
        for c in (0.0, 0.5, 2.0, 7.25):
            hc, _ = sb.hull_membership(c * a)
            assert abs(hc - c * h) <= 1e-12 * (1.0 + c * h)

    def test_convexity_sampling(self):
        rng = np.random.default_rng(37)
        for _ in range(25):
            n = int(rng.integers(2, 5))
            a1 = random_ball_matrix(rng, n, radius=0.8)
            a2 = random_ball_matrix(rng, n, radius=0.8)
            w = rng.uniform()
            _, inside = sb.hull_membership(w * a1 + (1 - w) * a2)
            assert inside


class TestHullWitness:
    def test_zero_diagonal_input(self):
        a = np.array([[0.0, 5.0], [0.0, 0.0]])
        w = sb.hull_witness(a)
        t1, t2 = w.terms
        np.testing.assert_allclose(t1, 2 * a, atol=1e-12)
        np.testing.assert_allclose(t2, 0.0, atol=1e-12)

    def test_diagonal_example(self):
        a = np.diag([1.5, -1.0])
        w = sb.hull_witness(a)
        t1, t2 = w.terms
        assert np.linalg.norm(0.5 * t1 + 0.5 * t2 - a) <= 1e-9
        assert sb.spectrum(t1).radius < 1.0
        assert sb.spectrum(t2).radius < 1.0
        # both terms carry the one-point spectrum {tr(A)/2}
        np.testing.assert_allclose(sb.spectrum(t1).values, 0.25, atol=1e-9)

    def test_not_in_hull(self):
        with pytest.raises(sb.NotInHullError):
            sb.hull_witness(np.eye(2))

    def test_unsupported_dimension(self):
        with pytest.raises(sb.UnsupportedError):
            sb.hull_witness(np.zeros((5, 5)))

    @pytest.mark.parametrize("n", [1, 2, 3, 4])
    def test_random_members(self, n):
        rng = np.random.default_rng(38 + n)
        for _ in range(10):
            a = random_gaussian(rng, n)
            tr = np.trace(a)
            if abs(tr) >= 0.9 * n:
                a = a * (0.8 * n / abs(tr))
            w = sb.hull_witness(a)
            t1, t2 = w.terms
            assert np.linalg.norm(0.5 * t1 + 0.5 * t2 - a) <= 1e-9 * (
                1 + np.linalg.norm(a)
            )
            assert sb.spectrum(t1).radius < 1.0
            assert sb.spectrum(t2).radius < 1.0
            s = w.similarity
            assert np.linalg.norm(s.conj().T @ s - np.eye(n)) <= 1e-12
