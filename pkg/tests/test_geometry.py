import itertools

import numpy as np
import pytest

from realenum.geometry import (
    Chart,
    ProjSubspace,
    chart_plucker,
    chart_subspace,
    column_subsets,
    exterior_power,
    four_planes,
    grassmann_plucker_residual,
    line_meets_condition,
    matrix_rank,
    meets_condition,
    plucker,
)


def rand_complex(rng, *shape):
    return rng.normal(size=shape) + 1j * rng.normal(size=shape)


class TestPlucker:
    def test_coordinate_line(self):
        S = ProjSubspace(np.array([[1, 0, 0, 0], [0, 1, 0, 0]]))
        assert list(plucker(S).coords) == [1, 0, 0, 0, 0, 0]

    def test_row_scaling_proportional(self):
        rng = np.random.default_rng(1)
        A = rng.normal(size=(3, 6))
        p1 = plucker(ProjSubspace(A)).coords
        p2 = plucker(ProjSubspace(np.diag([2.0, -1.0, 0.5]) @ A)).coords
        np.testing.assert_allclose(p2, -1.0 * p1, rtol=1e-12)

    def test_plucker_relation(self):
        rng = np.random.default_rng(2)
        for _ in range(10):
            p = plucker(ProjSubspace(rng.normal(size=(3, 6))))
            assert grassmann_plucker_residual(p) < 1e-10

    def test_non_decomposable_vector_detected(self):
        # e1^e2 + e3^e4 in 4-space is not a line
        from realenum.geometry import PluckerVector
        coords = np.zeros(6)
        coords[column_subsets(4, 2).index((0, 1))] = 1
        coords[column_subsets(4, 2).index((2, 3))] = 1
        assert grassmann_plucker_residual(PluckerVector(coords, 2, 4)) > 0.5

    def test_rank_deficient(self):
        with pytest.raises(ValueError):
            ProjSubspace(np.array([[1, 2, 3, 4], [2, 4, 6, 8]]))

    def test_exact_integers(self):
        S = ProjSubspace(np.array([[1, 2, 0, 3], [0, 1, 5, 7]]))
        assert plucker(S).coords.dtype == object
        assert list(plucker(S).coords) == [1, 5, 7, 10, 11, -15]

    def test_gl_equivariance(self):
        rng = np.random.default_rng(3)
        for _ in range(10):
            A = rand_complex(rng, 3, 6)
            g = rand_complex(rng, 6, 6)
            lhs = plucker(ProjSubspace(A @ g)).coords
            rhs = plucker(ProjSubspace(A)).coords @ exterior_power(g, 3)
            np.testing.assert_allclose(lhs, rhs, rtol=1e-10, atol=1e-10 * np.abs(rhs).max())


class TestIncidence:
    def test_self_incidence(self):
        rng = np.random.default_rng(4)
        K = ProjSubspace(rng.normal(size=(3, 6)))
        assert abs(meets_condition(K)(plucker(K))) < 1e-10

    def test_matches_stacked_determinant(self):
        rng = np.random.default_rng(5)
        for _ in range(20):
            K = ProjSubspace(rand_complex(rng, 3, 6))
            H = ProjSubspace(rand_complex(rng, 3, 6))
            direct = np.linalg.det(np.vstack([K.basis, H.basis]))
            assert abs(direct) > 1e-6
            assert meets_condition(K)(plucker(H)) == pytest.approx(direct, rel=1e-10)

    def test_exact_integer_determinant(self):
        rng = np.random.default_rng(6)
        for _ in range(20):
            K = ProjSubspace(rng.integers(-5, 6, size=(3, 6)))
            H = ProjSubspace(rng.integers(-5, 6, size=(3, 6)))
            import sympy
            direct = sympy.Matrix(np.vstack([K.basis, H.basis]).tolist()).det()
            assert meets_condition(K)(plucker(H)) == direct

    def test_line_incidence(self):
        e = np.eye(4, dtype=np.int64)
        L12 = ProjSubspace(e[[0, 1]])
        L34 = ProjSubspace(e[[2, 3]])
        L13 = ProjSubspace(e[[0, 2]])
        assert line_meets_condition(L12)(plucker(L12)) == 0
        assert abs(line_meets_condition(L12)(plucker(L34))) == 1
        assert abs(line_meets_condition(L34)(plucker(L12))) == 1
        assert line_meets_condition(L12)(plucker(L13)) == 0

    def test_wrong_dimensions(self):
        with pytest.raises(ValueError):
            meets_condition(ProjSubspace(np.eye(4)[:2]))
        with pytest.raises(ValueError):
            line_meets_condition(ProjSubspace(np.eye(6)[:3]))

    def test_chart_composition_degree(self):
        rng = np.random.default_rng(7)
        K = ProjSubspace(rng.normal(size=(3, 6)))
        f = meets_condition(K).compose(chart_plucker(Chart.standard(3, 6)))
        assert f.nvars == 9 and f.degree() <= 3
        assert len(f.terms) == 34  # 1 + 9 + 9*2 + 6 monomials of minors


class TestChart:
    def test_zero_free_entries(self):
        S = chart_subspace(Chart((1, 3), np.zeros((2, 2), dtype=np.int64)))
        np.testing.assert_array_equal(S.basis, [[0, 1, 0, 0], [0, 0, 0, 1]])

    def test_complementary_minor(self):
        rng = np.random.default_rng(8)
        X = rng.integers(-4, 5, size=(3, 3))
        c = Chart.standard(3, 6, X)
        polys = chart_plucker(c)
        idx = column_subsets(6, 3).index((3, 4, 5))
        import sympy
        val = polys[idx].eval(X.flatten().tolist())
        assert abs(val) == abs(sympy.Matrix(X.tolist()).det())
        assert polys[column_subsets(6, 3).index((0, 1, 2))].eval(X.flatten().tolist()) == 1
        assert all(p.degree() <= 3 for p in polys)

    def test_consistency_with_numeric_plucker(self):
        rng = np.random.default_rng(9)
        for _ in range(100):
            r, m = [(2, 4), (3, 6), (2, 5)][rng.integers(3)]
            piv = tuple(sorted(rng.choice(m, size=r, replace=False)))
            c = Chart(piv, rand_complex(rng, r, m - r))
            poly_vals = np.array([p.eval(c.free.flatten().tolist()) for p in chart_plucker(c)])
            numeric = plucker(chart_subspace(c)).coords
            np.testing.assert_allclose(poly_vals, numeric, rtol=1e-10, atol=1e-10 * np.abs(numeric).max())

    def test_distinct_pivots(self):
        with pytest.raises(ValueError):
            Chart((0, 0), np.zeros((2, 2)))


class TestFourPlanes:
    def test_identity_frame_first_plane(self):
        P = four_planes(np.eye(6, dtype=np.int64))
        # x11, x22, x33 vanish: spanned by the x12, x13, x23 axes
        np.testing.assert_array_equal(P[0].basis, np.eye(6, dtype=np.int64)[[1, 2, 4]])

    def test_pairwise_intersections(self):
        P = four_planes(np.eye(6, dtype=np.int64))
        for A, B in itertools.combinations(P, 2):
            span = matrix_rank(np.vstack([A.basis, B.basis]))
            assert span in (4, 5)  # meet in a line or a point
            assert meets_condition(A)(plucker(B)) == 0

    def test_permutation_frame(self):
        perm = np.eye(6, dtype=np.int64)[[5, 3, 1, 0, 2, 4]]
        P = four_planes(perm)
        for plane, ideal in zip(P, [{0, 3, 5}, {0, 1, 3}, {0, 2, 5}, {3, 4, 5}]):
            keep = [k for k in range(6) if k not in ideal]
            np.testing.assert_array_equal(plane.basis, perm[keep])

    def test_singular_frame(self):
        with pytest.raises(ValueError):
            four_planes(np.ones((6, 6)))

    def test_random_frame_incidences_vanish(self):
        rng = np.random.default_rng(10)
        P = four_planes(rng.normal(size=(6, 6)))
        for A, B in itertools.permutations(P, 2):
            assert abs(meets_condition(A)(plucker(B))) < 1e-10
