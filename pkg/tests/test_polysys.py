import itertools
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from realenum.polysys import (
    Conic,
    MultiPoly,
    PolySystem,
    conic_conic_tangency,
    conic_line_tangency,
    conic_point_condition,
    disc2,
    disc3,
    monomial_min_primes,
    veronese_generators,
    veronese_generators_symbolic,
)

CIRCLE = Conic((1, 0, 0, 1, 0, -1))


class TestEval:
    def test_constant(self):
        one = MultiPoly.constant(1, 3)
        assert one.eval([5, -2, 1j]) == 1

    def test_square_minus_one(self):
        (x,) = MultiPoly.variables(1)
        assert (x**2 - 1).eval([2]) == 3

    def test_jacobian(self):
        x, y = MultiPoly.variables(2)
        F = PolySystem([x**2 + y**2 - 5, x - y - 1])
        np.testing.assert_array_equal(F.jacobian([2, 1]), [[4, 2], [1, -1]])
        np.testing.assert_array_equal(F.eval([2, 1]), [0, 0])

    def test_length_mismatch(self):
        x, y = MultiPoly.variables(2)
        with pytest.raises(ValueError):
            (x + y).eval([1])
        with pytest.raises(ValueError):
            PolySystem([x, y]).jacobian([1, 2, 3])

    def test_compose_and_homogenize(self):
        x, y = MultiPoly.variables(2)
        f = x**2 * y - 3 * y + 2
        (s,) = MultiPoly.variables(1)
        g = f.compose([s + 1, 2 * s])
        for v in (0.3, -1.7, 2.0):
            assert g.eval([v]) == pytest.approx(f.eval([v + 1, 2 * v]))
        h = f.homogenize()
        assert h.degree() == 3 and all(sum(e) == 3 for e in h.terms)
        assert h.eval([1, 0.5, -2]) == pytest.approx(f.eval([0.5, -2]))

    def test_json_roundtrip(self):
        x, y = MultiPoly.variables(2)
        f = (1 + 2j) * x**2 * y - 0.25 * y + 3
        assert MultiPoly.from_json(2, f.to_json()) == f


class TestDiscriminants:
    def test_disc2(self):
        assert disc2(1, 0, -1) == 4

    def test_disc3_triple_root(self):
        assert disc3(1, -3, 3, -1) == 0

    def test_disc3_cube_roots(self):
        assert disc3(1, 0, 0, -1) == -27

    def test_disc3_matches_root_products(self):
        rng = np.random.default_rng(3)
        for _ in range(20):
            r = rng.normal(size=3) + 1j * rng.normal(size=3)
            a = rng.normal() + 0.5
            c = a * np.poly(r)
            expected = a**4 * np.prod([(r[i] - r[j]) ** 2 for i, j in itertools.combinations(range(3), 2)])
            assert disc3(*c) == pytest.approx(expected, rel=1e-9)


class TestPointCondition:
    def test_form_and_circle(self):
        f = conic_point_condition((1, 0, 1))
        assert f == MultiPoly.linear_form([1, 0, 1, 0, 0, 1])
        assert f.eval(CIRCLE.coeffs) == 0

    def test_axis_point(self):
        assert conic_point_condition((0, 1, 0)) == MultiPoly.linear_form([0, 0, 0, 1, 0, 0])

    def test_off_circle(self):
        assert conic_point_condition((2, 0, 1)).eval(CIRCLE.coeffs) == 3

    def test_zero_point(self):
        with pytest.raises(ValueError):
            conic_point_condition((0, 0, 0))


class TestLineTangency:
    def test_vertical_tangent(self):
        assert conic_line_tangency((1, 0, 1), (1, 1, 1)).eval(CIRCLE.coeffs) == 0

    def test_line_at_infinity(self):
        assert conic_line_tangency((1, 0, 0), (0, 1, 0)).eval(CIRCLE.coeffs) == -4

    def test_dependent_points(self):
        with pytest.raises(ValueError):
            conic_line_tangency((1, 2, 3), (1, 2, 3))


class TestConicTangency:
    def test_identical(self):
        assert conic_conic_tangency(CIRCLE).eval(CIRCLE.coeffs) == 0

    def test_external_circles(self):
        B = (1, 0, -6, 1, 0, 5)  # (x - 3z)^2 + y^2 - 4z^2
        assert conic_conic_tangency(CIRCLE).eval(B) == 0

    def test_transverse_diagonal_pair(self):
        # det(l*diag(1,1,-1) + m*diag(1,2,-3)) = -(l+m)(l+2m)(l+3m): roots -1, -2, -3
        roots = [-1, -2, -3]
        expected = np.prod([(roots[i] - roots[j]) ** 2 for i, j in itertools.combinations(range(3), 2)])
        assert conic_conic_tangency(CIRCLE).eval((1, 0, 0, 2, 0, -3)) == expected == 4

    def test_degenerate_rejected(self):
        with pytest.raises(ValueError):
            conic_conic_tangency((1, 0, 0, -1, 0, 0))  # line pair x^2 - y^2

    def test_degrees(self):
        rng = np.random.default_rng(0)
        C = Conic(tuple(rng.normal(size=6)))
        assert conic_point_condition(rng.normal(size=3)).degree() == 1
        assert conic_line_tangency(rng.normal(size=3), rng.normal(size=3)).degree() == 2
        tact = conic_conic_tangency(C)
        assert tact.degree() == 6 == 2 * 1 + 2 * 2
        assert all(sum(e) == 6 for e in tact.terms)


def _point_on_conic(M, rng):
    """A point of the conic x^T M x = 0 on a random line through two points."""
    p, q = rng.normal(size=3), rng.normal(size=3)
    a, b, c = p @ M @ p, 2 * p @ M @ q, q @ M @ q
    s = np.roots([a, b, c])[0]
    return s * p + q


def test_tangent_witnesses_vanish():
    rng = np.random.default_rng(11)
    for _ in range(100):
        C = Conic(tuple(rng.normal(size=6)))
        M = C.matrix()
        x = _point_on_conic(M, rng)
        ell = M @ x  # tangent line at x, dual coordinates
        # tangent line as two points: x and another point on ell
        w = np.cross(ell, rng.normal(size=3))
        f_line = conic_line_tangency(x, w)
        val = f_line.eval(C.coeffs)
        scale = f_line.coefficient_norm() * np.linalg.norm(C.coeffs) ** 2
        assert abs(val) < 1e-8 * scale
        # conic through the tangency point with the same tangent: C + s * sym(ell m^T)
        m = rng.normal(size=3)
        Bm = M + rng.normal() * (np.outer(ell, m) + np.outer(m, ell)) / 2
        B = Conic.from_matrix(Bm)
        tact = conic_conic_tangency(C)
        val = tact.eval(B.coeffs)
        scale = tact.coefficient_norm() * np.linalg.norm(B.coeffs) ** 6
        assert abs(val) < 1e-8 * scale


class TestVeronese:
    def test_t_zero_monomials(self):
        gens = veronese_generators(0)
        supports = [set(g.terms) for g in gens]
        assert all(len(s) == 1 for s in supports)
        expected = {(1, 0, 0, 0, 0, 1), (1, 0, 0, 1, 0, 0), (1, 0, 0, 0, 1, 0),
                    (0, 1, 0, 0, 0, 1), (0, 0, 1, 1, 0, 0), (0, 0, 0, 1, 0, 1)}
        assert {next(iter(s)) for s in supports} == expected

    def test_t_one_is_catalecticant(self):
        x11, x12, x13, x22, x23, x33 = MultiPoly.variables(6)
        cat = [[x11, x12, x13], [x12, x22, x23], [x13, x23, x33]]
        minors = set()
        for r in itertools.combinations(range(3), 2):
            for c in itertools.combinations(range(3), 2):
                m = cat[r[0]][c[0]] * cat[r[1]][c[1]] - cat[r[0]][c[1]] * cat[r[1]][c[0]]
                if not m.is_zero():
                    minors.add(m)
                    minors.add(-m)
        for g in veronese_generators(1):
            assert g in minors

    def test_parametrization_symbolic(self):
        t, u1, u2, u3 = MultiPoly.variables(4)
        subs = [t * u1**2, u1 * u2, u1 * u3, t * u2**2, u2 * u3, t * u3**2, t]
        for g in veronese_generators_symbolic():
            assert g.compose(subs).is_zero()

    def test_parametrization_numeric(self):
        rng = np.random.default_rng(5)
        for _ in range(100):
            t = rng.normal()
            u = rng.normal(size=3)
            x = [t * u[0] ** 2, u[0] * u[1], u[0] * u[2], t * u[1] ** 2, u[1] * u[2], t * u[2] ** 2]
            for g in veronese_generators(t):
                assert abs(g.eval(x)) < 1e-12 * (1 + np.abs(x).max() ** 2)

    def test_exact_rational_t(self):
        t = Fraction(2, 3)
        u = (Fraction(1), Fraction(-2), Fraction(5, 7))
        x = [t * u[0] ** 2, u[0] * u[1], u[0] * u[2], t * u[1] ** 2, u[1] * u[2], t * u[2] ** 2]
        assert all(g.eval(x) == 0 for g in veronese_generators(t))


class TestMinPrimes:
    def test_four_planes(self):
        primes = monomial_min_primes(veronese_generators(0))
        # indices: x11=0 x12=1 x13=2 x22=3 x23=4 x33=5
        assert set(primes) == {frozenset({0, 3, 5}), frozenset({0, 3, 1}),
                               frozenset({0, 5, 2}), frozenset({3, 5, 4})}

    def test_single_product(self):
        assert monomial_min_primes([(1, 1)]) == [frozenset({0}), frozenset({1})]

    def test_single_variable(self):
        assert monomial_min_primes([(1,)]) == [frozenset({0})]

    def test_rejects_non_squarefree(self):
        with pytest.raises(ValueError):
            monomial_min_primes([(2, 0)])


@st.composite
def hypergraphs(draw):
    n = draw(st.integers(1, 6))
    edges = draw(st.lists(st.lists(st.integers(0, n - 1), min_size=1, max_size=3, unique=True),
                          min_size=1, max_size=6))
    return n, [tuple(int(i in e) for i in range(n)) for e in edges]


@settings(max_examples=100, deadline=None)
@given(hypergraphs())
def test_min_primes_against_brute_force(hg):
    n, gens = hg
    primes = monomial_min_primes(gens)
    supports = [frozenset(i for i, k in enumerate(g) if k) for g in gens]
    covers = [frozenset(s) for r in range(n + 1) for s in itertools.combinations(range(n), r)
              if all(frozenset(s) & e for e in supports)]
    brute = {c for c in covers if not any(o < c for o in covers)}
    assert set(primes) == brute
    for a, b in itertools.combinations(primes, 2):
        assert not (a <= b or b <= a)
