"""Normal form, matrix forms, action, metrics and classification of disk automorphisms."""

import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from chabauty import mobius as mb
from helpers import pseudo_det_error, random_element, random_of_kind

angles = st.floats(min_value=-math.pi, max_value=math.pi, allow_nan=False)
radii = st.floats(min_value=0.0, max_value=0.95)


@st.composite
def elements(draw):
    r = draw(radii)
    phi = draw(st.floats(min_value=0, max_value=2 * math.pi))
    return mb.DiskAutomorphism(draw(angles), r * cmath.exp(1j * phi))


@st.composite
def disk_points(draw, r_max=0.95):
    r = draw(st.floats(min_value=0.0, max_value=r_max))
    phi = draw(st.floats(min_value=0, max_value=2 * math.pi))
    return r * cmath.exp(1j * phi)


def close(g, h, tol=1e-10):
    return mb.element_distance(g, h) <= tol


class TestConstruction:
    def test_pole_on_boundary_rejected(self):
        with pytest.raises(mb.DegenerateElementError):
            mb.DiskAutomorphism(0.0, 1.0)

    def test_non_finite_rejected(self):
        with pytest.raises(mb.MobiusError):
            mb.DiskAutomorphism(float("nan"), 0j)

    def test_angle_is_wrapped(self):
        g = mb.DiskAutomorphism(3 * math.pi, 0j)
        assert close(g, mb.rotation(math.pi))

    def test_rotation_about_interior_point_fixes_it(self):
        c = 0.3 - 0.4j
        g = mb.rotation(1.1, c)
        assert abs(g(c) - c) < 1e-12


class TestCompose:
    def test_identity_is_neutral(self):
        g = mb.DiskAutomorphism(0.7, 0.2 + 0.3j)
        assert close(mb.compose(mb.identity(), g), g)

    def test_half_turn_is_involution(self):
        r = mb.rotation(math.pi)
        assert close(mb.compose(r, r), mb.identity())

    def test_inverse_law_on_random_elements(self):
        rng = np.random.default_rng(1)
        worst = max(mb.element_distance(mb.compose(g, mb.inverse(g)), mb.identity())
                    for g in (random_element(rng, 0.95) for _ in range(1000)))
        assert worst <= 1e-10

    def test_matmul_matches_compose(self):
        g, h = mb.DiskAutomorphism(0.3, 0.5j), mb.DiskAutomorphism(-1.0, 0.2)
        assert close(g @ h, mb.compose(g, h))

    @given(elements(), elements(), disk_points(0.9))
    @settings(max_examples=200, deadline=None)
    def test_compose_acts_as_composition(self, g, h, z):
        assert abs(mb.compose(g, h)(z) - g(h(z))) < 1e-8 / (1 - abs(z)) ** 2


class TestInverse:
    def test_identity(self):
        assert close(mb.inverse(mb.identity()), mb.identity())

    @pytest.mark.parametrize("theta", [0.3, 1.0, 2.5])
    def test_rotation(self, theta):
        assert close(mb.inverse(mb.rotation(theta)), mb.rotation(2 * math.pi - theta))

    def test_matrix_form_by_product(self):
        g = mb.DiskAutomorphism(0.9, 0.4 - 0.2j)
        m = mb.to_su11(g)
        inv = mb.to_su11(mb.inverse(g))
        expected = mb.Su11Matrix(m.alpha.conjugate(), -m.beta)
        assert mb.pair_distance(inv, expected) < 1e-12
        prod = m @ expected
        assert mb.pair_distance(prod, mb.Su11Matrix(1.0, 0.0)) < 1e-12


class TestApply:
    def test_identity(self):
        assert mb.apply(mb.identity(), 0.3 + 0.1j) == pytest.approx(0.3 + 0.1j)

    def test_quarter_turn(self):
        assert abs(mb.apply(mb.rotation(math.pi / 2), 0.5) - 0.5j) < 1e-15

    def test_pole_goes_to_origin(self):
        assert abs(mb.apply(mb.DiskAutomorphism(0.0, 0.5), 0.5)) < 1e-15

    def test_vectorized_over_arrays(self):
        g = mb.DiskAutomorphism(0.4, 0.3j)
        zs = np.array([0.1, -0.2j, 0.5 + 0.1j])
        out = mb.apply(g, zs)
        assert np.allclose(out, [g(complex(z)) for z in zs], atol=1e-14)

    def test_boundary_maps_to_boundary(self):
        g = mb.DiskAutomorphism(1.3, 0.6 - 0.3j)
        zs = np.exp(1j * np.linspace(0, 2 * np.pi, 50))
        assert np.allclose(np.abs(mb.apply(g, zs)), 1.0, atol=1e-12)


class TestMatrixForms:
    def test_identity(self):
        m = mb.to_su11(mb.identity())
        assert m.alpha == pytest.approx(1) and m.beta == pytest.approx(0)

    @pytest.mark.parametrize("theta", [0.5, 2.0, -1.2])
    def test_rotation_is_diagonal(self, theta):
        m = mb.to_su11(mb.rotation(theta))
        assert mb.pair_distance(m, mb.Su11Matrix(cmath.exp(0.5j * theta), 0)) < 1e-14

    def test_real_boost_entries(self):
        # [[1, t], [t, 1]] normalized to determinant one
        m = mb.to_su11(mb.DiskAutomorphism(0.0, -0.5))
        expected = mb.Su11Matrix(1 / math.sqrt(0.75), 0.5 / math.sqrt(0.75))
        assert mb.pair_distance(m, expected) < 1e-14
        grid = np.array([0.1, -0.3 + 0.2j, 0.7j])
        assert np.allclose(m.act(grid), (grid + 0.5) / (1 + 0.5 * grid), atol=1e-14)

    @pytest.mark.parametrize("alpha, expected", [
        (1, mb.identity()),
        (1j, mb.rotation(math.pi)),
        (-1, mb.identity()),
    ])
    def test_from_su11_diagonal(self, alpha, expected):
        assert close(mb.from_su11(mb.Su11Matrix(alpha, 0)), expected)

    def test_from_su11_rejects_bad_determinant(self):
        with pytest.raises(mb.InvalidMatrixError):
            mb.from_su11(mb.Su11Matrix(2.0, 0.5))

    @given(elements())
    @settings(max_examples=200, deadline=None)
    def test_su11_round_trip(self, g):
        m = mb.to_su11(g)
        assert mb.pair_distance(mb.to_su11(mb.from_su11(m)), m) < 1e-10

    @given(elements())
    @settings(max_examples=200, deadline=None)
    def test_sl2r_round_trip_and_trace(self, g):
        s = mb.to_sl2r(g)
        assert abs(s.det - 1) < 1e-9
        assert close(mb.from_sl2r(s), g, 1e-9)
        assert abs(abs(s.trace) - abs(2 * mb.to_su11(g).alpha.real)) < 1e-9

    def test_sl2r_identity(self):
        s = mb.to_sl2r(mb.identity())
        assert np.allclose([s.p, s.q, s.r, s.s], [1, 0, 0, 1], atol=1e-15)

    @pytest.mark.parametrize("theta", [0.4, 1.7, 3.0])
    def test_sl2r_rotation(self, theta):
        s = mb.to_sl2r(mb.rotation(theta))
        c, d = math.cos(theta / 2), math.sin(theta / 2)
        flat = np.array([s.p, s.q, s.r, s.s])
        target = np.array([c, d, -d, c])
        assert min(np.abs(flat - target).max(), np.abs(flat + target).max()) < 1e-12

    def test_sl2r_dilation(self):
        r3 = math.sqrt(3)
        g = mb.from_sl2r(mb.Sl2RMatrix(r3, 0.0, 0.0, 1 / r3))
        assert abs(2 * mb.to_su11(g).alpha.real) == pytest.approx(2 * math.cosh(math.log(3) / 2), abs=1e-12)
        w = 0.4 + 1.3j
        assert abs(mb.cayley_inverse(g(mb.cayley(w))) - 3 * w) < 1e-12

    def test_sl2r_rejects_bad_determinant(self):
        with pytest.raises(mb.InvalidMatrixError):
            mb.from_sl2r(mb.Sl2RMatrix(2.0, 0.0, 0.0, 2.0))

    def test_cayley_round_trip(self):
        zs = np.array([0.0, 0.3 + 0.4j, -0.8j])
        assert np.allclose(mb.cayley(mb.cayley_inverse(zs)), zs, atol=1e-14)


class TestClassify:
    def test_half_turn(self):
        cls = mb.classify(mb.rotation(math.pi))
        assert isinstance(cls, mb.Elliptic)
        assert abs(cls.center) < 1e-15 and abs(cls.angle) == pytest.approx(math.pi)

    def test_real_boost(self):
        g = mb.DiskAutomorphism(0.0, -0.5)
        cls = mb.classify(g)
        assert isinstance(cls, mb.Hyperbolic)
        assert {round(cls.attracting.real), round(cls.repelling.real)} == {1, -1}
        oracle = mb.hyperbolic_distance(0, g(0))
        assert cls.translation_length == pytest.approx(oracle, abs=1e-12)
        assert cls.translation_length == pytest.approx(math.log(3), abs=1e-12)

    def test_cayley_image_of_unit_translation(self):
        # z -> z + 1 on the upper half-plane
        g = mb.from_sl2r(mb.Sl2RMatrix(1.0, 1.0, 0.0, 1.0))
        cls = mb.classify(g)
        assert isinstance(cls, mb.Parabolic)
        xi = cls.fixed_point
        assert abs(abs(xi) - 1) < 1e-12 and abs(g(xi) - xi) < 1e-9
        assert abs(xi - mb.cayley(1e12)) < 1e-6

    def test_identity(self):
        assert isinstance(mb.classify(mb.identity()), mb.Identity)

    @pytest.mark.parametrize("g, cls", [
        (mb.rotation(1.2e-7), mb.Elliptic),
        (mb.rotation(1e-6, 0.5j), mb.Elliptic),
        (mb.DiskAutomorphism(0.0, 1.2e-7), mb.Hyperbolic),
        (mb.parabolic(1j, 1e-7), mb.Parabolic),
        (mb.DiskAutomorphism(0.0, 1e-10), mb.Identity),
    ])
    def test_near_identity_elements(self, g, cls):
        assert isinstance(mb.classify(g), cls)

    @pytest.mark.parametrize("kind, cls", [
        ("elliptic", mb.Elliptic), ("hyperbolic", mb.Hyperbolic), ("parabolic", mb.Parabolic),
    ])
    def test_conjugated_kinds(self, kind, cls):
        rng = np.random.default_rng(7)
        for _ in range(50):
            assert isinstance(mb.classify(random_of_kind(kind, rng)), cls)


class TestFixedPoints:
    def test_rotation(self):
        (c,) = mb.fixed_points(mb.rotation(0.8))
        assert abs(c) < 1e-15

    def test_boost(self):
        g = mb.DiskAutomorphism(0.0, -0.5)
        pts = mb.fixed_points(g)
        assert sorted(round(p.real) for p in pts) == [-1, 1]
        for p in pts:
            assert abs(g(p) - p) < 1e-12

    def test_parabolic_double_root(self):
        g = mb.parabolic(1.0, 0.7)
        (xi,) = mb.fixed_points(g)
        assert abs(xi - 1) < 1e-12
        m = mb.to_su11(g)
        disc = (m.alpha.conjugate() - m.alpha) ** 2 + 4 * abs(m.beta) ** 2
        assert abs(disc) < 1e-9

    def test_identity_raises(self):
        with pytest.raises(mb.AllPointsFixedError):
            mb.fixed_points(mb.identity())

    @given(elements())
    @settings(max_examples=200, deadline=None)
    def test_roots_of_fixed_point_quadratic(self, g):
        cls = mb.classify(g)
        if isinstance(cls, mb.Identity):
            return
        m = mb.to_su11(g)
        for z in mb.fixed_points(g):
            residual = m.beta.conjugate() * z * z + (m.alpha.conjugate() - m.alpha) * z - m.beta
            assert abs(residual) < 1e-6 * (abs(m.alpha) + abs(m.beta))


class TestPower:
    def test_zero(self):
        assert close(mb.power(mb.DiskAutomorphism(0.5, 0.3), 0), mb.identity())

    def test_fifth_turn(self):
        assert close(mb.power(mb.rotation(2 * math.pi / 5), 5), mb.identity())

    @pytest.mark.parametrize("n", [-3, -1, 2, 5])
    def test_hyperbolic_trace_identity(self, n):
        ell = 0.4
        g = mb.from_su11(mb.axis_translation_matrix(ell, 1j, -1j))
        gn = mb.power(g, n)
        assert abs(mb.to_su11(gn).alpha.real) == pytest.approx(math.cosh(n * ell / 2), rel=1e-12)
        cls = mb.classify(gn)
        assert cls.translation_length == pytest.approx(abs(n) * ell, rel=1e-10)
        assert {round(cls.attracting.imag), round(cls.repelling.imag)} == {1, -1}

    def test_matches_repeated_composition(self):
        g = mb.DiskAutomorphism(0.3, 0.2 - 0.5j)
        acc = mb.identity()
        for _ in range(7):
            acc = mb.compose(acc, g)
        assert close(mb.power(g, 7), acc, 1e-9)


class TestMetrics:
    def test_distance_to_self(self):
        assert mb.hyperbolic_distance(0.2j, 0.2j) == 0

    def test_origin_to_half(self):
        oracle = sum(2 * 0.5 ** (2 * k + 1) / (2 * k + 1) for k in range(60))
        assert mb.hyperbolic_distance(0, 0.5) == pytest.approx(oracle, abs=1e-14)
        assert mb.hyperbolic_distance(0, 0.5) == pytest.approx(math.log(3), abs=1e-14)

    def test_boundary_input_rejected(self):
        with pytest.raises(mb.MobiusError):
            mb.hyperbolic_distance(0, 1.0)

    @given(elements(), disk_points(0.8), disk_points(0.8))
    @settings(max_examples=300, deadline=None)
    def test_apply_is_isometry(self, g, z, w):
        d = mb.hyperbolic_distance(z, w)
        assert abs(mb.hyperbolic_distance(g(z), g(w)) - d) <= 1e-10 * max(1.0, d) / (1 - abs(g.a)) ** 2

    def test_element_distance_to_half_turn(self):
        assert mb.element_distance(mb.identity(), mb.rotation(math.pi)) == pytest.approx(math.sqrt(2))

    def test_element_distance_ignores_sign(self):
        m = mb.to_su11(mb.DiskAutomorphism(0.4, 0.3))
        assert mb.pair_distance(m, -m) == 0

    @given(elements(), elements(), elements())
    @settings(max_examples=200, deadline=None)
    def test_element_distance_is_metric(self, f, g, h):
        d = mb.element_distance
        assert d(g, g) < 1e-12
        assert d(f, g) == pytest.approx(d(g, f))
        assert d(f, h) <= d(f, g) + d(g, h) + 1e-9
