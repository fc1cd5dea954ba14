import math

import numpy as np
import pytest

from framecert import (
    Affine,
    Clamp,
    FrequencyFunction,
    Gaussian,
    GaussianEnvelope,
    Polynomial,
    Product,
    Quotient,
    Ramp,
    Scale,
    Sum,
    Support,
    difference,
    identity_x,
    reflection,
    shift,
)
from framecert.funcexpr import times_identity
from framecert.jets import ZERO

from helpers import fd_jet, jet_close


class TestSupport:
    def test_normalize_merges(self):
        s = Support.of((0.0, 1.0), (0.5, 2.0), (3.0, 4.0))
        assert s.intervals == ((0.0, 2.0), (3.0, 4.0))

    def test_intersect_union(self):
        a = Support.of((0.0, 2.0))
        b = Support.of((1.0, 3.0))
        assert a.intersect(b).intervals == ((1.0, 2.0),)
        assert a.union(b).intervals == ((0.0, 3.0),)

    def test_translate(self):
        s = Support.of((-1 / 3, 1 / 3)).translate(-1.0)
        assert len(s.intervals) == 1
        assert s.intervals[0] == pytest.approx((-4 / 3, -2 / 3))

    def test_affine_preimage(self):
        s = Support.of((0.0, 1.0))
        # f(6x - 2) supported where 6x-2 in [0,1], i.e. [1/3, 1/2]
        pre = s.affine_preimage(6.0, -2.0)
        assert pre.intervals == ((1 / 3, 0.5),)
        # negative scale flips
        pre = s.affine_preimage(-2.0, 0.0)
        assert pre.intervals == ((-0.5, 0.0),)

    def test_bounds_and_flags(self):
        assert Support.empty().is_empty()
        assert not Support.real_line().is_bounded()
        assert Support.of((0.0, 1.0)).is_bounded()


class TestEvaluation:
    def test_outside_support_zero_jet(self):
        rng = np.random.default_rng(19)
        f = Clamp(Polynomial((1.0, 2.0)), Support.of((-1.0, 1.0)))
        for x in rng.uniform(1.0001, 50.0, 500):
            for s in (x, -x):
                assert f.eval_jet(float(s)) == ZERO
        xs = rng.uniform(2.0, 9.0, 500)
        assert np.all(f.values(xs) == 0.0)

    def test_ramp_midpoint(self):
        assert Ramp()(0.5) == pytest.approx(0.5, abs=1e-15)

    def test_shift_semantics(self):
        g = Gaussian(1.0, 2.0)
        assert shift(g, 1.0)(0.0) == pytest.approx(g(1.0), rel=1e-15)
        assert shift(g, 0.0) is g
        probe = np.linspace(-2, 2, 100)
        np.testing.assert_allclose(shift(g, 0.3).values(probe),
                                   g.values(probe + 0.3), rtol=1e-14)

    def test_times_identity(self):
        f = Gaussian(2.0, 1.0)
        g = times_identity(f)
        assert g(2.0) == pytest.approx(2.0 * f(2.0), rel=1e-15)
        assert times_identity(Scale(f, 0.0)).support.is_empty()
        jet_close(g.eval_jet(0.5), fd_jet(lambda t: t * f(t), 0.5),
                  rtol=1e-6, floor=1e-4)

    def test_product_support_intersection(self):
        a = Clamp(Polynomial((1.0,)), Support.of((0.0, 2.0)))
        b = Clamp(Polynomial((1.0,)), Support.of((1.0, 3.0)))
        p = Product((a, b))
        assert p.support.intervals == ((1.0, 2.0),)
        zero = Scale(a, 0.0)
        assert Product((a, zero)).support.is_empty()

    def test_product_jet_matches_jet_mul(self):
        f = Gaussian(1.0, 3.0)
        g = Polynomial((0.0, 1.0, 0.5))
        p = Product((f, g))
        x = 0.9
        jet_close(p.eval_jet(x), f.eval_jet(x) * g.eval_jet(x),
                  rtol=1e-15, floor=1e-15)

    def test_values_match_eval_jet(self):
        rng = np.random.default_rng(23)
        f = Sum((Product((Polynomial((0, 0, 1.0)), Gaussian(1.0, 2.0))),
                 Affine(Ramp(), 3.0, -1.0)))
        xs = rng.uniform(-2, 2, 200)
        vals = f.values(xs)
        for x, v in zip(xs, vals):
            assert v == pytest.approx(f.eval_jet(float(x)).c0, abs=1e-14)

    def test_smoothness_between_breakpoints(self):
        f = Affine(Ramp(), 6.0, -2.0)
        rng = np.random.default_rng(29)
        for x in rng.uniform(1 / 3 + 0.01, 0.5 - 0.01, 50):
            jet_close(f.eval_jet(float(x)),
                      fd_jet(lambda t: f(t), float(x), h=1e-4),
                      rtol=1e-4, floor=1e-3)


class TestClamp:
    def test_quotient_short_circuit(self):
        # Denominator vanishes outside the clamp region; must not be touched.
        num = Polynomial((0.0, 1.0))
        den = Polynomial((0.0, 1.0))  # zero at the origin
        f = Clamp(Quotient(num, den), Support.of((1.0, 2.0)))
        assert f.eval_jet(0.0) == ZERO
        assert f(1.5) == pytest.approx(1.0)
        assert np.all(f.values(np.array([-1.0, 0.0, 0.5])) == 0.0)

    def test_breakpoints_include_region_edges(self):
        f = Clamp(Gaussian(1.0, 1.0), Support.of((-0.5, 0.5)))
        assert -0.5 in f.breakpoints and 0.5 in f.breakpoints


class TestEnvelope:
    def test_gaussian_auto_envelope(self):
        g = Gaussian(2.0, 3.0)
        assert g.envelope == GaussianEnvelope(2.0, 3.0)
        assert g.envelope.at(1.0) == pytest.approx(2.0 * math.exp(-3.0))

    def test_scale_propagates(self):
        g = Scale(Gaussian(2.0, 3.0), -2.0)
        assert g.envelope.amplitude == pytest.approx(4.0)

    def test_cutoff(self):
        env = GaussianEnvelope(1.0, 1.0)
        c = env.cutoff(1e-10)
        assert env.at(c) <= 1e-10 * (1 + 1e-12)
        assert env.cutoff(2.0) == 0.0


class TestStructure:
    def test_difference_structural_zero(self):
        g = Gaussian(1.0, 2.0)
        assert difference(g, g) is None
        assert difference(g, Gaussian(1.0, 2.0)) is None
        d = difference(g, Gaussian(1.0, 3.0))
        assert d is not None
        assert d(0.5) == pytest.approx(math.exp(-0.5) - math.exp(-0.75))

    def test_reflection(self):
        f = Affine(Ramp(), 1.0, 0.0)
        r = reflection(f)
        assert r(-0.3) == pytest.approx(f(0.3))
        assert r.support.intervals == ((-math.inf, 0.0),)

    def test_identity_x(self):
        assert identity_x()(3.5) == 3.5


class TestSerialization:
    def test_round_trip(self, catalog):
        for f in (catalog.psi_hat, catalog.cutoff, catalog.bump,
                  catalog.psi_star_hat, catalog.mu_hat, catalog.phi_hat):
            g = FrequencyFunction.from_dict(f.to_dict())
            assert g.to_dict() == f.to_dict()
            xs = np.linspace(-1.2, 1.2, 257)
            np.testing.assert_allclose(g.values(xs), f.values(xs),
                                       rtol=0, atol=1e-15)
            assert g.support == f.support

    def test_unknown_type_rejected(self):
        with pytest.raises(ValueError):
            FrequencyFunction.from_dict({"type": "mystery"})
