import math

import numpy as np
import pytest

from framecert import (
    CZONormInputs,
    DomainError,
    c_interp,
    czo_norm_bound,
    d_zeta,
    molecule_constants,
)


class TestDZeta:
    def test_reference_values(self):
        assert d_zeta(90.0) == pytest.approx(0.07780, rel=1e-3)
        assert d_zeta(3.0) == pytest.approx(7.0 * math.sqrt(108.0 / 512.0),
                                            rel=1e-14)

    def test_asymptotic(self):
        z = 1e6
        assert d_zeta(z) * z / 7.0 == pytest.approx(1.0, rel=1e-10)

    def test_domain(self):
        for z in (1.0, 0.5, -2.0):
            with pytest.raises(DomainError):
                d_zeta(z)


class TestCInterp:
    def test_identity_at_two(self):
        # exponent vanishes identically at p = 2, so the constant is exactly 1
        for r in (1.0, 1.2, 1.5, 1.9):
            assert c_interp(2.0, r) == 1.0

    def test_blowup_rate_near_one(self):
        p = 1.0001
        assert c_interp(p) * (p - 1.0) / 4.0 == pytest.approx(1.0, rel=0.02)

    def test_domain(self):
        for p, r in ((1.0, 1.0), (2.5, 1.0), (1.5, 1.5), (1.2, 1.4)):
            with pytest.raises(DomainError):
                c_interp(p, r)


class TestCZONormBound:
    def test_inputs_validation(self):
        with pytest.raises(DomainError):
            CZONormInputs(1.0, 1.0, 1.0, 2.0)
        with pytest.raises(DomainError):
            CZONormInputs(-1.0, 1.0, 1.0, 3.0)

    def test_p2_equals_l2_exactly(self):
        inp = CZONormInputs(0.37, 0.11, 0.05, 17.0)
        assert czo_norm_bound(("Lp", 2.0), inp) == inp.l2_norm

    def test_zero_inputs(self):
        inp = CZONormInputs(0.0, 0.0, 0.0, 10.0)
        for space in ("H1", "BMO", ("Lp", 1.3), ("Lp", 2.0), ("Lp", 5.0)):
            assert czo_norm_bound(space, inp) == 0.0

    def test_reference_h1_value(self):
        # l2 = 0.00026, C3 = 0.032, zeta = 90 gives a bound below 0.0075
        inp = CZONormInputs(0.00026, 0.0, 0.032, 90.0)
        got = czo_norm_bound("H1", inp)
        assert got == pytest.approx(
            2.0 * math.sqrt(90.0) * 0.00026 + d_zeta(90.0) * 0.032, rel=1e-14)
        assert got < 0.0075

    def test_bmo_swaps_constants(self):
        a = czo_norm_bound("BMO", CZONormInputs(0.1, 0.4, 0.7, 12.0))
        b = czo_norm_bound("H1", CZONormInputs(0.1, 0.7, 0.4, 12.0))
        assert a == b

    def test_monotone_in_each_input(self):
        rng = np.random.default_rng(17)
        spaces = ("H1", "BMO", ("Lp", 1.3), ("Lp", 1.8), ("Lp", 4.0))
        for _ in range(50):
            l2 = float(rng.uniform(0.0, 2.0))
            c2 = float(rng.uniform(0.0, 2.0))
            c3 = float(rng.uniform(0.0, 2.0))
            zeta = float(rng.uniform(3.0, 200.0))
            base = CZONormInputs(l2, c2, c3, zeta)
            eps = 1e-3
            for space in spaces:
                v = czo_norm_bound(space, base)
                for bump in (CZONormInputs(l2 + eps, c2, c3, zeta),
                             CZONormInputs(l2, c2 + eps, c3, zeta),
                             CZONormInputs(l2, c2, c3 + eps, zeta)):
                    assert czo_norm_bound(space, bump) >= v - 1e-15

    def test_lp_continuity_at_two(self):
        inp = CZONormInputs(0.3, 0.2, 0.1, 25.0)
        mid = czo_norm_bound(("Lp", 2.0), inp)
        lo = czo_norm_bound(("Lp", 2.0 - 1e-6), inp)
        hi = czo_norm_bound(("Lp", 2.0 + 1e-6), inp)
        assert lo == pytest.approx(mid, rel=1e-4)
        assert hi == pytest.approx(mid, rel=1e-4)

    def test_duality_structure(self):
        # For p > 2 the bound is the conjugate-exponent bound with the roles
        # of the two smoothness constants exchanged.
        inp = CZONormInputs(0.3, 0.2, 0.1, 25.0)
        p = 5.0
        q = p / (p - 1.0)
        swapped = CZONormInputs(0.3, 0.1, 0.2, 25.0)
        assert czo_norm_bound(("Lp", p), inp) == pytest.approx(
            czo_norm_bound(("Lp", q), swapped), rel=1e-12)

    def test_domain_errors(self):
        inp = CZONormInputs(1.0, 1.0, 1.0, 10.0)
        with pytest.raises(DomainError):
            czo_norm_bound(("Lp", 1.0), inp)
        with pytest.raises(DomainError):
            czo_norm_bound("L2", inp)


class TestMoleculeConstants:
    def test_zero_case(self):
        got = molecule_constants(10.0, 0.0, 0.0)
        assert got == {"C4": 0.0, "C5": 0.0, "atom_h1_bound": 0.0}

    def test_atom_bound_matches_h1(self):
        got = molecule_constants(90.0, 0.032, 0.00026)
        assert got["atom_h1_bound"] == czo_norm_bound(
            "H1", CZONormInputs(0.00026, 0.0, 0.032, 90.0))

    def test_c5_matches_weak_l1_base(self):
        zeta, c3, l2 = 40.0, 0.05, 0.2
        got = molecule_constants(zeta, c3, l2)
        assert got["C5"] == pytest.approx(
            math.sqrt(32.0 * zeta) * l2 + 8.0 * zeta / (zeta * zeta - 1) * c3,
            rel=1e-14)

    def test_molecule_composition_dominated(self):
        """Composing the atom-to-molecule constant with the molecule-to-Hardy
        coefficient stays below the direct smoothness term (whose coefficient
        is rounded up), and agrees with it to within 2 percent."""
        rng = np.random.default_rng(31)
        coeff = 4.0 / 3.0 * (math.sqrt(57.0) + math.sqrt(320.0 / 3.0))
        for _ in range(50):
            zeta = float(rng.uniform(3.0, 200.0))
            c3 = float(rng.uniform(1e-4, 1.0))
            c4 = molecule_constants(zeta, c3, 0.0)["C4"]
            composed = coeff / zeta * c4
            direct = d_zeta(zeta) * c3
            assert composed <= direct
            assert composed == pytest.approx(direct, rel=0.02)

    def test_domain(self):
        with pytest.raises(DomainError):
            molecule_constants(2.0, 0.1, 0.1)
