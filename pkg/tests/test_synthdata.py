"""Synthetic dataset generators: determinism, physics identities, noise."""

import math
import warnings

import numpy as np
import pytest

from pifmap.dimension import parse_unit
from pifmap.errors import DegenerateClassBalanceWarning, InvalidNoiseLevel, InvalidRange
from pifmap.featuremap import STANDARD_CONSTANTS
from pifmap.synthdata import (
    BernoulliRanges,
    BinaryRanges,
    NoiseConfig,
    PulsarRanges,
    Range,
    add_noise,
    gen_bernoulli,
    gen_binary,
    gen_pulsar,
)

G_STANDARD = STANDARD_CONSTANTS["g"].value
MU0 = STANDARD_CONSTANTS["mu0"].value
LIGHT_SPEED = STANDARD_CONSTANTS["c"].value
GRAVITATIONAL = STANDARD_CONSTANTS["G"].value


def _point(value):
    """Degenerate interval that pins a sampled column to one value."""
    return Range(value, value)


class TestRange:
    def test_linear_endpoints(self):
        r = Range(2.0, 10.0)
        np.testing.assert_allclose(
            r.map_uniform(np.array([0.0, 0.5, 1.0])), [2.0, 6.0, 10.0]
        )

    def test_log_endpoints_and_midpoint(self):
        r = Range(1e2, 1e6, log=True)
        mapped = r.map_uniform(np.array([0.0, 0.5, 1.0]))
        np.testing.assert_allclose(mapped, [1e2, 1e4, 1e6], rtol=1e-12)

    def test_describe(self):
        assert Range(1.0, 2.0).describe() == {
            "low": 1.0, "high": 2.0, "sampling": "uniform",
        }
        assert Range(1.0, 2.0, log=True).describe()["sampling"] == "log-uniform"

    def test_reversed_rejected(self):
        with pytest.raises(InvalidRange):
            Range(2.0, 1.0)

    def test_non_finite_rejected(self):
        with pytest.raises(InvalidRange):
            Range(0.0, math.inf)

    def test_log_needs_positive_low(self):
        with pytest.raises(InvalidRange):
            Range(0.0, 1.0, log=True)
        with pytest.raises(InvalidRange):
            Range(-1.0, 1.0, log=True)


class TestDeterminism:
    @pytest.mark.parametrize(
        "generator", [gen_bernoulli, gen_pulsar, gen_binary]
    )
    def test_same_seed_bit_identical(self, generator):
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", DegenerateClassBalanceWarning)
            a = generator(64, seed=123)
            b = generator(64, seed=123)
        assert np.array_equal(a.X, b.X)
        assert np.array_equal(a.y, b.y)

    @pytest.mark.parametrize(
        "generator", [gen_bernoulli, gen_pulsar, gen_binary]
    )
    def test_different_seed_differs(self, generator):
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", DegenerateClassBalanceWarning)
            a = generator(64, seed=1)
            b = generator(64, seed=2)
        assert not np.array_equal(a.X, b.X)

    def test_provenance_records_recipe(self):
        ds = gen_bernoulli(8, seed=7)
        assert ds.provenance["generator"] == "bernoulli"
        assert ds.provenance["n"] == 8
        assert ds.provenance["seed"] == 7
        assert ds.provenance["rng"] == "PCG64"
        assert ds.provenance["noise"] is None
        assert ds.provenance["ranges"]["v"]["sampling"] == "uniform"

    def test_n_must_be_positive(self):
        with pytest.raises(InvalidRange):
            gen_bernoulli(0, seed=1)


class TestBernoulli:
    def test_hand_computed_label(self):
        ranges = BernoulliRanges(
            p=_point(1e5), rho=_point(1000.0), v=_point(2.0), h=_point(1.0)
        )
        ds = gen_bernoulli(4, seed=0, ranges=ranges)
        # p + rho*v^2/2 + rho*g*h = 1e5 + 2000 + 9806.65
        expected = 1e5 + 0.5 * 1000.0 * 4.0 + 1000.0 * G_STANDARD * 1.0
        np.testing.assert_allclose(ds.y, expected, rtol=1e-12)
        assert expected == pytest.approx(111806.65)

    def test_label_formula_on_random_draws(self):
        ds = gen_bernoulli(100, seed=11)
        p = ds.column("p")
        rho = ds.column("rho")
        v = ds.column("v")
        h = ds.column("h")
        np.testing.assert_allclose(
            ds.y, p + 0.5 * rho * v**2 + rho * G_STANDARD * h, rtol=1e-12
        )

    def test_schema_units(self):
        ds = gen_bernoulli(2, seed=0)
        assert ds.schema.names == ("p", "rho", "v", "Q", "A", "mu", "h")
        assert ds.schema.dimensions[ds.schema.index("p")] == parse_unit("Pa")
        assert ds.schema.dimensions[ds.schema.index("Q")] == parse_unit("m^3/s")
        assert ds.label_dimension == parse_unit("Pa")

    def test_columns_within_ranges(self):
        ds = gen_bernoulli(500, seed=3)
        defaults = BernoulliRanges()
        for name in ds.schema.names:
            bounds = getattr(defaults, name)
            column = ds.column(name)
            assert column.min() >= bounds.low
            assert column.max() <= bounds.high


class TestPulsar:
    def test_aligned_rotator_emits_nothing(self):
        ds = gen_pulsar(4, seed=0, ranges=PulsarRanges(alpha=_point(0.0)))
        np.testing.assert_allclose(ds.y, 0.0, atol=1e-30)

    def test_period_and_inertia_identities(self):
        ds = gen_pulsar(200, seed=5)
        omega = ds.column("omega")
        np.testing.assert_allclose(ds.column("P") * omega, 2 * math.pi, rtol=1e-12)
        np.testing.assert_allclose(
            ds.column("I"), 0.4 * ds.column("m") * ds.column("r") ** 2, rtol=1e-12
        )
        np.testing.assert_allclose(
            ds.column("E"), 0.5 * ds.column("I") * omega**2, rtol=1e-12
        )

    def test_label_formula(self):
        ds = gen_pulsar(100, seed=9)
        r = ds.column("r")
        B = ds.column("B")
        omega = ds.column("omega")
        alpha = ds.column("alpha")
        expected = (
            -2.0 * math.pi * B**2 * r**6 * omega**4 * np.sin(alpha) ** 2
            / (3.0 * MU0 * LIGHT_SPEED**3)
        )
        np.testing.assert_allclose(ds.y, expected, rtol=1e-12)
        assert (ds.y <= 0.0).all()

    def test_label_rescaling_exponent(self):
        plain = gen_pulsar(50, seed=2)
        scaled = gen_pulsar(50, seed=2, label_scale_exp=24)
        np.testing.assert_allclose(scaled.y, plain.y / 1e24, rtol=1e-12)
        assert scaled.provenance["label_scale_exp"] == 24

    def test_magnetic_field_log_sampled(self):
        # log-uniform draws put roughly as much mass per decade
        ds = gen_pulsar(4000, seed=13)
        B = ds.column("B")
        low_decades = np.sum(B < 10**6.5)
        assert 0.4 < low_decades / len(B) < 0.6


class TestBinary:
    def test_hand_sign_case(self):
        ranges = BinaryRanges(
            m1=_point(2e30), m2=_point(2e30), v=_point(3e4), r=_point(1.5e11)
        )
        with pytest.warns(DegenerateClassBalanceWarning):
            ds = gen_binary(3, seed=0, ranges=ranges)
        kinetic = 0.5 * 1e30 * (3e4) ** 2
        potential = GRAVITATIONAL * 4e60 / 1.5e11
        assert kinetic < potential  # bound orbit
        np.testing.assert_array_equal(ds.y, 1.0)

    def test_unbound_case(self):
        ranges = BinaryRanges(
            m1=_point(2e30), m2=_point(2e30), v=_point(3e5), r=_point(1e13)
        )
        with pytest.warns(DegenerateClassBalanceWarning):
            ds = gen_binary(3, seed=0, ranges=ranges)
        np.testing.assert_array_equal(ds.y, 0.0)

    def test_label_matches_energy_sign(self):
        ds = gen_binary(400, seed=21)
        m1 = ds.column("m1")
        m2 = ds.column("m2")
        v = ds.column("v")
        r = ds.column("r")
        energy = 0.5 * (m1 * m2 / (m1 + m2)) * v**2 - GRAVITATIONAL * m1 * m2 / r
        np.testing.assert_array_equal(ds.y, (energy < 0.0).astype(float))

    def test_both_classes_present_at_defaults(self):
        ds = gen_binary(400, seed=21)
        counts = ds.provenance["class_counts"]
        assert counts["0"] > 0 and counts["1"] > 0
        assert counts["0"] + counts["1"] == 400

    def test_dead_band_recorded_without_changing_rows(self):
        wide = gen_binary(600, seed=4)
        banded = gen_binary(600, seed=4, dead_band=0.5)
        # band is provenance only: the sign rule still labels every row
        assert banded.X.shape == wide.X.shape
        assert np.array_equal(banded.y, wide.y)
        assert banded.provenance["dead_band"] == 0.5
        assert wide.provenance["dead_band"] == 0.0

    def test_dead_band_validated(self):
        with pytest.raises(InvalidRange):
            gen_binary(10, seed=0, dead_band=-1.0)
        with pytest.raises(InvalidRange):
            gen_binary(10, seed=0, dead_band=math.inf)

    def test_labels_are_binary(self):
        ds = gen_binary(100, seed=8)
        assert set(np.unique(ds.y)) <= {0.0, 1.0}


class TestNoise:
    def test_level_zero_identity(self):
        y = np.linspace(-5.0, 5.0, 11)
        out = add_noise(y, NoiseConfig(level=0.0, seed=42))
        np.testing.assert_array_equal(out, y)

    def test_relative_bound(self):
        rng = np.random.Generator(np.random.PCG64(0))
        y = rng.random(1000) * 100.0
        noisy = add_noise(y, NoiseConfig(level=0.3, seed=7))
        assert np.all(np.abs(noisy - y) <= 0.3 * np.abs(y) + 1e-12)

    def test_multiplier_mean_statistics(self):
        # U(-eta, eta) has variance eta^2/3; check the sample mean of the
        # multiplicative factor sits within 3 standard errors of 1
        y = np.full(20000, 10.0)
        eta = 0.5
        noisy = add_noise(y, NoiseConfig(level=eta, seed=99))
        factors = noisy / y
        standard_error = eta / math.sqrt(3.0 * len(y))
        assert abs(factors.mean() - 1.0) < 3.0 * standard_error
        assert factors.std() == pytest.approx(eta / math.sqrt(3.0), rel=0.05)

    def test_deterministic(self):
        y = np.arange(1.0, 50.0)
        a = add_noise(y, NoiseConfig(level=0.2, seed=5))
        b = add_noise(y, NoiseConfig(level=0.2, seed=5))
        assert np.array_equal(a, b)
        c = add_noise(y, NoiseConfig(level=0.2, seed=6))
        assert not np.array_equal(a, c)

    def test_zero_label_stays_zero(self):
        out = add_noise(np.zeros(5), NoiseConfig(level=0.9, seed=1))
        np.testing.assert_array_equal(out, 0.0)

    @pytest.mark.parametrize("level", [-0.1, 1.0, 1.5, math.nan])
    def test_invalid_levels(self, level):
        with pytest.raises(InvalidNoiseLevel):
            NoiseConfig(level=level, seed=0)
