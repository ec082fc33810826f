import numpy as np
import pytest

from osgood.field import Domain, GridField, dyadic_bmo_norm, lp_norm
from osgood.growth import GrowthFunction
from osgood.spaces import (
    embedding_gap_report,
    sharp_yudovich_norm,
    yudovich_norm,
)

rng = np.random.default_rng(99)
CONST = GrowthFunction.constant(1.0, p0=1.0)
LINEAR = GrowthFunction.power(1.0, p0=1.0)
QUADRATIC = GrowthFunction.power(2.0, p0=1.0)


def unit_field(data):
    return GridField(np.asarray(data, dtype=float), Domain.UNIT_TORUS)


def log_power_field(n, alpha=1.0):
    x = (np.arange(n) - n // 2) / n
    xx, yy = np.meshgrid(x, x, indexing="ij")
    rho = np.maximum(np.hypot(xx, yy), 0.5 / n)
    return unit_field(np.abs(np.log(rho)) ** (alpha + 1.0))


class TestYudovichNorm:
    def test_zero_field(self):
        rep = yudovich_norm(unit_field(np.zeros((16, 16))), CONST)
        assert rep.direct_value == rep.char_k == rep.char_rearr == 0.0

    def test_flat_growth_indicator(self):
        n = 32
        data = np.zeros((n, n))
        data.flat[: n * n // 4] = 2.0
        f = unit_field(data)
        rep = yudovich_norm(f, CONST, p0=1.0)
        lo = max(lp_norm(f, 1.0), lp_norm(f, np.inf))
        hi = lp_norm(f, 1.0) + lp_norm(f, np.inf)
        for v in (rep.direct_value, rep.char_k, rep.char_rearr):
            assert 0.3 * lo <= v <= 2.0 * hi

    def test_homogeneous(self):
        f = unit_field(rng.standard_normal((32, 32)))
        scaled = unit_field(3.5 * f.data)
        a = yudovich_norm(f, LINEAR)
        b = yudovich_norm(scaled, LINEAR)
        assert b.direct_value == pytest.approx(3.5 * a.direct_value, rel=1e-10)
        assert b.char_rearr == pytest.approx(3.5 * a.char_rearr, rel=1e-10)
        assert b.char_k == pytest.approx(3.5 * a.char_k, rel=1e-10)

    def test_monotone_in_growth(self):
        f = log_power_field(128)
        small = yudovich_norm(f, QUADRATIC)
        big = yudovich_norm(f, LINEAR)
        assert small.direct_value <= big.direct_value + 1e-12
        assert small.char_rearr <= big.char_rearr + 1e-12

    def test_bmo_prototype_stable_rearr(self):
        # f ~ |log rho| with linear growth: the rearrangement form plateaus
        vals = [
            yudovich_norm(log_power_field(n, alpha=0.0), LINEAR).char_rearr
            for n in (128, 256)
        ]
        assert vals[1] < 1.1 * vals[0]

    def test_table_forms_in_band(self):
        f = log_power_field(256)
        rep = yudovich_norm(f, LINEAR)
        for r in rep.ratios.values():
            assert 0.05 < r < 20.0


class TestSharpYudovichNorm:
    def test_constant_killed(self):
        rep = sharp_yudovich_norm(unit_field(np.full((16, 16), 9.0)), CONST)
        assert rep.direct_value == 0.0
        assert rep.char_rearr == 0.0

    def test_flat_growth_comparable_to_bmo(self):
        f = unit_field(rng.standard_normal((64, 64)))
        rep = sharp_yudovich_norm(f, CONST, p0=1.0)
        bmo = dyadic_bmo_norm(f)
        assert 0.1 * bmo <= rep.direct_value <= 4.0 * bmo

    def test_p0_free_rearrangement_form(self):
        f = log_power_field(64)
        vals = [
            sharp_yudovich_norm(f, LINEAR, p0=p0).char_rearr for p0 in (1.0, 2.0, 4.0)
        ]
        assert vals[0] == vals[1] == vals[2]

    def test_homogeneous(self):
        f = unit_field(rng.standard_normal((32, 32)))
        a = sharp_yudovich_norm(f, LINEAR)
        b = sharp_yudovich_norm(unit_field(2.0 * f.data), LINEAR)
        assert b.direct_value == pytest.approx(2.0 * a.direct_value, rel=1e-10)
        assert b.char_rearr == pytest.approx(2.0 * a.char_rearr, rel=1e-10)

    def test_separating_example(self):
        # log^2 singularity with linear growth: sharp side stays put while
        # the plain side climbs with resolution
        sharp_vals, plain_vals = [], []
        for n in (128, 256):
            f = log_power_field(n)
            sharp_vals.append(sharp_yudovich_norm(f, LINEAR).char_small_t)
            plain_vals.append(yudovich_norm(f, LINEAR).char_small_t)
        assert sharp_vals[1] < 1.08 * sharp_vals[0]
        assert plain_vals[1] > 1.08 * plain_vals[0]


class TestEmbeddingGap:
    def test_bounded_field_both_finite(self):
        f = unit_field(rng.standard_normal((64, 64)))
        rep = embedding_gap_report(f, CONST)
        assert np.isfinite(rep.ratio_sharp_over_plain)
        assert rep.plain.direct_value > 0
        assert rep.sharp.direct_value > 0
        assert rep.embedding_holds

    def test_table_consistency_across_resolution(self):
        # forms of the same norm keep stable ratios as the grid refines
        reps = {n: yudovich_norm(log_power_field(n), QUADRATIC) for n in (256, 512)}
        for key in reps[256].ratios:
            drift = reps[512].ratios[key] / reps[256].ratios[key]
            assert 0.75 < drift < 1.25
