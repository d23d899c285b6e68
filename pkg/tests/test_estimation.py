"""Probe schedules, the classifier, residual checks, FTA and necessity."""

import numpy as np
import pytest

from ratfun.estimation import (
    REASON_GROWTH,
    Verdict,
    classify,
    classify_estimate,
    fta_check,
    limit_probe,
    residual_zg,
    verify_necessity,
)
from ratfun.exact import Polynomial, joint_cauchy_bound, reduce
from ratfun.expressions import Const, Mul, jet_evaluator
from ratfun.parser import parse

from conftest import factored_expression


def evaluator(text: str):
    return jet_evaluator(parse(text))


def poly(*coeffs) -> Polynomial:
    return Polynomial.of(coeffs)


class TestLimitProbe:
    def test_pure_power_is_flat(self):
        est = limit_probe(evaluator("z^3"), 4.0, steps=4)
        for p in est.probes:
            assert abs(p.mean_zff - 3.0) < 1e-12
            assert p.spread < 1e-12

    def test_mobius_mean_approaches_divisor(self):
        # z*f'/f = -1 + sum of a/(z-a)-style tails, so mean -> -1 with
        # spread falling roughly like C/r
        est = limit_probe(evaluator("(z-1)/(z+1)^2"), 4.0, steps=4)
        means = [p.mean_zff for p in est.probes]
        spreads = [p.spread for p in est.probes]
        assert abs(means[-1] - (-1.0)) < 1e-6
        for a, b in zip(spreads, spreads[1:]):
            assert b < a
        assert spreads[0] / spreads[-1] > 4.0

    def test_exponential_spread_grows_linearly(self):
        est = limit_probe(evaluator("exp(z)"), 4.0, steps=4)
        for p in est.probes:
            assert abs(p.mean_zff) < 1e-9
            assert abs(p.spread - p.radius) < 0.01 * p.radius

    def test_mean_equals_winding_raw(self):
        est = limit_probe(evaluator("(z^2+1)/(z-2)"), 8.0, steps=3)
        for p in est.probes:
            assert p.mean_zff == p.winding.raw

    def test_radii_strictly_increasing(self):
        est = limit_probe(evaluator("z"), 1.0, growth=1.5, steps=5)
        radii = [p.radius for p in est.probes]
        assert all(b > a for a, b in zip(radii, radii[1:]))

    def test_parameter_validation(self):
        with pytest.raises(ValueError):
            limit_probe(evaluator("z"), -1.0)
        with pytest.raises(ValueError):
            limit_probe(evaluator("z"), 1.0, growth=1.0)
        with pytest.raises(ValueError):
            limit_probe(evaluator("z"), 1.0, steps=2)

    def test_contour_failure_propagates_with_radius(self):
        from ratfun.contour import ContourSingularityError

        # roots planted on the unit circle and all three perturbations of it
        radii = [1.0 * (1.0 + 0.013 * attempt) for attempt in range(4)]
        f = jet_evaluator(factored_expression(radii, []))
        with pytest.raises(ContourSingularityError) as err:
            limit_probe(f, 0.5, growth=2.0, steps=3)
        assert err.value.radius == pytest.approx(1.0)


class TestClassify:
    def test_rational_example(self):
        f = reduce(poly(1, 0, 1), poly(-2, 1))
        r0 = 2.0 * joint_cauchy_bound(f)
        est = limit_probe(evaluator("(z^2+1)/(z-2)"), r0)
        assert classify(est) == Verdict.rational(1)

    def test_exponential_is_growth(self):
        est = limit_probe(evaluator("exp(z)"), 4.0)
        assert classify(est) == Verdict.not_rational(REASON_GROWTH)

    def test_constant_scaling_is_rational(self):
        est = limit_probe(evaluator("2*z"), 4.0)
        assert classify(est) == Verdict.rational(1)

    def test_constant_function_is_rational_zero(self):
        est = limit_probe(evaluator("z^0"), 4.0)
        assert classify(est) == Verdict.rational(0)

    def test_needs_three_probes(self):
        est = limit_probe(evaluator("z"), 4.0, steps=3)
        with pytest.raises(ValueError):
            classify(type(est)(est.probes[:2], None, est.verdict))

    def test_verdict_invariant_under_constant_scaling(self, small_corpus):
        # z*(cf)'/(cf) is identically z*f'/f
        for fn in small_corpus[:12]:
            r0 = 2.0 * fn.joint_bound
            plain = classify(limit_probe(jet_evaluator(fn.expr), r0))
            scaled_expr = Mul(Const.from_float_complex(-2.5 + 1.5j), fn.expr)
            scaled = classify(limit_probe(jet_evaluator(scaled_expr), r0))
            assert plain == scaled

    def test_classify_estimate_attaches_d_hat(self):
        est = limit_probe(evaluator("z^2"), 4.0)
        out = classify_estimate(est)
        assert out.d_hat == 2
        assert out.verdict == Verdict.rational(2)

    def test_inconclusive_on_plateau(self):
        # exp(z/64) at radii 4..16: the alpha*z spread term is still O(1),
        # neither decaying like C/r nor growing like 1.5x per doubling
        est = limit_probe(evaluator("(z-1)*exp(z/64)"), 4.0, steps=3)
        verdict = classify(est)
        assert verdict.kind == "inconclusive"
        assert verdict.reason


class TestResidualZg:
    def test_true_zero_pole_lists_vanish(self):
        trace = residual_zg(
            evaluator("(z-1)/(z+1)"), [1.0], [-1.0], [4.0, 8.0, 16.0]
        )
        assert [r for r, _ in trace] == [4.0, 8.0, 16.0]
        for _, value in trace:
            assert value < 1e-10

    def test_exponential_factor_leaves_z(self):
        trace = residual_zg(evaluator("(z-1)*exp(z)"), [1.0], [], [4.0, 8.0])
        for r, value in trace:
            assert abs(value - r) < 1e-9 * r

    def test_wrong_zero_list_leaves_defect(self):
        # oracle: the defect is z*(1/(z-1) - 1/(z-2)), i.e. -z/((z-1)(z-2))
        def defect_max(r, n=256):
            z = r * np.exp(2j * np.pi * np.arange(n) / n)
            return float(np.max(np.abs(-z / ((z - 1) * (z - 2)))))

        trace = residual_zg(evaluator("(z-1)/(z+1)"), [2.0], [-1.0], [4.0])
        assert trace[0][1] == pytest.approx(defect_max(4.0), rel=1e-9)
        assert trace[0][1] > 0.1

    def test_outside_points_rejected(self):
        with pytest.raises(ValueError):
            residual_zg(evaluator("z"), [5.0], [], [4.0])


class TestFta:
    def test_quartic(self):
        check = fta_check(poly(-1, 0, 0, 0, 1))
        assert (check.count, check.degree, check.passed) == (4, 4, True)

    def test_constant(self):
        check = fta_check(poly(7))
        assert (check.count, check.degree, check.passed) == (0, 0, True)

    def test_multiplicity_counted(self):
        p = poly(-1, 1) * poly(-1, 1) * poly(-1, 1) * poly(2, 1)
        check = fta_check(p)
        assert check.count == 4 and check.passed

    def test_zero_polynomial_rejected(self):
        with pytest.raises(ValueError):
            fta_check(Polynomial.zero())


class TestVerifyNecessity:
    def test_linear_sup_error_scales_like_one_over_r(self):
        # by hand: z/(z+1) - 1 = -1/(z+1); sup over the circle is 1/(r-1)
        f = reduce(poly(1, 1), poly(1))
        report = verify_necessity(f, [10.0, 100.0])
        assert report.divisor == 1
        assert report.sup_error_exact[0] == pytest.approx(1.0 / 9.0, rel=1e-9)
        assert report.sup_error_exact[1] == pytest.approx(1.0 / 99.0, rel=1e-9)
        assert report.pointwise_ok
        # the angle-average nails d far faster than the sup does
        assert report.mean_error_exact[0] < 1e-12

    def test_double_pole_approaches_minus_two(self):
        f = reduce(poly(1), poly(0, 0, 1))
        report = verify_necessity(f, [10.0, 100.0])
        assert report.divisor == -2
        assert report.sup_error_jet[-1] < 1e-12  # z*f'/f is exactly -2

    def test_constant_is_exactly_zero(self):
        f = reduce(poly(5), poly(1))
        report = verify_necessity(f, [3.0, 30.0])
        assert report.divisor == 0
        assert max(report.sup_error_exact) == 0.0
        assert max(report.sup_error_jet) < 1e-15

    def test_radius_inside_bound_rejected(self):
        f = reduce(poly(1, 1), poly(1))
        with pytest.raises(ValueError):
            verify_necessity(f, [1.5])

    def test_corpus_paths_agree_and_decay(self, small_corpus):
        # C/r bound with C = 2*(sum |zeros| + sum |poles|), checked on the
        # factored corpus where the moduli are known by construction
        for fn in small_corpus[:8]:
            if not fn.zeros and not fn.poles:
                continue
            base = max(2.0 * fn.max_modulus, fn.joint_bound * 1.01)
            radii = [base * 2.0, base * 4.0]
            report = verify_necessity(fn.rf, radii, nodes=128)
            assert report.pointwise_ok
            bound_c = 2.0 * fn.sum_moduli
            for i, r in enumerate(report.radii):
                assert report.sup_error_jet[i] <= bound_c / r + 1e-12
                assert report.sup_error_exact[i] <= bound_c / r + 1e-12


class TestVerdictType:
    def test_exactly_one_variant(self):
        with pytest.raises(ValueError):
            Verdict("rational")
        with pytest.raises(ValueError):
            Verdict("not_rational", reason="because")
        with pytest.raises(ValueError):
            Verdict("inconclusive")
        with pytest.raises(ValueError):
            Verdict("rational", d=1, reason="extra")
