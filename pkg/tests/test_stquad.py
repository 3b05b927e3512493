from fractions import Fraction as F

import pytest

from stpanto.errors import DegenerateRatio, HypothesisViolated, QOutOfRange
from stpanto.stnum import golden_pair, st_number
from stpanto.stseries import Series, st_antiderive, st_derive_at
from stpanto.stfun import PantographSpec, pantograph, pantograph_at
from stpanto.stquad import (
    QInterval,
    check_by_parts,
    check_ftc,
    pantograph_antiderivative_at,
    pantograph_antiderivative_series,
    pq_integral,
    st_integral,
    theta_antiderivative_at,
)

P32 = golden_pair(3, -2)

# (s, t) pairs hitting q = 1/2, 1/3 and -1/3
Q_GRID = [golden_pair(3, -2), golden_pair(4, -3), golden_pair(2, 3)]


def unit_interval(params):
    return QInterval(0, 1, params)


class TestStIntegral:
    def test_linear_closed_value(self):
        # geometric oracle: (1/2) sum (1/4)^n * (1/2) = 1/3, and FTC: x^2/{2}
        got = st_integral(Series.monomial(P32, 1, order=4), unit_interval(P32))
        assert abs(got - F(1, 3)) < F(1, 10 ** 12)
        assert st_antiderive(Series.monomial(P32, 1, order=2)).eval(1) == F(1, 3)

    def test_equal_endpoints(self):
        assert st_integral(lambda x: x * x, QInterval(F(1, 2), F(1, 2), P32)) == 0

    @pytest.mark.parametrize("k", range(9))
    def test_monomials(self, k):
        # brute geometric sum vs the antiderivative value 1/{k+1}
        got = st_integral(Series.monomial(P32, k, order=9), unit_interval(P32), tol=1e-18)
        assert abs(got - 1 / st_number(P32, k + 1)) < F(1, 10 ** 10)

    def test_callable_matches_series(self):
        f = Series(P32, [F(1), F(-2), F(0), F(3, 4)])
        a = st_integral(f, QInterval(F(1, 5), F(9, 10), P32))
        b = st_integral(lambda x: f.eval(x), QInterval(F(1, 5), F(9, 10), P32))
        assert abs(a - b) == 0

    def test_q_inside_unit_disk_accepted(self):
        for s, t in [(5, -4), (1, 2), (3, 4), (1, 6)]:
            QInterval(0, 1, golden_pair(s, t))  # |q| < 1 in all four

    def test_q_out_of_range(self):
        bad = golden_pair(-1, 6)  # phi = 2, phi' = -3: q = -3/2
        assert abs(bad.q) > 1
        with pytest.raises(QOutOfRange):
            QInterval(0, 1, bad)

    def test_negative_q_alternating(self):
        p = golden_pair(2, 3)  # phi = 3, phi' = -1, q = -1/3
        got = st_integral(Series.monomial(p, 1, order=3), unit_interval(p), tol=1e-18)
        assert abs(got - 1 / st_number(p, 2)) < F(1, 10 ** 12)

    def test_jackson_vs_antiderivative_endpoints(self):
        f = Series(P32, [F(2), F(-1), F(1, 3), F(5), F(0), F(1, 7)])
        interval = QInterval(F(1, 5), F(4, 5), P32)
        jackson = st_integral(f, interval, tol=1e-18)
        anti = st_antiderive(f)
        assert abs(jackson - (anti.eval(interval.b) - anti.eval(interval.a))) < F(1, 10 ** 10)

    def test_linearity_in_integrand(self):
        f = Series(P32, [F(1), F(-2), F(1, 3)])
        g = Series(P32, [F(0), F(1), F(2, 5)])
        interval = QInterval(0, 1, P32)
        lhs = st_integral(f * 3 + g * F(1, 2), interval, tol=1e-18)
        rhs = 3 * st_integral(f, interval, tol=1e-18) \
            + F(1, 2) * st_integral(g, interval, tol=1e-18)
        assert abs(lhs - rhs) < F(1, 10 ** 12)


class TestPqIntegral:
    def test_constant(self):
        got = pq_integral(lambda x: F(1), F(1), F(1), F(1, 2))
        assert abs(got - 1) < F(1, 10 ** 12)

    def test_zero_endpoint(self):
        assert pq_integral(lambda x: x, F(0), F(1), F(1, 2)) == 0

    def test_linear_vs_brute_force(self):
        # (1/2) sum (1/2)^k (1/2)^k = 2/3, 60-term oracle
        brute = sum(F(1, 2) ** k * F(1, 2) ** (k + 1) for k in range(60))
        got = pq_integral(lambda x: x, F(1), F(1), F(1, 2), tol=1e-18)
        assert abs(got - brute) < F(1, 10 ** 14)
        assert abs(got - F(2, 3)) < F(1, 10 ** 14)

    def test_small_ratio_branch(self):
        # |p/q| < 1 mirrors the |p/q| > 1 branch with arguments swapped
        a = pq_integral(lambda x: x * x, F(1), F(1, 2), F(1), tol=1e-18)
        b = pq_integral(lambda x: x * x, F(1), F(1), F(1, 2), tol=1e-18)
        assert abs(a - b) < F(1, 10 ** 12)

    def test_degenerate_ratio(self):
        with pytest.raises(DegenerateRatio):
            pq_integral(lambda x: x, F(1), F(1, 2), F(-1, 2))


class TestFundamentalTheorem:
    @pytest.mark.parametrize("n", range(9))
    def test_monomials(self, n):
        residual = check_ftc(Series.monomial(P32, n, order=9), unit_interval(P32), tol=1e-18)
        assert residual < F(1, 10 ** 12)

    def test_constant(self):
        assert check_ftc(Series.constant(P32, 4, order=3), unit_interval(P32)) == 0

    def test_random_polynomial_interior_interval(self):
        f = Series(P32, [F(1, 3), F(2), F(-1), F(0), F(5, 7), F(-2, 9), F(1)])
        residual = check_ftc(f, QInterval(F(1, 5), F(9, 10), P32), tol=1e-18)
        assert residual < F(1, 10 ** 10)

    def test_q_grid(self):
        for p in Q_GRID:
            f = Series(p, [1, F(1, 2), F(-1, 3), 2, F(3, 5), 0, F(1, 4), -1, F(2, 7)])
            residual = check_ftc(f, QInterval(0, 1, p), tol=1e-18)
            assert residual < F(1, 10 ** 10)


class TestByParts:
    def test_constant_degenerates_to_ftc(self):
        f = Series.constant(P32, 3, order=5)
        g = Series(P32, [F(1), F(2), F(0), F(1, 5), 0, 0])
        assert check_by_parts(f, g, unit_interval(P32), tol=1e-18) < F(1, 10 ** 12)
        assert check_by_parts(g, f, unit_interval(P32), tol=1e-18) < F(1, 10 ** 12)

    def test_x_times_x(self):
        f = Series.monomial(P32, 1, order=3)
        assert check_by_parts(f, f, unit_interval(P32), tol=1e-18) < F(1, 10 ** 12)

    def test_degree_five_pairs(self):
        f = Series(P32, [F(1, 2), F(-1), F(3), F(0), F(2, 3), F(1, 5)])
        g = Series(P32, [F(2), F(1, 3), F(-2, 5), F(1), F(0), F(-1, 2)])
        for p in Q_GRID:
            fp, gp = Series(p, f.coeffs), Series(p, g.coeffs)
            assert check_by_parts(fp, gp, QInterval(0, 1, p), tol=1e-18) < F(1, 10 ** 10)


class TestPantographAntiderivative:
    def test_b_zero_single_term(self):
        # (1/a) E(a, 0; x): matches the antiderivative series + its constant
        a, x = F(2), F(1, 4)
        spec = PantographSpec(a, 0, F(1, 2))
        got = pantograph_antiderivative_at(P32, spec, x, tol=1e-25)
        anti = st_antiderive(pantograph(P32, spec, 40))
        const = F(1, 2) / (a * F(1, 2))  # u/(a u + 0) = 1/a
        assert abs(got - (anti.eval(x) + const)) < F(1, 10 ** 18)

    def test_hypothesis_violations(self):
        with pytest.raises(HypothesisViolated):
            pantograph_antiderivative_at(P32, PantographSpec(0, 1, F(1, 2)), F(1, 2))
        with pytest.raises(HypothesisViolated):
            pantograph_antiderivative_at(P32, PantographSpec(1, 3, 2), F(1, 2))
        with pytest.raises(HypothesisViolated):
            pantograph_antiderivative_series(P32, PantographSpec(0, 1, F(1, 2)), 8)

    def test_series_cross_check_exact(self):
        # k-sum closed form vs coefficient integration, exact rationals,
        # including the u/(a u + b) constant
        spec = PantographSpec(F(1), F(1, 5), F(2))
        ksum = pantograph_antiderivative_series(P32, spec, 16)
        anti = st_antiderive(pantograph(P32, spec, 15))
        assert ksum.coeffs[1:] == anti.coeffs[1:]
        a, b, u = F(1), F(1, 5), F(2)
        assert ksum.coeffs[0] == u / (a * u + b)
        assert anti.coeffs[0] == 0

    def test_derivative_returns_pantograph(self):
        # numeric divided difference of the antiderivative vs E itself
        spec = PantographSpec(F(1), F(1, 5), F(2))
        pf = golden_pair(3, -2, backend="float")
        fspec = PantographSpec(1, 0.2, 2)
        for x in [0.1, 0.2, 0.3, 0.4, 0.5]:
            dval = st_derive_at(
                lambda y: pantograph_antiderivative_at(pf, fspec, y, tol=1e-22),
                x, pf)
            eval_ = pantograph_at(pf, fspec, x, tol=1e-22)
            assert abs(dval - eval_) < 1e-8 * max(1, abs(eval_))

    def test_ksum_and_power_series_routes_agree(self):
        # both formulas evaluate the same function where both converge
        pf = golden_pair(3, -2, backend="float")
        spec = PantographSpec(1, 0.3, 0.8)
        x = 0.4
        via_ksum = pantograph_antiderivative_at(pf, spec, x, tol=1e-20)
        anti = pantograph_antiderivative_series(pf, spec, 60)
        assert abs(via_ksum - anti.eval(x)) < 1e-10

    def test_beyond_convergence_radius(self):
        # at spec (1, 0.2, 2) with params (3,-2) the antiderivative series
        # has coefficient ratio -> 0.05, so radius 20
        from stpanto.errors import ConvergenceFailure
        pf = golden_pair(3, -2, backend="float")
        spec = PantographSpec(1, 0.2, 2)
        pantograph_antiderivative_at(pf, spec, 15.0)  # inside: converges
        with pytest.raises(ConvergenceFailure):
            pantograph_antiderivative_at(pf, spec, 25.0)


class TestThetaAntiderivative:
    def test_at_zero(self):
        assert theta_antiderivative_at(P32, 0) == 0

    def test_cross_implementation_equality(self):
        # Theta route vs pantograph machinery at spec (1, -q, q): the
        # boundary case |b/(a u)| = 1 summed in subtract-one form
        pf = golden_pair(3, -2, backend="float")
        x = 0.5
        theta_route = theta_antiderivative_at(pf, x, tol=1e-18)
        spec = PantographSpec(1, -pf.q, pf.q)
        ksum = pf.zero()
        for k in range(200):
            term = pantograph_at(pf, spec, pf.q ** k * x, tol=1e-18) - 1
            ksum += term
            if abs(term) < 1e-16:
                break
        assert abs(theta_route - ksum) < 1e-10

    def test_derivative_returns_theta(self):
        from stpanto.stfun import partial_theta
        pf = golden_pair(3, -2, backend="float")
        x = 0.4
        dval = st_derive_at(lambda y: theta_antiderivative_at(pf, y, tol=1e-20), x, pf)
        expected = partial_theta((1 - pf.q) * x, 1 / pf.phi, tol=1e-20)
        assert abs(dval - expected) < 1e-8

    def test_q_out_of_range(self):
        p = golden_pair(1, 1)  # q negative but |q| < 1: allowed
        theta_antiderivative_at(p, 0.1)
