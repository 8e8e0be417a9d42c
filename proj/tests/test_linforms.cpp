#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "oracles.hpp"

#include <fibclose/linforms.hpp>
#include <fibclose/search.hpp>

using namespace fibclose;

namespace
{

const long B = 256;

Interval dec(const char *s)
{
    return Interval::from_decimal(s, B);
}

bool near(const Interval &x, const Interval &y)
{
    // enclosures of the same number must overlap
    return x.lo_q() <= y.hi_q() && y.lo_q() <= x.hi_q();
}

mpz_class Z(const char *s)
{
    return mpz_class(s);
}

} // namespace

TEST_CASE("heights of rationals")
{
    CHECK(near(log_height_rational(2, 1), log(Interval::from_int(2, B))));
    CHECK(log_height_rational(1, 1).contains_zero());
    CHECK(near(log_height_rational(-7, 3), log(Interval::from_int(7, B))));
    CHECK_THROWS_AS((void)log_height_rational(2, 4), std::invalid_argument);
    CHECK_THROWS_AS((void)log_height_rational(1, 0), std::invalid_argument);
}

TEST_CASE("heights of alpha and sqrt5")
{
    const Interval la = const_eval(Constant::log_alpha(), {});
    CHECK(near(log_height_named(NamedAlgebraic::Alpha), la / Interval::from_int(2, B)));
    CHECK(near(log_height_named(NamedAlgebraic::Sqrt5), const_eval(Constant::log_sqrt5(), {})));
    // the general formula with conjugates alpha, beta and leading coefficient 1
    const Interval s5 = const_eval(Constant::sqrt5(), {});
    const Interval one = Interval::from_int(1, B);
    const Interval two = Interval::from_int(2, B);
    const Interval alpha = (one + s5) / two;
    const Interval beta = (one - s5) / two;
    CHECK(near(log_height(1, {alpha, beta}), log_height_named(NamedAlgebraic::Alpha)));
    CHECK(near(log_height(1, {s5, -s5}), log_height_named(NamedAlgebraic::Sqrt5)));
    // 2 as a root of x - 2
    CHECK(near(log_height(1, {two}), log_height_rational(2, 1)));
}

TEST_CASE("height bound for the third number")
{
    const Interval l4s5 = log(Interval::from_int(4, B) * sqrt(Interval::from_int(5, B)));
    const Interval la = const_eval(Constant::log_alpha(), {});
    const Gamma3Height z = height_gamma3_upper(0, 0);
    CHECK(near(z.h_upper, l4s5));
    CHECK(near(z.A3, Interval::from_int(5, B)));
    const Gamma3Height two = height_gamma3_upper(2, 2);
    CHECK(near(two.A3, Interval::from_int(5, B) + Interval::from_int(4, B) * la));
    const Gamma3Height big = height_gamma3_upper(157, 157);
    CHECK(big.A3.mid() == doctest::Approx(156.1).epsilon(1e-3));
    // A3 dominates twice the height bound
    CHECK(certainly_less(Interval::from_int(2, B) * big.h_upper, big.A3));
}

TEST_CASE("Matveev exponent")
{
    MatveevInput one{1, 1, 1, {dec("0.16")}};
    const Interval e = matveev_exponent(one);
    CHECK(e.lo_q() <= 181440);
    CHECK(181440 <= e.hi_q());
    CHECK(e.width_q() < mpq_class(1, 1000000));

    MatveevInput bad{1, 1, 1, {dec("0.1")}};
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    MatveevInput wrong_len{2, 1, 1, {dec("1")}};
    CHECK_THROWS_AS(wrong_len.validate(), std::invalid_argument);

    // (1 + log B) grows with B
    MatveevInput three{3, 2, 1000, {dec("1.4"), dec("0.5"), dec("1.7")}};
    MatveevInput three_big = three;
    three_big.B = 100000;
    CHECK(certainly_less(matveev_exponent(three), matveev_exponent(three_big)));
    CHECK(near(matveev_prefactor(three), matveev_prefactor(three_big)));
}

TEST_CASE("collapsed constants stay below the rounded values")
{
    const Interval c1 = collapsed_constant_lambda1();
    const Interval c2 = collapsed_constant_lambda2();
    CHECK(certainly_less(c1, dec("1.4e12")));
    CHECK(certainly_less(c2, dec("2.31e12")));
    CHECK(c1.mid() == doctest::Approx(1.35764e12).epsilon(1e-5));
    CHECK(c2.mid() == doctest::Approx(2.30798e12).epsilon(1e-5));
}

TEST_CASE("1 + log n < 2 log n from n = 3 on")
{
    // equivalent to log n > 1; checked directly on a range and at the start
    const Interval one = Interval::from_int(1, 64);
    const Interval two = Interval::from_int(2, 64);
    for (long n = 3; n <= 1000000; n += (n < 10000 ? 1 : 997)) {
        const Interval ln = log(Interval::from_int(n, 64));
        REQUIRE(certainly_less(one + ln, two * ln));
    }
    CHECK_FALSE(certainly_less(one + log(Interval::from_int(2, 64)), two * log(Interval::from_int(2, 64))));
}

TEST_CASE("the a-window")
{
    const ARange r42 = a_range_for_n(42);
    CHECK(r42.a_lo <= 28);
    CHECK(28 <= r42.a_hi);
    const ARange r11 = a_range_for_n(11);
    CHECK(r11.a_lo <= 7);
    CHECK(8 <= r11.a_hi);
    const ARange r4 = a_range_for_n(4);
    CHECK(r4.a_lo == 1);
    CHECK(r4.a_hi == 3);
    CHECK_THROWS_AS((void)a_range_for_n(3), std::invalid_argument);
    // the window is consistent with every solution having n >= 4
    for (const Solution &s : enumerate(60, 1)) {
        if (s.n < 4) {
            continue;
        }
        const ARange r = a_range_for_n(s.n);
        REQUIRE(r.a_lo <= s.a);
        REQUIRE(s.a <= r.a_hi);
    }
    // n_max_for_a inverts the lower end of the window
    for (long a = 1; a <= 400; ++a) {
        const mpz_class n = n_max_for_a(a);
        REQUIRE(a_range_for_n(std::max<mpz_class>(n, 4)).a_lo <= a);
        REQUIRE(a_range_for_n(n + 1).a_lo > a);
    }
}

TEST_CASE("threshold search")
{
    CHECK(solve_decreasing_threshold([](const mpz_class &n) { return n * n >= 100; }) == 10);
    CHECK(solve_decreasing_threshold([](const mpz_class &n) { return n >= Z("123456789012345678901"); }) ==
          Z("123456789012345678901"));
    CHECK(solve_decreasing_threshold([](const mpz_class &) { return true; }, 7) == 7);
    CHECK_THROWS_AS((void)solve_decreasing_threshold([](const mpz_class &) { return false; }, 1, 1000),
                    std::runtime_error);
}

TEST_CASE("first bounds with the rounded constants")
{
    const BoundReport r = derive_first_bounds(BoundRoute::Rounded);
    for (const AuditEntry &e : r.audit) {
        CAPTURE(e.claim);
        CHECK(e.holds);
    }
    CHECK(r.combined.a_max < Z("90000000000000000000000000000"));
    CHECK(r.combined.n_max < Z("187000000000000000000000000000"));
    CHECK(r.cases12.n_max == Z("128073049156043545648345445261"));
    // the case-3 bound with the rounded 2.4e12 lands just above 5.53e14
    CHECK(r.case3.n_max == Z("553742191202233"));
    CHECK(r.case3.n_max > Z("553000000000000"));
    CHECK(r.case3.n_max < Z("554000000000000"));
}

TEST_CASE("first bounds with the unrounded constants")
{
    const BoundReport t = derive_first_bounds(BoundRoute::Tight);
    CHECK(t.audit_ok());
    CHECK(t.case3.n_max <= Z("553000000000000"));
    CHECK(t.case3.a_max <= Z("384000000000000"));
    CHECK(t.cases12_coeff.hi_q() <= parse_decimal("6.86e24"));
    const BoundReport p = derive_first_bounds(BoundRoute::Rounded);
    CHECK(t.combined.n_max <= p.combined.n_max);
    CHECK(t.combined.a_max <= p.combined.a_max);
}

TEST_CASE("a-bound from the gap sum")
{
    const mpz_class a = a_bound_from_gaps(BoundRoute::Rounded, 312);
    CHECK(a == Z("23861744267921138"));
    CHECK(a_bound_from_gaps(BoundRoute::Tight, 312) <= a);
    CHECK(a_bound_from_gaps(BoundRoute::Rounded, 100) < a);
}

TEST_CASE("the two linear forms never vanish")
{
    CHECK(lambda1_coincidences(4, 80) == 0);
    CHECK(lambda2_coincidences(200) == 0);
}
