#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "oracles.hpp"

#include <fibclose/fibseq.hpp>
#include <fibclose/quadfield.hpp>
#include <fibclose/realint.hpp>

#include <random>

using namespace fibclose;

namespace
{

Precision bits(long b, long b_max = 65536)
{
    return Precision{b, b_max};
}

bool inside(const Interval &x, const mpq_class &lo, const mpq_class &hi)
{
    return lo <= x.lo_q() && x.hi_q() <= hi;
}

bool overlaps(const Interval &x, const oracle::Bracket &b)
{
    return x.lo_q() <= b.hi && b.lo <= x.hi_q();
}

} // namespace

TEST_CASE("named constants at 64 bits")
{
    const Interval r = const_eval(Constant::log_alpha_over_log2(), bits(64));
    CHECK(inside(r, mpq_class(6942, 10000), mpq_class(6943, 10000)));
    const Interval g = const_eval(Constant::gamma(), bits(64));
    CHECK(inside(g, mpq_class(14404, 10000), mpq_class(14405, 10000)));
    const Interval z = const_eval(Constant::mu_psi(1, 1), bits(64));
    CHECK(z.contains_zero());
    CHECK(z.width_q() <= mpq_class(1, mpz_class(1) << 60));
}

TEST_CASE("constants agree with series oracles")
{
    const Precision p = bits(512);
    const oracle::Bracket l2 = oracle::log2();
    const oracle::Bracket la = oracle::log_alpha();
    const oracle::Bracket ls = oracle::log_sqrt5();
    CHECK(overlaps(const_eval(Constant::log2(), p), l2));
    CHECK(overlaps(const_eval(Constant::log_alpha(), p), la));
    CHECK(overlaps(const_eval(Constant::log_sqrt5(), p), ls));
    CHECK(overlaps(const_eval(Constant::gamma(), p), oracle::divide(l2, la)));
    CHECK(overlaps(const_eval(Constant::mu_sqrt5(), p), oracle::divide(ls, la)));
    const mpq_class tiny(1, mpz_class(1) << 480);
    CHECK(const_eval(Constant::gamma(), p).width_q() < tiny);
    CHECK(l2.hi - l2.lo < tiny);
    CHECK(la.hi - la.lo < tiny);
}

TEST_CASE("refinement only shrinks enclosures")
{
    const std::vector<Constant> all{
        Constant::log2(),         Constant::log_alpha(),           Constant::log_sqrt5(),
        Constant::sqrt5(),        Constant::gamma(),               Constant::log_alpha_over_log2(),
        Constant::mu_sqrt5(),     Constant::mu_psi(2, 2),          Constant::mu_psi(8, 7),
        Constant::alpha_pow(10),  Constant::alpha_pow(-5),
    };
    for (const Constant &c : all) {
        CAPTURE(c.name());
        const Interval a = const_eval(c, bits(128));
        const Interval b = const_eval(c, bits(256));
        const Interval d = const_eval(c, bits(512));
        CHECK(a.contains(b));
        CHECK(b.contains(d));
        CHECK(d.width_q() <= b.width_q());
    }
}

TEST_CASE("exact field elements are enclosed")
{
    const Interval a10 = to_interval(QuadElement::alpha().pow(10), 128);
    CHECK(inside(a10, mpq_class(12299, 100), mpq_class(12300, 100)));
    const Interval s5 = to_interval(QuadElement::sqrt5(), 200);
    CHECK(s5.contains(const_eval(Constant::sqrt5(), bits(400))));
    // F_201 - F_200 alpha = beta^200: heavy cancellation
    const QuadElement e(fib(201), -fib(200));
    const Interval v = to_interval(e, 64);
    CHECK(v.positive());
    const Interval b200 = const_eval(Constant::alpha_pow(-200), {});
    CHECK(v.lo_q() <= b200.hi_q());
    CHECK(b200.lo_q() <= v.hi_q());
    CHECK(v.width_q() < b200.lo_q() / (mpz_class(1) << 50));
}

TEST_CASE("decide_less")
{
    CHECK(decide_less(producer(Constant::log_alpha_over_log2()), producer(mpq_class(6943, 10000)), {}));
    CHECK_FALSE(decide_less(producer(mpq_class(6943, 10000)), producer(Constant::log_alpha_over_log2()), {}));
    const Producer lo = [](const Precision &ctx) {
        return Interval::from_decimal("0.38", ctx.bits) * const_eval(Constant::alpha_pow(550), ctx);
    };
    CHECK(decide_less(lo, producer(mpq_class(fib(550))), {}));
    CHECK_THROWS_AS((void)decide_less(producer(Constant::alpha_pow(1)), producer(Constant::alpha_pow(1)),
                                      bits(64, 1024)),
                    PrecisionExhausted);
    CHECK(decide_sign(producer(Constant::mu_psi(2, 2)), {}) != 0);
}

TEST_CASE("distance to the nearest integer")
{
    const auto near = dist_nearest_int(Interval::hull(mpq_class(32499, 10000), mpq_class(32501, 10000), 64));
    CHECK_FALSE(near.ambiguous);
    CHECK(inside(near.value, mpq_class(2498999, 10000000), mpq_class(2501001, 10000000)));

    const auto amb = dist_nearest_int(Interval::hull(mpq_class(69999, 10000), mpq_class(70001, 10000), 64));
    CHECK(amb.ambiguous);
    CHECK(amb.value.lo_q() <= 0);

    CHECK_THROWS_AS((void)dist_nearest_int(Interval::hull(1, 2, 64)), std::domain_error);

    // mu q for the denominator used by the first reduction
    const mpz_class q("14385737929335598761951193326873");
    const Interval muq = const_eval(Constant::mu_sqrt5(), bits(256)) * q;
    const auto d = dist_nearest_int(muq);
    CHECK_FALSE(d.ambiguous);
    CHECK(d.value.positive());
}

TEST_CASE("exponential inequalities on random samples")
{
    std::mt19937_64 rng(5);
    const long b = 128;
    int checked = 0;
    for (int i = 0; i < 1000; ++i) {
        // x in (0, 5)
        const mpq_class x(mpz_class(std::uniform_int_distribution<unsigned long>(1, 5UL << 40)(rng)),
                          mpz_class(1) << 40);
        if (x >= 5) {
            continue;
        }
        const Interval X = Interval::from_mpq(x, b);
        REQUIRE(certainly_less(X, exp(X) - Interval::from_int(1, b)));
        ++checked;
    }
    CHECK(checked >= 999);
    checked = 0;
    for (int i = 0; i < 1000; ++i) {
        // x in (-0.69, 0), where |e^x - 1| < 1/2
        const mpq_class x(-mpz_class(std::uniform_int_distribution<unsigned long>(1, 69UL << 32)(rng)),
                          mpz_class(100) << 32);
        const Interval X = Interval::from_mpq(x, b);
        const Interval E = abs(exp(X) - Interval::from_int(1, b));
        REQUIRE(certainly_less(E, Interval::from_mpq(mpq_class(1, 2), b)));
        REQUIRE(certainly_less(abs(X), Interval::from_int(2, b) * E));
        ++checked;
    }
    CHECK(checked == 1000);
}

TEST_CASE("decimal parsing is exact")
{
    CHECK(parse_decimal("3.93e15") == mpq_class(mpz_class("3930000000000000")));
    CHECK(parse_decimal("-0.38") == mpq_class(-19, 50));
    CHECK(parse_decimal("9e28") == mpq_class(mpz_class("90000000000000000000000000000")));
    CHECK(parse_decimal("42") == 42);
    CHECK_THROWS_AS((void)parse_decimal("4.2.1"), std::invalid_argument);
    CHECK_THROWS_AS((void)parse_decimal(""), std::invalid_argument);
    const Interval x = Interval::from_decimal("0.38", 64);
    CHECK(inside(x, mpq_class(379999, 1000000), mpq_class(380001, 1000000)));
    CHECK(x.lo_q() <= mpq_class(19, 50));
    CHECK(mpq_class(19, 50) <= x.hi_q());
}

TEST_CASE("constant names round-trip")
{
    for (const std::string name : {"log2", "logAlpha", "gamma", "mu_psi(3,4)", "alphaPow(10)"}) {
        CHECK(Constant::parse(name).name() == name);
    }
    CHECK(Constant::parse("log2/logAlpha") == Constant::gamma());
    CHECK_THROWS((void)Constant::parse("pi"));
}
