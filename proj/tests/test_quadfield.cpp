#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "oracles.hpp"

#include <fibclose/quadfield.hpp>

#include <random>
#include <set>

using fibclose::QuadElement;

namespace
{

const QuadElement alpha = QuadElement::alpha();
const QuadElement beta = QuadElement::beta();

} // namespace

TEST_CASE("construction from coordinates")
{
    CHECK(fibclose::qf_make(0, 1) == alpha);
    CHECK(fibclose::qf_make(-1, 2) == QuadElement::sqrt5());
    CHECK(fibclose::qf_make(1, -1) == beta);
    CHECK(fibclose::qf_make(mpq_class(2, 4), 0).x() == mpq_class(1, 2));
}

TEST_CASE("multiplication uses alpha^2 = alpha + 1")
{
    CHECK(alpha * alpha == QuadElement(1, 1));
    CHECK(alpha * beta == QuadElement(-1, 0));
    CHECK(QuadElement::sqrt5() * QuadElement::sqrt5() == QuadElement(5, 0));
}

TEST_CASE("conjugation")
{
    CHECK(alpha.conj() == beta);
    CHECK(QuadElement::sqrt5().conj() == -QuadElement::sqrt5());
    CHECK(QuadElement(mpq_class(7, 3), 0).conj() == QuadElement(mpq_class(7, 3), 0));
    CHECK(alpha.norm() == -1);
}

TEST_CASE("powers")
{
    CHECK(alpha.pow(10) == QuadElement(34, 55));
    CHECK(alpha.pow(0) == QuadElement::one());
    CHECK(alpha.pow(-1) == QuadElement(-1, 1));
    CHECK(alpha.pow(-7) * alpha.pow(7) == QuadElement::one());
    CHECK_THROWS_AS((void)QuadElement().inverse(), std::domain_error);
}

TEST_CASE("sign is exact")
{
    CHECK(alpha.sign() == 1);
    CHECK(beta.sign() == -1);
    CHECK(QuadElement().sign() == 0);
    // F_{n+1} - F_n alpha = beta^n, tiny with alternating sign
    const auto F = oracle::fib_upto(200);
    for (long n = 1; n < 200; ++n) {
        const QuadElement e(F[n + 1], -F[n]);
        CHECK(e.sign() == (n % 2 == 0 ? 1 : -1));
    }
}

TEST_CASE("Binet: alpha^n = F_{n-1} + F_n alpha for n <= 500")
{
    const auto F = oracle::fib_upto(500);
    QuadElement p = QuadElement::one();
    for (std::size_t n = 1; n <= 500; ++n) {
        p *= alpha;
        REQUIRE(p == QuadElement(F[n - 1], F[n]));
    }
    CHECK(alpha.pow(500) == p);
}

TEST_CASE("(alpha^n - beta^n)/(alpha - beta) is the rational F_n")
{
    const auto F = oracle::fib_upto(100);
    for (long n = 1; n <= 100; ++n) {
        const QuadElement v = (alpha.pow(n) - beta.pow(n)) / (alpha - beta);
        REQUIRE(v.is_rational());
        REQUIRE(v.x() == F[n]);
    }
}

TEST_CASE("psi values")
{
    CHECK(fibclose::psi(1, 1) == QuadElement::one());
    CHECK(fibclose::psi(3, 0) == QuadElement::one());
    CHECK(fibclose::psi(4, 3) == alpha);
    CHECK(fibclose::psi(5, 1) == alpha.pow(2) / QuadElement(2, 0));
    CHECK(fibclose::psi(8, 7) == alpha.pow(3) / QuadElement(2, 0));
}

TEST_CASE("power-of-two times power-of-alpha decomposition")
{
    using D = fibclose::Pow2AlphaDecomposition;
    CHECK(fibclose::decompose_pow2_alpha(fibclose::psi(5, 1)) == D{2, 1});
    CHECK(fibclose::decompose_pow2_alpha(fibclose::psi(3, 0)) == D{0, 0});
    CHECK_FALSE(fibclose::decompose_pow2_alpha(fibclose::psi(2, 1), 20, 20).has_value());
    CHECK(fibclose::decompose_pow2_alpha(alpha.pow(-9) * QuadElement(mpq_class(1, 8), 0)) == D{-9, 3});
    CHECK(fibclose::decompose_pow2_alpha(QuadElement(4, 0)) == D{0, -2});
    CHECK_FALSE(fibclose::decompose_pow2_alpha(QuadElement(3, 0)).has_value());
    CHECK_FALSE(fibclose::decompose_pow2_alpha(QuadElement()).has_value());

    // independent check by scanning every candidate exponent pair
    const auto scan = [](const QuadElement &e, long radius) -> std::optional<D> {
        for (long s = -radius; s <= radius; ++s) {
            const QuadElement two = s >= 0 ? QuadElement(mpq_class(mpz_class(1) << s), 0)
                                           : QuadElement(mpq_class(1, mpz_class(1) << -s), 0);
            for (long r = -radius; r <= radius; ++r) {
                if (e * two == alpha.pow(r)) {
                    return D{r, s};
                }
            }
        }
        return std::nullopt;
    };
    for (long t = 0; t <= 9; ++t) {
        for (long s = 0; s <= 9; ++s) {
            CHECK(fibclose::decompose_pow2_alpha(fibclose::psi(t, s), 20, 20) == scan(fibclose::psi(t, s), 20));
        }
    }
}

TEST_CASE("the nine degenerate pairs decompose as listed")
{
    using D = fibclose::Pow2AlphaDecomposition;
    const std::vector<std::tuple<long, long, D>> want{
        {0, 3, {0, 0}}, {1, 1, {0, 0}}, {3, 0, {0, 0}}, {1, 5, {2, 1}}, {5, 1, {2, 1}},
        {3, 4, {1, 0}}, {4, 3, {1, 0}}, {7, 8, {3, 1}}, {8, 7, {3, 1}},
    };
    for (const auto &[t, s, d] : want) {
        CHECK(fibclose::decompose_pow2_alpha(fibclose::psi(t, s)) == d);
    }
}

TEST_CASE("random non-degenerate pairs have no decomposition")
{
    const std::set<std::pair<long, long>> special{{0, 3}, {1, 1}, {1, 5}, {3, 0}, {3, 4},
                                                  {4, 3}, {5, 1}, {7, 8}, {8, 7}};
    std::mt19937 rng(20240611);
    std::uniform_int_distribution<long> gap(0, 157);
    int tested = 0;
    while (tested < 200) {
        const long t = gap(rng);
        const long s = gap(rng);
        if (special.count({t, s}) != 0) {
            continue;
        }
        ++tested;
        CHECK_FALSE(fibclose::decompose_pow2_alpha(fibclose::psi(t, s)).has_value());
    }
}
