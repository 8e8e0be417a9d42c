#include <fibclose/fibseq.hpp>

#include <fibclose/quadfield.hpp>

#include <stdexcept>

namespace fibclose
{

FibTable::FibTable(std::size_t max_index)
{
    m_values.reserve(max_index + 1);
    m_values.emplace_back(0);
    if (max_index >= 1) {
        m_values.emplace_back(1);
    }
    for (std::size_t k = 2; k <= max_index; ++k) {
        m_values.emplace_back(m_values[k - 1] + m_values[k - 2]);
    }
}

const FibTable &fib_table()
{
    static const FibTable table(600);
    return table;
}

std::pair<mpz_class, mpz_class> fib_pair(unsigned long n)
{
    // F_{2k} = F_k (2 F_{k+1} - F_k), F_{2k+1} = F_k^2 + F_{k+1}^2
    mpz_class a = 0;
    mpz_class b = 1;
    for (int bit = 63; bit >= 0; --bit) {
        const mpz_class c = a * (2 * b - a);
        const mpz_class d = a * a + b * b;
        if (((n >> bit) & 1UL) != 0) {
            a = d;
            b = c + d;
        } else {
            a = c;
            b = d;
        }
    }
    return {a, b};
}

mpz_class fib(unsigned long n)
{
    const FibTable &table = fib_table();
    if (n <= table.max_index()) {
        return table[n];
    }
    return fib_pair(n).first;
}

namespace
{

// c * alpha^k, with alpha^0 = 1 kept exact.
Producer scaled_alpha_pow(const mpq_class &c, long k)
{
    return [c, k](const Precision &p) {
        const Interval a = to_interval(QuadElement::alpha().pow(k), p.bits);
        return Interval::from_mpq(c, p.bits) * a;
    };
}

} // namespace

GrowthReport check_growth_bounds(unsigned long n_max, const Precision &ctx)
{
    if (n_max < 2) {
        throw std::invalid_argument("check_growth_bounds: n_max must be at least 2");
    }
    GrowthReport report;
    report.n_max = n_max;
    const mpq_class lower_c("19/50");
    const mpq_class upper_c("12/25");

    // a <= b where a or b is c*alpha^k. alpha^k is irrational unless k = 0,
    // in which case the comparison is exact.
    auto leq = [&](const Producer &a, const Producer &b, std::optional<std::pair<mpq_class, mpq_class>> exact) {
        ++report.comparisons;
        if (exact) {
            return exact->first <= exact->second;
        }
        return decide_less(a, b, ctx);
    };

    for (unsigned long n = 1; n <= n_max; ++n) {
        const mpq_class fn{fib(n)};
        const auto ln = static_cast<long>(n);
        const Producer f = producer(fn);

        // alpha^{n-2} <= F_n
        std::optional<std::pair<mpq_class, mpq_class>> exact;
        if (ln - 2 == 0) {
            exact.emplace(mpq_class(1), fn);
        }
        if (!leq(scaled_alpha_pow(1, ln - 2), f, exact)) {
            report.violation = GrowthViolation{n, "alpha^(n-2) <= F_n"};
            return report;
        }
        exact.reset();
        if (ln - 1 == 0) {
            exact.emplace(fn, mpq_class(1));
        }
        if (!leq(f, scaled_alpha_pow(1, ln - 1), exact)) {
            report.violation = GrowthViolation{n, "F_n <= alpha^(n-1)"};
            return report;
        }
        if (n < 2) {
            continue;
        }
        if (!leq(scaled_alpha_pow(lower_c, ln), f, std::nullopt)) {
            report.violation = GrowthViolation{n, "0.38 alpha^n <= F_n"};
            return report;
        }
        if (!leq(f, scaled_alpha_pow(upper_c, ln), std::nullopt)) {
            report.violation = GrowthViolation{n, "F_n <= 0.48 alpha^n"};
            return report;
        }
    }
    return report;
}

} // namespace fibclose
