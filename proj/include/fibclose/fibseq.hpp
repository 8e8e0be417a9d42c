#ifndef FIBCLOSE_FIBSEQ_HPP
#define FIBCLOSE_FIBSEQ_HPP

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include <gmpxx.h>

#include <fibclose/realint.hpp>

namespace fibclose
{

// Dense table F_0..F_N, immutable after construction.
class FibTable
{
public:
    explicit FibTable(std::size_t max_index = 600);

    [[nodiscard]] const mpz_class &operator[](std::size_t n) const { return m_values.at(n); }
    [[nodiscard]] std::size_t max_index() const { return m_values.size() - 1; }

private:
    std::vector<mpz_class> m_values;
};

// Shared table to index 600.
[[nodiscard]] const FibTable &fib_table();

// Exact F_n: table lookup up to 600, fast doubling beyond.
[[nodiscard]] mpz_class fib(unsigned long n);

// (F_n, F_{n+1}) by fast doubling.
[[nodiscard]] std::pair<mpz_class, mpz_class> fib_pair(unsigned long n);

struct GrowthViolation {
    unsigned long n;
    std::string inequality;
};

struct GrowthReport {
    unsigned long n_max = 0;
    unsigned long comparisons = 0;
    std::optional<GrowthViolation> violation;

    [[nodiscard]] bool ok() const { return !violation; }
};

// Certifies alpha^{n-2} <= F_n <= alpha^{n-1} for 1 <= n <= n_max and
// 0.38 alpha^n <= F_n <= 0.48 alpha^n for 2 <= n <= n_max.
[[nodiscard]] GrowthReport check_growth_bounds(unsigned long n_max, const Precision &ctx = {});

} // namespace fibclose

#endif
