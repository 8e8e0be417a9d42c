#ifndef FIBCLOSE_SEARCH_HPP
#define FIBCLOSE_SEARCH_HPP

#include <compare>
#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include <gmpxx.h>

namespace fibclose
{

// |F_n + F_m + F_l - 2^a| < 2^(a/2) with n >= m >= l >= 2.
struct Solution {
    long n = 0;
    long m = 0;
    long l = 0;
    long a = 0;

    friend auto operator<=>(const Solution &, const Solution &) = default;
    [[nodiscard]] bool canonical() const { return n >= m && m >= l && l >= 2 && a >= 1; }
};

std::ostream &operator<<(std::ostream &os, const Solution &s);

struct SolutionCheck {
    bool holds = false;
    // 2^a - (S - 2^a)^2; positive exactly when the inequality holds
    mpz_class margin;
};

// Exact test through the squared form. Throws std::invalid_argument for
// indices or exponent below 1.
[[nodiscard]] SolutionCheck check_solution(long n, long m, long l, long a);

// Every canonical solution with n <= n_max, sorted. `threads` = 0 picks the
// hardware count; the result does not depend on it.
[[nodiscard]] std::vector<Solution> enumerate(long n_max, unsigned threads = 0);

struct SearchSummary {
    std::size_t count = 0;
    long max_n = 0;
    long max_a = 0;
    long min_a = 0;
};

[[nodiscard]] SearchSummary summarize(const std::vector<Solution> &sols);

// CSV with header "n,m,l,a", one canonical tuple per row. Throws
// std::runtime_error on I/O problems and std::invalid_argument (with the
// line number) on malformed or non-canonical rows.
[[nodiscard]] std::vector<Solution> read_table(const std::string &path);
[[nodiscard]] std::vector<Solution> parse_table(std::istream &in);
void write_table(std::ostream &out, const std::vector<Solution> &sols);

struct TableDiff {
    std::size_t table_rows = 0;
    std::size_t table_unique = 0;
    std::size_t reference = 0;
    std::vector<Solution> missing;    // in the reference, not in the table
    std::vector<Solution> extra;      // in the table, not in the reference
    std::vector<Solution> duplicates; // repeated table rows

    [[nodiscard]] bool sets_equal() const { return missing.empty() && extra.empty(); }
};

[[nodiscard]] TableDiff diff_table(const std::vector<Solution> &table, const std::vector<Solution> &reference);

// Reads the table and compares it with enumerate(n_max).
[[nodiscard]] TableDiff verify_table(const std::string &path, long n_max = 550);

} // namespace fibclose

#endif
