#ifndef FIBCLOSE_LINFORMS_HPP
#define FIBCLOSE_LINFORMS_HPP

#include <functional>
#include <string>
#include <vector>

#include <gmpxx.h>

#include <fibclose/realint.hpp>

namespace fibclose
{

// ---------------------------------------------------------------------------
// Heights

// h(p/q) = log max(|p|, q). Throws std::invalid_argument unless gcd(p, q) = 1
// and q > 0.
[[nodiscard]] Interval log_height_rational(const mpz_class &p, const mpz_class &q, const Precision &ctx = {});

enum class NamedAlgebraic { Alpha, Sqrt5 };

// Heights from the hard-coded minimal polynomials x^2 - x - 1 and x^2 - 5.
[[nodiscard]] Interval log_height_named(NamedAlgebraic sym, const Precision &ctx = {});

// General definition: (log |a0| + sum log max(|eta_i|, 1)) / d, with a0 the
// leading coefficient of the minimal polynomial over Z and eta_i the d
// conjugates.
[[nodiscard]] Interval log_height(const mpz_class &leading, const std::vector<Interval> &conjugates,
                                  const Precision &ctx = {});

struct Gamma3Height {
    Interval h_upper; // log(4 sqrt5) + (dm + dl) log(alpha)/2
    Interval A3;      // 5 + (dm + dl) log(alpha)
};

[[nodiscard]] Gamma3Height height_gamma3_upper(const mpz_class &dm, const mpz_class &dl, const Precision &ctx = {});

// ---------------------------------------------------------------------------
// Matveev lower bound

struct MatveevInput {
    long t = 1;
    long D = 1;
    mpz_class B{1};
    std::vector<Interval> A;

    // Throws std::invalid_argument when t, D, B or some A_i is out of range
    // (an A_i certainly below 0.16 is rejected).
    void validate() const;
};

// 1.4 * 30^(t+3) * t^4.5 * D^2 * (1 + log D) * A_1 ... A_t, i.e. the
// exponent without its (1 + log B) factor.
[[nodiscard]] Interval matveev_prefactor(const MatveevInput &inp, const Precision &ctx = {});

// Full exponent: prefactor * (1 + log B). |Lambda| > exp(-result).
[[nodiscard]] Interval matveev_exponent(const MatveevInput &inp, const Precision &ctx = {});

// ---------------------------------------------------------------------------
// The a-window

struct ARange {
    mpz_class a_lo;
    mpz_class a_hi;
};

// Integer a-range forced by 0.38 alpha^n < F_n + F_m + F_l < alpha^n for
// n >= 4: n r + log(0.38)/log2 - 1 < a < n r + 1 with r = log(alpha)/log2.
// Throws std::invalid_argument for n < 4 and std::logic_error if a < n fails.
[[nodiscard]] ARange a_range_for_n(const mpz_class &n, const Precision &ctx = {});

// Largest n compatible with a <= a_max, i.e. the last n for which the lower
// end of the window stays below a_max + 1.
[[nodiscard]] mpz_class n_max_for_a(const mpz_class &a_max, const Precision &ctx = {});

// ---------------------------------------------------------------------------
// Thresholds

using IntPredicate = std::function<bool(const mpz_class &)>;

// Least N >= start with pred(n) true for every n >= N, assuming pred is
// false-then-true from `start` on. Exponential search followed by bisection.
// Throws std::runtime_error when no threshold exists below `limit`.
[[nodiscard]] mpz_class solve_decreasing_threshold(const IntPredicate &pred, const mpz_class &start = 1,
                                                   const mpz_class &limit = mpz_class("10000000000000000000000000000000000000000"));

// ---------------------------------------------------------------------------
// First bounds

struct AuditEntry {
    std::string claim;
    Interval lhs;
    Interval rhs;
    bool holds = false; // lhs < rhs (or <=, as stated in claim), certified
};

struct CaseBound {
    std::string tag;
    mpz_class n_max; // inclusive
    mpz_class a_max; // inclusive
};

enum class BoundRoute {
    Rounded, // rounded constants 1.4e12, 2.4e12, 6.86e24
    Tight, // the same chain with the unrounded Matveev constants
};

struct BoundReport {
    BoundRoute route = BoundRoute::Rounded;
    Interval C1;          // log|Lambda1| > -C1 log n (5 + (2n-m-l) log alpha)
    Interval C2;          // log|Lambda2| > -C2 log n
    Interval gap_coeff;   // min gap * log alpha < gap_coeff * log n
    Interval cases12_coeff; // (a/2 - 1) log2 < cases12_coeff * log^2 n
    CaseBound cases12;
    CaseBound case3;
    CaseBound combined;
    std::vector<AuditEntry> audit;

    [[nodiscard]] bool audit_ok() const;
};

[[nodiscard]] std::string route_name(BoundRoute r);

// Runs the three-case analysis with certified arithmetic.
[[nodiscard]] BoundReport derive_first_bounds(BoundRoute route = BoundRoute::Rounded, const Precision &ctx = {});

// Largest a with (a/2 - 1) log2 < C1 log n (5 + gaps log alpha), where n is
// tied to a through the a-window and C1 is the route's constant. Used after
// the first reduction, with gaps bounding 2n - m - l.
[[nodiscard]] mpz_class a_bound_from_gaps(BoundRoute route, const mpz_class &gaps, const Precision &ctx = {});

// Exact search for alpha^n + alpha^m + alpha^l = 2^a sqrt5 over
// n_lo <= n <= n_hi, 0 <= l <= m <= n and a in the n-window. Returns the
// number of coincidences (expected 0).
[[nodiscard]] long lambda1_coincidences(long n_lo, long n_hi);

// Exact search for alpha^n = 2^a sqrt5 over 0 <= n, a <= bound.
[[nodiscard]] long lambda2_coincidences(long bound);

// Collapsed Matveev constants of the two linear forms: 2 * prefactor, using
// 1 + log n < 2 log n.
[[nodiscard]] Interval collapsed_constant_lambda1(const Precision &ctx = {});
[[nodiscard]] Interval collapsed_constant_lambda2(const Precision &ctx = {});

} // namespace fibclose

#endif
