#ifndef FIBCLOSE_TESTS_ORACLES_HPP
#define FIBCLOSE_TESTS_ORACLES_HPP

// Reference implementations for the tests. Deliberately naive and sharing
// nothing with the library: logarithms come from rational power series with
// explicit tail bounds, Fibonacci numbers from the bare recurrence, and the
// solution set from trying every exponent.

#include <gmpxx.h>

#include <set>
#include <tuple>
#include <vector>

namespace oracle
{

// lo <= value <= hi, both exact.
struct Bracket {
    mpq_class lo;
    mpq_class hi;

    [[nodiscard]] bool contains(const mpq_class &x) const { return lo <= x && x <= hi; }
};

inline Bracket operator+(const Bracket &a, const Bracket &b)
{
    return {a.lo + b.lo, a.hi + b.hi};
}

inline Bracket scale(const Bracket &a, const mpq_class &k) // k > 0
{
    return {a.lo * k, a.hi * k};
}

// Both positive.
inline Bracket divide(const Bracket &a, const Bracket &b)
{
    return {a.lo / b.hi, a.hi / b.lo};
}

// atanh(x) = sum x^(2k+1)/(2k+1), 0 < x < 1. The tail after `terms` terms
// is at most x^(2K+1) / ((2K+1)(1 - x^2)).
inline Bracket atanh_series(const mpq_class &x, int terms)
{
    mpq_class sum = 0;
    mpq_class pw = x;
    const mpq_class x2 = x * x;
    for (int k = 0; k < terms; ++k) {
        sum += pw / (2 * k + 1);
        pw *= x2;
    }
    const mpq_class tail = pw / ((2 * terms + 1) * (1 - x2));
    return {sum, sum + tail};
}

// log 2 = 2 atanh(1/3)
inline Bracket log2(int terms = 200)
{
    return scale(atanh_series(mpq_class(1, 3), terms), 2);
}

// log(5/4) = 2 atanh(1/9), so log sqrt5 = log 2 + log(5/4)/2.
inline Bracket log_sqrt5(int terms = 200)
{
    return log2(terms) + atanh_series(mpq_class(1, 9), terms);
}

// log alpha = asinh(1/2) = sum (-1)^k (2k)! / (4^k k!^2 (2k+1)) x^(2k+1).
// The terms alternate and shrink, so consecutive partial sums bracket it.
inline Bracket log_alpha(int terms = 400)
{
    const mpq_class x(1, 2);
    mpq_class sum = 0;
    mpq_class c = 1; // (2k)! / (4^k k!^2)
    mpq_class pw = x;
    mpq_class last;
    for (int k = 0; k < terms; ++k) {
        last = c * pw / (2 * k + 1);
        if (k % 2 == 0) {
            sum += last;
        } else {
            sum -= last;
        }
        c *= mpq_class((2 * k + 1) * (2 * k + 2), 4 * (k + 1) * (k + 1));
        pw *= x * x;
    }
    // next term would be subtracted when `terms` is odd, added when even
    const mpq_class next = c * pw / (2 * terms + 1);
    if (terms % 2 == 0) {
        return {sum, sum + next};
    }
    return {sum - next, sum};
}

inline std::vector<mpz_class> fib_upto(std::size_t n)
{
    std::vector<mpz_class> f{0, 1};
    while (f.size() <= n) {
        f.push_back(f[f.size() - 1] + f[f.size() - 2]);
    }
    return f;
}

// Partial quotients shared by the continued fractions of both ends of an
// interval; every one of them is a quotient of any number inside.
inline std::vector<mpz_class> common_quotients(mpq_class lo, mpq_class hi, std::size_t limit)
{
    std::vector<mpz_class> out;
    while (out.size() < limit) {
        mpz_class a, b;
        mpz_fdiv_q(a.get_mpz_t(), lo.get_num_mpz_t(), lo.get_den_mpz_t());
        mpz_fdiv_q(b.get_mpz_t(), hi.get_num_mpz_t(), hi.get_den_mpz_t());
        if (a != b || lo == a || hi == b) {
            break;
        }
        out.push_back(a);
        const mpq_class nlo = 1 / (hi - b);
        const mpq_class nhi = 1 / (lo - a);
        lo = nlo;
        hi = nhi;
    }
    return out;
}

// Quotients of log2/log alpha certified by the series brackets.
inline std::vector<mpz_class> gamma_quotients(std::size_t limit = 120)
{
    const Bracket g = divide(log2(), log_alpha());
    return common_quotients(g.lo, g.hi, limit);
}

using Tuple = std::tuple<long, long, long, long>;

// Every canonical solution with n <= n_max, trying every exponent a with
// 2^a <= 2 S instead of any window.
inline std::set<Tuple> brute_solutions(long n_max)
{
    const auto F = fib_upto(static_cast<std::size_t>(n_max));
    std::set<Tuple> out;
    for (long n = 2; n <= n_max; ++n) {
        for (long m = 2; m <= n; ++m) {
            for (long l = 2; l <= m; ++l) {
                const mpz_class S = F[n] + F[m] + F[l];
                mpz_class p = 2;
                for (long a = 1; p <= 2 * S; ++a, p *= 2) {
                    const mpz_class d = S - p;
                    if (d * d < p) {
                        out.insert({n, m, l, a});
                    }
                }
            }
        }
    }
    return out;
}

} // namespace oracle

#endif
