#ifndef FIBCLOSE_QUADFIELD_HPP
#define FIBCLOSE_QUADFIELD_HPP

#include <optional>
#include <ostream>
#include <string>

#include <gmpxx.h>

namespace fibclose
{

// Exact element x + y*alpha of Q(sqrt5), alpha = (1 + sqrt5)/2.
//
// The basis {1, alpha} keeps powers of alpha integral (alpha^2 = alpha + 1),
// and both coefficients are always reduced rationals, so equality of
// elements is equality of coefficient pairs.
class QuadElement
{
public:
    QuadElement() = default;
    QuadElement(mpq_class x, mpq_class y);
    explicit QuadElement(const mpq_class &rational) : QuadElement(rational, 0) {}

    static QuadElement one() { return QuadElement(1, 0); }
    static QuadElement alpha() { return QuadElement(0, 1); }
    // beta = 1 - alpha = -1/alpha
    static QuadElement beta() { return QuadElement(1, -1); }
    // sqrt5 = 2 alpha - 1
    static QuadElement sqrt5() { return QuadElement(-1, 2); }

    [[nodiscard]] const mpq_class &x() const { return m_x; }
    [[nodiscard]] const mpq_class &y() const { return m_y; }

    [[nodiscard]] bool is_zero() const { return sgn(m_x) == 0 && sgn(m_y) == 0; }
    [[nodiscard]] bool is_rational() const { return sgn(m_y) == 0; }

    // Image under alpha -> beta.
    [[nodiscard]] QuadElement conj() const;
    // e * conj(e) = x^2 + xy - y^2
    [[nodiscard]] mpq_class norm() const;
    // Throws std::domain_error for zero.
    [[nodiscard]] QuadElement inverse() const;
    // Exact k-th power; negative k requires a non-zero base.
    [[nodiscard]] QuadElement pow(long k) const;
    // Sign of the real number x + y*alpha, decided exactly.
    [[nodiscard]] int sign() const;

    QuadElement &operator+=(const QuadElement &o);
    QuadElement &operator-=(const QuadElement &o);
    QuadElement &operator*=(const QuadElement &o);
    QuadElement &operator/=(const QuadElement &o);

    friend QuadElement operator+(QuadElement a, const QuadElement &b) { return a += b; }
    friend QuadElement operator-(QuadElement a, const QuadElement &b) { return a -= b; }
    friend QuadElement operator*(QuadElement a, const QuadElement &b) { return a *= b; }
    friend QuadElement operator/(QuadElement a, const QuadElement &b) { return a /= b; }
    friend QuadElement operator-(const QuadElement &a) { return QuadElement(-a.m_x, -a.m_y); }
    friend bool operator==(const QuadElement &a, const QuadElement &b) { return a.m_x == b.m_x && a.m_y == b.m_y; }
    friend bool operator!=(const QuadElement &a, const QuadElement &b) { return !(a == b); }

    [[nodiscard]] std::string to_string() const;

private:
    mpq_class m_x{0};
    mpq_class m_y{0};
};

std::ostream &operator<<(std::ostream &os, const QuadElement &e);

inline QuadElement qf_make(const mpq_class &x, const mpq_class &y)
{
    return QuadElement(x, y);
}

// psi(t, s) = sqrt5 / (1 + alpha^-t + alpha^-s)
[[nodiscard]] QuadElement psi(long t, long s);

// e * 2^s == alpha^r
struct Pow2AlphaDecomposition {
    long r;
    long s;
    friend bool operator==(const Pow2AlphaDecomposition &, const Pow2AlphaDecomposition &) = default;
};

// Searches |r| <= r_max, |s| <= s_max for e * 2^s = alpha^r. Taking norms
// gives N(e) * 4^s = (-1)^r, which pins s (and the parity of r) before the
// scan over r.
[[nodiscard]] std::optional<Pow2AlphaDecomposition> decompose_pow2_alpha(const QuadElement &e, long r_max = 64,
                                                                         long s_max = 64);

} // namespace fibclose

#endif
