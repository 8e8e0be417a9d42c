#ifndef FIBCLOSE_REALINT_HPP
#define FIBCLOSE_REALINT_HPP

#include <functional>
#include <stdexcept>
#include <string>
#include <string_view>

#include <gmpxx.h>
#include <mpfr.h>

namespace fibclose
{

class QuadElement;

// Working precision for certified evaluation. Escalation doubles `bits`
// until `bits_max` is reached.
struct Precision {
    long bits = 256;
    long bits_max = 65536;

    [[nodiscard]] bool can_escalate() const { return bits < bits_max; }
    [[nodiscard]] Precision escalated() const;
};

// Raised when two enclosures still overlap at bits_max. This almost always
// means an exact equality was fed to a numeric comparison.
class PrecisionExhausted : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

// Closed interval [lo, hi] with MPFR endpoints. Every operation rounds the
// lower endpoint towards -inf and the upper one towards +inf, so the exact
// image of the operands is always enclosed.
class Interval
{
public:
    explicit Interval(mpfr_prec_t prec = 64);
    Interval(const Interval &other);
    Interval(Interval &&other) noexcept;
    Interval &operator=(const Interval &other);
    Interval &operator=(Interval &&other) noexcept;
    ~Interval();

    static Interval from_int(long v, mpfr_prec_t prec);
    static Interval from_mpz(const mpz_class &v, mpfr_prec_t prec);
    static Interval from_mpq(const mpq_class &v, mpfr_prec_t prec);
    // Exact decimal literal such as "0.38", "-1.4e12" or "9e28".
    static Interval from_decimal(std::string_view literal, mpfr_prec_t prec);
    // Enclosure of [lo, hi] for rationals lo <= hi.
    static Interval hull(const mpq_class &lo, const mpq_class &hi, mpfr_prec_t prec);

    [[nodiscard]] mpfr_srcptr lo() const { return m_lo; }
    [[nodiscard]] mpfr_srcptr hi() const { return m_hi; }
    [[nodiscard]] mpfr_prec_t precision() const { return mpfr_get_prec(m_lo); }
    // In-place endpoint access for kernels that fill an interval directly.
    [[nodiscard]] mpfr_ptr lo_mut() { return m_lo; }
    [[nodiscard]] mpfr_ptr hi_mut() { return m_hi; }

    [[nodiscard]] bool positive() const { return mpfr_sgn(m_lo) > 0; }
    [[nodiscard]] bool negative() const { return mpfr_sgn(m_hi) < 0; }
    [[nodiscard]] bool contains_zero() const { return !positive() && !negative(); }
    [[nodiscard]] bool contains(const Interval &inner) const;
    [[nodiscard]] bool is_point() const { return mpfr_equal_p(m_lo, m_hi) != 0; }

    [[nodiscard]] mpq_class lo_q() const;
    [[nodiscard]] mpq_class hi_q() const;
    // Upper bound on hi - lo.
    [[nodiscard]] mpq_class width_q() const;
    [[nodiscard]] double mid() const;

    // Outward-rounded decimal strings with `digits` significant digits.
    [[nodiscard]] std::string lo_decimal(int digits = 40) const;
    [[nodiscard]] std::string hi_decimal(int digits = 40) const;
    [[nodiscard]] std::string mid_decimal(int digits = 30) const;

    friend Interval operator+(const Interval &a, const Interval &b);
    friend Interval operator-(const Interval &a, const Interval &b);
    friend Interval operator*(const Interval &a, const Interval &b);
    friend Interval operator/(const Interval &a, const Interval &b);
    friend Interval operator-(const Interval &a);

    friend Interval log(const Interval &x);
    friend Interval exp(const Interval &x);
    friend Interval sqrt(const Interval &x);
    friend Interval abs(const Interval &x);
    friend Interval pow(const Interval &x, long k);
    friend Interval exp2(const Interval &x);
    friend Interval intersect(const Interval &a, const Interval &b);

    // Endpoints as floor/ceil integers.
    [[nodiscard]] mpz_class floor_lo() const;
    [[nodiscard]] mpz_class floor_hi() const;
    [[nodiscard]] mpz_class ceil_hi() const;

    // Same enclosure, endpoints rounded outward to prec bits.
    [[nodiscard]] Interval rounded(mpfr_prec_t prec) const;

private:
    mpfr_t m_lo;
    mpfr_t m_hi;
};

Interval operator*(const Interval &a, const mpz_class &k);
Interval operator+(const Interval &a, const mpz_class &k);
Interval operator-(const Interval &a, const mpz_class &k);

// Exact value of a decimal literal ("3.93e15", "-0.38", "42").
// Throws std::invalid_argument on malformed input.
[[nodiscard]] mpq_class parse_decimal(std::string_view literal);

// a.hi < b.lo
[[nodiscard]] bool certainly_less(const Interval &a, const Interval &b);

// ---------------------------------------------------------------------------
// Constant registry

class Constant
{
public:
    enum class Kind {
        Log2,
        LogAlpha,
        LogSqrt5,
        Sqrt5,
        Gamma,            // log 2 / log alpha
        LogAlphaOverLog2, // 1 / gamma
        MuSqrt5,          // log sqrt5 / log alpha
        MuPsi,            // log psi(t, s) / log alpha
        AlphaPow,         // alpha^k
    };

    static Constant log2() { return Constant(Kind::Log2); }
    static Constant log_alpha() { return Constant(Kind::LogAlpha); }
    static Constant log_sqrt5() { return Constant(Kind::LogSqrt5); }
    static Constant sqrt5() { return Constant(Kind::Sqrt5); }
    static Constant gamma() { return Constant(Kind::Gamma); }
    static Constant log_alpha_over_log2() { return Constant(Kind::LogAlphaOverLog2); }
    static Constant mu_sqrt5() { return Constant(Kind::MuSqrt5); }
    static Constant mu_psi(long t, long s);
    static Constant alpha_pow(long k);
    // Accepts the names produced by name(): "log2", "logAlpha", "gamma",
    // "mu_psi(3,4)", "alphaPow(10)", ...
    static Constant parse(std::string_view name);

    [[nodiscard]] Kind kind() const { return m_kind; }
    [[nodiscard]] long t() const { return m_t; }
    [[nodiscard]] long s() const { return m_s; }
    [[nodiscard]] long k() const { return m_k; }
    [[nodiscard]] std::string name() const;
    // Constants whose continued fraction expansion may be requested.
    [[nodiscard]] bool known_irrational() const;

    friend bool operator==(const Constant &, const Constant &) = default;

private:
    explicit Constant(Kind kind, long t = 0, long s = 0, long k = 0) : m_kind(kind), m_t(t), m_s(s), m_k(k) {}

    Kind m_kind;
    long m_t;
    long m_s;
    long m_k;
};

[[nodiscard]] Interval const_eval(const Constant &c, const Precision &ctx);

// Exact element of Q(sqrt5) enclosed at (at least) prec bits. Working
// precision is raised by the coefficient sizes to absorb cancellation.
[[nodiscard]] Interval to_interval(const QuadElement &e, mpfr_prec_t prec);

// Produces an enclosure at the requested precision.
using Producer = std::function<Interval(const Precision &)>;

[[nodiscard]] Producer producer(const Constant &c);
[[nodiscard]] Producer producer(const mpq_class &exact);

// Truth of a < b, escalating precision until the enclosures separate.
// Throws PrecisionExhausted when bits_max is reached without separation.
[[nodiscard]] bool decide_less(const Producer &a, const Producer &b, const Precision &ctx);

// Sign of the value produced by f, escalating as needed. Never returns 0.
[[nodiscard]] int decide_sign(const Producer &f, const Precision &ctx);

struct NearestIntDistance {
    Interval value;
    // Set when [lo, hi] contains an integer or a half-integer: value is then
    // still a valid enclosure, but too wide to be useful.
    bool ambiguous;
};

// Enclosure of ||x||, the distance from x to the nearest integer.
// Throws std::domain_error if the width of x is not below 1/4.
[[nodiscard]] NearestIntDistance dist_nearest_int(const Interval &x);

} // namespace fibclose

#endif
