#include <fibclose/realint.hpp>

#include <fibclose/quadfield.hpp>

#include <algorithm>
#include <cctype>
#include <charconv>
#include <memory>
#include <stdexcept>
#include <string>

namespace fibclose
{

namespace
{

constexpr mpfr_prec_t guard_bits = 32;

// RAII scratch value.
struct Scratch {
    explicit Scratch(mpfr_prec_t prec) { mpfr_init2(v, prec); }
    Scratch(const Scratch &) = delete;
    Scratch &operator=(const Scratch &) = delete;
    ~Scratch() { mpfr_clear(v); }
    mpfr_t v;
};

mpfr_prec_t join_prec(const Interval &a, const Interval &b)
{
    return std::max(a.precision(), b.precision());
}

std::string format_decimal(mpfr_srcptr x, int digits, mpfr_rnd_t rnd)
{
    if (mpfr_zero_p(x)) {
        return "0";
    }
    mpfr_exp_t e = 0;
    std::unique_ptr<char, void (*)(char *)> raw(mpfr_get_str(nullptr, &e, 10, static_cast<size_t>(digits), x, rnd),
                                               mpfr_free_str);
    std::string m(raw.get());
    std::string sign;
    if (!m.empty() && m[0] == '-') {
        sign = "-";
        m.erase(0, 1);
    }
    // strip trailing zeros of the mantissa
    while (m.size() > 1 && m.back() == '0') {
        m.pop_back();
    }
    std::string out = sign + m.substr(0, 1);
    if (m.size() > 1) {
        out += "." + m.substr(1);
    }
    const long exp10 = static_cast<long>(e) - 1;
    if (exp10 != 0) {
        out += "e" + std::to_string(exp10);
    }
    return out;
}

} // namespace

Precision Precision::escalated() const
{
    Precision p = *this;
    p.bits = std::min(bits * 2, bits_max);
    return p;
}

Interval::Interval(mpfr_prec_t prec)
{
    mpfr_init2(m_lo, prec);
    mpfr_init2(m_hi, prec);
    mpfr_set_zero(m_lo, 1);
    mpfr_set_zero(m_hi, 1);
}

Interval::Interval(const Interval &other)
{
    mpfr_init2(m_lo, other.precision());
    mpfr_init2(m_hi, other.precision());
    mpfr_set(m_lo, other.m_lo, MPFR_RNDD);
    mpfr_set(m_hi, other.m_hi, MPFR_RNDU);
}

Interval::Interval(Interval &&other) noexcept : Interval(other.precision())
{
    mpfr_swap(m_lo, other.m_lo);
    mpfr_swap(m_hi, other.m_hi);
}

Interval &Interval::operator=(const Interval &other)
{
    if (this != &other) {
        mpfr_set_prec(m_lo, other.precision());
        mpfr_set_prec(m_hi, other.precision());
        mpfr_set(m_lo, other.m_lo, MPFR_RNDD);
        mpfr_set(m_hi, other.m_hi, MPFR_RNDU);
    }
    return *this;
}

Interval &Interval::operator=(Interval &&other) noexcept
{
    mpfr_swap(m_lo, other.m_lo);
    mpfr_swap(m_hi, other.m_hi);
    return *this;
}

Interval::~Interval()
{
    mpfr_clear(m_lo);
    mpfr_clear(m_hi);
}

Interval Interval::from_int(long v, mpfr_prec_t prec)
{
    Interval r(prec);
    mpfr_set_si(r.m_lo, v, MPFR_RNDD);
    mpfr_set_si(r.m_hi, v, MPFR_RNDU);
    return r;
}

Interval Interval::from_mpz(const mpz_class &v, mpfr_prec_t prec)
{
    Interval r(prec);
    mpfr_set_z(r.m_lo, v.get_mpz_t(), MPFR_RNDD);
    mpfr_set_z(r.m_hi, v.get_mpz_t(), MPFR_RNDU);
    return r;
}

Interval Interval::from_mpq(const mpq_class &v, mpfr_prec_t prec)
{
    Interval r(prec);
    mpfr_set_q(r.m_lo, v.get_mpq_t(), MPFR_RNDD);
    mpfr_set_q(r.m_hi, v.get_mpq_t(), MPFR_RNDU);
    return r;
}

Interval Interval::from_decimal(std::string_view literal, mpfr_prec_t prec)
{
    return from_mpq(parse_decimal(literal), prec);
}

Interval Interval::hull(const mpq_class &lo, const mpq_class &hi, mpfr_prec_t prec)
{
    if (lo > hi) {
        throw std::invalid_argument("Interval::hull: lo > hi");
    }
    Interval r(prec);
    mpfr_set_q(r.m_lo, lo.get_mpq_t(), MPFR_RNDD);
    mpfr_set_q(r.m_hi, hi.get_mpq_t(), MPFR_RNDU);
    return r;
}

bool Interval::contains(const Interval &inner) const
{
    return mpfr_lessequal_p(m_lo, inner.m_lo) && mpfr_lessequal_p(inner.m_hi, m_hi);
}

mpq_class Interval::lo_q() const
{
    mpq_class q;
    mpfr_get_q(q.get_mpq_t(), m_lo);
    return q;
}

mpq_class Interval::hi_q() const
{
    mpq_class q;
    mpfr_get_q(q.get_mpq_t(), m_hi);
    return q;
}

mpq_class Interval::width_q() const
{
    return hi_q() - lo_q();
}

double Interval::mid() const
{
    return 0.5 * (mpfr_get_d(m_lo, MPFR_RNDN) + mpfr_get_d(m_hi, MPFR_RNDN));
}

std::string Interval::lo_decimal(int digits) const
{
    return format_decimal(m_lo, digits, MPFR_RNDD);
}

std::string Interval::hi_decimal(int digits) const
{
    return format_decimal(m_hi, digits, MPFR_RNDU);
}

std::string Interval::mid_decimal(int digits) const
{
    Scratch m(precision() + 1);
    mpfr_add(m.v, m_lo, m_hi, MPFR_RNDN);
    mpfr_div_2ui(m.v, m.v, 1, MPFR_RNDN);
    return format_decimal(m.v, digits, MPFR_RNDN);
}

mpz_class Interval::floor_lo() const
{
    mpz_class z;
    mpfr_get_z(z.get_mpz_t(), m_lo, MPFR_RNDD);
    return z;
}

mpz_class Interval::floor_hi() const
{
    mpz_class z;
    mpfr_get_z(z.get_mpz_t(), m_hi, MPFR_RNDD);
    return z;
}

mpz_class Interval::ceil_hi() const
{
    mpz_class z;
    mpfr_get_z(z.get_mpz_t(), m_hi, MPFR_RNDU);
    return z;
}

Interval Interval::rounded(mpfr_prec_t prec) const
{
    Interval r(prec);
    mpfr_set(r.m_lo, m_lo, MPFR_RNDD);
    mpfr_set(r.m_hi, m_hi, MPFR_RNDU);
    return r;
}

Interval operator+(const Interval &a, const Interval &b)
{
    Interval r(join_prec(a, b));
    mpfr_add(r.m_lo, a.m_lo, b.m_lo, MPFR_RNDD);
    mpfr_add(r.m_hi, a.m_hi, b.m_hi, MPFR_RNDU);
    return r;
}

Interval operator-(const Interval &a, const Interval &b)
{
    Interval r(join_prec(a, b));
    mpfr_sub(r.m_lo, a.m_lo, b.m_hi, MPFR_RNDD);
    mpfr_sub(r.m_hi, a.m_hi, b.m_lo, MPFR_RNDU);
    return r;
}

Interval operator-(const Interval &a)
{
    Interval r(a.precision());
    mpfr_neg(r.m_lo, a.m_hi, MPFR_RNDD);
    mpfr_neg(r.m_hi, a.m_lo, MPFR_RNDU);
    return r;
}

Interval operator*(const Interval &a, const Interval &b)
{
    const mpfr_prec_t prec = join_prec(a, b);
    Interval r(prec);
    Scratch t(prec);
    mpfr_srcptr xs[2] = {a.m_lo, a.m_hi};
    mpfr_srcptr ys[2] = {b.m_lo, b.m_hi};
    bool first = true;
    for (auto x : xs) {
        for (auto y : ys) {
            mpfr_mul(t.v, x, y, MPFR_RNDD);
            if (first || mpfr_less_p(t.v, r.m_lo)) {
                mpfr_set(r.m_lo, t.v, MPFR_RNDD);
            }
            mpfr_mul(t.v, x, y, MPFR_RNDU);
            if (first || mpfr_greater_p(t.v, r.m_hi)) {
                mpfr_set(r.m_hi, t.v, MPFR_RNDU);
            }
            first = false;
        }
    }
    return r;
}

Interval operator/(const Interval &a, const Interval &b)
{
    if (b.contains_zero()) {
        throw std::domain_error("Interval: division by an interval containing zero");
    }
    const mpfr_prec_t prec = join_prec(a, b);
    Interval r(prec);
    Scratch t(prec);
    mpfr_srcptr xs[2] = {a.m_lo, a.m_hi};
    mpfr_srcptr ys[2] = {b.m_lo, b.m_hi};
    bool first = true;
    for (auto x : xs) {
        for (auto y : ys) {
            mpfr_div(t.v, x, y, MPFR_RNDD);
            if (first || mpfr_less_p(t.v, r.m_lo)) {
                mpfr_set(r.m_lo, t.v, MPFR_RNDD);
            }
            mpfr_div(t.v, x, y, MPFR_RNDU);
            if (first || mpfr_greater_p(t.v, r.m_hi)) {
                mpfr_set(r.m_hi, t.v, MPFR_RNDU);
            }
            first = false;
        }
    }
    return r;
}

Interval operator*(const Interval &a, const mpz_class &k)
{
    return a * Interval::from_mpz(k, a.precision() + static_cast<mpfr_prec_t>(mpz_sizeinbase(k.get_mpz_t(), 2)));
}

Interval operator+(const Interval &a, const mpz_class &k)
{
    return a + Interval::from_mpz(k, a.precision() + static_cast<mpfr_prec_t>(mpz_sizeinbase(k.get_mpz_t(), 2)));
}

Interval operator-(const Interval &a, const mpz_class &k)
{
    return a - Interval::from_mpz(k, a.precision() + static_cast<mpfr_prec_t>(mpz_sizeinbase(k.get_mpz_t(), 2)));
}

Interval log(const Interval &x)
{
    if (!x.positive()) {
        throw std::domain_error("Interval: log of a non-positive interval");
    }
    Interval r(x.precision());
    mpfr_log(r.m_lo, x.m_lo, MPFR_RNDD);
    mpfr_log(r.m_hi, x.m_hi, MPFR_RNDU);
    return r;
}

Interval exp(const Interval &x)
{
    Interval r(x.precision());
    mpfr_exp(r.m_lo, x.m_lo, MPFR_RNDD);
    mpfr_exp(r.m_hi, x.m_hi, MPFR_RNDU);
    return r;
}

Interval exp2(const Interval &x)
{
    Interval r(x.precision());
    mpfr_exp2(r.m_lo, x.m_lo, MPFR_RNDD);
    mpfr_exp2(r.m_hi, x.m_hi, MPFR_RNDU);
    return r;
}

Interval sqrt(const Interval &x)
{
    if (mpfr_sgn(x.m_lo) < 0) {
        throw std::domain_error("Interval: sqrt of a negative interval");
    }
    Interval r(x.precision());
    mpfr_sqrt(r.m_lo, x.m_lo, MPFR_RNDD);
    mpfr_sqrt(r.m_hi, x.m_hi, MPFR_RNDU);
    return r;
}

Interval abs(const Interval &x)
{
    if (x.positive() || mpfr_zero_p(x.m_lo)) {
        return x;
    }
    if (x.negative() || mpfr_zero_p(x.m_hi)) {
        return -x;
    }
    Interval r(x.precision());
    mpfr_set_zero(r.m_lo, 1);
    if (mpfr_cmpabs(x.m_lo, x.m_hi) > 0) {
        mpfr_neg(r.m_hi, x.m_lo, MPFR_RNDU);
    } else {
        mpfr_set(r.m_hi, x.m_hi, MPFR_RNDU);
    }
    return r;
}

Interval pow(const Interval &x, long k)
{
    if (k == 0) {
        return Interval::from_int(1, x.precision());
    }
    if (x.positive()) {
        Interval r(x.precision());
        if (k > 0) {
            mpfr_pow_si(r.m_lo, x.m_lo, k, MPFR_RNDD);
            mpfr_pow_si(r.m_hi, x.m_hi, k, MPFR_RNDU);
        } else {
            mpfr_pow_si(r.m_lo, x.m_hi, k, MPFR_RNDD);
            mpfr_pow_si(r.m_hi, x.m_lo, k, MPFR_RNDU);
        }
        return r;
    }
    if (x.negative()) {
        Interval r = pow(-x, k);
        return (k % 2 == 0) ? r : -r;
    }
    if (k < 0) {
        throw std::domain_error("Interval: negative power of an interval containing zero");
    }
    Interval r(x.precision());
    if (k % 2 == 0) {
        const Interval m = abs(x);
        mpfr_set_zero(r.m_lo, 1);
        mpfr_pow_si(r.m_hi, m.m_hi, k, MPFR_RNDU);
    } else {
        mpfr_pow_si(r.m_lo, x.m_lo, k, MPFR_RNDD);
        mpfr_pow_si(r.m_hi, x.m_hi, k, MPFR_RNDU);
    }
    return r;
}

Interval intersect(const Interval &a, const Interval &b)
{
    Interval r(join_prec(a, b));
    mpfr_max(r.m_lo, a.m_lo, b.m_lo, MPFR_RNDD);
    mpfr_min(r.m_hi, a.m_hi, b.m_hi, MPFR_RNDU);
    if (mpfr_greater_p(r.m_lo, r.m_hi)) {
        throw std::logic_error("Interval: disjoint enclosures of the same value");
    }
    return r;
}

bool certainly_less(const Interval &a, const Interval &b)
{
    return mpfr_less_p(a.hi(), b.lo()) != 0;
}

mpq_class parse_decimal(std::string_view literal)
{
    std::string_view s = literal;
    auto bad = [&]() { return std::invalid_argument("malformed decimal literal: '" + std::string(literal) + "'"); };
    if (s.empty()) {
        throw bad();
    }
    bool negative = false;
    if (s[0] == '+' || s[0] == '-') {
        negative = s[0] == '-';
        s.remove_prefix(1);
    }
    std::string digits;
    long frac_digits = 0;
    bool seen_dot = false;
    size_t i = 0;
    for (; i < s.size(); ++i) {
        const char c = s[i];
        if (std::isdigit(static_cast<unsigned char>(c)) != 0) {
            digits.push_back(c);
            if (seen_dot) {
                ++frac_digits;
            }
        } else if (c == '.' && !seen_dot) {
            seen_dot = true;
        } else {
            break;
        }
    }
    if (digits.empty()) {
        throw bad();
    }
    long exponent = 0;
    if (i < s.size()) {
        if (s[i] != 'e' && s[i] != 'E') {
            throw bad();
        }
        std::string_view e = s.substr(i + 1);
        if (!e.empty() && e[0] == '+') {
            e.remove_prefix(1);
        }
        const auto [ptr, ec] = std::from_chars(e.data(), e.data() + e.size(), exponent);
        if (ec != std::errc() || ptr != e.data() + e.size() || e.empty()) {
            throw bad();
        }
    }
    mpq_class q{mpz_class(digits, 10)};
    const long shift = exponent - frac_digits;
    mpz_class ten_pow;
    mpz_ui_pow_ui(ten_pow.get_mpz_t(), 10, static_cast<unsigned long>(shift < 0 ? -shift : shift));
    if (shift >= 0) {
        q *= ten_pow;
    } else {
        q /= ten_pow;
    }
    q.canonicalize();
    return negative ? mpq_class(-q) : q;
}

// ---------------------------------------------------------------------------

Constant Constant::mu_psi(long t, long s)
{
    if (t < 0 || s < 0) {
        throw std::invalid_argument("mu_psi: gaps must be non-negative");
    }
    return Constant(Kind::MuPsi, t, s);
}

Constant Constant::alpha_pow(long k)
{
    return Constant(Kind::AlphaPow, 0, 0, k);
}

std::string Constant::name() const
{
    switch (m_kind) {
    case Kind::Log2:
        return "log2";
    case Kind::LogAlpha:
        return "logAlpha";
    case Kind::LogSqrt5:
        return "logSqrt5";
    case Kind::Sqrt5:
        return "sqrt5";
    case Kind::Gamma:
        return "gamma";
    case Kind::LogAlphaOverLog2:
        return "logAlpha/log2";
    case Kind::MuSqrt5:
        return "logSqrt5/logAlpha";
    case Kind::MuPsi:
        return "mu_psi(" + std::to_string(m_t) + "," + std::to_string(m_s) + ")";
    case Kind::AlphaPow:
        return "alphaPow(" + std::to_string(m_k) + ")";
    }
    return "?";
}

Constant Constant::parse(std::string_view name)
{
    if (name == "log2") {
        return log2();
    }
    if (name == "logAlpha") {
        return log_alpha();
    }
    if (name == "logSqrt5") {
        return log_sqrt5();
    }
    if (name == "sqrt5") {
        return sqrt5();
    }
    if (name == "gamma" || name == "log2/logAlpha") {
        return gamma();
    }
    if (name == "logAlpha/log2") {
        return log_alpha_over_log2();
    }
    if (name == "mu" || name == "logSqrt5/logAlpha") {
        return mu_sqrt5();
    }
    auto args = [&](std::string_view prefix) -> std::string_view {
        if (name.substr(0, prefix.size()) != prefix || name.back() != ')') {
            return {};
        }
        return name.substr(prefix.size(), name.size() - prefix.size() - 1);
    };
    auto to_long = [&](std::string_view v) {
        long out = 0;
        const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
        if (ec != std::errc() || ptr != v.data() + v.size() || v.empty()) {
            throw std::invalid_argument("unknown constant: " + std::string(name));
        }
        return out;
    };
    if (auto a = args("mu_psi("); !a.empty()) {
        const auto comma = a.find(',');
        if (comma == std::string_view::npos) {
            throw std::invalid_argument("unknown constant: " + std::string(name));
        }
        return mu_psi(to_long(a.substr(0, comma)), to_long(a.substr(comma + 1)));
    }
    if (auto a = args("alphaPow("); !a.empty()) {
        return alpha_pow(to_long(a));
    }
    throw std::invalid_argument("unknown constant: " + std::string(name));
}

bool Constant::known_irrational() const
{
    switch (m_kind) {
    case Kind::Log2:
    case Kind::LogAlpha:
    case Kind::LogSqrt5:
    case Kind::Sqrt5:
    case Kind::Gamma:
    case Kind::LogAlphaOverLog2:
    case Kind::MuSqrt5:
        return true;
    case Kind::MuPsi:
        // rational exactly when psi = 2^-s alpha^r with s = 0, i.e. the
        // degenerate pairs; the registry does not vouch for any of them.
        return false;
    case Kind::AlphaPow:
        return m_k != 0;
    }
    return false;
}

namespace
{

Interval log2_at(mpfr_prec_t prec)
{
    Interval r(prec);
    mpfr_const_log2(r.lo_mut(), MPFR_RNDD);
    mpfr_const_log2(r.hi_mut(), MPFR_RNDU);
    return r;
}

Interval log_alpha_at(mpfr_prec_t prec)
{
    // log alpha = asinh(1/2)
    Interval r(prec);
    Scratch half(8);
    mpfr_set_d(half.v, 0.5, MPFR_RNDN);
    mpfr_asinh(r.lo_mut(), half.v, MPFR_RNDD);
    mpfr_asinh(r.hi_mut(), half.v, MPFR_RNDU);
    return r;
}

Interval log_sqrt5_at(mpfr_prec_t prec)
{
    Interval r(prec);
    mpfr_log_ui(r.lo_mut(), 5, MPFR_RNDD);
    mpfr_log_ui(r.hi_mut(), 5, MPFR_RNDU);
    mpfr_div_2ui(r.lo_mut(), r.lo(), 1, MPFR_RNDD);
    mpfr_div_2ui(r.hi_mut(), r.hi(), 1, MPFR_RNDU);
    return r;
}

Interval sqrt5_at(mpfr_prec_t prec)
{
    Interval r(prec);
    mpfr_sqrt_ui(r.lo_mut(), 5, MPFR_RNDD);
    mpfr_sqrt_ui(r.hi_mut(), 5, MPFR_RNDU);
    return r;
}

mpfr_prec_t rational_bits(const mpq_class &q)
{
    return static_cast<mpfr_prec_t>(mpz_sizeinbase(q.get_num_mpz_t(), 2) + mpz_sizeinbase(q.get_den_mpz_t(), 2));
}

} // namespace

Interval to_interval(const QuadElement &e, mpfr_prec_t prec)
{
    if (e.is_rational()) {
        return Interval::from_mpq(e.x(), prec);
    }
    const mpfr_prec_t work = prec + 2 * (rational_bits(e.x()) + rational_bits(e.y())) + 64;
    const Interval s5 = sqrt5_at(work);
    const Interval alpha = (Interval::from_int(1, work) + s5) / Interval::from_int(2, work);
    const Interval value = Interval::from_mpq(e.x(), work) + Interval::from_mpq(e.y(), work) * alpha;
    return value.rounded(prec);
}

Interval const_eval(const Constant &c, const Precision &ctx)
{
    const mpfr_prec_t prec = ctx.bits;
    const mpfr_prec_t work = ctx.bits + guard_bits;
    switch (c.kind()) {
    case Constant::Kind::Log2:
        return log2_at(prec);
    case Constant::Kind::LogAlpha:
        return log_alpha_at(prec);
    case Constant::Kind::LogSqrt5:
        return log_sqrt5_at(prec);
    case Constant::Kind::Sqrt5:
        return sqrt5_at(prec);
    case Constant::Kind::Gamma:
        return (log2_at(work) / log_alpha_at(work)).rounded(prec);
    case Constant::Kind::LogAlphaOverLog2:
        return (log_alpha_at(work) / log2_at(work)).rounded(prec);
    case Constant::Kind::MuSqrt5:
        return (log_sqrt5_at(work) / log_alpha_at(work)).rounded(prec);
    case Constant::Kind::MuPsi: {
        const QuadElement p = psi(c.t(), c.s());
        return (log(to_interval(p, work)) / log_alpha_at(work)).rounded(prec);
    }
    case Constant::Kind::AlphaPow:
        return to_interval(QuadElement::alpha().pow(c.k()), prec);
    }
    throw std::logic_error("const_eval: unhandled constant");
}

Producer producer(const Constant &c)
{
    return [c](const Precision &ctx) { return const_eval(c, ctx); };
}

Producer producer(const mpq_class &exact)
{
    return [exact](const Precision &ctx) { return Interval::from_mpq(exact, ctx.bits); };
}

bool decide_less(const Producer &a, const Producer &b, const Precision &ctx)
{
    Precision p = ctx;
    for (;;) {
        const Interval x = a(p);
        const Interval y = b(p);
        if (certainly_less(x, y)) {
            return true;
        }
        if (certainly_less(y, x)) {
            return false;
        }
        if (!p.can_escalate()) {
            throw PrecisionExhausted("decide_less: enclosures still overlap at " + std::to_string(p.bits) +
                                     " bits (probable exact equality)");
        }
        p = p.escalated();
    }
}

int decide_sign(const Producer &f, const Precision &ctx)
{
    Precision p = ctx;
    for (;;) {
        const Interval x = f(p);
        if (x.positive()) {
            return 1;
        }
        if (x.negative()) {
            return -1;
        }
        if (!p.can_escalate()) {
            throw PrecisionExhausted("decide_sign: enclosure still contains zero at " + std::to_string(p.bits) +
                                     " bits");
        }
        p = p.escalated();
    }
}

NearestIntDistance dist_nearest_int(const Interval &x)
{
    const mpfr_prec_t prec = x.precision();
    {
        Scratch w(prec);
        mpfr_sub(w.v, x.hi(), x.lo(), MPFR_RNDU);
        if (mpfr_cmp_d(w.v, 0.25) >= 0) {
            throw std::domain_error("dist_nearest_int: interval width must be below 1/4");
        }
    }
    // Integers and half-integers in [lo, hi] are the integers in [2lo, 2hi].
    Scratch twice_lo(prec);
    Scratch twice_hi(prec);
    mpfr_mul_2ui(twice_lo.v, x.lo(), 1, MPFR_RNDD);
    mpfr_mul_2ui(twice_hi.v, x.hi(), 1, MPFR_RNDU);
    mpz_class first;
    mpz_class last;
    mpfr_get_z(first.get_mpz_t(), twice_lo.v, MPFR_RNDU);
    mpfr_get_z(last.get_mpz_t(), twice_hi.v, MPFR_RNDD);
    const bool ambiguous = first <= last;

    // Endpoint distances, enclosed. The nearest integer to an endpoint is
    // exact; subtracting it needs the bits of the integer part as headroom.
    auto endpoint_dist = [&](mpfr_srcptr v) {
        mpz_class nearest;
        mpfr_get_z(nearest.get_mpz_t(), v, MPFR_RNDN);
        Interval d(prec);
        const mpfr_prec_t room = prec + static_cast<mpfr_prec_t>(mpz_sizeinbase(nearest.get_mpz_t(), 2));
        Scratch t(room);
        mpfr_sub_z(t.v, v, nearest.get_mpz_t(), MPFR_RNDN); // exact at this precision
        mpfr_abs(t.v, t.v, MPFR_RNDN);
        mpfr_set(d.lo_mut(), t.v, MPFR_RNDD);
        mpfr_set(d.hi_mut(), t.v, MPFR_RNDU);
        return d;
    };
    const Interval dl = endpoint_dist(x.lo());
    const Interval dh = endpoint_dist(x.hi());

    Interval out(prec);
    if (!ambiguous) {
        // ||.|| is monotone on [lo, hi]
        mpfr_min(out.lo_mut(), dl.lo(), dh.lo(), MPFR_RNDD);
        mpfr_max(out.hi_mut(), dl.hi(), dh.hi(), MPFR_RNDU);
        return {out, false};
    }
    // Contains an integer: lower bound 0. Contains a half-integer: upper
    // bound 1/2. Width < 1/4 means at most one of each.
    bool has_integer = false;
    bool has_half = false;
    for (mpz_class k = first; k <= last; ++k) {
        if (mpz_even_p(k.get_mpz_t()) != 0) {
            has_integer = true;
        } else {
            has_half = true;
        }
    }
    if (has_integer) {
        mpfr_set_zero(out.lo_mut(), 1);
    } else {
        mpfr_min(out.lo_mut(), dl.lo(), dh.lo(), MPFR_RNDD);
    }
    if (has_half) {
        mpfr_set_d(out.hi_mut(), 0.5, MPFR_RNDU);
    } else {
        mpfr_max(out.hi_mut(), dl.hi(), dh.hi(), MPFR_RNDU);
    }
    return {out, true};
}

} // namespace fibclose
