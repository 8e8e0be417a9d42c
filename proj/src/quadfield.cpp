#include <fibclose/quadfield.hpp>

#include <sstream>
#include <stdexcept>
#include <utility>

namespace fibclose
{

QuadElement::QuadElement(mpq_class x, mpq_class y) : m_x(std::move(x)), m_y(std::move(y))
{
    m_x.canonicalize();
    m_y.canonicalize();
}

QuadElement QuadElement::conj() const
{
    // x + y(1 - alpha)
    return QuadElement(m_x + m_y, -m_y);
}

mpq_class QuadElement::norm() const
{
    return m_x * m_x + m_x * m_y - m_y * m_y;
}

QuadElement QuadElement::inverse() const
{
    const mpq_class n = norm();
    if (sgn(n) == 0) {
        throw std::domain_error("QuadElement: inverse of zero");
    }
    const QuadElement c = conj();
    return QuadElement(c.m_x / n, c.m_y / n);
}

QuadElement QuadElement::pow(long k) const
{
    QuadElement base = k < 0 ? inverse() : *this;
    unsigned long e = k < 0 ? static_cast<unsigned long>(-(k + 1)) + 1 : static_cast<unsigned long>(k);
    QuadElement result = one();
    while (e != 0) {
        if ((e & 1) != 0) {
            result *= base;
        }
        e >>= 1;
        if (e != 0) {
            base *= base;
        }
    }
    return result;
}

int QuadElement::sign() const
{
    // x + y alpha = (2x + y)/2 + (y/2) sqrt5
    const mpq_class u = 2 * m_x + m_y;
    const int su = sgn(u);
    const int sv = sgn(m_y);
    if (sv == 0) {
        return su;
    }
    if (su == 0 || su == sv) {
        return sv;
    }
    // opposite signs: compare u^2 with 5 y^2
    const int cmp = ::cmp(u * u, 5 * m_y * m_y);
    return cmp > 0 ? su : sv;
}

QuadElement &QuadElement::operator+=(const QuadElement &o)
{
    m_x += o.m_x;
    m_y += o.m_y;
    return *this;
}

QuadElement &QuadElement::operator-=(const QuadElement &o)
{
    m_x -= o.m_x;
    m_y -= o.m_y;
    return *this;
}

QuadElement &QuadElement::operator*=(const QuadElement &o)
{
    // (a + b alpha)(c + d alpha) = ac + bd + (ad + bc + bd) alpha
    const mpq_class bd = m_y * o.m_y;
    mpq_class x = m_x * o.m_x + bd;
    mpq_class y = m_x * o.m_y + m_y * o.m_x + bd;
    m_x = std::move(x);
    m_y = std::move(y);
    return *this;
}

QuadElement &QuadElement::operator/=(const QuadElement &o)
{
    return *this *= o.inverse();
}

std::string QuadElement::to_string() const
{
    std::ostringstream os;
    os << *this;
    return os.str();
}

std::ostream &operator<<(std::ostream &os, const QuadElement &e)
{
    return os << e.x() << (sgn(e.y()) < 0 ? " - " : " + ") << abs(e.y()) << "*alpha";
}

QuadElement psi(long t, long s)
{
    const QuadElement inv_alpha = QuadElement::alpha().inverse();
    const QuadElement denom = QuadElement::one() + inv_alpha.pow(t) + inv_alpha.pow(s);
    return QuadElement::sqrt5() / denom;
}

std::optional<Pow2AlphaDecomposition> decompose_pow2_alpha(const QuadElement &e, long r_max, long s_max)
{
    if (e.is_zero()) {
        return std::nullopt;
    }
    // N(e) must be +-4^{-s}
    const mpq_class n = abs(e.norm());
    const mpz_class &num = n.get_num();
    const mpz_class &den = n.get_den();
    long s = 0;
    if (num == 1) {
        if (mpz_popcount(den.get_mpz_t()) != 1 || mpz_scan1(den.get_mpz_t(), 0) % 2 != 0) {
            return std::nullopt;
        }
        s = static_cast<long>(mpz_scan1(den.get_mpz_t(), 0) / 2);
    } else if (den == 1) {
        if (mpz_popcount(num.get_mpz_t()) != 1 || mpz_scan1(num.get_mpz_t(), 0) % 2 != 0) {
            return std::nullopt;
        }
        s = -static_cast<long>(mpz_scan1(num.get_mpz_t(), 0) / 2);
    } else {
        return std::nullopt;
    }
    if (s > s_max || -s > s_max) {
        return std::nullopt;
    }
    QuadElement scaled = e;
    if (s >= 0) {
        scaled *= QuadElement(mpq_class(mpz_class(1) << static_cast<mp_bitcnt_t>(s)));
    } else {
        scaled *= QuadElement(mpq_class(1, mpz_class(1) << static_cast<mp_bitcnt_t>(-s)));
    }
    // alpha^r for r >= 0 is F_{r-1} + F_r alpha, so both coefficients are
    // integers; the negative powers are scanned separately.
    QuadElement up = QuadElement::one();
    QuadElement down = QuadElement::one();
    const QuadElement inv_alpha = QuadElement::alpha().inverse();
    for (long r = 0; r <= r_max; ++r) {
        if (up == scaled) {
            return Pow2AlphaDecomposition{r, s};
        }
        if (r > 0 && down == scaled) {
            return Pow2AlphaDecomposition{-r, s};
        }
        up *= QuadElement::alpha();
        down *= inv_alpha;
    }
    return std::nullopt;
}

} // namespace fibclose
