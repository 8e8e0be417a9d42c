#include <fibclose/contfrac.hpp>

#include <stdexcept>
#include <string>

namespace fibclose
{

ContFrac::ContFrac(const std::vector<mpz_class> &quotients)
{
    for (const auto &a : quotients) {
        push_back(a);
    }
}

void ContFrac::push_back(const mpz_class &a)
{
    const std::size_t k = m_a.size();
    if (k > 0 && a <= 0) {
        throw std::invalid_argument("ContFrac: partial quotients after a_0 must be positive");
    }
    // seeds p_{-1} = 1, q_{-1} = 0, p_{-2} = 0, q_{-2} = 1
    const mpz_class p1 = k >= 1 ? m_p[k - 1] : mpz_class(1);
    const mpz_class q1 = k >= 1 ? m_q[k - 1] : mpz_class(0);
    const mpz_class p2 = k >= 2 ? m_p[k - 2] : (k == 1 ? mpz_class(1) : mpz_class(0));
    const mpz_class q2 = k >= 2 ? m_q[k - 2] : (k == 1 ? mpz_class(0) : mpz_class(1));
    m_a.push_back(a);
    m_p.emplace_back(a * p1 + p2);
    m_q.emplace_back(a * q1 + q2);
}

std::optional<Convergent> ContFrac::first_q_exceeding(const mpz_class &bound) const
{
    for (std::size_t k = 0; k < m_q.size(); ++k) {
        if (m_q[k] > bound) {
            return convergent(k);
        }
    }
    return std::nullopt;
}

namespace
{

// Attempts the expansion at a fixed precision; returns the certified prefix.
std::vector<mpz_class> expand_at(const Constant &x, std::size_t count, const Precision &p)
{
    std::vector<mpz_class> out;
    Interval tail = const_eval(x, p);
    while (out.size() < count) {
        const mpz_class a = tail.floor_lo();
        // the complete quotient must sit strictly inside (a, a + 1)
        if (tail.floor_hi() != a || mpfr_integer_p(tail.lo()) != 0) {
            break;
        }
        if (!out.empty() && a <= 0) {
            break;
        }
        out.push_back(a);
        if (out.size() == count) {
            break;
        }
        const Interval frac = tail - a;
        if (!frac.positive()) {
            break;
        }
        tail = Interval::from_int(1, p.bits) / frac;
    }
    return out;
}

} // namespace

ContFrac cf_expand(const Constant &x, std::size_t count, const Precision &ctx)
{
    if (!x.known_irrational()) {
        throw std::invalid_argument("cf_expand: " + x.name() + " is not a registered irrational");
    }
    if (count == 0 || count > cf_depth_cap) {
        throw std::invalid_argument("cf_expand: count must be in 1.." + std::to_string(cf_depth_cap));
    }
    Precision p = ctx;
    for (;;) {
        auto quotients = expand_at(x, count, p);
        if (quotients.size() == count) {
            return ContFrac(quotients);
        }
        if (!p.can_escalate()) {
            throw PrecisionExhausted("cf_expand: only " + std::to_string(quotients.size()) + " quotients of " +
                                     x.name() + " certified at " + std::to_string(p.bits) + " bits");
        }
        p = p.escalated();
    }
}

Convergent cf_first_q_exceeding(const Constant &x, const mpz_class &bound, const Precision &ctx,
                                std::size_t depth_cap)
{
    if (bound < 1) {
        throw std::invalid_argument("cf_first_q_exceeding: bound must be at least 1");
    }
    std::size_t depth = 16;
    for (;;) {
        depth = std::min(depth, depth_cap);
        const ContFrac cf = cf_expand(x, depth, ctx);
        if (auto c = cf.first_q_exceeding(bound)) {
            return *c;
        }
        if (depth == depth_cap) {
            throw std::runtime_error("cf_first_q_exceeding: no convergent denominator above the bound within " +
                                     std::to_string(depth_cap) + " quotients");
        }
        depth *= 2;
    }
}

mpq_class LegendreBound::lower_bound(const mpz_class &s) const
{
    mpq_class r(mpz_class(1), (a_max + 2) * s * s);
    r.canonicalize();
    return r;
}

LegendreBound legendre_lower_bound(const ContFrac &cf, const mpz_class &M)
{
    if (M < 1) {
        throw std::invalid_argument("legendre_lower_bound: M must be at least 1");
    }
    const auto c = cf.first_q_exceeding(M);
    if (!c) {
        throw std::runtime_error("legendre_lower_bound: expansion too short for M");
    }
    LegendreBound out;
    out.M = M;
    out.index_N = c->index;
    out.a_max = cf.a(0);
    out.argmax = 0;
    for (std::size_t i = 1; i <= c->index; ++i) {
        if (cf.a(i) > out.a_max) {
            out.a_max = cf.a(i);
            out.argmax = i;
        }
    }
    return out;
}

LegendreBound legendre_lower_bound(const Constant &x, const mpz_class &M, const Precision &ctx)
{
    const Convergent c = cf_first_q_exceeding(x, M, ctx);
    return legendre_lower_bound(cf_expand(x, c.index + 1, ctx), M);
}

} // namespace fibclose
