#ifndef FIBCLOSE_CONTFRAC_HPP
#define FIBCLOSE_CONTFRAC_HPP

#include <cstddef>
#include <optional>
#include <vector>

#include <gmpxx.h>

#include <fibclose/realint.hpp>

namespace fibclose
{

// p_k/q_k = [a_0; a_1, ..., a_k]. `index` is k (0-based); `ordinal` is the
// 1-based position of the convergent in the list p_0/q_0, p_1/q_1, ...
struct Convergent {
    std::size_t index = 0;
    mpz_class p;
    mpz_class q;

    [[nodiscard]] std::size_t ordinal() const { return index + 1; }
};

// Certified partial quotients and convergents of a registered irrational.
class ContFrac
{
public:
    ContFrac() = default;
    explicit ContFrac(const std::vector<mpz_class> &quotients);

    void push_back(const mpz_class &a);

    [[nodiscard]] std::size_t size() const { return m_a.size(); }
    [[nodiscard]] const std::vector<mpz_class> &quotients() const { return m_a; }
    [[nodiscard]] const mpz_class &a(std::size_t k) const { return m_a.at(k); }
    [[nodiscard]] const mpz_class &p(std::size_t k) const { return m_p.at(k); }
    [[nodiscard]] const mpz_class &q(std::size_t k) const { return m_q.at(k); }
    [[nodiscard]] Convergent convergent(std::size_t k) const { return {k, p(k), q(k)}; }

    // Smallest k with q_k > bound among the computed convergents.
    [[nodiscard]] std::optional<Convergent> first_q_exceeding(const mpz_class &bound) const;

private:
    std::vector<mpz_class> m_a;
    std::vector<mpz_class> m_p;
    std::vector<mpz_class> m_q;
};

// Hard cap on the number of quotients any expansion may request.
inline constexpr std::size_t cf_depth_cap = 200;

// First `count` partial quotients of x. Each quotient is accepted only when
// the enclosure of the complete quotient lies strictly between two
// consecutive integers; otherwise the whole expansion restarts at doubled
// precision. Throws std::invalid_argument for constants not registered as
// irrational and PrecisionExhausted at bits_max.
[[nodiscard]] ContFrac cf_expand(const Constant &x, std::size_t count, const Precision &ctx);

// Smallest k with q_k > bound, expanding as deep as needed (up to
// depth_cap quotients). Throws std::runtime_error when the cap is hit.
[[nodiscard]] Convergent cf_first_q_exceeding(const Constant &x, const mpz_class &bound, const Precision &ctx,
                                              std::size_t depth_cap = cf_depth_cap);

// Legendre lower bound |x - r/s| > 1/((a_max + 2) s^2), valid for 0 < s < M,
// where N is the least index with q_N > M and a_max = max{a_0..a_N}.
struct LegendreBound {
    mpz_class M;
    std::size_t index_N = 0;
    mpz_class a_max;
    std::size_t argmax = 0;

    // 1/((a_max + 2) s^2), exact.
    [[nodiscard]] mpq_class lower_bound(const mpz_class &s) const;
};

[[nodiscard]] LegendreBound legendre_lower_bound(const ContFrac &cf, const mpz_class &M);
[[nodiscard]] LegendreBound legendre_lower_bound(const Constant &x, const mpz_class &M, const Precision &ctx);

} // namespace fibclose

#endif
