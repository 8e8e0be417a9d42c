#ifndef FIBCLOSE_REDUCTION_HPP
#define FIBCLOSE_REDUCTION_HPP

#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <gmpxx.h>

#include <fibclose/contfrac.hpp>
#include <fibclose/linforms.hpp>
#include <fibclose/quadfield.hpp>
#include <fibclose/realint.hpp>

namespace fibclose
{

// 0 < |u gamma - v + mu| < A B^-w with u <= M.
struct ReductionInstance {
    Constant gamma = Constant::gamma();
    Producer mu;
    Producer A;
    Producer B;
    mpz_class M{1};
    std::string mu_name;
    // Optional precomputed expansion of gamma; expanded on demand otherwise.
    std::shared_ptr<const ContFrac> cf;

    // Throws std::invalid_argument unless M >= 1 and producers are set.
    void validate() const;
};

enum class ReductionFailure { EpsilonNonpositive, Precision, ExpansionDepth };

[[nodiscard]] std::string failure_name(ReductionFailure f);

struct ReductionOutcome {
    std::size_t convergent_index = 0; // 0-based
    mpz_class q;
    Interval epsilon;
    Interval log_ratio;                 // log(A q / eps) / log B
    std::optional<mpz_class> w_bound;   // least W with no solution at w >= W
    std::optional<ReductionFailure> failure;
    std::size_t attempts = 0;           // convergents tried
    long bits_used = 0;

    [[nodiscard]] bool ok() const { return w_bound.has_value(); }
};

inline constexpr std::size_t default_retry_cap = 10;

// Dujella-Petho step: starts at the first convergent with q > 6M and moves
// to the next one while eps = ||mu q|| - M ||gamma q|| is certainly <= 0, at
// most retry_cap times.
[[nodiscard]] ReductionOutcome dp_reduce(const ReductionInstance &inst, const Precision &ctx = {},
                                         std::size_t retry_cap = default_retry_cap);

// gamma = log2/log alpha, mu = log sqrt5/log alpha, A = 4 sqrt5/log alpha,
// B = alpha.
[[nodiscard]] ReductionInstance first_form_instance(const mpz_class &M);

// Same gamma, mu = log psi(t, s)/log alpha, A = 4/log alpha, B = sqrt2.
[[nodiscard]] ReductionInstance second_form_instance(long t, long s, const mpz_class &M);

// ---------------------------------------------------------------------------

struct Stage1Result {
    mpz_class M;
    ReductionOutcome outcome;
    mpz_class gap_bound;         // W: every gap in the minimum is <= W - 1
    mpz_class n_max_if_na_small; // n bound when n - a is the small gap
    mpz_class gap_sum;           // bound used for 2n - m - l
    mpz_class a_bound_after;     // inclusive
    BoundRoute route = BoundRoute::Rounded;

    [[nodiscard]] bool ok() const { return outcome.ok(); }
};

[[nodiscard]] Stage1Result stage1_reduce(const mpz_class &M, BoundRoute route = BoundRoute::Rounded,
                                         const Precision &ctx = {});

struct PairOutcome {
    long t = 0;
    long s = 0;
    std::optional<Pow2AlphaDecomposition> decomposition; // set for degenerate pairs
    ReductionOutcome outcome;
    bool deep = false;      // needed convergents beyond the retry cap
    mpz_class a_max;        // inclusive, from w_bound
    mpz_class n_max;        // inclusive, through the a-window

    [[nodiscard]] bool special() const { return decomposition.has_value(); }
};

struct Stage2Result {
    long gap_max = 0;
    mpz_class M;
    std::vector<PairOutcome> pairs; // full grid, ordered by (t, s)
    std::vector<std::pair<long, long>> special_pairs;
    mpz_class worst_n; // max n_max over non-special pairs
    std::size_t failed = 0;
    std::size_t deep = 0;

    [[nodiscard]] bool ok() const { return failed == 0; }
};

// Sweeps (t, s) in {0..gap_max}^2. `threads` = 0 picks the hardware count.
[[nodiscard]] Stage2Result stage2_sweep(long gap_max, const mpz_class &M, const Precision &ctx = {},
                                        unsigned threads = 0);

// Single pair, exactly as the sweep handles it.
[[nodiscard]] PairOutcome reduce_pair(long t, long s, const mpz_class &M, std::shared_ptr<const ContFrac> cf,
                                      const Precision &ctx = {});

// The nine degenerate pairs listed as (n - m, n - l).
[[nodiscard]] const std::vector<std::pair<long, long>> &expected_special_pairs();

struct SpecialCaseResult {
    long t = 0;
    long s = 0;
    Pow2AlphaDecomposition decomposition{0, 0}; // psi 2^s' = alpha^r'
    LegendreBound legendre;
    bool identity_ok = false;  // log psi / log alpha overlaps r' - s' gamma
    mpz_class n_bound;         // inclusive, using a < n r + 1
    mpz_class n_bound_global;  // inclusive, using a < M instead
};

// Throws std::logic_error if psi(t, s) has no exact decomposition.
[[nodiscard]] SpecialCaseResult special_case_bound(long t, long s, const mpz_class &M, const Precision &ctx = {});

} // namespace fibclose

#endif
