#include <fibclose/reduction.hpp>

#include <algorithm>
#include <atomic>
#include <stdexcept>
#include <thread>

namespace fibclose
{

namespace
{

long bitlen(const mpz_class &v)
{
    return static_cast<long>(mpz_sizeinbase(v.get_mpz_t(), 2));
}

std::shared_ptr<const ContFrac> expansion_for(const ReductionInstance &inst, const mpz_class &bound,
                                              std::size_t extra, const Precision &ctx)
{
    if (inst.cf) {
        if (auto c = inst.cf->first_q_exceeding(bound); c && c->index + extra < inst.cf->size()) {
            return inst.cf;
        }
    }
    const Convergent c = cf_first_q_exceeding(inst.gamma, bound, ctx);
    const std::size_t depth = std::min(c.index + extra + 1, cf_depth_cap);
    return std::make_shared<const ContFrac>(cf_expand(inst.gamma, depth, ctx));
}

enum class EpsSign { Positive, Nonpositive, Unknown };

struct EpsEval {
    EpsSign sign = EpsSign::Unknown;
    Interval eps;
};

EpsEval eval_epsilon(const ReductionInstance &inst, const mpz_class &q, const Precision &p)
{
    EpsEval out;
    try {
        const Interval g = const_eval(inst.gamma, p);
        const Interval m = inst.mu(p);
        const NearestIntDistance dg = dist_nearest_int(g * q);
        const NearestIntDistance dm = dist_nearest_int(m * q);
        out.eps = dm.value - dg.value * inst.M;
        if (out.eps.positive()) {
            out.sign = EpsSign::Positive;
        } else if (mpfr_sgn(out.eps.hi()) <= 0) {
            out.sign = EpsSign::Nonpositive;
        }
    } catch (const std::domain_error &) {
        // enclosure too wide at this precision
    }
    return out;
}

} // namespace

void ReductionInstance::validate() const
{
    if (M < 1) {
        throw std::invalid_argument("ReductionInstance: M must be at least 1");
    }
    if (!mu || !A || !B) {
        throw std::invalid_argument("ReductionInstance: mu, A and B must be set");
    }
    if (!gamma.known_irrational()) {
        throw std::invalid_argument("ReductionInstance: gamma must be a registered irrational");
    }
}

std::string failure_name(ReductionFailure f)
{
    switch (f) {
    case ReductionFailure::EpsilonNonpositive:
        return "epsilon_nonpositive";
    case ReductionFailure::Precision:
        return "precision";
    case ReductionFailure::ExpansionDepth:
        return "expansion_depth";
    }
    return "unknown";
}

ReductionOutcome dp_reduce(const ReductionInstance &inst, const Precision &ctx, std::size_t retry_cap)
{
    inst.validate();
    const mpz_class six_M = 6 * inst.M;
    ReductionOutcome out;
    std::shared_ptr<const ContFrac> cf;
    try {
        cf = expansion_for(inst, six_M, retry_cap, ctx);
    } catch (const PrecisionExhausted &) {
        out.failure = ReductionFailure::Precision;
        return out;
    } catch (const std::runtime_error &) {
        out.failure = ReductionFailure::ExpansionDepth;
        return out;
    }
    const std::size_t k0 = cf->first_q_exceeding(six_M)->index;

    for (std::size_t k = k0; k <= k0 + retry_cap; ++k) {
        if (k >= cf->size()) {
            out.failure = ReductionFailure::ExpansionDepth;
            return out;
        }
        const mpz_class &q = cf->q(k);
        out.convergent_index = k;
        out.q = q;
        ++out.attempts;

        // gamma q must be known to well below 1/M
        Precision p = ctx;
        p.bits = std::min(std::max(ctx.bits, bitlen(q) + bitlen(inst.M) + 96), ctx.bits_max);
        EpsEval e = eval_epsilon(inst, q, p);
        while (e.sign == EpsSign::Unknown && p.can_escalate()) {
            p = p.escalated();
            e = eval_epsilon(inst, q, p);
        }
        out.epsilon = e.eps;
        out.bits_used = p.bits;
        if (e.sign == EpsSign::Unknown) {
            out.failure = ReductionFailure::Precision;
            return out;
        }
        if (e.sign == EpsSign::Nonpositive) {
            continue;
        }
        out.log_ratio = log(inst.A(p) * q / e.eps) / log(inst.B(p));
        out.w_bound = out.log_ratio.ceil_hi();
        out.failure.reset();
        return out;
    }
    out.failure = ReductionFailure::EpsilonNonpositive;
    return out;
}

ReductionInstance first_form_instance(const mpz_class &M)
{
    ReductionInstance inst;
    inst.M = M;
    inst.mu = producer(Constant::mu_sqrt5());
    inst.mu_name = Constant::mu_sqrt5().name();
    inst.A = [](const Precision &p) {
        const Interval four = Interval::from_int(4, p.bits);
        return four * const_eval(Constant::sqrt5(), p) / const_eval(Constant::log_alpha(), p);
    };
    inst.B = [](const Precision &p) { return exp(const_eval(Constant::log_alpha(), p)); };
    return inst;
}

ReductionInstance second_form_instance(long t, long s, const mpz_class &M)
{
    ReductionInstance inst;
    inst.M = M;
    inst.mu = producer(Constant::mu_psi(t, s));
    inst.mu_name = Constant::mu_psi(t, s).name();
    inst.A = [](const Precision &p) {
        return Interval::from_int(4, p.bits) / const_eval(Constant::log_alpha(), p);
    };
    inst.B = [](const Precision &p) { return sqrt(Interval::from_int(2, p.bits)); };
    return inst;
}

// ---------------------------------------------------------------------------

Stage1Result stage1_reduce(const mpz_class &M, BoundRoute route, const Precision &ctx)
{
    Stage1Result res;
    res.M = M;
    res.route = route;
    res.outcome = dp_reduce(first_form_instance(M), ctx);
    if (!res.ok()) {
        return res;
    }
    const mpz_class &W = *res.outcome.w_bound;
    res.gap_bound = W;
    // n - a <= W - 1 together with n - a > n (1 - r) - 1 gives n (1 - r) < W
    Precision p = ctx;
    p.bits = ctx.bits + bitlen(W);
    const Interval r = const_eval(Constant::log_alpha_over_log2(), p);
    res.n_max_if_na_small = (Interval::from_mpz(W, p.bits) / (Interval::from_int(1, p.bits) - r)).ceil_hi() - 1;
    // both gaps <= W - 1
    res.gap_sum = 2 * (W - 1);
    res.a_bound_after = a_bound_from_gaps(route, res.gap_sum, ctx);
    return res;
}

const std::vector<std::pair<long, long>> &expected_special_pairs()
{
    static const std::vector<std::pair<long, long>> pairs{{0, 3}, {1, 1}, {1, 5}, {3, 0}, {3, 4},
                                                          {4, 3}, {5, 1}, {7, 8}, {8, 7}};
    return pairs;
}

PairOutcome reduce_pair(long t, long s, const mpz_class &M, std::shared_ptr<const ContFrac> cf, const Precision &ctx)
{
    PairOutcome po;
    po.t = t;
    po.s = s;
    po.decomposition = decompose_pow2_alpha(psi(t, s));
    ReductionInstance inst = second_form_instance(t, s, M);
    inst.cf = std::move(cf);
    po.outcome = dp_reduce(inst, ctx);
    if (po.special()) {
        return po;
    }
    if (!po.outcome.ok() && po.outcome.failure == ReductionFailure::EpsilonNonpositive) {
        // near-degenerate pair: walk on to the depth cap
        po.deep = true;
        po.outcome = dp_reduce(inst, ctx, cf_depth_cap);
    }
    if (po.outcome.ok()) {
        po.a_max = *po.outcome.w_bound - 1;
        po.n_max = n_max_for_a(po.a_max, ctx);
    }
    return po;
}

Stage2Result stage2_sweep(long gap_max, const mpz_class &M, const Precision &ctx, unsigned threads)
{
    if (gap_max < 0) {
        throw std::invalid_argument("stage2_sweep: gap_max must be non-negative");
    }
    Stage2Result res;
    res.gap_max = gap_max;
    res.M = M;

    const auto cf = std::make_shared<const ContFrac>(cf_expand(Constant::gamma(), cf_depth_cap, ctx));

    // psi is symmetric, so only t <= s is reduced
    std::vector<std::pair<long, long>> work;
    for (long t = 0; t <= gap_max; ++t) {
        for (long s = t; s <= gap_max; ++s) {
            work.emplace_back(t, s);
        }
    }
    std::vector<PairOutcome> done(work.size());
    std::atomic<std::size_t> next{0};
    const auto worker = [&] {
        for (std::size_t i = next++; i < work.size(); i = next++) {
            done[i] = reduce_pair(work[i].first, work[i].second, M, cf, ctx);
        }
    };
    unsigned n = threads != 0 ? threads : std::max(1U, std::thread::hardware_concurrency());
    n = std::min<unsigned>(n, static_cast<unsigned>(work.size()));
    if (n <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (unsigned i = 0; i < n; ++i) {
            pool.emplace_back(worker);
        }
        for (auto &th : pool) {
            th.join();
        }
    }

    const std::size_t side = static_cast<std::size_t>(gap_max) + 1;
    res.pairs.resize(side * side);
    for (auto &po : done) {
        const auto t = static_cast<std::size_t>(po.t);
        const auto s = static_cast<std::size_t>(po.s);
        if (t != s) {
            PairOutcome mirror = po;
            std::swap(mirror.t, mirror.s);
            if (mirror.decomposition) {
                mirror.decomposition = decompose_pow2_alpha(psi(mirror.t, mirror.s));
            }
            res.pairs[s * side + t] = std::move(mirror);
        }
        res.pairs[t * side + s] = std::move(po);
    }
    for (const auto &po : res.pairs) {
        if (po.special()) {
            res.special_pairs.emplace_back(po.t, po.s);
            continue;
        }
        if (!po.outcome.ok()) {
            ++res.failed;
            continue;
        }
        res.deep += po.deep ? 1 : 0;
        if (po.n_max > res.worst_n) {
            res.worst_n = po.n_max;
        }
    }
    return res;
}

// ---------------------------------------------------------------------------

SpecialCaseResult special_case_bound(long t, long s, const mpz_class &M, const Precision &ctx)
{
    const auto dec = decompose_pow2_alpha(psi(t, s));
    if (!dec) {
        throw std::logic_error("special_case_bound: psi(" + std::to_string(t) + "," + std::to_string(s) +
                               ") has no exact decomposition");
    }
    SpecialCaseResult res;
    res.t = t;
    res.s = s;
    res.decomposition = *dec;
    res.legendre = legendre_lower_bound(Constant::gamma(), M, ctx);

    // log psi / log alpha = r' - s' gamma
    {
        const Interval mu = const_eval(Constant::mu_psi(t, s), ctx);
        const Interval g = const_eval(Constant::gamma(), ctx);
        const Interval rhs = Interval::from_int(dec->r, ctx.bits) - g * mpz_class(dec->s);
        res.identity_ok = !certainly_less(mu, rhs) && !certainly_less(rhs, mu);
    }

    // |(a - s') gamma - (n - r')| lies between the Legendre bound and
    // (4/log alpha) 2^(-a/2) < (4/log alpha) 2^(-(n r + c38 - 1)/2).
    const mpz_class aM2 = res.legendre.a_max + 2;
    const auto upper = [](const mpz_class &n) {
        return [n](const Precision &q) {
            const mpfr_prec_t b = q.bits;
            const Interval r = const_eval(Constant::log_alpha_over_log2(), q);
            const Interval c38 = log(Interval::from_decimal("0.38", b)) / const_eval(Constant::log2(), q);
            const Interval e = -(Interval::from_mpz(n, b) * r + c38 - Interval::from_int(1, b)) /
                               Interval::from_int(2, b);
            return Interval::from_int(4, b) / const_eval(Constant::log_alpha(), q) * exp2(e);
        };
    };
    // a - s' <= a < n r + 1
    const auto local = [&](const mpz_class &n) {
        const Producer lower = [&](const Precision &q) {
            const mpfr_prec_t b = q.bits;
            const Interval r = const_eval(Constant::log_alpha_over_log2(), q);
            return Interval::from_int(1, b) /
                   (Interval::from_mpz(aM2, b) * (Interval::from_mpz(n, b) * r + Interval::from_int(1, b)));
        };
        return decide_less(upper(n), lower, ctx);
    };
    res.n_bound = solve_decreasing_threshold(local, 1) - 1;
    // a - s' < M
    const auto global = [&](const mpz_class &n) {
        const Producer lower = [&](const Precision &q) {
            return Interval::from_int(1, q.bits) / Interval::from_mpz(aM2 * M, q.bits);
        };
        return decide_less(upper(n), lower, ctx);
    };
    res.n_bound_global = solve_decreasing_threshold(global, 1) - 1;
    return res;
}

} // namespace fibclose
