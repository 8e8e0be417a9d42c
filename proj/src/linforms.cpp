#include <fibclose/linforms.hpp>

#include <fibclose/quadfield.hpp>

#include <mpfr.h>
#include <stdexcept>

namespace fibclose
{

namespace
{

Interval dec(const char *literal, mpfr_prec_t prec)
{
    return Interval::from_decimal(literal, prec);
}

Interval num(long v, mpfr_prec_t prec)
{
    return Interval::from_int(v, prec);
}

Interval max_one(const Interval &x)
{
    Interval out = x;
    if (mpfr_cmp_ui(out.lo(), 1) < 0) {
        mpfr_set_ui(out.lo_mut(), 1, MPFR_RNDD);
    }
    if (mpfr_cmp_ui(out.hi(), 1) < 0) {
        mpfr_set_ui(out.hi_mut(), 1, MPFR_RNDU);
    }
    return out;
}

// lhs.hi <= rhs.lo
bool certainly_le(const Interval &a, const Interval &b)
{
    return mpfr_lessequal_p(a.hi(), b.lo()) != 0;
}

AuditEntry audit(std::string claim, Interval lhs, Interval rhs, bool strict = true)
{
    const bool holds = strict ? certainly_less(lhs, rhs) : certainly_le(lhs, rhs);
    return AuditEntry{std::move(claim), std::move(lhs), std::move(rhs), holds};
}

// Everything the three-case analysis needs, at one precision.
struct Chain {
    Interval L2, La, r, c38;
    Interval C1, C2, G, K;
};

Chain make_chain(BoundRoute route, const Precision &p)
{
    const mpfr_prec_t b = p.bits;
    Chain c{const_eval(Constant::log2(), p),
            const_eval(Constant::log_alpha(), p),
            const_eval(Constant::log_alpha_over_log2(), p),
            Interval(b),
            Interval(b),
            Interval(b),
            Interval(b),
            Interval(b)};
    c.c38 = log(dec("0.38", b)) / c.L2;
    const Interval log3 = log(num(3, b));
    if (route == BoundRoute::Rounded) {
        c.C1 = dec("1.4e12", b);
        c.C2 = dec("2.31e12", b);
        c.G = dec("2.4e12", b);
        c.K = dec("6.86e24", b);
    } else {
        c.C1 = collapsed_constant_lambda1(p);
        c.C2 = collapsed_constant_lambda2(p);
        c.G = c.C2 + log(num(2, b) * sqrt(num(5, b))) / log3;
        c.K = c.C1 * (num(5, b) / log3 + num(2, b) * c.G);
    }
    return c;
}

mpfr_prec_t prec_for(const mpz_class &n, const Precision &p)
{
    return p.bits + static_cast<mpfr_prec_t>(mpz_sizeinbase(n.get_mpz_t(), 2));
}

Precision widened(const Precision &p, const mpz_class &n)
{
    Precision q = p;
    q.bits = prec_for(n, p);
    q.bits_max = std::max(q.bits_max, q.bits);
    return q;
}

} // namespace

// ---------------------------------------------------------------------------

Interval log_height_rational(const mpz_class &p, const mpz_class &q, const Precision &ctx)
{
    if (q <= 0) {
        throw std::invalid_argument("log_height_rational: denominator must be positive");
    }
    mpz_class g;
    mpz_gcd(g.get_mpz_t(), p.get_mpz_t(), q.get_mpz_t());
    if (g != 1) {
        throw std::invalid_argument("log_height_rational: fraction not in lowest terms");
    }
    const mpz_class m = abs(p) > q ? mpz_class(abs(p)) : q;
    return log(Interval::from_mpz(m, ctx.bits));
}

Interval log_height_named(NamedAlgebraic sym, const Precision &ctx)
{
    switch (sym) {
    case NamedAlgebraic::Alpha:
        return const_eval(Constant::log_alpha(), ctx) / num(2, ctx.bits);
    case NamedAlgebraic::Sqrt5:
        return const_eval(Constant::log_sqrt5(), ctx);
    }
    throw std::invalid_argument("log_height_named: unknown symbol");
}

Interval log_height(const mpz_class &leading, const std::vector<Interval> &conjugates, const Precision &ctx)
{
    if (leading == 0 || conjugates.empty()) {
        throw std::invalid_argument("log_height: need a non-zero leading coefficient and at least one conjugate");
    }
    Interval sum = log(Interval::from_mpz(abs(leading), ctx.bits));
    for (const auto &eta : conjugates) {
        sum = sum + log(max_one(abs(eta)));
    }
    return sum / num(static_cast<long>(conjugates.size()), ctx.bits);
}

Gamma3Height height_gamma3_upper(const mpz_class &dm, const mpz_class &dl, const Precision &ctx)
{
    if (dm < 0 || dl < 0) {
        throw std::invalid_argument("height_gamma3_upper: gaps must be non-negative");
    }
    const mpfr_prec_t b = prec_for(dm + dl, ctx);
    Precision p = ctx;
    p.bits = b;
    const Interval la = const_eval(Constant::log_alpha(), p);
    const Interval gaps = Interval::from_mpz(dm + dl, b);
    Gamma3Height out{log(num(4, b) * sqrt(num(5, b))) + gaps * la / num(2, b), num(5, b) + gaps * la};
    return out;
}

// ---------------------------------------------------------------------------

void MatveevInput::validate() const
{
    if (t < 1 || D < 1 || B < 1) {
        throw std::invalid_argument("MatveevInput: need t >= 1, D >= 1, B >= 1");
    }
    if (A.size() != static_cast<std::size_t>(t)) {
        throw std::invalid_argument("MatveevInput: expected one A_i per logarithm");
    }
    const mpq_class floor_A = parse_decimal("0.16");
    for (const auto &a : A) {
        // an enclosure of 0.16 itself must pass
        if (a.hi_q() < floor_A) {
            throw std::invalid_argument("MatveevInput: A_i below 0.16");
        }
    }
}

Interval matveev_prefactor(const MatveevInput &inp, const Precision &ctx)
{
    inp.validate();
    const mpfr_prec_t b = ctx.bits;
    const Interval tt = num(inp.t, b);
    const Interval dd = num(inp.D, b);
    Interval out = dec("1.4", b) * pow(num(30, b), inp.t + 3) * pow(tt, 4) * sqrt(tt) * dd * dd *
                   (num(1, b) + log(dd));
    for (const auto &a : inp.A) {
        out = out * a;
    }
    return out;
}

Interval matveev_exponent(const MatveevInput &inp, const Precision &ctx)
{
    const Interval pre = matveev_prefactor(inp, ctx);
    return pre * (num(1, ctx.bits) + log(Interval::from_mpz(inp.B, prec_for(inp.B, ctx))));
}

namespace
{

Interval collapsed(const char *A3, const Precision &ctx)
{
    const mpfr_prec_t b = ctx.bits;
    MatveevInput in{3, 2, mpz_class(1), {dec("1.4", b), dec("0.5", b), dec(A3, b)}};
    return num(2, b) * matveev_prefactor(in, ctx);
}

} // namespace

Interval collapsed_constant_lambda1(const Precision &ctx)
{
    // A3 is carried outside as 5 + (2n - m - l) log alpha
    return collapsed("1", ctx);
}

Interval collapsed_constant_lambda2(const Precision &ctx)
{
    return collapsed("1.7", ctx);
}

// ---------------------------------------------------------------------------

ARange a_range_for_n(const mpz_class &n, const Precision &ctx)
{
    if (n < 4) {
        throw std::invalid_argument("a_range_for_n: needs n >= 4");
    }
    Precision p = widened(ctx, n);
    const mpfr_prec_t b = p.bits;
    const Interval r = const_eval(Constant::log_alpha_over_log2(), p);
    const Interval c38 = log(dec("0.38", b)) / const_eval(Constant::log2(), p);
    const Interval nr = Interval::from_mpz(n, b) * r;
    const Interval lo = nr + c38 - num(1, b);
    const Interval hi = nr + num(1, b);
    ARange out{lo.floor_lo() + 1, hi.ceil_hi() - 1};
    if (out.a_hi >= n) {
        throw std::logic_error("a_range_for_n: a < n violated");
    }
    return out;
}

mpz_class n_max_for_a(const mpz_class &a_max, const Precision &ctx)
{
    Precision p = widened(ctx, a_max);
    const mpfr_prec_t b = p.bits;
    const Interval r = const_eval(Constant::log_alpha_over_log2(), p);
    const Interval c38 = log(dec("0.38", b)) / const_eval(Constant::log2(), p);
    // n r + c38 - 1 < a <= a_max
    const Interval x = (Interval::from_mpz(a_max, b) + num(1, b) - c38) / r;
    return x.ceil_hi() - 1;
}

mpz_class solve_decreasing_threshold(const IntPredicate &pred, const mpz_class &start, const mpz_class &limit)
{
    if (pred(start)) {
        return start;
    }
    mpz_class lo = start;
    mpz_class step = 1;
    mpz_class hi = start + step;
    while (!pred(hi)) {
        lo = hi;
        step *= 2;
        hi = start + step;
        if (hi > limit) {
            throw std::runtime_error("solve_decreasing_threshold: no threshold below the limit");
        }
    }
    while (hi - lo > 1) {
        const mpz_class mid = (lo + hi) / 2;
        if (pred(mid)) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    return hi;
}

// ---------------------------------------------------------------------------

bool BoundReport::audit_ok() const
{
    for (const auto &e : audit) {
        if (!e.holds) {
            return false;
        }
    }
    return true;
}

std::string route_name(BoundRoute r)
{
    return r == BoundRoute::Rounded ? "rounded" : "tight";
}

namespace
{

CaseBound finish_case(std::string tag, const mpz_class &threshold, const Precision &ctx)
{
    CaseBound c;
    c.tag = std::move(tag);
    c.n_max = threshold - 1;
    c.a_max = a_range_for_n(c.n_max, ctx).a_hi;
    return c;
}

} // namespace

BoundReport derive_first_bounds(BoundRoute route, const Precision &ctx)
{
    const Chain c = make_chain(route, ctx);
    const mpfr_prec_t b = ctx.bits;
    BoundReport rep;
    rep.route = route;
    rep.C1 = c.C1;
    rep.C2 = c.C2;
    rep.gap_coeff = c.G;
    rep.cases12_coeff = c.K;

    const Interval one = num(1, b);
    const Interval two = num(2, b);
    const Interval five = num(5, b);
    const Interval log3 = log(num(3, b));
    const Interval sqrt5 = sqrt(five);
    const Interval alpha = (one + sqrt5) / two;
    const Interval abs_beta = one / alpha;

    auto &au = rep.audit;
    if (route == BoundRoute::Rounded) {
        au.push_back(audit("collapsed constant of Lambda1 <= 1.4e12", collapsed_constant_lambda1(ctx), c.C1, false));
        au.push_back(audit("collapsed constant of Lambda2 <= 2.31e12", collapsed_constant_lambda2(ctx), c.C2, false));
        // in the tight route these two hold by definition
        au.push_back(audit("C2 + log(2 sqrt5)/log 3 <= gap coefficient", c.C2 + log(two * sqrt5) / log3, c.G, false));
        au.push_back(audit("C1 (5/log 3 + 2 gap coefficient) <= cases 1-2 coefficient",
                           c.C1 * (five / log3 + two * c.G), c.K, false));
    }
    au.push_back(audit("D h(2) < A1 = 1.4", two * c.L2, dec("1.4", b)));
    au.push_back(audit("D h(alpha) < A2 = 0.5", c.La, dec("0.5", b)));
    au.push_back(audit("D h(sqrt5) < A3 = 1.7", two * log(sqrt5), dec("1.7", b)));
    au.push_back(audit("2 log(4 sqrt5) < 5", two * log(num(4, b) * sqrt5), five));
    au.push_back(audit("log(3/sqrt5) < 1", log(num(3, b) / sqrt5), one));
    au.push_back(audit("log sqrt5 < 1", log(sqrt5), one));
    au.push_back(audit("1 + log 3 < 2 log 3", one + log3, two * log3));
    au.push_back(audit("0.48 (1 + 1/alpha + 1/alpha^2) < 0.97",
                       dec("0.48", b) * (one + abs_beta + abs_beta * abs_beta), dec("0.97", b)));
    au.push_back(audit("(|beta|^4 + 2 |beta|^2)/sqrt5 < 3/5",
                       (pow(abs_beta, 4) + two * pow(abs_beta, 2)) / sqrt5, dec("0.6", b)));
    au.push_back(audit("|beta|^2 < 1/2", pow(abs_beta, 2), dec("0.5", b)));
    au.push_back(audit("sqrt2 < alpha", sqrt(two), alpha));
    au.push_back(audit("exact solutions of alpha^n + alpha^m + alpha^l = 2^a sqrt5, 4 <= n <= 80",
                       num(lambda1_coincidences(4, 80), b), one));
    au.push_back(audit("exact solutions of alpha^n = 2^a sqrt5, n, a <= 200", num(lambda2_coincidences(200), b),
                       one));

    // cases 1-2: ((n r + c38 - 1)/2 - 1) log2 >= K log^2 n rules n out
    const auto cases12 = [&](const mpz_class &n) {
        const Precision p = widened(ctx, n);
        const Producer lhs = [&](const Precision &q) {
            const Chain k = make_chain(route, q);
            const mpfr_prec_t qb = q.bits;
            const Interval nn = Interval::from_mpz(n, qb);
            return ((nn * k.r + k.c38 - num(1, qb)) / num(2, qb) - num(1, qb)) * k.L2;
        };
        const Producer rhs = [&](const Precision &q) {
            const Chain k = make_chain(route, q);
            const Interval ln = log(Interval::from_mpz(n, q.bits));
            return k.K * ln * ln;
        };
        return decide_less(rhs, lhs, p);
    };
    rep.cases12 = finish_case("cases 1-2", solve_decreasing_threshold(cases12, 3), ctx);

    // case 3: (n (1 - r) - 1) log alpha >= G log n rules n out
    const auto case3 = [&](const mpz_class &n) {
        const Precision p = widened(ctx, n);
        const Producer lhs = [&](const Precision &q) {
            const Chain k = make_chain(route, q);
            const mpfr_prec_t qb = q.bits;
            return (Interval::from_mpz(n, qb) * (num(1, qb) - k.r) - num(1, qb)) * k.La;
        };
        const Producer rhs = [&](const Precision &q) {
            const Chain k = make_chain(route, q);
            return k.G * log(Interval::from_mpz(n, q.bits));
        };
        return decide_less(rhs, lhs, p);
    };
    rep.case3 = finish_case("case 3", solve_decreasing_threshold(case3, 3), ctx);

    rep.combined.tag = "combined";
    rep.combined.n_max = rep.cases12.n_max > rep.case3.n_max ? rep.cases12.n_max : rep.case3.n_max;
    rep.combined.a_max = rep.cases12.a_max > rep.case3.a_max ? rep.cases12.a_max : rep.case3.a_max;
    return rep;
}

mpz_class a_bound_from_gaps(BoundRoute route, const mpz_class &gaps, const Precision &ctx)
{
    if (gaps < 0) {
        throw std::invalid_argument("a_bound_from_gaps: gaps must be non-negative");
    }
    const auto pred = [&](const mpz_class &a) {
        const Precision p = widened(ctx, a);
        const Producer lhs = [&](const Precision &q) {
            const Chain k = make_chain(route, q);
            const mpfr_prec_t qb = q.bits;
            return (Interval::from_mpz(a, qb) / num(2, qb) - num(1, qb)) * k.L2;
        };
        const Producer rhs = [&](const Precision &q) {
            const Chain k = make_chain(route, q);
            const mpfr_prec_t qb = q.bits;
            // largest n allowed by the window for this a
            const Interval n = (Interval::from_mpz(a, qb) + num(1, qb) - k.c38) / k.r;
            return k.C1 * log(n) * (num(5, qb) + Interval::from_mpz(gaps, qb) * k.La);
        };
        return decide_less(rhs, lhs, p);
    };
    return solve_decreasing_threshold(pred, 2) - 1;
}

long lambda1_coincidences(long n_lo, long n_hi)
{
    if (n_lo < 4 || n_hi < n_lo) {
        throw std::invalid_argument("lambda1_coincidences: need 4 <= n_lo <= n_hi");
    }
    std::vector<QuadElement> apow;
    apow.reserve(static_cast<std::size_t>(n_hi) + 1);
    apow.push_back(QuadElement::one());
    for (long k = 1; k <= n_hi; ++k) {
        apow.push_back(apow.back() * QuadElement::alpha());
    }
    long hits = 0;
    for (long n = n_lo; n <= n_hi; ++n) {
        const ARange ar = a_range_for_n(n);
        std::vector<QuadElement> targets;
        for (mpz_class a = ar.a_lo; a <= ar.a_hi; ++a) {
            if (a < 0) {
                continue;
            }
            const mpz_class p2 = mpz_class(1) << static_cast<mp_bitcnt_t>(a.get_ui());
            targets.push_back(QuadElement(mpq_class(p2)) * QuadElement::sqrt5());
        }
        for (long m = 0; m <= n; ++m) {
            const QuadElement nm = apow[n] + apow[m];
            for (long l = 0; l <= m; ++l) {
                const QuadElement s = nm + apow[l];
                for (const auto &t : targets) {
                    hits += s == t ? 1 : 0;
                }
            }
        }
    }
    return hits;
}

long lambda2_coincidences(long bound)
{
    long hits = 0;
    QuadElement an = QuadElement::one();
    for (long n = 0; n <= bound; ++n) {
        QuadElement t = QuadElement::sqrt5();
        for (long a = 0; a <= bound; ++a) {
            hits += an == t ? 1 : 0;
            t *= QuadElement(mpq_class(2));
        }
        an *= QuadElement::alpha();
    }
    return hits;
}

} // namespace fibclose
