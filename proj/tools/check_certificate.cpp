// Independent re-validation of a fibclose certificate.
//
// Shares no code with the library: Fibonacci numbers, the continued
// fraction of log2/log(alpha), the field arithmetic used for psi, and every
// real-valued quantity are recomputed here from scratch. Reals are carried
// at 2048 bits with round-to-nearest; a comparison is only accepted when the
// two sides differ by far more than the accumulated rounding error, so an
// undecided comparison is reported instead of guessed.

#include <gmpxx.h>
#include <json.hpp>
#include <mpfr.h>

#include <algorithm>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

using Json = nlohmann::ordered_json;

namespace
{

constexpr mpfr_prec_t kBits = 2048;

class Real
{
public:
    Real() { mpfr_init2(v, kBits); mpfr_set_zero(v, 1); }
    Real(long x) : Real() { mpfr_set_si(v, x, MPFR_RNDN); }
    Real(const mpz_class &x) : Real() { mpfr_set_z(v, x.get_mpz_t(), MPFR_RNDN); }
    Real(const mpq_class &x) : Real() { mpfr_set_q(v, x.get_mpq_t(), MPFR_RNDN); }
    Real(const Real &o) : Real() { mpfr_set(v, o.v, MPFR_RNDN); }
    Real &operator=(const Real &o) { mpfr_set(v, o.v, MPFR_RNDN); return *this; }
    ~Real() { mpfr_clear(v); }

    mpfr_t v;
};

Real operator+(const Real &a, const Real &b) { Real r; mpfr_add(r.v, a.v, b.v, MPFR_RNDN); return r; }
Real operator-(const Real &a, const Real &b) { Real r; mpfr_sub(r.v, a.v, b.v, MPFR_RNDN); return r; }
Real operator*(const Real &a, const Real &b) { Real r; mpfr_mul(r.v, a.v, b.v, MPFR_RNDN); return r; }
Real operator/(const Real &a, const Real &b) { Real r; mpfr_div(r.v, a.v, b.v, MPFR_RNDN); return r; }
Real operator-(const Real &a) { Real r; mpfr_neg(r.v, a.v, MPFR_RNDN); return r; }
Real rlog(const Real &a) { Real r; mpfr_log(r.v, a.v, MPFR_RNDN); return r; }
Real rsqrt(const Real &a) { Real r; mpfr_sqrt(r.v, a.v, MPFR_RNDN); return r; }
Real rexp2(const Real &a) { Real r; mpfr_exp2(r.v, a.v, MPFR_RNDN); return r; }
Real rpow(const Real &a, long k) { Real r; mpfr_pow_si(r.v, a.v, k, MPFR_RNDN); return r; }
Real rabs(const Real &a) { Real r; mpfr_abs(r.v, a.v, MPFR_RNDN); return r; }

Real dec(const std::string &s)
{
    Real r;
    mpfr_set_str(r.v, s.c_str(), 10, MPFR_RNDN);
    return r;
}

// Comparison with a safety margin. Every quantity below is a short chain of
// operations on numbers far from the limits of 2048 bits, so a relative gap
// of 2^-1800 is far outside the rounding noise.
enum class Cmp { Less, Greater, Undecided };

Cmp compare(const Real &a, const Real &b)
{
    Real diff = a - b;
    Real scale = rabs(a) + rabs(b) + Real(1);
    Real tol;
    mpfr_mul_2si(tol.v, scale.v, -1800, MPFR_RNDN);
    if (mpfr_cmp(rabs(diff).v, tol.v) <= 0) {
        return Cmp::Undecided;
    }
    return mpfr_sgn(diff.v) < 0 ? Cmp::Less : Cmp::Greater;
}

mpz_class ceil_of(const Real &x)
{
    mpz_class z;
    mpfr_get_z(z.get_mpz_t(), x.v, MPFR_RNDU);
    // refuse values too close to an integer to call
    if (compare(Real(z), x) == Cmp::Undecided) {
        throw std::runtime_error("ceil of a value indistinguishable from an integer");
    }
    return z;
}

Real dist_int(const Real &x)
{
    Real r;
    mpfr_rint(r.v, x.v, MPFR_RNDN);
    return rabs(x - r);
}

struct Consts {
    Real log2, logA, sqrt5, alpha, gamma, r, c38, mu;
    Consts()
    {
        mpfr_const_log2(log2.v, MPFR_RNDN);
        sqrt5 = rsqrt(Real(5));
        alpha = (Real(1) + sqrt5) / Real(2);
        logA = rlog(alpha);
        gamma = log2 / logA;
        r = logA / log2;
        c38 = rlog(dec("0.38")) / log2;
        mu = rlog(sqrt5) / logA;
    }
};

const Consts &K()
{
    static const Consts k;
    return k;
}

// ---------------------------------------------------------------------------
// exact numbers u + v sqrt5

struct Q5 {
    mpq_class u, v;
};

Q5 mul(const Q5 &a, const Q5 &b)
{
    Q5 r{a.u * b.u + 5 * a.v * b.v, a.u * b.v + a.v * b.u};
    r.u.canonicalize();
    r.v.canonicalize();
    return r;
}

Q5 add(const Q5 &a, const Q5 &b)
{
    return {a.u + b.u, a.v + b.v};
}

Q5 inv(const Q5 &a)
{
    const mpq_class n = a.u * a.u - 5 * a.v * a.v;
    Q5 r{a.u / n, -a.v / n};
    r.u.canonicalize();
    r.v.canonicalize();
    return r;
}

Q5 qpow(Q5 b, long k)
{
    if (k < 0) {
        b = inv(b);
        k = -k;
    }
    Q5 r{1, 0};
    for (long i = 0; i < k; ++i) {
        r = mul(r, b);
    }
    return r;
}

const Q5 kAlpha{mpq_class(1, 2), mpq_class(1, 2)};

Q5 psi_exact(long t, long s)
{
    const Q5 ia = inv(kAlpha);
    const Q5 d = add(add(Q5{1, 0}, qpow(ia, t)), qpow(ia, s));
    return mul(Q5{0, 1}, inv(d));
}

bool eq(const Q5 &a, const Q5 &b)
{
    return a.u == b.u && a.v == b.v;
}

Real psi_real(long t, long s)
{
    const Consts &k = K();
    return k.sqrt5 / (Real(1) + rpow(k.alpha, -t) + rpow(k.alpha, -s));
}

// ---------------------------------------------------------------------------
// continued fraction of gamma from two rational brackets

struct CF {
    std::vector<mpz_class> a, p, q;
};

std::vector<mpz_class> rational_cf(mpq_class x, std::size_t limit)
{
    std::vector<mpz_class> out;
    for (std::size_t i = 0; i < limit; ++i) {
        mpz_class f;
        mpz_fdiv_q(f.get_mpz_t(), x.get_num_mpz_t(), x.get_den_mpz_t());
        out.push_back(f);
        x -= f;
        if (x == 0) {
            break;
        }
        x = 1 / x;
    }
    return out;
}

CF gamma_cf(std::size_t count)
{
    Real lo = K().gamma;
    Real hi = K().gamma;
    mpfr_nextbelow(lo.v);
    mpfr_nextbelow(lo.v);
    mpfr_nextabove(hi.v);
    mpfr_nextabove(hi.v);
    mpq_class ql, qh;
    mpfr_get_q(ql.get_mpq_t(), lo.v);
    mpfr_get_q(qh.get_mpq_t(), hi.v);
    const auto a = rational_cf(ql, count + 2);
    const auto b = rational_cf(qh, count + 2);
    CF cf;
    // the last common quotient of two brackets is not yet safe
    for (std::size_t i = 0; i + 1 < std::min(a.size(), b.size()) && a[i] == b[i] && a[i + 1] == b[i + 1] &&
                            cf.a.size() < count;
         ++i) {
        cf.a.push_back(a[i]);
    }
    mpz_class p1 = 1, q1 = 0, p2 = 0, q2 = 1;
    for (const auto &x : cf.a) {
        mpz_class p = x * p1 + p2;
        mpz_class q = x * q1 + q2;
        cf.p.push_back(p);
        cf.q.push_back(q);
        p2 = p1;
        q2 = q1;
        p1 = p;
        q1 = q;
    }
    return cf;
}

// ---------------------------------------------------------------------------

struct Checker {
    int mismatches = 0;
    int checks = 0;

    void expect(bool ok, const std::string &what)
    {
        ++checks;
        if (!ok) {
            ++mismatches;
            std::cout << "MISMATCH: " << what << '\n';
        }
    }
};

mpz_class Z(const Json &j)
{
    if (j.is_string()) {
        return mpz_class(j.get<std::string>());
    }
    return mpz_class(j.get<long>());
}

bool less_strict(const Real &a, const Real &b)
{
    const Cmp c = compare(a, b);
    if (c == Cmp::Undecided) {
        throw std::runtime_error("undecided comparison");
    }
    return c == Cmp::Less;
}

// pred false at v, true at v + 1
bool threshold_at(const std::function<bool(const mpz_class &)> &pred, const mpz_class &v)
{
    return !pred(v) && pred(v + 1);
}

mpz_class window_a_hi(const mpz_class &n)
{
    // a < n r + 1
    return ceil_of(Real(n) * K().r + Real(1)) - 1;
}

mpz_class n_from_a(const mpz_class &a_max)
{
    // n r + c38 - 1 < a_max + 1
    return ceil_of((Real(a_max) + Real(1) - K().c38) / K().r) - 1;
}

Real matveev_raw(const std::string &A3)
{
    // 1.4 30^6 3^4.5 2^2 (1 + log 2) 1.4 0.5 A3
    return dec("1.4") * rpow(Real(30), 6) * rpow(Real(3), 4) * rsqrt(Real(3)) * Real(4) * (Real(1) + K().log2) *
           dec("1.4") * dec("0.5") * dec(A3);
}

struct Route {
    Real C1, G, K;
};

Route route_consts(const std::string &name)
{
    if (name == "rounded") {
        return {dec("1.4e12"), dec("2.4e12"), dec("6.86e24")};
    }
    const Real log3 = rlog(Real(3));
    Route r{Real(2) * matveev_raw("1"), Real(0), Real(0)};
    r.G = Real(2) * matveev_raw("1.7") + rlog(Real(2) * K().sqrt5) / log3;
    r.K = r.C1 * (Real(5) / log3 + Real(2) * r.G);
    return r;
}

// ---------------------------------------------------------------------------

std::vector<mpz_class> fib_upto(long n)
{
    std::vector<mpz_class> F(static_cast<std::size_t>(std::max(n, 2L)) + 1);
    F[0] = 0;
    F[1] = 1;
    for (std::size_t i = 2; i < F.size(); ++i) {
        F[i] = F[i - 1] + F[i - 2];
    }
    return F;
}

using Tuple = std::tuple<long, long, long, long>;

std::set<Tuple> enumerate_all(long n_max, const std::vector<mpz_class> &F)
{
    std::set<Tuple> out;
    for (long n = 2; n <= n_max; ++n) {
        for (long m = 2; m <= n; ++m) {
            for (long l = 2; l <= m; ++l) {
                const mpz_class S = F[n] + F[m] + F[l];
                const long top = static_cast<long>(mpz_sizeinbase(S.get_mpz_t(), 2));
                for (long a = std::max(1L, top - 1); a <= top; ++a) {
                    const mpz_class p = mpz_class(1) << a;
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

std::set<Tuple> read_csv(const std::string &path, std::size_t &rows)
{
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open " + path);
    }
    std::set<Tuple> out;
    std::string line;
    rows = 0;
    bool header = false;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') {
            continue;
        }
        if (!header) {
            header = true;
            continue;
        }
        long n = 0, m = 0, l = 0, a = 0;
        char c1 = 0, c2 = 0, c3 = 0;
        std::istringstream is(line);
        is >> n >> c1 >> m >> c2 >> l >> c3 >> a;
        if (!is || c1 != ',' || c2 != ',' || c3 != ',') {
            throw std::runtime_error("bad table row: " + line);
        }
        ++rows;
        out.insert({n, m, l, a});
    }
    return out;
}

std::set<Tuple> tuples_of(const Json &arr)
{
    std::set<Tuple> out;
    for (const auto &t : arr) {
        out.insert({t[0].get<long>(), t[1].get<long>(), t[2].get<long>(), t[3].get<long>()});
    }
    return out;
}

const Json *find_stage(const Json &cert, const std::string &name)
{
    for (const auto &s : cert["stages"]) {
        if (s["name"] == name) {
            return &s;
        }
    }
    return nullptr;
}

} // namespace

int main(int argc, char **argv)
{
    if (argc < 2) {
        std::cerr << "usage: check_certificate CERT.json [TABLE.csv]\n";
        return 2;
    }
    Json cert;
    try {
        std::ifstream in(argv[1]);
        if (!in) {
            throw std::runtime_error(std::string("cannot open ") + argv[1]);
        }
        in >> cert;
    } catch (const std::exception &e) {
        std::cerr << "check_certificate: " << e.what() << '\n';
        return 2;
    }

    Checker ck;
    std::map<std::string, bool> verdict; // recomputed stage verdicts
    try {
        ck.expect(cert["format"] == "fibclose-certificate/1", "certificate format");
        const Json &cfg = cert["config"];
        const long n_max = cfg["n_max"].get<long>();
        const std::size_t expected = cfg["expected_count"].get<std::size_t>();
        const Consts &k = K();
        const CF cf = gamma_cf(200);
        ck.expect(cf.a.size() == 200, "200 quotients of gamma certified by the brackets");

        const auto F = fib_upto(std::max(n_max, 600L));
        mpz_class a_first, W1, M2, branch_worst;
        bool branches = true;
        std::set<Tuple> sols;
        const auto section = [&](const std::string &name, const auto &fn, const auto &on_error) {
            try {
                fn();
            } catch (const std::exception &e) {
                ck.expect(false, name + ": " + e.what());
                on_error();
            }
        };

        // search
        section("search", [&] {
            if (const Json *s = find_stage(cert, "search"); s && s->contains("results") &&
                                                             (*s)["results"].contains("solutions")) {
                const Json &r = (*s)["results"];
                const std::set<Tuple> listed = tuples_of(r["solutions"]);
                for (const auto &[n, m, l, a] : listed) {
                    const mpz_class S = F[n] + F[m] + F[l];
                    const mpz_class p = mpz_class(1) << a;
                    const mpz_class d = S - p;
                    ck.expect(n >= m && m >= l && l >= 2 && d * d < p, "listed tuple is a canonical solution");
                }
                sols = enumerate_all(n_max, F);
                ck.expect(sols == listed, "independent enumeration equals the listed solutions");
                ck.expect(r["count"].get<std::size_t>() == sols.size(), "solution count");
                long max_n = 0, max_a = 0;
                for (const auto &[n, m, l, a] : sols) {
                    max_n = std::max(max_n, n);
                    max_a = std::max(max_a, a);
                }
                ck.expect(r["max_n"].get<long>() == max_n && r["max_a"].get<long>() == max_a, "max n and max a");
                verdict["search"] = sols.size() == expected && max_n <= cfg["expected_max_n"].get<long>() &&
                                    max_a <= cfg["expected_max_a"].get<long>();
                std::cout << "search: " << sols.size() << " solutions (expected " << expected << ")\n";
            } else {
                verdict["search"] = false;
            }
        }, [&] { verdict["search"] = false; });

        // table
        section("table", [&] {
            if (const Json *s = find_stage(cert, "table")) {
                std::string path = argc > 2 ? argv[2] : cfg["table"].get<std::string>();
                std::size_t rows = 0;
                const std::set<Tuple> table = read_csv(path, rows);
                std::set<Tuple> missing, extra;
                std::set_difference(sols.begin(), sols.end(), table.begin(), table.end(),
                                    std::inserter(missing, missing.end()));
                std::set_difference(table.begin(), table.end(), sols.begin(), sols.end(),
                                    std::inserter(extra, extra.end()));
                if (s->contains("results") && (*s)["results"].contains("missing")) {
                    ck.expect(tuples_of((*s)["results"]["missing"]) == missing, "table: missing tuples");
                    ck.expect(tuples_of((*s)["results"]["extra"]) == extra, "table: extra tuples");
                }
                verdict["table"] = missing.empty() && extra.empty() && rows == table.size();
                std::cout << "table: " << rows << " rows, " << missing.size() << " missing, " << extra.size()
                          << " extra\n";
            }
        }, [&] { verdict["table"] = false; });

        // growth bounds
        section("growth-bounds", [&] {
            {
                bool ok = true;
                Real an(1);
                for (long n = 1; n <= n_max; ++n) {
                    an = an * k.alpha; // alpha^n
                    const Real f(F[n]);
                    ok = ok && compare(an / (k.alpha * k.alpha), f) != Cmp::Greater &&
                         compare(f, an / k.alpha) != Cmp::Greater;
                    if (n >= 2) {
                        ok = ok && compare(dec("0.38") * an, f) != Cmp::Greater &&
                             compare(f, dec("0.48") * an) != Cmp::Greater;
                    }
                }
                verdict["growth-bounds"] = ok;
            }
        }, [&] { verdict["growth-bounds"] = false; });

        // first bounds
        section("first-bounds", [&] {
            if (const Json *s = find_stage(cert, "first-bounds"); s && (*s)["results"].contains("rounded")) {
                const Json &res = (*s)["results"];
                bool ok = true;
                ok = ok && less_strict(Real(2) * matveev_raw("1"), dec("1.4e12"));
                ok = ok && less_strict(Real(2) * matveev_raw("1.7"), dec("2.31e12"));
                for (const std::string route : {"rounded", "tight"}) {
                    const Route rc = route_consts(route);
                    const Json &rep = res[route];
                    const auto c12 = [&](const mpz_class &n) {
                        const Real ln = rlog(Real(n));
                        const Real lhs = ((Real(n) * k.r + k.c38 - Real(1)) / Real(2) - Real(1)) * k.log2;
                        return !less_strict(lhs, rc.K * ln * ln);
                    };
                    const auto c3 = [&](const mpz_class &n) {
                        const Real lhs = (Real(n) * (Real(1) - k.r) - Real(1)) * k.logA;
                        return !less_strict(lhs, rc.G * rlog(Real(n)));
                    };
                    const mpz_class n12 = Z(rep["cases12"]["n_max"]);
                    const mpz_class n3 = Z(rep["case3"]["n_max"]);
                    ck.expect(threshold_at(c12, n12), route + " cases 1-2 threshold");
                    ck.expect(threshold_at(c3, n3), route + " case 3 threshold");
                    ck.expect(Z(rep["cases12"]["a_max"]) == window_a_hi(n12), route + " cases 1-2 a bound");
                    ck.expect(Z(rep["case3"]["a_max"]) == window_a_hi(n3), route + " case 3 a bound");
                    const mpz_class comb_a = std::max(window_a_hi(n12), window_a_hi(n3));
                    ck.expect(Z(rep["combined"]["a_max"]) == comb_a, route + " combined a bound");
                    if (route == cfg["route"].get<std::string>()) {
                        a_first = comb_a;
                    }
                    for (const auto &e : rep["audit"]) {
                        ok = ok && e["holds"].get<bool>();
                    }
                }
                // the audit inequalities that matter downstream, recomputed
                ok = ok && less_strict(Real(2) * k.log2, dec("1.4")) && less_strict(k.logA, dec("0.5")) &&
                     less_strict(Real(2) * rlog(k.sqrt5), dec("1.7")) &&
                     less_strict(Real(2) * rlog(Real(4) * k.sqrt5), Real(5));
                ok = ok && a_first <= Z(cfg["M1"]);
                verdict["first-bounds"] = ok;
            } else {
                verdict["first-bounds"] = false;
            }
        }, [&] { verdict["first-bounds"] = false; });

        // stage 1
        section("stage1-reduction", [&] {
            if (const Json *s = find_stage(cert, "stage1-reduction"); s && (*s)["results"].contains("gap_bound")) {
                const Json &res = (*s)["results"];
                const Json &o = res["outcome"];
                const mpz_class M = Z(cfg["M1"]);
                const std::size_t idx = o["convergent_index"].get<std::size_t>();
                const mpz_class q = Z(o["q"]);
                ck.expect(idx < cf.q.size() && cf.q[idx] == q, "stage 1 convergent denominator");
                ck.expect(q > 6 * M, "stage 1 q > 6M");
                const Real eps = dist_int(k.mu * Real(q)) - Real(M) * dist_int(k.gamma * Real(q));
                const bool eps_pos = compare(eps, Real(0)) == Cmp::Greater;
                ck.expect(eps_pos, "stage 1 epsilon > 0");
                const Real A = Real(4) * k.sqrt5 / k.logA;
                const mpz_class W = ceil_of(rlog(A * Real(q) / eps) / k.logA);
                ck.expect(Z(res["gap_bound"]) == W, "stage 1 gap bound");
                W1 = W;
                const mpz_class n_na = ceil_of(Real(W) / (Real(1) - k.r)) - 1;
                ck.expect(Z(res["n_max_if_na_small"]) == n_na, "stage 1 n - a branch");
                const mpz_class gaps = 2 * (W - 1);
                ck.expect(Z(res["gap_sum"]) == gaps, "stage 1 gap sum");
                const Route rc = route_consts(cfg["route"].get<std::string>());
                const auto pred = [&](const mpz_class &a) {
                    const Real lhs = (Real(a) / Real(2) - Real(1)) * k.log2;
                    const Real n = (Real(a) + Real(1) - k.c38) / k.r;
                    return !less_strict(lhs, rc.C1 * rlog(n) * (Real(5) + Real(gaps) * k.logA));
                };
                const mpz_class a_after = Z(res["a_bound_after"]);
                ck.expect(threshold_at(pred, a_after), "a-bound after the first reduction");
                M2 = cfg["M2"].is_null() ? a_after : Z(cfg["M2"]);
                branch_worst = n_na;
                verdict["stage1-reduction"] = eps_pos && n_na <= n_max;
            } else {
                verdict["stage1-reduction"] = false;
                branches = false;
            }
        }, [&] { verdict["stage1-reduction"] = false; branches = false; });

        // stage 2
        section("stage2-sweep", [&] {
            const std::set<std::pair<long, long>> want{{0, 3}, {1, 1}, {1, 5}, {3, 0}, {3, 4},
                                                       {4, 3}, {5, 1}, {7, 8}, {8, 7}};
            if (const Json *s = find_stage(cert, "stage2-sweep"); s && (*s)["results"].contains("pairs") && W1 > 0) {
                const Json &res = (*s)["results"];
                const long gap_max = (*s)["inputs"]["gap_max"].get<long>();
                ck.expect(gap_max == W1.get_si(), "stage 2 grid size");
                ck.expect(Z((*s)["inputs"]["M"]) == M2, "stage 2 M");
                std::set<std::pair<long, long>> seen;
                bool ok = true;
                mpz_class worst;
                const Real A = Real(4) / k.logA;
                const Real logB = rlog(Real(2)) / Real(2);
                for (const auto &row : res["pairs"]) {
                    const long t = row[0].get<long>();
                    const long sg = row[1].get<long>();
                    seen.insert({t, sg});
                    if (row[3].is_null()) {
                        ok = false;
                        continue;
                    }
                    const std::size_t idx = row[2].get<std::size_t>();
                    const mpz_class W = Z(row[3]);
                    const mpz_class q = cf.q.at(idx);
                    const Real mu = rlog(psi_real(t, sg)) / k.logA;
                    const Real eps = dist_int(mu * Real(q)) - Real(M2) * dist_int(k.gamma * Real(q));
                    const bool pos = compare(eps, Real(0)) == Cmp::Greater;
                    ck.expect(q > 6 * M2 && pos, "stage 2 pair (" + std::to_string(t) + "," + std::to_string(sg) +
                                                     "): q > 6M and epsilon > 0");
                    if (!pos) {
                        ok = false;
                        continue;
                    }
                    const mpz_class Wc = ceil_of(rlog(A * Real(q) / eps) / logB);
                    ck.expect(W == Wc, "stage 2 pair w bound");
                    const mpz_class n = n_from_a(Wc - 1);
                    ck.expect(Z(row[4]) == n, "stage 2 pair n bound");
                    worst = std::max(worst, n);
                }
                std::set<std::pair<long, long>> special;
                for (const auto &sp : res["special"]) {
                    const long t = sp["t"].get<long>();
                    const long sg = sp["s"].get<long>();
                    special.insert({t, sg});
                    seen.insert({t, sg});
                    // psi 2^s' = alpha^r'
                    Q5 lhs = psi_exact(t, sg);
                    lhs = mul(lhs, Q5{mpq_class(mpz_class(1) << sp["s2"].get<long>()), 0});
                    ck.expect(eq(lhs, qpow(kAlpha, sp["r"].get<long>())), "exact psi decomposition for special pair");
                }
                ck.expect(seen.size() == static_cast<std::size_t>((gap_max + 1) * (gap_max + 1)),
                          "stage 2 covers the whole grid");
                ck.expect(Z(res["worst_n"]) == worst, "stage 2 worst n");
                branch_worst = std::max(branch_worst, worst);
                verdict["stage2-sweep"] = ok && special == want && worst <= n_max;
                branches = branches && ok;
            } else {
                verdict["stage2-sweep"] = false;
                branches = false;
            }
        }, [&] { verdict["stage2-sweep"] = false; branches = false; });

        // special cases
        section("special-cases", [&] {
            if (const Json *s = find_stage(cert, "special-cases"); s && (*s)["results"].contains("cases") && M2 > 0) {
                std::size_t N = 0;
                while (N < cf.q.size() && cf.q[N] <= M2) {
                    ++N;
                }
                mpz_class aM = 0;
                for (std::size_t i = 0; i <= N; ++i) {
                    aM = std::max(aM, cf.a[i]);
                }
                bool ok = true;
                for (const auto &c : (*s)["results"]["cases"]) {
                    const long t = c["t"].get<long>();
                    const long sg = c["s"].get<long>();
                    Q5 lhs = mul(psi_exact(t, sg), Q5{mpq_class(mpz_class(1) << c["s2"].get<long>()), 0});
                    ck.expect(eq(lhs, qpow(kAlpha, c["r"].get<long>())), "special case decomposition");
                    ck.expect(c["legendre_index_N"].get<std::size_t>() == N && Z(c["a_max_quotient"]) == aM,
                              "Legendre index and largest quotient");
                    const auto upper = [&](const mpz_class &n) {
                        return Real(4) / k.logA * rexp2(-(Real(n) * k.r + k.c38 - Real(1)) / Real(2));
                    };
                    const auto pred = [&](const mpz_class &n) {
                        const Real lower = Real(1) / (Real(mpz_class(aM + 2)) * (Real(n) * k.r + Real(1)));
                        return !less_strict(lower, upper(n));
                    };
                    const mpz_class nb = Z(c["n_bound"]);
                    ck.expect(threshold_at(pred, nb), "special case n bound");
                    ok = ok && nb <= n_max;
                    branch_worst = std::max(branch_worst, nb);
                }
                verdict["special-cases"] = ok;
            } else {
                verdict["special-cases"] = false;
                branches = false;
            }
        }, [&] { verdict["special-cases"] = false; branches = false; });

        for (const std::string name : {"first-bounds", "stage1-reduction", "stage2-sweep", "special-cases"}) {
            branches = branches && verdict[name];
        }
        verdict["conclusion"] = branches && branch_worst <= n_max;
        if (const Json *s = find_stage(cert, "conclusion"); s && verdict["conclusion"]) {
            ck.expect(Z((*s)["results"]["n_bound_all_branches"]) == branch_worst, "largest n over all branches");
        }
    } catch (const std::exception &e) {
        std::cout << "MISMATCH: " << e.what() << '\n';
        ++ck.mismatches;
    }

    bool pass = true;
    for (const auto &s : cert["stages"]) {
        const std::string name = s["name"];
        const bool mine = verdict.count(name) != 0 && verdict[name];
        const bool theirs = s["verdict"] == "PASS";
        ck.expect(mine == theirs, "verdict of stage " + name);
        pass = pass && mine;
        std::cout << "stage " << name << ": " << (mine ? "PASS" : "FAIL") << '\n';
    }
    ck.expect((cert["verdict"] == "PASS") == pass, "overall verdict");

    std::cout << ck.checks << " checks, " << ck.mismatches << " mismatches\n";
    std::cout << "certificate " << (ck.mismatches == 0 ? "consistent" : "INCONSISTENT") << ", verdict "
              << (pass ? "PASS" : "FAIL") << '\n';
    if (ck.mismatches != 0) {
        return 2;
    }
    return pass ? 0 : 1;
}
