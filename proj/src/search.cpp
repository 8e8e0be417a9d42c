#include <fibclose/search.hpp>

#include <fibclose/fibseq.hpp>
#include <fibclose/linforms.hpp>

#include <algorithm>
#include <atomic>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace fibclose
{

std::ostream &operator<<(std::ostream &os, const Solution &s)
{
    return os << '(' << s.n << ',' << s.m << ',' << s.l << ',' << s.a << ')';
}

SolutionCheck check_solution(long n, long m, long l, long a)
{
    if (n < 1 || m < 1 || l < 1 || a < 1) {
        throw std::invalid_argument("check_solution: indices and exponent must be positive");
    }
    const mpz_class S = fib(static_cast<unsigned long>(n)) + fib(static_cast<unsigned long>(m)) +
                        fib(static_cast<unsigned long>(l));
    const mpz_class p = mpz_class(1) << static_cast<mp_bitcnt_t>(a);
    const mpz_class d = S - p;
    SolutionCheck out;
    out.margin = p - d * d;
    out.holds = out.margin > 0;
    return out;
}

namespace
{

// Candidate exponents allowed by the a-window (widened by 2), plus the
// small exponents that the window does not cover for tiny n.
std::vector<long> window(long n)
{
    std::vector<long> out{1, 2, 3};
    if (n < 4) {
        out.push_back(4);
        return out;
    }
    const ARange r = a_range_for_n(n);
    for (long a = r.a_lo.get_si() - 2; a <= r.a_hi.get_si() + 2; ++a) {
        if (a >= 1) {
            out.push_back(a);
        }
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

std::vector<Solution> solutions_for_n(long n, const std::vector<mpz_class> &F, const std::vector<mpz_class> &pow2)
{
    std::vector<Solution> out;
    const std::vector<long> cand = window(n);
    const long a_top = cand.back();
    std::vector<char> allowed(static_cast<std::size_t>(a_top) + 2, 0);
    for (long a : cand) {
        allowed[static_cast<std::size_t>(a)] = 1;
    }
    mpz_class S;
    mpz_class D;
    mpz_class sq;
    for (long m = 2; m <= n; ++m) {
        for (long l = 2; l <= m; ++l) {
            mpz_add(S.get_mpz_t(), F[n].get_mpz_t(), F[m].get_mpz_t());
            mpz_add(S.get_mpz_t(), S.get_mpz_t(), F[l].get_mpz_t());
            // 2^a - 2^(a/2) < S < 2^a + 2^(a/2) puts the bit length of S at
            // a or a + 1
            const long bl = static_cast<long>(mpz_sizeinbase(S.get_mpz_t(), 2));
            for (long a = bl - 1; a <= bl; ++a) {
                if (a < 1 || a > a_top || allowed[static_cast<std::size_t>(a)] == 0) {
                    continue;
                }
                mpz_sub(D.get_mpz_t(), S.get_mpz_t(), pow2[static_cast<std::size_t>(a)].get_mpz_t());
                if (static_cast<long>(mpz_sizeinbase(D.get_mpz_t(), 2)) > (a + 1) / 2) {
                    continue;
                }
                mpz_mul(sq.get_mpz_t(), D.get_mpz_t(), D.get_mpz_t());
                if (mpz_cmp(sq.get_mpz_t(), pow2[static_cast<std::size_t>(a)].get_mpz_t()) < 0) {
                    out.push_back({n, m, l, a});
                }
            }
        }
    }
    return out;
}

} // namespace

std::vector<Solution> enumerate(long n_max, unsigned threads)
{
    if (n_max < 2) {
        throw std::invalid_argument("enumerate: n_max must be at least 2");
    }
    std::vector<mpz_class> F(static_cast<std::size_t>(n_max) + 1);
    for (long k = 0; k <= n_max; ++k) {
        F[static_cast<std::size_t>(k)] = fib(static_cast<unsigned long>(k));
    }
    const std::size_t a_cap = mpz_sizeinbase(F.back().get_mpz_t(), 2) + 8;
    std::vector<mpz_class> pow2(a_cap + 1);
    for (std::size_t a = 0; a <= a_cap; ++a) {
        pow2[a] = mpz_class(1) << static_cast<mp_bitcnt_t>(a);
    }

    std::vector<std::vector<Solution>> per_n(static_cast<std::size_t>(n_max) + 1);
    // largest n first: those rows dominate the cost
    std::atomic<long> next{n_max};
    const auto worker = [&] {
        for (long n = next--; n >= 2; n = next--) {
            per_n[static_cast<std::size_t>(n)] = solutions_for_n(n, F, pow2);
        }
    };
    unsigned t = threads != 0 ? threads : std::max(1U, std::thread::hardware_concurrency());
    if (t <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (unsigned i = 0; i < t; ++i) {
            pool.emplace_back(worker);
        }
        for (auto &th : pool) {
            th.join();
        }
    }
    std::vector<Solution> out;
    for (auto &v : per_n) {
        out.insert(out.end(), v.begin(), v.end());
    }
    std::sort(out.begin(), out.end());
    return out;
}

SearchSummary summarize(const std::vector<Solution> &sols)
{
    SearchSummary s;
    s.count = sols.size();
    for (std::size_t i = 0; i < sols.size(); ++i) {
        const Solution &x = sols[i];
        s.max_n = std::max(s.max_n, x.n);
        s.max_a = std::max(s.max_a, x.a);
        s.min_a = i == 0 ? x.a : std::min(s.min_a, x.a);
    }
    return s;
}

std::vector<Solution> parse_table(std::istream &in)
{
    std::string line;
    std::size_t lineno = 0;
    bool header = false;
    std::vector<Solution> out;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (line.empty() || line[0] == '#') {
            continue;
        }
        if (!header) {
            if (line != "n,m,l,a") {
                throw std::invalid_argument("table line " + std::to_string(lineno) + ": expected header n,m,l,a");
            }
            header = true;
            continue;
        }
        std::istringstream row(line);
        std::string cell;
        std::vector<long> v;
        while (std::getline(row, cell, ',')) {
            std::size_t used = 0;
            long x = 0;
            try {
                x = std::stol(cell, &used);
            } catch (const std::exception &) {
                used = 0;
            }
            if (used == 0 || used != cell.size()) {
                throw std::invalid_argument("table line " + std::to_string(lineno) + ": bad integer '" + cell + "'");
            }
            v.push_back(x);
        }
        if (v.size() != 4) {
            throw std::invalid_argument("table line " + std::to_string(lineno) + ": expected 4 fields");
        }
        const Solution s{v[0], v[1], v[2], v[3]};
        if (!s.canonical()) {
            throw std::invalid_argument("table line " + std::to_string(lineno) + ": tuple is not canonical");
        }
        out.push_back(s);
    }
    if (!header) {
        throw std::invalid_argument("table: missing header");
    }
    return out;
}

std::vector<Solution> read_table(const std::string &path)
{
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open table file " + path);
    }
    return parse_table(in);
}

void write_table(std::ostream &out, const std::vector<Solution> &sols)
{
    out << "n,m,l,a\n";
    for (const auto &s : sols) {
        out << s.n << ',' << s.m << ',' << s.l << ',' << s.a << '\n';
    }
}

TableDiff diff_table(const std::vector<Solution> &table, const std::vector<Solution> &reference)
{
    TableDiff d;
    d.table_rows = table.size();
    std::set<Solution> seen;
    std::set<Solution> dup;
    for (const auto &s : table) {
        if (!seen.insert(s).second) {
            dup.insert(s);
        }
    }
    d.table_unique = seen.size();
    const std::set<Solution> ref(reference.begin(), reference.end());
    d.reference = ref.size();
    std::set_difference(ref.begin(), ref.end(), seen.begin(), seen.end(), std::back_inserter(d.missing));
    std::set_difference(seen.begin(), seen.end(), ref.begin(), ref.end(), std::back_inserter(d.extra));
    d.duplicates.assign(dup.begin(), dup.end());
    return d;
}

TableDiff verify_table(const std::string &path, long n_max)
{
    return diff_table(read_table(path), enumerate(n_max));
}

} // namespace fibclose
