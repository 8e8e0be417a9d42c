#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "oracles.hpp"

#include <fibclose/search.hpp>

#include <algorithm>
#include <sstream>

using namespace fibclose;

namespace
{

const std::vector<Solution> &all550()
{
    static const std::vector<Solution> s = enumerate(550);
    return s;
}

bool has(const std::vector<Solution> &v, const Solution &s)
{
    return std::binary_search(v.begin(), v.end(), s);
}

std::vector<Solution> parse(const std::string &text)
{
    std::istringstream in(text);
    return parse_table(in);
}

} // namespace

TEST_CASE("single tuples")
{
    const SolutionCheck a = check_solution(11, 11, 11, 8);
    CHECK(a.holds);
    CHECK(a.margin == 256 - 121);
    CHECK(check_solution(5, 5, 5, 4).holds);
    CHECK(check_solution(5, 5, 5, 4).margin == 15);
    CHECK_FALSE(check_solution(100, 2, 2, 3).holds);
    CHECK_THROWS_AS((void)check_solution(0, 2, 2, 1), std::invalid_argument);
}

TEST_CASE("ties are not solutions")
{
    // F_3 * 3 = 6 = 4 + 2, so (S - 4)^2 = 4 exactly
    const SolutionCheck t = check_solution(3, 3, 3, 2);
    CHECK_FALSE(t.holds);
    CHECK(t.margin == 0);
    CHECK(check_solution(3, 3, 3, 3).holds);
}

TEST_CASE("window enumeration equals the all-exponent oracle up to n = 100")
{
    const auto want = oracle::brute_solutions(100);
    const auto got = enumerate(100);
    std::set<oracle::Tuple> mine;
    for (const Solution &s : got) {
        mine.insert({s.n, s.m, s.l, s.a});
    }
    CHECK(mine == want);
    CHECK(got.size() == want.size());
}

TEST_CASE("enumeration up to 550")
{
    const auto &s = all550();
    CHECK(std::is_sorted(s.begin(), s.end()));
    CHECK(std::adjacent_find(s.begin(), s.end()) == s.end());
    for (const Solution &x : s) {
        REQUIRE(x.canonical());
        REQUIRE(check_solution(x.n, x.m, x.l, x.a).holds);
    }
    const SearchSummary sum = summarize(s);
    CHECK(sum.max_n == 42);
    CHECK(sum.max_a == 28);
    CHECK(sum.min_a == 1);
    CHECK(sum.count == 225);
    CHECK(std::none_of(s.begin(), s.end(), [](const Solution &x) { return x.n >= 43; }));
}

TEST_CASE("thread count does not change the result")
{
    CHECK(enumerate(120, 1) == enumerate(120, 3));
}

TEST_CASE("rows that appear in the published table")
{
    const auto &s = all550();
    for (long i = 2; i <= 22; ++i) {
        CHECK(has(s, {42, 29, i, 28}));
    }
    for (long i = 2; i <= 11; ++i) {
        CHECK(has(s, {23, 19, i, 15}));
    }
    CHECK(has(s, {2, 2, 2, 1}));
    CHECK(has(s, {2, 2, 2, 2}));
    CHECK(has(s, {11, 11, 11, 8}));
    CHECK_FALSE(has(s, {42, 29, 23, 28}));
}

TEST_CASE("F_11 + F_9 + F_i against 2^7")
{
    // 89 + 34 + F_i - 128 = F_i - 5; needs (F_i - 5)^2 < 128, so F_i <= 16
    const auto &s = all550();
    std::vector<long> found;
    for (long i = 2; i <= 9; ++i) {
        if (has(s, {11, 9, i, 7})) {
            found.push_back(i);
        }
    }
    CHECK(found == std::vector<long>{2, 3, 4, 5, 6, 7});
    CHECK_FALSE(check_solution(11, 9, 8, 7).holds);
    CHECK(check_solution(11, 9, 8, 7).margin == 128 - 256);
}

TEST_CASE("table parsing")
{
    const auto rows = parse("n,m,l,a\n# comment\n3,2,2,2\n2,2,2,1\n");
    CHECK(rows == std::vector<Solution>{{3, 2, 2, 2}, {2, 2, 2, 1}});
    CHECK_THROWS_AS((void)parse("n,m,l,a\n3,2,2\n"), std::invalid_argument);
    CHECK_THROWS_AS((void)parse("n,m,l,a\n2,3,2,1\n"), std::invalid_argument);
    CHECK_THROWS_AS((void)parse("x,y\n"), std::invalid_argument);
    CHECK_THROWS_AS((void)read_table("/nonexistent/table.csv"), std::runtime_error);

    std::ostringstream out;
    write_table(out, enumerate(20));
    std::istringstream in(out.str());
    CHECK(parse_table(in) == enumerate(20));
}

TEST_CASE("table diff")
{
    const auto ref = enumerate(30);
    auto cut = ref;
    cut.erase(cut.begin() + 5);
    const TableDiff d = diff_table(cut, ref);
    CHECK(d.missing.size() == 1);
    CHECK(d.extra.empty());
    CHECK(d.missing.front() == ref[5]);

    auto dup = ref;
    dup.push_back(ref[3]);
    const TableDiff e = diff_table(dup, ref);
    CHECK(e.sets_equal());
    CHECK(e.duplicates == std::vector<Solution>{ref[3]});
    CHECK(e.table_rows == ref.size() + 1);
    CHECK(e.table_unique == ref.size());

    auto more = ref;
    more.push_back({29, 2, 2, 1});
    CHECK(diff_table(more, ref).extra.size() == 1);
}

TEST_CASE("shipped tables")
{
    const TableDiff lit = verify_table(FIBCLOSE_DATA_DIR "/table1.csv");
    CHECK(lit.table_rows == 226);
    CHECK(lit.missing.size() == 4);
    CHECK(lit.extra.size() == 5);
    CHECK(std::find(lit.extra.begin(), lit.extra.end(), Solution{11, 9, 8, 7}) != lit.extra.end());
    const TableDiff fixed = verify_table(FIBCLOSE_DATA_DIR "/table1_corrected.csv");
    CHECK(fixed.sets_equal());
    CHECK(fixed.duplicates.empty());
    CHECK(fixed.table_rows == 225);
}
