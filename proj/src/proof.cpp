#include <fibclose/proof.hpp>

#include <fibclose/contfrac.hpp>
#include <fibclose/fibseq.hpp>
#include <fibclose/reduction.hpp>
#include <fibclose/search.hpp>

#include <algorithm>
#include <exception>
#include <stdexcept>

namespace fibclose
{

namespace
{

std::string str(const mpz_class &v)
{
    return v.get_str();
}

Json stage(const std::string &name)
{
    Json s;
    s["name"] = name;
    s["inputs"] = Json::object();
    s["constants"] = Json::object();
    s["results"] = Json::object();
    s["verdict"] = "FAIL";
    s["refs"] = Json::array();
    return s;
}

void set_verdict(Json &s, bool pass)
{
    s["verdict"] = pass ? "PASS" : "FAIL";
}

void fail_with(Json &s, const std::string &kind, const std::string &what)
{
    s["verdict"] = "FAIL";
    s["error"] = {{"kind", kind}, {"message", what}};
}

// Runs body and turns exceptions into a FAIL verdict on s.
template <class F>
void guarded(Json &s, F &&body)
{
    try {
        body();
    } catch (const PrecisionExhausted &e) {
        fail_with(s, "precision", e.what());
    } catch (const std::exception &e) {
        fail_with(s, "error", e.what());
    }
}

Json audit_json(const AuditEntry &e)
{
    return Json{{"claim", e.claim}, {"lhs", interval_json(e.lhs)}, {"rhs", interval_json(e.rhs)}, {"holds", e.holds}};
}

Json case_json(const CaseBound &c)
{
    return Json{{"tag", c.tag}, {"n_max", str(c.n_max)}, {"a_max", str(c.a_max)}};
}

Json bound_report_json(const BoundReport &r)
{
    Json j;
    j["route"] = route_name(r.route);
    j["C1"] = interval_json(r.C1);
    j["C2"] = interval_json(r.C2);
    j["gap_coeff"] = interval_json(r.gap_coeff);
    j["cases12_coeff"] = interval_json(r.cases12_coeff);
    j["cases12"] = case_json(r.cases12);
    j["case3"] = case_json(r.case3);
    j["combined"] = case_json(r.combined);
    j["audit"] = Json::array();
    for (const auto &e : r.audit) {
        j["audit"].push_back(audit_json(e));
    }
    j["audit_ok"] = r.audit_ok();
    return j;
}

Json outcome_json(const ReductionOutcome &o)
{
    Json j;
    j["convergent_index"] = o.convergent_index;
    j["convergent_ordinal"] = o.convergent_index + 1;
    j["q"] = str(o.q);
    j["attempts"] = o.attempts;
    j["bits"] = o.bits_used;
    j["epsilon"] = interval_json(o.epsilon);
    if (o.ok()) {
        j["log_ratio"] = interval_json(o.log_ratio);
        j["w_bound"] = str(*o.w_bound);
    } else {
        j["failure"] = failure_name(o.failure.value_or(ReductionFailure::Precision));
    }
    return j;
}

bool le(const mpz_class &a, const char *decimal)
{
    return mpq_class(a) <= parse_decimal(decimal);
}

} // namespace

Json interval_json(const Interval &x)
{
    return Json{{"value", x.mid_decimal(30)}, {"lo", x.lo_decimal(40)}, {"hi", x.hi_decimal(40)}};
}

Json run_full_proof(const ProofConfig &cfg)
{
    const Precision &ctx = cfg.precision;
    Json cert;
    cert["format"] = certificate_format;
    cert["config"] = {{"n_max", cfg.n_max},
                      {"bits", ctx.bits},
                      {"bits_max", ctx.bits_max},
                      {"expected_count", cfg.expected_count},
                      {"expected_max_n", cfg.expected_max_n},
                      {"expected_max_a", cfg.expected_max_a},
                      {"table", cfg.table_path ? Json(*cfg.table_path) : Json(nullptr)},
                      {"M1", str(cfg.M1)},
                      {"M2", cfg.M2 ? Json(str(*cfg.M2)) : Json(nullptr)},
                      {"route", route_name(cfg.route)},
                      {"special_target", cfg.special_target}};
    Json stages = Json::array();
    Json commentary = Json::array();

    // -- search ------------------------------------------------------------
    std::vector<Solution> sols;
    {
        Json s = stage("search");
        s["inputs"]["n_max"] = cfg.n_max;
        s["refs"] = {"brute-force-enumeration", "squared-integer-test"};
        guarded(s, [&] {
            sols = enumerate(cfg.n_max, cfg.threads);
            const SearchSummary sm = summarize(sols);
            Json list = Json::array();
            for (const auto &x : sols) {
                list.push_back({x.n, x.m, x.l, x.a});
            }
            const bool count_ok = sm.count == cfg.expected_count;
            const bool range_ok = sm.max_n <= cfg.expected_max_n && sm.max_a <= cfg.expected_max_a;
            s["results"] = {{"count", sm.count},       {"expected_count", cfg.expected_count},
                            {"count_ok", count_ok},    {"max_n", sm.max_n},
                            {"max_a", sm.max_a},       {"range_ok", range_ok},
                            {"solutions", list}};
            set_verdict(s, count_ok && range_ok);
            if (!count_ok) {
                commentary.push_back("search found " + std::to_string(sm.count) + " canonical solutions, expected " +
                                     std::to_string(cfg.expected_count));
            }
        });
        stages.push_back(std::move(s));
    }

    // -- table -------------------------------------------------------------
    if (cfg.table_path) {
        Json s = stage("table");
        s["inputs"]["path"] = *cfg.table_path;
        s["refs"] = {"solution-table"};
        guarded(s, [&] {
            const TableDiff d = diff_table(read_table(*cfg.table_path), sols);
            const auto tuples = [](const std::vector<Solution> &v) {
                Json a = Json::array();
                for (const auto &x : v) {
                    a.push_back({x.n, x.m, x.l, x.a});
                }
                return a;
            };
            s["results"] = {{"table_rows", d.table_rows}, {"table_unique", d.table_unique},
                            {"missing", tuples(d.missing)}, {"extra", tuples(d.extra)},
                            {"duplicates", tuples(d.duplicates)}};
            set_verdict(s, d.sets_equal() && d.duplicates.empty());
        });
        stages.push_back(std::move(s));
    }

    // -- growth bounds -----------------------------------------------------
    {
        Json s = stage("growth-bounds");
        s["inputs"]["n_max"] = cfg.n_max;
        s["refs"] = {"fibonacci-growth-bounds"};
        guarded(s, [&] {
            const GrowthReport g = check_growth_bounds(static_cast<unsigned long>(cfg.n_max), ctx);
            s["results"] = {{"comparisons", g.comparisons}, {"ok", g.ok()}};
            if (g.violation) {
                s["results"]["violation"] = {{"n", g.violation->n}, {"inequality", g.violation->inequality}};
            }
            set_verdict(s, g.ok());
        });
        stages.push_back(std::move(s));
    }

    // -- first bounds ------------------------------------------------------
    {
        Json s = stage("first-bounds");
        s["inputs"]["M1"] = str(cfg.M1);
        s["refs"] = {"matveev-lower-bound", "logarithmic-height", "a-window"};
        guarded(s, [&] {
            const BoundReport rounded = derive_first_bounds(BoundRoute::Rounded, ctx);
            const BoundReport tight = derive_first_bounds(BoundRoute::Tight, ctx);
            s["constants"]["lambda1_collapsed"] = interval_json(collapsed_constant_lambda1(ctx));
            s["constants"]["lambda2_collapsed"] = interval_json(collapsed_constant_lambda2(ctx));
            s["results"]["rounded"] = bound_report_json(rounded);
            s["results"]["tight"] = bound_report_json(tight);
            const BoundReport &used = cfg.route == BoundRoute::Rounded ? rounded : tight;
            const bool m1_ok = used.combined.a_max <= cfg.M1;
            s["results"]["a_max_within_M1"] = m1_ok;
            s["results"]["stated"] = {
                {"combined", {{"a", "9e28"}, {"n", "1.87e29"},
                              {"a_ok", le(rounded.combined.a_max, "9e28")},
                              {"n_ok", le(rounded.combined.n_max, "1.87e29")}}},
                {"case3_rounded", {{"a", "3.84e14"}, {"n", "5.53e14"},
                                   {"a_ok", le(rounded.case3.a_max, "3.84e14")},
                                   {"n_ok", le(rounded.case3.n_max, "5.53e14")}}},
                {"case3_tight", {{"a", "3.84e14"}, {"n", "5.53e14"},
                                 {"a_ok", le(tight.case3.a_max, "3.84e14")},
                                 {"n_ok", le(tight.case3.n_max, "5.53e14")}}}};
            if (!le(rounded.case3.n_max, "5.53e14") || !le(rounded.case3.a_max, "3.84e14")) {
                commentary.push_back("case 3 with the rounded 2.4e12 coefficient gives n <= " +
                                     str(rounded.case3.n_max) + ", a <= " + str(rounded.case3.a_max) +
                                     "; the unrounded constant gives n <= " + str(tight.case3.n_max) + ", a <= " +
                                     str(tight.case3.a_max));
            }
            set_verdict(s, rounded.audit_ok() && tight.audit_ok() && m1_ok);
        });
        stages.push_back(std::move(s));
    }

    // -- stage 1 -------------------------------------------------------------
    std::optional<mpz_class> M2 = cfg.M2;
    mpz_class gap_bound;
    // largest n any branch of the reduction still allows
    mpz_class branch_worst;
    bool branches_known = true;
    {
        Json s = stage("stage1-reduction");
        s["inputs"] = {{"M", str(cfg.M1)},
                       {"gamma", Constant::gamma().name()},
                       {"mu", Constant::mu_sqrt5().name()},
                       {"A", "4*sqrt5/logAlpha"},
                       {"B", "alpha"},
                       {"route", route_name(cfg.route)}};
        s["refs"] = {"dujella-petho", "first-linear-form"};
        guarded(s, [&] {
            s["constants"]["gamma"] = interval_json(const_eval(Constant::gamma(), ctx));
            s["constants"]["mu"] = interval_json(const_eval(Constant::mu_sqrt5(), ctx));
            const Stage1Result r = stage1_reduce(cfg.M1, cfg.route, ctx);
            s["results"]["outcome"] = outcome_json(r.outcome);
            if (!r.ok()) {
                fail_with(s, failure_name(r.outcome.failure.value_or(ReductionFailure::Precision)),
                          "first reduction did not certify epsilon > 0");
                return;
            }
            gap_bound = r.gap_bound;
            s["results"]["gap_bound"] = str(r.gap_bound);
            s["results"]["n_max_if_na_small"] = str(r.n_max_if_na_small);
            s["results"]["gap_sum"] = str(r.gap_sum);
            s["results"]["a_bound_after"] = str(r.a_bound_after);
            s["results"]["stated_a_bound"] = "3.93e15";
            s["results"]["stated_a_bound_ok"] = le(r.a_bound_after, "3.93e15");
            commentary.push_back("first reduction bounds n-m and n-l separately; 2n-m-l <= " + str(r.gap_sum) +
                                 " takes both gaps below " + str(r.gap_bound));
            if (!le(r.a_bound_after, "3.93e15")) {
                commentary.push_back("a-bound after the first reduction is " + str(r.a_bound_after) +
                                     ", above 3.93e15; the second reduction uses it as M");
            }
            if (!M2) {
                M2 = r.a_bound_after;
            }
            branch_worst = std::max(branch_worst, r.n_max_if_na_small);
            set_verdict(s, r.n_max_if_na_small <= cfg.n_max);
        });
        stages.push_back(std::move(s));
    }

    // -- stage 2 -------------------------------------------------------------
    {
        Json s = stage("stage2-sweep");
        s["refs"] = {"dujella-petho", "second-linear-form", "psi-degeneracy"};
        guarded(s, [&] {
            if (!M2 || gap_bound == 0) {
                fail_with(s, "skipped", "needs the first reduction");
                return;
            }
            const long gap_max = gap_bound.get_si();
            s["inputs"] = {{"gap_max", gap_max}, {"M", str(*M2)}, {"A", "4/logAlpha"}, {"B", "sqrt2"},
                           {"retry_cap", default_retry_cap}, {"depth_cap", cf_depth_cap}};
            const Stage2Result r = stage2_sweep(gap_max, *M2, ctx, cfg.threads);
            Json pairs = Json::array();
            Json specials = Json::array();
            bool special_eps_ok = true;
            for (const auto &po : r.pairs) {
                if (po.special()) {
                    const bool eps_np = po.outcome.failure == ReductionFailure::EpsilonNonpositive;
                    special_eps_ok = special_eps_ok && eps_np;
                    specials.push_back({{"t", po.t}, {"s", po.s}, {"r", po.decomposition->r},
                                        {"s2", po.decomposition->s}, {"epsilon_nonpositive", eps_np}});
                } else if (po.outcome.ok()) {
                    pairs.push_back({po.t, po.s, po.outcome.convergent_index, str(*po.outcome.w_bound),
                                     str(po.n_max), po.deep ? 1 : 0});
                } else {
                    pairs.push_back({po.t, po.s, po.outcome.convergent_index, nullptr, nullptr,
                                     failure_name(po.outcome.failure.value_or(ReductionFailure::Precision))});
                }
            }
            auto got = r.special_pairs;
            auto want = expected_special_pairs();
            std::sort(got.begin(), got.end());
            std::sort(want.begin(), want.end());
            const bool special_match = got == want;
            s["results"] = {{"pairs_columns", {"t", "s", "convergent_index", "w_bound", "n_max", "deep"}},
                            {"pairs", pairs},
                            {"special", specials},
                            {"special_matches_expected", special_match},
                            {"special_epsilon_nonpositive", special_eps_ok},
                            {"failed", r.failed},
                            {"deep", r.deep},
                            {"worst_n", str(r.worst_n)}};
            if (r.deep > 0) {
                commentary.push_back(std::to_string(r.deep) +
                                     " near-degenerate pairs needed convergents beyond the retry cap");
            }
            branch_worst = std::max(branch_worst, r.worst_n);
            branches_known = branches_known && r.ok();
            set_verdict(s, r.ok() && special_match && special_eps_ok && r.worst_n <= cfg.n_max);
        });
        stages.push_back(std::move(s));
    }

    // -- special cases ---------------------------------------------------------
    {
        Json s = stage("special-cases");
        s["refs"] = {"legendre-criterion", "psi-degeneracy"};
        guarded(s, [&] {
            if (!M2) {
                fail_with(s, "skipped", "needs an a-bound");
                return;
            }
            s["inputs"] = {{"M", str(*M2)}, {"target", cfg.special_target}};
            Json cases = Json::array();
            bool all_ok = true;
            bool target_ok = true;
            for (const auto &[t, sg] : expected_special_pairs()) {
                const SpecialCaseResult r = special_case_bound(t, sg, *M2, ctx);
                cases.push_back({{"t", t},
                                 {"s", sg},
                                 {"r", r.decomposition.r},
                                 {"s2", r.decomposition.s},
                                 {"identity_ok", r.identity_ok},
                                 {"legendre_index_N", r.legendre.index_N},
                                 {"a_max_quotient", str(r.legendre.a_max)},
                                 {"argmax", r.legendre.argmax},
                                 {"n_bound", str(r.n_bound)},
                                 {"n_bound_global", str(r.n_bound_global)}});
                all_ok = all_ok && r.identity_ok && r.n_bound <= cfg.n_max;
                target_ok = target_ok && r.n_bound <= cfg.special_target;
                branch_worst = std::max(branch_worst, r.n_bound);
            }
            s["results"] = {{"cases", cases}, {"target_ok", target_ok}};
            commentary.push_back("special cases bound a - s' by n log(alpha)/log2 + 1; with a < M instead the "
                                 "same comparison gives the n_bound_global column");
            set_verdict(s, all_ok);
        });
        stages.push_back(std::move(s));
    }

    // -- conclusion ----------------------------------------------------------
    bool all_pass = true;
    Json failing = Json::array();
    for (const auto &s : stages) {
        if (s["verdict"] != "PASS") {
            all_pass = false;
            failing.push_back(s["name"]);
            const std::string name = s["name"];
            if (name != "search" && name != "table") {
                branches_known = false;
            }
        }
    }
    {
        Json s = stage("conclusion");
        s["inputs"]["n_max"] = cfg.n_max;
        s["refs"] = {"contradiction"};
        s["results"] = {{"n_bound_all_branches", branches_known ? Json(str(branch_worst)) : Json(nullptr)},
                        {"contradiction", branches_known && branch_worst <= cfg.n_max}};
        set_verdict(s, branches_known && branch_worst <= cfg.n_max);
        if (s["verdict"] != "PASS") {
            all_pass = false;
            failing.push_back("conclusion");
        }
        stages.push_back(std::move(s));
    }
    cert["stages"] = std::move(stages);
    cert["commentary"] = std::move(commentary);
    cert["failing_stages"] = failing;
    cert["verdict"] = all_pass ? "PASS" : "FAIL";
    return cert;
}

bool certificate_passed(const Json &cert)
{
    return cert.contains("verdict") && cert["verdict"] == "PASS";
}

} // namespace fibclose
