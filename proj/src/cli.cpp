#include <fibclose/cli.hpp>

#include <fibclose/contfrac.hpp>
#include <fibclose/linforms.hpp>
#include <fibclose/proof.hpp>
#include <fibclose/reduction.hpp>
#include <fibclose/search.hpp>

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>

namespace fibclose
{

namespace
{

struct Options {
    long n_max = 550;
    long bits = 256;
    long bits_max = 65536;
    std::string format = "json";
    std::string out_path;
    bool tighten = false;
    std::string table;
    std::string M;
    std::string M2;
    unsigned threads = 0;

    std::string constant = "gamma";
    std::size_t count = 40;
    std::string bound;

    std::string form = "first";
    long t = 1;
    long s = 1;
    std::string gamma = "gamma";
    std::string mu;
    std::string A;
    std::string B;
    long gap_max = 157;
    std::size_t expected_count = 214;
};

class UsageError : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

mpz_class parse_integer(const std::string &text)
{
    const mpq_class q = parse_decimal(text);
    if (q.get_den() != 1) {
        throw UsageError("not an integer: " + text);
    }
    return q.get_num();
}

// A registry constant name or an exact decimal.
Producer parse_value(const std::string &text)
{
    try {
        return producer(Constant::parse(text));
    } catch (const std::invalid_argument &) {
    }
    try {
        return producer(parse_decimal(text));
    } catch (const std::invalid_argument &) {
        throw UsageError("unknown value: " + text);
    }
}

Precision precision_of(const Options &o)
{
    if (o.bits < 16 || o.bits > o.bits_max) {
        throw UsageError("need 16 <= --bits <= --bits-max");
    }
    return Precision{o.bits, o.bits_max};
}

// Writes to --out when given, otherwise to the stream.
void emit(const Options &o, std::ostream &out, const std::string &text)
{
    if (o.out_path.empty()) {
        out << text;
        return;
    }
    std::ofstream f(o.out_path);
    if (!f) {
        throw UsageError("cannot write " + o.out_path);
    }
    f << text;
}

std::string dump(const Json &j)
{
    return j.dump(2) + "\n";
}

Json tuples(const std::vector<Solution> &v)
{
    Json a = Json::array();
    for (const auto &x : v) {
        a.push_back({x.n, x.m, x.l, x.a});
    }
    return a;
}

int cmd_search(const Options &o, std::ostream &out)
{
    if (o.n_max < 2) {
        throw UsageError("--n-max must be at least 2");
    }
    const auto sols = enumerate(o.n_max, o.threads);
    const SearchSummary sm = summarize(sols);
    std::ostringstream text;
    if (o.format == "csv") {
        write_table(text, sols);
    } else if (o.format == "text") {
        for (const auto &s : sols) {
            text << s << '\n';
        }
        text << sm.count << " solutions, max n = " << sm.max_n << ", max a = " << sm.max_a << '\n';
    } else {
        Json j{{"n_max", o.n_max},
               {"count", sm.count},
               {"max_n", sm.max_n},
               {"max_a", sm.max_a},
               {"solutions", tuples(sols)}};
        text << dump(j);
    }
    emit(o, out, text.str());
    return exit_pass;
}

int cmd_verify_table(const Options &o, std::ostream &out)
{
    if (o.table.empty()) {
        throw UsageError("verify-table needs --table PATH");
    }
    const TableDiff d = verify_table(o.table, o.n_max);
    const bool ok = d.sets_equal() && d.duplicates.empty() && d.table_unique == o.expected_count;
    Json j{{"table", o.table},
           {"n_max", o.n_max},
           {"table_rows", d.table_rows},
           {"table_unique", d.table_unique},
           {"enumerated", d.reference},
           {"expected_count", o.expected_count},
           {"missing", tuples(d.missing)},
           {"extra", tuples(d.extra)},
           {"duplicates", tuples(d.duplicates)},
           {"verdict", ok ? "PASS" : "FAIL"}};
    emit(o, out, dump(j));
    return ok ? exit_pass : exit_fail;
}

int cmd_contfrac(const Options &o, std::ostream &out)
{
    const Precision ctx = precision_of(o);
    const Constant x = Constant::parse(o.constant);
    const ContFrac cf = cf_expand(x, o.count, ctx);
    Json j{{"constant", x.name()}, {"bits", ctx.bits}, {"quotients", Json::array()}, {"convergents", Json::array()}};
    for (std::size_t k = 0; k < cf.size(); ++k) {
        j["quotients"].push_back(cf.a(k).get_str());
        j["convergents"].push_back({{"index", k}, {"p", cf.p(k).get_str()}, {"q", cf.q(k).get_str()}});
    }
    if (!o.bound.empty()) {
        const mpz_class b = parse_integer(o.bound);
        const Convergent c = cf_first_q_exceeding(x, b, ctx);
        j["first_q_exceeding"] = {{"bound", b.get_str()},
                                  {"index", c.index},
                                  {"ordinal", c.ordinal()},
                                  {"p", c.p.get_str()},
                                  {"q", c.q.get_str()}};
    }
    if (!o.M.empty()) {
        const LegendreBound lb = legendre_lower_bound(x, parse_integer(o.M), ctx);
        j["legendre"] = {{"M", lb.M.get_str()},
                         {"index_N", lb.index_N},
                         {"a_max", lb.a_max.get_str()},
                         {"argmax", lb.argmax}};
    }
    emit(o, out, dump(j));
    return exit_pass;
}

Json report_json(const BoundReport &r)
{
    Json j{{"route", route_name(r.route)},
           {"C1", interval_json(r.C1)},
           {"C2", interval_json(r.C2)},
           {"gap_coeff", interval_json(r.gap_coeff)},
           {"cases12_coeff", interval_json(r.cases12_coeff)}};
    const std::pair<const char *, const CaseBound *> cases[] = {
        {"cases12", &r.cases12}, {"case3", &r.case3}, {"combined", &r.combined}};
    for (const auto &[key, c] : cases) {
        j[key] = {{"tag", c->tag}, {"n_max", c->n_max.get_str()}, {"a_max", c->a_max.get_str()}};
    }
    j["audit"] = Json::array();
    for (const auto &e : r.audit) {
        j["audit"].push_back({{"claim", e.claim}, {"holds", e.holds}});
    }
    j["audit_ok"] = r.audit_ok();
    return j;
}

int cmd_first_bound(const Options &o, std::ostream &out)
{
    const Precision ctx = precision_of(o);
    const BoundReport r = derive_first_bounds(BoundRoute::Rounded, ctx);
    Json j = report_json(r);
    bool ok = r.audit_ok();
    if (o.tighten) {
        const BoundReport t = derive_first_bounds(BoundRoute::Tight, ctx);
        j["tight"] = report_json(t);
        ok = ok && t.audit_ok();
    }
    emit(o, out, dump(j));
    return ok ? exit_pass : exit_fail;
}

ReductionInstance instance_of(const Options &o, const mpz_class &M)
{
    ReductionInstance inst;
    if (o.form == "first") {
        inst = first_form_instance(M);
    } else if (o.form == "second") {
        inst = second_form_instance(o.t, o.s, M);
    } else {
        throw UsageError("--form must be first or second");
    }
    inst.gamma = Constant::parse(o.gamma);
    if (!o.mu.empty()) {
        inst.mu = parse_value(o.mu);
        inst.mu_name = o.mu;
    }
    if (!o.A.empty()) {
        inst.A = parse_value(o.A);
    }
    if (!o.B.empty()) {
        inst.B = parse_value(o.B);
    }
    return inst;
}

int cmd_reduce(const Options &o, std::ostream &out)
{
    const Precision ctx = precision_of(o);
    const mpz_class M = parse_integer(o.M.empty() ? "9e28" : o.M);
    const ReductionOutcome r = dp_reduce(instance_of(o, M), ctx);
    Json j{{"form", o.form}, {"M", M.get_str()}, {"convergent_index", r.convergent_index},
           {"convergent_ordinal", r.convergent_index + 1}, {"q", r.q.get_str()}, {"attempts", r.attempts},
           {"epsilon", interval_json(r.epsilon)}};
    if (r.ok()) {
        j["log_ratio"] = interval_json(r.log_ratio);
        j["w_bound"] = r.w_bound->get_str();
    } else {
        j["failure"] = failure_name(r.failure.value_or(ReductionFailure::Precision));
    }
    emit(o, out, dump(j));
    if (r.ok()) {
        return exit_pass;
    }
    return r.failure == ReductionFailure::EpsilonNonpositive ? exit_fail : exit_usage;
}

int cmd_sweep(const Options &o, std::ostream &out)
{
    const Precision ctx = precision_of(o);
    mpz_class M;
    if (o.M.empty()) {
        const Stage1Result s1 = stage1_reduce(mpz_class("90000000000000000000000000000"), BoundRoute::Rounded, ctx);
        if (!s1.ok()) {
            throw std::runtime_error("first reduction failed; pass --M");
        }
        M = s1.a_bound_after;
    } else {
        M = parse_integer(o.M);
    }
    const Stage2Result r = stage2_sweep(o.gap_max, M, ctx, o.threads);
    Json special = Json::array();
    Json failed = Json::array();
    for (const auto &po : r.pairs) {
        if (po.special()) {
            special.push_back({po.t, po.s});
        } else if (!po.outcome.ok()) {
            failed.push_back({po.t, po.s});
        }
    }
    Json j{{"gap_max", o.gap_max}, {"M", M.get_str()},   {"pairs", r.pairs.size()}, {"special", special},
           {"failed", failed},     {"deep", r.deep},     {"worst_n", r.worst_n.get_str()}};
    emit(o, out, dump(j));
    return r.ok() && r.worst_n <= o.n_max ? exit_pass : exit_fail;
}

int cmd_prove(const Options &o, std::ostream &out)
{
    ProofConfig cfg;
    cfg.n_max = o.n_max;
    cfg.precision = precision_of(o);
    cfg.expected_count = o.expected_count;
    if (!o.table.empty()) {
        cfg.table_path = o.table;
    }
    if (!o.M.empty()) {
        cfg.M1 = parse_integer(o.M);
    }
    if (!o.M2.empty()) {
        cfg.M2 = parse_integer(o.M2);
    }
    cfg.route = o.tighten ? BoundRoute::Tight : BoundRoute::Rounded;
    cfg.threads = o.threads;
    const Json cert = run_full_proof(cfg);
    emit(o, out, dump(cert));
    if (certificate_passed(cert)) {
        return exit_pass;
    }
    for (const auto &s : cert["stages"]) {
        if (s.contains("error") && s["error"]["kind"] == "precision") {
            return exit_usage;
        }
    }
    return exit_fail;
}

} // namespace

int run_cli(int argc, const char *const *argv, std::ostream &out, std::ostream &err)
{
    Options o;
    if (const char *env = std::getenv("FIBCLOSE_BITS")) {
        try {
            o.bits = std::stol(env);
        } catch (const std::exception &) {
            err << "ignoring malformed FIBCLOSE_BITS\n";
        }
    }

    CLI::App app{"Sums of three Fibonacci numbers close to a power of 2", "fibclose"};
    app.require_subcommand(1);
    const auto precision_flags = [&](CLI::App *c) {
        c->add_option("--bits", o.bits, "working precision in bits");
        c->add_option("--bits-max", o.bits_max, "precision ceiling in bits");
    };
    const auto output_flags = [&](CLI::App *c) {
        c->add_option("--out", o.out_path, "write output to this file");
        c->add_option("--format", o.format, "json, csv or text")->check(CLI::IsMember({"json", "csv", "text"}));
    };

    auto *search = app.add_subcommand("search", "enumerate all solutions up to --n-max");
    search->add_option("--n-max", o.n_max, "largest n");
    search->add_option("--threads", o.threads);
    output_flags(search);

    auto *verify = app.add_subcommand("verify-table", "compare a CSV table with the enumeration");
    verify->add_option("--table", o.table, "CSV with header n,m,l,a")->required();
    verify->add_option("--n-max", o.n_max);
    verify->add_option("--expected-count", o.expected_count);
    output_flags(verify);

    auto *contfrac = app.add_subcommand("contfrac", "certified continued fraction of a constant");
    contfrac->add_option("--constant", o.constant, "registry name, default gamma");
    contfrac->add_option("--count", o.count, "number of quotients");
    contfrac->add_option("--bound", o.bound, "also report the first q above this");
    contfrac->add_option("--M", o.M, "also report the Legendre data for this M");
    precision_flags(contfrac);
    output_flags(contfrac);

    auto *first = app.add_subcommand("first-bound", "three-case first bounds");
    first->add_flag("--tighten", o.tighten, "also report the unrounded constants");
    precision_flags(first);
    output_flags(first);

    auto *reduce = app.add_subcommand("reduce", "one reduction step");
    reduce->add_option("--form", o.form, "first or second linear form");
    reduce->add_option("--t", o.t, "n - m for the second form");
    reduce->add_option("--s", o.s, "n - l for the second form");
    reduce->add_option("--gamma", o.gamma);
    reduce->add_option("--mu", o.mu, "constant name or decimal");
    reduce->add_option("--A", o.A, "constant name or decimal");
    reduce->add_option("--B", o.B, "constant name or decimal");
    reduce->add_option("--M", o.M, "bound on the gamma coefficient");
    precision_flags(reduce);
    output_flags(reduce);

    auto *sweep = app.add_subcommand("sweep", "second reduction over all gap pairs");
    sweep->add_option("--gap-max", o.gap_max);
    sweep->add_option("--M", o.M, "a-bound, default from the first reduction");
    sweep->add_option("--n-max", o.n_max);
    sweep->add_option("--threads", o.threads);
    precision_flags(sweep);
    output_flags(sweep);

    auto *prove = app.add_subcommand("prove", "full pipeline and certificate");
    prove->add_option("--n-max", o.n_max);
    prove->add_option("--table", o.table);
    prove->add_option("--expected-count", o.expected_count);
    prove->add_option("--M", o.M, "a-bound for the first reduction");
    prove->add_option("--M2", o.M2, "a-bound for the second reduction");
    prove->add_flag("--tighten", o.tighten, "use the unrounded constants after the first reduction");
    prove->add_option("--threads", o.threads);
    precision_flags(prove);
    output_flags(prove);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? exit_pass : exit_usage;
    }

    try {
        if (*search) {
            return cmd_search(o, out);
        }
        if (*verify) {
            return cmd_verify_table(o, out);
        }
        if (*contfrac) {
            return cmd_contfrac(o, out);
        }
        if (*first) {
            return cmd_first_bound(o, out);
        }
        if (*reduce) {
            return cmd_reduce(o, out);
        }
        if (*sweep) {
            return cmd_sweep(o, out);
        }
        if (*prove) {
            return cmd_prove(o, out);
        }
    } catch (const UsageError &e) {
        err << "fibclose: " << e.what() << '\n';
        return exit_usage;
    } catch (const std::invalid_argument &e) {
        err << "fibclose: " << e.what() << '\n';
        return exit_usage;
    } catch (const std::exception &e) {
        err << "fibclose: " << e.what() << '\n';
        return exit_usage;
    }
    return exit_usage;
}

} // namespace fibclose
