// ncdist: distributions and conditional expectations of polynomials and
// rational expressions in free random variables.
//
//   ncdist <linearize|moments|condexp|checkeq|oracle|rmt> job.json [flags]
//
// The job file carries the expression, the variable laws, and defaults;
// flags override.  Exit codes: 0 ok, 2 malformed job, 3 violated math
// precondition, 4 equation residual found in assert mode.

#include "CLI11.hpp"
#include "json.hpp"

#include "ncdist/condexp.hpp"
#include "ncdist/linrep.hpp"
#include "ncdist/oracle.hpp"
#include "ncdist/ratexpr.hpp"
#include "ncdist/rmt.hpp"
#include "ncdist/solver.hpp"

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

using namespace ncdist;
using nlohmann::json;

namespace {

struct JobEq {
    std::string name, expr;
    bool assert_clean = false;
};

struct Job {
    std::string expression;
    std::vector<std::pair<std::string, Dist>> vars;
    int order = 32;
    int oracle_order = 6;
    std::vector<std::string> retain;
    int max_word_len = 4;
    std::vector<JobEq> equations;
    int rmt_N = 1000;
    std::uint64_t rmt_seed = 1;
    int rmt_kmax = 6;
    std::string out;
};

struct SchemaError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

Job load_job(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw SchemaError("cannot open job file: " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw SchemaError(std::string("job file is not valid JSON: ") + e.what());
    }
    Job job;
    try {
        job.expression = j.at("expression").get<std::string>();
        if (!j.contains("variables") || !j["variables"].is_object() || j["variables"].empty())
            throw SchemaError("job needs a non-empty 'variables' object");
        for (auto& [name, dj] : j["variables"].items())
            job.vars.emplace_back(name, dist_from_json(dj.dump()));
        if (j.contains("order")) job.order = j["order"].get<int>();
        if (j.contains("oracle_order")) job.oracle_order = j["oracle_order"].get<int>();
        if (j.contains("retain"))
            for (auto& r : j["retain"]) job.retain.push_back(r.get<std::string>());
        if (j.contains("max_word_len")) job.max_word_len = j["max_word_len"].get<int>();
        if (j.contains("equations"))
            for (auto& ej : j["equations"]) {
                JobEq eq;
                eq.name = ej.value("name", "equation");
                eq.expr = ej.at("expr").get<std::string>();
                eq.assert_clean = ej.value("assert", false);
                job.equations.push_back(std::move(eq));
            }
        if (j.contains("rmt")) {
            job.rmt_N = j["rmt"].value("N", 1000);
            job.rmt_seed = j["rmt"].value("seed", (std::uint64_t)1);
            job.rmt_kmax = j["rmt"].value("k_max", 6);
        }
        job.out = j.value("out", "");
    } catch (const json::exception& e) {
        throw SchemaError(std::string("job schema: ") + e.what());
    } catch (const std::invalid_argument& e) {
        throw SchemaError(std::string("job schema: ") + e.what());
    }
    if (job.order < 0) throw SchemaError("order must be >= 0");
    return job;
}

// interning the letters with algebra == name makes every named variable free
// from every other one
Embedding bind_all(const Job& job) {
    Embedding e;
    for (auto& [name, d] : job.vars) e.bind(var(name, name), d);
    return e;
}

RatExprPtr parse_job_expr(const Job& job) {
    RatExprPtr ex;
    try {
        ex = parse(job.expression);
    } catch (const ParseError& pe) {
        throw SchemaError("expression: " + std::string(pe.what()));
    }
    for (VarId x : ex->support_vars()) {
        bool known = false;
        for (auto& [name, d] : job.vars) known = known || name == var_name(x);
        if (!known) throw SchemaError("expression uses unbound variable " + var_name(x));
    }
    if (is_polynomial(ex) && to_ncpoly(ex).t.empty())
        throw SchemaError("expression is the zero polynomial");
    return ex;
}

void emit(const Job& job, const std::string& cli_out, const std::string& text) {
    std::string path = !cli_out.empty() ? cli_out : job.out;
    if (path.empty()) {
        std::cout << text << "\n";
        return;
    }
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << text << "\n";
}

json series_json(const ScalarSeries& s) {
    json arr = json::array();
    for (int k = 0; k <= s.K; ++k) arr.push_back(scalar_str(s.coeff(k)));
    return arr;
}

std::string series_csv(const json& report, const std::string& key) {
    std::ostringstream os;
    os << "k," << key << "\n";
    int k = 0;
    for (auto& c : report.at(key)) {
        os << k++ << ",";
        if (c.is_string()) os << c.get<std::string>();
        else os << c.dump();
        os << "\n";
    }
    return os.str();
}

struct Solved {
    bool graded = true;
    GradedPencil pen;
    SolveResult sol;          // graded
    SSolveResult ssol;        // ungraded
    ScalarSeries natural;     // graded only
};

Solved solve_job(const Job& job, const RatExprPtr& ex, const Embedding& e) {
    Solved s;
    if (is_polynomial(ex)) {
        NCPoly p = to_ncpoly(ex);
        s.pen = suffix_linearize(p);
        s.sol = solve_pencil_forward(s.pen, e, s.pen.m * job.order);
        s.natural = moment_series(s.pen, s.sol);
    } else {
        if (!ex->eps().is_zero())
            throw std::domain_error("rational expression must have zero constant term");
        s.graded = false;
        s.pen = resolvent_pencil(rationalize(ex));
        s.ssol = solve_pencil_s(s.pen, e, job.order);
    }
    return s;
}

int cmd_linearize(const Job& job, const std::string& out) {
    RatExprPtr ex = parse_job_expr(job);
    GradedPencil pen;
    if (is_polynomial(ex)) pen = suffix_linearize(to_ncpoly(ex));
    else pen = resolvent_pencil(rationalize(ex));
    VerifyReport rep = verify_pencil(pen, ex, std::min(job.order, 8));
    json r;
    r["expression"] = job.expression;
    r["pencil"] = json::parse(pencil_json(pen));
    r["verified_to_order"] = std::min(job.order, 8);
    r["verified"] = rep.ok;
    if (!rep.ok) r["verify_message"] = rep.message;
    emit(job, out, r.dump(2));
    return 0;
}

int cmd_moments(const Job& job, const std::string& out, const std::string& fmt) {
    RatExprPtr ex = parse_job_expr(job);
    Embedding e = bind_all(job);
    Solved s = solve_job(job, ex, e);
    json r;
    r["expression"] = job.expression;
    if (s.graded) {
        r["order"] = s.natural.K;
        r["grading_step"] = s.pen.m;
        r["exact"] = true;
        r["series"] = series_json(s.natural);
    } else {
        r["order"] = s.ssol.K;
        r["exact"] = false;
        r["stabilization"] = s.ssol.stabilization;
        json arr = json::array();
        for (auto& c : s.ssol.M) arr.push_back({{"re", c.real()}, {"im", c.imag()}});
        r["series"] = arr;
    }
    emit(job, out, fmt == "csv" ? series_csv(r, "series") : r.dump(2));
    return 0;
}

int cmd_condexp(const Job& job, const std::string& out) {
    RatExprPtr ex = parse_job_expr(job);
    if (!is_polynomial(ex))
        throw std::domain_error("condexp needs a polynomial expression");
    if (job.retain.empty()) throw SchemaError("condexp needs a non-empty retain set");
    Embedding e = bind_all(job);
    Solved s = solve_job(job, ex, e);
    std::set<VarId> keep;
    for (auto& name : job.retain) {
        bool known = false;
        for (auto& [vn, d] : job.vars) known = known || vn == name;
        if (!known) throw SchemaError("retain names unknown variable " + name);
        keep.insert(lookup_var(name));
    }
    SubordinatedPencil sub = integrate_out(s.pen, s.sol, keep);
    auto words = expand_in_retained(sub, job.max_word_len);
    json r;
    r["expression"] = job.expression;
    r["retain"] = job.retain;
    r["pencil_order"] = s.sol.K;
    r["grading_step"] = s.pen.m;
    json w;
    for (auto& [wd, ser] : words) w[wd.empty() ? "1" : word_str(wd)] = series_json(ser);
    r["words"] = w;
    emit(job, out, r.dump(2));
    return 0;
}

int cmd_checkeq(const Job& job, const std::string& out) {
    if (job.equations.empty()) throw SchemaError("checkeq needs an 'equations' list");
    RatExprPtr ex = parse_job_expr(job);
    Embedding e = bind_all(job);
    Solved s = solve_job(job, ex, e);
    if (!s.graded) throw std::domain_error("checkeq needs a polynomial expression");
    std::map<std::string, ScalarSeries> env{{"M", s.natural}};
    json r;
    r["expression"] = job.expression;
    r["order"] = s.natural.K;
    json eqs = json::array();
    bool dirty = false;
    for (auto& eq : job.equations) {
        int res = check_equation(eq.expr, env);
        bool clean = res > s.natural.K;
        json ej;
        ej["name"] = eq.name;
        ej["expr"] = eq.expr;
        ej["residual_order"] = clean ? "≥ " + std::to_string(res) : std::to_string(res);
        ej["clean"] = clean;
        eqs.push_back(ej);
        if (eq.assert_clean && !clean) dirty = true;
    }
    r["equations"] = eqs;
    emit(job, out, r.dump(2));
    return dirty ? 4 : 0;
}

int cmd_oracle(const Job& job, const std::string& out) {
    RatExprPtr ex = parse_job_expr(job);
    if (!is_polynomial(ex)) throw std::domain_error("oracle needs a polynomial expression");
    NCPoly p = to_ncpoly(ex);
    Embedding e = bind_all(job);
    int kmax = std::min({job.order, job.oracle_order, 6});
    ScalarSeries s(kmax);
    NCPoly pk = NCPoly::unit();
    for (int k = 0; k <= kmax; ++k) {
        s.c[k] = free_moment(e, pk);
        if (k < kmax) pk = pk * p;
    }
    json r;
    r["expression"] = job.expression;
    r["order"] = kmax;
    r["exact"] = true;
    r["series"] = series_json(s);
    emit(job, out, r.dump(2));
    return 0;
}

int cmd_rmt(const Job& job, const std::string& out, std::optional<std::uint64_t> seed) {
    RatExprPtr ex = parse_job_expr(job);
    if (!is_polynomial(ex)) throw std::domain_error("rmt needs a polynomial expression");
    NCPoly p = to_ncpoly(ex);
    Embedding e = bind_all(job);
    std::uint64_t sd = seed.value_or(job.rmt_seed);

    std::map<VarId, Eigen::MatrixXcd> at;
    for (auto& [name, d] : job.vars) at.emplace(var(name), sample_matrix(d, name, job.rmt_N, sd));
    std::vector<double> tm = trace_moments(evaluate_poly(p, at), job.rmt_kmax);

    GradedPencil pen = suffix_linearize(p);
    SolveResult sol = solve_pencil_forward(pen, e, pen.m * job.rmt_kmax);
    ScalarSeries nat = moment_series(pen, sol);

    json r;
    r["expression"] = job.expression;
    r["N"] = job.rmt_N;
    r["seed"] = sd;
    json jt = json::array(), js = json::array(), jd = json::array();
    for (int k = 1; k <= job.rmt_kmax; ++k) {
        double ref = nat.coeff(k).re_d();
        jt.push_back(tm[k - 1]);
        js.push_back(ref);
        jd.push_back(std::abs(tm[k - 1] - ref) / std::max(1.0, std::abs(ref)));
    }
    r["trace_moments"] = jt;
    r["series_moments"] = js;
    r["rel_err"] = jd;
    emit(job, out, r.dump(2));
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"distributions of polynomials and rational expressions in free variables"};
    app.require_subcommand(1);

    std::string jobfile, out_path, fmt = "json";
    int order_flag = -1;
    std::string retain_flag;
    std::optional<std::uint64_t> seed_flag;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("job", jobfile, "job JSON file")->required();
        sub->add_option("--order", order_flag, "truncation order override");
        sub->add_option("--retain", retain_flag, "comma-separated retained variables");
        sub->add_option("--out", out_path, "output path (default stdout / job's 'out')");
        sub->add_option("--format", fmt, "json|csv")->check(CLI::IsMember({"json", "csv"}));
        return sub;
    };
    CLI::App* lin = add_common(app.add_subcommand("linearize", "emit the pencil"));
    CLI::App* mom = add_common(app.add_subcommand("moments", "moment series"));
    CLI::App* cex = add_common(app.add_subcommand("condexp", "retained-word expansion"));
    CLI::App* chk = add_common(app.add_subcommand("checkeq", "equation residuals"));
    CLI::App* orc = add_common(app.add_subcommand("oracle", "reference moments"));
    CLI::App* rmt = add_common(app.add_subcommand("rmt", "random matrix check"));
    std::uint64_t seed_opt = 0;
    rmt->add_option("--seed", seed_opt, "sampling seed override");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) ? 2 : 0;
    }
    if (rmt->count("--seed")) seed_flag = seed_opt;

    try {
        Job job = load_job(jobfile);
        if (order_flag >= 0) job.order = order_flag;
        if (!retain_flag.empty()) {
            job.retain.clear();
            std::stringstream ss(retain_flag);
            std::string item;
            while (std::getline(ss, item, ','))
                if (!item.empty()) job.retain.push_back(item);
        }
        if (lin->parsed()) return cmd_linearize(job, out_path);
        if (mom->parsed()) return cmd_moments(job, out_path, fmt);
        if (cex->parsed()) return cmd_condexp(job, out_path);
        if (chk->parsed()) return cmd_checkeq(job, out_path);
        if (orc->parsed()) return cmd_oracle(job, out_path);
        if (rmt->parsed()) return cmd_rmt(job, out_path, seed_flag);
        return 2;
    } catch (const SchemaError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
