#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <numbers>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "greens/greens.hpp"

using nlohmann::json;
using namespace greens;

namespace {

constexpr int kExitInvariant = 1;
constexpr int kExitConfig = 2;

/// Raised when a verification or invariant check fails.
struct InvariantFailure : std::runtime_error {
    json payload;
    InvariantFailure(const std::string& what, json p) : std::runtime_error(what), payload(std::move(p)) {}
};

struct Context {
    std::string command_line;
    std::string out_path;
    std::uint64_t seed = 1;
    int threads = 0;
};

std::string fmt(double x) {
    std::ostringstream os;
    os << std::setprecision(17) << x;
    return os.str();
}

/// Writes to --out when given, stdout otherwise.
class Sink {
public:
    explicit Sink(const std::string& path) {
        if (!path.empty()) {
            file_.open(path);
            if (!file_) throw DomainError("cannot open output file: " + path);
        }
    }
    std::ostream& os() { return file_.is_open() ? static_cast<std::ostream&>(file_) : std::cout; }

private:
    std::ofstream file_;
};

void csv_header(std::ostream& os, const Context& ctx, const std::string& tolerances) {
    os << "# greens_cli " << kVersion << "\n";
    os << "# command: " << ctx.command_line << "\n";
    os << "# seed: " << ctx.seed << "\n";
    os << "# tolerances: " << tolerances << "\n";
}

void emit_json(const Context& ctx, json j) {
    j["version"] = kVersion;
    j["command"] = ctx.command_line;
    Sink sink(ctx.out_path);
    sink.os() << j.dump(2) << "\n";
}

json check(const std::string& name, double value, double tol) {
    return {{"name", name}, {"value", value}, {"tol", tol}, {"pass", std::isfinite(value) && value < tol}};
}

/// Emits a verification report and fails when any check fails.
void finish_checks(const Context& ctx, json report, const json& checks) {
    bool pass = true;
    for (const auto& c : checks) pass = pass && c["pass"].get<bool>();
    report["checks"] = checks;
    report["pass"] = pass;
    emit_json(ctx, report);
    if (!pass) throw InvariantFailure("verification failed", report);
}

// ---------------------------------------------------------------- green

void green_eval(const Context& ctx, double m, double T, double t, double s) {
    const ReflectionKernel k(m, T);
    if (k.resonant()) throw ResonanceError("m is resonant for this T");
    emit_json(ctx, {{"m", m},
                    {"T", T},
                    {"t", t},
                    {"s", s},
                    {"G", eval_G(k, t, s)},
                    {"dG_dt_left", eval_G_dt(k, t, s, Side::Left)},
                    {"dG_dt_right", eval_G_dt(k, t, s, Side::Right)},
                    {"sign", to_string(sign_classification_G(k))}});
}

void green_verify(const Context& ctx, double m, double T, int n) {
    const ReflectionKernel k(m, T);
    if (k.resonant()) throw ResonanceError("m is resonant for this T");
    std::mt19937_64 rng(ctx.seed);
    std::uniform_real_distribution<double> U(-T, T);
    double sym = 0.0, jump = 0.0, ode = 0.0, norm = 0.0;
    const double h = 1e-4;
    for (int i = 0; i < n; ++i) {
        const double t = U(rng), s = U(rng);
        sym = std::max({sym, std::abs(k(t, s) - k(s, t)), std::abs(k(t, s) - k(-t, -s))});
        jump = std::max(jump, std::abs(eval_G_dt(k, t, t, Side::Left) - eval_G_dt(k, t, t, Side::Right) - 1.0));
        const double tt = 0.9 * t;
        if (std::abs(tt - s) > 10 * h && std::abs(tt + s) > 10 * h && std::abs(tt) < T - 2 * h) {
            const double d2 = (k(tt + h, s) - 2 * k(tt, s) + k(tt - h, s)) / (h * h);
            ode = std::max(ode, std::abs(d2 + m * k(-tt, s)));
        }
        norm = std::max(norm, std::abs(integral_G_over_s(k, t) - 1.0 / m));
    }
    const GSign cls = sign_classification_G(k);
    double gmin = INFINITY, gmax = -INFINITY;
    for (int i = 0; i < 101; ++i)
        for (int j = 0; j < 101; ++j) {
            const double v = k(-T + 2 * T * i / 100, -T + 2 * T * j / 100);
            gmin = std::min(gmin, v), gmax = std::max(gmax, v);
        }
    double sign_defect = 0.0;
    if (cls == GSign::StrictlyPositive) sign_defect = gmin > 0 ? 0.0 : -gmin;
    if (cls == GSign::StrictlyNegative) sign_defect = gmax < 0 ? 0.0 : gmax;
    if (cls == GSign::ChangesSign) sign_defect = gmin < 0 && gmax > 0 ? 0.0 : 1.0;
    json checks = json::array({check("symmetry", sym, 1e-12), check("jump", jump, 1e-10),
                               check("ode_residual", ode, 1e-4), check("normalization", norm, 1e-9),
                               check("sign_grid_101", sign_defect, 1e-300)});
    finish_checks(ctx, {{"m", m}, {"T", T}, {"samples", n}, {"seed", ctx.seed}, {"sign", to_string(cls)}}, checks);
}

// ---------------------------------------------------------------- composite

void composite_build(const Context& ctx, double m, double M, double T) {
    const CompositeKernel k = make_kernel(m, M, T);
    emit_json(ctx, to_json(k));
}

void composite_verify(const Context& ctx, double m, double M, double T, int n) {
    const CompositeKernel k = make_kernel(m, M, T);
    const EvalDiagnostics d = certify(k, 23, m == 0.0 ? 1e-3 : 1e-4);
    std::mt19937_64 rng(ctx.seed);
    std::uniform_real_distribution<double> U(-T, T);
    double norm = 0.0;
    for (int i = 0; i < n; ++i) norm = std::max(norm, std::abs(integral_H(k, U(rng), -T, T) - 1.0 / (m + M)));
    json checks = json::array({check("ode_residual", d.residual_ode, 1e-4), check("ode_residual_s", d.residual_ode_s, 1e-4),
                               check("jump", d.jump_error, 1e-5), check("periodicity", d.periodicity_error, 1e-8),
                               check("periodicity_dt", d.periodicity_dt_error, 1e-4),
                               check("symmetry", d.symmetry_error, 1e-8), check("normalization", norm, 1e-8)});
    finish_checks(ctx,
                  {{"m", m}, {"M", M}, {"T", T}, {"mode", to_string(k.mode())}, {"cond", k.condition_number()},
                   {"seed", ctx.seed}},
                  checks);
}

// ---------------------------------------------------------------- region

std::string opt_str(const std::optional<double>& v) { return v ? fmt(*v) : std::string("nan"); }

void region_scan(const Context& ctx, double T, std::optional<double> m_min, std::optional<double> m_max, int n,
                 int grid_n, double tol, bool candidates) {
    if (n < 1) throw DomainError("--n must be positive");
    const double lo = m_min.value_or(-std::pow(std::numbers::pi / T, 2) * 0.95);
    const double hi = m_max.value_or(std::pow(std::numbers::pi / (2 * T), 2) * 0.95);
    if (!(lo < hi)) throw DomainError("--m-min must be below --m-max");
    const auto grid = linspace(lo, hi, n);
    ScanConfig cfg;
    cfg.grid_n = grid_n;
    cfg.tol = tol;
    cfg.threads = ctx.threads;
    const auto samples = scan_region(grid, T, cfg);
    std::vector<std::optional<double>> cpos(n), cneg(n);
    if (candidates)
        parallel_for(grid.size(), resolve_threads(ctx.threads), [&](std::size_t i) {
            cpos[i] = candidate_point_boundary(grid[i], T, RegionSign::Positive);
            cneg[i] = candidate_point_boundary(grid[i], T, RegionSign::Negative);
        });
    Sink sink(ctx.out_path);
    auto& os = sink.os();
    csv_header(os, ctx, "bisection tol " + fmt(tol) + ", extremum grid " + std::to_string(grid_n));
    os << "m,M_pos,M_neg,method,necessary_ok";
    if (candidates) os << ",M_pos_candidate,M_neg_candidate";
    os << "\n";
    bool all_ok = true;
    double dev = 0.0;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const auto& r = samples[i];
        const bool ok = necessary_condition_ok(r);
        all_ok = all_ok && ok;
        os << fmt(r.m) << "," << opt_str(r.M_pos_upper) << "," << opt_str(r.M_neg_lower) << "," << to_string(r.method)
           << "," << (ok ? 1 : 0);
        if (candidates) {
            os << "," << opt_str(cpos[i]) << "," << opt_str(cneg[i]);
            if (cpos[i] && r.M_pos_upper) dev = std::max(dev, std::abs(*cpos[i] - *r.M_pos_upper));
            if (cneg[i] && r.M_neg_lower) dev = std::max(dev, std::abs(*cneg[i] - *r.M_neg_lower));
        }
        os << "\n";
    }
    if (candidates) os << "# candidate-point curve max deviation (conjectural comparison): " << fmt(dev) << "\n";
    if (!all_ok) throw InvariantFailure("necessary condition sign(m+M) violated", json::object());
}

void region_closed_form(const Context& ctx, double T, std::optional<double> m_min, std::optional<double> m_max,
                        int n) {
    if (!(T > 0.0 && T <= 1.0)) throw DomainError("closed-form region boundaries require 0 < T <= 1");
    if (n < 1) throw DomainError("--n must be positive");
    const double lo = m_min.value_or(-std::pow(std::numbers::pi / T, 2) * 0.95);
    const double hi = m_max.value_or(std::pow(std::numbers::pi / (2 * T), 2) * 0.95);
    auto grid = linspace(lo, hi, n);
    if (lo < 0.0 && hi > 0.0 && std::find(grid.begin(), grid.end(), 0.0) == grid.end()) {
        grid.push_back(0.0);
        std::sort(grid.begin(), grid.end());
    }
    const auto rows = closed_form_region(grid, T);
    Sink sink(ctx.out_path);
    auto& os = sink.os();
    csv_header(os, ctx, "closed form, branch roots to 1e-14");
    os << "# branch switches: alpha2/T^2 = " << fmt(solve_alpha2() / (T * T)) << ", alpha3/T^2 = "
       << fmt(solve_alpha3() / (T * T)) << "\n";
    os << "m,M_pos,M_neg,method\n";
    for (const auto& r : rows)
        os << fmt(r.m) << "," << opt_str(r.M_pos_upper) << "," << opt_str(r.M_neg_lower) << "," << to_string(r.method)
           << "\n";
}

// ---------------------------------------------------------------- eigen

json eigen_json(const EigenResult& r) {
    return {{"lambda", r.lambda},
            {"method", to_string(r.method)},
            {"variant", to_string(r.variant)},
            {"residual", r.residual},
            {"bracket", {r.bracket.first, r.bracket.second}},
            {"iterations", r.iterations}};
}

void eigen_dirichlet(const Context& ctx, double T, double s0, std::optional<double> m) {
    json j{{"T", T}, {"s0", s0}};
    if (!m || *m == 0.0) {
        j["m"] = 0.0;
        j["result"] = eigen_json(dirichlet_eig_m0(T, s0));
        if (s0 == T) j["spectral_radius"] = eigen_json(lambda_via_spectral_radius(T));
    } else {
        j["m"] = *m;
        j["result"] = eigen_json(dirichlet_eig_general(*m, T, s0));
        if (T <= 1.0 && s0 > 0.0) j["closed_form"] = lambda_closed_Tle1(*m, T, s0);
    }
    emit_json(ctx, j);
}

void eigen_lambda_curve(const Context& ctx, double T_min, double T_max, int n) {
    if (!(T_min > 0.0 && T_max >= T_min) || n < 1) throw DomainError("need 0 < T-min <= T-max and n >= 1");
    const auto Ts = linspace(T_min, T_max, n);
    std::vector<EigenResult> res(n);
    parallel_for(Ts.size(), resolve_threads(ctx.threads), [&](std::size_t i) { res[i] = lambda1_zsinxelo(Ts[i]); });
    Sink sink(ctx.out_path);
    auto& os = sink.os();
    csv_header(os, ctx, "determinant root to 1e-12 relative");
    os << "T,lambda,method,residual\n";
    for (int i = 0; i < n; ++i)
        os << fmt(Ts[i]) << "," << fmt(res[i].lambda) << "," << to_string(res[i].method) << "," << fmt(res[i].residual)
           << "\n";
}

// ---------------------------------------------------------------- nonlinear

json read_params(const std::string& path) {
    if (path.empty()) return json::object();
    std::ifstream in(path);
    if (!in) throw DomainError("cannot open params file: " + path);
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw DomainError(std::string("params file is not valid JSON: ") + e.what());
    }
}

double num(const json& j, const char* key, double def) {
    if (!j.contains(key)) return def;
    if (!j[key].is_number()) throw DomainError(std::string("params: '") + key + "' must be a number");
    return j[key].get<double>();
}

struct BuiltProblem {
    NonlinearProblem p;
    std::optional<SchrodingerParams> schrodinger;
    double r = 1.0, R = 2.0;
};

SchrodingerParams schrodinger_params(const json& j) {
    SchrodingerParams s;
    s.beta = num(j, "beta", -0.1);
    s.mu = num(j, "mu", 0.05);
    s.mp = num(j, "mp", 1.0);
    s.hbar = num(j, "hbar", 1.0);
    s.T = num(j, "T", 0.8);
    s.r = num(j, "r", 1.0);
    s.R = num(j, "R", 2.0);
    if (j.contains("alpha")) {
        s.alpha = num(j, "alpha", 0.0);
    } else {
        // midpoint of the condition-2 window intersected with the cone bound
        const auto k = make_kernel(-2.0 * s.beta * s.mp / (s.hbar * s.hbar), 0.0, s.T);
        const auto [L, l] = compute_L_l(k);
        const auto w = schrodinger_alpha_windows(s, L, l);
        const double lo = std::max(w.cond2_lower, w.cone_lower);
        if (!(lo < w.cond2_upper)) throw InvalidRegion("condition-2 window for alpha is empty; give alpha explicitly");
        s.alpha = 0.5 * (lo + w.cond2_upper);
    }
    return s;
}

BuiltProblem build_problem(const std::string& name, const json& j) {
    BuiltProblem b;
    b.r = num(j, "r", 1.0);
    b.R = num(j, "R", 2.0);
    if (name == "schrodinger") {
        const auto s = schrodinger_params(j);
        b.p = schrodinger_problem(s);
        b.schrodinger = s;
        b.r = s.r, b.R = s.R;
        return b;
    }
    const double m = num(j, "m", 1.0), M = num(j, "M", 0.0), T = num(j, "T", 0.8);
    b.p.m = m, b.p.M = M, b.p.T = T;
    if (name == "constant-shift") {
        const double c = num(j, "c", 1.0);
        b.p.f = [=](double, double, double y, double z) { return c - m * y - M * z; };
    } else if (name == "manufactured") {
        const double a = num(j, "a", 2.0), bb = num(j, "b", 0.3), eps = num(j, "eps", 0.05);
        auto v = [=](double t) { return a + bb * std::cos(std::numbers::pi * t / T); };
        b.p.f = [=](double t, double x, double y, double z) {
            const double w = std::numbers::pi / T;
            return -bb * w * w * std::cos(w * t) - m * (y - v(-t)) - M * (z - v(floor_trunc(t))) +
                   eps * std::sin(x - v(t));
        };
    } else {
        throw DomainError("unknown problem '" + name + "' (constant-shift, manufactured, schrodinger)");
    }
    return b;
}

PicardOptions picard_options(const json& j, int threads) {
    PicardOptions o;
    o.tol = num(j, "tol", o.tol);
    o.max_iter = static_cast<int>(num(j, "max_iter", o.max_iter));
    o.damping = num(j, "damping", o.damping);
    o.panel_degree = static_cast<int>(num(j, "panel_degree", o.panel_degree));
    o.target_nodes = static_cast<int>(num(j, "nodes", o.target_nodes));
    if (j.contains("newton_fallback")) o.newton_fallback = j["newton_fallback"].get<bool>();
    o.threads = threads;
    return o;
}

json report_json(const SolveReport& r) {
    return {{"converged", r.converged},
            {"method", r.method},
            {"iterations", r.iterations},
            {"newton_iterations", r.newton_iterations},
            {"final_damping", r.final_damping},
            {"update_norm", r.update_norm},
            {"ode_residual", r.ode_residual},
            {"periodicity_error", r.periodicity_error},
            {"periodicity_dt_error", r.periodicity_dt_error},
            {"min_value", r.min_value},
            {"max_value", r.max_value},
            {"min_iterate", r.min_iterate},
            {"in_annulus", r.in_annulus},
            {"warnings", r.warnings}};
}

json existence_json(const ExistenceReport& e) {
    json v = json::array();
    for (const auto& p : e.violating_points)
        v.push_back({{"check", p.check}, {"t", p.t}, {"x", p.x}, {"y", p.y}, {"z", p.z}, {"lhs", p.lhs}, {"bound", p.bound}});
    return {{"cone_ok", e.cone_ok},
            {"cond1_ok", e.cond1_ok},
            {"cond2_ok", e.cond2_ok},
            {"conclusion", to_string(e.conclusion)},
            {"r", e.bounds.r},
            {"R", e.bounds.R},
            {"L", e.bounds.L},
            {"l", e.bounds.l},
            {"samples", e.samples},
            {"violating_points", v},
            {"note", e.note}};
}

void solve_picard(const Context& ctx, const std::string& problem, const std::string& params_path) {
    const json j = read_params(params_path);
    const auto b = build_problem(problem, j);
    PicardOptions opt = picard_options(j, ctx.threads);
    if (b.schrodinger) opt.annulus = std::pair{b.r, b.R};
    const double v0 = num(j, "v0", b.schrodinger ? b.r : 1.0);
    const auto k = make_kernel(b.p.m, b.p.M, b.p.T);
    GridFunction sol;
    SolveReport rep;
    try {
        std::tie(sol, rep) = picard_solve(b.p, k, v0, opt);
    } catch (const PicardNonConvergence& e) {
        throw InvariantFailure(e.what(), report_json(e.report()));
    }
    Sink sink(ctx.out_path);
    auto& os = sink.os();
    csv_header(os, ctx, "fixed-point update " + fmt(opt.tol));
    os << "# problem: " << problem << " m=" << fmt(b.p.m) << " M=" << fmt(b.p.M) << " T=" << fmt(b.p.T);
    if (b.schrodinger) os << " alpha=" << fmt(b.schrodinger->alpha);
    os << "\n# report: " << report_json(rep).dump() << "\n";
    os << "t,v\n";
    for (std::size_t i = 0; i < sol.t.size(); ++i) os << fmt(sol.t[i]) << "," << fmt(sol.v[i]) << "\n";
}

void kras_check(const Context& ctx, const std::string& problem, const std::string& params_path,
                std::optional<double> r, std::optional<double> R, int sample_n, bool negative) {
    const json j = read_params(params_path);
    const auto b = build_problem(problem, j);
    const auto k = make_kernel(b.p.m, b.p.M, b.p.T);
    const auto [L, l] = compute_L_l(k);
    const ConeBounds cb{r.value_or(b.r), R.value_or(b.R), L, l};
    const auto rep = negative ? krasnoselskii_check_negative(b.p, cb, sample_n, ctx.threads)
                              : krasnoselskii_check(b.p, cb, sample_n, ctx.threads);
    json out = existence_json(rep);
    out["problem"] = problem;
    out["m"] = b.p.m, out["M"] = b.p.M, out["T"] = b.p.T;
    if (b.schrodinger) {
        const auto w = schrodinger_alpha_windows(*b.schrodinger, L, l);
        out["alpha"] = b.schrodinger->alpha;
        out["alpha_windows"] = {{"cone_lower", w.cone_lower},
                                {"cond1", {w.cond1_lower, w.cond1_upper}},
                                {"cond2", {w.cond2_lower, w.cond2_upper}},
                                {"cond2_swapped", {w.cond2_swapped_lower, w.cond2_swapped_upper}}};
    }
    emit_json(ctx, out);
}

// ---------------------------------------------------------------- constants

void constants(const Context& ctx) {
    const double c = solve_cbar(), a2 = solve_alpha2(), a3 = solve_alpha3();
    emit_json(ctx, {{"cbar", c},
                    {"cbar_residual", std::tan(c) * std::tanh(c) - 1.0},
                    {"alpha2", a2},
                    {"alpha2_residual", alpha2_residual(a2)},
                    {"alpha3", a3},
                    {"alpha3_residual", alpha3_residual(a3)}});
}

/// "green-eval" style single tokens become "green eval".
std::vector<std::string> normalize_args(int argc, char** argv) {
    static const std::vector<std::string> joined{"green-eval",      "green-verify",       "composite-build",
                                                 "composite-verify", "region-scan",        "region-closed-form",
                                                 "eigen-dirichlet",  "eigen-lambda-curve", "solve-picard",
                                                 "kras-check"};
    std::vector<std::string> out;
    for (int i = 1; i < argc; ++i) {
        const std::string a = argv[i];
        if (std::find(joined.begin(), joined.end(), a) != joined.end()) {
            const auto d = a.find('-');
            out.push_back(a.substr(0, d));
            out.push_back(a.substr(d + 1));
        } else {
            out.push_back(a);
        }
    }
    return out;
}

int fail(int code, const std::string& type, const std::string& msg, const json& detail = json::object()) {
    json e{{"error", type}, {"message", msg}, {"exit_code", code}};
    if (!detail.empty()) e["detail"] = detail;
    std::cerr << e.dump() << "\n";
    return code;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Green's functions for periodic problems with reflection and piecewise constant argument"};
    app.require_subcommand(1);
    app.fallthrough();
    app.set_version_flag("--version", std::string(kVersion));
    Context ctx;
    for (int i = 0; i < argc; ++i) ctx.command_line += (i ? " " : "") + std::string(i ? argv[i] : "greens_cli");
    app.add_option("--out", ctx.out_path, "Output file (stdout when omitted)");
    app.add_option("--seed", ctx.seed, "Seed for random verification points");
    app.add_option("--threads", ctx.threads, "Worker threads (0: GREENS_REFLECT_THREADS or all cores)")
        ->check(CLI::NonNegativeNumber);

    double m = 1.0, M = 0.0, T = 1.0, t = 0.0, s = 0.0, s0 = 0.0, tol = 1e-4, T_min = 0.2, T_max = 3.0;
    int n = 200, grid_n = 101, sample_n = 11;
    std::optional<double> m_min, m_max, m_opt, r_opt, R_opt;
    std::string problem = "schrodinger", params;
    bool candidates = false, negative = false;
    std::function<void()> action;

    auto* green = app.add_subcommand("green", "Reflection kernel G_m");
    green->require_subcommand(1);
    auto* ge = green->add_subcommand("eval", "Evaluate G_m(t, s) and its one-sided t-derivatives");
    ge->add_option("--m", m)->required();
    ge->add_option("--T", T)->required();
    ge->add_option("--t", t)->required();
    ge->add_option("--s", s)->required();
    ge->callback([&] { action = [&] { green_eval(ctx, m, T, t, s); }; });
    auto* gv = green->add_subcommand("verify", "Run the G_m invariant suite");
    gv->add_option("--m", m)->required();
    gv->add_option("--T", T)->required();
    gv->add_option("--n", n, "Random sample points");
    gv->callback([&] { action = [&] { green_verify(ctx, m, T, n); }; });

    auto* comp = app.add_subcommand("composite", "Composite kernel H_{m,M}");
    comp->require_subcommand(1);
    auto* cb = comp->add_subcommand("build", "Build H and emit its metadata as JSON");
    cb->add_option("--m", m)->required();
    cb->add_option("--M", M)->required();
    cb->add_option("--T", T)->required();
    cb->callback([&] { action = [&] { composite_build(ctx, m, M, T); }; });
    auto* cv = comp->add_subcommand("verify", "Certify H by finite differences");
    cv->add_option("--m", m)->required();
    cv->add_option("--M", M)->required();
    cv->add_option("--T", T)->required();
    cv->add_option("--n", n, "Random normalization points");
    cv->callback([&] { action = [&] { composite_verify(ctx, m, M, T, std::min(n, 50)); }; });

    auto* region = app.add_subcommand("region", "Constant-sign regions");
    region->require_subcommand(1);
    auto* rs = region->add_subcommand("scan", "Bisection scan of both region boundaries");
    rs->add_option("--T", T)->required();
    rs->add_option("--m-min", m_min);
    rs->add_option("--m-max", m_max);
    rs->add_option("--n", n, "Number of m samples")->default_val(41);
    rs->add_option("--grid-n", grid_n, "Extremum search grid")->default_val(101);
    rs->add_option("--tol", tol, "Bisection tolerance in M")->default_val(1e-4);
    rs->add_flag("--candidates", candidates, "Add the candidate-point curve for comparison");
    rs->callback([&] { action = [&] { region_scan(ctx, T, m_min, m_max, n, grid_n, tol, candidates); }; });
    auto* rc = region->add_subcommand("closed-form", "Closed-form boundaries for T <= 1");
    rc->add_option("--T", T)->required();
    rc->add_option("--m-min", m_min);
    rc->add_option("--m-max", m_max);
    rc->add_option("--n", n, "Number of m samples")->default_val(41);
    rc->callback([&] { action = [&] { region_closed_form(ctx, T, m_min, m_max, n); }; });

    auto* eigen = app.add_subcommand("eigen", "Dirichlet eigenvalues");
    eigen->require_subcommand(1);
    auto* ed = eigen->add_subcommand("dirichlet", "First Dirichlet eigenvalue M for given T, s0 and m");
    ed->add_option("--T", T)->required();
    ed->add_option("--s0", s0)->required();
    ed->add_option("--m", m_opt);
    ed->callback([&] { action = [&] { eigen_dirichlet(ctx, T, s0, m_opt); }; });
    auto* el = eigen->add_subcommand("lambda-curve", "lambda_1(T) on a grid of T");
    el->add_option("--T-min", T_min)->required();
    el->add_option("--T-max", T_max)->required();
    el->add_option("--n", n)->default_val(50);
    el->callback([&] { action = [&] { eigen_lambda_curve(ctx, T_min, T_max, n); }; });

    auto* solve = app.add_subcommand("solve", "Nonlinear problems");
    solve->require_subcommand(1);
    auto* sp = solve->add_subcommand("picard", "Fixed-point iteration for a built-in problem");
    sp->add_option("--problem", problem)->check(CLI::IsMember({"constant-shift", "manufactured", "schrodinger"}));
    sp->add_option("--params", params, "params.json");
    sp->callback([&] { action = [&] { solve_picard(ctx, problem, params); }; });

    auto* kras = app.add_subcommand("kras", "Cone fixed-point existence check");
    kras->require_subcommand(1);
    auto* kc = kras->add_subcommand("check", "Sample the cone and annulus conditions");
    kc->add_option("--problem", problem)->check(CLI::IsMember({"constant-shift", "manufactured", "schrodinger"}));
    kc->add_option("--params", params, "params.json");
    kc->add_option("--r", r_opt);
    kc->add_option("--R", R_opt);
    kc->add_option("--samples", sample_n, "Grid points per box axis")->default_val(11);
    kc->add_flag("--negative", negative, "Check the negative-solution conditions");
    kc->callback([&] { action = [&] { kras_check(ctx, problem, params, r_opt, R_opt, sample_n, negative); }; });

    auto* cst = app.add_subcommand("constants", "cbar, alpha2 and alpha3 with residuals");
    cst->callback([&] { action = [&] { constants(ctx); }; });

    auto args = normalize_args(argc, argv);
    std::reverse(args.begin(), args.end());
    try {
        app.parse(args);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        return fail(kExitConfig, "ConfigError", e.what());
    }
    try {
        action();
        return 0;
    } catch (const InvariantFailure& e) {
        return fail(kExitInvariant, "InvariantFailure", e.what(), e.payload);
    } catch (const DomainError& e) {
        return fail(kExitConfig, "DomainError", e.what());
    } catch (const ResonanceError& e) {
        return fail(kExitConfig, "ResonanceError", e.what());
    } catch (const InvalidRegion& e) {
        return fail(kExitConfig, "InvalidRegion", e.what());
    } catch (const NonUniqueSolution& e) {
        return fail(kExitConfig, "NonUniqueSolution", e.what());
    } catch (const Error& e) {
        return fail(kExitInvariant, "ComputationError", e.what());
    } catch (const json::exception& e) {
        return fail(kExitConfig, "ConfigError", e.what());
    }
}
