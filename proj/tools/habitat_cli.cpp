#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "habitat/envelope.hpp"
#include "habitat/fem.hpp"
#include "habitat/mesh.hpp"
#include "habitat/oracle.hpp"
#include "habitat/scenario.hpp"
#include "habitat/scenario_library.hpp"
#include "habitat/spectral.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr const char* kVersion = "habitat 0.1.0";

struct Options {
    std::string scenario;
    std::string out = "out";
    int nt = 160;
    int nx = 80;
    int ny = 400;
    double tau = 1e-3;
    double theta = 1e-5;
    double delta = 1e-6;
    double L0 = 0.0; // 0: use the scenario's
    bool quiet = false;
};

habitat::Scenario load_scenario(const std::string& spec) {
    if (spec.empty()) throw habitat::ScenarioError("scenario", "no scenario given");
    if (fs::exists(spec)) {
        std::ifstream in(spec);
        std::stringstream ss;
        ss << in.rdbuf();
        return habitat::parse_scenario(ss.str());
    }
    return habitat::scenario_by_name(spec);
}

void write_file(const fs::path& path, const std::string& content) {
    fs::create_directories(path.parent_path());
    std::ofstream out(path);
    out << content;
    if (!out) throw std::runtime_error("could not write " + path.string());
}

void write_manifest(const Options& opt, const std::string& verb, const habitat::Scenario& s,
                    const json& extra = {}) {
    json m;
    m["verb"] = verb;
    m["version"] = kVersion;
    m["scenario_arg"] = opt.scenario;
    m["scenario"] = json::parse(habitat::scenario_to_json(s));
    m["options"] = {{"nt", opt.nt},     {"nx", opt.nx},       {"ny", opt.ny},
                    {"tau", opt.tau},   {"theta", opt.theta}, {"delta", opt.delta},
                    {"L0", opt.L0},     {"out", opt.out}};
    if (!extra.is_null() && !extra.empty()) m["resolved"] = extra;
    write_file(fs::path(opt.out) / ("manifest-" + verb + ".json"), m.dump(2) + "\n");
}

void say(const Options& opt, const std::string& line) {
    if (!opt.quiet) std::cout << line << '\n';
}

double pick_L(const Options& opt, const habitat::Scenario& s) {
    return opt.L0 > 0.0 ? opt.L0 : s.motion.L0();
}

int run_validate(const Options& opt) {
    habitat::Scenario s = load_scenario(opt.scenario);
    s.validate();
    write_manifest(opt, "validate", s);
    say(opt, "ok");
    return 0;
}

int run_bounds(const Options& opt) {
    const habitat::Scenario s = load_scenario(opt.scenario);
    const double L = pick_L(opt, s);
    const auto refined = habitat::bounds_refined(s, L);
    const auto extremes = habitat::bounds_extremes(s, L);
    const auto averaged = habitat::averaged_problem(s, L);
    const auto cls = habitat::classify_fixed(s, L, s.r);
    json out;
    out["L"] = L;
    out["lower"] = refined.lower;
    out["upper_refined"] = refined.upper;
    out["upper_extremes"] = extremes.upper;
    out["lambda_hat"] = averaged.lambda_hat;
    out["mu_hat"] = averaged.mu_hat;
    out["verdict"] = habitat::to_string(cls.verdict);
    out["criterion"] = cls.criterion;
    if (cls.survival_interval)
        out["survival_window"] = {cls.survival_interval->first, cls.survival_interval->second};
    write_file(fs::path(opt.out) / "bounds.json", out.dump(2) + "\n");
    write_manifest(opt, "bounds", s, out);
    say(opt, "lower=" + std::to_string(refined.lower) + " upper=" + std::to_string(refined.upper) +
                 " verdict=" + habitat::to_string(cls.verdict));
    return 0;
}

int run_eig(const Options& opt) {
    const habitat::Scenario s = load_scenario(opt.scenario);
    const double L = pick_L(opt, s);
    habitat::FloquetOptions fo;
    if (opt.ny > 0) fo.ny = opt.ny;
    const auto rep = habitat::floquet_lambda(s, L, fo);
    write_file(fs::path(opt.out) / "eig.json", rep.to_json() + "\n");
    std::ostringstream csv;
    csv << habitat::EigenReport::csv_header() << '\n' << rep.to_csv_row() << '\n';
    write_file(fs::path(opt.out) / "eig.csv", csv.str());
    write_manifest(opt, "eig", s, json{{"lambda", rep.lambda}, {"L", L}});
    say(opt, "lambda=" + std::to_string(rep.lambda) + " verdict=" + habitat::to_string(rep.verdict));
    return 0;
}

std::vector<double> slice_times(const habitat::Scenario& s, int n = 9) {
    std::vector<double> ts;
    for (int i = 0; i < n; ++i) ts.push_back(s.horizon * i / (n - 1));
    return ts;
}

int run_solve(const Options& opt) {
    const habitat::Scenario s = load_scenario(opt.scenario);
    const auto mesh = habitat::build_mesh(s, opt.nt, opt.nx);
    habitat::FemOptions fo;
    fo.theta = opt.theta;
    fo.delta = opt.delta;
    const auto field = habitat::solve(mesh, s, fo);
    write_file(fs::path(opt.out) / "solution_slices.csv", field.slice_csv(slice_times(s), 256));
    write_file(fs::path(opt.out) / "solution.vtk", field.vtk_dump());
    std::ostringstream norms;
    norms.precision(12);
    norms << "t,l2,linf\n";
    for (int i = 0; i <= 100; ++i) {
        const double t = s.horizon * i / 100;
        norms << t << ',' << field.slice_l2(t) << ',' << field.slice_linf(t) << '\n';
    }
    write_file(fs::path(opt.out) / "solution_norms.csv", norms.str());
    write_manifest(opt, "solve", s, json{{"h", mesh.h}, {"dofs", mesh.vertices.size() + mesh.edges.size()}});
    say(opt, "h=" + std::to_string(mesh.h) + " final_l2=" + std::to_string(field.slice_l2(s.horizon)));
    return 0;
}

int run_envelope(const Options& opt) {
    const habitat::Scenario s = load_scenario(opt.scenario);
    const double L0 = s.motion.L0();
    const auto env = habitat::build_envelope(s, [&](double y) { return s.initial(y, L0); });
    habitat::OracleOptions oo;
    oo.ny = opt.ny;
    oo.tau = opt.tau;
    oo.horizon = s.horizon;
    oo.slice_stride = 0;
    const auto res = habitat::step_solver(s, oo);
    std::ostringstream csv;
    csv.precision(12);
    csv << "t,y,lower,upper,oracle_v\n";
    for (std::size_t k = 0; k < res.slice_times.size(); ++k) {
        const double t = res.slice_times[k];
        for (int i = 0; i < res.ny; i += std::max(1, res.ny / 64)) {
            const double y = res.node_y(i);
            csv << t << ',' << y << ',' << env.lower(t, y) << ',' << env.upper(t, y) << ','
                << res.slices[k][i] << '\n';
        }
    }
    write_file(fs::path(opt.out) / "envelope.csv", csv.str());
    write_manifest(opt, "envelope", s,
                   json{{"a", env.a()}, {"b", env.b()}, {"lambda", env.lambda()}});
    say(opt, "a=" + std::to_string(env.a()) + " b=" + std::to_string(env.b()) +
                 " lambda=" + std::to_string(env.lambda()));
    return 0;
}

int run_sweep(const Options& opt, const std::vector<double>& Lrange,
              const std::vector<double>& rrange, int nL, int nr, bool with_lambda) {
    const habitat::Scenario s = load_scenario(opt.scenario);
    habitat::SweepSpec spec;
    for (int i = 0; i < nL; ++i)
        spec.Ls.push_back(Lrange[0] + (Lrange[1] - Lrange[0]) * (nL == 1 ? 0.5 : double(i) / (nL - 1)));
    if (nr > 0)
        for (int i = 0; i < nr; ++i)
            spec.rs.push_back(rrange[0] +
                              (rrange[1] - rrange[0]) * (nr == 1 ? 0.5 : double(i) / (nr - 1)));
    spec.ny = opt.ny;
    spec.tau = opt.tau;
    spec.probe_time = s.horizon;
    spec.with_lambda = with_lambda;
    const auto cells = habitat::sweep(s, spec);
    write_file(fs::path(opt.out) / "sweep.csv", habitat::sweep_csv(cells));
    write_manifest(opt, "sweep", s, json{{"cells", cells.size()}, {"with_lambda", with_lambda}});
    say(opt, "cells=" + std::to_string(cells.size()));
    return 0;
}

int reproduce_fig_error(Options opt) {
    opt.scenario = "benchmark-no-selection";
    const habitat::Scenario s = load_scenario(opt.scenario);
    const double L = s.motion.L0();
    const double mu = s.r - s.d * M_PI * M_PI / (L * L);
    auto exact = [&](double t, double x) { return std::sin(M_PI * x / L) * std::exp(mu * t); };
    std::ostringstream csv;
    csv.precision(12);
    csv << "h,mesh_norm_error,l2_error\n";
    for (int n : {8, 16, 32, 64}) {
        const auto mesh = habitat::build_mesh(s, n, n);
        const auto space = habitat::P2Space::build(mesh);
        habitat::FemOptions fo;
        fo.theta = opt.theta;
        fo.delta = opt.delta;
        const auto field = habitat::solve(mesh, s, fo);
        // Error of the shifted unknown against the shifted exact solution,
        // measured in the scheme's own norm.
        Eigen::VectorXd diff = field.dof_values();
        for (int i = 0; i < space.n_dof; ++i) {
            const auto& p = space.dof_point[i];
            diff[i] -= exact(p.t, p.x) * std::exp(-field.c_shift() * p.t);
        }
        const double err_h = habitat::mesh_norm(mesh, space, diff, fo.theta, fo.delta);
        const double err_l2 = habitat::l2_error_q(mesh, space, field.dof_values(),
                                                  [&](double t, double x) {
                                                      return exact(t, x) *
                                                             std::exp(-field.c_shift() * t);
                                                  });
        csv << mesh.h << ',' << err_h << ',' << err_l2 << '\n';
        say(opt, "h=" + std::to_string(mesh.h) + " err_h=" + std::to_string(err_h));
    }
    write_file(fs::path(opt.out) / "fig-error.csv", csv.str());
    write_manifest(opt, "reproduce-fig-error", s);
    return 0;
}

int reproduce_fig1(Options opt) {
    opt.scenario = "phase-diagram";
    opt.ny = 200;
    opt.tau = 2e-3;
    return run_sweep(opt, {0.3, 4.0}, {1.0, 25.0}, 20, 20, true);
}

int reproduce_fig2conj(Options opt) {
    for (const char* name : {"lsweep-high-r", "lsweep-low-r"}) {
        Options o = opt;
        o.scenario = name;
        o.out = (fs::path(opt.out) / name).string();
        const int rc = run_sweep(o, {0.3, 4.0}, {}, 60, 0, false);
        if (rc != 0) return rc;
    }
    return 0;
}

int reproduce_example(const Options& opt, const std::vector<std::string>& names) {
    for (const auto& name : names) {
        Options o = opt;
        o.scenario = name;
        o.out = (fs::path(opt.out) / name).string();
        const int rc = run_solve(o);
        if (rc != 0) return rc;
    }
    return 0;
}

int run_reproduce(const Options& opt, const std::string& recipe) {
    if (recipe == "fig1") return reproduce_fig1(opt);
    if (recipe == "fig2conj") return reproduce_fig2conj(opt);
    if (recipe == "fig-error") return reproduce_fig_error(opt);
    if (recipe == "ex4-4") return reproduce_example(opt, {"seasonal-optimum"});
    if (recipe == "ex4-5")
        return reproduce_example(opt, {"sublinear-shift-left", "sublinear-shift-right"});
    if (recipe == "ex4-6") return reproduce_example(opt, {"superlinear-shift"});
    if (recipe == "ex4-7")
        return reproduce_example(opt,
                                 {"linear-shift-left", "linear-shift-middle", "linear-shift-right"});
    if (recipe == "ex4-8") return reproduce_example(opt, {"enlargement-slow", "enlargement-fast"});
    throw std::invalid_argument("unknown recipe '" + recipe +
                                "'; known: fig1 fig2conj fig-error ex4-4 ex4-5 ex4-6 ex4-7 ex4-8");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"habitat: reaction-diffusion population toolkit on moving domains"};
    app.require_subcommand(1);
    // Accept the shared flags both before and after the verb.
    app.fallthrough();
    Options opt;
    app.add_option("--scenario", opt.scenario, "scenario JSON file or built-in name");
    app.add_option("--out", opt.out, "output directory");
    app.add_option("--nt", opt.nt, "space-time mesh: time slabs");
    app.add_option("--nx", opt.nx, "space-time mesh: cells per slab");
    app.add_option("--ny", opt.ny, "finite-difference / eigensolver space nodes");
    app.add_option("--tau", opt.tau, "finite-difference time step");
    app.add_option("--theta", opt.theta, "upwind stabilization parameter");
    app.add_option("--delta", opt.delta, "jump penalty parameter");
    app.add_option("--L0", opt.L0, "override domain length (fixed-domain verbs)");
    app.add_flag("--quiet", opt.quiet, "suppress console output");

    auto* validate = app.add_subcommand("validate", "parse and validate a scenario");
    auto* bounds = app.add_subcommand("bounds", "analytic eigenvalue bounds and classification");
    auto* eig = app.add_subcommand("eig", "numeric principal eigenvalue (fixed domain)");
    auto* solve = app.add_subcommand("solve", "space-time finite element solve");
    auto* envelope = app.add_subcommand("envelope", "sub/supersolution barrier vs oracle");
    auto* sweep = app.add_subcommand("sweep", "(L, r) phase-diagram sweep");
    std::vector<double> Lrange{0.3, 4.0}, rrange{1.0, 25.0};
    int nL = 20, nr = 0;
    bool with_lambda = false;
    sweep->add_option("--Lrange", Lrange, "L sweep range (min max)")->expected(2);
    sweep->add_option("--rrange", rrange, "r sweep range (min max)")->expected(2);
    sweep->add_option("--nL", nL, "number of L samples");
    sweep->add_option("--nr", nr, "number of r samples (0: scenario r only)");
    sweep->add_flag("--lambda", with_lambda, "also compute the eigenvalue per cell");
    auto* reproduce = app.add_subcommand("reproduce", "run a named recipe");
    std::string recipe;
    reproduce->add_option("recipe", recipe, "fig1 fig2conj fig-error ex4-4..ex4-8")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        if (*validate) return run_validate(opt);
        if (*bounds) return run_bounds(opt);
        if (*eig) return run_eig(opt);
        if (*solve) return run_solve(opt);
        if (*envelope) return run_envelope(opt);
        if (*sweep) return run_sweep(opt, Lrange, rrange, nL, nr, with_lambda);
        if (*reproduce) return run_reproduce(opt, recipe);
    } catch (const habitat::ScenarioError& e) {
        std::cerr << "validation error: " << e.what() << '\n';
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return 3;
    }
    return 2;
}
