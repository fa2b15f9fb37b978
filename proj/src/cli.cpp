#include "rdsteady/cli.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <memory>
#include <numbers>
#include <random>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "rdsteady/dynamics.hpp"
#include "rdsteady/errors.hpp"
#include "rdsteady/homotopy.hpp"
#include "rdsteady/jacobian.hpp"
#include "rdsteady/nonlinearity.hpp"
#include "rdsteady/shooting.hpp"

namespace rdsteady::cli {

namespace {

using nlohmann::json;

std::vector<int> parse_n_list(const std::string& text) {
    std::vector<int> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            const int n = std::stoi(item);
            if (n < 2) throw ConfigError("n must be at least 2, got " + item);
            out.push_back(n);
        } catch (const ConfigError&) {
            throw;
        } catch (const std::exception&) {
            throw ConfigError("cannot parse mesh size '" + item + "'");
        }
    }
    if (out.empty()) throw ConfigError("empty mesh size list");
    return out;
}

std::pair<double, double> parse_interval(const std::string& text) {
    const auto colon = text.find(':');
    if (colon == std::string::npos)
        throw ConfigError("interval '" + text + "' must look like lo:hi");
    try {
        double a = std::stod(text.substr(0, colon));
        double b = std::stod(text.substr(colon + 1));
        if (!(a > 0.0) || !(b > 0.0))
            throw ConfigError("interval endpoints must be positive: " + text);
        if (a > b) std::swap(a, b); // normalize to [min, max]
        return {a, b};
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception&) {
        throw ConfigError("cannot parse interval '" + text + "'");
    }
}

// Flat key=value lines (with # comments) or a JSON object with the same keys.
std::map<std::string, std::string> load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config file '" + path + "'");
    std::stringstream buffer;
    buffer << in.rdbuf();
    std::string text = buffer.str();

    std::map<std::string, std::string> kv;
    const auto first = text.find_first_not_of(" \t\r\n");
    if (first != std::string::npos && text[first] == '{') {
        json j;
        try {
            j = json::parse(text);
        } catch (const std::exception& e) {
            throw ConfigError("config file '" + path + "': " + e.what());
        }
        for (const auto& [key, value] : j.items()) {
            if (value.is_string()) kv[key] = value.get<std::string>();
            else kv[key] = value.dump();
        }
        return kv;
    }

    std::stringstream lines(text);
    std::string line;
    int lineno = 0;
    while (std::getline(lines, line)) {
        ++lineno;
        const auto start = line.find_first_not_of(" \t\r");
        if (start == std::string::npos || line[start] == '#') continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config file '" + path + "' line " + std::to_string(lineno) +
                              ": expected key=value");
        auto trim = [](std::string s) {
            const auto b = s.find_first_not_of(" \t\r");
            const auto e = s.find_last_not_of(" \t\r");
            return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
        };
        kv[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
    }
    return kv;
}

const std::vector<std::string> kCommands = {"solve",    "oracle",   "path",
                                            "condition", "dynamics", "convergence-table",
                                            "constants"};

} // namespace

RunConfig parse_args(const std::vector<std::string>& args, std::string* help_text) {
    RunConfig cfg;

    // pull --config first so flags can override file values
    std::string config_path;
    for (size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--config") {
            if (i + 1 >= args.size()) throw ConfigError("--config needs a path");
            config_path = args[i + 1];
        } else if (args[i].rfind("--config=", 0) == 0) {
            config_path = args[i].substr(9);
        }
    }

    std::string n_text = "100";
    std::string alpha_interval_text;
    std::string format_text = "json";
    std::string ic_text;

    if (!config_path.empty()) {
        const auto kv = load_config_file(config_path);
        auto get = [&](const char* key) -> const std::string* {
            auto it = kv.find(key);
            return it == kv.end() ? nullptr : &it->second;
        };
        auto as_double = [&](const std::string& text, const char* key) {
            try {
                return std::stod(text);
            } catch (const std::exception&) {
                throw ConfigError(std::string("config key '") + key + "': bad number '" + text + "'");
            }
        };
        if (auto* v = get("kind"); v && *v != "power-law")
            throw ConfigError("config key 'kind': only \"power-law\" is built in; custom pairs "
                              "are registered in code and selected with 'pair'");
        if (auto* v = get("pair")) cfg.pair_name = *v;
        if (auto* v = get("p")) cfg.p = as_double(*v, "p");
        if (auto* v = get("q")) cfg.q = as_double(*v, "q");
        if (auto* v = get("n")) n_text = *v;
        if (auto* v = get("alpha")) cfg.alpha = as_double(*v, "alpha");
        if (auto* v = get("alpha-interval")) alpha_interval_text = *v;
        if (auto* v = get("eps")) cfg.eps = as_double(*v, "eps");
        if (auto* v = get("mode")) cfg.mode = *v;
        if (auto* v = get("format")) format_text = *v;
        if (auto* v = get("output")) cfg.output = *v;
        if (auto* v = get("seed")) cfg.seed = static_cast<std::uint64_t>(as_double(*v, "seed"));
        if (auto* v = get("dt")) cfg.dt = as_double(*v, "dt");
        if (auto* v = get("t-max")) cfg.t_max = as_double(*v, "t-max");
        if (auto* v = get("steady-tol")) cfg.steady_tol = as_double(*v, "steady-tol");
        if (auto* v = get("ic-constant")) ic_text = *v;
        if (auto* v = get("probes")) cfg.probes = static_cast<int>(as_double(*v, "probes"));
        if (auto* v = get("samples")) cfg.samples = static_cast<int>(as_double(*v, "samples"));
        if (auto* v = get("beta-lo")) cfg.beta_lo = as_double(*v, "beta-lo");
        if (auto* v = get("oracle-tol")) cfg.oracle_tol = as_double(*v, "oracle-tol");
        if (auto* v = get("timings")) cfg.timings = *v == "true" || *v == "1";
    }

    CLI::App app{"stationary solver for reaction-diffusion meshes with nonlinear boundary flux"};
    app.require_subcommand(0, 1);

    std::string config_path_sink; // registered so CLI11 accepts the flag
    app.add_option("--config", config_path_sink, "config file (key=value lines or JSON)");

    std::vector<CLI::App*> subs;
    for (const auto& name : kCommands) subs.push_back(app.add_subcommand(name));
    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", config_path_sink, "config file (key=value lines or JSON)");
        sub->add_option("--pair", cfg.pair_name, "registered pair name (overrides --p/--q)");
        sub->add_option("--p", cfg.p, "absorption exponent p (power law)");
        sub->add_option("--q", cfg.q, "boundary flux exponent q (power law)");
        sub->add_option("--n", n_text, "mesh size or comma list, e.g. 100 or 10,100,1000");
        sub->add_option("--alpha", cfg.alpha, "boundary flux coefficient alpha");
        sub->add_option("--alpha-interval", alpha_interval_text, "alpha interval lo:hi");
        sub->add_option("--eps", cfg.eps, "target accuracy (inf-norm)");
        sub->add_option("--mode", cfg.mode, "schedule mode: adaptive | theoretical");
        sub->add_option("--format", format_text, "output format: json | csv");
        sub->add_option("--output", cfg.output, "output path (default stdout)");
        sub->add_option("--seed", cfg.seed, "random seed for probe draws");
        sub->add_option("--dt", cfg.dt, "implicit Euler time step");
        sub->add_option("--t-max", cfg.t_max, "time horizon");
        sub->add_option("--steady-tol", cfg.steady_tol, "steady-state tolerance on ||du/dt||");
        sub->add_option("--ic-constant", ic_text, "constant initial condition value");
        sub->add_option("--probes", cfg.probes, "number of random initial constants (dynamics)");
        sub->add_option("--samples", cfg.samples, "sample count (path/condition)");
        sub->add_option("--beta-lo", cfg.beta_lo, "explicit beta_* (0 = automatic)");
        sub->add_option("--oracle-tol", cfg.oracle_tol, "relative tolerance of the u1 oracle");
        sub->add_flag("--timings", cfg.timings, "include wall times (breaks byte-identity)");
    };
    for (auto* sub : subs) add_common(sub);

    std::vector<const char*> argv;
    argv.push_back("rdsteady");
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp& e) {
        if (help_text) *help_text = app.help();
        cfg.command.clear();
        return cfg;
    } catch (const CLI::ParseError& e) {
        throw ConfigError(std::string("argument error: ") + e.what());
    }

    const auto picked = app.get_subcommands();
    if (picked.empty()) {
        if (help_text) *help_text = app.help();
        cfg.command.clear();
        return cfg;
    }
    cfg.command = picked.front()->get_name();

    cfg.n_list = parse_n_list(n_text);
    if (!alpha_interval_text.empty()) cfg.alpha_interval = parse_interval(alpha_interval_text);
    if (!ic_text.empty()) {
        try {
            cfg.ic_constant = std::stod(ic_text);
        } catch (const std::exception&) {
            throw ConfigError("bad --ic-constant value '" + ic_text + "'");
        }
    }
    if (format_text == "csv") cfg.format = ReportFormat::csv;
    else if (format_text == "json") cfg.format = ReportFormat::json;
    else throw ConfigError("unknown format '" + format_text + "' (expected json or csv)");
    if (cfg.mode != "adaptive" && cfg.mode != "theoretical")
        throw ConfigError("unknown mode '" + cfg.mode + "' (expected adaptive or theoretical)");
    if (!(cfg.alpha > 0.0)) throw ConfigError("alpha must be positive");
    if (!(cfg.eps > 0.0)) throw ConfigError("eps must be positive");
    if (cfg.probes < 1) throw ConfigError("probes must be at least 1");
    return cfg;
}

namespace {

std::shared_ptr<const NonlinearityPair> build_pair(const RunConfig& cfg) {
    if (!cfg.pair_name.empty()) {
        auto pair = find_registered_pair(cfg.pair_name);
        if (!pair) {
            std::string names;
            for (const auto& n : registered_pair_names()) names += " " + n;
            throw ConfigError("unknown pair '" + cfg.pair_name + "'; registered:" +
                              (names.empty() ? " (none)" : names));
        }
        return pair;
    }
    try {
        return make_power_law(cfg.p, cfg.q);
    } catch (const DomainError& e) {
        // bad exponents violate the admissibility hypotheses
        throw ValidationError(e.what());
    }
}

json config_json(const RunConfig& cfg) {
    json j;
    j["command"] = cfg.command;
    if (!cfg.pair_name.empty()) j["pair"] = cfg.pair_name;
    j["p"] = cfg.p;
    j["q"] = cfg.q;
    j["n"] = cfg.n_list;
    j["alpha"] = cfg.alpha;
    if (cfg.alpha_interval)
        j["alpha-interval"] = {cfg.alpha_interval->first, cfg.alpha_interval->second};
    j["eps"] = cfg.eps;
    j["mode"] = cfg.mode;
    j["format"] = cfg.format == ReportFormat::csv ? "csv" : "json";
    j["output"] = cfg.output;
    j["seed"] = cfg.seed;
    j["dt"] = cfg.dt;
    j["t-max"] = cfg.t_max;
    j["steady-tol"] = cfg.steady_tol;
    if (cfg.ic_constant) j["ic-constant"] = *cfg.ic_constant;
    j["probes"] = cfg.probes;
    j["samples"] = cfg.samples;
    j["beta-lo"] = cfg.beta_lo;
    j["oracle-tol"] = cfg.oracle_tol;
    return j;
}

std::vector<std::pair<std::string, std::string>> config_kv(const RunConfig& cfg) {
    std::vector<std::pair<std::string, std::string>> kv;
    const json j = config_json(cfg);
    for (const auto& [key, value] : j.items())
        kv.emplace_back(key, value.is_string() ? value.get<std::string>() : value.dump());
    return kv;
}

void emit(const RunConfig& cfg, const json& result, const Table& table) {
    if (cfg.format == ReportFormat::json) {
        json j;
        j["schema"] = 1;
        j["command"] = cfg.command;
        j["config"] = config_json(cfg);
        j["result"] = result;
        emit_report(j.dump(2) + "\n", cfg.output);
    } else {
        emit_report(to_csv(table, config_kv(cfg)), cfg.output);
    }
}

json bounds_json(const BoundsCheck& b) {
    return json{{"u1_lower", b.u1_lower},   {"un_upper", b.un_upper},
                {"growth_M", b.growth},     {"inside_box", b.inside_box},
                {"flux_residual", b.flux_residual}, {"flux_ok", b.flux_ok}};
}

ContinuationConfig continuation_config(const RunConfig& cfg) {
    ContinuationConfig c;
    c.beta_hi = 1.0 / cfg.alpha; // users speak alpha; beta = 1/alpha is internal
    c.beta_lo = cfg.beta_lo;
    c.epsilon = cfg.eps;
    c.mode = cfg.mode == "theoretical" ? ScheduleMode::theoretical : ScheduleMode::adaptive;
    return c;
}

int run_solve(const RunConfig& cfg) {
    const auto pair = build_pair(cfg);
    const MeshConfig mesh(cfg.n_list.front());
    const SolveReport rep = continuation_solve(*pair, mesh, continuation_config(cfg));

    json result;
    result["u"] = rep.u;
    result["residual_inf"] = rep.residual_inf;
    result["phase1_nodes"] = rep.phase1_nodes;
    result["phase1_rejects"] = rep.phase1_rejects;
    result["phase2_iterations"] = rep.phase2_iterations;
    result["tridiagonal_solves"] = rep.tridiagonal_solves;
    result["phase2_step_norms"] = rep.phase2_step_norms;
    result["node_contraction"] = rep.node_contraction;
    result["beta_lo"] = rep.beta_lo;
    result["beta_hi"] = rep.beta_hi;
    result["bounds"] = bounds_json(rep.bounds);
    if (rep.mode == ScheduleMode::theoretical) {
        result["certified_nodes"] = rep.certified_nodes;
        result["k0"] = rep.k0;
        result["schedule_truncated"] = rep.schedule_truncated;
    }
    if (cfg.timings) result["elapsed_seconds"] = rep.elapsed_seconds;

    Table t;
    t.columns = {"k", "x", "u"};
    for (int k = 0; k < mesh.n; ++k)
        t.add_row({std::to_string(k + 1), format_double17(k * mesh.h), format_double17(rep.u[k])});
    emit(cfg, result, t);
    return 0;
}

int run_oracle(const RunConfig& cfg) {
    const auto pair = build_pair(cfg);
    const MeshConfig mesh(cfg.n_list.front());
    const double u1 = solve_u1_oracle(*pair, mesh, cfg.alpha, cfg.oracle_tol);
    const ShootingTrajectory traj = shoot(*pair, mesh, u1);
    const BoundsCheck bounds = check_solution_bounds(*pair, mesh, cfg.alpha, traj.u);

    json result;
    result["u1"] = u1;
    result["a"] = traj.a;
    result["a_prime"] = traj.a_prime;
    result["u"] = traj.u;
    result["u_prime"] = traj.u_prime;
    result["bounds"] = bounds_json(bounds);

    Table t;
    t.columns = {"k", "x", "u", "u_prime"};
    for (int k = 0; k < mesh.n; ++k)
        t.add_row({std::to_string(k + 1), format_double17(k * mesh.h),
                   format_double17(traj.u[k]), format_double17(traj.u_prime[k])});
    emit(cfg, result, t);
    return 0;
}

int run_path(const RunConfig& cfg) {
    const auto pair = build_pair(cfg);
    const MeshConfig mesh(cfg.n_list.front());
    const int samples = cfg.samples > 0 ? cfg.samples : 9;
    const auto trace = path_trace(*pair, mesh, continuation_config(cfg), samples);

    json result = json::array();
    Table t;
    t.columns = {"beta", "u1", "phi_prime_inf_beta", "residual", "ok"};
    for (const auto& s : trace) {
        json row{{"beta", s.beta},       {"u1", s.u1}, {"phi_prime_inf_beta", s.phi_prime_inf_beta},
                 {"residual", s.residual}, {"ok", s.ok}};
        if (!s.ok) row["error"] = s.error;
        result.push_back(row);
        t.add_row({format_double17(s.beta), format_double17(s.u1),
                   format_double17(s.phi_prime_inf_beta), format_double17(s.residual),
                   s.ok ? "1" : "0"});
    }
    emit(cfg, result, t);
    return 0;
}

int run_condition(const RunConfig& cfg) {
    const auto pair = build_pair(cfg);
    const auto [alo, ahi] = cfg.alpha_interval.value_or(std::make_pair(0.5, 2.0));
    const int samples = cfg.samples > 0 ? cfg.samples : 33;

    // Chebyshev-spaced alpha values, emitted in canonical (n, alpha) order.
    std::vector<double> alphas(samples);
    for (int j = 0; j < samples; ++j) {
        const double c = std::cos(std::numbers::pi * j / (samples - 1));
        alphas[j] = 0.5 * (alo + ahi) + 0.5 * (ahi - alo) * c;
    }
    std::sort(alphas.begin(), alphas.end());

    std::vector<int> ns = cfg.n_list;
    std::sort(ns.begin(), ns.end());

    json result = json::array();
    Table t;
    t.columns = {"n", "alpha", "u1", "phi_prime_inf", "phi_prime_inf_beta"};
    for (int n : ns) {
        const MeshConfig mesh(n);
        for (double alpha : alphas) {
            const ConditionSample s = condition_phi_prime(*pair, mesh, alpha, cfg.oracle_tol);
            result.push_back(json{{"n", n},
                                  {"alpha", s.alpha},
                                  {"u1", s.u1},
                                  {"phi_prime_inf", s.phi_prime_inf},
                                  {"phi_prime_inf_beta", s.phi_prime_inf_beta}});
            t.add_row({std::to_string(n), format_double17(s.alpha), format_double17(s.u1),
                       format_double17(s.phi_prime_inf), format_double17(s.phi_prime_inf_beta)});
        }
    }
    emit(cfg, result, t);
    return 0;
}

int run_dynamics(const RunConfig& cfg) {
    const auto pair = build_pair(cfg);
    const MeshConfig mesh(cfg.n_list.front());
    const SolveReport reference = continuation_solve(*pair, mesh, continuation_config(cfg));

    DynamicsConfig dc;
    dc.alpha = cfg.alpha;
    dc.dt = cfg.dt;
    dc.steady_tol = cfg.steady_tol;
    dc.t_max = cfg.t_max;

    const SolutionBounds box = solution_bounds(*pair, cfg.alpha);
    std::vector<double> constants;
    if (cfg.probes == 1) {
        constants.push_back(cfg.ic_constant.value_or(0.75 * g_inverse(*pair, cfg.alpha)));
    } else {
        // random constants inside the attraction basin of the positive
        // branch; the state is a threshold equilibrium, so constants below
        // about half the amplitude decay to the zero state instead
        std::mt19937_64 rng(cfg.seed);
        std::uniform_real_distribution<double> draw(0.65 * box.un_upper, 0.95 * box.un_upper);
        for (int i = 0; i < cfg.probes; ++i) constants.push_back(draw(rng));
    }

    json result = json::array();
    Table t;
    t.columns = {"probe", "ic", "converged", "t_final", "steps", "final_residual", "diff_inf"};
    for (size_t i = 0; i < constants.size(); ++i) {
        const std::vector<double> u0(mesh.n, constants[i]);
        const IntegrationResult r = integrate_to_steady(*pair, mesh, dc, u0);
        double diff = 0.0;
        for (int k = 0; k < mesh.n; ++k)
            diff = std::max(diff, std::abs(r.u[k] - reference.u[k]));
        result.push_back(json{{"probe", i},
                              {"ic", constants[i]},
                              {"converged", r.converged},
                              {"t_final", r.t_final},
                              {"steps", r.steps},
                              {"final_residual", r.final_residual},
                              {"diff_inf", diff}});
        t.add_row({std::to_string(i), format_double17(constants[i]), r.converged ? "1" : "0",
                   format_double17(r.t_final), std::to_string(r.steps),
                   format_double17(r.final_residual), format_double17(diff)});
    }
    emit(cfg, result, t);
    return 0;
}

int run_convergence_table(const RunConfig& cfg) {
    const auto pair = build_pair(cfg);

    json result = json::array();
    Table t;
    t.columns = {"n", "n2", "n4", "u1_n", "u1_n2", "u1_n4", "diff12", "diff23", "ratio"};
    for (int n : cfg.n_list) {
        const int n2 = 2 * n - 1;
        const int n4 = 4 * n - 3;
        const double a = solve_u1_oracle(*pair, MeshConfig(n), cfg.alpha, cfg.oracle_tol);
        const double b = solve_u1_oracle(*pair, MeshConfig(n2), cfg.alpha, cfg.oracle_tol);
        const double c = solve_u1_oracle(*pair, MeshConfig(n4), cfg.alpha, cfg.oracle_tol);
        const double diff12 = a - b;
        const double diff23 = b - c;
        const double ratio = diff12 / diff23;
        result.push_back(json{{"n", n},
                              {"n2", n2},
                              {"n4", n4},
                              {"u1_n", a},
                              {"u1_n2", b},
                              {"u1_n4", c},
                              {"diff12", diff12},
                              {"diff23", diff23},
                              {"ratio", ratio}});
        t.add_row({std::to_string(n), std::to_string(n2), std::to_string(n4), format_double17(a),
                   format_double17(b), format_double17(c), format_double17(diff12),
                   format_double17(diff23), format_double17(ratio)});
    }
    emit(cfg, result, t);
    return 0;
}

int run_constants(const RunConfig& cfg) {
    const auto pair = build_pair(cfg);
    const MeshConfig mesh(cfg.n_list.front());
    const TheoreticalConstants k = theoretical_schedule(*pair, mesh, continuation_config(cfg));

    json result;
    result["beta_lo"] = k.beta_lo;
    result["beta_hi"] = k.beta_hi;
    result["epsilon"] = k.epsilon;
    result["rho_star"] = k.rho_star;
    result["theta_star"] = k.theta_star;
    result["eta_star"] = k.eta_star;
    result["delta"] = k.delta;
    result["kappa1"] = k.kappa1;
    result["c"] = k.c;
    result["c_hat"] = k.c_hat;
    result["N"] = k.n_nodes;
    result["k0"] = k.k0;
    result["beta_grid"] = k.beta_grid;
    result["delta_grid"] = k.delta_grid;
    result["c_grid"] = k.c_grid;

    Table t;
    t.columns = {"key", "value"};
    t.add_row({"beta_lo", format_double17(k.beta_lo)});
    t.add_row({"beta_hi", format_double17(k.beta_hi)});
    t.add_row({"epsilon", format_double17(k.epsilon)});
    t.add_row({"rho_star", format_double17(k.rho_star)});
    t.add_row({"theta_star", format_double17(k.theta_star)});
    t.add_row({"eta_star", format_double17(k.eta_star)});
    t.add_row({"delta", format_double17(k.delta)});
    t.add_row({"kappa1", format_double17(k.kappa1)});
    t.add_row({"c", format_double17(k.c)});
    t.add_row({"c_hat", format_double17(k.c_hat)});
    t.add_row({"N", std::to_string(k.n_nodes)});
    t.add_row({"k0", std::to_string(k.k0)});
    emit(cfg, result, t);
    return 0;
}

} // namespace

int run(const RunConfig& cfg) {
    if (cfg.command == "solve") return run_solve(cfg);
    if (cfg.command == "oracle") return run_oracle(cfg);
    if (cfg.command == "path") return run_path(cfg);
    if (cfg.command == "condition") return run_condition(cfg);
    if (cfg.command == "dynamics") return run_dynamics(cfg);
    if (cfg.command == "convergence-table") return run_convergence_table(cfg);
    if (cfg.command == "constants") return run_constants(cfg);
    throw ConfigError("unknown command '" + cfg.command + "'");
}

} // namespace rdsteady::cli
