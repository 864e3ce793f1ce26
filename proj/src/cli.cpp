#include "epicurv/cli.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <numeric>
#include <sstream>

#include "json.hpp"

#include "epicurv/errors.hpp"

namespace epicurv {

using nlohmann::json;

namespace {

std::string format_g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

json phi_to_json(const PeriodicScalar& phi) {
    return json{{"mode_count", phi.mode_count()}, {"a0", phi.a0}, {"a", phi.a}, {"b", phi.b}};
}

PeriodicScalar phi_from_json(const json& j) {
    PeriodicScalar phi(j.at("mode_count").get<int>());
    phi.a0 = j.at("a0").get<double>();
    phi.a = j.at("a").get<std::vector<double>>();
    phi.b = j.at("b").get<std::vector<double>>();
    if (static_cast<int>(phi.a.size()) != phi.mode_count() || phi.a.size() != phi.b.size())
        throw ConfigError("phi: coefficient arrays do not match mode_count");
    return phi;
}

json solution_to_json(const RhoResult& r, const FieldModel& m) {
    return json{{"eps", r.sol.params.eps},
                {"rho_eps", r.rho_eps},
                {"lambda1", r.sol.lambda1},
                {"lambda2", r.sol.lambda2},
                {"iterations", r.sol.iterations},
                {"fix_residual", r.sol.fix_residual},
                {"eq_residual", r.sol.eq_residual},
                {"phi_c2", r.sol.phi_c2},
                {"phi", phi_to_json(r.sol.phi)},
                {"window", {r.window.lo, r.window.hi}},
                {"window_lambda1", {r.lambda_lo, r.lambda_hi}},
                {"bisection_steps", r.bisection_steps},
                {"field", {{"A", m.A}, {"gamma", m.gamma}, {"A1", m.A1}, {"gamma1", m.gamma1}}}};
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot write to '" + path + "'");
    out << text;
}

void write_json(const std::string& path, const json& doc) { write_text(path, doc.dump(2) + "\n"); }

void write_trajectory_csv(const std::string& path, const Trajectory& tr) {
    std::ostringstream out;
    out << (tr.dim == 2 ? "t,x,y,vx,vy\n" : "t,x,y,z,vx,vy,vz\n");
    for (size_t i = 0; i < tr.times.size(); ++i) {
        out << format_g17(tr.times[i]) << ',' << format_g17(tr.positions[i][0]) << ','
            << format_g17(tr.positions[i][1]);
        if (tr.dim == 3) out << ',' << format_g17(tr.positions[i][2]);
        out << ',' << format_g17(tr.velocities[i][0]) << ',' << format_g17(tr.velocities[i][1]);
        if (tr.dim == 3) out << ',' << format_g17(tr.velocities[i][2]);
        out << '\n';
    }
    write_text(path, out.str());
}

json trajectory_to_json(const Trajectory& tr) {
    json doc;
    doc["dim"] = tr.dim;
    doc["t"] = tr.times;
    json x = json::array(), y = json::array(), z = json::array();
    json vx = json::array(), vy = json::array(), vz = json::array();
    for (size_t i = 0; i < tr.times.size(); ++i) {
        x.push_back(tr.positions[i][0]);
        y.push_back(tr.positions[i][1]);
        vx.push_back(tr.velocities[i][0]);
        vy.push_back(tr.velocities[i][1]);
        if (tr.dim == 3) {
            z.push_back(tr.positions[i][2]);
            vz.push_back(tr.velocities[i][2]);
        }
    }
    doc["x"] = x;
    doc["y"] = y;
    doc["vx"] = vx;
    doc["vy"] = vy;
    if (tr.dim == 3) {
        doc["z"] = z;
        doc["vz"] = vz;
    }
    return doc;
}

template <class T>
void load_field(const json& j, const char* key, T& into) {
    if (j.contains(key)) into = j.at(key).get<T>();
}

}  // namespace

void RunConfig::validate() const {
    if (command != "solve" && command != "sweep" && command != "simulate" &&
        command != "verify" && command != "curve")
        throw ConfigError("config field 'command' must be one of solve|sweep|simulate|verify|curve");
    if (output_path.empty()) throw ConfigError("config field 'output_path' is required");
    if (format != "json" && format != "csv")
        throw ConfigError("config field 'format' must be json or csv");
    if (jobs < 1) throw ConfigError("config field 'jobs' must be positive");

    if (command == "solve" || command == "verify") {
        if (!eps) throw ConfigError("config field 'eps' is required for " + command);
    }
    if (command == "sweep" && eps_list.size() < 3)
        throw ConfigError("config field 'eps_list' needs at least 3 values for sweep");
    if (command == "simulate" && dim != 2 && dim != 3)
        throw ConfigError("config field 'dim' must be 2 or 3");
    if (command == "curve") {
        if (samples < 16) throw ConfigError("config field 'samples' must be at least 16");
        const bool rational = eps_num != 0 && eps_den != 0;
        if (!rational && !(span > 0.0) && phi_from.empty())
            throw ConfigError("curve: give rational eps via 'eps_num'/'eps_den' or a positive 'span'");
    }
}

RunConfig parse_config_text(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    RunConfig cfg;
    try {
        cfg.command = j.value("command", "");
        if (j.contains("field")) {
            const json& f = j.at("field");
            load_field(f, "A", cfg.A);
            load_field(f, "gamma", cfg.gamma);
            load_field(f, "A1", cfg.A1);
            load_field(f, "gamma1", cfg.gamma1);
        }
        if (j.contains("eps")) cfg.eps = j.at("eps").get<double>();
        load_field(j, "eps_list", cfg.eps_list);
        load_field(j, "eps_num", cfg.eps_num);
        load_field(j, "eps_den", cfg.eps_den);
        load_field(j, "rho", cfg.rho);
        if (j.contains("solver")) {
            const json& s = j.at("solver");
            load_field(s, "mode_count", cfg.solver.mode_count);
            load_field(s, "grid_count", cfg.solver.grid_count);
            load_field(s, "fix_tol", cfg.solver.fix_tol);
            load_field(s, "max_iter", cfg.solver.max_iter);
            load_field(s, "root_tol", cfg.solver.root_tol);
            load_field(s, "a1_factor", cfg.solver.a1_factor);
            load_field(s, "a2_factor", cfg.solver.a2_factor);
            load_field(s, "delta", cfg.solver.delta);
        }
        if (j.contains("sim")) {
            const json& s = j.at("sim");
            load_field(s, "method", cfg.sim.method);
            load_field(s, "step", cfg.sim.step);
            load_field(s, "rel_tol", cfg.sim.rel_tol);
            load_field(s, "abs_tol", cfg.sim.abs_tol);
            load_field(s, "duration", cfg.sim.duration);
        }
        load_field(j, "dim", cfg.dim);
        if (j.contains("v0")) {
            auto v = j.at("v0").get<std::vector<double>>();
            if (v.size() < 2) throw ConfigError("config field 'v0' needs two components");
            cfg.q0 = {v[0], v[1], 0.0};
        }
        if (j.contains("w0")) {
            auto v = j.at("w0").get<std::vector<double>>();
            if (v.size() < 2) throw ConfigError("config field 'w0' needs two components");
            cfg.qd0 = {v[0], v[1], 0.0};
        }
        if (j.contains("q0")) {
            auto v = j.at("q0").get<std::vector<double>>();
            if (v.size() != 3) throw ConfigError("config field 'q0' needs three components");
            cfg.q0 = {v[0], v[1], v[2]};
        }
        if (j.contains("qd0")) {
            auto v = j.at("qd0").get<std::vector<double>>();
            if (v.size() != 3) throw ConfigError("config field 'qd0' needs three components");
            cfg.qd0 = {v[0], v[1], v[2]};
        }
        load_field(j, "mass", cfg.mass);
        load_field(j, "charge", cfg.charge);
        load_field(j, "slow_revolutions", cfg.slow_revolutions);
        load_field(j, "deviation", cfg.deviation);
        load_field(j, "samples", cfg.samples);
        load_field(j, "span", cfg.span);
        load_field(j, "phi_from", cfg.phi_from);
        load_field(j, "output_path", cfg.output_path);
        load_field(j, "format", cfg.format);
        load_field(j, "jobs", cfg.jobs);
        load_field(j, "seed", cfg.seed);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config field has the wrong type: ") + e.what());
    }
    return cfg;
}

RunConfig parse_config_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot read config file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str());
}

std::string serialize_config(const RunConfig& cfg) {
    json j;
    j["command"] = cfg.command;
    j["field"] = {{"A", cfg.A}, {"gamma", cfg.gamma}, {"A1", cfg.A1}, {"gamma1", cfg.gamma1}};
    if (cfg.eps) j["eps"] = *cfg.eps;
    if (!cfg.eps_list.empty()) j["eps_list"] = cfg.eps_list;
    if (cfg.eps_num != 0) j["eps_num"] = cfg.eps_num;
    if (cfg.eps_den != 0) j["eps_den"] = cfg.eps_den;
    if (cfg.rho != 0.0) j["rho"] = cfg.rho;
    j["solver"] = {{"mode_count", cfg.solver.mode_count}, {"grid_count", cfg.solver.grid_count},
                   {"fix_tol", cfg.solver.fix_tol},       {"max_iter", cfg.solver.max_iter},
                   {"root_tol", cfg.solver.root_tol},     {"a1_factor", cfg.solver.a1_factor},
                   {"a2_factor", cfg.solver.a2_factor},   {"delta", cfg.solver.delta}};
    j["sim"] = {{"method", cfg.sim.method},
                {"step", cfg.sim.step},
                {"rel_tol", cfg.sim.rel_tol},
                {"abs_tol", cfg.sim.abs_tol},
                {"duration", cfg.sim.duration}};
    j["dim"] = cfg.dim;
    j["q0"] = {cfg.q0[0], cfg.q0[1], cfg.q0[2]};
    j["qd0"] = {cfg.qd0[0], cfg.qd0[1], cfg.qd0[2]};
    j["mass"] = cfg.mass;
    j["charge"] = cfg.charge;
    j["slow_revolutions"] = cfg.slow_revolutions;
    j["deviation"] = cfg.deviation;
    j["samples"] = cfg.samples;
    if (cfg.span != 0.0) j["span"] = cfg.span;
    if (!cfg.phi_from.empty()) j["phi_from"] = cfg.phi_from;
    j["output_path"] = cfg.output_path;
    j["format"] = cfg.format;
    j["jobs"] = cfg.jobs;
    if (cfg.seed != 0) j["seed"] = cfg.seed;
    return j.dump(2) + "\n";
}

void emit_curve(const AnsatzParams& p, const PeriodicScalar* phi, long eps_num, long eps_den,
                int samples, double span, const std::string& path, const std::string& format) {
    if (samples < 16) throw ConfigError("emit_curve: samples must be at least 16");
    double total = span;
    if (eps_num != 0 && eps_den != 0) {
        const long g = std::gcd(std::abs(eps_num), std::abs(eps_den));
        total = kTwoPi * static_cast<double>(std::abs(eps_den) / g);
    }
    if (!(total > 0.0)) throw ConfigError("emit_curve: span must be positive");

    const double slow_rate = 1.0 - p.eps;
    std::optional<ScalarJet> sj;
    if (phi) sj.emplace(*phi);
    const auto point = [&](double tau) -> Vec2 {
        if (sj) return perturbed_point(p, *sj, slow_rate * tau).u;
        return std::polar(p.rho, p.eps * tau) + std::polar(1.0, tau);
    };

    std::vector<double> ts(samples), xs(samples), ys(samples);
    for (int k = 0; k < samples; ++k) {
        const double tau = total * k / (samples - 1);
        const Vec2 u = point(tau);
        ts[k] = tau;
        xs[k] = u.real();
        ys[k] = u.imag();
    }

    if (format == "csv") {
        std::ostringstream out;
        out << "t,x,y\n";
        for (int k = 0; k < samples; ++k)
            out << format_g17(ts[k]) << ',' << format_g17(xs[k]) << ',' << format_g17(ys[k])
                << '\n';
        write_text(path, out.str());
    } else {
        json doc{{"eps", p.eps}, {"rho", p.rho}, {"span", total},
                 {"t", ts},      {"x", xs},      {"y", ys}};
        if (phi) doc["phi"] = phi_to_json(*phi);
        write_json(path, doc);
    }
}

namespace {

int run_solve(const RunConfig& cfg, const FieldModel& model) {
    const RhoResult r = solve_rho(model, *cfg.eps, cfg.solver);
    write_json(cfg.output_path, solution_to_json(r, model));
    return 0;
}

int run_sweep(const RunConfig& cfg, const FieldModel& model) {
    ScalingReport rep;
    std::string error;
    int code = 0;
    try {
        rep = sweep_scaling(model, cfg.eps_list, cfg.solver, cfg.jobs);
    } catch (const SweepAborted& e) {
        rep = e.partial;
        error = e.what();
        code = 2;
    }

    std::ostringstream csv;
    csv << "eps,rho,phi_c2,lambda1,lambda2,eq_residual\n";
    for (size_t i = 0; i < rep.eps_values.size(); ++i)
        csv << format_g17(rep.eps_values[i]) << ',' << format_g17(rep.rho_values[i]) << ','
            << format_g17(rep.phi_norms[i]) << ',' << format_g17(rep.lambda1_values[i]) << ','
            << format_g17(rep.lambda2_values[i]) << ',' << format_g17(rep.eq_residuals[i])
            << '\n';
    write_text(cfg.output_path, csv.str());

    json meta{{"fitted_rho_slope", rep.fitted_rho_slope},
              {"fitted_phi_slope", rep.fitted_phi_slope},
              {"eps", rep.eps_values},
              {"rho", rep.rho_values},
              {"phi_c2", rep.phi_norms}};
    if (!error.empty()) meta["error"] = error;
    write_json(cfg.output_path + ".meta.json", meta);
    return code;
}

int run_simulate(const RunConfig& cfg, const FieldModel& model) {
    Trajectory tr;
    if (cfg.dim == 2) {
        tr = integrate_planar(model, Vec2(cfg.q0[0], cfg.q0[1]), Vec2(cfg.qd0[0], cfg.qd0[1]),
                              cfg.sim);
    } else {
        tr = integrate_lorentz3d(model, cfg.q0, cfg.qd0, cfg.mass, cfg.charge, cfg.sim);
    }
    if (cfg.format == "csv")
        write_trajectory_csv(cfg.output_path, tr);
    else
        write_json(cfg.output_path, trajectory_to_json(tr));
    return 0;
}

int run_verify(const RunConfig& cfg, const FieldModel& model) {
    const RhoResult r = solve_rho(model, *cfg.eps, cfg.solver);
    VerifyOptions opts;
    opts.curve_time_span =
        cfg.slow_revolutions * kTwoPi * (1.0 - r.sol.params.eps) / std::abs(r.sol.params.eps);
    opts.compute_deviation = cfg.deviation;
    opts.grid_count = cfg.solver.grid_count;
    const VerifyReport rep = verify_solution(model, r.sol, cfg.sim, opts);

    json doc = solution_to_json(r, model);
    doc["verify"] = json{{"curve_time_span", rep.curve_time_span},
                         {"arclength_span", rep.arclength_span},
                         {"max_deviation", rep.max_deviation},
                         {"speed_drift", rep.speed_drift},
                         {"min_radius", rep.min_radius},
                         {"max_radius", rep.max_radius},
                         {"annulus_margin_inner", rep.annulus_margin_inner},
                         {"annulus_margin_outer", rep.annulus_margin_outer}};
    write_json(cfg.output_path, doc);
    return 0;
}

int run_curve(const RunConfig& cfg) {
    if (!cfg.phi_from.empty()) {
        std::ifstream in(cfg.phi_from, std::ios::binary);
        if (!in) throw ConfigError("cannot read solution file '" + cfg.phi_from + "'");
        json doc;
        try {
            in >> doc;
        } catch (const json::exception& e) {
            throw ConfigError(std::string("solution file is not valid JSON: ") + e.what());
        }
        const AnsatzParams p(doc.at("eps").get<double>(), doc.at("rho_eps").get<double>());
        const PeriodicScalar phi = phi_from_json(doc.at("phi"));
        emit_curve(p, &phi, cfg.eps_num, cfg.eps_den, cfg.samples, cfg.span, cfg.output_path,
                   cfg.format);
        return 0;
    }
    double eps = cfg.eps.value_or(0.0);
    if (cfg.eps_num != 0 && cfg.eps_den != 0)
        eps = static_cast<double>(cfg.eps_num) / static_cast<double>(cfg.eps_den);
    if (eps == 0.0) throw ConfigError("curve: eps (or eps_num/eps_den) is required");
    if (!(cfg.rho > 0.0)) throw ConfigError("curve: rho is required");
    const AnsatzParams p(eps, cfg.rho);
    emit_curve(p, nullptr, cfg.eps_num, cfg.eps_den, cfg.samples, cfg.span, cfg.output_path,
               cfg.format);
    return 0;
}

}  // namespace

int run(const RunConfig& cfg) {
    try {
        cfg.validate();
        if (cfg.command == "curve") return run_curve(cfg);
        const FieldModel model(cfg.A, cfg.gamma, cfg.A1, cfg.gamma1);
        if (cfg.command == "solve") return run_solve(cfg, model);
        if (cfg.command == "sweep") return run_sweep(cfg, model);
        if (cfg.command == "simulate") return run_simulate(cfg, model);
        return run_verify(cfg, model);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const SolverError& e) {
        std::cerr << "solver error: " << e.what() << "\n";
        if (!cfg.output_path.empty()) {
            try {
                write_json(cfg.output_path,
                           json{{"error", e.what()}, {"command", cfg.command}});
            } catch (...) {
                // diagnostics are best effort; the exit code carries the failure
            }
        }
        return 2;
    }
}

}  // namespace epicurv
