#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "epicurv/dynamics.hpp"
#include "epicurv/reduction.hpp"

namespace epicurv {

// One JSON document drives a run; flat keys mirror the solver types.
struct RunConfig {
    std::string command;  // solve | sweep | simulate | verify | curve

    double A = 1.0, gamma = 2.0, A1 = 0.0, gamma1 = 0.0;

    std::optional<double> eps;
    std::vector<double> eps_list;
    long eps_num = 0, eps_den = 0;  // rational eps for curve emission
    double rho = 0.0;               // curve command; 0 means leading order

    SolverConfig solver;
    SimConfig sim;

    int dim = 2;  // simulate: planar (v0, w0) or spatial (q0, qd0, mass, charge)
    std::array<double, 3> q0{1.0, 0.0, 0.0};
    std::array<double, 3> qd0{0.0, 1.0, 0.0};
    double mass = 1.0, charge = -1.0;

    double slow_revolutions = 1.0;  // verify horizon
    bool deviation = true;

    int samples = 4096;  // curve emission
    double span = 0.0;   // fast-time span for irrational eps
    std::string phi_from;  // solve output to re-emit as a curve

    std::string output_path;
    std::string format = "json";  // json | csv
    int jobs = 1;
    unsigned long seed = 0;  // reserved for test harnesses

    void validate() const;
};

RunConfig parse_config_text(const std::string& text);
RunConfig parse_config_file(const std::string& path);

// JSON document equivalent to the parsed configuration;
// parse(serialize(cfg)) reproduces cfg.
std::string serialize_config(const RunConfig& cfg);

// Dispatches the configured command and writes the result file.
// Returns 0 on success, 1 on validation errors, 2 on solver failures
// (a diagnostic payload is written in that case as well).
int run(const RunConfig& cfg);

// Fast-time samples of the ansatz (phi == nullptr) or solved curve, written
// as t,x,y. A rational eps = eps_num/eps_den selects the full closure period;
// otherwise span must be positive.
void emit_curve(const AnsatzParams& p, const PeriodicScalar* phi, long eps_num, long eps_den,
                int samples, double span, const std::string& path, const std::string& format);

}  // namespace epicurv
